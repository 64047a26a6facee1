#![no_main]

use libfuzzer_sys::fuzz_target;
use zperiod::ade::is_admissible;
use zperiod::graph::Bigraph;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = Bigraph::from_json(text) {
        let again = Bigraph::from_json(&g.to_json()).expect("own output parses");
        assert_eq!(again, g);
        if g.len() <= 64 {
            let _ = is_admissible(g.as_quiver());
        }
    }
});
