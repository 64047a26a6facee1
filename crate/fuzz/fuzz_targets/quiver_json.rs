#![no_main]

use libfuzzer_sys::fuzz_target;
use zperiod::graph::{parse_graph_json, BipartiteQuiver};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_graph_json(text) {
        let again = BipartiteQuiver::from_quiver_json(&q.to_quiver_json()).expect("own output parses");
        assert_eq!(again.to_quiver_json(), q.to_quiver_json());
    }
});
