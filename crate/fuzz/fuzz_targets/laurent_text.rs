#![no_main]

use libfuzzer_sys::fuzz_target;
use zperiod::laurent::LaurentPoly;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let ids: Vec<String> = ["a", "b", "c", "r1c1", "b'"].iter().map(|s| s.to_string()).collect();
    if let Ok(p) = LaurentPoly::parse(text, &ids) {
        assert_eq!(LaurentPoly::parse(&p.to_text(&ids), &ids).expect("own output parses"), p);
    }
});
