#![no_main]

use libfuzzer_sys::fuzz_target;
use zperiod::assign::{format_assignment, parse_assignment};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let ids: Vec<String> = ["a", "b", "c", "r1c1", "e1+"].iter().map(|s| s.to_string()).collect();
    if let Ok(v) = parse_assignment(text, &ids) {
        assert_eq!(parse_assignment(&format_assignment(&v, &ids), &ids).expect("own output parses"), v);
    }
});
