#![no_main]

use libfuzzer_sys::fuzz_target;
use zperiod::duality::{dualize, SymmetricBigraph};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(sb) = SymmetricBigraph::from_json(text) {
        assert_eq!(SymmetricBigraph::from_json(&sb.to_json()).expect("own output parses"), sb);
        let _ = dualize(&sb);
    }
});
