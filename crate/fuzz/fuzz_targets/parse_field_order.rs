#![no_main]

use libfuzzer_sys::fuzz_target;
use noncoherent::formats::{parse_field_order, MAX_PARAM_Q};
use noncoherent::FieldSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_field_order(s, MAX_PARAM_Q) {
        if q <= 256 {
            assert!(FieldSpec::from_order(q).is_ok());
        }
    }
});
