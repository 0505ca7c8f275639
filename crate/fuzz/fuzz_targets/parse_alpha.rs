#![no_main]

use libfuzzer_sys::fuzz_target;
use noncoherent::formats::parse_alpha;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_alpha(s);
    }
});
