#![no_main]

use libfuzzer_sys::fuzz_target;
use noncoherent::formats::{parse_matrices, parse_matrix};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_matrix(s) {
        let (r, pivots) = m.rref_with_pivots();
        assert_eq!(r.rows(), m.rows());
        assert!(pivots.len() <= m.rows().min(m.cols()));
    }
    let _ = parse_matrices(s);
});
