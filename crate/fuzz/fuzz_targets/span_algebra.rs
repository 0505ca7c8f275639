#![no_main]

use libfuzzer_sys::fuzz_target;
use noncoherent::formats::parse_matrices;
use noncoherent::Subspace;

// Row spaces of two parsed blocks must satisfy the dimension identity.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(ms) = parse_matrices(s) else { return };
    if ms.len() < 2 {
        return;
    }
    let (a, b) = (Subspace::span(&ms[0]), Subspace::span(&ms[1]));
    if let (Ok(sum), Ok(inter)) = (a.sum(&b), a.intersection(&b)) {
        assert_eq!(sum.dim() + inter.dim(), a.dim() + b.dim());
    }
});
