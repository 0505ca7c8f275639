//! Exact and log-domain subspace counting.
//!
//! Every count is returned as a [`QCount`] carrying the exact integer and an
//! independently accumulated log2. The log2 is a sum of `log2(q^a - q^b)`
//! terms, so it stays accurate for field sizes whose exact counts would
//! overflow a double. Arguments outside the valid range yield a zero count.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

/// A nonnegative integer count with its log2 (`-inf` for zero).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QCount {
    #[serde(serialize_with = "ser_decimal")]
    pub exact: BigUint,
    pub log2: f64,
}

fn ser_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

impl QCount {
    pub fn zero() -> Self {
        QCount { exact: BigUint::zero(), log2: f64::NEG_INFINITY }
    }

    pub fn one() -> Self {
        QCount { exact: BigUint::one(), log2: 0.0 }
    }

    pub fn is_zero(&self) -> bool {
        self.exact.is_zero()
    }

    fn mul(&self, o: &QCount) -> QCount {
        QCount { exact: &self.exact * &o.exact, log2: self.log2 + o.log2 }
    }

    /// Exact division; the caller guarantees divisibility.
    fn div_exact(&self, o: &QCount) -> QCount {
        debug_assert!((&self.exact % &o.exact).is_zero());
        QCount { exact: &self.exact / &o.exact, log2: self.log2 - o.log2 }
    }

    fn add(&self, o: &QCount) -> QCount {
        QCount { exact: &self.exact + &o.exact, log2: log2_add(self.log2, o.log2) }
    }
}

/// log2(2^a + 2^b) without overflow.
pub fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

/// log2 of a sum of `2^x` terms; `-inf` for an empty or all-zero sum.
pub fn log2_sum_exp2(terms: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = terms.into_iter().filter(|x| *x != f64::NEG_INFINITY).collect();
    let Some(max) = v.iter().copied().reduce(f64::max) else {
        return f64::NEG_INFINITY;
    };
    max + v.iter().map(|x| (x - max).exp2()).sum::<f64>().log2()
}

/// log2(q^a - q^b) for a > b, given log2 q.
pub fn log2_qdiff(a: u32, b: u32, log2q: f64) -> f64 {
    debug_assert!(a > b);
    let gap = (b as f64 - a as f64) * log2q;
    a as f64 * log2q + (-gap.exp2()).ln_1p() / std::f64::consts::LN_2
}

/// The factor `q^a - q^b` as a QCount (zero when a == b).
fn qdiff(q: u64, a: u32, b: u32) -> QCount {
    if a <= b {
        return QCount::zero();
    }
    let qb = BigUint::from(q);
    QCount { exact: qb.pow(a) - qb.pow(b), log2: log2_qdiff(a, b, (q as f64).log2()) }
}

fn product(factors: impl IntoIterator<Item = QCount>) -> QCount {
    factors.into_iter().fold(QCount::one(), |acc, f| acc.mul(&f))
}

/// Gaussian coefficient [T d]_q: the number of d-dimensional subspaces of F_q^T.
pub fn gaussian(t: u32, d: u32, q: u64) -> QCount {
    if d > t {
        return QCount::zero();
    }
    let d = d.min(t - d);
    let num = product((0..d).map(|i| qdiff(q, t - i, 0)));
    let den = product((0..d).map(|i| qdiff(q, d - i, 0)));
    num.div_exact(&den)
}

/// ψ(n, d): the number of n×T matrices whose rows span a fixed d-dimensional subspace.
pub fn psi(n: u32, d: u32, q: u64) -> QCount {
    if d > n {
        return QCount::zero();
    }
    product((0..d).map(|i| qdiff(q, n, i)))
}

/// |Sp(T, m)|: subspaces of F_q^T of dimension at most m.
pub fn sphere_size(t: u32, m: u32, q: u64) -> QCount {
    (0..=m.min(t)).fold(QCount::zero(), |acc, d| acc.add(&gaussian(t, d, q)))
}

/// Number of d2-dimensional subspaces meeting a fixed d1-dimensional one in
/// exactly d12 dimensions.
pub fn intersect_count(t: u32, d1: u32, d2: u32, d12: u32, q: u64) -> QCount {
    if d12 > d1.min(d2) || d1 > t || d2 > t {
        return QCount::zero();
    }
    let k = d2 - d12;
    if d1 + k > t {
        return QCount::zero();
    }
    let num = product((0..k).map(|i| qdiff(q, t, d1 + i)));
    let den = product((0..k).map(|i| qdiff(q, d2, d12 + i)));
    gaussian(d1, d12, q).mul(&num.div_exact(&den))
}

/// Leading exponent of [`intersect_count`] as q grows.
pub fn intersect_exponent(t: u32, d1: u32, d2: u32, d12: u32) -> i64 {
    let (t, d1, d2, d12) = (t as i64, d1 as i64, d2 as i64, d12 as i64);
    d12 * (d1 - d12) + (d2 - d12) * (t - d2)
}

/// |A(π1, π2)|: d2-dimensional π2' with π1 + π2' = π1 + π2, where the pair
/// has dimensions (d1, d2) and intersection dimension d12.
///
/// Every such π2' lies inside the sum π (dimension d = d1 + d2 - d12) and
/// meets π1 in exactly d12 dimensions, so this is [`intersect_count`] with
/// the ambient space replaced by π.
pub fn samesum_count(t: u32, d1: u32, d2: u32, d12: u32, q: u64) -> QCount {
    if d12 > d1.min(d2) || d1 > t || d2 > t {
        return QCount::zero();
    }
    let d = d1 + d2 - d12;
    if d > t {
        return QCount::zero();
    }
    intersect_count(d, d1, d2, d12, q)
}

/// Leading exponent of [`samesum_count`] as q grows.
pub fn samesum_exponent(d1: u32, d2: u32, d12: u32) -> i64 {
    d2 as i64 * (d1 as i64 - d12 as i64)
}

/// Number of dx-dimensional subspaces containing a fixed dy-dimensional one.
pub fn contain_count(t: u32, dx: u32, dy: u32, q: u64) -> QCount {
    if dy > dx || dx > t {
        return QCount::zero();
    }
    gaussian(t - dy, dx - dy, q)
}

/// log2 of the Gaussian coefficient for real-valued q (no exact integer).
pub fn log2_gaussian(t: u32, d: u32, log2q: f64) -> f64 {
    if d > t {
        return f64::NEG_INFINITY;
    }
    let d = d.min(t - d);
    (0..d).map(|i| log2_qdiff(t - i, 0, log2q) - log2_qdiff(d - i, 0, log2q)).sum()
}

/// log2 ψ(n, d) for real-valued q.
pub fn log2_psi(n: u32, d: u32, log2q: f64) -> f64 {
    if d > n {
        return f64::NEG_INFINITY;
    }
    (0..d).map(|i| log2_qdiff(n, i, log2q)).sum()
}
