//! Arithmetic in GF(q) for prime powers q = p^k ≤ 256.
//!
//! Elements are encoded as integers in `[0, q)`: the base-p digits of the
//! encoding are the coefficients of the polynomial representative, lowest
//! degree first. For `k > 1` the field is GF(p)[x] / (r(x)) where r is the
//! lexicographically smallest monic irreducible of degree k (smallest
//! encoding of its lower coefficients):
//!
//! | q   | reduction polynomial |
//! |-----|----------------------|
//! | 4   | x^2 + x + 1          |
//! | 8   | x^3 + x + 1          |
//! | 9   | x^2 + 1              |
//! | 16  | x^4 + x + 1          |
//! | 25  | x^2 + 2              |
//! | 27  | x^3 + 2x + 1         |
//! | 32  | x^5 + x^2 + 1        |
//! | 49  | x^2 + 1              |
//! | 64  | x^6 + x + 1          |
//! | 81  | x^4 + x + 2          |
//! | 121 | x^2 + 1              |
//! | 125 | x^3 + x + 1          |
//! | 128 | x^7 + x + 1          |
//! | 169 | x^2 + 2              |
//! | 243 | x^5 + 2x + 1         |
//! | 256 | x^8 + x^4 + x^3 + x + 1 |
//!
//! All tables are built once at construction; a [`FieldSpec`] is an
//! immutable, cheaply clonable handle.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} exceeds {MAX_ORDER}")]
    TooLarge(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("element {value} is not in GF({q})")]
    OutOfRange { value: u32, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields: GF({0}) and GF({1})")]
    FieldMismatch(u32, u32),
}

/// An element of some GF(q), stored as its integer encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElem(pub u8);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn value(self) -> u32 {
        self.0 as u32
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Binary / unary operations accepted by [`FieldSpec::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

struct Tables {
    p: u32,
    k: u32,
    q: u32,
    /// Coefficients r_0..r_{k-1} of the monic reduction polynomial (empty for k = 1).
    reduction: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    exp: Vec<u8>,
    log: Vec<u8>,
}

/// A finite field GF(p^k) with precomputed arithmetic tables.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.inner.q == other.inner.q
    }
}

impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.q.hash(state)
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.inner.q)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Factor `q` as `p^k`, or `None` if q is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        // q itself is prime
        return Some((q, 1));
    }
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

pub fn is_prime_power(q: u64) -> bool {
    prime_power(q).is_some()
}

// Polynomials over GF(p) as little-endian coefficient vectors.
fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let b = poly_trim(b.to_vec());
    let mut r = poly_trim(a.to_vec());
    let lead = *b.last().expect("nonzero divisor");
    let lead_inv = mod_inv(lead, p);
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().copied().unwrap() * lead_inv % p;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * bi % p) % p;
        }
        r = poly_trim(r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    (1..p).find(|&x| a * x % p == 1).expect("unit mod p")
}

fn digits(mut v: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(v % p);
        v /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn monic(lower: u32, p: u32, deg: u32) -> Vec<u32> {
    let mut c = digits(lower, p, deg as usize);
    c.push(1);
    c
}

/// Irreducibility by trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = (f.len() - 1) as u32;
    for d in 1..=deg / 2 {
        for lower in 0..p.pow(d) {
            let g = monic(lower, p, d);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The fixed reduction polynomial for GF(p^k): lower coefficients of the
/// monic irreducible with the smallest encoding.
pub fn reduction_polynomial(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return Vec::new();
    }
    (0..p.pow(k))
        .map(|lower| monic(lower, p, k))
        .find(|f| is_irreducible(f, p))
        .map(|mut f| {
            f.pop();
            f
        })
        .expect("an irreducible polynomial of every degree exists")
}

impl FieldSpec {
    /// Build GF(p^k).
    pub fn new(p: u32, k: u32) -> Result<Self, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(FieldError::TooLarge(q));
        }
        let q = q as u32;
        let reduction = reduction_polynomial(p, k);
        let mut modulus = reduction.clone();
        modulus.push(1);

        let n = q as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..q {
            let da = digits(a, p, k as usize);
            for b in 0..q {
                let db = digits(b, p, k as usize);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s, p) as u8;

                let prod = if k == 1 {
                    a * b % p
                } else {
                    let mut c = vec![0u32; 2 * k as usize];
                    for (i, x) in da.iter().enumerate() {
                        for (j, y) in db.iter().enumerate() {
                            c[i + j] = (c[i + j] + x * y) % p;
                        }
                    }
                    let mut r = poly_rem(&c, &modulus, p);
                    r.resize(k as usize, 0);
                    undigits(&r, p)
                };
                mul[(a * q + b) as usize] = prod as u8;
            }
        }
        let neg: Vec<u8> = (0..q)
            .map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).unwrap() as u8)
            .collect();
        let mut inv = vec![0u8; n];
        for a in 1..q {
            inv[a as usize] = (1..q).find(|&b| mul[(a * q + b) as usize] == 1).unwrap() as u8;
        }

        // Discrete log tables over the smallest primitive element.
        let order_of = |g: u32| {
            let mut x = g;
            let mut ord = 1;
            while x != 1 {
                x = mul[(x * q + g) as usize] as u32;
                ord += 1;
            }
            ord
        };
        let gen = (1..q).find(|&g| order_of(g) == q - 1).unwrap_or(1);
        let mut exp = vec![0u8; n.saturating_sub(1).max(1)];
        let mut log = vec![0u8; n];
        let mut x = 1u32;
        for i in 0..q - 1 {
            exp[i as usize] = x as u8;
            log[x as usize] = i as u8;
            x = mul[(x * q + gen) as usize] as u32;
        }

        Ok(FieldSpec {
            inner: Arc::new(Tables { p, k, q, reduction, add, mul, neg, inv, exp, log }),
        })
    }

    /// Build the field of order `q`, factoring it into `p^k`.
    pub fn from_order(q: u64) -> Result<Self, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q > MAX_ORDER as u64 {
            return Err(FieldError::TooLarge(q));
        }
        Self::new(p as u32, k)
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.k
    }

    pub fn order(&self) -> u32 {
        self.inner.q
    }

    /// Lower coefficients of the monic reduction polynomial (empty for prime fields).
    pub fn reduction_polynomial(&self) -> &[u32] {
        &self.inner.reduction
    }

    /// Discrete exponent table `exp[i] = g^i` for the smallest primitive element g.
    pub fn exp_table(&self) -> &[u8] {
        &self.inner.exp
    }

    pub fn log_table(&self) -> &[u8] {
        &self.inner.log
    }

    pub fn elem(&self, value: u32) -> Result<FieldElem, FieldError> {
        if value >= self.inner.q {
            Err(FieldError::OutOfRange { value, q: self.inner.q })
        } else {
            Ok(FieldElem(value as u8))
        }
    }

    fn check(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        if a.value() < self.inner.q {
            Ok(a)
        } else {
            Err(FieldError::OutOfRange { value: a.value(), q: self.inner.q })
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.inner.add[a.0 as usize * self.inner.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.inner.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.inner.mul[a.0 as usize * self.inner.q as usize + b.0 as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(FieldElem(self.inner.inv[a.0 as usize]))
        }
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Checked entry point: validates both operands against this field.
    /// Unary operations ignore `b`.
    pub fn apply(&self, op: FieldOp, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        let a = self.check(a)?;
        match op {
            FieldOp::Neg => Ok(self.neg(a)),
            FieldOp::Inv => self.inv(a),
            _ => {
                let b = self.check(b)?;
                match op {
                    FieldOp::Add => Ok(self.add(a, b)),
                    FieldOp::Sub => Ok(self.sub(a, b)),
                    FieldOp::Mul => Ok(self.mul(a, b)),
                    FieldOp::Div => self.div(a, b),
                    FieldOp::Neg | FieldOp::Inv => unreachable!(),
                }
            }
        }
    }

    /// Errors unless `other` is the same field.
    pub fn ensure_same(&self, other: &FieldSpec) -> Result<(), FieldError> {
        if self == other {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch(self.order(), other.order()))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.inner.q).map(|v| FieldElem(v as u8))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

    #[test]
    fn gf2_add_is_xor() {
        let f = FieldSpec::new(2, 1).unwrap();
        for a in 0..2u8 {
            for b in 0..2u8 {
                assert_eq!(f.add(FieldElem(a), FieldElem(b)), FieldElem(a ^ b));
            }
        }
    }

    #[test]
    fn gf4_uses_x2_x_1() {
        let f = FieldSpec::new(2, 2).unwrap();
        assert_eq!(f.reduction_polynomial(), &[1, 1]);
        // x * x = x + 1
        assert_eq!(f.mul(FieldElem(2), FieldElem(2)), FieldElem(3));
    }

    #[test]
    // Mirrors the table in docs/fields.md.
    fn reduction_polynomials_match_table() {
        let cases: &[(u32, u32, &[u32])] = &[
            (2, 2, &[1, 1]),
            (2, 3, &[1, 1, 0]),
            (2, 4, &[1, 1, 0, 0]),
            (2, 5, &[1, 0, 1, 0, 0]),
            (2, 6, &[1, 1, 0, 0, 0, 0]),
            (2, 7, &[1, 1, 0, 0, 0, 0, 0]),
            (2, 8, &[1, 1, 0, 1, 1, 0, 0, 0]),
            (3, 2, &[1, 0]),
            (3, 3, &[1, 2, 0]),
            (3, 4, &[2, 1, 0, 0]),
            (3, 5, &[1, 2, 0, 0, 0]),
            (5, 2, &[2, 0]),
            (5, 3, &[1, 1, 0]),
            (7, 2, &[1, 0]),
            (11, 2, &[1, 0]),
            (13, 2, &[2, 0]),
        ];
        for &(p, k, poly) in cases {
            assert_eq!(reduction_polynomial(p, k), poly, "GF({p}^{k})");
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldSpec::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(FieldSpec::new(2, 9).unwrap_err(), FieldError::TooLarge(512));
        assert_eq!(FieldSpec::from_order(6).unwrap_err(), FieldError::NotPrimePower(6));
        assert!(FieldSpec::from_order(257).is_err());
    }

    #[test]
    fn gf5_product() {
        let f = FieldSpec::from_order(5).unwrap();
        assert_eq!(f.mul(FieldElem(3), FieldElem(4)), FieldElem(2));
    }

    #[test]
    fn inverse_of_one_and_zero() {
        for q in SMALL {
            let f = FieldSpec::from_order(q).unwrap();
            assert_eq!(f.inv(FieldElem::ONE).unwrap(), FieldElem::ONE);
            assert_eq!(f.inv(FieldElem::ZERO), Err(FieldError::DivisionByZero));
        }
    }

    #[test]
    fn apply_rejects_foreign_elements() {
        let f = FieldSpec::from_order(3).unwrap();
        assert_eq!(
            f.apply(FieldOp::Add, FieldElem(1), FieldElem(5)),
            Err(FieldError::OutOfRange { value: 5, q: 3 })
        );
        assert_eq!(f.apply(FieldOp::Div, FieldElem(1), FieldElem(0)), Err(FieldError::DivisionByZero));
        assert_eq!(f.apply(FieldOp::Sub, FieldElem(1), FieldElem(2)).unwrap(), FieldElem(2));
        let g = FieldSpec::from_order(4).unwrap();
        assert!(f.ensure_same(&g).is_err());
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in SMALL {
            let f = FieldSpec::from_order(q).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, FieldElem::ZERO), a);
                assert_eq!(f.mul(a, FieldElem::ONE), a);
                assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE, "GF({q}) a={a:?}");
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn exp_log_are_inverse() {
        for q in [4u64, 8, 9, 16, 27, 256] {
            let f = FieldSpec::from_order(q).unwrap();
            for v in 1..f.order() {
                let l = f.log_table()[v as usize] as usize;
                assert_eq!(f.exp_table()[l] as u32, v);
            }
        }
    }

    #[test]
    fn prime_power_factoring() {
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(65536), Some((2, 16)));
    }
}
