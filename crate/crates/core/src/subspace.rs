//! Subspaces of F_q^T in canonical reduced-row-echelon form.
//!
//! Two subspaces are equal exactly when their RREF bases are identical, so
//! `Subspace` derives `Eq` and `Hash` from the basis.
//!
//! Enumeration order of [`Grassmannian`]: pivot column sets in lexicographic
//! order, and within one pivot set the free RREF entries (row by row, left to
//! right) counting up in base q with the last free entry varying fastest.

use thiserror::Error;

use crate::field::{FieldElem, FieldSpec};
use crate::matrix::{MatrixError, MatrixGF};

/// Enumeration is refused when the ambient space has more than this many vectors.
pub const ENUMERATION_LIMIT: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubspaceError {
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("dimension {d} exceeds ambient dimension {t}")]
    DimensionTooLarge { d: usize, t: usize },
    #[error("enumeration of F_{q}^{t} exceeds the 2^20 vector guard")]
    TooLarge { q: u32, t: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: MatrixGF,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "span{:?}", self.basis)
    }
}

impl Subspace {
    pub fn zero(ambient: usize, field: &FieldSpec) -> Self {
        Subspace { basis: MatrixGF::zeros(0, ambient, field) }
    }

    pub fn full(ambient: usize, field: &FieldSpec) -> Self {
        Subspace { basis: MatrixGF::identity(ambient, field) }
    }

    /// Row span of `x`.
    pub fn span(x: &MatrixGF) -> Self {
        let (r, rank) = x.rref();
        Subspace { basis: r.row_range(0, rank) }
    }

    pub fn basis(&self) -> &MatrixGF {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn field(&self) -> &FieldSpec {
        self.basis.field()
    }

    fn check(&self, other: &Subspace) -> Result<(), SubspaceError> {
        self.field().ensure_same(other.field()).map_err(MatrixError::from)?;
        if self.ambient_dim() != other.ambient_dim() {
            return Err(SubspaceError::AmbientMismatch(self.ambient_dim(), other.ambient_dim()));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, SubspaceError> {
        self.check(other)?;
        Ok(Subspace::span(&self.basis.vstack(&other.basis)?))
    }

    /// Intersection through the left kernel of the stacked bases: a vector
    /// `x·A = y·B` lies in both spans, and `[x, -y]` annihilates `[A; B]`.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, SubspaceError> {
        self.check(other)?;
        let (da, t) = (self.dim(), self.ambient_dim());
        if da == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(t, self.field()));
        }
        let stacked = self.basis.vstack(&other.basis)?;
        let kernel = stacked.transpose().nullspace();
        if kernel.rows() == 0 {
            return Ok(Subspace::zero(t, self.field()));
        }
        let coeffs = kernel.col_range(0, da);
        Ok(Subspace::span(&coeffs.mul(&self.basis)?))
    }

    /// True when `other` is a subspace of `self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool, SubspaceError> {
        self.check(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        Ok(self.basis.vstack(&other.basis)?.rank() == self.dim())
    }

    /// Pad the basis with zero rows to an `m x T` matrix whose row span is `self`.
    pub fn to_matrix(&self, m: usize) -> Result<MatrixGF, SubspaceError> {
        if m < self.dim() {
            return Err(SubspaceError::DimensionTooLarge { d: self.dim(), t: m });
        }
        let pad = MatrixGF::zeros(m - self.dim(), self.ambient_dim(), self.field());
        Ok(self.basis.vstack(&pad)?)
    }
}

fn guard(t: usize, field: &FieldSpec) -> Result<(), SubspaceError> {
    let q = field.order() as u64;
    let too_big = q.checked_pow(t as u32).is_none_or(|n| n > ENUMERATION_LIMIT);
    if too_big {
        Err(SubspaceError::TooLarge { q: field.order(), t })
    } else {
        Ok(())
    }
}

/// Iterator over Gr(T, d), each subspace exactly once in canonical order.
pub struct Grassmannian {
    field: FieldSpec,
    t: usize,
    d: usize,
    pivots: Option<Vec<usize>>,
    /// (row, col) positions of the free RREF entries for the current pivots.
    free: Vec<(usize, usize)>,
    counter: Vec<u32>,
    fresh: bool,
}

/// Stream every `d`-dimensional subspace of F_q^T.
pub fn enumerate_grassmannian(t: usize, d: usize, field: &FieldSpec) -> Result<Grassmannian, SubspaceError> {
    if d > t {
        return Err(SubspaceError::DimensionTooLarge { d, t });
    }
    guard(t, field)?;
    let mut g = Grassmannian {
        field: field.clone(),
        t,
        d,
        pivots: Some((0..d).collect()),
        free: Vec::new(),
        counter: Vec::new(),
        fresh: true,
    };
    g.reset_free();
    Ok(g)
}

/// All subspaces of dimension at most `m`, by increasing dimension.
pub fn enumerate_sphere(t: usize, m: usize, field: &FieldSpec) -> Result<Vec<Subspace>, SubspaceError> {
    let mut out = Vec::new();
    for d in 0..=m.min(t) {
        out.extend(enumerate_grassmannian(t, d, field)?);
    }
    Ok(out)
}

impl Grassmannian {
    fn reset_free(&mut self) {
        self.free.clear();
        if let Some(p) = &self.pivots {
            for (row, &pc) in p.iter().enumerate() {
                for c in pc + 1..self.t {
                    if !p.contains(&c) {
                        self.free.push((row, c));
                    }
                }
            }
        }
        self.counter = vec![0; self.free.len()];
        self.fresh = true;
    }

    fn next_pivots(&mut self) {
        let Some(p) = self.pivots.as_mut() else { return };
        let (t, d) = (self.t, self.d);
        let mut i = d;
        loop {
            if i == 0 {
                self.pivots = None;
                return;
            }
            i -= 1;
            if p[i] < t - d + i {
                p[i] += 1;
                for j in i + 1..d {
                    p[j] = p[j - 1] + 1;
                }
                break;
            }
        }
        self.reset_free();
    }

    fn bump_counter(&mut self) -> bool {
        let q = self.field.order();
        for c in self.counter.iter_mut().rev() {
            *c += 1;
            if *c < q {
                return true;
            }
            *c = 0;
        }
        false
    }

    fn current(&self) -> Subspace {
        let p = self.pivots.as_ref().expect("active pivots");
        let mut m = MatrixGF::zeros(self.d, self.t, &self.field);
        for (row, &pc) in p.iter().enumerate() {
            m.set(row, pc, FieldElem::ONE);
        }
        for (&(r, c), &v) in self.free.iter().zip(&self.counter) {
            m.set(r, c, FieldElem(v as u8));
        }
        Subspace { basis: m }
    }
}

impl Iterator for Grassmannian {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        self.pivots.as_ref()?;
        if self.fresh {
            self.fresh = false;
        } else if !self.bump_counter() {
            self.next_pivots();
            self.pivots.as_ref()?;
            self.fresh = false;
        }
        Some(self.current())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::from_order(q).unwrap()
    }

    fn sp(rows: &[Vec<u32>], t: usize, f: &FieldSpec) -> Subspace {
        Subspace::span(&MatrixGF::from_rows(rows, t, f).unwrap())
    }

    #[test]
    fn span_examples() {
        let f = gf(2);
        assert_eq!(Subspace::span(&MatrixGF::zeros(3, 4, &f)), Subspace::zero(4, &f));
        let s = sp(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]], 3, &f);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.basis().to_rows(), vec![vec![1, 0, 1], vec![0, 1, 1]]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let full = MatrixGF::random_full_rank(4, 4, &gf(3), &mut rng);
        assert_eq!(Subspace::span(&full), Subspace::full(4, &gf(3)));
    }

    #[test]
    fn sum_and_intersection_examples() {
        let f = gf(2);
        let e1 = sp(&[vec![1, 0, 0]], 3, &f);
        let e2 = sp(&[vec![0, 1, 0]], 3, &f);
        let s = e1.sum(&e2).unwrap();
        assert_eq!(s, sp(&[vec![1, 0, 0], vec![0, 1, 0]], 3, &f));
        assert_eq!(e1.sum(&Subspace::zero(3, &f)).unwrap(), e1);
        assert_eq!(e1.sum(&e1).unwrap(), e1);
        assert_eq!(e1.intersection(&e2).unwrap(), Subspace::zero(3, &f));
        assert_eq!(e1.intersection(&Subspace::full(3, &f)).unwrap(), e1);
        let a = sp(&[vec![1, 0, 0], vec![0, 1, 0]], 3, &f);
        let b = sp(&[vec![0, 1, 0], vec![0, 0, 1]], 3, &f);
        assert_eq!(a.intersection(&b).unwrap(), e2);
    }

    #[test]
    fn containment_examples() {
        let f = gf(2);
        let a = sp(&[vec![1, 0, 0], vec![0, 1, 0]], 3, &f);
        assert!(a.contains(&Subspace::zero(3, &f)).unwrap());
        assert!(!Subspace::zero(3, &f).contains(&sp(&[vec![1, 0, 0]], 3, &f)).unwrap());
        assert!(a.contains(&sp(&[vec![1, 1, 0]], 3, &f)).unwrap());
        assert!(!a.contains(&sp(&[vec![0, 0, 1]], 3, &f)).unwrap());
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let f = gf(2);
        let a = Subspace::full(3, &f);
        let b = Subspace::full(4, &f);
        assert_eq!(a.sum(&b).unwrap_err(), SubspaceError::AmbientMismatch(3, 4));
        assert!(a.intersection(&b).is_err());
        assert!(a.contains(&b).is_err());
    }

    #[test]
    fn grassmannian_counts() {
        let f2 = gf(2);
        assert_eq!(enumerate_grassmannian(3, 1, &f2).unwrap().count(), 7);
        assert_eq!(enumerate_grassmannian(4, 2, &f2).unwrap().count(), 35);
        let zero: Vec<_> = enumerate_grassmannian(5, 0, &f2).unwrap().collect();
        assert_eq!(zero, vec![Subspace::zero(5, &f2)]);
        assert_eq!(enumerate_grassmannian(3, 3, &gf(3)).unwrap().count(), 1);
        assert!(enumerate_grassmannian(2, 3, &f2).is_err());
        assert!(enumerate_grassmannian(21, 1, &f2).is_err());
    }

    #[test]
    fn grassmannian_is_canonical_and_distinct() {
        for q in [2u64, 3, 4] {
            let f = gf(q);
            for t in 0..=4 {
                for d in 0..=t {
                    let all: Vec<_> = enumerate_grassmannian(t, d, &f).unwrap().collect();
                    let set: HashSet<_> = all.iter().cloned().collect();
                    assert_eq!(set.len(), all.len());
                    for s in &all {
                        assert_eq!(s.dim(), d);
                        assert_eq!(&Subspace::span(s.basis()), s);
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_order_is_stable() {
        let f = gf(2);
        let first: Vec<_> = enumerate_grassmannian(3, 2, &f).unwrap().map(|s| s.basis().to_rows()).collect();
        assert_eq!(
            first,
            vec![
                vec![vec![1, 0, 0], vec![0, 1, 0]],
                vec![vec![1, 0, 0], vec![0, 1, 1]],
                vec![vec![1, 0, 1], vec![0, 1, 0]],
                vec![vec![1, 0, 1], vec![0, 1, 1]],
                vec![vec![1, 0, 0], vec![0, 0, 1]],
                vec![vec![1, 1, 0], vec![0, 0, 1]],
                vec![vec![0, 1, 0], vec![0, 0, 1]],
            ]
        );
    }

    #[test]
    fn dimension_identity_exhaustive_gf2_t3() {
        let f = gf(2);
        let all = enumerate_sphere(3, 3, &f).unwrap();
        for a in &all {
            for b in &all {
                let s = a.sum(b).unwrap();
                let i = a.intersection(b).unwrap();
                assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
                assert!(s.contains(a).unwrap() && s.contains(b).unwrap());
                assert!(a.contains(&i).unwrap() && b.contains(&i).unwrap());
            }
        }
    }
}
