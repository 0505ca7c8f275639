//! Rate regions as exact convex polygons.

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::channel::MacParams;

/// A vertex of a rate region, with the dimension pair that produced it
/// (`None` for vertices created by clipping).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corner {
    pub r1: Rational64,
    pub r2: Rational64,
    pub dims: Option<(usize, usize)>,
}

impl Corner {
    pub fn point(&self) -> (Rational64, Rational64) {
        (self.r1, self.r2)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (ratio_f64(self.r1), ratio_f64(self.r2))
    }
}

pub(crate) fn ratio_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Downward-closed convex region `{R ≥ 0}` under the hull of its corners.
///
/// `corners` are the polygon vertices other than the origin, sorted by R1
/// ascending. A region consisting of the origin alone has the single corner
/// (0, 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateRegion {
    pub corners: Vec<Corner>,
    pub regime_ok: bool,
}

type Pt = (Rational64, Rational64);

fn cross(o: Pt, a: Pt, b: Pt) -> Rational64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull vertices in counter-clockwise order, collinear points removed.
fn convex_hull(mut pts: Vec<Pt>) -> Vec<Pt> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Pt> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= Rational64::zero() {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Pt> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= Rational64::zero() {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

impl RateRegion {
    /// Region generated by rate points (with provenance), their axis
    /// projections and the origin.
    pub fn from_points(points: &[(Pt, Option<(usize, usize)>)], regime_ok: bool) -> Self {
        let zero = Rational64::zero();
        let mut all: Vec<Pt> = vec![(zero, zero)];
        for &((a, b), _) in points {
            all.extend([(a, b), (a, zero), (zero, b)]);
        }
        let hull = convex_hull(all);
        let mut corners: Vec<Corner> = hull
            .into_iter()
            .filter(|p| *p != (zero, zero))
            .map(|p| Corner { r1: p.0, r2: p.1, dims: points.iter().find(|(q, _)| *q == p).and_then(|(_, d)| *d) })
            .collect();
        corners.sort_by(|x, y| x.r1.cmp(&y.r1).then(y.r2.cmp(&x.r2)));
        if corners.is_empty() {
            corners.push(Corner { r1: zero, r2: zero, dims: None });
        }
        RateRegion { corners, regime_ok }
    }

    /// Boundary polygon counter-clockwise from the origin, axis projections included.
    pub fn boundary(&self) -> Vec<(Rational64, Rational64)> {
        let zero = Rational64::zero();
        let pts: Vec<(Pt, Option<(usize, usize)>)> = self.corners.iter().map(|c| (c.point(), c.dims)).collect();
        let mut all = vec![(zero, zero)];
        for ((a, b), _) in pts {
            all.extend([(a, b), (a, zero), (zero, b)]);
        }
        convex_hull(all)
    }

    /// Vertex set without provenance, for polytope equality.
    pub fn vertex_set(&self) -> Vec<Pt> {
        self.corners.iter().map(|c| c.point()).collect()
    }

    pub fn same_polytope(&self, other: &RateRegion) -> bool {
        self.vertex_set() == other.vertex_set()
    }

    /// Number of corners, not counting the origin.
    pub fn corner_count(&self) -> usize {
        if self.corners.len() == 1 && self.corners[0].point() == (Rational64::zero(), Rational64::zero()) {
            0
        } else {
            self.corners.len()
        }
    }

    /// True when consecutive boundary edges all turn the same way.
    pub fn is_convex(&self) -> bool {
        let poly = self.boundary();
        let n = poly.len();
        if n < 3 {
            return true;
        }
        let signs: Vec<Rational64> = (0..n).map(|i| cross(poly[i], poly[(i + 1) % n], poly[(i + 2) % n])).collect();
        signs.iter().all(|s| s.is_positive()) || signs.iter().all(|s| s.is_negative())
    }

    /// Slopes of consecutive corner-to-corner edges, left to right.
    pub fn edge_slopes(&self) -> Vec<Option<Rational64>> {
        self.corners
            .windows(2)
            .map(|w| {
                let dx = w[1].r1 - w[0].r1;
                (!dx.is_zero()).then(|| (w[1].r2 - w[0].r2) / dx)
            })
            .collect()
    }

    pub fn contains_point(&self, p: Pt) -> bool {
        let zero = Rational64::zero();
        if p.0 < zero || p.1 < zero {
            return false;
        }
        let poly = self.boundary();
        if poly.len() < 3 {
            return poly.iter().any(|v| p.0 <= v.0 && p.1 <= v.1 && (p.0.is_zero() || p.1.is_zero()));
        }
        (0..poly.len()).all(|i| cross(poly[i], poly[(i + 1) % poly.len()], p) >= zero)
    }

    /// Intersection with the half-plane `R1 + R2 ≤ k`.
    pub fn clip_sum(&self, k: Rational64, regime_ok: bool) -> RateRegion {
        let poly = self.boundary();
        let inside = |p: &Pt| p.0 + p.1 <= k;
        let mut out: Vec<Pt> = Vec::new();
        let n = poly.len();
        for i in 0..n {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            if inside(&a) {
                out.push(a);
            }
            if inside(&a) != inside(&b) {
                let (sa, sb) = (a.0 + a.1 - k, b.0 + b.1 - k);
                let t = sa / (sa - sb);
                out.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
            }
        }
        let points: Vec<(Pt, Option<(usize, usize)>)> = out
            .into_iter()
            .map(|p| (p, self.corners.iter().find(|c| c.point() == p).and_then(|c| c.dims)))
            .collect();
        RateRegion::from_points(&points, regime_ok)
    }
}

fn rate_point(t: usize, d1: usize, d2: usize) -> Pt {
    let rest = (t - d1 - d2) as i64;
    (Rational64::from_integer(d1 as i64 * rest), Rational64::from_integer(d2 as i64 * rest))
}

fn region_over(mac: &MacParams, dims: impl Iterator<Item = (usize, usize)>, regime_ok: bool) -> RateRegion {
    let points: Vec<(Pt, Option<(usize, usize)>)> = dims
        .filter(|&(d1, d2)| d1 + d2 <= mac.t)
        .map(|(d1, d2)| (rate_point(mac.t, d1, d2), Some((d1, d2))))
        .collect();
    RateRegion::from_points(&points, regime_ok)
}

/// R*: hull of R(d1, d2) over `d_i ≤ min(n, m_i)`, `d1 + d2 ≤ min(n, m1 + m2)`.
pub fn rate_region_star(mac: &MacParams) -> RateRegion {
    let cap = mac.n.min(mac.m1 + mac.m2);
    let dims = (0..=mac.m1.min(mac.n))
        .flat_map(|d1| (0..=mac.m2.min(mac.n)).map(move |d2| (d1, d2)))
        .filter(move |&(d1, d2)| d1 + d2 <= cap);
    region_over(mac, dims, mac.t > 2 * (mac.m1 + mac.m2))
}

/// Number of corners of R* (origin excluded) predicted in closed form.
pub fn corner_count(mac: &MacParams) -> usize {
    let (m1, m2, n) = (mac.m1, mac.m2, mac.n);
    let a = m1.min(n.saturating_sub(m2));
    let b = m2.min(n.saturating_sub(m1));
    a + b + 2 - usize::from(n >= m1 + m2)
}

fn coop_k(mac: &MacParams) -> usize {
    let k = (mac.m1 + mac.m2).min(mac.n);
    k * mac.t.saturating_sub(k)
}

/// Cooperative bound `R1 + R2 ≤ k(T − k)`, k = min(m1 + m2, n).
pub fn coop_bound(mac: &MacParams) -> RateRegion {
    let k = Rational64::from_integer(coop_k(mac) as i64);
    let zero = Rational64::zero();
    RateRegion::from_points(&[((zero, k), None), ((k, zero), None)], mac.t >= 2 * (mac.m1 + mac.m2))
}

/// Coloring bound: hull of R(d1, d2) over `0 ≤ d_i ≤ m_i`.
pub fn coloring_bound(mac: &MacParams) -> RateRegion {
    let m2 = mac.m2;
    let dims = (0..=mac.m1).flat_map(move |d1| (0..=m2).map(move |d2| (d1, d2)));
    region_over(mac, dims, mac.t >= 2 * (mac.m1 + mac.m2))
}

/// The staircase (0, m2), (1, m2), …, (m1, m2), (m1, m2 − 1), …, (m1, 0)
/// whose images are the corners of the coloring bound.
pub fn coloring_corner_dims(mac: &MacParams) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = (0..=mac.m1).map(|d1| (d1, mac.m2)).collect();
    v.extend((0..mac.m2).rev().map(|d2| (mac.m1, d2)));
    v
}

/// Cooperative bound intersected with the coloring bound.
pub fn coop_coloring_intersection(mac: &MacParams) -> RateRegion {
    let col = coloring_bound(mac);
    col.clip_sum(Rational64::from_integer(coop_k(mac) as i64), col.regime_ok)
}
