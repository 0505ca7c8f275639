//! Closed-form capacity results and bounds.

use serde::Serialize;

use crate::channel::{ChannelParams, ErasureDist};
use crate::field::is_prime_power;
use crate::qcount::{log2_gaussian, log2_psi};

use super::optimize::optimize;
use super::CapacityError;

/// Probability above which a dimension counts as used by the optimizer.
pub const SUPPORT_THRESHOLD: f64 = 1e-6;

/// Largest field order scanned by [`q0_sufficient`].
pub const Q0_SCAN_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Asymptotic {
    pub i_star: usize,
    /// i*(T − i*): the capacity in units of log2 q.
    pub per_log2q: usize,
    pub bits: f64,
}

/// Leading-order capacity i*(T − i*) log2 q with i* = min(m, n, ⌊T/2⌋).
pub fn asymptotic_capacity(params: &ChannelParams) -> Asymptotic {
    let i = params.m.min(params.n).min(params.t / 2);
    let per = i * (params.t - i);
    Asymptotic { i_star: i, per_log2q: per, bits: per as f64 * params.log2q() }
}

/// Input dimensions used by the optimal distribution once q is large:
/// `min[(T−n)⁺, m, n, T] ..= min[m, n, T]`.
pub fn support_set(params: &ChannelParams) -> Vec<usize> {
    let (t, m, n) = (params.t, params.m, params.n);
    let lo = t.saturating_sub(n).min(m).min(n).min(t);
    let hi = m.min(n).min(t);
    (lo..=hi).collect()
}

fn large_t_regime(params: &ChannelParams) -> Result<usize, CapacityError> {
    let i = params.m.min(params.n);
    if params.t <= params.n + i {
        return Err(CapacityError::Regime(format!(
            "T > n + min(m, n) violated: T = {}, n + min(m, n) = {}",
            params.t,
            params.n + i
        )));
    }
    Ok(i)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LargeT {
    pub i_star: usize,
    pub bits: f64,
    /// i*(T−i*) log2 q − 1{n≤m} (T−i*) log2 q / q + 1/q.
    pub expansion_bits: f64,
}

/// `Σ_d w_l(d) log2([T d] / [i* d]) − min(n, l)(T − i*) log2 q` with
/// `w_l(d) = ψ(n,d) [l d] q^{-nl}`.
fn epsilon(l: usize, i: usize, params: &ChannelParams) -> f64 {
    let log2q = params.log2q();
    let (t, n) = (params.t as u32, params.n as u32);
    let r = params.n.min(l);
    let sum: f64 = (0..=r as u32)
        .map(|d| {
            let w = (log2_psi(n, d, log2q) + log2_gaussian(l as u32, d, log2q) - (params.n * l) as f64 * log2q).exp2();
            w * (log2_gaussian(t, d, log2q) - log2_gaussian(i as u32, d, log2q))
        })
        .sum();
    sum - (r * (params.t - i)) as f64 * log2q
}

/// Capacity for T > n + min(m, n), valid once q ≥ q0.
pub fn exact_capacity_large_t(params: &ChannelParams) -> Result<LargeT, CapacityError> {
    let i = large_t_regime(params)?;
    let log2q = params.log2q();
    let q = params.q as f64;
    let per = (i * (params.t - i)) as f64;
    let bits = per * log2q + epsilon(i, i, params);
    let indicator = if params.n <= params.m { 1.0 } else { 0.0 };
    let expansion_bits = per * log2q - indicator * (params.t - i) as f64 * log2q / q + 1.0 / q;
    Ok(LargeT { i_star: i, bits, expansion_bits })
}

/// ε_q(l) in bits, for 0 ≤ l ≤ m, with all input mass on dimension i* = min(m, n).
pub fn epsilon_q(l: usize, params: &ChannelParams) -> Result<f64, CapacityError> {
    let i = large_t_regime(params)?;
    if l > params.m {
        return Err(CapacityError::Regime(format!("l <= m violated: l = {l}, m = {}", params.m)));
    }
    Ok(epsilon(l, i, params))
}

/// Whether both inequality families that make α_{i*} = 1 optimal hold at `params.q`.
pub fn q0_inequalities_hold(params: &ChannelParams) -> Result<bool, CapacityError> {
    let i = large_t_regime(params)?;
    if i == 0 {
        return Ok(true);
    }
    let log2q = params.log2q();
    let e_star = epsilon(i, i, params);
    let below = (0..i).all(|l| {
        let den = ((params.t - params.n - i) * (i - l)) as f64;
        (epsilon(l, i, params) - e_star) / den <= log2q
    });
    let above = (i + 1..=params.m).all(|l| {
        let den = (i * (l - i)) as f64;
        (epsilon(l, i, params) - e_star) / den <= log2q
    });
    Ok(below && above)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Q0Source {
    /// Smallest scanned prime power satisfying the exact inequalities.
    Inequalities,
    /// Asymptotic sufficient condition: q^{n−m+1} ≥ 5m² (m ≤ n) or q ≥ nT (m > n).
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Q0 {
    pub q0: u64,
    pub source: Q0Source,
}

fn prime_powers_from(start: u64) -> impl Iterator<Item = u64> {
    (start.max(2)..).filter(|&q| is_prime_power(q))
}

/// Smallest prime power q ≤ 2^16 at which the exact inequality families hold
/// (the `q` of `params` is ignored), else the asymptotic sufficient bound.
pub fn q0_sufficient(params: &ChannelParams) -> Result<Q0, CapacityError> {
    large_t_regime(params)?;
    for q in prime_powers_from(2).take_while(|&q| q <= Q0_SCAN_LIMIT) {
        if q0_inequalities_hold(&ChannelParams { q, ..*params })? {
            return Ok(Q0 { q0: q, source: Q0Source::Inequalities });
        }
    }
    let (m, n, t) = (params.m as u64, params.n as u64, params.t as u64);
    let q0 = if m <= n {
        let target = 5.0 * (m * m) as f64;
        prime_powers_from(2).find(|&q| (q as f64).powi((n - m + 1) as i32) >= target).unwrap()
    } else {
        prime_powers_from(n * t).next().unwrap()
    };
    Ok(Q0 { q0, source: Q0Source::Fallback })
}

/// Smallest q in `qlist` from which on (for it and every larger listed q) the
/// optimizer's support matches [`support_set`]. This is an empirical estimate,
/// not the exact threshold.
pub fn empirical_support_threshold(
    m: usize,
    n: usize,
    t: usize,
    qlist: &[u64],
    tol: f64,
) -> Result<Option<u64>, CapacityError> {
    let mut qs = qlist.to_vec();
    qs.sort_unstable();
    let mut threshold = None;
    for &q in qs.iter().rev() {
        let params = ChannelParams::new(q, t, m, n)?;
        let r = optimize(&params, tol)?;
        if r.alpha_star.support(SUPPORT_THRESHOLD) != support_set(&params) {
            break;
        }
        threshold = Some(q);
    }
    Ok(threshold)
}

/// Rate of coding vectors with generation size k:
/// `∏_{i<k}(1 − q^{i−k}) · k(T − k) log2 q`.
pub fn coding_vector_rate(params: &ChannelParams, k: usize) -> Result<f64, CapacityError> {
    if k == 0 || k > params.m || k > params.t {
        return Err(CapacityError::Regime(format!("0 < k <= min(m, T) violated: k = {k}, m = {}, T = {}", params.m, params.t)));
    }
    let q = params.q as f64;
    let full_rank: f64 = (0..k).map(|i| 1.0 - q.powi(i as i32 - k as i32)).product();
    Ok(full_rank * (k * (params.t - k)) as f64 * params.log2q())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CvGap {
    pub i_star: usize,
    pub capacity_bits: f64,
    pub rcv_bits: f64,
    pub gap_bits: f64,
    /// (i* − 1)(T − i*) log2 q / q.
    pub leading_term_bits: f64,
}

/// Capacity (from the certified optimizer) minus the coding-vector rate at k = i*.
pub fn cv_gap(params: &ChannelParams, tol: f64) -> Result<CvGap, CapacityError> {
    let a = asymptotic_capacity(params);
    let capacity = optimize(params, tol)?.capacity_bits;
    let rcv = if a.i_star == 0 { 0.0 } else { coding_vector_rate(params, a.i_star)? };
    let leading = if a.i_star == 0 {
        0.0
    } else {
        ((a.i_star - 1) * (params.t - a.i_star)) as f64 * params.log2q() / params.q as f64
    };
    Ok(CvGap { i_star: a.i_star, capacity_bits: capacity, rcv_bits: rcv, gap_bits: capacity - rcv, leading_term_bits: leading })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErasureBounds {
    pub mu1: f64,
    pub mu2: f64,
    pub lower_per_log2q: f64,
    pub upper_per_log2q: f64,
    pub lower_bits: f64,
    pub upper_bits: f64,
}

/// Bounds on the erasure-channel capacity: `μ1 (T − m) log2 q` and
/// `(μ1 T − μ2) log2 q` with μ1 = E[N], μ2 = E[N²].
pub fn erasure_bounds(params: &ChannelParams, edist: &ErasureDist) -> Result<ErasureBounds, CapacityError> {
    let (t, m) = (params.t, params.m);
    if 2 * m > t {
        return Err(CapacityError::Regime(format!("m <= floor(T/2) violated: m = {m}, T = {t}")));
    }
    if edist.max_value() > m {
        return Err(CapacityError::InvalidDist(format!("N takes the value {} > m = {m}", edist.max_value())));
    }
    let (mu1, mu2) = edist.moments();
    // μ1 T − μ2 = μ1 (T − m) + E[N (m − N)]; the second term is summed
    // directly so that upper ≥ lower survives rounding.
    let lower = mu1 * (t - m) as f64;
    let slack: f64 = edist.probs().iter().take(m + 1).enumerate().map(|(k, p)| p * (k * (m - k)) as f64).sum();
    let upper = lower + slack;
    let log2q = params.log2q();
    Ok(ErasureBounds {
        mu1,
        mu2,
        lower_per_log2q: lower,
        upper_per_log2q: upper,
        lower_bits: lower * log2q,
        upper_bits: upper * log2q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: u64, t: usize, m: usize, n: usize) -> ChannelParams {
        ChannelParams::new(q, t, m, n).unwrap()
    }

    #[test]
    fn asymptote_examples() {
        let a = asymptotic_capacity(&p(5, 14, 11, 7));
        assert_eq!((a.i_star, a.per_log2q), (7, 49));
        assert_eq!(asymptotic_capacity(&p(2, 2, 1, 1)).per_log2q, 1);
        let a = asymptotic_capacity(&p(2, 6, 5, 9));
        assert_eq!((a.i_star, a.per_log2q), (3, 9));
    }

    #[test]
    fn support_examples() {
        assert_eq!(support_set(&p(64, 9, 4, 3)), vec![3]);
        assert_eq!(support_set(&p(64, 2, 4, 3)), vec![0, 1, 2]);
        assert_eq!(support_set(&p(64, 5, 4, 3)), vec![2, 3]);
    }

    #[test]
    fn large_t_hand_value() {
        let r = exact_capacity_large_t(&p(2, 3, 1, 1)).unwrap();
        assert!((r.bits - 0.5 * 7f64.log2()).abs() < 1e-14);
        assert!(exact_capacity_large_t(&p(2, 2, 1, 1)).is_err());
        // n > m: the 1/q log q correction is absent.
        let r = exact_capacity_large_t(&p(16, 9, 2, 3)).unwrap();
        assert!((r.expansion_bits - (2.0 * 7.0 * 4.0 + 1.0 / 16.0)).abs() < 1e-12);
    }

    #[test]
    fn epsilon_at_i_star_is_the_correction() {
        let params = p(16, 7, 2, 2);
        let c = exact_capacity_large_t(&params).unwrap().bits;
        let e = epsilon_q(2, &params).unwrap();
        assert!((e - (c - 10.0 * 4.0)).abs() < 1e-12);
    }

    #[test]
    fn q0_respects_fallback_bound() {
        let params = p(2, 40, 2, 3);
        let q0 = q0_sufficient(&params).unwrap();
        assert!(q0.q0 <= 5, "{q0:?}");
    }

    #[test]
    fn coding_vector_example() {
        assert!((coding_vector_rate(&p(2, 8, 2, 2), 2).unwrap() - 4.5).abs() < 1e-14);
        assert!(coding_vector_rate(&p(2, 8, 2, 2), 0).is_err());
    }

    #[test]
    fn erasure_examples() {
        let params = p(4, 8, 2, 2);
        let b = erasure_bounds(&params, &ErasureDist::new(vec![0.0, 0.5, 0.5]).unwrap()).unwrap();
        assert_eq!((b.lower_per_log2q, b.upper_per_log2q), (9.0, 9.5));
        assert_eq!((b.lower_bits, b.upper_bits), (18.0, 19.0));
        let b = erasure_bounds(&params, &ErasureDist::point(2)).unwrap();
        assert_eq!(b.lower_per_log2q, b.upper_per_log2q);
        let b = erasure_bounds(&params, &ErasureDist::point(0)).unwrap();
        assert_eq!((b.lower_bits, b.upper_bits), (0.0, 0.0));
        assert!(erasure_bounds(&p(4, 3, 2, 2), &ErasureDist::point(2)).is_err());
    }
}
