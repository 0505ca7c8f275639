//! Maximization of I(α) over the probability simplex.
//!
//! Exponentiated-gradient ascent with a backtracking step size brings α close
//! to the optimum from the uniform start. An active-set Newton iteration on
//! the face `{α_k > 0}` (using the analytic Hessian) then drives the
//! Kuhn-Tucker residual to the requested tolerance, dropping coordinates that
//! hit zero and admitting coordinates whose derivative exceeds λ̂.

use crate::channel::ChannelParams;

use super::model::Model;
use super::{CapacityError, CapacityResult, DimDist};

/// Coordinates at or below this mass count as inactive in the KT residual.
pub const ACTIVE_EPS: f64 = 1e-14;

/// Largest relative decrease of a coordinate in one Newton step.
const BOUNDARY_FRACTION: f64 = 0.9;

/// Floor keeping every coordinate strictly positive.
const MIN_MASS: f64 = 1e-300;

#[derive(Debug, Clone, Copy)]
pub struct OptimizeOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Exponentiated-gradient iterations before the Newton phase.
    pub warmup: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions { tol: 1e-9, max_iter: 100_000, warmup: 200 }
    }
}

/// `(λ̂, residual)` with `λ̂ = Σ α_k I'_k` and residual
/// `max(max_{α_k>ε} |I'_k − λ̂|, max_{α_k≤ε} (I'_k − λ̂)⁺)`.
pub fn kt_residual(alpha: &[f64], grad: &[f64]) -> (f64, f64) {
    let lambda: f64 = alpha.iter().zip(grad).filter(|(a, _)| **a > 0.0).map(|(a, g)| a * g).sum();
    let res = alpha
        .iter()
        .zip(grad)
        .map(|(&a, &g)| if a > ACTIVE_EPS { (g - lambda).abs() } else { (g - lambda).max(0.0) })
        .fold(0.0, f64::max);
    (lambda, res)
}

pub fn optimize(params: &ChannelParams, tol: f64) -> Result<CapacityResult, CapacityError> {
    optimize_with(params, &OptimizeOptions { tol, ..OptimizeOptions::default() })
}

pub fn optimize_with(params: &ChannelParams, opts: &OptimizeOptions) -> Result<CapacityResult, CapacityError> {
    if !(opts.tol > 0.0) {
        return Err(CapacityError::Regime(format!("tol > 0 violated: tol = {}", opts.tol)));
    }
    let model = Model::new(params);
    let len = model.input_dims();
    let mut alpha = vec![1.0 / len as f64; len];
    let mut value = model.mutual_info(&alpha);
    let mut eta = 1.0f64;
    let mut iterations = 0;

    let finish = |alpha: Vec<f64>, iterations: usize| {
        let grad = model.gradient(&alpha);
        let (lambda, residual) = kt_residual(&alpha, &grad);
        let capacity = model.mutual_info(&alpha).max(0.0);
        CapacityResult {
            capacity_bits: capacity,
            alpha_star: DimDist { alpha },
            kt_lambda: lambda,
            kt_residual: residual,
            iterations,
        }
    };

    while iterations < opts.max_iter {
        let grad = model.gradient(&alpha);
        let (lambda, residual) = kt_residual(&alpha, &grad);
        if residual < opts.tol {
            return Ok(finish(alpha, iterations));
        }
        iterations += 1;
        let newton_ok = iterations > opts.warmup && newton_step(&model, &mut alpha, &grad, lambda, opts.tol);
        if newton_ok {
            value = model.mutual_info(&alpha);
            continue;
        }
        // Exponentiated-gradient step with backtracking.
        eta = (eta * 2.0).min(1e6);
        loop {
            let cand = eg_update(&alpha, &grad, lambda, eta);
            let v = model.mutual_info(&cand);
            if v >= value || eta < 1e-12 {
                alpha = cand;
                value = v;
                break;
            }
            eta *= 0.5;
        }
    }
    let best = finish(alpha, iterations);
    if best.kt_residual < opts.tol {
        return Ok(best);
    }
    Err(CapacityError::NotConverged { residual: best.kt_residual, iterations, best: Box::new(best) })
}

fn eg_update(alpha: &[f64], grad: &[f64], lambda: f64, eta: f64) -> Vec<f64> {
    let top = grad.iter().map(|g| eta * (g - lambda)).fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = alpha
        .iter()
        .zip(grad)
        .map(|(&a, &g)| (a * (eta * (g - lambda) - top).exp2()).max(MIN_MASS))
        .collect();
    let z: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / z).collect()
}

/// One safeguarded Newton step on the active face. Returns false when no
/// ascent step could be taken, so the caller falls back to a gradient step.
///
/// Coordinates are never set to zero: a dimension with no mass above it would
/// make f vanish and its derivative infinite. Coordinates at or below
/// [`ACTIVE_EPS`] are frozen instead, and no coordinate may shrink by more
/// than a fixed fraction in one step.
fn newton_step(model: &Model, alpha: &mut Vec<f64>, grad: &[f64], lambda: f64, tol: f64) -> bool {
    let len = alpha.len();
    let mut active: Vec<usize> = (0..len).filter(|&k| alpha[k] > ACTIVE_EPS).collect();
    // Admit the most violating frozen coordinate.
    if let Some(k) = (0..len)
        .filter(|&k| alpha[k] <= ACTIVE_EPS && grad[k] - lambda > tol)
        .max_by(|&a, &b| grad[a].total_cmp(&grad[b]))
    {
        active.push(k);
        active.sort_unstable();
    }
    if active.len() < 2 {
        return false;
    }
    let h = model.hessian(alpha);
    // Centered derivatives avoid cancellation between large, nearly equal I'_k.
    let centered: Vec<f64> = grad.iter().map(|g| g - lambda).collect();
    if centered.iter().any(|c| !c.is_finite()) {
        return false;
    }
    let Some(dir) = face_newton_direction(&h, &centered, &active) else {
        return false;
    };
    let ascent: f64 = active.iter().map(|&k| centered[k] * dir[k]).sum();
    if !(ascent > 0.0) {
        return false;
    }
    let base = model.mutual_info(alpha);
    let mut t = 1.0;
    while t > 1e-12 {
        let mut cand: Vec<f64> =
            alpha.iter().zip(&dir).map(|(a, d)| (a + t * d).max((1.0 - BOUNDARY_FRACTION) * a)).collect();
        let z: f64 = cand.iter().sum();
        cand.iter_mut().for_each(|x| *x /= z);
        let v = model.mutual_info(&cand);
        // Accept any step that does not lose more than rounding noise.
        if v >= base - 1e-13 * base.abs().max(1.0) {
            *alpha = cand;
            return true;
        }
        t *= 0.5;
    }
    false
}

/// Solve `[H_SS 1; 1ᵀ 0] [Δ; μ] = [-g_S; 0]` for the Newton direction on the
/// face restricted to `active`. Returns a full-length direction.
fn face_newton_direction(h: &[Vec<f64>], grad: &[f64], active: &[usize]) -> Option<Vec<f64>> {
    let s = active.len();
    let mut a = vec![vec![0.0; s + 2]; s + 1];
    for (r, &i) in active.iter().enumerate() {
        for (c, &j) in active.iter().enumerate() {
            a[r][c] = h[i][j];
        }
        // Slight regularization keeps the system solvable when H is only semidefinite on the face.
        a[r][r] -= 1e-12 * h[i][i].abs().max(1e-300);
        a[r][s] = 1.0;
        a[r][s + 1] = -grad[i];
    }
    for c in 0..s {
        a[s][c] = 1.0;
    }
    let x = solve_dense(a)?;
    let mut dir = vec![0.0; grad.len()];
    for (r, &i) in active.iter().enumerate() {
        dir[i] = x[r];
    }
    Some(dir)
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_dense(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-300 || !a[piv][col].is_finite() {
            return None;
        }
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..=n {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    let x: Vec<f64> = (0..n).map(|i| a[i][n] / a[i][i]).collect();
    x.iter().all(|v| v.is_finite()).then_some(x)
}
