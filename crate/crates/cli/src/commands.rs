use num_rational::Rational64;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use noncoherent::capacity::{
    asymptotic_capacity, cv_gap, empirical_support_threshold, erasure_bounds, exact_capacity_large_t, optimize,
    q0_inequalities_hold, q0_sufficient, support_set, DimDist, Model, Q0Source, SUPPORT_THRESHOLD,
};
use noncoherent::channel::{erasure_channel_step, matrix_channel_step, ChannelParams, MacParams};
use noncoherent::formats::{parse_alpha, parse_erasure_dist};
use noncoherent::mac::achievability::{achievability_trial, check_dims, full_column_rank_probability};
use noncoherent::mac::{
    coloring_bound, coloring_corner_dims, coop_bound, corner_count, rate_region_star, AchievabilityResult, RateRegion,
};
use noncoherent::rng::stream_rng;
use noncoherent::MatrixGF;
use rand::Rng;

use crate::error::CliError;
use crate::output::{csv_document, document, fmt17, json_text, num, nums, Manifest};
use crate::{
    CapacityArgs, ChannelArgs, ErasureArgs, MacSimArgs, Method, RegionArgs, SimulateArgs, SupportArgs, SweepArgs,
    Table1Args,
};

/// Trials per independently seeded simulation block.
pub const BLOCK: u64 = 1024;

fn channel(a: &ChannelArgs) -> Result<ChannelParams, CliError> {
    Ok(ChannelParams::new(a.q, a.t, a.m, a.n)?)
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("json! object literal"),
    }
}

pub fn capacity(a: &CapacityArgs) -> Result<String, CliError> {
    let p = channel(&a.channel)?;
    let manifest = Manifest::new("capacity", a, None);
    let log2q = p.log2q();
    let len = DimDist::expected_len(&p);
    let body = match a.method {
        Method::Optimize => {
            let r = optimize(&p, a.tol)?;
            json!({
                "method": "optimize",
                "capacity_bits": num(r.capacity_bits),
                "capacity_per_log2q": num(r.capacity_bits / log2q),
                "alpha_star": nums(r.alpha_star.alpha()),
                "kt_lambda": num(r.kt_lambda),
                "kt_residual": num(r.kt_residual),
                "support": r.alpha_star.support(SUPPORT_THRESHOLD),
                "iterations": r.iterations,
            })
        }
        Method::ExactT => {
            let r = exact_capacity_large_t(&p)?;
            json!({
                "method": "exactT",
                "capacity_bits": num(r.bits),
                "capacity_per_log2q": num(r.bits / log2q),
                "alpha_star": nums(DimDist::point(len, r.i_star).alpha()),
                "kt_lambda": null,
                "kt_residual": null,
                "support": [r.i_star],
                "expansion_bits": num(r.expansion_bits),
            })
        }
        Method::Asymptotic => {
            let r = asymptotic_capacity(&p);
            json!({
                "method": "asymptotic",
                "capacity_bits": num(r.bits),
                "capacity_per_log2q": r.per_log2q,
                "alpha_star": nums(DimDist::point(len, r.i_star).alpha()),
                "kt_lambda": null,
                "kt_residual": null,
                "support": [r.i_star],
            })
        }
    };
    Ok(json_text(&document(&manifest, object(body))))
}

pub fn sweep(a: &SweepArgs) -> Result<String, CliError> {
    let manifest = Manifest::new("sweep", a, None);
    let rows: Vec<Vec<String>> = a
        .qlist
        .par_iter()
        .map(|&q| {
            let p = ChannelParams::new(q, a.t, a.m, a.n)?;
            let r = optimize(&p, a.tol)?;
            Ok(vec![
                q.to_string(),
                fmt17(r.capacity_bits / p.log2q()),
                asymptotic_capacity(&p).per_log2q.to_string(),
            ])
        })
        .collect::<Result<_, CliError>>()?;
    Ok(csv_document(&manifest, &["q", "capacity_per_log2q", "asymptote"], &rows))
}

pub fn support(a: &SupportArgs) -> Result<String, CliError> {
    let p = channel(&a.channel)?;
    let manifest = Manifest::new("support", a, None);
    let r = optimize(&p, a.tol)?;
    let predicted = support_set(&p);
    let numerical = r.alpha_star.support(SUPPORT_THRESHOLD);
    let q0 = q0_sufficient(&p).ok().map(|q| {
        json!({
            "q0": q.q0,
            "source": match q.source {
                Q0Source::Inequalities => "inequalities",
                Q0Source::Fallback => "fallback",
            },
            "inequalities_hold_at_q": q0_inequalities_hold(&p).ok(),
        })
    });
    let empirical = match &a.qlist {
        Some(qs) => empirical_support_threshold(p.m, p.n, p.t, qs, a.tol)?,
        None => None,
    };
    let body = json!({
        "support_set": predicted,
        "numerical_support": numerical,
        "agree": predicted == numerical,
        "threshold": num(SUPPORT_THRESHOLD),
        "alpha_star": nums(r.alpha_star.alpha()),
        "kt_residual": num(r.kt_residual),
        "q0": q0,
        "empirical_threshold_q": empirical,
    });
    Ok(json_text(&document(&manifest, object(body))))
}

fn ratio(r: Rational64) -> Value {
    if *r.denom() == 1 {
        json!(*r.numer())
    } else {
        num(*r.numer() as f64 / *r.denom() as f64)
    }
}

fn corners_json(region: &RateRegion) -> Value {
    Value::Array(region.corners.iter().map(|c| json!([ratio(c.r1), ratio(c.r2)])).collect())
}

fn region_json(region: &RateRegion) -> Value {
    json!({
        "corners": corners_json(region),
        "count": region.corner_count(),
        "regime_ok": region.regime_ok,
    })
}

pub fn region(a: &RegionArgs) -> Result<String, CliError> {
    // q does not enter the coefficients of log2 q.
    let mac = MacParams::new(2, a.t, a.n, a.m1, a.m2)?;
    let manifest = Manifest::new("region", a, None);
    let star = rate_region_star(&mac);
    let coop = coop_bound(&mac);
    let col = coloring_bound(&mac);
    if a.csv {
        let mut rows = Vec::new();
        for (name, reg) in [("star", &star), ("coop", &coop), ("coloring", &col)] {
            for (i, (r1, r2)) in reg.boundary().into_iter().enumerate() {
                rows.push(vec![name.to_string(), i.to_string(), ratio(r1).to_string(), ratio(r2).to_string()]);
            }
        }
        return Ok(csv_document(&manifest, &["region", "vertex", "r1", "r2"], &rows));
    }
    let mut body = object(region_json(&star));
    body.insert(
        "provenance".into(),
        Value::Array(star.corners.iter().map(|c| c.dims.map_or(Value::Null, |(x, y)| json!([x, y]))).collect()),
    );
    body.insert("corner_count_formula".into(), json!(corner_count(&mac)));
    body.insert("coop".into(), region_json(&coop));
    let mut c = object(region_json(&col));
    c.insert("staircase".into(), json!(coloring_corner_dims(&mac)));
    body.insert("coloring".into(), Value::Object(c));
    Ok(json_text(&document(&manifest, body)))
}

/// Split `trials` into seeded blocks and sum the successes in block order.
fn blocks(trials: u64) -> Vec<(u64, u64)> {
    (0..trials.div_ceil(BLOCK)).map(|b| (b, BLOCK.min(trials - b * BLOCK))).collect()
}

pub fn mac_sim(a: &MacSimArgs) -> Result<String, CliError> {
    let mac = MacParams::new(a.q, a.t, a.n, a.m1.unwrap_or(a.d1), a.m2.unwrap_or(a.d2))?;
    check_dims(a.d1, a.d2, &mac)?;
    let field = mac.field()?;
    let manifest = Manifest::new("mac-sim", a, Some(a.seed));
    let successes: u64 = blocks(a.trials)
        .par_iter()
        .map(|&(b, count)| {
            let mut rng = stream_rng(a.seed, b);
            let mut ok = 0u64;
            for _ in 0..count {
                ok += u64::from(achievability_trial(a.d1, a.d2, &mac, &field, &mut rng)?);
            }
            Ok(ok)
        })
        .collect::<Result<Vec<u64>, CliError>>()?
        .into_iter()
        .sum();
    let r = AchievabilityResult::from_counts(a.trials, successes, full_column_rank_probability(a.q, a.n, a.d1 + a.d2));
    let body = json!({
        "trials": r.trials,
        "successes": r.successes,
        "rate": num(r.rate),
        "predicted": num(r.predicted),
        "sigma": num(r.sigma),
    });
    Ok(json_text(&document(&manifest, object(body))))
}

fn sample_index<R: Rng>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (k, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return k;
        }
    }
    probs.iter().rposition(|p| *p > 0.0).unwrap_or(0)
}

pub fn simulate(a: &SimulateArgs) -> Result<String, CliError> {
    let p = channel(&a.channel)?;
    let field = p.field()?;
    let len = DimDist::expected_len(&p);
    let alpha = match &a.dist {
        Some(path) => parse_alpha(&std::fs::read_to_string(path)?)?,
        None => DimDist::uniform(len),
    };
    if alpha.len() != len {
        return Err(CliError::Usage(format!(
            "distribution length {} does not match min(m, T) + 1 = {len}",
            alpha.len()
        )));
    }
    let edist = match &a.erasure {
        Some(s) => {
            if p.n != p.m {
                return Err(CliError::Usage(format!("n = m violated for the erasure channel: n = {}, m = {}", p.n, p.m)));
            }
            Some(parse_erasure_dist(s)?)
        }
        None => None,
    };
    let out_len = p.n.min(p.t) + 1;
    let manifest = Manifest::new("simulate", a, Some(a.seed));
    let parts = blocks(a.trials)
        .par_iter()
        .map(|&(b, count)| {
            let mut rng = stream_rng(a.seed, b);
            let mut dims = vec![0u64; out_len];
            let mut received = vec![0u64; p.m + 1];
            for _ in 0..count {
                let k = sample_index(alpha.alpha(), &mut rng);
                let x = MatrixGF::random_of_rank(p.m, p.t, k, &field, &mut rng)?;
                let y = match &edist {
                    Some(e) => {
                        let (y, got) = erasure_channel_step(&x, e, &p, &mut rng)?;
                        received[got] += 1;
                        y
                    }
                    None => matrix_channel_step(&x, &p, &mut rng)?,
                };
                dims[y.rank()] += 1;
            }
            Ok((dims, received))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut hist = vec![0u64; out_len];
    let mut n_hist = vec![0u64; p.m + 1];
    for (d, r) in parts {
        hist.iter_mut().zip(d).for_each(|(h, x)| *h += x);
        n_hist.iter_mut().zip(r).for_each(|(h, x)| *h += x);
    }
    let total = a.trials.max(1) as f64;
    let empirical: Vec<f64> = hist.iter().map(|&c| c as f64 / total).collect();
    let expected = if edist.is_none() {
        let model = Model::new(&p);
        let e: Vec<f64> = (0..out_len)
            .map(|d| (0..len).map(|k| alpha.alpha()[k] * model.output_law(k, d)).sum())
            .collect();
        nums(&e)
    } else {
        Value::Null
    };
    let body = json!({
        "channel": if edist.is_some() { "erasure" } else { "matrix" },
        "trials": a.trials,
        "alpha": nums(alpha.alpha()),
        "histogram": hist,
        "empirical": nums(&empirical),
        "expected": expected,
        "received_histogram": if edist.is_some() { json!(n_hist) } else { Value::Null },
    });
    Ok(json_text(&document(&manifest, object(body))))
}

pub fn bounds_erasure(a: &ErasureArgs) -> Result<String, CliError> {
    let p = ChannelParams::new(a.q, a.t, a.m, a.m)?;
    let edist = parse_erasure_dist(&a.dist)?;
    let manifest = Manifest::new("bounds erasure", a, None);
    let b = erasure_bounds(&p, &edist)?;
    let body = json!({
        "mu1": num(b.mu1),
        "mu2": num(b.mu2),
        "lower_per_log2q": num(b.lower_per_log2q),
        "upper_per_log2q": num(b.upper_per_log2q),
        "lower_bits": num(b.lower_bits),
        "upper_bits": num(b.upper_bits),
    });
    Ok(json_text(&document(&manifest, object(body))))
}

pub fn table1(a: &Table1Args) -> Result<String, CliError> {
    let ts = a.t.clone().unwrap_or_else(|| vec![(2 * a.m).saturating_sub(1).max(1), 2 * a.m + 4]);
    let manifest = Manifest::new("table1", a, None);
    let grid: Vec<(usize, u64)> = ts.iter().flat_map(|&t| a.qlist.iter().map(move |&q| (t, q))).collect();
    let rows: Vec<Vec<String>> = grid
        .par_iter()
        .map(|&(t, q)| {
            let p = ChannelParams::new(q, t, a.m, a.n)?;
            let g = cv_gap(&p, a.tol)?;
            Ok(vec![
                if t <= 2 * a.m { "T<=2m" } else { "T>2m" }.to_string(),
                t.to_string(),
                q.to_string(),
                g.i_star.to_string(),
                fmt17(g.capacity_bits),
                fmt17(g.rcv_bits),
                fmt17(g.gap_bits),
                fmt17(g.leading_term_bits),
            ])
        })
        .collect::<Result<_, CliError>>()?;
    Ok(csv_document(
        &manifest,
        &["regime", "T", "q", "i_star", "capacity_bits", "rcv_bits", "gap_bits", "leading_term_bits"],
        &rows,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_cover_trials() {
        assert_eq!(blocks(0), vec![]);
        assert_eq!(blocks(1), vec![(0, 1)]);
        let b = blocks(2 * BLOCK + 5);
        assert_eq!(b.len(), 3);
        assert_eq!(b.iter().map(|x| x.1).sum::<u64>(), 2 * BLOCK + 5);
    }

    #[test]
    fn rational_rendering() {
        assert_eq!(ratio(Rational64::from_integer(33)), json!(33));
        assert_eq!(ratio(Rational64::new(12, 5)).to_string(), "2.3999999999999999");
    }
}
