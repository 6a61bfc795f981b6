//! Subgaussian deviations and moment bounds for Lipschitz functions under Cauchy pair measures.

use std::time::Instant;

use super::cauchy::linear_difference_moment;
use super::engine::{check_count, estimate_batch, MCEstimate};
use super::gaussian::{check_function_dim, norm_of};
use super::report::{InequalityReport, ReportSet};
use crate::error::{domain, Result};
use crate::funcs::TestFunction;
use crate::measures::{cauchy_radial_cdf, sample_cauchy, CauchyParams, PointBatch};
use crate::rng::RngStream;
use crate::special::lipschitz_moment_bound;

pub const MOMENT_ORDERS: [f64; 3] = [1.0, 2.0, 4.0];

/// Integer grid `0, 1, …, ⌊√(α − n)⌋`.
pub fn default_t_grid(params: CauchyParams) -> Vec<f64> {
    let top = (params.alpha() - params.n() as f64).sqrt().floor() as usize;
    (0..=top).map(|t| t as f64).collect()
}

/// Tail and moment lines for `f / ‖f‖_Lip` with `params = (n, α)`:
/// `P(√(α−n)|f(x) − f(y)| ≥ t) ≤ 2e^{−t²/12}` under `m_{2n,α}`,
/// `≤ 4e^{−t²/12}` under `m_{n,α} ⊗ m_{n,α}` when `α ≥ n²`, and
/// `E|f(x) − f(y)|^p ≤ 2(2p/(α−n))^{p/2}` for `p ∈ {1, 2, 4}` in range.
pub fn tail_and_moment_report(
    f: &TestFunction,
    params: CauchyParams,
    t_grid: &[f64],
    count: usize,
    stream: RngStream,
) -> Result<ReportSet> {
    let start = Instant::now();
    let (n, alpha) = (params.n(), params.alpha());
    let nf = n as f64;
    if !(alpha >= nf + 1.5) {
        return Err(domain(format!("tails: requires alpha >= n + 3/2 (got n = {n}, alpha = {alpha})")));
    }
    check_function_dim(f, n)?;
    check_count(count)?;
    let g = f.normalized();
    let excess = alpha - nf;
    let root = excess.sqrt();
    let mut out = ReportSet::new("tails-and-moments", stream.seed);

    let (ts, dropped): (Vec<f64>, Vec<f64>) = t_grid.iter().partition(|t| (0.0..=root).contains(*t));
    if !dropped.is_empty() {
        out.notes.push(format!("t values outside [0, sqrt(alpha - n)] = [0, {root}] dropped: {dropped:?}"));
    }
    // p ≤ 2(α−n−1) for the bound; p < α − n for finite variance of the MC estimate
    let (moment_ps, unsampled): (Vec<f64>, Vec<f64>) =
        MOMENT_ORDERS.iter().filter(|p| **p <= 2.0 * (excess - 1.0)).partition(|p| **p < excess);
    let theta_norm = g.linear_direction().map(|t| norm_of(&t));

    let pair_stream = stream.fork("pair");
    let batch = sample_cauchy(CauchyParams::new(2 * n, alpha)?, count, pair_stream);
    let k = ts.len();
    let est = estimate_batch(&batch, k + moment_ps.len(), pair_stream, |pt, o| {
        let (x, y) = pt.split_at(n);
        let delta = (g.eval_unchecked(x) - g.eval_unchecked(y)).abs();
        for (slot, t) in o.iter_mut().zip(&ts) {
            *slot = f64::from(u8::from(root * delta >= *t));
        }
        for (slot, p) in o[k..].iter_mut().zip(&moment_ps) {
            *slot = delta.powf(*p);
        }
    })?;

    // √(α−n)|Δ| = √(2(α−n))|θ| |T| with T ~ m_{1, α−n+1/2} for linear f
    let one_dim = CauchyParams::new(1, excess + 0.5)?;
    for (t, tail) in ts.iter().zip(&est[..k]) {
        let bound = 2.0 * (-t * t / 12.0).exp();
        let mut r = InequalityReport::new(
            format!("tail m_2n,alpha(sqrt(alpha-n)|f(x)-f(y)| >= {t}) <= 2 exp(-t^2/12)"),
            *tail,
            MCEstimate::exact(bound),
            stream.seed,
        )
        .param("t", t)
        .param("n", n)
        .param("alpha", alpha);
        if let Some(th) = theta_norm.filter(|th| *th > 0.0) {
            let s = t / ((2.0 * excess).sqrt() * th);
            let exact = if *t == 0.0 { 1.0 } else { 1.0 - cauchy_radial_cdf(one_dim, s) };
            // binomial error under the exact probability, so that zero-hit tails are judged fairly
            let se = (exact * (1.0 - exact) / tail.count as f64).sqrt();
            r = r.with_exact(exact, bound).check(
                "tail_matches_exact",
                (tail.mean - exact).abs() <= 5.0 * se + 1e-12,
                format!("mc {} vs exact {exact} (binomial se {se:e})", tail.mean),
            );
        }
        out.reports.push(r);
    }

    if alpha >= nf * nf {
        let prod_stream = stream.fork("product");
        let points = sample_cauchy(params, 2 * count, prod_stream);
        let pairs = PointBatch::new(2 * n, points.into_data())?;
        let tails = estimate_batch(&pairs, k, prod_stream, |pt, o| {
            let (x, y) = pt.split_at(n);
            let delta = (g.eval_unchecked(x) - g.eval_unchecked(y)).abs();
            for (slot, t) in o.iter_mut().zip(&ts) {
                *slot = f64::from(u8::from(root * delta >= *t));
            }
        })?;
        for (t, tail) in ts.iter().zip(tails) {
            out.reports.push(
                InequalityReport::new(
                    format!("tail m_n,alpha x m_n,alpha(sqrt(alpha-n)|f(x)-f(y)| >= {t}) <= 4 exp(-t^2/12)"),
                    tail,
                    MCEstimate::exact(4.0 * (-t * t / 12.0).exp()),
                    stream.seed,
                )
                .param("t", t)
                .param("n", n)
                .param("alpha", alpha),
            );
        }
    } else {
        out.notes.push(format!("product-measure tails skipped: requires alpha >= n^2 = {}", nf * nf));
    }

    for (p, moment) in moment_ps.iter().zip(&est[k..]) {
        let bound = lipschitz_moment_bound(n, alpha, *p)?;
        let mut r = InequalityReport::new(
            format!("moment E|f(x)-f(y)|^{p} <= 2 (2p/(alpha-n))^(p/2)"),
            *moment,
            MCEstimate::exact(bound),
            stream.seed,
        )
        .param("p", p)
        .param("n", n)
        .param("alpha", alpha)
        .param("scaled_bound", bound * excess.powf(0.5 * p));
        if let Some(th) = theta_norm {
            r = r.with_exact(linear_difference_moment(th, n, alpha, *p)?, bound).concordance_checks();
        }
        out.reports.push(r);
    }
    for p in unsampled {
        let bound = lipschitz_moment_bound(n, alpha, p)?;
        match theta_norm {
            Some(th) => {
                let exact = linear_difference_moment(th, n, alpha, p)?;
                out.reports.push(
                    InequalityReport::new(
                        format!("moment E|f(x)-f(y)|^{p} <= 2 (2p/(alpha-n))^(p/2)"),
                        MCEstimate::exact(exact),
                        MCEstimate::exact(bound),
                        stream.seed,
                    )
                    .param("p", p)
                    .param("n", n)
                    .param("alpha", alpha)
                    .with_exact(exact, bound)
                    .note(format!("Monte Carlo omitted: variance guard needs p < alpha - n = {excess}")),
                );
            }
            None => out.notes.push(format!(
                "moment p = {p} omitted: Monte Carlo needs p < alpha - n = {excess} and f has no closed form"
            )),
        }
    }

    out.extra("n", n);
    out.extra("alpha", alpha);
    out.extra("lipschitz_bound", f.lipschitz_bound());
    out.extra("function", f.spec());
    out.extra("t_grid", &ts);
    out.runtime_seconds = start.elapsed().as_secs_f64();
    Ok(out)
}
