//! Poincaré inequality on S^{2n−1}, read as a measure on pairs (x, y) ∈ R^n × R^n.

use std::f64::consts::PI;
use std::time::Instant;

use super::cauchy::dot;
use super::engine::{check_count, estimate_batch};
use super::gaussian::{check_function_dim, norm_of};
use super::report::InequalityReport;
use crate::error::{domain, Result};
use crate::funcs::TestFunction;
use crate::measures::{norm_sq, sample_sphere_uniform};
use crate::rng::RngStream;

/// `E(f(x) − f(y))² ≤ (π²/4n) ∫|∇f(u)|²(1 − |u|²) dπ(u)` over a uniform `(x, y) ∈ S^{2n−1}`.
///
/// `π` is the law of `x` itself, so both sides come from one batch. For
/// `‖f‖_Lip ≤ 1` the weaker `π²/(8n)` bound is checked as well.
pub fn sphere_poincare_report(f: &TestFunction, n: usize, count: usize, stream: RngStream) -> Result<InequalityReport> {
    let start = Instant::now();
    if n < 2 {
        return Err(domain(format!("sphere inequality requires n >= 2 (got n = {n})")));
    }
    check_function_dim(f, n)?;
    check_count(count)?;
    let coef = PI * PI / (4.0 * n as f64);
    let theta = f.linear_direction();
    let batch = sample_sphere_uniform(2 * n, count, stream)?;
    let est = estimate_batch(&batch, 3, stream, |pt, out| {
        let (x, y) = pt.split_at(n);
        let mut grad = vec![0.0; n];
        let fx = f.eval_grad_into(x, &mut grad);
        out[0] = (fx - f.eval_unchecked(y)).powi(2);
        out[1] = coef * norm_sq(&grad) * (1.0 - norm_sq(x));
        out[2] = match &theta {
            Some(t) => dot(t, x) * dot(t, y),
            None => 0.0,
        };
    })?;
    let (lhs, rhs, cross) = (est[0], est[1], est[2]);
    let lip_line = PI * PI / (8.0 * n as f64);

    let mut report = InequalityReport::new(
        "sphere-poincare E(f(x)-f(y))^2 <= (pi^2/4n) E_pi |grad f|^2 (1-|u|^2)",
        lhs,
        rhs,
        stream.seed,
    )
    .param("n", n)
    .param("function", f.spec())
    .param("scale", f.scale())
    .param("count", count);
    if let Some(t) = &theta {
        // x has covariance I/(2n); E⟨θ,x⟩⟨θ,y⟩ = 0 by (x, y) → (−x, y)
        let t2 = norm_of(t).powi(2);
        report = report
            .with_exact(t2 / n as f64, lip_line * t2)
            .concordance_checks()
            .check(
                "cross_moment_vanishes",
                cross.agrees_with(0.0, 5.0),
                format!("E<theta,x><theta,y> = {} ± {}", cross.mean, cross.std_error),
            );
    }
    let lip = f.lipschitz_bound();
    if lip <= 1.0 {
        report = report.param("lipschitz_line", lip_line).check(
            "lipschitz_line",
            lhs.mean <= lip_line + 3.0 * lhs.std_error,
            format!("LHS {} ± {} vs pi^2/(8n) = {lip_line} (Lipschitz bound {lip})", lhs.mean, lhs.std_error),
        );
    }
    Ok(report.timed(start))
}
