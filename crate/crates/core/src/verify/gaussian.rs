//! Pisier's inequality and the exponential bound under the standard Gaussian measure.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::engine::{check_count, estimate_batch, mc_estimate, MCEstimate};
use super::report::InequalityReport;
use crate::error::{domain, Error, Result};
use crate::funcs::TestFunction;
use crate::measures::{Sampler, StdGaussian};
use crate::rng::RngStream;
use crate::special::{normal_abs_moment, pisier_cp};

/// The convex function Ψ in Pisier's inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Psi {
    /// `|r|^p`, `p ≥ 1`
    Power { p: f64 },
    /// `e^r`
    Exp,
}

impl Psi {
    fn apply(&self, r: f64) -> f64 {
        match *self {
            Psi::Power { p } => r.abs().powf(p),
            Psi::Exp => r.exp(),
        }
    }
}

pub(crate) fn check_function_dim(f: &TestFunction, n: usize) -> Result<()> {
    if f.dim() != n {
        return Err(Error::Shape { expected: n, got: f.dim() });
    }
    Ok(())
}

pub(crate) fn norm_of(theta: &[f64]) -> f64 {
    theta.iter().map(|t| t * t).sum::<f64>().sqrt()
}

/// `E Ψ(f(Y) − f(X)) ≤ E Ψ((π/2)⟨∇f(X), Y⟩)` for independent standard Gaussian `X, Y` in R^n.
pub fn pisier_gaussian_report(
    f: &TestFunction,
    psi: Psi,
    n: usize,
    count: usize,
    stream: RngStream,
) -> Result<InequalityReport> {
    let start = Instant::now();
    check_function_dim(f, n)?;
    if let Psi::Power { p } = psi {
        if !(p >= 1.0) {
            return Err(domain(format!("requires p >= 1 (got p = {p})")));
        }
    }
    check_count(count)?;
    let batch = StdGaussian { n: 2 * n }.sample(count, stream);
    let est = estimate_batch(&batch, 2, stream, |pt, out| {
        let (x, y) = pt.split_at(n);
        let mut grad = vec![0.0; n];
        let fx = f.eval_grad_into(x, &mut grad);
        let fy = f.eval_unchecked(y);
        let dir: f64 = grad.iter().zip(y).map(|(g, yi)| g * yi).sum();
        out[0] = psi.apply(fy - fx);
        out[1] = psi.apply(FRAC_PI_2 * dir);
    })?;
    let mut report = InequalityReport::new(
        format!("pisier[{}] E psi(f(Y)-f(X)) <= E psi((pi/2)<grad f(X),Y>)", psi_name(psi)),
        est[0],
        est[1],
        stream.seed,
    )
    .param("n", n)
    .param("psi", psi)
    .param("function", f.spec())
    .param("scale", f.scale())
    .param("count", count);
    if let Some(theta) = f.linear_direction() {
        let t = norm_of(&theta);
        let (lhs, rhs) = match psi {
            Psi::Power { p } => ((2f64.sqrt() * t).powf(p) * normal_abs_moment(p), pisier_cp(p)? * t.powf(p)),
            // f(Y) − f(X) ~ N(0, 2|θ|²) and (π/2)⟨θ, Y⟩ ~ N(0, (π²/4)|θ|²)
            Psi::Exp => ((t * t).exp(), (PI * PI / 8.0 * t * t).exp()),
        };
        report = report.with_exact(lhs, rhs).concordance_checks();
    }
    Ok(report.timed(start))
}

fn psi_name(psi: Psi) -> String {
    match psi {
        Psi::Power { p } => format!("|r|^{p}"),
        Psi::Exp => "exp".into(),
    }
}

/// `E e^{f(X) − E f} ≤ E e^{(π²/8)|∇f(X)|²}` under γ_n.
///
/// For non-linear `f` the centering constant is estimated on an independent
/// stream and reported; for linear `f` it is exactly 0.
pub fn exp_moment_report(f: &TestFunction, n: usize, count: usize, stream: RngStream) -> Result<InequalityReport> {
    let start = Instant::now();
    check_function_dim(f, n)?;
    check_count(count)?;
    let gauss = StdGaussian { n };
    let center = match f.linear_direction() {
        Some(_) => MCEstimate::exact(0.0),
        None => mc_estimate(|x| f.eval_unchecked(x), &gauss, count, stream.fork("centering"))?,
    };
    let m = center.mean;
    let batch = gauss.sample(count, stream);
    let est = estimate_batch(&batch, 2, stream, |x, out| {
        let mut grad = vec![0.0; n];
        let fx = f.eval_grad_into(x, &mut grad);
        let g2: f64 = grad.iter().map(|g| g * g).sum();
        out[0] = (fx - m).exp();
        out[1] = (PI * PI / 8.0 * g2).exp();
    })?;
    let mut report = InequalityReport::new(
        "exp-moment E exp(f(X) - Ef) <= E exp((pi^2/8)|grad f(X)|^2)",
        est[0],
        est[1],
        stream.seed,
    )
    .param("n", n)
    .param("function", f.spec())
    .param("scale", f.scale())
    .param("count", count)
    .param("centering", center);
    if let Some(theta) = f.linear_direction() {
        let t2 = theta.iter().map(|t| t * t).sum::<f64>();
        report = report.with_exact((0.5 * t2).exp(), (PI * PI / 8.0 * t2).exp()).concordance_checks();
    }
    Ok(report.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::{three_bump_mixture, TestFunctionSpec};
    use crate::verify::report::Verdict;

    const S: RngStream = RngStream::new(2024, 1);

    #[test]
    fn linear_power_one_exact_ratio() {
        let r = pisier_gaussian_report(&TestFunction::coordinate(3), Psi::Power { p: 1.0 }, 3, 200_000, S).unwrap();
        let ex = r.exact.unwrap();
        assert!((ex.ratio.unwrap() - 2.0 * 2f64.sqrt() / PI).abs() < 1e-12);
        assert!(r.checks_pass(), "{:?}", r.checks);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn linear_power_two_exact_ratio() {
        let f = TestFunction::linear(vec![0.5, -1.0]).unwrap();
        let r = pisier_gaussian_report(&f, Psi::Power { p: 2.0 }, 2, 200_000, S).unwrap();
        let ex = r.exact.unwrap();
        assert!((ex.ratio.unwrap() - 8.0 / (PI * PI)).abs() < 1e-12);
        assert!((ex.lhs - 2.0 * 1.25).abs() < 1e-12);
        assert!(r.checks_pass(), "{:?}", r.checks);
    }

    #[test]
    fn rbf_mixture_power_two_holds() {
        let r = pisier_gaussian_report(&three_bump_mixture(2), Psi::Power { p: 2.0 }, 2, 1_000_000, S).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{}", r.summary_line());
    }

    #[test]
    fn exp_psi_linear() {
        let f = TestFunction::linear(vec![0.4]).unwrap();
        let r = pisier_gaussian_report(&f, Psi::Exp, 1, 200_000, S).unwrap();
        let ex = r.exact.unwrap();
        assert!((ex.lhs - 0.16f64.exp()).abs() < 1e-14);
        assert!(r.checks_pass(), "{:?}", r.checks);
    }

    #[test]
    fn rescaling_covariance_on_exact_path() {
        let f = TestFunction::linear(vec![0.3, 0.4]).unwrap();
        let (lam, p) = (2.5, 3.0);
        let a = pisier_gaussian_report(&f, Psi::Power { p }, 2, 1000, S).unwrap().exact.unwrap();
        let b = pisier_gaussian_report(&f.scaled(lam), Psi::Power { p }, 2, 1000, S).unwrap().exact.unwrap();
        assert!((b.lhs / a.lhs - lam.powf(p)).abs() < 1e-9 * lam.powf(p));
        assert!((b.rhs / a.rhs - lam.powf(p)).abs() < 1e-9 * lam.powf(p));
    }

    #[test]
    fn bad_inputs() {
        let f = TestFunction::coordinate(2);
        assert!(matches!(pisier_gaussian_report(&f, Psi::Exp, 3, 1000, S), Err(Error::Shape { .. })));
        assert!(matches!(
            pisier_gaussian_report(&f, Psi::Power { p: 0.5 }, 2, 1000, S),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn exp_moment_linear_exact_sides() {
        let f = TestFunction::linear(vec![0.3, 0.0]).unwrap();
        let r = exp_moment_report(&f, 2, 200_000, S).unwrap();
        let ex = r.exact.unwrap();
        assert!((ex.lhs - 0.045f64.exp()).abs() < 1e-14);
        assert!((ex.rhs - (PI * PI * 0.09 / 8.0).exp()).abs() < 1e-14);
        assert!((ex.rhs - 1.117_432).abs() < 1e-6);
        assert!(r.checks_pass(), "{:?}", r.checks);
    }

    #[test]
    fn exp_moment_zero_function() {
        let f = TestFunction::linear(vec![0.0, 0.0]).unwrap();
        let r = exp_moment_report(&f, 2, 1000, S).unwrap();
        assert_eq!((r.lhs.mean, r.rhs.mean), (1.0, 1.0));
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn exp_moment_smoothed_halfspace_holds() {
        let f = TestFunctionSpec::SmoothedHalfspace { theta: vec![1.0, 0.0], offset: 0.0, softness: 1.0 }
            .build()
            .unwrap();
        let r = exp_moment_report(&f, 2, 1_000_000, S).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{}", r.summary_line());
        assert!(r.params.contains_key("centering"));
    }
}
