//! Perimeters (outer Minkowski content) and the isoperimetric inequalities
//! for Gaussian and Cauchy measures.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::engine::{check_count, estimate_batch, MCEstimate};
use super::report::{InequalityReport, ReportSet};
use crate::error::{domain, Error, Result};
use crate::measures::{
    cauchy_1d_cdf, cauchy_1d_density, cauchy_radial_cdf, gaussian_radial_cdf, ln_sphere_area, marginal_order, norm,
    sample_cauchy, sample_std_gaussian, CauchyParams, PointBatch,
};
use crate::quad::composite_gauss;
use crate::rng::RngStream;
use crate::special::{product_bound_d, std_normal_cdf, IDENTITY_RTOL};

/// Default ε ladder for the Minkowski quotients.
pub const DEFAULT_EPS: [f64; 3] = [0.2, 0.1, 0.05];

/// A closed set handled through its exact signed distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetSpec {
    /// `{x : ⟨θ, x⟩ ≤ offset}` with `|θ| = 1`.
    HalfSpace { theta: Vec<f64>, offset: f64 },
    /// `{x : |x| ≤ radius}`.
    CenteredBall { radius: f64 },
}

impl SetSpec {
    /// Normalizes `theta`; rejects zero or non-finite input.
    pub fn half_space(theta: Vec<f64>, offset: f64) -> Result<Self> {
        let len = norm(&theta);
        if !(len > 0.0 && len.is_finite()) || !offset.is_finite() {
            return Err(Error::Config("half-space needs a non-zero finite direction and finite offset".into()));
        }
        Ok(SetSpec::HalfSpace { theta: theta.iter().map(|t| t / len).collect(), offset })
    }

    pub fn ball(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Config(format!("ball radius must be positive (got {radius})")));
        }
        Ok(SetSpec::CenteredBall { radius })
    }

    /// `halfspace:c` (direction e₁) or `ball:r`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let bad = || Error::Config(format!("unrecognized set '{text}' (expected halfspace:<c> or ball:<r>)"));
        let (kind, value) = text.split_once(':').ok_or_else(bad)?;
        let value: f64 = value.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "halfspace" | "half-space" | "half_space" => {
                let mut theta = vec![0.0; n.max(1)];
                theta[0] = 1.0;
                Self::half_space(theta, value)
            }
            "ball" => Self::ball(value),
            _ => Err(bad()),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            SetSpec::HalfSpace { theta, offset } => {
                if theta.len() != n {
                    return Err(Error::Shape { expected: n, got: theta.len() });
                }
                if (norm(theta) - 1.0).abs() > 1e-12 || !offset.is_finite() {
                    return Err(domain("half-space direction must be a unit vector"));
                }
            }
            SetSpec::CenteredBall { radius } if !(*radius > 0.0 && radius.is_finite()) => {
                return Err(domain(format!("ball radius must be positive (got {radius})")));
            }
            SetSpec::CenteredBall { .. } => {}
        }
        Ok(())
    }

    /// Positive outside the set, non-positive inside; equals the Euclidean
    /// distance to the set for outside points.
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        match self {
            SetSpec::HalfSpace { theta, offset } => theta.iter().zip(x).map(|(t, v)| t * v).sum::<f64>() - offset,
            SetSpec::CenteredBall { radius } => norm(x) - radius,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.signed_distance(x) <= 0.0
    }
}

/// A rotation-invariant probability measure on R^n with closed-form set measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PerimeterMeasure {
    Gaussian { n: usize },
    Cauchy(CauchyParams),
}

impl PerimeterMeasure {
    pub fn dim(&self) -> usize {
        match self {
            PerimeterMeasure::Gaussian { n } => *n,
            PerimeterMeasure::Cauchy(p) => p.n(),
        }
    }

    pub fn sample(&self, count: usize, stream: RngStream) -> PointBatch {
        match self {
            PerimeterMeasure::Gaussian { n } => sample_std_gaussian(*n, count, stream),
            PerimeterMeasure::Cauchy(p) => sample_cauchy(*p, count, stream),
        }
    }

    /// Order of the one-dimensional marginal (Cauchy only).
    fn marginal(p: &CauchyParams) -> f64 {
        marginal_order(p.n(), 1, p.alpha()).expect("1 <= n")
    }

    pub fn measure_of(&self, set: &SetSpec) -> f64 {
        match (self, set) {
            (PerimeterMeasure::Gaussian { .. }, SetSpec::HalfSpace { offset, .. }) => std_normal_cdf(*offset),
            (PerimeterMeasure::Gaussian { n }, SetSpec::CenteredBall { radius }) => gaussian_radial_cdf(*n, *radius),
            (PerimeterMeasure::Cauchy(p), SetSpec::HalfSpace { offset, .. }) => cauchy_1d_cdf(Self::marginal(p), *offset),
            (PerimeterMeasure::Cauchy(p), SetSpec::CenteredBall { radius }) => cauchy_radial_cdf(*p, *radius),
        }
    }

    /// Exact perimeter: the marginal density at the offset for half-spaces,
    /// `n ω_n r^{n−1} w(r)` for centered balls.
    pub fn perimeter_of(&self, set: &SetSpec) -> f64 {
        match (self, set) {
            (PerimeterMeasure::Gaussian { .. }, SetSpec::HalfSpace { offset, .. }) => {
                (-0.5 * offset * offset).exp() / (2.0 * PI).sqrt()
            }
            (PerimeterMeasure::Cauchy(p), SetSpec::HalfSpace { offset, .. }) => {
                cauchy_1d_density(Self::marginal(p), *offset)
            }
            (m, SetSpec::CenteredBall { radius: r }) => {
                let n = m.dim();
                let ln_w = match m {
                    PerimeterMeasure::Gaussian { .. } => -0.5 * n as f64 * (2.0 * PI).ln() - 0.5 * r * r,
                    PerimeterMeasure::Cauchy(p) => -p.ln_norm_const() - p.alpha() * (r * r).ln_1p(),
                };
                (ln_sphere_area(n) + (n as f64 - 1.0) * r.ln() + ln_w).exp()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerimeterEstimate {
    pub eps: Vec<f64>,
    /// `(ν(A_ε) − ν(A)) / ε` for each ε.
    pub quotients: Vec<MCEstimate>,
    /// Intercept of the least-squares line through the three smallest ε.
    pub mc_extrapolated: MCEstimate,
    pub weights: Vec<f64>,
    pub analytic: f64,
}

impl PerimeterEstimate {
    pub fn agrees(&self, k: f64) -> bool {
        self.mc_extrapolated.agrees_with(self.analytic, k)
    }
}

/// Least-squares intercept as a linear combination of the observations.
fn intercept_weights(xs: &[f64]) -> Vec<f64> {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
    xs.iter().map(|x| 1.0 / k - mean * (x - mean) / sxx).collect()
}

/// Minkowski quotients from exact signed distances, extrapolated linearly to ε → 0.
///
/// The extrapolated value is a fixed linear combination of per-point
/// indicators, so it is estimated as one more output and its standard error
/// is exact rather than propagated.
pub fn perimeter_estimate(
    measure: PerimeterMeasure,
    set: &SetSpec,
    eps: &[f64],
    count: usize,
    stream: RngStream,
) -> Result<PerimeterEstimate> {
    set.validate(measure.dim())?;
    check_count(count)?;
    if eps.len() < 3 {
        return Err(domain(format!("perimeter extrapolation needs at least 3 eps values (got {})", eps.len())));
    }
    if !eps.iter().all(|e| *e > 0.0 && e.is_finite()) || !eps.windows(2).all(|w| w[1] < w[0]) {
        return Err(domain("eps values must be positive and strictly decreasing"));
    }
    let fit = &eps[eps.len() - 3..];
    let weights = intercept_weights(fit);
    let k = eps.len();
    let batch = measure.sample(count, stream);
    let est = estimate_batch(&batch, k + 1, stream, |x, out| {
        let d = set.signed_distance(x);
        let mut combo = 0.0;
        for (j, e) in eps.iter().enumerate() {
            out[j] = if d > 0.0 && d < *e { 1.0 / e } else { 0.0 };
            if j + 3 >= k {
                combo += weights[j + 3 - k] * out[j];
            }
        }
        out[k] = combo;
    })?;
    Ok(PerimeterEstimate {
        eps: eps.to_vec(),
        quotients: est[..k].to_vec(),
        mc_extrapolated: est[k],
        weights,
        analytic: measure.perimeter_of(set),
    })
}

/// Which isoperimetric family to check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsoMeasure {
    Gaussian { n: usize },
    /// Perimeter measured under `m_{n,β}`.
    Cauchy { n: usize, beta: f64 },
}

/// `P(⟨θ,x⟩ ≤ c < ⟨θ,y⟩)` under `m_{2n,α}`.
///
/// The projection `(⟨θ,x⟩, ⟨θ,y⟩)` has law `m_{2,a}` with `a = α − n + 1`;
/// conditioning on the first coordinate `s`, the second is `√(1+s²)` times an
/// `m_{1,a}` variable. With `s = tan φ`:
/// `∫_{−π/2}^{atan c} cos^{2a−3}φ / c_{1,a−½} · (1 − F_a(c cos φ)) dφ`.
pub fn half_space_cross_mass(n: usize, alpha: f64, offset: f64) -> Result<f64> {
    let a = marginal_order(2 * n, 2, alpha)?;
    if !(a >= 1.5) {
        return Err(domain(format!("half-space cross mass requires alpha >= n + 1/2 (got n = {n}, alpha = {alpha})")));
    }
    let ln_c = CauchyParams::new(1, a - 0.5)?.ln_norm_const();
    let integrand = |phi: f64| {
        let cos = phi.cos();
        if cos <= 0.0 {
            return 0.0;
        }
        ((2.0 * a - 3.0) * cos.ln() - ln_c).exp() * (1.0 - cauchy_1d_cdf(a, offset * cos))
    };
    Ok(composite_gauss(integrand, -FRAC_PI_2, offset.atan(), 64))
}

/// Isoperimetric checks for one set, bundled by measure family.
///
/// Cauchy (`α = β* = β + (n+1)/2`):
/// (i) `m⁺_{n,β}(A) ≥ (2√(α−n)/√π) m_{2n,α}(A × A^c)`;
/// (ii) `m⁺_{n,β}(A) ≥ c m_{n,β*}(A)(1 − m_{n,β*}(A))`, `c = (d/√π)√(2β)`.
/// Gaussian: the Cheeger form `√(2/π) min(γ, 1−γ)` and the product form `2√(2/π) γ(1−γ)`.
pub fn isoperimetry_report(measure: IsoMeasure, set: &SetSpec, count: usize, stream: RngStream) -> Result<ReportSet> {
    let start = Instant::now();
    check_count(count)?;
    let mut out = match measure {
        IsoMeasure::Gaussian { n } => gaussian_isoperimetry(n, set, count, stream)?,
        IsoMeasure::Cauchy { n, beta } => cauchy_isoperimetry(n, beta, set, count, stream)?,
    };
    out.extra("set", set);
    out.extra("measure", measure);
    out.runtime_seconds = start.elapsed().as_secs_f64();
    Ok(out)
}

fn perimeter_check(report: InequalityReport, est: &PerimeterEstimate) -> InequalityReport {
    report.check(
        "perimeter_mc_matches_analytic",
        est.agrees(5.0),
        format!(
            "extrapolated {} ± {} vs analytic {}",
            est.mc_extrapolated.mean, est.mc_extrapolated.std_error, est.analytic
        ),
    )
}

fn gaussian_isoperimetry(n: usize, set: &SetSpec, count: usize, stream: RngStream) -> Result<ReportSet> {
    if n == 0 {
        return Err(domain("requires n >= 1"));
    }
    set.validate(n)?;
    let pm = PerimeterMeasure::Gaussian { n };
    let perim = pm.perimeter_of(set);
    let g = pm.measure_of(set);
    let h = (2.0 / PI).sqrt();
    let cheeger = h * g.min(1.0 - g);
    let product = 2.0 * h * g * (1.0 - g);
    let est = perimeter_estimate(pm, set, &DEFAULT_EPS, count, stream.fork("perimeter"))?;

    let through_origin = matches!(set, SetSpec::HalfSpace { offset, .. } if *offset == 0.0);
    let exact = |label: &str, lhs: f64| {
        let mut r = InequalityReport::new(label, MCEstimate::exact(lhs), MCEstimate::exact(perim), stream.seed)
            .param("n", n)
            .param("measure_of_set", g)
            .param("perimeter", perim);
        if through_origin {
            r = r.check(
                "equality_for_half_space_through_origin",
                (lhs - perim).abs() <= IDENTITY_RTOL * perim,
                format!("{lhs} vs {perim}"),
            );
        }
        r
    };
    let mut set_out = ReportSet::new("gaussian-isoperimetry", stream.seed);
    set_out.reports.push(perimeter_check(
        exact("gaussian-cheeger sqrt(2/pi) min(g, 1-g) <= g+(A)", cheeger),
        &est,
    ));
    set_out.reports.push(exact("gaussian-product 2 sqrt(2/pi) g(1-g) <= g+(A)", product));
    set_out.extra("perimeter_estimate", &est);
    Ok(set_out)
}

fn cauchy_isoperimetry(n: usize, beta: f64, set: &SetSpec, count: usize, stream: RngStream) -> Result<ReportSet> {
    let nf = n as f64;
    if n == 0 {
        return Err(domain("requires n >= 1"));
    }
    if !(beta >= 0.5 * (nf + 1.0)) || !beta.is_finite() {
        return Err(domain(format!("requires beta >= (n+1)/2 (got n = {n}, beta = {beta})")));
    }
    set.validate(n)?;
    let alpha = beta + 0.5 * (nf + 1.0);
    let perim_measure = PerimeterMeasure::Cauchy(CauchyParams::new(n, beta)?);
    let perim = perim_measure.perimeter_of(set);

    // (i): the right side is a mass under the pair measure m_{2n,α}
    let k_i = 2.0 * (alpha - nf).sqrt() / PI.sqrt();
    let pair = CauchyParams::new(2 * n, alpha)?;
    let mc_stream = stream.fork("pair-mass");
    let batch = sample_cauchy(pair, count, mc_stream);
    let mc_mass = estimate_batch(&batch, 1, mc_stream, |pt, o| {
        let (x, y) = pt.split_at(n);
        o[0] = if set.contains(x) && !set.contains(y) { 1.0 } else { 0.0 };
    })?
    .remove(0);
    let mut first = match set {
        SetSpec::HalfSpace { offset, .. } => {
            let mass = half_space_cross_mass(n, alpha, *offset)?;
            InequalityReport::new(
                "cauchy-isoperimetry (i) 2 sqrt(alpha-n)/sqrt(pi) m_2n,alpha(A x A^c) <= m+_n,beta(A)",
                MCEstimate::exact(k_i * mass),
                MCEstimate::exact(perim),
                stream.seed,
            )
            .param("pair_mass", mass)
            .param("pair_mass_method", "quadrature")
            .check(
                "pair_mass_mc_cross_check",
                mc_mass.agrees_with(mass, 5.0),
                format!("quadrature {mass} vs MC {} ± {}", mc_mass.mean, mc_mass.std_error),
            )
        }
        SetSpec::CenteredBall { .. } => InequalityReport::new(
            "cauchy-isoperimetry (i) 2 sqrt(alpha-n)/sqrt(pi) m_2n,alpha(A x A^c) <= m+_n,beta(A)",
            mc_mass.scaled(k_i),
            MCEstimate::exact(perim),
            stream.seed,
        )
        .param("pair_mass", mc_mass.mean)
        .param("pair_mass_method", "monte-carlo"),
    }
    .param("n", n)
    .param("beta", beta)
    .param("alpha", alpha)
    .param("coefficient", k_i)
    .param("perimeter", perim);
    let est = perimeter_estimate(perim_measure, set, &DEFAULT_EPS, count, stream.fork("perimeter"))?;
    first = perimeter_check(first, &est);

    // (ii): the set is measured under m_{n,β*} with β* = α
    let d = product_bound_d(n, alpha)?;
    let c = d / PI.sqrt() * (2.0 * beta).sqrt();
    let m_star = PerimeterMeasure::Cauchy(CauchyParams::new(n, alpha)?).measure_of(set);
    let second = InequalityReport::new(
        "cauchy-isoperimetry (ii) c m_n,beta*(A)(1 - m_n,beta*(A)) <= m+_n,beta(A)",
        MCEstimate::exact(c * m_star * (1.0 - m_star)),
        MCEstimate::exact(perim),
        stream.seed,
    )
    .param("n", n)
    .param("beta", beta)
    .param("beta_star", alpha)
    .param("d", d)
    .param("c", c)
    .param("measure_of_set", m_star)
    .param("perimeter", perim);

    let mut out = ReportSet::new("cauchy-isoperimetry", stream.seed);
    out.reports.push(first);
    out.reports.push(second);
    out.extra("perimeter_estimate", &est);
    Ok(out)
}
