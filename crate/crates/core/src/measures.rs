//! Gaussian, Cauchy, chi, uniform-sphere, and ball-marginal measures.
//!
//! Samplers fill a [`PointBatch`] in fixed-size chunks, chunk `k` drawing
//! from `stream.child(k)`. Output is bit-identical for a given stream
//! regardless of thread count.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rng::{RngStream, StreamRng};
use crate::special::{self, ln_cauchy_norm_const, ln_gamma_unchecked};

/// Points per chunk in every sampler.
pub const CHUNK_POINTS: usize = 4096;

/// Dimension `n` and order `alpha` of the Cauchy measure `m_{n,α}` with
/// density proportional to `(1 + |x|²)^{−α}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCauchyParams")]
pub struct CauchyParams {
    n: usize,
    alpha: f64,
}

#[derive(Deserialize)]
struct RawCauchyParams {
    n: usize,
    alpha: f64,
}

impl TryFrom<RawCauchyParams> for CauchyParams {
    type Error = Error;
    fn try_from(raw: RawCauchyParams) -> Result<Self> {
        Self::new(raw.n, raw.alpha)
    }
}

impl CauchyParams {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("requires dimension n >= 1"));
        }
        if !(alpha > 0.5 * n as f64) || !alpha.is_finite() {
            return Err(Error::DivergentMeasure { n, alpha });
        }
        Ok(Self { n, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Degrees of freedom `d = 2α − n` of the chi variable in `X = Z/η`.
    pub fn dof(&self) -> f64 {
        2.0 * self.alpha - self.n as f64
    }

    pub fn ln_norm_const(&self) -> f64 {
        ln_cauchy_norm_const(self.n, self.alpha).expect("validated on construction")
    }
}

/// `count` points of dimension `dim`, stored contiguously point by point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointBatch {
    dim: usize,
    count: usize,
    data: Vec<f64>,
}

impl PointBatch {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(domain("point dimension must be >= 1"));
        }
        if data.len() % dim != 0 {
            return Err(Error::Shape { expected: dim, got: data.len() % dim });
        }
        if let Some(bad) = data.iter().position(|v| !v.is_finite()) {
            let start = bad - bad % dim;
            return Err(Error::PoisonedSample { point: data[start..start + dim].to_vec() });
        }
        Ok(Self { dim, count: data.len() / dim, data })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, count: 0, data: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.dim)
    }

    /// Values of coordinate `j` across the batch.
    pub fn coordinate(&self, j: usize) -> Vec<f64> {
        self.points().map(|p| p[j]).collect()
    }

    /// Euclidean norms of all points.
    pub fn norms(&self) -> Vec<f64> {
        self.points().map(norm).collect()
    }

    /// The first `k` coordinates of each point.
    pub fn leading(&self, k: usize) -> PointBatch {
        assert!(k >= 1 && k <= self.dim);
        let data = self.points().flat_map(|p| p[..k].iter().copied()).collect();
        PointBatch { dim: k, count: self.count, data }
    }

    /// CSV with a header `x1,...,xn` and one point per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (1..=self.dim).map(|j| format!("x{j}")).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for p in self.points() {
            let row: Vec<String> = p.iter().map(|v| format!("{v:e}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// A measure that can produce reproducible i.i.d. batches.
pub trait Sampler: Sync {
    fn dim(&self) -> usize;
    fn sample(&self, count: usize, stream: RngStream) -> PointBatch;
}

impl<F> Sampler for (usize, F)
where
    F: Fn(usize, RngStream) -> PointBatch + Sync,
{
    fn dim(&self) -> usize {
        self.0
    }
    fn sample(&self, count: usize, stream: RngStream) -> PointBatch {
        (self.1)(count, stream)
    }
}

/// Fills `count` points of dimension `dim`, one chunk per child stream.
pub(crate) fn fill_chunked<F>(dim: usize, count: usize, stream: RngStream, draw: F) -> PointBatch
where
    F: Fn(&mut StreamRng, &mut [f64]) + Sync,
{
    let mut data = vec![0.0; dim * count];
    data.par_chunks_mut(CHUNK_POINTS * dim)
        .enumerate()
        .for_each(|(k, chunk)| {
            let mut rng = stream.child(k as u64).rng();
            for point in chunk.chunks_exact_mut(dim) {
                draw(&mut rng, point);
            }
        });
    PointBatch { dim, count, data }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Standard Gaussian measure γ_n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StdGaussian {
    pub n: usize,
}

impl Sampler for StdGaussian {
    fn dim(&self) -> usize {
        self.n
    }
    fn sample(&self, count: usize, stream: RngStream) -> PointBatch {
        sample_std_gaussian(self.n, count, stream)
    }
}

pub fn sample_std_gaussian(n: usize, count: usize, stream: RngStream) -> PointBatch {
    assert!(n >= 1, "dimension must be positive");
    fill_chunked(n, count, stream, |rng, point| {
        for v in point {
            *v = rng.sample(StandardNormal);
        }
    })
}

/// χ_d draws (one-dimensional batch), via the square root of a
/// Gamma(d/2, scale 2) variate so that `d` need not be an integer.
pub fn sample_chi(d: f64, count: usize, stream: RngStream) -> Result<PointBatch> {
    let gamma = chi_squared(d)?;
    Ok(fill_chunked(1, count, stream, |rng, point| {
        point[0] = draw_positive_chi(&gamma, rng);
    }))
}

fn chi_squared(d: f64) -> Result<Gamma<f64>> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(domain(format!("chi distribution requires d > 0 (got {d})")));
    }
    Gamma::new(0.5 * d, 2.0).map_err(|e| domain(e.to_string()))
}

fn draw_positive_chi(gamma: &Gamma<f64>, rng: &mut StreamRng) -> f64 {
    // For tiny d the Gamma variate can underflow to 0; redraw.
    loop {
        let r = gamma.sample(rng).sqrt();
        if r > 0.0 {
            return r;
        }
    }
}

impl Sampler for CauchyParams {
    fn dim(&self) -> usize {
        self.n
    }
    fn sample(&self, count: usize, stream: RngStream) -> PointBatch {
        sample_cauchy(*self, count, stream)
    }
}

/// Draws from `m_{n,α}` as `Z/η` with `Z ~ γ_n` and `η ~ χ_{2α−n}` independent.
pub fn sample_cauchy(params: CauchyParams, count: usize, stream: RngStream) -> PointBatch {
    let gamma = chi_squared(params.dof()).expect("validated on construction");
    fill_chunked(params.n, count, stream, |rng, point| {
        for v in point.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        let inv = 1.0 / draw_positive_chi(&gamma, rng);
        for v in point.iter_mut() {
            *v *= inv;
        }
    })
}

/// `log w_{n,α}(x) = −log c_{n,α} − α log(1 + |x|²)`.
pub fn cauchy_log_density(params: CauchyParams, x: &[f64]) -> Result<f64> {
    if x.len() != params.n {
        return Err(Error::Shape { expected: params.n, got: x.len() });
    }
    Ok(-params.ln_norm_const() - params.alpha * norm_sq(x).ln_1p())
}

/// `∫|x|^p dm_{n,α} = Γ(α−(n+p)/2) Γ((n+p)/2) / (Γ(α−n/2) Γ(n/2))`.
pub fn cauchy_radial_moment(params: CauchyParams, p: f64) -> Result<f64> {
    if !(p >= 0.0) {
        return Err(domain(format!("requires p >= 0 (got {p})")));
    }
    let bound = params.dof();
    if !(p < bound) {
        return Err(Error::InfiniteMoment { p, bound });
    }
    let (nf, a) = (params.n as f64, params.alpha);
    Ok((ln_gamma_unchecked(a - 0.5 * (nf + p)) + ln_gamma_unchecked(0.5 * (nf + p))
        - ln_gamma_unchecked(a - 0.5 * nf)
        - ln_gamma_unchecked(0.5 * nf))
    .exp())
}

/// Order `α − (N−k)/2` of the k-dimensional projection of `m_{N,α}`.
pub fn marginal_order(big_n: usize, k: usize, alpha: f64) -> Result<f64> {
    if k == 0 || k > big_n {
        return Err(domain(format!("requires 1 <= k <= N (got N = {big_n}, k = {k})")));
    }
    CauchyParams::new(big_n, alpha)?;
    Ok(alpha - 0.5 * (big_n - k) as f64)
}

/// `P(|X| ≤ r)` under `m_{n,α}`: the regularized incomplete beta
/// `I_{r²/(1+r²)}(n/2, α − n/2)`.
pub fn cauchy_radial_cdf(params: CauchyParams, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    if r.is_infinite() {
        return 1.0;
    }
    let nf = params.n as f64;
    let r2 = r * r;
    special::regularized_beta(r2 / (1.0 + r2), 0.5 * nf, params.alpha - 0.5 * nf)
}

/// CDF of the one-dimensional Cauchy measure `m_{1,α}`.
pub fn cauchy_1d_cdf(alpha: f64, x: f64) -> f64 {
    let params = CauchyParams::new(1, alpha).expect("requires alpha > 1/2");
    let half = 0.5 * cauchy_radial_cdf(params, x.abs());
    if x >= 0.0 {
        0.5 + half
    } else {
        0.5 - half
    }
}

/// Density of `m_{1,α}`.
pub fn cauchy_1d_density(alpha: f64, x: f64) -> f64 {
    let params = CauchyParams::new(1, alpha).expect("requires alpha > 1/2");
    (-params.ln_norm_const() - alpha * (x * x).ln_1p()).exp()
}

/// `P(|Z| ≤ r)` under γ_n.
pub fn gaussian_radial_cdf(n: usize, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    special::regularized_gamma_p(0.5 * n as f64, 0.5 * r * r)
}

/// Surface area `n ω_n` of the unit sphere S^{n−1}, in log form.
pub fn ln_sphere_area(n: usize) -> f64 {
    let nf = n as f64;
    std::f64::consts::LN_2 + 0.5 * nf * PI.ln() - ln_gamma_unchecked(0.5 * nf)
}

/// Uniform measure on the unit sphere S^{m−1} ⊂ R^m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformSphere {
    pub m: usize,
}

impl Sampler for UniformSphere {
    fn dim(&self) -> usize {
        self.m
    }
    fn sample(&self, count: usize, stream: RngStream) -> PointBatch {
        sample_sphere_uniform(self.m, count, stream).expect("validated dimension")
    }
}

/// Uniform draws on S^{m−1} by normalizing Gaussian vectors.
pub fn sample_sphere_uniform(m: usize, count: usize, stream: RngStream) -> Result<PointBatch> {
    if m < 2 {
        return Err(domain(format!("sphere sampling requires m >= 2 (got {m})")));
    }
    Ok(fill_chunked(m, count, stream, |rng, point| loop {
        for v in point.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        let r = norm(point);
        if r > 1e-150 {
            for v in point.iter_mut() {
                *v /= r;
            }
            break;
        }
    }))
}

/// Marginal on R^n of the uniform measure on S^{2n−1} ⊂ R^n × R^n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallMarginal {
    pub n: usize,
}

impl BallMarginal {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("ball marginal requires n >= 1"));
        }
        Ok(Self { n })
    }

    /// `Γ(n)/(π^{n/2} Γ(n/2)) (1 − |u|²)^{n/2 − 1}` inside the unit ball, 0 outside.
    pub fn density(&self, u: &[f64]) -> f64 {
        let r2 = norm_sq(u);
        if r2 >= 1.0 {
            return 0.0;
        }
        let nf = self.n as f64;
        (ln_gamma_unchecked(nf) - 0.5 * nf * PI.ln() - ln_gamma_unchecked(0.5 * nf)
            + (0.5 * nf - 1.0) * (1.0 - r2).ln())
        .exp()
    }

    /// Isotropic function `σ²(x) = (1 − |x|²)/n` of the sphere along the first factor.
    pub fn sigma2(&self, x: &[f64]) -> f64 {
        ((1.0 - norm_sq(x)) / self.n as f64).max(0.0)
    }

    /// First `n` coordinates of uniform points on S^{2n−1}.
    pub fn sample(&self, count: usize, stream: RngStream) -> PointBatch {
        UniformSphere { m: 2 * self.n }.sample(count, stream).leading(self.n)
    }
}

impl Sampler for BallMarginal {
    fn dim(&self) -> usize {
        self.n
    }
    fn sample(&self, count: usize, stream: RngStream) -> PointBatch {
        BallMarginal::sample(self, count, stream)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{ks_distance, mean_and_se};

    const S: RngStream = RngStream::new(20_251_019, 0);

    #[test]
    fn cauchy_params_validation() {
        assert!(CauchyParams::new(2, 1.0).is_err());
        assert!(CauchyParams::new(0, 1.0).is_err());
        let p = CauchyParams::new(3, 2.0).unwrap();
        assert_eq!(p.dof(), 1.0);
        let parsed: std::result::Result<CauchyParams, _> =
            serde_json::from_str(r#"{"n": 2, "alpha": 0.5}"#);
        assert!(parsed.is_err());
    }

    #[test]
    fn batch_shape_checks() {
        assert!(PointBatch::new(2, vec![1.0, 2.0, 3.0]).is_err());
        assert!(matches!(
            PointBatch::new(2, vec![1.0, f64::NAN]),
            Err(Error::PoisonedSample { .. })
        ));
        let b = PointBatch::new(2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(b.count(), 2);
        assert_eq!(b.point(1), &[3.0, 4.0]);
        assert_eq!(b.to_csv().lines().next().unwrap(), "x1,x2");
    }

    #[test]
    fn empty_gaussian_batch() {
        let b = sample_std_gaussian(1, 0, S);
        assert!(b.is_empty());
        assert_eq!(b.dim(), 1);
    }

    #[test]
    fn gaussian_second_moment() {
        let b = sample_std_gaussian(3, 1_000_000, S);
        let sq: Vec<f64> = b.points().map(norm_sq).collect();
        let (m, se) = mean_and_se(&sq);
        assert!((m - 3.0).abs() < 5.0 * se, "{m} ± {se}");
    }

    #[test]
    fn gaussian_first_absolute_moment() {
        let b = sample_std_gaussian(1, 1_000_000, S.fork("abs"));
        let abs: Vec<f64> = b.data().iter().map(|v| v.abs()).collect();
        let (m, se) = mean_and_se(&abs);
        assert!((m - (2.0 / PI).sqrt()).abs() < 5.0 * se);
    }

    #[test]
    fn chi_two_median() {
        let b = sample_chi(2.0, 1_000_000, S).unwrap();
        let med = crate::stats::quantile(b.data(), 0.5);
        let q = (2.0 * 2f64.ln()).sqrt();
        // χ_2 density r e^{−r²/2} at the median
        let se = crate::stats::quantile_std_error(0.5, q * (-0.5 * q * q).exp(), b.count());
        assert!((med - q).abs() < 5.0 * se, "{med} vs {q} (se {se})");
        assert!(b.data().iter().all(|&v| v > 0.0));
    }

    #[test]
    fn chi_one_is_half_normal() {
        let b = sample_chi(1.0, 1_000_000, S).unwrap();
        let d = ks_distance(b.data(), |x| 2.0 * special::std_normal_cdf(x) - 1.0);
        assert!(d < 0.002, "KS {d}");
    }

    #[test]
    fn chi_rejects_bad_dof() {
        assert!(sample_chi(0.0, 10, S).is_err());
        assert!(sample_chi(-1.0, 10, S).is_err());
        let tiny = sample_chi(0.05, 10_000, S).unwrap();
        assert!(tiny.data().iter().all(|&v| v > 0.0 && v.is_finite()));
    }

    #[test]
    fn chi_second_moment_non_integer_dof() {
        let d = 3.7;
        let b = sample_chi(d, 1_000_000, S).unwrap();
        let sq: Vec<f64> = b.data().iter().map(|v| v * v).collect();
        let (m, se) = mean_and_se(&sq);
        assert!((m - d).abs() < 5.0 * se);
    }

    #[test]
    fn standard_cauchy_quartiles() {
        let p = CauchyParams::new(1, 1.0).unwrap();
        let b = sample_cauchy(p, 1_000_000, S);
        let mut xs = b.into_data();
        xs.sort_by(f64::total_cmp);
        // density 1/(π(1+x²)) at ±1 is 1/(2π)
        let se = crate::stats::quantile_std_error(0.25, 1.0 / (2.0 * PI), xs.len());
        let q1 = crate::stats::quantile_sorted(&xs, 0.25);
        let q3 = crate::stats::quantile_sorted(&xs, 0.75);
        assert!((q1 + 1.0).abs() < 5.0 * se, "{q1}");
        assert!((q3 - 1.0).abs() < 5.0 * se, "{q3}");
    }

    #[test]
    fn cauchy_second_moment_n2_alpha3() {
        let p = CauchyParams::new(2, 3.0).unwrap();
        let b = sample_cauchy(p, 1_000_000, S);
        let sq: Vec<f64> = b.points().map(norm_sq).collect();
        let (m, se) = mean_and_se(&sq);
        assert!((m - 1.0).abs() < 5.0 * se, "{m} ± {se}");
    }

    #[test]
    fn cauchy_mean_zero() {
        let p = CauchyParams::new(1, 2.0).unwrap();
        let b = sample_cauchy(p, 1_000_000, S);
        let (m, se) = mean_and_se(b.data());
        assert!(m.abs() < 5.0 * se);
    }

    #[test]
    fn log_density_values() {
        let p = CauchyParams::new(1, 1.0).unwrap();
        assert!((cauchy_log_density(p, &[0.0]).unwrap() + PI.ln()).abs() < 1e-14);
        assert!((cauchy_log_density(p, &[1.0]).unwrap() + (2.0 * PI).ln()).abs() < 1e-14);
        let q = CauchyParams::new(3, 2.7).unwrap();
        let c = special::cauchy_norm_const(3, 2.7).unwrap();
        assert!((cauchy_log_density(q, &[0.0; 3]).unwrap() + c.ln()).abs() < 1e-14);
        assert!(matches!(cauchy_log_density(q, &[0.0; 2]), Err(Error::Shape { .. })));
    }

    #[test]
    fn radial_moments() {
        let p = CauchyParams::new(1, 2.0).unwrap();
        assert!((cauchy_radial_moment(p, 2.0).unwrap() - 1.0).abs() < 1e-13);
        assert!((cauchy_radial_moment(p, 0.0).unwrap() - 1.0).abs() < 1e-14);
        let q = CauchyParams::new(2, 4.0).unwrap();
        assert!((cauchy_radial_moment(q, 2.0).unwrap() - 0.5).abs() < 1e-13);
        assert!(matches!(cauchy_radial_moment(p, 3.0), Err(Error::InfiniteMoment { .. })));
    }

    #[test]
    fn radial_moment_against_quadrature() {
        // 2-D radial oracle: ∫ r^{2+1} (1+r²)^{−4} dr · 2π / c_{2,4}, with r = tan φ.
        let c = special::cauchy_norm_const(2, 4.0).unwrap();
        let integral = crate::quad::adaptive_simpson(
            |phi: f64| phi.sin().powi(3) * phi.cos().powi(3),
            0.0,
            PI / 2.0,
            1e-14,
        );
        assert!((2.0 * PI * integral / c - 0.5).abs() < 1e-12);
    }

    #[test]
    fn marginal_orders() {
        assert_eq!(marginal_order(4, 2, 5.0).unwrap(), 4.0);
        assert_eq!(marginal_order(3, 3, 2.0).unwrap(), 2.0);
        assert_eq!(marginal_order(3, 1, 2.0).unwrap(), 1.0);
        assert!(marginal_order(2, 3, 5.0).is_err());
        assert!(marginal_order(3, 1, 1.0).is_err());
    }

    #[test]
    fn projection_of_cauchy_3_2_is_standard_cauchy() {
        let p = CauchyParams::new(3, 2.0).unwrap();
        let b = sample_cauchy(p, 1_000_000, S);
        let x1 = b.coordinate(0);
        let d = ks_distance(&x1, |x: f64| 0.5 + x.atan() / PI);
        assert!(d < 0.002, "KS {d}");
    }

    #[test]
    fn radial_cdf_against_quadrature() {
        // φ = atan r turns the radial integral into sin^{n−1}φ cos^{2α−n−1}φ.
        for &(n, alpha, r) in &[(1usize, 1.0, 1.0f64), (2, 3.0, 0.7), (3, 2.2, 2.5), (2, 1.3, 4.0)] {
            let p = CauchyParams::new(n, alpha).unwrap();
            let nf = n as f64;
            let total = special::ln_beta(0.5 * nf, alpha - 0.5 * nf).unwrap().exp() / 2.0;
            let part = crate::quad::adaptive_simpson(
                |phi: f64| phi.sin().powf(nf - 1.0) * phi.cos().powf(2.0 * alpha - nf - 1.0),
                0.0,
                r.atan(),
                1e-14,
            );
            assert!((cauchy_radial_cdf(p, r) - part / total).abs() < 1e-11, "{n} {alpha} {r}");
        }
        assert!((cauchy_1d_cdf(1.0, 1.0) - 0.75).abs() < 1e-14);
        assert!((cauchy_1d_cdf(1.0, -1.0) - 0.25).abs() < 1e-14);
        assert!((gaussian_radial_cdf(2, 1.0) - (1.0 - (-0.5f64).exp())).abs() < 1e-14);
    }

    #[test]
    fn sphere_points_are_unit() {
        let b = sample_sphere_uniform(5, 10_000, S).unwrap();
        assert!(b.points().all(|p| (norm(p) - 1.0).abs() < 1e-12));
        assert!(sample_sphere_uniform(1, 10, S).is_err());
    }

    #[test]
    fn sphere_coordinate_moments() {
        let b = sample_sphere_uniform(2, 1_000_000, S).unwrap();
        let (m, se) = mean_and_se(&b.coordinate(0));
        assert!(m.abs() < 5.0 * se);
        let b = sample_sphere_uniform(4, 1_000_000, S).unwrap();
        let sq: Vec<f64> = b.coordinate(0).iter().map(|v| v * v).collect();
        let (m, se) = mean_and_se(&sq);
        let g = special::spherical_mean_ratio_g(4, 2.0).unwrap();
        assert!((m - g).abs() < 5.0 * se && (g - 0.25).abs() < 1e-14);
    }

    #[test]
    fn ball_marginal_basics() {
        let bm = BallMarginal::new(2).unwrap();
        assert!((bm.density(&[0.0, 0.0]) - 1.0 / PI).abs() < 1e-14);
        assert_eq!(bm.density(&[1.0, 0.0]), 0.0);
        assert_eq!(bm.density(&[0.8, 0.8]), 0.0);
        for n in 1..6 {
            let bm = BallMarginal::new(n).unwrap();
            assert!((bm.sigma2(&vec![0.0; n]) - 1.0 / n as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn ball_marginal_weight_integral_is_half() {
        for n in [1usize, 2, 3, 5] {
            let bm = BallMarginal::new(n).unwrap();
            let b = bm.sample(1_000_000, S.child(n as u64));
            let w: Vec<f64> = b.points().map(|u| 1.0 - norm_sq(u)).collect();
            let (m, se) = mean_and_se(&w);
            assert!((m - 0.5).abs() < 5.0 * se, "n = {n}: {m} ± {se}");
        }
    }

    #[test]
    fn ball_marginal_density_integrates_to_one() {
        // radial integral n ω_n ∫ r^{n−1} q(r) dr
        for n in [1usize, 2, 3, 4] {
            let bm = BallMarginal::new(n).unwrap();
            let area = ln_sphere_area(n).exp();
            let f = |t: f64| {
                // r = sin t removes the endpoint singularity of (1−r²)^{n/2−1}
                let r = t.sin();
                let mut u = vec![0.0; n];
                u[0] = r;
                area * r.powi(n as i32 - 1) * bm.density(&u) * t.cos()
            };
            let v = crate::quad::adaptive_simpson(f, 0.0, PI / 2.0 - 1e-12, 1e-13);
            // 1 − sin²t cancels catastrophically near π/2, costing ~1e−8 for n = 1.
            assert!((v - 1.0).abs() < 1e-7, "n = {n}: {v}");
        }
    }

    #[test]
    fn determinism() {
        let p = CauchyParams::new(2, 3.0).unwrap();
        let a = sample_cauchy(p, 10_000, S);
        let b = sample_cauchy(p, 10_000, S);
        assert_eq!(a, b);
        let c = sample_cauchy(p, 10_000, S.child(1));
        assert_ne!(a, c);
    }
}
