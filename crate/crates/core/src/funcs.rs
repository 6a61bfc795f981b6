//! Smooth test functions with analytic gradients and certified Lipschitz bounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Serializable description of a test function; `build` validates it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunctionSpec {
    /// `⟨θ, x⟩`
    Linear { theta: Vec<f64> },
    /// `√(ε² + |x|²)`
    SmoothNorm { dim: usize, epsilon: f64 },
    /// `Σ wᵢ exp(−|x − cᵢ|² / (2σᵢ²))`
    RbfMixture {
        centers: Vec<Vec<f64>>,
        weights: Vec<f64>,
        widths: Vec<f64>,
    },
    /// `logistic((⟨θ, x⟩ − c) / δ)` with unit `θ`
    SmoothedHalfspace {
        theta: Vec<f64>,
        offset: f64,
        softness: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFunction {
    spec: TestFunctionSpec,
    dim: usize,
    scale: f64,
}

fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn all_finite(xs: &[f64]) -> bool {
    xs.iter().all(|v| v.is_finite())
}

impl TestFunctionSpec {
    pub fn build(&self) -> Result<TestFunction> {
        let dim = match self {
            Self::Linear { theta } => {
                if theta.is_empty() || !all_finite(theta) {
                    return Err(config("linear: theta must be a non-empty finite vector"));
                }
                theta.len()
            }
            Self::SmoothNorm { dim, epsilon } => {
                if *dim == 0 {
                    return Err(config("smooth_norm: dim must be >= 1"));
                }
                if !(*epsilon > 0.0) || !epsilon.is_finite() {
                    return Err(config("smooth_norm: epsilon must be > 0"));
                }
                *dim
            }
            Self::RbfMixture { centers, weights, widths } => {
                if centers.is_empty() {
                    return Err(config("rbf_mixture: needs at least one center"));
                }
                if weights.len() != centers.len() || widths.len() != centers.len() {
                    return Err(config("rbf_mixture: centers, weights and widths differ in length"));
                }
                let dim = centers[0].len();
                if dim == 0 || centers.iter().any(|c| c.len() != dim || !all_finite(c)) {
                    return Err(config("rbf_mixture: centers must share a positive dimension"));
                }
                if !all_finite(weights) {
                    return Err(config("rbf_mixture: weights must be finite"));
                }
                if widths.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
                    return Err(config("rbf_mixture: widths must be > 0"));
                }
                dim
            }
            Self::SmoothedHalfspace { theta, offset, softness } => {
                let len = theta.iter().map(|v| v * v).sum::<f64>().sqrt();
                if theta.is_empty() || (len - 1.0).abs() > 1e-9 {
                    return Err(config("smoothed_halfspace: theta must be a unit vector"));
                }
                if !offset.is_finite() {
                    return Err(config("smoothed_halfspace: offset must be finite"));
                }
                if !(*softness > 0.0) || !softness.is_finite() {
                    return Err(config("smoothed_halfspace: softness must be > 0"));
                }
                theta.len()
            }
        };
        Ok(TestFunction { spec: self.clone(), dim, scale: 1.0 })
    }
}

fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl TestFunction {
    pub fn linear(theta: Vec<f64>) -> Result<Self> {
        TestFunctionSpec::Linear { theta }.build()
    }

    /// `Linear(e₁)` in dimension `n`.
    pub fn coordinate(n: usize) -> Self {
        let mut theta = vec![0.0; n];
        theta[0] = 1.0;
        Self::linear(theta).expect("valid unit direction")
    }

    pub fn spec(&self) -> &TestFunctionSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `λ f`.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self { scale: self.scale * lambda, ..self.clone() }
    }

    /// `f / lipschitz_bound(f)`, so that `‖f‖_Lip ≤ 1`. Zero functions are returned as is.
    pub fn normalized(&self) -> Self {
        let l = self.lipschitz_bound();
        if l > 0.0 {
            self.scaled(1.0 / l)
        } else {
            self.clone()
        }
    }

    /// The direction `θ` (already including the scale) when `f` is linear.
    pub fn linear_direction(&self) -> Option<Vec<f64>> {
        match &self.spec {
            TestFunctionSpec::Linear { theta } => Some(theta.iter().map(|t| t * self.scale).collect()),
            _ => None,
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Shape { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        let v = match &self.spec {
            TestFunctionSpec::Linear { theta } => dot(theta, x),
            TestFunctionSpec::SmoothNorm { epsilon, .. } => {
                (epsilon * epsilon + dot(x, x)).sqrt()
            }
            TestFunctionSpec::RbfMixture { centers, weights, widths } => centers
                .iter()
                .zip(weights)
                .zip(widths)
                .map(|((c, w), s)| w * (-sq_dist(x, c) / (2.0 * s * s)).exp())
                .sum(),
            TestFunctionSpec::SmoothedHalfspace { theta, offset, softness } => {
                logistic((dot(theta, x) - offset) / softness)
            }
        };
        self.scale * v
    }

    pub fn eval_with_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.check_dim(x)?;
        let mut grad = vec![0.0; self.dim];
        let v = self.eval_grad_into(x, &mut grad);
        Ok((v, grad))
    }

    /// Writes `∇f(x)` into `grad` and returns `f(x)`; no allocation.
    pub(crate) fn eval_grad_into(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let s = self.scale;
        match &self.spec {
            TestFunctionSpec::Linear { theta } => {
                for (g, t) in grad.iter_mut().zip(theta) {
                    *g = s * t;
                }
                s * dot(theta, x)
            }
            TestFunctionSpec::SmoothNorm { epsilon, .. } => {
                let r = (epsilon * epsilon + dot(x, x)).sqrt();
                for (g, xi) in grad.iter_mut().zip(x) {
                    *g = s * xi / r;
                }
                s * r
            }
            TestFunctionSpec::RbfMixture { centers, weights, widths } => {
                grad.fill(0.0);
                let mut v = 0.0;
                for ((c, w), sigma) in centers.iter().zip(weights).zip(widths) {
                    let s2 = sigma * sigma;
                    let e = w * (-sq_dist(x, c) / (2.0 * s2)).exp();
                    v += e;
                    for ((g, xi), ci) in grad.iter_mut().zip(x).zip(c) {
                        *g -= s * e * (xi - ci) / s2;
                    }
                }
                s * v
            }
            TestFunctionSpec::SmoothedHalfspace { theta, offset, softness } => {
                let l = logistic((dot(theta, x) - offset) / softness);
                let slope = s * l * (1.0 - l) / softness;
                for (g, t) in grad.iter_mut().zip(theta) {
                    *g = slope * t;
                }
                s * l
            }
        }
    }

    /// Certified upper bound on `sup |∇f|`.
    pub fn lipschitz_bound(&self) -> f64 {
        let base = match &self.spec {
            TestFunctionSpec::Linear { theta } => dot(theta, theta).sqrt(),
            TestFunctionSpec::SmoothNorm { .. } => 1.0,
            // |∇ e^{−r²/(2σ²)}| = (r/σ²) e^{−r²/(2σ²)} peaks at r = σ.
            TestFunctionSpec::RbfMixture { weights, widths, .. } => weights
                .iter()
                .zip(widths)
                .map(|(w, s)| w.abs() * (-0.5f64).exp() / s)
                .sum(),
            // logistic' ≤ 1/4
            TestFunctionSpec::SmoothedHalfspace { softness, .. } => 0.25 / softness,
        };
        self.scale.abs() * base
    }
}

fn sq_dist(x: &[f64], c: &[f64]) -> f64 {
    x.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// A fixed three-bump mixture used throughout the examples and tests.
pub fn three_bump_mixture(n: usize) -> TestFunction {
    let mut c1 = vec![0.0; n];
    let mut c2 = vec![0.0; n];
    let c3 = vec![0.0; n];
    c1[0] = 1.0;
    c2[0] = -0.5;
    if n > 1 {
        c2[1] = 0.8;
    }
    TestFunctionSpec::RbfMixture {
        centers: vec![c1, c2, c3],
        weights: vec![1.0, -0.7, 0.4],
        widths: vec![0.8, 1.2, 2.0],
    }
    .build()
    .expect("valid mixture")
}

/// Representative 1-Lipschitz functions in dimension `n`: a coordinate, a
/// smoothed norm, and a normalized bump mixture.
pub fn lipschitz_suite(n: usize) -> Vec<(String, TestFunction)> {
    vec![
        ("linear".into(), TestFunction::coordinate(n)),
        (
            "smooth_norm".into(),
            TestFunctionSpec::SmoothNorm { dim: n, epsilon: 0.5 }.build().expect("valid"),
        ),
        ("rbf_mixture".into(), three_bump_mixture(n).normalized()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    use crate::rng::RngStream;

    fn variants(n: usize) -> Vec<TestFunction> {
        let mut theta = vec![0.0; n];
        theta[0] = 0.6;
        theta[n - 1] += 0.8;
        let theta_unit: Vec<f64> = {
            let l = dot(&theta, &theta).sqrt();
            theta.iter().map(|t| t / l).collect()
        };
        vec![
            TestFunction::linear(vec![1.5; n]).unwrap(),
            TestFunctionSpec::SmoothNorm { dim: n, epsilon: 0.3 }.build().unwrap(),
            three_bump_mixture(n),
            TestFunctionSpec::SmoothedHalfspace { theta: theta_unit, offset: 0.2, softness: 0.7 }
                .build()
                .unwrap(),
        ]
    }

    #[test]
    fn trivial_values() {
        let f = TestFunction::coordinate(2);
        assert_eq!(f.eval(&[3.0, 4.0]).unwrap(), 3.0);
        let g = TestFunctionSpec::SmoothNorm { dim: 3, epsilon: 1.0 }.build().unwrap();
        assert_eq!(g.eval(&[0.0; 3]).unwrap(), 1.0);
        let h = TestFunctionSpec::RbfMixture {
            centers: vec![vec![0.0, 0.0]],
            weights: vec![1.0],
            widths: vec![1.0],
        }
        .build()
        .unwrap();
        assert_eq!(h.eval(&[0.0, 0.0]).unwrap(), 1.0);
        let (_, grad) = h.eval_with_grad(&[1.0, 0.0]).unwrap();
        assert!((grad[0] + (-0.5f64).exp()).abs() < 1e-15 && grad[1] == 0.0);
    }

    #[test]
    fn gradients_of_simple_variants() {
        let f = TestFunction::linear(vec![0.5, -2.0]).unwrap();
        assert_eq!(f.eval_with_grad(&[7.0, 1.0]).unwrap().1, vec![0.5, -2.0]);
        let g = TestFunctionSpec::SmoothNorm { dim: 2, epsilon: 0.1 }.build().unwrap();
        let (v, grad) = g.eval_with_grad(&[3.0, 4.0]).unwrap();
        assert!((grad[0] - 3.0 / v).abs() < 1e-15 && dot(&grad, &grad) < 1.0);
    }

    #[test]
    fn lipschitz_bounds() {
        assert_eq!(TestFunction::coordinate(3).lipschitz_bound(), 1.0);
        let g = TestFunctionSpec::SmoothNorm { dim: 2, epsilon: 7.0 }.build().unwrap();
        assert_eq!(g.lipschitz_bound(), 1.0);
        let h = TestFunctionSpec::RbfMixture {
            centers: vec![vec![0.0]],
            weights: vec![1.0],
            widths: vec![2.0],
        }
        .build()
        .unwrap();
        assert!((h.lipschitz_bound() - 0.303_265_329_856_316_7).abs() < 1e-15);
        assert!((h.scaled(-3.0).lipschitz_bound() - 3.0 * h.lipschitz_bound()).abs() < 1e-15);
    }

    #[test]
    fn malformed_specs_are_config_errors() {
        let bad = [
            TestFunctionSpec::Linear { theta: vec![] },
            TestFunctionSpec::SmoothNorm { dim: 2, epsilon: 0.0 },
            TestFunctionSpec::RbfMixture {
                centers: vec![vec![0.0]],
                weights: vec![1.0],
                widths: vec![-1.0],
            },
            TestFunctionSpec::RbfMixture {
                centers: vec![vec![0.0], vec![0.0, 1.0]],
                weights: vec![1.0, 1.0],
                widths: vec![1.0, 1.0],
            },
            TestFunctionSpec::SmoothedHalfspace { theta: vec![1.0, 1.0], offset: 0.0, softness: 1.0 },
        ];
        for spec in bad {
            assert!(matches!(spec.build(), Err(Error::Config(_))), "{spec:?}");
        }
        assert!(matches!(
            TestFunction::coordinate(2).eval(&[1.0]),
            Err(Error::Shape { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = TestFunctionSpec::SmoothedHalfspace { theta: vec![1.0], offset: 0.5, softness: 2.0 };
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"kind\":\"smoothed_halfspace\""));
        let back: TestFunctionSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn logistic_is_stable() {
        assert_eq!(logistic(-800.0), 0.0);
        assert_eq!(logistic(800.0), 1.0);
        assert_eq!(logistic(0.0), 0.5);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = RngStream::new(11, 0).rng();
        for n in [1usize, 2, 3, 5] {
            for f in variants(n) {
                for _ in 0..100 {
                    let x: Vec<f64> = (0..n).map(|_| 2.0 * rng.sample::<f64, _>(StandardNormal)).collect();
                    let (_, grad) = f.eval_with_grad(&x).unwrap();
                    let h = 1e-5 * dot(&x, &x).sqrt().max(1.0);
                    let mut fd = vec![0.0; n];
                    for j in 0..n {
                        let (mut xp, mut xm) = (x.clone(), x.clone());
                        xp[j] += h;
                        xm[j] -= h;
                        fd[j] = (f.eval(&xp).unwrap() - f.eval(&xm).unwrap()) / (2.0 * h);
                    }
                    let scale = grad.iter().fold(0.0f64, |m, g| m.max(g.abs())).max(1e-3);
                    let err = grad.iter().zip(&fd).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                    assert!(err / scale < 1e-4, "{:?} at {x:?}: {grad:?} vs {fd:?}", f.spec());
                }
            }
        }
    }

    #[test]
    fn empirical_lipschitz_within_bound() {
        let mut rng = RngStream::new(12, 0).rng();
        for n in [1usize, 2, 4] {
            for f in variants(n) {
                let bound = f.lipschitz_bound();
                let unit = f.normalized();
                for k in 0..100_000 {
                    // alternate far pairs with short segments, where the slope is nearly the gradient
                    let spread = if k % 2 == 0 { 2.0 } else { 1e-3 };
                    let x: Vec<f64> = (0..n).map(|_| 1.5 * rng.sample::<f64, _>(StandardNormal)).collect();
                    let y: Vec<f64> = x
                        .iter()
                        .map(|xi| xi + spread * rng.sample::<f64, _>(StandardNormal))
                        .collect();
                    let d = sq_dist(&x, &y).sqrt();
                    // below this, rounding in f dominates the difference quotient
                    if d < 1e-6 {
                        continue;
                    }
                    let slope = (f.eval(&x).unwrap() - f.eval(&y).unwrap()).abs() / d;
                    assert!(slope <= bound + 1e-9, "{:?}", f.spec());
                    let unit_slope = (unit.eval(&x).unwrap() - unit.eval(&y).unwrap()).abs() / d;
                    assert!(unit_slope <= 1.0 + 1e-9);
                }
            }
        }
    }

    #[test]
    fn suite_is_one_lipschitz() {
        for (_, f) in lipschitz_suite(3) {
            assert!(f.lipschitz_bound() <= 1.0 + 1e-15);
        }
    }
}
