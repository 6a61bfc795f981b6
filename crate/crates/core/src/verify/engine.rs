//! Chunked Monte Carlo estimation.
//!
//! A batch is split into chunks of [`CHUNK_POINTS`] points; each chunk keeps
//! its own running mean and sum of squared deviations, and chunk summaries
//! are merged along a fixed balanced tree. The result depends only on the
//! sample batch, never on thread count or scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::measures::{PointBatch, Sampler, CHUNK_POINTS};
use crate::rng::RngStream;

/// Smallest sample count the engine accepts.
pub const MIN_COUNT: usize = 1000;

/// A mean with its standard error, or an exact value (`exact = true`, `se = 0`, `count = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub mean: f64,
    #[serde(rename = "se")]
    pub std_error: f64,
    pub count: u64,
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stream: Option<RngStream>,
}

impl MCEstimate {
    pub fn exact(value: f64) -> Self {
        Self { mean: value, std_error: 0.0, count: 0, exact: true, stream: None }
    }

    /// `c · X`.
    pub fn scaled(&self, c: f64) -> Self {
        Self { mean: c * self.mean, std_error: c.abs() * self.std_error, ..*self }
    }

    /// Whether `value` lies within `k` standard errors of the mean (with a
    /// 1e−12 relative allowance so exact agreement always passes).
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_error + 1e-12 * value.abs().max(self.mean.abs())
    }

    /// Distance from `value` in standard errors (infinite for a nonzero gap at se = 0).
    pub fn sigmas_from(&self, value: f64) -> f64 {
        let gap = (self.mean - value).abs();
        if gap == 0.0 {
            0.0
        } else {
            gap / self.std_error
        }
    }
}

#[derive(Debug, Clone)]
struct Summary {
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Summary {
    fn empty(k: usize) -> Self {
        Self { count: 0, mean: vec![0.0; k], m2: vec![0.0; k] }
    }

    fn push(&mut self, values: &[f64]) {
        self.count += 1;
        let n = self.count as f64;
        for ((m, s), &v) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(values) {
            let delta = v - *m;
            *m += delta / n;
            *s += delta * (v - *m);
        }
    }

    fn merge(a: &Self, b: &Self) -> Self {
        if a.count == 0 {
            return b.clone();
        }
        if b.count == 0 {
            return a.clone();
        }
        let (na, nb) = (a.count as f64, b.count as f64);
        let n = na + nb;
        let mut out = Self::empty(a.mean.len());
        out.count = a.count + b.count;
        for i in 0..a.mean.len() {
            let delta = b.mean[i] - a.mean[i];
            out.mean[i] = a.mean[i] + delta * nb / n;
            out.m2[i] = a.m2[i] + b.m2[i] + delta * delta * na * nb / n;
        }
        out
    }
}

fn merge_tree(parts: &[Summary]) -> Summary {
    match parts.len() {
        0 => unreachable!("merge of no chunks"),
        1 => parts[0].clone(),
        len => {
            let mid = len / 2;
            Summary::merge(&merge_tree(&parts[..mid]), &merge_tree(&parts[mid..]))
        }
    }
}

/// Estimates `outputs` expectations at once over an existing batch.
/// `integrand(point, out)` writes one value per output.
pub fn estimate_batch<F>(
    batch: &PointBatch,
    outputs: usize,
    stream: RngStream,
    integrand: F,
) -> Result<Vec<MCEstimate>>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    if batch.count() < MIN_COUNT {
        return Err(domain(format!(
            "Monte Carlo requires count >= {MIN_COUNT} (got {})",
            batch.count()
        )));
    }
    let dim = batch.dim();
    let parts = batch
        .data()
        .par_chunks(CHUNK_POINTS * dim)
        .map(|chunk| {
            let mut summary = Summary::empty(outputs);
            let mut out = vec![0.0; outputs];
            for point in chunk.chunks_exact(dim) {
                integrand(point, &mut out);
                if out.iter().any(|v| !v.is_finite()) {
                    return Err(Error::PoisonedSample { point: point.to_vec() });
                }
                summary.push(&out);
            }
            Ok(summary)
        })
        .collect::<Result<Vec<_>>>()?;
    let total = merge_tree(&parts);
    let n = total.count as f64;
    Ok((0..outputs)
        .map(|i| MCEstimate {
            mean: total.mean[i],
            std_error: (total.m2[i] / (n - 1.0) / n).sqrt(),
            count: total.count,
            exact: false,
            stream: Some(stream),
        })
        .collect())
}

/// Samples `count` points and estimates several expectations with common random numbers.
pub fn mc_estimate_multi<S, F>(
    sampler: &S,
    outputs: usize,
    count: usize,
    stream: RngStream,
    integrand: F,
) -> Result<Vec<MCEstimate>>
where
    S: Sampler + ?Sized,
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    check_count(count)?;
    let batch = sampler.sample(count, stream);
    estimate_batch(&batch, outputs, stream, integrand)
}

pub fn mc_estimate<S, F>(integrand: F, sampler: &S, count: usize, stream: RngStream) -> Result<MCEstimate>
where
    S: Sampler + ?Sized,
    F: Fn(&[f64]) -> f64 + Sync,
{
    let mut v = mc_estimate_multi(sampler, 1, count, stream, |p, out| out[0] = integrand(p))?;
    Ok(v.remove(0))
}

pub(crate) fn check_count(count: usize) -> Result<()> {
    if count < MIN_COUNT {
        return Err(domain(format!("Monte Carlo requires count >= {MIN_COUNT} (got {count})")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{norm_sq, CauchyParams, StdGaussian};

    const S: RngStream = RngStream::new(99, 7);

    #[test]
    fn constant_integrand() {
        let e = mc_estimate(|_| 1.0, &StdGaussian { n: 2 }, 5000, S).unwrap();
        assert_eq!((e.mean, e.std_error, e.count), (1.0, 0.0, 5000));
        assert!(!e.exact && e.stream == Some(S));
    }

    #[test]
    fn gaussian_second_moment() {
        let e = mc_estimate(norm_sq, &StdGaussian { n: 3 }, 1_000_000, S).unwrap();
        assert!(e.agrees_with(3.0, 5.0), "{e:?}");
    }

    #[test]
    fn cauchy_second_moment() {
        let p = CauchyParams::new(2, 3.0).unwrap();
        let e = mc_estimate(norm_sq, &p, 1_000_000, S).unwrap();
        assert!(e.agrees_with(1.0, 5.0), "{e:?}");
    }

    #[test]
    fn matches_two_pass_statistics() {
        let batch = StdGaussian { n: 1 }.sample(20_000, S);
        let e = estimate_batch(&batch, 1, S, |p, o| o[0] = p[0].exp()).unwrap().remove(0);
        let xs: Vec<f64> = batch.data().iter().map(|x| x.exp()).collect();
        let (m, se) = crate::stats::mean_and_se(&xs);
        assert!((e.mean - m).abs() < 1e-13 * m);
        assert!((e.std_error - se).abs() < 1e-10 * se);
    }

    #[test]
    fn small_counts_and_poison_are_rejected() {
        assert!(mc_estimate(|_| 1.0, &StdGaussian { n: 1 }, 999, S).is_err());
        let err = mc_estimate(|p| 1.0 / (p[0] - p[0]), &StdGaussian { n: 1 }, 2000, S).unwrap_err();
        assert!(matches!(err, Error::PoisonedSample { ref point } if point.len() == 1));
    }

    #[test]
    fn bit_identical_across_thread_counts() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_estimate(|p| p[0].abs().powf(1.5), &StdGaussian { n: 2 }, 100_000, S).unwrap())
        };
        let (a, b) = (run(1), run(4));
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    }

    #[test]
    fn scaled_and_agreement() {
        let e = MCEstimate::exact(2.0).scaled(-3.0);
        assert_eq!((e.mean, e.std_error), (-6.0, 0.0));
        assert!(e.agrees_with(-6.0, 5.0) && !e.agrees_with(-6.1, 5.0));
        assert_eq!(e.sigmas_from(-6.0), 0.0);
    }
}
