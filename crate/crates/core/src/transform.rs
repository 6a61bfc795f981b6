//! The spherical-cup transform.
//!
//! For a pair measure μ on R^n × R^n, the cup μ̂ averages the pushforwards of
//! μ under the rotations `U_t(x, y) = (x cos t + y sin t, −x sin t + y cos t)`
//! over `t` uniform on `[0, π/2]`. Two realizations live here:
//!
//! * [`cup_sample`] draws from μ̂ given any pair sampler (any `n`);
//! * [`cup_density_grid_1d`] applies the density form
//!   `ŵ(u, v) = (2/π) ∫₀^{π/2} w(u cos t − v sin t, u sin t + v cos t) dt`
//!   to a tabulated density on R × R.
//!
//! The grid operator is an average of measure-preserving compositions, so it
//! contracts every L^p norm and preserves the integral of non-negative `w`.
//! It is not an isometry of L²: its adjoint is `R U R` with `R(x, y) = (y, x)`,
//! and off-center bumps lose L² norm as they are smeared along arcs.
//! [`cup_adjoint_gap`] measures the adjoint identity on a grid.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{PointBatch, Sampler, CHUNK_POINTS};
use crate::quad::GaussLegendre;
use crate::rng::RngStream;

/// `U_t(x, y)`.
pub fn apply_rotation(x: &[f64], y: &[f64], t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if x.len() != y.len() {
        return Err(Error::Shape { expected: x.len(), got: y.len() });
    }
    let (s, c) = t.sin_cos();
    let u = x.iter().zip(y).map(|(a, b)| a * c + b * s).collect();
    let v = x.iter().zip(y).map(|(a, b)| -a * s + b * c).collect();
    Ok((u, v))
}

fn rotate_in_place(point: &mut [f64], t: f64) {
    let n = point.len() / 2;
    let (s, c) = t.sin_cos();
    let (x, y) = point.split_at_mut(n);
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (xa, yb) = (*a, *b);
        *a = xa * c + yb * s;
        *b = -xa * s + yb * c;
    }
}

/// Draws from the cup of the pair law produced by `pair_sampler` (dimension
/// `2n`, first half `x`, second half `y`). Angles come from a forked stream so
/// the underlying pairs are exactly those of `pair_sampler.sample(count, stream)`.
pub fn cup_sample<S: Sampler + ?Sized>(
    pair_sampler: &S,
    count: usize,
    stream: RngStream,
) -> Result<PointBatch> {
    let dim = pair_sampler.dim();
    if dim % 2 != 0 {
        return Err(Error::Shape { expected: dim + 1, got: dim });
    }
    let mut data = pair_sampler.sample(count, stream).into_data();
    let angles = stream.fork("cup-angle");
    data.par_chunks_mut(CHUNK_POINTS * dim)
        .enumerate()
        .for_each(|(k, chunk)| {
            let mut rng = angles.child(k as u64).rng();
            for point in chunk.chunks_exact_mut(dim) {
                let t = rng.random::<f64>() * FRAC_PI_2;
                rotate_in_place(point, t);
            }
        });
    PointBatch::new(dim, data)
}

/// A density on `[−L, L]²` sampled at the centers of an `M × M` grid.
/// `values[i * M + j]` is the value at `(x_i, y_j)`, `x_i = −L + (i + ½)h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDensity2D {
    half_width: f64,
    cells: usize,
    values: Vec<f64>,
}

impl GridDensity2D {
    pub fn new(half_width: f64, cells: usize, values: Vec<f64>) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::Config(format!("grid half-width must be > 0 (got {half_width})")));
        }
        if cells < 1 {
            return Err(Error::Config("grid needs at least one cell per axis".into()));
        }
        if values.len() != cells * cells {
            return Err(Error::Shape { expected: cells * cells, got: values.len() });
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Config("grid values must be finite and non-negative".into()));
        }
        Ok(Self { half_width, cells, values })
    }

    /// Tabulates `f` at cell centers.
    pub fn tabulate<F: Fn(f64, f64) -> f64 + Sync>(half_width: f64, cells: usize, f: F) -> Result<Self> {
        let h = 2.0 * half_width / cells as f64;
        let mut values = vec![0.0; cells * cells];
        values.par_chunks_mut(cells).enumerate().for_each(|(i, row)| {
            let x = -half_width + (i as f64 + 0.5) * h;
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(x, -half_width + (j as f64 + 0.5) * h);
            }
        });
        Self::new(half_width, cells, values)
    }

    pub fn zeros(half_width: f64, cells: usize) -> Result<Self> {
        Self::new(half_width, cells, vec![0.0; cells * cells])
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.spacing()
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cells + j]
    }

    /// Bilinear interpolation between cell centers; ghost cells beyond the
    /// outermost centers are zero, and the result is zero outside `[−L, L]²`.
    pub fn interpolate(&self, x: f64, y: f64) -> f64 {
        let l = self.half_width;
        if !(x.abs() <= l && y.abs() <= l) {
            return 0.0;
        }
        let h = self.spacing();
        let m = self.cells as isize;
        let gx = (x + l) / h - 0.5;
        let gy = (y + l) / h - 0.5;
        let (i0, j0) = (gx.floor() as isize, gy.floor() as isize);
        let (fx, fy) = (gx - i0 as f64, gy - j0 as f64);
        let get = |i: isize, j: isize| {
            if i < 0 || j < 0 || i >= m || j >= m {
                0.0
            } else {
                self.values[i as usize * self.cells + j as usize]
            }
        };
        (1.0 - fx) * ((1.0 - fy) * get(i0, j0) + fy * get(i0, j0 + 1))
            + fx * ((1.0 - fy) * get(i0 + 1, j0) + fy * get(i0 + 1, j0 + 1))
    }

    /// Discrete `L^p` norm with cell measure `h²`; `p = ∞` gives the max.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.values.iter().fold(0.0, |m, v| m.max(v.abs()));
        }
        let h2 = self.spacing().powi(2);
        let s: Vec<f64> = self.values.iter().map(|v| v.abs().powf(p)).collect();
        (h2 * crate::stats::pairwise_sum(&s)).powf(1.0 / p)
    }

    pub fn mass(&self) -> f64 {
        self.spacing().powi(2) * crate::stats::pairwise_sum(&self.values)
    }

    /// Mass carried by cells whose center lies outside `[−L/2, L/2]²`.
    pub fn mass_outside_half_box(&self) -> f64 {
        let half = 0.5 * self.half_width;
        let h2 = self.spacing().powi(2);
        let mut s = 0.0;
        for i in 0..self.cells {
            for j in 0..self.cells {
                if self.center(i).abs() > half || self.center(j).abs() > half {
                    s += self.at(i, j);
                }
            }
        }
        h2 * s
    }

    /// Reflection `(x, y) ↦ (y, x)`: a transpose of the value matrix.
    pub fn swapped(&self) -> Self {
        let m = self.cells;
        let mut values = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                values[j * m + i] = self.values[i * m + j];
            }
        }
        Self { values, ..self.clone() }
    }

    /// `∫ w g` with cell measure `h²`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.same_grid(other)?;
        let prods: Vec<f64> = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(self.spacing().powi(2) * crate::stats::pairwise_sum(&prods))
    }

    /// `a·self + b·other` for `a, b ≥ 0`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        Self::new(self.half_width, self.cells, values)
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.cells != other.cells || self.half_width != other.half_width {
            return Err(Error::Shape { expected: self.cells, got: other.cells });
        }
        Ok(())
    }

    /// Header `L,M`, then `M` rows of `M` values.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{:e},{}\n", self.half_width, self.cells);
        for row in self.values.chunks_exact(self.cells) {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let parse = |s: &str| -> Result<f64> {
            s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")))
        };
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty grid file".into()))?;
        let (l, m) = header
            .split_once(',')
            .ok_or_else(|| Error::Parse("grid header must be `L,M`".into()))?;
        let half_width = parse(l)?;
        let cells: usize = m.trim().parse().map_err(|e| Error::Parse(format!("grid size: {e}")))?;
        let mut values = Vec::with_capacity(cells * cells);
        for (r, line) in lines.enumerate() {
            let row = line.split(',').map(parse).collect::<Result<Vec<f64>>>()?;
            if row.len() != cells {
                return Err(Error::Parse(format!("row {} has {} values, expected {cells}", r + 1, row.len())));
            }
            values.extend(row);
        }
        Self::new(half_width, cells, values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureRule {
    GaussLegendre,
    Midpoint,
}

/// Discretization of the angle integral over `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes: usize,
    pub rule: QuadratureRule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { nodes: 64, rule: QuadratureRule::GaussLegendre }
    }
}

impl QuadratureSpec {
    /// Angles and weights normalized to sum to one (the factor `2/π` included).
    fn angles(&self) -> Result<Vec<(f64, f64)>> {
        if self.nodes < 2 {
            return Err(Error::Config(format!("angle quadrature needs >= 2 nodes (got {})", self.nodes)));
        }
        let pts = match self.rule {
            QuadratureRule::GaussLegendre => GaussLegendre::new(self.nodes)
                .on_interval(0.0, FRAC_PI_2)
                .map(|(t, w)| (t, w / FRAC_PI_2))
                .collect(),
            QuadratureRule::Midpoint => {
                let n = self.nodes as f64;
                (0..self.nodes).map(|k| ((k as f64 + 0.5) * FRAC_PI_2 / n, 1.0 / n)).collect()
            }
        };
        Ok(pts)
    }

    /// Documented discretization error model `max(10h², 10/N²)`.
    pub fn tolerance(&self, h: f64) -> f64 {
        (10.0 * h * h).max(10.0 / (self.nodes as f64).powi(2))
    }
}

/// `ŵ = U w` on the same grid. Rows are computed independently in parallel.
pub fn cup_density_grid_1d(w: &GridDensity2D, quad: QuadratureSpec) -> Result<GridDensity2D> {
    if w.cells < 4 {
        return Err(Error::Config(format!("degenerate grid: M = {} < 4", w.cells)));
    }
    let angles: Vec<(f64, f64, f64)> = quad
        .angles()?
        .into_iter()
        .map(|(t, wt)| {
            let (s, c) = t.sin_cos();
            (c, s, wt)
        })
        .collect();
    let m = w.cells;
    let mut values = vec![0.0; m * m];
    values.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
        let u = w.center(i);
        for (j, out) in row.iter_mut().enumerate() {
            let v = w.center(j);
            *out = angles
                .iter()
                .map(|&(c, s, wt)| wt * w.interpolate(u * c - v * s, u * s + v * c))
                .sum::<f64>()
                .max(0.0);
        }
    });
    GridDensity2D::new(w.half_width, m, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormCheck {
    pub p: f64,
    pub in_norm: f64,
    pub out_norm: f64,
    pub ratio: f64,
    /// `max(10h², 10/N²)`
    pub tol: f64,
}

impl NormCheck {
    pub fn contracts(&self) -> bool {
        self.ratio <= 1.0 + self.tol
    }
}

/// Mass outside `[−L/2, L/2]²` allowed before a truncation error.
pub const TRUNCATION_LIMIT: f64 = 1e-10;

fn check_truncation(w: &GridDensity2D) -> Result<()> {
    let outside = w.mass_outside_half_box();
    if outside > TRUNCATION_LIMIT {
        return Err(Error::Truncation { outside, limit: TRUNCATION_LIMIT });
    }
    Ok(())
}

/// `‖U w‖_p / ‖w‖_p` for one `p ∈ [1, ∞]`.
pub fn cup_operator_norm_check(w: &GridDensity2D, quad: QuadratureSpec, p: f64) -> Result<NormCheck> {
    Ok(cup_operator_norm_checks(w, quad, &[p])?.remove(0))
}

/// Several exponents against a single application of `U`.
pub fn cup_operator_norm_checks(w: &GridDensity2D, quad: QuadratureSpec, ps: &[f64]) -> Result<Vec<NormCheck>> {
    if let Some(&p) = ps.iter().find(|p| !(**p >= 1.0)) {
        return Err(Error::Domain(format!("requires p in [1, inf] (got {p})")));
    }
    check_truncation(w)?;
    let out = cup_density_grid_1d(w, quad)?;
    let tol = quad.tolerance(w.spacing());
    Ok(ps
        .iter()
        .map(|&p| {
            let (a, b) = (w.lp_norm(p), out.lp_norm(p));
            NormCheck { p, in_norm: a, out_norm: b, ratio: if a > 0.0 { b / a } else { 1.0 }, tol }
        })
        .collect())
}

/// Relative gap `|⟨U f, g⟩ − ⟨f, R U R g⟩| / (‖f‖₂‖g‖₂)`, which vanishes
/// (up to discretization) because `U* = R U R`.
pub fn cup_adjoint_gap(f: &GridDensity2D, g: &GridDensity2D, quad: QuadratureSpec) -> Result<f64> {
    let lhs = cup_density_grid_1d(f, quad)?.inner(g)?;
    let rhs = f.inner(&cup_density_grid_1d(&g.swapped(), quad)?.swapped())?;
    Ok((lhs - rhs).abs() / (f.lp_norm(2.0) * g.lp_norm(2.0)))
}

/// Normalized Gaussian bump of width `sigma` centered at `(cx, cy)`.
pub fn offset_gaussian(cx: f64, cy: f64, sigma: f64) -> impl Fn(f64, f64) -> f64 + Sync + Copy {
    move |x, y| {
        let s2 = sigma * sigma;
        (-((x - cx).powi(2) + (y - cy).powi(2)) / (2.0 * s2)).exp() / (2.0 * std::f64::consts::PI * s2)
    }
}

/// Continuum value of `‖U w‖₂ / ‖w‖₂` for the bump [`offset_gaussian`] at
/// distance `a` from the origin. Writing `D` for the difference of two
/// independent uniform angles on `[0, π/2]`, the ratio squared is
/// `E exp(−a² sin²(D/2) / σ²)`, the overlap of the bump with its rotation by `D`.
pub fn offset_gaussian_l2_ratio(a: f64, sigma: f64) -> f64 {
    let k = (a / sigma).powi(2);
    // D has the triangular density (2/π)(1 − 2|D|/π) on [−π/2, π/2]
    let integrand = |d: f64| (1.0 - d / FRAC_PI_2) * (-k * (0.5 * d).sin().powi(2)).exp();
    let half = crate::quad::composite_gauss(integrand, 0.0, FRAC_PI_2, 16);
    (2.0 * half / FRAC_PI_2).sqrt()
}

/// Histogram of the first two coordinates of `batch` on the cells of `grid`,
/// normalized as a density (points outside are dropped).
pub fn histogram_density(batch: &PointBatch, half_width: f64, cells: usize) -> Result<GridDensity2D> {
    if batch.dim() < 2 {
        return Err(Error::Shape { expected: 2, got: batch.dim() });
    }
    let h = 2.0 * half_width / cells as f64;
    let mut counts = vec![0.0; cells * cells];
    for p in batch.points() {
        let i = ((p[0] + half_width) / h).floor();
        let j = ((p[1] + half_width) / h).floor();
        if i >= 0.0 && j >= 0.0 && (i as usize) < cells && (j as usize) < cells {
            counts[i as usize * cells + j as usize] += 1.0;
        }
    }
    let norm = 1.0 / (batch.count() as f64 * h * h);
    GridDensity2D::new(half_width, cells, counts.into_iter().map(|c| c * norm).collect())
}

/// Total variation `½ ∫|w − g|` between two densities on the same grid.
pub fn total_variation(w: &GridDensity2D, g: &GridDensity2D) -> Result<f64> {
    w.same_grid(g)?;
    let h2 = w.spacing().powi(2);
    Ok(0.5 * h2 * w.values.iter().zip(&g.values).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Averages `k × k` blocks, mapping an `M`-grid onto an `M/k`-grid.
pub fn coarsen(w: &GridDensity2D, k: usize) -> Result<GridDensity2D> {
    if k == 0 || w.cells % k != 0 {
        return Err(Error::Config(format!("cannot coarsen {} cells by {k}", w.cells)));
    }
    let m = w.cells / k;
    let mut values = vec![0.0; m * m];
    for i in 0..w.cells {
        for j in 0..w.cells {
            values[(i / k) * m + j / k] += w.at(i, j) / (k * k) as f64;
        }
    }
    GridDensity2D::new(w.half_width, m, values)
}
