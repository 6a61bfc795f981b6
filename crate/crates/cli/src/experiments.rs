use std::f64::consts::PI;
use std::time::Instant;

use cupcheck::funcs::{lipschitz_suite, three_bump_mixture, TestFunction};
use cupcheck::measures::{
    cauchy_radial_cdf, cauchy_radial_moment, gaussian_radial_cdf, sample_cauchy, sample_sphere_uniform,
    sample_std_gaussian, BallMarginal, CauchyParams, PointBatch,
};
use cupcheck::special::{
    cauchy_norm_const, gamma_inequality_bounds, gaussian_abs_moment, lipschitz_moment_bound, pisier_cp,
    poincare_constants, product_bound_d, regularized_beta, rescaled_poincare_coefficient, spherical_mean_ratio_g,
};
use cupcheck::stats::ks_distance;
use cupcheck::transform::{
    cup_adjoint_gap, cup_density_grid_1d, cup_operator_norm_checks, offset_gaussian, offset_gaussian_l2_ratio,
    GridDensity2D, QuadratureSpec, QuadratureRule,
};
use cupcheck::verify::{
    cauchy_poincare_report, default_t_grid, gaussian_limit_sweep, isoperimetry_report, pisier_gaussian_report,
    product_domination_check, sphere_poincare_report, tail_and_moment_report, InequalityReport, IsoMeasure,
    MCEstimate, Psi, ReportSet, SetSpec, Verdict,
};
use cupcheck::RngStream;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, DEFAULT_COUNT};
use crate::plot::{Plot, Series, Style};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Constants,
    Sample,
    Cup,
    Pisier,
    CauchyPoincare,
    Sphere,
    Isoperimetry,
    Tails,
    LimitSweep,
}

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::Constants,
        Experiment::Sample,
        Experiment::Cup,
        Experiment::Pisier,
        Experiment::CauchyPoincare,
        Experiment::Sphere,
        Experiment::Isoperimetry,
        Experiment::Tails,
        Experiment::LimitSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Constants => "constants",
            Experiment::Sample => "sample",
            Experiment::Cup => "cup",
            Experiment::Pisier => "pisier",
            Experiment::CauchyPoincare => "cauchy-poincare",
            Experiment::Sphere => "sphere",
            Experiment::Isoperimetry => "isoperimetry",
            Experiment::Tails => "tails",
            Experiment::LimitSweep => "limit-sweep",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }

    /// The parameter window each experiment enforces.
    pub fn window(self) -> &'static str {
        match self {
            Experiment::Constants => "requires alpha > n + 1/2 and 1 <= p < 2(alpha−n)",
            Experiment::Sample => "requires alpha > n/2 for cauchy, n >= 2 for sphere",
            Experiment::Cup => "requires cells >= 4 and negligible mass near the grid edge",
            Experiment::Pisier => "requires p >= 1 (psi = power) or psi = exp",
            Experiment::CauchyPoincare => "requires alpha > n + 1/2 and 1 <= p < 2(alpha−n)",
            Experiment::Sphere => "requires n >= 2",
            Experiment::Isoperimetry => "requires beta >= (n+1)/2 for cauchy",
            Experiment::Tails => "requires alpha >= n + 3/2",
            Experiment::LimitSweep => "requires alpha > n + 1/2 and 1 <= p < 2(alpha−n) for every alpha",
        }
    }

    pub fn defaults(self) -> &'static str {
        match self {
            Experiment::Constants => "n = 1, p = 2, alpha = 3",
            Experiment::Sample => "measure = cauchy, n = 2, alpha = 3, samples = 10000",
            Experiment::Cup => "cells = 256, nodes = 64, half-width 8, bump sigma 0.25 at (2, 0)",
            Experiment::Pisier => "n = 2, p = 1, psi = power, functions = linear + rbf mixture",
            Experiment::CauchyPoincare => "n = 2, alpha = 6, p = 2, functions = 1-Lipschitz suite",
            Experiment::Sphere => "n = 2, functions = 1-Lipschitz suite",
            Experiment::Isoperimetry => "measure = gaussian, n = 2, beta = 4, set = halfspace:0",
            Experiment::Tails => "n = 2, alpha = 38, t = 0..floor(sqrt(alpha - n)), functions = 1-Lipschitz suite",
            Experiment::LimitSweep => "n = 2, p = 1, alphas = 100,1000,10000",
        }
    }
}

pub fn list_experiments() -> String {
    let mut out = String::new();
    for e in Experiment::ALL {
        out.push_str(&format!("{}: {}\n    defaults: {}\n", e.name(), e.window(), e.defaults()));
    }
    out
}

pub struct RunOutput {
    pub document: Value,
    pub verdict: Option<Verdict>,
    pub csv: Option<String>,
    pub summary: Vec<String>,
    pub warnings: Vec<String>,
}

struct Body {
    results: Value,
    verdict: Option<Verdict>,
    csv: Option<String>,
    summary: Vec<String>,
    warnings: Vec<String>,
}

impl Body {
    fn new(results: Value) -> Self {
        Body { results, verdict: None, csv: None, summary: Vec::new(), warnings: Vec::new() }
    }
}

pub fn run(experiment: Experiment, cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let start = Instant::now();
    let body = match experiment {
        Experiment::Constants => constants(cfg)?,
        Experiment::Sample => sample(cfg)?,
        Experiment::Cup => cup(cfg)?,
        Experiment::Pisier => pisier(cfg)?,
        Experiment::CauchyPoincare => cauchy_poincare(cfg)?,
        Experiment::Sphere => sphere(cfg)?,
        Experiment::Isoperimetry => isoperimetry(cfg)?,
        Experiment::Tails => tails(cfg)?,
        Experiment::LimitSweep => limit_sweep(cfg)?,
    };
    let mut resolved = cfg.clone();
    resolved.experiment = Some(experiment.name().into());
    resolved.outputs = Default::default();
    let mut document = json!({
        "experiment": experiment.name(),
        "config": resolved,
        "verdict": body.verdict,
        "results": body.results,
        "warnings": body.warnings,
        "runtime_seconds": start.elapsed().as_secs_f64(),
    });
    let hash = cupcheck::verify::content_hash(&document);
    document["content_hash"] = Value::String(hash);
    Ok(RunOutput { document, verdict: body.verdict, csv: body.csv, summary: body.summary, warnings: body.warnings })
}

fn req_n(cfg: &ExperimentConfig, default: usize) -> Result<usize, CliError> {
    match cfg.params.n.unwrap_or(default) {
        0 => Err(CliError::Config("n must be at least 1".into())),
        n => Ok(n),
    }
}

fn functions(cfg: &ExperimentConfig, n: usize, default: Vec<(String, TestFunction)>) -> Result<Vec<(String, TestFunction)>, CliError> {
    if cfg.functions.is_empty() {
        return Ok(default);
    }
    cfg.functions
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let f = spec.build().map_err(|e| CliError::Config(format!("function {i}: {e}")))?;
            if f.dim() != n {
                return Err(CliError::Config(format!("function {i} has dimension {}, expected n = {n}", f.dim())));
            }
            let kind = serde_json::to_value(spec).ok().and_then(|v| v["kind"].as_str().map(str::to_owned));
            Ok((format!("{i}:{}", kind.unwrap_or_default()), f))
        })
        .collect()
}

fn worst(a: Option<Verdict>, b: Verdict) -> Option<Verdict> {
    Some(a.map_or(b, |a| a.max(b)))
}

fn push_report(body: &mut Body, rows: &mut Vec<Value>, name: &str, report: InequalityReport) {
    body.summary.push(format!("[{name}] {}", report.summary_line()));
    if !report.checks_pass() {
        body.warnings.push(format!("[{name}] diagnostic checks failed: {:?}", report.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>()));
    }
    body.verdict = worst(body.verdict, report.verdict);
    rows.push(json!({ "function": name, "report": report }));
}

fn push_set(body: &mut Body, rows: &mut Vec<Value>, name: &str, set: ReportSet) {
    for r in &set.reports {
        body.summary.push(format!("[{name}] {}", r.summary_line()));
    }
    for note in &set.notes {
        body.summary.push(format!("[{name}] note: {note}"));
    }
    if !set.checks_pass() {
        body.warnings.push(format!("[{name}] diagnostic checks failed"));
    }
    body.verdict = worst(body.verdict, set.verdict());
    rows.push(json!({ "function": name, "report": set }));
}

fn constants(cfg: &ExperimentConfig) -> Result<Body, CliError> {
    let n = req_n(cfg, 1)?;
    let p = cfg.params.p.unwrap_or(2.0);
    let alpha = cfg.params.alpha.unwrap_or(3.0);
    let nf = n as f64;
    let consts = poincare_constants(n, p, alpha)?;
    let coefficient = consts.c * (PI / 2.0).powf(p);
    let mut results = json!({
        "n": n,
        "p": p,
        "alpha": alpha,
        "poincare_constants": consts,
        "coefficient": coefficient,
        "rescaled_coefficient": rescaled_poincare_coefficient(n, p, alpha)?,
        "pisier_cp": pisier_cp(p)?,
        "cauchy_norm_const": cauchy_norm_const(n, alpha)?,
        "product_bound_d": product_bound_d(n, alpha)?,
        "gaussian_abs_moment": gaussian_abs_moment(n, p)?,
        "spherical_mean_ratio": spherical_mean_ratio_g(n, p)?,
        "gamma_bounds": gamma_inequality_bounds(alpha)?,
    });
    if alpha >= nf + 1.5 && p <= 2.0 * (alpha - nf - 1.0) {
        results["lipschitz_moment_bound"] = json!(lipschitz_moment_bound(n, alpha, p)?);
    }
    let mut body = Body::new(results);
    body.summary.push(format!(
        "C = {:.15e}, A = {:.15e}, c_ratio = {:.15e}, beta = {}",
        consts.c, consts.a, consts.c_ratio, consts.beta
    ));
    body.summary.push(format!("C (pi/2)^p = {coefficient:.15e}"));
    if p == 2.0 && alpha - nf > 1.0 {
        let closed = PI * PI / (8.0 * (alpha - nf - 1.0));
        body.summary.push(format!("p = 2 closed form pi^2/(8(alpha-n-1)) = {closed:.15e}"));
        body.results["p2_closed_form"] = json!(closed);
    }
    Ok(body)
}

fn sample(cfg: &ExperimentConfig) -> Result<Body, CliError> {
    let n = req_n(cfg, 2)?;
    let measure = cfg.params.measure.clone().unwrap_or_else(|| "cauchy".into());
    let count = cfg.count(10_000);
    let stream = RngStream::new(cfg.seed(), 0);
    let (batch, radial, expected_sq): (PointBatch, Box<dyn Fn(&PointBatch) -> f64>, Option<f64>) = match measure.as_str() {
        "cauchy" => {
            let params = CauchyParams::new(n, cfg.params.alpha.unwrap_or(3.0))?;
            let second = cauchy_radial_moment(params, 2.0).ok();
            (
                sample_cauchy(params, count, stream),
                Box::new(move |b| ks_distance(&b.norms(), |r| cauchy_radial_cdf(params, r))),
                second,
            )
        }
        "gaussian" => (
            sample_std_gaussian(n, count, stream),
            Box::new(move |b| ks_distance(&b.norms(), |r| gaussian_radial_cdf(n, r))),
            Some(n as f64),
        ),
        "sphere" => {
            // |x₁|² ~ Beta(1/2, (n−1)/2) on S^{n−1}
            let batch = sample_sphere_uniform(n, count, stream)?;
            let half = 0.5 * (n as f64 - 1.0);
            (
                batch,
                Box::new(move |b| {
                    let abs: Vec<f64> = b.coordinate(0).iter().map(|x| x.abs()).collect();
                    ks_distance(&abs, |r| regularized_beta((r * r).min(1.0), 0.5, half))
                }),
                Some(1.0),
            )
        }
        "ball" => {
            // first half of a uniform point on S^{2n−1}: |u|² ~ Beta(n/2, n/2)
            let h = 0.5 * n as f64;
            (
                BallMarginal::new(n)?.sample(count, stream),
                Box::new(move |b| ks_distance(&b.norms(), |r| regularized_beta((r * r).min(1.0), h, h))),
                Some(0.5),
            )
        }
        other => return Err(CliError::Config(format!("unknown measure '{other}' (expected cauchy, gaussian, sphere, ball)"))),
    };
    let ks = radial(&batch);
    let threshold = 1.628 / (count as f64).sqrt();
    let norms_sq: Vec<f64> = batch.norms().iter().map(|r| r * r).collect();
    let (mean_sq, se_sq) = cupcheck::stats::mean_and_se(&norms_sq);
    let mut body = Body::new(json!({
        "measure": measure,
        "n": n,
        "alpha": cfg.params.alpha,
        "count": count,
        "mean_norm_sq": { "mean": mean_sq, "se": se_sq },
        "exact_mean_norm_sq": expected_sq,
        "radial_ks": ks,
        "ks_threshold_1pct": threshold,
        "ks_pass": ks < threshold,
    }));
    body.summary.push(format!("{count} points from {measure} (n = {n}); radial KS = {ks:.5} (1% threshold {threshold:.5})"));
    if ks >= threshold {
        body.warnings.push("radial KS statistic above the 1% threshold".into());
    }
    body.csv = Some(batch.to_csv());
    Ok(body)
}

fn cup(cfg: &ExperimentConfig) -> Result<Body, CliError> {
    let cells = cfg.params.cells.unwrap_or(if cfg.quick() { 128 } else { 256 });
    let nodes = cfg.params.nodes.unwrap_or(64);
    let quad = QuadratureSpec { nodes, rule: QuadratureRule::GaussLegendre };
    let half_width = 8.0;
    let (a, sigma) = (2.0, 0.25);
    let offset = GridDensity2D::tabulate(half_width, cells, offset_gaussian(a, 0.0, sigma))?;
    let radial = GridDensity2D::tabulate(half_width, cells, offset_gaussian(0.0, 0.0, 0.5))?;
    let ps = [1.0, 2.0, 3.0, f64::INFINITY];
    let mut body = Body::new(Value::Null);
    let mut lines = Vec::new();
    for (name, w) in [("offset_bump", &offset), ("radial_bump", &radial)] {
        for c in cup_operator_norm_checks(w, quad, &ps)? {
            let report = InequalityReport::new(
                format!("contraction ||U w||_{} <= ||w||_{}", c.p, c.p),
                MCEstimate::exact(c.out_norm),
                MCEstimate::exact(c.in_norm * (1.0 + c.tol)),
                cfg.seed(),
            )
            .param("p", if c.p.is_finite() { json!(c.p) } else { json!("inf") })
            .param("ratio", c.ratio)
            .param("grid_tolerance", c.tol);
            push_report(&mut body, &mut lines, name, report);
        }
    }
    let l2 = cup_operator_norm_checks(&offset, quad, &[2.0])?[0].ratio;
    let continuum = offset_gaussian_l2_ratio(a, sigma);
    let swapped_probe = GridDensity2D::tabulate(half_width, cells, offset_gaussian(-1.0, 1.5, 0.4))?;
    let adjoint_gap = cup_adjoint_gap(&offset, &swapped_probe, quad)?;
    body.summary.push(format!(
        "offset bump: L2 ratio {l2:.6} (continuum {continuum:.6}); U is a contraction, not an isometry"
    ));
    body.summary.push(format!("adjoint relation <Uf, g> = <f, RURg>: relative gap {adjoint_gap:.2e}"));
    body.results = json!({
        "half_width": half_width,
        "cells": cells,
        "nodes": nodes,
        "offset_bump": { "center": [a, 0.0], "sigma": sigma },
        "radial_bump": { "sigma": 0.5 },
        "lines": lines,
        "offset_l2_ratio": l2,
        "offset_l2_ratio_continuum": continuum,
        "adjoint_gap": adjoint_gap,
    });
    body.csv = Some(cup_density_grid_1d(&offset, quad)?.to_csv());
    Ok(body)
}

fn pisier(cfg: &ExperimentConfig) -> Result<Body, CliError> {
    let n = req_n(cfg, 2)?;
    let psi = match cfg.params.psi.as_deref().unwrap_or("power") {
        "power" => Psi::Power { p: cfg.params.p.unwrap_or(1.0) },
        "exp" => Psi::Exp,
        other => return Err(CliError::Config(format!("unknown psi '{other}' (expected power or exp)"))),
    };
    let funcs = functions(
        cfg,
        n,
        vec![("linear".into(), TestFunction::coordinate(n)), ("rbf_mixture".into(), three_bump_mixture(n))],
    )?;
    let count = cfg.count(DEFAULT_COUNT);
    let mut body = Body::new(Value::Null);
    let mut rows = Vec::new();
    for (i, (name, f)) in funcs.iter().enumerate() {
        let report = pisier_gaussian_report(f, psi, n, count, RngStream::new(cfg.seed(), i as u64))?;
        push_report(&mut body, &mut rows, name, report);
    }
    body.results = Value::Array(rows);
    Ok(body)
}

fn cauchy_poincare(cfg: &ExperimentConfig) -> Result<Body, CliError> {
    let n = req_n(cfg, 2)?;
    let alpha = cfg.params.alpha.unwrap_or(6.0);
    let p = cfg.params.p.unwrap_or(2.0);
    poincare_constants(n, p, alpha)?;
    let params = CauchyParams::new(n, alpha)?;
    let funcs = functions(cfg, n, lipschitz_suite(n))?;
    let count = cfg.count(DEFAULT_COUNT);
    let mut body = Body::new(Value::Null);
    let mut rows = Vec::new();
    for (i, (name, f)) in funcs.iter().enumerate() {
        let report = cauchy_poincare_report(f, params, p, count, RngStream::new(cfg.seed(), i as u64))?;
        push_report(&mut body, &mut rows, name, report);
    }
    body.results = Value::Array(rows);
    Ok(body)
}

fn sphere(cfg: &ExperimentConfig) -> Result<Body, CliError> {
    let n = req_n(cfg, 2)?;
    if n < 2 {
        return Err(cupcheck::Error::Domain(format!("sphere: requires n >= 2 (got n = {n})")).into());
    }
    let funcs = functions(cfg, n, lipschitz_suite(n))?;
    let count = cfg.count(DEFAULT_COUNT);
    let mut body = Body::new(Value::Null);
    let mut rows = Vec::new();
    for (i, (name, f)) in funcs.iter().enumerate() {
        let report = sphere_poincare_report(f, n, count, RngStream::new(cfg.seed(), i as u64))?;
        push_report(&mut body, &mut rows, name, report);
    }
    body.results = Value::Array(rows);
    Ok(body)
}

fn isoperimetry(cfg: &ExperimentConfig) -> Result<Body, CliError> {
    let n = req_n(cfg, 2)?;
    let set = SetSpec::parse(cfg.params.set.as_deref().unwrap_or("halfspace:0"), n)?;
    let count = cfg.count(DEFAULT_COUNT);
    let stream = RngStream::new(cfg.seed(), 0);
    let mut body = Body::new(Value::Null);
    let mut rows = Vec::new();
    match cfg.params.measure.as_deref().unwrap_or("gaussian") {
        "gaussian" => {
            let set_report = isoperimetry_report(IsoMeasure::Gaussian { n }, &set, count, stream)?;
            push_set(&mut body, &mut rows, "gaussian", set_report);
        }
        "cauchy" => {
            let beta = cfg.params.beta.unwrap_or(4.0);
            let set_report = isoperimetry_report(IsoMeasure::Cauchy { n, beta }, &set, count, stream)?;
            push_set(&mut body, &mut rows, "cauchy", set_report);
            // the constant d in (ii) rests on the pointwise product domination at β*
            let beta_star = beta + 0.5 * (n as f64 + 1.0);
            let dom = product_domination_check(CauchyParams::new(n, beta_star)?, count, stream.fork("domination"))?;
            push_report(&mut body, &mut rows, "product-domination", dom.to_report());
        }
        other => return Err(CliError::Config(format!("unknown measure '{other}' (expected gaussian or cauchy)"))),
    }
    body.results = Value::Array(rows);
    Ok(body)
}

fn tails(cfg: &ExperimentConfig) -> Result<Body, CliError> {
    let n = req_n(cfg, 2)?;
    let alpha = cfg.params.alpha.unwrap_or(38.0);
    if !(alpha >= n as f64 + 1.5) {
        return Err(cupcheck::Error::Domain(format!("tails: requires alpha >= n + 3/2 (got n = {n}, alpha = {alpha})")).into());
    }
    let params = CauchyParams::new(n, alpha)?;
    let t_grid = cfg.params.t_grid.clone().unwrap_or_else(|| default_t_grid(params));
    let funcs = functions(cfg, n, lipschitz_suite(n))?;
    let count = cfg.count(DEFAULT_COUNT);
    let mut body = Body::new(Value::Null);
    let mut rows = Vec::new();
    let mut csv = String::from("function,measure,t,tail,se,bound\n");
    for (i, (name, f)) in funcs.iter().enumerate() {
        let set = tail_and_moment_report(f, params, &t_grid, count, RngStream::new(cfg.seed(), i as u64))?;
        for r in set.reports.iter().filter(|r| r.label.starts_with("tail")) {
            let measure = if r.label.contains(" x m_n") { "product" } else { "pair" };
            csv.push_str(&format!("{name},{measure},{},{:e},{:e},{:e}\n", r.params["t"], r.lhs.mean, r.lhs.std_error, r.rhs.mean));
        }
        push_set(&mut body, &mut rows, name, set);
    }
    body.results = Value::Array(rows);
    body.csv = Some(csv);
    Ok(body)
}

fn limit_sweep(cfg: &ExperimentConfig) -> Result<Body, CliError> {
    let n = req_n(cfg, 2)?;
    let p = cfg.params.p.unwrap_or(1.0);
    let alphas = cfg.params.alphas.clone().unwrap_or_else(|| vec![1e2, 1e3, 1e4]);
    let sweep = gaussian_limit_sweep(n, p, &alphas)?;
    let mut body = Body::new(serde_json::to_value(&sweep).expect("sweep serializes"));
    for r in &sweep.rows {
        body.summary.push(format!("alpha = {:>10}  rescaled = {:.10}  limit = {:.10}  gap = {:.3e}", r.alpha, r.rescaled, r.limit, r.rel_gap));
    }
    if sweep.rows.is_empty() {
        body.warnings.push("empty sweep".into());
    } else if !sweep.monotone {
        body.warnings.push("relative gaps are not strictly decreasing".into());
    }
    body.csv = Some(sweep.to_csv());
    Ok(body)
}

fn limit_label(p: f64) -> String {
    if p == 1.0 {
        "c_1 = sqrt(pi/2)".into()
    } else if p == 2.0 {
        "c_2 = pi^2/4".into()
    } else {
        format!("c_{p} = {:.6}", pisier_cp(p).unwrap_or(f64::NAN))
    }
}

/// Builds the plot for a saved run document, if that experiment has one.
pub fn plot_from_document(doc: &Value) -> Option<Plot> {
    match doc["experiment"].as_str()? {
        "limit-sweep" => {
            let results = &doc["results"];
            let p = results["p"].as_f64()?;
            let rows = results["rows"].as_array()?;
            let points: Vec<(f64, f64)> =
                rows.iter().filter_map(|r| Some((r["alpha"].as_f64()?, r["rescaled"].as_f64()?))).collect();
            let limit = results["limit"].as_f64()?;
            Some(Plot {
                title: format!("Rescaled Cauchy Poincare constant, n = {}, p = {p}", results["n"]),
                x_label: "alpha".into(),
                y_label: "C (2 alpha)^(p/2) (pi/2)^p".into(),
                log_x: true,
                series: vec![Series { name: "rescaled constant".into(), points, style: Style::Line }],
                hlines: vec![(limit, limit_label(p))],
            })
        }
        "tails" => {
            let mut series = Vec::new();
            let mut t_max: f64 = 0.0;
            for row in doc["results"].as_array()? {
                let name = row["function"].as_str().unwrap_or("f");
                let points: Vec<(f64, f64)> = row["report"]["reports"]
                    .as_array()?
                    .iter()
                    .filter(|r| r["label"].as_str().is_some_and(|l| l.starts_with("tail m_2n")))
                    .filter_map(|r| Some((r["params"]["t"].as_f64()?, r["lhs"]["mean"].as_f64()?)))
                    .collect();
                t_max = points.iter().fold(t_max, |m, (t, _)| m.max(*t));
                series.push(Series { name: format!("{name} (empirical)"), points, style: Style::Markers });
            }
            if t_max > 0.0 {
                let curve = (0..=100).map(|k| {
                    let t = t_max * k as f64 / 100.0;
                    (t, (2.0 * (-t * t / 12.0).exp()).min(1.05))
                });
                series.push(Series { name: "2 exp(-t^2/12)".into(), points: curve.collect(), style: Style::Line });
            }
            Some(Plot {
                title: "Deviation of sqrt(alpha - n)|f(x) - f(y)| under the pair measure".into(),
                x_label: "t".into(),
                y_label: "tail probability".into(),
                log_x: false,
                series,
                hlines: Vec::new(),
            })
        }
        _ => None,
    }
}
