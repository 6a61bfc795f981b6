//! `cupcheck`: run the verification experiments from flags or a TOML config.
//!
//! Exit codes: 0 ok, 2 configuration error, 3 domain error, 4 a VIOLATED verdict.

mod config;
mod experiments;
mod plot;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cupcheck::verify::Verdict;

use config::{parse_list, ExperimentConfig};
use experiments::{list_experiments, plot_from_document, Experiment};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] cupcheck::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                cupcheck::Error::Config(_) | cupcheck::Error::Parse(_) | cupcheck::Error::Shape { .. } => 2,
                _ => 3,
            },
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "cupcheck", version, about = "Numerical checks of Gaussian and Cauchy Poincare-type and isoperimetric inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List experiments with their parameter windows and defaults.
    List,
    /// Run the experiment named in a config file.
    Run(Flags),
    /// Poincare constants, normalizing constants and Gamma bounds.
    Constants(Flags),
    /// Draw points from a measure and compare radial laws.
    Sample(Flags),
    /// Norms of the spherical-cup operator on a density grid.
    Cup(Flags),
    /// Pisier's Gaussian inequality E psi(f(Y)-f(X)) <= E psi((pi/2)<grad f(X), Y>).
    Pisier(Flags),
    /// The L^p Poincare inequality for Cauchy pair measures.
    CauchyPoincare(Flags),
    /// The Poincare inequality on S^{2n-1}.
    Sphere(Flags),
    /// Perimeter lower bounds for half-spaces and balls.
    Isoperimetry(Flags),
    /// Subgaussian tails and moments of Lipschitz functions.
    Tails(Flags),
    /// Convergence of rescaled Cauchy constants to the Gaussian ones.
    LimitSweep(Flags),
    /// Render SVG plots from saved limit-sweep or tails reports.
    Plot {
        /// JSON reports written by `--out`.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Output file (single input) or directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// TOML config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    /// Monte Carlo sample count.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// halfspace:<offset> or ball:<radius>.
    #[arg(long)]
    set: Option<String>,
    /// gaussian | cauchy (isoperimetry); cauchy | gaussian | sphere | ball (sample).
    #[arg(long)]
    measure: Option<String>,
    /// Comma-separated alphas for limit-sweep.
    #[arg(long)]
    alphas: Option<String>,
    /// Comma-separated t values for tails.
    #[arg(long)]
    t_grid: Option<String>,
    /// power | exp (pisier).
    #[arg(long)]
    psi: Option<String>,
    /// Grid cells per axis (cup).
    #[arg(long)]
    cells: Option<usize>,
    /// Quadrature nodes over the rotation angle (cup).
    #[arg(long)]
    nodes: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write an SVG plot (limit-sweep, tails).
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Divide sample counts by 100 for smoke runs.
    #[arg(long)]
    quick: bool,
}

impl Flags {
    fn to_config(&self) -> Result<ExperimentConfig, CliError> {
        let mut c = ExperimentConfig::default();
        c.params.n = self.n;
        c.params.alpha = self.alpha;
        c.params.beta = self.beta;
        c.params.p = self.p;
        c.params.set = self.set.clone();
        c.params.measure = self.measure.clone();
        c.params.psi = self.psi.clone();
        c.params.cells = self.cells;
        c.params.nodes = self.nodes;
        c.params.alphas = self.alphas.as_deref().map(parse_list).transpose().map_err(CliError::Config)?;
        c.params.t_grid = self.t_grid.as_deref().map(parse_list).transpose().map_err(CliError::Config)?;
        c.sampling.count = self.samples;
        c.sampling.seed = self.seed;
        c.sampling.quick = self.quick.then_some(true);
        c.outputs.json_path = self.out.clone();
        c.outputs.csv_path = self.csv.clone();
        c.outputs.plot_path = self.plot.clone();
        Ok(c)
    }

    fn resolve(&self, named: Option<Experiment>) -> Result<(Experiment, ExperimentConfig), CliError> {
        let base = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        let cfg = base.overlay(self.to_config()?);
        let from_file = cfg
            .experiment
            .as_deref()
            .map(|name| Experiment::from_name(name).ok_or_else(|| CliError::Config(format!("unknown experiment '{name}'"))))
            .transpose()?;
        let experiment = match (named, from_file) {
            (Some(a), Some(b)) if a != b => {
                return Err(CliError::Config(format!("config names experiment '{}' but '{}' was requested", b.name(), a.name())))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(CliError::Config("no experiment given (set `experiment` in the config)".into())),
        };
        Ok((experiment, cfg))
    }
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn run_experiment(flags: &Flags, named: Option<Experiment>) -> Result<ExitCode, CliError> {
    let (experiment, cfg) = flags.resolve(named)?;
    let out = experiments::run(experiment, &cfg)?;
    let json = serde_json::to_string_pretty(&out.document).expect("document serializes") + "\n";

    let plot = match &cfg.outputs.plot_path {
        Some(_) => match plot_from_document(&out.document) {
            Some(p) if !p.is_empty() => Some(p),
            Some(_) => {
                eprintln!("warning: nothing to plot");
                None
            }
            None => {
                eprintln!("warning: {} has no plot", experiment.name());
                None
            }
        },
        None => None,
    };
    for line in &out.summary {
        eprintln!("{line}");
    }
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    match &cfg.outputs.json_path {
        Some(path) => write(path, &json)?,
        None => print!("{json}"),
    }
    if let Some(path) = &cfg.outputs.csv_path {
        match &out.csv {
            Some(csv) => write(path, csv)?,
            None => eprintln!("warning: {} has no CSV output", experiment.name()),
        }
    }
    if let (Some(path), Some(p)) = (&cfg.outputs.plot_path, plot) {
        write(path, &p.to_svg())?;
    }
    let verdict = out.verdict.map_or("n/a".to_string(), |v| v.to_string());
    eprintln!("{}: {verdict}", experiment.name());
    Ok(if out.verdict == Some(Verdict::Violated) { ExitCode::from(4) } else { ExitCode::SUCCESS })
}

fn plot_reports(inputs: &[PathBuf], out: Option<&Path>) -> Result<ExitCode, CliError> {
    let mut docs = Vec::new();
    for path in inputs {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let doc: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{} is not a report: {e}", path.display())))?;
        docs.push((path, doc));
    }
    for (path, doc) in &docs {
        let target = match out {
            Some(o) if inputs.len() == 1 && o.extension().is_some() => o.to_path_buf(),
            Some(dir) => dir.join(path.with_extension("svg").file_name().expect("file name")),
            None => path.with_extension("svg"),
        };
        match plot_from_document(doc) {
            Some(p) if !p.is_empty() => {
                write(&target, &p.to_svg())?;
                eprintln!("wrote {}", target.display());
            }
            Some(_) => eprintln!("warning: {} has nothing to plot", path.display()),
            None => eprintln!("warning: {} is not a limit-sweep or tails report", path.display()),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::List => {
            print!("{}", list_experiments());
            Ok(ExitCode::SUCCESS)
        }
        Command::Plot { inputs, out } => plot_reports(inputs, out.as_deref()),
        Command::Run(flags) => run_experiment(flags, None),
        Command::Constants(f) => run_experiment(f, Some(Experiment::Constants)),
        Command::Sample(f) => run_experiment(f, Some(Experiment::Sample)),
        Command::Cup(f) => run_experiment(f, Some(Experiment::Cup)),
        Command::Pisier(f) => run_experiment(f, Some(Experiment::Pisier)),
        Command::CauchyPoincare(f) => run_experiment(f, Some(Experiment::CauchyPoincare)),
        Command::Sphere(f) => run_experiment(f, Some(Experiment::Sphere)),
        Command::Isoperimetry(f) => run_experiment(f, Some(Experiment::Isoperimetry)),
        Command::Tails(f) => run_experiment(f, Some(Experiment::Tails)),
        Command::LimitSweep(f) => run_experiment(f, Some(Experiment::LimitSweep)),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(e.exit_code())
    })
}
