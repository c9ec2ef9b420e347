//! The `uasa` command line: `validate`, `sample`, `run`, `analyze`.
//!
//! Exit codes: 0 success, 2 user or configuration error, 3 model-execution
//! error. Every failure prints one line `E_CODE: message` to stderr.
//!
//! `sample --out s.txt` writes three files: the factor values `s.txt` (the
//! file models read), the unit-hypercube coordinates `s.txt.unit`, and the
//! design sidecar `s.txt.meta.json` that `analyze` needs.

pub mod config;
pub mod plots;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use config::Config;

use crate::correlate::iman_conover;
use crate::design::{
    fast_design, fixed_design, lhs_design, lptau_design, morris_design, random_design, read_sample_file,
    saltelli_design, write_sample_file, DesignMeta, FastMode, Group, SampleMatrix, DEFAULT_INTERFERENCE_ORDER,
};
use crate::runner::{evaluate_all, read_output_file_any, write_output_file, OutputVector};
use crate::sensitivity::{
    binned_measures, compatible_methods, fast_indices, morris_measures, regression_measures, sobol_from_outputs,
    SaReport, COMPATIBILITY,
};
use crate::uncertainty::{summarize, UaOptions};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "uasa", version, about = "Monte Carlo uncertainty and global sensitivity analysis")]
pub struct Cli {
    /// JSON configuration document.
    #[arg(long, global = true, default_value = "config.json")]
    pub config: PathBuf,
    /// Seed for random designs and rank-correlation induction.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output path: sample file (sample), output file (run), report directory (analyze).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the factor definitions and the model section.
    Validate,
    /// Generate a sample and its design sidecar.
    Sample(SampleArgs),
    /// Evaluate the model over a sample.
    Run(RunArgs),
    /// Uncertainty and sensitivity reports with plot files.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Random,
    Lhs,
    Lptau,
    Morris,
    FastClassic,
    FastExtended,
    Sobol,
    Fixed,
}

#[derive(Debug, clap::Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    /// Rows (random, lhs, lptau), block size (fast-classic) or base size N (sobol).
    #[arg(short = 'n', long)]
    pub n: Option<usize>,
    /// Morris trajectories.
    #[arg(short = 'r', long, default_value_t = 10)]
    pub trajectories: usize,
    /// Morris grid levels (even).
    #[arg(short = 'p', long, default_value_t = 4)]
    pub levels: usize,
    /// Points per factor or group block (fast-extended); must be odd.
    #[arg(long)]
    pub n_per_factor: Option<usize>,
    /// LHS replicates.
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,
    /// Leading LP-tau points to skip (lptau, sobol).
    #[arg(long, default_value_t = 0)]
    pub skip: u64,
    /// FAST interference order M.
    #[arg(long, default_value_t = DEFAULT_INTERFERENCE_ORDER)]
    pub order: usize,
    /// FAST groups, `name=a,b;other=c`; unlisted factors stay single.
    #[arg(long)]
    pub groups: Option<String>,
    /// Unit-hypercube sample file for `--method fixed`.
    #[arg(long)]
    pub fixed: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    #[arg(long, default_value = "sample.txt")]
    pub sample: PathBuf,
    /// Worker threads for internal models.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SaChoice {
    Regression,
    Binned,
    Morris,
    Fast,
    Sobol,
}

#[derive(Debug, clap::Args)]
pub struct AnalyzeArgs {
    #[arg(long, default_value = "sample.txt")]
    pub sample: PathBuf,
    #[arg(long, default_value = "output.txt")]
    pub output: PathBuf,
    /// Uncertainty analysis. With neither `--ua` nor `--sa`, both run.
    #[arg(long)]
    pub ua: bool,
    /// Sensitivity method; must match the design.
    #[arg(long, value_enum)]
    pub sa: Option<SaChoice>,
    /// Comma-separated percentile probabilities.
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.25, 0.5, 0.75, 0.95])]
    pub percentiles: Vec<f64>,
    /// Histogram bins (default: Sturges) or binned-estimator bins (default: floor(sqrt n)).
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.95)]
    pub coverage: f64,
    /// Skip SVG and plot CSV files.
    #[arg(long)]
    pub no_plots: bool,
}

/// Design bookkeeping written next to every sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub method: String,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub factors: Vec<String>,
    pub correlated: bool,
    pub design: DesignMeta,
}

pub fn sidecar_path(sample: &Path) -> PathBuf {
    suffixed(sample, ".meta.json")
}

pub fn unit_path(sample: &Path) -> PathBuf {
    suffixed(sample, ".unit")
}

fn suffixed(p: &Path, suffix: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("E_USAGE: {}", first.trim_start_matches("error: "));
            return 2;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}: {}", e.code(), one_line(&e.to_string()));
            e.exit_code()
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Validate => {
            let cfg = Config::load(&cli.config)?;
            cfg.model()?;
            println!("OK: k={} factors", cfg.space.len());
            Ok(())
        }
        Command::Sample(a) => {
            let cfg = Config::load(&cli.config)?;
            let out = cli.out.clone().unwrap_or_else(|| "sample.txt".into());
            let sidecar = cmd_sample(&cfg, a, cli.seed, &out)?;
            println!("wrote {} rows x {} factors ({}) to {}", sidecar.n, sidecar.k, sidecar.method, out.display());
            Ok(())
        }
        Command::Run(a) => {
            let cfg = Config::load(&cli.config)?;
            let out = cli.out.clone().unwrap_or_else(|| "output.txt".into());
            let outputs = cmd_run(&cfg, &a.sample, &out, a.threads)?;
            let faults: usize = outputs.iter().map(|o| o.fault_rows.len()).max().unwrap_or(0);
            println!(
                "wrote {} rows x {} outputs to {} ({faults} faulted rows)",
                outputs.first().map_or(0, OutputVector::len),
                outputs.len(),
                out.display()
            );
            Ok(())
        }
        Command::Analyze(a) => {
            let cfg = Config::load(&cli.config)?;
            let out = cli.out.clone().unwrap_or_else(|| "report".into());
            for file in cmd_analyze(&cfg, a, &out)? {
                println!("{}", file.display());
            }
            Ok(())
        }
    }
}

/// Generates the design, induces rank correlation when configured, maps to
/// factor values and writes the sample, unit and sidecar files.
pub fn cmd_sample(cfg: &Config, a: &SampleArgs, seed: u64, out: &Path) -> Result<Sidecar> {
    let k = cfg.space.len();
    let names = cfg.space.names();
    let need_n = || a.n.ok_or_else(|| Error::Config(format!("--method {:?} needs -n", a.method).to_lowercase()));
    let mut sample = match a.method {
        Method::Random => random_design(k, need_n()?, seed)?,
        Method::Lhs => lhs_design(k, need_n()?, seed, a.replicates)?,
        Method::Lptau => lptau_design(k, need_n()?, a.skip)?,
        Method::Morris => morris_design(k, a.trajectories, a.levels, seed)?,
        Method::FastClassic => {
            fast_design(k, need_n()?, FastMode::Classic, a.order, parse_groups(a.groups.as_deref(), &names)?, seed)?
        }
        Method::FastExtended => {
            let n = a.n_per_factor.ok_or_else(|| Error::Config("--method fast-extended needs --n-per-factor".into()))?;
            fast_design(k, n, FastMode::Extended, a.order, parse_groups(a.groups.as_deref(), &names)?, seed)?
        }
        Method::Sobol => saltelli_design(k, need_n()?, a.skip)?,
        Method::Fixed => {
            let path = a.fixed.as_ref().ok_or_else(|| Error::Config("--method fixed needs --fixed PATH".into()))?;
            let s = fixed_design(path)?;
            if s.cols() != k {
                return Err(Error::Config(format!("fixed sample has {} columns for {k} factors", s.cols())));
            }
            s
        }
    };
    let correlated = cfg.space.correlation_target.is_some();
    if let Some(target) = &cfg.space.correlation_target {
        if sample.meta.is_structured() {
            return Err(Error::Unsupported(format!(
                "rank correlation would destroy the {} design structure; use random, lhs, lptau or fixed",
                sample.meta.method()
            )));
        }
        sample.unit = iman_conover(&sample.unit, target, seed)?;
    }
    let sample = sample.mapped(&cfg.space)?;
    write_sample_file(out, &sample.values)?;
    write_sample_file(unit_path(out), &sample.unit)?;
    let sidecar = Sidecar {
        method: sample.meta.method().to_string(),
        seed,
        n: sample.rows(),
        k,
        factors: names,
        correlated,
        design: sample.meta,
    };
    let path = sidecar_path(out);
    let json = serde_json::to_string_pretty(&sidecar)? + "\n";
    std::fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    Ok(sidecar)
}

fn parse_groups(spec: Option<&str>, names: &[String]) -> Result<Option<Vec<Group>>> {
    let Some(spec) = spec else { return Ok(None) };
    let mut groups = Vec::new();
    let mut taken = vec![false; names.len()];
    for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, members) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("group `{part}` must look like name=a,b")))?;
        let members = members
            .split(',')
            .map(|m| {
                let m = m.trim();
                names.iter().position(|n| n == m).ok_or_else(|| Error::Config(format!("group `{name}`: unknown factor `{m}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        for &m in &members {
            taken[m] = true;
        }
        groups.push(Group { name: name.trim().to_string(), members });
    }
    for (j, t) in taken.iter().enumerate() {
        if !t {
            groups.push(Group { name: names[j].clone(), members: vec![j] });
        }
    }
    Ok(Some(groups))
}

/// Reads a sample written by [`cmd_sample`] together with its unit coordinates and sidecar.
pub fn load_sample(path: &Path) -> Result<(SampleMatrix, Sidecar)> {
    let sc_path = sidecar_path(path);
    let text = std::fs::read_to_string(&sc_path).map_err(|e| Error::io(&sc_path, e))?;
    let sidecar: Sidecar = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", sc_path.display())))?;
    let values = read_sample_file(path)?;
    let unit = read_sample_file(unit_path(path))?;
    if values.len() != sidecar.n || unit.len() != sidecar.n {
        return Err(Error::DesignMismatch(format!(
            "sidecar records {} rows, sample has {} and unit file {}",
            sidecar.n,
            values.len(),
            unit.len()
        )));
    }
    let sample = SampleMatrix { unit, values, meta: sidecar.design.clone(), seed: sidecar.seed };
    Ok((sample, sidecar))
}

fn check_factors(cfg: &Config, sidecar: &Sidecar) -> Result<()> {
    if cfg.space.names() != sidecar.factors {
        return Err(Error::Config(format!(
            "sample factors {:?} do not match config factors {:?}",
            sidecar.factors,
            cfg.space.names()
        )));
    }
    Ok(())
}

/// Evaluates the configured model over the sample and writes the output file.
pub fn cmd_run(cfg: &Config, sample_path: &Path, out: &Path, threads: usize) -> Result<Vec<OutputVector>> {
    let model = cfg.model()?;
    let (sample, sidecar) = load_sample(sample_path)?;
    check_factors(cfg, &sidecar)?;
    let eval = evaluate_all(model, &sample, threads)?;
    write_output_file(out, &eval.outputs)?;
    Ok(eval.outputs)
}

/// Writes UA and SA reports plus plot files into `dir`; returns the files written.
pub fn cmd_analyze(cfg: &Config, a: &AnalyzeArgs, dir: &Path) -> Result<Vec<PathBuf>> {
    let (sample, sidecar) = load_sample(&a.sample)?;
    check_factors(cfg, &sidecar)?;
    let outputs = read_output_file_any(&a.output)?;
    if outputs.first().map_or(0, OutputVector::len) != sample.rows() {
        return Err(Error::RowCount { expected: sample.rows(), found: outputs.first().map_or(0, OutputVector::len) });
    }
    let (do_ua, sa) = match (a.ua, a.sa) {
        (false, None) => (true, Some(default_sa(&sample.meta))),
        (ua, sa) => (ua, sa),
    };
    if let Some(m) = sa {
        check_compatible(m, &sample.meta)?;
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let names = &sidecar.factors;
    let columns: Vec<Vec<f64>> = (0..sample.cols()).map(|j| sample.value_column(j)).collect();
    let mut written = Vec::new();
    let mut write = |name: String, body: String| -> Result<()> {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        written.push(path);
        Ok(())
    };
    for y in &outputs {
        let tag = file_tag(&y.name);
        if do_ua {
            let opts = UaOptions { percentiles: a.percentiles.clone(), bins: a.bins, alpha: a.alpha, coverage: a.coverage };
            let ua = summarize(y, &opts)?;
            write(format!("ua_{tag}.csv"), ua.to_csv())?;
            if !a.no_plots {
                write(format!("histogram_{tag}.csv"), ua.histogram_csv())?;
                write(format!("histogram_{tag}.svg"), plots::histogram_svg(&ua))?;
                write(format!("ecdf_{tag}.csv"), ua.ecdf_csv())?;
                write(format!("ecdf_{tag}.svg"), plots::ecdf_svg(&ua))?;
                write(format!("scatter_{tag}.csv"), plots::scatter_csv(names, &columns, &y.y, &y.name))?;
                write(format!("scatter_{tag}.svg"), plots::scatter_svg(names, &columns, &y.y, &y.name))?;
                let ranks = plots::cobweb_ranks(&columns, &y.y);
                write(format!("cobweb_{tag}.csv"), plots::cobweb_csv(names, &y.name, &ranks))?;
                write(format!("cobweb_{tag}.svg"), plots::cobweb_svg(names, &y.name, &ranks))?;
            }
        }
        if let Some(m) = sa {
            let report = sa_report(m, &sample, names, y, a.bins)?;
            write(format!("sa_{}_{tag}.csv", report.method), report.to_csv())?;
        }
    }
    Ok(written)
}

fn default_sa(meta: &DesignMeta) -> SaChoice {
    match meta {
        DesignMeta::Morris { .. } => SaChoice::Morris,
        DesignMeta::Fast { .. } => SaChoice::Fast,
        DesignMeta::Sobol { .. } => SaChoice::Sobol,
        DesignMeta::Plain { .. } | DesignMeta::Lhs { .. } => SaChoice::Regression,
    }
}

fn sa_name(m: SaChoice) -> &'static str {
    match m {
        SaChoice::Regression => "regression",
        SaChoice::Binned => "binned",
        SaChoice::Morris => "morris",
        SaChoice::Fast => "fast",
        SaChoice::Sobol => "sobol",
    }
}

fn check_compatible(m: SaChoice, meta: &DesignMeta) -> Result<()> {
    if compatible_methods(meta).contains(&sa_name(m)) {
        Ok(())
    } else {
        Err(Error::DesignMismatch(format!(
            "--sa {} cannot analyze a {} design ({COMPATIBILITY})",
            sa_name(m),
            meta.method()
        )))
    }
}

fn sa_report(m: SaChoice, sample: &SampleMatrix, names: &[String], y: &OutputVector, bins: Option<usize>) -> Result<SaReport> {
    match m {
        SaChoice::Regression => regression_measures(&sample.values, names, y),
        SaChoice::Binned => binned_measures(&sample.values, names, y, bins),
        SaChoice::Morris => morris_measures(sample, names, y),
        SaChoice::Fast => fast_indices(sample, names, y),
        SaChoice::Sobol => sobol_from_outputs(sample, names, y),
    }
}

fn file_tag(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}
