//! Model evaluation over a sample, in-process or through an external
//! executable.
//!
//! External protocol: the runner writes the factor values in the sample file
//! format, invokes `<command...> <sample_file> <output_file>` and reads back
//! `n` lines of `m` whitespace-separated values (optional `# name...` header,
//! `NaN` marks a failed row). Exit status 0 means success.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::Duration;

use rayon::prelude::*;
use wait_timeout::ChildExt;

use crate::design::{format_sample, format_value, SampleMatrix};
use crate::models::{evaluate, ExternalMode, ExternalModel, ModelDef};
use crate::{Error, Result};

/// One scalar output over all sample rows. Faulted rows hold `NaN` in `y` and
/// are listed in `fault_rows`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputVector {
    pub name: String,
    pub y: Vec<f64>,
    pub fault_rows: BTreeSet<usize>,
}

impl OutputVector {
    pub fn new(name: impl Into<String>, y: Vec<f64>) -> Self {
        let fault_rows = y.iter().enumerate().filter(|(_, v)| !v.is_finite()).map(|(i, _)| i).collect();
        Self { name: name.into(), y, fault_rows }
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// Values of the rows that evaluated successfully.
    pub fn valid(&self) -> Vec<f64> {
        self.y
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.fault_rows.contains(i))
            .map(|(_, v)| *v)
            .collect()
    }

    pub fn n_effective(&self) -> usize {
        self.y.len() - self.fault_rows.len()
    }
}

/// A per-row evaluation failure.
#[derive(Debug, Clone, PartialEq)]
pub struct RowFault {
    pub row: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub outputs: Vec<OutputVector>,
    pub faults: Vec<RowFault>,
}

impl Evaluation {
    pub fn output(&self, name: &str) -> Option<&OutputVector> {
        self.outputs.iter().find(|o| o.name == name)
    }
}

/// Evaluates `model` over every row of `sample.values`. `threads` bounds
/// in-process parallelism (1 = serial); results are assembled by row index.
pub fn evaluate_all(model: &ModelDef, sample: &SampleMatrix, threads: usize) -> Result<Evaluation> {
    match model {
        ModelDef::External { model: ext, outputs } => run_external_model(ext, outputs, &sample.values),
        _ => Ok(evaluate_internal(model, &sample.values, threads)),
    }
}

fn evaluate_internal(model: &ModelDef, rows: &[Vec<f64>], threads: usize) -> Evaluation {
    let names = model.output_names();
    let eval_row = |row: &Vec<f64>| evaluate(model, row);
    let results: Vec<_> = if threads > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| rows.par_iter().map(eval_row).collect()),
            Err(_) => rows.iter().map(eval_row).collect(),
        }
    } else {
        rows.iter().map(eval_row).collect()
    };
    let mut columns = vec![Vec::with_capacity(rows.len()); names.len()];
    let mut faults = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(ys) => {
                for (c, y) in columns.iter_mut().zip(ys) {
                    c.push(y);
                }
            }
            Err(f) => {
                for c in columns.iter_mut() {
                    c.push(f64::NAN);
                }
                faults.push(RowFault { row: i, message: f.to_string() });
            }
        }
    }
    let outputs = names.into_iter().zip(columns).map(|(n, y)| OutputVector::new(n, y)).collect();
    Evaluation { outputs, faults }
}

fn run_external_model(ext: &ExternalModel, names: &[String], rows: &[Vec<f64>]) -> Result<Evaluation> {
    let dir = tempfile::tempdir().map_err(|e| Error::io(std::env::temp_dir(), e))?;
    let m = names.len();
    let outputs = match ext.mode {
        ExternalMode::Batch => {
            let sample = dir.path().join("sample.txt");
            let output = dir.path().join("output.txt");
            std::fs::write(&sample, format_sample(rows)).map_err(|e| Error::io(&sample, e))?;
            run_external(&ext.command, &sample, &output, ext.timeout())?;
            read_output_file(&output, rows.len(), m)?
        }
        ExternalMode::PerRow => {
            let run_one = |i: usize| -> Result<Vec<f64>> {
                let sample = dir.path().join(format!("sample_{i}.txt"));
                let output = dir.path().join(format!("output_{i}.txt"));
                std::fs::write(&sample, format_sample(&rows[i..=i])).map_err(|e| Error::io(&sample, e))?;
                run_external(&ext.command, &sample, &output, ext.timeout())?;
                let out = read_output_file(&output, 1, m)?;
                Ok(out.iter().map(|o| o.y[0]).collect())
            };
            let workers = ext.workers.max(1);
            let per_row: Vec<Vec<f64>> = if workers > 1 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .map_err(|e| Error::Spawn(e.to_string()))?;
                pool.install(|| (0..rows.len()).into_par_iter().map(run_one).collect::<Result<_>>())?
            } else {
                (0..rows.len()).map(run_one).collect::<Result<_>>()?
            };
            (0..m)
                .map(|c| OutputVector::new(names[c].clone(), per_row.iter().map(|r| r[c]).collect()))
                .collect()
        }
    };
    let outputs: Vec<OutputVector> = outputs
        .into_iter()
        .zip(names)
        .map(|(mut o, n)| {
            o.name = n.clone();
            o
        })
        .collect();
    let faults = outputs
        .iter()
        .flat_map(|o| o.fault_rows.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|row| RowFault { row, message: "model reported NaN".into() })
        .collect();
    Ok(Evaluation { outputs, faults })
}

/// Exit status and captured stderr of a successful external run.
#[derive(Debug, Clone)]
pub struct ExternalStatus {
    pub code: i32,
    pub stderr: String,
}

/// Runs `<command...> <sample_path> <output_path>`. Nonzero exit, a signal or
/// a timeout is an error carrying the captured stderr.
pub fn run_external(
    command: &[String],
    sample_path: &Path,
    output_path: &Path,
    timeout: Option<Duration>,
) -> Result<ExternalStatus> {
    let (program, args) = command.split_first().ok_or_else(|| Error::Spawn("empty command".into()))?;
    let mut child = Command::new(program)
        .args(args)
        .arg(sample_path)
        .arg(output_path)
        .stdin(Stdio::null())
        .stdout(Stdio::null())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| Error::Spawn(format!("{program}: {e}")))?;

    let mut stderr_pipe = child.stderr.take();
    let reader = std::thread::spawn(move || {
        let mut buf = String::new();
        if let Some(p) = stderr_pipe.as_mut() {
            let _ = p.read_to_string(&mut buf);
        }
        buf
    });

    let status = match timeout {
        None => child.wait().map_err(|e| Error::Spawn(e.to_string()))?,
        Some(limit) => match child.wait_timeout(limit).map_err(|e| Error::Spawn(e.to_string()))? {
            Some(s) => s,
            None => {
                let _ = child.kill();
                let _ = child.wait();
                let _ = reader.join();
                return Err(Error::ExternalTimeout { secs: limit.as_secs_f64() });
            }
        },
    };
    let stderr = reader.join().unwrap_or_default();
    if !status.success() {
        return Err(Error::ExternalFailed { code: status.code(), stderr: stderr.trim_end().to_string() });
    }
    Ok(ExternalStatus { code: 0, stderr })
}

/// Parses the output format: optional leading `# name...` header, then `n`
/// rows of `m` values; `NaN` marks a fault.
pub fn parse_output(text: &str, n: usize, m: usize) -> Result<Vec<OutputVector>> {
    let mut names: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix('#') {
            if names.is_none() && rows.is_empty() {
                let found: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if found.len() != m {
                    return Err(Error::Parse {
                        line,
                        message: format!("header names {} outputs, expected {m}", found.len()),
                    });
                }
                names = Some(found);
            }
            continue;
        }
        let row: Vec<f64> = l
            .split_whitespace()
            .map(|tok| {
                if tok.eq_ignore_ascii_case("nan") {
                    Ok(f64::NAN)
                } else {
                    tok.parse::<f64>()
                        .map_err(|_| Error::Parse { line, message: format!("invalid number `{tok}`") })
                }
            })
            .collect::<Result<_>>()?;
        if row.len() != m {
            return Err(Error::Parse { line, message: format!("expected {m} values, found {}", row.len()) });
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::RowCount { expected: n, found: rows.len() });
    }
    let names = names.unwrap_or_else(|| {
        if m == 1 {
            vec!["Y".to_string()]
        } else {
            (1..=m).map(|i| format!("Y{i}")).collect()
        }
    });
    Ok(names
        .into_iter()
        .enumerate()
        .map(|(c, name)| OutputVector::new(name, rows.iter().map(|r| r[c]).collect()))
        .collect())
}

pub fn read_output_file(path: impl AsRef<Path>, n: usize, m: usize) -> Result<Vec<OutputVector>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_output(&text, n, m)
}

/// Reads an output file whose output count is taken from its first data row.
pub fn read_output_file_any(path: impl AsRef<Path>) -> Result<Vec<OutputVector>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let data: Vec<&str> =
        text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    let m = data.first().map_or(1, |l| l.split_whitespace().count());
    parse_output(&text, data.len(), m)
}

pub fn format_output(outputs: &[OutputVector]) -> String {
    let mut s = String::new();
    let names: Vec<&str> = outputs.iter().map(|o| o.name.as_str()).collect();
    let _ = writeln!(s, "# {}", names.join(" "));
    let n = outputs.first().map_or(0, OutputVector::len);
    for i in 0..n {
        let row: Vec<String> = outputs.iter().map(|o| format_value(o.y[i])).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

pub fn write_output_file(path: impl AsRef<Path>, outputs: &[OutputVector]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_output(outputs)).map_err(|e| Error::io(path, e))
}
