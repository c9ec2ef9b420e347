//! Sensitivity estimators and the [`SaReport`] they produce.
//!
//! | estimator | design | measures |
//! |---|---|---|
//! | [`regression_measures`] | random, LHS, LP-tau, fixed | SRC, PCC, PEAR, SRRC, PRCC, SPEA |
//! | [`morris_measures`] | Morris | μ, μ*, σ |
//! | [`fast_indices`] | FAST | S_i (classic), S_i and S_Ti (extended) |
//! | [`sobol_indices`] | Sobol two-matrix | S_i, S_Ti |
//! | [`binned_measures`] | any | binned first-order S_i |
//!
//! An index that cannot be estimated (zero output variance, too few valid
//! rows) is `None`, never `0`.

mod binned;
mod fast;
mod morris;
mod regression;
mod sobol;

use std::fmt::{self, Write as _};

pub use binned::{binned_measures, default_bins, importance_binned};
pub use fast::fast_indices;
pub use morris::morris_measures;
pub use regression::regression_measures;
pub use sobol::{sobol_from_outputs, sobol_indices};

use crate::design::DesignMeta;
use crate::runner::OutputVector;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaMethod {
    Regression,
    Morris,
    FastClassic,
    FastExtended,
    Sobol,
    Binned,
}

impl SaMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SaMethod::Regression => "regression",
            SaMethod::Morris => "morris",
            SaMethod::FastClassic => "fast-classic",
            SaMethod::FastExtended => "fast-extended",
            SaMethod::Sobol => "sobol",
            SaMethod::Binned => "binned",
        }
    }
}

impl fmt::Display for SaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One factor (or group) and its measures, aligned with [`SaReport::measures`].
#[derive(Debug, Clone, PartialEq)]
pub struct SaRow {
    pub name: String,
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaReport {
    pub method: SaMethod,
    pub output: String,
    pub measures: Vec<String>,
    pub rows: Vec<SaRow>,
    /// Whole-model figures: `r2`, `rank_r2`, `sum_si`, `interaction_share`.
    pub goodness: Vec<(String, Option<f64>)>,
    /// Rows that entered the estimate.
    pub n: usize,
    /// Rows dropped because the output faulted there.
    pub excluded: usize,
    /// Noise allowance for `0 <= S_i <= S_Ti <= 1` on variance-based methods.
    pub tolerance: Option<f64>,
    pub notes: Vec<String>,
}

impl SaReport {
    fn new(method: SaMethod, output: &str, measures: &[&str]) -> Self {
        Self {
            method,
            output: output.to_string(),
            measures: measures.iter().map(|m| m.to_string()).collect(),
            rows: Vec::new(),
            goodness: Vec::new(),
            n: 0,
            excluded: 0,
            tolerance: None,
            notes: Vec::new(),
        }
    }

    fn push_row(&mut self, name: &str, values: Vec<Option<f64>>) {
        debug_assert_eq!(values.len(), self.measures.len());
        self.rows.push(SaRow { name: name.to_string(), values });
    }

    pub fn names(&self) -> Vec<&str> {
        self.rows.iter().map(|r| r.name.as_str()).collect()
    }

    /// Value of `measure` for factor or group `name`; `None` when absent or undefined.
    pub fn get(&self, name: &str, measure: &str) -> Option<f64> {
        let m = self.measures.iter().position(|x| x == measure)?;
        self.rows.iter().find(|r| r.name == name)?.values[m]
    }

    pub fn column(&self, measure: &str) -> Option<Vec<Option<f64>>> {
        let m = self.measures.iter().position(|x| x == measure)?;
        Some(self.rows.iter().map(|r| r.values[m]).collect())
    }

    pub fn goodness(&self, key: &str) -> Option<f64> {
        self.goodness.iter().find(|(k, _)| k == key).and_then(|(_, v)| *v)
    }

    /// Adds `sum_si` and `interaction_share = 1 - sum_si` from the `S_i` column.
    fn add_additivity(&mut self) {
        let sum = self
            .column("S_i")
            .and_then(|c| c.into_iter().try_fold(0.0, |acc, v| v.map(|v| acc + v)));
        self.goodness.push(("sum_si".into(), sum));
        self.goodness.push(("interaction_share".into(), sum.map(|s| 1.0 - s)));
    }

    /// Metadata lines starting with `#`, then `factor,<measures>` and one row
    /// per factor or group. Undefined values print as `undefined`.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "# method={},output={},n={},excluded={}", self.method, self.output, self.n, self.excluded);
        if let Some(t) = self.tolerance {
            let _ = write!(s, ",tolerance={t}");
        }
        for (k, v) in &self.goodness {
            let _ = write!(s, ",{k}={}", fmt_opt(*v));
        }
        s.push('\n');
        for note in &self.notes {
            let _ = writeln!(s, "# {note}");
        }
        s.push_str("factor");
        for m in &self.measures {
            let _ = write!(s, ",{m}");
        }
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.name);
            for v in &row.values {
                let _ = write!(s, ",{}", fmt_opt(*v));
            }
            s.push('\n');
        }
        s
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |v| v.to_string())
}

impl fmt::Display for SaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} sensitivity of `{}` (n={}, excluded={})", self.method, self.output, self.n, self.excluded)?;
        write!(f, "{:<16}", "factor")?;
        for m in &self.measures {
            write!(f, " {m:>10}")?;
        }
        writeln!(f)?;
        for row in &self.rows {
            write!(f, "{:<16}", row.name)?;
            for v in &row.values {
                match v {
                    Some(v) => write!(f, " {v:>10.4}")?,
                    None => write!(f, " {:>10}", "undefined")?,
                }
            }
            writeln!(f)?;
        }
        for (k, v) in &self.goodness {
            match v {
                Some(v) => writeln!(f, "{k} = {v:.4}")?,
                None => writeln!(f, "{k} = undefined")?,
            }
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        Ok(())
    }
}

/// Zero variance, or spread indistinguishable from rounding around the mean.
pub(crate) fn degenerate(mean: f64, var: f64) -> bool {
    !(var > 0.0) || var.sqrt() <= 1e-12 * mean.abs()
}

fn check_aligned(rows: usize, y: &OutputVector) -> Result<()> {
    if rows != y.len() {
        return Err(Error::RowCount { expected: rows, found: y.len() });
    }
    Ok(())
}

fn check_names(k: usize, names: &[String]) -> Result<()> {
    if names.len() != k {
        return Err(Error::Size(format!("{} factor names for {k} design columns", names.len())));
    }
    Ok(())
}

/// Which estimators a design supports.
pub fn compatible_methods(meta: &DesignMeta) -> &'static [&'static str] {
    match meta {
        DesignMeta::Plain { .. } | DesignMeta::Lhs { .. } => &["regression", "binned"],
        DesignMeta::Morris { .. } => &["morris"],
        DesignMeta::Fast { .. } => &["fast"],
        DesignMeta::Sobol { .. } => &["sobol"],
    }
}

pub(crate) const COMPATIBILITY: &str = "fast needs a fast-classic/fast-extended design, morris a morris design, \
sobol a sobol design; regression and binned accept random, lhs, lptau and fixed designs";
