//! Sample designs in the unit hypercube and their mapping onto factor values.
//!
//! Every generator returns a [`SampleMatrix`] whose `meta` carries the
//! bookkeeping the matching estimator needs (Morris trajectories, FAST
//! frequencies, LHS replicate labels, ...). Generators are pure functions of
//! their arguments and seed.

mod fast;
mod lhs;
mod lptau;
mod morris;
mod saltelli;
mod sobol_table;

use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand::{Rng, RngCore};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use fast::{
    classic_frequencies, extended_frequencies, fast_design, is_interference_free, FastMode, Group,
    DEFAULT_INTERFERENCE_ORDER,
};
pub use lhs::lhs_design;
pub use lptau::{lptau_design, LpTau, MAX_LPTAU_DIMENSION};
pub use morris::morris_design;
pub use saltelli::saltelli_design;

use crate::distributions::FactorSpace;
use crate::{Error, Result};

/// Row-major matrix of `f64` used for designs and factor values.
pub type Rows = Vec<Vec<f64>>;

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw in `[0, 1)`.
pub(crate) fn unit_draw(rng: &mut impl RngCore) -> f64 {
    rng.random::<f64>()
}

/// Method-specific design bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DesignMeta {
    /// Designs without extra structure: `random`, `lptau`, `fixed`.
    Plain { method: String },
    Lhs {
        strata: usize,
        replicates: usize,
        replicate_labels: Vec<usize>,
    },
    Morris {
        levels: usize,
        delta: f64,
        trajectories: usize,
        /// Trajectory index of every row.
        trajectory: Vec<usize>,
        /// Factor changed at each transition, `trajectories * k` entries.
        perturbed: Vec<usize>,
    },
    Fast {
        mode: FastMode,
        order: usize,
        block_size: usize,
        /// `frequencies[b][j]`: frequency of factor `j` in block `b`.
        frequencies: Vec<Vec<usize>>,
        phases: Vec<Vec<f64>>,
        /// Half-open row ranges of each block.
        blocks: Vec<(usize, usize)>,
        /// Focal group (extended) or analyzed groups (classic); singleton
        /// groups when none were requested.
        groups: Vec<Group>,
    },
    /// Two-matrix (A, B, AB_i) layout for Sobol indices.
    Sobol { base_n: usize, skip: u64 },
}

impl DesignMeta {
    pub fn method(&self) -> &str {
        match self {
            DesignMeta::Plain { method } => method,
            DesignMeta::Lhs { .. } => "lhs",
            DesignMeta::Morris { .. } => "morris",
            DesignMeta::Fast { mode: FastMode::Classic, .. } => "fast-classic",
            DesignMeta::Fast { mode: FastMode::Extended, .. } => "fast-extended",
            DesignMeta::Sobol { .. } => "sobol",
        }
    }

    /// Designs whose row order and structure carry meaning; reordering their
    /// columns (e.g. for rank correlation) would invalidate their estimators.
    pub fn is_structured(&self) -> bool {
        matches!(self, DesignMeta::Morris { .. } | DesignMeta::Fast { .. } | DesignMeta::Sobol { .. })
    }
}

/// An `n x k` design: unit-hypercube coordinates, the corresponding factor
/// values, and the design bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    pub unit: Rows,
    pub values: Rows,
    pub meta: DesignMeta,
    pub seed: u64,
}

impl SampleMatrix {
    /// Wraps a unit design; values start as a copy of the unit coordinates
    /// (the identity map for U(0,1) factors) until [`SampleMatrix::mapped`].
    pub fn new(unit: Rows, meta: DesignMeta, seed: u64) -> Self {
        Self { values: unit.clone(), unit, meta, seed }
    }

    pub fn rows(&self) -> usize {
        self.unit.len()
    }

    pub fn cols(&self) -> usize {
        self.unit.first().map_or(0, Vec::len)
    }

    pub fn unit_column(&self, j: usize) -> Vec<f64> {
        self.unit.iter().map(|r| r[j]).collect()
    }

    pub fn value_column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|r| r[j]).collect()
    }

    /// Maps the unit coordinates through the factor quantiles.
    pub fn mapped(mut self, space: &FactorSpace) -> Result<Self> {
        self.values = map_to_values(&self.unit, space)?;
        Ok(self)
    }
}

fn check_size(k: usize, n: usize) -> Result<()> {
    if k == 0 || n == 0 {
        return Err(Error::Size(format!("design needs n >= 1 and k >= 1, got n={n}, k={k}")));
    }
    Ok(())
}

/// `n x k` i.i.d. uniform design.
pub fn random_design(k: usize, n: usize, seed: u64) -> Result<SampleMatrix> {
    check_size(k, n)?;
    let mut rng = rng_from_seed(seed);
    let unit = (0..n).map(|_| (0..k).map(|_| unit_draw(&mut rng)).collect()).collect();
    Ok(SampleMatrix::new(unit, DesignMeta::Plain { method: "random".into() }, seed))
}

/// Smallest probability used for unbounded marginals, so that grid designs
/// touching 0 or 1 (Morris, FAST) still map to finite values.
pub const UNBOUNDED_CLAMP: f64 = 1e-12;

/// `values[i][j] = quantile(factor_j, unit[i][j])`.
pub fn map_to_values(unit: &[Vec<f64>], space: &FactorSpace) -> Result<Rows> {
    let k = space.len();
    for f in &space.factors {
        f.dist.check().map_err(|m| Error::Parameter(format!("factor `{}`: {m}", f.name)))?;
    }
    unit.iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != k {
                return Err(Error::Size(format!(
                    "row {} has {} columns, factor space has {k}",
                    i + 1,
                    row.len()
                )));
            }
            row.iter()
                .zip(&space.factors)
                .enumerate()
                .map(|(j, (&p, f))| {
                    if !(0.0..=1.0).contains(&p) {
                        return Err(Error::Range { row: i + 1, column: j + 1, value: p });
                    }
                    let p = if f.dist.is_bounded() {
                        p
                    } else {
                        p.clamp(UNBOUNDED_CLAMP, 1.0 - UNBOUNDED_CLAMP)
                    };
                    Ok(f.dist.quantile_unchecked(p))
                })
                .collect()
        })
        .collect()
}

/// Writes the text sample format: `"n k"`, then one row per line with 17
/// significant digits (exact `f64` round trip), LF endings.
pub fn format_sample(rows: &[Vec<f64>]) -> String {
    let k = rows.first().map_or(0, Vec::len);
    let mut out = String::with_capacity(rows.len() * k * 24 + 16);
    let _ = writeln!(out, "{} {}", rows.len(), k);
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{}", format_value(*v));
        }
        out.push('\n');
    }
    out
}

pub(crate) fn format_value(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn write_sample_file(path: impl AsRef<Path>, rows: &[Vec<f64>]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_sample(rows)).map_err(|e| Error::io(path, e))
}

/// Parses the text sample format. Line numbers in errors are 1-based and count
/// every physical line, comments included.
pub fn parse_sample(text: &str) -> Result<Rows> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, message: "empty sample file".into() })?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let parse_dim = |s: &str| {
        s.parse::<usize>().map_err(|_| Error::Parse {
            line: hline,
            message: format!("header must be `n k`, found `{header}`"),
        })
    };
    if dims.len() != 2 {
        return Err(Error::Parse { line: hline, message: format!("header must be `n k`, found `{header}`") });
    }
    let (n, k) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
    let mut rows = Vec::with_capacity(n);
    for (line, l) in lines {
        let row: Vec<f64> = l
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| Error::Parse { line, message: format!("invalid number `{tok}`") })
            })
            .collect::<Result<_>>()?;
        if row.len() != k {
            return Err(Error::Parse { line, message: format!("expected {k} values, found {}", row.len()) });
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: format!("header declares {n} rows, found {}", rows.len()),
        });
    }
    Ok(rows)
}

pub fn read_sample_file(path: impl AsRef<Path>) -> Result<Rows> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_sample(&text)
}

/// Unit design read verbatim from a sample file; entries must lie in [0, 1].
pub fn fixed_design_from_str(text: &str) -> Result<SampleMatrix> {
    let unit = parse_sample(text)?;
    if unit.is_empty() {
        return Err(Error::Parse { line: 1, message: "sample file has no rows".into() });
    }
    for (i, row) in unit.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Range { row: i + 1, column: j + 1, value: v });
            }
        }
    }
    Ok(SampleMatrix::new(unit, DesignMeta::Plain { method: "fixed".into() }, 0))
}

pub fn fixed_design(path: impl AsRef<Path>) -> Result<SampleMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    fixed_design_from_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{Distribution, Factor};

    #[test]
    fn random_design_basics() {
        let s = random_design(1, 1, 11).unwrap();
        assert!((0.0..1.0).contains(&s.unit[0][0]));
        let a = random_design(3, 1000, 5).unwrap();
        let b = random_design(3, 1000, 5).unwrap();
        assert_eq!(a, b);
        for j in 0..3 {
            let m = crate::stats::mean(&a.unit_column(j));
            assert!((m - 0.5).abs() < 0.05, "column {j} mean {m}");
        }
        assert!(matches!(random_design(0, 5, 1), Err(Error::Size(_))));
        assert!(matches!(random_design(2, 0, 1), Err(Error::Size(_))));
    }

    #[test]
    fn fixed_design_parsing() {
        let s = fixed_design_from_str("2 2\n0.1 0.9\n0.5 0.5\n").unwrap();
        assert_eq!(s.unit, vec![vec![0.1, 0.9], vec![0.5, 0.5]]);
        match fixed_design_from_str("2 2\n# comment\n0.1 0.9\n1.5 0.5\n") {
            Err(Error::Range { row, column, value }) => {
                assert_eq!((row, column, value), (2, 1, 1.5));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(fixed_design_from_str(""), Err(Error::Parse { line: 1, .. })));
        match fixed_design_from_str("2 2\n0.1 0.9\n0.5 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(fixed_design_from_str("3 2\n0.1 0.9\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn sample_format_round_trips_exactly() {
        let rows = vec![vec![0.1, 1.0 / 3.0, 1e-300], vec![-2.5e10, std::f64::consts::PI, 0.0]];
        let text = format_sample(&rows);
        assert!(text.starts_with("2 3\n"));
        assert!(!text.contains('\r'));
        assert_eq!(parse_sample(&text).unwrap(), rows);
    }

    #[test]
    fn map_uniform_table_factor() {
        let space = FactorSpace::new(vec![Factor::new("eps_sd", Distribution::uniform(0.8, 1.1))]);
        let v = map_to_values(&[vec![0.0], vec![0.5], vec![1.0]], &space).unwrap();
        assert_eq!(v[0][0], 0.8);
        assert!((v[1][0] - 0.95).abs() < 1e-15);
        assert_eq!(v[2][0], 1.1);

        let space = FactorSpace::new(vec![Factor::new("z", Distribution::normal(0.0, 1.0))]);
        let v = map_to_values(&[vec![0.5], vec![0.0], vec![1.0]], &space).unwrap();
        assert!(v[0][0].abs() < 1e-15);
        assert!(v[1][0].is_finite() && v[2][0].is_finite());

        let unit = FactorSpace::unit(2);
        let rows = vec![vec![0.25, 0.75]];
        assert_eq!(map_to_values(&rows, &unit).unwrap(), rows);
    }
}
