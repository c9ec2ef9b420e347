//! Uncertainty analysis of a model output: descriptive statistics,
//! percentiles, histogram and ECDF data, and distribution-free bounds.

use std::fmt::Write as _;

use crate::runner::OutputVector;
use crate::stats::{quantile_sorted, Welford};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct UaOptions {
    pub percentiles: Vec<f64>,
    /// Histogram bin count; `None` uses Sturges' rule `⌈1 + log₂ n⌉`.
    pub bins: Option<usize>,
    /// Significance level of the Kolmogorov (DKW) band.
    pub alpha: f64,
    /// Coverage of the Tchebycheff interval.
    pub coverage: f64,
}

impl Default for UaOptions {
    fn default() -> Self {
        Self { percentiles: vec![0.05, 0.25, 0.5, 0.75, 0.95], bins: None, alpha: 0.05, coverage: 0.95 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `bins + 1` edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TchebycheffBound {
    pub coverage: f64,
    pub k: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UaSummary {
    pub name: String,
    pub n_effective: usize,
    pub n_faults: usize,
    pub mean: f64,
    /// Sample standard deviation (n-1 denominator).
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    pub skewness: f64,
    pub percentiles: Vec<(f64, f64)>,
    pub histogram: Histogram,
    /// `(x, F(x))` at each distinct sorted value.
    pub ecdf: Vec<(f64, f64)>,
    pub tchebycheff: TchebycheffBound,
    pub alpha: f64,
    pub kolmogorov_halfwidth: f64,
    pub positive_fraction: f64,
}

pub fn summarize(y: &OutputVector, opts: &UaOptions) -> Result<UaSummary> {
    let mut values = y.valid();
    let n = values.len();
    if n < 2 {
        return Err(Error::Size(format!("uncertainty summary needs at least 2 valid values, got {n}")));
    }
    for &p in &opts.percentiles {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("percentile {p} outside [0, 1]")));
        }
    }
    let w: Welford = values.iter().copied().collect();
    let (mean, sd) = (w.mean(), w.variance().sqrt());
    values.sort_by(f64::total_cmp);
    let min = values[0];
    let max = values[n - 1];
    let bins = match opts.bins {
        Some(0) => return Err(Error::Parameter("histogram needs at least one bin".into())),
        Some(b) => b,
        None => sturges_bins(n),
    };
    Ok(UaSummary {
        name: y.name.clone(),
        n_effective: n,
        n_faults: y.fault_rows.len(),
        mean,
        sd,
        min,
        max,
        skewness: skewness(&values, mean),
        percentiles: opts.percentiles.iter().map(|&p| (p, quantile_sorted(&values, p))).collect(),
        histogram: histogram(&values, bins),
        ecdf: ecdf(&values),
        tchebycheff: tchebycheff_bound(mean, sd, opts.coverage)?,
        alpha: opts.alpha,
        kolmogorov_halfwidth: kolmogorov_band(n, opts.alpha)?,
        positive_fraction: sign_fraction(&values),
    })
}

pub fn sturges_bins(n: usize) -> usize {
    (1.0 + (n as f64).log2()).ceil().max(1.0) as usize
}

/// Adjusted Fisher–Pearson skewness; 0 when undefined (n < 3 or zero spread).
fn skewness(values: &[f64], mean: f64) -> f64 {
    let n = values.len() as f64;
    if values.len() < 3 {
        return 0.0;
    }
    let (m2, m3) = values.iter().fold((0.0, 0.0), |(a, b), &x| {
        let d = x - mean;
        (a + d * d, b + d * d * d)
    });
    let (m2, m3) = (m2 / n, m3 / n);
    if m2 <= 0.0 {
        return 0.0;
    }
    let g1 = m3 / m2.powf(1.5);
    g1 * (n * (n - 1.0)).sqrt() / (n - 2.0)
}

/// Equal-width histogram over `[min, max]` of sorted values.
pub fn histogram(sorted: &[f64], bins: usize) -> Histogram {
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    let width = (hi - lo) / bins as f64;
    let edges = (0..=bins).map(|i| if i == bins { hi } else { lo + width * i as f64 }).collect();
    let mut counts = vec![0usize; bins];
    for &x in sorted {
        let idx = if width > 0.0 { (((x - lo) / width) as usize).min(bins - 1) } else { 0 };
        counts[idx] += 1;
    }
    Histogram { edges, counts }
}

pub fn ecdf(sorted: &[f64]) -> Vec<(f64, f64)> {
    let n = sorted.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, &x) in sorted.iter().enumerate() {
        let f = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == x => last.1 = f,
            _ => out.push((x, f)),
        }
    }
    out
}

/// Symmetric interval `mean ± k·sd` with `k = 1/√(1 - coverage)`, which holds
/// at least `coverage` of the mass of any distribution.
pub fn tchebycheff_bound(mean: f64, sd: f64, coverage: f64) -> Result<TchebycheffBound> {
    if !(coverage > 0.0 && coverage < 1.0) {
        return Err(Error::Domain(format!("coverage {coverage} must lie in (0, 1)")));
    }
    if !(sd >= 0.0) {
        return Err(Error::Domain(format!("standard deviation {sd} must be >= 0")));
    }
    let k = 1.0 / (1.0 - coverage).sqrt();
    Ok(TchebycheffBound { coverage, k, lower: mean - k * sd, upper: mean + k * sd })
}

/// Half-width of the Dvoretzky–Kiefer–Wolfowitz band `√(ln(2/α) / 2n)`: the
/// ECDF ± ε contains the true CDF with probability at least `1 - α`.
pub fn kolmogorov_band(n: usize, alpha: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Size("Kolmogorov band needs n >= 1".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} must lie in (0, 1)")));
    }
    Ok(((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt())
}

/// Fraction of strictly positive values.
pub fn sign_fraction(y: &[f64]) -> f64 {
    let valid: Vec<f64> = y.iter().copied().filter(|v| v.is_finite()).collect();
    if valid.is_empty() {
        return 0.0;
    }
    valid.iter().filter(|&&v| v > 0.0).count() as f64 / valid.len() as f64
}

impl UaSummary {
    /// `statistic,value` lines.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("statistic,value\n");
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "{k},{v}");
        };
        line("output", self.name.clone());
        line("n_effective", self.n_effective.to_string());
        line("n_faults", self.n_faults.to_string());
        line("mean", self.mean.to_string());
        line("sd", self.sd.to_string());
        line("min", self.min.to_string());
        line("max", self.max.to_string());
        line("skewness", self.skewness.to_string());
        for (p, v) in &self.percentiles {
            line(&format!("p{}", p * 100.0), v.to_string());
        }
        line("tchebycheff_coverage", self.tchebycheff.coverage.to_string());
        line("tchebycheff_k", self.tchebycheff.k.to_string());
        line("tchebycheff_lower", self.tchebycheff.lower.to_string());
        line("tchebycheff_upper", self.tchebycheff.upper.to_string());
        line("kolmogorov_alpha", self.alpha.to_string());
        line("kolmogorov_halfwidth", self.kolmogorov_halfwidth.to_string());
        line("positive_fraction", self.positive_fraction.to_string());
        s
    }

    pub fn histogram_csv(&self) -> String {
        let mut s = String::from("lower,upper,count\n");
        for (i, c) in self.histogram.counts.iter().enumerate() {
            let _ = writeln!(s, "{},{},{}", self.histogram.edges[i], self.histogram.edges[i + 1], c);
        }
        s
    }

    /// ECDF with the DKW band, clipped to [0, 1].
    pub fn ecdf_csv(&self) -> String {
        let mut s = String::from("x,ecdf,band_lower,band_upper\n");
        let eps = self.kolmogorov_halfwidth;
        for &(x, f) in &self.ecdf {
            let _ = writeln!(s, "{},{},{},{}", x, f, (f - eps).max(0.0), (f + eps).min(1.0));
        }
        s
    }
}
