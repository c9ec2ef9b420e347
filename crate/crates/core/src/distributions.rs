//! Marginal distributions for uncertain factors.
//!
//! Every variant supports `quantile` (inverse CDF, used to map unit-hypercube
//! samples onto factor values) and `cdf`. Parameters are validated by
//! [`Distribution::check`]; a whole [`FactorSpace`] is checked by [`validate`].

use std::collections::HashSet;
use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use statrs::function::gamma::gamma_ur;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", content = "params", rename_all = "snake_case")]
pub enum Distribution {
    Uniform { lower: f64, upper: f64 },
    LogUniform { lower: f64, upper: f64 },
    Normal { mean: f64, sd: f64 },
    TruncNormal { mean: f64, sd: f64, lower: f64, upper: f64 },
    /// Parameters are those of the underlying normal.
    LogNormal { mu: f64, sigma: f64 },
    Triangular { lower: f64, mode: f64, upper: f64 },
    Beta { alpha: f64, beta: f64, lower: f64, upper: f64 },
    DiscreteWeighted { values: Vec<f64>, weights: Vec<f64> },
}

impl Distribution {
    pub fn uniform(lower: f64, upper: f64) -> Self {
        Distribution::Uniform { lower, upper }
    }

    pub fn normal(mean: f64, sd: f64) -> Self {
        Distribution::Normal { mean, sd }
    }

    /// Builds a discrete distribution; weights are normalized to sum to one and
    /// the support is sorted by value.
    pub fn discrete_weighted(values: Vec<f64>, weights: Vec<f64>) -> Self {
        let mut d = Distribution::DiscreteWeighted { values, weights };
        d.normalize();
        d
    }

    /// Normalizes discrete weights in place (no-op for continuous variants).
    pub fn normalize(&mut self) {
        if let Distribution::DiscreteWeighted { values, weights } = self {
            if values.len() != weights.len() {
                return;
            }
            let mut pairs: Vec<(f64, f64)> =
                values.iter().copied().zip(weights.iter().copied()).collect();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            let total: f64 = pairs.iter().map(|p| p.1).sum();
            if total > 0.0 && total.is_finite() {
                for p in &mut pairs {
                    p.1 /= total;
                }
            }
            *values = pairs.iter().map(|p| p.0).collect();
            *weights = pairs.iter().map(|p| p.1).collect();
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Distribution::Uniform { .. } => "uniform",
            Distribution::LogUniform { .. } => "log_uniform",
            Distribution::Normal { .. } => "normal",
            Distribution::TruncNormal { .. } => "trunc_normal",
            Distribution::LogNormal { .. } => "log_normal",
            Distribution::Triangular { .. } => "triangular",
            Distribution::Beta { .. } => "beta",
            Distribution::DiscreteWeighted { .. } => "discrete_weighted",
        }
    }

    pub fn is_continuous(&self) -> bool {
        !matches!(self, Distribution::DiscreteWeighted { .. })
    }

    /// Whether the support is a bounded interval.
    pub fn is_bounded(&self) -> bool {
        !matches!(self, Distribution::Normal { .. } | Distribution::LogNormal { .. })
    }

    /// Checks parameter validity, returning a description of the first problem.
    pub fn check(&self) -> std::result::Result<(), String> {
        fn finite(name: &str, v: f64) -> std::result::Result<(), String> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(format!("{name} must be finite, got {v}"))
            }
        }
        fn ordered(lower: f64, upper: f64) -> std::result::Result<(), String> {
            finite("lower", lower)?;
            finite("upper", upper)?;
            if lower < upper {
                Ok(())
            } else {
                Err(format!("lower ({lower}) must be < upper ({upper})"))
            }
        }
        match *self {
            Distribution::Uniform { lower, upper } => ordered(lower, upper),
            Distribution::LogUniform { lower, upper } => {
                ordered(lower, upper)?;
                if lower > 0.0 {
                    Ok(())
                } else {
                    Err(format!("log_uniform lower must be > 0, got {lower}"))
                }
            }
            Distribution::Normal { mean, sd } => {
                finite("mean", mean)?;
                if sd > 0.0 && sd.is_finite() {
                    Ok(())
                } else {
                    Err(format!("sd must be > 0, got {sd}"))
                }
            }
            Distribution::TruncNormal { mean, sd, lower, upper } => {
                finite("mean", mean)?;
                if !(sd > 0.0 && sd.is_finite()) {
                    return Err(format!("sd must be > 0, got {sd}"));
                }
                ordered(lower, upper)?;
                let mass = std_normal_cdf((upper - mean) / sd) - std_normal_cdf((lower - mean) / sd);
                if mass > 1e-300 {
                    Ok(())
                } else {
                    Err("truncation interval carries no probability mass".into())
                }
            }
            Distribution::LogNormal { mu, sigma } => {
                finite("mu", mu)?;
                if sigma > 0.0 && sigma.is_finite() {
                    Ok(())
                } else {
                    Err(format!("sigma must be > 0, got {sigma}"))
                }
            }
            Distribution::Triangular { lower, mode, upper } => {
                ordered(lower, upper)?;
                if (lower..=upper).contains(&mode) {
                    Ok(())
                } else {
                    Err(format!("mode ({mode}) must lie in [{lower}, {upper}]"))
                }
            }
            Distribution::Beta { alpha, beta, lower, upper } => {
                ordered(lower, upper)?;
                if alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite() {
                    Ok(())
                } else {
                    Err(format!("alpha and beta must be > 0, got {alpha}, {beta}"))
                }
            }
            Distribution::DiscreteWeighted { ref values, ref weights } => {
                if values.is_empty() {
                    return Err("discrete_weighted needs at least one value".into());
                }
                if values.len() != weights.len() {
                    return Err(format!(
                        "{} values but {} weights",
                        values.len(),
                        weights.len()
                    ));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err("discrete values must be finite".into());
                }
                if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
                    return Err("weights must be nonnegative and finite".into());
                }
                if weights.iter().sum::<f64>() <= 0.0 {
                    return Err("weights must not all be zero".into());
                }
                Ok(())
            }
        }
    }

    /// Support bounds; unbounded variants report infinities.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Distribution::Uniform { lower, upper }
            | Distribution::LogUniform { lower, upper }
            | Distribution::TruncNormal { lower, upper, .. }
            | Distribution::Triangular { lower, upper, .. }
            | Distribution::Beta { lower, upper, .. } => (lower, upper),
            Distribution::Normal { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Distribution::LogNormal { .. } => (0.0, f64::INFINITY),
            Distribution::DiscreteWeighted { ref values, .. } => values
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v))),
        }
    }

    /// Inverse CDF `F⁻¹(p)` for `p ∈ [0, 1]`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
        }
        self.check().map_err(Error::Parameter)?;
        Ok(self.quantile_unchecked(p))
    }

    /// Inverse CDF without validation; callers guarantee valid parameters and p.
    pub(crate) fn quantile_unchecked(&self, p: f64) -> f64 {
        match *self {
            Distribution::Uniform { lower, upper } => {
                if p >= 1.0 {
                    upper
                } else {
                    lower + p * (upper - lower)
                }
            }
            Distribution::LogUniform { lower, upper } => {
                if p <= 0.0 {
                    lower
                } else if p >= 1.0 {
                    upper
                } else {
                    (lower.ln() + p * (upper / lower).ln()).exp().clamp(lower, upper)
                }
            }
            Distribution::Normal { mean, sd } => mean + sd * std_normal_quantile(p),
            Distribution::TruncNormal { mean, sd, lower, upper } => {
                if p <= 0.0 {
                    return lower;
                }
                if p >= 1.0 {
                    return upper;
                }
                let (a, b) = ((lower - mean) / sd, (upper - mean) / sd);
                // work in the tail that keeps precision
                let z = if a > 0.0 {
                    let (qa, qb) = (std_normal_sf(a), std_normal_sf(b));
                    -std_normal_quantile(qa - p * (qa - qb))
                } else {
                    let (fa, fb) = (std_normal_cdf(a), std_normal_cdf(b));
                    std_normal_quantile(fa + p * (fb - fa))
                };
                (mean + sd * z).clamp(lower, upper)
            }
            Distribution::LogNormal { mu, sigma } => (mu + sigma * std_normal_quantile(p)).exp(),
            Distribution::Triangular { lower, mode, upper } => {
                let width = upper - lower;
                let fc = (mode - lower) / width;
                let x = if p < fc {
                    lower + (p * width * (mode - lower)).sqrt()
                } else {
                    upper - ((1.0 - p) * width * (upper - mode)).sqrt()
                };
                x.clamp(lower, upper)
            }
            Distribution::Beta { alpha, beta, lower, upper } => {
                lower + (upper - lower) * std_beta_quantile(alpha, beta, p)
            }
            Distribution::DiscreteWeighted { ref values, ref weights } => {
                let total: f64 = weights.iter().sum();
                let mut cum = 0.0;
                for (i, (&v, &w)) in values.iter().zip(weights).enumerate() {
                    cum += w / total;
                    // right-continuous: a p exactly on a boundary maps upward
                    if p < cum && w > 0.0 {
                        return v;
                    }
                    if i + 1 == values.len() {
                        return v;
                    }
                }
                values[values.len() - 1]
            }
        }
    }

    /// CDF `F(x)`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.check().map_err(Error::Parameter)?;
        Ok(self.cdf_unchecked(x))
    }

    pub(crate) fn cdf_unchecked(&self, x: f64) -> f64 {
        match *self {
            Distribution::Uniform { lower, upper } => ((x - lower) / (upper - lower)).clamp(0.0, 1.0),
            Distribution::LogUniform { lower, upper } => {
                if x <= lower {
                    0.0
                } else if x >= upper {
                    1.0
                } else {
                    ((x / lower).ln() / (upper / lower).ln()).clamp(0.0, 1.0)
                }
            }
            Distribution::Normal { mean, sd } => std_normal_cdf((x - mean) / sd),
            Distribution::TruncNormal { mean, sd, lower, upper } => {
                if x <= lower {
                    return 0.0;
                }
                if x >= upper {
                    return 1.0;
                }
                let (a, b, z) = ((lower - mean) / sd, (upper - mean) / sd, (x - mean) / sd);
                let v = if a > 0.0 {
                    let (qa, qb) = (std_normal_sf(a), std_normal_sf(b));
                    (qa - std_normal_sf(z)) / (qa - qb)
                } else {
                    let (fa, fb) = (std_normal_cdf(a), std_normal_cdf(b));
                    (std_normal_cdf(z) - fa) / (fb - fa)
                };
                v.clamp(0.0, 1.0)
            }
            Distribution::LogNormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    std_normal_cdf((x.ln() - mu) / sigma)
                }
            }
            Distribution::Triangular { lower, mode, upper } => {
                if x <= lower {
                    0.0
                } else if x >= upper {
                    1.0
                } else if x <= mode {
                    (x - lower).powi(2) / ((upper - lower) * (mode - lower))
                } else {
                    1.0 - (upper - x).powi(2) / ((upper - lower) * (upper - mode))
                }
            }
            Distribution::Beta { alpha, beta, lower, upper } => {
                if x <= lower {
                    0.0
                } else if x >= upper {
                    1.0
                } else {
                    beta_reg(alpha, beta, (x - lower) / (upper - lower))
                }
            }
            Distribution::DiscreteWeighted { ref values, ref weights } => {
                let total: f64 = weights.iter().sum();
                let mass: f64 = values
                    .iter()
                    .zip(weights)
                    .filter(|(v, _)| **v <= x)
                    .map(|(_, w)| w / total)
                    .sum();
                mass.clamp(0.0, 1.0)
            }
        }
    }

    /// Analytic mean.
    pub fn mean(&self) -> f64 {
        match *self {
            Distribution::Uniform { lower, upper } => 0.5 * (lower + upper),
            Distribution::LogUniform { lower, upper } => (upper - lower) / (upper / lower).ln(),
            Distribution::Normal { mean, .. } => mean,
            Distribution::TruncNormal { mean, sd, lower, upper } => {
                let (a, b) = ((lower - mean) / sd, (upper - mean) / sd);
                let z = trunc_mass(a, b);
                mean + sd * (std_normal_pdf(a) - std_normal_pdf(b)) / z
            }
            Distribution::LogNormal { mu, sigma } => (mu + 0.5 * sigma * sigma).exp(),
            Distribution::Triangular { lower, mode, upper } => (lower + mode + upper) / 3.0,
            Distribution::Beta { alpha, beta, lower, upper } => {
                lower + (upper - lower) * alpha / (alpha + beta)
            }
            Distribution::DiscreteWeighted { ref values, ref weights } => {
                let total: f64 = weights.iter().sum();
                values.iter().zip(weights).map(|(v, w)| v * w / total).sum()
            }
        }
    }

    /// Analytic variance.
    pub fn variance(&self) -> f64 {
        match *self {
            Distribution::Uniform { lower, upper } => (upper - lower).powi(2) / 12.0,
            Distribution::LogUniform { lower, upper } => {
                let l = (upper / lower).ln();
                let m = (upper - lower) / l;
                (upper * upper - lower * lower) / (2.0 * l) - m * m
            }
            Distribution::Normal { sd, .. } => sd * sd,
            Distribution::TruncNormal { mean, sd, lower, upper } => {
                let (a, b) = ((lower - mean) / sd, (upper - mean) / sd);
                let z = trunc_mass(a, b);
                let (pa, pb) = (std_normal_pdf(a), std_normal_pdf(b));
                let shift = (pa - pb) / z;
                sd * sd * (1.0 + (a * pa - b * pb) / z - shift * shift)
            }
            Distribution::LogNormal { mu, sigma } => {
                let s2 = sigma * sigma;
                (s2.exp() - 1.0) * (2.0 * mu + s2).exp()
            }
            Distribution::Triangular { lower: a, mode: c, upper: b } => {
                (a * a + b * b + c * c - a * b - a * c - b * c) / 18.0
            }
            Distribution::Beta { alpha, beta, lower, upper } => {
                let s = alpha + beta;
                (upper - lower).powi(2) * alpha * beta / (s * s * (s + 1.0))
            }
            Distribution::DiscreteWeighted { ref values, ref weights } => {
                let m = self.mean();
                let total: f64 = weights.iter().sum();
                values.iter().zip(weights).map(|(v, w)| (v - m).powi(2) * w / total).sum()
            }
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distribution::Uniform { lower, upper } => write!(f, "U({lower},{upper})"),
            Distribution::LogUniform { lower, upper } => write!(f, "LogU({lower},{upper})"),
            Distribution::Normal { mean, sd } => write!(f, "N({mean},{sd})"),
            Distribution::TruncNormal { mean, sd, lower, upper } => {
                write!(f, "TN({mean},{sd};{lower},{upper})")
            }
            Distribution::LogNormal { mu, sigma } => write!(f, "LogN({mu},{sigma})"),
            Distribution::Triangular { lower, mode, upper } => write!(f, "Tri({lower},{mode},{upper})"),
            Distribution::Beta { alpha, beta, lower, upper } => {
                write!(f, "Beta({alpha},{beta};{lower},{upper})")
            }
            Distribution::DiscreteWeighted { values, .. } => write!(f, "Discrete[{}]", values.len()),
        }
    }
}

fn trunc_mass(a: f64, b: f64) -> f64 {
    if a > 0.0 {
        std_normal_sf(a) - std_normal_sf(b)
    } else {
        std_normal_cdf(b) - std_normal_cdf(a)
    }
}

/// Complementary error function via the regularized upper incomplete gamma
/// function, `erfc(x) = Q(1/2, x²)` for `x >= 0` (accurate to ~1e-15).
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let x2 = x * x;
    if x2 == 0.0 {
        return 1.0;
    }
    let q = if x2.is_finite() { gamma_ur(0.5, x2) } else { 0.0 };
    if x >= 0.0 {
        q
    } else {
        2.0 - q
    }
}

pub fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}

/// Upper tail `1 - Φ(z)` without cancellation.
pub fn std_normal_sf(z: f64) -> f64 {
    0.5 * erfc(z / SQRT_2)
}

/// Standard normal inverse CDF: Acklam's rational approximation (relative
/// error ~1.15e-9) followed by one Halley refinement step against `erfc`.
pub fn std_normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383_577_518_672_69e2,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    // Halley step on Φ(x) - p, taken in whichever tail is accurate.
    let e = if x > 0.0 {
        (1.0 - p) - std_normal_sf(x)
    } else {
        std_normal_cdf(x) - p
    };
    let u = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    x - u / (1.0 + 0.5 * x * u)
}

/// Inverse of the regularized incomplete beta function by safeguarded bisection.
fn std_beta_quantile(alpha: f64, beta: f64, p: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta_reg(alpha, beta, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// A named uncertain input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub name: String,
    #[serde(flatten)]
    pub dist: Distribution,
}

impl Factor {
    pub fn new(name: impl Into<String>, dist: Distribution) -> Self {
        Self { name: name.into(), dist }
    }
}

/// Ordered factors plus an optional Spearman correlation target.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FactorSpace {
    pub factors: Vec<Factor>,
    #[serde(default, rename = "correlation", skip_serializing_if = "Option::is_none")]
    pub correlation_target: Option<Vec<Vec<f64>>>,
}

impl FactorSpace {
    pub fn new(factors: Vec<Factor>) -> Self {
        Self { factors, correlation_target: None }
    }

    /// k independent U(0,1) factors named `x1..xk`.
    pub fn unit(k: usize) -> Self {
        Self::new((1..=k).map(|i| Factor::new(format!("x{i}"), Distribution::uniform(0.0, 1.0))).collect())
    }

    pub fn with_correlation(mut self, target: Vec<Vec<f64>>) -> Self {
        self.correlation_target = Some(target);
        self
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.factors.iter().map(|f| f.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.name == name)
    }

    /// Normalizes discrete weights of every factor.
    pub fn normalize(&mut self) {
        for f in &mut self.factors {
            f.dist.normalize();
        }
    }

    /// Fails with a config error summarizing every violation.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = validate(self);
        if report.is_ok() {
            Ok(())
        } else {
            Err(Error::Config(report.to_string()))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptySpace,
    EmptyName { index: usize },
    DuplicateName { name: String },
    Parameter { factor: String, message: String },
    Correlation { message: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptySpace => write!(f, "no factors defined"),
            Violation::EmptyName { index } => write!(f, "factor #{} has an empty name", index + 1),
            Violation::DuplicateName { name } => write!(f, "duplicate factor name `{name}`"),
            Violation::Parameter { factor, message } => write!(f, "factor `{factor}`: {message}"),
            Violation::Correlation { message } => write!(f, "correlation: {message}"),
        }
    }
}

/// All violations found in a factor space; empty means usable.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub fn validate(space: &FactorSpace) -> ValidationReport {
    let mut violations = Vec::new();
    if space.factors.is_empty() {
        violations.push(Violation::EmptySpace);
    }
    let mut seen = HashSet::new();
    for (i, f) in space.factors.iter().enumerate() {
        if f.name.trim().is_empty() {
            violations.push(Violation::EmptyName { index: i });
        } else if !seen.insert(f.name.as_str()) {
            violations.push(Violation::DuplicateName { name: f.name.clone() });
        }
        if let Err(message) = f.dist.check() {
            violations.push(Violation::Parameter { factor: f.name.clone(), message });
        }
    }
    if let Some(target) = &space.correlation_target {
        let k = space.factors.len();
        if target.len() != k || target.iter().any(|row| row.len() != k) {
            violations.push(Violation::Correlation {
                message: format!("matrix must be {k}x{k}"),
            });
        } else {
            'outer: for i in 0..k {
                if target[i][i] != 1.0 {
                    violations.push(Violation::Correlation {
                        message: format!("diagonal entry ({},{}) must be 1", i + 1, i + 1),
                    });
                    break;
                }
                for j in 0..k {
                    let v = target[i][j];
                    if !(-1.0..=1.0).contains(&v) {
                        violations.push(Violation::Correlation {
                            message: format!("entry ({},{}) = {v} outside [-1, 1]", i + 1, j + 1),
                        });
                        break 'outer;
                    }
                    if (v - target[j][i]).abs() > 1e-12 {
                        violations.push(Violation::Correlation {
                            message: format!("not symmetric at ({},{})", i + 1, j + 1),
                        });
                        break 'outer;
                    }
                }
            }
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_continuous() -> Vec<Distribution> {
        vec![
            Distribution::uniform(0.8, 1.1),
            Distribution::LogUniform { lower: 0.1, upper: 100.0 },
            Distribution::normal(1.0, 2.0),
            Distribution::TruncNormal { mean: 0.0, sd: 1.0, lower: -1.0, upper: 2.5 },
            Distribution::TruncNormal { mean: 0.0, sd: 1.0, lower: 1.5, upper: 4.0 },
            Distribution::LogNormal { mu: 0.5, sigma: 0.8 },
            Distribution::Triangular { lower: 0.0, mode: 0.3, upper: 2.0 },
            Distribution::Beta { alpha: 2.0, beta: 5.0, lower: -1.0, upper: 3.0 },
            Distribution::Beta { alpha: 0.5, beta: 0.5, lower: 0.0, upper: 1.0 },
        ]
    }

    #[test]
    fn uniform_quantiles() {
        assert_eq!(Distribution::uniform(0.0, 1.0).quantile(0.5).unwrap(), 0.5);
        assert_eq!(Distribution::uniform(0.8, 1.1).quantile(0.0).unwrap(), 0.8);
        assert_eq!(Distribution::uniform(0.8, 1.1).quantile(1.0).unwrap(), 1.1);
    }

    #[test]
    fn normal_quantile_matches_tables() {
        let q = Distribution::normal(0.0, 1.0).quantile(0.975).unwrap();
        assert!((q - 1.959964).abs() < 1e-6, "{q}");
        // 1.959963984540054 is the tabulated 97.5% point
        assert!((q - 1.959963984540054).abs() < 1e-12, "{q}");
        let c = Distribution::normal(0.0, 1.0).cdf(1.959964).unwrap();
        assert!((c - 0.975).abs() < 1e-6);
    }

    #[test]
    fn simple_cdfs() {
        assert_eq!(Distribution::uniform(0.0, 1.0).cdf(0.25).unwrap(), 0.25);
        let tri = Distribution::Triangular { lower: 0.0, mode: 1.0, upper: 2.0 };
        assert!((tri.cdf(1.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn domain_and_parameter_errors() {
        assert!(matches!(Distribution::uniform(0.0, 1.0).quantile(1.5), Err(Error::Domain(_))));
        assert!(matches!(Distribution::uniform(0.0, 1.0).quantile(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(Distribution::normal(0.0, -1.0).quantile(0.5), Err(Error::Parameter(_))));
        assert!(matches!(Distribution::normal(0.0, -1.0).cdf(0.5), Err(Error::Parameter(_))));
    }

    #[test]
    fn round_trip_continuous() {
        for d in all_continuous() {
            for i in 1..=99 {
                let p = i as f64 / 100.0;
                let x = d.quantile(p).unwrap();
                let back = d.cdf(x).unwrap();
                assert!((back - p).abs() <= 1e-9, "{d}: p={p} x={x} back={back}");
            }
        }
    }

    #[test]
    fn bounded_endpoints() {
        for d in all_continuous().into_iter().filter(|d| d.is_bounded()) {
            let (lo, hi) = d.support();
            assert!((d.quantile(0.0).unwrap() - lo).abs() < 1e-12, "{d}");
            assert!((d.quantile(1.0).unwrap() - hi).abs() < 1e-12, "{d}");
        }
    }

    #[test]
    fn discrete_right_continuous() {
        let d = Distribution::discrete_weighted(vec![3.0, 1.0, 2.0], vec![2.0, 1.0, 1.0]);
        // sorted: 1 (0.25), 2 (0.25), 3 (0.5)
        assert_eq!(d.quantile(0.0).unwrap(), 1.0);
        assert_eq!(d.quantile(0.24).unwrap(), 1.0);
        assert_eq!(d.quantile(0.25).unwrap(), 2.0);
        assert_eq!(d.quantile(0.5).unwrap(), 3.0);
        assert_eq!(d.quantile(1.0).unwrap(), 3.0);
        assert_eq!(d.cdf(2.0).unwrap(), 0.5);
        if let Distribution::DiscreteWeighted { weights, .. } = &d {
            assert!((weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn validate_reports_all_problems() {
        let space = FactorSpace::new(vec![
            Factor::new("x1", Distribution::uniform(0.0, 1.0)),
            Factor::new("x1", Distribution::uniform(0.0, 1.0)),
            Factor::new("x3", Distribution::normal(0.0, -1.0)),
        ]);
        let report = validate(&space);
        assert!(report
            .violations
            .contains(&Violation::DuplicateName { name: "x1".into() }));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Parameter { factor, .. } if factor == "x3")));
    }

    #[test]
    fn validate_correlation_target() {
        let bad = FactorSpace::unit(2).with_correlation(vec![vec![1.0, 0.5], vec![0.4, 1.0]]);
        assert!(!validate(&bad).is_ok());
        let bad = FactorSpace::unit(2).with_correlation(vec![vec![1.0, 1.5], vec![1.5, 1.0]]);
        assert!(!validate(&bad).is_ok());
        let good = FactorSpace::unit(2).with_correlation(vec![vec![1.0, 0.5], vec![0.5, 1.0]]);
        assert!(validate(&good).is_ok());
    }

    #[test]
    fn factor_json_shape() {
        let f: Factor =
            serde_json::from_str(r#"{"name":"eps_sd","dist":"uniform","params":{"lower":0.8,"upper":1.1}}"#)
                .unwrap();
        assert_eq!(f.dist, Distribution::uniform(0.8, 1.1));
        let back = serde_json::to_string(&f).unwrap();
        assert!(back.contains(r#""dist":"uniform""#), "{back}");
    }
}
