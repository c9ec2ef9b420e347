//! Internal models: formulas and the built-in test functions, plus analytic
//! sensitivity indices for the built-ins.

pub mod expr;

use std::f64::consts::PI;
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use expr::{parse, BoundExpr, EvalFault, Expr};

use crate::distributions::{Distribution, FactorSpace};
use crate::{Error, Result};

/// Built-in demonstration models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Builtin {
    /// `Y = Σ c_i x_i`.
    Linear { coefficients: Vec<f64> },
    /// `Y = sin x1 + a sin² x2 + b x3⁴ sin x1`; factors beyond the third are
    /// accepted and ignored.
    Ishigami {
        #[serde(default = "default_ishigami_a")]
        a: f64,
        #[serde(default = "default_ishigami_b")]
        b: f64,
    },
    /// `Y = Π (|4 x_i - 2| + a_i) / (1 + a_i)`.
    SobolG { a: Vec<f64> },
}

fn default_ishigami_a() -> f64 {
    7.0
}

fn default_ishigami_b() -> f64 {
    0.1
}

impl Builtin {
    pub fn ishigami() -> Self {
        Builtin::Ishigami { a: 7.0, b: 0.1 }
    }

    fn check(&self, k: usize) -> Result<()> {
        match self {
            Builtin::Linear { coefficients } if coefficients.len() != k => Err(Error::Config(format!(
                "linear model has {} coefficients for {k} factors",
                coefficients.len()
            ))),
            Builtin::SobolG { a } if a.len() != k => {
                Err(Error::Config(format!("sobol_g has {} coefficients for {k} factors", a.len())))
            }
            Builtin::SobolG { a } if a.iter().any(|&ai| ai < 0.0) => {
                Err(Error::Config("sobol_g coefficients must be >= 0".into()))
            }
            Builtin::Ishigami { .. } if k < 3 => {
                Err(Error::Config(format!("ishigami needs at least 3 factors, got {k}")))
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Builtin::Linear { coefficients } => coefficients.iter().zip(x).map(|(c, v)| c * v).sum(),
            Builtin::Ishigami { a, b } => {
                let s1 = x[0].sin();
                s1 + a * x[1].sin().powi(2) + b * x[2].powi(4) * s1
            }
            Builtin::SobolG { a } => {
                a.iter().zip(x).map(|(ai, xi)| ((4.0 * xi - 2.0).abs() + ai) / (1.0 + ai)).product()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExternalMode {
    /// Whole sample file in, whole output file out.
    #[default]
    Batch,
    /// One invocation per sample row.
    PerRow,
}

/// An external executable driven through the sample/output file protocol:
/// `<command...> <sample_file> <output_file>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalModel {
    /// Program followed by fixed leading arguments.
    pub command: Vec<String>,
    #[serde(default)]
    pub mode: ExternalMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timeout_secs: Option<f64>,
    /// Concurrent child processes in per-row mode.
    #[serde(default = "default_workers")]
    pub workers: usize,
}

fn default_workers() -> usize {
    1
}

impl ExternalModel {
    pub fn new(command: Vec<String>) -> Self {
        Self { command, mode: ExternalMode::Batch, timeout_secs: None, workers: 1 }
    }

    pub fn timeout(&self) -> Option<Duration> {
        self.timeout_secs.map(Duration::from_secs_f64)
    }
}

/// A named formula output bound to a factor space.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaOutput {
    pub name: String,
    pub source: String,
    pub expr: BoundExpr,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelDef {
    Formula { outputs: Vec<FormulaOutput> },
    Builtin(Builtin),
    External { model: ExternalModel, outputs: Vec<String> },
}

impl ModelDef {
    /// Parses and binds named formulas against the factor names of `space`.
    pub fn formula<S: AsRef<str>>(outputs: &[(S, S)], space: &FactorSpace) -> Result<Self> {
        if outputs.is_empty() {
            return Err(Error::Config("formula model needs at least one output".into()));
        }
        let names = space.names();
        let outputs = outputs
            .iter()
            .map(|(name, src)| {
                let expr = parse(src.as_ref())?.bind(&names)?;
                Ok(FormulaOutput { name: name.as_ref().to_string(), source: src.as_ref().to_string(), expr })
            })
            .collect::<Result<_>>()?;
        Ok(ModelDef::Formula { outputs })
    }

    /// Checks a builtin's parameter lengths against the factor count.
    pub fn builtin(b: Builtin, space: &FactorSpace) -> Result<Self> {
        b.check(space.len())?;
        Ok(ModelDef::Builtin(b))
    }

    pub fn external(model: ExternalModel, outputs: Vec<String>) -> Result<Self> {
        if model.command.is_empty() {
            return Err(Error::Config("external model command is empty".into()));
        }
        let outputs = if outputs.is_empty() { vec!["Y".to_string()] } else { outputs };
        Ok(ModelDef::External { model, outputs })
    }

    pub fn output_names(&self) -> Vec<String> {
        match self {
            ModelDef::Formula { outputs } => outputs.iter().map(|o| o.name.clone()).collect(),
            ModelDef::Builtin(_) => vec!["Y".to_string()],
            ModelDef::External { outputs, .. } => outputs.clone(),
        }
    }

    pub fn is_external(&self) -> bool {
        matches!(self, ModelDef::External { .. })
    }
}

/// Evaluates an internal model on one row of factor values.
///
/// A math fault in any output is returned as `Err` for the whole row; external
/// models must go through [`crate::runner`].
pub fn evaluate(model: &ModelDef, row: &[f64]) -> std::result::Result<Vec<f64>, EvalFault> {
    match model {
        ModelDef::Formula { outputs } => outputs.iter().map(|o| o.expr.eval(row)).collect(),
        ModelDef::Builtin(b) => {
            let y = b.eval(row);
            if y.is_finite() {
                Ok(vec![y])
            } else {
                Err(EvalFault { expr: "builtin".into(), message: format!("non-finite result {y}") })
            }
        }
        ModelDef::External { .. } => Err(EvalFault {
            expr: "external".into(),
            message: "external models are evaluated by the runner".into(),
        }),
    }
}

/// Analytic first-order and total index of one factor.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceIndex {
    pub name: String,
    pub first: f64,
    pub total: f64,
}

fn is_uniform(d: &Distribution, lo: f64, hi: f64) -> bool {
    matches!(*d, Distribution::Uniform { lower, upper } if (lower - lo).abs() < 1e-12 && (upper - hi).abs() < 1e-12)
}

/// Closed-form `S_i` and `S_Ti` of a built-in model over its canonical inputs:
/// linear over any independent marginals, Ishigami over `U(-π, π)³`, Sobol G
/// over `U(0, 1)^k`.
pub fn builtin_reference_indices(model: &Builtin, space: &FactorSpace) -> Result<Vec<ReferenceIndex>> {
    model.check(space.len())?;
    if space.correlation_target.is_some() {
        return Err(Error::Unsupported("reference indices assume independent inputs".into()));
    }
    let names = space.names();
    let table = |first: Vec<f64>, total: Vec<f64>| {
        names
            .iter()
            .zip(first.into_iter().zip(total))
            .map(|(n, (first, total))| ReferenceIndex { name: n.clone(), first, total })
            .collect()
    };
    match model {
        Builtin::Linear { coefficients } => {
            let parts: Vec<f64> = coefficients
                .iter()
                .zip(&space.factors)
                .map(|(c, f)| c * c * f.dist.variance())
                .collect();
            let v: f64 = parts.iter().sum();
            if v == 0.0 {
                return Err(Error::Unsupported("linear model has zero output variance".into()));
            }
            let s: Vec<f64> = parts.iter().map(|p| p / v).collect();
            Ok(table(s.clone(), s))
        }
        Builtin::Ishigami { a, b } => {
            if !space.factors[..3].iter().all(|f| is_uniform(&f.dist, -PI, PI)) {
                return Err(Error::Unsupported("Ishigami reference indices need U(-pi, pi) inputs".into()));
            }
            let pi4 = PI.powi(4);
            let pi8 = PI.powi(8);
            let v1 = 0.5 * (1.0 + b * pi4 / 5.0).powi(2);
            let v2 = a * a / 8.0;
            let v13 = b * b * pi8 * 8.0 / 225.0;
            let v = v1 + v2 + v13;
            let mut first = vec![v1 / v, v2 / v, 0.0];
            let mut total = vec![(v1 + v13) / v, v2 / v, v13 / v];
            first.resize(space.len(), 0.0);
            total.resize(space.len(), 0.0);
            Ok(table(first, total))
        }
        Builtin::SobolG { a } => {
            if !space.factors.iter().all(|f| is_uniform(&f.dist, 0.0, 1.0)) {
                return Err(Error::Unsupported("Sobol G reference indices need U(0, 1) inputs".into()));
            }
            let vi: Vec<f64> = a.iter().map(|ai| (1.0 / 3.0) / (1.0 + ai).powi(2)).collect();
            let prod: f64 = vi.iter().map(|v| 1.0 + v).product();
            let v = prod - 1.0;
            let first = vi.iter().map(|x| x / v).collect();
            let total = vi.iter().map(|x| x * (prod / (1.0 + x)) / v).collect();
            Ok(table(first, total))
        }
    }
}
