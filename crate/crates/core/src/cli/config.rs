//! The JSON configuration document.
//!
//! ```json
//! {
//!   "factors": [
//!     {"name": "x1", "dist": "uniform", "params": {"lower": -3.14159, "upper": 3.14159}},
//!     {"name": "x2", "dist": "normal", "params": {"mean": 0, "sd": 1}}
//!   ],
//!   "correlation": [[1, 0.5], [0.5, 1]],
//!   "model": {"formula": "x1 + 2 * x2"},
//!   "outputs": ["Y"]
//! }
//! ```
//!
//! `model` is one of `{"builtin": {"kind": "linear" | "ishigami" | "sobol_g", ...}}`,
//! `{"formula": "expr"}`, `{"formula": {"NAME": "expr", ...}}` or
//! `{"external": {"command": [...], "mode": "batch" | "per_row", "timeout_secs": 60, "workers": 1}}`.
//! `outputs` names the model outputs (formula order, external column names).

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::distributions::{Factor, FactorSpace};
use crate::models::{Builtin, ExternalModel, ModelDef};
use crate::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    factors: Vec<Factor>,
    #[serde(default)]
    correlation: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    model: Option<ModelSection>,
    #[serde(default)]
    outputs: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum ModelSection {
    Builtin(Builtin),
    Formula(FormulaSection),
    External(ExternalModel),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FormulaSection {
    Single(String),
    Named(BTreeMap<String, String>),
}

/// A parsed configuration: the factor space and, when present, the model.
#[derive(Debug, Clone)]
pub struct Config {
    pub space: FactorSpace,
    pub model: Option<ModelDef>,
}

impl Config {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Parses the document, validates the factor space and binds the model.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut space = FactorSpace { factors: doc.factors, correlation_target: doc.correlation };
        space.normalize();
        space.ensure_valid()?;
        let model = doc.model.map(|m| build_model(m, &doc.outputs, &space)).transpose()?;
        Ok(Self { space, model })
    }

    pub fn model(&self) -> Result<&ModelDef> {
        self.model.as_ref().ok_or_else(|| Error::Config("no `model` section".into()))
    }
}

fn build_model(section: ModelSection, outputs: &[String], space: &FactorSpace) -> Result<ModelDef> {
    match section {
        ModelSection::Builtin(b) => {
            if outputs.len() > 1 {
                return Err(Error::Config("builtin models have exactly one output".into()));
            }
            ModelDef::builtin(b, space)
        }
        ModelSection::Formula(FormulaSection::Single(src)) => {
            let name = match outputs {
                [] => "Y".to_string(),
                [one] => one.clone(),
                _ => return Err(Error::Config("a single formula has exactly one output".into())),
            };
            ModelDef::formula(&[(name, src)], space)
        }
        ModelSection::Formula(FormulaSection::Named(map)) => {
            let order: Vec<String> = if outputs.is_empty() { map.keys().cloned().collect() } else { outputs.to_vec() };
            if order.len() != map.len() || order.iter().any(|o| !map.contains_key(o)) {
                return Err(Error::Config("`outputs` must list exactly the formula names".into()));
            }
            let pairs: Vec<(String, String)> = order
                .into_iter()
                .map(|o| {
                    let src = map[&o].clone();
                    (o, src)
                })
                .collect();
            ModelDef::formula(&pairs, space)
        }
        ModelSection::External(ext) => ModelDef::external(ext, outputs.to_vec()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FACTORS: &str = r#""factors": [
        {"name": "a", "dist": "uniform", "params": {"lower": 0, "upper": 1}},
        {"name": "b", "dist": "normal", "params": {"mean": 0, "sd": 2}}
    ]"#;

    #[test]
    fn formula_models() {
        let c = Config::from_json(&format!(r#"{{{FACTORS}, "model": {{"formula": "a + b"}}}}"#)).unwrap();
        assert_eq!(c.model().unwrap().output_names(), vec!["Y"]);
        let c = Config::from_json(&format!(
            r#"{{{FACTORS}, "model": {{"formula": {{"S": "a + b", "P": "a * b"}}}}, "outputs": ["S", "P"]}}"#
        ))
        .unwrap();
        assert_eq!(c.model().unwrap().output_names(), vec!["S", "P"]);
    }

    #[test]
    fn builtin_and_external() {
        let c = Config::from_json(&format!(
            r#"{{{FACTORS}, "model": {{"builtin": {{"kind": "linear", "coefficients": [2, 1]}}}}}}"#
        ))
        .unwrap();
        assert!(matches!(c.model().unwrap(), ModelDef::Builtin(Builtin::Linear { .. })));
        let c = Config::from_json(&format!(
            r#"{{{FACTORS}, "model": {{"external": {{"command": ["sh", "m.sh"]}}}}, "outputs": ["H"]}}"#
        ))
        .unwrap();
        assert!(c.model().unwrap().is_external());
    }

    #[test]
    fn errors() {
        let dup = r#"{"factors": [
            {"name": "a", "dist": "uniform", "params": {"lower": 0, "upper": 1}},
            {"name": "a", "dist": "uniform", "params": {"lower": 0, "upper": 1}}]}"#;
        let e = Config::from_json(dup).unwrap_err();
        assert!(e.to_string().contains("duplicate factor name `a`"), "{e}");
        assert!(matches!(Config::from_json("{"), Err(Error::Config(_))));
        let c = Config::from_json(&format!("{{{FACTORS}}}")).unwrap();
        assert!(c.model().is_err());
        assert!(Config::from_json(&format!(r#"{{{FACTORS}, "model": {{"formula": "a + c"}}}}"#)).is_err());
    }
}
