// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use abstat::corpus::{self, NamedScheme};
use abstat::engine::{EngineConfig, Mode, NRange, OrderParams, VerdictKnobs};
use abstat::invariants::{GridModel, InvariantGrid, Refinement};
use abstat::models::RVSequenceModel;
use abstat::montecarlo::MCConfig;
use abstat::WindowScheme;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

/// One run: scheme, model, parameters, mode, index range and output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RunConfig {
    pub scheme: WindowScheme,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<RVSequenceModel>,
    pub params: OrderParams,
    pub mode: Mode,
    pub n_range: NRange,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub verdict: VerdictKnobs,
    #[serde(default)]
    pub engine: EngineConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<MCConfig>,
}

impl RunConfig {
    pub fn from_value(v: Value) -> Result<Self, CliError> {
        let cfg: RunConfig =
            serde_json::from_value(v).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.model()?;
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        Self::from_value(v)
    }

    /// Pretty JSON with every default filled in and a trailing newline.
    pub fn canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn model(&self) -> Result<RVSequenceModel, CliError> {
        match (&self.corpus, &self.model) {
            (Some(id), None) => Ok(corpus::build(id)?.model),
            (None, Some(m)) => Ok(m.clone()),
            _ => Err(CliError::Config(
                "exactly one of `corpus` and `model` must be given".into(),
            )),
        }
    }
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn parse_json_flag(flag: &str, text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(format!("--{flag}: {e}")))
}

/// Sets `path` (dot separated) inside a JSON object, creating objects on the way.
pub fn set(root: &mut Value, path: &str, v: Value) -> Result<(), CliError> {
    let mut cur = root;
    let mut parts = path.split('.').peekable();
    while let Some(key) = parts.next() {
        let obj = match cur {
            Value::Object(m) => m,
            _ => {
                return Err(CliError::Config(format!(
                    "`{path}` is not inside an object"
                )))
            }
        };
        if parts.peek().is_none() {
            obj.insert(key.into(), v);
            return Ok(());
        }
        cur = obj.entry(key).or_insert_with(|| Value::Object(Map::new()));
    }
    Ok(())
}

/// A model in an invariant grid: a corpus id or an inline model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GridModelSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<RVSequenceModel>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GridConfig {
    pub models: Vec<GridModelSpec>,
    pub schemes: Vec<NamedScheme>,
    pub params: Vec<OrderParams>,
    #[serde(default)]
    pub refinements: Vec<Refinement>,
    pub k_max: u64,
}

impl GridConfig {
    pub fn into_grid(self) -> Result<InvariantGrid, CliError> {
        let models = self
            .models
            .into_iter()
            .map(|m| {
                let model = match (m.corpus, m.model) {
                    (Some(id), None) => corpus::build(&id)?.model,
                    (None, Some(model)) => model,
                    _ => {
                        return Err(CliError::Config(format!(
                            "grid model `{}` needs exactly one of `corpus` and `model`",
                            m.name
                        )))
                    }
                };
                Ok(GridModel {
                    name: m.name,
                    model,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(InvariantGrid {
            models,
            schemes: self.schemes,
            params: self.params,
            refinements: self.refinements,
            k_max: self.k_max,
        })
    }
}
