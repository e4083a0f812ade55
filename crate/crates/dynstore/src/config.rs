//! JSON config files and the bundled presets.

use std::path::Path;

use dynstore_core::model::{FailureModel, NetworkConfig};
use dynstore_core::rational::{self, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// A rational written as an integer or as a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalValue {
    Int(i64),
    Text(String),
}

impl RationalValue {
    pub fn to_rational(&self) -> CliResult<Rational> {
        match self {
            RationalValue::Int(i) => Ok(rational::int(*i)),
            RationalValue::Text(s) => Ok(rational::parse(s)?),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        if r.is_integer() {
            if let Ok(i) = r.to_integer().try_into() {
                return RationalValue::Int(i);
            }
        }
        RationalValue::Text(rational::to_fraction_string(r))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FailureModelFile {
    Uniform,
    TwoClass { p: RationalValue, q: RationalValue },
    PerNode { per_node: Vec<RationalValue> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n1: usize,
    pub n2: usize,
    pub beta1: RationalValue,
    pub beta2: RationalValue,
    pub k_prime: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<RationalValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_model: Option<FailureModelFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<RationalValue>,
}

impl ConfigFile {
    pub fn to_config(&self) -> CliResult<NetworkConfig> {
        let failure_model = match &self.failure_model {
            None | Some(FailureModelFile::Uniform) => FailureModel::Uniform,
            Some(FailureModelFile::TwoClass { p, q }) => FailureModel::TwoClass {
                p: p.to_rational()?,
                q: q.to_rational()?,
            },
            Some(FailureModelFile::PerNode { per_node }) => FailureModel::PerNode(
                per_node.iter().map(|v| v.to_rational()).collect::<CliResult<_>>()?,
            ),
        };
        let alpha = self.alpha.as_ref().map(|a| a.to_rational()).transpose()?;
        let lambda = self.lambda.as_ref().map(|l| l.to_rational()).transpose()?;
        let cfg = NetworkConfig::new(
            self.n1,
            self.n2,
            self.beta1.to_rational()?,
            self.beta2.to_rational()?,
            self.k_prime,
        )
        .with_failure_model(failure_model)
        .with_alpha(alpha)
        .with_lambda(lambda);
        cfg.check()?;
        if let Some(l) = &cfg.lambda {
            if *l <= rational::zero() {
                return Err(CliError::invalid("lambda must be positive"));
            }
        }
        Ok(cfg)
    }

    pub fn from_config(cfg: &NetworkConfig) -> Self {
        let failure_model = match &cfg.failure_model {
            FailureModel::Uniform => FailureModelFile::Uniform,
            FailureModel::TwoClass { p, q } => FailureModelFile::TwoClass {
                p: RationalValue::from_rational(p),
                q: RationalValue::from_rational(q),
            },
            FailureModel::PerNode(v) => FailureModelFile::PerNode {
                per_node: v.iter().map(RationalValue::from_rational).collect(),
            },
        };
        Self {
            n1: cfg.n1,
            n2: cfg.n2,
            beta1: RationalValue::from_rational(&cfg.beta1),
            beta2: RationalValue::from_rational(&cfg.beta2),
            k_prime: cfg.k_prime,
            alpha: cfg.alpha.as_ref().map(RationalValue::from_rational),
            failure_model: Some(failure_model),
            lambda: cfg.lambda.as_ref().map(RationalValue::from_rational),
        }
    }
}

pub fn parse_config(text: &str) -> CliResult<NetworkConfig> {
    let file: ConfigFile = serde_json::from_str(text)?;
    file.to_config()
}

pub fn load_config(path: &Path) -> CliResult<NetworkConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    A,
    B,
    C,
}

impl Preset {
    pub fn source(self) -> &'static str {
        match self {
            Preset::A => include_str!("../presets/cfg_a.json"),
            Preset::B => include_str!("../presets/cfg_b.json"),
            Preset::C => include_str!("../presets/cfg_c.json"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::A => "cfg_a",
            Preset::B => "cfg_b",
            Preset::C => "cfg_c",
        }
    }

    pub fn config(self) -> NetworkConfig {
        parse_config(self.source()).expect("bundled presets are valid")
    }
}
