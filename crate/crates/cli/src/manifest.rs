use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::args::{Command, Format, Global};
use crate::error::CliError;

pub const TOOL: &str = "mindist";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Numeric regime behind a result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeInfo {
    /// `exact`, `log-domain` or `monte-carlo`.
    pub regime: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digits: Option<u32>,
}

impl RegimeInfo {
    pub fn exact() -> Self {
        RegimeInfo {
            regime: "exact".into(),
            digits: None,
        }
    }

    pub fn log(digits: u32) -> Self {
        RegimeInfo {
            regime: "log-domain".into(),
            digits: Some(digits),
        }
    }

    pub fn monte_carlo() -> Self {
        RegimeInfo {
            regime: "monte-carlo".into(),
            digits: None,
        }
    }
}

/// Everything needed to reproduce a run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub parameters: Command,
    pub format: Format,
    pub digits: u32,
    pub budget: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    pub workers: usize,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<RegimeInfo>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        // check the version before the parameters, whose schema may differ
        let raw: serde_json::Value = serde_json::from_str(&text)?;
        let field = |k: &str| raw.get(k).and_then(|v| v.as_str()).unwrap_or("?").to_string();
        let (tool, version) = (field("tool"), field("version"));
        if tool != TOOL || version != VERSION {
            return Err(CliError::Version {
                found: format!("{tool} {version}"),
                expected: format!("{TOOL} {VERSION}"),
            });
        }
        Ok(serde_json::from_value(raw)?)
    }

    /// Options the recorded run used.
    pub fn global(&self) -> Global {
        Global {
            format: Some(self.format),
            workers: Some(self.workers),
            digits: self.digits,
            budget: self.budget,
            manifest: None,
        }
    }
}
