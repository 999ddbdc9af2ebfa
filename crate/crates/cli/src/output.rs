//! The JSON result document and its persistence.

use std::fmt;
use std::path::{Path, PathBuf};

use linthresh::census::CensusError;
use linthresh::ehrhart::EhrhartError;
use linthresh::simulate::SimulationError;
use linthresh::structure::StructureError;
use linthresh::system::SystemError;
use linthresh::{AdmissibilityReport, Family, LinearSystem};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_NOT_ADMISSIBLE: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_FIT: u8 = 5;

/// An error with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(EXIT_PARSE, message)
    }

    pub fn not_admissible(system: &LinearSystem) -> Self {
        Self::new(
            EXIT_NOT_ADMISSIBLE,
            format!(
                "system is not admissible: {}",
                system.admissibility().violation().unwrap_or_default()
            ),
        )
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<SystemError> for CliError {
    fn from(err: SystemError) -> Self {
        Self::parse(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        Self::new(EXIT_FAILURE, err.to_string())
    }
}

impl From<StructureError> for CliError {
    fn from(err: StructureError) -> Self {
        let code = match err {
            StructureError::CapExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_FAILURE,
        };
        Self::new(code, err.to_string())
    }
}

impl From<EhrhartError> for CliError {
    fn from(err: EhrhartError) -> Self {
        let code = match err {
            EhrhartError::Budget(_) => EXIT_BUDGET,
            EhrhartError::FitFailed { .. } => EXIT_FIT,
            EhrhartError::NotAdmissible(_) => EXIT_NOT_ADMISSIBLE,
            _ => EXIT_FAILURE,
        };
        Self::new(code, err.to_string())
    }
}

impl From<CensusError> for CliError {
    fn from(err: CensusError) -> Self {
        match err {
            CensusError::Budget(_) => Self::new(EXIT_BUDGET, err.to_string()),
            CensusError::NotAdmissible(_) => Self::new(EXIT_NOT_ADMISSIBLE, err.to_string()),
            CensusError::Structure(inner) => inner.into(),
        }
    }
}

impl From<SimulationError> for CliError {
    fn from(err: SimulationError) -> Self {
        match err {
            SimulationError::Structure(inner) => inner.into(),
            SimulationError::Ehrhart(inner) => inner.into(),
            SimulationError::Census(inner) => inner.into(),
            SimulationError::InvalidConfig(msg) => Self::parse(msg),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SystemInfo<'a> {
    pub name: Option<&'a str>,
    pub family: Option<Family>,
    pub r: usize,
    pub m: usize,
    pub rows: &'a [Vec<i64>],
    pub admissibility: &'a AdmissibilityReport,
}

impl<'a> SystemInfo<'a> {
    pub fn of(system: &'a LinearSystem) -> Self {
        Self {
            name: system.name(),
            family: system.family(),
            r: system.r(),
            m: system.m(),
            rows: system.integer_rows(),
            admissibility: system.admissibility(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Document<'a, C: Serialize, R: Serialize> {
    pub command: &'a str,
    pub config: C,
    pub system: SystemInfo<'a>,
    pub results: R,
    pub seed: Option<u64>,
    pub version: &'static str,
    /// Seconds; `None` when suppressed for reproducible documents.
    pub wall_time: Option<f64>,
}

impl<C: Serialize, R: Serialize> Document<'_, C, R> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result documents serialize")
    }

    /// `command-<hash>.json`, the hash covering the command, configuration,
    /// system and seed.
    pub fn file_name(&self) -> String {
        let key = serde_json::json!({
            "command": self.command,
            "config": &self.config,
            "system": &self.system,
            "seed": self.seed,
        });
        let digest = Sha256::digest(key.to_string().as_bytes());
        format!("{}-{}.json", self.command, &hex::encode(digest)[..16])
    }

    pub fn persist(&self, dir: &Path) -> Result<PathBuf, CliError> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(self.file_name());
        std::fs::write(&path, self.to_json() + "\n")?;
        Ok(path)
    }
}

/// A report field that may be skipped when a cap or budget is hit.
#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Field<T> {
    Value(T),
    Skipped { skipped: String },
}

impl<T> Field<T> {
    pub fn from_result<E: fmt::Display>(result: Result<T, E>) -> Self {
        match result {
            Ok(value) => Field::Value(value),
            Err(err) => Field::Skipped {
                skipped: err.to_string(),
            },
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Field::Value(v) => Some(v),
            Field::Skipped { .. } => None,
        }
    }
}
