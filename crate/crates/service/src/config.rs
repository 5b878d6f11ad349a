use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use vesa_core::query::{QueryOptions, SpatialMode};
use vesa_core::semantics::TokenizerConfig;

pub const PORT_ENV: &str = "VESA_PORT";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("{var}={value:?} is not a valid port")]
    Env { var: &'static str, value: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceConfig {
    #[serde(default = "default_port")]
    pub port: u16,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<PathBuf>,
    #[serde(default = "default_cloud_k")]
    pub cloud_k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tokenizer: Option<PathBuf>,
    /// Empty allows any origin.
    #[serde(default)]
    pub cors_origins: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sources: Option<PathBuf>,
    #[serde(default)]
    pub spatial_mode: SpatialMode,
    /// Bin budget for `/filter` histograms when no unit is requested.
    #[serde(default = "default_histogram_bins")]
    pub histogram_bins: usize,
}

fn default_port() -> u16 {
    8080
}

fn default_cloud_k() -> usize {
    100
}

fn default_histogram_bins() -> usize {
    400
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            port: default_port(),
            graph: None,
            cloud_k: default_cloud_k(),
            tokenizer: None,
            cors_origins: Vec::new(),
            sources: None,
            spatial_mode: SpatialMode::default(),
            histogram_bins: default_histogram_bins(),
        }
    }
}

impl ServiceConfig {
    /// Reads a config file. Relative paths inside it resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let invalid = |message: String| ConfigError::Invalid { path: path.display().to_string(), message };
        let text = fs::read_to_string(path).map_err(|e| invalid(e.to_string()))?;
        let mut config: ServiceConfig = serde_json::from_str(&text).map_err(|e| invalid(e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut config.graph, &mut config.tokenizer, &mut config.sources].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        config.validate().map_err(invalid)?;
        Ok(config)
    }

    pub fn apply_env(&mut self) -> Result<(), ConfigError> {
        if let Ok(value) = std::env::var(PORT_ENV) {
            self.port = value
                .trim()
                .parse::<u16>()
                .ok()
                .filter(|p| *p != 0)
                .ok_or(ConfigError::Env { var: PORT_ENV, value })?;
        }
        Ok(())
    }

    /// Checks values and that the tokenizer and sources files exist. The
    /// graph path is checked when it is loaded.
    pub fn validate(&self) -> Result<(), String> {
        if self.port == 0 {
            return Err("port must be in 1..=65535".into());
        }
        if self.cloud_k == 0 {
            return Err("cloud_k must be at least 1".into());
        }
        if self.histogram_bins == 0 {
            return Err("histogram_bins must be at least 1".into());
        }
        for path in [&self.tokenizer, &self.sources].into_iter().flatten() {
            if !path.is_file() {
                return Err(format!("{} does not exist", path.display()));
            }
        }
        Ok(())
    }

    pub fn tokenizer_config(&self) -> Result<TokenizerConfig, ConfigError> {
        let Some(path) = &self.tokenizer else {
            return Ok(TokenizerConfig::default());
        };
        let invalid = |message: String| ConfigError::Invalid { path: path.display().to_string(), message };
        let text = fs::read_to_string(path).map_err(|e| invalid(e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| invalid(e.to_string()))
    }

    pub fn query_options(&self) -> QueryOptions {
        QueryOptions { cloud_k: self.cloud_k, spatial_mode: self.spatial_mode }
    }
}
