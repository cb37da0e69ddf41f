//! JSON config file for the economic scenario.
//!
//! Every key is optional; omitted keys fall back to the defaults baked into
//! `EconomicConfig::default()`. Unknown keys are rejected so typos do not
//! silently change a study.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use upcycle_core::{ConfigError, EconomicConfig};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigFile {
    pub start_year: i32,
    pub end_year: i32,
    pub energy_price_usd_per_kwh: f64,
    pub hours_per_year: f64,
    pub baseline_server_id: String,
}

impl Default for ConfigFile {
    fn default() -> Self {
        ConfigFile::from(&EconomicConfig::default())
    }
}

impl From<&EconomicConfig> for ConfigFile {
    fn from(cfg: &EconomicConfig) -> Self {
        ConfigFile {
            start_year: cfg.start_year,
            end_year: cfg.end_year,
            energy_price_usd_per_kwh: cfg.energy_price,
            hours_per_year: cfg.hours_per_year,
            baseline_server_id: cfg.baseline_server_id.clone(),
        }
    }
}

impl ConfigFile {
    pub fn into_config(self) -> Result<EconomicConfig, ConfigError> {
        let cfg = EconomicConfig {
            start_year: self.start_year,
            end_year: self.end_year,
            energy_price: self.energy_price_usd_per_kwh,
            hours_per_year: self.hours_per_year,
            baseline_server_id: self.baseline_server_id,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Error)]
pub enum ConfigFileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Invalid(#[from] ConfigError),
}

pub fn load_config(path: &Path) -> Result<EconomicConfig, ConfigFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: ConfigFile =
        serde_json::from_str(&text).map_err(|source| ConfigFileError::Parse {
            path: path.display().to_string(),
            source,
        })?;
    Ok(file.into_config()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_yields_defaults() {
        let file: ConfigFile = serde_json::from_str("{}").unwrap();
        let cfg = file.into_config().unwrap();
        assert_eq!(cfg, EconomicConfig::default());
        assert_eq!(cfg.start_year, 2010);
        assert_eq!(cfg.end_year, 2022);
        assert_eq!(cfg.energy_price, 0.10);
        assert_eq!(cfg.hours_per_year, 8760.0);
        assert_eq!(cfg.baseline_server_id, "A");
    }

    #[test]
    fn partial_overrides_keep_other_defaults() {
        let file: ConfigFile =
            serde_json::from_str(r#"{"energy_price_usd_per_kwh": 0.30}"#).unwrap();
        let cfg = file.into_config().unwrap();
        assert_eq!(cfg.energy_price, 0.30);
        assert_eq!(cfg.start_year, 2010);
        assert_eq!(cfg.baseline_server_id, "A");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = serde_json::from_str::<ConfigFile>(r#"{"energy_price": 0.30}"#).unwrap_err();
        assert!(err.to_string().contains("energy_price"), "{err}");
    }

    #[test]
    fn invalid_horizon_is_rejected_on_conversion() {
        let file: ConfigFile =
            serde_json::from_str(r#"{"start_year": 2022, "end_year": 2010}"#).unwrap();
        let err = file.into_config().unwrap_err();
        assert!(matches!(err, ConfigError::EmptyHorizon { .. }), "{err}");
    }

    #[test]
    fn round_trips_through_json() {
        let cfg = EconomicConfig {
            start_year: 2011,
            end_year: 2020,
            energy_price: 0.25,
            hours_per_year: 8000.0,
            baseline_server_id: "B".to_string(),
        };
        let text = serde_json::to_string(&ConfigFile::from(&cfg)).unwrap();
        let back = serde_json::from_str::<ConfigFile>(&text)
            .unwrap()
            .into_config()
            .unwrap();
        assert_eq!(back, cfg);
    }
}
