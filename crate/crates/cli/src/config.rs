//! Defaults read from the TOML file named by `CAPMARKOV_CONFIG`.

use std::path::Path;

use capmarkov::Tolerances;
use serde::Deserialize;

use crate::error::CliError;

pub const CONFIG_ENV: &str = "CAPMARKOV_CONFIG";

/// Every key is optional; command-line flags win over file values.
///
/// ```toml
/// seed = 7
/// n = 64
/// [tolerances]
/// verify_search = 0.04
/// ```
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub level: Option<f64>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub candidates: Option<usize>,
    pub trials: Option<usize>,
    pub tolerances: Option<Tolerances>,
}

impl FileConfig {
    pub fn from_env() -> Result<Self, CliError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) if !path.is_empty() => Self::read(Path::new(&path)),
            _ => Ok(Self::default()),
        }
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let config: FileConfig =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if let Some(t) = &config.tolerances {
            t.validate()
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        }
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_tolerance_table() {
        let c: FileConfig = toml::from_str("seed = 3\n[tolerances]\nverify_search = 0.04\n").unwrap();
        assert_eq!(c.seed, Some(3));
        let t = c.tolerances.unwrap();
        assert_eq!(t.verify_search, 0.04);
        assert_eq!(t.root, Tolerances::default().root);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("sead = 3\n").is_err());
    }
}
