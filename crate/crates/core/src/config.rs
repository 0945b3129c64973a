use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::DEFAULT_MAX_SERIES_ORDER;
use crate::quadrature::QuadConfig;

/// Settings read from a run configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub quad: QuadConfig,
    /// Terms per side of the moment series.
    pub max_series_order: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            quad: QuadConfig::default(),
            max_series_order: DEFAULT_MAX_SERIES_ORDER,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.quad.validate()?;
        if self.max_series_order < 32 {
            return Err(Error::Config(format!(
                "max_series_order must be at least 32, got {}",
                self.max_series_order
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_json_fills_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"quad":{"rel_tol":1e-8,"parallel":true}}"#).unwrap();
        assert_eq!(c.quad.rel_tol, 1e-8);
        assert!(c.quad.parallel);
        assert_eq!(c.quad.abs_tol, QuadConfig::default().abs_tol);
        assert_eq!(c.max_series_order, DEFAULT_MAX_SERIES_ORDER);
        c.validate().unwrap();
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"quad":{"tolerance":1}}"#).is_err());
        let c: RunConfig = serde_json::from_str(r#"{"max_series_order":4}"#).unwrap();
        assert!(c.validate().is_err());
    }
}
