//! Flat key-value configuration files and scenario validation.
//!
//! Format: one `key = value` pair per line, `#` starts a comment, blank lines
//! ignored. Values are bare tokens (no quoting). Unknown keys are rejected so
//! typos fail loudly.

use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid configuration:\n{}", .0.join("\n"))]
    Invalid(Vec<String>),
}

/// Substrate selector for a plate.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum SubstrateSpec {
    /// Bundled silica-like optical table.
    #[default]
    Silica,
    /// No substrate response (eps = 1).
    Vacuum,
    /// Path to a three-column optical table file.
    Path(String),
}

/// Raw scenario parameters in laboratory units. `validate` checks ranges and
/// cross-field constraints; downstream code converts to SI.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub separation_um: f64,
    pub t1_k: f64,
    pub t2_k: f64,
    pub tenv_k: f64,
    pub delta_ev: f64,
    pub mu_ev: f64,
    pub vf_over_c: f64,
    pub substrate: SubstrateSpec,
    pub coated1: bool,
    pub coated2: bool,
    /// The standard setup keeps plate 1 at the environment temperature; this
    /// flag allows deliberately breaking that for exploratory runs.
    pub allow_t1_tenv_mismatch: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            separation_um: 0.5,
            t1_k: 300.0,
            t2_k: 300.0,
            tenv_k: 300.0,
            delta_ev: 0.1,
            mu_ev: 0.0,
            vf_over_c: crate::constants::VF_OVER_C_DEFAULT,
            substrate: SubstrateSpec::Silica,
            coated1: true,
            coated2: true,
            allow_t1_tenv_mismatch: false,
        }
    }
}

fn parse_bool(v: &str) -> Option<bool> {
    match v {
        "true" | "yes" | "1" | "on" => Some(true),
        "false" | "no" | "0" | "off" => Some(false),
        _ => None,
    }
}

/// Parse the flat key-value text into a map, keeping line numbers for errors.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, (usize, String)>, ConfigError> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if stripped.is_empty() {
            continue;
        }
        let Some((key, value)) = stripped.split_once('=') else {
            return Err(ConfigError::Parse {
                line,
                msg: format!("expected key = value, got {stripped:?}"),
            });
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if value.is_empty() {
            return Err(ConfigError::Parse {
                line,
                msg: format!("empty value for key {key:?}"),
            });
        }
        if map.insert(key.clone(), (line, value)).is_some() {
            return Err(ConfigError::Parse {
                line,
                msg: format!("duplicate key {key:?}"),
            });
        }
    }
    Ok(map)
}

impl ScenarioConfig {
    pub fn from_text(text: &str) -> Result<ScenarioConfig, ConfigError> {
        let map = parse_key_values(text)?;
        let mut cfg = ScenarioConfig::default();
        let mut coated_both: Option<bool> = None;
        let mut coated1: Option<bool> = None;
        let mut coated2: Option<bool> = None;

        for (key, (line, value)) in &map {
            let bad_num = |what: &str| ConfigError::Parse {
                line: *line,
                msg: format!("key {key:?}: expected a {what}, got {value:?}"),
            };
            let num = || -> Result<f64, ConfigError> {
                value.parse::<f64>().map_err(|_| bad_num("number"))
            };
            match key.as_str() {
                "separation_um" => cfg.separation_um = num()?,
                "t1_K" => cfg.t1_k = num()?,
                "t2_K" => cfg.t2_k = num()?,
                "tenv_K" => cfg.tenv_k = num()?,
                "delta_eV" => cfg.delta_ev = num()?,
                "mu_eV" => cfg.mu_ev = num()?,
                "vf_over_c" => cfg.vf_over_c = num()?,
                "substrate" => {
                    cfg.substrate = match value.as_str() {
                        "silica" => SubstrateSpec::Silica,
                        "vacuum" => SubstrateSpec::Vacuum,
                        path => SubstrateSpec::Path(path.to_string()),
                    }
                }
                "coated" => coated_both = Some(parse_bool(value).ok_or_else(|| bad_num("bool"))?),
                "coated1" => coated1 = Some(parse_bool(value).ok_or_else(|| bad_num("bool"))?),
                "coated2" => coated2 = Some(parse_bool(value).ok_or_else(|| bad_num("bool"))?),
                "allow_t1_tenv_mismatch" => {
                    cfg.allow_t1_tenv_mismatch =
                        parse_bool(value).ok_or_else(|| bad_num("bool"))?
                }
                other => {
                    return Err(ConfigError::Parse {
                        line: *line,
                        msg: format!("unknown key {other:?}"),
                    })
                }
            }
        }
        if let Some(b) = coated_both {
            cfg.coated1 = b;
            cfg.coated2 = b;
        }
        if let Some(b) = coated1 {
            cfg.coated1 = b;
        }
        if let Some(b) = coated2 {
            cfg.coated2 = b;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Check every invariant and report all violations at once.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut errs = Vec::new();
        if !(self.separation_um.is_finite() && self.separation_um > 0.0) {
            errs.push(format!(
                "separation_um: must be positive, got {}",
                self.separation_um
            ));
        } else if !(0.05..=10.0).contains(&self.separation_um) {
            errs.push(format!(
                "separation_um: {} outside the supported range [0.05, 10] (µm)",
                self.separation_um
            ));
        }
        for (name, t) in [
            ("t1_K", self.t1_k),
            ("t2_K", self.t2_k),
            ("tenv_K", self.tenv_k),
        ] {
            if !(t.is_finite() && t > 0.0) {
                errs.push(format!("{name}: temperature must be positive, got {t}"));
            }
        }
        if !(self.delta_ev.is_finite() && self.delta_ev >= 0.0) {
            errs.push(format!(
                "delta_eV: must be finite and non-negative, got {}",
                self.delta_ev
            ));
        }
        if !(self.mu_ev.is_finite() && self.mu_ev >= 0.0) {
            errs.push(format!(
                "mu_eV: must be finite and non-negative, got {}",
                self.mu_ev
            ));
        }
        if !(self.vf_over_c > 0.0 && self.vf_over_c < 1.0) {
            errs.push(format!(
                "vf_over_c: must lie in (0, 1), got {}",
                self.vf_over_c
            ));
        }
        if !self.allow_t1_tenv_mismatch && self.t1_k != self.tenv_k {
            errs.push(format!(
                "t1_K = {} must equal tenv_K = {} (set allow_t1_tenv_mismatch = true to override)",
                self.t1_k, self.tenv_k
            ));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(errs))
        }
    }

    pub fn separation_m(&self) -> f64 {
        crate::units::um_to_m(self.separation_um)
    }
}
