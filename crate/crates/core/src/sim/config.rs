//! Plain-text `key = value` configuration files.
//!
//! One experiment per file; every run records its configuration in the
//! output header so each CSV is self-describing.

use crate::distribution::DegreeDistribution;
use crate::sim::{
    ChannelChoice, CodeSpec, ErrorScope, ExperimentConfig, StopRule, Sweep, Transmission,
};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    BadLine { line: usize },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}`: {message}")]
    BadValue { key: String, message: String },
    #[error("missing key `{0}`")]
    Missing(String),
    #[error("{0}")]
    Invalid(String),
}

/// Parsed `key = value` file with typed accessors; consumed keys are
/// tracked so leftovers can be rejected.
#[derive(Debug, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
    consumed: std::cell::RefCell<Vec<String>>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut values = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or(ConfigError::BadLine { line: no + 1 })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if values.insert(key.clone(), value).is_some() {
                return Err(ConfigError::DuplicateKey { line: no + 1, key });
            }
        }
        Ok(Self { values, consumed: Default::default() })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        let hit = self.values.get(key).map(String::as_str);
        if hit.is_some() {
            self.consumed.borrow_mut().push(key.to_string());
        }
        hit
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|e| ConfigError::BadValue {
                key: key.to_string(),
                message: e.to_string(),
            }),
        }
    }

    pub fn require<T: std::str::FromStr>(&self, key: &str) -> Result<T, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)?.ok_or_else(|| ConfigError::Missing(key.to_string()))
    }

    pub fn get_str(&self, key: &str) -> Option<String> {
        self.raw(key).map(str::to_string)
    }

    /// Comma-separated list of `T`.
    pub fn get_list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<T>().map_err(|e| ConfigError::BadValue {
                        key: key.to_string(),
                        message: format!("`{tok}`: {e}"),
                    })
                })
                .collect::<Result<Vec<T>, _>>()
                .map(Some),
        }
    }

    /// Errors when any key was never consumed (typo safety).
    pub fn finish(&self) -> Result<(), ConfigError> {
        let consumed = self.consumed.borrow();
        for key in self.values.keys() {
            if !consumed.contains(key) {
                return Err(ConfigError::UnknownKey(key.clone()));
            }
        }
        Ok(())
    }
}

/// `degree:fraction` pairs, e.g. `2:0.30013,3:0.28395,8:0.41592`.
fn parse_lambda(text: &str) -> Result<DegreeDistribution, ConfigError> {
    let mut pairs = Vec::new();
    for tok in text.split(',') {
        let (d, f) = tok.trim().split_once(':').ok_or_else(|| ConfigError::BadValue {
            key: "lambda".into(),
            message: format!("`{tok}` is not degree:fraction"),
        })?;
        let degree: usize = d.trim().parse().map_err(|e| ConfigError::BadValue {
            key: "lambda".into(),
            message: format!("degree `{d}`: {e}"),
        })?;
        let fraction: f64 = f.trim().parse().map_err(|e| ConfigError::BadValue {
            key: "lambda".into(),
            message: format!("fraction `{f}`: {e}"),
        })?;
        pairs.push((degree, fraction));
    }
    DegreeDistribution::new(&pairs)
        .map_err(|e| ConfigError::BadValue { key: "lambda".into(), message: e.to_string() })
}

/// Code construction selection shared by `construct` and `simulate`.
pub fn code_spec_from(file: &ConfigFile) -> Result<(CodeSpec, DegreeDistribution, u64), ConfigError> {
    let lambda = match file.get_str("lambda") {
        Some(text) => parse_lambda(&text)?,
        None => DegreeDistribution::de_optimized_max8(),
    };
    let construction_seed: u64 = file.get("construction_seed")?.unwrap_or(0);
    let kind = file.get_str("kind").unwrap_or_else(|| "general".to_string());
    let construction =
        file.get_str("construction").unwrap_or_else(|| "multipath-emd".to_string());
    let spec = match kind.as_str() {
        "general" => CodeSpec::General {
            n: file.require("n")?,
            m: file.require("m")?,
            construction,
        },
        "qc" => CodeSpec::Qc {
            n: file.require("n")?,
            m: file.require("m")?,
            q: file.require("q")?,
            construction,
        },
        "ira" => CodeSpec::Ira {
            n: file.require("n")?,
            m: file.require("m")?,
            construction,
        },
        "diversity" => CodeSpec::Diversity {
            f: file.require("f")?,
            n: file.require("n")?,
            k: file.get("k")?,
            punctured: file.get::<bool>("puncture")?.unwrap_or(false),
            construction,
        },
        "alist" => CodeSpec::Alist {
            path: file
                .get_str("alist")
                .ok_or_else(|| ConfigError::Missing("alist".to_string()))?,
            layout: file.get_str("layout"),
        },
        other => {
            return Err(ConfigError::BadValue {
                key: "kind".into(),
                message: format!("unknown code kind `{other}`"),
            })
        }
    };
    Ok((spec, lambda, construction_seed))
}

/// Assembles a full experiment description from a parsed file.
pub fn experiment_from(file: &ConfigFile) -> Result<ExperimentConfig, ConfigError> {
    let (code, lambda, construction_seed) = code_spec_from(file)?;

    let channel = match file.get_str("channel").as_deref() {
        Some("bec") | None => ChannelChoice::Bec,
        Some("awgn") => ChannelChoice::Awgn,
        Some("block-fading") => ChannelChoice::BlockFading {
            rayleigh_scale: file.get("rayleigh_scale")?.unwrap_or(0.5),
        },
        Some("fast-fading") => ChannelChoice::FastFading {
            rayleigh_scale: file.get("rayleigh_scale")?.unwrap_or(0.5),
        },
        Some(other) => {
            return Err(ConfigError::BadValue {
                key: "channel".into(),
                message: format!("unknown channel `{other}`"),
            })
        }
    };

    let erasure_probs: Option<Vec<f64>> = file.get_list("erasure_probs")?;
    let snr_points: Option<Vec<f64>> = file.get_list("snr_db_points")?;
    let caps: Option<Vec<usize>> = file.get_list("iter_caps")?;
    let sweep = match (erasure_probs, snr_points, caps) {
        (Some(probs), None, None) => Sweep::Erasure(probs),
        (None, Some(points), None) => Sweep::SnrDb(points),
        (None, None, Some(caps)) => {
            Sweep::IterCaps { snr_db: file.require("snr_db")?, caps }
        }
        _ => {
            return Err(ConfigError::Invalid(
                "exactly one of erasure_probs, snr_db_points, iter_caps required".into(),
            ))
        }
    };

    let scope = match file.get_str("scope").as_deref() {
        Some("frame") | None => ErrorScope::Frame,
        Some("systematic") => ErrorScope::Systematic,
        Some(other) => {
            return Err(ConfigError::BadValue {
                key: "scope".into(),
                message: format!("unknown scope `{other}`"),
            })
        }
    };
    let transmission = match file.get_str("transmission").as_deref() {
        Some("random") | None => Transmission::RandomMessage,
        Some("all-zero") => Transmission::AllZero,
        Some(other) => {
            return Err(ConfigError::BadValue {
                key: "transmission".into(),
                message: format!("unknown transmission `{other}`"),
            })
        }
    };

    let stop = StopRule {
        min_frame_errors: file.get("min_frame_errors")?.unwrap_or(100),
        max_trials: file.get("max_trials")?.unwrap_or(1_000_000),
        allow_low_frame_errors: file.get("allow_low_frame_errors")?.unwrap_or(false),
    };

    let cfg = ExperimentConfig {
        code,
        lambda,
        construction_seed,
        channel,
        fades: file.get("fades")?,
        sweep,
        max_iter: file.get("max_iter")?.unwrap_or(40),
        stop,
        scope,
        transmission,
        seed: file.get("seed")?.unwrap_or(1),
    };
    file.finish()?;
    cfg.validate().map_err(ConfigError::Invalid)?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_bec_experiment() {
        let text = "kind = general\nn = 20\nm = 10\nerasure_probs = 0.1,0.2\n\
                    min_frame_errors = 25\nmax_trials = 1000\nseed = 3\n";
        let file = ConfigFile::parse(text).unwrap();
        let cfg = experiment_from(&file).unwrap();
        assert_eq!(cfg.seed, 3);
        assert!(matches!(cfg.sweep, Sweep::Erasure(ref p) if p.len() == 2));
    }

    #[test]
    fn unknown_key_rejected() {
        let text = "kind = general\nn = 20\nm = 10\nerasure_probs = 0.1\ntypo_key = 1\n";
        let file = ConfigFile::parse(text).unwrap();
        assert!(matches!(experiment_from(&file), Err(ConfigError::UnknownKey(_))));
    }

    #[test]
    fn low_frame_error_floor_needs_override() {
        let text = "kind = general\nn = 20\nm = 10\nerasure_probs = 0.1\nmin_frame_errors = 5\n";
        let file = ConfigFile::parse(text).unwrap();
        assert!(experiment_from(&file).is_err());
        let text = format!("{text}allow_low_frame_errors = true\n");
        let file = ConfigFile::parse(&text).unwrap();
        assert!(experiment_from(&file).is_ok());
    }

    #[test]
    fn lambda_key_parses_pairs() {
        let text = "kind = general\nn = 20\nm = 10\nlambda = 2:0.5,3:0.5\nerasure_probs = 0.1\n";
        let file = ConfigFile::parse(text).unwrap();
        let cfg = experiment_from(&file).unwrap();
        assert_eq!(cfg.lambda.lambda().len(), 2);
    }
}
