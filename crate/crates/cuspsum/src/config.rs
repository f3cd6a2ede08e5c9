//! Flat `key = value` configuration files. Command-line flags override
//! every key.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use ini::Ini;
use thiserror::Error;

use crate::windows::WindowMode;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: unknown key {key:?}")]
    UnknownKey { path: PathBuf, key: String },
    #[error("{path}: key {key:?} has invalid value {value:?}")]
    BadValue { path: PathBuf, key: String, value: String },
    #[error("{path}: sections are not supported ([{section}])")]
    Section { path: PathBuf, section: String },
}

/// Every setting a command may read. `None` means "not given".
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub weight: Option<u32>,
    pub n: Option<usize>,
    pub cache: Option<PathBuf>,
    pub grid: Option<String>,
    pub mode: Option<WindowMode>,
    pub delta: Option<f64>,
    pub y: Option<f64>,
    pub out: Option<PathBuf>,
    pub tolerance: Option<f64>,
    pub threads: Option<usize>,
}

fn parsed<T: FromStr>(path: &Path, key: &str, value: &str) -> Result<T, ConfigError> {
    value.trim().parse().map_err(|_| ConfigError::BadValue {
        path: path.to_owned(),
        key: key.to_owned(),
        value: value.to_owned(),
    })
}

impl Settings {
    pub fn from_ini_str(path: &Path, text: &str) -> Result<Self, ConfigError> {
        let ini = Ini::load_from_str(text).map_err(|e| ConfigError::Parse {
            path: path.to_owned(),
            message: e.to_string(),
        })?;
        let mut s = Settings::default();
        for (section, props) in ini.iter() {
            if let Some(name) = section {
                return Err(ConfigError::Section {
                    path: path.to_owned(),
                    section: name.to_owned(),
                });
            }
            for (key, value) in props.iter() {
                match key {
                    "weight" => s.weight = Some(parsed(path, key, value)?),
                    "n" => s.n = Some(parsed(path, key, value)?),
                    "cache" => s.cache = Some(PathBuf::from(value)),
                    "grid" => s.grid = Some(value.to_owned()),
                    "mode" => s.mode = Some(parsed(path, key, value)?),
                    "delta" => s.delta = Some(parsed(path, key, value)?),
                    "y" => s.y = Some(parsed(path, key, value)?),
                    "out" => s.out = Some(PathBuf::from(value)),
                    "tolerance" => s.tolerance = Some(parsed(path, key, value)?),
                    "threads" => s.threads = Some(parsed(path, key, value)?),
                    _ => {
                        return Err(ConfigError::UnknownKey {
                            path: path.to_owned(),
                            key: key.to_owned(),
                        })
                    }
                }
            }
        }
        Ok(s)
    }

    /// Values from `flags` win over `self`.
    pub fn overlay(self, flags: Settings) -> Settings {
        Settings {
            weight: flags.weight.or(self.weight),
            n: flags.n.or(self.n),
            cache: flags.cache.or(self.cache),
            grid: flags.grid.or(self.grid),
            mode: flags.mode.or(self.mode),
            delta: flags.delta.or(self.delta),
            y: flags.y.or(self.y),
            out: flags.out.or(self.out),
            tolerance: flags.tolerance.or(self.tolerance),
            threads: flags.threads.or(self.threads),
        }
    }
}
