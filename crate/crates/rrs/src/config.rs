//! TOML run configuration.
//!
//! Every key is optional; a flag given on the command line wins over the
//! file, which wins over the built-in defaults. Unknown keys are rejected.
//!
//! ```toml
//! out_dir = "results"
//! seed = 7
//! workers = 4
//! constellation = "pam4"
//! snr = "-25:15:0.25"          # or [1.0, 2.0, 3.0]
//! schemes = ["direct", "hard", "rrs"]
//! configs = ["base", "alternating"]
//! alpha = [0.65, 1.0]          # or a single number
//! code = "dvbs2-r12-64800"     # or an alist path
//! frames = 200
//! max_iterations = 100
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum SnrValue {
    Text(String),
    List(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    pub fn into_vec(self) -> Vec<f64> {
        match self {
            Self::One(v) => vec![v],
            Self::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub out_dir: Option<PathBuf>,
    pub log_level: Option<String>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub constellation: Option<String>,
    pub snr: Option<SnrValue>,
    pub schemes: Option<Vec<String>>,
    pub configs: Option<Vec<String>>,
    pub alpha: Option<OneOrMany>,
    pub code: Option<String>,
    pub frames: Option<u64>,
    pub max_iterations: Option<usize>,
    pub early_stop: Option<bool>,
    pub mi_targets: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub bins: Option<usize>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Validation(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
    }
}
