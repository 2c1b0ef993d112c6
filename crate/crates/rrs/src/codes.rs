//! Code presets and alist files.

use std::path::Path;

use rrs_core::LdpcCode;

use crate::{alist, Error, Result};

pub const HAMMING74: &str = "hamming74";
pub const DVBS2_R12: &str = "dvbs2-r12-64800";

/// Resolves a preset name or an alist file path.
pub fn load_code(source: &str) -> Result<LdpcCode> {
    match source {
        HAMMING74 => Ok(LdpcCode::hamming74()),
        DVBS2_R12 => Ok(LdpcCode::dvbs2_rate_1_2()),
        path if Path::new(path).is_file() => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            alist::parse(&text).map_err(|e| match e {
                Error::Alist { line, message } => Error::Validation(format!("{path}:{line}: {message}")),
                other => other,
            })
        }
        other => Err(Error::Validation(format!(
            "unknown code {other:?}: expected {HAMMING74}, {DVBS2_R12} or an alist file"
        ))),
    }
}
