//! CSV tables and the JSON-lines run log.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::harness::{AuditRow, BerPoint, MiRow, SnrAtMiRow};
use crate::{Error, Result};

pub const MI_HEADER: [&str; 5] = ["snr_db", "scheme", "config", "mi_bits", "err_est"];
pub const SNR_AT_MI_HEADER: [&str; 3] = ["mi_bits", "scheme", "snr_db"];
pub const BER_HEADER: [&str; 10] = [
    "snr_db",
    "scheme",
    "config",
    "alpha",
    "frames",
    "bit_errors",
    "ber",
    "ber_ci_lo",
    "ber_ci_hi",
    "fer",
];
pub const AUDIT_HEADER: [&str; 7] = [
    "snr_db",
    "config",
    "leakage_bits",
    "transcript_mi_bits",
    "ks_min_p",
    "draws",
    "pass",
];

#[derive(Serialize)]
struct BerCsvRow<'a> {
    snr_db: f64,
    scheme: &'a str,
    config: &'a str,
    alpha: Option<f64>,
    frames: u64,
    bit_errors: u64,
    ber: f64,
    ber_ci_lo: f64,
    ber_ci_hi: f64,
    fer: f64,
}

/// Writes `header` and then one record per row; the header is present even
/// when there are no rows.
pub fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: impl IntoIterator<Item = T>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(BufWriter::new(file));
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn write_mi(path: &Path, rows: &[MiRow]) -> Result<()> {
    write_csv(path, &MI_HEADER, rows)
}

pub fn write_snr_at_mi(path: &Path, rows: &[SnrAtMiRow]) -> Result<()> {
    write_csv(path, &SNR_AT_MI_HEADER, rows)
}

pub fn write_ber(path: &Path, points: &[BerPoint]) -> Result<()> {
    write_csv(
        path,
        &BER_HEADER,
        points.iter().map(|p| {
            let (lo, hi) = p.ber_interval();
            BerCsvRow {
                snr_db: p.snr_db,
                scheme: p.scheme,
                config: &p.config,
                alpha: p.alpha,
                frames: p.frames,
                bit_errors: p.bit_errors,
                ber: p.ber(),
                ber_ci_lo: lo,
                ber_ci_hi: hi,
                fer: p.fer(),
            }
        }),
    )
}

pub fn write_audit(path: &Path, rows: &[AuditRow]) -> Result<()> {
    write_csv(path, &AUDIT_HEADER, rows)
}

/// `run.jsonl`: one JSON object per line, no timestamps, so that reruns are
/// byte-identical.
pub struct RunLog {
    path: PathBuf,
    out: BufWriter<File>,
}

impl RunLog {
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        Ok(Self {
            path: path.to_path_buf(),
            out: BufWriter::new(file),
        })
    }

    pub fn record<T: Serialize>(&mut self, event: &str, payload: &T) -> Result<()> {
        let line = serde_json::json!({ "event": event, "data": payload });
        serde_json::to_writer(&mut self.out, &line)?;
        self.out.write_all(b"\n").map_err(|e| Error::io(&self.path, e))?;
        self.out.flush().map_err(|e| Error::io(&self.path, e))
    }
}
