//! Mutual-information sweeps and SNR-at-fixed-MI tables.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rrs_core::infotheory::{mi_direct, mi_hard, mi_rrs, Scheme};
use rrs_core::{MonotonicityConfig, QuadratureOptions, SofteningTransform};
use serde::Serialize;

use super::{pool, ConstellationSpec, SnrGrid};
use crate::interp::Pchip;
use crate::{Error, Result};

/// Mutual-information levels of the classic PAM-4 comparison table.
pub const TABLE_MI_TARGETS: [f64; 6] = [1.75, 1.0, 0.75, 0.3, 0.1, 0.01];

#[derive(Debug, Clone)]
pub struct MiSpec {
    pub constellation: ConstellationSpec,
    pub snr: SnrGrid,
    pub schemes: Vec<Scheme>,
    /// Used by the `rrs` scheme.
    pub configs: Vec<MonotonicityConfig>,
    pub workers: usize,
    pub quadrature: QuadratureOptions,
}

/// One row of `mi.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MiRow {
    pub snr_db: f64,
    pub scheme: &'static str,
    pub config: String,
    pub mi_bits: f64,
    pub err_est: f64,
}

impl MiRow {
    /// `scheme` or `scheme:config`.
    pub fn series(&self) -> String {
        if self.config.is_empty() {
            self.scheme.to_string()
        } else {
            format!("{}:{}", self.scheme, self.config)
        }
    }
}

/// One row of `snr_at_mi.csv`; `snr_db` is `None` when the target lies
/// outside the swept range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnrAtMiRow {
    pub mi_bits: f64,
    pub scheme: String,
    pub snr_db: Option<f64>,
}

fn point_rows(spec: &MiSpec, snr_db: f64) -> Result<Vec<MiRow>> {
    let channel = spec.constellation.channel(snr_db)?;
    let scale = spec.constellation.dimensions() as f64;
    let regions = channel.constellation().map_decision_regions(channel.noise_variance())?;
    let mut rows = Vec::new();
    let mut push = |scheme: Scheme, config: String, bits: f64, err: f64| {
        rows.push(MiRow {
            snr_db,
            scheme: scheme.as_str(),
            config,
            mi_bits: scale * bits,
            err_est: scale * err,
        })
    };
    for &scheme in &spec.schemes {
        match scheme {
            Scheme::Direct => {
                let v = mi_direct(&channel, &spec.quadrature)?;
                push(scheme, String::new(), v.bits, v.error_estimate);
            }
            Scheme::Hard => {
                let v = mi_hard(&channel, &regions);
                push(scheme, String::new(), v.bits, v.error_estimate);
            }
            Scheme::Rrs => {
                for config in &spec.configs {
                    let t = SofteningTransform::with_regions(channel.clone(), regions.clone(), config.clone())?;
                    let v = mi_rrs(&t, &spec.quadrature)?;
                    push(scheme, config.to_sign_string(), v.bits, v.error_estimate);
                }
            }
        }
    }
    Ok(rows)
}

/// Evaluates every scheme (and every configuration for `rrs`) at every
/// grid point. Rows come out grouped by SNR in grid order.
pub fn mi_sweep(spec: &MiSpec) -> Result<Vec<MiRow>> {
    spec.snr.validate()?;
    if spec.schemes.is_empty() {
        return Err(Error::Validation("no scheme selected".into()));
    }
    if spec.schemes.contains(&Scheme::Rrs) && spec.configs.is_empty() {
        return Err(Error::Validation("rrs scheme needs at least one configuration".into()));
    }
    let order = spec.constellation.component()?.order();
    if let Some(c) = spec.configs.iter().find(|c| c.len() != order) {
        return Err(Error::Validation(format!(
            "configuration {c} does not have {order} signs"
        )));
    }
    let workers = pool(spec.workers)?;
    let per_point: Vec<Vec<MiRow>> = workers.install(|| {
        spec.snr
            .points()
            .par_iter()
            .map(|&snr| point_rows(spec, snr))
            .collect::<Result<_>>()
    })?;
    Ok(per_point.into_iter().flatten().collect())
}

/// Inverts each series' MI(SNR) curve with a monotone cubic through the
/// sweep points.
///
/// Series with fewer than two points produce no rows. Quadrature noise can
/// make a saturated curve dip by ~1e-10; the running maximum is
/// interpolated so that the curve stays monotone.
pub fn snr_at_mi(rows: &[MiRow], targets: &[f64]) -> Vec<SnrAtMiRow> {
    let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    let mut order = Vec::new();
    for r in rows {
        let key = r.series();
        if !series.contains_key(&key) {
            order.push(key.clone());
        }
        series.entry(key).or_default().push((r.snr_db, r.mi_bits));
    }
    let mut out = Vec::new();
    for key in order {
        let mut points = series.remove(&key).unwrap_or_default();
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        points.dedup_by(|a, b| a.0 == b.0);
        let x: Vec<f64> = points.iter().map(|p| p.0).collect();
        let mut running = f64::NEG_INFINITY;
        let y: Vec<f64> = points
            .iter()
            .map(|p| {
                running = running.max(p.1);
                running
            })
            .collect();
        let Ok(curve) = Pchip::new(x, y) else {
            continue;
        };
        for &target in targets {
            out.push(SnrAtMiRow {
                mi_bits: target,
                scheme: key.clone(),
                snr_db: curve.solve_increasing(target),
            });
        }
    }
    out
}
