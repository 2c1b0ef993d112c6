//! Coded bit-error-rate sweeps.

use rayon::prelude::*;
use rrs_core::metrics::HardDemapper;
use rrs_core::{BpDecoder, LdpcCode, MonotonicityConfig, SofteningTransform};
use serde::Serialize;

use super::protocol::{reconcile_direct, reconcile_hard, reconcile_rrs, FrameDraws};
use super::{pool, substream, ConstellationSpec, SnrGrid};
use crate::stats::{wilson_interval, Z_95};
use crate::{Error, Result};

/// A point stops early once it has this many bit errors...
pub const STOP_BIT_ERRORS: u64 = 100;
/// ...and this many frame errors.
pub const STOP_FRAME_ERRORS: u64 = 20;

/// Frames are simulated in fixed batches so that the stopping point, and
/// therefore the output, does not depend on the worker count.
const BATCH: u64 = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum Variant {
    /// Alice publishes her syndrome; Bob decodes from `y`.
    Direct,
    /// Bob publishes only his syndrome; Alice decodes from the discrete
    /// channel `P(X̂ | X)`.
    Hard,
    /// Bob publishes softened metrics and his syndrome.
    Rrs { config: MonotonicityConfig, alpha: f64 },
}

impl Variant {
    pub fn scheme(&self) -> &'static str {
        match self {
            Self::Direct => "direct",
            Self::Hard => "hard",
            Self::Rrs { .. } => "rrs",
        }
    }

    pub fn config_label(&self) -> String {
        match self {
            Self::Rrs { config, .. } => config.to_sign_string(),
            _ => String::new(),
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            Self::Rrs { alpha, .. } => Some(*alpha),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BerSpec {
    pub constellation: ConstellationSpec,
    pub snr: SnrGrid,
    pub variants: Vec<Variant>,
    /// Frames per point when the point does not stop early.
    pub frames: u64,
    pub max_iterations: usize,
    pub seed: u64,
    pub workers: usize,
    pub early_stop: bool,
}

impl BerSpec {
    pub fn validate(&self) -> Result<()> {
        self.snr.validate()?;
        if self.frames == 0 {
            return Err(Error::Validation("frames per point must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Validation("max iterations must be at least 1".into()));
        }
        if self.variants.is_empty() {
            return Err(Error::Validation("no scheme selected".into()));
        }
        for v in &self.variants {
            if let Some(a) = v.alpha() {
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::Validation(format!("alpha must be positive, got {a}")));
                }
            }
        }
        if self.workers == 0 {
            return Err(Error::Validation("workers must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameResult {
    pub frame: u64,
    pub bit_errors: u64,
    pub frame_error: bool,
    pub iterations: usize,
    pub converged: bool,
}

/// Aggregate over the frames of one (SNR, variant) point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerPoint {
    pub snr_db: f64,
    pub scheme: &'static str,
    pub config: String,
    pub alpha: Option<f64>,
    pub frames: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub converged_frames: u64,
    pub mean_iterations: f64,
    /// Fewer errors than the stop-early thresholds: the BER estimate rests
    /// on few events.
    pub undersampled: bool,
}

impl BerPoint {
    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / self.bits as f64
    }

    pub fn fer(&self) -> f64 {
        self.frame_errors as f64 / self.frames as f64
    }

    /// 95% Wilson interval on the BER.
    pub fn ber_interval(&self) -> (f64, f64) {
        wilson_interval(self.bit_errors, self.bits, Z_95)
    }
}

/// State shared by all frames of one SNR point.
struct PointModel {
    channel: rrs_core::ChannelModel,
    regions: rrs_core::DecisionRegions,
    hard: HardDemapper,
    dimensions: usize,
    max_iterations: usize,
    seed: u64,
    point: usize,
}

fn simulate_frame(
    code: &LdpcCode,
    decoder: &mut BpDecoder<'_>,
    model: &PointModel,
    transform: Option<&SofteningTransform>,
    variant: &Variant,
    frame: u64,
) -> Result<FrameResult> {
    let max_iterations = model.max_iterations;
    let mut rng = substream(model.seed, model.point, frame);
    let draws = FrameDraws::generate(&model.channel, code.n(), model.dimensions, &mut rng)?;
    let done = match variant {
        Variant::Direct => reconcile_direct(code, decoder, &model.channel, &draws, max_iterations)?,
        Variant::Hard => reconcile_hard(
            code,
            decoder,
            &model.channel,
            &model.regions,
            &model.hard,
            &draws,
            max_iterations,
        )?,
        Variant::Rrs { alpha, .. } => {
            let t = transform.expect("transform built for every rrs variant");
            reconcile_rrs(code, decoder, t, &draws, *alpha, max_iterations)?
        }
    };
    let bit_errors = done.bit_errors();
    Ok(FrameResult {
        frame,
        bit_errors,
        frame_error: bit_errors > 0,
        iterations: done.outcome.iterations,
        converged: done.outcome.converged,
    })
}

/// Runs every variant at every SNR point.
///
/// Frame `f` of point `p` draws its symbols and noise from
/// [`substream`]`(seed, p, f)` whatever the variant, so all schemes see the
/// same channel realisations.
pub fn ber_sweep(spec: &BerSpec, code: &LdpcCode) -> Result<Vec<BerPoint>> {
    spec.validate()?;
    let workers = pool(spec.workers)?;
    let dimensions = spec.constellation.dimensions();
    let mut out = Vec::new();
    for (point, &snr_db) in spec.snr.points().iter().enumerate() {
        let channel = spec.constellation.channel(snr_db)?;
        let regions = channel.constellation().map_decision_regions(channel.noise_variance())?;
        let hard = HardDemapper::new(&channel, &regions)?;
        let model = PointModel {
            channel,
            regions,
            hard,
            dimensions,
            max_iterations: spec.max_iterations,
            seed: spec.seed,
            point,
        };
        for variant in &spec.variants {
            let transform = match variant {
                Variant::Rrs { config, .. } => Some(SofteningTransform::with_regions(
                    model.channel.clone(),
                    model.regions.clone(),
                    config.clone(),
                )?),
                _ => None,
            };
            let mut acc = BerPoint {
                snr_db,
                scheme: variant.scheme(),
                config: variant.config_label(),
                alpha: variant.alpha(),
                frames: 0,
                bits: 0,
                bit_errors: 0,
                frame_errors: 0,
                converged_frames: 0,
                mean_iterations: 0.0,
                undersampled: false,
            };
            let mut iterations = 0u64;
            let mut start = 0;
            while start < spec.frames {
                let end = (start + BATCH).min(spec.frames);
                let batch: Vec<FrameResult> = workers.install(|| {
                    (start..end)
                        .into_par_iter()
                        .map_init(
                            || BpDecoder::new(code),
                            |decoder, frame| simulate_frame(code, decoder, &model, transform.as_ref(), variant, frame),
                        )
                        .collect::<Result<_>>()
                })?;
                for r in &batch {
                    acc.frames += 1;
                    acc.bits += code.n() as u64;
                    acc.bit_errors += r.bit_errors;
                    acc.frame_errors += r.frame_error as u64;
                    acc.converged_frames += r.converged as u64;
                    iterations += r.iterations as u64;
                }
                start = end;
                if spec.early_stop && acc.bit_errors >= STOP_BIT_ERRORS && acc.frame_errors >= STOP_FRAME_ERRORS {
                    break;
                }
            }
            acc.mean_iterations = iterations as f64 / acc.frames as f64;
            acc.undersampled = acc.bit_errors < STOP_BIT_ERRORS || acc.frame_errors < STOP_FRAME_ERRORS;
            log::info!(
                "snr {snr_db} dB {}{}{}: {} frames, BER {:.3e}, FER {:.3}",
                acc.scheme,
                if acc.config.is_empty() { "" } else { ":" },
                acc.config,
                acc.frames,
                acc.ber(),
                acc.fer()
            );
            out.push(acc);
        }
    }
    Ok(out)
}

/// SNR at which one variant's BER first falls to `target`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnrAtBer {
    pub scheme: &'static str,
    pub config: String,
    pub alpha: Option<f64>,
    pub snr_db: Option<f64>,
}

/// Interpolates `log10 BER` linearly in SNR between the last point above
/// `target` and the first at or below it. A zero count is taken as half an
/// error, so an error-free point still has a finite logarithm.
pub fn snr_at_ber(points: &[BerPoint], target: f64) -> Vec<SnrAtBer> {
    let mut series: Vec<(&'static str, String, Option<f64>, Vec<&BerPoint>)> = Vec::new();
    for p in points {
        match series
            .iter_mut()
            .find(|(s, c, a, _)| *s == p.scheme && *c == p.config && *a == p.alpha)
        {
            Some(entry) => entry.3.push(p),
            None => series.push((p.scheme, p.config.clone(), p.alpha, vec![p])),
        }
    }
    let log_ber = |p: &BerPoint| {
        let errors = if p.bit_errors == 0 { 0.5 } else { p.bit_errors as f64 };
        (errors / p.bits as f64).log10()
    };
    let goal = target.log10();
    series
        .into_iter()
        .map(|(scheme, config, alpha, mut pts)| {
            pts.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
            let snr_db = pts.iter().position(|p| log_ber(p) <= goal).and_then(|k| {
                if k == 0 {
                    return None;
                }
                let (a, b) = (pts[k - 1], pts[k]);
                let (la, lb) = (log_ber(a), log_ber(b));
                Some(a.snr_db + (goal - la) / (lb - la) * (b.snr_db - a.snr_db))
            });
            SnrAtBer {
                scheme,
                config,
                alpha,
                snr_db,
            }
        })
        .collect()
}
