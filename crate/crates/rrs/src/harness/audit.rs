//! Leakage audits: analytic `I(N; X̂)`, the plug-in estimate from simulated
//! transcripts, and per-decision uniformity of `N`.

use rayon::prelude::*;
use rrs_core::infotheory::leakage;
use rrs_core::softening::control::RegionScaledTransform;
use rrs_core::{MonotonicityConfig, QuadratureOptions, SoftMetric, SofteningTransform};
use serde::Serialize;

use super::{pool, substream, ConstellationSpec, SnrGrid};
use crate::stats::{binned_mutual_information, ks_uniform};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AuditThresholds {
    /// Largest acceptable analytic leakage, bits.
    pub leakage_bits: f64,
    /// Largest acceptable plug-in transcript MI, bits.
    pub transcript_mi_bits: f64,
    /// KS significance level.
    pub ks_level: f64,
}

impl Default for AuditThresholds {
    fn default() -> Self {
        Self {
            leakage_bits: 1e-6,
            transcript_mi_bits: 1e-3,
            ks_level: 0.01,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AuditSpec {
    pub constellation: ConstellationSpec,
    pub snr: SnrGrid,
    pub configs: Vec<MonotonicityConfig>,
    /// KS sample size per decision.
    pub samples_per_decision: usize,
    /// Histogram cells for the transcript MI estimate.
    pub bins: usize,
    pub seed: u64,
    pub workers: usize,
    pub thresholds: AuditThresholds,
    pub quadrature: QuadratureOptions,
    /// Audits a deliberately leaking transform instead; every row must fail.
    pub inject_broken: bool,
}

/// One row of `audit.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRow {
    pub snr_db: f64,
    pub config: String,
    pub leakage_bits: f64,
    pub transcript_mi_bits: f64,
    /// Smallest per-decision KS p-value.
    pub ks_min_p: f64,
    pub draws: usize,
    pub pass: bool,
}

/// Channel outputs drawn until every decision has `samples` hits.
struct Sample {
    y: Vec<f64>,
    decisions: Vec<usize>,
}

fn draw(
    channel: &rrs_core::ChannelModel,
    regions: &rrs_core::DecisionRegions,
    samples: usize,
    seed: u64,
    point: usize,
) -> Result<Sample> {
    use rand::Rng;
    let order = channel.constellation().order();
    // Gives up once a decision is too rare to fill; KS then runs on what is
    // there and the shortfall is logged.
    let cap = 200 * samples * order;
    let mut rng = substream(seed, point, u64::MAX);
    let mut counts = vec![0usize; order];
    let (mut y, mut decisions) = (Vec::new(), Vec::new());
    while counts.iter().any(|&c| c < samples) && y.len() < cap {
        let j = rng.random_range(0..order);
        let v = channel.transmit(j, &mut rng)?;
        let d = regions.decide(v)?;
        counts[d] += 1;
        y.push(v);
        decisions.push(d);
    }
    if let Some(short) = counts.iter().position(|&c| c < samples) {
        log::warn!("decision {short} collected {} of {samples} samples", counts[short]);
    }
    Ok(Sample { y, decisions })
}

fn audit_one<T: SoftMetric + ?Sized>(
    t: &T,
    sample: &Sample,
    spec: &AuditSpec,
    snr_db: f64,
    config: &MonotonicityConfig,
) -> Result<AuditRow> {
    let order = t.channel().constellation().order();
    let analytic = leakage(t, &spec.quadrature)?.bits;
    let mut metrics = Vec::with_capacity(sample.y.len());
    let mut per_decision: Vec<Vec<f64>> = vec![Vec::with_capacity(spec.samples_per_decision); order];
    for (&y, &d) in sample.y.iter().zip(&sample.decisions) {
        let s = t.soften(y)?;
        debug_assert_eq!(s.decision, d);
        metrics.push(s.n);
        if per_decision[s.decision].len() < spec.samples_per_decision {
            per_decision[s.decision].push(s.n);
        }
    }
    let transcript = binned_mutual_information(&metrics, &sample.decisions, spec.bins, order);
    let ks_min_p = per_decision
        .iter_mut()
        .filter(|v| !v.is_empty())
        .map(|v| ks_uniform(v).p_value)
        .fold(1.0, f64::min);
    let th = spec.thresholds;
    let pass = analytic.abs() <= th.leakage_bits && transcript <= th.transcript_mi_bits && ks_min_p >= th.ks_level;
    Ok(AuditRow {
        snr_db,
        config: config.to_sign_string(),
        leakage_bits: analytic,
        transcript_mi_bits: transcript,
        ks_min_p,
        draws: sample.y.len(),
        pass,
    })
}

/// Audits every configuration at every SNR point. All configurations at a
/// point share one set of channel draws.
pub fn audit(spec: &AuditSpec) -> Result<Vec<AuditRow>> {
    spec.snr.validate()?;
    if spec.configs.is_empty() {
        return Err(Error::Validation("no monotonicity configuration selected".into()));
    }
    if spec.samples_per_decision < 2 || spec.bins < 2 {
        return Err(Error::Validation("audit needs at least 2 samples and 2 bins".into()));
    }
    let workers = pool(spec.workers)?;
    let mut rows = Vec::new();
    for (point, &snr_db) in spec.snr.points().iter().enumerate() {
        let channel = spec.constellation.channel(snr_db)?;
        let regions = channel.constellation().map_decision_regions(channel.noise_variance())?;
        let sample = draw(&channel, &regions, spec.samples_per_decision, spec.seed, point)?;
        let batch: Vec<AuditRow> = workers.install(|| {
            spec.configs
                .par_iter()
                .map(|config| {
                    let t = SofteningTransform::with_regions(channel.clone(), regions.clone(), config.clone())?;
                    if spec.inject_broken {
                        audit_one(&RegionScaledTransform::new(t), &sample, spec, snr_db, config)
                    } else {
                        audit_one(&t, &sample, spec, snr_db, config)
                    }
                })
                .collect::<Result<_>>()
        })?;
        rows.extend(batch);
    }
    Ok(rows)
}
