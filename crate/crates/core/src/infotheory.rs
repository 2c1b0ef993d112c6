//! Mutual information of the three reconciliation settings and leakage of
//! the disclosed metric.
//!
//! - direct: `I(X; Y)` of the discrete-input AWGN channel;
//! - hard: `I(X; X̂)` of the `M × M` channel seen through Bob's decisions;
//! - softened: `I(X̂; X, N) = H(X̂) + E[log₂ f(N, X̂ | X) / Σ_k f(N, a_k | X)]`;
//! - leakage: `I(N; X̂)`, zero for a correctly built transform.
//!
//! The integrals are evaluated by adaptive Gauss–Kronrod quadrature; each
//! result carries the quadrature's error estimate in bits.

use alloc::vec::Vec;
use core::fmt;

use crate::channel::ChannelModel;
use crate::constellation::DecisionRegions;
use crate::error::{Error, Result};
use crate::math::{self, log_sum_exp, LN_2};
use crate::quadrature::{self, Estimate};
use crate::softening::{MonotonicityConfig, SoftMetric};

/// Integration range for the direct channel, in noise standard deviations
/// around each point. `φ(38) ≈ 1e-314`.
const DIRECT_REACH_SIGMAS: f64 = 38.0;

/// Slack allowed on `I(X̂; X, N) ≤ I(X; Y)`.
pub const BOUND_SLACK_BITS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 2000,
        }
    }
}

/// A mutual-information value in bits with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiValue {
    pub bits: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Direct,
    Hard,
    Rrs,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Direct => "direct",
            Self::Hard => "hard",
            Self::Rrs => "rrs",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One evaluated point of a mutual-information sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct MiResult {
    pub snr_db: f64,
    pub scheme: Scheme,
    pub config: Option<MonotonicityConfig>,
    pub value_bits: f64,
    pub quadrature_error_estimate: f64,
}

fn finish(estimate: Estimate, offset: f64) -> Result<MiValue> {
    let bits = offset + estimate.value;
    if estimate.converged {
        Ok(MiValue {
            bits,
            error_estimate: estimate.error,
        })
    } else {
        Err(Error::QuadratureNotConverged {
            estimate: bits,
            error: estimate.error,
        })
    }
}

/// `I(X; Y)` in bits.
pub fn mi_direct(ch: &ChannelModel, opts: &QuadratureOptions) -> Result<MiValue> {
    let c = ch.constellation();
    let sigma = ch.sigma();
    let regions = c.map_decision_regions(ch.noise_variance()).ok();
    let mut total = Estimate {
        value: 0.0,
        error: 0.0,
        converged: true,
        evaluations: 0,
    };
    let order = c.order() as f64;
    for (j, (&a, &p)) in c.points().iter().zip(c.priors()).enumerate() {
        // Substitute y = a_j + σz so every component is a unit Gaussian.
        let breaks: Vec<f64> = regions
            .as_ref()
            .map(|r| r.boundaries().iter().map(|t| (t - a) / sigma).collect())
            .unwrap_or_default();
        let e = quadrature::integrate(
            |z| {
                let weight = math::FRAC_1_SQRT_2PI * libm::exp(-0.5 * z * z);
                if weight == 0.0 {
                    0.0
                } else {
                    weight * ch.log_likelihood_ratio(a + sigma * z, j)
                }
            },
            -DIRECT_REACH_SIGMAS,
            DIRECT_REACH_SIGMAS,
            &breaks,
            opts.abs_tol / order,
            opts.rel_tol,
            opts.max_subdivisions,
        );
        total.value += p * e.value / LN_2;
        total.error += p * e.error / LN_2;
        total.converged &= e.converged;
    }
    finish(total, 0.0)
}

/// `P(X̂ = a_i | X = a_j)`, indexed `[j][i]`.
pub fn transition_matrix(ch: &ChannelModel, regions: &DecisionRegions) -> Vec<Vec<f64>> {
    let order = ch.constellation().order();
    (0..order)
        .map(|j| {
            (0..regions.len())
                .map(|i| ch.conditional_interval_mass(regions.lower(i), regions.upper(i), j))
                .collect()
        })
        .collect()
}

/// `I(X; X̂)` in bits. Closed form, so the error estimate is zero.
pub fn mi_hard(ch: &ChannelModel, regions: &DecisionRegions) -> MiValue {
    let priors = ch.constellation().priors();
    let matrix = transition_matrix(ch, regions);
    let mut marginal = alloc::vec![0.0; regions.len()];
    for (row, p) in matrix.iter().zip(priors) {
        for (m, t) in marginal.iter_mut().zip(row) {
            *m += p * t;
        }
    }
    let mut bits = 0.0;
    for (row, p) in matrix.iter().zip(priors) {
        for (t, q) in row.iter().zip(&marginal) {
            if *t > 0.0 {
                bits += p * t * libm::log2(t / q);
            }
        }
    }
    MiValue {
        bits,
        error_estimate: 0.0,
    }
}

/// Fills `logs[i * M + j] = ln f(n, a_i | a_j)` for all pairs.
fn joint_log_table<T: SoftMetric + ?Sized>(t: &T, n: f64, logs: &mut [f64]) -> Result<()> {
    let ch = t.channel();
    let order = ch.constellation().order();
    for i in 0..order {
        let row = &mut logs[i * order..(i + 1) * order];
        match t.preimage(n, i)? {
            Some(p) => {
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot = p.log_mass + ch.log_likelihood_ratio(p.y, j);
                }
            }
            None => row.fill(f64::NEG_INFINITY),
        }
    }
    Ok(())
}

/// `I(X̂; X, N)` in bits.
pub fn mi_rrs<T: SoftMetric + ?Sized>(t: &T, opts: &QuadratureOptions) -> Result<MiValue> {
    let ch = t.channel();
    let order = ch.constellation().order();
    let priors = ch.constellation().priors();
    let decision_probs: Vec<f64> = (0..order).map(|i| t.decision_probability(i)).collect();
    let entropy = math::entropy_bits(&decision_probs);
    if order == 1 {
        return Ok(MiValue {
            bits: 0.0,
            error_estimate: 0.0,
        });
    }
    let mut logs = alloc::vec![0.0; order * order];
    let mut failure = None;
    let e = quadrature::integrate(
        |n| {
            if let Err(err) = joint_log_table(t, n, &mut logs) {
                failure.get_or_insert(err);
                return 0.0;
            }
            let mut acc = 0.0;
            for (j, &p) in priors.iter().enumerate() {
                let norm = log_sum_exp((0..order).map(|k| logs[k * order + j]));
                for i in 0..order {
                    let l = logs[i * order + j];
                    if l > f64::NEG_INFINITY {
                        acc += p * libm::exp(l) * (l - norm);
                    }
                }
            }
            acc / LN_2
        },
        0.0,
        1.0,
        &[],
        opts.abs_tol,
        opts.rel_tol,
        opts.max_subdivisions,
    );
    if let Some(err) = failure {
        return Err(err);
    }
    finish(e, entropy)
}

/// `I(N; X̂)` in bits, from `f_{N|X̂}(n | a_i) = Σ_j P(a_j) f(n, a_i | a_j) / P(X̂ = a_i)`.
pub fn leakage<T: SoftMetric + ?Sized>(t: &T, opts: &QuadratureOptions) -> Result<MiValue> {
    let ch = t.channel();
    let order = ch.constellation().order();
    if order == 1 {
        return Ok(MiValue {
            bits: 0.0,
            error_estimate: 0.0,
        });
    }
    let log_priors: Vec<f64> = ch.constellation().priors().iter().map(|&p| libm::log(p)).collect();
    let decision_probs: Vec<f64> = (0..order).map(|i| t.decision_probability(i)).collect();
    let log_decision: Vec<f64> = decision_probs.iter().map(|&p| libm::log(p)).collect();
    let mut logs = alloc::vec![0.0; order * order];
    let mut conditional = alloc::vec![0.0; order];
    let mut failure = None;
    let e = quadrature::integrate(
        |n| {
            if let Err(err) = joint_log_table(t, n, &mut logs) {
                failure.get_or_insert(err);
                return 0.0;
            }
            for i in 0..order {
                conditional[i] = log_sum_exp((0..order).map(|j| log_priors[j] + logs[i * order + j])) - log_decision[i];
            }
            let marginal = log_sum_exp((0..order).map(|i| log_decision[i] + conditional[i]));
            let mut acc = 0.0;
            for i in 0..order {
                if conditional[i] > f64::NEG_INFINITY {
                    acc += decision_probs[i] * libm::exp(conditional[i]) * (conditional[i] - marginal);
                }
            }
            acc / LN_2
        },
        0.0,
        1.0,
        &[],
        opts.abs_tol,
        opts.rel_tol,
        opts.max_subdivisions,
    );
    if let Some(err) = failure {
        return Err(err);
    }
    finish(e, 0.0)
}

/// Whether `I(X̂; X, N) ≤ I(X; Y) + 1e-6`.
pub fn mi_bound_check<T: SoftMetric + ?Sized>(ch: &ChannelModel, t: &T, opts: &QuadratureOptions) -> Result<bool> {
    let direct = mi_direct(ch, opts)?;
    let rrs = mi_rrs(t, opts)?;
    Ok(rrs.bits <= direct.bits + BOUND_SLACK_BITS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::Constellation;
    use crate::softening::{control::RegionScaledTransform, SofteningTransform};
    use alloc::vec;
    use approx::assert_relative_eq;

    /// `σ²` for `SNR = E[X²] / N₀` with `σ² = N₀ / 2`.
    fn noise_for(c: &Constellation, snr_db: f64) -> f64 {
        c.energy() / (2.0 * 10f64.powf(snr_db / 10.0))
    }

    fn channel(order: usize, snr_db: f64) -> ChannelModel {
        let c = Constellation::pam(order).unwrap();
        let var = noise_for(&c, snr_db);
        ChannelModel::new(c, var).unwrap()
    }

    fn binary_entropy(p: f64) -> f64 {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }

    #[test]
    fn direct_limits() {
        let opts = QuadratureOptions::default();
        for order in [2, 4] {
            let hi = mi_direct(&channel(order, 40.0), &opts).unwrap();
            assert!((hi.bits - (order as f64).log2()).abs() < 1e-4);
            assert!(hi.error_estimate <= 1e-6);
            let lo = mi_direct(&channel(order, -50.0), &opts).unwrap();
            assert!(lo.bits >= 0.0 && lo.bits < 1e-4);
            // Small-SNR expansion: I ≈ E[X²] / (2σ² ln 2) bits.
            let ch = channel(order, -40.0);
            let approx = ch.constellation().energy() / (2.0 * ch.noise_variance() * LN_2);
            assert_relative_eq!(mi_direct(&ch, &opts).unwrap().bits, approx, max_relative = 1e-3);
        }
    }

    #[test]
    fn hard_bpsk_closed_form() {
        for snr_db in [-10.0, 0.0, 5.0, 12.0] {
            let ch = channel(2, snr_db);
            let regions = ch.constellation().map_decision_regions(ch.noise_variance()).unwrap();
            let p = math::normal_sf(1.0 / ch.sigma());
            let expected = 1.0 - binary_entropy(p);
            assert!((mi_hard(&ch, &regions).bits - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn transition_rows_sum_to_one() {
        for snr_db in [-30.0, 0.0, 30.0] {
            let ch = channel(4, snr_db);
            let regions = ch.constellation().map_decision_regions(ch.noise_variance()).unwrap();
            for row in transition_matrix(&ch, &regions) {
                assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bpsk_rrs_equals_direct() {
        let opts = QuadratureOptions::default();
        for snr_db in [-20.0, -5.0, 0.0, 6.0, 14.0] {
            let ch = channel(2, snr_db);
            let direct = mi_direct(&ch, &opts).unwrap();
            // The mirrored configurations make n a function of |y|.
            for config in ["+-", "-+"] {
                let config = MonotonicityConfig::parse(config, 2).unwrap();
                let t = SofteningTransform::new(ch.clone(), config.clone()).unwrap();
                let rrs = mi_rrs(&t, &opts).unwrap();
                assert!(
                    (rrs.bits - direct.bits).abs() <= 1e-4,
                    "{config} {snr_db}: {} vs {}",
                    rrs.bits,
                    direct.bits
                );
            }
            // Equal orientation loses information.
            let t = SofteningTransform::new(ch.clone(), MonotonicityConfig::base(2)).unwrap();
            let base = mi_rrs(&t, &opts).unwrap().bits;
            if snr_db <= 6.0 {
                assert!(base < direct.bits - 1e-4, "{snr_db}: {base}");
            }
        }
    }

    #[test]
    fn leakage_vanishes_for_every_config() {
        let opts = QuadratureOptions::default();
        for snr_db in [-10.0, 0.0, 10.0] {
            let ch = channel(4, snr_db);
            for config in MonotonicityConfig::enumerate(4) {
                let t = SofteningTransform::new(ch.clone(), config).unwrap();
                assert!(leakage(&t, &opts).unwrap().bits.abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn leakage_detects_broken_transform() {
        let opts = QuadratureOptions::default();
        let ch = channel(4, 0.0);
        let t = SofteningTransform::new(ch, MonotonicityConfig::base(4)).unwrap();
        let broken = RegionScaledTransform::new(t);
        assert!(leakage(&broken, &opts).unwrap().bits > 0.01);
    }

    #[test]
    fn single_symbol_has_no_leakage() {
        let c = Constellation::new(vec![0.0], vec![1.0], None).unwrap();
        let ch = ChannelModel::new(c, 1.0).unwrap();
        let t = SofteningTransform::new(ch, MonotonicityConfig::base(1)).unwrap();
        let opts = QuadratureOptions::default();
        assert_eq!(leakage(&t, &opts).unwrap().bits, 0.0);
        assert_eq!(mi_rrs(&t, &opts).unwrap().bits, 0.0);
    }

    #[test]
    fn bound_holds_for_all_pam4_configs() {
        let opts = QuadratureOptions::default();
        for snr_db in [-20.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0] {
            let ch = channel(4, snr_db);
            for config in MonotonicityConfig::enumerate(4) {
                let t = SofteningTransform::new(ch.clone(), config).unwrap();
                assert!(mi_bound_check(&ch, &t, &opts).unwrap());
            }
        }
        // Noiseless limit: both sides reach log2 M.
        let ch = channel(4, 45.0);
        let t = SofteningTransform::new(ch.clone(), MonotonicityConfig::alternating(4)).unwrap();
        assert!(mi_bound_check(&ch, &t, &opts).unwrap());
        assert!((mi_rrs(&t, &opts).unwrap().bits - 2.0).abs() < 1e-6);
    }

    #[test]
    fn reports_non_convergence() {
        let ch = channel(4, 0.0);
        let tight = QuadratureOptions {
            abs_tol: 1e-300,
            rel_tol: 0.0,
            max_subdivisions: 2,
        };
        assert!(matches!(
            mi_direct(&ch, &tight),
            Err(Error::QuadratureNotConverged { .. })
        ));
    }
}
