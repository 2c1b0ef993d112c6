//! Alice-side soft information.
//!
//! Knowing her symbol `a_j` and Bob's metric `n`, Alice considers the `M`
//! channel outputs `y_i = g_i⁻¹(n)` that could have produced it, one per
//! decision region. The joint density of `(N, X̂ = a_i)` given `X = a_j` is
//!
//! ```text
//! f(n, a_i | a_j) = f(y_i | a_j) / |g_i'(y_i)|
//!                 = ΔF_i / Σ_k P(a_k) exp(-(2 y_i - a_j - a_k)(a_j - a_k) / 2σ²)
//! ```
//!
//! Everything is carried in the log domain; at high SNR the individual
//! Gaussians underflow long before the ratios do.

use alloc::vec::Vec;

use crate::channel::ChannelModel;
use crate::constellation::{Constellation, DecisionRegions};
use crate::error::{Error, Result};
use crate::infotheory::transition_matrix;
use crate::math::log_sum_exp;
use crate::softening::SoftMetric;

/// LAPPR magnitude limit (natural-log units).
pub const LAPPR_CLAMP: f64 = 50.0;

/// LAPPR scaling that worked best for the DVB-S2 rate 1/2 code with PAM-4,
/// found by a coarse search; the default scaling is 1.
pub const PRESET_ALPHA: f64 = 0.65;

/// Per-bit log a-posteriori probability ratios for one symbol slot,
/// `ln P(b_l = 0 | ·) / P(b_l = 1 | ·)`, already multiplied by `alpha` and
/// clamped to `±LAPPR_CLAMP`.
#[derive(Debug, Clone, PartialEq)]
pub struct LapprVector {
    pub values: Vec<f64>,
    pub alpha: f64,
}

/// `ln f_{N,X̂|X}(n, a_i | a_j)`; `-∞` where piece `i` never emits `n`.
pub fn joint_log_density<T: SoftMetric + ?Sized>(t: &T, n: f64, i: usize, j: usize) -> Result<f64> {
    t.channel().constellation().check_index(j)?;
    Ok(match t.preimage(n, i)? {
        Some(p) => p.log_mass + t.channel().log_likelihood_ratio(p.y, j),
        None => f64::NEG_INFINITY,
    })
}

/// `f_{N,X̂|X}(n, a_i | a_j)`.
pub fn joint_conditional_density<T: SoftMetric + ?Sized>(t: &T, n: f64, i: usize, j: usize) -> Result<f64> {
    Ok(libm::exp(joint_log_density(t, n, i, j)?))
}

/// Fills `out[i]` with `ln f(n, a_i | a_j)` for every region `i`.
fn joint_log_row<T: SoftMetric + ?Sized>(t: &T, n: f64, j: usize, out: &mut [f64]) -> Result<()> {
    let ch = t.channel();
    ch.constellation().check_index(j)?;
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = match t.preimage(n, i)? {
            Some(p) => p.log_mass + ch.log_likelihood_ratio(p.y, j),
            None => f64::NEG_INFINITY,
        };
    }
    Ok(())
}

/// `P(X̂ = a_i | X = a_j, N = n)` for every `i`.
pub fn posterior_decisions<T: SoftMetric + ?Sized>(t: &T, n: f64, j: usize) -> Result<Vec<f64>> {
    let order = t.channel().constellation().order();
    let mut logs = alloc::vec![0.0; order];
    joint_log_row(t, n, j, &mut logs)?;
    let norm = log_sum_exp(logs.iter().copied());
    if norm == f64::NEG_INFINITY {
        return Err(Error::InvalidParameter(alloc::format!(
            "metric {n} is impossible for every decision"
        )));
    }
    Ok(logs.iter().map(|&l| libm::exp(l - norm)).collect())
}

/// Bit LAPPRs from Bob's metric, scaled by `alpha`.
pub fn lappr<T: SoftMetric + ?Sized>(t: &T, n: f64, j: usize, alpha: f64) -> Result<LapprVector> {
    let mut alice = AliceDemapper::new(t)?;
    let mut values = alloc::vec![0.0; t.channel().constellation().bits_per_symbol()];
    alice.lapprs_into(n, j, alpha, &mut values)?;
    Ok(LapprVector { values, alpha })
}

/// `alpha · ln(Σ_{A_0} e^{l_i} / Σ_{A_1} e^{l_i})`, clamped.
fn bit_ratio(logs: &[f64], zeros: &[usize], ones: &[usize], alpha: f64) -> f64 {
    let num = log_sum_exp(zeros.iter().map(|&i| logs[i]));
    let den = log_sum_exp(ones.iter().map(|&i| logs[i]));
    let raw = if num == den { 0.0 } else { num - den };
    (alpha * raw).clamp(-LAPPR_CLAMP, LAPPR_CLAMP)
}

/// Precomputed bit partitions plus scratch space for computing LAPPRs symbol
/// after symbol.
#[derive(Debug)]
pub struct AliceDemapper<'a, T: SoftMetric + ?Sized> {
    transform: &'a T,
    partitions: Vec<(Vec<usize>, Vec<usize>)>,
    scratch: Vec<f64>,
}

impl<'a, T: SoftMetric + ?Sized> AliceDemapper<'a, T> {
    pub fn new(transform: &'a T) -> Result<Self> {
        let c = transform.channel().constellation();
        let partitions = bit_partitions_all(c)?;
        Ok(Self {
            transform,
            partitions,
            scratch: alloc::vec![0.0; c.order()],
        })
    }

    /// Writes the `L` scaled LAPPRs of one symbol slot into `out`.
    pub fn lapprs_into(&mut self, n: f64, j: usize, alpha: f64, out: &mut [f64]) -> Result<()> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if out.len() != self.partitions.len() {
            return Err(Error::LengthMismatch {
                expected: self.partitions.len(),
                actual: out.len(),
            });
        }
        joint_log_row(self.transform, n, j, &mut self.scratch)?;
        for (slot, (zeros, ones)) in out.iter_mut().zip(&self.partitions) {
            *slot = bit_ratio(&self.scratch, zeros, ones, alpha);
        }
        Ok(())
    }
}

fn bit_partitions_all(c: &Constellation) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    (0..c.bits_per_symbol()).map(|l| c.bit_partitions(l)).collect()
}

/// Bit LLRs Alice can form from her own symbol alone: the rows of the hard
/// `M × M` transition matrix `P(X̂ | X)`, marginalised per bit.
#[derive(Debug, Clone)]
pub struct HardDemapper {
    /// `table[j]` holds the clamped LLRs for transmitted symbol `j`.
    table: Vec<Vec<f64>>,
}

impl HardDemapper {
    pub fn new(ch: &ChannelModel, regions: &DecisionRegions) -> Result<Self> {
        let c = ch.constellation();
        let partitions = bit_partitions_all(c)?;
        let matrix = transition_matrix(ch, regions);
        let table = matrix
            .iter()
            .map(|row| {
                let logs: Vec<f64> = row.iter().map(|&p| libm::log(p)).collect();
                partitions
                    .iter()
                    .map(|(zeros, ones)| bit_ratio(&logs, zeros, ones, 1.0))
                    .collect()
            })
            .collect();
        Ok(Self { table })
    }

    pub fn lapprs(&self, j: usize) -> &[f64] {
        &self.table[j]
    }
}

/// The hard reverse-reconciliation baseline for a single symbol.
pub fn hard_rr_baseline_lapprs(j: usize, ch: &ChannelModel, regions: &DecisionRegions) -> Result<LapprVector> {
    ch.constellation().check_index(j)?;
    let demapper = HardDemapper::new(ch, regions)?;
    Ok(LapprVector {
        values: demapper.lapprs(j).to_vec(),
        alpha: 1.0,
    })
}

/// Direct-reconciliation bit LLRs computed from the channel output itself,
/// `ln Σ_{A_0} P(a_i) f(y|a_i) / Σ_{A_1} P(a_i) f(y|a_i)`.
#[derive(Debug, Clone)]
pub struct ChannelDemapper {
    partitions: Vec<(Vec<usize>, Vec<usize>)>,
    scratch: Vec<f64>,
}

impl ChannelDemapper {
    pub fn new(c: &Constellation) -> Result<Self> {
        Ok(Self {
            partitions: bit_partitions_all(c)?,
            scratch: alloc::vec![0.0; c.order()],
        })
    }

    pub fn lapprs_into(&mut self, ch: &ChannelModel, y: f64, out: &mut [f64]) -> Result<()> {
        if y.is_nan() {
            return Err(Error::NotANumber);
        }
        let inv = 0.5 / ch.noise_variance();
        for ((slot, a), lp) in self
            .scratch
            .iter_mut()
            .zip(ch.constellation().points())
            .zip(ch.log_priors())
        {
            *slot = lp - (y - a) * (y - a) * inv;
        }
        for (slot, (zeros, ones)) in out.iter_mut().zip(&self.partitions) {
            *slot = bit_ratio(&self.scratch, zeros, ones, 1.0);
        }
        Ok(())
    }
}
