//! PAM alphabets, symbol priors, bit labels and MAP decision regions.
//!
//! Symbol indices are 0-based and follow the amplitude order: index 0 is the
//! most negative point. Bit labels are stored as integers whose most
//! significant bit is bit position 0.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A one-dimensional signal set with priors and (optionally) bit labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<f64>,
    priors: Vec<f64>,
    labels: Option<Vec<u32>>,
    bits_per_symbol: usize,
}

/// Binary-reflected Gray labels for `order` symbols.
pub fn gray_labels(order: usize) -> Vec<u32> {
    (0..order as u32).map(|i| i ^ (i >> 1)).collect()
}

impl Constellation {
    /// Builds a constellation from explicit amplitudes, priors and labels.
    ///
    /// Priors must be positive and sum to one within `1e-12`; points must be
    /// strictly increasing. Labels, when given, must be distinct and the order
    /// must be a power of two.
    pub fn new(points: Vec<f64>, priors: Vec<f64>, labels: Option<Vec<u32>>) -> Result<Self> {
        let order = points.len();
        if order == 0 {
            return Err(Error::InvalidConstellation("no points".into()));
        }
        if priors.len() != order {
            return Err(Error::InvalidConstellation(format!(
                "{} priors for {} points",
                priors.len(),
                order
            )));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidConstellation("non-finite amplitude".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConstellation(
                "amplitudes must be strictly increasing".into(),
            ));
        }
        if priors.iter().any(|&p| !(p.is_finite() && p > 0.0)) {
            return Err(Error::InvalidConstellation("priors must be positive".into()));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConstellation(format!("priors sum to {total}, not 1")));
        }
        let bits_per_symbol = order.trailing_zeros() as usize;
        if let Some(labels) = &labels {
            if !order.is_power_of_two() {
                return Err(Error::InvalidConstellation(format!(
                    "bit labels need a power-of-two order, got {order}"
                )));
            }
            if labels.len() != order {
                return Err(Error::InvalidConstellation(format!(
                    "{} labels for {} points",
                    labels.len(),
                    order
                )));
            }
            let mut seen = alloc::vec![false; order];
            for &label in labels {
                let slot = seen.get_mut(label as usize).ok_or_else(|| {
                    Error::InvalidConstellation(format!("label {label} does not fit in {bits_per_symbol} bits"))
                })?;
                if *slot {
                    return Err(Error::InvalidConstellation(format!("duplicate label {label}")));
                }
                *slot = true;
            }
        }
        Ok(Self {
            points,
            priors,
            labels,
            bits_per_symbol,
        })
    }

    /// Equiprobable, Gray-labelled PAM with amplitudes `±1, ±3, …`.
    pub fn pam(order: usize) -> Result<Self> {
        if order == 0 || !order.is_power_of_two() {
            return Err(Error::InvalidConstellation(format!(
                "PAM order must be a power of two, got {order}"
            )));
        }
        let points = (0..order).map(|i| 2.0 * i as f64 - (order as f64 - 1.0)).collect();
        let priors = alloc::vec![1.0 / order as f64; order];
        Self::new(points, priors, Some(gray_labels(order)))
    }

    /// Replaces the priors, keeping points and labels.
    pub fn with_priors(self, priors: Vec<f64>) -> Result<Self> {
        Self::new(self.points, priors, self.labels)
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn point(&self, index: usize) -> Result<f64> {
        self.check_index(index)?;
        Ok(self.points[index])
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// Number of bits per symbol, `log2(M)`.
    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    /// Average symbol energy `E[X²]`.
    pub fn energy(&self) -> f64 {
        self.points.iter().zip(&self.priors).map(|(a, p)| p * a * a).sum()
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index < self.order() {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange {
                index,
                order: self.order(),
            })
        }
    }

    /// Bit `position` (0 = most significant) of the label of symbol `index`.
    pub fn bit(&self, index: usize, position: usize) -> Result<u8> {
        let labels = self.labels.as_ref().ok_or(Error::NoBitLabels)?;
        self.check_index(index)?;
        self.check_position(position)?;
        let shift = self.bits_per_symbol - 1 - position;
        Ok(((labels[index] >> shift) & 1) as u8)
    }

    fn check_position(&self, position: usize) -> Result<()> {
        if position < self.bits_per_symbol {
            Ok(())
        } else {
            Err(Error::BitPositionOutOfRange {
                position,
                bits_per_symbol: self.bits_per_symbol,
            })
        }
    }

    /// MAP decision regions for the given noise variance.
    ///
    /// The threshold between adjacent symbols `i` and `i + 1` is where their
    /// weighted likelihoods `P(a) f(y | a)` cross. With non-uniform priors a
    /// symbol can be dominated everywhere; that is reported as an error.
    pub fn map_decision_regions(&self, noise_variance: f64) -> Result<DecisionRegions> {
        if !(noise_variance.is_finite() && noise_variance > 0.0) {
            return Err(Error::InvalidNoiseVariance(noise_variance));
        }
        let boundaries: Vec<f64> = self
            .points
            .windows(2)
            .zip(self.priors.windows(2))
            .map(|(a, p)| 0.5 * (a[0] + a[1]) + noise_variance * libm::log(p[0] / p[1]) / (a[1] - a[0]))
            .collect();
        for (i, w) in boundaries.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(Error::DominatedSymbol {
                    index: i + 1,
                    amplitude: self.points[i + 1],
                });
            }
        }
        DecisionRegions::new(boundaries)
    }

    /// Concatenates the labels of `indices`, one `u8` (0 or 1) per bit.
    pub fn demap(&self, indices: &[usize]) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(indices.len() * self.bits_per_symbol);
        self.demap_into(indices, &mut out)?;
        Ok(out)
    }

    /// Like [`demap`](Self::demap) but appends to `out`.
    pub fn demap_into(&self, indices: &[usize], out: &mut Vec<u8>) -> Result<()> {
        let labels = self.labels.as_ref().ok_or(Error::NoBitLabels)?;
        let l = self.bits_per_symbol;
        for &index in indices {
            self.check_index(index)?;
            let label = labels[index];
            out.extend((0..l).map(|b| ((label >> (l - 1 - b)) & 1) as u8));
        }
        Ok(())
    }

    /// Inverse of [`demap`](Self::demap): groups bits into labels and looks up
    /// the symbol carrying each label.
    pub fn remap(&self, bits: &[u8]) -> Result<Vec<usize>> {
        let labels = self.labels.as_ref().ok_or(Error::NoBitLabels)?;
        let l = self.bits_per_symbol;
        if l == 0 || bits.len() % l != 0 {
            return Err(Error::LengthMismatch {
                expected: bits.len().div_ceil(l.max(1)) * l,
                actual: bits.len(),
            });
        }
        let mut by_label = alloc::vec![0usize; self.order()];
        for (index, &label) in labels.iter().enumerate() {
            by_label[label as usize] = index;
        }
        Ok(bits
            .chunks_exact(l)
            .map(|chunk| {
                let label = chunk.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
                by_label[label]
            })
            .collect())
    }

    /// Splits the alphabet by the value of bit `position`: symbols whose bit
    /// is 0, then those whose bit is 1.
    pub fn bit_partitions(&self, position: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        self.labels.as_ref().ok_or(Error::NoBitLabels)?;
        self.check_position(position)?;
        let mut zeros = Vec::new();
        let mut ones = Vec::new();
        for index in 0..self.order() {
            if self.bit(index, position)? == 0 {
                zeros.push(index);
            } else {
                ones.push(index);
            }
        }
        Ok((zeros, ones))
    }
}

/// Partition of the real line into `M` contiguous intervals.
///
/// Region `i` is `(t[i-1], t[i]]` with `t[-1] = -∞` and `t[M-1] = +∞`, so a
/// point exactly on a threshold belongs to the lower-indexed region.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionRegions {
    boundaries: Vec<f64>,
}

impl DecisionRegions {
    pub fn new(boundaries: Vec<f64>) -> Result<Self> {
        if boundaries.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter("non-finite decision threshold".into()));
        }
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "decision thresholds must be strictly increasing".into(),
            ));
        }
        Ok(Self { boundaries })
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn len(&self) -> usize {
        self.boundaries.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Lower edge of region `i` (`-∞` for the first).
    pub fn lower(&self, i: usize) -> f64 {
        if i == 0 {
            f64::NEG_INFINITY
        } else {
            self.boundaries[i - 1]
        }
    }

    /// Upper edge of region `i` (`+∞` for the last).
    pub fn upper(&self, i: usize) -> f64 {
        self.boundaries.get(i).copied().unwrap_or(f64::INFINITY)
    }

    /// Index of the region containing `y`.
    pub fn decide(&self, y: f64) -> Result<usize> {
        if y.is_nan() {
            return Err(Error::NotANumber);
        }
        Ok(self.boundaries.partition_point(|&t| t < y))
    }
}
