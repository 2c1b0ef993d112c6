//! AWGN channel with a discrete input and its Gaussian-mixture output.
//!
//! `Y = X + W` with `W ~ N(0, σ²)`. The marginal of `Y` is a mixture of
//! Gaussians centred on the constellation points, weighted by the priors.
//! Everything the softening transform needs (density, CDF, survival
//! function, probability mass of an interval and the quantile) is here.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::math::{self, FRAC_1_SQRT_2PI};

/// Bracket half-width, in noise standard deviations, used to start the
/// quantile search.
const BRACKET_SIGMAS: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModel {
    constellation: Constellation,
    noise_variance: f64,
    sigma: f64,
    log_priors: alloc::vec::Vec<f64>,
}

impl ChannelModel {
    pub fn new(constellation: Constellation, noise_variance: f64) -> Result<Self> {
        if !(noise_variance.is_finite() && noise_variance > 0.0) {
            return Err(Error::InvalidNoiseVariance(noise_variance));
        }
        let log_priors = constellation.priors().iter().map(|&p| libm::log(p)).collect();
        Ok(Self {
            constellation,
            noise_variance,
            sigma: libm::sqrt(noise_variance),
            log_priors,
        })
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    /// `σ² = N₀ / 2`.
    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub(crate) fn log_priors(&self) -> &[f64] {
        &self.log_priors
    }

    /// Sends symbol `index` through the channel.
    pub fn transmit<R: Rng + ?Sized>(&self, index: usize, rng: &mut R) -> Result<f64> {
        let a = self.constellation.point(index)?;
        let w: f64 = rng.sample(StandardNormal);
        Ok(a + self.sigma * w)
    }

    /// Conditional density `f(y | a_j)`.
    pub fn conditional_density(&self, y: f64, j: usize) -> Result<f64> {
        let a = self.constellation.point(j)?;
        let z = (y - a) / self.sigma;
        Ok(FRAC_1_SQRT_2PI / self.sigma * libm::exp(-0.5 * z * z))
    }

    /// Output density `f_Y(y) = Σ_j P(a_j) φ_σ(y - a_j)`.
    pub fn density(&self, y: f64) -> Result<f64> {
        if y.is_nan() {
            return Err(Error::NotANumber);
        }
        Ok(self.density_unchecked(y))
    }

    pub(crate) fn density_unchecked(&self, y: f64) -> f64 {
        let c = &self.constellation;
        let s: f64 = c
            .points()
            .iter()
            .zip(c.priors())
            .map(|(a, p)| {
                let z = (y - a) / self.sigma;
                p * libm::exp(-0.5 * z * z)
            })
            .sum();
        FRAC_1_SQRT_2PI / self.sigma * s
    }

    /// `ln f_Y(y)`, finite even where the density itself underflows.
    pub fn log_density(&self, y: f64) -> Result<f64> {
        if y.is_nan() {
            return Err(Error::NotANumber);
        }
        let c = &self.constellation;
        let lse = math::log_sum_exp(c.points().iter().zip(&self.log_priors).map(|(a, lp)| {
            let z = (y - a) / self.sigma;
            lp - 0.5 * z * z
        }));
        Ok(lse + libm::log(FRAC_1_SQRT_2PI / self.sigma))
    }

    /// `ln [ f(y | a_j) / f_Y(y) ]`, evaluated as
    /// `-ln Σ_k P(a_k) exp(-(2y - a_j - a_k)(a_j - a_k) / 2σ²)` so that no
    /// Gaussian is ever evaluated on its own.
    pub fn log_likelihood_ratio(&self, y: f64, j: usize) -> f64 {
        let points = self.constellation.points();
        let aj = points[j];
        let inv = 0.5 / self.noise_variance;
        -math::log_sum_exp(
            points
                .iter()
                .zip(&self.log_priors)
                .map(|(&ak, lp)| lp - (2.0 * y - aj - ak) * (aj - ak) * inv),
        )
    }

    /// Output CDF `F_Y(y) = Σ_j P(a_j) Φ((y - a_j)/σ)`.
    pub fn cdf(&self, y: f64) -> Result<f64> {
        if y.is_nan() {
            return Err(Error::NotANumber);
        }
        Ok(self.cdf_unchecked(y))
    }

    pub(crate) fn cdf_unchecked(&self, y: f64) -> f64 {
        let c = &self.constellation;
        c.points()
            .iter()
            .zip(c.priors())
            .map(|(a, p)| p * math::normal_cdf((y - a) / self.sigma))
            .sum::<f64>()
            .min(1.0)
    }

    /// Survival function `1 - F_Y(y)`, accurate in the upper tail.
    pub fn sf(&self, y: f64) -> Result<f64> {
        if y.is_nan() {
            return Err(Error::NotANumber);
        }
        Ok(self.sf_unchecked(y))
    }

    pub(crate) fn sf_unchecked(&self, y: f64) -> f64 {
        let c = &self.constellation;
        c.points()
            .iter()
            .zip(c.priors())
            .map(|(a, p)| p * math::normal_sf((y - a) / self.sigma))
            .sum::<f64>()
            .min(1.0)
    }

    /// `P(lo < Y ≤ hi)`, summed component by component without
    /// cancellation. Infinite limits are allowed.
    pub fn interval_mass(&self, lo: f64, hi: f64) -> f64 {
        if lo >= hi {
            return 0.0;
        }
        let c = &self.constellation;
        c.points()
            .iter()
            .zip(c.priors())
            .map(|(a, p)| p * self.component_mass(lo, hi, *a))
            .sum()
    }

    /// `P(lo < Y ≤ hi | X = a_j)`.
    pub fn conditional_interval_mass(&self, lo: f64, hi: f64, j: usize) -> f64 {
        if lo >= hi {
            return 0.0;
        }
        self.component_mass(lo, hi, self.constellation.points()[j])
    }

    fn component_mass(&self, lo: f64, hi: f64, a: f64) -> f64 {
        math::normal_interval((lo - a) / self.sigma, (hi - a) / self.sigma)
    }

    /// Output quantile `F_Y⁻¹(p)` for `p ∈ (0, 1)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        let (lo, hi) = self.default_bracket();
        Ok(if p <= 0.5 {
            self.solve_anchored(Anchor::Below(f64::NEG_INFINITY), p, lo, hi)
        } else {
            self.solve_anchored(Anchor::Above(f64::INFINITY), 1.0 - p, lo, hi)
        })
    }

    /// Inverse survival function: the `y` with `1 - F_Y(y) = q`.
    pub fn upper_quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::ProbabilityOutOfRange(q));
        }
        let (lo, hi) = self.default_bracket();
        Ok(if q <= 0.5 {
            self.solve_anchored(Anchor::Above(f64::INFINITY), q, lo, hi)
        } else {
            self.solve_anchored(Anchor::Below(f64::NEG_INFINITY), 1.0 - q, lo, hi)
        })
    }

    fn default_bracket(&self) -> (f64, f64) {
        let points = self.constellation.points();
        let span = BRACKET_SIGMAS * self.sigma;
        (points[0] - span, points[points.len() - 1] + span)
    }

    /// Finds `y` such that the mixture mass between the anchor and `y`
    /// equals `target`.
    ///
    /// `Below(edge)` solves `P(edge < Y ≤ y) = target`, `Above(edge)` solves
    /// `P(y < Y ≤ edge) = target`. Anchoring at whichever edge is closer in
    /// probability keeps the target small and the residual relative-accurate
    /// in both tails. `lo`/`hi` is an initial bracket; it is widened
    /// geometrically when it does not contain the root.
    pub(crate) fn solve_anchored(&self, anchor: Anchor, target: f64, lo: f64, hi: f64) -> f64 {
        // residual(y) is increasing in y for both anchors.
        let residual = |y: f64| match anchor {
            Anchor::Below(edge) => self.interval_mass(edge, y) - target,
            Anchor::Above(edge) => target - self.interval_mass(y, edge),
        };
        let (mut lo, mut hi) = (lo, hi);
        let mut width = (hi - lo).max(self.sigma);
        for _ in 0..128 {
            if residual(lo) <= 0.0 {
                break;
            }
            lo -= width;
            width *= 2.0;
        }
        let mut width = (hi - lo).max(self.sigma);
        for _ in 0..128 {
            if residual(hi) >= 0.0 {
                break;
            }
            hi += width;
            width *= 2.0;
        }
        let mut y = match anchor {
            Anchor::Below(edge) if edge.is_finite() => edge.clamp(lo, hi),
            Anchor::Above(edge) if edge.is_finite() => edge.clamp(lo, hi),
            _ => 0.5 * (lo + hi),
        };
        for _ in 0..200 {
            let r = residual(y);
            if r == 0.0 {
                return y;
            }
            if r < 0.0 {
                lo = y;
            } else {
                hi = y;
            }
            let slope = self.density_unchecked(y);
            let newton = y - r / slope;
            let next = if slope > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            let tol = 4.0 * f64::EPSILON * libm::fabs(next).max(1.0);
            if libm::fabs(next - y) <= tol || hi - lo <= tol {
                return next;
            }
            y = next;
        }
        y
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Anchor {
    Below(f64),
    Above(f64),
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pam4(var: f64) -> ChannelModel {
        ChannelModel::new(Constellation::pam(4).unwrap(), var).unwrap()
    }

    /// Composite Simpson on a fine grid; independent of the adaptive routine.
    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + k as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn rejects_bad_noise() {
        let c = Constellation::pam(2).unwrap();
        assert!(ChannelModel::new(c.clone(), 0.0).is_err());
        assert!(ChannelModel::new(c.clone(), -1.0).is_err());
        assert!(ChannelModel::new(c, f64::NAN).is_err());
    }

    #[test]
    fn bpsk_density_at_zero() {
        let ch = ChannelModel::new(Constellation::pam(2).unwrap(), 1.0).unwrap();
        let expected = FRAC_1_SQRT_2PI * (-0.5f64).exp();
        assert_relative_eq!(ch.density(0.0).unwrap(), expected, max_relative = 1e-15);
        assert_relative_eq!(expected, 0.2420, epsilon = 1e-4);
        assert!(ch.density(f64::NAN).is_err());
    }

    #[test]
    fn density_is_symmetric_and_normalised() {
        let ch = pam4(0.8);
        for i in 0..100 {
            let y = i as f64 * 0.13;
            assert_relative_eq!(ch.density(y).unwrap(), ch.density(-y).unwrap(), max_relative = 1e-14);
            assert_relative_eq!(
                ch.log_density(y).unwrap(),
                ch.density(y).unwrap().ln(),
                max_relative = 1e-12
            );
        }
        let total = simpson(|y| ch.density_unchecked(y), -20.0, 20.0, 20_000);
        assert_relative_eq!(total, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn cdf_examples() {
        let ch = pam4(1.3);
        assert_relative_eq!(ch.cdf(0.0).unwrap(), 0.5, epsilon = 1e-15);
        assert!(ch.cdf(-1e6).unwrap() < 1e-300);
        assert_relative_eq!(ch.cdf(1e6).unwrap(), 1.0);
        assert_eq!(ch.sf(1e6).unwrap(), 0.0);
        assert!(ch.cdf(f64::NAN).is_err());
    }

    #[test]
    fn cdf_derivative_matches_density() {
        let h = 1e-5;
        for var in [0.05, 0.5, 2.0, 30.0] {
            let ch = pam4(var);
            for k in -60..=60 {
                let y = k as f64 * 0.1 * (1.0 + var.sqrt());
                let fd = (ch.cdf_unchecked(y + h) - ch.cdf_unchecked(y - h)) / (2.0 * h);
                assert!((fd - ch.density_unchecked(y)).abs() < 1e-6, "var {var} y {y}");
            }
        }
    }

    #[test]
    fn cdf_is_monotone_and_bounded() {
        let ch = pam4(0.3);
        let mut prev = 0.0;
        for k in -2000..=2000 {
            let f = ch.cdf_unchecked(k as f64 * 0.005);
            assert!((0.0..=1.0).contains(&f));
            assert!(f >= prev);
            prev = f;
        }
    }

    #[test]
    fn single_point_is_a_gaussian() {
        let c = Constellation::new(vec![0.5], vec![1.0], None).unwrap();
        let ch = ChannelModel::new(c, 4.0).unwrap();
        for k in -30..=30 {
            let y = k as f64 * 0.4;
            assert_relative_eq!(
                ch.cdf(y).unwrap(),
                math::normal_cdf((y - 0.5) / 2.0),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn quantile_examples() {
        let ch = pam4(0.9);
        assert!(ch.quantile(0.5).unwrap().abs() < 1e-9);
        assert!(ch.quantile(0.0).is_err());
        assert!(ch.quantile(1.0).is_err());
        assert!(ch.quantile(f64::NAN).is_err());
        assert!(ch.upper_quantile(1.0).is_err());
    }

    #[test]
    fn quantile_round_trip_bulk() {
        for var in [0.01, 0.2, 1.0, 10.0, 300.0] {
            let ch = pam4(var);
            let reach = 3.0 + 6.0 * ch.sigma();
            for k in -200..=200 {
                let y = reach * k as f64 / 200.0;
                let p = ch.cdf_unchecked(y);
                let back = ch.quantile(p).unwrap();
                // Where the mixture is nearly flat, p itself only pins y down
                // to about ε·p / f(y).
                let conditioning = 64.0 * f64::EPSILON * p.min(1.0 - p) / ch.density_unchecked(y);
                let tol = 1e-8 * y.abs().max(1.0) + conditioning;
                assert!((back - y).abs() <= tol, "var {var}: {y} -> {back}");
            }
        }
    }

    #[test]
    fn quantile_round_trip_tails() {
        // Lower tail through the CDF, upper tail through the survival
        // function; a p close to 1 cannot resolve y to 1e-6 in double
        // precision, the complementary parametrisation can.
        let ch = pam4(1.0);
        let mut y = -3.0;
        loop {
            let p = ch.cdf_unchecked(y);
            if p < 1e-12 {
                break;
            }
            assert!((ch.quantile(p).unwrap() - y).abs() <= 1e-6);
            let q = ch.sf_unchecked(-y);
            assert!((ch.upper_quantile(q).unwrap() + y).abs() <= 1e-6);
            y -= 0.05;
        }
    }

    #[test]
    fn quantile_is_increasing() {
        let ch = pam4(0.4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let p1: f64 = rng.random_range(1e-9..1.0 - 1e-9);
            let p2: f64 = rng.random_range(1e-9..1.0 - 1e-9);
            if p1 == p2 {
                continue;
            }
            let (a, b) = if p1 < p2 { (p1, p2) } else { (p2, p1) };
            assert!(ch.quantile(a).unwrap() < ch.quantile(b).unwrap());
        }
    }

    #[test]
    fn transmit_statistics() {
        let ch = pam4(0.25);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 1_000_000;
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for _ in 0..n {
            let y = ch.transmit(2, &mut rng).unwrap();
            sum += y;
            sum_sq += y * y;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        assert!((mean - 1.0).abs() < 4.0 * ch.sigma() / 1000.0);
        // sd of the sample variance is σ² sqrt(2/n) ≈ 0.14% of σ².
        assert!((var / 0.25 - 1.0).abs() < 0.01);
        assert!(ch.transmit(4, &mut rng).is_err());
    }

    #[test]
    fn transmit_noiseless_limit() {
        let ch = pam4(1e-30);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for i in 0..4 {
            assert_relative_eq!(
                ch.transmit(i, &mut rng).unwrap(),
                ch.constellation().points()[i],
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn transmit_is_deterministic_per_seed() {
        let ch = pam4(1.0);
        let a: vec::Vec<f64> = {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            (0..16).map(|_| ch.transmit(1, &mut rng).unwrap()).collect()
        };
        let b: vec::Vec<f64> = {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            (0..16).map(|_| ch.transmit(1, &mut rng).unwrap()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn likelihood_ratio_matches_direct_evaluation() {
        let ch = pam4(0.6);
        for k in -40..=40 {
            let y = k as f64 * 0.15;
            for j in 0..4 {
                let direct = (ch.conditional_density(y, j).unwrap() / ch.density_unchecked(y)).ln();
                assert_relative_eq!(ch.log_likelihood_ratio(y, j), direct, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn interval_mass_consistency() {
        let ch = pam4(0.7);
        assert_relative_eq!(ch.interval_mass(f64::NEG_INFINITY, f64::INFINITY), 1.0, epsilon = 1e-15);
        let m = ch.interval_mass(-0.3, 1.7);
        assert_relative_eq!(m, ch.cdf_unchecked(1.7) - ch.cdf_unchecked(-0.3), max_relative = 1e-12);
        assert_eq!(ch.interval_mass(1.0, 1.0), 0.0);
    }
}
