//! Scalar helpers shared by the numerical modules.

pub use core::f64::consts::{LN_2, SQRT_2};

/// `1 / sqrt(2π)`.
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal CDF `Φ(x)`, via `erfc` so the lower tail keeps full
/// relative precision.
#[inline]
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Standard normal survival function `1 - Φ(x)`.
#[inline]
pub fn normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// `Φ(b) - Φ(a)` for `a <= b`, evaluated without catastrophic cancellation.
///
/// Infinite endpoints are allowed.
pub fn normal_interval(a: f64, b: f64) -> f64 {
    debug_assert!(a <= b);
    if a >= 0.0 {
        normal_sf(a) - normal_sf(b)
    } else if b <= 0.0 {
        normal_cdf(b) - normal_cdf(a)
    } else {
        // Straddles zero: both erf terms have opposite signs, no cancellation.
        let upper = if b.is_infinite() { 1.0 } else { libm::erf(b / SQRT_2) };
        let lower = if a.is_infinite() { -1.0 } else { libm::erf(a / SQRT_2) };
        0.5 * (upper - lower)
    }
}

/// `ln Σ exp(x_k)`; `-inf` for an empty input or all `-inf` terms.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut max = f64::NEG_INFINITY;
    let mut acc = 0.0;
    for t in terms {
        if t == f64::NEG_INFINITY {
            continue;
        }
        if t > max {
            acc = acc * libm::exp(max - t) + 1.0;
            max = t;
        } else {
            acc += libm::exp(t - max);
        }
    }
    if max == f64::NEG_INFINITY {
        max
    } else {
        max + libm::log(acc)
    }
}

/// Binary entropy of a probability vector, in bits. Zero entries contribute
/// nothing.
pub fn entropy_bits(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * libm::log2(p))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cdf_and_sf_are_complementary() {
        for i in -80..=80 {
            let x = i as f64 * 0.1;
            assert_relative_eq!(normal_cdf(x) + normal_sf(x), 1.0, epsilon = 1e-15);
        }
        assert_relative_eq!(normal_cdf(0.0), 0.5);
        // Far-tail relative precision: Φ(-30) ≈ 4.906713927148187e-198.
        assert_relative_eq!(normal_cdf(-30.0), 4.906_713_927_148_187e-198, max_relative = 1e-12);
    }

    #[test]
    fn interval_matches_naive_difference_in_bulk() {
        let pairs = [(-1.0, 0.5), (-3.0, -2.0), (0.2, 4.0), (-0.001, 0.001)];
        for (a, b) in pairs {
            let naive = normal_cdf(b) - normal_cdf(a);
            assert_relative_eq!(normal_interval(a, b), naive, max_relative = 1e-9);
        }
        assert_relative_eq!(normal_interval(f64::NEG_INFINITY, f64::INFINITY), 1.0, epsilon = 1e-16);
        assert_relative_eq!(normal_interval(f64::NEG_INFINITY, 0.0), 0.5);
        // Upper tail keeps relative precision where 1 - Φ(a) would round to 0.
        assert_relative_eq!(
            normal_interval(30.0, f64::INFINITY),
            4.906_713_927_148_187e-198,
            max_relative = 1e-12
        );
    }

    #[test]
    fn log_sum_exp_handles_extremes() {
        assert_relative_eq!(log_sum_exp([0.0, 0.0]), LN_2);
        assert_relative_eq!(log_sum_exp([-1000.0, -1000.0]), -1000.0 + LN_2);
        assert_eq!(log_sum_exp([f64::NEG_INFINITY]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp(core::iter::empty()), f64::NEG_INFINITY);
        assert_relative_eq!(log_sum_exp([3.0, f64::NEG_INFINITY]), 3.0);
    }

    #[test]
    fn entropy_of_uniform() {
        assert_relative_eq!(entropy_bits(&[0.25; 4]), 2.0);
        assert_relative_eq!(entropy_bits(&[1.0, 0.0]), 0.0);
    }
}
