//! Goodness-of-fit, interval and information estimates for Monte-Carlo runs.

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub samples: usize,
}

/// One-sample Kolmogorov–Smirnov test against Uniform(0, 1).
///
/// The p-value uses the asymptotic Kolmogorov distribution with Stephens'
/// small-sample correction, accurate to a few percent for `n ≥ 35`.
pub fn ks_uniform(samples: &mut [f64]) -> KsResult {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    let nf = n as f64;
    let statistic = samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let x = x.clamp(0.0, 1.0);
            ((i + 1) as f64 / nf - x).max(x - i as f64 / nf)
        })
        .fold(0.0, f64::max);
    let root = nf.sqrt();
    KsResult {
        statistic,
        p_value: kolmogorov_sf((root + 0.12 + 0.11 / root) * statistic),
        samples: n,
    }
}

/// `P(K > λ)` for the Kolmogorov distribution.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Plug-in mutual information in bits between a `[0, 1]` metric, binned
/// into `bins` equal cells, and a discrete label.
///
/// Its bias is about `(bins − 1)(labels − 1) / (2 N ln 2)` bits upwards.
pub fn binned_mutual_information(metrics: &[f64], labels: &[usize], bins: usize, label_count: usize) -> f64 {
    assert_eq!(metrics.len(), labels.len());
    let total = metrics.len();
    if total == 0 {
        return 0.0;
    }
    let mut joint = vec![0u64; bins * label_count];
    for (&n, &label) in metrics.iter().zip(labels) {
        let bin = ((n * bins as f64) as usize).min(bins - 1);
        joint[bin * label_count + label] += 1;
    }
    let mut bin_marginal = vec![0u64; bins];
    let mut label_marginal = vec![0u64; label_count];
    for b in 0..bins {
        for l in 0..label_count {
            let c = joint[b * label_count + l];
            bin_marginal[b] += c;
            label_marginal[l] += c;
        }
    }
    let t = total as f64;
    let mut mi = 0.0;
    for b in 0..bins {
        for l in 0..label_count {
            let c = joint[b * label_count + l];
            if c > 0 {
                let c = c as f64;
                mi += c / t * (c * t / (bin_marginal[b] as f64 * label_marginal[l] as f64)).log2();
            }
        }
    }
    mi.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn wilson_reference_values() {
        // 5 of 100 at 95%: (0.02154, 0.11175).
        let (lo, hi) = wilson_interval(5, 100, Z_95);
        assert!((lo - 0.021_544).abs() < 1e-5, "{lo}");
        assert!((hi - 0.111_752).abs() < 1e-5, "{hi}");
        let (lo, hi) = wilson_interval(0, 1000, Z_95);
        assert!(lo < 1e-15);
        assert!((hi - 0.003_826).abs() < 1e-5, "{hi}");
        assert_eq!(wilson_interval(0, 0, Z_95), (0.0, 1.0));
    }

    #[test]
    fn kolmogorov_quantiles() {
        // Classical critical values: 1.3581 at 5%, 1.6276 at 1%.
        assert!((kolmogorov_sf(1.3581) - 0.05).abs() < 1e-4);
        assert!((kolmogorov_sf(1.6276) - 0.01).abs() < 1e-4);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
    }

    #[test]
    fn ks_accepts_uniform_and_rejects_shifted() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut u: Vec<f64> = (0..100_000).map(|_| rng.random::<f64>()).collect();
        let r = ks_uniform(&mut u);
        assert!(r.p_value > 0.01, "{r:?}");
        let mut skewed: Vec<f64> = (0..100_000).map(|_| rng.random::<f64>().powf(1.02)).collect();
        assert!(ks_uniform(&mut skewed).p_value < 1e-6);
    }

    #[test]
    fn ks_single_sample() {
        let r = ks_uniform(&mut [0.5]);
        assert_eq!(r.statistic, 0.5);
    }

    #[test]
    fn binned_mi_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 200_000;
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..4)).collect();
        let independent: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let mi = binned_mutual_information(&independent, &labels, 16, 4);
        // Bias 15·3 / (2·2e5·ln 2) ≈ 1.6e-4.
        assert!(mi < 5e-4, "{mi}");
        let revealing: Vec<f64> = labels.iter().map(|&l| (l as f64 + rng.random::<f64>()) / 4.0).collect();
        assert!((binned_mutual_information(&revealing, &labels, 16, 4) - 2.0).abs() < 1e-2);
    }
}
