//! The piecewise softening transform.
//!
//! Inside each decision region `D_i` Bob maps the channel output through the
//! normalised output CDF,
//!
//! ```text
//! increasing:  n = (F_Y(y) - F_Y(inf D_i)) / ΔF_i
//! decreasing:  n = (F_Y(sup D_i) - F_Y(y)) / ΔF_i
//! ```
//!
//! with `ΔF_i = F_Y(sup D_i) - F_Y(inf D_i) = P(X̂ = a_i)`. Conditioned on any
//! decision, `n` is uniform on `[0, 1]`, so publishing it reveals nothing
//! about the decision itself. Each piece is a bijection from `D_i` onto
//! `[0, 1]` with `|g_i'(y)| = f_Y(y) / ΔF_i` for either orientation.
//!
//! All interval probabilities are evaluated relative to the nearer region
//! edge (see [`ChannelModel::interval_mass`]) so that both tails keep full
//! relative precision.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::channel::{Anchor, ChannelModel};
use crate::constellation::DecisionRegions;
use crate::error::{Error, Result};

/// Metrics are clamped to `[ε, 1 - ε]` before inversion so that the outer
/// regions never map to `±∞`.
pub const METRIC_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

impl Monotonicity {
    pub fn flipped(self) -> Self {
        match self {
            Self::Increasing => Self::Decreasing,
            Self::Decreasing => Self::Increasing,
        }
    }

    fn symbol(self) -> char {
        match self {
            Self::Increasing => '+',
            Self::Decreasing => '-',
        }
    }
}

/// One orientation per decision region.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonotonicityConfig(Vec<Monotonicity>);

impl MonotonicityConfig {
    pub fn new(signs: Vec<Monotonicity>) -> Self {
        Self(signs)
    }

    /// All pieces increasing.
    pub fn base(order: usize) -> Self {
        Self(alloc::vec![Monotonicity::Increasing; order])
    }

    /// Orientations alternate between adjacent regions, starting increasing.
    pub fn alternating(order: usize) -> Self {
        Self(
            (0..order)
                .map(|i| {
                    if i % 2 == 0 {
                        Monotonicity::Increasing
                    } else {
                        Monotonicity::Decreasing
                    }
                })
                .collect(),
        )
    }

    /// Every one of the `2^order` configurations. Entry `k` has region `i`
    /// decreasing iff bit `i` of `k` is set, so entry 0 is [`base`](Self::base).
    pub fn enumerate(order: usize) -> impl Iterator<Item = Self> {
        assert!(order < 31, "too many regions to enumerate");
        (0u32..1 << order).map(move |k| {
            Self(
                (0..order)
                    .map(|i| {
                        if k >> i & 1 == 0 {
                            Monotonicity::Increasing
                        } else {
                            Monotonicity::Decreasing
                        }
                    })
                    .collect(),
            )
        })
    }

    /// Parses `base`, `alternating`, or an explicit sign string such as
    /// `+-+-` with one character per region.
    pub fn parse(text: &str, order: usize) -> Result<Self> {
        let text = text.trim();
        match text {
            "base" => return Ok(Self::base(order)),
            "alternating" => return Ok(Self::alternating(order)),
            _ => {}
        }
        let signs = text
            .chars()
            .map(|c| match c {
                '+' => Ok(Monotonicity::Increasing),
                '-' => Ok(Monotonicity::Decreasing),
                other => Err(Error::InvalidConfig(alloc::format!(
                    "unexpected character {other:?} in {text:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if signs.len() != order {
            return Err(Error::InvalidConfig(alloc::format!(
                "{text:?} has {} signs, constellation has {order} regions",
                signs.len()
            )));
        }
        Ok(Self(signs))
    }

    pub fn signs(&self) -> &[Monotonicity] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sign string, e.g. `+-+-`.
    pub fn to_sign_string(&self) -> String {
        self.0.iter().map(|m| m.symbol()).collect()
    }
}

impl fmt::Display for MonotonicityConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.0 {
            write!(f, "{}", m.symbol())?;
        }
        Ok(())
    }
}

/// What Bob computes from one channel output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Softened {
    pub n: f64,
    pub decision: usize,
}

/// The channel output that produced metric `n` in region `i`, together with
/// `ln(ΔF_i / s_i)`, where `s_i` is any extra scaling of the piece. The piece
/// slope at `y` is `f_Y(y) · s_i / ΔF_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preimage {
    pub y: f64,
    pub log_mass: f64,
}

/// A piecewise map from channel outputs to disclosed metrics.
///
/// Alice-side metrics and the information-theoretic evaluators are written
/// against this trait so that deliberately broken maps can be audited with
/// the same code as the real transform.
pub trait SoftMetric {
    fn channel(&self) -> &ChannelModel;

    fn regions(&self) -> &DecisionRegions;

    /// `P(X̂ = a_i)`.
    fn decision_probability(&self, i: usize) -> f64;

    /// Bob's side: decision and disclosed metric for channel output `y`.
    fn soften(&self, y: f64) -> Result<Softened>;

    /// Alice's side: where in region `i` an output would have had to land to
    /// produce `n`, or `None` if piece `i` never emits `n`.
    fn preimage(&self, n: f64, i: usize) -> Result<Option<Preimage>>;
}

/// The leak-free softening transform for one channel and one monotonicity
/// configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SofteningTransform {
    channel: ChannelModel,
    regions: DecisionRegions,
    config: MonotonicityConfig,
    lower_cdf: Vec<f64>,
    upper_cdf: Vec<f64>,
    mass: Vec<f64>,
    log_mass: Vec<f64>,
}

impl SofteningTransform {
    /// Builds the transform over the channel's MAP decision regions.
    pub fn new(channel: ChannelModel, config: MonotonicityConfig) -> Result<Self> {
        let regions = channel.constellation().map_decision_regions(channel.noise_variance())?;
        Self::with_regions(channel, regions, config)
    }

    /// Builds the transform over explicit decision regions.
    pub fn with_regions(channel: ChannelModel, regions: DecisionRegions, config: MonotonicityConfig) -> Result<Self> {
        let order = channel.constellation().order();
        if regions.len() != order {
            return Err(Error::InvalidParameter(alloc::format!(
                "{} decision regions for {order} symbols",
                regions.len()
            )));
        }
        if config.len() != order {
            return Err(Error::InvalidConfig(alloc::format!(
                "{} signs for {order} regions",
                config.len()
            )));
        }
        let mut lower_cdf = Vec::with_capacity(order);
        let mut upper_cdf = Vec::with_capacity(order);
        let mut mass = Vec::with_capacity(order);
        let mut edge_cdf = 0.0;
        for i in 0..order {
            lower_cdf.push(edge_cdf);
            let hi = regions.upper(i);
            edge_cdf = if hi.is_finite() { channel.cdf_unchecked(hi) } else { 1.0 };
            upper_cdf.push(edge_cdf);
            let m = channel.interval_mass(regions.lower(i), hi);
            if m.is_nan() || m <= 0.0 {
                return Err(Error::InvalidParameter(alloc::format!(
                    "decision region {i} has zero probability"
                )));
            }
            mass.push(m);
        }
        let log_mass = mass.iter().map(|&m| libm::log(m)).collect();
        Ok(Self {
            channel,
            regions,
            config,
            lower_cdf,
            upper_cdf,
            mass,
            log_mass,
        })
    }

    pub fn config(&self) -> &MonotonicityConfig {
        &self.config
    }

    /// `(F_Y(inf D_i), F_Y(sup D_i))` per region.
    pub fn cdf_edges(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.lower_cdf.iter().copied().zip(self.upper_cdf.iter().copied())
    }

    /// `ΔF_i` per region.
    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    fn check_region(&self, i: usize) -> Result<()> {
        self.channel.constellation().check_index(i)
    }

    fn check_metric(n: f64) -> Result<()> {
        if n.is_nan() {
            Err(Error::NotANumber)
        } else if !(0.0..=1.0).contains(&n) {
            Err(Error::MetricOutOfRange(n))
        } else {
            Ok(())
        }
    }

    /// Decision and disclosed metric for channel output `y`.
    pub fn soften(&self, y: f64) -> Result<Softened> {
        let decision = self.regions.decide(y)?;
        let (lo, hi) = (self.regions.lower(decision), self.regions.upper(decision));
        let covered = match self.config.0[decision] {
            Monotonicity::Increasing => self.channel.interval_mass(lo, y),
            Monotonicity::Decreasing => self.channel.interval_mass(y, hi),
        };
        let n = (covered / self.mass[decision]).clamp(0.0, 1.0);
        Ok(Softened { n, decision })
    }

    /// Inverse of piece `i`: the unique `y` in the closure of `D_i` with
    /// `g_i(y) = n`. `n` is clamped to `[ε, 1 - ε]` first.
    pub fn unsoften(&self, n: f64, i: usize) -> Result<f64> {
        Self::check_metric(n)?;
        self.check_region(i)?;
        Ok(self.unsoften_unchecked(n, i))
    }

    fn unsoften_unchecked(&self, n: f64, i: usize) -> f64 {
        let n = n.clamp(METRIC_EPSILON, 1.0 - METRIC_EPSILON);
        // Fractions of the region mass below and above the preimage.
        let (below, above) = match self.config.0[i] {
            Monotonicity::Increasing => (n, 1.0 - n),
            Monotonicity::Decreasing => (1.0 - n, n),
        };
        let (lo, hi) = (self.regions.lower(i), self.regions.upper(i));
        let span = 10.0 * self.channel.sigma();
        let (bracket_lo, bracket_hi) = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => (lo, hi),
            (true, false) => (lo, lo + span),
            (false, true) => (hi - span, hi),
            (false, false) => {
                let points = self.channel.constellation().points();
                (points[0] - span, points[points.len() - 1] + span)
            }
        };
        if below <= above {
            self.channel
                .solve_anchored(Anchor::Below(lo), below * self.mass[i], bracket_lo, bracket_hi)
        } else {
            self.channel
                .solve_anchored(Anchor::Above(hi), above * self.mass[i], bracket_lo, bracket_hi)
        }
    }

    /// `|g_i'(g_i⁻¹(n))| = f_Y(g_i⁻¹(n)) / ΔF_i`.
    ///
    /// An `n` sitting exactly on the infinite end of an outer region, or a
    /// density that underflows to zero, is reported as
    /// [`Error::TailSaturation`].
    pub fn transform_jacobian(&self, n: f64, i: usize) -> Result<f64> {
        Self::check_metric(n)?;
        self.check_region(i)?;
        let (lo, hi) = (self.regions.lower(i), self.regions.upper(i));
        let at_infinite_end = match self.config.0[i] {
            Monotonicity::Increasing => (n == 0.0 && lo.is_infinite()) || (n == 1.0 && hi.is_infinite()),
            Monotonicity::Decreasing => (n == 1.0 && lo.is_infinite()) || (n == 0.0 && hi.is_infinite()),
        };
        if at_infinite_end {
            return Err(Error::TailSaturation { index: i, n });
        }
        let y = self.unsoften_unchecked(n, i);
        let slope = self.channel.density_unchecked(y) / self.mass[i];
        if slope > 0.0 && slope.is_finite() {
            Ok(slope)
        } else {
            Err(Error::TailSaturation { index: i, n })
        }
    }
}

impl SoftMetric for SofteningTransform {
    fn channel(&self) -> &ChannelModel {
        &self.channel
    }

    fn regions(&self) -> &DecisionRegions {
        &self.regions
    }

    fn decision_probability(&self, i: usize) -> f64 {
        self.mass[i]
    }

    fn soften(&self, y: f64) -> Result<Softened> {
        SofteningTransform::soften(self, y)
    }

    fn preimage(&self, n: f64, i: usize) -> Result<Option<Preimage>> {
        Self::check_metric(n)?;
        self.check_region(i)?;
        Ok(Some(Preimage {
            y: self.unsoften_unchecked(n, i),
            log_mass: self.log_mass[i],
        }))
    }
}

/// Deliberately non-conforming maps, used as negative controls by the
/// leakage audits.
#[doc(hidden)]
pub mod control {
    use super::*;

    /// Shrinks piece `i` onto `[0, (i + 1) / M]`, so the metric's range
    /// betrays the decision.
    #[derive(Debug, Clone)]
    pub struct RegionScaledTransform {
        inner: SofteningTransform,
        scales: Vec<f64>,
    }

    impl RegionScaledTransform {
        pub fn new(inner: SofteningTransform) -> Self {
            let order = inner.mass.len();
            let scales = (0..order).map(|i| (i + 1) as f64 / order as f64).collect();
            Self { inner, scales }
        }
    }

    impl SoftMetric for RegionScaledTransform {
        fn channel(&self) -> &ChannelModel {
            &self.inner.channel
        }

        fn regions(&self) -> &DecisionRegions {
            &self.inner.regions
        }

        fn decision_probability(&self, i: usize) -> f64 {
            self.inner.mass[i]
        }

        fn soften(&self, y: f64) -> Result<Softened> {
            let s = self.inner.soften(y)?;
            Ok(Softened {
                n: s.n * self.scales[s.decision],
                decision: s.decision,
            })
        }

        fn preimage(&self, n: f64, i: usize) -> Result<Option<Preimage>> {
            SofteningTransform::check_metric(n)?;
            self.inner.check_region(i)?;
            let scale = self.scales[i];
            if n > scale {
                return Ok(None);
            }
            Ok(Some(Preimage {
                y: self.inner.unsoften_unchecked(n / scale, i),
                log_mass: self.inner.log_mass[i] - libm::log(scale),
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::Constellation;
    use alloc::vec;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::vec::Vec;

    fn transform(order: usize, var: f64, config: MonotonicityConfig) -> SofteningTransform {
        let ch = ChannelModel::new(Constellation::pam(order).unwrap(), var).unwrap();
        SofteningTransform::new(ch, config).unwrap()
    }

    /// Asymptotic Kolmogorov 1% critical value, `1.6276 / sqrt(n)`.
    fn ks_critical(n: usize) -> f64 {
        1.627_6 / (n as f64).sqrt()
    }

    fn ks_uniform(samples: &mut [f64]) -> f64 {
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = samples.len() as f64;
        samples
            .iter()
            .enumerate()
            .map(|(k, &u)| ((k as f64 + 1.0) / n - u).max(u - k as f64 / n))
            .fold(0.0, f64::max)
    }

    #[test]
    fn named_configs() {
        use Monotonicity::*;
        assert_eq!(MonotonicityConfig::base(4).signs(), &[Increasing; 4]);
        assert_eq!(
            MonotonicityConfig::alternating(4).signs(),
            &[Increasing, Decreasing, Increasing, Decreasing]
        );
        assert_eq!(MonotonicityConfig::enumerate(2).count(), 4);
        assert_eq!(MonotonicityConfig::enumerate(4).count(), 16);
        assert_eq!(
            MonotonicityConfig::enumerate(4).next().unwrap(),
            MonotonicityConfig::base(4)
        );
        let all: std::collections::HashSet<_> = MonotonicityConfig::enumerate(4).collect();
        assert_eq!(all.len(), 16);
    }

    #[test]
    fn parse_configs() {
        assert_eq!(
            MonotonicityConfig::parse("alternating", 4).unwrap(),
            MonotonicityConfig::parse("+-+-", 4).unwrap()
        );
        assert_eq!(MonotonicityConfig::parse("base", 2).unwrap().to_sign_string(), "++");
        assert!(MonotonicityConfig::parse("+-+", 4).is_err());
        assert!(MonotonicityConfig::parse("+x+-", 4).is_err());
        assert_eq!(std::format!("{}", MonotonicityConfig::alternating(3)), "+-+");
    }

    #[test]
    fn masses_partition_unity_and_edges_are_contiguous() {
        for var in [1e-3, 0.1, 1.0, 50.0, 1e4] {
            let t = transform(4, var, MonotonicityConfig::base(4));
            let total: f64 = t.masses().iter().sum();
            assert!((total - 1.0).abs() < 1e-10);
            let edges: Vec<_> = t.cdf_edges().collect();
            for w in edges.windows(2) {
                assert_eq!(w[0].1, w[1].0);
            }
            assert_eq!(edges[0].0, 0.0);
            assert_eq!(edges[3].1, 1.0);
            for ((lo, hi), m) in edges.iter().zip(t.masses()) {
                assert!(*m > 0.0);
                assert!((hi - lo - m).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn edge_values() {
        let t = transform(2, 1.0, MonotonicityConfig::base(2));
        let s = t.soften(1e-12).unwrap();
        assert_eq!(s.decision, 1);
        assert!(s.n < 1e-11);
        let s = t.soften(1e6).unwrap();
        assert_eq!(s.decision, 1);
        assert_relative_eq!(s.n, 1.0);
        assert!(t.soften(f64::NAN).is_err());
    }

    #[test]
    fn probability_midpoint_maps_to_half() {
        for config in MonotonicityConfig::enumerate(4) {
            let t = transform(4, 0.8, config);
            for (i, ((lo, _), m)) in t.cdf_edges().zip(t.masses()).enumerate() {
                let y = t.channel().quantile(lo + 0.5 * m).unwrap();
                let s = t.soften(y).unwrap();
                assert_eq!(s.decision, i);
                assert_relative_eq!(s.n, 0.5, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn soften_is_monotone_inside_regions() {
        let t = transform(4, 0.5, MonotonicityConfig::alternating(4));
        let mut prev: Option<Softened> = None;
        for k in -3000..=3000 {
            let y = k as f64 * 0.002;
            let s = t.soften(y).unwrap();
            if let Some(p) = prev {
                if p.decision == s.decision {
                    match t.config().signs()[s.decision] {
                        Monotonicity::Increasing => assert!(s.n > p.n),
                        Monotonicity::Decreasing => assert!(s.n < p.n),
                    }
                }
            }
            prev = Some(s);
        }
    }

    #[test]
    fn unsoften_round_trip() {
        for config in [
            MonotonicityConfig::base(4),
            MonotonicityConfig::alternating(4),
            MonotonicityConfig::parse("--+-", 4).unwrap(),
        ] {
            for var in [0.05, 0.6, 5.0] {
                let t = transform(4, var, config.clone());
                let reach = 3.0 + 6.0 * t.channel().sigma();
                for k in -1000..=1000 {
                    let y = reach * k as f64 / 1000.0;
                    let s = t.soften(y).unwrap();
                    let back = t.unsoften(s.n, s.decision).unwrap();
                    // Deep in an outer tail n sits within a few ulps of 0 or
                    // 1 and only resolves y to about ε / |dn/dy|.
                    let slope = t.transform_jacobian(s.n, s.decision).unwrap();
                    let tol = 1e-7 + 8.0 * f64::EPSILON / slope;
                    assert!((back - y).abs() <= tol, "{config} var {var}: {y} -> {} -> {back}", s.n);
                }
            }
        }
    }

    #[test]
    fn unsoften_bpsk_half() {
        let t = transform(2, 1.0, MonotonicityConfig::base(2));
        let q = t.channel().quantile(0.75).unwrap();
        assert_relative_eq!(t.unsoften(0.5, 1).unwrap(), q, epsilon = 1e-12);
        assert!(matches!(t.unsoften(1.5, 1), Err(Error::MetricOutOfRange(_))));
        assert!(matches!(t.unsoften(-0.1, 0), Err(Error::MetricOutOfRange(_))));
        assert!(t.unsoften(0.5, 2).is_err());
    }

    #[test]
    fn decreasing_piece_mirrors_increasing() {
        let inc = transform(4, 0.7, MonotonicityConfig::base(4));
        let dec = transform(4, 0.7, MonotonicityConfig::parse("----", 4).unwrap());
        for i in 0..4 {
            for k in 1..100 {
                let n = k as f64 / 100.0;
                assert_relative_eq!(
                    dec.unsoften(n, i).unwrap(),
                    inc.unsoften(1.0 - n, i).unwrap(),
                    epsilon = 1e-10
                );
                assert_relative_eq!(
                    dec.transform_jacobian(n, i).unwrap(),
                    inc.transform_jacobian(1.0 - n, i).unwrap(),
                    max_relative = 1e-9
                );
            }
        }
    }

    #[test]
    fn jacobian_examples() {
        let t = transform(2, 1.0, MonotonicityConfig::base(2));
        let q = t.channel().quantile(0.75).unwrap();
        let expected = t.channel().density(q).unwrap() / 0.5;
        assert_relative_eq!(t.transform_jacobian(0.5, 1).unwrap(), expected, max_relative = 1e-12);
        assert!(matches!(
            t.transform_jacobian(1.0, 1),
            Err(Error::TailSaturation { index: 1, .. })
        ));
        assert!(matches!(
            t.transform_jacobian(0.0, 0),
            Err(Error::TailSaturation { index: 0, .. })
        ));
        // The bounded end of an outer region is fine.
        assert!(t.transform_jacobian(0.0, 1).is_ok());
    }

    #[test]
    fn jacobian_matches_finite_difference() {
        let h = 1e-6;
        for config in [MonotonicityConfig::base(4), MonotonicityConfig::alternating(4)] {
            let t = transform(4, 0.9, config);
            for i in 0..4 {
                for k in 1..20 {
                    let n = k as f64 / 20.0;
                    let y = t.unsoften(n, i).unwrap();
                    let a = t.soften(y - h).unwrap();
                    let b = t.soften(y + h).unwrap();
                    if a.decision != i || b.decision != i {
                        continue;
                    }
                    let fd = (b.n - a.n).abs() / (2.0 * h);
                    assert!((fd - t.transform_jacobian(n, i).unwrap()).abs() < 1e-5);
                }
            }
        }
    }

    #[test]
    fn conditional_uniformity_per_decision() {
        for (var, config) in [
            (0.3, MonotonicityConfig::base(4)),
            (2.0, MonotonicityConfig::alternating(4)),
        ] {
            let t = transform(4, var, config);
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let mut per_decision: Vec<Vec<f64>> = vec![Vec::new(); 4];
            while per_decision.iter().any(|v| v.len() < 100_000) {
                let x = (rand::Rng::random::<u32>(&mut rng) % 4) as usize;
                let y = t.channel().transmit(x, &mut rng).unwrap();
                let s = t.soften(y).unwrap();
                if per_decision[s.decision].len() < 100_000 {
                    per_decision[s.decision].push(s.n);
                }
            }
            for (i, samples) in per_decision.iter_mut().enumerate() {
                let d = ks_uniform(samples);
                assert!(d < ks_critical(samples.len()), "decision {i}: D = {d}");
            }
        }
    }

    #[test]
    fn scaled_control_changes_range() {
        let t = transform(4, 1.0, MonotonicityConfig::base(4));
        let broken = control::RegionScaledTransform::new(t);
        assert!(broken.preimage(0.3, 0).unwrap().is_none());
        assert!(broken.preimage(0.2, 0).unwrap().is_some());
        let s = broken.soften(2.5).unwrap();
        assert_eq!(s.decision, 3);
    }
}
