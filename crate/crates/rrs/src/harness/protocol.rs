//! One reconciliation frame, end to end.

use rand::Rng;
use rrs_core::metrics::{AliceDemapper, ChannelDemapper, HardDemapper};
use rrs_core::{BpDecoder, ChannelModel, DecodeOutcome, LdpcCode, MonotonicityConfig, SoftMetric, SofteningTransform};
use serde::Serialize;

use super::{substream, ConstellationSpec};
use crate::{Error, Result};

/// What crossed the public channel: Bob's soft metrics and his syndrome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transcript {
    pub metrics: Vec<f64>,
    pub syndrome: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct ProtocolSpec<'a> {
    pub constellation: ConstellationSpec,
    pub snr_db: f64,
    pub config: MonotonicityConfig,
    pub alpha: f64,
    pub code: &'a LdpcCode,
    pub max_iterations: usize,
}

#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub alice_symbols: Vec<usize>,
    /// Alice's reconciled estimate of Bob's bits.
    pub alice_bits: Vec<u8>,
    pub bob_bits: Vec<u8>,
    pub transcript: Transcript,
    pub converged: bool,
    pub iterations: usize,
}

impl ProtocolRun {
    pub fn bit_errors(&self) -> usize {
        self.alice_bits
            .iter()
            .zip(&self.bob_bits)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Simulates one frame: Alice draws symbols, the channel adds noise, Bob
/// decides, softens and publishes metrics plus syndrome, Alice forms LAPPRs
/// from her symbols and the metrics and decodes towards Bob's coset.
pub fn run_protocol(spec: &ProtocolSpec<'_>, seed: u64) -> Result<ProtocolRun> {
    if !(spec.alpha > 0.0 && spec.alpha.is_finite()) {
        return Err(Error::Validation(format!("alpha must be positive, got {}", spec.alpha)));
    }
    let channel = spec.constellation.channel(spec.snr_db)?;
    let transform = SofteningTransform::new(channel.clone(), spec.config.clone())?;
    let mut rng = substream(seed, 0, 0);
    let draws = FrameDraws::generate(&channel, spec.code.n(), spec.constellation.dimensions(), &mut rng)?;
    let mut decoder = BpDecoder::new(spec.code);
    let frame = reconcile_rrs(
        spec.code,
        &mut decoder,
        &transform,
        &draws,
        spec.alpha,
        spec.max_iterations,
    )?;
    Ok(ProtocolRun {
        alice_symbols: draws.x,
        alice_bits: frame.outcome.bits,
        bob_bits: frame.reference,
        transcript: frame.transcript,
        converged: frame.outcome.converged,
        iterations: frame.outcome.iterations,
    })
}

/// Alice's symbols and Bob's channel outputs for one frame.
#[derive(Debug, Clone)]
pub(crate) struct FrameDraws {
    pub x: Vec<usize>,
    pub y: Vec<f64>,
}

impl FrameDraws {
    /// Enough real symbols to carry `n` bits, rounded up to whole channel
    /// uses. Symbols alternate I, Q for two-dimensional constellations.
    pub fn symbols_for(n: usize, bits_per_symbol: usize, dimensions: usize) -> usize {
        let per_use = bits_per_symbol * dimensions;
        n.div_ceil(per_use) * dimensions
    }

    pub fn generate<R: Rng + ?Sized>(channel: &ChannelModel, n: usize, dimensions: usize, rng: &mut R) -> Result<Self> {
        let c = channel.constellation();
        let symbols = Self::symbols_for(n, c.bits_per_symbol(), dimensions);
        let mut x = Vec::with_capacity(symbols);
        let mut y = Vec::with_capacity(symbols);
        for _ in 0..symbols {
            let j = rng.random_range(0..c.order());
            x.push(j);
            y.push(channel.transmit(j, rng)?);
        }
        Ok(Self { x, y })
    }
}

/// Result of reconciling one frame with one scheme.
pub(crate) struct Reconciled {
    /// The bits the decoder is supposed to recover.
    pub reference: Vec<u8>,
    pub outcome: DecodeOutcome,
    pub transcript: Transcript,
}

impl Reconciled {
    pub fn bit_errors(&self) -> u64 {
        self.reference
            .iter()
            .zip(&self.outcome.bits)
            .filter(|(a, b)| a != b)
            .count() as u64
    }
}

fn demap_truncated(channel: &ChannelModel, symbols: &[usize], n: usize) -> Result<Vec<u8>> {
    let mut bits = channel.constellation().demap(symbols)?;
    bits.truncate(n);
    Ok(bits)
}

fn decode(
    code: &LdpcCode,
    decoder: &mut BpDecoder<'_>,
    mut llrs: Vec<f64>,
    reference: Vec<u8>,
    metrics: Vec<f64>,
    max_iterations: usize,
) -> Result<Reconciled> {
    llrs.truncate(code.n());
    let syndrome = code.syndrome(&reference)?;
    let outcome = decoder.decode(&llrs, &syndrome, max_iterations)?;
    Ok(Reconciled {
        reference,
        outcome,
        transcript: Transcript {
            metrics,
            syndrome: syndrome.0,
        },
    })
}

/// Reverse reconciliation with softened metrics.
pub(crate) fn reconcile_rrs<T: SoftMetric + ?Sized>(
    code: &LdpcCode,
    decoder: &mut BpDecoder<'_>,
    transform: &T,
    draws: &FrameDraws,
    alpha: f64,
    max_iterations: usize,
) -> Result<Reconciled> {
    let channel = transform.channel();
    let bits_per_symbol = channel.constellation().bits_per_symbol();
    let mut metrics = Vec::with_capacity(draws.y.len());
    let mut decisions = Vec::with_capacity(draws.y.len());
    for &y in &draws.y {
        let s = transform.soften(y)?;
        metrics.push(s.n);
        decisions.push(s.decision);
    }
    let bob = demap_truncated(channel, &decisions, code.n())?;

    let mut alice = AliceDemapper::new(transform)?;
    let mut llrs = vec![0.0; draws.x.len() * bits_per_symbol];
    for ((&n, &j), out) in metrics.iter().zip(&draws.x).zip(llrs.chunks_mut(bits_per_symbol)) {
        alice.lapprs_into(n, j, alpha, out)?;
    }
    decode(code, decoder, llrs, bob, metrics, max_iterations)
}

/// Reverse reconciliation where Bob only publishes the syndrome.
pub(crate) fn reconcile_hard(
    code: &LdpcCode,
    decoder: &mut BpDecoder<'_>,
    channel: &ChannelModel,
    regions: &rrs_core::DecisionRegions,
    hard: &HardDemapper,
    draws: &FrameDraws,
    max_iterations: usize,
) -> Result<Reconciled> {
    let decisions = draws
        .y
        .iter()
        .map(|&y| regions.decide(y))
        .collect::<rrs_core::Result<Vec<_>>>()?;
    let bob = demap_truncated(channel, &decisions, code.n())?;
    let llrs: Vec<f64> = draws.x.iter().flat_map(|&j| hard.lapprs(j).iter().copied()).collect();
    decode(code, decoder, llrs, bob, Vec::new(), max_iterations)
}

/// Direct reconciliation: Alice publishes the syndrome of her bits and Bob
/// decodes from his channel outputs.
pub(crate) fn reconcile_direct(
    code: &LdpcCode,
    decoder: &mut BpDecoder<'_>,
    channel: &ChannelModel,
    draws: &FrameDraws,
    max_iterations: usize,
) -> Result<Reconciled> {
    let bits_per_symbol = channel.constellation().bits_per_symbol();
    let alice = demap_truncated(channel, &draws.x, code.n())?;
    let mut demapper = ChannelDemapper::new(channel.constellation())?;
    let mut llrs = vec![0.0; draws.y.len() * bits_per_symbol];
    for (&y, out) in draws.y.iter().zip(llrs.chunks_mut(bits_per_symbol)) {
        demapper.lapprs_into(channel, y, out)?;
    }
    decode(code, decoder, llrs, alice, Vec::new(), max_iterations)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(code: &LdpcCode, snr_db: f64) -> ProtocolSpec<'_> {
        ProtocolSpec {
            constellation: ConstellationSpec::pam(4),
            snr_db,
            config: MonotonicityConfig::alternating(4),
            alpha: 1.0,
            code,
            max_iterations: 50,
        }
    }

    #[test]
    fn frame_sizes() {
        assert_eq!(FrameDraws::symbols_for(7, 2, 1), 4);
        assert_eq!(FrameDraws::symbols_for(64_800, 2, 1), 32_400);
        assert_eq!(FrameDraws::symbols_for(7, 2, 2), 4);
        assert_eq!(FrameDraws::symbols_for(9, 2, 2), 6);
    }

    #[test]
    fn noiseless_frame_needs_no_iterations() {
        let code = LdpcCode::hamming74();
        for seed in 0..20 {
            let run = run_protocol(&spec(&code, 80.0), seed).unwrap();
            assert!(run.converged);
            assert_eq!(run.iterations, 0);
            assert_eq!(run.alice_bits, run.bob_bits);
            // Without noise Bob's bits are Alice's own.
            let own = ConstellationSpec::pam(4)
                .component()
                .unwrap()
                .demap(&run.alice_symbols)
                .unwrap();
            assert_eq!(&own[..7], &run.bob_bits[..]);
        }
    }

    #[test]
    fn transcript_carries_metrics_and_syndrome_only() {
        let code = LdpcCode::hamming74();
        let run = run_protocol(&spec(&code, 5.0), 3).unwrap();
        assert_eq!(run.transcript.metrics.len(), 4);
        assert_eq!(run.transcript.syndrome.len(), 3);
        assert!(run.transcript.metrics.iter().all(|n| (0.0..=1.0).contains(n)));
        assert_eq!(code.syndrome(&run.bob_bits).unwrap().0, run.transcript.syndrome);
        let json = serde_json::to_value(&run.transcript).unwrap();
        let keys: Vec<&String> = json.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["metrics", "syndrome"]);
    }

    #[test]
    fn well_above_threshold_frames_are_error_free() {
        // The (7,4) code at rate 4/7 on PAM-4 (8/7 bits per symbol); MI
        // reaches 1.75 bits near 8.6 dB, so 16 dB leaves a wide margin.
        let code = LdpcCode::hamming74();
        for seed in 0..100 {
            assert_eq!(run_protocol(&spec(&code, 16.0), seed).unwrap().bit_errors(), 0);
        }
    }

    #[test]
    fn rejects_bad_alpha() {
        let code = LdpcCode::hamming74();
        let mut s = spec(&code, 5.0);
        s.alpha = 0.0;
        assert!(run_protocol(&s, 1).unwrap_err().is_validation());
    }
}
