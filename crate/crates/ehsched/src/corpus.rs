//! Seeded random instances for sweeps and cross-checks.

use crate::channel::ChannelModel;
use crate::schedule::{Arrival, EnergyTrace};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Shape of the generated instances. Gaps and packet sizes are drawn
/// log-uniformly from `[scale_min, scale_max]`, so traces mix fast bursts
/// with long droughts. The load is a uniform fraction of the capacity
/// limit of the whole trace, keeping every instance feasible.
#[derive(Debug, Clone, Copy)]
pub struct CorpusParams {
    pub max_arrivals: usize,
    pub scale_min: f64,
    pub scale_max: f64,
    pub load_min: f64,
    pub load_max: f64,
}

impl Default for CorpusParams {
    fn default() -> Self {
        Self { max_arrivals: 10, scale_min: 0.1, scale_max: 10.0, load_min: 0.5, load_max: 0.95 }
    }
}

/// Deterministic instance for `seed`: same seed, same trace, on every
/// platform.
pub fn random_trace(channel: ChannelModel, seed: u64, params: &CorpusParams) -> EnergyTrace {
    assert!(params.max_arrivals >= 1, "need at least one arrival");
    assert!(
        params.scale_min > 0.0 && params.scale_min <= params.scale_max && params.scale_max.is_finite(),
        "scales must satisfy 0 < min <= max < inf"
    );
    assert!(
        params.load_min > 0.0 && params.load_min <= params.load_max && params.load_max < 1.0,
        "loads must satisfy 0 < min <= max < 1"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ln_range = params.scale_min.ln()..=params.scale_max.ln();
    let n = rng.random_range(1..=params.max_arrivals);
    let mut events = Vec::with_capacity(n);
    let mut t = 0.0;
    for i in 0..n {
        if i > 0 {
            t += rng.random_range(ln_range.clone()).exp();
        }
        events.push(Arrival { time: t, energy: rng.random_range(ln_range.clone()).exp() });
    }
    let total: f64 = events.iter().map(|a| a.energy).sum();
    let load = rng.random_range(params.load_min..=params.load_max);
    let bits = load * channel.bits_capacity_limit(total);
    EnergyTrace::new(channel, bits, events).expect("generated trace is always valid")
}
