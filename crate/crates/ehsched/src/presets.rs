//! Canonical benchmark instances shared by the tests and the CLI.

use crate::channel::ChannelModel;
use crate::schedule::{Arrival, EnergyTrace};

fn build(bits: f64, events: &[(f64, f64)]) -> EnergyTrace {
    let events = events.iter().map(|&(time, energy)| Arrival { time, energy }).collect();
    EnergyTrace::new(ChannelModel::Siso, bits, events).expect("preset traces are valid")
}

/// Doubling cascade, gap reading: each packet doubles the last and the
/// wait for the next one equals the energy just banked. 100 bits to send.
/// Exercises the regime where pooling beats spending early.
pub fn example1() -> EnergyTrace {
    build(
        100.0,
        &[
            (0.0, 2.0),
            (2.0, 4.0),
            (6.0, 8.0),
            (14.0, 16.0),
            (30.0, 32.0),
            (62.0, 64.0),
            (126.0, 128.0),
        ],
    )
}

/// Doubling cascade, literal reading: packet `n` lands at `t = 2^n` with
/// `2^(n+1)` joules, so arrivals bunch up early instead of spreading out.
pub fn example1_literal() -> EnergyTrace {
    build(
        100.0,
        &[
            (0.0, 2.0),
            (2.0, 4.0),
            (4.0, 8.0),
            (8.0, 16.0),
            (16.0, 32.0),
            (32.0, 64.0),
            (64.0, 128.0),
        ],
    )
}

/// Steady drip: 2 J up front, then 1 J every second for eight seconds,
/// 10 bits to send. The load sits just under the trace's capacity limit,
/// which makes early commitment expensive.
pub fn example2() -> EnergyTrace {
    let mut events = vec![(0.0, 2.0)];
    for n in 1..=8 {
        events.push((n as f64, 1.0));
    }
    build(10.0, &events)
}
