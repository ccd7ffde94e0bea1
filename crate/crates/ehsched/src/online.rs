//! Causal scheduling policies: Lazy, GLO, and the two-phase alpha policy.
//!
//! All runners here observe arrivals strictly in order through a cursor.
//! A policy decides a power from the current [`OnlineState`] alone; the
//! event loop learns of the next arrival only to know when the current hold
//! period ends, never to plan ahead.

use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use crate::schedule::{
    Algorithm, Arrival, DiagnosticSample, EnergyTrace, RunReport, Schedule, Segment,
};

/// Residual loads below this fraction of the total count as finished.
const COMPLETION_EPS: f64 = 1e-9;

/// What a causal policy can see at a decision instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnlineState {
    pub now: f64,
    pub energy_available: f64,
    pub bits_remaining: f64,
    pub transmitting: bool,
}

/// Outcome of one lazy planning step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LazyDecision {
    /// Transmit at `power`; absent further arrivals the run finishes
    /// `time_left` seconds from now.
    Transmit { power: f64, time_left: f64 },
    /// Nothing left to send.
    Complete,
    /// The remaining load is at or above the capacity limit of the energy
    /// on hand; no constant power finishes in finite time.
    Infeasible,
}

/// Plans the completion-time-minimizing constant power under the
/// pessimistic assumption that no more energy ever arrives: solve
/// `rate(T, E/T) = bits` for the remaining load and spend `E/T`.
pub fn lazy_step(state: &OnlineState, channel: ChannelModel) -> LazyDecision {
    if state.bits_remaining <= 0.0 {
        return LazyDecision::Complete;
    }
    match channel.completion_time(state.bits_remaining, state.energy_available) {
        Some(time_left) => LazyDecision::Transmit {
            power: state.energy_available / time_left,
            time_left,
        },
        None => LazyDecision::Infeasible,
    }
}

/// Hands out arrivals one at a time, in order. A driver may only ask what
/// interrupts the hold period it is currently committing to, so nothing
/// downstream can peek past the next event.
trait ArrivalSource {
    /// Next arrival strictly after `now`, or `None` when exhausted.
    fn next_arrival(&mut self, now: f64) -> Option<Arrival>;
}

struct TraceCursor<'a> {
    remaining: &'a [Arrival],
}

impl ArrivalSource for TraceCursor<'_> {
    fn next_arrival(&mut self, now: f64) -> Option<Arrival> {
        let (first, rest) = self.remaining.split_first()?;
        debug_assert!(first.time > now, "cursor asked to rewind past {now}");
        self.remaining = rest;
        Some(*first)
    }
}

/// Lazy re-planning loop from `start` with `energy` pooled: hold each
/// planned power until the next arrival interrupts it, then re-plan with
/// the topped-up pool. Returns the completion instant.
fn drive_lazy(
    channel: ChannelModel,
    load: f64,
    start: f64,
    energy: f64,
    source: &mut dyn ArrivalSource,
    segments: &mut Vec<Segment>,
    diagnostics: &mut Vec<DiagnosticSample>,
) -> Result<f64> {
    let mut now = start;
    let mut energy = energy;
    let mut bits = load;
    loop {
        if bits <= COMPLETION_EPS * load {
            return Ok(now);
        }
        let state = OnlineState {
            now,
            energy_available: energy,
            bits_remaining: bits,
            transmitting: true,
        };
        let (power, time_left) = match lazy_step(&state, channel) {
            LazyDecision::Transmit { power, time_left } => (power, time_left),
            LazyDecision::Complete => return Ok(now),
            LazyDecision::Infeasible => {
                return Err(Error::Infeasible {
                    bits,
                    limit: channel.bits_capacity_limit(energy),
                });
            }
        };
        diagnostics.push(DiagnosticSample {
            time: now,
            energy_remaining: energy,
            bits_remaining: bits,
            planned_power: Some(power),
            planned_time_left: Some(time_left),
        });
        match source.next_arrival(now) {
            Some(arrival) if arrival.time < now + time_left => {
                let hold = arrival.time - now;
                segments.push(Segment { start: now, duration: hold, power });
                bits -= channel.rate(hold, power);
                energy = energy - power * hold + arrival.energy;
                now = arrival.time;
            }
            _ => {
                // Uninterrupted: the plan's root equation lands the finish
                // exactly time_left from now.
                segments.push(Segment { start: now, duration: time_left, power });
                return Ok(now + time_left);
            }
        }
    }
}

/// Lazy policy. Requires the first packet alone to cover the whole load;
/// re-plans at every subsequent arrival, so extra energy only ever pulls
/// the finish earlier.
pub fn run_lazy(trace: &EnergyTrace) -> Result<RunReport> {
    let channel = trace.channel();
    let load = trace.bits_total();
    let first = trace.events()[0];
    if channel.completion_time(load, first.energy).is_none() {
        return Err(Error::LazyPrecondition {
            bits: load,
            limit: channel.bits_capacity_limit(first.energy),
        });
    }
    let mut segments = Vec::new();
    let mut diagnostics = Vec::new();
    if first.time > 0.0 {
        segments.push(Segment { start: 0.0, duration: first.time, power: 0.0 });
    }
    let mut cursor = TraceCursor { remaining: &trace.events()[1..] };
    let completion_time = drive_lazy(
        channel,
        load,
        first.time,
        first.energy,
        &mut cursor,
        &mut segments,
        &mut diagnostics,
    )?;
    Ok(RunReport {
        algorithm: Algorithm::Lazy,
        completion_time,
        schedule: Schedule::new(segments).expect("lazy emits contiguous segments"),
        feasible: true,
        diagnostics,
    })
}

/// Generalized lazy: idle, pooling packets, until the pool's capacity limit
/// clears the load, then run the lazy loop on the pool. The waiting phase
/// is recorded as explicit zero-power segments.
pub fn run_glo(trace: &EnergyTrace) -> Result<RunReport> {
    let channel = trace.channel();
    let load = trace.bits_total();
    let total = trace.total_energy();
    if channel.completion_time(load, total).is_none() {
        return Err(Error::Infeasible {
            bits: load,
            limit: channel.bits_capacity_limit(total),
        });
    }
    let events = trace.events();
    let mut segments = Vec::new();
    let mut diagnostics = Vec::new();
    if events[0].time > 0.0 {
        segments.push(Segment { start: 0.0, duration: events[0].time, power: 0.0 });
    }
    let mut pooled = 0.0;
    let mut start_idx = 0;
    for (i, a) in events.iter().enumerate() {
        pooled += a.energy;
        if channel.completion_time(load, pooled).is_some() {
            start_idx = i;
            break;
        }
        diagnostics.push(DiagnosticSample {
            time: a.time,
            energy_remaining: pooled,
            bits_remaining: load,
            planned_power: None,
            planned_time_left: None,
        });
        // The entry check fires at the last arrival at the latest, so a
        // next arrival to wait for always exists here.
        let next = events[i + 1].time;
        segments.push(Segment { start: a.time, duration: next - a.time, power: 0.0 });
    }
    let mut cursor = TraceCursor { remaining: &events[start_idx + 1..] };
    let completion_time = drive_lazy(
        channel,
        load,
        events[start_idx].time,
        pooled,
        &mut cursor,
        &mut segments,
        &mut diagnostics,
    )?;
    Ok(RunReport {
        algorithm: Algorithm::Glo,
        completion_time,
        schedule: Schedule::new(segments).expect("glo emits contiguous segments"),
        feasible: true,
        diagnostics,
    })
}

/// Two-phase policy used by the adversarial construction: spend an `alpha`
/// fraction of the initial packet uniformly over `[0, horizon)`, then pool
/// whatever is on hand at the horizon (the unspent remainder plus every
/// packet arriving in `(0, horizon]`) and finish at one constant power.
/// Arrivals after the horizon are ignored.
///
/// The trace must deliver its first packet at t=0.
pub fn run_alpha_policy(trace: &EnergyTrace, alpha: f64, horizon: f64) -> Result<RunReport> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidConfig(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    if !horizon.is_finite() || horizon <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "horizon must be positive and finite, got {horizon}"
        )));
    }
    let first = trace.events()[0];
    if first.time != 0.0 {
        return Err(Error::InvalidConfig(format!(
            "alpha policy needs its first packet at t=0, got t={}",
            first.time
        )));
    }
    let channel = trace.channel();
    let load = trace.bits_total();
    let head_power = alpha * first.energy / horizon;
    let head_bits = channel.rate(horizon, head_power);
    let mut diagnostics = vec![DiagnosticSample {
        time: 0.0,
        energy_remaining: first.energy,
        bits_remaining: load,
        planned_power: Some(head_power),
        planned_time_left: None,
    }];

    if head_bits >= load {
        // Finishes during the first phase; bits accrue linearly at fixed
        // power, so the instant is exact.
        let completion = load / channel.rate_per_second(head_power);
        let schedule =
            Schedule::new(vec![Segment { start: 0.0, duration: completion, power: head_power }])
                .expect("single segment");
        return Ok(RunReport {
            algorithm: Algorithm::AlphaPolicy,
            completion_time: completion,
            schedule,
            feasible: true,
            diagnostics,
        });
    }

    let residual = load - head_bits;
    let pooled = (1.0 - alpha) * first.energy
        + trace
            .events()
            .iter()
            .skip(1)
            .take_while(|a| a.time <= horizon)
            .map(|a| a.energy)
            .sum::<f64>();
    let tail = channel.completion_time(residual, pooled).ok_or(Error::Infeasible {
        bits: residual,
        limit: channel.bits_capacity_limit(pooled),
    })?;
    let tail_power = pooled / tail;
    diagnostics.push(DiagnosticSample {
        time: horizon,
        energy_remaining: pooled,
        bits_remaining: residual,
        planned_power: Some(tail_power),
        planned_time_left: Some(tail),
    });
    let schedule = Schedule::new(vec![
        Segment { start: 0.0, duration: horizon, power: head_power },
        Segment { start: horizon, duration: tail, power: tail_power },
    ])
    .expect("two contiguous segments");
    Ok(RunReport {
        algorithm: Algorithm::AlphaPolicy,
        completion_time: horizon + tail,
        schedule,
        feasible: true,
        diagnostics,
    })
}
