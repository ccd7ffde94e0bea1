//! Problem instances, piecewise-constant schedules, and the energy
//! neutrality verifier.

use crate::channel::ChannelModel;
use crate::error::{Error, Result};

/// Absolute slack, in joules, allowed when checking energy neutrality. The
/// optimal scheduler drains pools exactly to zero at power changes, so exact
/// float equality is not testable.
pub const NEUTRALITY_SLACK: f64 = 1e-6;

/// One harvested energy packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arrival {
    pub time: f64,
    pub energy: f64,
}

/// A validated problem instance: bit load, rate model, and the ordered
/// energy arrivals.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTrace {
    channel: ChannelModel,
    bits_total: f64,
    events: Vec<Arrival>,
}

impl EnergyTrace {
    /// Builds a trace, enforcing: at least one arrival, strictly increasing
    /// arrival times starting at or after zero, strictly positive energies,
    /// and a strictly positive finite bit load.
    pub fn new(channel: ChannelModel, bits_total: f64, events: Vec<Arrival>) -> Result<Self> {
        if !bits_total.is_finite() || bits_total <= 0.0 {
            return Err(Error::InvalidTrace(format!(
                "bit load must be positive and finite, got {bits_total}"
            )));
        }
        if events.is_empty() {
            return Err(Error::InvalidTrace("no energy arrivals".into()));
        }
        if events[0].time < 0.0 {
            return Err(Error::InvalidTrace(format!(
                "first arrival time must be >= 0, got {}",
                events[0].time
            )));
        }
        for pair in events.windows(2) {
            if pair[1].time <= pair[0].time {
                return Err(Error::InvalidTrace(format!(
                    "arrival times must be strictly increasing, got {} then {}",
                    pair[0].time, pair[1].time
                )));
            }
        }
        for a in &events {
            if !a.time.is_finite() || !a.energy.is_finite() || a.energy <= 0.0 {
                return Err(Error::InvalidTrace(format!(
                    "arrival at t={} must have finite time and positive energy, got {} J",
                    a.time, a.energy
                )));
            }
        }
        Ok(EnergyTrace { channel, bits_total, events })
    }

    pub fn channel(&self) -> ChannelModel {
        self.channel
    }

    pub fn bits_total(&self) -> f64 {
        self.bits_total
    }

    pub fn events(&self) -> &[Arrival] {
        &self.events
    }

    pub fn total_energy(&self) -> f64 {
        self.events.iter().map(|a| a.energy).sum()
    }

    /// Energy harvested strictly before time `t`.
    pub fn harvested_before(&self, t: f64) -> f64 {
        self.events.iter().take_while(|a| a.time < t).map(|a| a.energy).sum()
    }

    /// Energy harvested at or before time `t`.
    pub fn harvested_by(&self, t: f64) -> f64 {
        self.events.iter().take_while(|a| a.time <= t).map(|a| a.energy).sum()
    }
}

/// Constant-power stretch of a schedule. Zero power marks idle time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub duration: f64,
    pub power: f64,
}

impl Segment {
    pub fn end(&self) -> f64 {
        self.start + self.duration
    }
}

/// Contiguous run of constant-power segments. Waiting phases are explicit
/// zero-power segments so they stay visible in reports.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Schedule {
    segments: Vec<Segment>,
}

impl Schedule {
    /// Builds a schedule, enforcing positive durations, nonnegative powers,
    /// a nonnegative start, and contiguity (each segment starts where the
    /// previous one ends, within 1e-9 relative).
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let mut cursor: Option<f64> = None;
        for seg in &segments {
            if !seg.start.is_finite() || seg.start < 0.0 {
                return Err(Error::Domain(format!(
                    "segments must start at a finite t >= 0, got {}",
                    seg.start
                )));
            }
            if !seg.duration.is_finite() || seg.duration <= 0.0 {
                return Err(Error::Domain(format!(
                    "segment at t={} needs a positive finite duration, got {}",
                    seg.start, seg.duration
                )));
            }
            if !seg.power.is_finite() || seg.power < 0.0 {
                return Err(Error::Domain(format!(
                    "segment at t={} needs a nonnegative finite power, got {}",
                    seg.start, seg.power
                )));
            }
            if let Some(end) = cursor {
                if (seg.start - end).abs() > 1e-9 * end.abs().max(1.0) {
                    return Err(Error::Domain(format!(
                        "segments must be contiguous: previous ends at {end}, next starts at {}",
                        seg.start
                    )));
                }
            }
            cursor = Some(seg.end());
        }
        Ok(Schedule { segments })
    }

    pub fn empty() -> Self {
        Schedule::default()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// End of the last segment; 0 for an empty schedule.
    pub fn end(&self) -> f64 {
        self.segments.last().map_or(0.0, Segment::end)
    }

    /// End of the last positive-power segment, if any power is ever spent.
    pub fn last_active_end(&self) -> Option<f64> {
        self.segments.iter().rev().find(|s| s.power > 0.0).map(Segment::end)
    }

    /// Bits delivered by time `t`: the sum of per-segment rates with the
    /// final overlapping segment clipped at `t`.
    pub fn bits_delivered(&self, channel: ChannelModel, t: f64) -> f64 {
        let mut total = 0.0;
        for seg in &self.segments {
            if t <= seg.start {
                break;
            }
            let d = (t - seg.start).min(seg.duration);
            total += channel.rate(d, seg.power);
        }
        total
    }

    /// Energy spent by time `t`; the clipped sum of `power * duration`.
    pub fn energy_used(&self, t: f64) -> f64 {
        let mut total = 0.0;
        for seg in &self.segments {
            if t <= seg.start {
                break;
            }
            let d = (t - seg.start).min(seg.duration);
            total += seg.power * d;
        }
        total
    }
}

/// Verdict of [`verify_energy_neutrality`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeutralityCheck {
    pub ok: bool,
    /// Earliest checkpoint at which spending exceeds harvest, with the
    /// deficit in joules.
    pub first_violation: Option<(f64, f64)>,
}

/// Checks that the schedule never spends energy before it has arrived.
///
/// The deficit `spent(t) - harvested(t)` is piecewise linear in `t` and
/// jumps downward at arrival instants, so its local suprema sit at the left
/// limits of segment boundaries and arrival instants. Spending is
/// continuous, hence comparing `energy_used(t)` against the energy harvested
/// *strictly before* `t` at those checkpoints bounds the deficit everywhere.
/// Violations beyond [`NEUTRALITY_SLACK`] joules are reported.
pub fn verify_energy_neutrality(schedule: &Schedule, trace: &EnergyTrace) -> NeutralityCheck {
    let end = schedule.end();
    let mut checkpoints: Vec<f64> = Vec::new();
    for seg in schedule.segments() {
        checkpoints.push(seg.start);
        checkpoints.push(seg.end());
    }
    for a in trace.events() {
        if a.time <= end {
            checkpoints.push(a.time);
        }
    }
    checkpoints.sort_by(f64::total_cmp);
    checkpoints.dedup();
    for &t in &checkpoints {
        let deficit = schedule.energy_used(t) - trace.harvested_before(t);
        if deficit > NEUTRALITY_SLACK {
            return NeutralityCheck { ok: false, first_violation: Some((t, deficit)) };
        }
    }
    NeutralityCheck { ok: true, first_violation: None }
}

/// Which scheduler produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Offline,
    Lazy,
    Glo,
    AlphaPolicy,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Offline => write!(f, "offline"),
            Algorithm::Lazy => write!(f, "lazy"),
            Algorithm::Glo => write!(f, "glo"),
            Algorithm::AlphaPolicy => write!(f, "alpha"),
        }
    }
}

/// Snapshot of a scheduler's view at a decision instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticSample {
    pub time: f64,
    pub energy_remaining: f64,
    pub bits_remaining: f64,
    /// Power chosen at this instant; `None` while waiting.
    pub planned_power: Option<f64>,
    /// The scheduler's estimate of the time still needed; `None` while no
    /// finite plan exists.
    pub planned_time_left: Option<f64>,
}

/// Outcome of one algorithm on one trace.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub completion_time: f64,
    pub schedule: Schedule,
    pub feasible: bool,
    pub diagnostics: Vec<DiagnosticSample>,
}
