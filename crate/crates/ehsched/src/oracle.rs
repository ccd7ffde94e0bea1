//! Brute-force cross-check for small instances.
//!
//! Exhausts schedules of the only shape an optimum can take: a constant
//! power per inter-arrival interval (concavity makes uniform spend within
//! an interval dominant), chosen from a fraction grid of the pool on hand,
//! with the run ending in a single drain of whatever remains. Drain end
//! times snap up to a shared absolute time grid, so the reported minimum
//! never undershoots the true optimum.
//!
//! A global fraction lattice alone is too blunt: near the capacity limit
//! the completion time reacts violently to tiny spend shifts, so after the
//! full-range pass the search reruns with the fraction windows shrunk
//! around the incumbent best path. A few rounds push the lattice error
//! well below one time-grid step, leaving the up-rounding of drain ends as
//! the dominant (and bounded) overshoot.

use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use crate::schedule::{verify_energy_neutrality, Arrival, EnergyTrace, RunReport};

/// Search cost grows as `power_grid^(n-1)`, so the oracle stays small.
pub const MAX_ORACLE_ARRIVALS: usize = 4;
/// Default fraction grid used by [`oracle_certify`].
pub const DEFAULT_POWER_GRID: usize = 32;
/// Default end-time grid used by [`oracle_certify`].
pub const DEFAULT_TIME_GRID: usize = 4096;

const MIN_GRID: usize = 16;
/// Window-shrinking passes after the full-range sweep.
const REFINE_ROUNDS: usize = 5;
/// Half-width of each refined window, in cells of the round that chose it.
const WINDOW_CELLS: f64 = 3.0;

/// Exhaustive minimum completion time on `trace`, accurate to roughly one
/// [`oracle_time_step`]. Wants at most [`MAX_ORACLE_ARRIVALS`] arrivals
/// and grids of at least 16 cells.
pub fn oracle_min_time(trace: &EnergyTrace, power_grid: usize, time_grid: usize) -> Result<f64> {
    let events = trace.events();
    if events.len() > MAX_ORACLE_ARRIVALS {
        return Err(Error::Domain(format!(
            "oracle search handles at most {MAX_ORACLE_ARRIVALS} arrivals, got {}",
            events.len()
        )));
    }
    if power_grid < MIN_GRID || time_grid < MIN_GRID {
        return Err(Error::Domain(format!(
            "oracle grids need at least {MIN_GRID} cells, got {power_grid} and {time_grid}"
        )));
    }
    let channel = trace.channel();
    let load = trace.bits_total();
    let single_pool = channel.completion_time(load, trace.total_energy()).ok_or({
        Error::Infeasible {
            bits: load,
            limit: channel.bits_capacity_limit(trace.total_energy()),
        }
    })?;
    // Idling until the last arrival and draining the full pool finishes by
    // t_last + single_pool, so the optimum sits strictly inside this cap.
    let cap = events.last().unwrap().time + 2.0 * single_pool;
    let mut windows = vec![(0.0f64, 1.0f64); events.len() - 1];
    let mut best = Incumbent { time: f64::INFINITY, fracs: Vec::new() };
    for _ in 0..=REFINE_ROUNDS {
        let search = Search {
            channel,
            events,
            load,
            cap,
            power_grid,
            time_grid,
            windows: windows.clone(),
        };
        search.visit(0, 0.0, 0.0, &mut Vec::new(), &mut best);
        debug_assert!(best.time.is_finite(), "the zero-spend branch always yields a drain");
        if windows.is_empty() {
            break;
        }
        for (i, w) in windows.iter_mut().enumerate() {
            // Intervals past the incumbent's stopping point keep the full
            // range; anything there is dominated anyway.
            let Some(&center) = best.fracs.get(i) else {
                *w = (0.0, 1.0);
                continue;
            };
            let half = WINDOW_CELLS * (w.1 - w.0) / power_grid as f64;
            *w = ((center - half).max(0.0), (center + half).min(1.0));
        }
    }
    Ok(best.time)
}

/// Granularity of the oracle's end-time grid for this trace: candidates
/// snap up to multiples of this, bounding the overshoot.
pub fn oracle_time_step(trace: &EnergyTrace, time_grid: usize) -> Result<f64> {
    if time_grid < MIN_GRID {
        return Err(Error::Domain(format!(
            "oracle grids need at least {MIN_GRID} cells, got {time_grid}"
        )));
    }
    let channel = trace.channel();
    let single_pool = channel
        .completion_time(trace.bits_total(), trace.total_energy())
        .ok_or(Error::Infeasible {
            bits: trace.bits_total(),
            limit: channel.bits_capacity_limit(trace.total_energy()),
        })?;
    let cap = trace.events().last().unwrap().time + 2.0 * single_pool;
    Ok(cap / time_grid as f64)
}

/// Certifies a run against the oracle at its default grids: the schedule
/// must respect energy neutrality, deliver the load, and finish within
/// `tolerance` of the exhaustive minimum.
pub fn oracle_certify(trace: &EnergyTrace, report: &RunReport, tolerance: f64) -> Result<bool> {
    let oracle = oracle_min_time(trace, DEFAULT_POWER_GRID, DEFAULT_TIME_GRID)?;
    let neutral = verify_energy_neutrality(&report.schedule, trace).ok;
    let delivered = report.schedule.bits_delivered(trace.channel(), report.completion_time);
    let enough = delivered >= trace.bits_total() * (1.0 - 1e-6);
    Ok(report.feasible && neutral && enough && report.completion_time <= oracle + tolerance)
}

struct Incumbent {
    time: f64,
    /// Spend fractions along the best path, one per interval it crossed.
    fracs: Vec<f64>,
}

struct Search<'a> {
    channel: ChannelModel,
    events: &'a [Arrival],
    load: f64,
    cap: f64,
    power_grid: usize,
    time_grid: usize,
    /// Fraction range searched per inter-arrival interval.
    windows: Vec<(f64, f64)>,
}

impl Search<'_> {
    /// Explores spend fractions from arrival `idx` onward. `carried` is
    /// the unspent pool from earlier intervals, `sent` the bits already
    /// delivered, `stack` the fractions chosen on the way here.
    fn visit(&self, idx: usize, carried: f64, sent: f64, stack: &mut Vec<f64>, best: &mut Incumbent) {
        let now = self.events[idx].time;
        if now >= best.time {
            return;
        }
        let avail = carried + self.events[idx].energy;
        let residual = self.load - sent;
        if let Some(end) = self.drain_end(now, avail, residual) {
            if end < best.time {
                best.time = end;
                best.fracs.clone_from(stack);
            }
        }
        let Some(next) = self.events.get(idx + 1) else { return };
        let gap = next.time - now;
        let (lo, hi) = self.windows[idx];
        for j in 0..=self.power_grid {
            let f = lo + (j as f64 / self.power_grid as f64) * (hi - lo);
            let spend = f * avail;
            let delivered = self.channel.rate(gap, spend / gap);
            if delivered >= residual {
                // Finishes inside this interval. Pouring the whole pool in
                // dominates every heavier fraction, and its finish needs no
                // grid: bits accrue linearly at fixed power.
                let finish = now + residual / self.channel.rate_per_second(avail / gap);
                if finish < best.time {
                    best.time = finish;
                    best.fracs.clone_from(stack);
                    best.fracs.push(1.0);
                }
                break;
            }
            stack.push(f);
            self.visit(idx + 1, avail - spend, sent + delivered, stack, best);
            stack.pop();
        }
    }

    /// Earliest grid point by which draining `avail` at constant power
    /// from `now` covers `residual`, if any grid point does.
    fn drain_end(&self, now: f64, avail: f64, residual: f64) -> Option<f64> {
        let at = |j: usize| (j as f64 / self.time_grid as f64) * self.cap;
        let enough = |j: usize| {
            let t = at(j);
            t > now && self.channel.rate(t - now, avail / (t - now)) >= residual
        };
        if !enough(self.time_grid) {
            return None;
        }
        let (mut lo, mut hi) = (0, self.time_grid);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if enough(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(at(hi))
    }
}
