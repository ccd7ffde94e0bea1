//! Optimal non-causal scheduler: the benchmark every online policy is
//! measured against.

use crate::error::{Error, Result};
use crate::schedule::{
    Algorithm, Arrival, DiagnosticSample, EnergyTrace, RunReport, Schedule, Segment,
};

/// Residual loads below this fraction of the total are treated as done, so
/// float dust never produces a trailing zero-length segment.
const RESIDUAL_EPS: f64 = 1e-12;

/// Computes the minimum-time schedule with full knowledge of all arrivals.
///
/// The plan is built front to back. From the current instant, find the
/// earliest arrival whose preceding energy suffices to finish the residual
/// load strictly before it (falling back to the whole pool), and tentatively
/// spend that pool at one constant power. If some earlier prefix of
/// arrivals cannot fund that power, the binding prefix, the one with the
/// smallest average energy per unit time, is spent flat out instead, and
/// planning restarts at its end. Powers come out nondecreasing, change only
/// at arrival instants, and every pool is drained exactly when the power
/// changes.
pub fn offline_schedule(trace: &EnergyTrace) -> Result<RunReport> {
    let ch = trace.channel();
    let bits_total = trace.bits_total();
    let total_energy = trace.total_energy();
    if ch.completion_time(bits_total, total_energy).is_none() {
        return Err(Error::Infeasible {
            bits: bits_total,
            limit: ch.bits_capacity_limit(total_energy),
        });
    }

    let events = trace.events();
    let mut segments: Vec<Segment> = Vec::new();
    let mut diagnostics: Vec<DiagnosticSample> = Vec::new();
    let mut spent = 0.0;
    if events[0].time > 0.0 {
        segments.push(Segment { start: 0.0, duration: events[0].time, power: 0.0 });
    }

    let mut tau = events[0].time;
    let mut residual = bits_total;
    let mut pending: &[Arrival] = events;

    while residual > RESIDUAL_EPS * bits_total {
        // Earliest n whose strictly-preceding pool finishes before its
        // arrival; the whole pool when no such n exists.
        let mut n_star = pending.len();
        let mut acc = 0.0;
        for n in 1..pending.len() {
            acc += pending[n - 1].energy;
            if let Some(t) = ch.completion_time(residual, acc) {
                if t < pending[n].time - tau {
                    n_star = n;
                    break;
                }
            }
        }
        let pool: f64 = pending[..n_star].iter().map(|a| a.energy).sum();
        let finish = ch
            .completion_time(residual, pool)
            .expect("pool can deliver the residual: guaranteed by the entry check");
        let tentative_power = pool / finish;

        // A prefix whose average arrival rate is below the tentative power
        // cannot fund it; the smallest average binds first. Strict
        // comparison keeps the earliest prefix on ties.
        let mut binding: Option<(usize, f64)> = None;
        let mut lowest = tentative_power;
        acc = 0.0;
        for n in 1..n_star {
            acc += pending[n - 1].energy;
            let avg = acc / (pending[n].time - tau);
            if avg < lowest {
                lowest = avg;
                binding = Some((n, avg));
            }
        }

        diagnostics.push(DiagnosticSample {
            time: tau,
            energy_remaining: trace.harvested_by(tau) - spent,
            bits_remaining: residual,
            planned_power: Some(binding.map_or(tentative_power, |(_, avg)| avg)),
            planned_time_left: if binding.is_none() { Some(finish) } else { None },
        });

        match binding {
            None => {
                segments.push(Segment { start: tau, duration: finish, power: tentative_power });
                tau += finish;
                residual = 0.0;
            }
            Some((n1, power)) => {
                let duration = pending[n1].time - tau;
                segments.push(Segment { start: tau, duration, power });
                residual -= ch.rate(duration, power);
                spent += power * duration;
                tau = pending[n1].time;
                pending = &pending[n1..];
            }
        }
    }

    let completion_time = segments.last().map_or(tau, Segment::end);
    Ok(RunReport {
        algorithm: Algorithm::Offline,
        completion_time,
        schedule: Schedule::new(segments).expect("offline emits contiguous segments"),
        feasible: true,
        diagnostics,
    })
}

/// Fraction of the first packet's energy the optimal schedule has spent by
/// `window_end`.
pub fn offline_energy_fraction(trace: &EnergyTrace, window_end: f64) -> Result<f64> {
    if window_end.is_nan() || window_end < 0.0 {
        return Err(Error::Domain(format!(
            "window end must be nonnegative, got {window_end}"
        )));
    }
    let report = offline_schedule(trace)?;
    Ok(report.schedule.energy_used(window_end) / trace.events()[0].energy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelModel;
    use crate::schedule::verify_energy_neutrality;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1.0)
    }

    fn trace(channel: ChannelModel, bits: f64, events: &[(f64, f64)]) -> EnergyTrace {
        let events = events.iter().map(|&(time, energy)| Arrival { time, energy }).collect();
        EnergyTrace::new(channel, bits, events).unwrap()
    }

    fn assert_segments(report: &RunReport, expect: &[(f64, f64, f64)]) {
        let segs = report.schedule.segments();
        assert_eq!(segs.len(), expect.len(), "segment count");
        for (seg, &(start, duration, power)) in segs.iter().zip(expect) {
            assert!(close(seg.start, start, 1e-6), "start {} vs {start}", seg.start);
            assert!(close(seg.duration, duration, 1e-6), "duration {} vs {duration}", seg.duration);
            assert!(close(seg.power, power, 1e-6), "power {} vs {power}", seg.power);
        }
    }

    #[test]
    fn two_packet_trace_spends_the_first_flat_out() {
        let tr = trace(ChannelModel::Siso, 2.8, &[(0.0, 2.0), (1.0, 4.0)]);
        let report = offline_schedule(&tr).unwrap();
        assert!(close(report.completion_time, 1.325594567, 1e-7));
        assert_segments(&report, &[(0.0, 1.0, 2.0), (1.0, 0.325594567, 12.28521042)]);
        assert!(verify_energy_neutrality(&report.schedule, &tr).ok);
    }

    #[test]
    fn two_packet_trace_on_the_multiple_access_model() {
        let tr = trace(ChannelModel::Gmac, 2.8, &[(0.0, 2.0), (1.0, 4.0)]);
        let report = offline_schedule(&tr).unwrap();
        assert!(close(report.completion_time, 2.058298065, 1e-7));
        assert_segments(&report, &[(0.0, 1.0, 2.0), (1.0, 1.058298065, 3.779651744)]);
    }

    #[test]
    fn single_packet_trace_is_one_uniform_segment() {
        let tr = trace(ChannelModel::Siso, 2.8, &[(0.0, 2.0)]);
        let report = offline_schedule(&tr).unwrap();
        assert!(close(report.completion_time, 32.4639890237, 1e-7));
        assert_segments(&report, &[(0.0, 32.4639890237, 0.0616067236)]);
    }

    #[test]
    fn exponential_trace_holds_unit_power_then_sprints() {
        let tr = trace(
            ChannelModel::Siso,
            100.0,
            &[(0.0, 2.0), (2.0, 4.0), (6.0, 8.0), (14.0, 16.0), (30.0, 32.0), (62.0, 64.0), (126.0, 128.0)],
        );
        let report = offline_schedule(&tr).unwrap();
        assert!(close(report.completion_time, 78.74041447, 1e-7));
        assert_segments(
            &report,
            &[
                (0.0, 2.0, 1.0),
                (2.0, 4.0, 1.0),
                (6.0, 8.0, 1.0),
                (14.0, 16.0, 1.0),
                (30.0, 32.0, 1.0),
                (62.0, 16.740414467, 3.8230833738),
            ],
        );
        assert!(verify_energy_neutrality(&report.schedule, &tr).ok);
    }

    #[test]
    fn steady_drip_trace_runs_at_constant_unit_power() {
        let mut events = vec![(0.0, 2.0)];
        for n in 1..=8 {
            events.push((n as f64, 1.0));
        }
        let tr = trace(ChannelModel::Siso, 10.0, &events);
        let report = offline_schedule(&tr).unwrap();
        assert!(close(report.completion_time, 10.0, 1e-7));
        assert_segments(&report, &[(0.0, 10.0, 1.0)]);
    }

    #[test]
    fn late_first_arrival_gets_an_idle_prefix() {
        let tr = trace(ChannelModel::Siso, 2.8, &[(3.0, 2.0)]);
        let report = offline_schedule(&tr).unwrap();
        assert!(close(report.completion_time, 35.4639890237, 1e-7));
        assert_segments(&report, &[(0.0, 3.0, 0.0), (3.0, 32.4639890237, 0.0616067236)]);
    }

    #[test]
    fn tiny_head_packet_is_stretched_until_the_big_one() {
        let tr = trace(ChannelModel::Siso, 50.0, &[(0.0, 1.0), (10.0, 100.0)]);
        let report = offline_schedule(&tr).unwrap();
        assert!(close(report.completion_time, 27.8634839245, 1e-7));
        assert_segments(&report, &[(0.0, 10.0, 0.1), (10.0, 17.8634839245, 5.5980121470)]);
    }

    #[test]
    fn power_change_may_skip_an_arrival() {
        // The binding prefix ends at the third arrival, so the first
        // segment runs straight through the packet at t=1.5.
        let tr = trace(ChannelModel::Siso, 7.0, &[(0.0, 3.0), (1.5, 0.5), (4.0, 6.0)]);
        let report = offline_schedule(&tr).unwrap();
        assert!(close(report.completion_time, 5.40772507244, 1e-7));
        assert_segments(&report, &[(0.0, 4.0, 0.875), (4.0, 1.40772507, 4.26219588)]);
        assert!(verify_energy_neutrality(&report.schedule, &tr).ok);
    }

    #[test]
    fn unreachable_load_is_rejected() {
        let tr = trace(ChannelModel::Siso, 3.0, &[(0.0, 2.0)]);
        assert!(matches!(offline_schedule(&tr), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn energy_fraction_matches_reference_points() {
        let sigma1 = trace(ChannelModel::Siso, 2.8, &[(0.0, 2.0), (1.0, 4.0)]);
        assert!(close(offline_energy_fraction(&sigma1, 1.0).unwrap(), 1.0, 1e-9));
        let sigma2 = trace(ChannelModel::Siso, 2.8, &[(0.0, 2.0)]);
        assert!(close(offline_energy_fraction(&sigma2, 1.0).unwrap(), 0.030803362, 1e-6));
        assert_eq!(offline_energy_fraction(&sigma2, 0.0).unwrap(), 0.0);
        assert!(offline_energy_fraction(&sigma2, -1.0).is_err());
    }

    prop_compose! {
        fn arb_instance()(
            gaps in proptest::collection::vec(0.1f64..5.0, 1..7),
            energies in proptest::collection::vec(0.1f64..5.0, 7),
            load in 0.3f64..0.9,
            gmac in proptest::bool::ANY,
        ) -> EnergyTrace {
            let ch = if gmac { ChannelModel::Gmac } else { ChannelModel::Siso };
            let mut t = 0.0;
            let mut events = Vec::new();
            for (i, g) in gaps.iter().enumerate() {
                events.push(Arrival { time: t, energy: energies[i] });
                t += *g;
            }
            let total: f64 = events.iter().map(|a| a.energy).sum();
            let bits = load * ch.bits_capacity_limit(total);
            EnergyTrace::new(ch, bits, events).unwrap()
        }
    }

    proptest! {
        #[test]
        fn schedules_are_neutral_and_deliver_the_load(tr in arb_instance()) {
            let report = offline_schedule(&tr).unwrap();
            prop_assert!(verify_energy_neutrality(&report.schedule, &tr).ok);
            let delivered = report.schedule.bits_delivered(tr.channel(), report.completion_time);
            prop_assert!((delivered - tr.bits_total()).abs() <= 1e-6 * tr.bits_total());
        }

        #[test]
        fn powers_climb_and_change_only_at_arrivals(tr in arb_instance()) {
            let report = offline_schedule(&tr).unwrap();
            let segs = report.schedule.segments();
            for pair in segs.windows(2) {
                prop_assert!(pair[1].power >= pair[0].power - 1e-9 * pair[0].power.max(1.0));
                if (pair[1].power - pair[0].power).abs() > 1e-9 * pair[0].power.max(1.0) {
                    let boundary = pair[1].start;
                    let at_arrival = tr
                        .events()
                        .iter()
                        .any(|a| (a.time - boundary).abs() <= 1e-9 * boundary.max(1.0));
                    prop_assert!(at_arrival, "power changed at {boundary}, not an arrival");
                }
            }
        }

        // Whenever the power steps up between active segments, the pool
        // gathered so far has been spent to the last joule.
        #[test]
        fn pools_drain_exactly_at_power_changes(tr in arb_instance()) {
            let report = offline_schedule(&tr).unwrap();
            let segs = report.schedule.segments();
            for pair in segs.windows(2) {
                if pair[0].power > 0.0 && pair[1].power > pair[0].power * (1.0 + 1e-9) {
                    let boundary = pair[1].start;
                    let used = report.schedule.energy_used(boundary);
                    let harvested = tr.harvested_before(boundary);
                    prop_assert!(
                        (used - harvested).abs() <= 1e-6 * harvested.max(1.0),
                        "boundary {boundary}: used {used} vs harvested {harvested}"
                    );
                }
            }
        }
    }
}
