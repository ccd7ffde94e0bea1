//! Min-max lower-bound engine.
//!
//! The adversary prepares two traces that look identical until a chosen
//! horizon: `sigma1` reveals a second energy packet exactly at the horizon,
//! `sigma2` never does. Any causal policy must commit to how much of the
//! initial packet it burns before the horizon; the committed fraction
//! `alpha` fixes its fate on both futures. Sweeping `alpha` and taking the
//! worse of the two completion ratios yields a curve whose minimum no
//! causal policy can beat on this pair.

use crate::error::{Error, Result};
use crate::offline::offline_schedule;
use crate::online::run_alpha_policy;
use crate::schedule::{Arrival, EnergyTrace};
use crate::ChannelModel;

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const REFINE_TOL: f64 = 1e-6;

/// A matched pair of adversarial futures plus search settings.
#[derive(Debug, Clone)]
pub struct LowerBoundConfig {
    sigma1: EnergyTrace,
    sigma2: EnergyTrace,
    horizon: f64,
    grid_step: f64,
    refine: bool,
}

/// Outcome of a lower-bound sweep.
#[derive(Debug, Clone)]
pub struct LowerBoundResult {
    /// Fraction that minimizes the worst-case ratio.
    pub alpha_star: f64,
    /// The minimized worst-case ratio: the bound itself.
    pub ratio: f64,
    /// The sampled `(alpha, worst ratio)` grid, infeasible points as
    /// infinity.
    pub curve: Vec<(f64, f64)>,
}

impl LowerBoundConfig {
    /// Validates that the pair actually forms an adversarial fork: same
    /// channel and load, both starting at t=0, indistinguishable before
    /// the horizon, and `sigma1`'s reveal landing exactly on it.
    pub fn new(
        sigma1: EnergyTrace,
        sigma2: EnergyTrace,
        horizon: f64,
        grid_step: f64,
        refine: bool,
    ) -> Result<Self> {
        if sigma1.channel() != sigma2.channel() {
            return Err(Error::InvalidConfig("traces must share a channel model".into()));
        }
        let (b1, b2) = (sigma1.bits_total(), sigma2.bits_total());
        if (b1 - b2).abs() > 1e-12 * b1.max(b2) {
            return Err(Error::InvalidConfig(format!(
                "traces must share a load, got {b1} and {b2} bits"
            )));
        }
        if !horizon.is_finite() || horizon <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "horizon must be positive and finite, got {horizon}"
            )));
        }
        for (name, tr) in [("sigma1", &sigma1), ("sigma2", &sigma2)] {
            if tr.events()[0].time != 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "{name} must deliver its first packet at t=0"
                )));
            }
            if tr.events()[1..].iter().any(|a| a.time < horizon - 1e-9) {
                return Err(Error::InvalidConfig(format!(
                    "{name} has an arrival before the horizon, the futures would be distinguishable"
                )));
            }
        }
        if let Some(reveal) = sigma1.events().get(1) {
            if (reveal.time - horizon).abs() > 1e-9 * horizon.max(1.0) {
                return Err(Error::InvalidConfig(format!(
                    "sigma1 reveals at t={} but the horizon is {horizon}",
                    reveal.time
                )));
            }
        }
        if !(grid_step > 0.0 && grid_step <= 0.5) {
            return Err(Error::InvalidConfig(format!(
                "grid step must lie in (0, 0.5], got {grid_step}"
            )));
        }
        Ok(Self { sigma1, sigma2, horizon, grid_step, refine })
    }

    /// The two-packet fork behind the 1.38 bound: 2 J now, maybe 4 J at
    /// t=1, load 2.8 bits.
    pub fn proof_preset(channel: ChannelModel) -> Self {
        let sigma1 = EnergyTrace::new(
            channel,
            2.8,
            vec![Arrival { time: 0.0, energy: 2.0 }, Arrival { time: 1.0, energy: 4.0 }],
        )
        .unwrap();
        let sigma2 =
            EnergyTrace::new(channel, 2.8, vec![Arrival { time: 0.0, energy: 2.0 }]).unwrap();
        Self::new(sigma1, sigma2, 1.0, 1e-3, true).unwrap()
    }

    /// The symmetric fork used for ratio-curve illustrations: 3 J now,
    /// maybe 3 J more at t=1, load 4.2 bits.
    pub fn figure_preset(channel: ChannelModel) -> Self {
        let sigma1 = EnergyTrace::new(
            channel,
            4.2,
            vec![Arrival { time: 0.0, energy: 3.0 }, Arrival { time: 1.0, energy: 3.0 }],
        )
        .unwrap();
        let sigma2 =
            EnergyTrace::new(channel, 4.2, vec![Arrival { time: 0.0, energy: 3.0 }]).unwrap();
        Self::new(sigma1, sigma2, 1.0, 1e-3, true).unwrap()
    }

    pub fn sigma1(&self) -> &EnergyTrace {
        &self.sigma1
    }

    pub fn sigma2(&self) -> &EnergyTrace {
        &self.sigma2
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Replaces the sweep resolution, keeping everything else.
    pub fn with_grid_step(mut self, grid_step: f64) -> Result<Self> {
        if !(grid_step > 0.0 && grid_step <= 0.5) {
            return Err(Error::InvalidConfig(format!(
                "grid step must lie in (0, 0.5], got {grid_step}"
            )));
        }
        self.grid_step = grid_step;
        Ok(self)
    }

    pub fn with_refine(mut self, refine: bool) -> Self {
        self.refine = refine;
        self
    }

    fn offline_times(&self) -> Result<(f64, f64)> {
        let bench = |tr: &EnergyTrace| {
            offline_schedule(tr).map(|r| r.completion_time).map_err(|e| {
                Error::InvalidConfig(format!("adversary trace has no offline schedule: {e}"))
            })
        };
        Ok((bench(&self.sigma1)?, bench(&self.sigma2)?))
    }

    /// Worse of the two completion ratios at a given fraction; infinity
    /// when the policy cannot finish one of the futures.
    fn policy_ratio(&self, alpha: f64, offline: (f64, f64)) -> f64 {
        let futures = [(&self.sigma1, offline.0), (&self.sigma2, offline.1)];
        let mut worst = 0.0f64;
        for (tr, bench) in futures {
            match run_alpha_policy(tr, alpha, self.horizon) {
                Ok(report) => worst = worst.max(report.completion_time / bench),
                Err(_) => return f64::INFINITY,
            }
        }
        worst
    }
}

/// Worst-case completion ratio of the `alpha` policy over the config's
/// trace pair, against the clairvoyant benchmark on each.
pub fn worst_ratio(config: &LowerBoundConfig, alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidConfig(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    let offline = config.offline_times()?;
    Ok(config.policy_ratio(alpha, offline))
}

/// Sweeps the fraction grid, optionally polishes the best cell with a
/// golden-section pass, and returns the minimized worst-case ratio.
pub fn lower_bound_search(config: &LowerBoundConfig) -> Result<LowerBoundResult> {
    let offline = config.offline_times()?;
    let cells = (1.0 / config.grid_step).ceil() as usize;
    let mut curve = Vec::with_capacity(cells + 1);
    for j in 0..=cells {
        let alpha = (j as f64 * config.grid_step).min(1.0);
        curve.push((alpha, config.policy_ratio(alpha, offline)));
    }
    let best = curve
        .iter()
        .enumerate()
        .filter(|(_, p)| p.1.is_finite())
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .ok_or_else(|| {
            Error::InvalidConfig("no fraction on the grid finishes both futures".into())
        })?;
    let (mut alpha_star, mut ratio) = curve[best];
    if config.refine {
        let lo = curve[best.saturating_sub(1)].0;
        let hi = curve[(best + 1).min(curve.len() - 1)].0;
        let (alpha_ref, ratio_ref) =
            golden_min(lo, hi, REFINE_TOL, |a| config.policy_ratio(a, offline));
        if ratio_ref < ratio {
            alpha_star = alpha_ref;
            ratio = ratio_ref;
        }
    }
    Ok(LowerBoundResult { alpha_star, ratio, curve })
}

/// Golden-section minimization on `[a, b]`; assumes one local minimum in
/// the bracket, which the surrounding grid has already isolated.
fn golden_min(mut a: f64, mut b: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd { (c, fc) } else { (d, fd) }
}
