//! Rate models and the monotone root solvers every scheduler depends on.
//!
//! Both models measure bits with base-2 logarithms, so `rate(1, 1) = 1` bit
//! per second per unit SNR on the point-to-point link.

use std::f64::consts::LOG2_E;

/// Hard ceiling for the completion-time bracket search. Loads this close to
/// the capacity limit are treated as infeasible rather than scheduled over
/// astronomically long horizons.
const MAX_HORIZON: f64 = 1e12;

/// Relative width at which the completion-time bisection stops.
const COMPLETION_REL_TOL: f64 = 1e-9;

/// Rate-function family mapping (duration, power) to bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelModel {
    /// Point-to-point Gaussian link: `d * log2(1 + p)`.
    Siso,
    /// One user's share of a symmetric two-user Gaussian multiple access
    /// channel under time sharing: `(d/2) * log2(1 + 2p)`, i.e. the
    /// point-to-point rate at half the time and twice the power.
    Gmac,
}

impl ChannelModel {
    /// Bits delivered by transmitting at constant `power` for `duration`
    /// seconds. Zero duration delivers zero bits regardless of power.
    ///
    /// Panics if either argument is negative.
    pub fn rate(self, duration: f64, power: f64) -> f64 {
        assert!(duration >= 0.0, "rate: negative duration {duration}");
        assert!(power >= 0.0, "rate: negative power {power}");
        if duration == 0.0 {
            return 0.0;
        }
        match self {
            // ln_1p keeps precision when power is tiny, which is exactly the
            // regime the long-horizon solvers probe.
            ChannelModel::Siso => duration * power.ln_1p() * LOG2_E,
            ChannelModel::Gmac => duration / 2.0 * (2.0 * power).ln_1p() * LOG2_E,
        }
    }

    /// Bits per second at constant `power`.
    pub fn rate_per_second(self, power: f64) -> f64 {
        self.rate(1.0, power)
    }

    /// Asymptotic maximum of bits deliverable with `energy` joules, i.e.
    /// `lim_{T -> inf} rate(T, energy/T) = energy * log2(e)`. The limit is
    /// the same for both models.
    ///
    /// Panics if `energy` is negative.
    pub fn bits_capacity_limit(self, energy: f64) -> f64 {
        assert!(energy >= 0.0, "bits_capacity_limit: negative energy {energy}");
        energy * LOG2_E
    }

    /// Least time `T` at which spending `energy` uniformly delivers `bits`,
    /// i.e. the unique root of `rate(T, energy/T) = bits`.
    ///
    /// The map `T -> rate(T, energy/T)` is strictly increasing with limit
    /// `bits_capacity_limit(energy)`, so the root exists iff `bits` is below
    /// that limit; otherwise `None` is returned. Loads within a relative
    /// margin of 1e-12 of the limit are also reported as `None` to keep the
    /// near-asymptote region out of the solvers.
    ///
    /// Panics if either argument is negative.
    pub fn completion_time(self, bits: f64, energy: f64) -> Option<f64> {
        assert!(bits >= 0.0, "completion_time: negative bits {bits}");
        assert!(energy >= 0.0, "completion_time: negative energy {energy}");
        if bits == 0.0 {
            return Some(0.0);
        }
        let limit = self.bits_capacity_limit(energy);
        if bits >= limit * (1.0 - 1e-12) {
            return None;
        }
        let spread = |t: f64| self.rate(t, energy / t);
        // Bracket by doubling, then bisect. The previous hi is a valid lo.
        let mut lo = 0.0;
        let mut hi = 1.0;
        while spread(hi) < bits {
            lo = hi;
            hi *= 2.0;
            if hi > MAX_HORIZON {
                return None;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if spread(mid) < bits {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= COMPLETION_REL_TOL * hi {
                break;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

impl std::fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChannelModel::Siso => write!(f, "siso"),
            ChannelModel::Gmac => write!(f, "gmac"),
        }
    }
}
