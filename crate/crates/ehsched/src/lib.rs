//! Transmission-time-minimizing schedulers for an energy-harvesting
//! transmitter.
//!
//! A transmitter must deliver `B` bits over a Gaussian link. Energy arrives
//! in discrete packets `(t_i, E_i)` and the cumulative energy spent by any
//! instant may never exceed the cumulative energy harvested by that instant
//! (energy neutrality). Transmitting at constant power `p` for `d` seconds
//! delivers `rate(d, p)` bits, a concave function of `p`, so stretching a
//! fixed energy budget over more time always buys more bits.
//!
//! The crate provides:
//!
//! * [`channel`]: the rate models (point-to-point and two-user multiple
//!   access) and the root solvers everything else leans on,
//! * [`offline`]: the optimal non-causal scheduler, the benchmark every
//!   online policy is measured against,
//! * [`online`]: the causal Lazy and GLO policies plus the alpha-fraction
//!   policy used by the adversarial analysis,
//! * [`adversary`]: a min-max engine that lower-bounds the competitive
//!   ratio of *every* online policy on a pair of arrival sequences,
//! * [`oracle`]: a brute-force grid search that independently certifies the
//!   offline scheduler on small instances,
//! * [`corpus`]: seeded random instance generation for sweeps,
//! * [`presets`]: the worked examples used across the test suite.

pub mod adversary;
pub mod channel;
pub mod corpus;
mod error;
pub mod offline;
pub mod online;
pub mod oracle;
pub mod presets;
pub mod schedule;

pub use adversary::{lower_bound_search, worst_ratio, LowerBoundConfig, LowerBoundResult};
pub use channel::ChannelModel;
pub use error::{Error, Result};
pub use offline::{offline_energy_fraction, offline_schedule};
pub use online::{lazy_step, run_alpha_policy, run_glo, run_lazy, LazyDecision, OnlineState};
pub use oracle::{oracle_certify, oracle_min_time, oracle_time_step};
pub use schedule::{
    verify_energy_neutrality, Algorithm, Arrival, DiagnosticSample, EnergyTrace, NeutralityCheck,
    RunReport, Schedule, Segment,
};
