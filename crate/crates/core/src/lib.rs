//! Two-robot patrolling of a unit path with per-point revisit deadlines.
//!
//! Each point `y` on `[0, 1]` carries a maximum allowed idle time `I(y)`;
//! two unit-speed robots must keep every point's waiting time within a
//! factor `c` of its deadline. This crate provides the feasibility tests,
//! the known approximation schedules, and an exact rational simulator for
//! measuring achieved waiting times.

pub mod analysis;
pub mod generators;
pub mod model;
pub mod rational;
pub mod schedules;
pub mod simulator;
pub mod trajectory;

pub use model::{
    check_necessary, classify, critical_points, lower_bound, range, AdmissibilityReport,
    Classification, ConditionEntry, ConditionStatus, CriticalPoints, CriticalPointsError,
    Instance, Interval, ModelError, PointRequirement, Verdict,
};
pub use rational::{fmt_q, fmt_q_dec, parse_q, ParseRationalError, Q};
pub use simulator::{
    observation_checks, simulate_reactive, waiting_times, ObservationReport, PointWaiting,
    ReactiveConfig, ReportMode, SimError, WaitingReport,
};
pub use trajectory::{ScheduleKind, SchedulePair, Trajectory, TrajectoryError, Waypoint};
