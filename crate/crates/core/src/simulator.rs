//! Exact event-driven continuous-time engine.
//!
//! Drives the distance-triggered two-robot controller until its state
//! recurs, and extracts visit and waiting times from trajectory pairs. All
//! event times are exact rationals, so recurrence is exact state equality
//! rather than a tolerance test.

use crate::model::{range, CriticalPoints, Instance};
use crate::rational::{qmax, qmin, Q};
use crate::trajectory::{merge_visit_lists, SchedulePair, Trajectory, Waypoint};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReactiveConfig {
    /// Minimum inter-robot separation triggering a role exchange.
    pub d: Q,
    /// Give up if no state recurrence is found before this time.
    pub horizon: Q,
}

impl ReactiveConfig {
    pub fn for_critical_points(cp: &CriticalPoints) -> Self {
        Self {
            d: cp.d.clone(),
            horizon: crate::rational::qi(100),
        }
    }

    pub fn with_d(mut self, d: Q) -> Self {
        self.d = d;
        self
    }

    pub fn with_horizon(mut self, horizon: Q) -> Self {
        self.horizon = horizon;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("no state recurrence within horizon {0}")]
    NoCycle(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Mode {
    /// Inside the shared interval, moving right.
    ZigRight,
    /// Inside the shared interval, moving left.
    ZigLeft,
    /// Inside a degenerate (single-point) shared interval.
    ZigDwell,
    /// Traveling to the robot's own extreme point (0 for r1, 1 for r2).
    Outbound,
    /// Returning to the shared interval boundary.
    Inbound,
}

impl Mode {
    fn inside(self) -> bool {
        matches!(self, Mode::ZigRight | Mode::ZigLeft | Mode::ZigDwell)
    }
}

#[derive(Debug, Clone)]
struct Robot {
    pos: Q,
    mode: Mode,
    /// When the current in-interval session began; None while outside.
    session: Option<Q>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,  // r1
    Right, // r2
}

fn velocity(side: Side, mode: Mode) -> i8 {
    match (side, mode) {
        (_, Mode::ZigRight) => 1,
        (_, Mode::ZigLeft) => -1,
        (_, Mode::ZigDwell) => 0,
        (Side::Left, Mode::Outbound) => -1,
        (Side::Left, Mode::Inbound) => 1,
        (Side::Right, Mode::Outbound) => 1,
        (Side::Right, Mode::Inbound) => -1,
    }
}

fn target(side: Side, mode: Mode, x1: &Q, x4: &Q) -> Option<Q> {
    match (side, mode) {
        (_, Mode::ZigRight) => Some(x4.clone()),
        (_, Mode::ZigLeft) => Some(x1.clone()),
        (_, Mode::ZigDwell) => None,
        (Side::Left, Mode::Outbound) => Some(Q::zero()),
        (Side::Left, Mode::Inbound) => Some(x1.clone()),
        (Side::Right, Mode::Outbound) => Some(Q::one()),
        (Side::Right, Mode::Inbound) => Some(x4.clone()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct StateKey {
    p1: Q,
    m1: Mode,
    p2: Q,
    m2: Mode,
    /// Relative order of the two in-interval session starts; 2 when not
    /// both inside (the tie-break is then irrelevant).
    session_order: i8,
}

/// Runs the distance-triggered controller and returns the two trajectories
/// as explicit eventually-periodic motions.
///
/// Controller rules: a robot inside `[x1, x4]` zigzags at full speed (r1
/// re-enters at `x1` moving right, r2 at `x4` moving left); when the
/// inter-robot distance reaches `d` while strictly decreasing, the robot
/// whose in-interval session started earlier exits (tie: r1); an exiting r1
/// travels to 0 then back to `x1`, an exiting r2 to 1 then back to `x4`; a
/// robot outside the interval never reacts to distance.
pub fn simulate_reactive(
    cp: &CriticalPoints,
    cfg: &ReactiveConfig,
) -> Result<(Trajectory, Trajectory), SimError> {
    let x1 = &cp.x1;
    let x4 = &cp.x4;
    let d = &cfg.d;
    let degenerate = x1 == x4;

    let mut t = Q::zero();
    let mut r1 = Robot {
        pos: x1 - d,
        mode: Mode::Outbound,
        session: None,
    };
    let mut r2 = Robot {
        pos: x1.clone(),
        mode: if degenerate {
            Mode::ZigDwell
        } else {
            Mode::ZigRight
        },
        session: Some(Q::zero()),
    };

    let mut wps1 = vec![Waypoint::new(Q::zero(), r1.pos.clone())];
    let mut wps2 = vec![Waypoint::new(Q::zero(), r2.pos.clone())];
    let record = |wps: &mut Vec<Waypoint>, t: &Q, pos: &Q| {
        if &wps.last().unwrap().time != t {
            wps.push(Waypoint::new(t.clone(), pos.clone()));
        } else {
            debug_assert_eq!(&wps.last().unwrap().position, pos);
        }
    };

    let mut seen: BTreeMap<StateKey, Q> = BTreeMap::new();
    let state_key = |r1: &Robot, r2: &Robot| StateKey {
        p1: r1.pos.clone(),
        m1: r1.mode,
        p2: r2.pos.clone(),
        m2: r2.mode,
        session_order: match (&r1.session, &r2.session) {
            (Some(a), Some(b)) => match a.cmp(b) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            },
            _ => 2,
        },
    };
    seen.insert(state_key(&r1, &r2), Q::zero());

    loop {
        // Time for each robot to reach its current target.
        let dt1 = target(Side::Left, r1.mode, x1, x4).map(|tg| (tg - &r1.pos).abs());
        let dt2 = target(Side::Right, r2.mode, x1, x4).map(|tg| (tg - &r2.pos).abs());
        let dt_wp = match (&dt1, &dt2) {
            (Some(a), Some(b)) => Some(qmin(a.clone(), b.clone())),
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        };

        // Distance-trigger time: the gap is linear until the next waypoint
        // event; it can fire only while some robot is inside.
        let v1 = velocity(Side::Left, r1.mode);
        let v2 = velocity(Side::Right, r2.mode);
        let vrel = v2 - v1; // gap rate of change
        let gap = &r2.pos - &r1.pos;
        let mut dt_trigger: Option<Q> = None;
        if vrel < 0 && (r1.mode.inside() || r2.mode.inside()) {
            let hit = (&gap - d) / crate::rational::qi(-(vrel as i64));
            if !hit.is_negative() {
                let within = match &dt_wp {
                    Some(w) => &hit <= w,
                    None => true,
                };
                if within {
                    dt_trigger = Some(hit);
                }
            }
        }

        let dt = match (&dt_wp, &dt_trigger) {
            (Some(a), Some(b)) => qmin(a.clone(), b.clone()),
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => {
                // Both robots parked and no trigger pending: the state is
                // trivially periodic but the controller cannot reach this.
                unreachable!("controller always has a pending event")
            }
        };

        t = &t + &dt;
        if t > cfg.horizon {
            return Err(SimError::NoCycle(crate::rational::fmt_q(&cfg.horizon)));
        }
        r1.pos = &r1.pos + crate::rational::qi(v1 as i64) * &dt;
        r2.pos = &r2.pos + crate::rational::qi(v2 as i64) * &dt;

        // Waypoint arrivals first (a robot entering at this instant takes
        // part in the trigger's session comparison), then the trigger.
        let arrived1 = dt1.as_ref() == Some(&dt);
        let arrived2 = dt2.as_ref() == Some(&dt);
        if arrived1 {
            r1.mode = match r1.mode {
                Mode::ZigRight => Mode::ZigLeft,
                Mode::ZigLeft => Mode::ZigRight,
                Mode::Outbound => Mode::Inbound,
                Mode::Inbound => {
                    r1.session = Some(t.clone());
                    if degenerate {
                        Mode::ZigDwell
                    } else {
                        Mode::ZigRight
                    }
                }
                Mode::ZigDwell => unreachable!("dwell has no target"),
            };
        }
        if arrived2 {
            r2.mode = match r2.mode {
                Mode::ZigRight => Mode::ZigLeft,
                Mode::ZigLeft => Mode::ZigRight,
                Mode::Outbound => Mode::Inbound,
                Mode::Inbound => {
                    r2.session = Some(t.clone());
                    if degenerate {
                        Mode::ZigDwell
                    } else {
                        Mode::ZigLeft
                    }
                }
                Mode::ZigDwell => unreachable!("dwell has no target"),
            };
        }

        if dt_trigger.as_ref() == Some(&dt) {
            debug_assert_eq!(&r2.pos - &r1.pos, *d);
            let exit_r1 = match (r1.mode.inside(), r2.mode.inside()) {
                (true, true) => {
                    let s1 = r1.session.as_ref().expect("inside implies session");
                    let s2 = r2.session.as_ref().expect("inside implies session");
                    s1 <= s2 // older session exits; tie goes to r1
                }
                (true, false) => true,
                (false, true) => false,
                (false, false) => unreachable!("trigger gated on inside robots"),
            };
            if exit_r1 {
                r1.mode = Mode::Outbound;
                r1.session = None;
            } else {
                r2.mode = Mode::Outbound;
                r2.session = None;
            }
        }

        record(&mut wps1, &t, &r1.pos);
        record(&mut wps2, &t, &r2.pos);

        let key = state_key(&r1, &r2);
        if let Some(t_prev) = seen.get(&key) {
            if t_prev < &t {
                let cs1 = wps1
                    .iter()
                    .position(|w| &w.time == t_prev)
                    .expect("cycle start is an event time");
                let cs2 = wps2
                    .iter()
                    .position(|w| &w.time == t_prev)
                    .expect("cycle start is an event time");
                let tr1 = Trajectory::new(wps1, cs1).expect("simulated motion is valid");
                let tr2 = Trajectory::new(wps2, cs2).expect("simulated motion is valid");
                return Ok((tr1, tr2));
            }
        } else {
            seen.insert(key, t.clone());
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportMode {
    /// Gaps within the periodic regime only.
    SteadyState,
    /// Also includes gaps from t = 0 through the transient.
    TransientInclusive,
}

/// Waiting-time data for one instance point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointWaiting {
    pub index: usize,
    pub position: Q,
    pub idleness: Q,
    pub analytic: Option<Q>,
    /// True when `analytic` is an upper bound rather than an exact value.
    pub analytic_is_bound: bool,
    /// None when the point is never visited in a full period.
    pub simulated: Option<Q>,
    /// Whether a simulation was run for this row; with it set, a simulated
    /// None means "never visited" rather than "not simulated".
    pub has_simulation: bool,
}

impl PointWaiting {
    /// The larger available waiting time; None when the point is never
    /// visited (infinite waiting).
    pub fn waiting(&self) -> Option<Q> {
        match (&self.analytic, &self.simulated) {
            (Some(a), Some(s)) => Some(qmax(a.clone(), s.clone())),
            (Some(a), None) => {
                if self.has_simulation {
                    None
                } else {
                    Some(a.clone())
                }
            }
            (None, Some(s)) => Some(s.clone()),
            (None, None) => None,
        }
    }

    pub fn ratio(&self) -> Option<Q> {
        self.waiting().map(|w| w / &self.idleness)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaitingReport {
    pub rows: Vec<PointWaiting>,
    pub mode: ReportMode,
}

impl WaitingReport {
    /// Max of w/I over all points; None when some point is never visited.
    pub fn max_ratio(&self) -> Option<Q> {
        let mut best: Option<Q> = None;
        for row in &self.rows {
            let r = row.ratio()?;
            best = Some(match best {
                Some(b) => qmax(b, r),
                None => r,
            });
        }
        best
    }

    pub fn never_visited(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| r.waiting().is_none())
            .map(|r| r.index)
            .collect()
    }

    /// Merges analytic values into a simulated report (per point index).
    pub fn merge_analytic(mut self, analytic: &WaitingReport) -> WaitingReport {
        for row in &mut self.rows {
            if let Some(arow) = analytic.rows.iter().find(|a| a.index == row.index) {
                row.analytic = arow.analytic.clone();
                row.analytic_is_bound = arow.analytic_is_bound;
            }
        }
        self
    }
}

/// Computes per-point waiting times of a schedule by extracting every
/// crossing or touch of each point's coordinate by either robot.
///
/// Steady-state mode analyzes one full joint period of the periodic regime
/// (with wrap-around); transient-inclusive mode also counts the gaps from
/// t = 0, including the lead-in before the first visit.
pub fn waiting_times(sp: &SchedulePair, inst: &Instance, mode: ReportMode) -> WaitingReport {
    let period = sp.joint_period();
    let steady = sp.steady_start();
    let rows = inst
        .points()
        .iter()
        .enumerate()
        .map(|(index, p)| {
            let simulated = match mode {
                ReportMode::SteadyState => {
                    let end = &steady + &period;
                    let visits = merge_visit_lists(
                        sp.r1.visits_of(&p.position, &steady, &end),
                        sp.r2.visits_of(&p.position, &steady, &end),
                    );
                    max_gap_periodic(&visits, &period)
                }
                ReportMode::TransientInclusive => {
                    let end = &steady + &period + &period;
                    let zero = Q::zero();
                    let visits = merge_visit_lists(
                        sp.r1.visits_of(&p.position, &zero, &end),
                        sp.r2.visits_of(&p.position, &zero, &end),
                    );
                    max_gap_from_start(&visits)
                }
            };
            PointWaiting {
                index,
                position: p.position.clone(),
                idleness: p.idleness.clone(),
                analytic: None,
                analytic_is_bound: false,
                simulated,
                has_simulation: true,
            }
        })
        .collect();
    WaitingReport { rows, mode }
}

/// Max gap between visit intervals over one period with wrap-around;
/// None when there are no visits.
fn max_gap_periodic(visits: &[(Q, Q)], period: &Q) -> Option<Q> {
    if visits.is_empty() {
        return None;
    }
    let mut max = Q::zero();
    for pair in visits.windows(2) {
        max = qmax(max, &pair[1].0 - &pair[0].1);
    }
    let wrap = &visits[0].0 + period - &visits.last().unwrap().1;
    Some(qmax(max, qmax(wrap, Q::zero())))
}

/// Max gap including the lead-in from t = 0; None when no visits.
fn max_gap_from_start(visits: &[(Q, Q)]) -> Option<Q> {
    if visits.is_empty() {
        return None;
    }
    let mut max = visits[0].0.clone();
    for pair in visits.windows(2) {
        max = qmax(max, &pair[1].0 - &pair[0].1);
    }
    Some(max)
}

/// Structural diagnostics of a schedule pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationReport {
    /// First time where r1 is strictly right of r2, if any.
    pub ordering_violation: Option<Q>,
    /// Points whose waiting satisfies w <= I but some window of length I/2
    /// has no robot inside the point's range: (index, offending gap).
    pub window_failures: Vec<(usize, Q)>,
}

impl ObservationReport {
    pub fn all_pass(&self) -> bool {
        self.ordering_violation.is_none() && self.window_failures.is_empty()
    }
}

/// Verifies the two structural facts every feasible schedule obeys:
/// r1 never passes r2, and for every point satisfied by the schedule
/// (w <= I), every half-idleness window contains a robot inside the
/// point's range.
pub fn observation_checks(sp: &SchedulePair, inst: &Instance) -> ObservationReport {
    let period = sp.joint_period();
    let steady = sp.steady_start();
    let end = &steady + &period;
    let zero = Q::zero();
    let ordering_violation = sp.ordering_violation(&zero, &end);

    let report = waiting_times(sp, inst, ReportMode::SteadyState);
    let mut window_failures = Vec::new();
    let two = crate::rational::qi(2);
    for row in &report.rows {
        let w = match &row.simulated {
            Some(w) => w,
            None => continue,
        };
        if w > &row.idleness {
            continue;
        }
        let r = range(&inst.points()[row.index]);
        let covered = crate::trajectory::merge_visit_lists(
            sp.r1.time_inside(&r.lo, &r.hi, &steady, &end),
            sp.r2.time_inside(&r.lo, &r.hi, &steady, &end),
        );
        let gap = max_gap_periodic(&covered, &period);
        let half = &row.idleness / &two;
        match gap {
            Some(g) if g <= half => {}
            Some(g) => window_failures.push((row.index, g)),
            None => window_failures.push((row.index, period.clone())),
        }
    }
    ObservationReport {
        ordering_violation,
        window_failures,
    }
}

/// Minimum inter-robot distance over the instants where both robots are
/// inside `[x1, x4]`, within one steady period. None when the robots are
/// never simultaneously inside.
pub fn min_distance_both_inside(sp: &SchedulePair, x1: &Q, x4: &Q) -> Option<Q> {
    let period = sp.joint_period();
    let steady = sp.steady_start();
    let end = &steady + &period;
    let in1 = sp.r1.time_inside(x1, x4, &steady, &end);
    let in2 = sp.r2.time_inside(x1, x4, &steady, &end);
    // Intersect the two interval lists.
    let mut both = Vec::new();
    for (s1, e1) in &in1 {
        for (s2, e2) in &in2 {
            let s = qmax(s1.clone(), s2.clone());
            let e = qmin(e1.clone(), e2.clone());
            if s <= e {
                both.push((s, e));
            }
        }
    }
    if both.is_empty() {
        return None;
    }
    // The gap is piecewise linear; its minimum over each interval occurs at
    // an endpoint or at a trajectory breakpoint inside it.
    let mut ts: Vec<Q> = Vec::new();
    for (s, e) in &both {
        ts.push(s.clone());
        ts.push(e.clone());
        for t in sp.r1.breakpoints_between(s, e) {
            ts.push(t);
        }
        for t in sp.r2.breakpoints_between(s, e) {
            ts.push(t);
        }
    }
    ts.sort();
    ts.dedup();
    let mut min: Option<Q> = None;
    for t in &ts {
        let g = sp.r2.position_at(t) - sp.r1.position_at(t);
        min = Some(match min {
            Some(m) => qmin(m, g),
            None => g,
        });
    }
    min
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{critical_points, Instance, PointRequirement};
    use crate::rational::{q, qi};
    use crate::trajectory::ScheduleKind;

    fn instance_a1() -> Instance {
        Instance::new(vec![
            PointRequirement::new(qi(0), q(5, 3)),
            PointRequirement::new(q(1, 2), q(1, 3)),
            PointRequirement::new(qi(1), q(5, 3)),
        ])
        .unwrap()
    }

    #[test]
    fn reactive_a1_steady_period() {
        let (cp, _) = critical_points(&instance_a1()).unwrap();
        let cfg = ReactiveConfig::for_critical_points(&cp);
        let (tr1, tr2) = simulate_reactive(&cp, &cfg).unwrap();
        assert_eq!(tr1.period(), &q(5, 3));
        assert_eq!(tr2.period(), &q(5, 3));
        // The initial configuration (r1 outbound at x1 - d, r2 at x1
        // moving right) recurs exactly, so the motion is periodic from 0.
        assert_eq!(tr1.cycle_start_time(), &qi(0));
        // 0-visits at t = 1/6 + k * 5/3.
        assert_eq!(tr1.position_at(&q(1, 6)), qi(0));
        assert_eq!(tr1.position_at(&q(11, 6)), qi(0));
    }

    #[test]
    fn reactive_a1_endpoint_gaps() {
        let (cp, work) = critical_points(&instance_a1()).unwrap();
        let cfg = ReactiveConfig::for_critical_points(&cp);
        let (tr1, tr2) = simulate_reactive(&cp, &cfg).unwrap();
        let sp = SchedulePair::new(tr1, tr2, ScheduleKind::Alg2);
        let report = waiting_times(&sp, &work, ReportMode::SteadyState);
        assert_eq!(report.rows[0].simulated, Some(q(5, 3)));
        assert_eq!(report.rows[2].simulated, Some(q(5, 3)));
        // Middle point bounded by 2*max{x-x1, x4-x} + d = 1/2.
        assert!(report.rows[1].simulated.as_ref().unwrap() <= &q(1, 2));
    }

    #[test]
    fn reactive_d_zero_override_terminates() {
        let (cp, _) = critical_points(&instance_a1()).unwrap();
        let cfg = ReactiveConfig::for_critical_points(&cp).with_d(qi(0));
        let (tr1, tr2) = simulate_reactive(&cp, &cfg).unwrap();
        assert!(tr1.period().is_positive());
        assert!(tr2.period().is_positive());
    }

    #[test]
    fn reactive_distance_invariant() {
        let (cp, _) = critical_points(&instance_a1()).unwrap();
        let cfg = ReactiveConfig::for_critical_points(&cp);
        let (tr1, tr2) = simulate_reactive(&cp, &cfg).unwrap();
        let sp = SchedulePair::new(tr1, tr2, ScheduleKind::Alg2);
        if let Some(min) = min_distance_both_inside(&sp, &cp.x1, &cp.x4) {
            assert!(min >= cp.d);
        }
    }

    #[test]
    fn waiting_never_visited() {
        let sp = SchedulePair::new(
            Trajectory::dwell(q(1, 2)),
            Trajectory::dwell(q(1, 2)),
            ScheduleKind::Witness,
        );
        let report = waiting_times(&sp, &instance_a1(), ReportMode::SteadyState);
        assert_eq!(report.rows[0].simulated, None);
        assert_eq!(report.rows[1].simulated, Some(qi(0)));
        assert_eq!(report.never_visited(), vec![0, 2]);
        assert_eq!(report.max_ratio(), None);
    }

    #[test]
    fn waiting_matches_zigzag_closed_form() {
        // Single robot zigzag on [0,1]: w(x) = 2*max(x, 1-x) interior,
        // 2 at the endpoints.
        let sp = SchedulePair::new(
            Trajectory::dwell(qi(0)),
            Trajectory::zigzag(qi(0), qi(1), true),
            ScheduleKind::Nested4,
        );
        let inst = Instance::new(vec![
            PointRequirement::new(qi(0), qi(2)),
            PointRequirement::new(q(1, 4), qi(2)),
            PointRequirement::new(qi(1), qi(2)),
        ])
        .unwrap();
        let report = waiting_times(&sp, &inst, ReportMode::SteadyState);
        // 0 is visited by the dwelling robot continuously.
        assert_eq!(report.rows[0].simulated, Some(qi(0)));
        assert_eq!(report.rows[1].simulated, Some(q(3, 2)));
        assert_eq!(report.rows[2].simulated, Some(qi(2)));
    }

    #[test]
    fn steady_state_stable_over_concatenated_periods() {
        let (cp, work) = critical_points(&instance_a1()).unwrap();
        let cfg = ReactiveConfig::for_critical_points(&cp);
        let (tr1, tr2) = simulate_reactive(&cp, &cfg).unwrap();
        let sp = SchedulePair::new(tr1, tr2, ScheduleKind::Alg2);
        let one = waiting_times(&sp, &work, ReportMode::SteadyState);
        for k in [2i64, 3] {
            let period = sp.joint_period() * qi(k);
            let steady = sp.steady_start();
            let end = &steady + &period;
            for row in &one.rows {
                let visits = merge_visit_lists(
                    sp.r1.visits_of(&row.position, &steady, &end),
                    sp.r2.visits_of(&row.position, &steady, &end),
                );
                assert_eq!(max_gap_periodic(&visits, &period), row.simulated);
            }
        }
    }

    #[test]
    fn observation_checks_swapped_pair_fails() {
        let sp = SchedulePair::new(
            Trajectory::zigzag(q(1, 2), qi(1), true),
            Trajectory::zigzag(qi(0), q(1, 2), true),
            ScheduleKind::Partition,
        );
        let obs = observation_checks(&sp, &instance_a1());
        assert_eq!(obs.ordering_violation, Some(qi(0)));
    }
}
