//! Eventually-periodic piecewise-linear robot motions.
//!
//! A trajectory is a finite transient prefix followed by an exactly
//! repeating cycle. Motion between waypoints is linear interpolation; legs
//! have speed at most 1 (speed 0 legs are dwells).

use crate::rational::{qlcm, qmax, qmin, qmod, Q};
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Waypoint {
    pub time: Q,
    pub position: Q,
}

impl Waypoint {
    pub fn new(time: Q, position: Q) -> Self {
        Self { time, position }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrajectoryError {
    #[error("need at least two waypoints")]
    TooFewWaypoints,
    #[error("waypoint times must be strictly increasing (index {0})")]
    NonIncreasingTime(usize),
    #[error("leg ending at waypoint {0} exceeds unit speed")]
    SpeedExceeded(usize),
    #[error("waypoint {0} outside [0,1]")]
    PositionOutOfRange(usize),
    #[error("cycle start index {0} out of bounds")]
    BadCycleStart(usize),
    #[error("position at cycle start differs from position at last waypoint")]
    OpenCycle,
}

/// A piecewise-linear motion, periodic from `cycle_start` onward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    waypoints: Vec<Waypoint>,
    cycle_start: usize,
    period: Q,
}

impl Trajectory {
    /// Validates the waypoint list: strictly increasing times, unit speed
    /// bound on every leg, positions in `[0,1]`, and a closed cycle from
    /// `cycle_start` to the last waypoint.
    pub fn new(waypoints: Vec<Waypoint>, cycle_start: usize) -> Result<Self, TrajectoryError> {
        if waypoints.len() < 2 {
            return Err(TrajectoryError::TooFewWaypoints);
        }
        for (i, w) in waypoints.iter().enumerate() {
            if w.position.is_negative() || w.position > Q::one() {
                return Err(TrajectoryError::PositionOutOfRange(i));
            }
            if i > 0 {
                let dt = &w.time - &waypoints[i - 1].time;
                if !dt.is_positive() {
                    return Err(TrajectoryError::NonIncreasingTime(i));
                }
                if (&w.position - &waypoints[i - 1].position).abs() > dt {
                    return Err(TrajectoryError::SpeedExceeded(i));
                }
            }
        }
        if cycle_start >= waypoints.len() - 1 {
            return Err(TrajectoryError::BadCycleStart(cycle_start));
        }
        let last = waypoints.last().unwrap();
        if waypoints[cycle_start].position != last.position {
            return Err(TrajectoryError::OpenCycle);
        }
        let period = &last.time - &waypoints[cycle_start].time;
        Ok(Self {
            waypoints,
            cycle_start,
            period,
        })
    }

    /// Full-speed back-and-forth motion on `[lo, hi]`, periodic from t = 0,
    /// starting at one of the endpoints. Collapses to a dwell when the
    /// interval is a single point.
    pub fn zigzag(lo: Q, hi: Q, start_at_lo: bool) -> Self {
        assert!(lo <= hi);
        if lo == hi {
            return Self::dwell(lo);
        }
        let half = &hi - &lo;
        let full = &half + &half;
        let wps = if start_at_lo {
            vec![
                Waypoint::new(Q::zero(), lo.clone()),
                Waypoint::new(half, hi),
                Waypoint::new(full, lo),
            ]
        } else {
            vec![
                Waypoint::new(Q::zero(), hi.clone()),
                Waypoint::new(half, lo),
                Waypoint::new(full, hi),
            ]
        };
        Self::new(wps, 0).expect("zigzag waypoints are valid")
    }

    /// A robot parked forever at `pos`.
    pub fn dwell(pos: Q) -> Self {
        Self::new(
            vec![
                Waypoint::new(Q::zero(), pos.clone()),
                Waypoint::new(Q::one(), pos),
            ],
            0,
        )
        .expect("dwell waypoints are valid")
    }

    pub fn waypoints(&self) -> &[Waypoint] {
        &self.waypoints
    }

    pub fn cycle_start(&self) -> usize {
        self.cycle_start
    }

    pub fn period(&self) -> &Q {
        &self.period
    }

    pub fn cycle_start_time(&self) -> &Q {
        &self.waypoints[self.cycle_start].time
    }

    pub fn end_time(&self) -> &Q {
        &self.waypoints.last().unwrap().time
    }

    /// Folds `t` into the explicit waypoint span: times beyond the last
    /// waypoint reduce modulo the period into the cycle.
    fn fold(&self, t: &Q) -> Q {
        if t <= self.end_time() {
            t.clone()
        } else {
            self.cycle_start_time() + qmod(&(t - self.cycle_start_time()), &self.period)
        }
    }

    /// Position at any time `t >= 0`.
    pub fn position_at(&self, t: &Q) -> Q {
        let t = self.fold(t);
        debug_assert!(&t >= &self.waypoints[0].time);
        // Index of the last waypoint with time <= t.
        let i = self
            .waypoints
            .partition_point(|w| w.time <= t)
            .saturating_sub(1);
        if i + 1 == self.waypoints.len() {
            return self.waypoints[i].position.clone();
        }
        let a = &self.waypoints[i];
        let b = &self.waypoints[i + 1];
        let dt = &b.time - &a.time;
        let frac = (&t - &a.time) / dt;
        &a.position + (&b.position - &a.position) * frac
    }

    /// Smallest unrolled waypoint time strictly greater than `t`.
    fn next_breakpoint_after(&self, t: &Q) -> Q {
        if t < self.end_time() {
            let i = self.waypoints.partition_point(|w| &w.time <= t);
            if i < self.waypoints.len() {
                return self.waypoints[i].time.clone();
            }
        }
        // Inside the rolled-out cycle.
        let local = self.cycle_start_time() + qmod(&(t - self.cycle_start_time()), &self.period);
        let i = self.waypoints.partition_point(|w| w.time <= local);
        debug_assert!(i < self.waypoints.len());
        t + (&self.waypoints[i].time - &local)
    }

    /// Linear legs `(t0, p0, t1, p1)` covering exactly `[a, b]`.
    pub fn legs_between(&self, a: &Q, b: &Q) -> Vec<(Q, Q, Q, Q)> {
        assert!(a <= b);
        let mut legs = Vec::new();
        let mut t0 = a.clone();
        let mut p0 = self.position_at(&t0);
        while &t0 < b {
            let t1 = qmin(self.next_breakpoint_after(&t0), b.clone());
            let p1 = self.position_at(&t1);
            legs.push((t0, p0, t1.clone(), p1.clone()));
            t0 = t1;
            p0 = p1;
        }
        legs
    }

    /// All breakpoint (waypoint) times within `[a, b]`, plus the window ends.
    pub fn breakpoints_between(&self, a: &Q, b: &Q) -> Vec<Q> {
        let mut ts = vec![a.clone()];
        let mut t = a.clone();
        loop {
            t = self.next_breakpoint_after(&t);
            if &t >= b {
                break;
            }
            ts.push(t.clone());
        }
        ts.push(b.clone());
        ts
    }

    /// Closed time intervals within `[a, b]` during which the robot's
    /// position coincides with `x`. Dwells at `x` yield non-degenerate
    /// intervals; crossings and touches yield single instants. The result
    /// is merged: adjacent or overlapping intervals are coalesced.
    pub fn visits_of(&self, x: &Q, a: &Q, b: &Q) -> Vec<(Q, Q)> {
        let mut raw = Vec::new();
        for (t0, p0, t1, p1) in self.legs_between(a, b) {
            if p0 == p1 {
                if &p0 == x {
                    raw.push((t0, t1));
                }
            } else if (&p0 <= x && x <= &p1) || (&p1 <= x && x <= &p0) {
                let dt = &t1 - &t0;
                let hit = &t0 + dt * (x - &p0) / (&p1 - &p0);
                raw.push((hit.clone(), hit));
            }
        }
        merge_intervals(raw)
    }

    /// Closed time intervals within `[a, b]` during which the position lies
    /// inside `[lo, hi]`, merged.
    pub fn time_inside(&self, lo: &Q, hi: &Q, a: &Q, b: &Q) -> Vec<(Q, Q)> {
        let mut raw = Vec::new();
        for (t0, p0, t1, p1) in self.legs_between(a, b) {
            if p0 == p1 {
                if &p0 >= lo && &p0 <= hi {
                    raw.push((t0, t1));
                }
                continue;
            }
            // Solve for the sub-time-interval where lo <= p(t) <= hi.
            let dt = &t1 - &t0;
            let dp = &p1 - &p0;
            let time_at = |target: &Q| -> Q { &t0 + &dt * (target - &p0) / &dp };
            let (enter_p, exit_p) = if dp.is_positive() {
                (qmax(p0.clone(), lo.clone()), qmin(p1.clone(), hi.clone()))
            } else {
                (qmin(p0.clone(), hi.clone()), qmax(p1.clone(), lo.clone()))
            };
            let in_order = if dp.is_positive() {
                enter_p <= exit_p
            } else {
                enter_p >= exit_p
            };
            if in_order {
                let s = time_at(&enter_p);
                let e = time_at(&exit_p);
                if s <= e {
                    raw.push((s, e));
                }
            }
        }
        merge_intervals(raw)
    }

    /// The reflected motion `p -> 1 - p`.
    pub fn mirror(&self) -> Trajectory {
        let wps = self
            .waypoints
            .iter()
            .map(|w| Waypoint::new(w.time.clone(), Q::one() - &w.position))
            .collect();
        Trajectory::new(wps, self.cycle_start).expect("mirroring preserves validity")
    }
}

/// Coalesces sorted-by-construction closed intervals that touch or overlap.
fn merge_intervals(mut raw: Vec<(Q, Q)>) -> Vec<(Q, Q)> {
    raw.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut merged: Vec<(Q, Q)> = Vec::new();
    for (s, e) in raw {
        match merged.last_mut() {
            Some(last) if s <= last.1 => {
                if e > last.1 {
                    last.1 = e;
                }
            }
            _ => merged.push((s, e)),
        }
    }
    merged
}

/// Merges visit interval lists coming from the two robots.
pub fn merge_visit_lists(a: Vec<(Q, Q)>, b: Vec<(Q, Q)>) -> Vec<(Q, Q)> {
    let mut all = a;
    all.extend(b);
    merge_intervals(all)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Partition,
    Nested4,
    Alg1,
    Alg2,
    Witness,
}

impl ScheduleKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScheduleKind::Partition => "partition",
            ScheduleKind::Nested4 => "nested4",
            ScheduleKind::Alg1 => "alg1",
            ScheduleKind::Alg2 => "alg2",
            ScheduleKind::Witness => "witness",
        }
    }
}

/// A pair of trajectories with `r1` always at or left of `r2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchedulePair {
    pub r1: Trajectory,
    pub r2: Trajectory,
    pub kind: ScheduleKind,
}

impl SchedulePair {
    pub fn new(r1: Trajectory, r2: Trajectory, kind: ScheduleKind) -> Self {
        Self { r1, r2, kind }
    }

    /// Least common multiple of the two periods.
    pub fn joint_period(&self) -> Q {
        qlcm(self.r1.period(), self.r2.period())
    }

    /// Earliest time from which both trajectories are in their cycles.
    pub fn steady_start(&self) -> Q {
        qmax(
            self.r1.cycle_start_time().clone(),
            self.r2.cycle_start_time().clone(),
        )
    }

    /// The reflected pair: robots swap roles so ordering is preserved.
    pub fn mirror(&self) -> SchedulePair {
        SchedulePair::new(self.r2.mirror(), self.r1.mirror(), self.kind)
    }

    /// Checks `r1.pos(t) <= r2.pos(t)` at every merged breakpoint in
    /// `[a, b]`, which suffices for piecewise-linear motions. Returns the
    /// first violating time, if any.
    pub fn ordering_violation(&self, a: &Q, b: &Q) -> Option<Q> {
        let mut ts = self.r1.breakpoints_between(a, b);
        ts.extend(self.r2.breakpoints_between(a, b));
        ts.sort();
        ts.dedup();
        ts.into_iter()
            .find(|t| self.r1.position_at(t) > self.r2.position_at(t))
    }
}

/// Combines two unordered physical motions into an ordered pair via identity
/// relabeling: the reported `r1` is the pointwise minimum of the two
/// positions and `r2` the pointwise maximum. Visit times of every coordinate
/// are unchanged. Both inputs must be periodic from t = 0.
pub fn combine_relabeled(a: &Trajectory, b: &Trajectory, kind: ScheduleKind) -> SchedulePair {
    assert!(a.cycle_start_time().is_zero() && b.cycle_start_time().is_zero());
    let period = qlcm(a.period(), b.period());
    let zero = Q::zero();
    let mut ts = a.breakpoints_between(&zero, &period);
    ts.extend(b.breakpoints_between(&zero, &period));
    ts.sort();
    ts.dedup();
    // Insert crossing times so min/max stay piecewise linear on the grid.
    let mut grid = Vec::with_capacity(ts.len() * 2);
    for pair in ts.windows(2) {
        let (t0, t1) = (&pair[0], &pair[1]);
        let (pa0, pb0) = (a.position_at(t0), b.position_at(t0));
        let (pa1, pb1) = (a.position_at(t1), b.position_at(t1));
        grid.push(t0.clone());
        let d0 = &pa0 - &pb0;
        let d1 = &pa1 - &pb1;
        if (d0.is_positive() && d1.is_negative()) || (d0.is_negative() && d1.is_positive()) {
            let cross = t0 + (t1 - t0) * &d0 / (&d0 - &d1);
            grid.push(cross);
        }
    }
    grid.push(ts.last().unwrap().clone());
    let lo_wps = grid
        .iter()
        .map(|t| Waypoint::new(t.clone(), qmin(a.position_at(t), b.position_at(t))))
        .collect();
    let hi_wps = grid
        .iter()
        .map(|t| Waypoint::new(t.clone(), qmax(a.position_at(t), b.position_at(t))))
        .collect();
    let r1 = Trajectory::new(lo_wps, 0).expect("pointwise min of valid motions is valid");
    let r2 = Trajectory::new(hi_wps, 0).expect("pointwise max of valid motions is valid");
    SchedulePair::new(r1, r2, kind)
}
