//! Schedule constructors and their analytic waiting-time formulas.

use crate::model::{
    classify, critical_points, range, theorem1_check, CriticalPoints, CriticalPointsError,
    Instance, Verdict,
};
use crate::rational::{q, qi, qmax, qmin, Q};
use crate::simulator::{
    simulate_reactive, waiting_times, PointWaiting, ReactiveConfig, ReportMode, SimError,
    WaitingReport,
};
use crate::trajectory::{combine_relabeled, ScheduleKind, SchedulePair, Trajectory};
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScheduleError {
    #[error("instance has no point whose range avoids both endpoints")]
    NoInteriorPoint,
    #[error("endpoint-class structure absent: some range avoids both endpoints")]
    NotEndpointOnly,
    #[error("instance fails a necessary feasibility condition: {0}")]
    Infeasible(String),
    #[error(transparent)]
    CriticalPoints(#[from] CriticalPointsError),
    #[error(transparent)]
    Simulation(#[from] SimError),
}

/// Partition schedule for instances where every point's range touches an
/// endpoint. Splits the path at the endpoint-class boundary: r1 zigzags the
/// left part with 0, r2 the right part with 1. Valid exactly when the
/// endpoint-class characterization holds, in which case every waiting time
/// meets its deadline.
pub fn partition_schedule(inst: &Instance) -> Result<SchedulePair, ScheduleError> {
    let cls = classify(inst);
    if !cls.s00.is_empty() {
        return Err(ScheduleError::NotEndpointOnly);
    }
    let (report, x10, x01) = theorem1_check(inst).expect("no interior-class points");
    if report.verdict != Verdict::FeasibleWithSchedule {
        let name = report
            .first_failure()
            .map(|e| e.name.to_string())
            .unwrap_or_else(|| "unknown".into());
        return Err(ScheduleError::Infeasible(name));
    }
    // 0 is in X10 and 1 in X01 (conditions 1-2), so X10 = [0, a] and
    // X01 = [b, 1]. r1 sweeps all of X10: every point assigned there has
    // its range containing [0, a] (ranges of its own class intersect to
    // X10, and a both-endpoint range reaches past a), so the sweep meets
    // every deadline. The two segments may overlap; that is harmless.
    let r1 = if x10.hi.is_zero() {
        Trajectory::dwell(qi(0))
    } else {
        Trajectory::zigzag(qi(0), x10.hi.clone(), true)
    };
    let r2 = if x01.lo.is_one() {
        Trajectory::dwell(qi(1))
    } else {
        Trajectory::zigzag(x01.lo.clone(), qi(1), true)
    };
    // The segments may overlap; identity relabeling (pointwise min/max)
    // keeps every point's visit times while restoring r1 <= r2.
    Ok(combine_relabeled(&r1, &r2, ScheduleKind::Partition))
}

/// Two-robot schedule achieving waiting time at most 4 times every
/// deadline, on any instance passing the necessary conditions. One robot
/// zigzags the whole path; the other zigzags the range of a most-demanding
/// point (or parks, when even the tightest deadline is at least 1/2).
pub fn nested4_schedule(inst: &Instance) -> Result<SchedulePair, ScheduleError> {
    let tightest = inst
        .points()
        .iter()
        .min_by(|a, b| a.idleness.cmp(&b.idleness))
        .expect("instance is non-empty");
    if tightest.idleness >= q(1, 2) {
        let r1 = Trajectory::dwell(qi(0));
        let r2 = Trajectory::zigzag(qi(0), qi(1), true);
        return Ok(SchedulePair::new(r1, r2, ScheduleKind::Nested4));
    }
    let b = range(tightest);
    let inner = if b.lo == b.hi {
        Trajectory::dwell(b.lo)
    } else {
        Trajectory::zigzag(b.lo, b.hi, true)
    };
    let outer = Trajectory::zigzag(qi(0), qi(1), true);
    Ok(combine_relabeled(&inner, &outer, ScheduleKind::Nested4))
}

/// Result of building an interior-geometry schedule: the pair itself plus
/// the critical-point digest it was derived from. The pair is expressed in
/// the instance's original coordinates.
#[derive(Debug, Clone)]
pub struct BuiltSchedule {
    pub pair: SchedulePair,
    pub cp: CriticalPoints,
}

// The interior-geometry schedules only need the critical points to exist;
// they do not require admissibility (their ratio guarantees are proved for
// admissible instances, but the constructions run on any instance with a
// usable [x1, x4], and the tightness analysis deliberately exercises some
// that fail a necessary condition).
fn interior_geometry(inst: &Instance) -> Result<(CriticalPoints, Instance), ScheduleError> {
    let cls = classify(inst);
    if cls.s00.is_empty() {
        return Err(ScheduleError::NoInteriorPoint);
    }
    Ok(critical_points(inst)?)
}

/// Split-at-`x3` schedule: r1 zigzags `[0, x3]`, r2 zigzags `[x3, 1]`,
/// both starting at `x3` at time zero moving apart (the worst-case phase).
/// Achieves ratio at most `1 + 2*alpha`.
pub fn alg1_schedule(inst: &Instance) -> Result<BuiltSchedule, ScheduleError> {
    let (cp, _work) = interior_geometry(inst)?;
    let x3 = &cp.x3;
    let r1 = if x3.is_zero() {
        Trajectory::dwell(qi(0))
    } else {
        Trajectory::zigzag(qi(0), x3.clone(), false)
    };
    let r2 = if x3.is_one() {
        Trajectory::dwell(qi(1))
    } else {
        Trajectory::zigzag(x3.clone(), qi(1), true)
    };
    let mut pair = SchedulePair::new(r1, r2, ScheduleKind::Alg1);
    if cp.flipped {
        pair = pair.mirror();
    }
    Ok(BuiltSchedule { pair, cp })
}

/// Distance-triggered schedule: both robots patrol `[x1, x4]`, and
/// whenever they close to distance `d` the staler one detours to its
/// endpoint. Achieves ratio at most `(2 + alpha) / (1 + alpha)`.
pub fn alg2_schedule(inst: &Instance) -> Result<BuiltSchedule, ScheduleError> {
    alg2_schedule_with(inst, None)
}

/// [`alg2_schedule`] with an explicit simulation horizon (the default is
/// generous enough for every instance the generators produce, but callers
/// exploring adversarial inputs can raise it).
pub fn alg2_schedule_with(
    inst: &Instance,
    horizon: Option<&Q>,
) -> Result<BuiltSchedule, ScheduleError> {
    let (cp, _work) = interior_geometry(inst)?;
    let mut cfg = ReactiveConfig::for_critical_points(&cp);
    if let Some(h) = horizon {
        cfg = cfg.with_horizon(h.clone());
    }
    let (tr1, tr2) = simulate_reactive(&cp, &cfg)?;
    let mut pair = SchedulePair::new(tr1, tr2, ScheduleKind::Alg2);
    if cp.flipped {
        pair = pair.mirror();
    }
    Ok(BuiltSchedule { pair, cp })
}

/// Per-point analytic waiting guarantees of the split-at-`x3` schedule.
/// Every value is exact for its zigzag segment. The split point is visited
/// by both robots with periods `2*x3` and `2*(1-x3)`; any window of the
/// smaller period contains a visit, and with the coincident start the gap
/// of exactly that length occurs, so `w(x3) = 2*min{x3, 1-x3}`.
pub fn analytic_waiting_alg1(inst: &Instance, cp: &CriticalPoints) -> WaitingReport {
    let two = qi(2);
    let rows = inst
        .points()
        .iter()
        .enumerate()
        .map(|(index, p)| {
            // Work in the normalized orientation used to derive cp.
            let x = if cp.flipped {
                qi(1) - &p.position
            } else {
                p.position.clone()
            };
            let w = if x < cp.x3 {
                &two * qmax(x.clone(), &cp.x3 - &x)
            } else if x > cp.x3 {
                &two * qmax(&x - &cp.x3, qi(1) - &x)
            } else {
                &two * qmin(cp.x3.clone(), qi(1) - &cp.x3)
            };
            PointWaiting {
                index,
                position: p.position.clone(),
                idleness: p.idleness.clone(),
                analytic: Some(w),
                analytic_is_bound: false,
                simulated: None,
                has_simulation: false,
            }
        })
        .collect();
    WaitingReport {
        rows,
        mode: ReportMode::SteadyState,
    }
}

/// Per-point analytic waiting values of the distance-triggered schedule:
/// exact outside `[x1, x4]`, an upper bound (marked as such) inside.
pub fn analytic_waiting_alg2(inst: &Instance, cp: &CriticalPoints) -> WaitingReport {
    let two = qi(2);
    let rows = inst
        .points()
        .iter()
        .enumerate()
        .map(|(index, p)| {
            let x = if cp.flipped {
                qi(1) - &p.position
            } else {
                p.position.clone()
            };
            let (w, is_bound) = if x < cp.x1 {
                (&two * qmax(x.clone(), qi(1) - &x - &cp.d), false)
            } else if x > cp.x4 {
                (&two * qmax(qi(1) - &x, &x - &cp.d), false)
            } else {
                (
                    &two * qmax(&x - &cp.x1, &cp.x4 - &x) + &cp.d,
                    true,
                )
            };
            PointWaiting {
                index,
                position: p.position.clone(),
                idleness: p.idleness.clone(),
                analytic: Some(w),
                analytic_is_bound: is_bound,
                simulated: None,
                has_simulation: false,
            }
        })
        .collect();
    WaitingReport {
        rows,
        mode: ReportMode::SteadyState,
    }
}

/// Picks the best available schedule: the partition schedule when the
/// instance has endpoint-class structure only, otherwise whichever of the
/// two interior-geometry schedules achieves the smaller simulated
/// steady-state ratio (ties go to the distance-triggered one). Returns the
/// chosen pair with its per-point report (analytic values merged in where
/// the schedule has them).
pub fn best_schedule(inst: &Instance) -> Result<(SchedulePair, WaitingReport), ScheduleError> {
    let cls = classify(inst);
    if cls.s00.is_empty() {
        let pair = partition_schedule(inst)?;
        let report = waiting_times(&pair, inst, ReportMode::SteadyState);
        return Ok((pair, report));
    }
    let b1 = alg1_schedule(inst)?;
    let b2 = alg2_schedule(inst)?;
    let rep1 = waiting_times(&b1.pair, inst, ReportMode::SteadyState)
        .merge_analytic(&analytic_waiting_alg1(inst, &b1.cp));
    let rep2 = waiting_times(&b2.pair, inst, ReportMode::SteadyState)
        .merge_analytic(&analytic_waiting_alg2(inst, &b2.cp));
    let r1 = rep1.max_ratio().expect("zigzag pair covers the whole path");
    let r2 = rep2.max_ratio().expect("reactive pair covers the whole path");
    if r1 < r2 {
        Ok((b1.pair, rep1))
    } else {
        Ok((b2.pair, rep2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{check_necessary, PointRequirement};
    use crate::simulator::observation_checks;

    fn inst(points: &[(Q, Q)]) -> Instance {
        Instance::new(
            points
                .iter()
                .map(|(p, i)| PointRequirement::new(p.clone(), i.clone()))
                .collect(),
        )
        .unwrap()
    }

    fn instance_a1() -> Instance {
        inst(&[
            (qi(0), q(5, 3)),
            (q(1, 2), q(1, 3)),
            (qi(1), q(5, 3)),
        ])
    }

    #[test]
    fn partition_on_endpoint_only_instance() {
        // Both points' ranges touch an endpoint; X10 = [0, 1/4] from the
        // left point, X01 = [3/4, 1] from the right one.
        let i = inst(&[
            (qi(0), qi(2)),
            (q(1, 8), q(1, 4)),
            (q(7, 8), q(1, 4)),
            (qi(1), qi(2)),
        ]);
        let sp = partition_schedule(&i).unwrap();
        let report = waiting_times(&sp, &i, ReportMode::SteadyState);
        for row in &report.rows {
            assert!(row.simulated.as_ref().unwrap() <= &row.idleness);
        }
        assert!(observation_checks(&sp, &i).all_pass());
    }

    #[test]
    fn partition_overlapping_segments() {
        // X10 = [0, 5/8] and X01 = [1/20, 1] overlap, and the point at
        // 3/10 is served only by a sweep of all of X10: cutting r1's
        // segment at the X01 boundary would leave it with gap 7/5 > 13/20.
        let i = inst(&[
            (qi(0), q(11, 5)),
            (q(3, 10), q(13, 20)),
            (q(9, 10), q(17, 10)),
            (qi(1), qi(2)),
        ]);
        let sp = partition_schedule(&i).unwrap();
        let report = waiting_times(&sp, &i, ReportMode::SteadyState);
        for row in &report.rows {
            assert!(
                row.simulated.as_ref().unwrap() <= &row.idleness,
                "point {} over deadline",
                row.index
            );
        }
        assert_eq!(report.rows[1].simulated, Some(q(13, 20)));
    }

    #[test]
    fn partition_rejects_interior_point() {
        assert_eq!(
            partition_schedule(&instance_a1()),
            Err(ScheduleError::NotEndpointOnly)
        );
    }

    #[test]
    fn nested4_factor_four() {
        let i = instance_a1();
        let sp = nested4_schedule(&i).unwrap();
        let report = waiting_times(&sp, &i, ReportMode::SteadyState);
        let ratio = report.max_ratio().unwrap();
        assert!(ratio <= qi(4));
    }

    #[test]
    fn nested4_single_robot_branch() {
        let i = inst(&[(qi(0), qi(2)), (q(1, 2), qi(1)), (qi(1), qi(2))]);
        let sp = nested4_schedule(&i).unwrap();
        let report = waiting_times(&sp, &i, ReportMode::SteadyState);
        assert!(report.max_ratio().unwrap() <= qi(4));
    }

    #[test]
    fn alg1_on_a1() {
        let i = instance_a1();
        let b = alg1_schedule(&i).unwrap();
        // x3 = 1/2: both segments have length 1/2.
        let report = waiting_times(&b.pair, &i, ReportMode::SteadyState);
        assert_eq!(report.rows[1].simulated, Some(qi(1)));
        let analytic = analytic_waiting_alg1(&i, &b.cp);
        assert_eq!(analytic.rows[1].analytic, Some(qi(1)));
        assert_eq!(analytic.rows[0].analytic, Some(qi(1)));
    }

    #[test]
    fn alg2_on_a1_meets_analytic() {
        let i = instance_a1();
        let b = alg2_schedule(&i).unwrap();
        let sim = waiting_times(&b.pair, &i, ReportMode::SteadyState);
        let analytic = analytic_waiting_alg2(&i, &b.cp);
        for (srow, arow) in sim.rows.iter().zip(&analytic.rows) {
            let s = srow.simulated.as_ref().unwrap();
            let a = arow.analytic.as_ref().unwrap();
            if arow.analytic_is_bound {
                assert!(s <= a, "simulated exceeds bound at {}", srow.index);
            } else {
                assert_eq!(s, a, "exact analytic mismatch at {}", srow.index);
            }
        }
    }

    #[test]
    fn alg2_mirrored_instance() {
        // Mirror image of the asymmetric three-point example; cp.flipped
        // and the returned pair must be in original coordinates.
        let i = inst(&[(qi(0), q(5, 3)), (q(3, 5), q(1, 4)), (qi(1), q(5, 3))]);
        let b = alg2_schedule(&i).unwrap();
        assert!(b.cp.flipped);
        let sim = waiting_times(&b.pair, &i, ReportMode::SteadyState);
        let analytic = analytic_waiting_alg2(&i, &b.cp);
        for (srow, arow) in sim.rows.iter().zip(&analytic.rows) {
            let s = srow.simulated.as_ref().unwrap();
            let a = arow.analytic.as_ref().unwrap();
            if arow.analytic_is_bound {
                assert!(s <= a);
            } else {
                assert_eq!(s, a);
            }
        }
    }

    #[test]
    fn best_picks_smaller_ratio() {
        // On the expansion-1 instance alg1 gives ratio 3, alg2 at most 3/2.
        let i = instance_a1();
        let (sp, report) = best_schedule(&i).unwrap();
        assert_eq!(sp.kind, ScheduleKind::Alg2);
        assert!(report.max_ratio().unwrap() <= q(3, 2));
    }

    #[test]
    fn disjoint_interior_ranges_have_no_critical_points() {
        // Two interior points with disjoint ranges: the intersection is
        // empty, so the interior-geometry schedules cannot be built (and
        // check_necessary certifies infeasibility separately).
        let i = inst(&[
            (qi(0), qi(2)),
            (q(1, 3), q(1, 10)),
            (q(2, 3), q(1, 10)),
            (qi(1), qi(2)),
        ]);
        assert_eq!(check_necessary(&i).verdict, Verdict::InfeasibleCertified);
        match alg2_schedule(&i) {
            Err(ScheduleError::CriticalPoints(_)) => {}
            other => panic!("expected missing critical points, got {other:?}"),
        }
        // The uncoordinated factor-4 construction still runs.
        nested4_schedule(&i).unwrap();
    }
}
