//! Randomized structural properties that complement the per-module unit
//! tests: monotonicity of the admissibility checks under idleness scaling,
//! an independent re-derivation of the endpoint-class feasibility verdict,
//! and mirror invariance of simulated ratios.

use patrol_core::generators::{gen_admissible_random, RandomParams};
use patrol_core::model::{
    check_necessary, classify, range, theorem1_check, Instance, PointRequirement, Verdict,
};
use patrol_core::rational::{q, qi, Q};
use patrol_core::schedules::{alg1_schedule, alg2_schedule, best_schedule, nested4_schedule};
use patrol_core::simulator::{waiting_times, ReportMode};

fn scale_idleness(inst: &Instance, c: &Q) -> Instance {
    Instance::new(
        inst.points()
            .iter()
            .map(|p| PointRequirement::new(p.position.clone(), c * &p.idleness))
            .collect(),
    )
    .unwrap()
}

/// Scaling every idle time by c >= 1 only relaxes the requirements, so an
/// instance that passes every necessary condition keeps passing.
#[test]
fn idleness_scaling_preserves_admissibility() {
    for seed in 1..=60u64 {
        let inst = gen_admissible_random(&RandomParams {
            seed,
            n: 4 + (seed as usize % 9),
        });
        assert_ne!(
            check_necessary(&inst).verdict,
            Verdict::InfeasibleCertified,
            "seed {seed}: generator must produce admissible instances"
        );
        for c in [qi(1), q(3, 2), qi(2), qi(5), qi(40)] {
            let scaled = scale_idleness(&inst, &c);
            assert_ne!(
                check_necessary(&scaled).verdict,
                Verdict::InfeasibleCertified,
                "seed {seed}, scale {c}: scaling idleness up broke admissibility"
            );
        }
    }
}

/// Minimal xorshift so this file does not depend on the generator module's
/// internal stream shape.
struct Rng(u64);

impl Rng {
    fn next_in(&mut self, lo: u64, hi: u64) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        lo + self.0 % (hi - lo + 1)
    }
}

/// Random instance with an empty interior class: every point's idle time
/// covers the trip to its nearer endpoint, with a random surplus that may
/// or may not satisfy the partition characterization.
fn random_endpoint_class_instance(seed: u64) -> Instance {
    let mut rng = Rng(seed.wrapping_mul(0x9e3779b97f4a7c15).max(1));
    let n = rng.next_in(4, 9) as usize;
    let mut cols: Vec<u64> = Vec::new();
    while cols.len() < n - 2 {
        let c = rng.next_in(1, 79);
        if !cols.contains(&c) {
            cols.push(c);
        }
    }
    cols.sort_unstable();
    let mut points = Vec::new();
    points.push(PointRequirement::new(qi(0), q(rng.next_in(8, 40) as i64, 10)));
    for c in cols {
        let pos = q(c as i64, 80);
        let near = c.min(80 - c) as i64;
        // 2 * min(pos, 1 - pos) makes S00 membership impossible; the
        // surplus decides how far past the nearer endpoint the range goes.
        let idle = q(2 * near, 80) + q(rng.next_in(0, 40) as i64, 80);
        points.push(PointRequirement::new(pos, idle));
    }
    points.push(PointRequirement::new(qi(1), q(rng.next_in(8, 40) as i64, 10)));
    Instance::new(points).unwrap()
}

/// Re-derives the Theorem-1 verdict without interval intersection: a point
/// lies in X10 exactly when every S10 range contains it, and likewise for
/// X01; the three conditions quantify over raw range memberships.
fn brute_force_endpoint_verdict(inst: &Instance) -> Verdict {
    let class = classify(inst);
    assert!(class.s00.is_empty());
    let in_all = |indices: &[usize], pos: &Q| -> bool {
        indices
            .iter()
            .all(|&i| range(&inst.points()[i]).contains(pos))
    };
    let cond1 = class
        .s10
        .iter()
        .all(|&i| in_all(&class.s10, &inst.points()[i].position))
        && in_all(&class.s10, &qi(0));
    let cond2 = class
        .s01
        .iter()
        .all(|&i| in_all(&class.s01, &inst.points()[i].position))
        && in_all(&class.s01, &qi(1));
    let cond3 = inst
        .points()
        .iter()
        .all(|p| in_all(&class.s10, &p.position) || in_all(&class.s01, &p.position));
    if cond1 && cond2 && cond3 {
        Verdict::FeasibleWithSchedule
    } else {
        Verdict::InfeasibleCertified
    }
}

#[test]
fn endpoint_class_verdict_matches_brute_force() {
    let mut feasible = 0u32;
    let mut infeasible = 0u32;
    for seed in 1..=150u64 {
        let inst = random_endpoint_class_instance(seed);
        let (report, _, _) = theorem1_check(&inst).expect("construction keeps S00 empty");
        let expected = brute_force_endpoint_verdict(&inst);
        assert_eq!(report.verdict, expected, "seed {seed}");
        match expected {
            Verdict::FeasibleWithSchedule => feasible += 1,
            Verdict::InfeasibleCertified => infeasible += 1,
            Verdict::Unknown => unreachable!(),
        }
    }
    // The sample must exercise both outcomes to mean anything.
    assert!(feasible >= 10, "only {feasible} feasible samples");
    assert!(infeasible >= 10, "only {infeasible} infeasible samples");
}

/// Simulated max ratio is invariant under mirroring the instance.
#[test]
fn ratios_invariant_under_mirroring() {
    for seed in 1..=30u64 {
        let inst = gen_admissible_random(&RandomParams {
            seed,
            n: 4 + (seed as usize % 9),
        });
        let mirrored = inst.mirror();
        let ratio_of = |pair: &patrol_core::trajectory::SchedulePair, i: &Instance| {
            waiting_times(pair, i, ReportMode::SteadyState).max_ratio()
        };
        for (name, a, b) in [
            (
                "alg1",
                alg1_schedule(&inst).unwrap().pair,
                alg1_schedule(&mirrored).unwrap().pair,
            ),
            (
                "alg2",
                alg2_schedule(&inst).unwrap().pair,
                alg2_schedule(&mirrored).unwrap().pair,
            ),
            (
                "nested4",
                nested4_schedule(&inst).unwrap(),
                nested4_schedule(&mirrored).unwrap(),
            ),
        ] {
            assert_eq!(
                ratio_of(&a, &inst),
                ratio_of(&b, &mirrored),
                "seed {seed}, {name}"
            );
        }
        let (a, _) = best_schedule(&inst).unwrap();
        let (b, _) = best_schedule(&mirrored).unwrap();
        assert_eq!(
            ratio_of(&a, &inst),
            ratio_of(&b, &mirrored),
            "seed {seed}, best"
        );
    }
}
