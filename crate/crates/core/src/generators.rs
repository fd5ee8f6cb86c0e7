//! Instance families: the tightness constructions with their coordinated
//! witness schedules, and a seeded random family of admissible instances.

use crate::model::{Instance, PointRequirement};
use crate::rational::{q, qi, qmax, Q};
use crate::trajectory::{ScheduleKind, SchedulePair, Trajectory, Waypoint};
use num_bigint::BigInt;
use num_traits::{One, Signed};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("epsilon must satisfy 0 < epsilon < x1 = {x1}")]
    BadEpsilon { x1: String },
}

fn pt(position: Q, idleness: Q) -> PointRequirement {
    PointRequirement::new(position, idleness)
}

/// Three-point family on which the split schedule's ratio is exactly
/// `1 + 2*alpha`: `x1 = alpha/(2*alpha + 1)`, a tight point at 1/2, and
/// symmetric endpoints.
pub fn gen_tight_alg1(alpha: &Q) -> Instance {
    assert!(alpha.is_positive());
    let one = Q::one();
    let x1 = alpha / (qi(2) * alpha + &one);
    let y1 = &x1 * (&one + &one / (qi(2) * alpha));
    let endpoint_i = qi(4) * &x1 + &x1 / alpha;
    Instance::new(vec![
        pt(qi(0), endpoint_i.clone()),
        pt(y1, &x1 / alpha),
        pt(qi(1), endpoint_i),
    ])
    .expect("construction is a valid instance")
}

/// The coordinated feasible schedule for `gen_tight_alg1`: each robot
/// owns one side of the tight point (which always sits at 1/2) and dwells
/// there for `2*x1`, phased so their dwells alternate. r1 starts at `x1`,
/// r2 at 1/2, both moving right.
pub fn witness_tight_alg1(alpha: &Q) -> SchedulePair {
    assert!(alpha.is_positive());
    let one = Q::one();
    let half = q(1, 2);
    let x1 = alpha / (qi(2) * alpha + &one);
    let s = &half - &x1; // x1 / (2*alpha), travel time x1 -> 1/2
    let period = &one + qi(2) * &x1;
    let r1 = Trajectory::new(
        vec![
            Waypoint::new(qi(0), x1.clone()),
            Waypoint::new(s.clone(), half.clone()),
            Waypoint::new(&s + qi(2) * &x1, half.clone()),
            Waypoint::new(&s + qi(2) * &x1 + &half, qi(0)),
            Waypoint::new(period.clone(), x1.clone()),
        ],
        0,
    )
    .expect("witness r1 waypoints are valid");
    let r2 = Trajectory::new(
        vec![
            Waypoint::new(qi(0), half.clone()),
            Waypoint::new(half.clone(), qi(1)),
            Waypoint::new(qi(1), half.clone()),
            Waypoint::new(period, half),
        ],
        0,
    )
    .expect("witness r2 waypoints are valid");
    SchedulePair::new(r1, r2, ScheduleKind::Witness)
}

/// Four-point families on which the distance-triggered schedule's ratio is
/// (or approaches) `(2 + alpha)/(1 + alpha)`. For `alpha < 1` the ratio is
/// attained exactly; for `alpha >= 1` a point at `x1 - epsilon` realizes
/// ratio `1 + x1 / ((1 + alpha) * (x1 + epsilon))`, approaching the bound
/// as `epsilon` shrinks.
pub fn gen_tight_alg2(alpha: &Q, epsilon: Option<&Q>) -> Result<Instance, GenError> {
    assert!(alpha.is_positive());
    let one = Q::one();
    if alpha < &one {
        let x1 = alpha / (alpha + qi(2));
        let endpoint_i = &x1 * (qi(2) + qi(3) / alpha);
        let y1 = &x1 + &x1 / (qi(2) * alpha);
        let y2 = qi(2) * &x1 / alpha;
        return Ok(Instance::new(vec![
            pt(qi(0), endpoint_i.clone()),
            pt(y1, &x1 / alpha),
            pt(y2.clone(), y2),
            pt(qi(1), endpoint_i),
        ])
        .expect("construction is a valid instance"));
    }
    let x1 = alpha / (qi(2) * alpha + &one);
    let eps = match epsilon {
        Some(e) if e.is_positive() && e < &x1 => e.clone(),
        _ => {
            return Err(GenError::BadEpsilon {
                x1: crate::rational::fmt_q(&x1),
            })
        }
    };
    let endpoint_i = qi(2) * (&one - &x1);
    let y1 = &x1 - &eps;
    let y2 = &x1 + &x1 / (qi(2) * alpha);
    Ok(Instance::new(vec![
        pt(qi(0), endpoint_i.clone()),
        pt(y1, qi(2) * (&x1 + &eps)),
        pt(y2, &x1 / alpha),
        pt(qi(1), endpoint_i),
    ])
    .expect("construction is a valid instance"))
}

/// The coordinated schedule accompanying `gen_tight_alg2`, with the
/// distance-based release conditions resolved to explicit waypoint times.
///
/// For `alpha < 1` both robots meet their dwell point (y1) back to back and
/// every waiting time equals its deadline exactly. For `alpha >= 1` the
/// construction is exactly feasible only at `alpha = 1`; above that the
/// round trips are too long for the endpoint deadlines (the excursion
/// period `2 - x1/alpha` exceeds `2*(1 - x1)`), so the schedule is
/// returned as stated but is not a feasibility certificate.
pub fn witness_tight_alg2(alpha: &Q, epsilon: Option<&Q>) -> Result<SchedulePair, GenError> {
    assert!(alpha.is_positive());
    let one = Q::one();
    if alpha < &one {
        let x1 = alpha / (alpha + qi(2));
        let s = &x1 / (qi(2) * alpha);
        let y1 = &x1 + &s;
        let period = qi(2) * &x1 + qi(6) * &s;
        let r1 = Trajectory::new(
            vec![
                Waypoint::new(qi(0), x1.clone()),
                Waypoint::new(s.clone(), y1.clone()),
                Waypoint::new(qi(4) * &s, y1.clone()),
                Waypoint::new(qi(4) * &s + &y1, qi(0)),
                Waypoint::new(period.clone(), y1.clone()),
                Waypoint::new(&period + qi(4) * &s, y1.clone()),
            ],
            2,
        )
        .expect("witness r1 waypoints are valid");
        let r2 = Trajectory::new(
            vec![
                Waypoint::new(qi(0), y1.clone()),
                Waypoint::new(qi(3) * &s, qi(1)),
                Waypoint::new(qi(6) * &s, y1.clone()),
                Waypoint::new(period, y1),
            ],
            0,
        )
        .expect("witness r2 waypoints are valid");
        return Ok(SchedulePair::new(r1, r2, ScheduleKind::Witness));
    }
    // Validate epsilon exactly as the instance constructor does.
    let inst = gen_tight_alg2(alpha, epsilon)?;
    let _ = inst;
    let x1 = alpha / (qi(2) * alpha + &one);
    let s = &x1 / (qi(2) * alpha);
    let half = q(1, 2); // y2 = x1 + x1/(2*alpha) = 1/2 identically
    let period = qi(2) - qi(4) * &s;
    let t_a = qi(2) * &x1 - &s; // r1's first release from 1/2
    let t_c = &one + qi(2) * &x1 - qi(3) * &s; // r2's first release
    let r1 = Trajectory::new(
        vec![
            Waypoint::new(qi(0), x1.clone()),
            Waypoint::new(s.clone(), half.clone()),
            Waypoint::new(t_a.clone(), half.clone()),
            Waypoint::new(&t_a + &half, qi(0)),
            Waypoint::new(&t_a + &one, half.clone()),
            Waypoint::new(&t_a + &period, half.clone()),
        ],
        2,
    )
    .expect("witness r1 waypoints are valid");
    let r2 = Trajectory::new(
        vec![
            Waypoint::new(qi(0), &one - &x1),
            Waypoint::new(x1.clone(), qi(1)),
            Waypoint::new(qi(2) * &x1 + &s, half.clone()),
            Waypoint::new(t_c.clone(), half),
            Waypoint::new(&t_c + q(1, 2), qi(1)),
        ],
        1,
    )
    .expect("witness r2 waypoints are valid");
    Ok(SchedulePair::new(r1, r2, ScheduleKind::Witness))
}

/// Parameters for the random admissible family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomParams {
    pub seed: u64,
    pub n: usize,
}

/// Documented 64-bit linear congruential generator so generated instances
/// are portable across implementations:
/// `state <- state * 6364136223846793005 + 1442695040888963407` (wrapping),
/// seeded directly with the user seed; each draw returns the new state.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.state
    }

    /// Uniform-ish draw in `[lo, hi]` (inclusive); modulo bias is
    /// irrelevant for instance generation.
    pub fn next_in(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        lo + self.next_u64() % (hi - lo + 1)
    }
}

// Coarse grid for the interval endpoints, finer grid for point placement.
const GRID: u64 = 120;
const FINE: u64 = 480;

fn grid_q(num: u64, den: u64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Deterministic random instance that passes every necessary feasibility
/// condition with verdict "unknown" and whose interior-range intersection
/// is exactly the sampled `[x1, x4]` (pinned by a midpoint whose range is
/// the full interval).
///
/// Layout: mandatory points at 0, 1, and the midpoint of `[x1, x4]`;
/// remaining points fall inside `(x1, x4)` with idleness exactly at the
/// interior lower bound, or outside with idleness covering the endpoint
/// reach, the interval containment, and the lower bound, plus a positive
/// bump.
pub fn gen_admissible_random(params: &RandomParams) -> Instance {
    assert!(params.n >= 3);
    let mut rng = Lcg::new(params.seed);

    // x1 = i/GRID, x4 = j/GRID with 0 < i < j <= GRID - i.
    let (x1, x4) = loop {
        let i = rng.next_in(1, GRID / 2 - 1);
        let j = rng.next_in(i + 1, GRID - i);
        if j > i {
            break (grid_q(i, GRID), grid_q(j, GRID));
        }
    };
    let two = qi(2);
    let mid = (&x1 + &x4) / &two;

    // Fine-grid candidate pools per region. Each region holds at least 3
    // candidates for any sampled x1 < x4 with x1 <= 1 - x4, so up to 9
    // extra points always fit.
    let candidates = |lo: &Q, hi: &Q| -> Vec<Q> {
        let scale = qi(FINE as i64);
        let lo_n = u64::try_from(&(lo * &scale).floor().to_integer()).unwrap();
        let hi_n = u64::try_from(&(hi * &scale).ceil().to_integer()).unwrap();
        (lo_n + 1..hi_n)
            .map(|k| grid_q(k, FINE))
            .filter(|c| c > lo && c < hi && c != &mid)
            .collect()
    };
    // Interior candidates are constrained so their exact-lower-bound
    // ranges stay clear of 0 and 1 (position above x4/2 and below
    // (1 + x1)/2).
    let inner_lo = qmax(&x4 / &two, x1.clone());
    let inner_hi = crate::rational::qmin(x4.clone(), (Q::one() + &x1) / &two);
    let mut pools = [
        candidates(&inner_lo, &inner_hi),
        candidates(&qi(0), &x1),
        candidates(&x4, &qi(1)),
    ];

    let mut positions: Vec<Q> = vec![qi(0), qi(1), mid.clone()];
    let mut inner: Vec<Q> = vec![mid.clone()];
    for _ in 3..params.n {
        let region = loop {
            let r = rng.next_in(0, 2) as usize;
            if !pools[r].is_empty() {
                break r;
            }
            if pools.iter().all(|p| p.is_empty()) {
                panic!("candidate pools exhausted");
            }
        };
        let k = rng.next_in(0, pools[region].len() as u64 - 1) as usize;
        let cand = pools[region].remove(k);
        if cand > x1 && cand < x4 {
            inner.push(cand.clone());
        }
        positions.push(cand);
    }

    let x2 = inner.iter().min().expect("midpoint present").clone();
    let x3 = inner.iter().max().expect("midpoint present").clone();

    let mut points = Vec::new();
    let bump = |rng: &mut Lcg| grid_q(rng.next_in(1, 8), FINE);
    for pos in &positions {
        let lb = crate::model::lower_bound_at(pos, &x1, &x4);
        let idleness = if pos > &x1 && pos < &x4 {
            // Interior: the lower bound itself; placement constraints keep
            // the range clear of both endpoints.
            &two * qmax(pos - &x1, &x4 - pos)
        } else if pos <= &x1 {
            // Range must reach 0 (covers 2*pos) and the rightmost interior
            // point (covers 2*(x3 - pos)). The extra twice-the-width floor
            // is what the published ratio analysis actually consumes for
            // points outside the shared interval (its denominators keep
            // the width term unhalved), and it is strictly stronger than
            // the stated idle-time bound.
            let width_floor = &two * (&x4 - &x1);
            qmax(
                qmax(qmax(&two * pos, &two * (&x3 - pos)), width_floor),
                lb,
            ) + bump(&mut rng)
        } else {
            let width_floor = &two * (&x4 - &x1);
            qmax(
                qmax(
                    qmax(&two * (Q::one() - pos), &two * (pos - &x2)),
                    width_floor,
                ),
                lb,
            ) + bump(&mut rng)
        };
        points.push(pt(pos.clone(), idleness));
    }
    Instance::new(points).expect("construction is a valid instance")
}
