//! Instance model and structural quantities.
//!
//! An instance is an ordered set of points on the unit segment, each with a
//! required maximum time between visits (its idleness). This module computes
//! ranges, the endpoint classification, critical points, the per-point idle
//! time lower bounds, and the necessary / sufficient feasibility conditions.

use crate::rational::{qmax, qmin, Q};
use num_traits::{One, Signed, Zero};

/// A point on the segment together with its idleness requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointRequirement {
    /// Path coordinate in `[0, 1]`.
    pub position: Q,
    /// Maximum allowed time between consecutive visits; strictly positive.
    pub idleness: Q,
}

impl PointRequirement {
    pub fn new(position: Q, idleness: Q) -> Self {
        Self { position, idleness }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("instance needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("point {index} has position outside [0,1]")]
    PositionOutOfRange { index: usize },
    #[error("point {index} has non-positive idleness")]
    NonPositiveIdleness { index: usize },
    #[error("duplicate position at point {index}")]
    DuplicatePosition { index: usize },
    #[error("first position must be 0")]
    MissingLeftEndpoint,
    #[error("last position must be 1")]
    MissingRightEndpoint,
}

/// An ordered instance: positions strictly increasing, first at 0, last at 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    points: Vec<PointRequirement>,
}

impl Instance {
    /// Builds a validated instance. Points may be given in any order; they
    /// are sorted by position here.
    pub fn new(mut points: Vec<PointRequirement>) -> Result<Self, ModelError> {
        if points.len() < 2 {
            return Err(ModelError::TooFewPoints(points.len()));
        }
        points.sort_by(|a, b| a.position.cmp(&b.position));
        for (i, p) in points.iter().enumerate() {
            if p.position.is_negative() || p.position > Q::one() {
                return Err(ModelError::PositionOutOfRange { index: i });
            }
            if !p.idleness.is_positive() {
                return Err(ModelError::NonPositiveIdleness { index: i });
            }
            if i > 0 && points[i - 1].position == p.position {
                return Err(ModelError::DuplicatePosition { index: i });
            }
        }
        if !points[0].position.is_zero() {
            return Err(ModelError::MissingLeftEndpoint);
        }
        if !points[points.len() - 1].position.is_one() {
            return Err(ModelError::MissingRightEndpoint);
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[PointRequirement] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The instance reflected through the midpoint: `y -> 1 - y`, order
    /// reversed, idleness values carried along.
    pub fn mirror(&self) -> Instance {
        let mut points: Vec<PointRequirement> = self
            .points
            .iter()
            .map(|p| PointRequirement::new(Q::one() - &p.position, p.idleness.clone()))
            .collect();
        points.reverse();
        Instance { points }
    }

    /// Scales every idleness by `c` (used by property tests).
    pub fn scale_idleness(&self, c: &Q) -> Instance {
        Instance {
            points: self
                .points
                .iter()
                .map(|p| PointRequirement::new(p.position.clone(), &p.idleness * c))
                .collect(),
        }
    }
}

/// A closed subinterval of `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn unit() -> Self {
        Self::new(Q::zero(), Q::one())
    }

    /// Closed-interval membership: endpoints count.
    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Intersection, or `None` when the intervals are disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = qmax(self.lo.clone(), other.lo.clone());
        let hi = qmin(self.hi.clone(), other.hi.clone());
        (lo <= hi).then(|| Interval::new(lo, hi))
    }

    pub fn length(&self) -> Q {
        &self.hi - &self.lo
    }
}

/// The interval within which a robot can move without violating the point's
/// requirement: radius `idleness / 2` around the point, clipped to `[0, 1]`.
pub fn range(p: &PointRequirement) -> Interval {
    let half = &p.idleness / crate::rational::qi(2);
    Interval::new(
        qmax(Q::zero(), &p.position - &half),
        qmin(Q::one(), &p.position + &half),
    )
}

/// Partition of point indices by whether 0 and/or 1 lie in each point's range.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Classification {
    /// Neither endpoint in range.
    pub s00: Vec<usize>,
    /// Only 1 in range.
    pub s01: Vec<usize>,
    /// Only 0 in range.
    pub s10: Vec<usize>,
    /// Both endpoints in range.
    pub s11: Vec<usize>,
}

pub fn classify(inst: &Instance) -> Classification {
    let zero = Q::zero();
    let one = Q::one();
    let mut c = Classification::default();
    for (i, p) in inst.points().iter().enumerate() {
        let r = range(p);
        match (r.contains(&zero), r.contains(&one)) {
            (false, false) => c.s00.push(i),
            (false, true) => c.s01.push(i),
            (true, false) => c.s10.push(i),
            (true, true) => c.s11.push(i),
        }
    }
    c
}

/// Structural digest of an instance with a non-empty `S00` class.
///
/// `[x1, x4]` is the intersection of the `S00` ranges, `x2`/`x3` are the
/// leftmost/rightmost `S00` positions, `alpha` the expansion
/// (`x1 = alpha * (x4 - x1)`), and `d` the coordination distance
/// `min(x1, x4 - x1) / (1 + alpha)`. When the raw instance had
/// `x1 > 1 - x4` it was mirrored first and `flipped` is set; the values
/// here describe the mirrored instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalPoints {
    pub x1: Q,
    pub x2: Q,
    pub x3: Q,
    pub x4: Q,
    pub alpha: Q,
    pub d: Q,
    pub flipped: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CriticalPointsError {
    #[error("S00 is empty; use the partition characterization instead")]
    EmptyS00,
    #[error("S00 ranges have empty intersection (point {index} at {position} excluded)")]
    EmptyIntersection { index: usize, position: String },
    #[error("S00 ranges intersect in the single point {at}; expansion is undefined")]
    DegenerateIntersection { at: String },
}

/// Raw (unmirrored) intersection of the `S00` ranges together with the
/// extreme `S00` positions. Shared by `critical_points` and
/// `check_necessary`, which must not normalize.
pub(crate) fn s00_geometry(
    inst: &Instance,
    class: &Classification,
) -> Result<(Q, Q, Q, Q), CriticalPointsError> {
    if class.s00.is_empty() {
        return Err(CriticalPointsError::EmptyS00);
    }
    let mut acc = Interval::unit();
    for &i in &class.s00 {
        let r = range(&inst.points()[i]);
        acc = match acc.intersect(&r) {
            Some(iv) => iv,
            None => {
                return Err(CriticalPointsError::EmptyIntersection {
                    index: i,
                    position: crate::rational::fmt_q(&inst.points()[i].position),
                })
            }
        };
    }
    let x2 = inst.points()[class.s00[0]].position.clone();
    let x3 = inst.points()[*class.s00.last().unwrap()].position.clone();
    Ok((acc.lo, x2, x3, acc.hi))
}

/// Computes the critical points, mirroring the instance first when needed so
/// that `x1 <= 1 - x4`. Returns the digest together with the (possibly
/// mirrored) instance that all downstream schedule constructions consume.
pub fn critical_points(inst: &Instance) -> Result<(CriticalPoints, Instance), CriticalPointsError> {
    let class = classify(inst);
    let (x1, _, _, x4) = s00_geometry(inst, &class)?;
    if x1 == x4 {
        return Err(CriticalPointsError::DegenerateIntersection {
            at: crate::rational::fmt_q(&x1),
        });
    }
    let flipped = x1 > Q::one() - &x4;
    let work = if flipped { inst.mirror() } else { inst.clone() };
    let wclass = classify(&work);
    let (x1, x2, x3, x4) = s00_geometry(&work, &wclass).expect("mirror preserves S00 geometry");
    let width = &x4 - &x1;
    let alpha = &x1 / &width;
    let d = qmin(x1.clone(), width) / (Q::one() + &alpha);
    Ok((
        CriticalPoints {
            x1,
            x2,
            x3,
            x4,
            alpha,
            d,
            flipped,
        },
        work,
    ))
}

/// The idle-time lower bound any feasible schedule imposes at coordinate `x`.
///
/// Piecewise in `x` relative to `[x1, x4]`; the boundary coordinates `x1`
/// and `x4` use the middle branch.
pub fn lower_bound(x: &Q, cp: &CriticalPoints) -> Q {
    lower_bound_at(x, &cp.x1, &cp.x4)
}

pub(crate) fn lower_bound_at(x: &Q, x1: &Q, x4: &Q) -> Q {
    let two = crate::rational::qi(2);
    let width = x4 - x1;
    if x < x1 {
        qmax(
            qmax(&two * x, &two * (Q::one() - x - x4 + x1)),
            width,
        )
    } else if x <= x4 {
        &two * qmax(x4 - x, x - x1)
    } else {
        qmax(
            qmax(&two * (Q::one() - x), &two * (x - x4 + x1)),
            width,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionStatus {
    Pass,
    Fail,
    NotApplicable,
}

/// One evaluated necessary (or characterizing) condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionEntry {
    pub name: &'static str,
    pub status: ConditionStatus,
    /// Violating point (index, coordinate) when the condition failed.
    pub certificate: Option<(usize, Q)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Some necessary condition failed; the instance has no feasible schedule.
    InfeasibleCertified,
    /// All necessary conditions pass but `S00` is non-empty, where no
    /// feasibility characterization is known.
    Unknown,
    /// `S00` is empty and the partition characterization holds.
    FeasibleWithSchedule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub entries: Vec<ConditionEntry>,
    pub verdict: Verdict,
}

impl AdmissibilityReport {
    pub fn first_failure(&self) -> Option<&ConditionEntry> {
        self.entries
            .iter()
            .find(|e| e.status == ConditionStatus::Fail)
    }
}

fn pass(name: &'static str) -> ConditionEntry {
    ConditionEntry {
        name,
        status: ConditionStatus::Pass,
        certificate: None,
    }
}

fn fail(name: &'static str, index: usize, coord: Q) -> ConditionEntry {
    ConditionEntry {
        name,
        status: ConditionStatus::Fail,
        certificate: Some((index, coord)),
    }
}

fn not_applicable(name: &'static str) -> ConditionEntry {
    ConditionEntry {
        name,
        status: ConditionStatus::NotApplicable,
        certificate: None,
    }
}

/// Evaluates every necessary feasibility condition exactly.
///
/// With `S00` empty this delegates to the partition characterization (an
/// if-and-only-if); otherwise any failure certifies infeasibility and all
/// passes leave the verdict unknown.
pub fn check_necessary(inst: &Instance) -> AdmissibilityReport {
    let class = classify(inst);
    if class.s00.is_empty() {
        let (report, _, _) = theorem1_check(inst).expect("S00 is empty");
        return report;
    }

    let mut entries = Vec::new();

    // Containment: every S00 position must lie in every point's range.
    let mut containment = pass("Lemma5-containment");
    'outer: for &i in &class.s00 {
        let pos = &inst.points()[i].position;
        for p in inst.points() {
            if !range(p).contains(pos) {
                containment = fail("Lemma5-containment", i, pos.clone());
                break 'outer;
            }
        }
    }
    let containment_failed = containment.status == ConditionStatus::Fail;
    entries.push(containment);

    match s00_geometry(inst, &class) {
        Ok((x1, x2, x3, x4)) => {
            // x4 - x3 <= x3 - x1
            let right = if &x4 - &x3 <= &x3 - &x1 {
                pass("Lemma4-4-right")
            } else {
                fail("Lemma4-4-right", *class.s00.last().unwrap(), x3.clone())
            };
            entries.push(right);
            // x2 - x1 <= x4 - x1
            let left = if &x2 - &x1 <= &x4 - &x1 {
                pass("Lemma4-4-left")
            } else {
                fail("Lemma4-4-left", class.s00[0], x2.clone())
            };
            entries.push(left);

            // 0 in R(x) for points left of x1, 1 in R(x) for points right of x4.
            let mut endpoint_reach = pass("Lemma4-3-endpoint-reach");
            for (i, p) in inst.points().iter().enumerate() {
                let r = range(p);
                let bad = (p.position < x1 && !r.contains(&Q::zero()))
                    || (p.position > x4 && !r.contains(&Q::one()));
                if bad {
                    endpoint_reach = fail("Lemma4-3-endpoint-reach", i, p.position.clone());
                    break;
                }
            }
            entries.push(endpoint_reach);

            // Idle-time lower bound at every point.
            let mut idle = pass("Lemma6-lowerbound");
            for (i, p) in inst.points().iter().enumerate() {
                if p.idleness < lower_bound_at(&p.position, &x1, &x4) {
                    idle = fail("Lemma6-lowerbound", i, p.position.clone());
                    break;
                }
            }
            entries.push(idle);
        }
        Err(_) => {
            // Empty S00 intersection can only happen when containment already
            // failed; the dependent conditions cannot be evaluated.
            debug_assert!(containment_failed);
            entries.push(not_applicable("Lemma4-4-right"));
            entries.push(not_applicable("Lemma4-4-left"));
            entries.push(not_applicable("Lemma4-3-endpoint-reach"));
            entries.push(not_applicable("Lemma6-lowerbound"));
        }
    }

    let verdict = if entries.iter().any(|e| e.status == ConditionStatus::Fail) {
        Verdict::InfeasibleCertified
    } else {
        Verdict::Unknown
    };
    AdmissibilityReport { entries, verdict }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("S00 is non-empty; the partition characterization does not apply")]
pub struct NotApplicable;

/// The complete feasibility characterization for instances with empty `S00`.
///
/// Returns the report plus the two intersections `X10` (over `S10` ranges)
/// and `X01` (over `S01` ranges); an empty family intersects to `[0, 1]`.
pub fn theorem1_check(
    inst: &Instance,
) -> Result<(AdmissibilityReport, Interval, Interval), NotApplicable> {
    let class = classify(inst);
    if !class.s00.is_empty() {
        return Err(NotApplicable);
    }

    // Empty intersections are representable (Interval requires lo <= hi),
    // so emptiness is tracked separately.
    let mut x10 = Interval::unit();
    let mut x10_empty = false;
    for &i in &class.s10 {
        let r = range(&inst.points()[i]);
        match x10.intersect(&r) {
            Some(iv) => x10 = iv,
            None => {
                x10_empty = true;
                break;
            }
        }
    }
    let mut x01 = Interval::unit();
    let mut x01_empty = false;
    for &i in &class.s01 {
        let r = range(&inst.points()[i]);
        match x01.intersect(&r) {
            Some(iv) => x01 = iv,
            None => {
                x01_empty = true;
                break;
            }
        }
    }
    let mut entries = Vec::new();

    let mut cond1 = pass("Thm1-cond1");
    for &i in &class.s10 {
        let pos = &inst.points()[i].position;
        if x10_empty || !x10.contains(pos) {
            cond1 = fail("Thm1-cond1", i, pos.clone());
            break;
        }
    }
    if cond1.status == ConditionStatus::Pass && (x10_empty || !x10.contains(&Q::zero())) {
        cond1 = fail("Thm1-cond1", 0, Q::zero());
    }
    entries.push(cond1);

    let mut cond2 = pass("Thm1-cond2");
    for &i in &class.s01 {
        let pos = &inst.points()[i].position;
        if x01_empty || !x01.contains(pos) {
            cond2 = fail("Thm1-cond2", i, pos.clone());
            break;
        }
    }
    if cond2.status == ConditionStatus::Pass && (x01_empty || !x01.contains(&Q::one())) {
        cond2 = fail("Thm1-cond2", inst.len() - 1, Q::one());
    }
    entries.push(cond2);

    let mut cond3 = pass("Thm1-cond3");
    for (i, p) in inst.points().iter().enumerate() {
        let in10 = !x10_empty && x10.contains(&p.position);
        let in01 = !x01_empty && x01.contains(&p.position);
        if !in10 && !in01 {
            cond3 = fail("Thm1-cond3", i, p.position.clone());
            break;
        }
    }
    entries.push(cond3);

    let verdict = if entries.iter().any(|e| e.status == ConditionStatus::Fail) {
        Verdict::InfeasibleCertified
    } else {
        Verdict::FeasibleWithSchedule
    };
    Ok((AdmissibilityReport { entries, verdict }, x10, x01))
}
