//! Guarantee curves and ratio extraction.

use crate::rational::{qi, qmin, Q};
use crate::simulator::WaitingReport;
use num_traits::One;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatioError {
    #[error("point {0} is never visited; its ratio is unbounded")]
    Unbounded(usize),
}

/// Max of waiting / idleness over a report's rows. Errors when some point
/// is never visited.
pub fn ratio(report: &WaitingReport) -> Result<Q, RatioError> {
    match report.max_ratio() {
        Some(r) => Ok(r),
        None => Err(RatioError::Unbounded(
            *report.never_visited().first().expect("some row has no visit"),
        )),
    }
}

/// The two guarantee curves at a given expansion value, and their minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCurve {
    pub alpha: Q,
    /// `1 + 2 * alpha` (split schedule).
    pub bound_alg1: Q,
    /// `(2 + alpha) / (1 + alpha)` (distance-triggered schedule).
    pub bound_alg2: Q,
    pub combined: Q,
}

pub fn bounds(alpha: &Q) -> BoundCurve {
    let one = Q::one();
    let two = qi(2);
    let bound_alg1 = &one + &two * alpha;
    let bound_alg2 = (&two + alpha) / (&one + alpha);
    let combined = qmin(bound_alg1.clone(), bound_alg2.clone());
    BoundCurve {
        alpha: alpha.clone(),
        bound_alg1,
        bound_alg2,
        combined,
    }
}

/// The expansion value where the two guarantee curves cross (the maximizer
/// of the combined curve), found by bisection on their difference. The
/// crossing solves `2a^2 + 2a - 1 = 0`, so the exact value is
/// `(sqrt(3) - 1) / 2` and the combined bound there is `sqrt(3)`.
pub fn worst_alpha() -> f64 {
    // f(a) = (1 + 2a) - (2 + a)/(1 + a) is increasing on (0, 1) with a
    // single root; bisect to f64 precision.
    let f = |a: f64| (1.0 + 2.0 * a) - (2.0 + a) / (1.0 + a);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn bound_values() {
        let b = bounds(&qi(1));
        assert_eq!(b.bound_alg1, qi(3));
        assert_eq!(b.bound_alg2, q(3, 2));
        assert_eq!(b.combined, q(3, 2));

        let b = bounds(&q(1, 10));
        assert_eq!(b.bound_alg1, q(6, 5));
        assert_eq!(b.bound_alg2, q(21, 11));
        assert_eq!(b.combined, q(6, 5));
    }

    #[test]
    fn worst_alpha_matches_closed_form() {
        let a = worst_alpha();
        let exact = (3.0f64.sqrt() - 1.0) / 2.0;
        assert!((a - exact).abs() < 1e-12, "got {a}, want {exact}");
        // Combined bound at the crossing is sqrt(3).
        let combined = 1.0 + 2.0 * a;
        assert!((combined - 3.0f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn combined_peaks_at_crossing() {
        let peak = bounds(&q(366, 1000)).combined;
        for a in [q(1, 10), q(3, 10), q(4, 10), q(7, 10)] {
            assert!(bounds(&a).combined < q(174, 100));
        }
        assert!(peak < q(174, 100));
    }
}
