//! Instance file format and deterministic report rendering.
//!
//! The wire truth is exact rationals printed as `p/q` (bare integers when
//! the denominator is 1); decimal columns are an auxiliary rendering for
//! humans.

use patrol_core::model::{
    classify, critical_points, range, AdmissibilityReport, ConditionStatus, Instance,
    ModelError, PointRequirement, Verdict,
};
use patrol_core::rational::{fmt_q, fmt_q_dec, parse_q, Q};
use patrol_core::simulator::WaitingReport;
use patrol_core::trajectory::{SchedulePair, Trajectory};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid instance: {0}")]
    Validation(#[from] ModelError),
}

/// Parses the instance file format: one "<position> <idleness>" pair per
/// line, `#` starts a comment, numbers are decimals or `p/q` fractions,
/// lines may appear in any order.
pub fn parse_instance(text: &str) -> Result<Instance, InputError> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let data = match raw.split_once('#') {
            Some((before, _)) => before,
            None => raw,
        };
        let mut fields = data.split_whitespace();
        let (pos, idle) = match (fields.next(), fields.next()) {
            (None, _) => continue,
            (Some(p), Some(i)) => (p, i),
            (Some(_), None) => {
                return Err(InputError::Parse {
                    line,
                    msg: "expected \"<position> <idleness>\"".into(),
                })
            }
        };
        if let Some(extra) = fields.next() {
            return Err(InputError::Parse {
                line,
                msg: format!("unexpected trailing field `{extra}`"),
            });
        }
        let position = parse_q(pos).map_err(|e| InputError::Parse {
            line,
            msg: e.to_string(),
        })?;
        let idleness = parse_q(idle).map_err(|e| InputError::Parse {
            line,
            msg: e.to_string(),
        })?;
        points.push(PointRequirement::new(position, idleness));
    }
    Ok(Instance::new(points)?)
}

/// Inverse of `parse_instance` up to ordering and formatting: one
/// "<position> <idleness>" line per point in position order.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    for p in inst.points() {
        let _ = writeln!(out, "{} {}", fmt_q(&p.position), fmt_q(&p.idleness));
    }
    out
}

fn class_of(cls: &patrol_core::model::Classification, i: usize) -> &'static str {
    if cls.s00.contains(&i) {
        "S00"
    } else if cls.s01.contains(&i) {
        "S01"
    } else if cls.s10.contains(&i) {
        "S10"
    } else {
        "S11"
    }
}

/// The `classify` subcommand body: per-point ranges and classes plus the
/// critical-point digest when one exists.
pub fn render_classify(inst: &Instance) -> String {
    let cls = classify(inst);
    let mut out = String::new();
    let _ = writeln!(out, "points {}", inst.len());
    for (i, p) in inst.points().iter().enumerate() {
        let r = range(p);
        let _ = writeln!(
            out,
            "point {} pos {} idleness {} range [{}, {}] class {}",
            i,
            fmt_q(&p.position),
            fmt_q(&p.idleness),
            fmt_q(&r.lo),
            fmt_q(&r.hi),
            class_of(&cls, i),
        );
    }
    match critical_points(inst) {
        Ok((cp, _)) => {
            let _ = writeln!(
                out,
                "critical x1 {} x2 {} x3 {} x4 {} alpha {} d {} flipped {}",
                fmt_q(&cp.x1),
                fmt_q(&cp.x2),
                fmt_q(&cp.x3),
                fmt_q(&cp.x4),
                fmt_q(&cp.alpha),
                fmt_q(&cp.d),
                cp.flipped,
            );
        }
        Err(e) => {
            let _ = writeln!(out, "critical unavailable: {e}");
        }
    }
    out
}

pub fn render_admissibility(report: &AdmissibilityReport) -> String {
    let mut out = String::new();
    for e in &report.entries {
        let status = match e.status {
            ConditionStatus::Pass => "pass",
            ConditionStatus::Fail => "FAIL",
            ConditionStatus::NotApplicable => "n/a",
        };
        match &e.certificate {
            Some((idx, coord)) => {
                let _ = writeln!(
                    out,
                    "condition {} {} point {} at {}",
                    e.name,
                    status,
                    idx,
                    fmt_q(coord)
                );
            }
            None => {
                let _ = writeln!(out, "condition {} {}", e.name, status);
            }
        }
    }
    let verdict = match report.verdict {
        Verdict::InfeasibleCertified => "infeasible-certified",
        Verdict::Unknown => "unknown",
        Verdict::FeasibleWithSchedule => "feasible-with-schedule",
    };
    let _ = writeln!(out, "verdict {verdict}");
    out
}

fn render_trajectory(name: &str, tr: &Trajectory, out: &mut String) {
    let _ = writeln!(
        out,
        "{} period {} cycle_start {}",
        name,
        fmt_q(tr.period()),
        tr.cycle_start()
    );
    for w in tr.waypoints() {
        let _ = writeln!(out, "{} t {} pos {}", name, fmt_q(&w.time), fmt_q(&w.position));
    }
}

pub fn render_schedule(sp: &SchedulePair) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "schedule {}", sp.kind.name());
    render_trajectory("r1", &sp.r1, &mut out);
    render_trajectory("r2", &sp.r2, &mut out);
    out
}

pub fn render_waiting(report: &WaitingReport) -> String {
    let mut out = String::new();
    let mode = match report.mode {
        patrol_core::simulator::ReportMode::SteadyState => "steady",
        patrol_core::simulator::ReportMode::TransientInclusive => "transient",
    };
    let _ = writeln!(out, "mode {mode}");
    for row in &report.rows {
        let analytic = match &row.analytic {
            Some(a) if row.analytic_is_bound => format!("<={}", fmt_q(a)),
            Some(a) => fmt_q(a),
            None => "-".into(),
        };
        let simulated = match &row.simulated {
            Some(s) => fmt_q(s),
            None if row.has_simulation => "never".into(),
            None => "-".into(),
        };
        let ratio = match row.ratio() {
            Some(r) => format!("{} ({})", fmt_q(&r), fmt_q_dec(&r)),
            None => "unbounded".into(),
        };
        let _ = writeln!(
            out,
            "point {} pos {} idleness {} analytic {} simulated {} ratio {}",
            row.index,
            fmt_q(&row.position),
            fmt_q(&row.idleness),
            analytic,
            simulated,
            ratio,
        );
    }
    match report.max_ratio() {
        Some(r) => {
            let _ = writeln!(out, "max_ratio {} ({})", fmt_q(&r), fmt_q_dec(&r));
        }
        None => {
            let _ = writeln!(out, "max_ratio unbounded");
        }
    }
    out
}

pub fn render_ratio(max_ratio: &Q, bound: &Q) -> String {
    let ok = max_ratio <= bound;
    format!(
        "max_ratio {} ({})\nbound {} ({})\nwithin_bound {}\n",
        fmt_q(max_ratio),
        fmt_q_dec(max_ratio),
        fmt_q(bound),
        fmt_q_dec(bound),
        ok,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use patrol_core::rational::{q, qi};

    #[test]
    fn parse_basic() {
        let inst = parse_instance("0 5/3\n0.5 1/3\n1 5/3").unwrap();
        assert_eq!(inst.len(), 3);
        assert_eq!(inst.points()[1].position, q(1, 2));
        assert_eq!(inst.points()[1].idleness, q(1, 3));
    }

    #[test]
    fn parse_comments_and_order() {
        let inst = parse_instance("# demo\n1 5/3  # right end\n0.5 1/3\n\n0 5/3").unwrap();
        assert_eq!(inst.points()[0].position, qi(0));
        assert_eq!(inst.points()[2].position, qi(1));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_instance("0 1\n0.5 abc\n1 1") {
            Err(InputError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_instance("0 1\n0 2\n1 1") {
            Err(InputError::Validation(ModelError::DuplicatePosition { .. })) => {}
            other => panic!("expected duplicate error, got {other:?}"),
        }
        assert!(parse_instance("0 1\n1").is_err());
        assert!(parse_instance("0 1 extra\n1 1").is_err());
    }

    #[test]
    fn round_trip() {
        let text = "0 5/3\n1/2 1/3\n1 5/3\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(serialize_instance(&inst), text);
        assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
    }
}
