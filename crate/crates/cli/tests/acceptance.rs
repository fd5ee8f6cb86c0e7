//! Criterion 10: deterministic reports and lossless round trips.

use patrol_cli::{parse_instance, serialize_instance};
use patrol_core::generators::{
    gen_admissible_random, gen_tight_alg1, gen_tight_alg2, RandomParams,
};
use patrol_core::model::{critical_points, Instance};
use patrol_core::rational::{q, qi, Q};
use std::io::Write as _;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_patrol"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("spawn patrol");
    if let Some(text) = stdin {
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(text.as_bytes())
            .expect("write stdin");
    }
    drop(child.stdin.take());
    child.wait_with_output().expect("wait patrol")
}

fn assert_repeatable(args: &[&str], stdin: Option<&str>) {
    let first = run(args, stdin);
    let second = run(args, stdin);
    assert_eq!(
        first.status.code(),
        second.status.code(),
        "exit code differs across runs of {args:?}"
    );
    assert_eq!(
        first.stdout, second.stdout,
        "stdout differs across runs of {args:?}"
    );
    assert_eq!(
        first.stderr, second.stderr,
        "stderr differs across runs of {args:?}"
    );
}

fn family_instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for alpha in [q(1, 4), q(1, 2), qi(1), qi(2)] {
        out.push(gen_tight_alg1(&alpha));
    }
    for alpha in [q(1, 4), q(1, 2), q(3, 4)] {
        out.push(gen_tight_alg2(&alpha, None).unwrap());
    }
    for alpha in [qi(1), qi(2)] {
        for eps in [q(1, 10), q(1, 100), q(1, 1000)] {
            out.push(gen_tight_alg2(&alpha, Some(&eps)).unwrap());
        }
    }
    for seed in 1..=100u64 {
        out.push(gen_admissible_random(&RandomParams {
            seed,
            n: 4 + (seed as usize % 9),
        }));
    }
    out
}

#[test]
fn criterion_10_determinism_round_trips() {
    // Byte-identical CLI reports across repeated runs, over every
    // subcommand, fed the same instance on stdin.
    let inst = gen_admissible_random(&RandomParams { seed: 7, n: 8 });
    let text = serialize_instance(&inst);
    assert_repeatable(&["classify", "-"], Some(&text));
    assert_repeatable(&["check", "-"], Some(&text));
    for algo in ["partition", "nested4", "alg1", "alg2", "best"] {
        assert_repeatable(&["schedule", "-", "--algo", algo], Some(&text));
        assert_repeatable(&["simulate", "-", "--algo", algo], Some(&text));
        assert_repeatable(&["ratio", "-", "--algo", algo], Some(&text));
    }
    assert_repeatable(&["gen", "random", "--seed", "11", "--n", "9"], None);
    assert_repeatable(&["gen", "tight1", "--alpha", "1/2"], None);
    assert_repeatable(
        &["gen", "tight2", "--alpha", "2", "--eps", "1/100"],
        None,
    );
    assert_repeatable(&["sweep", "--algo", "alg1", "--alphas", "1/4,1/2,1"], None);
    assert_repeatable(&["sweep", "--algo", "alg2", "--alphas", "1/4,1/2,2"], None);

    // Parse/serialize round trip on 100 random instances.
    for seed in 1..=100u64 {
        let inst = gen_admissible_random(&RandomParams {
            seed,
            n: 4 + (seed as usize % 9),
        });
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).expect("serialized instance reparses");
        assert_eq!(inst, back, "round trip changed instance (seed {seed})");
        assert_eq!(text, serialize_instance(&back));
    }

    // Critical-point digest survives the text round trip on every
    // generator family.
    for inst in family_instances() {
        let (cp, work) = critical_points(&inst).expect("family instance has interior overlap");
        let back = parse_instance(&serialize_instance(&inst)).unwrap();
        let (cp2, work2) = critical_points(&back).unwrap();
        let digest = |c: &patrol_core::model::CriticalPoints| -> (Q, Q, Q, Q, Q, Q, bool) {
            (
                c.x1.clone(),
                c.x2.clone(),
                c.x3.clone(),
                c.x4.clone(),
                c.alpha.clone(),
                c.d.clone(),
                c.flipped,
            )
        };
        assert_eq!(digest(&cp), digest(&cp2));
        assert_eq!(work, work2);
    }

    println!("criterion 10 (determinism & round trips): pass");
}
