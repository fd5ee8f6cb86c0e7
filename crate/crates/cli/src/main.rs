use clap::{Parser, Subcommand, ValueEnum};
use patrol_cli::{
    parse_instance, render_admissibility, render_classify, render_ratio, render_schedule,
    render_waiting, serialize_instance,
};
use patrol_core::analysis::bounds;
use patrol_core::model::{check_necessary, classify, critical_points, Instance, Verdict};
use patrol_core::rational::{parse_q, qi, Q};
use patrol_core::schedules::{
    alg1_schedule, alg2_schedule_with, analytic_waiting_alg1, analytic_waiting_alg2,
    best_schedule, nested4_schedule, partition_schedule, ScheduleError,
};
use patrol_core::simulator::{waiting_times, ReportMode, WaitingReport};
use patrol_core::trajectory::SchedulePair;
use patrol_core::generators::{
    gen_admissible_random, gen_tight_alg1, gen_tight_alg2, RandomParams,
};
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "patrol", version, about = "Two-robot path patrolling toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Partition,
    Nested4,
    Alg1,
    Alg2,
    Best,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Steady,
    Transient,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Tight1,
    Tight2,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Point classes, ranges, and the critical-point digest.
    Classify { file: String },
    /// Necessary/sufficient feasibility conditions with certificates.
    Check { file: String },
    /// Build a schedule and print its trajectories and waiting report.
    Schedule {
        file: String,
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        horizon: Option<String>,
    },
    /// Simulated per-point waiting times of a schedule.
    Simulate {
        file: String,
        #[arg(long, value_enum)]
        algo: Algo,
        /// Reporting window; both are printed when omitted.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long)]
        horizon: Option<String>,
    },
    /// Max simulated ratio versus the algorithm's guarantee.
    Ratio {
        file: String,
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        horizon: Option<String>,
    },
    /// Emit an instance from one of the built-in families.
    Gen {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// CSV of (alpha, max_ratio, bound) over the matching tightness family.
    Sweep {
        #[arg(long, value_enum)]
        algo: Algo,
        /// Comma-separated rational alphas, e.g. "1/4,1/2,1".
        #[arg(long)]
        alphas: String,
    },
}

#[derive(Debug)]
enum CmdError {
    Usage(String),
    Infeasible(String),
    OverBound,
}

fn read_input(file: &str) -> Result<String, CmdError> {
    if file == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CmdError::Usage(format!("stdin: {e}")))?;
        return Ok(buf);
    }
    std::fs::read_to_string(file).map_err(|e| CmdError::Usage(format!("{file}: {e}")))
}

fn load_instance(file: &str) -> Result<Instance, CmdError> {
    let text = read_input(file)?;
    parse_instance(&text).map_err(|e| CmdError::Usage(e.to_string()))
}

fn parse_rational_arg(name: &str, s: &str) -> Result<Q, CmdError> {
    parse_q(s).map_err(|e| CmdError::Usage(format!("--{name}: {e}")))
}

fn schedule_error(e: ScheduleError) -> CmdError {
    match e {
        ScheduleError::Infeasible(name) => CmdError::Infeasible(name),
        other => CmdError::Usage(other.to_string()),
    }
}

/// Builds the requested schedule together with the analytic waiting values
/// it comes with (when the algorithm has a formula).
fn build(
    inst: &Instance,
    algo: Algo,
    horizon: Option<&Q>,
) -> Result<(SchedulePair, Option<WaitingReport>), CmdError> {
    match algo {
        Algo::Partition => {
            let sp = partition_schedule(inst).map_err(schedule_error)?;
            Ok((sp, None))
        }
        Algo::Nested4 => {
            let sp = nested4_schedule(inst).map_err(schedule_error)?;
            Ok((sp, None))
        }
        Algo::Alg1 => {
            let b = alg1_schedule(inst).map_err(schedule_error)?;
            let analytic = analytic_waiting_alg1(inst, &b.cp);
            Ok((b.pair, Some(analytic)))
        }
        Algo::Alg2 => {
            let b = alg2_schedule_with(inst, horizon).map_err(schedule_error)?;
            let analytic = analytic_waiting_alg2(inst, &b.cp);
            Ok((b.pair, Some(analytic)))
        }
        Algo::Best => {
            let (sp, report) = best_schedule(inst).map_err(schedule_error)?;
            Ok((sp, Some(report)))
        }
    }
}

/// The guarantee the chosen algorithm promises on this instance.
fn bound_for(inst: &Instance, algo: Algo) -> Result<Q, CmdError> {
    let s00_empty = classify(inst).s00.is_empty();
    match algo {
        Algo::Partition => Ok(qi(1)),
        Algo::Nested4 => Ok(qi(4)),
        Algo::Alg1 | Algo::Alg2 | Algo::Best => {
            if s00_empty {
                return match algo {
                    Algo::Best => Ok(qi(1)),
                    _ => Err(CmdError::Usage(
                        "no interior-class point; use partition or best".into(),
                    )),
                };
            }
            let (cp, _) = critical_points(inst).map_err(|e| CmdError::Usage(e.to_string()))?;
            let b = bounds(&cp.alpha);
            Ok(match algo {
                Algo::Alg1 => b.bound_alg1,
                Algo::Alg2 => b.bound_alg2,
                _ => b.combined,
            })
        }
    }
}

fn simulated_report(
    sp: &SchedulePair,
    inst: &Instance,
    analytic: Option<&WaitingReport>,
    mode: ReportMode,
) -> WaitingReport {
    let mut report = waiting_times(sp, inst, mode);
    if let Some(a) = analytic {
        report = report.merge_analytic(a);
    }
    report
}

fn run(cli: Cli) -> Result<String, CmdError> {
    match cli.command {
        Command::Classify { file } => {
            let inst = load_instance(&file)?;
            Ok(render_classify(&inst))
        }
        Command::Check { file } => {
            let inst = load_instance(&file)?;
            let report = check_necessary(&inst);
            let text = render_admissibility(&report);
            if report.verdict == Verdict::InfeasibleCertified {
                print!("{text}");
                return Err(CmdError::Infeasible(String::new()));
            }
            Ok(text)
        }
        Command::Schedule { file, algo, horizon } => {
            let inst = load_instance(&file)?;
            let horizon = horizon
                .map(|h| parse_rational_arg("horizon", &h))
                .transpose()?;
            let (sp, analytic) = build(&inst, algo, horizon.as_ref())?;
            let report =
                simulated_report(&sp, &inst, analytic.as_ref(), ReportMode::SteadyState);
            let mut out = render_schedule(&sp);
            out.push_str(&render_waiting(&report));
            Ok(out)
        }
        Command::Simulate {
            file,
            algo,
            mode,
            horizon,
        } => {
            let inst = load_instance(&file)?;
            let horizon = horizon
                .map(|h| parse_rational_arg("horizon", &h))
                .transpose()?;
            let (sp, analytic) = build(&inst, algo, horizon.as_ref())?;
            let modes: Vec<ReportMode> = match mode {
                Some(Mode::Steady) => vec![ReportMode::SteadyState],
                Some(Mode::Transient) => vec![ReportMode::TransientInclusive],
                None => vec![ReportMode::SteadyState, ReportMode::TransientInclusive],
            };
            let mut out = String::new();
            for m in modes {
                out.push_str(&render_waiting(&simulated_report(
                    &sp,
                    &inst,
                    analytic.as_ref(),
                    m,
                )));
            }
            Ok(out)
        }
        Command::Ratio { file, algo, horizon } => {
            let inst = load_instance(&file)?;
            let horizon = horizon
                .map(|h| parse_rational_arg("horizon", &h))
                .transpose()?;
            let (sp, _) = build(&inst, algo, horizon.as_ref())?;
            let report = waiting_times(&sp, &inst, ReportMode::SteadyState);
            let max_ratio = report
                .max_ratio()
                .ok_or_else(|| CmdError::Usage("some point is never visited".into()))?;
            let bound = bound_for(&inst, algo)?;
            let text = render_ratio(&max_ratio, &bound);
            if max_ratio > bound {
                print!("{text}");
                return Err(CmdError::OverBound);
            }
            Ok(text)
        }
        Command::Gen {
            family,
            alpha,
            eps,
            seed,
            n,
        } => {
            let alpha = alpha
                .map(|a| parse_rational_arg("alpha", &a))
                .transpose()?;
            let eps = eps.map(|e| parse_rational_arg("eps", &e)).transpose()?;
            let inst = match family {
                Family::Tight1 => {
                    let a = alpha
                        .ok_or_else(|| CmdError::Usage("tight1 requires --alpha".into()))?;
                    gen_tight_alg1(&a)
                }
                Family::Tight2 => {
                    let a = alpha
                        .ok_or_else(|| CmdError::Usage("tight2 requires --alpha".into()))?;
                    gen_tight_alg2(&a, eps.as_ref())
                        .map_err(|e| CmdError::Usage(e.to_string()))?
                }
                Family::Random => gen_admissible_random(&RandomParams { seed, n }),
            };
            Ok(serialize_instance(&inst))
        }
        Command::Sweep { algo, alphas } => {
            let mut out = String::from("alpha,max_ratio,bound\n");
            for part in alphas.split(',') {
                let a = parse_rational_arg("alphas", part.trim())?;
                // Evaluate on the tightness family matching the algorithm
                // (the split-schedule family for everything except alg2,
                // whose own family exists for both cases). Case 2 needs an
                // epsilon; x1/10 keeps the sweep deterministic.
                let inst = match algo {
                    Algo::Alg2 => {
                        let x1 = &a / (qi(2) * &a + qi(1));
                        let eps = &x1 / qi(10);
                        gen_tight_alg2(&a, Some(&eps))
                            .map_err(|e| CmdError::Usage(e.to_string()))?
                    }
                    _ => gen_tight_alg1(&a),
                };
                let (sp, _) = build(&inst, algo, None)?;
                let report = waiting_times(&sp, &inst, ReportMode::SteadyState);
                let max_ratio = report
                    .max_ratio()
                    .ok_or_else(|| CmdError::Usage("some point is never visited".into()))?;
                let bound = bound_for(&inst, algo)?;
                out.push_str(&format!(
                    "{},{},{}\n",
                    patrol_core::rational::fmt_q(&a),
                    patrol_core::rational::fmt_q(&max_ratio),
                    patrol_core::rational::fmt_q(&bound),
                ));
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap renders --help/--version through the same path; keep
            // exit 0 for those.
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CmdError::Infeasible(name)) => {
            if !name.is_empty() {
                eprintln!("infeasible: {name}");
            }
            ExitCode::from(2)
        }
        Err(CmdError::OverBound) => ExitCode::from(3),
    }
}
