use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use trivec::abc::{self, GaugedVector, TripleJson};
use trivec::io::{self, amplitudes_to_json, StateJson};
use trivec::pluecker::{self, QVectorJson};
use trivec::recipes::{self, Recipe, VERIFY_TOL};
use trivec::selftest;
use trivec::so6;
use trivec::{oracle, tangles, Error, OracleReport, Partition, TangleReport};

const CKW_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(
    name = "trivec",
    version,
    about = "Three-qubit entanglement through Plücker coordinates and SO(6)"
)]
struct Cli {
    /// Verification tolerance for `invariants` and `recipe run`.
    #[arg(long, global = true, env = "TRIVEC_TOL")]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tangles of a state, optionally checked against the density-matrix oracle.
    Invariants {
        state: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
    /// Plücker vector, q-vector, α/β split and the A, B, C vectors.
    Qvec {
        state: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        partition: Option<u8>,
    },
    /// Evolve under a pair Hamiltonian for time t.
    Evolve {
        state: PathBuf,
        #[arg(long)]
        ham: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, value_enum, default_value_t = Track::Both)]
        track: Track,
    },
    /// Built-in or file-based control recipes.
    Recipe {
        #[command(subcommand)]
        command: RecipeCommand,
    },
    /// Seeded invariant battery over random states.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
}

#[derive(Subcommand, Debug)]
enum RecipeCommand {
    /// Run a recipe by built-in name or JSON file.
    Run {
        recipe: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        verify: bool,
        /// Write the full step-by-step trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Names of the built-in recipes.
    List,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Track {
    Both,
    State,
    Q,
}

#[derive(Serialize)]
struct InvariantsOutput {
    tangles: TangleReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_disagreement: Option<f64>,
    tolerance: f64,
    passed: bool,
    failures: Vec<String>,
}

#[derive(Serialize)]
struct PartitionOutput {
    partition: Partition,
    p: Vec<[f64; 2]>,
    q: Vec<[f64; 2]>,
    alpha: Vec<[f64; 2]>,
    beta: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct GaugeOutput {
    phase: f64,
    degenerate: bool,
    #[serde(rename = "A")]
    a: GaugedVector,
    #[serde(rename = "B")]
    b: GaugedVector,
    #[serde(rename = "C")]
    c: GaugedVector,
}

#[derive(Serialize)]
struct QvecOutput {
    partitions: Vec<PartitionOutput>,
    vectors: TripleJson,
    gauge: GaugeOutput,
}

#[derive(Serialize)]
struct EvolveOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    state: Option<StateJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    qvectors: Vec<QVectorJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    propagated: Option<QVectorJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    disagreement: Option<f64>,
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    print!("{}", io::to_pretty(value)?);
    Ok(())
}

fn tolerance(cli_tol: Option<f64>, default: f64) -> trivec::Result<f64> {
    match cli_tol {
        None => Ok(default),
        Some(t) if t > 0.0 && t.is_finite() => Ok(t),
        Some(t) => Err(Error::Validation(format!("tolerance must be positive, got {t}"))),
    }
}

fn cmd_invariants(path: &Path, with_oracle: bool, tol: Option<f64>) -> anyhow::Result<ExitCode> {
    let ckw_tol = tolerance(tol, CKW_TOL)?;
    let oracle_tol = tolerance(tol, ORACLE_TOL)?;
    let state = io::read_state(path)?;
    let report = tangles::tangle_report(&state)?;
    let mut failures = Vec::new();
    let ckw = report.max_ckw_residual();
    if ckw > ckw_tol {
        failures.push(format!("CKW residual {ckw:.3e} above {ckw_tol:.1e}"));
    }
    let (oracle, max_disagreement) = if with_oracle {
        let o = oracle::oracle_report(&state);
        let d = report.max_abs_diff(&o.measures());
        if d > oracle_tol {
            failures.push(format!("oracle disagreement {d:.3e} above {oracle_tol:.1e}"));
        }
        (Some(o), Some(d))
    } else {
        (None, None)
    };
    let out = InvariantsOutput {
        tangles: report,
        oracle,
        max_disagreement,
        tolerance: if with_oracle { oracle_tol } else { ckw_tol },
        passed: failures.is_empty(),
        failures,
    };
    print_json(&out)?;
    Ok(if out.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn cmd_qvec(path: &Path, partition: Option<u8>) -> anyhow::Result<ExitCode> {
    let state = io::read_state(path)?;
    let selected: Vec<Partition> = match partition {
        Some(n) => vec![Partition::from_number(n)?],
        None => Partition::ALL.to_vec(),
    };
    let mut partitions = Vec::new();
    for part in selected {
        let p = pluecker::pluecker_pvector(&state, part);
        let q = pluecker::to_qvector(&p)?;
        let ab = abc::split(&q);
        partitions.push(PartitionOutput {
            partition: part,
            p: amplitudes_to_json(p.components.as_slice()),
            q: amplitudes_to_json(q.components.as_slice()),
            alpha: amplitudes_to_json(ab.alpha.as_slice()),
            beta: amplitudes_to_json(ab.beta.as_slice()),
        });
    }
    let triple = abc::extract_triple(&state)?;
    let gauged = abc::fix_gauge(&triple);
    print_json(&QvecOutput {
        partitions,
        vectors: TripleJson::new(&triple, gauged.phase),
        gauge: GaugeOutput {
            phase: gauged.phase,
            degenerate: gauged.degenerate,
            a: gauged.a,
            b: gauged.b,
            c: gauged.c,
        },
    })?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_evolve(path: &Path, ham: &Path, t: f64, track: Track) -> anyhow::Result<ExitCode> {
    if !t.is_finite() {
        return Err(Error::Validation(format!("time must be finite, got {t}")).into());
    }
    let state = io::read_state(path)?;
    let h = io::read_hamiltonian(ham)?;
    let out = match track {
        Track::Both => {
            let d = so6::evolve_dual(&state, &h, t)?;
            EvolveOutput {
                state: Some(StateJson::from(&d.state)),
                qvectors: d.qvectors.iter().map(QVectorJson::from).collect(),
                propagated: Some(QVectorJson::from(&d.propagated)),
                disagreement: Some(d.disagreement),
            }
        }
        Track::State => {
            let next = state.apply_pair(&h.propagator(t), h.pair)?;
            EvolveOutput {
                state: Some(StateJson::from(&next)),
                qvectors: pluecker::qvectors(&next)?.iter().map(QVectorJson::from).collect(),
                propagated: None,
                disagreement: None,
            }
        }
        Track::Q => {
            let q = pluecker::qvector(&state, h.pair.partition())?;
            EvolveOutput {
                state: None,
                qvectors: Vec::new(),
                propagated: Some(QVectorJson::from(&q.rotated(&h.rotation(t)))),
                disagreement: None,
            }
        }
    };
    print_json(&out)?;
    Ok(ExitCode::SUCCESS)
}

fn load_recipe(spec: &str) -> anyhow::Result<Recipe> {
    if let Some(r) = recipes::builtin(spec) {
        return Ok(r);
    }
    let path = Path::new(spec);
    if path.exists() {
        return Ok(io::read_recipe(path)?);
    }
    let names: Vec<String> = recipes::builtin_recipes().into_iter().map(|r| r.name).collect();
    Err(Error::Parse(format!(
        "no built-in recipe or file named {spec:?} (built-ins: {})",
        names.join(", ")
    ))
    .into())
}

fn cmd_recipe(command: RecipeCommand, tol: Option<f64>) -> anyhow::Result<ExitCode> {
    match command {
        RecipeCommand::List => {
            let names: Vec<String> = recipes::builtin_recipes().into_iter().map(|r| r.name).collect();
            print_json(&names)?;
        }
        RecipeCommand::Run {
            recipe,
            input,
            verify,
            trace,
        } => {
            let tol = tolerance(tol, VERIFY_TOL)?;
            let recipe = load_recipe(&recipe)?;
            let state = io::read_state(&input)?;
            let result = recipes::run(&recipe, &state, verify, tol)?;
            if let Some(out) = trace {
                std::fs::write(&out, io::to_pretty(&result)?)
                    .with_context(|| format!("writing trace to {}", out.display()))?;
            }
            print_json(&result.summary())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest(seed: u64, count: usize) -> anyhow::Result<ExitCode> {
    let summary = selftest::run_selftest(seed, count);
    print_json(&summary)?;
    Ok(if summary.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Validation(_) | Error::Parse(_) | Error::Json(_)) => 2,
        Some(Error::Verification { .. }) => 3,
        Some(Error::Consistency(_)) => 4,
        None => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Invariants { state, oracle } => cmd_invariants(&state, oracle, cli.tol),
        Command::Qvec { state, partition } => cmd_qvec(&state, partition),
        Command::Evolve { state, ham, t, track } => cmd_evolve(&state, &ham, t, track),
        Command::Recipe { command } => cmd_recipe(command, cli.tol),
        Command::Selftest { seed, count } => cmd_selftest(seed, count),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
