//! `cfproof`: counterfactual-fairness checking with replayable proofs.

mod oracle_spec;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cfproof::closure::{descendants, mediate_closure};
use cfproof::dsl::{parse_case, parse_graph_source, render_case, render_judgment, ParseError};
use cfproof::engine::{candidate_parts, check_batch, derive_counterfactual, Case};
use cfproof::kernel::{check_proof, EdgeMode, Proof};
use cfproof::model::{Context, ContextItem, Probability, VariableId};
use cfproof::oracle::ClassifierOracle;
use cfproof::par::Exec;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use oracle_spec::OracleSpec;
use report::{human_verdict, proof_summary, ErrorReport, Exit, VerdictReport};

#[derive(Parser)]
#[command(name = "cfproof", version, about = "Check counterfactual fairness with replayable proofs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(clap::Args)]
struct OracleArgs {
    /// csv:PATH, db:PATH or cmd:PROGRAM ARGS
    #[arg(long)]
    oracle: OracleSpec,
    /// Let ▷-Cut erase edges missing from the factual graph
    #[arg(long)]
    lenient_edges: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the counterfactual and compare p against q
    Check {
        #[arg(required = true)]
        cases: Vec<PathBuf>,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Tolerance for |p - q|; decimal or num/den
        #[arg(long, default_value = "0")]
        epsilon: Probability,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
        /// Worker threads for several case files
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print the counterfactual judgment and optionally write its proof
    Derive {
        case: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long)]
        emit_proof: Option<PathBuf>,
    },
    /// List the mediation closure of a graph
    Closure {
        /// Case file or graph file
        file: PathBuf,
        /// Only the effects of this variable (itself included)
        #[arg(long)]
        of: Option<String>,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Replay a proof file against a case
    VerifyProof {
        proof: PathBuf,
        case: PathBuf,
        #[arg(long)]
        lenient_edges: bool,
    },
    /// Parse a case file and print it in canonical form
    Parse { case: PathBuf },
}

/// `println!` that tolerates a closed stdout (e.g. piping into `head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

/// A failure carrying its exit code.
struct Failure(Exit, String);

type Outcome = Result<Exit, Failure>;

fn config(msg: impl Into<String>) -> Failure {
    Failure(Exit::Config, msg.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))
}

fn parse_failure(path: &Path, text: &str, e: &ParseError) -> Failure {
    config(format!("{}:{e}\n{}", path.display(), e.snippet(text)))
}

fn load_case(path: &Path) -> Result<Case, Failure> {
    let text = read(path)?;
    parse_case(&text).map_err(|e| parse_failure(path, &text, &e))
}

fn edge_mode(lenient: bool) -> EdgeMode {
    if lenient {
        EdgeMode::Lenient
    } else {
        EdgeMode::Strict
    }
}

fn load_oracle(args: &OracleArgs) -> Result<Box<dyn ClassifierOracle>, Failure> {
    oracle_spec::load(&args.oracle).map_err(config)
}

fn cmd_check(
    paths: &[PathBuf],
    args: &OracleArgs,
    epsilon: &Probability,
    format: Format,
    jobs: usize,
) -> Outcome {
    let cases: Vec<Case> = paths.iter().map(|p| load_case(p)).collect::<Result<_, _>>()?;
    let oracle = load_oracle(args)?;
    let mode = edge_mode(args.lenient_edges);
    let run = || check_batch(&cases, oracle.as_ref(), epsilon, mode, exec_for(jobs));
    let results = in_pool(jobs, run).map_err(config)?;

    let mut worst = Exit::Fair;
    for (path, result) in paths.iter().zip(results) {
        let name = path.display().to_string();
        let prefix = if paths.len() > 1 { format!("{name}: ") } else { String::new() };
        let exit = match &result {
            Ok(v) if v.fair => Exit::Fair,
            Ok(_) => Exit::Unfair,
            Err(e) => Exit::of_engine_error(e),
        };
        worst = worst.max(exit);
        match (format, result) {
            (Format::Human, Ok(v)) => say!("{prefix}{}", human_verdict(&v)),
            (Format::Json, Ok(v)) => say!("{}", to_json(&VerdictReport::new(&name, &v))),
            (Format::Human, Err(e)) => eprintln!("{prefix}error: {e}"),
            (Format::Json, Err(e)) => {
                let r = ErrorReport { case: name, error: e.to_string(), exit_code: exit.code() };
                say!("{}", to_json(&r));
            }
        }
    }
    Ok(worst)
}

fn exec_for(jobs: usize) -> Exec {
    if jobs > 1 {
        Exec::Parallel
    } else {
        Exec::Sequential
    }
}

#[cfg(feature = "parallel")]
fn in_pool<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> Result<R, String> {
    if jobs <= 1 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| e.to_string())?;
    Ok(pool.install(f))
}

#[cfg(not(feature = "parallel"))]
fn in_pool<R: Send>(_jobs: usize, f: impl FnOnce() -> R + Send) -> Result<R, String> {
    Ok(f())
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report serializes")
}

fn cmd_derive(path: &Path, args: &OracleArgs, emit: Option<&Path>) -> Outcome {
    let case = load_case(path)?;
    let oracle = load_oracle(args)?;
    let (judgment, proof) = derive_counterfactual(&case, oracle.as_ref(), edge_mode(args.lenient_edges))
        .map_err(|e| Failure(Exit::of_engine_error(&e), e.to_string()))?;
    if let Some(out) = emit {
        std::fs::write(out, proof.to_json() + "\n")
            .map_err(|e| config(format!("cannot write proof to {}: {e}", out.display())))?;
    }
    say!("{}", render_judgment(&judgment));
    eprintln!("proof: {}", proof_summary(&proof));
    Ok(Exit::Fair)
}

fn cmd_closure(path: &Path, of: Option<&str>, format: Format) -> Outcome {
    let text = read(path)?;
    let graph = parse_graph_source(&text).map_err(|e| parse_failure(path, &text, &e))?;
    match of {
        Some(name) => {
            let var = VariableId::new(name).map_err(|e| config(e.to_string()))?;
            let effects = descendants(&graph, &var).map_err(|e| config(e.to_string()))?;
            let mut listed = vec![var.to_string()];
            listed.extend(effects.iter().filter(|x| **x != var).map(|x| x.to_string()));
            match format {
                Format::Human => say!("{}", listed.join(", ")),
                Format::Json => say!("{}", json!({ "of": name, "descendants": listed })),
            }
        }
        None => {
            let rel = mediate_closure(&graph);
            let entries: Vec<_> = rel
                .entries()
                .map(|(a, b, m)| (a.to_string(), b.to_string(), m.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
                .collect();
            match format {
                Format::Human => {
                    for (a, b, m) in &entries {
                        say!("{a} -> {b}: {{{}}}", m.join(", "));
                    }
                }
                Format::Json => {
                    let rows: Vec<_> =
                        entries.iter().map(|(a, b, m)| json!({ "from": a, "to": b, "witnesses": m })).collect();
                    say!("{}", json!({ "entries": rows }));
                }
            }
        }
    }
    Ok(Exit::Fair)
}

/// Replays the proof, then checks it starts from the case's candidate and
/// ends at the case's counterfactual.
fn cmd_verify_proof(proof_path: &Path, case_path: &Path, lenient: bool) -> Outcome {
    let proof_text = read(proof_path)?;
    let proof = Proof::from_json(&proof_text).map_err(|e| config(format!("{}: {e}", proof_path.display())))?;
    let case = load_case(case_path)?;

    let rejected = |msg: String| {
        say!("REJECTED {msg}");
        Ok(Exit::Unfair)
    };
    if let Err(f) = check_proof(&proof, edge_mode(lenient)) {
        return rejected(format!("{} at step {}: {}", f.violation.label(), f.step + 1, f.violation));
    }
    if proof.steps.is_empty() || proof.assumptions.len() != 1 {
        return rejected("proof must have one assumption and at least one step".into());
    }

    let (edges, dp) = candidate_parts(&case).map_err(|e| config(e.to_string()))?;
    let expected_ctx = Context::from_items(
        edges.into_iter().map(ContextItem::Edge).chain(dp.attributions().iter().cloned().map(ContextItem::Attr)),
    )
    .map_err(|e| config(e.to_string()))?;
    let assumption = &proof.assumptions[0];
    let conclusion = proof.conclusion().expect("non-empty proof");
    let expected_end =
        Context::from_items([ContextItem::from(case.intervention_expr())]).expect("single intervention");

    if assumption.context() != &expected_ctx
        || assumption.target() != &case.target
        || assumption.value() != &case.target_value
    {
        return rejected("assumption is not the case's counterfactual candidate".into());
    }
    if conclusion.context() != &expected_end || !conclusion.same_conclusion(assumption) {
        return rejected("conclusion is not the case's counterfactual judgment".into());
    }
    say!("OK {}", proof_summary(&proof));
    Ok(Exit::Fair)
}

fn cmd_parse(path: &Path) -> Outcome {
    let case = load_case(path)?;
    case.validate().map_err(|e| config(format!("{}: {e}", path.display())))?;
    say!("{}", render_case(&case).trim_end());
    Ok(Exit::Fair)
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Check { cases, oracle, epsilon, format, jobs } => {
            cmd_check(cases, oracle, epsilon, *format, *jobs)
        }
        Command::Derive { case, oracle, emit_proof } => cmd_derive(case, oracle, emit_proof.as_deref()),
        Command::Closure { file, of, format } => cmd_closure(file, of.as_deref(), *format),
        Command::VerifyProof { proof, case, lenient_edges } => cmd_verify_proof(proof, case, *lenient_edges),
        Command::Parse { case } => cmd_parse(case),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { Exit::Config.code() } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    let exit = match run(cli) {
        Ok(exit) => exit,
        Err(Failure(exit, msg)) => {
            eprintln!("error: {msg}");
            exit
        }
    };
    ExitCode::from(exit.code() as u8)
}
