use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use knowhow_core::corpus::{assert_claims, load_dir};
use knowhow_core::fuzz::{default_principles, run_soundness, Execution, FuzzConfig};
use knowhow_core::model::{parse_model, validate_model, EpistemicTransitionSystem};
use knowhow_core::proofcheck::{
    check_corpus, corpus, dependency_order, parse_proof_file, ProofChecker, TheoremDb,
};
use knowhow_core::semantics::{check_named, extension};
use knowhow_core::{parse_formula, Formula};

const HOLDS: u8 = 0;
const FAILS: u8 = 1;
const USAGE: u8 = 2;
const MODEL: u8 = 3;

#[derive(Parser)]
#[command(name = "knowhow", version, about = "Model checker and proof checker for coalition know-how")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a state.
    Check {
        model: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long)]
        formula: String,
    },
    /// Report every structural violation of a model file.
    Validate { model: PathBuf },
    /// List the states where a formula holds.
    Extension {
        model: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Check a fixture directory's claim table.
    Claims { dir: PathBuf },
    /// Check axioms, derived principles and rules on random models.
    Fuzz {
        #[arg(long, default_value_t = FuzzConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = FuzzConfig::default().num_models)]
        models: usize,
        #[arg(long, default_value_t = FuzzConfig::default().formula_depth)]
        depth: usize,
        #[arg(long, default_value_t = FuzzConfig::default().instances_per_schema)]
        instances: usize,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Check derivation files in order; later files may cite earlier theorems.
    Prove {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Preload the bundled theorem corpus.
        #[arg(long)]
        with_corpus: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, e: impl Display) -> Failure {
    Failure {
        code,
        message: e.to_string().replace('\n', " "),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail(USAGE, format_args!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<EpistemicTransitionSystem, Failure> {
    let text = read(path)?;
    let m = parse_model(&text).map_err(|e| fail(MODEL, format_args!("{}: {e}", path.display())))?;
    let violations = validate_model(&m);
    if let Some(v) = violations.first() {
        return Err(fail(MODEL, format_args!("{}: invalid model: {v}", path.display())));
    }
    Ok(m)
}

fn formula(text: &str) -> Result<Formula, Failure> {
    parse_formula(text).map_err(|e| fail(USAGE, format_args!("formula: {e}")))
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable output"));
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Check {
            model,
            state,
            formula: text,
        } => {
            let m = load(&model)?;
            let f = formula(&text)?;
            let v = check_named(&m, &state, &f).map_err(|e| fail(MODEL, e))?;
            if cli.json {
                print_json(&v.to_json(&m, &state, &f));
            } else {
                let mut line = format!("{} at {state}: {f}", if v.holds { "holds" } else { "fails" });
                if let Some(w) = &v.witness {
                    line += &format!("; witness {}", w.display(&m));
                }
                if let Some((s, t)) = v.counterexample {
                    line += &format!("; counterexample {}", m.state_name(s));
                    if let Some(t) = t {
                        line += &format!(" -> {}", m.state_name(t));
                    }
                }
                println!("{line}");
            }
            Ok(if v.holds { HOLDS } else { FAILS })
        }
        Command::Validate { model } => {
            let text = read(&model)?;
            let m = parse_model(&text).map_err(|e| fail(MODEL, format_args!("{}: {e}", model.display())))?;
            let violations = validate_model(&m);
            if cli.json {
                let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                print_json(&json!({ "valid": list.is_empty(), "violations": list }));
            } else if violations.is_empty() {
                println!(
                    "valid: {} states, {} agents, {} votes, {} patterns",
                    m.num_states(),
                    m.agents().len(),
                    m.votes().len(),
                    m.transitions().len()
                );
            } else {
                for v in &violations {
                    println!("violation: {v}");
                }
            }
            Ok(if violations.is_empty() { HOLDS } else { MODEL })
        }
        Command::Extension { model, formula: text } => {
            let m = load(&model)?;
            let f = formula(&text)?;
            let ext = extension(&m, &f).map_err(|e| fail(MODEL, e))?;
            let names: Vec<String> = m.names(&ext).into_iter().collect();
            if cli.json {
                print_json(&json!({ "formula": f.to_string(), "states": names }));
            } else {
                println!("{{{}}}", names.join(","));
            }
            Ok(HOLDS)
        }
        Command::Claims { dir } => {
            let (fixtures, claims) = load_dir(&dir).map_err(|e| fail(USAGE, format_args!("{}: {e}", dir.display())))?;
            let results = assert_claims(&fixtures, &claims);
            let passed = results.iter().filter(|r| r.passed).count();
            if cli.json {
                print_json(&json!({ "passed": passed, "total": results.len(), "results": results }));
            } else {
                for r in &results {
                    let actual = match (&r.actual, &r.error) {
                        (Some(a), _) => a.to_string(),
                        (None, Some(e)) => format!("error: {e}"),
                        (None, None) => "-".to_string(),
                    };
                    println!(
                        "{:4} {:3} {:<6} {:<40} expected {:<5} got {}",
                        if r.passed { "ok" } else { "FAIL" },
                        r.claim.fixture,
                        r.claim.state,
                        r.claim.formula,
                        r.claim.expected,
                        actual
                    );
                }
                println!("{passed}/{} claims pass", results.len());
            }
            Ok(if passed == results.len() { HOLDS } else { FAILS })
        }
        Command::Fuzz {
            seed,
            models,
            depth,
            instances,
            sequential,
        } => {
            let cfg = FuzzConfig {
                seed,
                num_models: models,
                formula_depth: depth,
                instances_per_schema: instances,
                ..FuzzConfig::default()
            };
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            let report = run_soundness(&cfg, &default_principles(), exec).map_err(|e| fail(USAGE, e))?;
            if cli.json {
                println!("{}", report.to_json());
            } else {
                println!("seed {seed}, {models} models, depth {depth}, {instances} instances per principle");
                for p in report.principles.iter().chain(&report.rules) {
                    println!("{:<34} {:>7} trials {:>5} failures", p.name, p.trials, p.failures);
                }
                for f in &report.failures {
                    println!("counterexample: {} model {} state {}: {}", f.check, f.model_index, f.state, f.instance);
                }
                println!("{} counterexamples", report.counterexamples());
            }
            Ok(if report.counterexamples() == 0 { HOLDS } else { FAILS })
        }
        Command::Prove { files, with_corpus } => {
            let checker = ProofChecker::default();
            let mut db = TheoremDb::new();
            if with_corpus {
                check_corpus(&checker, &corpus(), &mut db);
            }
            let mut derivations = Vec::new();
            for path in &files {
                let text = read(path)?;
                let ds = parse_proof_file(&text).map_err(|e| fail(USAGE, format_args!("{}: {e}", path.display())))?;
                derivations.extend(ds);
            }
            let ordered: Vec<_> = dependency_order(&derivations)
                .into_iter()
                .map(|i| derivations[i].clone())
                .collect();
            let results = check_corpus(&checker, &ordered, &mut db);
            let all = results.iter().all(|r| r.accepted);
            if cli.json {
                print_json(&json!({ "accepted": all, "theorems": results }));
            } else {
                for r in &results {
                    match &r.error {
                        None => println!("accepted {}: {}", r.name, r.conclusion),
                        Some(e) => println!("rejected {e}"),
                    }
                }
            }
            Ok(if all { HOLDS } else { FAILS })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
