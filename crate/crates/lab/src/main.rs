use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use krivine_lab::input::{default_fuel, read_term};
use krivine_lab::report::{
    machine_name, prediction_text, run_text, typing_text, DerivationJson, PredictionJson, RunJson, SemSetJson,
    TypingJson,
};
use krivine_lab::verify::{outcome_table, Verifier, VerifyConfig, SUITES};
use krivine_lab::LabError;
use krivine_lab_core::engine::{min_derivation_size, SearchResult};
use krivine_lab_core::machine::{run_with, MachineKind, RunOptions, RunStatus};
use krivine_lab_core::semantics::{interpret, predict_steps, PredictMode};
use krivine_lab_core::typing::{one_typings, principal_typing};

/// Krivine machines, System R derivations and the relational semantics.
///
/// Terms use Krivine notation: `\x.t` for abstraction and `(v)u` for
/// application. A term argument written `@path` is read from a file.
#[derive(Parser, Debug)]
#[command(name = "krivine-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a term and print it back.
    Parse { term: String },
    /// Run a machine from `(t, ∅) · ε`.
    Run {
        #[arg(long, value_enum, default_value_t = Machine::Head)]
        machine: Machine,
        /// Step limit [default: $KRIVINE_LAB_FUEL or 100000].
        #[arg(long)]
        fuel: Option<usize>,
        /// Print every configuration.
        #[arg(long)]
        trace: bool,
        term: String,
    },
    /// Print the number of machine steps.
    Steps {
        #[arg(long, value_enum, default_value_t = Machine::Head)]
        machine: Machine,
        #[arg(long)]
        fuel: Option<usize>,
        term: String,
    },
    /// Typings of a normal term.
    Typing {
        #[arg(long, value_enum, default_value_t = TypingKind::Principal)]
        kind: TypingKind,
        /// Largest typing size listed for `--kind one`.
        #[arg(long, default_value_t = 20)]
        bound: usize,
        term: String,
    },
    /// A derivation of least size, searching sizes up to the bound.
    MinDerivation {
        #[arg(long, default_value_t = 30)]
        bound: usize,
        /// Only derivations with exact typings.
        #[arg(long)]
        exact: bool,
        term: String,
    },
    /// The points of the interpretation up to a size.
    Interpret {
        #[arg(long, default_value_t = 6)]
        bound: usize,
        term: String,
    },
    /// Predict the steps of `(v)u` from the interpretations of v and u.
    Predict {
        #[arg(long, value_enum, default_value_t = Machine::Head)]
        mode: Machine,
        /// Initial point size; raised by half up to 32 until a pair is found.
        #[arg(long, default_value_t = 8)]
        bound: usize,
        v: String,
        u: String,
    },
    /// Run verification suites.
    Verify {
        /// A suite name, or `all`.
        #[arg(default_value = "all")]
        suite: String,
        /// Machine fuel for corpus runs.
        #[arg(long, default_value_t = 10_000)]
        fuel: usize,
        /// Derivation size up to which divergent terms must be untypable.
        #[arg(long, default_value_t = 20)]
        bound: usize,
        /// Largest closed term in the corpus.
        #[arg(long, default_value_t = 9)]
        corpus_size: usize,
        /// Largest normal term in predictor pairs.
        #[arg(long, default_value_t = 7)]
        pair_size: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Machine {
    Head,
    Beta,
}

impl Machine {
    fn kind(self) -> MachineKind {
        match self {
            Machine::Head => MachineKind::Head,
            Machine::Beta => MachineKind::Beta,
        }
    }

    fn mode(self) -> PredictMode {
        match self {
            Machine::Head => PredictMode::Head,
            Machine::Beta => PredictMode::Beta,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TypingKind {
    Principal,
    One,
}

/// Deep recursion on large terms needs more than the default stack.
const STACK_SIZE: usize = 512 << 20;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let worker = std::thread::Builder::new()
        .stack_size(STACK_SIZE)
        .spawn(move || dispatch(&cli))
        .expect("spawn worker thread");
    match worker.join().expect("worker thread panicked") {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("serializable")),
        Format::Text => print!("{}", text()),
    }
}

fn dispatch(cli: &Cli) -> Result<u8, LabError> {
    let format = cli.format;
    match &cli.command {
        Command::Parse { term } => {
            let t = read_term(term)?;
            #[derive(Serialize)]
            struct Parsed {
                term: String,
                size: usize,
                closed: bool,
            }
            let p = Parsed {
                term: t.to_string(),
                size: t.size(),
                closed: t.is_closed(),
            };
            emit(format, &p, || format!("{}\n", p.term));
        }
        Command::Run {
            machine,
            fuel,
            trace,
            term,
        } => {
            let t = read_term(term)?;
            let opts = RunOptions {
                fuel: fuel.map_or_else(default_fuel, Ok)?,
                trace: *trace,
                detect_cycles: false,
            };
            let r = run_with(&t, machine.kind(), &opts);
            emit(format, &RunJson::of(machine.kind(), &r), || run_text(machine.kind(), &r));
        }
        Command::Steps { machine, fuel, term } => {
            let t = read_term(term)?;
            let r = run_with(&t, machine.kind(), &RunOptions::fuel(fuel.map_or_else(default_fuel, Ok)?));
            if r.status != RunStatus::Finished {
                return Err(LabError::Domain(format!(
                    "the {} machine did not stop within {} steps",
                    machine_name(machine.kind()),
                    r.steps
                )));
            }
            #[derive(Serialize)]
            struct Steps {
                machine: &'static str,
                steps: usize,
            }
            let s = Steps {
                machine: machine_name(machine.kind()),
                steps: r.steps,
            };
            emit(format, &s, || format!("{}\n", s.steps));
        }
        Command::Typing { kind, bound, term } => {
            let t = read_term(term)?;
            let ds = match kind {
                TypingKind::Principal => vec![principal_typing(&t).map_err(LabError::domain)?],
                TypingKind::One => one_typings(&t, *bound).map_err(LabError::domain)?.collect(),
            };
            let json: Vec<TypingJson> = ds.iter().map(|d| TypingJson::of(&d.ctx, &d.ty)).collect();
            emit(format, &json, || {
                ds.iter().map(|d| typing_text(&d.ctx, &d.ty) + "\n").collect()
            });
        }
        Command::MinDerivation { bound, exact, term } => {
            let t = read_term(term)?;
            match min_derivation_size(&t, *bound, *exact) {
                SearchResult::Found { size, derivation, .. } => {
                    emit(format, &DerivationJson::of(&derivation), || {
                        format!("size: {size}\n{}", derivation.pretty())
                    });
                }
                SearchResult::Exhausted { bound, .. } => {
                    #[derive(Serialize)]
                    struct Exhausted {
                        size: Option<usize>,
                        exhausted_bound: usize,
                    }
                    emit(
                        format,
                        &Exhausted {
                            size: None,
                            exhausted_bound: bound,
                        },
                        || format!("no derivation of size at most {bound}\n"),
                    );
                    return Ok(1);
                }
                SearchResult::GaveUp { size_reached, .. } => {
                    return Err(LabError::Domain(format!("search gave up at size {size_reached}")));
                }
            }
        }
        Command::Interpret { bound, term } => {
            let t = read_term(term)?;
            let s = interpret(&t, *bound);
            let json = SemSetJson::of(&s);
            emit(format, &json, || {
                let mut out = String::new();
                if !s.complete {
                    out.push_str("# no normal form found; points may be missing\n");
                }
                for p in &json.points {
                    out.push_str(p);
                    out.push('\n');
                }
                out
            });
        }
        Command::Predict { mode, bound, v, u } => {
            let (v, u) = (read_term(v)?, read_term(u)?);
            let p = predict_steps(&v, &u, mode.mode(), *bound).map_err(LabError::domain)?;
            emit(format, &PredictionJson::of(machine_name(mode.kind()), &p), || prediction_text(&p));
        }
        Command::Verify {
            suite,
            fuel,
            bound,
            corpus_size,
            pair_size,
        } => {
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else if SUITES.contains(&suite.as_str()) {
                vec![suite.as_str()]
            } else {
                return Err(LabError::Usage(format!(
                    "unknown suite {suite:?}; expected all or one of {}",
                    SUITES.join(", ")
                )));
            };
            let verifier = Verifier::new(VerifyConfig {
                fuel: *fuel,
                bound: *bound,
                corpus_size: *corpus_size,
                pair_size: *pair_size,
                ..VerifyConfig::default()
            });
            let outcomes: Vec<_> = names.iter().filter_map(|s| verifier.run(s)).collect();
            #[derive(Serialize)]
            struct SuiteJson<'a> {
                suite: &'a str,
                passed: bool,
                checked: usize,
                summary: &'a str,
                failures: &'a [String],
                seconds: f64,
            }
            let json: Vec<SuiteJson> = outcomes
                .iter()
                .map(|o| SuiteJson {
                    suite: o.suite,
                    passed: o.passed,
                    checked: o.checked,
                    summary: &o.summary,
                    failures: &o.failures,
                    seconds: o.elapsed.as_secs_f64(),
                })
                .collect();
            emit(format, &json, || outcome_table(&outcomes));
            if outcomes.iter().any(|o| !o.passed) {
                return Ok(1);
            }
        }
    }
    Ok(0)
}
