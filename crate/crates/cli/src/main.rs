mod input;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value as Json};

use csp_effects::failures::SCHEMA;
use csp_effects::lambdac::{parse_program, run};
use csp_effects::selfcheck::{self, Report};
use csp_effects::terms::{print_process, Alphabet, Signature};
use csp_effects::theories::{self, axioms, nf_to_term, AxiomKind};
use csp_effects::{denote, ValueEnv, XProcess};

#[derive(Parser)]
#[command(name = "csp-effects", version, about = "Stable-failures CSP as an algebraic effect")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Comma-separated action names for inline terms.
    #[arg(long, global = true)]
    alphabet: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a process and print it back.
    Parse { input: String },
    /// Traces, X-traces and failures of a process.
    Denote {
        input: String,
        /// List every failure instead of the maximal refusals.
        #[arg(long)]
        expand: bool,
    },
    /// Traces and x-traces only.
    Traces { input: String },
    /// Same output as `denote`.
    Failures {
        input: String,
        #[arg(long)]
        expand: bool,
    },
    /// Print the normal form of a process.
    Normalize { input: String },
    /// Exit 0 if the processes are equal, 1 if not.
    Eq { left: String, right: String },
    /// Exit 0 if `left` is refined by `right` (left ⊓ right = left), 1 if not.
    Refine { left: String, right: String },
    /// Run a λ-calculus program and print the process it denotes.
    Run {
        input: String,
        #[arg(long)]
        expand: bool,
    },
    /// List the axioms of a theory.
    Axioms {
        #[arg(long)]
        theory: String,
        #[arg(long, default_value = "a,b")]
        actions: String,
    },
    /// Check the axioms of a theory on random assignments.
    CheckAxioms {
        #[arg(long)]
        theory: Option<String>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run the built-in property suites.
    Selftest {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Random trials per suite; defaults to each suite's usual count.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Largest term size of the exhaustive corpus.
        #[arg(long, default_value_t = 5)]
        max_size: usize,
    },
}

enum Outcome {
    Done,
    Verdict(bool),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(Outcome::Done) | Ok(Outcome::Verdict(true)) => ExitCode::SUCCESS,
        Ok(Outcome::Verdict(false)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(j: Json) {
    println!("{}", serde_json::to_string_pretty(&j).expect("serializable"));
}

fn render_trace(w: &[String]) -> String {
    format!("<{}>", w.join(", "))
}

fn render_set(s: &[String]) -> String {
    format!("{{{}}}", s.join(", "))
}

fn process_of(args: &[&str], flag: Option<&str>) -> Result<(Alphabet, Vec<XProcess>), String> {
    let (ab, terms) = input::load_processes(args, flag)?;
    let env = ValueEnv::identity();
    let ps = terms
        .iter()
        .map(|t| denote(t, &env).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    Ok((ab, ps))
}

fn print_report(p: &XProcess, ab: &Alphabet, expand: bool, failures: bool) {
    let r = p.to_report(ab, expand);
    println!("traces:");
    for w in &r.traces {
        println!("  {}", render_trace(w));
    }
    if !r.xtraces.is_empty() {
        println!("x-traces:");
        for x in &r.xtraces {
            println!("  {} {}", render_trace(&x.trace), x.value);
        }
    }
    if !failures {
        return;
    }
    if let Some(fs) = &r.failures {
        println!("failures:");
        for f in fs {
            println!("  {} {}", render_trace(&f.trace), render_set(&f.refusal));
        }
    }
    if let Some(ms) = &r.max_refusals {
        println!("maximal refusals:");
        for m in ms {
            let sets: Vec<String> = m.refusals.iter().map(|s| render_set(s)).collect();
            println!("  {} {}", render_trace(&m.trace), sets.join(" "));
        }
    }
}

fn theory(name: &str) -> Result<Signature, String> {
    Signature::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = selfcheck::THEORIES.iter().map(|s| s.name()).collect();
        format!("unknown theory `{name}`; expected one of {}", known.join(", "))
    })
}

fn execute(cli: &Cli) -> Result<Outcome, String> {
    let flag = cli.alphabet.as_deref();
    match &cli.command {
        Command::Parse { input } => {
            let (ab, ts) = input::load_processes(&[input], flag)?;
            let printed = print_process(&ts[0], &ab);
            if cli.json {
                emit(json!({"schema": SCHEMA, "alphabet": ab.names(), "term": printed}));
            } else {
                println!("{printed}");
            }
        }
        Command::Denote { input, expand } | Command::Failures { input, expand } => {
            let (ab, ps) = process_of(&[input], flag)?;
            if cli.json {
                emit(serde_json::to_value(ps[0].to_report(&ab, *expand)).expect("serializable"));
            } else {
                print_report(&ps[0], &ab, *expand, true);
            }
        }
        Command::Traces { input } => {
            let (ab, ps) = process_of(&[input], flag)?;
            let r = ps[0].to_report(&ab, false);
            if cli.json {
                emit(json!({"schema": SCHEMA, "traces": r.traces, "xtraces": r.xtraces}));
            } else {
                print_report(&ps[0], &ab, false, false);
            }
        }
        Command::Normalize { input } => {
            let (ab, ts) = input::load_processes(&[input], flag)?;
            let nf = theories::normalize(&ts[0], &ValueEnv::identity()).map_err(|e| e.to_string())?;
            let printed = print_process(&nf_to_term(&nf), &ab);
            if cli.json {
                emit(json!({"schema": SCHEMA, "normalForm": printed}));
            } else {
                println!("{printed}");
            }
        }
        Command::Eq { left, right } | Command::Refine { left, right } => {
            let (_, ts) = input::load_processes(&[left, right], flag)?;
            let env = ValueEnv::identity();
            let is_eq = matches!(cli.command, Command::Eq { .. });
            let holds = if is_eq {
                theories::equivalent(&ts[0], &ts[1], &env)
            } else {
                theories::refine_terms(&ts[0], &ts[1], &env)
            }
            .map_err(|e| e.to_string())?;
            let key = if is_eq { "equivalent" } else { "refines" };
            if cli.json {
                emit(json!({"schema": SCHEMA, key: holds}));
            } else {
                println!("{}", if holds { "true" } else { "false" });
            }
            return Ok(Outcome::Verdict(holds));
        }
        Command::Run { input, expand } => {
            let (text, _) = input::read_arg(input)?;
            let prog = parse_program(&text).map_err(|e| format!("{input}: {e}"))?;
            let (ty, p) = run(&prog.term).map_err(|e| format!("{input}: {e}"))?;
            let mut j = serde_json::to_value(p.to_report(&prog.alphabet, *expand)).expect("serializable");
            if cli.json {
                j["type"] = json!(ty.to_string());
                emit(j);
            } else {
                println!("type: {ty}");
                print_report(&p, &prog.alphabet, *expand, true);
            }
        }
        Command::Axioms { theory: name, actions } => {
            let sig = theory(name)?;
            let ab = input::parse_alphabet_flag(actions)?;
            let list = axioms(sig, &ab);
            if cli.json {
                let items: Vec<Json> = list
                    .iter()
                    .map(|ax| {
                        json!({
                            "family": ax.family,
                            "name": ax.name,
                            "kind": ax.kind,
                            "lhs": print_process(&ax.lhs, &ab),
                            "rhs": print_process(&ax.rhs, &ab),
                        })
                    })
                    .collect();
                emit(json!({"schema": SCHEMA, "theory": sig.name(), "axioms": items}));
            } else {
                for ax in &list {
                    let rel = match ax.kind {
                        AxiomKind::Equation => "=",
                        AxiomKind::Refinement => "[=",
                    };
                    let (l, r) = (print_process(&ax.lhs, &ab), print_process(&ax.rhs, &ab));
                    println!("{:<28} {l}  {rel}  {r}", ax.name);
                }
            }
        }
        Command::CheckAxioms { theory: name, trials, seed } => {
            let sigs = match name {
                Some(n) => vec![theory(n)?],
                None => selfcheck::THEORIES.to_vec(),
            };
            let mut rows = Vec::new();
            for sig in sigs {
                for n in 1..=3 {
                    let r = selfcheck::axiom_theory(sig, n, *trials, seed.wrapping_add(n as u64));
                    rows.push((format!("{sig} |A|={n}"), r, None));
                }
            }
            return finish(cli.json, rows);
        }
        Command::Selftest { suite, trials, seed, max_size } => {
            return finish(cli.json, selftest(suite, *trials, *seed, *max_size)?);
        }
    }
    Ok(Outcome::Done)
}

type Row = (String, Report, Option<f64>);

const SUITES: &[&str] = &[
    "axioms",
    "completeness",
    "uniqueness",
    "definability",
    "monad",
    "hom",
    "eqsys",
    "negative",
    "synctrees",
    "theta",
    "termination",
    "lambda",
];

fn selftest(suite: &str, trials: Option<usize>, seed: u64, max_size: usize) -> Result<Vec<Row>, String> {
    let picked: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        "freealgebra" => vec!["monad", "hom", "eqsys"],
        s if SUITES.contains(&s) => vec![s],
        s => return Err(format!("unknown suite `{s}`; expected all, freealgebra, or one of {}", SUITES.join(", "))),
    };
    let n = |default: usize| trials.unwrap_or(default);
    let needs_corpus = picked.iter().any(|s| matches!(*s, "completeness" | "uniqueness" | "hom"));
    let corpus = needs_corpus.then(|| selfcheck::box_corpus(max_size));
    let mut rows = Vec::new();
    for s in picked {
        let start = Instant::now();
        let r = match s {
            "axioms" => selfcheck::axiom_suite(n(1000), seed),
            "completeness" => selfcheck::ground_completeness(corpus.as_ref().expect("built")),
            "uniqueness" => selfcheck::nf_uniqueness(corpus.as_ref().expect("built")),
            "definability" => selfcheck::definability(n(1000), seed),
            "monad" => selfcheck::monad_laws(n(1000), seed),
            "hom" => selfcheck::hom_vs_direct(n(1000), seed, corpus.as_ref().expect("built")),
            "eqsys" => selfcheck::eqsys_agreement(n(500), seed),
            "negative" => selfcheck::negative_results(),
            "synctrees" => selfcheck::synctree_equations(3),
            "theta" => selfcheck::theta_bridge(n(500), seed),
            "termination" => selfcheck::termination(n(500), seed),
            _ => selfcheck::lambda_commutation(n(300), seed),
        };
        rows.push((s.to_string(), r, Some(start.elapsed().as_secs_f64())));
    }
    Ok(rows)
}

fn finish(as_json: bool, rows: Vec<Row>) -> Result<Outcome, String> {
    let ok = rows.iter().all(|(_, r, _)| r.passed());
    if as_json {
        let items: Vec<Json> = rows
            .iter()
            .map(|(name, r, secs)| {
                json!({
                    "suite": name,
                    "passed": r.passed(),
                    "checked": r.checked,
                    "failed": r.failed,
                    "failures": r.failures,
                    "seconds": secs,
                })
            })
            .collect();
        emit(json!({"schema": SCHEMA, "passed": ok, "results": items}));
    } else {
        for (name, r, secs) in &rows {
            let status = if r.passed() { "pass" } else { "FAIL" };
            let time = secs.map(|s| format!(" ({s:.1}s)")).unwrap_or_default();
            println!("{status} {name}: {} checked, {} failed{time}", r.checked, r.failed);
            for f in &r.failures {
                println!("    {f}");
            }
        }
    }
    if ok {
        Ok(Outcome::Done)
    } else {
        Err("some checks failed".into())
    }
}
