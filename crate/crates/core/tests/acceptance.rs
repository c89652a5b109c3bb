//! Runs every acceptance criterion and prints one line per criterion.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use csp_effects::lambdac::{parse_program, run};
use csp_effects::selfcheck::{self, Report};

const SEED: u64 = 1;

struct Line {
    id: u32,
    name: &'static str,
    report: Report,
    elapsed: Duration,
    limit: Option<Duration>,
}

impl Line {
    fn passed(&self) -> bool {
        self.report.passed() && self.limit.map_or(true, |l| self.elapsed < l)
    }
}

fn timed(id: u32, name: &'static str, limit: Option<u64>, f: impl FnOnce() -> Report) -> Line {
    let start = Instant::now();
    let report = f();
    Line {
        id,
        name,
        report,
        elapsed: start.elapsed(),
        limit: limit.map(Duration::from_secs),
    }
}

fn corpus_files() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/lamc");
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "lamc"))
        .collect();
    files.sort();
    files
}

/// Each program's declared type is its first line, `-- type: T`.
fn lambda_corpus() -> Report {
    let mut report = Report::default();
    let files = corpus_files();
    let mut check = |ok: bool, msg: String| {
        report.checked += 1;
        if !ok {
            report.failed += 1;
            report.failures.push(msg);
        }
    };
    check(files.len() >= 15, format!("only {} programs", files.len()));
    for path in files {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let src = fs::read_to_string(&path).expect("readable program");
        let declared = src.lines().next().and_then(|l| l.strip_prefix("-- type: ")).map(str::trim);
        let expected: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(path.with_extension("json")).expect("frozen expectation"),
        )
        .expect("valid JSON");
        let outcome = parse_program(&src)
            .map_err(|e| e.to_string())
            .and_then(|p| run(&p.term).map(|r| (p, r)).map_err(|e| e.to_string()));
        match outcome {
            Ok((prog, (ty, proc_))) => {
                check(declared == Some(ty.to_string().as_str()), format!("{name}: type {ty}"));
                let got = serde_json::to_value(proc_.to_report(&prog.alphabet, false)).unwrap();
                check(got == expected, format!("{name}: denotes {got}"));
            }
            Err(e) => check(false, format!("{name}: {e}")),
        }
    }
    report
}

fn main() -> ExitCode {
    let mut lines = Vec::new();
    lines.push(timed(1, "axiom suites of the four theories", Some(60), || {
        selfcheck::axiom_suite(1000, SEED)
    }));
    let start = Instant::now();
    let corpus = selfcheck::box_corpus(5);
    let build = start.elapsed();
    let mut ground = timed(2, "ground completeness over terms of size <= 5", Some(300), || {
        selfcheck::ground_completeness(&corpus)
    });
    ground.elapsed += build;
    lines.push(ground);
    lines.push(timed(3, "definability round trip", None, || {
        selfcheck::definability(1000, SEED)
    }));
    lines.push(timed(4, "normal-form uniqueness", None, || selfcheck::nf_uniqueness(&corpus)));
    lines.push(timed(5, "monad laws", None, || selfcheck::monad_laws(1000, SEED)));
    lines.push(timed(6, "homomorphic relabelling and concealment", None, || {
        selfcheck::hom_vs_direct(1000, SEED, &corpus)
    }));
    lines.push(timed(7, "equation-system deconstructors", None, || {
        selfcheck::eqsys_agreement(500, SEED)
    }));
    lines.push(timed(8, "stored counterexamples", None, selfcheck::negative_results));
    lines.push(timed(9, "synchronisation tree equations, depth <= 3", Some(30), || {
        selfcheck::synctree_equations(3)
    }));
    lines.push(timed(10, "theta bridge", None, || selfcheck::theta_bridge(500, SEED)));
    lines.push(timed(11, "termination and sequencing", None, || {
        selfcheck::termination(500, SEED)
    }));
    lines.push(timed(12, "lambda calculus corpus and commutation", None, || {
        let mut r = lambda_corpus();
        r.absorb(selfcheck::lambda_commutation(500, SEED));
        r
    }));

    let mut all = true;
    for l in &lines {
        all &= l.passed();
        let limit = l.limit.map(|d| format!(", limit {}s", d.as_secs())).unwrap_or_default();
        println!(
            "criterion {:>2} {}: {} ({} checked, {} failed, {:.2}s{limit})",
            l.id,
            if l.passed() { "PASS" } else { "FAIL" },
            l.name,
            l.report.checked,
            l.report.failed,
            l.elapsed.as_secs_f64(),
        );
        for f in &l.report.failures {
            println!("    {f}");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
