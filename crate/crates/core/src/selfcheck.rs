//! Seeded property checks of the whole library, shared by the acceptance
//! runner and `csp-effects selftest`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::failures::roscoe::{self, RoscoeSF};
use crate::failures::{equal_expanded, XProcess};
use crate::freealgebra::{
    eta, eval_eqsys, hom_conceal, hom_relabel, kleisli, uniqueness_probe, wrong_candidates,
    EqSystem,
};
use crate::gen::{box_omega_terms, Gen, ProcShape};
use crate::lambdac::{constructor_commutation_check, sample::commutation_samples};
use crate::operators::{self as ops, denote, ValueEnv};
use crate::synctrees::{all_trees, check_mutual_equations};
use crate::terms::{print_process, Action, Alphabet, ProcTerm, RelabelFn, Signature, Value};
use crate::theories::{axioms, check_axiom, nf_to_term, readback, NormalForm};

const KEEP: usize = 8;

/// Outcome of one family of checks.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checked: u64,
    pub failed: u64,
    /// The first few failures.
    pub failures: Vec<String>,
}

impl Report {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < KEEP {
                self.failures.push(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }

    pub fn absorb(&mut self, other: Report) {
        self.checked += other.checked;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < KEEP {
                self.failures.push(f);
            }
        }
    }
}

fn alphabet(n: usize) -> Alphabet {
    Alphabet::new(&["a", "b", "c"][..n]).expect("distinct names")
}

fn atoms(names: &[&str]) -> Vec<Value> {
    names.iter().map(|n| Value::atom(n)).collect()
}

fn mix(seed: u64, salt: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt)
}

pub const THEORIES: [Signature; 4] = [
    Signature::CspBox,
    Signature::CspBoxOmega,
    Signature::CspDet,
    Signature::CspDetOmega,
];

/// Processes an assignment for `sig` ranges over: the theories without Ω
/// are sound only for stable processes, and the value summands of the
/// normal forms only appear in the Ω deterministic theory.
pub fn assignment_shape(sig: Signature, actions: usize) -> ProcShape {
    let shape = ProcShape::new(actions, 3);
    match sig {
        Signature::CspBox | Signature::CspDet => shape.stable(),
        Signature::CspDetOmega | Signature::Full => shape.with_values(&atoms(&["u", "v"])),
        Signature::CspBoxOmega => shape,
    }
}

/// Every axiom of every theory under `trials` random assignments for each
/// alphabet size 1, 2 and 3.
pub fn axiom_suite(trials: usize, seed: u64) -> Report {
    let mut report = Report::default();
    for (i, sig) in THEORIES.into_iter().enumerate() {
        for n in 1..=3 {
            report.absorb(axiom_theory(sig, n, trials, mix(seed, (i * 4 + n) as u64)));
        }
    }
    report
}

pub fn axiom_theory(sig: Signature, actions: usize, trials: usize, seed: u64) -> Report {
    let mut report = Report::default();
    let ab = alphabet(actions);
    let schemas = axioms(sig, &ab);
    let vars: Vec<Value> = schemas
        .iter()
        .flat_map(|ax| ax.metavariables())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let shape = assignment_shape(sig, actions);
    let mut gen = Gen::new(seed);
    for t in 0..trials {
        let asg = gen.assignment(&vars, &shape);
        for ax in &schemas {
            let ok = check_axiom(ax, &asg);
            report.check(ok == Ok(true), || {
                format!("{sig} |A|={actions} trial {t}: {} ({:?})", ax.name, ok)
            });
        }
    }
    report
}

/// The closed `Stop`/`Ω`/prefix/`⊓`/`□` terms over `{a,b}` up to a size,
/// with their denotations and normal forms.
pub struct Corpus {
    pub alphabet: Alphabet,
    pub terms: Vec<ProcTerm>,
    pub procs: Vec<XProcess>,
    pub nfs: Vec<NormalForm>,
}

pub fn box_corpus(max_size: usize) -> Corpus {
    let alphabet = alphabet(2);
    let terms = box_omega_terms(&alphabet, max_size);
    let env = ValueEnv::identity();
    let procs: Vec<XProcess> = terms
        .iter()
        .map(|t| denote(t, &env).expect("closed term"))
        .collect();
    let nfs = procs.iter().map(readback).collect();
    Corpus {
        alphabet,
        terms,
        procs,
        nfs,
    }
}

/// Every pair of corpus terms: equal explicit semantics iff equal normal
/// forms. The explicit side compares expanded failure sets, not tries.
pub fn ground_completeness(c: &Corpus) -> Report {
    let mut report = Report::default();
    let explicit: Vec<_> = c
        .procs
        .iter()
        .map(|p| (p.traces(), p.xtraces(), p.expand_failures(&c.alphabet)))
        .collect();
    for i in 0..c.terms.len() {
        for j in i + 1..c.terms.len() {
            let same = explicit[i] == explicit[j];
            report.check(same == (c.nfs[i] == c.nfs[j]), || {
                format!(
                    "{} vs {}: semantics equal {same}",
                    print_process(&c.terms[i], &c.alphabet),
                    print_process(&c.terms[j], &c.alphabet)
                )
            });
        }
    }
    report
}

/// Distinct normal forms of the corpus denote distinct processes, and each
/// normal form denotes the process it was read back from.
pub fn nf_uniqueness(c: &Corpus) -> Report {
    let mut report = Report::default();
    let mut first: BTreeMap<&NormalForm, usize> = BTreeMap::new();
    for (i, nf) in c.nfs.iter().enumerate() {
        first.entry(nf).or_insert(i);
    }
    let env = ValueEnv::identity();
    let mut seen: HashMap<XProcess, &NormalForm> = HashMap::new();
    for (nf, i) in first {
        let d = denote(&nf_to_term(nf), &env).expect("normal forms are closed");
        report.check(d == c.procs[i], || {
            format!("normal form of {} denotes another process", print_process(&c.terms[i], &c.alphabet))
        });
        if let Some(other) = seen.insert(d, nf) {
            report.check(false, || {
                format!(
                    "{} and {} denote the same process",
                    print_process(&nf_to_term(other), &c.alphabet),
                    print_process(&nf_to_term(nf), &c.alphabet)
                )
            });
        }
    }
    report
}

/// `denote(nf_to_term(readback(P))) = P` on random processes.
pub fn definability(trials: usize, seed: u64) -> Report {
    let mut report = Report::default();
    let mut gen = Gen::new(seed);
    let values = atoms(&["x", "y"]);
    let env = ValueEnv::identity();
    for t in 0..trials {
        let n = 1 + t % 3;
        let shape = ProcShape::new(n, 4).with_values(&values[..t / 3 % 3]);
        let p = gen.process(&shape);
        let nf = readback(&p);
        let back = denote(&nf_to_term(&nf), &env);
        report.check(nf.is_well_formed() && back.as_ref() == Ok(&p), || {
            format!("trial {t}: readback of {p:?} does not denote it")
        });
    }
    report
}

/// The three Kleisli laws.
pub fn monad_laws(trials: usize, seed: u64) -> Report {
    let mut report = Report::default();
    let mut gen = Gen::new(seed);
    let (xs, ys, zs) = (atoms(&["x1", "x2"]), atoms(&["y1", "y2"]), atoms(&["z1", "z2"]));
    let actions = 2;
    for t in 0..trials {
        let p = gen.process(&ProcShape::new(actions, 3).with_values(&xs));
        let f = gen.value_map(&xs, &ProcShape::new(actions, 2).with_values(&ys));
        let g = gen.value_map(&ys, &ProcShape::new(actions, 2).with_values(&zs));
        let fk = |v: &Value| f.get(v).cloned();
        let gk = |v: &Value| g.get(v).cloned();

        let left = kleisli(&|v: &Value| Some(eta(v.clone())), &p);
        report.check(left.as_ref() == Ok(&p), || format!("trial {t}: η† ≠ id"));
        for x in &xs {
            let r = kleisli(&fk, &eta(x.clone()));
            report.check(r.as_ref() == Ok(&f[x]), || format!("trial {t}: f†(η {x}) ≠ f({x})"));
        }
        let lhs = kleisli(&fk, &p).and_then(|q| kleisli(&gk, &q));
        let rhs = kleisli(&|v: &Value| kleisli(&gk, f.get(v)?).ok(), &p);
        report.check(lhs.is_ok() && lhs == rhs, || format!("trial {t}: g†∘f† ≠ (g†∘f)†"));
    }
    report
}

/// Relabelling and concealment by the algebra homomorphism agree with the
/// direct operators.
pub fn hom_vs_direct(trials: usize, seed: u64, corpus: &Corpus) -> Report {
    let mut report = Report::default();
    let mut gen = Gen::new(seed);
    let values = atoms(&["x", "y"]);
    for t in 0..trials {
        let n = 1 + t % 3;
        let p = gen.process(&ProcShape::new(n, 3).with_values(&values[..t % 3]));
        let f = gen.relabel_fn(n);
        let a = gen.action(n);
        report.check(hom_relabel(&f, &p) == ops::relabel(&f, &p), || {
            format!("trial {t}: relabel {f:?}")
        });
        report.check(hom_conceal(a, &p) == ops::conceal(a, &p), || {
            format!("trial {t}: conceal {a:?}")
        });
    }
    let (a, b) = (Action::new(0), Action::new(1));
    let fns = [
        RelabelFn::identity(),
        RelabelFn::from_pairs([(a, b)]),
        RelabelFn::from_pairs([(b, a)]),
        RelabelFn::from_pairs([(a, b), (b, a)]),
    ];
    for (term, p) in corpus.terms.iter().zip(&corpus.procs) {
        let shown = || print_process(term, &corpus.alphabet);
        for f in &fns {
            report.check(hom_relabel(f, p) == ops::relabel(f, p), || {
                format!("{}: relabel {f:?}", shown())
            });
        }
        for x in [a, b] {
            report.check(hom_conceal(x, p) == ops::conceal(x, p), || {
                format!("{}: conceal {x:?}", shown())
            });
        }
    }
    report
}

/// Each operator defined by an equation system agrees with its direct
/// definition, and the defining equations reject every canned wrong
/// operator.
pub fn eqsys_agreement(pairs: usize, seed: u64) -> Report {
    let mut report = Report::default();
    let values = atoms(&["x", "y"]);
    for (k, sys) in EqSystem::ALL.into_iter().enumerate() {
        let mut gen = Gen::new(mix(seed, k as u64));
        let mut samples = Vec::with_capacity(pairs);
        for t in 0..pairs {
            let n = 2 + t % 2;
            let shape = ProcShape::new(n, 3).with_values(&values[..t % 3]);
            let (p, q) = (gen.process(&shape), gen.process(&shape));
            report.check(eval_eqsys(sys, &p, &q) == sys.direct(&p, &q), || {
                format!("{} pair {t}", sys.name())
            });
            samples.push((p, q));
        }
        let probe = &samples[..samples.len().min(24)];
        let direct = uniqueness_probe(sys, &|p, q| sys.direct(p, q), probe);
        report.check(direct.violation.is_none(), || {
            format!("{}: the direct operator violates its own equations", sys.name())
        });
        let mut rejected = 0;
        for (name, cand) in wrong_candidates(sys) {
            if uniqueness_probe(sys, &*cand, probe).violation.is_some() {
                rejected += 1;
            } else {
                report.failures.push(format!("{}: {name} not rejected", sys.name()));
            }
        }
        report.check(rejected >= 3, || format!("{}: only {rejected} candidates rejected", sys.name()));
    }
    report
}

fn has_omega(t: &ProcTerm) -> bool {
    use ProcTerm::*;
    match t {
        Omega => true,
        Prefix(_, u) => has_omega(u),
        IntChoice(u, v) | ExtChoice(u, v) => has_omega(u) || has_omega(v),
        _ => false,
    }
}

/// Stable `Stop`/prefix/`⊓`/`□` terms up to a size.
fn stable_terms(ab: &Alphabet, max_size: usize) -> Vec<ProcTerm> {
    box_omega_terms(ab, max_size)
        .into_iter()
        .filter(|t| !has_omega(t))
        .collect()
}

/// The stored concealment witness `(F, G, a)`: `((F □ G) \ a)` is neither
/// `(F\a) □ (G\a)` nor `(F\a) ⊓ (G\a)`. Alphabet `{a,b,c}`.
pub fn conceal_witness() -> (ProcTerm, ProcTerm, Action) {
    let (a, b, c) = (Action::new(0), Action::new(1), Action::new(2));
    (
        ProcTerm::prefix(b, ProcTerm::Stop),
        ProcTerm::prefix(a, ProcTerm::prefix(c, ProcTerm::Stop)),
        a,
    )
}

/// The stored `(F, F', G)` with `(F □ F') ∥ G ≠ (F ∥ G) □ (F' ∥ G)`.
/// Alphabet `{a,b}`.
pub fn par_witness() -> (ProcTerm, ProcTerm, ProcTerm) {
    let (a, b) = (Action::new(0), Action::new(1));
    let pa = ProcTerm::prefix(a, ProcTerm::Stop);
    let pb = ProcTerm::prefix(b, ProcTerm::Stop);
    (pa.clone(), pb.clone(), ProcTerm::int(pa, pb))
}

fn conceal_differs(f: &ProcTerm, g: &ProcTerm, a: Action) -> bool {
    let env = ValueEnv::identity();
    let (f, g) = (denote(f, &env).unwrap(), denote(g, &env).unwrap());
    let lhs = ops::conceal(a, &ops::extern_choice(&f, &g));
    let (fa, ga) = (ops::conceal(a, &f), ops::conceal(a, &g));
    lhs != ops::extern_choice(&fa, &ga) && lhs != ops::intern_choice(&fa, &ga)
}

fn par_differs(f: &ProcTerm, f2: &ProcTerm, g: &ProcTerm) -> bool {
    let env = ValueEnv::identity();
    let d = |t: &ProcTerm| denote(t, &env).unwrap();
    let (f, f2, g) = (d(f), d(f2), d(g));
    let lhs = ops::parallel(&ops::extern_choice(&f, &f2), &g);
    lhs != ops::extern_choice(&ops::parallel(&f, &g), &ops::parallel(&f2, &g))
}

/// The first concealment witness over `{a,b,c}`, hiding `a`, in order of
/// combined size.
pub fn search_conceal_witness(max_size: usize) -> Option<(ProcTerm, ProcTerm, Action)> {
    let terms = stable_terms(&alphabet(3), max_size);
    let a = Action::new(0);
    let mut pairs: Vec<(&ProcTerm, &ProcTerm)> =
        terms.iter().flat_map(|f| terms.iter().map(move |g| (f, g))).collect();
    pairs.sort_by_key(|(f, g)| f.size() + g.size());
    pairs
        .into_iter()
        .find(|(f, g)| conceal_differs(f, g, a))
        .map(|(f, g)| (f.clone(), g.clone(), a))
}

/// The first `∥`/`□` witness over `{a,b}` with `F`, `F'` of size at most
/// `branch_size` and `G` of size at most `max_size`, in order of combined size.
pub fn search_par_witness(branch_size: usize, max_size: usize) -> Option<(ProcTerm, ProcTerm, ProcTerm)> {
    let ab = alphabet(2);
    let small = stable_terms(&ab, branch_size);
    let big = stable_terms(&ab, max_size);
    let mut triples = Vec::new();
    for f in &small {
        for f2 in &small {
            for g in &big {
                triples.push((f, f2, g));
            }
        }
    }
    triples.sort_by_key(|(f, f2, g)| f.size() + f2.size() + g.size());
    triples
        .into_iter()
        .find(|(f, f2, g)| par_differs(f, f2, g))
        .map(|(f, f2, g)| (f.clone(), f2.clone(), g.clone()))
}

/// Both stored witnesses are literal inequalities and are the first ones a
/// brute-force search finds.
pub fn negative_results() -> Report {
    let mut report = Report::default();
    let (f, g, a) = conceal_witness();
    report.check(conceal_differs(&f, &g, a), || "concealment witness holds as an equation".into());
    let found = search_conceal_witness(3);
    report.check(found == Some(conceal_witness()), || {
        format!("concealment search found {found:?}")
    });

    let (f, f2, g) = par_witness();
    report.check(par_differs(&f, &f2, &g), || "parallel witness holds as an equation".into());
    let found = search_par_witness(2, 5);
    report.check(found == Some(par_witness()), || format!("parallel search found {found:?}"));
    report
}

/// The mutual equations of synchronous product on synchronisation trees,
/// exhaustively over `{a,b}`.
pub fn synctree_equations(depth: usize) -> Report {
    let trees = all_trees(2, depth);
    let sync = check_mutual_equations(&trees, 2);
    let mut report = Report {
        checked: sync.checked,
        ..Report::default()
    };
    for v in sync.violations {
        report.failed += 1;
        if report.failures.len() < KEEP {
            report.failures.push(format!("{}: {:?}", v.clause, v.instance));
        }
    }
    report
}

fn tick_shape(actions: usize) -> ProcShape {
    ProcShape::new(actions, 3).with_values(&[Value::tick()])
}

/// `θ` and its inverse, checked as mutually inverse and as commuting with
/// every operator.
pub fn theta_bridge(trials: usize, seed: u64) -> Report {
    let mut report = Report::default();
    let mut gen = Gen::new(seed);
    let env = ValueEnv::identity();
    for t in 0..trials {
        let n = 1 + t % 3;
        let ab = alphabet(n);
        let shape = tick_shape(n);
        let (p, q) = (gen.process(&shape), gen.process(&shape));
        let inv = |x: &XProcess| roscoe::theta_inv(x, &ab).expect("✓-process");

        let sp = inv(&p);
        report.check(roscoe::theta(&sp).as_ref() == Ok(&p), || format!("trial {t}: θ(θ⁻¹ P) ≠ P"));

        // a Roscoe process that is not the image of a trie by construction
        let term = gen.term(Signature::Full, n, 6, &[Value::tick()]);
        let term = if t % 4 == 0 {
            ProcTerm::seq(term, gen.term(Signature::Full, n, 4, &[Value::tick()]))
        } else {
            term
        };
        let shown = || print_process(&term, &ab);
        match roscoe::denote_roscoe(&term, &ab) {
            Ok(s) => {
                let back = roscoe::theta(&s);
                report.check(back.as_ref().ok().map(|x| inv(x)).as_ref() == Some(&s), || {
                    format!("trial {t}: θ⁻¹(θ S) ≠ S for {}", shown())
                });
                report.check(back == denote(&term, &env).map_err(|e| crate::failures::FailuresError::Malformed(e.to_string())), || {
                    format!("trial {t}: θ of the explicit denotation of {} differs", shown())
                });
            }
            Err(e) => report.check(false, || format!("trial {t}: {}: {e}", shown())),
        }

        let sq = inv(&q);
        let a = gen.action(n);
        let b = gen.action(n);
        let f = gen.relabel_fn(n);
        let mut hom = |name: &str, lhs: XProcess, rhs: RoscoeSF| {
            report.check(inv(&lhs) == rhs, || format!("trial {t}: θ⁻¹ does not commute with {name}"));
        };
        hom("prefix", ops::prefix(a, &p), roscoe::prefix(&ab, a, &sp));
        hom("internal choice", ops::intern_choice(&p, &q), roscoe::int_choice(&sp, &sq));
        hom("external choice", ops::extern_choice(&p, &q), roscoe::ext_choice(&ab, &sp, &sq));
        if a != b {
            let branches = [(a, p.clone()), (b, q.clone())];
            let rbranches = [(a, sp.clone()), (b, sq.clone())];
            hom("deterministic choice", ops::det_choice(&branches).unwrap(), roscoe::det_choice(&ab, &rbranches));
            hom(
                "deterministic choice with Ω",
                ops::det_choice_omega(&branches).unwrap(),
                roscoe::det_choice_omega(&ab, &rbranches),
            );
        }
        hom("relabelling", ops::relabel(&f, &p), roscoe::relabel(&ab, &f, &sp));
        hom("concealment", ops::conceal(a, &p), roscoe::hide(a, &sp));
        hom("sequencing", ops::seq(&p, &q).unwrap(), roscoe::seq(&sp, &sq));
        hom("parallel", ops::merge_ticks(ops::parallel(&p, &q)), roscoe::par(&ab, &sp, &sq));
        hom("interleaving", ops::merge_ticks(ops::interleave(&p, &q)), roscoe::interleave(&ab, &sp, &sq));
        hom(
            "left interleaving",
            ops::merge_ticks(ops::interleave_left(&p, &q)),
            roscoe::interleave_left(&ab, &sp, &sq),
        );
        hom(
            "right interleaving",
            ops::merge_ticks(ops::interleave_right(&p, &q)),
            roscoe::interleave_right(&ab, &sp, &sq),
        );
    }
    report
}

/// Monoid laws of `;` with unit `SKIP`, and commutation of `− ; R` with the
/// constructors in its first argument.
pub fn termination(trials: usize, seed: u64) -> Report {
    let mut report = Report::default();
    let mut gen = Gen::new(seed);
    for t in 0..trials {
        let n = 1 + t % 3;
        let shape = tick_shape(n);
        let (p, q, r) = (gen.process(&shape), gen.process(&shape), gen.process(&shape));
        let seq = |x: &XProcess, y: &XProcess| ops::seq(x, y).expect("✓-processes");
        let mut eq = |name: &str, l: XProcess, rr: XProcess| {
            report.check(l == rr, || format!("trial {t}: {name}"));
        };
        let skip = ops::skip();
        eq("SKIP ; P = P", seq(&skip, &p), p.clone());
        eq("P ; SKIP = P", seq(&p, &skip), p.clone());
        eq("(P ; Q) ; R = P ; (Q ; R)", seq(&seq(&p, &q), &r), seq(&p, &seq(&q, &r)));
        eq(
            "(P ⊓ Q) ; R",
            seq(&ops::intern_choice(&p, &q), &r),
            ops::intern_choice(&seq(&p, &r), &seq(&q, &r)),
        );
        let a = gen.action(n);
        eq("(a → P) ; R", seq(&ops::prefix(a, &p), &r), ops::prefix(a, &seq(&p, &r)));
        eq("STOP ; R", seq(&ops::stop(), &r), ops::stop());
        eq("Ω ; R", seq(&ops::omega(), &r), ops::omega());
        let b = gen.action(n);
        if a != b {
            let before = [(a, p.clone()), (b, q.clone())];
            let after = [(a, seq(&p, &r)), (b, seq(&q, &r))];
            eq(
                "□(a_i → P_i) ; R",
                seq(&ops::det_choice(&before).unwrap(), &r),
                ops::det_choice(&after).unwrap(),
            );
            eq(
                "(Ω □ □(a_i → P_i)) ; R",
                seq(&ops::det_choice_omega(&before).unwrap(), &r),
                ops::det_choice_omega(&after).unwrap(),
            );
        }
    }
    report
}

/// `E[op(M₁,…,Mₙ)] = op(E[M₁],…,E[Mₙ])` over sampled contexts.
pub fn lambda_commutation(samples: usize, seed: u64) -> Report {
    let mut report = Report::default();
    for (i, s) in commutation_samples(seed, samples, 2).into_iter().enumerate() {
        let ok = constructor_commutation_check(&s.op, &s.ctx, &s.args, &s.hole);
        report.check(ok == Ok(true), || format!("sample {i}: {:?} in {:?}: {ok:?}", s.op, s.ctx));
    }
    report
}

/// Cross-checks [`equal_expanded`] against trie equality on a corpus.
pub fn expanded_equality(c: &Corpus, limit: usize) -> Report {
    let mut report = Report::default();
    let n = c.procs.len().min(limit);
    for i in 0..n {
        for j in 0..n {
            let slow = equal_expanded(&c.alphabet, &c.procs[i], &c.procs[j]);
            report.check(slow == Ok(c.procs[i] == c.procs[j]), || format!("terms {i} and {j}"));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        let c = box_corpus(3);
        for (name, r) in [
            ("axioms", axiom_suite(3, 1)),
            ("completeness", ground_completeness(&c)),
            ("uniqueness", nf_uniqueness(&c)),
            ("definability", definability(20, 1)),
            ("monad", monad_laws(20, 1)),
            ("hom", hom_vs_direct(20, 1, &c)),
            ("eqsys", eqsys_agreement(10, 1)),
            ("theta", theta_bridge(20, 1)),
            ("termination", termination(20, 1)),
            ("lambda", lambda_commutation(20, 1)),
            ("expanded", expanded_equality(&c, 10)),
        ] {
            assert!(r.passed(), "{name}: {:?}", r.failures);
        }
    }

    #[test]
    fn failures_are_recorded() {
        let mut r = Report::default();
        r.check(true, || unreachable!());
        r.check(false, || "bad".into());
        assert!(!r.passed());
        assert_eq!((r.checked, r.failed), (2, 1));
        assert_eq!(r.failures, vec!["bad".to_string()]);
    }
}
