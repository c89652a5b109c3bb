//! Monad structure on X-processes, homomorphic deconstructors given as
//! algebras folded over normal forms, and the binary deconstructors
//! evaluated through their defining equation systems.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::failures::XProcess;
use crate::operators::{
    det_choice, det_choice_omega, extern_choice, intern_choice, intern_choice_all, interleave,
    interleave_left, interleave_right, omega, parallel, stop, unit,
};
use crate::terms::{Action, ActionSet, RelabelFn, Value};
use crate::theories::{readback, saturate, NormalForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeError {
    #[error("no process given for value {0}")]
    Unbound(Value),
}

pub fn eta(x: Value) -> XProcess {
    unit(x)
}

/// `g†(p)`: every value `x` reached after `w` is replaced by `w` followed by
/// `g(x)`.
pub fn kleisli(
    g: &impl Fn(&Value) -> Option<XProcess>,
    p: &XProcess,
) -> Result<XProcess, FreeError> {
    fn go(
        g: &impl Fn(&Value) -> Option<XProcess>,
        p: &XProcess,
        memo: &mut HashMap<usize, XProcess>,
    ) -> Result<XProcess, FreeError> {
        if let Some(r) = memo.get(&p.ptr()) {
            return Ok(r.clone());
        }
        let mut children = BTreeMap::new();
        for (a, c) in p.children() {
            children.insert(*a, go(g, c, memo)?);
        }
        let mut r = XProcess::from_parts(children, Default::default(), p.refusals().to_vec());
        for x in p.values() {
            let gx = g(x).ok_or_else(|| FreeError::Unbound(x.clone()))?;
            r = intern_choice(&r, &gx);
        }
        memo.insert(p.ptr(), r.clone());
        Ok(r)
    }
    go(g, p, &mut HashMap::new())
}

/// Interpretation of the constructors of the deterministic theory with Ω,
/// plus the generators.
pub trait CspAlgebra {
    type Carrier: Clone;
    fn unit(&self, x: &Value) -> Self::Carrier;
    fn int(&self, x: Self::Carrier, y: Self::Carrier) -> Self::Carrier;
    fn det(&self, branches: Vec<(Action, Self::Carrier)>) -> Self::Carrier;
    fn det_omega(&self, branches: Vec<(Action, Self::Carrier)>) -> Self::Carrier;
}

/// The unique homomorphism out of the free algebra, applied to a normal form.
pub fn fold<A: CspAlgebra>(alg: &A, nf: &NormalForm) -> A::Carrier {
    let tails: BTreeMap<Action, A::Carrier> = nf
        .branches()
        .iter()
        .map(|(a, t)| (*a, fold(alg, t)))
        .collect();
    let pick = |l: ActionSet| l.iter().map(|a| (a, tails[&a].clone())).collect::<Vec<_>>();
    let mut summands = Vec::new();
    match nf {
        NormalForm::Box { family, .. } => {
            for l in family.sets() {
                summands.push(alg.det(pick(*l)));
            }
        }
        NormalForm::Omega { .. } => summands.push(alg.det_omega(pick(nf.guards()))),
    }
    summands.extend(nf.values().iter().map(|x| alg.unit(x)));
    summands
        .into_iter()
        .reduce(|x, y| alg.int(x, y))
        .expect("a normal form has a summand")
}

struct RelabelAlgebra<'a>(&'a RelabelFn);

impl RelabelAlgebra<'_> {
    // repeated guards are merged by internal choice of their tails
    fn regroup(&self, branches: Vec<(Action, XProcess)>) -> Vec<(Action, XProcess)> {
        let mut groups: BTreeMap<Action, XProcess> = BTreeMap::new();
        for (a, p) in branches {
            let b = self.0.apply(a);
            let merged = match groups.remove(&b) {
                Some(q) => intern_choice(&q, &p),
                None => p,
            };
            groups.insert(b, merged);
        }
        groups.into_iter().collect()
    }
}

impl CspAlgebra for RelabelAlgebra<'_> {
    type Carrier = XProcess;

    fn unit(&self, x: &Value) -> XProcess {
        eta(x.clone())
    }

    fn int(&self, x: XProcess, y: XProcess) -> XProcess {
        intern_choice(&x, &y)
    }

    fn det(&self, branches: Vec<(Action, XProcess)>) -> XProcess {
        det_choice(&self.regroup(branches)).expect("regrouped guards are distinct")
    }

    fn det_omega(&self, branches: Vec<(Action, XProcess)>) -> XProcess {
        det_choice_omega(&self.regroup(branches)).expect("regrouped guards are distinct")
    }
}

struct ConcealAlgebra(Action);

impl ConcealAlgebra {
    fn hidden(&self, branches: &[(Action, XProcess)]) -> Option<XProcess> {
        let (_, xj) = branches.iter().find(|(b, _)| *b == self.0)?;
        let others: Vec<_> = branches.iter().filter(|(b, _)| *b != self.0).cloned().collect();
        let rest = det_choice_omega(&others).expect("guards are distinct");
        Some(intern_choice(xj, &rest))
    }
}

impl CspAlgebra for ConcealAlgebra {
    type Carrier = XProcess;

    fn unit(&self, x: &Value) -> XProcess {
        eta(x.clone())
    }

    fn int(&self, x: XProcess, y: XProcess) -> XProcess {
        intern_choice(&x, &y)
    }

    fn det(&self, branches: Vec<(Action, XProcess)>) -> XProcess {
        self.hidden(&branches)
            .unwrap_or_else(|| det_choice(&branches).expect("guards are distinct"))
    }

    fn det_omega(&self, branches: Vec<(Action, XProcess)>) -> XProcess {
        self.hidden(&branches)
            .unwrap_or_else(|| det_choice_omega(&branches).expect("guards are distinct"))
    }
}

pub fn hom_relabel(f: &RelabelFn, p: &XProcess) -> XProcess {
    fold(&RelabelAlgebra(f), &readback(p))
}

pub fn hom_conceal(a: Action, p: &XProcess) -> XProcess {
    fold(&ConcealAlgebra(a), &readback(p))
}

/// The binary deconstructors defined by equation systems.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum EqSystem {
    Ext,
    Par,
    InterLeft,
    InterRight,
}

impl EqSystem {
    pub const ALL: [EqSystem; 4] = [EqSystem::Ext, EqSystem::Par, EqSystem::InterLeft, EqSystem::InterRight];

    pub fn name(self) -> &'static str {
        match self {
            EqSystem::Ext => "ext",
            EqSystem::Par => "par",
            EqSystem::InterLeft => "interleave-left",
            EqSystem::InterRight => "interleave-right",
        }
    }

    /// The direct set-level operator the system defines.
    pub fn direct(self, p: &XProcess, q: &XProcess) -> XProcess {
        match self {
            EqSystem::Ext => extern_choice(p, q),
            EqSystem::Par => parallel(p, q),
            EqSystem::InterLeft => interleave_left(p, q),
            EqSystem::InterRight => interleave_right(p, q),
        }
    }
}

// One summand of the root of a normal form.
#[derive(Clone, Debug)]
enum Summand {
    Det(ActionSet),
    DetOmega(ActionSet),
    Value(Value),
}

fn summands(p: &XProcess) -> Vec<Summand> {
    let mut out = Vec::new();
    let fut = p.fut();
    if p.has_failures() {
        let family = saturate(p.refusals().iter().map(|m| fut.minus(*m)).chain([fut]));
        out.extend(family.sets().iter().map(|l| Summand::Det(*l)));
    } else if !fut.is_empty() || p.values().is_empty() {
        out.push(Summand::DetOmega(fut));
    }
    out.extend(p.values().iter().cloned().map(Summand::Value));
    out
}

fn branches(p: &XProcess, l: ActionSet) -> Vec<(Action, XProcess)> {
    l.iter()
        .map(|a| (a, p.child(a).expect("guard is a future").clone()))
        .collect()
}

fn summand_process(p: &XProcess, s: &Summand) -> XProcess {
    match s {
        Summand::Det(l) => det_choice(&branches(p, *l)).expect("guards are distinct"),
        Summand::DetOmega(l) => det_choice_omega(&branches(p, *l)).expect("guards are distinct"),
        Summand::Value(x) => eta(x.clone()),
    }
}

type BinOp<'a> = &'a dyn Fn(&XProcess, &XProcess) -> XProcess;

/// The four operators as seen by the right-hand sides of the equations.
struct Ops<'a> {
    ext: BinOp<'a>,
    par: BinOp<'a>,
    left: BinOp<'a>,
    right: BinOp<'a>,
}

impl Ops<'_> {
    fn get(&self, sys: EqSystem) -> BinOp<'_> {
        match sys {
            EqSystem::Ext => self.ext,
            EqSystem::Par => self.par,
            EqSystem::InterLeft => self.left,
            EqSystem::InterRight => self.right,
        }
    }
}

fn meet(ps: Vec<XProcess>) -> XProcess {
    intern_choice_all(&ps).expect("at least one summand")
}

// Deterministic choice over two guarded summands, repeated guards merged.
fn concat(p: &XProcess, l: ActionSet, q: &XProcess, m: ActionSet, with_omega: bool) -> XProcess {
    let mut bs: BTreeMap<Action, XProcess> = branches(p, l).into_iter().collect();
    for (b, t) in branches(q, m) {
        let merged = match bs.remove(&b) {
            Some(s) => intern_choice(&s, &t),
            None => t,
        };
        bs.insert(b, merged);
    }
    let bs: Vec<_> = bs.into_iter().collect();
    if with_omega {
        det_choice_omega(&bs).expect("merged guards are distinct")
    } else {
        det_choice(&bs).expect("merged guards are distinct")
    }
}

fn synchronized(
    ops: &Ops,
    p: &XProcess,
    l: ActionSet,
    q: &XProcess,
    m: ActionSet,
    with_omega: bool,
) -> XProcess {
    let bs: Vec<_> = l
        .intersection(m)
        .iter()
        .map(|a| (a, (ops.par)(p.child(a).unwrap(), q.child(a).unwrap())))
        .collect();
    if with_omega {
        det_choice_omega(&bs).expect("guards are distinct")
    } else {
        det_choice(&bs).expect("guards are distinct")
    }
}

// a → ((P_a |||ˡ Q) □ (P_a |||ʳ Q)) for each guard a of the summand.
fn interleaved(ops: &Ops, p: &XProcess, l: ActionSet, q: &XProcess, from_left: bool, with_omega: bool) -> XProcess {
    let (moving, other) = if from_left { (p, q) } else { (q, p) };
    let bs: Vec<_> = l
        .iter()
        .map(|a| {
            let c = moving.child(a).unwrap();
            let (x, y) = if from_left { (c, other) } else { (other, c) };
            (a, (ops.ext)(&(ops.left)(x, y), &(ops.right)(x, y)))
        })
        .collect();
    if with_omega {
        det_choice_omega(&bs).expect("guards are distinct")
    } else {
        det_choice(&bs).expect("guards are distinct")
    }
}

/// One unfolding of the equations of `sys` at `(p, q)`: the clause used and
/// its right-hand side, with `ops` standing for every operator mentioned.
fn unfold(sys: EqSystem, ops: &Ops, p: &XProcess, q: &XProcess) -> (&'static str, XProcess) {
    use Summand::*;
    let this = ops.get(sys);
    let ps = summands(p);
    let qs = summands(q);
    let split_left = |clause| {
        let parts = ps.iter().map(|s| this(&summand_process(p, s), q)).collect();
        (clause, meet(parts))
    };
    let split_right = |clause| {
        let parts = qs.iter().map(|t| this(p, &summand_process(q, t))).collect();
        (clause, meet(parts))
    };
    match sys {
        EqSystem::Ext => {
            if ps.len() > 1 {
                return split_left("int-left");
            }
            if let Value(x) = &ps[0] {
                return ("unit-left", intern_choice(&eta(x.clone()), &this(&omega(), q)));
            }
            if qs.len() > 1 {
                return split_right("int-right");
            }
            match (&ps[0], &qs[0]) {
                (Det(l), Det(m)) => ("det-det", concat(p, *l, q, *m, false)),
                (Det(l) | DetOmega(l), Det(m) | DetOmega(m)) => ("omega-guarded", concat(p, *l, q, *m, true)),
                (Det(l) | DetOmega(l), Value(y)) => (
                    "unit-right",
                    intern_choice(&det_choice_omega(&branches(p, *l)).unwrap(), &eta(y.clone())),
                ),
                (Value(_), _) => unreachable!(),
            }
        }
        EqSystem::Par => {
            if ps.len() > 1 {
                return split_left("int-left");
            }
            if qs.len() > 1 {
                return split_right("int-right");
            }
            match (&ps[0], &qs[0]) {
                (Value(x), Value(y)) => ("unit-unit", eta(crate::terms::Value::pair(x.clone(), y.clone()))),
                (Value(_), _) => ("unit-guarded", omega()),
                (_, Value(_)) => ("guarded-unit", omega()),
                (Det(l), Det(m)) => ("det-det", synchronized(ops, p, *l, q, *m, false)),
                (Det(l) | DetOmega(l), Det(m) | DetOmega(m)) => {
                    ("omega-guarded", synchronized(ops, p, *l, q, *m, true))
                }
            }
        }
        EqSystem::InterLeft => {
            if ps.len() > 1 {
                return split_left("int-left");
            }
            match &ps[0] {
                Det(l) => ("det-left", interleaved(ops, p, *l, q, true, false)),
                DetOmega(l) => ("omega-left", interleaved(ops, p, *l, q, true, true)),
                Value(x) => {
                    if qs.len() > 1 {
                        return split_right("unit-int");
                    }
                    match &qs[0] {
                        Value(y) => ("unit-unit", eta(crate::terms::Value::pair(x.clone(), y.clone()))),
                        _ => ("unit-guarded", omega()),
                    }
                }
            }
        }
        EqSystem::InterRight => {
            if qs.len() > 1 {
                return split_right("int-right");
            }
            match &qs[0] {
                Det(m) => ("det-right", interleaved(ops, p, *m, q, false, false)),
                DetOmega(m) => ("omega-right", interleaved(ops, p, *m, q, false, true)),
                Value(y) => {
                    if ps.len() > 1 {
                        return split_left("int-unit");
                    }
                    match &ps[0] {
                        Value(x) => ("unit-unit", eta(crate::terms::Value::pair(x.clone(), y.clone()))),
                        _ => ("guarded-unit", omega()),
                    }
                }
            }
        }
    }
}

type Memo = HashMap<(EqSystem, XProcess, XProcess), XProcess>;

struct Evaluator {
    memo: RefCell<Memo>,
}

impl Evaluator {
    fn new() -> Evaluator {
        Evaluator {
            memo: RefCell::new(HashMap::new()),
        }
    }

    fn call(&self, sys: EqSystem, p: &XProcess, q: &XProcess) -> XProcess {
        let key = (sys, p.clone(), q.clone());
        if let Some(r) = self.memo.borrow().get(&key) {
            return r.clone();
        }
        let ops = Ops {
            ext: &|a, b| self.call(EqSystem::Ext, a, b),
            par: &|a, b| self.call(EqSystem::Par, a, b),
            left: &|a, b| self.call(EqSystem::InterLeft, a, b),
            right: &|a, b| self.call(EqSystem::InterRight, a, b),
        };
        let (_, r) = unfold(sys, &ops, p, q);
        self.memo.borrow_mut().insert(key, r.clone());
        r
    }
}

/// Evaluates `sys` on `(p, q)` using only its defining equations.
pub fn eval_eqsys(sys: EqSystem, p: &XProcess, q: &XProcess) -> XProcess {
    Evaluator::new().call(sys, p, q)
}

pub fn ext_choice_eqsys(p: &XProcess, q: &XProcess) -> XProcess {
    eval_eqsys(EqSystem::Ext, p, q)
}

pub fn par_eqsys(p: &XProcess, q: &XProcess) -> XProcess {
    eval_eqsys(EqSystem::Par, p, q)
}

pub fn inter_eqsys_left(p: &XProcess, q: &XProcess) -> XProcess {
    eval_eqsys(EqSystem::InterLeft, p, q)
}

pub fn inter_eqsys_right(p: &XProcess, q: &XProcess) -> XProcess {
    eval_eqsys(EqSystem::InterRight, p, q)
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub sample: usize,
    pub clause: &'static str,
    pub args: (XProcess, XProcess),
    pub candidate: XProcess,
    pub expected: XProcess,
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub system: EqSystem,
    /// Equation instances checked.
    pub checked: usize,
    /// Did the candidate disagree with the direct operator anywhere checked?
    pub differs: bool,
    pub violation: Option<Violation>,
}

const PROBE_LIMIT: usize = 256;

/// Checks the defining equations of `sys` with `candidate` in place of the
/// operator, at each sample and at the argument pairs its unfolding reaches.
/// The other operators keep their direct definitions.
pub fn uniqueness_probe(
    sys: EqSystem,
    candidate: &dyn Fn(&XProcess, &XProcess) -> XProcess,
    samples: &[(XProcess, XProcess)],
) -> ProbeReport {
    let mut report = ProbeReport {
        system: sys,
        checked: 0,
        differs: false,
        violation: None,
    };
    for (i, (p, q)) in samples.iter().enumerate() {
        let mut todo = vec![(p.clone(), q.clone())];
        let mut seen = HashSet::new();
        while let Some((x, y)) = todo.pop() {
            if seen.len() >= PROBE_LIMIT || !seen.insert((x.clone(), y.clone())) {
                continue;
            }
            let reached = RefCell::new(Vec::new());
            let record = |a: &XProcess, b: &XProcess| {
                reached.borrow_mut().push((a.clone(), b.clone()));
                candidate(a, b)
            };
            let ext = |a: &XProcess, b: &XProcess| extern_choice(a, b);
            let par = |a: &XProcess, b: &XProcess| parallel(a, b);
            let left = |a: &XProcess, b: &XProcess| interleave_left(a, b);
            let right = |a: &XProcess, b: &XProcess| interleave_right(a, b);
            let ops = Ops {
                ext: if sys == EqSystem::Ext { &record } else { &ext },
                par: if sys == EqSystem::Par { &record } else { &par },
                left: if sys == EqSystem::InterLeft { &record } else { &left },
                right: if sys == EqSystem::InterRight { &record } else { &right },
            };
            let (clause, expected) = unfold(sys, &ops, &x, &y);
            let got = candidate(&x, &y);
            report.checked += 1;
            report.differs |= got != sys.direct(&x, &y);
            if got != expected {
                report.violation.get_or_insert(Violation {
                    sample: i,
                    clause,
                    args: (x.clone(), y.clone()),
                    candidate: got,
                    expected,
                });
                return report;
            }
            todo.extend(reached.into_inner());
        }
    }
    report
}

pub type Candidate = Box<dyn Fn(&XProcess, &XProcess) -> XProcess>;

/// Plausible but wrong stand-ins for each operator.
pub fn wrong_candidates(sys: EqSystem) -> Vec<(&'static str, Candidate)> {
    let always_omega: (&'static str, Candidate) = ("omega-everywhere", Box::new(|_, _| omega()));
    let mut out = vec![always_omega];
    match sys {
        EqSystem::Ext => {
            out.push(("internal-choice", Box::new(intern_choice)));
            out.push(("left-projection", Box::new(|p, _| p.clone())));
            out.push(("stop-everywhere", Box::new(|_, _| stop())));
        }
        EqSystem::Par => {
            out.push(("interleave", Box::new(interleave)));
            out.push(("left-only", Box::new(|p, q| interleave_left(p, q))));
            out.push(("external-choice", Box::new(extern_choice)));
        }
        EqSystem::InterLeft => {
            out.push(("right-as-left", Box::new(interleave_right)));
            out.push(("full-interleave", Box::new(interleave)));
            out.push(("parallel", Box::new(parallel)));
        }
        EqSystem::InterRight => {
            out.push(("left-as-right", Box::new(interleave_left)));
            out.push(("full-interleave", Box::new(interleave)));
            out.push(("parallel", Box::new(parallel)));
        }
    }
    out
}
