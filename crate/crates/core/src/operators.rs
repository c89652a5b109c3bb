//! The CSP operators on X-processes, and the denotation of process terms.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::failures::XProcess;
use crate::freealgebra;
use crate::terms::{Action, ActionSet, ProcTerm, RelabelFn, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DenoteError {
    #[error("duplicate guard #{0} in deterministic choice")]
    DuplicateGuard(usize),
    #[error("sequential composition needs a ✓-valued process, found value {0}")]
    NotTick(Value),
    #[error("value constant {0} is unbound")]
    Unbound(Value),
}

/// Interpretation of value constants.
#[derive(Clone, Debug, Default)]
pub struct ValueEnv {
    map: BTreeMap<Value, Value>,
    identity: bool,
}

impl ValueEnv {
    /// Every constant denotes itself.
    pub fn identity() -> ValueEnv {
        ValueEnv {
            map: BTreeMap::new(),
            identity: true,
        }
    }

    /// Only the listed constants are bound.
    pub fn from_map(map: BTreeMap<Value, Value>) -> ValueEnv {
        ValueEnv {
            map,
            identity: false,
        }
    }

    pub fn lookup(&self, v: &Value) -> Option<Value> {
        match self.map.get(v) {
            Some(x) => Some(x.clone()),
            None if self.identity => Some(v.clone()),
            None => None,
        }
    }
}

pub fn stop() -> XProcess {
    XProcess::from_parts(BTreeMap::new(), BTreeSet::new(), vec![ActionSet::EMPTY])
}

pub fn omega() -> XProcess {
    XProcess::from_parts(BTreeMap::new(), BTreeSet::new(), vec![])
}

pub fn unit(x: Value) -> XProcess {
    XProcess::from_parts(BTreeMap::new(), BTreeSet::from([x]), vec![])
}

pub fn skip() -> XProcess {
    unit(Value::tick())
}

pub fn prefix(a: Action, p: &XProcess) -> XProcess {
    XProcess::from_parts(
        BTreeMap::from([(a, p.clone())]),
        BTreeSet::new(),
        vec![ActionSet::EMPTY],
    )
}

fn check_guards(branches: &[(Action, XProcess)]) -> Result<BTreeMap<Action, XProcess>, DenoteError> {
    let mut children = BTreeMap::new();
    for (a, p) in branches {
        if children.insert(*a, p.clone()).is_some() {
            return Err(DenoteError::DuplicateGuard(a.index()));
        }
    }
    Ok(children)
}

pub fn det_choice(branches: &[(Action, XProcess)]) -> Result<XProcess, DenoteError> {
    let children = check_guards(branches)?;
    Ok(XProcess::from_parts(children, BTreeSet::new(), vec![ActionSet::EMPTY]))
}

pub fn det_choice_omega(branches: &[(Action, XProcess)]) -> Result<XProcess, DenoteError> {
    let children = check_guards(branches)?;
    Ok(XProcess::from_parts(children, BTreeSet::new(), vec![]))
}

// `{W ⊆ fut_new | W ∩ fut_old ⊆ m}` has the single maximal element below.
fn lift(m: ActionSet, fut_old: ActionSet, fut_new: ActionSet) -> ActionSet {
    m.union(fut_new.minus(fut_old))
}

fn merge_children(
    p: &BTreeMap<Action, XProcess>,
    q: &BTreeMap<Action, XProcess>,
) -> BTreeMap<Action, XProcess> {
    let mut out = p.clone();
    for (a, c) in q {
        let merged = match out.get(a) {
            Some(d) => intern_choice(d, c),
            None => c.clone(),
        };
        out.insert(*a, merged);
    }
    out
}

pub fn intern_choice(p: &XProcess, q: &XProcess) -> XProcess {
    if p == q {
        return p.clone();
    }
    let children = merge_children(p.children(), q.children());
    let fut: ActionSet = children.keys().copied().collect();
    let values = p.values().union(q.values()).cloned().collect();
    let refusals = p
        .refusals()
        .iter()
        .map(|m| lift(*m, p.fut(), fut))
        .chain(q.refusals().iter().map(|n| lift(*n, q.fut(), fut)))
        .collect();
    XProcess::from_parts(children, values, refusals)
}

/// Internal choice over a nonempty list; `None` for an empty one.
pub fn intern_choice_all<'a>(ps: impl IntoIterator<Item = &'a XProcess>) -> Option<XProcess> {
    ps.into_iter().fold(None, |acc, p| match acc {
        None => Some(p.clone()),
        Some(q) => Some(intern_choice(&q, p)),
    })
}

pub fn extern_choice(p: &XProcess, q: &XProcess) -> XProcess {
    let children = merge_children(p.children(), q.children());
    let fut: ActionSet = children.keys().copied().collect();
    let values = p.values().union(q.values()).cloned().collect();
    let mut refusals = Vec::new();
    for m in p.refusals() {
        for n in q.refusals() {
            refusals.push(lift(*m, p.fut(), fut).intersection(lift(*n, q.fut(), fut)));
        }
    }
    XProcess::from_parts(children, values, refusals)
}

pub fn relabel(f: &RelabelFn, p: &XProcess) -> XProcess {
    let mut groups: BTreeMap<Action, Vec<&XProcess>> = BTreeMap::new();
    for (a, c) in p.children() {
        groups.entry(f.apply(*a)).or_default().push(c);
    }
    let children: BTreeMap<Action, XProcess> = groups
        .into_iter()
        .map(|(b, cs)| {
            let merged = intern_choice_all(cs).expect("group is nonempty");
            (b, relabel(f, &merged))
        })
        .collect();
    let fut_old = p.fut();
    let fut_new: ActionSet = children.keys().copied().collect();
    let refusals = p
        .refusals()
        .iter()
        .map(|m| {
            fut_new
                .iter()
                .filter(|b| f.preimage_within(ActionSet::singleton(*b), fut_old).is_subset(*m))
                .collect()
        })
        .collect();
    XProcess::from_parts(children, p.values().clone(), refusals)
}

#[derive(Default)]
struct HideBuilder {
    children: BTreeMap<Action, HideBuilder>,
    values: BTreeSet<Value>,
    // (futures in the hidden process, maximal refusal there)
    pending: Vec<(ActionSet, ActionSet)>,
}

impl HideBuilder {
    fn absorb(&mut self, a: Action, p: &XProcess) {
        self.values.extend(p.values().iter().cloned());
        let fut = p.fut();
        for m in p.refusals() {
            if !fut.contains(a) || m.contains(a) {
                self.pending.push((fut, *m));
            }
        }
        for (b, c) in p.children() {
            if *b == a {
                self.absorb(a, c);
            } else {
                self.children.entry(*b).or_default().absorb(a, c);
            }
        }
    }

    fn freeze(self) -> XProcess {
        let children: BTreeMap<Action, XProcess> = self
            .children
            .into_iter()
            .map(|(b, h)| (b, h.freeze()))
            .collect();
        let fut: ActionSet = children.keys().copied().collect();
        let refusals = self
            .pending
            .into_iter()
            .map(|(fut_p, m)| fut.iter().filter(|b| !fut_p.contains(*b) || m.contains(*b)).collect())
            .collect();
        XProcess::from_parts(children, self.values, refusals)
    }
}

pub fn conceal(a: Action, p: &XProcess) -> XProcess {
    let mut root = HideBuilder::default();
    root.absorb(a, p);
    root.freeze()
}

fn pair(x: &Value, y: &Value) -> Value {
    Value::pair(x.clone(), y.clone())
}

fn pair_values(p: &XProcess, q: &XProcess) -> BTreeSet<Value> {
    let mut out = BTreeSet::new();
    for x in p.values() {
        for y in q.values() {
            out.insert(pair(x, y));
        }
    }
    out
}

type Memo = HashMap<(usize, usize), XProcess>;

fn par_memo(p: &XProcess, q: &XProcess, memo: &mut Memo) -> XProcess {
    let key = (p.ptr(), q.ptr());
    if let Some(r) = memo.get(&key) {
        return r.clone();
    }
    let mut children = BTreeMap::new();
    for (a, c) in p.children() {
        if let Some(d) = q.child(*a) {
            children.insert(*a, par_memo(c, d, memo));
        }
    }
    let common = p.fut().intersection(q.fut());
    let mut refusals = Vec::new();
    for m in p.refusals() {
        for n in q.refusals() {
            refusals.push(m.union(*n).intersection(common));
        }
    }
    let r = XProcess::from_parts(children, pair_values(p, q), refusals);
    memo.insert(key, r.clone());
    r
}

/// Synchronous parallel composition; values are paired.
pub fn parallel(p: &XProcess, q: &XProcess) -> XProcess {
    par_memo(p, q, &mut Memo::new())
}

fn inter_memo(p: &XProcess, q: &XProcess, memo: &mut Memo) -> XProcess {
    let key = (p.ptr(), q.ptr());
    if let Some(r) = memo.get(&key) {
        return r.clone();
    }
    let mut children: BTreeMap<Action, XProcess> = BTreeMap::new();
    for (a, c) in p.children() {
        children.insert(*a, inter_memo(c, q, memo));
    }
    for (b, d) in q.children() {
        let r = inter_memo(p, d, memo);
        let merged = match children.get(b) {
            Some(e) => intern_choice(e, &r),
            None => r,
        };
        children.insert(*b, merged);
    }
    let fut: ActionSet = children.keys().copied().collect();
    let mut refusals = Vec::new();
    for m in p.refusals() {
        for n in q.refusals() {
            refusals.push(lift(*m, p.fut(), fut).intersection(lift(*n, q.fut(), fut)));
        }
    }
    let r = XProcess::from_parts(children, pair_values(p, q), refusals);
    memo.insert(key, r.clone());
    r
}

pub fn interleave(p: &XProcess, q: &XProcess) -> XProcess {
    inter_memo(p, q, &mut Memo::new())
}

/// Interleavings whose first action comes from `p`.
pub fn interleave_left(p: &XProcess, q: &XProcess) -> XProcess {
    let mut memo = Memo::new();
    let children = p
        .children()
        .iter()
        .map(|(a, c)| (*a, inter_memo(c, q, &mut memo)))
        .collect();
    XProcess::from_parts(children, pair_values(p, q), p.refusals().to_vec())
}

/// Interleavings whose first action comes from `q`; values stay `(x,y)`.
pub fn interleave_right(p: &XProcess, q: &XProcess) -> XProcess {
    swap_values(&interleave_left(q, p))
}

pub fn swap_values(p: &XProcess) -> XProcess {
    p.map_values(&|v: &Value| v.swap().unwrap_or_else(|| v.clone()))
}

/// `P ; Q` on `{✓}`-processes.
pub fn seq(p: &XProcess, q: &XProcess) -> Result<XProcess, DenoteError> {
    if let Some(x) = p.all_values().into_iter().find(|x| !x.is_tick()) {
        return Err(DenoteError::NotTick(x));
    }
    Ok(freealgebra::kleisli(&|_: &Value| Some(q.clone()), p).expect("every value is ✓"))
}

/// Identifies the result `(✓,✓)` of a parallel composition with `✓`.
pub fn merge_ticks(p: XProcess) -> XProcess {
    let tt = Value::pair(Value::tick(), Value::tick());
    if p.all_values().contains(&tt) {
        p.map_values(&|v: &Value| if *v == tt { Value::tick() } else { v.clone() })
    } else {
        p
    }
}

/// Denotes a term, resolving value constants through `resolve`.
pub fn denote_with(
    t: &ProcTerm,
    resolve: &impl Fn(&Value) -> Result<XProcess, DenoteError>,
) -> Result<XProcess, DenoteError> {
    use ProcTerm::*;
    let go = |u: &ProcTerm| denote_with(u, resolve);
    Ok(match t {
        Stop => stop(),
        Omega => omega(),
        Skip => skip(),
        ValueConst(v) => resolve(v)?,
        Prefix(a, u) => prefix(*a, &go(u)?),
        IntChoice(u, v) => intern_choice(&go(u)?, &go(v)?),
        ExtChoice(u, v) => extern_choice(&go(u)?, &go(v)?),
        DetChoice(bs) => {
            let branches = bs.iter().map(|(a, u)| Ok((*a, go(u)?))).collect::<Result<Vec<_>, _>>()?;
            det_choice(&branches)?
        }
        DetChoiceOmega(bs) => {
            let branches = bs.iter().map(|(a, u)| Ok((*a, go(u)?))).collect::<Result<Vec<_>, _>>()?;
            det_choice_omega(&branches)?
        }
        Relabel(f, u) => relabel(f, &go(u)?),
        Conceal(a, u) => conceal(*a, &go(u)?),
        Par(u, v) => merge_ticks(parallel(&go(u)?, &go(v)?)),
        Interleave(u, v) => merge_ticks(interleave(&go(u)?, &go(v)?)),
        InterleaveL(u, v) => merge_ticks(interleave_left(&go(u)?, &go(v)?)),
        InterleaveR(u, v) => merge_ticks(interleave_right(&go(u)?, &go(v)?)),
        Seq(u, v) => seq(&go(u)?, &go(v)?)?,
    })
}

pub fn denote(t: &ProcTerm, env: &ValueEnv) -> Result<XProcess, DenoteError> {
    denote_with(t, &|v: &Value| {
        env.lookup(v)
            .map(unit)
            .ok_or_else(|| DenoteError::Unbound(v.clone()))
    })
}

/// Denotes a term whose value constants are metavariables bound to processes.
pub fn denote_open(
    t: &ProcTerm,
    assignment: &BTreeMap<Value, XProcess>,
) -> Result<XProcess, DenoteError> {
    denote_with(t, &|v: &Value| {
        assignment
            .get(v)
            .cloned()
            .ok_or_else(|| DenoteError::Unbound(v.clone()))
    })
}
