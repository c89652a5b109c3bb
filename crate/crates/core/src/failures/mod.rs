//! Finitary X-processes: traces, value-terminated traces and failures.
//!
//! A process is stored as a trie over its traces. Each node records the
//! values that can be returned after reaching it and its maximal refusals,
//! each intersected with the node's futures. A node without refusals has no
//! failures at all (it may only diverge there). Expansion back to full
//! failure sets re-adds every action that is not a future.
//!
//! Nodes are kept in canonical form, so structural equality is semantic
//! equality.

pub mod roscoe;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::terms::{Action, ActionSet, Alphabet, Value};

pub type Trace = Vec<Action>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FailuresError {
    #[error("trace {0} is not a trace of the process")]
    TraceNotPresent(String),
    #[error("process mentions action #{0} outside the alphabet")]
    AlphabetMismatch(usize),
    #[error("malformed stable-failures pair: {0}")]
    Malformed(String),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Node {
    children: BTreeMap<Action, XProcess>,
    values: BTreeSet<Value>,
    refusals: Vec<ActionSet>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XProcess(Arc<Node>);

/// Keeps only the maximal sets, sorted and without duplicates.
pub fn maximalize(mut sets: Vec<ActionSet>) -> Vec<ActionSet> {
    sets.sort();
    sets.dedup();
    let snapshot = sets.clone();
    sets.retain(|s| !snapshot.iter().any(|t| t != s && s.is_subset(*t)));
    sets
}

impl XProcess {
    /// Builds a node, canonicalizing its refusals against its futures.
    pub fn from_parts(
        children: BTreeMap<Action, XProcess>,
        values: BTreeSet<Value>,
        refusals: Vec<ActionSet>,
    ) -> XProcess {
        let fut: ActionSet = children.keys().copied().collect();
        let refusals = maximalize(refusals.into_iter().map(|m| m.intersection(fut)).collect());
        XProcess(Arc::new(Node {
            children,
            values,
            refusals,
        }))
    }

    pub fn fut(&self) -> ActionSet {
        self.0.children.keys().copied().collect()
    }

    pub fn child(&self, a: Action) -> Option<&XProcess> {
        self.0.children.get(&a)
    }

    pub fn children(&self) -> &BTreeMap<Action, XProcess> {
        &self.0.children
    }

    pub fn values(&self) -> &BTreeSet<Value> {
        &self.0.values
    }

    /// Maximal refusals at the root, each a subset of `fut()`.
    pub fn refusals(&self) -> &[ActionSet] {
        &self.0.refusals
    }

    pub fn has_failures(&self) -> bool {
        !self.0.refusals.is_empty()
    }

    /// Whether `(ε, w)` is a failure, for any `w` (not only future actions).
    pub fn refuses(&self, w: ActionSet) -> bool {
        let w = w.intersection(self.fut());
        self.0.refusals.iter().any(|m| w.is_subset(*m))
    }

    pub fn after(&self, trace: &[Action]) -> Option<&XProcess> {
        let mut p = self;
        for a in trace {
            p = p.child(*a)?;
        }
        Some(p)
    }

    pub fn fut_at(&self, trace: &[Action]) -> Result<ActionSet, FailuresError> {
        self.after(trace)
            .map(XProcess::fut)
            .ok_or_else(|| FailuresError::TraceNotPresent(format!("{trace:?}")))
    }

    pub(crate) fn ptr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Length of the longest trace.
    pub fn depth(&self) -> usize {
        self.0
            .children
            .values()
            .map(|c| 1 + c.depth())
            .max()
            .unwrap_or(0)
    }

    /// Every action occurring in some trace.
    pub fn actions(&self) -> ActionSet {
        self.0
            .children
            .iter()
            .fold(self.fut(), |acc, (_, c)| acc.union(c.actions()))
    }

    /// Every value occurring in some X-trace.
    pub fn all_values(&self) -> BTreeSet<Value> {
        let mut out = BTreeSet::new();
        self.visit(&mut Vec::new(), &mut |_, p| out.extend(p.values().iter().cloned()));
        out
    }

    fn visit(&self, path: &mut Trace, f: &mut impl FnMut(&Trace, &XProcess)) {
        f(path, self);
        for (a, c) in &self.0.children {
            path.push(*a);
            c.visit(path, f);
            path.pop();
        }
    }

    pub fn traces(&self) -> BTreeSet<Trace> {
        let mut out = BTreeSet::new();
        self.visit(&mut Vec::new(), &mut |w, _| {
            out.insert(w.clone());
        });
        out
    }

    pub fn xtraces(&self) -> BTreeSet<(Trace, Value)> {
        let mut out = BTreeSet::new();
        self.visit(&mut Vec::new(), &mut |w, p| {
            for x in p.values() {
                out.insert((w.clone(), x.clone()));
            }
        });
        out
    }

    pub fn max_refusals(&self) -> BTreeMap<Trace, Vec<ActionSet>> {
        let mut out = BTreeMap::new();
        self.visit(&mut Vec::new(), &mut |w, p| {
            if p.has_failures() {
                out.insert(w.clone(), p.refusals().to_vec());
            }
        });
        out
    }

    /// The full failure set over `alphabet`.
    pub fn expand_failures(&self, alphabet: &Alphabet) -> BTreeSet<(Trace, ActionSet)> {
        let mut out = BTreeSet::new();
        self.visit(&mut Vec::new(), &mut |w, p| {
            if p.has_failures() {
                for s in alphabet.all().subsets() {
                    if p.refuses(s) {
                        out.insert((w.clone(), s));
                    }
                }
            }
        });
        out
    }

    pub fn check_alphabet(&self, alphabet: &Alphabet) -> Result<(), FailuresError> {
        let extra = self.actions().minus(alphabet.all());
        match extra.iter().next() {
            Some(a) => Err(FailuresError::AlphabetMismatch(a.index())),
            None => Ok(()),
        }
    }

    /// The subprocess after `a`: `({w | aw ∈ T}, {(w,W) | (aw,W) ∈ F})`.
    pub fn derivative(&self, a: Action) -> Option<&XProcess> {
        self.child(a)
    }

    /// Applies `f` to every value, merging nodes as needed.
    pub fn map_values(&self, f: &impl Fn(&Value) -> Value) -> XProcess {
        let children = self
            .0
            .children
            .iter()
            .map(|(a, c)| (*a, c.map_values(f)))
            .collect();
        let values = self.0.values.iter().map(f).collect();
        XProcess::from_parts(children, values, self.0.refusals.clone())
    }

    pub fn to_report(&self, alphabet: &Alphabet, expanded: bool) -> ProcessReport {
        let name = |w: &Trace| -> Vec<String> {
            w.iter().map(|a| alphabet.name(*a).to_string()).collect()
        };
        let traces = self.traces().iter().map(name).collect();
        let xtraces = self
            .xtraces()
            .into_iter()
            .map(|(w, x)| XTraceReport {
                trace: name(&w),
                value: x.to_string(),
            })
            .collect();
        let (failures, max_refusals) = if expanded {
            let f = self
                .expand_failures(alphabet)
                .into_iter()
                .map(|(w, s)| FailureReport {
                    trace: name(&w),
                    refusal: alphabet.render_set(s),
                })
                .collect();
            (Some(f), None)
        } else {
            // stored refusals only mention future actions; the others are
            // always refused
            let mut m = Vec::new();
            self.visit(&mut Vec::new(), &mut |w, p| {
                if p.has_failures() {
                    let rest = alphabet.all().minus(p.fut());
                    m.push(MaxRefusalReport {
                        trace: name(w),
                        refusals: p
                            .refusals()
                            .iter()
                            .map(|s| alphabet.render_set(s.union(rest)))
                            .collect(),
                    });
                }
            });
            (None, Some(m))
        };
        ProcessReport {
            schema: SCHEMA,
            traces,
            xtraces,
            failures,
            max_refusals,
        }
    }
}

impl fmt::Debug for XProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (a, c) in &self.0.children {
            m.entry(&a.index(), c);
        }
        if !self.0.values.is_empty() {
            let vs: Vec<String> = self.0.values.iter().map(|v| v.to_string()).collect();
            m.entry(&"values", &vs);
        }
        if !self.0.refusals.is_empty() {
            m.entry(&"refusals", &self.0.refusals);
        }
        m.finish()
    }
}

pub const SCHEMA: &str = "csp-effects/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XTraceReport {
    pub trace: Vec<String>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureReport {
    pub trace: Vec<String>,
    pub refusal: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaxRefusalReport {
    pub trace: Vec<String>,
    pub refusals: Vec<Vec<String>>,
}

/// JSON shape of a process.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProcessReport {
    pub schema: &'static str,
    pub traces: Vec<Vec<String>>,
    pub xtraces: Vec<XTraceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failures: Option<Vec<FailureReport>>,
    #[serde(rename = "maxRefusals", skip_serializing_if = "Option::is_none")]
    pub max_refusals: Option<Vec<MaxRefusalReport>>,
}

/// A raw observation fed to [`close`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum RawTrace {
    Trace(Trace),
    XTrace(Trace, Value),
}

#[derive(Default)]
struct Builder {
    children: BTreeMap<Action, Builder>,
    values: BTreeSet<Value>,
    refusals: Vec<ActionSet>,
}

impl Builder {
    fn at(&mut self, trace: &[Action]) -> &mut Builder {
        let mut b = self;
        for a in trace {
            b = b.children.entry(*a).or_default();
        }
        b
    }

    fn freeze(self) -> XProcess {
        let children = self
            .children
            .into_iter()
            .map(|(a, b)| (a, b.freeze()))
            .collect();
        XProcess::from_parts(children, self.values, self.refusals)
    }
}

/// The smallest process containing the given traces and failures.
///
/// Traces are prefix-closed, failure traces are added as traces, and the
/// failures are closed downwards and under adding non-future actions.
pub fn close(
    raw_traces: impl IntoIterator<Item = RawTrace>,
    raw_failures: impl IntoIterator<Item = (Trace, ActionSet)>,
) -> XProcess {
    let mut root = Builder::default();
    for t in raw_traces {
        match t {
            RawTrace::Trace(w) => {
                root.at(&w);
            }
            RawTrace::XTrace(w, x) => {
                root.at(&w).values.insert(x);
            }
        }
    }
    for (w, s) in raw_failures {
        root.at(&w).refusals.push(s);
    }
    root.freeze()
}

/// Semantic equality. Canonical forms make this structural.
pub fn equal(p: &XProcess, q: &XProcess) -> bool {
    p == q
}

/// Equality by comparing traces, X-traces and expanded failures over an
/// alphabet; the slow path used to cross-check [`equal`].
pub fn equal_expanded(
    alphabet: &Alphabet,
    p: &XProcess,
    q: &XProcess,
) -> Result<bool, FailuresError> {
    p.check_alphabet(alphabet)?;
    q.check_alphabet(alphabet)?;
    Ok(p.traces() == q.traces()
        && p.xtraces() == q.xtraces()
        && p.expand_failures(alphabet) == q.expand_failures(alphabet))
}

/// `p ⊑ q`, that is `p ⊓ q = p`.
pub fn refines(p: &XProcess, q: &XProcess) -> bool {
    crate::operators::intern_choice(p, q) == *p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Action {
        Action::new(0)
    }

    fn b() -> Action {
        Action::new(1)
    }

    fn ab() -> Alphabet {
        Alphabet::new(&["a", "b"]).unwrap()
    }

    #[test]
    fn close_of_nothing_is_omega() {
        let p = close([], []);
        assert_eq!(p.traces(), BTreeSet::from([vec![]]));
        assert!(p.xtraces().is_empty());
        assert!(p.max_refusals().is_empty());
    }

    #[test]
    fn close_adds_non_future_refusals() {
        let p = close([], [(vec![], ActionSet::EMPTY)]);
        let f = p.expand_failures(&ab());
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|(w, _)| w.is_empty()));
    }

    #[test]
    fn close_is_prefix_closed() {
        let p = close([RawTrace::Trace(vec![a(), b()])], []);
        assert_eq!(p.traces(), BTreeSet::from([vec![], vec![a()], vec![a(), b()]]));
        assert!(p.max_refusals().is_empty());
    }

    #[test]
    fn expansion_respects_futures() {
        let p = close([RawTrace::Trace(vec![a()])], [(vec![], ActionSet::EMPTY)]);
        let f = p.expand_failures(&ab());
        let expect = BTreeSet::from([(vec![], ActionSet::EMPTY), (vec![], ActionSet::singleton(b()))]);
        assert_eq!(f, expect);
        let single = Alphabet::new(&["a"]).unwrap();
        assert_eq!(p.expand_failures(&single), BTreeSet::from([(vec![], ActionSet::EMPTY)]));
    }

    #[test]
    fn maximalize_keeps_antichain() {
        let s = |bits| ActionSet::from_bits(bits);
        assert_eq!(maximalize(vec![s(1), s(3), s(4), s(1)]), vec![s(3), s(4)]);
        assert_eq!(maximalize(vec![]), vec![]);
    }

    #[test]
    fn fut_at_missing_trace() {
        let p = close([RawTrace::Trace(vec![a()])], []);
        assert_eq!(p.fut_at(&[]).unwrap(), ActionSet::singleton(a()));
        assert!(p.fut_at(&[b()]).is_err());
    }

    #[test]
    fn alphabet_check() {
        let p = close([RawTrace::Trace(vec![Action::new(2)])], []);
        assert!(p.check_alphabet(&ab()).is_err());
        assert!(equal_expanded(&ab(), &p, &p).is_err());
    }
}
