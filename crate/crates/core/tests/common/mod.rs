//! Explicit-set model of X-processes: traces, X-traces and every failure
//! pair over a fixed alphabet. Each operator follows its set-theoretic
//! definition directly and shares no code with the library.

#![allow(dead_code)]

use std::collections::BTreeSet;

use csp_effects::failures::Trace;
use csp_effects::gen::{Gen, ProcShape};
use csp_effects::terms::{Action, ActionSet, Alphabet, RelabelFn, Value};
use csp_effects::XProcess;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sets {
    pub traces: BTreeSet<Trace>,
    pub xtraces: BTreeSet<(Trace, Value)>,
    pub failures: BTreeSet<(Trace, ActionSet)>,
}

pub fn sets(p: &XProcess, ab: &Alphabet) -> Sets {
    Sets {
        traces: p.traces(),
        xtraces: p.xtraces().into_iter().collect(),
        failures: p.expand_failures(ab),
    }
}

fn cons(a: Action, w: &[Action]) -> Trace {
    let mut out = vec![a];
    out.extend_from_slice(w);
    out
}

fn concat(u: &[Action], v: &[Action]) -> Trace {
    let mut out = u.to_vec();
    out.extend_from_slice(v);
    out
}

pub fn shuffles(u: &[Action], v: &[Action]) -> Vec<Trace> {
    if u.is_empty() {
        return vec![v.to_vec()];
    }
    if v.is_empty() {
        return vec![u.to_vec()];
    }
    let mut out: Vec<Trace> = shuffles(&u[1..], v).into_iter().map(|w| cons(u[0], &w)).collect();
    out.extend(shuffles(u, &v[1..]).into_iter().map(|w| cons(v[0], &w)));
    out
}

/// Interleavings whose first action comes from `u`.
pub fn left_shuffles(u: &[Action], v: &[Action]) -> Vec<Trace> {
    if u.is_empty() {
        return vec![];
    }
    shuffles(&u[1..], v).into_iter().map(|w| cons(u[0], &w)).collect()
}

pub struct Oracle {
    pub ab: Alphabet,
}

impl Oracle {
    pub fn new(ab: &Alphabet) -> Oracle {
        Oracle { ab: ab.clone() }
    }

    fn all_sets(&self) -> Vec<ActionSet> {
        self.ab.all().subsets().collect()
    }

    pub fn stop(&self) -> Sets {
        Sets {
            traces: [vec![]].into(),
            xtraces: BTreeSet::new(),
            failures: self.all_sets().into_iter().map(|w| (vec![], w)).collect(),
        }
    }

    pub fn omega(&self) -> Sets {
        Sets {
            traces: [vec![]].into(),
            xtraces: BTreeSet::new(),
            failures: BTreeSet::new(),
        }
    }

    pub fn eta(&self, x: Value) -> Sets {
        Sets {
            traces: [vec![]].into(),
            xtraces: [(vec![], x)].into(),
            failures: BTreeSet::new(),
        }
    }

    pub fn prefix(&self, a: Action, p: &Sets) -> Sets {
        let mut failures: BTreeSet<_> = self
            .all_sets()
            .into_iter()
            .filter(|w| !w.contains(a))
            .map(|w| (vec![], w))
            .collect();
        failures.extend(p.failures.iter().map(|(w, s)| (cons(a, w), *s)));
        let mut traces: BTreeSet<Trace> = p.traces.iter().map(|w| cons(a, w)).collect();
        traces.insert(vec![]);
        Sets {
            traces,
            xtraces: p.xtraces.iter().map(|(w, x)| (cons(a, w), x.clone())).collect(),
            failures,
        }
    }

    pub fn int(&self, p: &Sets, q: &Sets) -> Sets {
        Sets {
            traces: p.traces.union(&q.traces).cloned().collect(),
            xtraces: p.xtraces.union(&q.xtraces).cloned().collect(),
            failures: p.failures.union(&q.failures).cloned().collect(),
        }
    }

    pub fn ext(&self, p: &Sets, q: &Sets) -> Sets {
        let failures = p
            .failures
            .iter()
            .chain(&q.failures)
            .filter(|(w, s)| {
                !w.is_empty() || (p.failures.contains(&(vec![], *s)) && q.failures.contains(&(vec![], *s)))
            })
            .cloned()
            .collect();
        Sets {
            failures,
            ..self.int(p, q)
        }
    }

    pub fn relabel(&self, f: &RelabelFn, p: &Sets) -> Sets {
        let map = |w: &Trace| -> Trace { w.iter().map(|a| f.apply(*a)).collect() };
        let mut failures = BTreeSet::new();
        for w in &p.traces {
            for s in self.all_sets() {
                let pre: ActionSet = self.ab.actions().filter(|a| s.contains(f.apply(*a))).collect();
                if p.failures.contains(&(w.clone(), pre)) {
                    failures.insert((map(w), s));
                }
            }
        }
        Sets {
            traces: p.traces.iter().map(map).collect(),
            xtraces: p.xtraces.iter().map(|(w, x)| (map(w), x.clone())).collect(),
            failures,
        }
    }

    pub fn conceal(&self, a: Action, p: &Sets) -> Sets {
        let strip = |w: &Trace| -> Trace { w.iter().copied().filter(|b| *b != a).collect() };
        let mut failures = BTreeSet::new();
        for (w, s) in &p.failures {
            if s.contains(a) {
                failures.insert((strip(w), *s));
                failures.insert((strip(w), s.without(a)));
            }
        }
        Sets {
            traces: p.traces.iter().map(strip).collect(),
            xtraces: p.xtraces.iter().map(|(w, x)| (strip(w), x.clone())).collect(),
            failures,
        }
    }

    pub fn par(&self, p: &Sets, q: &Sets) -> Sets {
        let mut xtraces = BTreeSet::new();
        for (w, x) in &p.xtraces {
            for (v, y) in &q.xtraces {
                if w == v {
                    xtraces.insert((w.clone(), Value::pair(x.clone(), y.clone())));
                }
            }
        }
        let mut failures = BTreeSet::new();
        for (w, s) in &p.failures {
            for (v, t) in &q.failures {
                if w == v {
                    failures.insert((w.clone(), s.union(*t)));
                }
            }
        }
        Sets {
            traces: p.traces.intersection(&q.traces).cloned().collect(),
            xtraces,
            failures,
        }
    }

    fn interleave_with(&self, p: &Sets, q: &Sets, mix: fn(&[Action], &[Action]) -> Vec<Trace>) -> Sets {
        let mut out = Sets {
            traces: BTreeSet::new(),
            xtraces: BTreeSet::new(),
            failures: BTreeSet::new(),
        };
        for u in &p.traces {
            for v in &q.traces {
                out.traces.extend(mix(u, v));
            }
        }
        for (u, x) in &p.xtraces {
            for (v, y) in &q.xtraces {
                for w in mix(u, v) {
                    out.xtraces.insert((w, Value::pair(x.clone(), y.clone())));
                }
            }
        }
        for (u, s) in &p.failures {
            for (v, t) in &q.failures {
                if s == t {
                    for w in mix(u, v) {
                        out.failures.insert((w, *s));
                    }
                }
            }
        }
        out
    }

    pub fn interleave(&self, p: &Sets, q: &Sets) -> Sets {
        self.interleave_with(p, q, shuffles)
    }

    pub fn interleave_left(&self, p: &Sets, q: &Sets) -> Sets {
        let mut out = self.interleave_with(p, q, left_shuffles);
        out.traces.insert(vec![]);
        for (u, x) in &p.xtraces {
            for (v, y) in &q.xtraces {
                if u.is_empty() && v.is_empty() {
                    out.xtraces.insert((vec![], Value::pair(x.clone(), y.clone())));
                }
            }
        }
        out.failures
            .extend(p.failures.iter().filter(|(w, _)| w.is_empty()).cloned());
        out
    }

    pub fn interleave_right(&self, p: &Sets, q: &Sets) -> Sets {
        let swapped = self.interleave_left(q, p);
        Sets {
            xtraces: swapped
                .xtraces
                .into_iter()
                .map(|(w, x)| (w, x.swap().expect("pair values")))
                .collect(),
            ..swapped
        }
    }

    /// `g†(p)`; `g` must be defined on every value of `p`.
    pub fn kleisli(&self, g: &dyn Fn(&Value) -> Sets, p: &Sets) -> Sets {
        let mut out = Sets {
            traces: p.traces.clone(),
            xtraces: BTreeSet::new(),
            failures: p.failures.clone(),
        };
        for (w, x) in &p.xtraces {
            let gx = g(x);
            out.traces.extend(gx.traces.iter().map(|v| concat(w, v)));
            out.xtraces.extend(gx.xtraces.iter().map(|(v, y)| (concat(w, v), y.clone())));
            out.failures.extend(gx.failures.iter().map(|(v, s)| (concat(w, v), *s)));
        }
        out
    }

    pub fn seq(&self, p: &Sets, q: &Sets) -> Sets {
        self.kleisli(&|_| q.clone(), p)
    }
}

/// A random process over the first `actions` actions with values among
/// `values`.
pub fn random_process(seed: u64, actions: usize, depth: usize, values: &[Value]) -> XProcess {
    Gen::new(seed).process(&ProcShape::new(actions, depth).with_values(values))
}

pub fn alphabet(n: usize) -> Alphabet {
    Alphabet::new(&["a", "b", "c"][..n]).unwrap()
}

pub fn atoms(names: &[&str]) -> Vec<Value> {
    names.iter().map(|n| Value::atom(n)).collect()
}
