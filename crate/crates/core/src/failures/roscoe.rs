//! Explicit stable-failures pairs over `A ∪ {✓}` and the bijection with
//! `{✓}`-processes.
//!
//! The operators here work on explicit sets and are independent of the trie
//! representation, which makes them useful as a cross-check. Synchronous
//! parallel and the interleavings only combine refusals that contain `✓`
//! and then regenerate the termination failures: the usual distributed
//! termination rule lets `SKIP || a -> STOP` refuse everything, while on
//! `{✓}`-processes the same composition diverges.

use std::collections::BTreeSet;

use super::{close, FailuresError, RawTrace, XProcess};
use crate::terms::{Action, ActionSet, Alphabet, ProcTerm, RelabelFn, Value};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Event {
    Act(Action),
    Tick,
}

/// A refusal set over `A ∪ {✓}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TickSet {
    pub acts: ActionSet,
    pub tick: bool,
}

impl TickSet {
    pub fn new(acts: ActionSet, tick: bool) -> TickSet {
        TickSet { acts, tick }
    }

    fn contains(self, e: Event) -> bool {
        match e {
            Event::Act(a) => self.acts.contains(a),
            Event::Tick => self.tick,
        }
    }

    fn subsets(self) -> impl Iterator<Item = TickSet> {
        let ticks: &[bool] = if self.tick { &[false, true] } else { &[false] };
        self.acts
            .subsets()
            .flat_map(move |s| ticks.iter().map(move |&t| TickSet::new(s, t)))
    }
}

pub type RTrace = Vec<Event>;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RoscoeSF {
    pub traces: BTreeSet<RTrace>,
    pub failures: BTreeSet<(RTrace, TickSet)>,
}

fn all_tick_sets(alphabet: &Alphabet) -> impl Iterator<Item = TickSet> {
    TickSet::new(alphabet.all(), true).subsets()
}

fn split_tick(s: &RTrace) -> Result<(Trace, bool), FailuresError> {
    let mut w = Vec::new();
    for (i, e) in s.iter().enumerate() {
        match e {
            Event::Act(a) => w.push(*a),
            Event::Tick if i + 1 == s.len() => return Ok((w, true)),
            Event::Tick => {
                return Err(FailuresError::Malformed("✓ before the end of a trace".into()))
            }
        }
    }
    Ok((w, false))
}

use super::Trace;

fn lift(w: &[Action]) -> RTrace {
    w.iter().map(|a| Event::Act(*a)).collect()
}

/// `θ(T,F) = (T, {(w,W) | w ∈ A*, (w, W ∪ {✓}) ∈ F})`.
pub fn theta(s: &RoscoeSF) -> Result<XProcess, FailuresError> {
    let mut raw = Vec::new();
    for t in &s.traces {
        let (w, ticked) = split_tick(t)?;
        raw.push(if ticked {
            RawTrace::XTrace(w, Value::tick())
        } else {
            RawTrace::Trace(w)
        });
    }
    let mut fails = Vec::new();
    for (t, x) in &s.failures {
        let (w, ticked) = split_tick(t)?;
        if !ticked && x.tick {
            fails.push((w, x.acts));
        }
    }
    Ok(close(raw, fails))
}

/// The inverse of [`theta`]; `p` must only return `✓`.
pub fn theta_inv(p: &XProcess, alphabet: &Alphabet) -> Result<RoscoeSF, FailuresError> {
    let mut out = RoscoeSF::default();
    for w in p.traces() {
        out.traces.insert(lift(&w));
    }
    for (w, x) in p.xtraces() {
        if !x.is_tick() {
            return Err(FailuresError::Malformed(format!("value {x} is not ✓")));
        }
        let mut t = lift(&w);
        for s in alphabet.all().subsets() {
            out.failures.insert((t.clone(), TickSet::new(s, false)));
        }
        t.push(Event::Tick);
        for x in all_tick_sets(alphabet) {
            out.failures.insert((t.clone(), x));
        }
        out.traces.insert(t);
    }
    for (w, s) in p.expand_failures(alphabet) {
        let t = lift(&w);
        out.failures.insert((t.clone(), TickSet::new(s, false)));
        out.failures.insert((t, TickSet::new(s, true)));
    }
    Ok(out)
}

impl RoscoeSF {
    fn has(&self, t: &RTrace, x: TickSet) -> bool {
        self.failures.contains(&(t.clone(), x))
    }

    fn tick_traces(&self) -> impl Iterator<Item = RTrace> + '_ {
        self.traces
            .iter()
            .filter(|t| t.last() == Some(&Event::Tick))
            .map(|t| t[..t.len() - 1].to_vec())
    }

    fn plain_traces(&self) -> impl Iterator<Item = &RTrace> {
        self.traces.iter().filter(|t| t.last() != Some(&Event::Tick))
    }

    /// Adds the failures forced by possible termination.
    fn add_termination(&mut self, alphabet: &Alphabet) {
        let ticked: Vec<RTrace> = self.tick_traces().collect();
        for w in ticked {
            for s in alphabet.all().subsets() {
                self.failures.insert((w.clone(), TickSet::new(s, false)));
            }
            let mut t = w;
            t.push(Event::Tick);
            for x in all_tick_sets(alphabet) {
                self.failures.insert((t.clone(), x));
            }
        }
    }

    fn add_down_closed(&mut self, t: RTrace, x: TickSet) {
        for y in x.subsets() {
            self.failures.insert((t.clone(), y));
        }
    }
}

pub fn stop(alphabet: &Alphabet) -> RoscoeSF {
    let mut out = RoscoeSF::default();
    out.traces.insert(vec![]);
    for x in all_tick_sets(alphabet) {
        out.failures.insert((vec![], x));
    }
    out
}

pub fn skip(alphabet: &Alphabet) -> RoscoeSF {
    let mut out = RoscoeSF::default();
    out.traces.insert(vec![]);
    out.traces.insert(vec![Event::Tick]);
    out.add_termination(alphabet);
    out
}

pub fn div() -> RoscoeSF {
    let mut out = RoscoeSF::default();
    out.traces.insert(vec![]);
    out
}

pub fn prefix(alphabet: &Alphabet, a: Action, p: &RoscoeSF) -> RoscoeSF {
    let mut out = RoscoeSF::default();
    out.traces.insert(vec![]);
    for t in &p.traces {
        let mut s = vec![Event::Act(a)];
        s.extend(t);
        out.traces.insert(s);
    }
    for x in all_tick_sets(alphabet) {
        if !x.acts.contains(a) {
            out.failures.insert((vec![], x));
        }
    }
    for (t, x) in &p.failures {
        let mut s = vec![Event::Act(a)];
        s.extend(t);
        out.failures.insert((s, *x));
    }
    out
}

pub fn int_choice(p: &RoscoeSF, q: &RoscoeSF) -> RoscoeSF {
    RoscoeSF {
        traces: p.traces.union(&q.traces).cloned().collect(),
        failures: p.failures.union(&q.failures).cloned().collect(),
    }
}

pub fn ext_choice(alphabet: &Alphabet, p: &RoscoeSF, q: &RoscoeSF) -> RoscoeSF {
    let mut out = RoscoeSF {
        traces: p.traces.union(&q.traces).cloned().collect(),
        failures: BTreeSet::new(),
    };
    for (t, x) in p.failures.iter().chain(&q.failures) {
        if !t.is_empty() || (p.has(t, *x) && q.has(t, *x)) {
            out.failures.insert((t.clone(), *x));
        }
    }
    if out.traces.contains(&vec![Event::Tick]) {
        for s in alphabet.all().subsets() {
            out.failures.insert((vec![], TickSet::new(s, false)));
        }
    }
    out
}

pub fn det_choice(alphabet: &Alphabet, branches: &[(Action, RoscoeSF)]) -> RoscoeSF {
    branches.iter().fold(stop(alphabet), |acc, (a, p)| {
        ext_choice(alphabet, &acc, &prefix(alphabet, *a, p))
    })
}

pub fn det_choice_omega(alphabet: &Alphabet, branches: &[(Action, RoscoeSF)]) -> RoscoeSF {
    branches.iter().fold(div(), |acc, (a, p)| {
        ext_choice(alphabet, &acc, &prefix(alphabet, *a, p))
    })
}

fn relabel_event(f: &RelabelFn, e: Event) -> Event {
    match e {
        Event::Act(a) => Event::Act(f.apply(a)),
        Event::Tick => Event::Tick,
    }
}

pub fn relabel(alphabet: &Alphabet, f: &RelabelFn, p: &RoscoeSF) -> RoscoeSF {
    let map = |t: &RTrace| -> RTrace { t.iter().map(|e| relabel_event(f, *e)).collect() };
    let mut out = RoscoeSF {
        traces: p.traces.iter().map(map).collect(),
        failures: BTreeSet::new(),
    };
    for t in &p.traces {
        for x in all_tick_sets(alphabet) {
            let pre = TickSet::new(
                alphabet.all().iter().filter(|a| x.acts.contains(f.apply(*a))).collect(),
                x.tick,
            );
            if p.has(t, pre) {
                out.failures.insert((map(t), x));
            }
        }
    }
    out
}

pub fn hide(a: Action, p: &RoscoeSF) -> RoscoeSF {
    let strip = |t: &RTrace| -> RTrace { t.iter().copied().filter(|e| *e != Event::Act(a)).collect() };
    let mut out = RoscoeSF {
        traces: p.traces.iter().map(strip).collect(),
        failures: BTreeSet::new(),
    };
    for (t, x) in &p.failures {
        // both X and X - {a} have union X with {a}
        if x.contains(Event::Act(a)) {
            out.failures.insert((strip(t), *x));
            out.failures.insert((strip(t), TickSet::new(x.acts.without(a), x.tick)));
        }
    }
    out
}

pub fn seq(p: &RoscoeSF, q: &RoscoeSF) -> RoscoeSF {
    let mut out = RoscoeSF::default();
    for t in p.plain_traces() {
        out.traces.insert(t.clone());
    }
    let ticked: Vec<RTrace> = p.tick_traces().collect();
    for s in &ticked {
        for t in &q.traces {
            let mut st = s.clone();
            st.extend(t);
            out.traces.insert(st);
        }
        for (t, x) in &q.failures {
            let mut st = s.clone();
            st.extend(t);
            out.failures.insert((st, *x));
        }
    }
    for (t, x) in &p.failures {
        if x.tick && t.last() != Some(&Event::Tick) {
            out.failures.insert((t.clone(), *x));
            out.failures.insert((t.clone(), TickSet::new(x.acts, false)));
        }
    }
    out
}

pub fn par(alphabet: &Alphabet, p: &RoscoeSF, q: &RoscoeSF) -> RoscoeSF {
    let mut out = RoscoeSF {
        traces: p.traces.intersection(&q.traces).cloned().collect(),
        failures: BTreeSet::new(),
    };
    for (t, x) in &p.failures {
        if !x.tick || t.last() == Some(&Event::Tick) {
            continue;
        }
        for (u, y) in q.failures.range((t.clone(), TickSet::new(ActionSet::EMPTY, false))..) {
            if u != t {
                break;
            }
            if y.tick {
                out.add_down_closed(t.clone(), TickSet::new(x.acts.union(y.acts), true));
            }
        }
    }
    out.add_termination(alphabet);
    out
}

/// All interleavings of `u` and `v`; with `first` set, only those starting
/// with a letter of `u`.
fn interleavings(u: &[Event], v: &[Event], first: bool) -> Vec<RTrace> {
    fn go(u: &[Event], v: &[Event], prefix: &mut RTrace, out: &mut Vec<RTrace>) {
        if u.is_empty() && v.is_empty() {
            out.push(prefix.clone());
            return;
        }
        if let Some((h, rest)) = u.split_first() {
            prefix.push(*h);
            go(rest, v, prefix, out);
            prefix.pop();
        }
        if let Some((h, rest)) = v.split_first() {
            prefix.push(*h);
            go(u, rest, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if first {
        if let Some((h, rest)) = u.split_first() {
            let mut prefix = vec![*h];
            go(rest, v, &mut prefix, &mut out);
        }
    } else {
        go(u, v, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Both,
    Left,
}

fn interleave_mode(alphabet: &Alphabet, p: &RoscoeSF, q: &RoscoeSF, mode: Mode) -> RoscoeSF {
    let left = mode == Mode::Left;
    let mut out = RoscoeSF::default();
    out.traces.insert(vec![]);
    for u in p.plain_traces() {
        for v in q.plain_traces() {
            out.traces.extend(interleavings(u, v, left));
        }
    }
    let pt: Vec<RTrace> = p.tick_traces().collect();
    let qt: Vec<RTrace> = q.tick_traces().collect();
    for u in &pt {
        for v in &qt {
            let mut ws = interleavings(u, v, left);
            if left && u.is_empty() && v.is_empty() {
                ws.push(vec![]);
            }
            for mut w in ws {
                w.push(Event::Tick);
                out.traces.insert(w);
            }
        }
    }
    for (u, x) in &p.failures {
        if !x.tick || u.last() == Some(&Event::Tick) {
            continue;
        }
        if left && u.is_empty() {
            out.add_down_closed(vec![], *x);
        }
        for (v, y) in &q.failures {
            if y != x || v.last() == Some(&Event::Tick) {
                continue;
            }
            for w in interleavings(u, v, left) {
                out.add_down_closed(w, *x);
            }
        }
    }
    out.add_termination(alphabet);
    out
}

pub fn interleave(alphabet: &Alphabet, p: &RoscoeSF, q: &RoscoeSF) -> RoscoeSF {
    interleave_mode(alphabet, p, q, Mode::Both)
}

pub fn interleave_left(alphabet: &Alphabet, p: &RoscoeSF, q: &RoscoeSF) -> RoscoeSF {
    interleave_mode(alphabet, p, q, Mode::Left)
}

pub fn interleave_right(alphabet: &Alphabet, p: &RoscoeSF, q: &RoscoeSF) -> RoscoeSF {
    interleave_mode(alphabet, q, p, Mode::Left)
}

/// Synchronous parallel with the usual distributed-termination failures,
/// `{(s, X ∪ Y) | (s,X) ∈ F_P, (s,Y) ∈ F_Q}`, kept to show where it
/// departs from the `{✓}`-process operator.
pub fn par_distributed(p: &RoscoeSF, q: &RoscoeSF) -> RoscoeSF {
    let mut out = RoscoeSF {
        traces: p.traces.intersection(&q.traces).cloned().collect(),
        failures: BTreeSet::new(),
    };
    for (t, x) in &p.failures {
        for (u, y) in &q.failures {
            if u == t {
                out.failures.insert((
                    t.clone(),
                    TickSet::new(x.acts.union(y.acts), x.tick || y.tick),
                ));
            }
        }
    }
    out
}

/// Denotes a term directly on explicit sets. `✓` is the only value constant
/// allowed.
pub fn denote_roscoe(t: &ProcTerm, alphabet: &Alphabet) -> Result<RoscoeSF, FailuresError> {
    use ProcTerm::*;
    let go = |u: &ProcTerm| denote_roscoe(u, alphabet);
    let branches = |bs: &crate::terms::Branches| {
        bs.iter()
            .map(|(a, u)| Ok((*a, go(u)?)))
            .collect::<Result<Vec<_>, FailuresError>>()
    };
    Ok(match t {
        Stop => stop(alphabet),
        Omega => div(),
        Skip => skip(alphabet),
        ValueConst(v) if v.is_tick() => skip(alphabet),
        ValueConst(v) => return Err(FailuresError::Malformed(format!("value {v} is not ✓"))),
        Prefix(a, u) => prefix(alphabet, *a, &go(u)?),
        IntChoice(u, v) => int_choice(&go(u)?, &go(v)?),
        ExtChoice(u, v) => ext_choice(alphabet, &go(u)?, &go(v)?),
        DetChoice(bs) => det_choice(alphabet, &branches(bs)?),
        DetChoiceOmega(bs) => det_choice_omega(alphabet, &branches(bs)?),
        Relabel(f, u) => relabel(alphabet, f, &go(u)?),
        Conceal(a, u) => hide(*a, &go(u)?),
        Par(u, v) => par(alphabet, &go(u)?, &go(v)?),
        Interleave(u, v) => interleave(alphabet, &go(u)?, &go(v)?),
        InterleaveL(u, v) => interleave_left(alphabet, &go(u)?, &go(v)?),
        InterleaveR(u, v) => interleave_right(alphabet, &go(u)?, &go(v)?),
        Seq(u, v) => seq(&go(u)?, &go(v)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators;

    fn ab() -> Alphabet {
        Alphabet::new(&["a", "b"]).unwrap()
    }

    #[test]
    fn skip_corresponds_to_unit_tick() {
        let p = theta(&skip(&ab())).unwrap();
        assert_eq!(p, operators::skip());
        assert_eq!(theta_inv(&operators::skip(), &ab()).unwrap(), skip(&ab()));
    }

    #[test]
    fn unit_tick_inverse_has_termination_blocks() {
        let s = theta_inv(&operators::skip(), &ab()).unwrap();
        let at_eps = s.failures.iter().filter(|(t, _)| t.is_empty()).count();
        let after_tick = s.failures.iter().filter(|(t, _)| *t == vec![Event::Tick]).count();
        assert_eq!(at_eps, 4);
        assert_eq!(after_tick, 8);
    }

    #[test]
    fn omega_and_stop_inverses() {
        let s = theta_inv(&operators::omega(), &ab()).unwrap();
        assert_eq!(s, div());
        let s = theta_inv(&operators::stop(), &ab()).unwrap();
        assert_eq!(s, stop(&ab()));
        assert_eq!(s.failures.len(), 8);
    }

    #[test]
    fn malformed_tick_is_rejected() {
        let mut s = div();
        s.traces.insert(vec![Event::Tick, Event::Act(Action::new(0))]);
        assert!(theta(&s).is_err());
    }

    #[test]
    fn distributed_termination_differs_from_tick_processes() {
        let alpha = ab();
        let a = Action::new(0);
        let lhs = par_distributed(&skip(&alpha), &prefix(&alpha, a, &stop(&alpha)));
        // refuses everything at ε, including ✓: a deadlock
        assert!(lhs.has(&vec![], TickSet::new(alpha.all(), true)));
        assert_eq!(theta(&lhs).unwrap(), operators::stop());
        let direct = operators::parallel(&operators::skip(), &operators::prefix(a, &operators::stop()));
        assert_eq!(direct, operators::omega());
        let adjusted = par(&alpha, &skip(&alpha), &prefix(&alpha, a, &stop(&alpha)));
        assert_eq!(theta(&adjusted).unwrap(), direct);
    }
}
