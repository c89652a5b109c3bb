//! Process terms over a declared finite alphabet.
//!
//! Actions are small indices into an [`Alphabet`]; sets of actions are
//! bitmasks, so an alphabet holds at most [`MAX_ACTIONS`] names.

mod parse;
mod print;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

pub use parse::{infer_alphabet, parse_file, parse_process, ParseError};
pub use print::print_process;

pub(crate) use parse::{
    lookup_action, parse_alphabet_header, parse_relabel_pairs, Cursor, Tok,
};

/// Largest alphabet supported by the bitmask representation of action sets.
pub const MAX_ACTIONS: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Action(u8);

impl Action {
    pub fn new(index: usize) -> Action {
        assert!(index < MAX_ACTIONS, "action index {index} out of range");
        Action(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite set of actions, stored as a bitmask over alphabet indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ActionSet(u64);

impl ActionSet {
    pub const EMPTY: ActionSet = ActionSet(0);

    pub fn from_bits(bits: u64) -> ActionSet {
        ActionSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(a: Action) -> ActionSet {
        ActionSet(1 << a.0)
    }

    /// The first `n` actions of an alphabet.
    pub fn first(n: usize) -> ActionSet {
        if n >= 64 {
            ActionSet(u64::MAX)
        } else {
            ActionSet((1u64 << n) - 1)
        }
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, a: Action) -> bool {
        self.0 & (1 << a.0) != 0
    }

    pub fn insert(&mut self, a: Action) {
        self.0 |= 1 << a.0;
    }

    pub fn with(self, a: Action) -> ActionSet {
        ActionSet(self.0 | 1 << a.0)
    }

    pub fn without(self, a: Action) -> ActionSet {
        ActionSet(self.0 & !(1 << a.0))
    }

    pub fn union(self, other: ActionSet) -> ActionSet {
        ActionSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ActionSet) -> ActionSet {
        ActionSet(self.0 & other.0)
    }

    pub fn minus(self, other: ActionSet) -> ActionSet {
        ActionSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ActionSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Action> {
        let bits = self.0;
        (0..64u8).filter(move |i| bits & (1 << i) != 0).map(Action)
    }

    /// Every subset of `self`, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = ActionSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(ActionSet(cur))
        })
    }
}

impl FromIterator<Action> for ActionSet {
    fn from_iter<I: IntoIterator<Item = Action>>(iter: I) -> Self {
        let mut s = ActionSet::EMPTY;
        for a in iter {
            s.insert(a);
        }
        s
    }
}

impl fmt::Debug for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}

/// Ordered, duplicate-free, nonempty list of action names.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Alphabet, ParseError> {
        if names.is_empty() {
            return Err(ParseError::Alphabet("alphabet must be nonempty".into()));
        }
        if names.len() > MAX_ACTIONS {
            return Err(ParseError::Alphabet(format!(
                "at most {MAX_ACTIONS} actions are supported"
            )));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if !is_action_name(n) {
                return Err(ParseError::Alphabet(format!("`{n}` is not a valid action name")));
            }
            if !seen.insert(n.to_string()) {
                return Err(ParseError::Alphabet(format!("duplicate action `{n}`")));
            }
            out.push(n.to_string());
        }
        Ok(Alphabet { names: out })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn lookup(&self, name: &str) -> Option<Action> {
        self.names.iter().position(|n| n == name).map(Action::new)
    }

    pub fn name(&self, a: Action) -> &str {
        &self.names[a.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn actions(&self) -> impl Iterator<Item = Action> + '_ {
        (0..self.names.len()).map(Action::new)
    }

    pub fn all(&self) -> ActionSet {
        ActionSet::first(self.names.len())
    }

    pub fn contains_set(&self, s: ActionSet) -> bool {
        s.is_subset(self.all())
    }

    pub fn render_set(&self, s: ActionSet) -> Vec<String> {
        s.iter().map(|a| self.name(a).to_string()).collect()
    }
}

pub(crate) fn is_action_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A relabelling function with finite support; identity outside its map.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct RelabelFn {
    map: BTreeMap<Action, Action>,
}

impl RelabelFn {
    pub fn identity() -> RelabelFn {
        RelabelFn::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Action, Action)>>(pairs: I) -> RelabelFn {
        RelabelFn {
            map: pairs.into_iter().collect(),
        }
    }

    pub fn apply(&self, a: Action) -> Action {
        self.map.get(&a).copied().unwrap_or(a)
    }

    pub fn apply_set(&self, s: ActionSet) -> ActionSet {
        s.iter().map(|a| self.apply(a)).collect()
    }

    /// `{a ∈ within | f(a) ∈ target}`.
    pub fn preimage_within(&self, target: ActionSet, within: ActionSet) -> ActionSet {
        within.iter().filter(|&a| target.contains(self.apply(a))).collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Action, Action)> + '_ {
        self.map.iter().map(|(a, b)| (*a, *b))
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn actions(&self) -> ActionSet {
        self.map.iter().flat_map(|(a, b)| [*a, *b]).collect()
    }
}

/// Result values carried by X-processes.
///
/// Pairs arise from the parallel operators; `✓` is the termination value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Value {
    Atom(Arc<str>),
    Pair(Arc<Value>, Arc<Value>),
}

pub const TICK: &str = "✓";

impl Value {
    pub fn atom(name: &str) -> Value {
        Value::Atom(Arc::from(name))
    }

    pub fn pair(x: Value, y: Value) -> Value {
        Value::Pair(Arc::new(x), Arc::new(y))
    }

    pub fn tick() -> Value {
        Value::atom(TICK)
    }

    pub fn is_tick(&self) -> bool {
        matches!(self, Value::Atom(s) if &**s == TICK)
    }

    pub fn swap(&self) -> Option<Value> {
        match self {
            Value::Pair(x, y) => Some(Value::Pair(y.clone(), x.clone())),
            Value::Atom(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(s) => f.write_str(s),
            Value::Pair(x, y) => write!(f, "({x},{y})"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Guarded branches of a deterministic choice; guards are pairwise distinct.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Branches(Vec<(Action, ProcTerm)>);

impl Branches {
    pub fn new(branches: Vec<(Action, ProcTerm)>) -> Result<Branches, Action> {
        let mut seen = ActionSet::EMPTY;
        for (a, _) in &branches {
            if seen.contains(*a) {
                return Err(*a);
            }
            seen.insert(*a);
        }
        Ok(Branches(branches))
    }

    pub fn guards(&self) -> ActionSet {
        self.0.iter().map(|(a, _)| *a).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Action, ProcTerm)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ProcTerm {
    Stop,
    Omega,
    Skip,
    ValueConst(Value),
    Prefix(Action, Box<ProcTerm>),
    IntChoice(Box<ProcTerm>, Box<ProcTerm>),
    ExtChoice(Box<ProcTerm>, Box<ProcTerm>),
    /// Never empty: the 0-ary case is `Stop`.
    DetChoice(Branches),
    DetChoiceOmega(Branches),
    Relabel(RelabelFn, Box<ProcTerm>),
    Conceal(Action, Box<ProcTerm>),
    Par(Box<ProcTerm>, Box<ProcTerm>),
    Interleave(Box<ProcTerm>, Box<ProcTerm>),
    InterleaveL(Box<ProcTerm>, Box<ProcTerm>),
    InterleaveR(Box<ProcTerm>, Box<ProcTerm>),
    Seq(Box<ProcTerm>, Box<ProcTerm>),
}

impl ProcTerm {
    pub fn val(name: &str) -> ProcTerm {
        ProcTerm::ValueConst(Value::atom(name))
    }

    pub fn prefix(a: Action, t: ProcTerm) -> ProcTerm {
        ProcTerm::Prefix(a, Box::new(t))
    }

    pub fn int(t: ProcTerm, u: ProcTerm) -> ProcTerm {
        ProcTerm::IntChoice(Box::new(t), Box::new(u))
    }

    pub fn ext(t: ProcTerm, u: ProcTerm) -> ProcTerm {
        ProcTerm::ExtChoice(Box::new(t), Box::new(u))
    }

    /// Deterministic choice; the empty choice is `Stop`.
    pub fn det(branches: Vec<(Action, ProcTerm)>) -> Result<ProcTerm, Action> {
        if branches.is_empty() {
            return Ok(ProcTerm::Stop);
        }
        Branches::new(branches).map(ProcTerm::DetChoice)
    }

    pub fn det_omega(branches: Vec<(Action, ProcTerm)>) -> Result<ProcTerm, Action> {
        Branches::new(branches).map(ProcTerm::DetChoiceOmega)
    }

    /// External choice over possibly repeated guards, read as a deterministic
    /// one whose repeated guards are merged by internal choice of their tails.
    pub fn det_merged(branches: Vec<(Action, ProcTerm)>, with_omega: bool) -> ProcTerm {
        let mut order: Vec<Action> = Vec::new();
        let mut tails: BTreeMap<Action, ProcTerm> = BTreeMap::new();
        for (a, t) in branches {
            match tails.remove(&a) {
                Some(prev) => {
                    tails.insert(a, ProcTerm::int(prev, t));
                }
                None => {
                    order.push(a);
                    tails.insert(a, t);
                }
            }
        }
        let merged: Vec<_> = order
            .into_iter()
            .map(|a| {
                let t = tails.remove(&a).expect("guard recorded");
                (a, t)
            })
            .collect();
        let res = if with_omega {
            ProcTerm::det_omega(merged)
        } else {
            ProcTerm::det(merged)
        };
        res.expect("guards merged")
    }

    pub fn relabel(f: RelabelFn, t: ProcTerm) -> ProcTerm {
        ProcTerm::Relabel(f, Box::new(t))
    }

    pub fn conceal(a: Action, t: ProcTerm) -> ProcTerm {
        ProcTerm::Conceal(a, Box::new(t))
    }

    pub fn par(t: ProcTerm, u: ProcTerm) -> ProcTerm {
        ProcTerm::Par(Box::new(t), Box::new(u))
    }

    pub fn interleave(t: ProcTerm, u: ProcTerm) -> ProcTerm {
        ProcTerm::Interleave(Box::new(t), Box::new(u))
    }

    pub fn interleave_l(t: ProcTerm, u: ProcTerm) -> ProcTerm {
        ProcTerm::InterleaveL(Box::new(t), Box::new(u))
    }

    pub fn interleave_r(t: ProcTerm, u: ProcTerm) -> ProcTerm {
        ProcTerm::InterleaveR(Box::new(t), Box::new(u))
    }

    pub fn seq(t: ProcTerm, u: ProcTerm) -> ProcTerm {
        ProcTerm::Seq(Box::new(t), Box::new(u))
    }

    /// Number of AST nodes; each branch of a deterministic choice counts its
    /// subterm only.
    pub fn size(&self) -> usize {
        use ProcTerm::*;
        match self {
            Stop | Omega | Skip | ValueConst(_) => 1,
            Prefix(_, t) | Relabel(_, t) | Conceal(_, t) => 1 + t.size(),
            IntChoice(t, u) | ExtChoice(t, u) | Par(t, u) | Interleave(t, u)
            | InterleaveL(t, u) | InterleaveR(t, u) | Seq(t, u) => 1 + t.size() + u.size(),
            DetChoice(bs) | DetChoiceOmega(bs) => 1 + bs.iter().map(|(_, t)| t.size()).sum::<usize>(),
        }
    }

    /// Every action mentioned anywhere in the term.
    pub fn actions(&self) -> ActionSet {
        use ProcTerm::*;
        match self {
            Stop | Omega | Skip | ValueConst(_) => ActionSet::EMPTY,
            Prefix(a, t) | Conceal(a, t) => t.actions().with(*a),
            Relabel(f, t) => t.actions().union(f.actions()),
            IntChoice(t, u) | ExtChoice(t, u) | Par(t, u) | Interleave(t, u)
            | InterleaveL(t, u) | InterleaveR(t, u) | Seq(t, u) => t.actions().union(u.actions()),
            DetChoice(bs) | DetChoiceOmega(bs) => bs
                .iter()
                .fold(bs.guards(), |acc, (_, t)| acc.union(t.actions())),
        }
    }
}

/// The operator sets of the four equational theories, plus everything else.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum Signature {
    /// Stop, prefix, internal and binary external choice.
    CspBox,
    /// `CspBox` with Ω.
    CspBoxOmega,
    /// Internal choice and deterministic external choice.
    CspDet,
    /// `CspDet` with the Ω-summand deterministic choices.
    CspDetOmega,
    Full,
}

impl Signature {
    pub const ALL: [Signature; 5] = [
        Signature::CspBox,
        Signature::CspBoxOmega,
        Signature::CspDet,
        Signature::CspDetOmega,
        Signature::Full,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Signature::CspBox => "csp-box",
            Signature::CspBoxOmega => "csp-box-omega",
            Signature::CspDet => "csp-det",
            Signature::CspDetOmega => "csp-det-omega",
            Signature::Full => "full",
        }
    }

    pub fn from_name(s: &str) -> Option<Signature> {
        Signature::ALL.into_iter().find(|sig| sig.name() == s)
    }

    fn allows(self, op: Op) -> bool {
        use Op::*;
        match self {
            Signature::CspBox => matches!(op, Stop | Prefix | Int | Ext),
            Signature::CspBoxOmega => matches!(op, Stop | Prefix | Int | Ext | Omega),
            Signature::CspDet => matches!(op, Stop | Prefix | Int | Det),
            Signature::CspDetOmega => matches!(op, Stop | Prefix | Int | Det | DetOmega | Omega),
            Signature::Full => true,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Op {
    Stop,
    Omega,
    Prefix,
    Int,
    Ext,
    Det,
    DetOmega,
    Deconstructor,
}

fn collect_ops(t: &ProcTerm, out: &mut Vec<Op>) {
    use ProcTerm::*;
    let (op, kids): (Option<Op>, Vec<&ProcTerm>) = match t {
        Stop => (Some(Op::Stop), vec![]),
        Omega => (Some(Op::Omega), vec![]),
        Skip => (Some(Op::Deconstructor), vec![]),
        // value constants are generators, not operators
        ValueConst(_) => (None, vec![]),
        Prefix(_, u) => (Some(Op::Prefix), vec![u]),
        IntChoice(u, v) => (Some(Op::Int), vec![u, v]),
        ExtChoice(u, v) => (Some(Op::Ext), vec![u, v]),
        DetChoice(bs) => (Some(Op::Det), bs.iter().map(|(_, u)| u).collect()),
        DetChoiceOmega(bs) => (Some(Op::DetOmega), bs.iter().map(|(_, u)| u).collect()),
        Relabel(_, u) | Conceal(_, u) => (Some(Op::Deconstructor), vec![u]),
        Par(u, v) | Interleave(u, v) | InterleaveL(u, v) | InterleaveR(u, v) | Seq(u, v) => {
            (Some(Op::Deconstructor), vec![u, v])
        }
    };
    if let Some(op) = op {
        if !out.contains(&op) {
            out.push(op);
        }
    }
    for k in kids {
        collect_ops(k, out);
    }
}

/// The first signature, in the order `CspBox < CspBoxOmega < CspDet <
/// CspDetOmega < Full`, whose operators cover every operator in `t`.
pub fn classify(t: &ProcTerm) -> Signature {
    let mut ops = Vec::new();
    collect_ops(t, &mut ops);
    Signature::ALL
        .into_iter()
        .find(|sig| ops.iter().all(|op| sig.allows(*op)))
        .unwrap_or(Signature::Full)
}

pub fn value_constants(t: &ProcTerm) -> BTreeSet<Value> {
    fn go(t: &ProcTerm, out: &mut BTreeSet<Value>) {
        use ProcTerm::*;
        match t {
            ValueConst(v) => {
                out.insert(v.clone());
            }
            Stop | Omega | Skip => {}
            Prefix(_, u) | Relabel(_, u) | Conceal(_, u) => go(u, out),
            IntChoice(u, v) | ExtChoice(u, v) | Par(u, v) | Interleave(u, v)
            | InterleaveL(u, v) | InterleaveR(u, v) | Seq(u, v) => {
                go(u, out);
                go(v, out);
            }
            DetChoice(bs) | DetChoiceOmega(bs) => bs.iter().for_each(|(_, u)| go(u, out)),
        }
    }
    let mut out = BTreeSet::new();
    go(t, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Action {
        Action::new(0)
    }

    #[test]
    fn subsets_enumerates_powerset() {
        let s = ActionSet::from_bits(0b1011);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|x| x.is_subset(s)));
        assert_eq!(ActionSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn classify_examples() {
        let stop = ProcTerm::Stop;
        assert_eq!(classify(&ProcTerm::int(stop.clone(), stop.clone())), Signature::CspBox);
        assert_eq!(classify(&ProcTerm::det_omega(vec![]).unwrap()), Signature::CspDetOmega);
        assert_eq!(classify(&ProcTerm::par(stop.clone(), stop.clone())), Signature::Full);
        assert_eq!(classify(&ProcTerm::Omega), Signature::CspBoxOmega);
        assert_eq!(classify(&ProcTerm::det(vec![(a(), stop.clone())]).unwrap()), Signature::CspDet);
        assert_eq!(classify(&ProcTerm::Skip), Signature::Full);
        let mixed = ProcTerm::ext(ProcTerm::det(vec![(a(), stop.clone())]).unwrap(), stop);
        assert_eq!(classify(&mixed), Signature::Full);
    }

    #[test]
    fn value_constants_examples() {
        assert!(value_constants(&ProcTerm::Stop).is_empty());
        let x = ProcTerm::val("x");
        let both = value_constants(&ProcTerm::int(x.clone(), x));
        assert_eq!(both.into_iter().collect::<Vec<_>>(), vec![Value::atom("x")]);
        let y = value_constants(&ProcTerm::prefix(a(), ProcTerm::val("y")));
        assert!(y.contains(&Value::atom("y")));
    }

    #[test]
    fn duplicate_guards_rejected() {
        let t = ProcTerm::det(vec![(a(), ProcTerm::Stop), (a(), ProcTerm::Omega)]);
        assert_eq!(t, Err(a()));
        assert_eq!(ProcTerm::det(vec![]), Ok(ProcTerm::Stop));
    }

    #[test]
    fn det_merged_combines_repeated_guards() {
        let t = ProcTerm::det_merged(
            vec![(a(), ProcTerm::Stop), (Action::new(1), ProcTerm::Omega), (a(), ProcTerm::Omega)],
            false,
        );
        let expect = ProcTerm::det(vec![
            (a(), ProcTerm::int(ProcTerm::Stop, ProcTerm::Omega)),
            (Action::new(1), ProcTerm::Omega),
        ])
        .unwrap();
        assert_eq!(t, expect);
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new::<&str>(&[]).is_err());
        assert!(Alphabet::new(&["a", "a"]).is_err());
        assert!(Alphabet::new(&["A"]).is_err());
        let ab = Alphabet::new(&["a", "b"]).unwrap();
        assert_eq!(ab.lookup("b"), Some(Action::new(1)));
        assert_eq!(ab.all().len(), 2);
    }
}
