//! Seeded random processes and terms, and exhaustive term enumeration.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::failures::XProcess;
use crate::terms::{Action, ActionSet, Alphabet, ProcTerm, RelabelFn, Signature, Value};

/// Shape of randomly generated processes.
#[derive(Clone, Debug)]
pub struct ProcShape {
    pub actions: usize,
    pub depth: usize,
    /// Values that may terminate a trace.
    pub values: Vec<Value>,
    /// Allow nodes without stable failures.
    pub divergence: bool,
}

impl ProcShape {
    pub fn new(actions: usize, depth: usize) -> ProcShape {
        ProcShape {
            actions,
            depth,
            values: Vec::new(),
            divergence: true,
        }
    }

    pub fn with_values(mut self, values: &[Value]) -> ProcShape {
        self.values = values.to_vec();
        self
    }

    pub fn stable(mut self) -> ProcShape {
        self.divergence = false;
        self
    }
}

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn subset(&mut self, of: ActionSet) -> ActionSet {
        of.iter().filter(|_| self.rng.gen_bool(0.5)).collect()
    }

    pub fn process(&mut self, shape: &ProcShape) -> XProcess {
        self.node(shape, shape.depth)
    }

    fn node(&mut self, shape: &ProcShape, depth: usize) -> XProcess {
        let mut children = BTreeMap::new();
        if depth > 0 {
            // shrink the branching as we go down so sizes stay modest
            let p = 0.75 - 0.1 * (shape.depth - depth) as f64;
            for i in 0..shape.actions {
                if self.rng.gen_bool(p.max(0.2)) {
                    children.insert(Action::new(i), self.node(shape, depth - 1));
                }
            }
        }
        let mut values = BTreeSet::new();
        for v in &shape.values {
            if self.rng.gen_bool(0.3) {
                values.insert(v.clone());
            }
        }
        let fut: ActionSet = children.keys().copied().collect();
        let mut refusals = Vec::new();
        if !shape.divergence || self.rng.gen_bool(0.75) {
            let n = 1 + self.below(2);
            for _ in 0..n {
                refusals.push(self.subset(fut));
            }
        }
        XProcess::from_parts(children, values, refusals)
    }

    /// Random processes for each of `vars`.
    pub fn assignment(&mut self, vars: &[Value], shape: &ProcShape) -> BTreeMap<Value, XProcess> {
        vars.iter().map(|v| (v.clone(), self.process(shape))).collect()
    }

    /// A finite map from each of `values` to a random process.
    pub fn value_map(&mut self, values: &[Value], shape: &ProcShape) -> BTreeMap<Value, XProcess> {
        self.assignment(values, shape)
    }

    pub fn relabel_fn(&mut self, actions: usize) -> RelabelFn {
        let mut pairs = Vec::new();
        for i in 0..actions {
            if self.rng.gen_bool(0.6) {
                pairs.push((Action::new(i), Action::new(self.below(actions))));
            }
        }
        RelabelFn::from_pairs(pairs)
    }

    pub fn action(&mut self, actions: usize) -> Action {
        Action::new(self.below(actions))
    }

    /// A random closed term of the given signature with at most `size` nodes.
    pub fn term(&mut self, sig: Signature, actions: usize, size: usize, values: &[Value]) -> ProcTerm {
        let size = size.max(1);
        if size == 1 {
            return self.leaf(sig, values);
        }
        let choice = self.below(10);
        let split = |g: &mut Gen| {
            let l = 1 + g.below(size - 1);
            (l, (size - 1 - l).max(1))
        };
        match (sig, choice) {
            (_, 0) => self.leaf(sig, values),
            (Signature::CspBox | Signature::CspBoxOmega, 1..=3) => {
                ProcTerm::prefix(self.action(actions), self.term(sig, actions, size - 1, values))
            }
            (Signature::CspBox | Signature::CspBoxOmega, 4..=6) => {
                let (l, r) = split(self);
                ProcTerm::ext(self.term(sig, actions, l, values), self.term(sig, actions, r, values))
            }
            (Signature::CspDet | Signature::CspDetOmega | Signature::Full, 1..=4) => {
                let omega = sig != Signature::CspDet && self.chance(0.4);
                let mut guards: Vec<usize> = (0..actions).collect();
                guards.shuffle(&mut self.rng);
                let n = self.below(actions.min(3) + 1).min(size - 1);
                let budget = (size - 1) / n.max(1);
                let bs = guards[..n]
                    .iter()
                    .map(|i| (Action::new(*i), self.term(sig, actions, budget, values)))
                    .collect();
                if omega {
                    ProcTerm::det_omega(bs).expect("distinct guards")
                } else {
                    ProcTerm::det(bs).expect("distinct guards")
                }
            }
            (Signature::Full, 5) => {
                let op = self.below(7);
                let (l, r) = split(self);
                let t = self.term(sig, actions, l, values);
                match op {
                    0 => ProcTerm::relabel(self.relabel_fn(actions), t),
                    1 => ProcTerm::conceal(self.action(actions), t),
                    2 => ProcTerm::prefix(self.action(actions), t),
                    3 => ProcTerm::ext(t, self.term(sig, actions, r, values)),
                    4 => ProcTerm::par(t, self.term(sig, actions, r, values)),
                    5 => ProcTerm::interleave_l(t, self.term(sig, actions, r, values)),
                    _ => ProcTerm::interleave(t, self.term(sig, actions, r, values)),
                }
            }
            _ => {
                let (l, r) = split(self);
                ProcTerm::int(self.term(sig, actions, l, values), self.term(sig, actions, r, values))
            }
        }
    }

    fn leaf(&mut self, sig: Signature, values: &[Value]) -> ProcTerm {
        let omega = matches!(sig, Signature::CspBoxOmega | Signature::CspDetOmega | Signature::Full);
        if !values.is_empty() && self.chance(0.3) {
            return ProcTerm::ValueConst(values.choose(&mut self.rng).unwrap().clone());
        }
        if omega && self.chance(0.4) {
            ProcTerm::Omega
        } else {
            ProcTerm::Stop
        }
    }
}

/// Every closed term built from `Stop`, `Ω`, prefixes, `⊓` and `□` over
/// `alphabet` with at most `max_size` nodes.
pub fn box_omega_terms(alphabet: &Alphabet, max_size: usize) -> Vec<ProcTerm> {
    let mut by_size: Vec<Vec<ProcTerm>> = vec![Vec::new(), vec![ProcTerm::Stop, ProcTerm::Omega]];
    for n in 2..=max_size {
        let mut here = Vec::new();
        for a in alphabet.actions() {
            for t in &by_size[n - 1] {
                here.push(ProcTerm::prefix(a, t.clone()));
            }
        }
        for l in 1..n - 1 {
            let r = n - 1 - l;
            for t in &by_size[l] {
                for u in &by_size[r] {
                    here.push(ProcTerm::int(t.clone(), u.clone()));
                    here.push(ProcTerm::ext(t.clone(), u.clone()));
                }
            }
        }
        by_size.push(here);
    }
    by_size.into_iter().take(max_size + 1).flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::classify;

    #[test]
    fn enumeration_counts() {
        let ab = Alphabet::new(&["a", "b"]).unwrap();
        let counts: Vec<usize> = (1..=5).map(|n| box_omega_terms(&ab, n).len()).collect();
        assert_eq!(counts, vec![2, 6, 22, 86, 374]);
        assert!(box_omega_terms(&ab, 5).iter().all(|t| t.size() <= 5));
    }

    #[test]
    fn generation_is_deterministic() {
        let shape = ProcShape::new(3, 4).with_values(&[Value::atom("x"), Value::atom("y")]);
        let a: Vec<_> = (0..5).map({
            let mut g = Gen::new(7);
            move |_| g.process(&shape)
        }).collect();
        let shape = ProcShape::new(3, 4).with_values(&[Value::atom("x"), Value::atom("y")]);
        let mut g = Gen::new(7);
        let b: Vec<_> = (0..5).map(|_| g.process(&shape)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn stable_processes_have_failures_everywhere() {
        let mut g = Gen::new(1);
        let shape = ProcShape::new(2, 3).stable();
        for _ in 0..50 {
            let p = g.process(&shape);
            assert!(p.max_refusals().len() == p.traces().len());
        }
    }

    #[test]
    fn random_terms_stay_in_their_signature() {
        let mut g = Gen::new(3);
        for sig in &Signature::ALL[..4] {
            for _ in 0..100 {
                let t = g.term(*sig, 2, 8, &[]);
                assert!(classify(&t) <= *sig, "{t:?} not in {sig}");
            }
        }
    }
}
