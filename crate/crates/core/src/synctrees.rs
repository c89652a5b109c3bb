//! Finite synchronisation trees with synchronous parallel composition.
//!
//! `sync` is characterised by a mutually recursive family of equations
//! together with the auxiliary `sync_aux(a, -, -)`, in which the recursion
//! runs on the first argument of `sync` but on the second of `sync_aux`.
//! Here both are defined directly and the equations are checked as
//! properties of those definitions.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::terms::{Action, Alphabet};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SyncTree(BTreeSet<(Action, SyncTree)>);

pub fn nil() -> SyncTree {
    SyncTree::default()
}

pub fn st_prefix(a: Action, t: &SyncTree) -> SyncTree {
    SyncTree(BTreeSet::from([(a, t.clone())]))
}

pub fn st_sum(t: &SyncTree, u: &SyncTree) -> SyncTree {
    SyncTree(t.0.union(&u.0).cloned().collect())
}

impl SyncTree {
    pub fn summands(&self) -> impl Iterator<Item = &(Action, SyncTree)> {
        self.0.iter()
    }

    pub fn is_nil(&self) -> bool {
        self.0.is_empty()
    }

    /// `nil` has depth 1.
    pub fn depth(&self) -> usize {
        1 + self.0.iter().map(|(_, t)| t.depth()).max().unwrap_or(0)
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        if self.is_nil() {
            return "NIL".into();
        }
        self.0
            .iter()
            .map(|(a, t)| {
                let body = t.render(alphabet);
                if t.0.len() > 1 {
                    format!("{}.({})", alphabet.name(*a), body)
                } else {
                    format!("{}.{}", alphabet.name(*a), body)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for SyncTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_nil() {
            return f.write_str("NIL");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(a, t)| format!("{}.{:?}", a.index(), t))
            .collect();
        write!(f, "({})", parts.join(" + "))
    }
}

/// `Σ_{a_i = b_j} a_i.(τ_i ∥ τ'_j)`
pub fn sync(t: &SyncTree, u: &SyncTree) -> SyncTree {
    let mut out = BTreeSet::new();
    for (a, ti) in &t.0 {
        for (b, uj) in &u.0 {
            if a == b {
                out.insert((*a, sync(ti, uj)));
            }
        }
    }
    SyncTree(out)
}

/// `τ ∥ᵃ τ' = Σ_{b_j = a} a.(τ ∥ τ'_j)`
pub fn sync_aux(a: Action, t: &SyncTree, u: &SyncTree) -> SyncTree {
    SyncTree(
        u.0.iter()
            .filter(|(b, _)| *b == a)
            .map(|(_, uj)| (a, sync(t, uj)))
            .collect(),
    )
}

/// Every tree of depth at most `depth` over the first `actions` actions.
pub fn all_trees(actions: usize, depth: usize) -> Vec<SyncTree> {
    if depth <= 1 {
        return vec![nil()];
    }
    let smaller = all_trees(actions, depth - 1);
    let pairs: Vec<(Action, SyncTree)> = (0..actions)
        .flat_map(|i| smaller.iter().map(move |t| (Action::new(i), t.clone())))
        .collect();
    assert!(pairs.len() < 32, "too many trees to enumerate");
    (0u32..1 << pairs.len())
        .map(|mask| {
            SyncTree(
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, p)| p.clone())
                    .collect(),
            )
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseViolation {
    pub clause: &'static str,
    pub instance: Vec<SyncTree>,
}

#[derive(Clone, Debug, Default)]
pub struct SyncReport {
    pub checked: u64,
    pub violations: Vec<ClauseViolation>,
}

pub type SyncFn<'a> = &'a dyn Fn(&SyncTree, &SyncTree) -> SyncTree;
pub type SyncAuxFn<'a> = &'a dyn Fn(Action, &SyncTree, &SyncTree) -> SyncTree;

pub const CLAUSES: [&str; 7] = [
    "NIL || z = NIL",
    "(x + y) || z = (x || z) + (y || z)",
    "a.x || z = x ||^a z",
    "z ||^a NIL = NIL",
    "z ||^a (x + y) = (z ||^a x) + (z ||^a y)",
    "z ||^a a.x = a.(z || x)",
    "z ||^a b.x = NIL (b != a)",
];

const MAX_REPORTED: usize = 16;

// Trees are interned so that the triple-indexed clauses compare integers.
#[derive(Default)]
struct Interner {
    ids: HashMap<SyncTree, usize>,
    trees: Vec<SyncTree>,
    sums: HashMap<(usize, usize), usize>,
}

impl Interner {
    fn id(&mut self, t: SyncTree) -> usize {
        if let Some(i) = self.ids.get(&t) {
            return *i;
        }
        let i = self.trees.len();
        self.trees.push(t.clone());
        self.ids.insert(t, i);
        i
    }

    fn sum(&mut self, i: usize, j: usize) -> usize {
        let key = (i.min(j), i.max(j));
        if let Some(s) = self.sums.get(&key) {
            return *s;
        }
        let s = self.id(st_sum(&self.trees[i], &self.trees[j]));
        self.sums.insert(key, s);
        s
    }
}

/// Checks the defining clauses of `∥` and `∥ᵃ` for the given candidates,
/// instantiating every variable with every sample and `a`, `b` with every
/// action below `actions`.
pub fn check_mutual_equations_with(
    par: SyncFn,
    aux: SyncAuxFn,
    samples: &[SyncTree],
    actions: usize,
) -> SyncReport {
    let mut report = SyncReport::default();
    let fail = |report: &mut SyncReport, clause: &'static str, inst: Vec<SyncTree>| {
        if report.violations.len() < MAX_REPORTED {
            report.violations.push(ClauseViolation { clause, instance: inst });
        }
    };
    let n = samples.len();
    let acts: Vec<Action> = (0..actions).map(Action::new).collect();
    let mut int = Interner::default();
    let nil_id = int.id(nil());
    let par_tab: Vec<Vec<usize>> = samples
        .iter()
        .map(|x| samples.iter().map(|z| int.id(par(x, z))).collect())
        .collect();
    let sum_tab: Vec<Vec<usize>> = samples
        .iter()
        .map(|x| samples.iter().map(|y| int.id(st_sum(x, y))).collect())
        .collect();
    // aux_tab[a][z][x] = z ||^a x
    let aux_tab: Vec<Vec<Vec<usize>>> = acts
        .iter()
        .map(|a| {
            samples
                .iter()
                .map(|z| samples.iter().map(|x| int.id(aux(*a, z, x))).collect())
                .collect()
        })
        .collect();
    for z in 0..n {
        report.checked += 1;
        if int.id(par(&nil(), &samples[z])) != nil_id {
            fail(&mut report, CLAUSES[0], vec![samples[z].clone()]);
        }
        for (ai, a) in acts.iter().enumerate() {
            report.checked += 1;
            if int.id(aux(*a, &samples[z], &nil())) != nil_id {
                fail(&mut report, CLAUSES[3], vec![samples[z].clone()]);
            }
            for x in 0..n {
                report.checked += 1;
                let lhs = int.id(par(&st_prefix(*a, &samples[x]), &samples[z]));
                if lhs != aux_tab[ai][x][z] {
                    fail(&mut report, CLAUSES[2], vec![samples[x].clone(), samples[z].clone()]);
                }
                for b in &acts {
                    report.checked += 1;
                    let lhs = int.id(aux(*a, &samples[z], &st_prefix(*b, &samples[x])));
                    let (clause, rhs) = if a == b {
                        (CLAUSES[5], int.id(st_prefix(*a, &par(&samples[z], &samples[x]))))
                    } else {
                        (CLAUSES[6], nil_id)
                    };
                    if lhs != rhs {
                        fail(&mut report, clause, vec![samples[z].clone(), samples[x].clone()]);
                    }
                }
            }
        }
    }
    // the sum clauses, over all triples
    let mut par_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut aux_of: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for x in 0..n {
        for y in 0..n {
            let s = sum_tab[x][y];
            for z in 0..n {
                report.checked += 1;
                let lhs = *par_of.entry((s, z)).or_insert_with(|| int.id(par(&int.trees[s].clone(), &samples[z])));
                let rhs = int.sum(par_tab[x][z], par_tab[y][z]);
                if lhs != rhs {
                    fail(
                        &mut report,
                        CLAUSES[1],
                        vec![samples[x].clone(), samples[y].clone(), samples[z].clone()],
                    );
                }
                for (ai, a) in acts.iter().enumerate() {
                    report.checked += 1;
                    let lhs = *aux_of
                        .entry((ai, z, s))
                        .or_insert_with(|| int.id(aux(*a, &samples[z], &int.trees[s].clone())));
                    let rhs = int.sum(aux_tab[ai][z][x], aux_tab[ai][z][y]);
                    if lhs != rhs {
                        fail(
                            &mut report,
                            CLAUSES[4],
                            vec![samples[z].clone(), samples[x].clone(), samples[y].clone()],
                        );
                    }
                }
            }
        }
    }
    report
}

pub fn check_mutual_equations(samples: &[SyncTree], actions: usize) -> SyncReport {
    check_mutual_equations_with(&sync, &sync_aux, samples, actions)
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

    #[test]
    fn sum_is_a_semilattice() {
        let t = st_sum(&st_prefix(a(), &nil()), &st_prefix(b(), &st_prefix(a(), &nil())));
        let u = st_prefix(b(), &nil());
        assert_eq!(st_sum(&t, &nil()), t);
        assert_eq!(st_sum(&t, &t), t);
        assert_eq!(st_sum(&t, &u), st_sum(&u, &t));
    }

    #[test]
    fn sync_examples() {
        let an = st_prefix(a(), &nil());
        let bn = st_prefix(b(), &nil());
        assert_eq!(sync(&nil(), &an), nil());
        assert_eq!(sync(&an, &an), an);
        assert_eq!(sync(&an, &bn), nil());
    }

    #[test]
    fn aux_examples() {
        let an = st_prefix(a(), &nil());
        assert_eq!(sync_aux(a(), &an, &nil()), nil());
        assert_eq!(sync_aux(a(), &nil(), &an), an);
        assert_eq!(sync_aux(a(), &an, &st_prefix(b(), &an)), nil());
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(all_trees(2, 1).len(), 1);
        assert_eq!(all_trees(2, 2).len(), 4);
        assert_eq!(all_trees(2, 3).len(), 256);
        assert!(all_trees(2, 3).iter().all(|t| t.depth() <= 3));
    }

    #[test]
    fn equations_hold_on_small_trees() {
        let r = check_mutual_equations(&all_trees(2, 2), 2);
        assert!(r.violations.is_empty());
        assert!(r.checked > 0);
    }

    #[test]
    fn swapped_candidate_is_rejected() {
        let bad_aux = |a: Action, t: &SyncTree, u: &SyncTree| sync_aux(a, u, t);
        let r = check_mutual_equations_with(&sync, &bad_aux, &all_trees(2, 2), 2);
        assert!(r.violations.iter().any(|v| v.clause == "a.x || z = x ||^a z"));
    }

    #[test]
    fn render() {
        let ab = Alphabet::new(&["a", "b"]).unwrap();
        let t = st_sum(&st_prefix(a(), &nil()), &st_prefix(b(), &nil()));
        assert_eq!(t.render(&ab), "a.NIL + b.NIL");
        assert_eq!(nil().render(&ab), "NIL");
    }
}
