//! Normal forms, semantic read-back, equivalence, and the axiom schemas of
//! the four equational theories.

mod axioms;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::failures::{refines, XProcess};
use crate::operators::{denote, DenoteError, ValueEnv};
use crate::terms::{Action, ActionSet, ProcTerm, Value};

pub use axioms::{axioms, axioms_with_arity, check_axiom, AxiomKind, AxiomSchema, DEFAULT_ARITY};

/// A family of action sets closed under supersets within its union.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SaturatedFamily(BTreeSet<ActionSet>);

impl SaturatedFamily {
    pub fn sets(&self) -> &BTreeSet<ActionSet> {
        &self.0
    }

    pub fn union(&self) -> ActionSet {
        self.0.iter().fold(ActionSet::EMPTY, |acc, s| acc.union(*s))
    }

    pub fn contains(&self, s: ActionSet) -> bool {
        self.0.contains(&s)
    }

    pub fn is_saturated(&self) -> bool {
        let u = self.union();
        self.0
            .iter()
            .all(|l| u.subsets().filter(|l2| l.is_subset(*l2)).all(|l2| self.0.contains(&l2)))
    }
}

impl fmt::Debug for SaturatedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// Smallest saturated family containing `sets`.
pub fn saturate(sets: impl IntoIterator<Item = ActionSet>) -> SaturatedFamily {
    let sets: Vec<ActionSet> = sets.into_iter().collect();
    let u = sets.iter().fold(ActionSet::EMPTY, |acc, s| acc.union(*s));
    let family = u
        .subsets()
        .filter(|l| sets.iter().any(|s| s.is_subset(*l)))
        .collect();
    SaturatedFamily(family)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum NormalForm {
    /// `⊓_{L ∈ family} □_{a ∈ L} a → t_a  ⊓  ⊓_{x ∈ values} x`
    Box {
        family: SaturatedFamily,
        branches: BTreeMap<Action, NormalForm>,
        values: BTreeSet<Value>,
    },
    /// `(Ω □ □_{a ∈ guards} a → t_a)  ⊓  ⊓_{x ∈ values} x`
    Omega {
        branches: BTreeMap<Action, NormalForm>,
        values: BTreeSet<Value>,
    },
}

impl NormalForm {
    pub fn branches(&self) -> &BTreeMap<Action, NormalForm> {
        match self {
            NormalForm::Box { branches, .. } | NormalForm::Omega { branches, .. } => branches,
        }
    }

    pub fn values(&self) -> &BTreeSet<Value> {
        match self {
            NormalForm::Box { values, .. } | NormalForm::Omega { values, .. } => values,
        }
    }

    pub fn guards(&self) -> ActionSet {
        self.branches().keys().copied().collect()
    }

    pub fn depth(&self) -> usize {
        1 + self.branches().values().map(|t| t.depth()).max().unwrap_or(0)
    }

    /// Checks the shape invariants, recursively.
    pub fn is_well_formed(&self) -> bool {
        let here = match self {
            NormalForm::Box { family, branches, .. } => {
                !family.sets().is_empty()
                    && family.is_saturated()
                    && family.union() == branches.keys().copied().collect()
            }
            NormalForm::Omega { .. } => true,
        };
        here && self.branches().values().all(|t| t.is_well_formed())
    }
}

pub fn readback(p: &XProcess) -> NormalForm {
    let branches = p.children().iter().map(|(a, c)| (*a, readback(c))).collect();
    let values = p.values().clone();
    if p.has_failures() {
        let fut = p.fut();
        let family = saturate(p.refusals().iter().map(|m| fut.minus(*m)).chain([fut]));
        NormalForm::Box {
            family,
            branches,
            values,
        }
    } else {
        NormalForm::Omega { branches, values }
    }
}

fn value_term(x: &Value) -> ProcTerm {
    if x.is_tick() {
        ProcTerm::Skip
    } else {
        ProcTerm::ValueConst(x.clone())
    }
}

fn int_all(mut summands: Vec<ProcTerm>) -> Option<ProcTerm> {
    summands.sort();
    summands.dedup();
    summands.into_iter().reduce(ProcTerm::int)
}

pub fn nf_to_term(nf: &NormalForm) -> ProcTerm {
    let tails: BTreeMap<Action, ProcTerm> = nf
        .branches()
        .iter()
        .map(|(a, t)| (*a, nf_to_term(t)))
        .collect();
    let guarded = |l: ActionSet| -> Vec<(Action, ProcTerm)> {
        l.iter().map(|a| (a, tails[&a].clone())).collect()
    };
    let mut summands: Vec<ProcTerm> = nf.values().iter().map(value_term).collect();
    match nf {
        NormalForm::Box { family, .. } => {
            for l in family.sets() {
                summands.push(ProcTerm::det(guarded(*l)).expect("guards are a set"));
            }
        }
        NormalForm::Omega { branches, .. } => {
            // Ω is the unit of ⊓, so it only shows when nothing else does
            if !branches.is_empty() || summands.is_empty() {
                let all: ActionSet = branches.keys().copied().collect();
                let t = if all.is_empty() {
                    ProcTerm::Omega
                } else {
                    ProcTerm::det_omega(guarded(all)).expect("guards are a set")
                };
                summands.push(t);
            }
        }
    }
    int_all(summands).expect("a normal form has a summand")
}

pub fn normalize(t: &ProcTerm, env: &ValueEnv) -> Result<NormalForm, DenoteError> {
    Ok(readback(&denote(t, env)?))
}

/// Semantic equality of two terms.
pub fn equivalent(t: &ProcTerm, u: &ProcTerm, env: &ValueEnv) -> Result<bool, DenoteError> {
    let p = denote(t, env)?;
    let q = denote(u, env)?;
    let same = p == q;
    debug_assert_eq!(same, readback(&p) == readback(&q));
    Ok(same)
}

/// `t ⊑ u`, i.e. `t ⊓ u = t`.
pub fn refine_terms(t: &ProcTerm, u: &ProcTerm, env: &ValueEnv) -> Result<bool, DenoteError> {
    Ok(refines(&denote(t, env)?, &denote(u, env)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{omega, stop};
    use crate::terms::{parse_process, print_process, Alphabet};

    fn ab() -> Alphabet {
        Alphabet::new(&["a", "b"]).unwrap()
    }

    fn set(bits: u64) -> ActionSet {
        ActionSet::from_bits(bits)
    }

    fn nf(s: &str) -> NormalForm {
        normalize(&parse_process(s, &ab()).unwrap(), &ValueEnv::identity()).unwrap()
    }

    fn round(s: &str) -> String {
        print_process(&nf_to_term(&nf(s)), &ab())
    }

    #[test]
    fn saturation() {
        assert_eq!(saturate([set(1)]).sets(), &BTreeSet::from([set(1)]));
        assert_eq!(saturate([set(1), set(2)]).sets(), &BTreeSet::from([set(1), set(2), set(3)]));
        assert_eq!(saturate([ActionSet::EMPTY]).sets(), &BTreeSet::from([ActionSet::EMPTY]));
        assert!(saturate([set(1), set(6)]).is_saturated());
    }

    #[test]
    fn readback_of_constants() {
        assert_eq!(
            readback(&omega()),
            NormalForm::Omega {
                branches: BTreeMap::new(),
                values: BTreeSet::new()
            }
        );
        assert_eq!(
            readback(&stop()),
            NormalForm::Box {
                family: saturate([ActionSet::EMPTY]),
                branches: BTreeMap::new(),
                values: BTreeSet::new()
            }
        );
    }

    #[test]
    fn readback_of_stop_or_divergent_prefix() {
        let a = Action::new(0);
        let n = nf("STOP |~| (OMEGA [] a -> STOP)");
        let stop_nf = readback(&stop());
        assert_eq!(
            n,
            NormalForm::Box {
                family: saturate([ActionSet::EMPTY, set(1)]),
                branches: BTreeMap::from([(a, stop_nf)]),
                values: BTreeSet::new()
            }
        );
    }

    #[test]
    fn family_keeps_the_full_future() {
        // the only maximal refusal is {b}, yet b stays reachable
        let n = nf("a -> STOP |~| (OMEGA [] b -> STOP)");
        match n {
            NormalForm::Box { family, .. } => {
                assert_eq!(family.sets(), &BTreeSet::from([set(1), set(3)]))
            }
            _ => panic!("expected a stable normal form"),
        }
    }

    #[test]
    fn printing_normal_forms() {
        assert_eq!(round("OMEGA"), "OMEGA");
        assert_eq!(round("STOP [] STOP"), "STOP");
        assert_eq!(round("a -> STOP"), "[a -> STOP]");
        assert_eq!(round("val x |~| OMEGA"), "val x");
        assert_eq!(round("OMEGA [] a -> SKIP"), "[OMEGA | a -> SKIP]");
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(nf("STOP [] STOP"), nf("STOP"));
        assert_eq!(nf("a -> STOP [] a -> OMEGA"), nf("a -> STOP |~| a -> OMEGA"));
        assert_eq!(nf("(a -> STOP) \\ a"), nf("STOP"));
        assert!(nf("a -> STOP |~| b -> OMEGA").is_well_formed());
    }

    #[test]
    fn equivalence_and_refinement() {
        let env = ValueEnv::identity();
        let p = |s: &str| parse_process(s, &ab()).unwrap();
        assert!(equivalent(&p("a -> STOP"), &p("a -> STOP"), &env).unwrap());
        assert!(!equivalent(&p("STOP"), &p("OMEGA"), &env).unwrap());
        assert!(refine_terms(&p("a -> STOP |~| b -> STOP"), &p("a -> STOP"), &env).unwrap());
        assert!(!refine_terms(&p("a -> STOP"), &p("a -> STOP |~| b -> STOP"), &env).unwrap());
    }
}
