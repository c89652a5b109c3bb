use std::collections::BTreeMap;

use serde::Serialize;

use crate::failures::{refines, XProcess};
use crate::operators::{denote_open, DenoteError};
use crate::terms::{value_constants, Action, Alphabet, ProcTerm, Signature, Value};

pub const DEFAULT_ARITY: usize = 3;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum AxiomKind {
    Equation,
    /// `lhs ⊑ rhs`, read as `lhs ⊓ rhs = lhs`.
    Refinement,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AxiomSchema {
    /// Axiom family, shared by all of its instances.
    pub family: &'static str,
    /// Family plus the guard instantiation, unique within a theory.
    pub name: String,
    pub lhs: ProcTerm,
    pub rhs: ProcTerm,
    pub theory: Signature,
    pub kind: AxiomKind,
}

impl AxiomSchema {
    pub fn metavariables(&self) -> Vec<Value> {
        let mut vs = value_constants(&self.lhs);
        vs.extend(value_constants(&self.rhs));
        vs.into_iter().collect()
    }
}

/// Does the assignment satisfy the axiom instance?
pub fn check_axiom(
    ax: &AxiomSchema,
    assignment: &BTreeMap<Value, XProcess>,
) -> Result<bool, DenoteError> {
    let l = denote_open(&ax.lhs, assignment)?;
    let r = denote_open(&ax.rhs, assignment)?;
    Ok(match ax.kind {
        AxiomKind::Equation => l == r,
        AxiomKind::Refinement => refines(&l, &r),
    })
}

fn var(name: &str) -> ProcTerm {
    ProcTerm::val(name)
}

fn x(i: usize) -> ProcTerm {
    var(&format!("x{i}"))
}

fn y(i: usize) -> ProcTerm {
    var(&format!("y{i}"))
}

use ProcTerm as T;

struct Builder<'a> {
    theory: Signature,
    alphabet: &'a Alphabet,
    out: Vec<AxiomSchema>,
}

impl Builder<'_> {
    fn push(&mut self, family: &'static str, inst: String, lhs: ProcTerm, rhs: ProcTerm, kind: AxiomKind) {
        let name = if inst.is_empty() {
            family.to_string()
        } else {
            format!("{family}[{inst}]")
        };
        self.out.push(AxiomSchema {
            family,
            name,
            lhs,
            rhs,
            theory: self.theory,
            kind,
        });
    }

    fn eq(&mut self, family: &'static str, lhs: ProcTerm, rhs: ProcTerm) {
        self.push(family, String::new(), lhs, rhs, AxiomKind::Equation);
    }

    fn label(&self, guards: &[Action]) -> String {
        guards
            .iter()
            .map(|a| self.alphabet.name(*a))
            .collect::<Vec<_>>()
            .join(",")
    }

    fn int_semilattice(&mut self) {
        self.eq("int-assoc", T::int(x(1), T::int(x(2), x(3))), T::int(T::int(x(1), x(2)), x(3)));
        self.eq("int-comm", T::int(x(1), x(2)), T::int(x(2), x(1)));
        self.eq("int-idem", T::int(x(1), x(1)), x(1));
    }

    fn omega_zero(&mut self) {
        self.eq("int-omega", T::int(x(1), T::Omega), x(1));
    }

    fn box_axioms(&mut self) {
        self.int_semilattice();
        self.eq("ext-assoc", T::ext(x(1), T::ext(x(2), x(3))), T::ext(T::ext(x(1), x(2)), x(3)));
        self.eq("ext-comm", T::ext(x(1), x(2)), T::ext(x(2), x(1)));
        self.eq("ext-idem", T::ext(x(1), x(1)), x(1));
        self.eq("ext-stop", T::ext(x(1), T::Stop), x(1));
        self.eq(
            "ext-dist-int",
            T::ext(x(1), T::int(x(2), x(3))),
            T::int(T::ext(x(1), x(2)), T::ext(x(1), x(3))),
        );
        self.eq(
            "int-dist-ext",
            T::int(x(1), T::ext(x(2), x(3))),
            T::ext(T::int(x(1), x(2)), T::int(x(1), x(3))),
        );
        for a in self.alphabet.actions().collect::<Vec<_>>() {
            let l = self.label(&[a]);
            self.push(
                "prefix-dist-int",
                l.clone(),
                T::prefix(a, T::int(x(1), x(2))),
                T::int(T::prefix(a, x(1)), T::prefix(a, x(2))),
                AxiomKind::Equation,
            );
            self.push(
                "prefix-ext",
                l,
                T::ext(T::prefix(a, x(1)), T::prefix(a, x(2))),
                T::int(T::prefix(a, x(1)), T::prefix(a, x(2))),
                AxiomKind::Equation,
            );
        }
    }

    // Deterministic guard sequences of length ≤ arity.
    fn sequences(&self, arity: usize, min_len: usize) -> Vec<Vec<Action>> {
        let actions: Vec<Action> = self.alphabet.actions().collect();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn go(actions: &[Action], arity: usize, min_len: usize, cur: &mut Vec<Action>, out: &mut Vec<Vec<Action>>) {
            if cur.len() >= min_len {
                out.push(cur.clone());
            }
            if cur.len() == arity {
                return;
            }
            for a in actions {
                if !cur.contains(a) {
                    cur.push(*a);
                    go(actions, arity, min_len, cur, out);
                    cur.pop();
                }
            }
        }
        go(&actions, arity, min_len, &mut cur, &mut out);
        out
    }

    // Deterministic guard sets of size ≤ arity, in alphabet order.
    fn guard_sets(&self, arity: usize) -> Vec<Vec<Action>> {
        self.alphabet
            .all()
            .subsets()
            .filter(|s| s.len() <= arity)
            .map(|s| s.iter().collect())
            .collect()
    }

    fn det(&self, guards: &[Action], var: fn(usize) -> ProcTerm, omega: bool) -> ProcTerm {
        let bs = guards.iter().enumerate().map(|(i, a)| (*a, var(i + 1))).collect();
        ProcTerm::det_merged(bs, omega)
    }

    fn det_comm(&mut self, family: &'static str, omega: bool, arity: usize) {
        for seq in self.sequences(arity, 2) {
            let mut sorted = seq.clone();
            sorted.sort();
            if sorted == seq {
                continue;
            }
            // the same branches, listed in alphabet order
            let lhs = self.det(&seq, x, omega);
            let rhs_branches = sorted
                .iter()
                .map(|a| {
                    let i = seq.iter().position(|b| b == a).expect("permutation");
                    (*a, x(i + 1))
                })
                .collect();
            let rhs = ProcTerm::det_merged(rhs_branches, omega);
            let l = self.label(&seq);
            self.push(family, l, lhs, rhs, AxiomKind::Equation);
        }
    }

    fn det_dist(&mut self, family: &'static str, omega: bool, arity: usize) {
        for seq in self.sequences(arity, 1) {
            let with = |t: ProcTerm| {
                let mut bs: Vec<(Action, ProcTerm)> = vec![(seq[0], t)];
                bs.extend(seq.iter().enumerate().skip(1).map(|(i, a)| (*a, x(i + 1))));
                ProcTerm::det_merged(bs, omega)
            };
            let lhs = with(T::int(x(1), var("z1")));
            let rhs = T::int(with(x(1)), with(var("z1")));
            let l = self.label(&seq);
            self.push(family, l, lhs, rhs, AxiomKind::Equation);
        }
    }

    // (Ω? □_i a_i x_i) ⊓ (Ω? □ b_1 y_1 □_j b_j y_j) ⊑ Ω? □ b_1 y_1 □_i a_i x_i
    fn final_axiom(&mut self, family: &'static str, omega_a: bool, omega_b: bool, arity: usize) {
        for a_set in self.guard_sets(arity) {
            for b_seq in self.sequences(arity, 1) {
                let mut tail = b_seq[1..].to_vec();
                tail.sort();
                if tail != b_seq[1..] {
                    continue;
                }
                let left = self.det(&a_set, x, omega_a);
                let right = self.det(&b_seq, y, omega_b);
                let mut bs = vec![(b_seq[0], y(1))];
                bs.extend(a_set.iter().enumerate().map(|(i, a)| (*a, x(i + 1))));
                let rhs = ProcTerm::det_merged(bs, omega_a);
                let inst = format!("{}|{}", self.label(&a_set), self.label(&b_seq));
                self.push(family, inst, T::int(left, right), rhs, AxiomKind::Refinement);
            }
        }
    }
}

/// Axiom instances of a theory over `alphabet`, with n-ary schemas
/// instantiated up to [`DEFAULT_ARITY`].
pub fn axioms(theory: Signature, alphabet: &Alphabet) -> Vec<AxiomSchema> {
    axioms_with_arity(theory, alphabet, DEFAULT_ARITY)
}

pub fn axioms_with_arity(theory: Signature, alphabet: &Alphabet, arity: usize) -> Vec<AxiomSchema> {
    if theory == Signature::Full {
        let mut out = Vec::new();
        for sig in &Signature::ALL[..4] {
            out.extend(axioms_with_arity(*sig, alphabet, arity));
        }
        return out;
    }
    let mut b = Builder {
        theory,
        alphabet,
        out: Vec::new(),
    };
    match theory {
        Signature::CspBox => b.box_axioms(),
        Signature::CspBoxOmega => {
            b.box_axioms();
            b.omega_zero();
        }
        Signature::CspDet => {
            b.int_semilattice();
            b.det_comm("det-comm", false, arity);
            b.det_dist("det-dist", false, arity);
            b.final_axiom("det-final", false, false, arity);
        }
        Signature::CspDetOmega => {
            b.int_semilattice();
            b.omega_zero();
            b.det_comm("det-comm", false, arity);
            b.det_comm("det-omega-comm", true, arity);
            b.det_dist("det-dist", false, arity);
            b.det_dist("det-omega-dist", true, arity);
            b.final_axiom("final-omega-omega", true, true, arity);
            b.final_axiom("final-omega-stable", true, false, arity);
            b.final_axiom("final-stable-omega", false, true, arity);
            b.final_axiom("final-stable-stable", false, false, arity);
        }
        Signature::Full => unreachable!(),
    }
    b.out
}
