//! Values, evaluation contexts, and the commutation of constructors with
//! evaluation contexts.

use std::collections::BTreeMap;

use super::eval::Machine;
use super::{typecheck, LamError, LamTerm, LamType, Prim, TypeContext};
use crate::terms::Action;

pub fn is_value(t: &LamTerm) -> bool {
    use LamTerm::*;
    match t {
        Var(_) | Star | Lam(..) => true,
        Pair(a, b) => is_value(a) && is_value(b),
        InEmpty(m, _) | Call(Prim::Zero | Prim::Succ, m) => is_value(m),
        _ => false,
    }
}

/// `E ::= [−] | in E | (E,M) | (V,E) | E M | V E | fst E | snd E | g(E)`,
/// plus `let x = E in N`, the context of the desugared `(λx.N) E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalContext {
    Hole,
    In(Box<EvalContext>, LamType),
    PairL(Box<EvalContext>, LamTerm),
    PairR(LamTerm, Box<EvalContext>),
    AppL(Box<EvalContext>, LamTerm),
    AppR(LamTerm, Box<EvalContext>),
    Fst(Box<EvalContext>),
    Snd(Box<EvalContext>),
    Call(Prim, Box<EvalContext>),
    Let(String, Box<EvalContext>, LamTerm),
}

impl EvalContext {
    pub fn plug(&self, m: LamTerm) -> LamTerm {
        use EvalContext as E;
        match self {
            E::Hole => m,
            E::In(e, ty) => LamTerm::in_empty(e.plug(m), ty.clone()),
            E::PairL(e, n) => LamTerm::pair(e.plug(m), n.clone()),
            E::PairR(v, e) => LamTerm::pair(v.clone(), e.plug(m)),
            E::AppL(e, n) => LamTerm::app(e.plug(m), n.clone()),
            E::AppR(v, e) => LamTerm::app(v.clone(), e.plug(m)),
            E::Fst(e) => LamTerm::fst(e.plug(m)),
            E::Snd(e) => LamTerm::snd(e.plug(m)),
            E::Call(g, e) => LamTerm::Call(*g, Box::new(e.plug(m))),
            E::Let(x, e, n) => LamTerm::let_in(x, e.plug(m), n.clone()),
        }
    }

    pub fn depth(&self) -> usize {
        use EvalContext as E;
        match self {
            E::Hole => 0,
            E::In(e, _) | E::PairL(e, _) | E::PairR(_, e) | E::AppL(e, _) | E::AppR(_, e)
            | E::Fst(e) | E::Snd(e) | E::Call(_, e) | E::Let(_, e, _) => 1 + e.depth(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Value,
    /// `M = E[R]` where `R` is a β-redex, a projection or function symbol
    /// applied to a value, or an effect construct.
    Split(EvalContext, LamTerm),
}

/// The unique decomposition of a closed term.
pub fn decompose(t: &LamTerm) -> Result<Decomposition, LamError> {
    if is_value(t) {
        return Ok(Decomposition::Value);
    }
    split(t).map(|(e, r)| Decomposition::Split(e, r))
}

fn split(t: &LamTerm) -> Result<(EvalContext, LamTerm), LamError> {
    use EvalContext as E;
    use LamTerm::*;
    let here = || Ok((E::Hole, t.clone()));
    // descend into the first non-value operand, if any
    let inner = |m: &LamTerm, frame: &dyn Fn(Box<E>) -> E| -> Result<(E, LamTerm), LamError> {
        let (e, r) = split(m)?;
        Ok((frame(Box::new(e)), r))
    };
    match t {
        Var(x) => Err(LamError::Unbound(x.clone())),
        Star | Lam(..) => Err(LamError::Internal("a value has no redex".into())),
        InEmpty(m, ty) => inner(m, &|e| E::In(e, ty.clone())),
        Call(g, m) => {
            if is_value(m) {
                here()
            } else {
                inner(m, &|e| E::Call(*g, e))
            }
        }
        Pair(a, b) => {
            if !is_value(a) {
                inner(a, &|e| E::PairL(e, (**b).clone()))
            } else {
                inner(b, &|e| E::PairR((**a).clone(), e))
            }
        }
        Fst(m) | Snd(m) => {
            if !is_value(m) {
                let first = matches!(t, Fst(_));
                inner(m, &|e| if first { E::Fst(e) } else { E::Snd(e) })
            } else if matches!(**m, Pair(..)) {
                here()
            } else {
                Err(LamError::Internal("projection of a non-pair value".into()))
            }
        }
        Apply(f, a) => {
            if !is_value(f) {
                inner(f, &|e| E::AppL(e, (**a).clone()))
            } else if !is_value(a) {
                inner(a, &|e| E::AppR((**f).clone(), e))
            } else if matches!(**f, Lam(..)) {
                here()
            } else {
                Err(LamError::Internal("application of a non-function value".into()))
            }
        }
        Let(x, m, n) => {
            if is_value(m) {
                here()
            } else {
                inner(m, &|e| E::Let(x.clone(), e, (**n).clone()))
            }
        }
        IntChoice(..) | Prefix(..) | Omega(_) | Conceal(..) | Relabel(..) | ExtChoice(..)
        | Par(..) | Interleave(..) => here(),
    }
}

/// The algebraic constructors available in every type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constructor {
    IntChoice,
    Prefix(Action),
    Omega,
}

impl Constructor {
    pub fn arity(&self) -> usize {
        match self {
            Constructor::IntChoice => 2,
            Constructor::Prefix(_) => 1,
            Constructor::Omega => 0,
        }
    }

    fn build(&self, mut args: Vec<LamTerm>, ty: LamType) -> LamTerm {
        match self {
            Constructor::IntChoice => {
                let b = args.pop().expect("two arguments");
                let a = args.pop().expect("two arguments");
                LamTerm::int(a, b)
            }
            Constructor::Prefix(x) => LamTerm::prefix(*x, args.pop().expect("one argument")),
            Constructor::Omega => LamTerm::Omega(ty),
        }
    }
}

/// Whether `E[op(M₁,…,Mₙ)]` and `op(E[M₁],…,E[Mₙ])` denote the same process.
///
/// `hole` is the type at the hole; it fixes the type of `Ω`.
pub fn constructor_commutation_check(
    op: &Constructor,
    ctx: &EvalContext,
    args: &[LamTerm],
    hole: &LamType,
) -> Result<bool, LamError> {
    if args.len() != op.arity() {
        return Err(LamError::Internal(format!(
            "{op:?} takes {} arguments, got {}",
            op.arity(),
            args.len()
        )));
    }
    let inner = op.build(args.to_vec(), hole.clone());
    let lhs = ctx.plug(inner);
    let outer_ty = typecheck(&TypeContext::new(), &lhs)?;
    let rhs = op.build(args.iter().map(|m| ctx.plug(m.clone())).collect(), outer_ty.clone());
    let rhs_ty = typecheck(&TypeContext::new(), &rhs)?;
    if rhs_ty != outer_ty {
        return Err(LamError::Mismatch {
            place: "commuted constructor",
            expected: outer_ty,
            found: rhs_ty,
        });
    }
    // one machine, so closures on both sides get the same names
    let mut m = Machine::new();
    let env = BTreeMap::new();
    Ok(m.denote(&lhs, &env)? == m.denote(&rhs, &env)?)
}
