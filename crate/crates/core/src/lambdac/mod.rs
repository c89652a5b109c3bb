//! The computational λ-calculus with polymorphic CSP constructors and
//! deconstructors, interpreted in the free-algebra monad on X-processes.

mod eval;
mod parse;
mod print;
pub mod sample;
mod syntax;

use std::fmt;

use thiserror::Error;

use crate::terms::{Action, ParseError, RelabelFn};

pub use eval::{denote_term, run, Machine, SemValue};
pub use parse::{parse_program, parse_term, parse_type, Program};
pub use print::print_term;
pub use syntax::{
    constructor_commutation_check, decompose, is_value, Constructor, Decomposition, EvalContext,
};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LamType {
    Base(String),
    Unit,
    Empty,
    Prod(Box<LamType>, Box<LamType>),
    Arrow(Box<LamType>, Box<LamType>),
}

impl LamType {
    pub fn nat() -> LamType {
        LamType::Base("nat".to_string())
    }

    pub fn prod(a: LamType, b: LamType) -> LamType {
        LamType::Prod(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: LamType, b: LamType) -> LamType {
        LamType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn is_first_order(&self) -> bool {
        match self {
            LamType::Arrow(..) => false,
            LamType::Prod(a, b) => a.is_first_order() && b.is_first_order(),
            _ => true,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            LamType::Base(b) => write!(f, "{b}"),
            LamType::Unit => write!(f, "unit"),
            LamType::Empty => write!(f, "empty"),
            LamType::Prod(a, b) => {
                if prec > 1 {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 2)?;
                write!(f, " * ")?;
                b.fmt_prec(f, 2)?;
                if prec > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            LamType::Arrow(a, b) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 1)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 0)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for LamType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Debug for LamType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Given unary function symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Prim {
    /// `0 : unit -> nat`
    Zero,
    /// `succ : nat -> nat`
    Succ,
}

impl Prim {
    pub fn domain(self) -> LamType {
        match self {
            Prim::Zero => LamType::Unit,
            Prim::Succ => LamType::nat(),
        }
    }

    pub fn codomain(self) -> LamType {
        LamType::nat()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LamTerm {
    Var(String),
    Call(Prim, Box<LamTerm>),
    Star,
    InEmpty(Box<LamTerm>, LamType),
    Pair(Box<LamTerm>, Box<LamTerm>),
    Fst(Box<LamTerm>),
    Snd(Box<LamTerm>),
    Lam(String, LamType, Box<LamTerm>),
    Apply(Box<LamTerm>, Box<LamTerm>),
    Let(String, Box<LamTerm>, Box<LamTerm>),
    IntChoice(Box<LamTerm>, Box<LamTerm>),
    Prefix(Action, Box<LamTerm>),
    Omega(LamType),
    Conceal(Action, Box<LamTerm>),
    Relabel(RelabelFn, Box<LamTerm>),
    ExtChoice(Box<LamTerm>, Box<LamTerm>),
    Par(Box<LamTerm>, Box<LamTerm>),
    Interleave(Box<LamTerm>, Box<LamTerm>),
}

fn bx(t: LamTerm) -> Box<LamTerm> {
    Box::new(t)
}

impl LamTerm {
    pub fn var(x: &str) -> LamTerm {
        LamTerm::Var(x.to_string())
    }

    pub fn zero() -> LamTerm {
        LamTerm::Call(Prim::Zero, bx(LamTerm::Star))
    }

    pub fn succ(t: LamTerm) -> LamTerm {
        LamTerm::Call(Prim::Succ, bx(t))
    }

    pub fn numeral(n: u64) -> LamTerm {
        (0..n).fold(LamTerm::zero(), |t, _| LamTerm::succ(t))
    }

    pub fn pair(a: LamTerm, b: LamTerm) -> LamTerm {
        LamTerm::Pair(bx(a), bx(b))
    }

    pub fn fst(t: LamTerm) -> LamTerm {
        LamTerm::Fst(bx(t))
    }

    pub fn snd(t: LamTerm) -> LamTerm {
        LamTerm::Snd(bx(t))
    }

    pub fn lam(x: &str, ty: LamType, body: LamTerm) -> LamTerm {
        LamTerm::Lam(x.to_string(), ty, bx(body))
    }

    pub fn app(f: LamTerm, a: LamTerm) -> LamTerm {
        LamTerm::Apply(bx(f), bx(a))
    }

    pub fn let_in(x: &str, m: LamTerm, n: LamTerm) -> LamTerm {
        LamTerm::Let(x.to_string(), bx(m), bx(n))
    }

    pub fn in_empty(t: LamTerm, ty: LamType) -> LamTerm {
        LamTerm::InEmpty(bx(t), ty)
    }

    pub fn int(a: LamTerm, b: LamTerm) -> LamTerm {
        LamTerm::IntChoice(bx(a), bx(b))
    }

    pub fn prefix(a: Action, t: LamTerm) -> LamTerm {
        LamTerm::Prefix(a, bx(t))
    }

    pub fn conceal(a: Action, t: LamTerm) -> LamTerm {
        LamTerm::Conceal(a, bx(t))
    }

    pub fn relabel(f: RelabelFn, t: LamTerm) -> LamTerm {
        LamTerm::Relabel(f, bx(t))
    }

    pub fn ext(a: LamTerm, b: LamTerm) -> LamTerm {
        LamTerm::ExtChoice(bx(a), bx(b))
    }

    pub fn par(a: LamTerm, b: LamTerm) -> LamTerm {
        LamTerm::Par(bx(a), bx(b))
    }

    pub fn interleave(a: LamTerm, b: LamTerm) -> LamTerm {
        LamTerm::Interleave(bx(a), bx(b))
    }

    pub fn size(&self) -> usize {
        use LamTerm::*;
        match self {
            Var(_) | Star | Omega(_) => 1,
            Call(_, t) | InEmpty(t, _) | Fst(t) | Snd(t) | Lam(_, _, t) | Prefix(_, t)
            | Conceal(_, t) | Relabel(_, t) => 1 + t.size(),
            Pair(a, b) | Apply(a, b) | Let(_, a, b) | IntChoice(a, b) | ExtChoice(a, b)
            | Par(a, b) | Interleave(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn free_vars(&self) -> Vec<String> {
        fn go(t: &LamTerm, bound: &mut Vec<String>, out: &mut Vec<String>) {
            use LamTerm::*;
            match t {
                Var(x) => {
                    if !bound.contains(x) && !out.contains(x) {
                        out.push(x.clone());
                    }
                }
                Star | Omega(_) => {}
                Call(_, t) | InEmpty(t, _) | Fst(t) | Snd(t) | Prefix(_, t) | Conceal(_, t)
                | Relabel(_, t) => go(t, bound, out),
                Lam(x, _, body) => {
                    bound.push(x.clone());
                    go(body, bound, out);
                    bound.pop();
                }
                Let(x, m, n) => {
                    go(m, bound, out);
                    bound.push(x.clone());
                    go(n, bound, out);
                    bound.pop();
                }
                Pair(a, b) | Apply(a, b) | IntChoice(a, b) | ExtChoice(a, b) | Par(a, b)
                | Interleave(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Capture-avoiding substitution of a closed term `v` for `x`.
    pub fn subst(&self, x: &str, v: &LamTerm) -> LamTerm {
        use LamTerm::*;
        let s = |t: &LamTerm| bx(t.subst(x, v));
        match self {
            Var(y) if y == x => v.clone(),
            Var(_) | Star | Omega(_) => self.clone(),
            Call(g, t) => Call(*g, s(t)),
            InEmpty(t, ty) => InEmpty(s(t), ty.clone()),
            Fst(t) => Fst(s(t)),
            Snd(t) => Snd(s(t)),
            Prefix(a, t) => Prefix(*a, s(t)),
            Conceal(a, t) => Conceal(*a, s(t)),
            Relabel(f, t) => Relabel(f.clone(), s(t)),
            Lam(y, ty, body) if y == x => Lam(y.clone(), ty.clone(), body.clone()),
            Lam(y, ty, body) => Lam(y.clone(), ty.clone(), s(body)),
            Let(y, m, n) if y == x => Let(y.clone(), s(m), n.clone()),
            Let(y, m, n) => Let(y.clone(), s(m), s(n)),
            Pair(a, b) => Pair(s(a), s(b)),
            Apply(a, b) => Apply(s(a), s(b)),
            IntChoice(a, b) => IntChoice(s(a), s(b)),
            ExtChoice(a, b) => ExtChoice(s(a), s(b)),
            Par(a, b) => Par(s(a), s(b)),
            Interleave(a, b) => Interleave(s(a), s(b)),
        }
    }
}

/// `x₁:σ₁, …, xₙ:σₙ`; later entries shadow earlier ones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeContext(Vec<(String, LamType)>);

impl TypeContext {
    pub fn new() -> TypeContext {
        TypeContext(Vec::new())
    }

    pub fn lookup(&self, x: &str) -> Option<&LamType> {
        self.0.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn extended(&self, x: &str, ty: LamType) -> TypeContext {
        let mut v: Vec<_> = self.0.iter().filter(|(y, _)| y != x).cloned().collect();
        v.push((x.to_string(), ty));
        TypeContext(v)
    }

    pub fn entries(&self) -> &[(String, LamType)] {
        &self.0
    }
}

impl FromIterator<(String, LamType)> for TypeContext {
    fn from_iter<I: IntoIterator<Item = (String, LamType)>>(iter: I) -> TypeContext {
        iter.into_iter().fold(TypeContext::new(), |g, (x, t)| g.extended(&x, t))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LamError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("type mismatch in {place}: expected {expected}, found {found}")]
    Mismatch {
        place: &'static str,
        expected: LamType,
        found: LamType,
    },
    #[error("{place} expects {wanted}, found {found}")]
    Shape {
        place: &'static str,
        wanted: &'static str,
        found: LamType,
    },
    #[error("unknown base type `{0}`")]
    UnknownBase(String),
    #[error("the result type {0} mentions functions, which cannot be shown as process values")]
    HigherOrderResult(LamType),
    #[error("no value bound for `{0}`")]
    MissingValue(String),
    #[error("internal evaluation error: {0}")]
    Internal(String),
}

fn expect(place: &'static str, expected: &LamType, found: LamType) -> Result<(), LamError> {
    if *expected == found {
        Ok(())
    } else {
        Err(LamError::Mismatch {
            place,
            expected: expected.clone(),
            found,
        })
    }
}

fn check_type(ty: &LamType) -> Result<(), LamError> {
    match ty {
        LamType::Base(b) if b != "nat" => Err(LamError::UnknownBase(b.clone())),
        LamType::Prod(a, b) | LamType::Arrow(a, b) => {
            check_type(a)?;
            check_type(b)
        }
        _ => Ok(()),
    }
}

pub fn typecheck(ctx: &TypeContext, t: &LamTerm) -> Result<LamType, LamError> {
    use LamTerm::*;
    Ok(match t {
        Var(x) => ctx.lookup(x).cloned().ok_or_else(|| LamError::Unbound(x.clone()))?,
        Call(g, m) => {
            expect("function symbol argument", &g.domain(), typecheck(ctx, m)?)?;
            g.codomain()
        }
        Star => LamType::Unit,
        InEmpty(m, ty) => {
            check_type(ty)?;
            expect("`in`", &LamType::Empty, typecheck(ctx, m)?)?;
            ty.clone()
        }
        Pair(a, b) => LamType::prod(typecheck(ctx, a)?, typecheck(ctx, b)?),
        Fst(m) | Snd(m) => match typecheck(ctx, m)? {
            LamType::Prod(a, b) => {
                if matches!(t, Fst(_)) {
                    *a
                } else {
                    *b
                }
            }
            found => {
                return Err(LamError::Shape {
                    place: "projection",
                    wanted: "a product",
                    found,
                })
            }
        },
        Lam(x, ty, body) => {
            check_type(ty)?;
            LamType::arrow(ty.clone(), typecheck(&ctx.extended(x, ty.clone()), body)?)
        }
        Apply(f, a) => match typecheck(ctx, f)? {
            LamType::Arrow(dom, cod) => {
                expect("application", &dom, typecheck(ctx, a)?)?;
                *cod
            }
            found => {
                return Err(LamError::Shape {
                    place: "application",
                    wanted: "a function",
                    found,
                })
            }
        },
        Let(x, m, n) => {
            let ty = typecheck(ctx, m)?;
            typecheck(&ctx.extended(x, ty), n)?
        }
        IntChoice(a, b) | ExtChoice(a, b) => {
            let ta = typecheck(ctx, a)?;
            let place = if matches!(t, IntChoice(..)) { "`|~|`" } else { "`[]`" };
            expect(place, &ta, typecheck(ctx, b)?)?;
            ta
        }
        Prefix(_, m) | Conceal(_, m) | Relabel(_, m) => typecheck(ctx, m)?,
        Omega(ty) => {
            check_type(ty)?;
            ty.clone()
        }
        Par(a, b) | Interleave(a, b) => LamType::prod(typecheck(ctx, a)?, typecheck(ctx, b)?),
    })
}
