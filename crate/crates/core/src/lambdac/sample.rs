//! Random well-typed terms and evaluation contexts.

use super::{Constructor, EvalContext, LamTerm, LamType, Prim};
use crate::gen::Gen;
use crate::terms::{Action, RelabelFn};

/// Types that sampled holes and terms range over.
pub fn sample_types() -> Vec<LamType> {
    vec![
        LamType::Unit,
        LamType::nat(),
        LamType::prod(LamType::Unit, LamType::nat()),
        LamType::arrow(LamType::nat(), LamType::nat()),
    ]
}

pub struct TermGen<'g> {
    pub gen: &'g mut Gen,
    pub actions: usize,
    fresh: usize,
}

impl<'g> TermGen<'g> {
    pub fn new(gen: &'g mut Gen, actions: usize) -> TermGen<'g> {
        TermGen {
            gen,
            actions,
            fresh: 0,
        }
    }

    fn fresh(&mut self) -> String {
        self.fresh += 1;
        format!("v{}", self.fresh)
    }

    fn action(&mut self) -> Action {
        self.gen.action(self.actions)
    }

    fn small_type(&mut self) -> LamType {
        let tys = sample_types();
        tys[self.gen.below(tys.len())].clone()
    }

    /// A closed-under-`vars` value of type `ty`.
    pub fn value(&mut self, ty: &LamType, vars: &[(String, LamType)]) -> LamTerm {
        let here: Vec<&String> = vars.iter().filter(|(_, t)| t == ty).map(|(x, _)| x).collect();
        if !here.is_empty() && self.gen.chance(0.4) {
            return LamTerm::Var(here[self.gen.below(here.len())].clone());
        }
        match ty {
            LamType::Unit => LamTerm::Star,
            LamType::Base(_) => LamTerm::numeral(self.gen.below(3) as u64),
            LamType::Prod(a, b) => LamTerm::pair(self.value(a, vars), self.value(b, vars)),
            LamType::Arrow(a, b) => {
                let x = self.fresh();
                let mut inner = vars.to_vec();
                inner.push((x.clone(), (**a).clone()));
                let body = self.term(b, &inner, 3);
                LamTerm::lam(&x, (**a).clone(), body)
            }
            LamType::Empty => panic!("the empty type has no values"),
        }
    }

    /// A term of type `ty` with at most about `size` nodes of effects.
    pub fn term(&mut self, ty: &LamType, vars: &[(String, LamType)], size: usize) -> LamTerm {
        if size <= 1 || self.gen.chance(0.25) {
            if *ty == LamType::Empty {
                return LamTerm::Omega(LamType::Empty);
            }
            return self.value(ty, vars);
        }
        let s = size - 1;
        // `empty` has no values, so no projections out of pairs containing it
        let kinds = if *ty == LamType::Empty { 9 } else { 11 };
        match self.gen.below(kinds) {
            0 | 1 => {
                let a = self.action();
                LamTerm::prefix(a, self.term(ty, vars, s))
            }
            2 | 3 => LamTerm::int(self.term(ty, vars, s / 2), self.term(ty, vars, s / 2)),
            4 => LamTerm::Omega(ty.clone()),
            5 => LamTerm::ext(self.term(ty, vars, s / 2), self.term(ty, vars, s / 2)),
            6 => {
                let a = self.action();
                LamTerm::conceal(a, self.term(ty, vars, s))
            }
            7 => {
                let (a, b) = (self.action(), self.action());
                LamTerm::relabel(RelabelFn::from_pairs([(a, b)]), self.term(ty, vars, s))
            }
            8 => {
                let sigma = self.small_type();
                let x = self.fresh();
                let m = self.term(&sigma, vars, s / 2);
                let mut inner = vars.to_vec();
                inner.push((x.clone(), sigma));
                LamTerm::let_in(&x, m, self.term(ty, &inner, s / 2))
            }
            9 => self.eliminate(ty, vars, s),
            _ => match ty {
                LamType::Prod(a, b) => {
                    let (m, n) = (self.term(a, vars, s / 2), self.term(b, vars, s / 2));
                    match self.gen.below(3) {
                        0 => LamTerm::par(m, n),
                        1 => LamTerm::interleave(m, n),
                        _ => LamTerm::pair(m, n),
                    }
                }
                LamType::Base(_) => LamTerm::succ(self.term(ty, vars, s)),
                _ => self.term(ty, vars, s),
            },
        }
    }

    // A term of type `ty` whose outermost construct is an elimination form.
    fn eliminate(&mut self, ty: &LamType, vars: &[(String, LamType)], s: usize) -> LamTerm {
        match self.gen.below(3) {
            0 => {
                let other = self.small_type();
                let p = LamType::prod(ty.clone(), other);
                LamTerm::fst(self.term(&p, vars, s))
            }
            1 => {
                let dom = self.small_type();
                let f = LamType::arrow(dom.clone(), ty.clone());
                LamTerm::app(self.term(&f, vars, s / 2), self.term(&dom, vars, s / 2))
            }
            _ => {
                let m = self.term(&LamType::Empty, vars, s);
                LamTerm::in_empty(m, ty.clone())
            }
        }
    }

    /// Adds one frame around `e`, whose result type is `ty`.
    pub fn frame(&mut self, e: EvalContext, ty: &LamType) -> (EvalContext, LamType) {
        let b = Box::new(e);
        let pick = self.gen.below(6);
        match (pick, ty) {
            (0, LamType::Prod(l, r)) => {
                if self.gen.chance(0.5) {
                    (EvalContext::Fst(b), (**l).clone())
                } else {
                    (EvalContext::Snd(b), (**r).clone())
                }
            }
            (0, LamType::Base(_)) => (EvalContext::Call(Prim::Succ, b), LamType::nat()),
            (0, LamType::Unit) => (EvalContext::Call(Prim::Zero, b), LamType::nat()),
            (0, LamType::Arrow(dom, cod)) => {
                let m = self.term(dom, &[], 3);
                (EvalContext::AppL(b, m), (**cod).clone())
            }
            (0, LamType::Empty) => {
                let sigma = self.small_type();
                (EvalContext::In(b, sigma.clone()), sigma)
            }
            (1, _) => {
                let sigma = self.small_type();
                let m = self.term(&sigma, &[], 3);
                (EvalContext::PairL(b, m), LamType::prod(ty.clone(), sigma))
            }
            (2, _) => {
                let sigma = self.small_type();
                let v = self.value(&sigma, &[]);
                (EvalContext::PairR(v, b), LamType::prod(sigma, ty.clone()))
            }
            (3, _) => {
                let x = self.fresh();
                let sigma = self.small_type();
                let body = self.term(&sigma, &[(x.clone(), ty.clone())], 4);
                (EvalContext::AppR(LamTerm::lam(&x, ty.clone(), body), b), sigma)
            }
            (4, _) => {
                let x = self.fresh();
                let sigma = self.small_type();
                let body = self.term(&sigma, &[(x.clone(), ty.clone())], 4);
                (EvalContext::Let(x, b, body), sigma)
            }
            _ => {
                // keep types from growing without bound
                match ty {
                    LamType::Prod(l, _) => (EvalContext::Fst(b), (**l).clone()),
                    _ => (*b, ty.clone()),
                }
            }
        }
    }

    pub fn context(&mut self, hole: &LamType, frames: usize) -> (EvalContext, LamType) {
        let mut e = EvalContext::Hole;
        let mut ty = hole.clone();
        for _ in 0..frames {
            (e, ty) = self.frame(e, &ty);
        }
        (e, ty)
    }
}

/// One instance of `E[op(M₁,…,Mₙ)] = op(E[M₁],…,E[Mₙ])`.
#[derive(Clone, Debug)]
pub struct CommutationSample {
    pub op: Constructor,
    pub ctx: EvalContext,
    pub args: Vec<LamTerm>,
    pub hole: LamType,
}

pub fn commutation_samples(seed: u64, n: usize, actions: usize) -> Vec<CommutationSample> {
    let mut gen = Gen::new(seed);
    let mut tg = TermGen::new(&mut gen, actions);
    (0..n)
        .map(|i| {
            let op = match i % 3 {
                0 => Constructor::IntChoice,
                1 => Constructor::Prefix(tg.action()),
                _ => Constructor::Omega,
            };
            let hole = tg.small_type();
            let frames = 1 + tg.gen.below(3);
            let (ctx, _) = tg.context(&hole, frames);
            let args = (0..op.arity()).map(|_| tg.term(&hole, &[], 4)).collect();
            CommutationSample { op, ctx, args, hole }
        })
        .collect()
}
