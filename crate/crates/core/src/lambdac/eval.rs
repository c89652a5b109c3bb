//! Call-by-value monadic semantics.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{typecheck, LamError, LamTerm, LamType, Prim, TypeContext};
use crate::failures::XProcess;
use crate::freealgebra::{eta, hom_conceal, hom_relabel, kleisli};
use crate::operators::{extern_choice, intern_choice, interleave, omega, parallel, prefix};
use crate::terms::Value;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub env: BTreeMap<String, SemValue>,
    pub param: String,
    pub body: LamTerm,
}

/// Elements of `⟦σ⟧`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemValue {
    Nat(u64),
    Unit,
    Pair(Box<SemValue>, Box<SemValue>),
    Fun(Arc<Closure>),
}

impl SemValue {
    pub fn pair(a: SemValue, b: SemValue) -> SemValue {
        SemValue::Pair(Box::new(a), Box::new(b))
    }

    pub fn has_type(&self, ty: &LamType) -> bool {
        match (self, ty) {
            (SemValue::Nat(_), LamType::Base(b)) => b == "nat",
            (SemValue::Unit, LamType::Unit) => true,
            (SemValue::Pair(a, b), LamType::Prod(s, t)) => a.has_type(s) && b.has_type(t),
            (SemValue::Fun(_), LamType::Arrow(..)) => true,
            _ => false,
        }
    }
}

const CLOSURE_TAG: &str = "λ#";

/// Evaluator state: the table of closures that have been embedded as
/// process values, so that structurally equal closures share a name.
#[derive(Default)]
pub struct Machine {
    closures: Vec<Arc<Closure>>,
}

impl Machine {
    pub fn new() -> Machine {
        Machine::default()
    }

    pub fn intern(&mut self, v: &SemValue) -> Value {
        match v {
            SemValue::Unit => Value::atom("*"),
            SemValue::Nat(n) => Value::atom(&n.to_string()),
            SemValue::Pair(a, b) => Value::pair(self.intern(a), self.intern(b)),
            SemValue::Fun(c) => {
                let k = match self.closures.iter().position(|d| d == c) {
                    Some(k) => k,
                    None => {
                        self.closures.push(c.clone());
                        self.closures.len() - 1
                    }
                };
                Value::atom(&format!("{CLOSURE_TAG}{k}"))
            }
        }
    }

    pub fn extern_value(&self, v: &Value) -> Result<SemValue, LamError> {
        match v {
            Value::Pair(a, b) => Ok(SemValue::pair(self.extern_value(a)?, self.extern_value(b)?)),
            Value::Atom(s) if &**s == "*" => Ok(SemValue::Unit),
            Value::Atom(s) => {
                if let Ok(n) = s.parse::<u64>() {
                    return Ok(SemValue::Nat(n));
                }
                s.strip_prefix(CLOSURE_TAG)
                    .and_then(|k| k.parse::<usize>().ok())
                    .and_then(|k| self.closures.get(k))
                    .map(|c| SemValue::Fun(c.clone()))
                    .ok_or_else(|| LamError::Internal(format!("`{s}` is not a known value")))
            }
        }
    }

    /// `k†(p)` where `k` works on semantic values.
    fn bind(
        &mut self,
        p: &XProcess,
        mut k: impl FnMut(&mut Machine, SemValue) -> Result<XProcess, LamError>,
    ) -> Result<XProcess, LamError> {
        let mut table = BTreeMap::new();
        for x in p.all_values() {
            let v = self.extern_value(&x)?;
            table.insert(x, k(self, v)?);
        }
        kleisli(&|x: &Value| table.get(x).cloned(), p)
            .map_err(|e| LamError::Internal(e.to_string()))
    }

    fn ret(&mut self, v: &SemValue) -> XProcess {
        eta(self.intern(v))
    }

    pub fn apply(&mut self, f: &SemValue, a: SemValue) -> Result<XProcess, LamError> {
        match f {
            SemValue::Fun(c) => {
                let mut env = c.env.clone();
                env.insert(c.param.clone(), a);
                self.denote(&c.body, &env)
            }
            other => Err(LamError::Internal(format!("applied a non-function {other:?}"))),
        }
    }

    pub fn denote(
        &mut self,
        t: &LamTerm,
        env: &BTreeMap<String, SemValue>,
    ) -> Result<XProcess, LamError> {
        use LamTerm::*;
        match t {
            Var(x) => {
                let v = env.get(x).ok_or_else(|| LamError::MissingValue(x.clone()))?.clone();
                Ok(self.ret(&v))
            }
            Star => Ok(self.ret(&SemValue::Unit)),
            Call(g, m) => {
                let p = self.denote(m, env)?;
                let g = *g;
                self.bind(&p, move |mc, v| {
                    let r = match (g, v) {
                        (Prim::Zero, _) => SemValue::Nat(0),
                        (Prim::Succ, SemValue::Nat(n)) => SemValue::Nat(n + 1),
                        (_, other) => {
                            return Err(LamError::Internal(format!("succ of {other:?}")))
                        }
                    };
                    Ok(mc.ret(&r))
                })
            }
            InEmpty(m, _) => {
                let p = self.denote(m, env)?;
                self.bind(&p, |_, v| {
                    Err(LamError::Internal(format!("a value {v:?} of the empty type")))
                })
            }
            Pair(a, b) => {
                let p = self.denote(a, env)?;
                self.bind(&p, |mc, x| {
                    let q = mc.denote(b, env)?;
                    mc.bind(&q, |mc, y| Ok(mc.ret(&SemValue::pair(x.clone(), y))))
                })
            }
            Fst(m) | Snd(m) => {
                let first = matches!(t, Fst(_));
                let p = self.denote(m, env)?;
                self.bind(&p, |mc, v| match v {
                    SemValue::Pair(a, b) => Ok(mc.ret(if first { &a } else { &b })),
                    other => Err(LamError::Internal(format!("projection of {other:?}"))),
                })
            }
            Lam(x, _, body) => {
                let c = Closure {
                    env: env.clone(),
                    param: x.clone(),
                    body: (**body).clone(),
                };
                Ok(self.ret(&SemValue::Fun(Arc::new(c))))
            }
            Apply(f, a) => {
                let p = self.denote(f, env)?;
                self.bind(&p, |mc, fv| {
                    let q = mc.denote(a, env)?;
                    mc.bind(&q, |mc, av| mc.apply(&fv, av))
                })
            }
            Let(x, m, n) => {
                let p = self.denote(m, env)?;
                self.bind(&p, |mc, v| {
                    let mut env2 = env.clone();
                    env2.insert(x.clone(), v);
                    mc.denote(n, &env2)
                })
            }
            IntChoice(a, b) => Ok(intern_choice(&self.denote(a, env)?, &self.denote(b, env)?)),
            Prefix(a, m) => Ok(prefix(*a, &self.denote(m, env)?)),
            Omega(_) => Ok(omega()),
            Conceal(a, m) => Ok(hom_conceal(*a, &self.denote(m, env)?)),
            Relabel(f, m) => Ok(hom_relabel(f, &self.denote(m, env)?)),
            ExtChoice(a, b) => Ok(extern_choice(&self.denote(a, env)?, &self.denote(b, env)?)),
            Par(a, b) => Ok(parallel(&self.denote(a, env)?, &self.denote(b, env)?)),
            Interleave(a, b) => Ok(interleave(&self.denote(a, env)?, &self.denote(b, env)?)),
        }
    }
}

/// `⟦Γ ⊢ M : σ⟧(env)`, after typechecking `M` and checking that `env`
/// covers `Γ`.
pub fn denote_term(
    ctx: &TypeContext,
    t: &LamTerm,
    env: &BTreeMap<String, SemValue>,
) -> Result<(LamType, XProcess), LamError> {
    let ty = typecheck(ctx, t)?;
    for (x, sigma) in ctx.entries() {
        let v = env.get(x).ok_or_else(|| LamError::MissingValue(x.clone()))?;
        if !v.has_type(sigma) {
            return Err(LamError::Internal(format!("`{x}` is bound to {v:?}, not a {sigma}")));
        }
    }
    let p = Machine::new().denote(t, env)?;
    Ok((ty, p))
}

/// Typechecks and evaluates a closed program whose result type is first order.
pub fn run(t: &LamTerm) -> Result<(LamType, XProcess), LamError> {
    let ty = typecheck(&TypeContext::new(), t)?;
    if !ty.is_first_order() {
        return Err(LamError::HigherOrderResult(ty));
    }
    let p = Machine::new().denote(t, &BTreeMap::new())?;
    Ok((ty, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Action;

    fn a() -> Action {
        Action::new(0)
    }

    fn unit_val() -> XProcess {
        eta(Value::atom("*"))
    }

    #[test]
    fn star_is_pure() {
        assert_eq!(run(&LamTerm::Star).unwrap().1, unit_val());
    }

    #[test]
    fn omega_is_the_unit_of_internal_choice() {
        let t = LamTerm::int(LamTerm::Star, LamTerm::Omega(LamType::Unit));
        assert_eq!(run(&t).unwrap().1, unit_val());
    }

    #[test]
    fn parallel_synchronises_and_pairs() {
        let m = LamTerm::prefix(a(), LamTerm::Star);
        let (ty, p) = run(&LamTerm::par(m.clone(), m)).unwrap();
        assert_eq!(ty, LamType::prod(LamType::Unit, LamType::Unit));
        let u = Value::atom("*");
        assert_eq!(p, prefix(a(), &eta(Value::pair(u.clone(), u))));
    }

    #[test]
    fn numerals_and_beta() {
        let f = LamTerm::lam("x", LamType::nat(), LamTerm::succ(LamTerm::var("x")));
        let (_, p) = run(&LamTerm::app(f, LamTerm::numeral(2))).unwrap();
        assert_eq!(p, eta(Value::atom("3")));
    }

    #[test]
    fn effects_in_function_position() {
        // (a -> λx.x ⊓ λx.succ x) 0
        let id = LamTerm::lam("x", LamType::nat(), LamTerm::var("x"));
        let sc = LamTerm::lam("x", LamType::nat(), LamTerm::succ(LamTerm::var("x")));
        let t = LamTerm::app(LamTerm::prefix(a(), LamTerm::int(id, sc)), LamTerm::zero());
        let (_, p) = run(&t).unwrap();
        let expect = prefix(
            a(),
            &intern_choice(&eta(Value::atom("0")), &eta(Value::atom("1"))),
        );
        assert_eq!(p, expect);
    }

    #[test]
    fn higher_order_results_are_rejected() {
        let id = LamTerm::lam("x", LamType::Unit, LamTerm::var("x"));
        assert!(matches!(run(&id), Err(LamError::HigherOrderResult(_))));
    }

    #[test]
    fn equal_closures_share_a_name() {
        let mut m = Machine::new();
        let id = LamTerm::lam("x", LamType::Unit, LamTerm::var("x"));
        let t = LamTerm::int(id.clone(), id);
        let p = m.denote(&t, &BTreeMap::new()).unwrap();
        assert_eq!(p.all_values().len(), 1);
    }

    #[test]
    fn open_terms_need_their_environment() {
        let ctx = TypeContext::new().extended("n", LamType::nat());
        let t = LamTerm::succ(LamTerm::var("n"));
        let env = BTreeMap::from([("n".to_string(), SemValue::Nat(4))]);
        assert_eq!(denote_term(&ctx, &t, &env).unwrap().1, eta(Value::atom("5")));
        assert!(denote_term(&ctx, &t, &BTreeMap::new()).is_err());
        let wrong = BTreeMap::from([("n".to_string(), SemValue::Unit)]);
        assert!(denote_term(&ctx, &t, &wrong).is_err());
    }

    #[test]
    fn empty_type_denotes_without_values() {
        // in (a -> OMEGA : empty) : nat
        let t = LamTerm::in_empty(LamTerm::prefix(a(), LamTerm::Omega(LamType::Empty)), LamType::nat());
        let (ty, p) = run(&t).unwrap();
        assert_eq!(ty, LamType::nat());
        assert_eq!(p, prefix(a(), &omega()));
    }
}
