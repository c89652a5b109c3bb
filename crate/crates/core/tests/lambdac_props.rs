use std::collections::BTreeMap;

use csp_effects::gen::Gen;
use csp_effects::lambdac::sample::{sample_types, TermGen};
use csp_effects::lambdac::{
    decompose, is_value, parse_term, print_term, typecheck, Decomposition, EvalContext, LamTerm,
    LamType, Machine, SemValue, TypeContext,
};
use csp_effects::terms::Alphabet;
use proptest::prelude::*;

fn ab() -> Alphabet {
    Alphabet::new(&["a", "b"]).unwrap()
}

fn first_order_types() -> Vec<LamType> {
    sample_types().into_iter().filter(LamType::is_first_order).collect()
}

/// `⟦V⟧` for a closed value, through the same machine.
fn value_of(m: &mut Machine, v: &LamTerm) -> SemValue {
    let p = m.denote(v, &BTreeMap::new()).unwrap();
    let xs = p.xtraces();
    assert_eq!(xs.len(), 1, "a value denotes a single result");
    let (w, x) = xs.into_iter().next().unwrap();
    assert!(w.is_empty());
    m.extern_value(&x).unwrap()
}

fn is_redex(t: &LamTerm) -> bool {
    use LamTerm::*;
    match t {
        Apply(f, a) => matches!(**f, Lam(..)) && is_value(a),
        Fst(m) | Snd(m) | Call(_, m) | Let(_, m, _) => is_value(m) && !is_value(t),
        IntChoice(..) | Prefix(..) | Omega(_) | Conceal(..) | Relabel(..) | ExtChoice(..)
        | Par(..) | Interleave(..) => true,
        _ => false,
    }
}

/// Every way of writing `t` as `E[R]` with `R` a redex, read off the
/// grammar of evaluation contexts.
fn all_splits(t: &LamTerm) -> Vec<(EvalContext, LamTerm)> {
    use EvalContext as E;
    use LamTerm::*;
    let mut out = Vec::new();
    if is_redex(t) {
        out.push((E::Hole, t.clone()));
    }
    let under = |m: &LamTerm, wrap: &dyn Fn(Box<E>) -> E, out: &mut Vec<(E, LamTerm)>| {
        for (e, r) in all_splits(m) {
            out.push((wrap(Box::new(e)), r));
        }
    };
    match t {
        InEmpty(m, ty) => under(m, &|e| E::In(e, ty.clone()), &mut out),
        Pair(a, b) => {
            under(a, &|e| E::PairL(e, (**b).clone()), &mut out);
            if is_value(a) {
                under(b, &|e| E::PairR((**a).clone(), e), &mut out);
            }
        }
        Apply(f, a) => {
            under(f, &|e| E::AppL(e, (**a).clone()), &mut out);
            if is_value(f) {
                under(a, &|e| E::AppR((**f).clone(), e), &mut out);
            }
        }
        Fst(m) => under(m, &|e| E::Fst(e), &mut out),
        Snd(m) => under(m, &|e| E::Snd(e), &mut out),
        Call(g, m) => under(m, &|e| E::Call(*g, e), &mut out),
        Let(x, m, n) => under(m, &|e| E::Let(x.clone(), e, (**n).clone()), &mut out),
        _ => {}
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn well_typed_terms_denote_values_of_their_type(seed in any::<u64>(), k in 0usize..4) {
        let mut gen = Gen::new(seed);
        let mut tg = TermGen::new(&mut gen, 2);
        let ty = sample_types()[k].clone();
        let t = tg.term(&ty, &[], 8);
        prop_assert_eq!(typecheck(&TypeContext::new(), &t).unwrap(), ty.clone());
        let mut m = Machine::new();
        let p = m.denote(&t, &BTreeMap::new()).unwrap();
        for x in p.all_values() {
            prop_assert!(m.extern_value(&x).unwrap().has_type(&ty));
        }
    }

    #[test]
    fn substitution_is_environment_extension(seed in any::<u64>(), k in 0usize..3, j in 0usize..4) {
        let mut gen = Gen::new(seed);
        let mut tg = TermGen::new(&mut gen, 2);
        let sigma = sample_types()[j].clone();
        let ty = first_order_types()[k].clone();
        let body = tg.term(&ty, &[("x".into(), sigma.clone())], 8);
        let v = tg.value(&sigma, &[]);
        let mut m = Machine::new();
        let val = value_of(&mut m, &v);
        let env = BTreeMap::from([("x".to_string(), val)]);
        let direct = m.denote(&body.subst("x", &v), &BTreeMap::new()).unwrap();
        prop_assert_eq!(direct, m.denote(&body, &env).unwrap());
    }

    #[test]
    fn beta_for_values(seed in any::<u64>(), k in 0usize..3, j in 0usize..4) {
        let mut gen = Gen::new(seed);
        let mut tg = TermGen::new(&mut gen, 2);
        let sigma = sample_types()[j].clone();
        let ty = first_order_types()[k].clone();
        let body = tg.term(&ty, &[("x".into(), sigma.clone())], 8);
        let v = tg.value(&sigma, &[]);
        let mut m = Machine::new();
        let val = value_of(&mut m, &v);
        let env = BTreeMap::from([("x".to_string(), val)]);
        let redex = LamTerm::app(LamTerm::lam("x", sigma.clone(), body.clone()), v.clone());
        let expected = m.denote(&body, &env).unwrap();
        prop_assert_eq!(m.denote(&redex, &BTreeMap::new()).unwrap(), expected.clone());
        let bound = LamTerm::let_in("x", v, body);
        prop_assert_eq!(m.denote(&bound, &BTreeMap::new()).unwrap(), expected);
    }

    #[test]
    fn let_of_a_variable_is_the_term(seed in any::<u64>(), k in 0usize..3) {
        let mut gen = Gen::new(seed);
        let mut tg = TermGen::new(&mut gen, 2);
        let ty = first_order_types()[k].clone();
        let t = tg.term(&ty, &[], 8);
        let mut m = Machine::new();
        let wrapped = LamTerm::let_in("y", t.clone(), LamTerm::var("y"));
        prop_assert_eq!(m.denote(&wrapped, &BTreeMap::new()).unwrap(), m.denote(&t, &BTreeMap::new()).unwrap());
    }

    #[test]
    fn decomposition_is_unique(seed in any::<u64>(), k in 0usize..4) {
        let mut gen = Gen::new(seed);
        let mut tg = TermGen::new(&mut gen, 2);
        let t = tg.term(&sample_types()[k], &[], 10);
        let splits = all_splits(&t);
        match decompose(&t).unwrap() {
            Decomposition::Value => prop_assert!(splits.is_empty()),
            Decomposition::Split(e, r) => {
                prop_assert_eq!(splits.len(), 1);
                prop_assert_eq!(&splits[0], &(e.clone(), r.clone()));
                prop_assert_eq!(e.plug(r), t);
            }
        }
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>(), k in 0usize..4) {
        let mut gen = Gen::new(seed);
        let mut tg = TermGen::new(&mut gen, 2);
        let t = tg.term(&sample_types()[k], &[], 10);
        let printed = print_term(&t, &ab());
        prop_assert_eq!(parse_term(&printed, &ab()).unwrap(), t);
    }
}
