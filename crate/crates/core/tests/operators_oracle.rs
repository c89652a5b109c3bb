mod common;

use common::{alphabet, atoms, random_process, sets, Oracle};
use csp_effects::freealgebra::{eta, kleisli};
use csp_effects::operators as ops;
use csp_effects::terms::{Action, RelabelFn, Value};
use proptest::prelude::*;

fn setup() -> impl Strategy<Value = (usize, u64, u64)> {
    (1usize..=3, any::<u64>(), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn constants_and_prefix(n in 1usize..=3, seed in any::<u64>(), k in 0usize..3) {
        let ab = alphabet(n);
        let o = Oracle::new(&ab);
        let p = random_process(seed, n, 3, &atoms(&["x"]));
        let a = Action::new(k % n);
        prop_assert_eq!(sets(&ops::stop(), &ab), o.stop());
        prop_assert_eq!(sets(&ops::omega(), &ab), o.omega());
        prop_assert_eq!(sets(&eta(Value::atom("x")), &ab), o.eta(Value::atom("x")));
        prop_assert_eq!(sets(&ops::prefix(a, &p), &ab), o.prefix(a, &sets(&p, &ab)));
    }

    #[test]
    fn choices((n, s1, s2) in setup()) {
        let ab = alphabet(n);
        let o = Oracle::new(&ab);
        let vals = atoms(&["x", "y"]);
        let (p, q) = (random_process(s1, n, 3, &vals), random_process(s2, n, 3, &vals));
        let (sp, sq) = (sets(&p, &ab), sets(&q, &ab));
        prop_assert_eq!(sets(&ops::intern_choice(&p, &q), &ab), o.int(&sp, &sq));
        prop_assert_eq!(sets(&ops::extern_choice(&p, &q), &ab), o.ext(&sp, &sq));
    }

    #[test]
    fn relabelling_and_concealment((n, s1, s2) in setup()) {
        let ab = alphabet(n);
        let o = Oracle::new(&ab);
        let p = random_process(s1, n, 3, &atoms(&["x"]));
        let sp = sets(&p, &ab);
        let a = Action::new((s2 % n as u64) as usize);
        let b = Action::new((s2 / 7 % n as u64) as usize);
        for f in [RelabelFn::from_pairs([(a, b)]), RelabelFn::from_pairs([(a, b), (b, a)])] {
            prop_assert_eq!(sets(&ops::relabel(&f, &p), &ab), o.relabel(&f, &sp));
        }
        prop_assert_eq!(sets(&ops::conceal(a, &p), &ab), o.conceal(a, &sp));
    }

    #[test]
    fn parallel_and_interleavings((n, s1, s2) in setup()) {
        let ab = alphabet(n);
        let o = Oracle::new(&ab);
        let p = random_process(s1, n, 3, &atoms(&["x", "y"]));
        let q = random_process(s2, n, 2, &atoms(&["u"]));
        let (sp, sq) = (sets(&p, &ab), sets(&q, &ab));
        prop_assert_eq!(sets(&ops::parallel(&p, &q), &ab), o.par(&sp, &sq));
        prop_assert_eq!(sets(&ops::interleave(&p, &q), &ab), o.interleave(&sp, &sq));
        prop_assert_eq!(sets(&ops::interleave_left(&p, &q), &ab), o.interleave_left(&sp, &sq));
        prop_assert_eq!(sets(&ops::interleave_right(&p, &q), &ab), o.interleave_right(&sp, &sq));
    }

    #[test]
    fn kleisli_extension((n, s1, s2) in setup()) {
        let ab = alphabet(n);
        let o = Oracle::new(&ab);
        let xs = atoms(&["x", "y"]);
        let p = random_process(s1, n, 3, &xs);
        let gx = random_process(s2, n, 2, &atoms(&["z"]));
        let gy = random_process(s2.wrapping_add(1), n, 2, &atoms(&["x"]));
        let g = |v: &Value| Some(if *v == xs[0] { gx.clone() } else { gy.clone() });
        let og = |v: &Value| sets(&g(v).unwrap(), &ab);
        prop_assert_eq!(sets(&kleisli(&g, &p).unwrap(), &ab), o.kleisli(&og, &sets(&p, &ab)));
    }

    #[test]
    fn sequencing((n, s1, s2) in setup()) {
        let ab = alphabet(n);
        let o = Oracle::new(&ab);
        let tick = [Value::tick()];
        let (p, q) = (random_process(s1, n, 3, &tick), random_process(s2, n, 3, &tick));
        prop_assert_eq!(sets(&ops::seq(&p, &q).unwrap(), &ab), o.seq(&sets(&p, &ab), &sets(&q, &ab)));
    }
}

#[test]
fn sequencing_rejects_other_values() {
    let p = eta(Value::atom("x"));
    assert!(ops::seq(&p, &ops::skip()).is_err());
}
