mod common;

use common::{alphabet, sets, Oracle, Sets};
use csp_effects::selfcheck::{conceal_witness, par_witness, search_conceal_witness, search_par_witness};
use csp_effects::terms::{Alphabet, ProcTerm};
use csp_effects::{denote, ValueEnv};

fn explicit(t: &ProcTerm, ab: &Alphabet) -> Sets {
    sets(&denote(t, &ValueEnv::identity()).unwrap(), ab)
}

#[test]
fn concealment_does_not_distribute_over_external_choice() {
    let ab = alphabet(3);
    let o = Oracle::new(&ab);
    let (f, g, a) = conceal_witness();
    let (f, g) = (explicit(&f, &ab), explicit(&g, &ab));
    let lhs = o.conceal(a, &o.ext(&f, &g));
    let (fa, ga) = (o.conceal(a, &f), o.conceal(a, &g));
    assert_ne!(lhs, o.ext(&fa, &ga));
    assert_ne!(lhs, o.int(&fa, &ga));
}

#[test]
fn concealment_witness_is_the_first_found() {
    assert_eq!(search_conceal_witness(3), Some(conceal_witness()));
    // nothing smaller exists
    assert_eq!(search_conceal_witness(2), None);
}

#[test]
fn parallel_does_not_distribute_over_external_choice() {
    let ab = alphabet(2);
    let o = Oracle::new(&ab);
    let (f, f2, g) = par_witness();
    let (f, f2, g) = (explicit(&f, &ab), explicit(&f2, &ab), explicit(&g, &ab));
    let lhs = o.par(&o.ext(&f, &f2), &g);
    let rhs = o.ext(&o.par(&f, &g), &o.par(&f2, &g));
    assert_ne!(lhs, rhs);
    // the right side can refuse everything at the start, the left cannot
    let all = ab.all();
    assert!(rhs.failures.contains(&(vec![], all)));
    assert!(!lhs.failures.contains(&(vec![], all)));
}

#[test]
fn parallel_witness_is_the_first_found() {
    assert_eq!(search_par_witness(2, 5), Some(par_witness()));
}
