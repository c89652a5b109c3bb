use csp_effects::gen::Gen;
use csp_effects::terms::{parse_file, parse_process, print_process, Alphabet, ParseError, Signature, Value};
use csp_effects::terms::{Branches, ProcTerm};
use proptest::prelude::*;

/// Drops relabellings by the empty map, which print as their operand.
fn strip(t: &ProcTerm) -> ProcTerm {
    use ProcTerm::*;
    let b = |u: &ProcTerm| Box::new(strip(u));
    let bs = |bs: &Branches| Branches::new(bs.iter().map(|(a, u)| (*a, strip(u))).collect()).unwrap();
    match t {
        Relabel(f, u) if f.is_empty() => strip(u),
        Relabel(f, u) => Relabel(f.clone(), b(u)),
        Prefix(a, u) => Prefix(*a, b(u)),
        Conceal(a, u) => Conceal(*a, b(u)),
        IntChoice(u, v) => IntChoice(b(u), b(v)),
        ExtChoice(u, v) => ExtChoice(b(u), b(v)),
        Par(u, v) => Par(b(u), b(v)),
        Interleave(u, v) => Interleave(b(u), b(v)),
        InterleaveL(u, v) => InterleaveL(b(u), b(v)),
        InterleaveR(u, v) => InterleaveR(b(u), b(v)),
        Seq(u, v) => Seq(b(u), b(v)),
        DetChoice(x) => DetChoice(bs(x)),
        DetChoiceOmega(x) => DetChoiceOmega(bs(x)),
        Stop | Omega | Skip | ValueConst(_) => t.clone(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn printing_round_trips(seed in any::<u64>(), size in 1usize..12) {
        let ab = Alphabet::new(&["a", "b", "c"]).unwrap();
        let t = Gen::new(seed).term(Signature::Full, 3, size, &[Value::atom("x"), Value::tick()]);
        let printed = print_process(&t, &ab);
        prop_assert_eq!(parse_process(&printed, &ab).unwrap(), strip(&t));
    }
}

#[test]
fn definitions_are_inlined() {
    let (ab, t) = parse_file("alphabet a, b; P = a -> STOP; Q = P [] b -> P; Q \\ a").unwrap();
    let direct = parse_process("(a -> STOP [] b -> a -> STOP) \\ a", &ab).unwrap();
    assert_eq!(t, direct);
}

#[test]
fn errors_carry_positions() {
    let ab = Alphabet::new(&["a"]).unwrap();
    assert!(matches!(
        parse_process("a -> z -> STOP", &ab),
        Err(ParseError::UnknownAction { pos: 5, .. })
    ));
    assert!(matches!(
        parse_process("[a -> STOP | a -> OMEGA]", &ab),
        Err(ParseError::DuplicateAction { .. })
    ));
    assert!(matches!(parse_file("alphabet a; P = Q; STOP"), Err(ParseError::Undefined { .. })));
}
