use super::parse::SEQ_BINDER;
use super::{LamTerm, Prim};
use crate::terms::Alphabet;

// Binding strength, loosest first.
const TERM: u8 = 0;
const CHOICE: u8 = 1;
const PAR: u8 = 2;
const POST: u8 = 3;
const APP: u8 = 4;
const UNARY: u8 = 5;
const ATOM: u8 = 6;

/// Prints a term in the surface syntax; the output parses back to the same term.
pub fn print_term(t: &LamTerm, alphabet: &Alphabet) -> String {
    let mut out = String::new();
    go(t, alphabet, TERM, &mut out);
    out
}

fn numeral(t: &LamTerm) -> Option<u64> {
    match t {
        LamTerm::Call(Prim::Zero, u) if **u == LamTerm::Star => Some(0),
        LamTerm::Call(Prim::Succ, u) => numeral(u).map(|n| n + 1),
        _ => None,
    }
}

fn go(t: &LamTerm, ab: &Alphabet, ctx: u8, out: &mut String) {
    use LamTerm::*;
    if let Some(n) = numeral(t) {
        out.push_str(&n.to_string());
        return;
    }
    let level = match t {
        Lam(..) | Let(..) => TERM,
        IntChoice(..) | ExtChoice(..) => CHOICE,
        Par(..) | Interleave(..) => PAR,
        // a prefix body extends over a whole application
        Conceal(..) | Relabel(..) | Prefix(..) => POST,
        Apply(..) => APP,
        Call(..) | Fst(_) | Snd(_) | InEmpty(..) => UNARY,
        Var(_) | Star | Omega(_) | Pair(..) => ATOM,
    };
    let paren = level < ctx;
    if paren {
        out.push('(');
    }
    match t {
        Var(x) => out.push_str(x),
        Star => out.push('*'),
        Omega(ty) => out.push_str(&format!("OMEGA:{}", omega_type(ty))),
        Pair(a, b) => {
            out.push('(');
            go(a, ab, TERM, out);
            out.push_str(", ");
            go(b, ab, TERM, out);
            out.push(')');
        }
        Call(g, m) => {
            // `0` applied to a non-literal has no surface form of its own
            match g {
                Prim::Succ => out.push_str("succ "),
                Prim::Zero => out.push_str("(\\u:unit. 0) "),
            }
            go(m, ab, UNARY, out);
        }
        Fst(m) | Snd(m) => {
            out.push_str(if matches!(t, Fst(_)) { "fst " } else { "snd " });
            go(m, ab, UNARY, out);
        }
        InEmpty(m, ty) => {
            out.push_str("in ");
            go(m, ab, UNARY, out);
            out.push_str(&format!(" : {}", omega_type(ty)));
        }
        Prefix(a, m) => {
            out.push_str(ab.name(*a));
            out.push_str(" -> ");
            go(m, ab, APP, out);
        }
        Apply(f, a) => {
            go(f, ab, APP, out);
            out.push(' ');
            go(a, ab, UNARY, out);
        }
        Conceal(a, m) => {
            go(m, ab, POST, out);
            out.push_str(" \\ ");
            out.push_str(ab.name(*a));
        }
        Relabel(f, m) => {
            go(m, ab, POST, out);
            let pairs: Vec<String> = f
                .pairs()
                .map(|(x, y)| format!("{} <- {}", ab.name(x), ab.name(y)))
                .collect();
            out.push_str(&format!("[[{}]]", pairs.join(", ")));
        }
        Par(a, b) | Interleave(a, b) => {
            go(a, ab, PAR, out);
            out.push_str(if matches!(t, Par(..)) { " || " } else { " ||| " });
            go(b, ab, POST, out);
        }
        IntChoice(a, b) | ExtChoice(a, b) => {
            go(a, ab, CHOICE, out);
            out.push_str(if matches!(t, IntChoice(..)) { " |~| " } else { " [] " });
            go(b, ab, PAR, out);
        }
        Lam(x, ty, body) => {
            out.push_str(&format!("\\{x}:{ty}. "));
            go(body, ab, TERM, out);
        }
        Let(x, m, n) if x == SEQ_BINDER => {
            go(m, ab, CHOICE, out);
            out.push_str(" ; ");
            go(n, ab, TERM, out);
        }
        Let(x, m, n) => {
            out.push_str(&format!("let {x} = "));
            go(m, ab, TERM, out);
            out.push_str(" in ");
            go(n, ab, TERM, out);
        }
    }
    if paren {
        out.push(')');
    }
}

// Types printed after a `:` inside a term are parenthesized unless atomic,
// so that a following operator is never read as part of the type.
fn omega_type(ty: &super::LamType) -> String {
    use super::LamType;
    match ty {
        LamType::Prod(..) | LamType::Arrow(..) => format!("({ty})"),
        _ => ty.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_term;
    use super::*;

    #[test]
    fn round_trips() {
        let ab = Alphabet::new(&["a", "b"]).unwrap();
        for s in [
            "\\x:nat. succ x",
            "(\\x:nat. succ x) 2",
            "a -> * |~| b -> (OMEGA:unit [] *)",
            "let x = 1 in a -> x ; x",
            "(a -> *)[[a <- b]] \\ b",
            "fst ((a -> *) || (b -> 3)) ||| in y : (nat * unit)",
            "(\\f:nat -> nat. f 0) (\\x:nat. x)",
            "(a -> *, OMEGA:(unit * unit))",
        ] {
            let t = parse_term(s, &ab).unwrap();
            let printed = print_term(&t, &ab);
            assert_eq!(parse_term(&printed, &ab).unwrap(), t, "{s} printed as {printed}");
        }
    }
}
