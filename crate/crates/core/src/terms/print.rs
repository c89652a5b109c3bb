use super::{Alphabet, ProcTerm};

const SEQ: u8 = 0;
const CHOICE: u8 = 1;
const PAR: u8 = 2;
const POST: u8 = 3;
const PREFIX: u8 = 4;
const ATOM: u8 = 5;

fn level(t: &ProcTerm) -> u8 {
    use ProcTerm::*;
    match t {
        Seq(..) => SEQ,
        IntChoice(..) | ExtChoice(..) => CHOICE,
        Par(..) | Interleave(..) | InterleaveL(..) | InterleaveR(..) => PAR,
        Relabel(f, u) if f.is_empty() => level(u),
        Relabel(..) | Conceal(..) => POST,
        Prefix(..) => PREFIX,
        Stop | Omega | Skip | ValueConst(_) | DetChoice(_) | DetChoiceOmega(_) => ATOM,
    }
}

/// Renders a term in the concrete syntax accepted by [`super::parse_process`].
///
/// A relabelling with an empty map is the identity and prints as its operand.
pub fn print_process(t: &ProcTerm, alphabet: &Alphabet) -> String {
    let mut out = String::new();
    Printer { alphabet, out: &mut out }.term(t, SEQ);
    out
}

struct Printer<'a> {
    alphabet: &'a Alphabet,
    out: &'a mut String,
}

impl Printer<'_> {
    fn term(&mut self, t: &ProcTerm, min: u8) {
        if level(t) < min {
            self.out.push('(');
            self.bare(t);
            self.out.push(')');
        } else {
            self.bare(t);
        }
    }

    fn post_operand(&mut self, t: &ProcTerm) {
        if level(t) < POST || level(t) == PREFIX {
            self.out.push('(');
            self.bare(t);
            self.out.push(')');
        } else {
            self.bare(t);
        }
    }

    fn binary(&mut self, l: &ProcTerm, op: &str, r: &ProcTerm, lmin: u8, rmin: u8) {
        self.term(l, lmin);
        self.out.push(' ');
        self.out.push_str(op);
        self.out.push(' ');
        self.term(r, rmin);
    }

    fn bare(&mut self, t: &ProcTerm) {
        use ProcTerm::*;
        match t {
            Stop => self.out.push_str("STOP"),
            Omega => self.out.push_str("OMEGA"),
            Skip => self.out.push_str("SKIP"),
            ValueConst(v) => {
                self.out.push_str("val ");
                self.out.push_str(&v.to_string());
            }
            Prefix(a, u) => {
                self.out.push_str(self.alphabet.name(*a));
                self.out.push_str(" -> ");
                self.term(u, PREFIX);
            }
            IntChoice(l, r) => self.binary(l, "|~|", r, CHOICE, PAR),
            ExtChoice(l, r) => self.binary(l, "[]", r, CHOICE, PAR),
            Par(l, r) => self.binary(l, "||", r, PAR, POST),
            Interleave(l, r) => self.binary(l, "|||", r, PAR, POST),
            InterleaveL(l, r) => self.binary(l, "|||<", r, PAR, POST),
            InterleaveR(l, r) => self.binary(l, "|||>", r, PAR, POST),
            Seq(l, r) => self.binary(l, ";", r, CHOICE, SEQ),
            DetChoice(bs) | DetChoiceOmega(bs) => {
                self.out.push('[');
                let mut first = true;
                if matches!(t, DetChoiceOmega(_)) {
                    self.out.push_str("OMEGA");
                    first = false;
                }
                for (a, u) in bs.iter() {
                    if !first {
                        self.out.push_str(" | ");
                    }
                    first = false;
                    self.out.push_str(self.alphabet.name(*a));
                    self.out.push_str(" -> ");
                    self.term(u, SEQ);
                }
                self.out.push(']');
            }
            Conceal(a, u) => {
                self.post_operand(u);
                self.out.push_str(" \\ ");
                self.out.push_str(self.alphabet.name(*a));
            }
            Relabel(f, u) if f.is_empty() => self.bare(u),
            Relabel(f, u) => {
                self.post_operand(u);
                self.out.push_str("[[");
                let pairs: Vec<String> = f
                    .pairs()
                    .map(|(x, y)| format!("{} <- {}", self.alphabet.name(x), self.alphabet.name(y)))
                    .collect();
                self.out.push_str(&pairs.join(", "));
                self.out.push_str("]]");
            }
        }
    }
}
