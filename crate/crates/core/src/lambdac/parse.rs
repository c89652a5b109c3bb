//! Parser for `.lamc` programs.
//!
//! ```text
//! program := "alphabet" a, b, ... ";" term
//! term    := "\" x ":" type "." term | "let" x "=" term "in" term | seq
//! seq     := choice (";" seq)?                      M ; N  is  let _ = M in N
//! choice  := par (("|~|" | "[]") par)*
//! par     := post (("||" | "|||") post)*
//! post    := app ("\" a | "[[" a "<-" b, ... "]]")*
//! app     := unary unary*
//! unary   := a "->" app | "fst" unary | "snd" unary | "succ" unary
//!          | "in" unary ":" type | atom
//! atom    := x | "*" | "skip" | numeral | "OMEGA" ":" type | "(" term ("," term)? ")"
//! type    := prod ("->" type)?      prod := tatom ("*" tatom)*
//! ```

use super::{LamTerm, LamType};
use crate::terms::{
    lookup_action, parse_alphabet_header, parse_relabel_pairs, Alphabet, Cursor, ParseError, Tok,
};

const KEYWORDS: &[&str] = &[
    "let", "in", "fst", "snd", "succ", "skip", "OMEGA", "nat", "unit", "empty", "alphabet",
];

/// Name bound by the `M ; N` sugar; it cannot be written in source text.
pub(crate) const SEQ_BINDER: &str = "%seq";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub alphabet: Alphabet,
    pub term: LamTerm,
}

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut cur = Cursor::new(text)?;
    let alphabet = parse_alphabet_header(&mut cur)?;
    let term = {
        let mut p = LamParser { cur, alphabet: &alphabet };
        let t = p.term()?;
        p.cur.expect_eof()?;
        t
    };
    Ok(Program { alphabet, term })
}

pub fn parse_term(text: &str, alphabet: &Alphabet) -> Result<LamTerm, ParseError> {
    let mut p = LamParser {
        cur: Cursor::new(text)?,
        alphabet,
    };
    let t = p.term()?;
    p.cur.expect_eof()?;
    Ok(t)
}

pub fn parse_type(text: &str) -> Result<LamType, ParseError> {
    let mut cur = Cursor::new(text)?;
    let t = ty(&mut cur)?;
    cur.expect_eof()?;
    Ok(t)
}

fn ty(cur: &mut Cursor) -> Result<LamType, ParseError> {
    let dom = prod_ty(cur)?;
    if cur.eat_punct("->") {
        return Ok(LamType::arrow(dom, ty(cur)?));
    }
    Ok(dom)
}

fn prod_ty(cur: &mut Cursor) -> Result<LamType, ParseError> {
    let mut t = atom_ty(cur)?;
    while cur.eat_punct("*") {
        t = LamType::prod(t, atom_ty(cur)?);
    }
    Ok(t)
}

fn atom_ty(cur: &mut Cursor) -> Result<LamType, ParseError> {
    if cur.eat_punct("(") {
        let t = ty(cur)?;
        cur.expect_punct(")")?;
        return Ok(t);
    }
    let (name, pos) = cur.expect_ident()?;
    match name.as_str() {
        "nat" => Ok(LamType::nat()),
        "unit" => Ok(LamType::Unit),
        "empty" => Ok(LamType::Empty),
        _ => Err(ParseError::syntax(pos, format!("unknown type `{name}`"))),
    }
}

struct LamParser<'a> {
    cur: Cursor,
    alphabet: &'a Alphabet,
}

impl LamParser<'_> {
    fn binder(&mut self) -> Result<String, ParseError> {
        let (x, pos) = self.cur.expect_ident()?;
        if KEYWORDS.contains(&x.as_str()) {
            return Err(ParseError::syntax(pos, format!("`{x}` is reserved")));
        }
        Ok(x)
    }

    fn at_lambda(&self) -> bool {
        self.cur.is_punct("\\")
            && matches!(self.cur.peek_at(1), Tok::Ident(_))
            && matches!(self.cur.peek_at(2), Tok::Punct(":"))
    }

    fn term(&mut self) -> Result<LamTerm, ParseError> {
        if self.at_lambda() {
            self.cur.bump();
            let x = self.binder()?;
            self.cur.expect_punct(":")?;
            let t = ty(&mut self.cur)?;
            self.cur.expect_punct(".")?;
            return Ok(LamTerm::lam(&x, t, self.term()?));
        }
        if self.cur.is_keyword("let") {
            self.cur.bump();
            let x = self.binder()?;
            self.cur.expect_punct("=")?;
            let m = self.term()?;
            self.cur.expect_keyword("in")?;
            return Ok(LamTerm::let_in(&x, m, self.term()?));
        }
        self.seq()
    }

    fn seq(&mut self) -> Result<LamTerm, ParseError> {
        let first = self.choice()?;
        if self.cur.eat_punct(";") {
            let rest = self.term()?;
            return Ok(LamTerm::let_in(SEQ_BINDER, first, rest));
        }
        Ok(first)
    }

    fn choice(&mut self) -> Result<LamTerm, ParseError> {
        let mut t = self.par()?;
        loop {
            if self.cur.eat_punct("|~|") {
                t = LamTerm::int(t, self.par()?);
            } else if self.cur.eat_punct("[]") {
                t = LamTerm::ext(t, self.par()?);
            } else {
                return Ok(t);
            }
        }
    }

    fn par(&mut self) -> Result<LamTerm, ParseError> {
        let mut t = self.post()?;
        loop {
            if self.cur.eat_punct("||") {
                t = LamTerm::par(t, self.post()?);
            } else if self.cur.eat_punct("|||") {
                t = LamTerm::interleave(t, self.post()?);
            } else {
                return Ok(t);
            }
        }
    }

    fn post(&mut self) -> Result<LamTerm, ParseError> {
        let mut t = self.app()?;
        loop {
            if self.cur.is_punct("\\") && !self.at_lambda() {
                self.cur.bump();
                let (name, pos) = self.cur.expect_ident()?;
                t = LamTerm::conceal(lookup_action(self.alphabet, &name, pos)?, t);
            } else if self.cur.is_punct("[") && matches!(self.cur.peek_at(1), Tok::Punct("[")) {
                self.cur.bump();
                self.cur.bump();
                let f = parse_relabel_pairs(&mut self.cur, self.alphabet)?;
                t = LamTerm::relabel(f, t);
            } else {
                return Ok(t);
            }
        }
    }

    fn starts_argument(&self) -> bool {
        match self.cur.peek() {
            Tok::Ident(s) => {
                !matches!(s.as_str(), "let" | "in")
                    && !matches!(self.cur.peek_at(1), Tok::Punct("->"))
            }
            Tok::Num(_) => true,
            Tok::Punct(p) => matches!(*p, "(" | "*"),
            Tok::Eof => false,
        }
    }

    fn app(&mut self) -> Result<LamTerm, ParseError> {
        let mut t = self.unary()?;
        while self.starts_argument() {
            t = LamTerm::app(t, self.unary()?);
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<LamTerm, ParseError> {
        let pos = self.cur.pos();
        if let Tok::Ident(s) = self.cur.peek().clone() {
            if matches!(self.cur.peek_at(1), Tok::Punct("->")) {
                self.cur.bump();
                self.cur.bump();
                let a = lookup_action(self.alphabet, &s, pos)?;
                return Ok(LamTerm::prefix(a, self.app()?));
            }
            match s.as_str() {
                "fst" => {
                    self.cur.bump();
                    return Ok(LamTerm::fst(self.unary()?));
                }
                "snd" => {
                    self.cur.bump();
                    return Ok(LamTerm::snd(self.unary()?));
                }
                "succ" => {
                    self.cur.bump();
                    return Ok(LamTerm::succ(self.unary()?));
                }
                "in" => {
                    self.cur.bump();
                    let m = self.unary()?;
                    self.cur.expect_punct(":")?;
                    return Ok(LamTerm::in_empty(m, ty(&mut self.cur)?));
                }
                _ => {}
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<LamTerm, ParseError> {
        let pos = self.cur.pos();
        match self.cur.peek().clone() {
            Tok::Num(n) => {
                self.cur.bump();
                Ok(LamTerm::numeral(n))
            }
            Tok::Punct("*") => {
                self.cur.bump();
                Ok(LamTerm::Star)
            }
            Tok::Punct("(") => {
                self.cur.bump();
                let t = self.term()?;
                let t = if self.cur.eat_punct(",") {
                    LamTerm::pair(t, self.term()?)
                } else {
                    t
                };
                self.cur.expect_punct(")")?;
                Ok(t)
            }
            Tok::Ident(s) => match s.as_str() {
                "skip" => {
                    self.cur.bump();
                    Ok(LamTerm::Star)
                }
                "OMEGA" => {
                    self.cur.bump();
                    self.cur.expect_punct(":")?;
                    Ok(LamTerm::Omega(ty(&mut self.cur)?))
                }
                _ if KEYWORDS.contains(&s.as_str()) => {
                    Err(ParseError::syntax(pos, format!("unexpected keyword `{s}`")))
                }
                _ => {
                    self.cur.bump();
                    Ok(LamTerm::Var(s))
                }
            },
            _ => Err(self.cur.unexpected("a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{Action, RelabelFn};

    fn ab() -> Alphabet {
        Alphabet::new(&["a", "b"]).unwrap()
    }

    fn p(s: &str) -> LamTerm {
        parse_term(s, &ab()).unwrap()
    }

    #[test]
    fn types() {
        assert_eq!(
            parse_type("nat * unit -> empty -> unit").unwrap(),
            LamType::arrow(
                LamType::prod(LamType::nat(), LamType::Unit),
                LamType::arrow(LamType::Empty, LamType::Unit)
            )
        );
        assert!(parse_type("bool").is_err());
    }

    #[test]
    fn lambda_application_and_numerals() {
        let t = p("(\\x:nat. succ x) 2");
        let f = LamTerm::lam("x", LamType::nat(), LamTerm::succ(LamTerm::var("x")));
        assert_eq!(t, LamTerm::app(f, LamTerm::numeral(2)));
        assert_eq!(p("f x y"), LamTerm::app(LamTerm::app(LamTerm::var("f"), LamTerm::var("x")), LamTerm::var("y")));
    }

    #[test]
    fn prefix_binds_tighter_than_choice() {
        let a = Action::new(0);
        let b = Action::new(1);
        assert_eq!(
            p("a -> * |~| b -> skip"),
            LamTerm::int(LamTerm::prefix(a, LamTerm::Star), LamTerm::prefix(b, LamTerm::Star))
        );
        assert_eq!(p("a -> b -> *"), LamTerm::prefix(a, LamTerm::prefix(b, LamTerm::Star)));
    }

    #[test]
    fn conceal_versus_lambda() {
        let a = Action::new(0);
        assert_eq!(p("(a -> *) \\ a"), LamTerm::conceal(a, LamTerm::prefix(a, LamTerm::Star)));
        assert_eq!(p("\\a:unit. a"), LamTerm::lam("a", LamType::Unit, LamTerm::var("a")));
    }

    #[test]
    fn relabel_parallel_and_omega() {
        let a = Action::new(0);
        let b = Action::new(1);
        let t = p("(a -> *)[[a <- b]] || OMEGA:unit ||| *");
        let lhs = LamTerm::relabel(RelabelFn::from_pairs([(a, b)]), LamTerm::prefix(a, LamTerm::Star));
        assert_eq!(
            t,
            LamTerm::interleave(LamTerm::par(lhs, LamTerm::Omega(LamType::Unit)), LamTerm::Star)
        );
    }

    #[test]
    fn let_and_sequencing() {
        let a = Action::new(0);
        assert_eq!(
            p("let x = 1 in a -> x ; x"),
            LamTerm::let_in(
                "x",
                LamTerm::numeral(1),
                LamTerm::let_in(SEQ_BINDER, LamTerm::prefix(a, LamTerm::var("x")), LamTerm::var("x"))
            )
        );
    }

    #[test]
    fn in_and_pairs() {
        let t = p("(in x : nat, fst (*, *))");
        assert_eq!(
            t,
            LamTerm::pair(
                LamTerm::in_empty(LamTerm::var("x"), LamType::nat()),
                LamTerm::fst(LamTerm::pair(LamTerm::Star, LamTerm::Star))
            )
        );
    }

    #[test]
    fn programs_and_errors() {
        let prog = parse_program("alphabet a, b;\n-- comment\na -> 0").unwrap();
        assert_eq!(prog.alphabet, ab());
        assert!(parse_program("a -> 0").is_err());
        assert!(parse_term("c -> *", &ab()).is_err());
        assert!(parse_term("let in = * in *", &ab()).is_err());
        assert!(parse_term("(*", &ab()).is_err());
    }
}
