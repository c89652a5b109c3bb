use std::collections::BTreeMap;

use thiserror::Error;

use super::{Action, Alphabet, ProcTerm, RelabelFn, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown action `{name}` at byte {pos}")]
    UnknownAction { pos: usize, name: String },
    #[error("duplicate action `{name}` in deterministic choice at byte {pos}")]
    DuplicateAction { pos: usize, name: String },
    #[error("undefined name `{name}` at byte {pos}")]
    Undefined { pos: usize, name: String },
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
}

impl ParseError {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            pos,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Num(u64),
    Punct(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: usize,
}

// Longest first, so that prefixes of longer tokens never win.
const PUNCT: &[&str] = &[
    "|||<", "|||>", "|||", "|~|", "||", "|", "[]", "[", "]", "->", "<-", "\\", ";", ",", "=", "(",
    ")", ":", ".", "*",
];

pub(crate) struct Lexer;

impl Lexer {
    pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
        let mut out = Vec::new();
        let mut i = 0;
        let bytes = text.as_bytes();
        'outer: while i < text.len() {
            let rest = &text[i..];
            let c = rest.chars().next().expect("nonempty rest");
            if c.is_whitespace() {
                i += c.len_utf8();
                continue;
            }
            if rest.starts_with("--") {
                while i < text.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            if c.is_ascii_digit() {
                let len = rest.chars().take_while(|c| c.is_ascii_digit()).count();
                let n = rest[..len]
                    .parse::<u64>()
                    .map_err(|_| ParseError::syntax(i, "numeral too large"))?;
                out.push(Token { tok: Tok::Num(n), pos: i });
                i += len;
                continue;
            }
            if c.is_alphabetic() || c == '_' || c == '✓' {
                let len: usize = rest
                    .chars()
                    .take_while(|c| c.is_alphanumeric() || *c == '_' || *c == '✓')
                    .map(char::len_utf8)
                    .sum();
                out.push(Token {
                    tok: Tok::Ident(rest[..len].to_string()),
                    pos: i,
                });
                i += len;
                continue;
            }
            for p in PUNCT {
                if rest.starts_with(p) {
                    out.push(Token { tok: Tok::Punct(p), pos: i });
                    i += p.len();
                    continue 'outer;
                }
            }
            return Err(ParseError::syntax(i, format!("unexpected character `{c}`")));
        }
        out.push(Token { tok: Tok::Eof, pos: text.len() });
        Ok(out)
    }
}

/// Token cursor shared by the process and λ-term parsers.
pub(crate) struct Cursor {
    toks: Vec<Token>,
    i: usize,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Cursor, ParseError> {
        Ok(Cursor {
            toks: Lexer::tokenize(text)?,
            i: 0,
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let j = (self.i + k).min(self.toks.len() - 1);
        &self.toks[j].tok
    }

    pub fn pos(&self) -> usize {
        self.toks[self.i].pos
    }

    pub fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    pub fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    pub fn is_keyword(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == k)
    }

    pub fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_punct(&mut self, p: &str) -> Result<(), ParseError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{p}`")))
        }
    }

    pub fn expect_keyword(&mut self, k: &str) -> Result<(), ParseError> {
        if self.is_keyword(k) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{k}`")))
        }
    }

    pub fn expect_ident(&mut self) -> Result<(String, usize), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.pos();
                self.bump();
                Ok((s, pos))
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    pub fn expect_eof(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => Err(self.unexpected("end of input")),
        }
    }

    pub fn unexpected(&self, wanted: &str) -> ParseError {
        let found = match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Punct(p) => format!("`{p}`"),
            Tok::Eof => "end of input".to_string(),
        };
        ParseError::syntax(self.pos(), format!("expected {wanted}, found {found}"))
    }
}

const KEYWORDS: &[&str] = &["STOP", "OMEGA", "SKIP", "val", "alphabet"];

struct ProcParser<'a> {
    cur: Cursor,
    alphabet: &'a Alphabet,
    defs: BTreeMap<String, ProcTerm>,
}

/// Parses `defn* expr` against a known alphabet.
pub fn parse_process(text: &str, alphabet: &Alphabet) -> Result<ProcTerm, ParseError> {
    let mut p = ProcParser {
        cur: Cursor::new(text)?,
        alphabet,
        defs: BTreeMap::new(),
    };
    p.body()
}

/// Parses a complete file: an `alphabet` header, then `defn* expr`.
pub fn parse_file(text: &str) -> Result<(Alphabet, ProcTerm), ParseError> {
    let mut cur = Cursor::new(text)?;
    let alphabet = parse_alphabet_header(&mut cur)?;
    let mut p = ProcParser {
        cur,
        alphabet: &alphabet,
        defs: BTreeMap::new(),
    };
    let t = p.body()?;
    Ok((alphabet, t))
}

/// Action names of a process text without a header, in order of first
/// appearance: identifiers guarding a prefix, hidden by `\`, or mentioned
/// in a relabelling.
pub fn infer_alphabet(text: &str) -> Result<Vec<String>, ParseError> {
    let toks = Lexer::tokenize(text)?;
    let mut names: Vec<String> = Vec::new();
    let is = |i: usize, p: &str| matches!(toks.get(i), Some(Token { tok: Tok::Punct(q), .. }) if *q == p);
    for (i, t) in toks.iter().enumerate() {
        let Tok::Ident(name) = &t.tok else { continue };
        let action = is(i + 1, "->")
            || is(i + 1, "<-")
            || (i > 0 && (is(i - 1, "\\") || is(i - 1, "<-")));
        if action && !names.contains(name) {
            names.push(name.clone());
        }
    }
    Ok(names)
}

pub(crate) fn parse_alphabet_header(cur: &mut Cursor) -> Result<Alphabet, ParseError> {
    cur.expect_keyword("alphabet")?;
    let mut names = vec![cur.expect_ident()?.0];
    while cur.eat_punct(",") {
        names.push(cur.expect_ident()?.0);
    }
    cur.expect_punct(";")?;
    Alphabet::new(&names)
}

pub(crate) fn parse_value(cur: &mut Cursor) -> Result<Value, ParseError> {
    if cur.eat_punct("(") {
        let x = parse_value(cur)?;
        cur.expect_punct(",")?;
        let y = parse_value(cur)?;
        cur.expect_punct(")")?;
        return Ok(Value::pair(x, y));
    }
    match cur.peek().clone() {
        Tok::Ident(s) => {
            cur.bump();
            Ok(Value::atom(&s))
        }
        Tok::Num(n) => {
            cur.bump();
            Ok(Value::atom(&n.to_string()))
        }
        Tok::Punct("*") => {
            cur.bump();
            Ok(Value::atom("*"))
        }
        _ => Err(cur.unexpected("a value")),
    }
}

pub(crate) fn lookup_action(
    alphabet: &Alphabet,
    name: &str,
    pos: usize,
) -> Result<Action, ParseError> {
    alphabet.lookup(name).ok_or_else(|| ParseError::UnknownAction {
        pos,
        name: name.to_string(),
    })
}

pub(crate) fn parse_relabel_pairs(
    cur: &mut Cursor,
    alphabet: &Alphabet,
) -> Result<RelabelFn, ParseError> {
    // the opening `[` `[` has been consumed
    let mut pairs = Vec::new();
    loop {
        let (from, fpos) = cur.expect_ident()?;
        cur.expect_punct("<-")?;
        let (to, tpos) = cur.expect_ident()?;
        let from = lookup_action(alphabet, &from, fpos)?;
        let to = lookup_action(alphabet, &to, tpos)?;
        if pairs.iter().any(|(a, _)| *a == from) {
            return Err(ParseError::syntax(fpos, "action relabelled twice"));
        }
        pairs.push((from, to));
        if !cur.eat_punct(",") {
            break;
        }
    }
    cur.expect_punct("]")?;
    cur.expect_punct("]")?;
    Ok(RelabelFn::from_pairs(pairs))
}

impl ProcParser<'_> {
    fn body(&mut self) -> Result<ProcTerm, ParseError> {
        while self.at_definition() {
            let (name, pos) = self.cur.expect_ident()?;
            if KEYWORDS.contains(&name.as_str()) {
                return Err(ParseError::syntax(pos, format!("`{name}` is reserved")));
            }
            if self.defs.contains_key(&name) {
                return Err(ParseError::syntax(pos, format!("`{name}` is defined twice")));
            }
            self.cur.expect_punct("=")?;
            let t = self.seq_expr(false)?;
            self.cur.expect_punct(";")?;
            self.defs.insert(name, t);
        }
        let t = self.expr()?;
        self.cur.expect_eof()?;
        Ok(t)
    }

    fn at_definition(&self) -> bool {
        matches!(self.cur.peek(), Tok::Ident(_)) && matches!(self.cur.peek_at(1), Tok::Punct("="))
    }

    fn expr(&mut self) -> Result<ProcTerm, ParseError> {
        self.seq_expr(true)
    }

    // Inside a definition body a top-level `;` ends the definition, so
    // sequencing there must be parenthesized.
    fn seq_expr(&mut self, allow_seq: bool) -> Result<ProcTerm, ParseError> {
        let first = self.choice()?;
        if allow_seq && self.cur.eat_punct(";") {
            let rest = self.seq_expr(true)?;
            return Ok(ProcTerm::seq(first, rest));
        }
        Ok(first)
    }

    fn choice(&mut self) -> Result<ProcTerm, ParseError> {
        let mut t = self.par()?;
        loop {
            if self.cur.eat_punct("|~|") {
                t = ProcTerm::int(t, self.par()?);
            } else if self.cur.eat_punct("[]") {
                t = ProcTerm::ext(t, self.par()?);
            } else {
                return Ok(t);
            }
        }
    }

    fn par(&mut self) -> Result<ProcTerm, ParseError> {
        let mut t = self.post()?;
        loop {
            if self.cur.eat_punct("||") {
                t = ProcTerm::par(t, self.post()?);
            } else if self.cur.eat_punct("|||") {
                t = ProcTerm::interleave(t, self.post()?);
            } else if self.cur.eat_punct("|||<") {
                t = ProcTerm::interleave_l(t, self.post()?);
            } else if self.cur.eat_punct("|||>") {
                t = ProcTerm::interleave_r(t, self.post()?);
            } else {
                return Ok(t);
            }
        }
    }

    fn post(&mut self) -> Result<ProcTerm, ParseError> {
        let mut t = self.atom()?;
        loop {
            if self.cur.eat_punct("\\") {
                let (name, pos) = self.cur.expect_ident()?;
                t = ProcTerm::conceal(lookup_action(self.alphabet, &name, pos)?, t);
            } else if self.cur.is_punct("[") && matches!(self.cur.peek_at(1), Tok::Punct("[")) {
                self.cur.bump();
                self.cur.bump();
                let f = parse_relabel_pairs(&mut self.cur, self.alphabet)?;
                t = ProcTerm::relabel(f, t);
            } else {
                return Ok(t);
            }
        }
    }

    fn atom(&mut self) -> Result<ProcTerm, ParseError> {
        let pos = self.cur.pos();
        match self.cur.peek().clone() {
            Tok::Ident(s) => match s.as_str() {
                "STOP" => {
                    self.cur.bump();
                    Ok(ProcTerm::Stop)
                }
                "OMEGA" => {
                    self.cur.bump();
                    Ok(ProcTerm::Omega)
                }
                "SKIP" => {
                    self.cur.bump();
                    Ok(ProcTerm::Skip)
                }
                "val" => {
                    self.cur.bump();
                    Ok(ProcTerm::ValueConst(parse_value(&mut self.cur)?))
                }
                _ if matches!(self.cur.peek_at(1), Tok::Punct("->")) => {
                    self.cur.bump();
                    self.cur.bump();
                    let a = lookup_action(self.alphabet, &s, pos)?;
                    Ok(ProcTerm::prefix(a, self.atom()?))
                }
                _ => {
                    self.cur.bump();
                    self.defs.get(&s).cloned().ok_or(ParseError::Undefined { pos, name: s })
                }
            },
            Tok::Punct("(") => {
                self.cur.bump();
                let t = self.expr()?;
                self.cur.expect_punct(")")?;
                Ok(t)
            }
            Tok::Punct("[") => {
                self.cur.bump();
                self.det_choice()
            }
            _ => Err(self.cur.unexpected("a process")),
        }
    }

    fn det_choice(&mut self) -> Result<ProcTerm, ParseError> {
        let omega = self.cur.is_keyword("OMEGA");
        let mut branches: Vec<(Action, ProcTerm)> = Vec::new();
        if omega {
            self.cur.bump();
            while self.cur.eat_punct("|") {
                branches.push(self.branch(&branches)?);
            }
        } else {
            branches.push(self.branch(&branches)?);
            while self.cur.eat_punct("|") {
                branches.push(self.branch(&branches)?);
            }
        }
        self.cur.expect_punct("]")?;
        let built = if omega {
            ProcTerm::det_omega(branches)
        } else {
            ProcTerm::det(branches)
        };
        Ok(built.expect("guards checked while parsing"))
    }

    fn branch(&mut self, seen: &[(Action, ProcTerm)]) -> Result<(Action, ProcTerm), ParseError> {
        let (name, pos) = self.cur.expect_ident()?;
        let a = lookup_action(self.alphabet, &name, pos)?;
        if seen.iter().any(|(b, _)| *b == a) {
            return Err(ParseError::DuplicateAction { pos, name });
        }
        self.cur.expect_punct("->")?;
        Ok((a, self.expr()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infers_action_names() {
        let names = infer_alphabet("(b -> STOP [] a -> c -> SKIP) \\ d [[b <- e]]").unwrap();
        assert_eq!(names, vec!["b", "a", "c", "d", "e"]);
        assert!(infer_alphabet("STOP [] OMEGA").unwrap().is_empty());
    }

    fn ab() -> Alphabet {
        Alphabet::new(&["a", "b"]).unwrap()
    }

    fn a() -> Action {
        Action::new(0)
    }

    fn b() -> Action {
        Action::new(1)
    }

    #[test]
    fn parses_literals() {
        assert_eq!(parse_process("STOP", &ab()).unwrap(), ProcTerm::Stop);
        assert_eq!(parse_process("OMEGA", &ab()).unwrap(), ProcTerm::Omega);
        assert_eq!(parse_process("[OMEGA]", &ab()).unwrap(), ProcTerm::det_omega(vec![]).unwrap());
    }

    #[test]
    fn parses_choice_of_prefixes() {
        let t = parse_process("a -> STOP [] b -> STOP", &ab()).unwrap();
        let expect = ProcTerm::ext(
            ProcTerm::prefix(a(), ProcTerm::Stop),
            ProcTerm::prefix(b(), ProcTerm::Stop),
        );
        assert_eq!(t, expect);
    }

    #[test]
    fn duplicate_guard_is_an_error() {
        let err = parse_process("[a -> STOP | a -> OMEGA]", &ab()).unwrap_err();
        assert!(matches!(err, ParseError::DuplicateAction { ref name, .. } if name == "a"));
    }

    #[test]
    fn unknown_action_is_an_error() {
        let err = parse_process("c -> STOP", &ab()).unwrap_err();
        assert!(matches!(err, ParseError::UnknownAction { .. }));
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_process("a -> ", &ab()).unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                pos: 5,
                msg: "expected a process, found end of input".into()
            }
        );
    }

    #[test]
    fn definitions_and_sequencing() {
        let src = "P = a -> SKIP ; Q = b -> SKIP ; P ; Q";
        let t = parse_process(src, &ab()).unwrap();
        let p = ProcTerm::prefix(a(), ProcTerm::Skip);
        let q = ProcTerm::prefix(b(), ProcTerm::Skip);
        assert_eq!(t, ProcTerm::seq(p, q));
        let t = parse_process("P = a -> SKIP ; b -> SKIP ; P", &ab()).unwrap();
        assert_eq!(
            t,
            ProcTerm::seq(
                ProcTerm::prefix(b(), ProcTerm::Skip),
                ProcTerm::prefix(a(), ProcTerm::Skip)
            )
        );
        let t = parse_process("P = (a -> SKIP ; b -> SKIP); P", &ab()).unwrap();
        assert!(matches!(t, ProcTerm::Seq(..)));
    }

    #[test]
    fn forward_reference_is_an_error() {
        let err = parse_process("P = Q ; Q = STOP ; P", &ab()).unwrap_err();
        assert!(matches!(err, ParseError::Undefined { ref name, .. } if name == "Q"));
    }

    #[test]
    fn postfix_operators_bind_to_prefix_terms() {
        let t = parse_process("(a -> STOP) \\ a", &ab()).unwrap();
        assert_eq!(t, ProcTerm::conceal(a(), ProcTerm::prefix(a(), ProcTerm::Stop)));
        let t = parse_process("STOP[[a <- b]]", &ab()).unwrap();
        assert_eq!(t, ProcTerm::relabel(RelabelFn::from_pairs([(a(), b())]), ProcTerm::Stop));
    }

    #[test]
    fn file_header() {
        let (alpha, t) = parse_file("alphabet a, b, c;\n-- comment\nc -> STOP").unwrap();
        assert_eq!(alpha.len(), 3);
        assert_eq!(t, ProcTerm::prefix(Action::new(2), ProcTerm::Stop));
        assert!(parse_file("alphabet a, a; STOP").is_err());
    }

    #[test]
    fn values() {
        let t = parse_process("val (x,(y,z)) |~| val x", &ab()).unwrap();
        let v = Value::pair(Value::atom("x"), Value::pair(Value::atom("y"), Value::atom("z")));
        assert_eq!(t, ProcTerm::int(ProcTerm::ValueConst(v), ProcTerm::val("x")));
    }
}
