use super::ast::{Atom, Formula, Var};
use super::{Signature, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    Int(usize),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Colon,
    Amp,
    Bar,
    BarBar,
    Tilde,
    Diamond,
    Arrow,
    Bang,
    EqSign,
    NotEq,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Lower(s) | Tok::Upper(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::End => "end of input".into(),
            other => {
                let s = match other {
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBrack => "[",
                    Tok::RBrack => "]",
                    Tok::Comma => ",",
                    Tok::Semi => ";",
                    Tok::Colon => ":",
                    Tok::Amp => "&",
                    Tok::Bar => "|",
                    Tok::BarBar => "||",
                    Tok::Tilde => "~",
                    Tok::Diamond => "<>",
                    Tok::Arrow => "->",
                    Tok::Bang => "!",
                    Tok::EqSign => "=",
                    Tok::NotEq => "!=",
                    _ => unreachable!(),
                };
                format!("`{s}`")
            }
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let two = |a: u8, b: u8| bytes[i] == a && bytes.get(i + 1) == Some(&b);
        let tok = if two(b'|', b'|') {
            i += 2;
            Tok::BarBar
        } else if two(b'<', b'>') {
            i += 2;
            Tok::Diamond
        } else if two(b'-', b'>') {
            i += 2;
            Tok::Arrow
        } else if two(b'!', b'=') {
            i += 2;
            Tok::NotEq
        } else if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = text[start..i].to_string();
            if c.is_ascii_lowercase() {
                Tok::Lower(word)
            } else {
                Tok::Upper(word)
            }
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i]
                .parse()
                .map_err(|_| SyntaxError::Unexpected { pos: start, found: text[start..i].into(), expected: "a small integer".into() })?;
            Tok::Int(n)
        } else {
            i += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                ':' => Tok::Colon,
                '&' => Tok::Amp,
                '|' => Tok::Bar,
                '~' => Tok::Tilde,
                '!' => Tok::Bang,
                '=' => Tok::EqSign,
                _ => {
                    let ch = text[start..].chars().next().unwrap_or(c);
                    return Err(SyntaxError::Unexpected {
                        pos: start,
                        found: format!("`{ch}`"),
                        expected: "a formula".into(),
                    });
                }
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

const KEYWORDS: &[&str] = &["exists", "forall", "top", "bot"];

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    sig: &'a Signature,
}

/// Parses `text` against `sig`. Relations must be declared with the arity
/// they are used at; custom atoms `D:name(..)` are accepted without a check.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula, SyntaxError> {
    let mut p = Parser { toks: lex(text)?, at: 0, sig };
    let f = p.formula()?;
    p.expect(Tok::End, "end of input")?;
    Ok(f)
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &str) -> SyntaxError {
        SyntaxError::Unexpected { pos: self.pos(), found: self.peek().describe(), expected: expected.into() }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), SyntaxError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.classical_or()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(Formula::int_impl(lhs, rhs));
        }
        Ok(lhs)
    }

    fn classical_or(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.tensor_or()?;
        while self.eat(&Tok::BarBar) {
            let rhs = self.tensor_or()?;
            acc = Formula::classical_or(acc, rhs);
        }
        Ok(acc)
    }

    fn tensor_or(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.conjunction()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn var(&mut self) -> Result<Var, SyntaxError> {
        match self.peek().clone() {
            Tok::Lower(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.bump();
                Ok(Var::new(name))
            }
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::contra_neg(self.unary()?))
            }
            Tok::Diamond => {
                self.bump();
                Ok(Formula::possibly(self.unary()?))
            }
            Tok::Lower(w) if w == "exists" || w == "forall" => {
                self.bump();
                let v = self.var()?;
                let body = self.unary()?;
                Ok(if w == "exists" { Formula::exists(v, body) } else { Formula::forall(v, body) })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, SyntaxError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::LBrack => {
                self.bump();
                let body = self.formula()?;
                self.expect(Tok::RBrack, "`]`")?;
                Formula::bracket(body).map_err(|e| e.at(pos))
            }
            Tok::Bang => {
                self.bump();
                match self.peek().clone() {
                    Tok::Upper(name) if name != "NE" && !(name == "D" && *self.peek_at(1) == Tok::Colon) => {
                        self.bump();
                        let args = self.relation_args(&name, pos)?;
                        Ok(Formula::NegRel(name, args))
                    }
                    _ => Err(SyntaxError::NegationOnNonLiteral { pos }),
                }
            }
            Tok::Upper(name) if name == "NE" => {
                self.bump();
                Ok(Formula::ne())
            }
            Tok::Upper(name) if name == "D" && *self.peek_at(1) == Tok::Colon => {
                self.bump();
                self.bump();
                let custom = match self.bump() {
                    Tok::Lower(n) | Tok::Upper(n) => n,
                    _ => return Err(SyntaxError::Unexpected { pos: self.pos(), found: "token".into(), expected: "a dependency name".into() }),
                };
                self.expect(Tok::LParen, "`(`")?;
                let args = self.tuple()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Formula::Atom(Atom::Custom(custom, args)))
            }
            Tok::Upper(name) => {
                self.bump();
                let args = self.relation_args(&name, pos)?;
                Ok(Formula::Rel(name, args))
            }
            Tok::Lower(w) if w == "top" => {
                self.bump();
                Ok(Formula::top())
            }
            Tok::Lower(w) if w == "bot" => {
                self.bump();
                Ok(Formula::bot())
            }
            Tok::Lower(w) if *self.peek_at(1) == Tok::LParen && !KEYWORDS.contains(&w.as_str()) => {
                self.bump();
                self.bump();
                let atom = self.atom_body(&w, pos)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Formula::Atom(atom))
            }
            Tok::Lower(_) => {
                let a = self.var()?;
                let neg = match self.bump() {
                    Tok::EqSign => false,
                    Tok::NotEq => true,
                    _ => return Err(SyntaxError::Unexpected { pos: self.toks[self.at - 1].1, found: self.toks[self.at - 1].0.describe(), expected: "`=` or `!=`".into() }),
                };
                let b = self.var()?;
                Ok(if neg { Formula::Neq(a, b) } else { Formula::Eq(a, b) })
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn relation_args(&mut self, name: &str, pos: usize) -> Result<Vec<Var>, SyntaxError> {
        let args = if self.eat(&Tok::LParen) {
            let a = self.tuple()?;
            self.expect(Tok::RParen, "`)`")?;
            a
        } else {
            Vec::new()
        };
        match self.sig.arity(name) {
            None => Err(SyntaxError::UnknownRelation { name: name.into(), pos }),
            Some(k) if k != args.len() => {
                Err(SyntaxError::ArityMismatch { name: name.into(), expected: k, found: args.len(), pos })
            }
            Some(_) => Ok(args),
        }
    }

    /// Variables separated by commas and/or whitespace.
    fn tuple(&mut self) -> Result<Vec<Var>, SyntaxError> {
        let mut out = Vec::new();
        while let Tok::Lower(name) = self.peek().clone() {
            if KEYWORDS.contains(&name.as_str()) {
                break;
            }
            self.bump();
            out.push(Var::new(name));
            self.eat(&Tok::Comma);
        }
        Ok(out)
    }

    fn number(&mut self) -> Result<usize, SyntaxError> {
        self.eat(&Tok::Comma);
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn sides(&mut self, n: usize) -> Result<Vec<Vec<Var>>, SyntaxError> {
        let mut out = vec![self.tuple()?];
        for _ in 1..n {
            self.expect(Tok::Semi, "`;`")?;
            out.push(self.tuple()?);
        }
        Ok(out)
    }

    fn single(&mut self, pos: usize) -> Result<Var, SyntaxError> {
        let t = self.tuple()?;
        match <[Var; 1]>::try_from(t) {
            Ok([v]) => Ok(v),
            Err(t) => Err(SyntaxError::AtomShape { pos, detail: format!("expected one variable, found {}", t.len()) }),
        }
    }

    fn atom_body(&mut self, kw: &str, pos: usize) -> Result<Atom, SyntaxError> {
        let atom = match kw {
            "const" => Atom::Const(self.tuple()?),
            "all" => Atom::All(self.tuple()?),
            "ncon" => Atom::NCon(self.tuple()?),
            "dep" | "inc" | "ndep" | "ninc" => {
                let mut s = self.sides(2)?;
                let (w, v) = (s.pop().unwrap(), s.pop().unwrap());
                if (kw == "inc" || kw == "ninc") && v.len() != w.len() {
                    return Err(SyntaxError::AtomShape {
                        pos,
                        detail: format!("{kw} needs tuples of equal length, found {} and {}", v.len(), w.len()),
                    });
                }
                match kw {
                    "dep" => Atom::Dep(v, w),
                    "inc" => Atom::Inc(v, w),
                    "ndep" => Atom::NDep(v, w),
                    _ => Atom::NInc(v, w),
                }
            }
            "ind" | "nind" => {
                let mut s = self.sides(3)?;
                let (w, v, u) = (s.pop().unwrap(), s.pop().unwrap(), s.pop().unwrap());
                if kw == "ind" {
                    Atom::Ind(u, v, w)
                } else {
                    Atom::NInd(u, v, w)
                }
            }
            "geq" => {
                let v = self.tuple()?;
                Atom::Geq(v, self.number()?)
            }
            "count_eq" | "count_neq" | "cocount_eq" | "cocount_neq" => {
                let v = self.single(pos)?;
                let k = self.number()?;
                match kw {
                    "count_eq" => Atom::CountEq(v, k),
                    "count_neq" => Atom::CountNeq(v, k),
                    "cocount_eq" => Atom::CoCountEq(v, k),
                    _ => Atom::CoCountNeq(v, k),
                }
            }
            other => return Err(SyntaxError::UnknownAtom { name: other.into(), pos }),
        };
        Ok(atom)
    }
}
