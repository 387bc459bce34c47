use std::collections::BTreeSet;

use thiserror::Error;

use super::{Atom, Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: expected one of [{}], found {found}", expected.join(", "))]
pub struct SyntaxError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Forall,
    Exists,
    Dot,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    LParen,
    RParen,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DoubleArrow => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'.' => Tok::Dot,
            b'~' => Tok::Tilde,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::DoubleArrow
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                match &text[start..=i] {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    s => Tok::Ident(s.to_string()),
                }
            }
            _ => {
                let found = text[start..].chars().next().map(|ch| format!("`{ch}`")).unwrap_or_default();
                return Err(SyntaxError {
                    offset: start,
                    expected: vec!["a token".into()],
                    found,
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    /// (source name, bound name) for binders on the current path.
    scope: Vec<(String, String)>,
    /// Every identifier in the input plus every name generated so far.
    taken: BTreeSet<String>,
}

/// Parses the ASCII surface syntax.
///
/// Bound variables are renamed so that no two binders on one root-to-leaf
/// path share a name; unbound identifiers become constants.
pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let toks = lex(text)?;
    let taken = toks
        .iter()
        .filter_map(|(t, _)| match t {
            Tok::Ident(s) => Some(s.clone()),
            _ => None,
        })
        .collect();
    let mut p = Parser {
        toks,
        pos: 0,
        scope: Vec::new(),
        taken,
    };
    let f = p.formula()?;
    p.expect(&Tok::Eof, &["end of input"])?;
    Ok(f)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> SyntaxError {
        SyntaxError {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: &Tok, expected: &[&str]) -> Result<(), SyntaxError> {
        if self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Tok::Forall | Tok::Exists => self.quant(),
            _ => self.binary(),
        }
    }

    fn quant(&mut self) -> Result<Formula, SyntaxError> {
        let universal = self.bump() == Tok::Forall;
        let name = self.ident()?;
        self.expect(&Tok::Dot, &["`.`"])?;
        let bound = self.bind_name(&name);
        self.scope.push((name, bound.clone()));
        let body = self.formula();
        self.scope.pop();
        let body = body?;
        Ok(if universal {
            Formula::forall(bound, body)
        } else {
            Formula::exists(bound, body)
        })
    }

    fn bind_name(&mut self, name: &str) -> String {
        let clash = self.scope.iter().any(|(_, b)| b == name);
        if !clash {
            return name.to_string();
        }
        let fresh = (1..)
            .map(|n| format!("{name}_{n}"))
            .find(|cand| !self.taken.contains(cand))
            .expect("unbounded counter");
        self.taken.insert(fresh.clone());
        fresh
    }

    fn binary(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.unary()?;
        let make: fn(Formula, Formula) -> Formula = match self.peek() {
            Tok::Amp => Formula::and,
            Tok::Bar => Formula::or,
            Tok::Arrow => Formula::implies,
            Tok::DoubleArrow => Formula::iff,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.unary()?;
        Ok(make(lhs, rhs))
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(&Tok::RParen, &["`)`", "`&`", "`|`", "`->`", "`<->`"])?;
                Ok(f)
            }
            Tok::Ident(_) => self.atom(),
            // a quantifier in operand position scopes over the rest of the input
            Tok::Forall | Tok::Exists => self.quant(),
            _ => Err(self.error(&["`~`", "`(`", "`forall`", "`exists`", "identifier"])),
        }
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        let predicate = self.ident()?;
        let args = if self.peek() == &Tok::LParen {
            self.bump();
            self.term_list()?
        } else {
            Vec::new()
        };
        Ok(Formula::Atom(Atom { predicate, args }))
    }

    fn term_list(&mut self) -> Result<Vec<Term>, SyntaxError> {
        let mut args = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                    args.push(self.term()?);
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(args);
                }
                _ => return Err(self.error(&["`,`", "`)`"])),
            }
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let name = self.ident()?;
        if self.peek() == &Tok::LParen {
            self.bump();
            return Ok(Term::Func(name, self.term_list()?));
        }
        Ok(match self.scope.iter().rev().find(|(src, _)| *src == name) {
            Some((_, bound)) => Term::Var(bound.clone()),
            None => Term::Const(name),
        })
    }
}
