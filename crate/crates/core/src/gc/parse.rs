//! Recursive-descent parser for the concrete formula syntax.

use super::{Count, Formula, GuardFn, Quantifier, Vars};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

/// Parses one formula; trailing input is an error.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let f = p.formula()?;
    p.ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn word(&mut self) -> &str {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn nat(&mut self) -> Result<usize> {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        s.parse().map_err(|_| Error::Syntax { pos: start, msg: "expected a number".into() })
    }

    /// `v3` or `e2`; returns the index.
    fn var(&mut self, kind: u8) -> Result<usize> {
        if self.peek() != Some(kind) {
            return Err(self.error(&format!("expected a `{}` variable", kind as char)));
        }
        self.pos += 1;
        let at = self.pos;
        let i = self.nat()?;
        if i == 0 {
            return Err(Error::Syntax { pos: at, msg: "variable indices start at 1".into() });
        }
        Ok(i)
    }

    fn formula(&mut self) -> Result<Formula> {
        let start = self.pos;
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'~') => {
                self.pos += 1;
                Ok(Formula::negate(self.formula()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let mut parts = vec![self.formula()?];
                if !self.eat(b'&') {
                    return Err(self.error("expected `&`"));
                }
                parts.push(self.formula()?);
                while self.eat(b'&') {
                    parts.push(self.formula()?);
                }
                self.expect(b')')?;
                Ok(Formula::all(parts))
            }
            Some(b'v') => {
                let a = self.var(b'v')?;
                self.expect(b'=')?;
                Ok(Formula::VEq(a, self.var(b'v')?))
            }
            Some(b'e') if self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit) => {
                let a = self.var(b'e')?;
                self.expect(b'=')?;
                Ok(Formula::EEq(a, self.var(b'e')?))
            }
            _ => match self.word() {
                "T" => Ok(Formula::Top),
                "E" => {
                    self.expect(b'(')?;
                    let j = self.var(b'e')?;
                    self.expect(b',')?;
                    let i = self.var(b'v')?;
                    self.expect(b')')?;
                    Ok(Formula::Edge(j, i))
                }
                "existsge" => self.quantifier(false),
                "existseq" => self.quantifier(true),
                _ => {
                    self.pos = start;
                    self.ws();
                    Err(self.error("expected a formula"))
                }
            },
        }
    }

    fn quantifier(&mut self, exact: bool) -> Result<Formula> {
        let n = self.nat()?;
        if n == 0 {
            return Err(self.error("counts start at 1"));
        }
        self.expect(b'(')?;
        let kind = self.peek().filter(|c| *c == b'v' || *c == b'e').ok_or_else(|| self.error("expected a variable"))?;
        let mut idx = vec![self.var(kind)?];
        while self.eat(b',') {
            idx.push(self.var(kind)?);
        }
        self.expect(b')')?;
        let vars = if kind == b'v' { Vars::Vertex(idx) } else { Vars::Edge(idx) };
        self.ws();
        let bracket = self.pos;
        let guard = if self.eat(b'[') { Some(self.guard()?) } else { None };
        self.expect(b'.')?;
        let body = self.formula()?;
        let guard = match guard {
            Some(g) => g,
            None if body.free_v().is_empty() => GuardFn::new(),
            None => {
                return Err(Error::Syntax { pos: bracket, msg: "body has free vertex variables, so the guard must be given".into() });
            }
        };
        let count = if exact { Count::Exactly(n) } else { Count::AtLeast(n) };
        Ok(Formula::Exists(Quantifier { count, vars, guard, body: Box::new(body) }))
    }

    fn guard(&mut self) -> Result<GuardFn> {
        let mut g = GuardFn::new();
        if self.eat(b']') {
            return Ok(g);
        }
        loop {
            let at = self.pos;
            let i = self.var(b'v')?;
            self.expect(b'@')?;
            let j = self.var(b'e')?;
            if g.insert(i, j).is_some() {
                return Err(Error::Syntax { pos: at, msg: format!("v{i} guarded twice") });
            }
            if !self.eat(b',') {
                break;
            }
        }
        self.expect(b']')?;
        Ok(g)
    }
}
