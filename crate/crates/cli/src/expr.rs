//! Unit expressions such as `1+3*g`, `t(2)*a*b^2` or `inv(1+x*g)`.
//!
//! Atoms are integers, group generators, `x` (the generator of the coefficient ring, unless
//! a group generator takes that name) and `t(k)`, the Teichmüller lift of the residue field
//! element whose coordinates are the base-p digits of `k`. Operators are `+`, `-`, `*` and
//! `^` with a non-negative exponent; the only inverse is the explicit `inv(...)`.

use std::fmt;
use std::sync::Arc;

use padic_k1::coeff::CoeffRing;
use padic_k1::groupring::GroupRingElement;
use padic_k1::groups::Group;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 0-based character offset
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: {}", self.position + 1, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(u64),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse().map_err(|_| ParseError { position: start, message: format!("integer `{text}` is too large") })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*^(),".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError { position: i, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ring: &'a CoeffRing,
    group: &'a Arc<Group>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.here(), message: message.into() })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<GroupRingElement, ParseError> {
        let mut acc = if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            self.term()?.neg()
        } else {
            self.term()?
        };
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<GroupRingElement, ParseError> {
        let mut acc = self.power()?;
        while self.peek() == Some(&Tok::Op('*')) {
            self.pos += 1;
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<GroupRingElement, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek().cloned() {
            Some(Tok::Num(e)) => {
                self.pos += 1;
                Ok(base.pow(e as u128))
            }
            Some(Tok::Op('-')) => self.err("negative exponents are not allowed; use inv(...)"),
            _ => self.err("expected a non-negative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<GroupRingElement, ParseError> {
        let start = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(k)) => {
                self.pos += 1;
                let m = self.ring.modulus_value();
                let x = self.ring.from_int((k % m) as i64);
                Ok(GroupRingElement::scalar(self.group, &x))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = self.group.generator_names().iter().position(|n| *n == name) {
                    return Ok(GroupRingElement::group_element(self.ring, self.group, self.group.generators()[i]));
                }
                match name.as_str() {
                    "x" => Ok(GroupRingElement::scalar(self.group, &self.ring.generator())),
                    "t" => {
                        self.expect('(')?;
                        let at = self.here();
                        let Some(Tok::Num(mut k)) = self.peek().cloned() else {
                            return self.err("t(...) takes an integer literal");
                        };
                        self.pos += 1;
                        self.expect(')')?;
                        let field = self.ring.residue_field().map_err(|e| ParseError { position: at, message: e.to_string() })?;
                        let p = field.p();
                        let digits: Vec<u64> = (0..field.degree())
                            .map(|_| {
                                let d = k % p;
                                k /= p;
                                d
                            })
                            .collect();
                        let a = field.element(&digits).map_err(|e| ParseError { position: at, message: e.to_string() })?;
                        if a.is_zero() || k != 0 {
                            return Err(ParseError { position: at, message: "t(k) needs a nonzero residue with at most [κ:F_p] base-p digits".into() });
                        }
                        let w = self.ring.teichmuller(&a).map_err(|e| ParseError { position: at, message: e.to_string() })?;
                        Ok(GroupRingElement::scalar(self.group, &w))
                    }
                    "inv" => {
                        self.expect('(')?;
                        let e = self.expr()?;
                        self.expect(')')?;
                        e.invert().map_err(|_| ParseError { position: start, message: "inv(...) of a non-unit".into() })
                    }
                    _ => Err(ParseError {
                        position: start,
                        message: format!(
                            "unknown symbol `{name}`; generators are {}",
                            if self.group.generator_names().is_empty() { "none".to_string() } else { self.group.generator_names().join(", ") }
                        ),
                    }),
                }
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses and evaluates an expression in `ring[group]`.
pub fn parse_unit(text: &str, ring: &CoeffRing, group: &Arc<Group>) -> Result<GroupRingElement, ParseError> {
    let toks = lex(text)?;
    let end = text.chars().count();
    let mut p = Parser { toks, pos: 0, end, ring, group };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}
