//! Text form of polynomials.
//!
//! Grammar: sums and differences of products of factors; a factor is an
//! integer or `p/q` literal, a variable, or a parenthesized expression,
//! optionally raised to a nonnegative integer power with `^`. Juxtaposition
//! is rejected. Variables are the declared names; `x1..x9` (by position)
//! and, for at most three variables, `x, y, z` are also accepted.

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Rational};

/// `x, y, z` for up to three variables, otherwise `x1..xn`.
pub fn default_var_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        pos,
        message: message.into(),
    })
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((pos, Tok::Num(s.parse().expect("digits"))));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((pos, Tok::Ident(s)));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return err(pos, format!("unexpected character `{c}`")),
        };
        out.push((pos, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                -self.term()?
            }
            Some(Tok::Plus) => {
                self.at += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc += &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    acc = &acc * &self.power()?;
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    return err(
                        self.pos(),
                        "implicit multiplication is not allowed; use `*`",
                    );
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.at += 1;
            let pos = self.pos();
            match self.peek().cloned() {
                Some(Tok::Num(e)) => {
                    self.at += 1;
                    let e: u32 = e.try_into().or_else(|_| err(pos, "exponent too large"))?;
                    if self.peek() == Some(&Tok::Caret) {
                        return err(
                            self.pos(),
                            "chained exponents are ambiguous; use parentheses",
                        );
                    }
                    Ok(base.pow(e))
                }
                _ => err(pos, "expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(num)) => {
                self.at += 1;
                let mut value = Rational::from_integer(num);
                if self.peek() == Some(&Tok::Slash) {
                    self.at += 1;
                    let dpos = self.pos();
                    match self.peek().cloned() {
                        Some(Tok::Num(den)) => {
                            self.at += 1;
                            if den.is_zero() {
                                return err(dpos, "zero denominator");
                            }
                            value /= Rational::from_integer(den);
                        }
                        _ => return err(dpos, "expected an integer denominator"),
                    }
                }
                Ok(Polynomial::constant(self.n(), value))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match resolve(&name, self.vars) {
                    Some(i) => Ok(Polynomial::var(self.n(), i)),
                    None => err(pos, format!("unknown variable `{name}`")),
                }
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return err(self.pos(), "expected `)`");
                }
                self.at += 1;
                Ok(inner)
            }
            Some(Tok::Slash) => err(pos, "division is only allowed inside a p/q literal"),
            Some(_) => err(pos, "expected a number, variable or `(`"),
            None => err(pos, "unexpected end of input"),
        }
    }
}

fn resolve(name: &str, vars: &[String]) -> Option<usize> {
    if let Some(i) = vars.iter().position(|v| v == name) {
        return Some(i);
    }
    let n = vars.len();
    if let Some(rest) = name.strip_prefix('x') {
        if let Ok(k) = rest.parse::<usize>() {
            if (1..=n).contains(&k) && !rest.starts_with('0') {
                return Some(k - 1);
            }
        }
    }
    if n <= 3 {
        if let Some(i) = ["x", "y", "z"].iter().position(|&a| a == name) {
            if i < n {
                return Some(i);
            }
        }
    }
    None
}

impl Polynomial {
    /// Parses `text` as a polynomial in the declared variables.
    pub fn parse<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<Polynomial> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        let toks = lex(text)?;
        if toks.is_empty() {
            return err(0, "empty input");
        }
        let mut p = Parser {
            toks,
            at: 0,
            end: text.len(),
            vars: &vars,
        };
        let out = p.expr()?;
        if p.at < p.toks.len() {
            return err(p.pos(), "unexpected token");
        }
        Ok(out)
    }

    /// Parses with the default names for `n` variables.
    pub fn parse_n(text: &str, n: usize) -> Result<Polynomial> {
        Polynomial::parse(text, &default_var_names(n))
    }

    /// Canonical text: graded-lex descending, explicit `*`, unit coefficients omitted.
    pub fn to_string_with<S: AsRef<str>>(&self, vars: &[S]) -> String {
        assert_eq!(vars.len(), self.nvars(), "variable name count mismatch");
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms().rev().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let a = c.abs();
            let mono = monomial_text(m, vars);
            if mono.is_empty() {
                write!(out, "{a}").unwrap();
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                write!(out, "{a}*{mono}").unwrap();
            }
        }
        out
    }
}

fn monomial_text<S: AsRef<str>>(m: &Monomial, vars: &[S]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars[i].as_ref().to_string()),
            _ => parts.push(format!("{}^{e}", vars[i].as_ref())),
        }
    }
    parts.join("*")
}
