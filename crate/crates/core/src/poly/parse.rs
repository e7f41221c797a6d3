//! Text grammar:
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := integer ['*'? factor ('*' factor)*] | factor ('*' factor)*
//! factor := name ('^' natural)?
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ExponentVector, IntPolynomial};
use crate::error::{IgusaError, Result};

pub fn default_variables(n: usize) -> Vec<String> {
    const NAMES: [&str; 4] = ["x", "y", "z", "w"];
    if n <= NAMES.len() {
        NAMES[..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// Variables named in `text`, in the order x, y, z, w first and the rest
/// alphabetically.
pub fn infer_variables(text: &str) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let name = &text[start..i];
            if !names.iter().any(|n| n == name) {
                names.push(name.to_string());
            }
        } else {
            i += 1;
        }
    }
    let rank = |s: &str| match s {
        "x" => 0,
        "y" => 1,
        "z" => 2,
        "w" => 3,
        _ => 4,
    };
    names.sort_by(|a, b| rank(a).cmp(&rank(b)).then_with(|| a.cmp(b)));
    if names.is_empty() {
        names.push("x".into());
    }
    names
}

pub fn parse_polynomial(text: &str, variables: &[String]) -> Result<IntPolynomial> {
    if variables.is_empty() {
        return Err(IgusaError::Config("at least one variable is required".into()));
    }
    Parser {
        src: text.as_bytes(),
        pos: 0,
        vars: variables,
    }
    .poly()
}

/// Like [`parse_polynomial`] but rejects a constant term and the zero
/// polynomial, as Newton-polyhedron analysis requires.
pub fn parse_newton_polynomial(text: &str, variables: &[String]) -> Result<IntPolynomial> {
    let f = parse_polynomial(text, variables)?;
    if f.is_zero() {
        return Err(IgusaError::ZeroPolynomial {
            context: "Newton analysis",
        });
    }
    if f.has_constant_term() {
        return Err(IgusaError::ConstantTerm);
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(IgusaError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn poly(&mut self) -> Result<IntPolynomial> {
        let n = self.vars.len();
        let mut f = IntPolynomial::zero(n);
        if self.peek().is_none() {
            return self.syntax("empty input");
        }
        let mut sign = BigInt::one();
        match self.peek() {
            Some(b'+') => self.pos += 1,
            Some(b'-') => {
                self.pos += 1;
                sign = -sign;
            }
            _ => {}
        }
        loop {
            let (e, c) = self.term()?;
            f.add_term(e, c * &sign);
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = BigInt::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -BigInt::one();
                }
                Some(c) => return self.syntax(format!("unexpected character `{}`", c as char)),
            }
        }
        Ok(f)
    }

    fn term(&mut self) -> Result<(ExponentVector, BigInt)> {
        let mut exps = vec![0u32; self.vars.len()];
        let mut coeff = BigInt::one();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                coeff = self.integer()?;
                if matches!(self.peek(), Some(b'.') | Some(b'/')) {
                    return Err(IgusaError::NonIntegerCoefficient { pos: self.pos });
                }
                match self.peek() {
                    Some(b'*') => {
                        self.pos += 1;
                        self.factor(&mut exps)?;
                    }
                    Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.factor(&mut exps)?,
                    _ => return Ok((ExponentVector(exps), coeff)),
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.factor(&mut exps)?,
            Some(c) => return self.syntax(format!("expected a term, found `{}`", c as char)),
            None => return self.syntax("expected a term, found end of input"),
        }
        while self.peek() == Some(b'*') {
            self.pos += 1;
            self.factor(&mut exps)?;
        }
        Ok((ExponentVector(exps), coeff))
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<()> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {}
            Some(c) if c.is_ascii_digit() => {
                return self.syntax("numeric factor after a variable is not allowed")
            }
            _ => return self.syntax("expected a variable name"),
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let idx = self
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| IgusaError::UnknownVariable {
                name: name.to_string(),
                pos: start,
            })?;
        let mut power = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            if !matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
                return self.syntax("expected a natural exponent after `^`");
            }
            let e = self.integer()?;
            power = u32::try_from(e).or_else(|_| self.syntax("exponent too large"))?;
        }
        exps[idx] = exps[idx]
            .checked_add(power)
            .ok_or_else(|| IgusaError::Syntax {
                pos: self.pos,
                msg: "exponent overflow".into(),
            })?;
        Ok(())
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.syntax("expected an integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: BigInt = s.parse().unwrap();
        debug_assert!(v >= BigInt::zero());
        Ok(v)
    }
}
