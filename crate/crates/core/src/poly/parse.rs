//! Polynomial text input.
//!
//! ```text
//! poly    := ['-'|'+'] term (('+'|'-') term)*
//! term    := coeff | coeff mul? factors | factors
//! factors := factor (mul? factor)*
//! factor  := var ('^' nat)?
//! ```
//! Whitespace between tokens is ignored and juxtaposition multiplies.
//! A declared name `x1` also matches `x_1` and vice versa.

use thiserror::Error;

use super::monomial::{Monomial, MAX_VARS};
use super::Polynomial;
use crate::field::CoeffRing;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("unknown variable at position {pos}")]
    UnknownVariable { pos: usize },
    #[error("malformed exponent at position {pos}")]
    MalformedExponent { pos: usize },
    #[error("unexpected character {ch:?} at position {pos}")]
    Unexpected { pos: usize, ch: char },
    #[error("unexpected end of input at position {pos}")]
    UnexpectedEnd { pos: usize },
    #[error("invalid variable list: {0}")]
    BadVariables(String),
}

/// Ordered variable names plus the spellings each one accepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variables {
    names: Vec<String>,
    aliases: Vec<(String, usize)>,
}

const LETTER_ALIASES: [&str; 4] = ["x", "y", "z", "w"];

fn split_indexed(name: &str) -> Option<(&str, &str)> {
    let digits_at = name.find(|c: char| c.is_ascii_digit())?;
    let (head, digits) = name.split_at(digits_at);
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let stem = head.strip_suffix('_').unwrap_or(head);
    (!stem.is_empty() && stem.chars().all(|c| c.is_ascii_alphabetic())).then_some((stem, digits))
}

impl Variables {
    pub fn new(names: Vec<String>) -> Result<Self, ParseError> {
        if names.is_empty() || names.len() > MAX_VARS {
            return Err(ParseError::BadVariables(format!("need 1..={MAX_VARS} names, got {}", names.len())));
        }
        let mut aliases = Vec::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(ParseError::BadVariables(format!("bad name {name:?}")));
            }
            if name.starts_with(|c: char| c.is_ascii_digit()) {
                return Err(ParseError::BadVariables(format!("name {name:?} starts with a digit")));
            }
            aliases.push((name.clone(), i));
            if let Some((stem, digits)) = split_indexed(name) {
                aliases.push((format!("{stem}{digits}"), i));
                aliases.push((format!("{stem}_{digits}"), i));
            }
        }
        let canonical_standard = names.len() <= 4 && names.iter().enumerate().all(|(i, n)| *n == format!("x{}", i + 1));
        if canonical_standard {
            for (i, a) in LETTER_ALIASES.iter().take(names.len()).enumerate() {
                aliases.push((a.to_string(), i));
            }
        }
        aliases.sort();
        aliases.dedup();
        for w in aliases.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(ParseError::BadVariables(format!("duplicate name {:?}", w[0].0)));
            }
        }
        // longest spelling first for greedy matching
        aliases.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(&b.0)));
        Ok(Variables { names, aliases })
    }

    /// x1, .., xn.
    pub fn standard(n: usize) -> Self {
        Self::new((1..=n).map(|i| format!("x{i}")).collect()).expect("standard names are valid")
    }

    /// Comma-separated list such as "x,y,z".
    pub fn parse_list(s: &str) -> Result<Self, ParseError> {
        Self::new(s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    fn match_at(&self, s: &str) -> Option<(usize, usize)> {
        self.aliases.iter().find(|(a, _)| s.starts_with(a.as_str())).map(|(a, i)| (*i, a.len()))
    }
}

/// Guesses the variable list: indexed names `x1`/`x_1` give x1..xn with n the
/// largest index; otherwise the letters x, y, z, w map to x1..x4.
pub fn infer_variables(text: &str) -> Result<Variables, ParseError> {
    let bytes = text.as_bytes();
    let mut n = 0usize;
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_alphabetic() {
            let mut j = i + 1;
            if j < bytes.len() && bytes[j] == b'_' {
                j += 1;
            }
            let start = j;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if c == b'x' && j > start {
                let idx: usize = text[start..j].parse().map_err(|_| ParseError::BadVariables("index too large".into()))?;
                n = n.max(idx);
                i = j;
                continue;
            }
            if let Some(k) = LETTER_ALIASES.iter().position(|a| a.as_bytes()[0] == c) {
                n = n.max(k + 1);
            } else {
                return Err(ParseError::UnknownVariable { pos: i });
            }
        }
        i += 1;
    }
    if n == 0 {
        n = 1;
    }
    if n > MAX_VARS {
        return Err(ParseError::BadVariables(format!("{n} variables exceed the limit of {MAX_VARS}")));
    }
    Ok(Variables::standard(n))
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn nat(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.s[start..self.pos])
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(ch) => ParseError::Unexpected { pos: self.pos, ch },
            None => ParseError::UnexpectedEnd { pos: self.pos },
        }
    }
}

/// Parses text into a polynomial over `ring` in the declared variables.
pub fn parse_poly(text: &str, ring: CoeffRing, vars: &Variables) -> Result<Polynomial, ParseError> {
    let n = vars.len();
    let m = ring.modulus() as u64;
    let mut cur = Cursor { s: text, pos: 0 };
    cur.skip_ws();
    if cur.peek().is_none() {
        return Err(ParseError::Empty);
    }
    let mut terms: Vec<(Monomial, u64)> = Vec::new();
    let mut negative = false;
    if let Some(c @ ('-' | '+')) = cur.peek() {
        negative = c == '-';
        cur.pos += 1;
    }
    loop {
        cur.skip_ws();
        let (mono, coeff) = parse_term(&mut cur, vars, n, m)?;
        let c = if negative { (m - coeff) % m } else { coeff };
        terms.push((mono, c));
        cur.skip_ws();
        match cur.peek() {
            None => break,
            Some('+') => negative = false,
            Some('-') => negative = true,
            Some(_) => return Err(cur.unexpected()),
        }
        cur.pos += 1;
    }
    Ok(Polynomial::from_terms(ring, n, terms))
}

fn parse_term(cur: &mut Cursor, vars: &Variables, n: usize, m: u64) -> Result<(Monomial, u64), ParseError> {
    let mut coeff = 1u64;
    let mut have_coeff = false;
    if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
        let digits = cur.nat().expect("digit present");
        coeff = digits.bytes().fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % m);
        have_coeff = true;
        cur.skip_ws();
        if cur.peek() == Some('*') {
            cur.pos += 1;
            cur.skip_ws();
            if vars.match_at(cur.rest()).is_none() {
                return Err(var_error(cur));
            }
        }
    }
    let mut exps = [0u32; MAX_VARS];
    let mut factors = 0;
    loop {
        cur.skip_ws();
        let Some((idx, len)) = vars.match_at(cur.rest()) else {
            break;
        };
        cur.pos += len;
        cur.skip_ws();
        let mut e = 1u32;
        if cur.peek() == Some('^') {
            cur.pos += 1;
            cur.skip_ws();
            let at = cur.pos;
            let digits = cur.nat().ok_or(ParseError::MalformedExponent { pos: at })?;
            e = digits.parse().map_err(|_| ParseError::MalformedExponent { pos: at })?;
        }
        exps[idx] = exps[idx].checked_add(e).filter(|&t| t <= u16::MAX as u32).ok_or(ParseError::MalformedExponent { pos: cur.pos })?;
        factors += 1;
        cur.skip_ws();
        if cur.peek() == Some('*') {
            cur.pos += 1;
            cur.skip_ws();
            if vars.match_at(cur.rest()).is_none() {
                return Err(var_error(cur));
            }
        }
    }
    if factors == 0 && !have_coeff {
        return Err(var_error(cur));
    }
    let mono = Monomial::from_exponents(&exps[..n]).ok_or(ParseError::MalformedExponent { pos: cur.pos })?;
    Ok((mono, coeff))
}

fn var_error(cur: &Cursor) -> ParseError {
    match cur.peek() {
        Some(c) if c.is_ascii_alphabetic() => ParseError::UnknownVariable { pos: cur.pos },
        _ => cur.unexpected(),
    }
}
