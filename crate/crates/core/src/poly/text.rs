//! Parsers for the canonical text forms produced by the `Display` impls.
//!
//! The coefficient grammar also accepts computer-algebra style input
//! (`2*a[2]*b[1]+2*a[3]*b[1]-1`) with arbitrary whitespace and line breaks,
//! in any term order and with repeated monomials.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{CoeffMonomial, CoeffPoly, NCPoly, PolyError, Rational, Unknown};
use crate::words::Word;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while<F: Fn(char) -> bool>(&mut self, f: F) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek_raw() {
            if f(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

fn parse_int(cur: &mut Cursor<'_>) -> Result<BigInt, PolyError> {
    let digits = cur.take_while(|c| c.is_ascii_digit());
    if digits.is_empty() {
        return Err(cur.err("expected digits"));
    }
    digits.parse().map_err(|_| cur.err("bad integer"))
}

/// Parses a rational literal `p`, `p/q`, or a decimal `1.25` (converted
/// exactly).
pub fn parse_rational(s: &str) -> Result<Rational, PolyError> {
    let s = s.trim();
    let bad = || PolyError::BadNumber(s.to_string());
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let value = if let Some((n, d)) = body.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Rational::new(n, d)
    } else if let Some((int, frac)) = body.split_once('.') {
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        Rational::new(digits, scale)
    } else {
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        Rational::from_integer(body.parse().map_err(|_| bad())?)
    };
    Ok(if neg { -value } else { value })
}

/// A parsed factor: a numeric constant or a power of an unknown.
type Factor = (Option<Rational>, Option<(Unknown, u32)>);

fn parse_factor(cur: &mut Cursor<'_>) -> Result<Factor, PolyError> {
    match cur.peek() {
        Some(c) if c.is_ascii_digit() => {
            let n = parse_int(cur)?;
            let value = if cur.eat('/') {
                let d = parse_int(cur)?;
                if d.is_zero() {
                    return Err(cur.err("zero denominator"));
                }
                Rational::new(n, d)
            } else {
                Rational::from_integer(n)
            };
            Ok((Some(value), None))
        }
        Some('a' | 'b' | 'c') => {
            let name = cur.take_while(|c| c.is_ascii_alphanumeric() || c == '[' || c == ']');
            let u: Unknown = name.parse()?;
            let e = if cur.eat('^') {
                let e = parse_int(cur)?;
                u32::try_from(e).map_err(|_| cur.err("exponent too large"))?
            } else {
                1
            };
            Ok((None, Some((u, e))))
        }
        _ => Err(cur.err("expected coefficient or unknown")),
    }
}

fn parse_coeff_terms(cur: &mut Cursor<'_>, stop: Option<char>) -> Result<CoeffPoly, PolyError> {
    let mut poly = CoeffPoly::zero();
    let mut first = true;
    loop {
        let mut sign = Rational::one();
        if cur.eat('-') {
            sign = -sign;
        } else if !cur.eat('+') && !first {
            return Err(cur.err("expected '+' or '-'"));
        }
        first = false;
        let mut coeff = sign;
        let mut factors = Vec::new();
        loop {
            let (c, f) = parse_factor(cur)?;
            if let Some(c) = c {
                coeff *= c;
            }
            if let Some(f) = f {
                factors.push(f);
            }
            if !cur.eat('*') {
                break;
            }
        }
        poly.add_term(CoeffMonomial::from_factors(factors), coeff);
        match cur.peek() {
            None => break,
            Some(c) if Some(c) == stop => break,
            _ => {}
        }
    }
    Ok(poly)
}

pub fn parse_coeff_poly(s: &str) -> Result<CoeffPoly, PolyError> {
    let mut cur = Cursor::new(s);
    if cur.at_end() {
        return Err(cur.err("empty polynomial"));
    }
    let poly = parse_coeff_terms(&mut cur, None)?;
    if !cur.at_end() {
        return Err(cur.err("trailing input"));
    }
    Ok(poly)
}

/// Parses `(<coeffpoly>)*WORD + (<coeffpoly>)*WORD …` or `0`.
pub fn parse_nc_poly(s: &str) -> Result<NCPoly, PolyError> {
    let mut cur = Cursor::new(s);
    if cur.eat('0') {
        if cur.at_end() {
            return Ok(NCPoly::zero());
        }
        return Err(cur.err("trailing input"));
    }
    let mut poly = NCPoly::zero();
    loop {
        if !cur.eat('(') {
            return Err(cur.err("expected '('"));
        }
        let c = parse_coeff_terms(&mut cur, Some(')'))?;
        if !cur.eat(')') || !cur.eat('*') {
            return Err(cur.err("expected ')*'"));
        }
        let word_text = cur.take_while(|c| matches!(c, 'A' | 'B' | 'C' | '1'));
        let w: Word = word_text
            .parse()
            .map_err(|e: crate::words::WordError| cur.err(&e.to_string()))?;
        poly.add_term(w, c);
        if cur.at_end() {
            break;
        }
        if !cur.eat('+') {
            return Err(cur.err("expected '+'"));
        }
    }
    Ok(poly)
}
