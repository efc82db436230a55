//! Noncommutative polynomials: sparse maps from words to coefficient
//! polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use super::{CoeffPoly, PolyError, Rational};
use crate::words::{IntNCPoly, Word};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, CoeffPoly>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Multiplicative identity (the empty word with coefficient 1).
    pub fn one() -> Self {
        Self::term(Word::EMPTY, CoeffPoly::one())
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, CoeffPoly::one())
    }

    pub fn term(w: Word, c: CoeffPoly) -> Self {
        let mut p = NCPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn add_term(&mut self, w: Word, c: CoeffPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &NCPoly) {
        for (w, c) in &other.terms {
            self.add_term(*w, c.clone());
        }
    }

    /// Coefficient at `w`, zero if absent.
    pub fn coeff(&self, w: &Word) -> CoeffPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &CoeffPoly)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &CoeffPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, x) in &self.terms {
            out.add_term(*w, x * c);
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, x) in &self.terms {
            out.add_term(*w, x.scale(c));
        }
        out
    }

    /// Applies `f` to every coefficient, dropping terms that vanish.
    pub fn map_coeffs<F: FnMut(&CoeffPoly) -> CoeffPoly>(&self, mut f: F) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, x) in &self.terms {
            out.add_term(*w, f(x));
        }
        out
    }

    /// Sum of all coefficients: the image under the substitution that maps
    /// every operator symbol to the same commuting scalar 1.
    pub fn commutative_image(&self) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for c in self.terms.values() {
            out.add_assign_ref(c);
        }
        out
    }

    /// `n`-th power by repeated multiplication.
    pub fn pow(&self, n: usize) -> NCPoly {
        let mut out = NCPoly::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }
}

impl From<&IntNCPoly> for NCPoly {
    fn from(p: &IntNCPoly) -> Self {
        let mut out = NCPoly::zero();
        for (w, c) in p.iter() {
            out.add_term(*w, CoeffPoly::from_int(*c));
        }
        out
    }
}

impl Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, -c);
        }
        out
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.map_coeffs(|c| -c)
    }
}

impl Mul for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (u, x) in &self.terms {
            for (v, y) in &rhs.terms {
                out.add_term(u.concat(v), x * y);
            }
        }
        out
    }
}

impl fmt::Display for NCPoly {
    /// `(<coeffpoly>)*WORD` terms joined by ` + `, ascending by word.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*{w}")?;
        }
        Ok(())
    }
}

impl FromStr for NCPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::text::parse_nc_poly(s)
    }
}
