//! Commutative polynomials with rational coefficients in the scheme unknowns
//! `a[j]`, `b[j]`, `c[j]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{PolyError, Rational};

/// Coefficient family of an unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::A, Family::B, Family::C];

    pub fn from_letter(i: u8) -> Family {
        Family::ALL[i as usize]
    }

    pub fn letter(self) -> u8 {
        self as u8
    }

    pub fn name(self) -> char {
        match self {
            Family::A => 'a',
            Family::B => 'b',
            Family::C => 'c',
        }
    }
}

/// A scheme unknown such as `b[3]`. Stage indices start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Unknown {
    pub family: Family,
    pub index: u16,
}

impl Unknown {
    pub fn new(family: Family, index: u16) -> Self {
        assert!(index >= 1, "stage indices start at 1");
        Unknown { family, index }
    }

    pub fn a(index: u16) -> Self {
        Unknown::new(Family::A, index)
    }

    pub fn b(index: u16) -> Self {
        Unknown::new(Family::B, index)
    }

    pub fn c(index: u16) -> Self {
        Unknown::new(Family::C, index)
    }
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.family.name(), self.index)
    }
}

impl FromStr for Unknown {
    type Err = PolyError;

    /// Accepts `a[2]` as well as the shorthand `a2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PolyError::BadUnknown(s.to_string());
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next() {
            Some('a') => Family::A,
            Some('b') => Family::B,
            Some('c') => Family::C,
            _ => return Err(bad()),
        };
        let rest = chars.as_str();
        let digits = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .unwrap_or(rest);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let index: u16 = digits.parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(Unknown { family, index })
    }
}

/// Power product of unknowns. Exponents are positive and keyed in
/// `(family, index)` order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CoeffMonomial {
    factors: Vec<(Unknown, u32)>,
}

impl CoeffMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(u: Unknown) -> Self {
        CoeffMonomial {
            factors: vec![(u, 1)],
        }
    }

    pub fn from_factors(iter: impl IntoIterator<Item = (Unknown, u32)>) -> Self {
        let mut map: BTreeMap<Unknown, u32> = BTreeMap::new();
        for (u, e) in iter {
            *map.entry(u).or_insert(0) += e;
        }
        CoeffMonomial {
            factors: map.into_iter().filter(|&(_, e)| e > 0).collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Unknown, u32)] {
        &self.factors
    }

    pub fn exponent(&self, u: &Unknown) -> u32 {
        self.factors
            .binary_search_by(|(v, _)| v.cmp(u))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &CoeffMonomial) -> CoeffMonomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (u, e) = self.factors[i];
            let (v, f) = other.factors[j];
            match u.cmp(&v) {
                Ordering::Less => {
                    out.push((u, e));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((v, f));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((u, e + f));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        CoeffMonomial { factors: out }
    }

    pub fn unknowns(&self) -> impl Iterator<Item = Unknown> + '_ {
        self.factors.iter().map(|&(u, _)| u)
    }
}

impl Ord for CoeffMonomial {
    /// Graded order: higher total degree first; within a degree, the
    /// monomial with the larger exponent at the first differing unknown
    /// (in `(family, index)` order) comes first.
    fn cmp(&self, other: &Self) -> Ordering {
        match other.degree().cmp(&self.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (x, y) in self.factors.iter().zip(&other.factors) {
            if x.0 != y.0 {
                return x.0.cmp(&y.0);
            }
            if x.1 != y.1 {
                return y.1.cmp(&x.1);
            }
        }
        other.factors.len().cmp(&self.factors.len())
    }
}

impl PartialOrd for CoeffMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CoeffMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, (u, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{u}")?;
            } else {
                write!(f, "{u}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial `Σ c_m · m` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CoeffPoly {
    terms: BTreeMap<CoeffMonomial, Rational>,
}

impl CoeffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(CoeffMonomial::one(), c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(u: Unknown) -> Self {
        Self::term(CoeffMonomial::var(u), Rational::one())
    }

    pub fn term(m: CoeffMonomial, c: Rational) -> Self {
        let mut p = CoeffPoly::zero();
        p.add_term(m, c);
        p
    }

    /// Adds `c · m` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: CoeffMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &CoeffPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
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

    /// Terms in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&CoeffMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &CoeffMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&CoeffMonomial::one())
    }

    /// Highest total degree among the terms; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Distinct unknowns appearing in the polynomial, sorted.
    pub fn unknowns(&self) -> Vec<Unknown> {
        let mut v: Vec<Unknown> = self.terms.keys().flat_map(|m| m.unknowns()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn scale(&self, c: &Rational) -> CoeffPoly {
        if c.is_zero() {
            return CoeffPoly::zero();
        }
        CoeffPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &CoeffMonomial, c: &Rational) -> CoeffPoly {
        if c.is_zero() {
            return CoeffPoly::zero();
        }
        CoeffPoly {
            terms: self.terms.iter().map(|(n, x)| (n.mul(m), x * c)).collect(),
        }
    }

    /// Exact value under `assignment`.
    pub fn eval(&self, assignment: &BTreeMap<Unknown, Rational>) -> Result<Rational, PolyError> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (u, e) in m.factors() {
                let v = assignment.get(u).ok_or(PolyError::Unbound(*u))?;
                t *= num_traits::pow(v.clone(), *e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Value under `lookup`, in any commutative ring reachable from the
    /// rationals. Used for floating-point and complex evaluation.
    pub fn eval_with<T, F>(
        &self,
        mut lookup: F,
        from_rational: impl Fn(&Rational) -> T,
    ) -> Result<T, PolyError>
    where
        T: Clone + Add<Output = T> + Mul<Output = T>,
        F: FnMut(&Unknown) -> Option<T>,
    {
        let mut acc: Option<T> = None;
        for (m, c) in &self.terms {
            let mut t = from_rational(c);
            for (u, e) in m.factors() {
                let v = lookup(u).ok_or(PolyError::Unbound(*u))?;
                for _ in 0..*e {
                    t = t * v.clone();
                }
            }
            acc = Some(match acc {
                None => t,
                Some(a) => a + t,
            });
        }
        Ok(acc.unwrap_or_else(|| from_rational(&Rational::zero())))
    }

    /// Replaces each unknown by a polynomial. Unknowns for which `f`
    /// returns `None` are kept.
    pub fn substitute<F>(&self, mut f: F) -> CoeffPoly
    where
        F: FnMut(&Unknown) -> Option<CoeffPoly>,
    {
        let mut out = CoeffPoly::zero();
        for (m, c) in &self.terms {
            let mut t = CoeffPoly::constant(c.clone());
            for (u, e) in m.factors() {
                let image = f(u).unwrap_or_else(|| CoeffPoly::var(*u));
                for _ in 0..*e {
                    t = &t * &image;
                }
            }
            out.add_assign_ref(&t);
        }
        out
    }

    /// Whether every non-constant term has total degree exactly `q`.
    pub fn is_homogeneous_plus_constant(&self, q: u32) -> bool {
        self.terms.keys().all(|m| m.is_one() || m.degree() == q)
    }
}

impl Add for &CoeffPoly {
    type Output = CoeffPoly;
    fn add(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &CoeffPoly {
    type Output = CoeffPoly;
    fn sub(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        CoeffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (m, x) in &self.terms {
            for (n, y) in &rhs.terms {
                out.add_term(m.mul(n), x * y);
            }
        }
        out
    }
}

impl Add for CoeffPoly {
    type Output = CoeffPoly;
    fn add(mut self, rhs: CoeffPoly) -> CoeffPoly {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for CoeffPoly {
    type Output = CoeffPoly;
    fn sub(self, rhs: CoeffPoly) -> CoeffPoly {
        &self - &rhs
    }
}

impl Mul for CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, rhs: CoeffPoly) -> CoeffPoly {
        &self * &rhs
    }
}

impl Neg for CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        -&self
    }
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CoeffPoly {
    /// Canonical text, e.g. `2*a[2]*b[1]-1` or `1/2*a[1]^2+3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if i > 0 {
                f.write_str("+")?;
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl FromStr for CoeffPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::text::parse_coeff_poly(s)
    }
}

/// Lossy conversion for numeric work.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
