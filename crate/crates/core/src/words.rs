//! Words over a small ordered alphabet, Lyndon–Shirshov basis generation and
//! the commutator expansion of standard bracketings.
//!
//! A [`Word`] is packed into a `u64`, two bits per letter, left-aligned so
//! that the derived integer order coincides with lexicographic order (a
//! proper prefix sorts before its extensions).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Longest word representable by [`Word`].
pub const MAX_DEGREE: usize = 31;

const LETTER_BITS: u32 = 2;
const LETTER_MASK: u64 = 0b11;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("empty word")]
    Empty,
    #[error("degree {0} out of range 1..={MAX_DEGREE}")]
    DegreeOutOfRange(usize),
    #[error("letter index {letter} not in alphabet of size {size}")]
    LetterOutOfRange { letter: u8, size: usize },
    #[error("unknown letter {0:?}")]
    UnknownLetter(char),
    #[error("alphabet size {0} unsupported (expected 2 or 3)")]
    AlphabetSize(usize),
    #[error("{0} is not a Lyndon word")]
    NotLyndon(Word),
    #[error("{0} has degree 1 and no standard factorization")]
    Letter(Word),
    #[error("lyndon count overflows for m={m}, q={q}")]
    CountOverflow { m: u64, q: usize },
}

/// Ordered operator alphabet `A < B < C`, truncated to its first `m` letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    size: u8,
}

impl Alphabet {
    const SYMBOLS: [char; 3] = ['A', 'B', 'C'];

    pub fn new(size: usize) -> Result<Self, WordError> {
        match size {
            2 | 3 => Ok(Alphabet { size: size as u8 }),
            _ => Err(WordError::AlphabetSize(size)),
        }
    }

    pub fn two() -> Self {
        Alphabet { size: 2 }
    }

    pub fn three() -> Self {
        Alphabet { size: 3 }
    }

    pub fn len(&self) -> usize {
        self.size as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &'static [char] {
        &Self::SYMBOLS[..self.len()]
    }

    /// The single-letter word for letter index `i`.
    pub fn letter(&self, i: u8) -> Word {
        assert!((i as usize) < self.len(), "letter {i} outside alphabet");
        Word::letter(i)
    }

    pub fn letters(&self) -> impl Iterator<Item = Word> {
        (0..self.size).map(Word::letter)
    }
}

/// A word over `{A, B, C}` of length at most [`MAX_DEGREE`].
///
/// The empty word is representable; it is the multiplicative identity of
/// noncommutative polynomials.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    bits: u64,
    len: u8,
}

impl Word {
    pub const EMPTY: Word = Word { bits: 0, len: 0 };

    pub fn letter(i: u8) -> Word {
        debug_assert!(i < 3);
        Word {
            bits: (i as u64) << (64 - LETTER_BITS),
            len: 1,
        }
    }

    pub fn from_letters(letters: &[u8]) -> Result<Word, WordError> {
        if letters.len() > MAX_DEGREE {
            return Err(WordError::DegreeOutOfRange(letters.len()));
        }
        let mut w = Word::EMPTY;
        for &l in letters {
            if l > 2 {
                return Err(WordError::LetterOutOfRange { letter: l, size: 3 });
            }
            w = w.concat(&Word::letter(l));
        }
        Ok(w)
    }

    pub fn degree(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> u8 {
        debug_assert!(i < self.degree());
        ((self.bits >> (64 - LETTER_BITS * (i as u32 + 1))) & LETTER_MASK) as u8
    }

    pub fn letters(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.degree()).map(move |i| self.get(i))
    }

    /// Concatenation `self · other`. Panics if the result exceeds [`MAX_DEGREE`].
    pub fn concat(&self, other: &Word) -> Word {
        let len = self.len as usize + other.len as usize;
        assert!(len <= MAX_DEGREE, "word degree {len} exceeds {MAX_DEGREE}");
        let shifted = if self.len == 0 {
            other.bits
        } else {
            other.bits >> (LETTER_BITS * self.len as u32)
        };
        Word {
            bits: self.bits | shifted,
            len: len as u8,
        }
    }

    /// Letters `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        assert!(start <= end && end <= self.degree());
        let n = end - start;
        if n == 0 {
            return Word::EMPTY;
        }
        let bits = self.bits << (LETTER_BITS * start as u32);
        let keep = LETTER_BITS * n as u32;
        let mask = if keep == 64 { !0 } else { !(!0u64 >> keep) };
        Word {
            bits: bits & mask,
            len: n as u8,
        }
    }

    pub fn split_at(&self, k: usize) -> (Word, Word) {
        (self.slice(0, k), self.slice(k, self.degree()))
    }

    /// Rotation moving the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> Word {
        let (u, v) = self.split_at(k % self.degree().max(1));
        v.concat(&u)
    }

    /// Largest letter index used, or `None` for the empty word.
    pub fn max_letter(&self) -> Option<u8> {
        self.letters().max()
    }

    /// Count of each letter: `[#A, #B, #C]`.
    pub fn letter_counts(&self) -> [usize; 3] {
        let mut c = [0; 3];
        for l in self.letters() {
            c[l as usize] += 1;
        }
        c
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for l in self.letters() {
            write!(f, "{}", Alphabet::SYMBOLS[l as usize])?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Parses `"AABAB"`; `"1"` denotes the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::EMPTY);
        }
        let letters = s
            .chars()
            .map(|c| match c {
                'A' => Ok(0),
                'B' => Ok(1),
                'C' => Ok(2),
                other => Err(WordError::UnknownLetter(other)),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Word::from_letters(&letters)
    }
}

/// True iff `w` is strictly smaller than each of its proper suffixes.
pub fn is_lyndon(w: &Word) -> Result<bool, WordError> {
    if w.is_empty() {
        return Err(WordError::Empty);
    }
    let n = w.degree();
    Ok((1..n).all(|i| *w < w.slice(i, n)))
}

/// All Lyndon words of exactly `degree` letters over `alphabet`, in
/// lexicographic order.
///
/// Duval's successor rule: repeat the current prefix periodically up to
/// length `degree`, strip trailing maximal letters, bump the last letter.
/// Every word produced along the way is Lyndon; the ones of full length are
/// kept.
pub fn lyndon_words(alphabet: Alphabet, degree: usize) -> Result<Vec<Word>, WordError> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(WordError::DegreeOutOfRange(degree));
    }
    let top = alphabet.len() as u8 - 1;
    let mut out = Vec::new();
    let mut w: Vec<u8> = vec![0];
    while !w.is_empty() {
        if w.len() == degree {
            out.push(Word::from_letters(&w)?);
        }
        let period = w.len();
        while w.len() < degree {
            w.push(w[w.len() - period]);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    Ok(out)
}

fn mobius(mut n: u64) -> i128 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Witt's necklace count `(1/q) Σ_{d|q} μ(d) m^{q/d}`.
pub fn lyndon_count(m: u64, degree: usize) -> Result<u64, WordError> {
    if degree == 0 {
        return Err(WordError::DegreeOutOfRange(degree));
    }
    if m < 2 {
        return Err(WordError::AlphabetSize(m as usize));
    }
    let overflow = || WordError::CountOverflow { m, q: degree };
    let q = degree as u64;
    let mut sum: i128 = 0;
    for d in (1..=q).filter(|d| q.is_multiple_of(*d)) {
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        let e = u32::try_from(q / d).map_err(|_| overflow())?;
        let power = (m as i128).checked_pow(e).ok_or_else(overflow)?;
        sum += mu * power;
    }
    u64::try_from(sum / q as i128).map_err(|_| overflow())
}

/// Split of a Lyndon word `w = u·v` where `v` is the longest proper suffix
/// that is itself Lyndon.
pub fn standard_factorization(w: &Word) -> Result<(Word, Word), WordError> {
    if !is_lyndon(w)? {
        return Err(WordError::NotLyndon(*w));
    }
    if w.degree() == 1 {
        return Err(WordError::Letter(*w));
    }
    let n = w.degree();
    for split in 1..n {
        let v = w.slice(split, n);
        if is_lyndon(&v)? {
            return Ok((w.slice(0, split), v));
        }
    }
    unreachable!("the last letter of a word is always Lyndon")
}

/// Sparse integer combination of words.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct IntNCPoly {
    terms: BTreeMap<Word, i64>,
}

impl IntNCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(w: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, 1);
        IntNCPoly { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Word, i64)>) -> Self {
        let mut p = IntNCPoly::zero();
        for (w, c) in iter {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(w).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn coeff(&self, w: &Word) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
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

    /// Terms in ascending word order.
    pub fn iter(&self) -> impl Iterator<Item = (&Word, &i64)> {
        self.terms.iter()
    }

    pub fn mul(&self, other: &IntNCPoly) -> IntNCPoly {
        let mut out = IntNCPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    pub fn sub(&self, other: &IntNCPoly) -> IntNCPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, -c);
        }
        out
    }

    /// Commutator `self·other − other·self`.
    pub fn commutator(&self, other: &IntNCPoly) -> IntNCPoly {
        self.mul(other).sub(&other.mul(self))
    }
}

impl fmt::Display for IntNCPoly {
    /// Signed coefficients, terms in ascending word order:
    /// `+1*AB -1*BA`. The zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c:+}*{w}")?;
        }
        Ok(())
    }
}

/// Expansion of the standard bracketing of a Lyndon word into words.
pub fn bracket_expansion(w: &Word) -> Result<IntNCPoly, WordError> {
    if !is_lyndon(w)? {
        return Err(WordError::NotLyndon(*w));
    }
    Ok(expand_lyndon(w))
}

fn expand_lyndon(w: &Word) -> IntNCPoly {
    if w.degree() == 1 {
        return IntNCPoly::monomial(*w);
    }
    let (u, v) = standard_factorization(w).expect("input is Lyndon");
    expand_lyndon(&u).commutator(&expand_lyndon(&v))
}

/// Bracketed form of a Lyndon word, e.g. `[A,[A,B]]`.
pub fn bracket_string(w: &Word) -> Result<String, WordError> {
    if !is_lyndon(w)? {
        return Err(WordError::NotLyndon(*w));
    }
    fn go(w: &Word) -> String {
        if w.degree() == 1 {
            return w.to_string();
        }
        let (u, v) = standard_factorization(w).expect("input is Lyndon");
        format!("[{},{}]", go(&u), go(&v))
    }
    Ok(go(w))
}
