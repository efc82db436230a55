use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ExpansionError;
use crate::poly::{Family, Rational, Unknown};
use crate::words::Alphabet;

/// Structural restriction imposed on the coefficient vector before the
/// conditions are extracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Ansatz {
    #[default]
    #[serde(rename = "plain")]
    Plain,
    /// Symmetric scheme with `a[1] = 0`.
    #[serde(rename = "sym-a")]
    SymmetricA1Zero,
    /// Symmetric scheme with `b[s] = 0`.
    #[serde(rename = "sym-b")]
    SymmetricBsZero,
    /// `(a[1], b[1], …, a[s], b[s])` reads the same backwards.
    #[serde(rename = "palindromic")]
    Palindromic,
}

impl Ansatz {
    pub fn name(self) -> &'static str {
        match self {
            Ansatz::Plain => "plain",
            Ansatz::SymmetricA1Zero => "sym-a",
            Ansatz::SymmetricBsZero => "sym-b",
            Ansatz::Palindromic => "palindromic",
        }
    }

    pub fn is_symmetric(self) -> bool {
        matches!(self, Ansatz::SymmetricA1Zero | Ansatz::SymmetricBsZero)
    }
}

impl fmt::Display for Ansatz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Ansatz {
    type Err = ExpansionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Ansatz::Plain),
            "sym-a" | "symmetric-a1-zero" => Ok(Ansatz::SymmetricA1Zero),
            "sym-b" | "symmetric-bs-zero" => Ok(Ansatz::SymmetricBsZero),
            "palindromic" => Ok(Ansatz::Palindromic),
            other => Err(ExpansionError::Invalid(format!("unknown ansatz {other:?}"))),
        }
    }
}

/// Shape of a splitting scheme whose order conditions are sought.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeSpec {
    stages: usize,
    alphabet: Alphabet,
    ansatz: Ansatz,
    fixed: BTreeMap<Unknown, Rational>,
}

impl SchemeSpec {
    pub fn new(stages: usize, operators: usize) -> Result<Self, ExpansionError> {
        if stages == 0 {
            return Err(ExpansionError::Invalid(
                "stage count must be positive".into(),
            ));
        }
        if stages > u16::MAX as usize {
            return Err(ExpansionError::Invalid(format!(
                "stage count {stages} too large"
            )));
        }
        let alphabet = Alphabet::new(operators).map_err(|_| {
            ExpansionError::Invalid(format!("operator count must be 2 or 3, got {operators}"))
        })?;
        Ok(SchemeSpec {
            stages,
            alphabet,
            ansatz: Ansatz::Plain,
            fixed: BTreeMap::new(),
        })
    }

    /// Two-operator plain scheme with `stages` stages.
    pub fn plain(stages: usize) -> Self {
        Self::new(stages, 2).expect("valid stage count")
    }

    pub fn with_ansatz(mut self, ansatz: Ansatz) -> Result<Self, ExpansionError> {
        if ansatz != Ansatz::Plain && self.operators() != 2 {
            return Err(ExpansionError::Invalid(format!(
                "ansatz {ansatz} requires exactly two operators"
            )));
        }
        self.ansatz = ansatz;
        self.resolution()?;
        Ok(self)
    }

    /// Adds a-priori values for some unknowns (the pair construction).
    pub fn with_fixed(
        mut self,
        fixed: impl IntoIterator<Item = (Unknown, Rational)>,
    ) -> Result<Self, ExpansionError> {
        for (u, v) in fixed {
            if !self.declares(&u) {
                return Err(ExpansionError::Invalid(format!(
                    "{u} is not an unknown of a {}-stage scheme with {} operators",
                    self.stages,
                    self.operators()
                )));
            }
            match self.fixed.get(&u) {
                Some(prev) if *prev != v => {
                    return Err(ExpansionError::Invalid(format!(
                        "contradictory values for {u}: {prev} and {v}"
                    )))
                }
                _ => {
                    self.fixed.insert(u, v);
                }
            }
        }
        self.resolution()?;
        Ok(self)
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn operators(&self) -> usize {
        self.alphabet.len()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn ansatz(&self) -> Ansatz {
        self.ansatz
    }

    pub fn fixed(&self) -> &BTreeMap<Unknown, Rational> {
        &self.fixed
    }

    /// Whether the structural ansatz or fixed values change the raw conditions.
    pub fn is_reduced(&self) -> bool {
        self.ansatz != Ansatz::Plain || !self.fixed.is_empty()
    }

    pub fn families(&self) -> &'static [Family] {
        &Family::ALL[..self.operators()]
    }

    pub fn declares(&self, u: &Unknown) -> bool {
        (u.family.letter() as usize) < self.operators()
            && (1..=self.stages).contains(&(u.index as usize))
    }

    /// All unknowns, ordered `a[1..s], b[1..s] (, c[1..s])`.
    pub fn unknowns(&self) -> Vec<Unknown> {
        self.families()
            .iter()
            .flat_map(|&f| (1..=self.stages as u16).map(move |j| Unknown::new(f, j)))
            .collect()
    }

    pub fn resolution(&self) -> Result<super::ansatz::Resolution, ExpansionError> {
        super::ansatz::Resolution::new(self)
    }
}

/// Collects `name=value` assignments, rejecting conflicting repeats.
pub fn fixed_from_pairs<'a>(
    pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> Result<BTreeMap<Unknown, Rational>, ExpansionError> {
    let mut out = BTreeMap::new();
    for (name, value) in pairs {
        let u: Unknown = name
            .parse()
            .map_err(|e| ExpansionError::Invalid(format!("{e}")))?;
        let v = crate::poly::parse_rational(value)
            .map_err(|e| ExpansionError::Invalid(format!("{e}")))?;
        if let Some(prev) = out.insert(u, v.clone()) {
            if prev != v {
                return Err(ExpansionError::Invalid(format!(
                    "contradictory values for {u}: {prev} and {v}"
                )));
            }
        }
    }
    Ok(out)
}

pub(crate) fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}
