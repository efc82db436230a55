//! Linear identifications of the coefficient vector for symmetric and
//! palindromic schemes, plus a-priori fixed values.

use std::collections::BTreeMap;

use super::spec::{is_zero, Ansatz, SchemeSpec};
use super::ExpansionError;
use crate::poly::{CoeffPoly, Family, NCPoly, Rational, Unknown};

/// Image of one unknown under an ansatz.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolved {
    Free(Unknown),
    Zero,
    Value(Rational),
}

/// Per-unknown substitution implementing a [`SchemeSpec`]'s ansatz and
/// fixed values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    map: BTreeMap<Unknown, Resolved>,
}

/// Structural image for two-operator schemes. The interleaved coefficient
/// sequence (operator order, rightmost exponential first) is mirrored and
/// each unknown is identified with the earlier of itself and its mirror.
fn structural(ansatz: Ansatz, s: usize, u: Unknown) -> Option<Unknown> {
    let j = u.index as usize;
    match ansatz {
        Ansatz::Plain => Some(u),
        Ansatz::Palindromic => {
            // a[j] at 2j-1, b[j] at 2j, length 2s
            let pos = match u.family {
                Family::A => 2 * j - 1,
                _ => 2 * j,
            };
            let mirror = 2 * s + 1 - pos;
            let seq = |p: usize| {
                if p % 2 == 1 {
                    Unknown::a(p.div_ceil(2) as u16)
                } else {
                    Unknown::b((p / 2) as u16)
                }
            };
            Some(seq(pos.min(mirror)))
        }
        Ansatz::SymmetricBsZero => {
            // a[1], b[1], …, b[s-1], a[s]; length 2s-1
            if u == Unknown::b(s as u16) {
                return None;
            }
            let pos = match u.family {
                Family::A => 2 * j - 1,
                _ => 2 * j,
            };
            let mirror = 2 * s - pos;
            let seq = |p: usize| {
                if p % 2 == 1 {
                    Unknown::a(p.div_ceil(2) as u16)
                } else {
                    Unknown::b((p / 2) as u16)
                }
            };
            Some(seq(pos.min(mirror)))
        }
        Ansatz::SymmetricA1Zero => {
            // b[1], a[2], b[2], …, a[s], b[s]; length 2s-1
            if u == Unknown::a(1) {
                return None;
            }
            let pos = match u.family {
                Family::A => 2 * j - 2,
                _ => 2 * j - 1,
            };
            let mirror = 2 * s - pos;
            let seq = |p: usize| {
                if p % 2 == 1 {
                    Unknown::b(p.div_ceil(2) as u16)
                } else {
                    Unknown::a((p / 2 + 1) as u16)
                }
            };
            Some(seq(pos.min(mirror)))
        }
    }
}

impl Resolution {
    pub fn new(spec: &SchemeSpec) -> Result<Self, ExpansionError> {
        let s = spec.stages();
        let mut map: BTreeMap<Unknown, Resolved> = spec
            .unknowns()
            .into_iter()
            .map(|u| {
                let r = match structural(spec.ansatz(), s, u) {
                    Some(rep) => Resolved::Free(rep),
                    None => Resolved::Zero,
                };
                (u, r)
            })
            .collect();

        let mut rep_values: BTreeMap<Unknown, Rational> = BTreeMap::new();
        for (u, v) in spec.fixed() {
            match map.get(u) {
                Some(Resolved::Zero) => {
                    if !is_zero(v) {
                        return Err(ExpansionError::Invalid(format!(
                            "{u} = {v} contradicts the {} ansatz, which forces {u} = 0",
                            spec.ansatz()
                        )));
                    }
                }
                Some(Resolved::Free(rep)) => {
                    if let Some(prev) = rep_values.insert(*rep, v.clone()) {
                        if prev != *v {
                            return Err(ExpansionError::Invalid(format!(
                                "{u} = {v} contradicts the value {prev} implied for {rep} by the {} ansatz",
                                spec.ansatz()
                            )));
                        }
                    }
                }
                Some(Resolved::Value(_)) => unreachable!(),
                None => {
                    return Err(ExpansionError::Invalid(format!(
                        "{u} is not an unknown of this scheme"
                    )))
                }
            }
        }
        for r in map.values_mut() {
            if let Resolved::Free(rep) = r {
                if let Some(v) = rep_values.get(rep) {
                    *r = if is_zero(v) {
                        Resolved::Zero
                    } else {
                        Resolved::Value(v.clone())
                    };
                }
            }
        }
        Ok(Resolution { map })
    }

    pub fn resolve(&self, u: &Unknown) -> Option<&Resolved> {
        self.map.get(u)
    }

    /// Whether every unknown maps to itself.
    pub fn is_identity(&self) -> bool {
        self.map.iter().all(|(u, r)| *r == Resolved::Free(*u))
    }

    /// Unknowns that remain symbolic after substitution.
    pub fn free_unknowns(&self) -> Vec<Unknown> {
        let mut v: Vec<Unknown> = self
            .map
            .values()
            .filter_map(|r| match r {
                Resolved::Free(rep) => Some(*rep),
                _ => None,
            })
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn apply(&self, p: &CoeffPoly) -> CoeffPoly {
        if self.is_identity() {
            return p.clone();
        }
        p.substitute(|u| {
            self.map.get(u).map(|r| match r {
                Resolved::Free(rep) => CoeffPoly::var(*rep),
                Resolved::Zero => CoeffPoly::zero(),
                Resolved::Value(v) => CoeffPoly::constant(v.clone()),
            })
        })
    }

    pub fn apply_nc(&self, p: &NCPoly) -> NCPoly {
        p.map_coeffs(|c| self.apply(c))
    }

    /// Full coefficient assignment from values for the free unknowns.
    /// Unknowns missing from `free_values` stay unassigned.
    pub fn expand_values(
        &self,
        free_values: &BTreeMap<Unknown, Rational>,
    ) -> BTreeMap<Unknown, Rational> {
        self.map
            .iter()
            .filter_map(|(u, r)| {
                let v = match r {
                    Resolved::Free(rep) => free_values.get(rep)?.clone(),
                    Resolved::Zero => Rational::from_integer(0.into()),
                    Resolved::Value(v) => v.clone(),
                };
                Some((*u, v))
            })
            .collect()
    }
}

/// Substitutes the ansatz of `spec` into a coefficient polynomial.
pub fn apply_ansatz(spec: &SchemeSpec, p: &CoeffPoly) -> Result<CoeffPoly, ExpansionError> {
    Ok(spec.resolution()?.apply(p))
}

/// Substitutes the ansatz of `spec` into every coefficient of `p`.
pub fn apply_ansatz_nc(spec: &SchemeSpec, p: &NCPoly) -> Result<NCPoly, ExpansionError> {
    Ok(spec.resolution()?.apply_nc(p))
}
