//! Taylor coefficients of the local error and the order-condition loop.
//!
//! The `q`-th derivative of the local error at `h = 0` is
//!
//! ```text
//!   Σ_{|k|=q} (q choose k) Π_{j=s..1} Σ_{|ℓ|=k_j} (k_j choose ℓ) C_j^ℓC B_j^ℓB A_j^ℓA  −  (A+B(+C))^q
//! ```
//!
//! with `A_j = a[j]·A` etc. Conditions are the coefficients of this
//! expression at the Lyndon words of degree `q`.

use std::num::NonZeroUsize;
use std::thread;

use num_bigint::BigInt;
use num_traits::One;

use super::ansatz::Resolution;
use super::system::{Condition, ConditionBlock, LeadingErrorTerm, OrderConditionSystem};
use super::{Composition, ExpansionError, SchemeSpec};
use crate::poly::{CoeffMonomial, CoeffPoly, Family, NCPoly, Rational, Unknown};
use crate::words::{lyndon_words, Word, MAX_DEGREE};

/// Environment variable overriding the default worker count.
pub const WORKERS_ENV: &str = "OCGEN_WORKERS";

/// Worker count used when none is given: `OCGEN_WORKERS` if set and
/// positive, otherwise the available parallelism.
pub fn default_workers() -> NonZeroUsize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<NonZeroUsize>().ok())
        .or_else(|| thread::available_parallelism().ok())
        .unwrap_or(NonZeroUsize::MIN)
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `q! / Π k_j!`.
pub fn multinomial(q: u32, parts: &[u32]) -> Result<BigInt, ExpansionError> {
    let sum: u64 = parts.iter().map(|&k| k as u64).sum();
    if sum != q as u64 {
        return Err(ExpansionError::Invalid(format!(
            "parts {parts:?} sum to {sum}, not {q}"
        )));
    }
    let denom = parts
        .iter()
        .fold(BigInt::one(), |acc, &k| acc * factorial(k));
    Ok(factorial(q) / denom)
}

fn unknown(family: Family, stage: usize) -> Unknown {
    Unknown::new(family, stage as u16)
}

fn check_degree(q: usize) -> Result<(), ExpansionError> {
    if q > MAX_DEGREE {
        return Err(ExpansionError::Invalid(format!(
            "degree {q} exceeds the supported maximum {MAX_DEGREE}"
        )));
    }
    Ok(())
}

/// `Σ_{|ℓ|=k} (k choose ℓ) C_j^ℓC B_j^ℓB A_j^ℓA` as a noncommutative polynomial.
pub fn stage_expansion(spec: &SchemeSpec, stage: usize, k: u32) -> Result<NCPoly, ExpansionError> {
    if stage == 0 || stage > spec.stages() {
        return Err(ExpansionError::Invalid(format!(
            "stage {stage} outside 1..={}",
            spec.stages()
        )));
    }
    check_degree(k as usize)?;
    let families = spec.families();
    let mut out = NCPoly::zero();
    // counts[f] = exponent of family f; iterate all compositions of k into m parts
    for counts in Composition::all(k, families.len()) {
        let counts = counts.parts();
        let coeff = multinomial(k, counts)?;
        let mono = CoeffMonomial::from_factors(
            families
                .iter()
                .zip(counts)
                .map(|(&f, &e)| (unknown(f, stage), e)),
        );
        // highest letter leftmost: C^ℓC B^ℓB A^ℓA
        let mut word = Word::EMPTY;
        for (f, &e) in families.iter().zip(counts).rev() {
            for _ in 0..e {
                word = word.concat(&Word::letter(f.letter()));
            }
        }
        out.add_term(word, CoeffPoly::term(mono, Rational::from_integer(coeff)));
    }
    Ok(out)
}

/// Full `q`-th Taylor coefficient of the local error as a noncommutative
/// polynomial in the raw unknowns (no ansatz applied).
pub fn derivative_term(spec: &SchemeSpec, q: usize) -> Result<NCPoly, ExpansionError> {
    if q == 0 {
        return Err(ExpansionError::Invalid(
            "derivative order must be at least 1".into(),
        ));
    }
    check_degree(q)?;
    let s = spec.stages();
    let stage_terms: Vec<Vec<NCPoly>> = (1..=s)
        .map(|j| {
            (0..=q as u32)
                .map(|k| stage_expansion(spec, j, k))
                .collect()
        })
        .collect::<Result<_, _>>()?;

    let mut total = NCPoly::zero();
    for comp in Composition::all(q as u32, s) {
        let k = comp.parts();
        let mut prod = NCPoly::one();
        for j in (0..s).rev() {
            prod = &prod * &stage_terms[j][k[j] as usize];
        }
        let weight = Rational::from_integer(multinomial(q as u32, k)?);
        total.add_assign_ref(&prod.scale_rational(&weight));
    }
    let sum_of_letters = spec
        .alphabet()
        .letters()
        .fold(NCPoly::zero(), |acc, w| &acc + &NCPoly::word(w));
    Ok(&total - &sum_of_letters.pow(q))
}

/// Contribution of composition `k` to the coefficient of `word`: nonzero
/// only when `word` splits into consecutive runs of lengths
/// `k_s, …, k_1` that are each weakly decreasing (`C…B…A…`).
fn composition_coefficient(
    families: &[Family],
    k: &[u32],
    weight: &BigInt,
    word: &Word,
) -> Option<(CoeffMonomial, Rational)> {
    let mut pos = 0usize;
    let mut coeff = weight.clone();
    let mut factors = Vec::new();
    for (j, &kj) in k.iter().enumerate().rev() {
        let run = word.slice(pos, pos + kj as usize);
        pos += kj as usize;
        let mut prev = u8::MAX;
        for l in run.letters() {
            if l > prev {
                return None;
            }
            prev = l;
        }
        let counts = run.letter_counts();
        let counts: Vec<u32> = counts[..families.len()].iter().map(|&c| c as u32).collect();
        coeff *= multinomial(kj, &counts).expect("run counts sum to its length");
        for (&f, &e) in families.iter().zip(&counts) {
            if e > 0 {
                factors.push((unknown(f, j + 1), e));
            }
        }
    }
    Some((
        CoeffMonomial::from_factors(factors),
        Rational::from_integer(coeff),
    ))
}

/// Raw Lyndon coefficients of the `q`-th derivative, computed by the
/// deterministic map-reduce: composition `i` is evaluated by worker
/// `i mod workers`; partial vectors are folded in worker order onto the
/// `−1` contributed by the exact flow.
fn lyndon_block(
    spec: &SchemeSpec,
    q: usize,
    words: &[Word],
    workers: NonZeroUsize,
) -> Result<Vec<CoeffPoly>, ExpansionError> {
    check_degree(q)?;
    let families = spec.families();
    let s = spec.stages();
    let workers = workers.get();

    let run_worker = |id: usize| -> Vec<CoeffPoly> {
        let mut acc = vec![CoeffPoly::zero(); words.len()];
        for (idx, comp) in Composition::all(q as u32, s).enumerate() {
            if idx % workers != id {
                continue;
            }
            let k = comp.parts();
            let weight = multinomial(q as u32, k).expect("composition sums to q");
            for (slot, word) in acc.iter_mut().zip(words) {
                if let Some((mono, c)) = composition_coefficient(families, k, &weight, word) {
                    slot.add_term(mono, c);
                }
            }
        }
        acc
    };

    let run_worker = &run_worker;
    let partials: Vec<Vec<CoeffPoly>> = if workers == 1 {
        vec![run_worker(0)]
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|id| scope.spawn(move || run_worker(id)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };

    let mut total = vec![CoeffPoly::from_int(-1); words.len()];
    for partial in partials {
        for (t, p) in total.iter_mut().zip(partial) {
            t.add_assign_ref(&p);
        }
    }
    Ok(total)
}

/// Lyndon block of order `q` after ansatz substitution. With `reduce`, terms
/// that vanish and repeats (up to sign) are dropped.
fn block(
    spec: &SchemeSpec,
    resolution: &Resolution,
    q: usize,
    workers: NonZeroUsize,
    reduce: bool,
) -> Result<ConditionBlock, ExpansionError> {
    let words = lyndon_words(spec.alphabet(), q)?;
    let raw = lyndon_block(spec, q, &words, workers)?;
    let mut conditions: Vec<Condition> = Vec::with_capacity(words.len());
    for (word, poly) in words.into_iter().zip(raw) {
        let poly = resolution.apply(&poly);
        if reduce {
            if poly.is_zero() {
                continue;
            }
            let neg = -&poly;
            if conditions.iter().any(|c| c.poly == poly || c.poly == neg) {
                continue;
            }
        }
        conditions.push(Condition { word, poly });
    }
    Ok(ConditionBlock { q, conditions })
}

/// Order conditions up to order `p`, using the default worker count.
pub fn order_conditions(
    spec: &SchemeSpec,
    p: usize,
) -> Result<OrderConditionSystem, ExpansionError> {
    order_conditions_with_workers(spec, p, default_workers())
}

/// Order conditions up to order `p`. The result does not depend on
/// `workers`.
pub fn order_conditions_with_workers(
    spec: &SchemeSpec,
    p: usize,
    workers: NonZeroUsize,
) -> Result<OrderConditionSystem, ExpansionError> {
    if p == 0 {
        return Err(ExpansionError::Invalid("order must be at least 1".into()));
    }
    check_degree(p)?;
    let resolution = spec.resolution()?;
    let reduce = spec.is_reduced();
    let mut blocks = Vec::with_capacity(p);
    for q in 1..=p {
        if spec.ansatz().is_symmetric() && q % 2 == 0 {
            continue;
        }
        blocks.push(block(spec, &resolution, q, workers, reduce)?);
    }
    Ok(OrderConditionSystem {
        spec: spec.clone(),
        order: p,
        blocks,
        leading: None,
    })
}

/// Lyndon coefficients of the order-`p+1` derivative: the leading local
/// error term once the conditions up to order `p` hold.
pub fn leading_error(spec: &SchemeSpec, p: usize) -> Result<LeadingErrorTerm, ExpansionError> {
    leading_error_with_workers(spec, p, default_workers())
}

pub fn leading_error_with_workers(
    spec: &SchemeSpec,
    p: usize,
    workers: NonZeroUsize,
) -> Result<LeadingErrorTerm, ExpansionError> {
    if p == 0 {
        return Err(ExpansionError::Invalid("order must be at least 1".into()));
    }
    let resolution = spec.resolution()?;
    Ok(LeadingErrorTerm {
        order: p,
        block: block(spec, &resolution, p + 1, workers, false)?,
    })
}

/// Coefficient extraction straight from [`derivative_term`]; the slow
/// reference path for the map-reduce in [`order_conditions`].
pub fn lyndon_coefficients_by_expansion(
    spec: &SchemeSpec,
    q: usize,
) -> Result<Vec<(Word, CoeffPoly)>, ExpansionError> {
    let d = derivative_term(spec, q)?;
    Ok(lyndon_words(spec.alphabet(), q)?
        .into_iter()
        .map(|w| {
            let c = d.coeff(&w);
            (w, c)
        })
        .collect())
}
