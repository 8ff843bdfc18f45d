//! Simple linear recurrences `U_n = a_1 alpha_1^n + ... + a_d alpha_d^n`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::places::{height, mult_independent};
use crate::ratfunc::{Poly, RatFunc};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleRecurrence {
    roots: Vec<RatFunc>,
    coeffs: Vec<RatFunc>,
}

impl SimpleRecurrence {
    pub fn new(roots: Vec<RatFunc>, coeffs: Vec<RatFunc>) -> Result<SimpleRecurrence> {
        if roots.len() != coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: roots.len(),
                found: coeffs.len(),
            });
        }
        if roots.len() < 2 {
            return Err(Error::OrderTooSmall(roots.len()));
        }
        check_roots(&roots)?;
        if let Some(i) = coeffs.iter().position(RatFunc::is_zero) {
            return Err(Error::ZeroCoefficient(i));
        }
        Ok(SimpleRecurrence { roots, coeffs })
    }

    /// Builds from the characteristic coefficients `w` and initial values,
    /// with the roots supplied by the caller and checked against `w`.
    pub fn from_recurrence(w: &[RatFunc], roots: Vec<RatFunc>, initials: &[RatFunc]) -> Result<SimpleRecurrence> {
        if w.len() != roots.len() {
            return Err(Error::DimensionMismatch {
                expected: w.len(),
                found: roots.len(),
            });
        }
        for (i, r) in roots.iter().enumerate() {
            // r^d - w_1 r^(d-1) - ... - w_d
            let d = w.len() as u32;
            let value = w
                .iter()
                .enumerate()
                .fold(r.pow_u(d), |acc, (k, wk)| &acc - &(wk * &r.pow_u(d - 1 - k as u32)));
            if !value.is_zero() {
                return Err(Error::NotARoot(i));
            }
        }
        let coeffs = coeffs_from_initials(&roots, initials)?;
        SimpleRecurrence::new(roots, coeffs)
    }

    pub fn order(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[RatFunc] {
        &self.roots
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    /// The summands `a_i alpha_i^n`.
    pub fn summands(&self, n: u32) -> Vec<RatFunc> {
        self.coeffs
            .iter()
            .zip(&self.roots)
            .map(|(a, r)| a * &r.pow_u(n))
            .collect()
    }

    pub fn term(&self, n: u32) -> RatFunc {
        self.summands(n)
            .iter()
            .fold(RatFunc::zero(), |acc, t| &acc + t)
    }

    /// `w_1..w_d` with `X^d - w_1 X^(d-1) - ... - w_d = prod (X - alpha_i)`.
    pub fn char_poly_coeffs(&self) -> Vec<RatFunc> {
        // e_k are the elementary symmetric functions; w_k = (-1)^(k+1) e_k
        let mut e = vec![RatFunc::one()];
        for r in &self.roots {
            let mut next = e.clone();
            next.push(RatFunc::zero());
            for k in 1..next.len() {
                next[k] = &next[k] + &(&e[k - 1] * r);
            }
            e = next;
        }
        e.into_iter()
            .enumerate()
            .skip(1)
            .map(|(k, ek)| if k % 2 == 1 { ek } else { -ek })
            .collect()
    }

    pub fn negated(&self) -> SimpleRecurrence {
        SimpleRecurrence {
            roots: self.roots.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

fn check_roots(roots: &[RatFunc]) -> Result<()> {
    if let Some(i) = roots.iter().position(RatFunc::is_zero) {
        return Err(Error::ZeroRoot(i));
    }
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if roots[i] == roots[j] {
                return Err(Error::RepeatedRoot(i, j));
            }
        }
    }
    Ok(())
}

/// Solves the Vandermonde system `sum_i a_i alpha_i^n = U_n`, `n < d`.
pub fn coeffs_from_initials(roots: &[RatFunc], initials: &[RatFunc]) -> Result<Vec<RatFunc>> {
    if roots.len() != initials.len() {
        return Err(Error::DimensionMismatch {
            expected: roots.len(),
            found: initials.len(),
        });
    }
    check_roots(roots)?;
    let d = roots.len();
    let mut rows: Vec<Vec<RatFunc>> = (0..d)
        .map(|n| {
            let mut row: Vec<RatFunc> = roots.iter().map(|r| r.pow_u(n as u32)).collect();
            row.push(initials[n].clone());
            row
        })
        .collect();
    for col in 0..d {
        let pivot = (col..d)
            .find(|&r| !rows[r][col].is_zero())
            .expect("distinct roots give an invertible Vandermonde matrix");
        rows.swap(col, pivot);
        let inv = rows[col][col].inverse()?;
        for k in col..=d {
            rows[col][k] = &rows[col][k] * &inv;
        }
        for r in 0..d {
            if r == col || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for k in col..=d {
                let delta = &factor * &rows[col][k];
                rows[r][k] = &rows[r][k] - &delta;
            }
        }
    }
    Ok(rows.into_iter().map(|mut row| row.pop().expect("augmented column")).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    Simple,
    NonDegenerate,
    RootsNonconstant,
    PairwiseMultIndependent,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::Simple => "simple",
            Hypothesis::NonDegenerate => "non-degenerate",
            Hypothesis::RootsNonconstant => "roots non-constant",
            Hypothesis::PairwiseMultIndependent => "pairwise multiplicatively independent",
        })
    }
}

/// A violated hypothesis; `i == j` for single-root violations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub hypothesis: Hypothesis,
    pub i: usize,
    pub j: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub simple: bool,
    pub non_degenerate: bool,
    pub roots_nonconstant: bool,
    pub pairwise_mult_independent: bool,
    pub witnesses: Vec<Witness>,
}

impl HypothesisReport {
    /// All hypotheses of the single-sequence theorem.
    pub fn all_hold(&self) -> bool {
        self.simple && self.non_degenerate && self.roots_nonconstant && self.pairwise_mult_independent
    }

    /// Hypotheses used for three sequences: independence is not required.
    pub fn triple_hold(&self) -> bool {
        self.simple && self.non_degenerate && self.roots_nonconstant
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "simple={} non_degenerate={} roots_nonconstant={} pairwise_mult_independent={}",
            self.simple, self.non_degenerate, self.roots_nonconstant, self.pairwise_mult_independent
        )?;
        for w in &self.witnesses {
            if w.i == w.j {
                write!(f, "; {} fails at root {}", w.hypothesis, w.i)?;
            } else {
                write!(f, "; {} fails at roots ({}, {})", w.hypothesis, w.i, w.j)?;
            }
        }
        Ok(())
    }
}

pub fn validate(rec: &SimpleRecurrence) -> HypothesisReport {
    let roots = rec.roots();
    let mut witnesses = Vec::new();
    for (i, r) in roots.iter().enumerate() {
        if height(r).map_or(true, |h| h == 0) {
            witnesses.push(Witness {
                hypothesis: Hypothesis::RootsNonconstant,
                i,
                j: i,
            });
        }
    }
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if roots[i] == roots[j] {
                witnesses.push(Witness {
                    hypothesis: Hypothesis::Simple,
                    i,
                    j,
                });
                continue;
            }
            let ratio = roots[i].checked_div(&roots[j]).expect("nonzero roots");
            if ratio.is_constant() {
                witnesses.push(Witness {
                    hypothesis: Hypothesis::NonDegenerate,
                    i,
                    j,
                });
            }
            if !mult_independent(&roots[i], &roots[j]).unwrap_or(false) {
                witnesses.push(Witness {
                    hypothesis: Hypothesis::PairwiseMultIndependent,
                    i,
                    j,
                });
            }
        }
    }
    witnesses.sort_by_key(|w| (w.hypothesis, w.i, w.j));
    let holds = |h: Hypothesis| !witnesses.iter().any(|w| w.hypothesis == h);
    HypothesisReport {
        simple: holds(Hypothesis::Simple),
        non_degenerate: holds(Hypothesis::NonDegenerate),
        roots_nonconstant: holds(Hypothesis::RootsNonconstant),
        pairwise_mult_independent: holds(Hypothesis::PairwiseMultIndependent),
        witnesses,
    }
}

/// Fails with the full report unless every single-sequence hypothesis holds.
pub fn require_valid(rec: &SimpleRecurrence) -> Result<HypothesisReport> {
    let report = validate(rec);
    if report.all_hold() {
        Ok(report)
    } else {
        Err(Error::Hypothesis(Box::new(report)))
    }
}

/// Polynomial-only convenience constructor used by fixtures and tests.
pub fn from_polys(roots: &[Poly], coeffs: &[i64]) -> Result<SimpleRecurrence> {
    SimpleRecurrence::new(
        roots.iter().cloned().map(RatFunc::from_poly).collect(),
        coeffs.iter().map(|&c| RatFunc::from_int(c)).collect(),
    )
}
