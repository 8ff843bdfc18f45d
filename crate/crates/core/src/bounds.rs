//! Effective bounds: the S-unit height bound and the constant cascades for
//! sums of recurrence terms and for three-sequence zero equations.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::places::{height, lemma2_bound, mult_independent, SSet};
use crate::ratfunc::RatFunc;
use crate::recurrence::{require_valid, validate, SimpleRecurrence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundContext {
    pub genus: u32,
    /// Degree-weighted number of places in S.
    pub s_size: u64,
}

impl BoundContext {
    pub fn new(genus: u32, s_size: u64) -> BoundContext {
        BoundContext { genus, s_size }
    }

    pub fn with_set(self, s: &SSet) -> BoundContext {
        BoundContext {
            s_size: s.size(),
            ..self
        }
    }

    fn with_size(self, s_size: u64) -> BoundContext {
        BoundContext { s_size, ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Case {
    #[serde(rename = "setup")]
    Setup,
    I,
    II,
    III,
    IV,
    #[serde(rename = "equal_orders")]
    EqualOrders,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Setup => "setup",
            Case::I => "I",
            Case::II => "II",
            Case::III => "III",
            Case::IV => "IV",
            Case::EqualOrders => "equal_orders",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub label: String,
    pub case: Case,
    pub value: u64,
    /// Whether this constant bounds an exponent directly.
    pub bounds_exponent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundTrace {
    pub genus: u32,
    /// S after adding the supports of all coefficients and roots.
    pub enlarged_s: String,
    pub s_size: u64,
    pub entries: Vec<TraceEntry>,
    #[serde(rename = "final")]
    pub final_bound: u64,
}

impl BoundTrace {
    fn new(ctx: BoundContext, s: &SSet) -> BoundTrace {
        BoundTrace {
            genus: ctx.genus,
            enlarged_s: s.to_string(),
            s_size: s.size(),
            entries: Vec::new(),
            final_bound: 0,
        }
    }

    fn push(&mut self, label: impl Into<String>, case: Case, value: u64) {
        self.entries.push(TraceEntry {
            label: label.into(),
            case,
            value,
            bounds_exponent: false,
        });
    }

    fn push_bound(&mut self, label: impl Into<String>, case: Case, value: u64) {
        self.entries.push(TraceEntry {
            label: label.into(),
            case,
            value,
            bounds_exponent: true,
        });
        self.final_bound = self.final_bound.max(value);
    }

    pub fn get(&self, label: &str) -> Option<u64> {
        self.entries.iter().find(|e| e.label == label).map(|e| e.value)
    }
}

impl fmt::Display for BoundTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "S = {} (|S| = {}, genus {})", self.enlarged_s, self.s_size, self.genus)?;
        for e in &self.entries {
            let mark = if e.bounds_exponent { " *" } else { "" };
            let case = format!("[{}]", e.case);
            writeln!(f, "  {case:<9} {:<14} = {}{}", e.label, e.value, mark)?;
        }
        write!(f, "final = {}", self.final_bound)
    }
}

fn add(a: u64, b: u64) -> Result<u64> {
    a.checked_add(b).ok_or(Error::Overflow("bound addition"))
}

fn mul(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b).ok_or(Error::Overflow("bound multiplication"))
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

fn h(f: &RatFunc) -> u64 {
    height(f).expect("nonzero by construction")
}

fn ratio_height(a: &RatFunc, b: &RatFunc) -> u64 {
    h(&a.checked_div(b).expect("nonzero by construction"))
}

/// `binom(n, 2) * (|S| + max(0, 2g - 2))`.
pub fn bm_bound(n_terms: u64, ctx: BoundContext) -> Result<u64> {
    let pairs = n_terms
        .checked_mul(n_terms.saturating_sub(1))
        .ok_or(Error::Overflow("binomial"))?
        / 2;
    let genus_part = (2 * u64::from(ctx.genus)).saturating_sub(2);
    mul(pairs, add(ctx.s_size, genus_part)?)
}

fn max_pair<F: Fn(usize, usize) -> u64>(n: usize, f: F) -> u64 {
    (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| f(i, j))
        .max()
        .unwrap_or(0)
}

fn min_root_ratio(rec: &SimpleRecurrence) -> Result<u64> {
    let roots = rec.roots();
    let mut best = u64::MAX;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let v = ratio_height(&roots[i], &roots[j]);
            if v == 0 {
                return Err(Error::Degenerate(i, j));
            }
            best = best.min(v);
        }
    }
    Ok(best)
}

fn min_root_height(rec: &SimpleRecurrence) -> Result<u64> {
    let mut best = u64::MAX;
    for (i, r) in rec.roots().iter().enumerate() {
        let v = h(r);
        if v == 0 {
            return Err(Error::ConstantRoot(i));
        }
        best = best.min(v);
    }
    Ok(best)
}

fn max_coeff_ratio(rec: &SimpleRecurrence) -> u64 {
    let a = rec.coeffs();
    max_pair(a.len(), |i, j| ratio_height(&a[j], &a[i]))
}

fn case1_parts(rec: &SimpleRecurrence, c: u64) -> Result<(u64, u64)> {
    let c2 = add(c, max_coeff_ratio(rec))?;
    Ok((c2, ceil_div(c2, min_root_ratio(rec)?)))
}

/// Two summands with the same exponent: `n <= (C + max H(a_j/a_i)) / min H(alpha_i/alpha_j)`.
pub fn case1_bound(rec: &SimpleRecurrence, c: u64) -> Result<u64> {
    Ok(case1_parts(rec, c)?.1)
}

fn case2_parts(rec: &SimpleRecurrence, c: u64, n_t_bound: u64) -> Result<(u64, u64)> {
    let max_a = rec.coeffs().iter().map(h).max().unwrap_or(0);
    let max_alpha = rec.roots().iter().map(h).max().unwrap_or(0);
    let c5 = add(add(c, mul(2, max_a)?)?, mul(n_t_bound, max_alpha)?)?;
    Ok((c5, ceil_div(c5, min_root_height(rec)?)))
}

/// An exponent tied by a vanishing subsum to one already bounded by `n_t_bound`.
pub fn case2_bound(rec: &SimpleRecurrence, c: u64, n_t_bound: u64) -> Result<u64> {
    Ok(case2_parts(rec, c, n_t_bound)?.1)
}

fn case3_parts(rec: &SimpleRecurrence, c: u64) -> Result<(u64, u64)> {
    let c7 = add(c, max_coeff_ratio(rec))?;
    let roots = rec.roots();
    let mut c8 = 0;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            c8 = c8.max(lemma2_bound(&roots[i], &roots[j], c7)?);
        }
    }
    Ok((c7, c8))
}

/// Distinct roots and distinct exponents, closed by the height-gap lemma.
pub fn case3_bound(rec: &SimpleRecurrence, c: u64) -> Result<u64> {
    Ok(case3_parts(rec, c)?.1)
}

/// S enlarged by the supports of every root and coefficient.
pub fn enlarge_for(recs: &[&SimpleRecurrence], s: &SSet) -> SSet {
    let funcs: Vec<&RatFunc> = recs
        .iter()
        .flat_map(|r| r.roots().iter().chain(r.coeffs()))
        .collect();
    s.enlarged(&funcs)
}

/// Single-exponent bound: `sum a_i alpha_i^n` an S-unit implies `n <= N`.
///
/// Some minimal vanishing subsum of `sum a_i alpha_i^n / u - 1 = 0` holds two
/// summands with the same exponent, so the same-exponent estimate applies
/// with the height bound for a relation with `d` unknown units.
pub fn heintze_base_bound(rec: &SimpleRecurrence, s: &SSet, ctx: BoundContext) -> Result<u64> {
    require_valid(rec)?;
    heintze_unchecked(rec, s, ctx)
}

fn heintze_unchecked(rec: &SimpleRecurrence, s: &SSet, ctx: BoundContext) -> Result<u64> {
    let big = enlarge_for(&[rec], s);
    case1_bound(rec, bm_bound(rec.order() as u64, ctx.with_set(&big))?)
}

fn binom_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(u128::from(n - i)) / u128::from(i + 1);
    }
    acc
}

/// Offset sets: (r-1)-subsets of `1..=top`, each as an increasing vector.
fn offset_sets(top: u64, size: usize) -> Vec<Vec<u64>> {
    fn rec(start: u64, top: u64, left: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..=top {
            if top - v + 1 < left as u64 {
                break;
            }
            cur.push(v);
            rec(v + 1, top, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, top, size, &mut Vec::new(), &mut out);
    out
}

/// Options for [`thm1_bound`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Thm1Options {
    /// Enumerate Case IV offset sets up to this many instead of using the
    /// closed-form estimate.
    pub strict_limit: Option<u64>,
}

/// Bound on `max(n_1, ..., n_r)` for `U_{n_1} + ... + U_{n_r}` an S-unit.
pub fn thm1_bound(rec: &SimpleRecurrence, r: u64, s: &SSet, ctx: BoundContext) -> Result<BoundTrace> {
    thm1_bound_with(rec, r, s, ctx, Thm1Options::default())
}

pub fn thm1_bound_with(
    rec: &SimpleRecurrence,
    r: u64,
    s: &SSet,
    ctx: BoundContext,
    opts: Thm1Options,
) -> Result<BoundTrace> {
    require_valid(rec)?;
    if r == 0 {
        return Err(Error::OrderTooSmall(0));
    }
    let big = enlarge_for(&[rec], s);
    let ctx = ctx.with_set(&big);
    let mut trace = BoundTrace::new(ctx, &big);
    let d = rec.order() as u64;

    if r == 1 {
        let c1 = bm_bound(d, ctx)?;
        trace.push("C1", Case::Setup, c1);
        let (c2, c3) = case1_parts(rec, c1)?;
        trace.push("C2", Case::I, c2);
        trace.push_bound("C3", Case::I, c3);
        return Ok(trace);
    }

    let c1 = bm_bound(mul(r, d)?, ctx)?;
    trace.push("C1", Case::Setup, c1);

    let (c2, c3) = case1_parts(rec, c1)?;
    trace.push("C2", Case::I, c2);
    trace.push_bound("C3", Case::I, c3);

    trace.push("C4", Case::II, c1);
    let (c5, c6) = case2_parts(rec, c1, c3)?;
    trace.push("C5", Case::II, c5);
    trace.push_bound("C6", Case::II, c6);

    let (c7, c8) = case3_parts(rec, c1)?;
    trace.push("C7", Case::III, c7);
    trace.push_bound("C8", Case::III, c8);

    // Case IV: each level fixes one more offset and reshapes the coefficients,
    // whose new zeros are counted into S.
    let min_alpha = min_root_height(rec)?;
    let sum_alpha = rec.roots().iter().map(h).try_fold(0u64, add)?;
    let mut s_size = ctx.s_size;
    let mut z = 0u64;
    for m in 1..r {
        let c9 = bm_bound(mul(r, d)?, ctx.with_size(s_size))?;
        let c10 = add(z, ceil_div(c9, min_alpha))?;
        s_size = add(s_size, mul(c10, sum_alpha)?)?;
        trace.push(format!("C9^({m})"), Case::IV, c9);
        trace.push(format!("C10^({m})"), Case::IV, c10);
        trace.push(format!("S_{m}"), Case::IV, s_size);
        z = c10;
    }

    match opts.strict_limit {
        None => {
            let base = bm_bound(d, ctx.with_size(s_size))?;
            let roots = rec.roots();
            let a = rec.coeffs();
            let mut worst = 0u64;
            for i in 0..roots.len() {
                for j in 0..roots.len() {
                    if i != j {
                        let shift = mul(z, add(h(&roots[i]), h(&roots[j]))?)?;
                        worst = worst.max(add(ratio_height(&a[j], &a[i]), shift)?);
                    }
                }
            }
            let c11 = ceil_div(add(base, worst)?, min_root_ratio(rec)?);
            trace.push_bound("C11", Case::IV, c11);
            trace.push_bound("C12", Case::IV, add(c11, z)?);
        }
        Some(limit) => {
            let needed = binom_u128(z, r - 1);
            if needed > u128::from(limit) {
                return Err(Error::StrictLimit { needed, limit });
            }
            let sets = offset_sets(z, (r - 1) as usize);
            let per_set: Vec<Result<(u64, u64)>> = sets
                .par_iter()
                .map(|zetas| {
                    let coeffs: Vec<RatFunc> = rec
                        .coeffs()
                        .iter()
                        .zip(rec.roots())
                        .map(|(a, alpha)| {
                            let sum = zetas
                                .iter()
                                .fold(RatFunc::one(), |acc, &zeta| &acc + &alpha.pow_u(zeta as u32));
                            a * &sum
                        })
                        .collect();
                    let reshaped = SimpleRecurrence::new(rec.roots().to_vec(), coeffs)?;
                    let c11 = heintze_unchecked(&reshaped, &big, ctx)?;
                    Ok((c11, add(c11, *zetas.last().unwrap_or(&0))?))
                })
                .collect();
            let (mut c11, mut c12) = (0, 0);
            for item in per_set {
                let (a, b) = item?;
                c11 = c11.max(a);
                c12 = c12.max(b);
            }
            trace.push("offset sets", Case::IV, sets.len() as u64);
            trace.push_bound("C11", Case::IV, c11);
            trace.push_bound("C12", Case::IV, c12);
        }
    }
    Ok(trace)
}

/// Constants for `U_n + V_m + W_l = 0`.
pub fn thm2_constants(
    u: &SimpleRecurrence,
    v: &SimpleRecurrence,
    w: &SimpleRecurrence,
    s: &SSet,
    ctx: BoundContext,
) -> Result<BoundTrace> {
    for rec in [u, v, w] {
        let report = validate(rec);
        if !report.triple_hold() {
            return Err(Error::Hypothesis(Box::new(report)));
        }
    }
    let seqs = [(u, "n"), (v, "m"), (w, "l")];
    let big = enlarge_for(&[u, v, w], s);
    let ctx = ctx.with_set(&big);
    let mut trace = BoundTrace::new(ctx, &big);
    let total = (u.order() + v.order() + w.order()) as u64;
    let c13 = bm_bound(total, ctx)?;
    trace.push("C13", Case::Setup, c13);

    let mut c15 = [0u64; 3];
    for (k, (x, name)) in seqs.iter().enumerate() {
        let (c14, bound) = case1_parts(x, c13)?;
        trace.push(format!("C14[{name}]"), Case::I, c14);
        trace.push_bound(format!("C15[{name}]"), Case::I, bound);
        c15[k] = bound;
    }
    for (k, (x, xn)) in seqs.iter().enumerate() {
        let max_alpha = x.roots().iter().map(h).max().unwrap_or(0);
        for (y, yn) in seqs.iter().filter(|(_, n)| n != xn) {
            let max_coeff = x.coeffs().iter().chain(y.coeffs()).map(h).max().unwrap_or(0);
            let c16 = add(add(c13, mul(2, max_coeff)?)?, mul(c15[k], max_alpha)?)?;
            let c17 = ceil_div(c16, min_root_height(y)?);
            trace.push(format!("C16[{xn}->{yn}]"), Case::II, c16);
            trace.push_bound(format!("C17[{xn}->{yn}]"), Case::II, c17);
        }
    }

    if u.order() == v.order() && v.order() == w.order() {
        let c18 = bm_bound(2, ctx)?;
        trace.push("C18", Case::EqualOrders, c18);
        for i in 0..u.order() {
            let (alpha, beta, gamma) = (&u.roots()[i], &v.roots()[i], &w.roots()[i]);
            let independent = mult_independent(alpha, gamma)? && mult_independent(beta, gamma)?;
            if !independent {
                continue;
            }
            let c19 = add(c18, ratio_height(&u.coeffs()[i], &w.coeffs()[i]))?;
            let c20 = add(c18, ratio_height(&v.coeffs()[i], &w.coeffs()[i]))?;
            trace.push(format!("C19[{i}]"), Case::EqualOrders, c19);
            trace.push(format!("C20[{i}]"), Case::EqualOrders, c20);
            trace.push_bound(format!("n,l[{i}]"), Case::EqualOrders, lemma2_bound(alpha, gamma, c19)?);
            trace.push_bound(format!("m,l[{i}]"), Case::EqualOrders, lemma2_bound(beta, gamma, c20)?);
        }
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    fn rec(roots: &[&str], coeffs: &[&str]) -> SimpleRecurrence {
        SimpleRecurrence::new(roots.iter().map(|s| f(s)).collect(), coeffs.iter().map(|s| f(s)).collect()).unwrap()
    }

    fn s3() -> SSet {
        SSet::new(vec!["x".parse().unwrap(), "x+1".parse().unwrap()], true).unwrap()
    }

    #[test]
    fn bm_examples() {
        assert_eq!(bm_bound(2, BoundContext::new(0, 3)).unwrap(), 3);
        assert_eq!(bm_bound(4, BoundContext::new(0, 3)).unwrap(), 18);
        assert_eq!(bm_bound(3, BoundContext::new(2, 4)).unwrap(), 18);
        assert_eq!(bm_bound(1, BoundContext::new(0, 9)).unwrap(), 0);
        assert!(bm_bound(u64::MAX, BoundContext::new(0, 3)).is_err());
    }

    #[test]
    fn case_examples() {
        let r = rec(&["x", "x+1"], &["1", "1"]);
        assert_eq!(case1_bound(&r, 18).unwrap(), 18);
        assert_eq!(case1_bound(&rec(&["x", "x+1"], &["1", "x"]), 18).unwrap(), 19);
        assert_eq!(case1_bound(&rec(&["x", "x+1"], &["1", "x^3"]), 0).unwrap(), 3);
        assert_eq!(case2_bound(&r, 18, 18).unwrap(), 36);
        assert_eq!(case2_bound(&rec(&["x", "x+1"], &["x", "1"]), 18, 18).unwrap(), 38);
        assert_eq!(case2_bound(&rec(&["x^2", "x+1"], &["x", "1"]), 0, 0).unwrap(), 2);
        assert_eq!(case3_bound(&r, 18).unwrap(), 18);
        assert_eq!(case3_bound(&rec(&["x^2", "(x+1)^3"], &["1", "1"]), 6).unwrap(), 3);
        assert_eq!(case3_bound(&r, 0).unwrap(), 0);
        assert!(matches!(case1_bound(&rec(&["x", "2*x"], &["1", "1"]), 0), Err(Error::Degenerate(0, 1))));
        assert!(matches!(case2_bound(&rec(&["2", "x"], &["1", "1"]), 0, 0), Err(Error::ConstantRoot(0))));
    }

    #[test]
    fn base_bound_fixture() {
        let r = rec(&["x", "x+1"], &["1", "-1"]);
        let n = heintze_base_bound(&r, &s3(), BoundContext::new(0, 3)).unwrap();
        assert_eq!(n, 3);
        assert!(matches!(
            heintze_base_bound(&rec(&["x", "2*x"], &["1", "1"]), &s3(), BoundContext::new(0, 3)),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn sum_bound_fixture_trace() {
        let r = rec(&["x", "x+1"], &["1", "-1"]);
        let ctx = BoundContext::new(0, 3);
        let t = thm1_bound(&r, 2, &s3(), ctx).unwrap();
        assert_eq!(t.get("C1"), Some(18));
        assert_eq!(t.get("C3"), Some(18));
        assert_eq!(t.get("C6"), Some(36));
        assert_eq!(t.get("C8"), Some(18));
        assert_eq!(t.get("C10^(1)"), Some(18));
        assert_eq!(t.get("S_1"), Some(39));
        assert_eq!(t.get("C11"), Some(75));
        assert_eq!(t.get("C12"), Some(93));
        assert_eq!(t.final_bound, 93);

        let t1 = thm1_bound(&r, 1, &s3(), ctx).unwrap();
        assert_eq!(t1.final_bound, heintze_base_bound(&r, &s3(), ctx).unwrap());

        let strict = thm1_bound_with(&r, 2, &s3(), ctx, Thm1Options { strict_limit: Some(1000) }).unwrap();
        assert!(strict.final_bound <= t.final_bound);
        assert!(strict.final_bound >= 36);
        assert!(matches!(
            thm1_bound_with(&r, 3, &s3(), ctx, Thm1Options { strict_limit: Some(2) }),
            Err(Error::StrictLimit { .. })
        ));
    }

    #[test]
    fn sum_bound_is_permutation_invariant() {
        let ctx = BoundContext::new(0, 1);
        let a = thm1_bound(&rec(&["x", "x+1", "x^2+2"], &["1", "x", "-3"]), 2, &SSet::empty(), ctx).unwrap();
        let b = thm1_bound(&rec(&["x^2+2", "x", "x+1"], &["-3", "1", "x"]), 2, &SSet::empty(), ctx).unwrap();
        assert_eq!(a.final_bound, b.final_bound);
    }

    #[test]
    fn triple_constants_examples() {
        let u = rec(&["x-1", "x-2"], &["1", "1"]);
        let v = rec(&["x-1", "x-2"], &["1", "-2"]);
        let w = rec(&["x-2", "x-1"], &["1", "-2"]);
        let t = thm2_constants(&u, &v, &w, &SSet::empty(), BoundContext::new(0, 1)).unwrap();
        assert_eq!(t.s_size, 3);
        assert_eq!(t.get("C13"), Some(45));
        assert_eq!(t.final_bound, 90);

        let t = thm2_constants(&u, &v, &w, &SSet::empty().enlarged(&[&f("x-3"), &f("x-4")]), BoundContext::new(0, 1))
            .unwrap();
        assert_eq!(t.s_size, 5);
        assert_eq!(t.get("C13"), Some(75));
        let t = thm2_constants(&u, &v, &w, &SSet::empty(), BoundContext::new(1, 1)).unwrap();
        assert_eq!(t.get("C13"), Some(15 * 3));
    }
}
