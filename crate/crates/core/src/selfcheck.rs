//! Seeded property suites over random rational functions.

use std::fmt;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::places::{divisor, height, height_from_divisor, SSet};
use crate::ratfunc::{rat, Poly, RatFunc};
use crate::solvers::min_vanishing_subsums;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;
pub const DEFAULT_CASES: usize = 500;
pub const MAX_DEGREE: usize = 12;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer polynomial of exact degree `deg` with coefficients in `[-bound, bound]`.
pub fn random_poly(rng: &mut impl Rng, deg: usize, bound: i64) -> Poly {
    let mut c: Vec<BigRational> = (0..deg).map(|_| rat(rng.gen_range(-bound..=bound))).collect();
    let mut lead = 0;
    while lead == 0 {
        lead = rng.gen_range(-bound..=bound);
    }
    c.push(rat(lead));
    Poly::new(c)
}

/// Nonzero function with numerator and denominator degrees at most `max_deg`.
pub fn random_ratfunc(rng: &mut impl Rng, max_deg: usize) -> RatFunc {
    let (dn, dd) = (rng.gen_range(0..=max_deg), rng.gen_range(0..=max_deg));
    let num = random_poly(rng, dn, 9);
    let den = random_poly(rng, dd, 9);
    RatFunc::new(num, den).expect("nonzero denominator")
}

/// Product `c * prod p_j^e_j` over a small pool of places, exponents in `[-2, 2]`.
pub fn random_unit(rng: &mut impl Rng, pool: &[Poly]) -> RatFunc {
    let mut f = RatFunc::from_int(rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 });
    for p in pool {
        let e: i64 = rng.gen_range(-2..=2);
        let base = RatFunc::from_poly(p.clone());
        f = &f * &base.pow(e).expect("nonzero base");
    }
    f
}

pub fn unit_pool() -> Vec<Poly> {
    ["x", "x+1", "x-1", "x+2", "x^2+1"]
        .iter()
        .map(|s| s.parse().expect("pool polynomial"))
        .collect()
}

/// A relation `1 + u_1 + ... + u_n = 0` with `S` the support of its terms,
/// or `None` when the last term vanishes or a proper subsum does.
pub fn random_relation(rng: &mut impl Rng, n: usize) -> Option<(Vec<RatFunc>, SSet)> {
    let pool = unit_pool();
    let mut us: Vec<RatFunc> = (0..n - 1).map(|_| random_unit(rng, &pool)).collect();
    let partial = us.iter().fold(RatFunc::one(), |acc, u| &acc + u);
    if partial.is_zero() {
        return None;
    }
    us.push(-&partial);
    let mut terms = vec![RatFunc::one()];
    terms.extend(us.iter().cloned());
    let minimal = min_vanishing_subsums(&terms);
    if minimal.len() != 1 || minimal[0].len() != terms.len() {
        return None;
    }
    let refs: Vec<&RatFunc> = us.iter().collect();
    let s = SSet::empty().enlarged(&refs);
    Some((us, s))
}

/// A short list drawn from a pool with many cancellations.
pub fn random_term_list(rng: &mut impl Rng, max_len: usize) -> Vec<RatFunc> {
    const POOL: [&str; 10] = ["1", "-1", "x", "-x", "x+1", "-x-1", "2", "-2", "1/x", "0"];
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| POOL[rng.gen_range(0..POOL.len())].parse().expect("pool term"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfcheckReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl SelfcheckReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

impl fmt::Display for SelfcheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        for s in &self.suites {
            let status = if s.passed() { "pass" } else { "FAIL" };
            writeln!(f, "{status} {} ({} cases)", s.name, s.cases)?;
            for msg in s.failures.iter().take(10) {
                writeln!(f, "  {msg}")?;
            }
        }
        Ok(())
    }
}

struct Suite {
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Suite {
        Suite {
            name,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    fn done(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
        }
    }
}

fn h(f: &RatFunc) -> i64 {
    height(f).expect("nonzero") as i64
}

/// Height axioms on consecutive pairs of random functions.
pub fn height_axioms(funcs: &[RatFunc], rng: &mut impl Rng) -> Vec<SuiteResult> {
    let mut a = Suite::new("height: H(f) >= 0 and H(1/f) = H(f)");
    let mut b = Suite::new("height: sum within H(f) - H(g) and H(f) + H(g)");
    let mut c = Suite::new("height: product within H(f) - H(g) and H(f) + H(g)");
    let mut d = Suite::new("height: H(f^n) = |n| H(f)");
    let mut e = Suite::new("height: H(f) = 0 iff f is constant");
    let mut pf = Suite::new("height: H(P(f)) = deg P * H(f)");
    for (i, f) in funcs.iter().enumerate() {
        let g = &funcs[(i + 1) % funcs.len()];
        let hf = h(f);
        let hg = h(g);
        let inv = f.inverse().expect("nonzero");
        a.check(hf >= 0 && h(&inv) == hf, || format!("f = {f}"));

        let sum = f + g;
        if !sum.is_zero() {
            let hs = h(&sum);
            b.check(hf - hg <= hs && hs <= hf + hg, || format!("f = {f}, g = {g}"));
        }
        let hp = h(&(f * g));
        c.check(hf - hg <= hp && hp <= hf + hg, || format!("f = {f}, g = {g}"));

        let n: i64 = rng.gen_range(-3..=3);
        let pw = f.pow(n).expect("nonzero");
        d.check(h(&pw) == n.abs() * hf, || format!("f = {f}, n = {n}"));

        let k = RatFunc::from_int(rng.gen_range(1..=50));
        e.check((hf == 0) == f.is_constant() && h(&k) == 0, || format!("f = {f}"));

        let deg = rng.gen_range(0..=4);
        let p = random_poly(rng, deg, 9);
        let composed = f.compose_into(&p);
        pf.check(
            !composed.is_zero() && h(&composed) == p.deg() as i64 * hf,
            || format!("f = {f}, P = {p}"),
        );
    }
    vec![a.done(), b.done(), c.done(), d.done(), e.done(), pf.done()]
}

pub fn sum_formula(funcs: &[RatFunc]) -> SuiteResult {
    let mut s = Suite::new("divisor: weighted valuations sum to zero");
    for f in funcs {
        s.check(divisor(f).expect("nonzero").degree() == 0, || format!("f = {f}"));
    }
    s.done()
}

pub fn height_consistency(funcs: &[RatFunc]) -> SuiteResult {
    let mut s = Suite::new("height: degree form equals pole count");
    for f in funcs {
        s.check(height(f).ok() == height_from_divisor(f).ok(), || format!("f = {f}"));
    }
    s.done()
}

/// Runs every suite on `cases` functions drawn from `seed`.
pub fn run(seed: u64, cases: usize) -> SelfcheckReport {
    let mut r = rng(seed);
    let funcs: Vec<RatFunc> = (0..cases.max(1)).map(|_| random_ratfunc(&mut r, MAX_DEGREE)).collect();
    let mut suites = height_axioms(&funcs, &mut r);
    suites.push(sum_formula(&funcs));
    suites.push(height_consistency(&funcs));
    SelfcheckReport { seed, suites }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_is_reproducible() {
        let a = run(7, 40);
        assert!(a.passed(), "{a}");
        assert_eq!(a, run(7, 40));
        assert!(a.to_string().starts_with("seed 7\n"));
    }

    #[test]
    fn relations_are_relations() {
        let mut r = rng(3);
        let mut built = 0;
        for n in [2, 3, 4] {
            for _ in 0..10 {
                if let Some((us, s)) = random_relation(&mut r, n) {
                    built += 1;
                    let total = us.iter().fold(RatFunc::one(), |acc, u| &acc + u);
                    assert!(total.is_zero());
                    assert!(us.iter().all(|u| crate::places::is_s_unit(u, &s)));
                }
            }
        }
        assert!(built > 10);
    }
}
