use rayon::prelude::*;

use super::{binom, SolutionReport, SolveOptions};
use crate::bounds::{thm1_bound_with, BoundContext, Thm1Options};
use crate::error::{Error, Result};
use crate::places::{SSet, SUnitTester};
use crate::ratfunc::RatFunc;
use crate::recurrence::SimpleRecurrence;

/// `U_{n_1} + ... + U_{n_r}` an S-unit with `n_1 > ... > n_r >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SUnitSumProblem {
    pub rec: SimpleRecurrence,
    pub r: u64,
    pub s: SSet,
}

/// `U_0, ..., U_n_max` by running powers.
pub(crate) fn terms_upto(rec: &SimpleRecurrence, n_max: u64) -> Vec<RatFunc> {
    let mut summands: Vec<RatFunc> = rec.coeffs().to_vec();
    let mut out = Vec::with_capacity(n_max as usize + 1);
    for _ in 0..=n_max {
        out.push(summands.iter().fold(RatFunc::zero(), |acc, t| &acc + t));
        for (t, r) in summands.iter_mut().zip(rec.roots()) {
            *t = &*t * r;
        }
    }
    out
}

fn extend(
    terms: &[RatFunc],
    tester: &SUnitTester,
    prefix: &mut Vec<u64>,
    partial: &RatFunc,
    left: u64,
    out: &mut Vec<Vec<u64>>,
) {
    if left == 0 {
        if tester.is_s_unit(partial) {
            out.push(prefix.clone());
        }
        return;
    }
    let below = *prefix.last().expect("nonempty prefix");
    // need `left` distinct exponents below `below`
    for n in (left - 1..below).rev() {
        prefix.push(n);
        let next = partial + &terms[n as usize];
        extend(terms, tester, prefix, &next, left - 1, out);
        prefix.pop();
    }
}

/// Brute force: every strictly decreasing `r`-tuple with `n_1 <= n_max`
/// whose term sum is an S-unit, in lexicographic order.
pub fn enumerate_sunit_sums(p: &SUnitSumProblem, n_max: u64) -> Vec<Vec<u64>> {
    if p.r == 0 || n_max + 1 < p.r {
        return Vec::new();
    }
    let terms = terms_upto(&p.rec, n_max);
    let tester = SUnitTester::new(&p.s);
    let mut out: Vec<Vec<u64>> = (p.r - 1..=n_max)
        .into_par_iter()
        .flat_map_iter(|n1| {
            let mut found = Vec::new();
            let mut prefix = vec![n1];
            extend(&terms, &tester, &mut prefix, &terms[n1 as usize], p.r - 1, &mut found);
            found
        })
        .collect();
    out.sort();
    out
}

pub fn solve_sunit_sum(p: &SUnitSumProblem, ctx: BoundContext, opts: SolveOptions) -> Result<SolutionReport> {
    let trace = thm1_bound_with(
        &p.rec,
        p.r,
        &p.s,
        ctx,
        Thm1Options {
            strict_limit: opts.strict_case4,
        },
    )?;
    let bound = trace.final_bound;
    let needed = binom(bound.saturating_add(1), p.r);
    if needed > u128::from(opts.ceiling) {
        return Err(Error::CostCeiling {
            needed,
            ceiling: opts.ceiling,
        });
    }
    let solutions = enumerate_sunit_sums(p, bound);
    let mut diagnostics = Vec::new();
    let doubled = bound.saturating_mul(2);
    let (oracle_checked, beyond_bound) = if opts.oracle && binom(doubled + 1, p.r) <= u128::from(opts.ceiling) {
        let wide = enumerate_sunit_sums(p, doubled);
        (true, wide.into_iter().filter(|t| t[0] > bound).collect())
    } else {
        if opts.oracle {
            diagnostics.push(format!("repeat enumeration up to {doubled} skipped: above the ceiling"));
        }
        (false, Vec::new())
    };
    Ok(SolutionReport {
        trace,
        sporadic: solutions.clone(),
        solutions,
        families: Vec::new(),
        flagged: Vec::new(),
        oracle_checked,
        beyond_bound,
        diagnostics,
    })
}
