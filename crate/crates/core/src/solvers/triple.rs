use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::families::{self, dedupe, detect_dependent_ap, detect_pairing_families};
use super::sunit::terms_upto;
use super::{SolutionReport, SolveOptions};
use crate::bounds::{thm2_constants, BoundContext};
use crate::error::{Error, Result};
use crate::modp::{self, Fingerprint, Print};
use crate::places::SSet;
use crate::ratfunc::RatFunc;
use crate::recurrence::{validate, SimpleRecurrence};

/// `U_n + V_m + W_l = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleZeroProblem {
    pub u: SimpleRecurrence,
    pub v: SimpleRecurrence,
    pub w: SimpleRecurrence,
    /// Extra places for the bound; the supports of all data are always added.
    pub s: SSet,
    pub enforce_c11: bool,
}

impl TripleZeroProblem {
    fn recs(&self) -> [&SimpleRecurrence; 3] {
        [&self.u, &self.v, &self.w]
    }
}

/// A solution with vanishing cross subsums `a_i alpha_i^n + b_j beta_j^m + c_k gamma_k^l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlaggedSolution {
    pub solution: Vec<u64>,
    /// Index triples `(i, j, k)` of the vanishing subsums.
    pub vanishing: Vec<[usize; 3]>,
}

/// Index triples whose cross subsum vanishes at `(n, m, l)`.
pub fn c11_violations(p: &TripleZeroProblem, t: &[u64]) -> Vec<[usize; 3]> {
    let summands: Vec<Vec<RatFunc>> = p
        .recs()
        .iter()
        .zip(t)
        .map(|(rec, &n)| rec.summands(n as u32))
        .collect();
    let mut out = Vec::new();
    for (i, a) in summands[0].iter().enumerate() {
        for (j, b) in summands[1].iter().enumerate() {
            let ab = a + b;
            for (k, c) in summands[2].iter().enumerate() {
                if (&ab + c).is_zero() {
                    out.push([i, j, k]);
                }
            }
        }
    }
    out
}

fn print_table(rec: &SimpleRecurrence, fp: &Fingerprint, n_max: u64) -> Option<Vec<Print>> {
    let coeffs: Vec<Print> = rec.coeffs().iter().map(|c| fp.eval(c)).collect::<Option<_>>()?;
    let roots: Vec<Print> = rec.roots().iter().map(|r| fp.eval(r)).collect::<Option<_>>()?;
    let mut cur = coeffs;
    let mut out = Vec::with_capacity(n_max as usize + 1);
    for _ in 0..=n_max {
        out.push(cur.iter().fold([0; 3], |acc, t| modp::print_add(&acc, t)));
        for (t, r) in cur.iter_mut().zip(&roots) {
            *t = modp::print_mul(t, r);
        }
    }
    Some(out)
}

/// Brute force over `0 <= n, m, l <= n_max`, in lexicographic order.
///
/// Residue sums pair `(n, m)` with candidate `l` through a hash join; each
/// candidate is confirmed exactly.
pub fn enumerate_triple(p: &TripleZeroProblem, n_max: u64, enforce_c11: bool) -> Vec<Vec<u64>> {
    let funcs: Vec<&RatFunc> = p
        .recs()
        .iter()
        .flat_map(|r| r.roots().iter().chain(r.coeffs()))
        .collect();
    let fp = Fingerprint::avoiding(&funcs);
    let exact: Vec<Vec<RatFunc>> = p.recs().iter().map(|r| terms_upto(r, n_max)).collect();
    let prints: Option<Vec<Vec<Print>>> = p.recs().iter().map(|r| print_table(r, &fp, n_max)).collect();

    let mut by_print: HashMap<Print, Vec<u64>> = HashMap::new();
    if let Some(pr) = &prints {
        for (l, key) in pr[2].iter().enumerate() {
            by_print.entry(*key).or_default().push(l as u64);
        }
    }
    let all_l: Vec<u64> = (0..=n_max).collect();

    let mut out: Vec<Vec<u64>> = (0..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| {
            let mut found = Vec::new();
            for m in 0..=n_max {
                let candidates: &[u64] = match &prints {
                    Some(pr) => {
                        let key = modp::print_neg(&modp::print_add(&pr[0][n as usize], &pr[1][m as usize]));
                        by_print.get(&key).map_or(&[], |v| v.as_slice())
                    }
                    None => &all_l,
                };
                if candidates.is_empty() {
                    continue;
                }
                let nm = &exact[0][n as usize] + &exact[1][m as usize];
                for &l in candidates {
                    if (&nm + &exact[2][l as usize]).is_zero() {
                        let t = vec![n, m, l];
                        if !enforce_c11 || c11_violations(p, &t).is_empty() {
                            found.push(t);
                        }
                    }
                }
            }
            found
        })
        .collect();
    out.sort();
    out
}

pub fn solve_triple(p: &TripleZeroProblem, ctx: BoundContext, opts: SolveOptions) -> Result<SolutionReport> {
    for rec in p.recs() {
        let report = validate(rec);
        if !report.triple_hold() {
            return Err(Error::Hypothesis(Box::new(report)));
        }
    }
    let trace = thm2_constants(&p.u, &p.v, &p.w, &p.s, ctx)?;
    let bound = trace.final_bound;
    let cube = |n: u64| u128::from(n).saturating_add(1).pow(3);
    if cube(bound) > u128::from(opts.ceiling) {
        return Err(Error::CostCeiling {
            needed: cube(bound),
            ceiling: opts.ceiling,
        });
    }

    let all = enumerate_triple(p, bound, false);
    let mut flagged = Vec::new();
    let mut solutions = Vec::new();
    for t in all {
        let vanishing = c11_violations(p, &t);
        if !vanishing.is_empty() {
            flagged.push(FlaggedSolution {
                solution: t.clone(),
                vanishing,
            });
            if p.enforce_c11 {
                continue;
            }
        }
        solutions.push(t);
    }

    let mut diagnostics = Vec::new();
    let mut found = Vec::new();
    for detection in [
        detect_dependent_ap(&p.u, &p.v, &p.w, opts.search_box),
        detect_pairing_families(&p.u, &p.v, &p.w, opts.search_box),
    ] {
        found.extend(detection.families);
        diagnostics.extend(detection.diagnostics);
    }
    found.extend(families::detect_split_matches(&p.u, &p.v, &p.w, opts.search_box));
    let families = dedupe(found);
    let in_family = |t: &Vec<u64>| families.iter().any(|f| f.contains(t));
    let sporadic: Vec<Vec<u64>> = solutions.iter().filter(|t| !in_family(t)).cloned().collect();

    let doubled = bound.saturating_mul(2);
    let (oracle_checked, beyond_bound) = if opts.oracle && cube(doubled) <= u128::from(opts.ceiling) {
        let wide = enumerate_triple(p, doubled, p.enforce_c11);
        let beyond = wide
            .into_iter()
            .filter(|t| t.iter().any(|&c| c > bound) && !in_family(t))
            .collect();
        (true, beyond)
    } else {
        if opts.oracle {
            diagnostics.push(format!("repeat enumeration up to {doubled} skipped: above the ceiling"));
        }
        (false, Vec::new())
    };

    Ok(SolutionReport {
        trace,
        solutions,
        families,
        sporadic,
        flagged,
        oracle_checked,
        beyond_bound,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(roots: &[&str], coeffs: &[&str]) -> SimpleRecurrence {
        SimpleRecurrence::new(
            roots.iter().map(|s| s.parse().unwrap()).collect(),
            coeffs.iter().map(|s| s.parse().unwrap()).collect(),
        )
        .unwrap()
    }

    fn diagonal(enforce_c11: bool) -> TripleZeroProblem {
        TripleZeroProblem {
            u: rec(&["x-1", "x-2"], &["1", "1"]),
            v: rec(&["x-1", "x-2"], &["1", "-2"]),
            w: rec(&["x-2", "x-1"], &["1", "-2"]),
            s: SSet::empty(),
            enforce_c11,
        }
    }

    #[test]
    fn diagonal_enumeration() {
        let p = diagonal(false);
        let diag: Vec<Vec<u64>> = (0..=10).map(|n| vec![n, n, n]).collect();
        assert_eq!(enumerate_triple(&p, 10, false), diag);
        assert!(enumerate_triple(&p, 10, true).is_empty());
        assert_eq!(enumerate_triple(&p, 0, false), vec![vec![0, 0, 0]]);
        assert_eq!(c11_violations(&p, &[3, 3, 3]), vec![[0, 0, 1], [1, 1, 0]]);
    }

    #[test]
    fn diagonal_solve() {
        let report = solve_triple(&diagonal(false), BoundContext::new(0, 1), SolveOptions::default()).unwrap();
        assert_eq!(report.trace.final_bound, 90);
        assert_eq!(report.families.len(), 1);
        assert_eq!(report.families[0].steps, vec![1, 1, 1]);
        assert!(report.sporadic.is_empty());
        assert_eq!(report.solutions.len(), 91);
        assert_eq!(report.flagged.len(), 91);

        let strict = solve_triple(&diagonal(true), BoundContext::new(0, 1), SolveOptions::default()).unwrap();
        assert!(strict.solutions.is_empty());
        assert_eq!(strict.flagged.len(), 91);
    }

    #[test]
    fn hypothesis_failure() {
        let mut p = diagonal(false);
        p.u = rec(&["x", "2*x"], &["1", "1"]);
        assert!(matches!(
            solve_triple(&p, BoundContext::new(0, 1), SolveOptions::default()),
            Err(Error::Hypothesis(_))
        ));
    }
}
