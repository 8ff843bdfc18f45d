//! Enumeration below the computed bounds, plus family detection.

mod families;
mod subsums;
mod sunit;
mod triple;

pub use families::{
    dedupe, detect_dependent_ap, detect_lemfuchs_match, detect_pairing_families, members_below, Certificate,
    Detection, FamilyKind, InfiniteFamily, CHECK_POINTS, DEFAULT_BOX,
};
pub use subsums::{min_vanishing_subsums, min_vanishing_subsums_exhaustive, MAX_TERMS};
pub use sunit::{enumerate_sunit_sums, solve_sunit_sum, SUnitSumProblem};
pub use triple::{c11_violations, enumerate_triple, solve_triple, FlaggedSolution, TripleZeroProblem};

use serde::Serialize;

use crate::bounds::BoundTrace;

pub const DEFAULT_CEILING: u64 = 1_000_000;

/// Search limits shared by both solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SolveOptions {
    /// Refuse enumerations needing more tuple evaluations than this.
    pub ceiling: u64,
    /// Side of the box searched for family base points.
    pub search_box: u64,
    /// Enumerate offset sets in the last case of the sum bound, up to this many.
    pub strict_case4: Option<u64>,
    /// Re-run the enumeration up to twice the bound when affordable.
    pub oracle: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            ceiling: DEFAULT_CEILING,
            search_box: DEFAULT_BOX,
            strict_case4: None,
            oracle: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionReport {
    pub trace: BoundTrace,
    /// Solutions with every exponent at most the bound, sorted.
    pub solutions: Vec<Vec<u64>>,
    pub families: Vec<InfiniteFamily>,
    /// Solutions not covered by any family.
    pub sporadic: Vec<Vec<u64>>,
    /// Solutions where some three-term cross subsum vanishes.
    pub flagged: Vec<FlaggedSolution>,
    /// Whether the enumeration was repeated up to twice the bound.
    pub oracle_checked: bool,
    /// Solutions found by the repeated enumeration above the bound and
    /// outside every family; empty whenever the bound is sound.
    pub beyond_bound: Vec<Vec<u64>>,
    pub diagnostics: Vec<String>,
}

pub(crate) fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc.saturating_mul(u128::from(n - i)) / u128::from(i + 1);
    }
    acc
}
