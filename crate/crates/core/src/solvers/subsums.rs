use crate::modp::{self, Fingerprint, Print};
use crate::ratfunc::RatFunc;

/// Largest term list accepted; the search walks all subsets.
pub const MAX_TERMS: usize = 20;

fn exact_sum(terms: &[RatFunc], mask: u32) -> RatFunc {
    terms
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .fold(RatFunc::zero(), |acc, (_, t)| &acc + t)
}

fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// All minimal vanishing subsums, as sorted index lists in sorted order.
///
/// Subset sums are screened by residues; only subsets whose fingerprint
/// vanishes are summed exactly. Zero terms come back as singletons.
pub fn min_vanishing_subsums(terms: &[RatFunc]) -> Vec<Vec<usize>> {
    let n = terms.len();
    assert!(n <= MAX_TERMS, "at most {MAX_TERMS} terms");
    let refs: Vec<&RatFunc> = terms.iter().collect();
    let fp = Fingerprint::avoiding(&refs);
    let prints: Option<Vec<Print>> = terms.iter().map(|t| fp.eval(t)).collect();

    let full = 1u32.checked_shl(n as u32).unwrap_or(0).wrapping_sub(1);
    let mut masks: Vec<u32> = (1..=full).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));

    let mut sums: Vec<Print> = Vec::new();
    if let Some(p) = &prints {
        sums = vec![[0; 3]; 1 << n];
        for mask in 1..=full as usize {
            let low = mask.trailing_zeros() as usize;
            sums[mask] = modp::print_add(&sums[mask & (mask - 1)], &p[low]);
        }
    }

    let mut minimal: Vec<u32> = Vec::new();
    for mask in masks {
        if minimal.iter().any(|&m| m & mask == m) {
            continue;
        }
        if prints.is_some() && !modp::print_is_zero(&sums[mask as usize]) {
            continue;
        }
        if exact_sum(terms, mask).is_zero() {
            minimal.push(mask);
        }
    }
    let mut out: Vec<Vec<usize>> = minimal.into_iter().map(indices).collect();
    out.sort();
    out
}

/// Plain subset walk with exact sums; the reference for the screened search.
pub fn min_vanishing_subsums_exhaustive(terms: &[RatFunc]) -> Vec<Vec<usize>> {
    let n = terms.len();
    assert!(n <= MAX_TERMS, "at most {MAX_TERMS} terms");
    let vanishing: Vec<u32> = (1..1u32 << n).filter(|&m| exact_sum(terms, m).is_zero()).collect();
    let mut out: Vec<Vec<usize>> = vanishing
        .iter()
        .filter(|&&m| !vanishing.iter().any(|&k| k != m && k & m == k))
        .map(|&m| indices(m))
        .collect();
    out.sort();
    out
}
