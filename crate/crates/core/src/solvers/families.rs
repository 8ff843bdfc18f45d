//! Arithmetic-progression solution families.
//!
//! All three detectors share one engine. The summands of the equation are
//! partitioned into blocks holding at most one summand per sequence; a block
//! vanishes along a progression when its roots are powers of one another
//! (up to the sign witness `kappa = +-1`) and its sum vanishes at the base
//! point. Every emitted family is checked exactly at three parameter values.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::modp::{self, Fingerprint, Print};
use crate::places::dependence_witness;
use crate::ratfunc::{fmt_rational, RatFunc};
use crate::recurrence::SimpleRecurrence;

pub const DEFAULT_BOX: u64 = 64;

/// Parameter values at which every family is checked.
pub const CHECK_POINTS: [u64; 3] = [0, 1, 5];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Pairing,
    DependentAp,
    LemfuchsMatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// Exponent relations between coordinates, e.g. `n = 3/2*m + 0`.
    pub relations: Vec<String>,
    /// Blocks of matched summands, e.g. `U[0] + V[0] + W[1]`.
    pub blocks: Vec<String>,
    /// Sizes of the first part of each split sequence, when split.
    pub split: Option<Vec<usize>>,
    /// `kappa = alpha^p / beta^q` for each matched pair of roots.
    pub unit_witnesses: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfiniteFamily {
    pub kind: FamilyKind,
    pub base: Vec<u64>,
    pub steps: Vec<u64>,
    pub certificate: Certificate,
    pub verified_at: Vec<u64>,
}

impl InfiniteFamily {
    pub fn member(&self, u: u64) -> Vec<u64> {
        self.base.iter().zip(&self.steps).map(|(b, s)| b + s * u).collect()
    }

    pub fn contains(&self, t: &[u64]) -> bool {
        if t.len() != self.base.len() {
            return false;
        }
        let mut u = None;
        for ((&x, &b), &s) in t.iter().zip(&self.base).zip(&self.steps) {
            if x < b || (x - b) % s != 0 {
                return false;
            }
            let k = (x - b) / s;
            if u.is_some_and(|v| v != k) {
                return false;
            }
            u = Some(k);
        }
        true
    }

    /// Every member of `self` is a member of `other`.
    pub fn subsumed_by(&self, other: &InfiniteFamily) -> bool {
        if !other.contains(&self.base) {
            return false;
        }
        let c = self.steps[0] / other.steps[0];
        c >= 1 && self.steps.iter().zip(&other.steps).all(|(&a, &b)| a == c * b)
    }
}

/// Families plus notes on why a detector found nothing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Detection {
    pub families: Vec<InfiniteFamily>,
    pub diagnostics: Vec<String>,
}

/// One sequence of the equation as it enters the sum.
#[derive(Clone, Debug)]
pub(crate) struct Seq {
    pub name: &'static str,
    pub var: &'static str,
    pub roots: Vec<RatFunc>,
    pub coeffs: Vec<RatFunc>,
}

impl Seq {
    pub fn of(rec: &SimpleRecurrence, name: &'static str, var: &'static str) -> Seq {
        Seq {
            name,
            var,
            roots: rec.roots().to_vec(),
            coeffs: rec.coeffs().to_vec(),
        }
    }

    pub fn negated(mut self) -> Seq {
        self.coeffs = self.coeffs.iter().map(|c| -c).collect();
        self
    }

    pub fn subset(&self, idx: &[usize]) -> Seq {
        Seq {
            name: self.name,
            var: self.var,
            roots: idx.iter().map(|&i| self.roots[i].clone()).collect(),
            coeffs: idx.iter().map(|&i| self.coeffs[i].clone()).collect(),
        }
    }

    fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn term(&self, n: u64) -> RatFunc {
        self.coeffs
            .iter()
            .zip(&self.roots)
            .fold(RatFunc::zero(), |acc, (a, r)| &acc + &(a * &r.pow_u(n as u32)))
    }
}

/// `(sequence, summand)` pairs.
type Block = Vec<(usize, usize)>;

fn total_sum(seqs: &[Seq], point: &[u64]) -> RatFunc {
    seqs.iter()
        .zip(point)
        .fold(RatFunc::zero(), |acc, (s, &n)| &acc + &s.term(n))
}

fn verify(seqs: &[Seq], base: &[u64], steps: &[u64]) -> bool {
    CHECK_POINTS.iter().all(|&u| {
        let point: Vec<u64> = base.iter().zip(steps).map(|(b, s)| b + s * u).collect();
        total_sum(seqs, &point).is_zero()
    })
}

/// Step ratio between two summands: `Some((p, q))` with `p, q > 0` and
/// `alpha^p / beta^q` constant, minimal.
fn pair_ratio(alpha: &RatFunc, beta: &RatFunc) -> Option<(u64, u64)> {
    let (a, b) = dependence_witness(alpha, beta).ok()??;
    // alpha^a beta^b constant with a, b of opposite signs
    if a == 0 || b == 0 || (a > 0) == (b > 0) {
        return None;
    }
    Some((a.unsigned_abs(), b.unsigned_abs()))
}

/// Smallest positive integer steps per sequence consistent with all
/// blocks, or `None`.
fn directions(seqs: &[Seq], blocks: &[Block]) -> Option<Vec<u64>> {
    let k = seqs.len();
    let mut ratio: Vec<Option<BigRational>> = vec![None; k];
    let mut edges: Vec<(usize, usize, u64, u64)> = Vec::new();
    for block in blocks {
        for x in 0..block.len() {
            for y in x + 1..block.len() {
                let (s1, i1) = block[x];
                let (s2, i2) = block[y];
                let (p, q) = pair_ratio(&seqs[s1].roots[i1], &seqs[s2].roots[i2])?;
                edges.push((s1, s2, p, q));
            }
        }
    }
    // propagate x_s2 = x_s1 * q / p from sequence 0
    ratio[0] = Some(BigRational::one());
    let mut changed = true;
    while changed {
        changed = false;
        for &(s1, s2, p, q) in &edges {
            let pq = BigRational::new(BigInt::from(q), BigInt::from(p));
            match (ratio[s1].clone(), ratio[s2].clone()) {
                (Some(r1), None) => {
                    ratio[s2] = Some(r1 * pq);
                    changed = true;
                }
                (None, Some(r2)) => {
                    ratio[s1] = Some(r2 / pq);
                    changed = true;
                }
                (Some(r1), Some(r2)) if &r1 * &pq != r2 => return None,
                _ => {}
            }
        }
    }
    let ratio: Vec<BigRational> = ratio.into_iter().collect::<Option<_>>()?;
    let den = ratio.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = ratio.iter().map(|r| (r * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    ints.iter().map(|v| u64::try_from(v / &g).ok()).collect()
}

/// Sign witnesses `alpha^x / beta^y` for every pair in every block.
fn unit_witnesses(seqs: &[Seq], blocks: &[Block], steps: &[u64]) -> Option<Vec<i64>> {
    let mut out = Vec::new();
    for block in blocks {
        for x in 0..block.len() {
            for y in x + 1..block.len() {
                let (s1, i1) = block[x];
                let (s2, i2) = block[y];
                let lhs = seqs[s1].roots[i1].pow_u(u32::try_from(steps[s1]).ok()?);
                let rhs = seqs[s2].roots[i2].pow_u(u32::try_from(steps[s2]).ok()?);
                let kappa = lhs.checked_div(&rhs).ok()?.as_constant()?;
                if kappa.is_one() {
                    out.push(1);
                } else if (-kappa).is_one() {
                    out.push(-1);
                } else {
                    return None;
                }
            }
        }
    }
    Some(out)
}

/// Summand tables `a_i alpha_i^n` for `n < side`, as residues.
struct Tables {
    prints: Option<Vec<Vec<Vec<Print>>>>,
}

impl Tables {
    fn new(seqs: &[Seq], side: u64) -> Tables {
        let funcs: Vec<&RatFunc> = seqs.iter().flat_map(|s| s.roots.iter().chain(&s.coeffs)).collect();
        let fp = Fingerprint::avoiding(&funcs);
        let prints = seqs
            .iter()
            .map(|s| {
                (0..s.len())
                    .map(|i| {
                        let a = fp.eval(&s.coeffs[i])?;
                        let r = fp.eval(&s.roots[i])?;
                        let mut cur = a;
                        let mut row = Vec::with_capacity(side as usize);
                        for _ in 0..side {
                            row.push(cur);
                            cur = modp::print_mul(&cur, &r);
                        }
                        Some(row)
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>();
        Tables { prints }
    }

    fn block_may_vanish(&self, block: &Block, point: &[u64]) -> bool {
        let Some(p) = &self.prints else { return true };
        let sum = block
            .iter()
            .fold([0u64; 3], |acc, &(s, i)| modp::print_add(&acc, &p[s][i][point[s] as usize]));
        modp::print_is_zero(&sum)
    }
}

fn block_vanishes(seqs: &[Seq], block: &Block, point: &[u64]) -> bool {
    block
        .iter()
        .fold(RatFunc::zero(), |acc, &(s, i)| {
            &acc + &(&seqs[s].coeffs[i] * &seqs[s].roots[i].pow_u(point[s] as u32))
        })
        .is_zero()
}

fn all_points(side: u64, k: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = side.pow(k as u32);
    (0..total).map(move |mut code| {
        let mut p = vec![0; k];
        for slot in p.iter_mut().rev() {
            *slot = code % side;
            code /= side;
        }
        p
    })
}

fn relations(seqs: &[Seq], base: &[u64], steps: &[u64]) -> Vec<String> {
    let mut out = Vec::new();
    for a in 0..seqs.len() {
        for b in a + 1..seqs.len() {
            let p = BigRational::new(BigInt::from(steps[a]), BigInt::from(steps[b]));
            let q = BigRational::from_integer(BigInt::from(base[a])) - &p * BigRational::from_integer(BigInt::from(base[b]));
            let sign = if q.is_negative() { "-" } else { "+" };
            out.push(format!(
                "{} = {}*{} {} {}",
                seqs[a].var,
                fmt_rational(&p),
                seqs[b].var,
                sign,
                fmt_rational(&q.abs())
            ));
        }
    }
    out
}

fn describe(seqs: &[Seq], block: &Block) -> String {
    block
        .iter()
        .map(|&(s, i)| format!("{}[{}]", seqs[s].name, i))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Families for one fixed partition into blocks.
fn families_for_blocks(seqs: &[Seq], blocks: &[Block], side: u64, kind: FamilyKind, tables: &Tables) -> Vec<InfiniteFamily> {
    let Some(mut steps) = directions(seqs, blocks) else {
        return Vec::new();
    };
    let Some(witnesses) = unit_witnesses(seqs, blocks, &steps) else {
        return Vec::new();
    };
    if witnesses.contains(&-1) {
        steps.iter_mut().for_each(|s| *s *= 2);
    }
    let mut out = Vec::new();
    for point in all_points(side, seqs.len()) {
        // root bases only: stepping back would leave the quadrant
        if point.iter().zip(&steps).all(|(p, s)| p >= s) {
            continue;
        }
        if !blocks.iter().all(|b| tables.block_may_vanish(b, &point)) {
            continue;
        }
        if !blocks.iter().all(|b| block_vanishes(seqs, b, &point)) {
            continue;
        }
        if !verify(seqs, &point, &steps) {
            continue;
        }
        out.push(InfiniteFamily {
            kind,
            base: point.clone(),
            steps: steps.clone(),
            certificate: Certificate {
                relations: relations(seqs, &point, &steps),
                blocks: blocks.iter().map(|b| describe(seqs, b)).collect(),
                split: None,
                unit_witnesses: witnesses.clone(),
            },
            verified_at: CHECK_POINTS.to_vec(),
        });
    }
    out
}

/// Partitions of all summands into cross-sequence blocks with sizes in
/// `sizes`, each block holding at most one summand per sequence.
fn partitions(seqs: &[Seq], sizes: &[usize]) -> Vec<Vec<Block>> {
    let all: Vec<(usize, usize)> = seqs
        .iter()
        .enumerate()
        .flat_map(|(s, q)| (0..q.len()).map(move |i| (s, i)))
        .collect();
    // pairs whose roots can move together
    let compatible = |x: (usize, usize), y: (usize, usize)| {
        pair_ratio(&seqs[x.0].roots[x.1], &seqs[y.0].roots[y.1]).is_some()
    };
    let mut out = Vec::new();
    let mut used = vec![false; all.len()];
    let mut current: Vec<Block> = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn go(
        all: &[(usize, usize)],
        sizes: &[usize],
        used: &mut Vec<bool>,
        current: &mut Vec<Block>,
        out: &mut Vec<Vec<Block>>,
        compatible: &dyn Fn((usize, usize), (usize, usize)) -> bool,
    ) {
        let Some(first) = used.iter().position(|u| !u) else {
            out.push(current.clone());
            return;
        };
        used[first] = true;
        let mut block = vec![all[first]];
        extend(all, sizes, used, current, out, compatible, &mut block, first + 1);
        used[first] = false;
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        all: &[(usize, usize)],
        sizes: &[usize],
        used: &mut Vec<bool>,
        current: &mut Vec<Block>,
        out: &mut Vec<Vec<Block>>,
        compatible: &dyn Fn((usize, usize), (usize, usize)) -> bool,
        block: &mut Block,
        from: usize,
    ) {
        if sizes.contains(&block.len()) {
            current.push(block.clone());
            go(all, sizes, used, current, out, compatible);
            current.pop();
        }
        if block.len() >= *sizes.iter().max().unwrap_or(&0) {
            return;
        }
        for k in from..all.len() {
            let cand = all[k];
            if used[k] || block.iter().any(|&(s, _)| s >= cand.0) {
                continue;
            }
            if !block.iter().all(|&b| compatible(b, cand)) {
                continue;
            }
            used[k] = true;
            block.push(cand);
            extend(all, sizes, used, current, out, compatible, block, k + 1);
            block.pop();
            used[k] = false;
        }
    }

    go(&all, sizes, &mut used, &mut current, &mut out, &compatible);
    out
}

fn detect(seqs: &[Seq], sizes: &[usize], side: u64, kind: FamilyKind) -> Vec<InfiniteFamily> {
    let tables = Tables::new(seqs, side);
    let mut out = Vec::new();
    for blocks in partitions(seqs, sizes) {
        out.extend(families_for_blocks(seqs, &blocks, side, kind, &tables));
    }
    dedupe(out)
}

/// Drops families contained in another one; keeps the first of equal ones.
pub fn dedupe(families: Vec<InfiniteFamily>) -> Vec<InfiniteFamily> {
    let mut keep: Vec<InfiniteFamily> = Vec::new();
    for f in families {
        if keep.iter().any(|k| f.subsumed_by(k)) {
            continue;
        }
        keep.retain(|k| !k.subsumed_by(&f));
        keep.push(f);
    }
    keep.sort_by(|a, b| (&a.base, &a.steps, a.kind).cmp(&(&b.base, &b.steps, b.kind)));
    keep
}

fn triple_seqs(u: &SimpleRecurrence, v: &SimpleRecurrence, w: &SimpleRecurrence) -> Vec<Seq> {
    vec![Seq::of(u, "U", "n"), Seq::of(v, "V", "m"), Seq::of(w, "W", "l")]
}

/// Pairings of the summands of `U_n + V_m + W_l` into two- and three-term
/// blocks that vanish along a progression.
pub fn detect_pairing_families(
    u: &SimpleRecurrence,
    v: &SimpleRecurrence,
    w: &SimpleRecurrence,
    side: u64,
) -> Detection {
    let seqs = triple_seqs(u, v, w);
    let mut diagnostics = Vec::new();
    let total = u.order() + v.order() + w.order();
    if total % 2 == 1 {
        diagnostics.push(format!(
            "d1+d2+d3 = {total} is odd: no partition into two-term blocks, only three-term blocks tried"
        ));
    }
    let families = detect(&seqs, &[2, 3], side, FamilyKind::Pairing);
    if families.is_empty() {
        diagnostics.push(format!("no consistent pairing with a base point in the box of side {side}"));
    }
    Detection { families, diagnostics }
}

/// Per-index triples `a_i alpha_i^n + b_i beta_i^m + c_i gamma_i^l = 0` with
/// pairwise dependent roots.
pub fn detect_dependent_ap(
    u: &SimpleRecurrence,
    v: &SimpleRecurrence,
    w: &SimpleRecurrence,
    side: u64,
) -> Detection {
    if u.order() != v.order() || v.order() != w.order() {
        return Detection {
            families: Vec::new(),
            diagnostics: vec![format!(
                "orders {}, {}, {} differ: per-index triples need equal orders",
                u.order(),
                v.order(),
                w.order()
            )],
        };
    }
    let seqs = triple_seqs(u, v, w);
    if partitions(&seqs, &[3]).is_empty() {
        return Detection {
            families: Vec::new(),
            diagnostics: vec!["no matching of indices makes every triple of roots pairwise dependent".into()],
        };
    }
    let families = detect(&seqs, &[3], side, FamilyKind::DependentAp);
    let diagnostics = if families.is_empty() {
        vec![format!("dependent triples found but no base point in the box of side {side}")]
    } else {
        Vec::new()
    };
    Detection { families, diagnostics }
}

pub(crate) fn lemfuchs_seqs(a: Seq, b: Seq, side: u64) -> Vec<InfiniteFamily> {
    if a.len() != b.len() {
        return Vec::new();
    }
    let seqs = vec![a, b.negated()];
    detect(&seqs, &[2], side, FamilyKind::LemfuchsMatch)
}

/// Families `A_{n0 + r u} = B_{m0 + s u}` from a termwise matching of the
/// pairs `(a_i alpha_i^n0, alpha_i^r)` and `(b_j beta_j^m0, beta_j^s)`.
pub fn detect_lemfuchs_match(a: &SimpleRecurrence, b: &SimpleRecurrence, side: u64) -> Option<InfiniteFamily> {
    lemfuchs_seqs(Seq::of(a, "A", "n"), Seq::of(b, "B", "m"), side)
        .into_iter()
        .next()
}

/// Combines `X^(1) = -Z` (in `(x, z)`) and `X^(2) = -Y` (in `(x, y)`) into
/// one family in `(x, y, z)` order given by `order`.
fn combine(
    f_z: &InfiniteFamily,
    f_y: &InfiniteFamily,
    seqs: &[Seq],
    order: [usize; 3],
    split: Vec<usize>,
) -> Option<InfiniteFamily> {
    let (x0, r1, z0, s1) = (f_z.base[0], f_z.steps[0], f_z.base[1], f_z.steps[1]);
    let (x1, r2, y1, s2) = (f_y.base[0], f_y.steps[0], f_y.base[1], f_y.steps[1]);
    let l = r1.lcm(&r2);
    let start = x0.max(x1);
    let x = (start..start + l).find(|&x| (x - x0) % r1 == 0 && (x - x1) % r2 == 0)?;
    let y = y1 + s2 * ((x - x1) / r2);
    let z = z0 + s1 * ((x - x0) / r1);
    let mut base = vec![0; 3];
    let mut steps = vec![0; 3];
    for (slot, (b, s)) in order.iter().zip([(x, l), (y, s2 * l / r2), (z, s1 * l / r1)]) {
        base[*slot] = b;
        steps[*slot] = s;
    }
    if !verify(seqs, &base, &steps) {
        return None;
    }
    let mut witnesses = f_z.certificate.unit_witnesses.clone();
    witnesses.extend(&f_y.certificate.unit_witnesses);
    let mut blocks = f_z.certificate.blocks.clone();
    blocks.extend(f_y.certificate.blocks.iter().cloned());
    Some(InfiniteFamily {
        kind: FamilyKind::LemfuchsMatch,
        base: base.clone(),
        steps: steps.clone(),
        certificate: Certificate {
            relations: relations(seqs, &base, &steps),
            blocks,
            split: Some(split),
            unit_witnesses: witnesses,
        },
        verified_at: CHECK_POINTS.to_vec(),
    })
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Splits one sequence into two parts matched against the other two
/// sequences separately, each by a termwise matching.
pub(crate) fn detect_split_matches(
    u: &SimpleRecurrence,
    v: &SimpleRecurrence,
    w: &SimpleRecurrence,
    side: u64,
) -> Vec<InfiniteFamily> {
    let seqs = triple_seqs(u, v, w);
    let mut out = Vec::new();
    for x in 0..3 {
        let (y, z) = ((x + 1) % 3, (x + 2) % 3);
        if seqs[x].len() != seqs[y].len() + seqs[z].len() {
            continue;
        }
        for part in subsets(seqs[x].len(), seqs[z].len()) {
            let rest: Vec<usize> = (0..seqs[x].len()).filter(|i| !part.contains(i)).collect();
            let with_z = lemfuchs_seqs(seqs[x].subset(&part), seqs[z].clone().negated(), side);
            if with_z.is_empty() {
                continue;
            }
            let with_y = lemfuchs_seqs(seqs[x].subset(&rest), seqs[y].clone().negated(), side);
            let mut split = vec![0; 3];
            split[x] = part.len();
            split[y] = seqs[y].len();
            split[z] = seqs[z].len();
            for fz in &with_z {
                for fy in &with_y {
                    if let Some(f) = combine(fz, fy, &seqs, [x, y, z], split.clone()) {
                        out.push(f);
                    }
                }
            }
        }
    }
    dedupe(out)
}

/// All members of `families` below `limit` in every coordinate.
pub fn members_below(families: &[InfiniteFamily], limit: u64) -> BTreeSet<Vec<u64>> {
    let mut out = BTreeSet::new();
    for f in families {
        let mut u = 0;
        loop {
            let m = f.member(u);
            if m.iter().any(|&c| c > limit) {
                break;
            }
            out.insert(m);
            u += 1;
        }
    }
    out
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

    fn diagonal() -> [SimpleRecurrence; 3] {
        [
            rec(&["x-1", "x-2"], &["1", "1"]),
            rec(&["x-1", "x-2"], &["1", "-2"]),
            rec(&["x-2", "x-1"], &["1", "-2"]),
        ]
    }

    #[test]
    fn pairing_on_diagonal() {
        let [u, v, w] = diagonal();
        let d = detect_pairing_families(&u, &v, &w, 16);
        assert_eq!(d.families.len(), 1);
        let f = &d.families[0];
        assert_eq!(f.base, vec![0, 0, 0]);
        assert_eq!(f.steps, vec![1, 1, 1]);
        assert!(f.certificate.unit_witnesses.iter().all(|&k| k == 1));
    }

    #[test]
    fn dependent_ap_examples() {
        let [u, v, w] = diagonal();
        let d = detect_dependent_ap(&u, &v, &w, 16);
        assert_eq!(d.families.len(), 1);
        assert_eq!(d.families[0].steps, vec![1, 1, 1]);

        let u = rec(&["x", "x+1"], &["1", "1"]);
        let w = rec(&["x", "x+1"], &["-2", "-2"]);
        let d = detect_dependent_ap(&u, &u, &w, 8);
        assert_eq!(d.families[0].base, vec![0, 0, 0]);
        assert_eq!(d.families[0].steps, vec![1, 1, 1]);

        let v = rec(&["x+2", "x+3"], &["1", "1"]);
        let d = detect_dependent_ap(&u, &v, &w, 8);
        assert!(d.families.is_empty());
        assert!(!d.diagnostics.is_empty());
    }

    #[test]
    fn inconsistent_directions_give_nothing() {
        let u = rec(&["x", "x+1"], &["1", "1"]);
        let v = rec(&["(x+1)^2", "x+2"], &["-1", "1"]);
        let w = rec(&["x^3", "x+2"], &["-1", "-1"]);
        assert!(detect_pairing_families(&u, &v, &w, 12).families.is_empty());
        let v = rec(&["(x+1)^2", "x+3"], &["-1", "1"]);
        assert!(detect_pairing_families(&u, &v, &w, 12).families.is_empty());
    }

    #[test]
    fn lemfuchs_examples() {
        let a = rec(&["x", "x+1"], &["1", "1"]);
        let f = detect_lemfuchs_match(&a, &a, 8).unwrap();
        assert_eq!((f.base.clone(), f.steps.clone()), (vec![0, 0], vec![1, 1]));
        let b = rec(&["x^2", "(x+1)^2"], &["1", "1"]);
        let f = detect_lemfuchs_match(&a, &b, 8).unwrap();
        assert_eq!((f.base.clone(), f.steps.clone()), (vec![0, 0], vec![2, 1]));
        assert!(detect_lemfuchs_match(&a, &rec(&["x+2", "x+3"], &["1", "1"]), 8).is_none());
    }

    #[test]
    fn sign_witness_doubles_the_step() {
        // (-x)^n = x^n only for even n
        let a = rec(&["x", "x+1"], &["1", "1"]);
        let b = rec(&["-x", "x+1"], &["1", "1"]);
        let f = detect_lemfuchs_match(&a, &b, 8).unwrap();
        assert_eq!(f.steps, vec![2, 2]);
        assert!(f.certificate.unit_witnesses.contains(&-1));
    }

    #[test]
    fn split_matches_combine() {
        let u = rec(&["x", "x+1", "x+2", "x+3"], &["1", "1", "1", "1"]);
        let v = rec(&["x^2", "(x+1)^2"], &["-1", "-1"]);
        let w = rec(&["x+2", "x+3"], &["-1", "-1"]);
        let found = detect_split_matches(&u, &v, &w, 8);
        assert_eq!(found.len(), 1);
        assert_eq!((found[0].base.clone(), found[0].steps.clone()), (vec![0, 0, 0], vec![2, 1, 2]));
        assert_eq!(found[0].certificate.split, Some(vec![2, 2, 2]));
        let pairing = detect_pairing_families(&u, &v, &w, 8);
        assert!(pairing.families.iter().any(|f| f.steps == vec![2, 1, 2]));
    }

    #[test]
    fn membership_and_containment() {
        let fam = InfiniteFamily {
            kind: FamilyKind::Pairing,
            base: vec![0, 0, 0],
            steps: vec![2, 1, 2],
            certificate: Certificate {
                relations: vec![],
                blocks: vec![],
                split: None,
                unit_witnesses: vec![],
            },
            verified_at: vec![],
        };
        assert!(fam.contains(&[4, 2, 4]));
        assert!(!fam.contains(&[4, 2, 2]));
        let mut sub = fam.clone();
        sub.base = vec![2, 1, 2];
        sub.steps = vec![4, 2, 4];
        assert!(sub.subsumed_by(&fam));
        assert!(!fam.subsumed_by(&sub));
    }
}
