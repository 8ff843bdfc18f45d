//! Places of `Q(x)`, valuations, divisors, heights and S-units.
//!
//! A finite place is a monic squarefree polynomial standing for all of its
//! roots over the algebraic closure at once; it carries weight equal to its
//! degree. Supports are always built from gcd-free bases, so every root of a
//! basis element sees the same valuation and weighted counts agree with the
//! closure-level counts.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::modp;
use crate::ratfunc::{coprime_refine, gcd_free_basis, poly_gcd, radical, Poly, RatFunc};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(Poly),
    Infinite,
}

impl Place {
    /// Finite place from a non-constant squarefree polynomial (made monic).
    /// Irreducibility is the caller's contract.
    pub fn finite(p: &Poly) -> Result<Place> {
        if p.is_constant() {
            return Err(Error::ConstantPlace(p.to_string()));
        }
        if !p.is_squarefree() {
            return Err(Error::NotSquarefree(p.to_string()));
        }
        Ok(Place::Finite(p.monic()))
    }

    pub fn degree(&self) -> u64 {
        match self {
            Place::Finite(p) => p.deg() as u64,
            Place::Infinite => 1,
        }
    }

    pub fn parse(text: &str) -> Result<Place> {
        match text.trim() {
            "inf" | "infinity" | "oo" => Ok(Place::Infinite),
            other => Place::finite(&other.parse::<Poly>()?),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => f.write_str("inf"),
        }
    }
}

fn nonzero(f: &RatFunc, what: &'static str) -> Result<()> {
    if f.is_zero() {
        Err(Error::ZeroFunction(what))
    } else {
        Ok(())
    }
}

fn infinite_valuation(f: &RatFunc) -> i64 {
    f.den().deg() as i64 - f.num().deg() as i64
}

pub fn valuation(f: &RatFunc, place: &Place) -> Result<i64> {
    nonzero(f, "valuation")?;
    Ok(match place {
        Place::Infinite => infinite_valuation(f),
        Place::Finite(p) => f.num().multiplicity(p) as i64 - f.den().multiplicity(p) as i64,
    })
}

/// Zeros and poles with multiplicities; zero valuations are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Divisor {
    entries: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn entries(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.entries.iter().map(|(p, &v)| (p, v))
    }

    pub fn at(&self, place: &Place) -> i64 {
        self.entries.get(place).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Degree-weighted sum of valuations; zero for every principal divisor.
    pub fn degree(&self) -> i64 {
        self.entries
            .iter()
            .map(|(p, v)| p.degree() as i64 * v)
            .sum()
    }

    /// Weighted number of poles, `-sum deg * min(0, v)`.
    pub fn pole_count(&self) -> u64 {
        self.entries
            .iter()
            .map(|(p, &v)| p.degree() * v.min(0).unsigned_abs())
            .sum()
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(p, v)| format!("{v:+}*[{p}]"))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn divisor(f: &RatFunc) -> Result<Divisor> {
    nonzero(f, "divisor")?;
    let basis = gcd_free_basis(&[f.num().clone(), f.den().clone()])?;
    let mut entries = BTreeMap::new();
    for (i, b) in basis.basis.iter().enumerate() {
        let v = basis.factorizations[0].exponents[i] as i64 - basis.factorizations[1].exponents[i] as i64;
        if v != 0 {
            entries.insert(Place::Finite(b.clone()), v);
        }
    }
    let v_inf = infinite_valuation(f);
    if v_inf != 0 {
        entries.insert(Place::Infinite, v_inf);
    }
    Ok(Divisor { entries })
}

/// Height of a nonzero function: the larger of the two degrees.
pub fn height(f: &RatFunc) -> Result<u64> {
    nonzero(f, "height")?;
    Ok(f.num().deg().max(f.den().deg()) as u64)
}

/// Height computed from the divisor instead of the degrees.
pub fn height_from_divisor(f: &RatFunc) -> Result<u64> {
    Ok(divisor(f)?.pole_count())
}

/// Valuation vectors of several nonzero functions over their common support.
///
/// Returns the support (finite basis places, then infinity) and one row per
/// input. Rows are unweighted; use [`Place::degree`] for weights.
pub fn exponent_vectors(funcs: &[&RatFunc]) -> Result<(Vec<Place>, Vec<Vec<i64>>)> {
    let mut polys = Vec::with_capacity(2 * funcs.len());
    for f in funcs {
        nonzero(f, "valuation")?;
        polys.push(f.num().clone());
        polys.push(f.den().clone());
    }
    let basis = gcd_free_basis(&polys)?;
    let mut places: Vec<Place> = basis.basis.iter().cloned().map(Place::Finite).collect();
    places.push(Place::Infinite);
    let rows = funcs
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let num = &basis.factorizations[2 * k].exponents;
            let den = &basis.factorizations[2 * k + 1].exponents;
            let mut row: Vec<i64> = num.iter().zip(den).map(|(&a, &b)| a as i64 - b as i64).collect();
            row.push(infinite_valuation(f));
            row
        })
        .collect();
    Ok((places, rows))
}

/// Projective height `-sum_v min_i v(u_i)`, zero entries skipped in the min.
pub fn height_tuple(us: &[RatFunc]) -> Result<u64> {
    let live: Vec<&RatFunc> = us.iter().filter(|u| !u.is_zero()).collect();
    if live.is_empty() {
        return Err(Error::AllZero);
    }
    let (places, rows) = exponent_vectors(&live)?;
    let total: i64 = places
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let m = rows.iter().map(|r| r[j]).min().expect("nonempty");
            p.degree() as i64 * m
        })
        .sum();
    Ok((-total) as u64)
}

/// True iff the weighted valuations of `f` sum to zero.
pub fn sum_formula_check(f: &RatFunc) -> bool {
    divisor(f).map(|d| d.degree() == 0).unwrap_or(false)
}

/// A finite set of places: pairwise-coprime squarefree polynomials plus an
/// optional infinite place.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SSet {
    finite: Vec<Poly>,
    include_infinity: bool,
}

impl SSet {
    /// Validates the polynomials as given (made monic, sorted).
    pub fn new(polys: Vec<Poly>, include_infinity: bool) -> Result<SSet> {
        let mut finite = Vec::with_capacity(polys.len());
        for p in &polys {
            match Place::finite(p)? {
                Place::Finite(q) => finite.push(q),
                Place::Infinite => unreachable!(),
            }
        }
        finite.sort();
        finite.dedup();
        for i in 0..finite.len() {
            for j in i + 1..finite.len() {
                if !poly_gcd(&finite[i], &finite[j]).is_constant() {
                    return Err(Error::NotCoprime(finite[i].to_string(), finite[j].to_string()));
                }
            }
        }
        Ok(SSet {
            finite,
            include_infinity,
        })
    }

    pub fn empty() -> SSet {
        SSet {
            finite: Vec::new(),
            include_infinity: false,
        }
    }

    /// Smallest set containing every zero and pole of the given functions.
    pub fn support_of(funcs: &[&RatFunc]) -> SSet {
        SSet::empty().enlarged(funcs)
    }

    pub fn finite_polys(&self) -> &[Poly] {
        &self.finite
    }

    pub fn include_infinity(&self) -> bool {
        self.include_infinity
    }

    /// Number of places over the algebraic closure.
    pub fn size(&self) -> u64 {
        self.finite.iter().map(|p| p.deg() as u64).sum::<u64>() + u64::from(self.include_infinity)
    }

    /// Adds the supports of `funcs`; zero functions are ignored.
    pub fn enlarged(&self, funcs: &[&RatFunc]) -> SSet {
        let mut include_infinity = self.include_infinity;
        let mut parts: Vec<Poly> = self.finite.clone();
        for f in funcs.iter().filter(|f| !f.is_zero()) {
            include_infinity |= infinite_valuation(f) != 0;
            for p in [f.num(), f.den()] {
                if !p.is_constant() {
                    parts.push(radical(p));
                }
            }
        }
        SSet {
            finite: coprime_refine(parts),
            include_infinity,
        }
    }

    pub fn contains_place(&self, place: &Place) -> bool {
        match place {
            Place::Infinite => self.include_infinity,
            Place::Finite(p) => {
                let mut rest = p.clone();
                for s in &self.finite {
                    let g = poly_gcd(&rest, s);
                    if !g.is_constant() {
                        rest = rest.exact_div(&g);
                    }
                }
                rest.is_constant()
            }
        }
    }
}

impl fmt::Display for SSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.finite.iter().map(|p| p.to_string()).collect();
        if self.include_infinity {
            parts.push("inf".into());
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Strips every factor shared with the S-polynomials; true if nothing but a
/// constant is left.
fn supported_in(p: &Poly, s: &SSet) -> bool {
    let mut rest = p.clone();
    for q in &s.finite {
        if rest.is_constant() {
            break;
        }
        let mut g = poly_gcd(&rest, q);
        while !g.is_constant() {
            rest = rest.exact_div(&g);
            g = poly_gcd(&rest, &g);
        }
    }
    rest.is_constant()
}

/// S-unit test. The zero function is never an S-unit.
pub fn is_s_unit(f: &RatFunc, s: &SSet) -> bool {
    if f.is_zero() {
        return false;
    }
    if !s.include_infinity && infinite_valuation(f) != 0 {
        return false;
    }
    supported_in(f.num(), s) && supported_in(f.den(), s)
}

/// Repeated S-unit tests against one set.
///
/// When the S-polynomials stay squarefree and pairwise coprime mod P, a
/// residue computation that leaves a non-constant cofactor proves the
/// function is not an S-unit; every positive answer is confirmed exactly.
pub struct SUnitTester<'a> {
    s: &'a SSet,
    reduced: Option<Vec<Vec<u64>>>,
}

impl<'a> SUnitTester<'a> {
    pub fn new(s: &'a SSet) -> SUnitTester<'a> {
        let reduced: Option<Vec<Vec<u64>>> = s.finite.iter().map(modp::reduce_poly).collect();
        let reduced = reduced.filter(|polys| {
            let sqfree = polys
                .iter()
                .zip(&s.finite)
                .all(|(p, q)| modp::reduce_poly(&q.derivative()).is_some_and(|d| modp::gcd_degree(p, &d) == Some(0)));
            let coprime = (0..polys.len())
                .all(|i| (i + 1..polys.len()).all(|j| modp::gcd_degree(&polys[i], &polys[j]) == Some(0)));
            sqfree && coprime
        });
        SUnitTester { s, reduced }
    }

    /// `Some(false)` only when the residue computation proves failure.
    fn residue_test(&self, p: &Poly) -> Option<bool> {
        let polys = self.reduced.as_ref()?;
        let mut rest = modp::reduce_poly(p)?;
        if rest.last().is_none_or(|&c| c == 0) {
            return None;
        }
        for q in polys {
            while rest.len() >= q.len() {
                match modp::exact_quotient(&rest, q) {
                    Some(quot) => rest = quot,
                    None => break,
                }
            }
        }
        Some(rest.len() <= 1)
    }

    pub fn is_s_unit(&self, f: &RatFunc) -> bool {
        if f.is_zero() || (!self.s.include_infinity && infinite_valuation(f) != 0) {
            return false;
        }
        for p in [f.num(), f.den()] {
            if p.is_constant() {
                continue;
            }
            if self.residue_test(p) == Some(false) {
                return false;
            }
        }
        is_s_unit(f, self.s)
    }
}

fn parallel(a: &[i64], b: &[i64]) -> bool {
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| a[i] * b[j] == a[j] * b[i]))
}

/// Exponents `(a, b) != (0, 0)` with `g^a * d^b` constant, if any.
///
/// The witness is verified exactly before it is returned.
pub fn dependence_witness(g: &RatFunc, d: &RatFunc) -> Result<Option<(i64, i64)>> {
    let (_, rows) = exponent_vectors(&[g, d])?;
    let (gv, dv) = (&rows[0], &rows[1]);
    let witness = if gv.iter().all(|&v| v == 0) {
        Some((1, 0))
    } else if dv.iter().all(|&v| v == 0) {
        Some((0, 1))
    } else if parallel(gv, dv) {
        let k = gv.iter().position(|&v| v != 0).expect("nonzero row");
        let h = gv[k].gcd(&dv[k]);
        Some((dv[k] / h, -gv[k] / h))
    } else {
        None
    };
    if let Some((a, b)) = witness {
        let prod = &g.pow(a)? * &d.pow(b)?;
        assert!(prod.is_constant(), "dependence witness failed exact verification");
    }
    Ok(witness)
}

pub fn mult_independent(g: &RatFunc, d: &RatFunc) -> Result<bool> {
    Ok(dependence_witness(g, d)?.is_none())
}

/// Minimum of `phi(s, t) = 1/2 * sum_v deg(v) |s v(g) - t v(d)|` over the
/// part of the unit max-norm sphere with `s, t >= 0`.
///
/// `phi` is convex and piecewise linear, so the minimum on each edge sits at
/// an endpoint or at a point where one summand changes sign.
pub fn lemma2_constant(g: &RatFunc, d: &RatFunc) -> Result<BigRational> {
    for f in [g, d] {
        nonzero(f, "the height-gap constant")?;
        if f.is_constant() {
            return Err(Error::ConstantInput(f.to_string()));
        }
    }
    if !mult_independent(g, d)? {
        return Err(Error::Dependent(g.to_string(), d.to_string()));
    }
    let (places, rows) = exponent_vectors(&[g, d])?;
    let weights: Vec<BigInt> = places.iter().map(|p| BigInt::from(p.degree())).collect();
    let gv: Vec<BigInt> = rows[0].iter().map(|&v| BigInt::from(v)).collect();
    let dv: Vec<BigInt> = rows[1].iter().map(|&v| BigInt::from(v)).collect();
    let phi = |s: &BigRational, t: &BigRational| -> BigRational {
        let total = weights
            .iter()
            .zip(gv.iter().zip(&dv))
            .fold(BigRational::zero(), |acc, (w, (a, b))| {
                let term = s * BigRational::from_integer(a.clone()) - t * BigRational::from_integer(b.clone());
                acc + term.abs() * BigRational::from_integer(w.clone())
            });
        total / BigRational::from_integer(BigInt::from(2))
    };
    let zero = BigRational::zero();
    let one = BigRational::from_integer(BigInt::from(1));
    let in_unit = |q: &BigRational| *q >= zero && *q <= one;
    let mut candidates: Vec<(BigRational, BigRational)> = vec![
        (one.clone(), zero.clone()),
        (zero.clone(), one.clone()),
        (one.clone(), one.clone()),
    ];
    for (a, b) in gv.iter().zip(&dv) {
        if !b.is_zero() {
            let t = BigRational::new(a.clone(), b.clone());
            if in_unit(&t) {
                candidates.push((one.clone(), t));
            }
        }
        if !a.is_zero() {
            let s = BigRational::new(b.clone(), a.clone());
            if in_unit(&s) {
                candidates.push((s, one.clone()));
            }
        }
    }
    Ok(candidates
        .iter()
        .map(|(s, t)| phi(s, t))
        .min()
        .expect("candidate list is nonempty"))
}

/// `N` with `H(g^n / d^m) <= bound` implying `max(n, m) <= N`.
pub fn lemma2_bound(g: &RatFunc, d: &RatFunc, bound: u64) -> Result<u64> {
    let c = lemma2_constant(g, d)?;
    let q = BigRational::from_integer(BigInt::from(bound)) / c;
    let n = q.ceil().to_integer();
    u64::try_from(n).map_err(|_| Error::Overflow("height-gap bound"))
}
