use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{poly_gcd, Poly};
use crate::error::{Error, Result};

/// Pairwise-coprime, squarefree, monic refinement of a list of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcdFreeBasis {
    /// Sorted by degree, then coefficients.
    pub basis: Vec<Poly>,
    /// One entry per input, in input order.
    pub factorizations: Vec<Factorization>,
}

/// `input = constant * prod(basis[i]^exponents[i])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub constant: BigRational,
    pub exponents: Vec<u32>,
}

impl GcdFreeBasis {
    pub fn index_of(&self, p: &Poly) -> Option<usize> {
        self.basis.iter().position(|b| b == p)
    }

    /// Multiplies the factorization of input `i` back out.
    pub fn reconstruct(&self, i: usize) -> Poly {
        let fac = &self.factorizations[i];
        self.basis
            .iter()
            .zip(&fac.exponents)
            .fold(Poly::constant(fac.constant.clone()), |acc, (b, &e)| &acc * &b.pow(e))
    }
}

/// Builds the coprime basis of all inputs, then records each input's exponents.
///
/// Inputs are first split into squarefree parts, so within one input every
/// irreducible factor of a basis element occurs with the same multiplicity.
pub fn gcd_free_basis(polys: &[Poly]) -> Result<GcdFreeBasis> {
    if let Some(i) = polys.iter().position(Poly::is_zero) {
        return Err(Error::ZeroInput(i));
    }
    let parts = polys
        .iter()
        .flat_map(|p| p.squarefree_decomposition().into_iter().map(|(q, _)| q));
    let basis = coprime_refine(parts);
    let factorizations = polys
        .iter()
        .map(|p| {
            let mut rest = p.clone();
            let exponents = basis
                .iter()
                .map(|b| {
                    let e = rest.multiplicity(b);
                    rest = rest.exact_div(&b.pow(e));
                    e
                })
                .collect();
            debug_assert!(rest.is_constant());
            Factorization {
                constant: rest.coeff(0),
                exponents,
            }
        })
        .collect();
    Ok(GcdFreeBasis {
        basis,
        factorizations,
    })
}

/// Refines squarefree polynomials into a sorted, pairwise-coprime, monic
/// set with the same product of radicals. Constants are dropped.
pub fn coprime_refine<I: IntoIterator<Item = Poly>>(items: I) -> Vec<Poly> {
    let mut basis: Vec<Poly> = Vec::new();
    let mut pending: Vec<Poly> = items
        .into_iter()
        .filter(|p| !p.is_constant())
        .map(|p| p.monic())
        .collect();
    pending.reverse();
    'next: while let Some(q) = pending.pop() {
        if q.is_constant() {
            continue;
        }
        for i in 0..basis.len() {
            let g = poly_gcd(&basis[i], &q);
            if g.is_constant() {
                continue;
            }
            // squarefree inputs make g, b/g and q/g pairwise coprime
            let b = basis.swap_remove(i);
            for piece in [b.exact_div(&g), q.exact_div(&g), g] {
                if !piece.is_constant() {
                    pending.push(piece.monic());
                }
            }
            continue 'next;
        }
        basis.push(q);
    }
    let mut basis: Vec<Poly> = basis.iter().flat_map(split_rational_roots).collect();
    basis.sort();
    basis
}

/// Largest constant or leading coefficient for which rational roots are
/// searched; bigger blocks are kept whole.
const ROOT_SEARCH_LIMIT: u64 = 100_000_000;

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Splits a monic squarefree polynomial into its rational linear factors
/// and the remaining block.
fn split_rational_roots(p: &Poly) -> Vec<Poly> {
    if p.deg() <= 1 {
        return vec![p.clone()];
    }
    let mut out = Vec::new();
    let mut rest = p.clone();
    if rest.coeff(0).is_zero() {
        out.push(Poly::x());
        rest = rest.exact_div(&Poly::x());
    }
    let c = rest.integer_coeffs();
    let bound = |v: &BigInt| v.abs().to_u64().filter(|&m| m <= ROOT_SEARCH_LIMIT);
    if let (Some(a0), Some(an)) = (bound(&c[0]), bound(c.last().expect("nonzero"))) {
        'search: for q in divisors(an) {
            for p in divisors(a0) {
                for sign in [1i64, -1] {
                    if rest.deg() <= 1 {
                        break 'search;
                    }
                    let root = BigRational::new(BigInt::from(sign) * BigInt::from(p), BigInt::from(q));
                    if rest.eval(&root).is_zero() {
                        let lin = Poly::new(vec![-root.clone(), BigRational::one()]);
                        rest = rest.exact_div(&lin);
                        out.push(lin);
                    }
                }
            }
        }
    }
    if !rest.is_constant() {
        out.push(rest.monic());
    }
    out
}

/// Monic radical of a nonzero polynomial's non-constant part.
pub fn radical(p: &Poly) -> Poly {
    p.squarefree_decomposition()
        .into_iter()
        .fold(Poly::one(), |acc, (q, _)| &acc * &q)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn exps(b: &GcdFreeBasis, input: usize, order: &[Poly]) -> Vec<u32> {
        order
            .iter()
            .map(|q| b.factorizations[input].exponents[b.index_of(q).expect("in basis")])
            .collect()
    }

    #[test]
    fn basis_examples() {
        let xm1 = p(&[-1, 1]);
        let xp1 = p(&[1, 1]);
        let x = p(&[0, 1]);

        let b = gcd_free_basis(&[p(&[-1, 0, 1]), xm1.clone()]).unwrap();
        assert_eq!(b.basis.len(), 2);
        let order = [xm1.clone(), xp1.clone()];
        assert_eq!(exps(&b, 0, &order), vec![1, 1]);
        assert_eq!(exps(&b, 1, &order), vec![1, 0]);

        let b = gcd_free_basis(&[x.clone(), xp1.clone()]).unwrap();
        assert_eq!(b.basis, vec![x.clone(), xp1.clone()]);

        let f = p(&[-1, 0, 1]).pow(2);
        let g = p(&[0, -1, 0, 1]);
        let b = gcd_free_basis(&[f.clone(), g.clone()]).unwrap();
        let order = [xm1, xp1, x];
        assert_eq!(b.basis.len(), 3);
        assert_eq!(exps(&b, 0, &order), vec![2, 2, 0]);
        assert_eq!(exps(&b, 1, &order), vec![1, 1, 1]);
        assert_eq!(b.reconstruct(0), f);
        assert_eq!(b.reconstruct(1), g);
    }

    #[test]
    fn rational_roots_split() {
        let q = Poly::new(vec![BigRational::new((-1).into(), 1.into()), BigRational::zero(), BigRational::new(4.into(), 1.into())]);
        let b = gcd_free_basis(&[&q * &p(&[2, 0, 1])]).unwrap();
        assert_eq!(b.basis.len(), 3);
        assert_eq!(b.reconstruct(0), &q * &p(&[2, 0, 1]));
    }

    #[test]
    fn zero_input_rejected() {
        assert!(matches!(
            gcd_free_basis(&[p(&[1, 1]), Poly::zero()]),
            Err(Error::ZeroInput(1))
        ));
    }

    #[test]
    fn constants_have_empty_support() {
        let b = gcd_free_basis(&[p(&[-3])]).unwrap();
        assert!(b.basis.is_empty());
        assert_eq!(b.reconstruct(0), p(&[-3]));
    }

    #[test]
    fn refinement_keeps_irreducible_blocks_whole() {
        // x^2+1 has no rational roots and stays a block
        let q = p(&[1, 0, 1]);
        let a = &q * &p(&[-1, 1]);
        let b = q.pow(2);
        let basis = gcd_free_basis(&[a, b]).unwrap();
        assert!(basis.basis.contains(&q));
        assert_eq!(basis.basis.len(), 2);
    }
}
