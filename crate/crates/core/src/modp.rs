//! Arithmetic modulo the Mersenne prime 2^61 - 1.
//!
//! Used for two things: a fast coprimality pre-check inside polynomial gcd,
//! and evaluation fingerprints that prefilter exact zero tests during
//! enumeration. Every conclusion drawn from a fingerprint is either
//! one-sided (a nonzero residue proves a nonzero value) or confirmed by
//! exact arithmetic afterwards.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::ratfunc::{Poly, RatFunc};

pub const P: u64 = (1 << 61) - 1;

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    let prod = (a as u128) * (b as u128);
    let lo = (prod as u64) & P;
    let hi = (prod >> 61) as u64;
    let s = lo + hi;
    if s >= P {
        s - P
    } else {
        s
    }
}

pub fn pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue.
pub fn inv(a: u64) -> Option<u64> {
    if a == 0 {
        None
    } else {
        Some(pow(a, P - 2))
    }
}

fn reduce_int(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(P))
        .to_u64()
        .expect("residue fits in u64")
}

/// Residue of a rational, or `None` when the denominator vanishes mod P.
pub fn reduce(q: &BigRational) -> Option<u64> {
    let n = reduce_int(q.numer());
    let d = reduce_int(q.denom());
    inv(d).map(|di| mul(n, di))
}

/// Coefficients mod P (low degree first), `None` if some denominator vanishes.
pub fn reduce_poly(p: &Poly) -> Option<Vec<u64>> {
    p.coeffs().iter().map(reduce).collect()
}

pub fn eval_poly(coeffs: &[u64], t: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| add(mul(acc, t), c))
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Degree of gcd of two residue polynomials (`None` if both are zero).
pub fn gcd_degree(a: &[u64], b: &[u64]) -> Option<usize> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

fn rem(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let lead_inv = inv(*b.last().unwrap()).unwrap();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let factor = mul(*r.last().unwrap(), lead_inv);
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = sub(r[shift + i], mul(factor, c));
        }
        trim(&mut r);
    }
    r
}

/// Evaluation of rational functions at a handful of fixed residues.
///
/// Points are chosen once; a function whose denominator vanishes at a point
/// cannot be fingerprinted with that point set.
#[derive(Clone, Debug)]
pub struct Fingerprint {
    points: Vec<u64>,
}

pub type Print = [u64; 3];

impl Default for Fingerprint {
    fn default() -> Self {
        // arbitrary fixed residues; determinism matters, not the values
        Fingerprint {
            points: vec![
                1_234_567_890_123_457,
                987_654_321_987_653,
                2_305_843_009_213_693_921 % P,
            ],
        }
    }
}

impl Fingerprint {
    /// A point set at which none of `funcs` has a vanishing denominator.
    pub fn avoiding(funcs: &[&RatFunc]) -> Fingerprint {
        let mut fp = Fingerprint::default();
        let mut salt = 7u64;
        for slot in 0..fp.points.len() {
            // a coefficient denominator divisible by P defeats every point
            for _ in 0..64 {
                if funcs.iter().all(|f| fp.eval_at(f, fp.points[slot]).is_some()) {
                    break;
                }
                salt = add(mul(salt, 6_364_136_223_846_793_005 % P), 1_442_695_040_888_963_407 % P);
                fp.points[slot] = salt;
            }
        }
        fp
    }

    fn eval_at(&self, f: &RatFunc, t: u64) -> Option<u64> {
        let n = eval_poly(&reduce_poly(f.num())?, t);
        let d = eval_poly(&reduce_poly(f.den())?, t);
        inv(d).map(|di| mul(n, di))
    }

    pub fn eval(&self, f: &RatFunc) -> Option<Print> {
        let mut out = [0u64; 3];
        for (slot, &t) in out.iter_mut().zip(&self.points) {
            *slot = self.eval_at(f, t)?;
        }
        Some(out)
    }
}

/// Quotient `a / b` when `b` divides `a`; `b` must be nonzero.
pub fn exact_quotient(a: &[u64], b: &[u64]) -> Option<Vec<u64>> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return r.is_empty().then(Vec::new);
    }
    let lead_inv = inv(*b.last()?)?;
    let mut q = vec![0u64; r.len() - db];
    for shift in (0..q.len()).rev() {
        let factor = mul(r[shift + db], lead_inv);
        q[shift] = factor;
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = sub(r[shift + i], mul(factor, c));
        }
    }
    r.iter().all(|&c| c == 0).then_some(q)
}

pub fn print_add(a: &Print, b: &Print) -> Print {
    [add(a[0], b[0]), add(a[1], b[1]), add(a[2], b[2])]
}

pub fn print_mul(a: &Print, b: &Print) -> Print {
    [mul(a[0], b[0]), mul(a[1], b[1]), mul(a[2], b[2])]
}

pub fn print_neg(a: &Print) -> Print {
    [sub(0, a[0]), sub(0, a[1]), sub(0, a[2])]
}

pub fn print_is_zero(a: &Print) -> bool {
    a.iter().all(|v| v.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_laws_on_small_values() {
        assert_eq!(mul(P - 1, P - 1), 1);
        assert_eq!(add(P - 1, 1), 0);
        assert_eq!(sub(0, 1), P - 1);
        for a in [2u64, 3, 12345, P - 2] {
            assert_eq!(mul(a, inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn negative_rationals_reduce_consistently() {
        let q = BigRational::new(BigInt::from(-3), BigInt::from(4));
        let r = reduce(&q).unwrap();
        assert_eq!(mul(r, 4), P - 3);
    }

    #[test]
    fn gcd_degree_detects_common_root() {
        // (x - 1)(x - 2) and (x - 1)(x + 5)
        let a = vec![2, sub(0, 3), 1];
        let b = vec![sub(0, 5), 4, 1];
        assert_eq!(gcd_degree(&a, &b), Some(1));
        assert_eq!(gcd_degree(&a, &[1, 1]), Some(0));
    }
}
