use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::modp;

/// Dense univariate polynomial with exact rational coefficients.
///
/// `coeffs[i]` is the coefficient of `x^i`; trailing zeros are never stored,
/// so the zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    pub fn x() -> Poly {
        Poly::monomial(BigRational::one(), 1)
    }

    pub fn constant(c: BigRational) -> Poly {
        Poly::new(vec![c])
    }

    pub fn monomial(c: BigRational, k: usize) -> Poly {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    pub fn new(mut coeffs: Vec<BigRational>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// `x - a` for an integer `a`.
    pub fn linear(a: i64) -> Poly {
        Poly::from_ints(&[-a, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True for the zero polynomial and nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(One::is_one)
    }

    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            None => Poly::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(inner)` by Horner's rule.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * inner) + &Poly::constant(c.clone()))
    }

    /// Quotient and remainder. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let db = divisor.degree().expect("polynomial division by zero");
        if self.coeffs.len() <= db {
            return (Poly::zero(), self.clone());
        }
        let lead_inv = divisor.coeffs[db].recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); rem.len() - db];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + db] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(db);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    /// Quotient of an exact division; the remainder is discarded.
    pub fn exact_div(&self, divisor: &Poly) -> Poly {
        if divisor.is_one() {
            return self.clone();
        }
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "exact_div with nonzero remainder");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    /// Largest `k` with `p^k | self` (`p` non-constant, `self` nonzero).
    pub fn multiplicity(&self, p: &Poly) -> u32 {
        assert!(!p.is_constant(), "multiplicity of a constant");
        if self.is_zero() {
            return u32::MAX;
        }
        let mut k = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(p);
            if !r.is_zero() {
                return k;
            }
            cur = q;
            k += 1;
        }
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_constant() {
            return !self.is_zero();
        }
        poly_gcd(self, &self.derivative()).is_constant()
    }

    /// Yun's algorithm: monic squarefree `(part, multiplicity)` pairs whose
    /// powered product is the monic associate of `self`.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, u32)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = poly_gcd(&f, &df);
        let mut b = f.exact_div(&a0);
        let mut c = df.exact_div(&a0);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            let a = poly_gcd(&b, &d);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a);
            c = d.exact_div(&a);
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Least common multiple of coefficient denominators times `self`,
    /// returned as integers.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        self.coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect()
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn poly_gcd(p: &Poly, q: &Poly) -> Poly {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    if p.is_constant() || q.is_constant() {
        return Poly::one();
    }
    if coprime_mod_p(p, q) {
        return Poly::one();
    }
    let (mut a, mut b) = if p.deg() >= q.deg() {
        (p.monic(), q.monic())
    } else {
        (q.monic(), p.monic())
    };
    while !b.is_zero() {
        let r = a.rem(&b).monic();
        a = b;
        b = r;
    }
    a
}

/// One-sided check: a constant gcd modulo a prime that keeps both degrees
/// proves the rational gcd is 1.
fn coprime_mod_p(p: &Poly, q: &Poly) -> bool {
    let (Some(a), Some(b)) = (modp::reduce_poly(p), modp::reduce_poly(q)) else {
        return false;
    };
    if a.last() == Some(&0) || b.last() == Some(&0) {
        return false;
    }
    modp::gcd_degree(&a, &b) == Some(0)
}

impl Ord for Poly {
    /// Degree first, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Poly::new(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, BigRational::zero());
        for (c, s) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= s;
        }
        Poly::new(coeffs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Poly::new(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

pub(crate) fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    /// Writes the polynomial in the text grammar accepted by the parser,
    /// highest degree first, e.g. `2*x^2 - 6*x + 5` or `1/2*x - 1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            if k == 0 {
                f.write_str(&fmt_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&var)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&mag), var)?;
            }
        }
        Ok(())
    }
}
