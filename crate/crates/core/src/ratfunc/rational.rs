use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{poly_gcd, Poly};
use crate::error::{Error, Result};

/// Rational function `num / den` in canonical form.
///
/// Invariants: `den` is monic and nonzero, `gcd(num, den) = 1`, and zero is
/// stored as `0 / 1`. Canonical forms compare equal exactly when the
/// functions are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = poly_gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        Ok(RatFunc::monic_den(num, den))
    }

    /// Rescale so that the denominator is monic; the pair must be coprime.
    fn monic_den(num: Poly, den: Poly) -> RatFunc {
        let lc = den.leading_coeff().expect("nonzero denominator").clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> RatFunc {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(Poly::one())
    }

    pub fn x() -> RatFunc {
        RatFunc::from_poly(Poly::x())
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: BigRational) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn from_int(c: i64) -> RatFunc {
        RatFunc::from_poly(Poly::from_ints(&[c]))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Constant (possibly zero) function.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The constant value, if the function is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn inverse(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::monic_den(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        Ok(self * &rhs.inverse()?)
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, n: i64) -> Result<RatFunc> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let e = u32::try_from(n.unsigned_abs()).expect("exponent out of range");
        Ok(base.pow_u(e))
    }

    /// Non-negative power. Coprime parts stay coprime, so no gcd is needed.
    pub fn pow_u(&self, e: u32) -> RatFunc {
        if e == 0 {
            return RatFunc::one();
        }
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// `P(self)` for a polynomial `P` with constant coefficients.
    pub fn compose_into(&self, outer: &Poly) -> RatFunc {
        let Some(deg) = outer.degree() else {
            return RatFunc::zero();
        };
        // sum c_k num^k den^(deg-k) over den^deg
        let mut acc = Poly::zero();
        let mut num_pow = Poly::one();
        let den_pows: Vec<Poly> = (0..=deg).map(|k| self.den.pow(k as u32)).collect();
        for (k, c) in outer.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(&num_pow * &den_pows[deg - k]).scale(c);
            }
            num_pow = &num_pow * &self.num;
        }
        RatFunc::new(acc, den_pows[deg].clone()).expect("nonzero denominator")
    }

    pub fn eval(&self, t: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(t);
        (!d.is_zero()).then(|| self.num.eval(t) / d)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RatFunc::from_poly(num);
            }
            return RatFunc::new(num, self.den.clone()).expect("nonzero denominator");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        // cross-cancel: (a/b)(c/d) with g1 = gcd(a, d), g2 = gcd(c, b)
        let g1 = poly_gcd(&self.num, &rhs.den);
        let g2 = poly_gcd(&rhs.num, &self.den);
        let a = self.num.exact_div(&g1);
        let d = rhs.den.exact_div(&g1);
        let c = rhs.num.exact_div(&g2);
        let b = self.den.exact_div(&g2);
        RatFunc::monic_den(&a * &c, &b * &d)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> RatFunc {
        RatFunc::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    /// `P` for polynomials, `(P)/(Q)` otherwise; both reparse exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::poly::{rat, ratio};

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let f = rf(&[-2, 2], &[4, 4]);
        assert_eq!(f.num(), &Poly::new(vec![ratio(-1, 2), ratio(1, 2)]));
        assert_eq!(f.den(), &p(&[1, 1]));
        assert_eq!(rf(&[-1, 0, 1], &[-1, 1]), RatFunc::from_poly(p(&[1, 1])));
        let z = rf(&[], &[0, 1]);
        assert!(z.is_zero());
        assert_eq!(z.den(), &Poly::one());
        assert!(matches!(RatFunc::new(p(&[1]), Poly::zero()), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&rf(&[-1, 1], &[1]) + &RatFunc::one(), RatFunc::x());
        assert_eq!(&rf(&[-1, 1], &[1]) * &rf(&[1, 1], &[1]), rf(&[-1, 0, 1], &[1]));
        let f = rf(&[0, 1], &[1, 1]);
        assert_eq!(f.pow(-2).unwrap(), rf(&[1, 2, 1], &[0, 0, 1]));
        assert_eq!(f.pow(0).unwrap(), RatFunc::one());
        assert!(matches!(RatFunc::zero().pow(-1), Err(Error::DivisionByZero)));
        assert!(matches!(f.checked_div(&RatFunc::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn compose_into_matches_direct_expansion() {
        let f = rf(&[1, 0, 3], &[2, 1]);
        let outer = Poly::new(vec![rat(2), rat(-1), rat(0), ratio(1, 3)]);
        let direct = outer
            .coeffs()
            .iter()
            .enumerate()
            .fold(RatFunc::zero(), |acc, (k, c)| {
                &acc + &(&f.pow_u(k as u32) * &RatFunc::constant(c.clone()))
            });
        assert_eq!(f.compose_into(&outer), direct);
    }
}
