//! Exact polynomials and rational functions over the rationals.

mod basis;
mod parse;
mod poly;
mod rational;

pub use basis::{coprime_refine, gcd_free_basis, radical, Factorization, GcdFreeBasis};
pub use parse::{parse_poly, parse_ratfunc, ParseError};
pub use poly::{poly_gcd, rat, ratio, Poly};
pub(crate) use poly::fmt_rational;
pub use rational::RatFunc;
