//! Linear recurrences over the rational function field `Q(x)`.
//!
//! Heights and valuations feed explicit exponent bounds for S-unit sums of
//! recurrence terms and for `U_n + V_m + W_l = 0`. The solvers enumerate
//! every solution below those bounds.

pub mod bounds;
pub mod error;
pub(crate) mod modp;
pub mod places;
pub mod problem;
pub mod ratfunc;
pub mod recurrence;
pub mod report;
pub mod selfcheck;
pub mod solvers;

pub use error::{Error, Result};
pub use ratfunc::{Poly, RatFunc};
