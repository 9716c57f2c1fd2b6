//! Exact numeric foundations: rationals, real algebraic numbers, certified
//! intervals and exact radical sums.

pub mod algebraic;
pub mod exact;
pub mod interval;
pub mod poly;
pub mod powersum;
pub mod rational;

pub use algebraic::{AlgebraicNum, NumberField};
pub use exact::ExactNum;
pub use interval::RatInterval;
pub use poly::Poly;
pub use powersum::PowerSum;
pub use rational::{format_rational, parse_rational, SRat};
