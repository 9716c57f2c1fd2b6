//! Computational laboratory for digit expansions of the unit interval:
//! piecewise-linear full-branch maps and beta-shifts, word-frequency sets as
//! explicit cylinder unions, net outer measures over cylinder and dyadic
//! covers, and dimension experiments built on top of them.

pub mod dimension;
pub mod error;
pub mod freqset;
pub mod measure;
pub mod system;
pub mod words;
pub mod num;

pub use error::{Error, Result};
