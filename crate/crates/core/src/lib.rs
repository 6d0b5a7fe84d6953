//! Exact spectral moments of random stochastic matrices built from compact
//! Lie groups and symmetric spaces.
//!
//! The pipeline is: permutation combinatorics ([`permcore`]) and symmetric
//! functions ([`symmfunc`]) feed the Weingarten functions ([`weingarten`]);
//! brute-force count tables ([`enumerate`]) combine with them into exact
//! moments ([`moments`]), which are turned into closed forms in `N` by rational
//! reconstruction ([`ratfunc`]).

pub mod enumerate;
pub mod error;
pub mod moments;
pub mod permcore;
pub mod ratfunc;
pub mod symmfunc;
pub mod weingarten;

pub use error::{Error, Result};
