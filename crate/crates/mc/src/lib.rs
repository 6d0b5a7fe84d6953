//! Monte Carlo side: Haar sampling of random stochastic matrices and the
//! empirical statistics of their reduced spectra.

pub mod error;
pub mod sampler;
pub mod spectra;

pub use error::{Error, Result};
