//! Classical simulation of quantum query algorithms through the Fourier
//! 1-norm of their output probabilities.
//!
//! - [`fourier`]: Walsh–Hadamard analysis on {0,1}^n.
//! - [`qqm`]: state-vector simulation of phase-oracle query algorithms.
//! - [`decomp`]: phase-flip state decomposition and its norm metrics.
//! - [`dequant`]: parity-tree mixture simulator and majority amplification.
//! - [`bounds`]: closed-form speedup caps.
//! - [`report`]: end-to-end analyses shared by the command-line tool.

pub mod bounds;
pub mod decomp;
pub mod dequant;
pub mod error;
pub mod fourier;
pub mod qqm;
pub mod report;

pub use error::{Error, Result};
