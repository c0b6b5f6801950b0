//! Four-qubit entanglement numerics: the mixed-state 4-tangle, Wootters
//! concurrence, one-tangle and residual tangle, evaluated on GHZ/W/Bell
//! mixtures and on reduced states of the open transverse XY chain.
//!
//! Layout:
//! - [`numkernel`]: dense complex linear algebra, banded eigensolver, Pfaffian.
//! - [`measures`]: spin-flip spectra and the entanglement measures.
//! - [`mixtures`]: named states and parametrized mixture families.
//! - [`chain`]: exact diagonalization and free-fermion ground states.
//! - [`sweep`]: parameter sweeps, CSV output and the command line.

pub mod chain;
pub mod error;
pub mod measures;
pub mod mixtures;
pub mod numkernel;
pub mod parallel;
pub mod states;
pub mod sweep;

pub use error::{Error, Result};
pub use states::{DensityMatrix, PureState};
