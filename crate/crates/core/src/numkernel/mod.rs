//! Dense linear algebra for the measures and the chain backends.
//!
//! Conventions used throughout the crate: matrices are row-major, and in a
//! register of `n` qubits qubit 0 is the leftmost tensor factor (most
//! significant bit of the basis index). `|0>` is spin up, `sigma^z |0> = |0>`.

pub mod band;
pub mod jacobi;
pub mod matrix;
pub mod pfaffian;
pub mod qubits;

pub use band::{band_eig, tridiagonal_eig, PartialEigen, SymmetricBand};
pub use jacobi::{herm_eig, psd_sqrt, HermitianEigen};
pub use matrix::{AntisymmetricMatrix, ComplexMatrix, RealMatrix, C64};
pub use pfaffian::pfaffian;
pub use qubits::{kron, kron_all, partial_trace, pauli_string, sigma_y_power, Pauli};
