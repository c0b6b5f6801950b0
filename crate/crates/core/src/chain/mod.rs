//! Ground states of the open transverse XY chain.
//!
//! Two backends produce the same reduced states: exact diagonalization for
//! short chains and a Jordan-Wigner free-fermion solution for long ones.
//! Majorana operators are `A_j = c_j^dag + c_j` and `B_j = c_j^dag - c_j`, so
//! `Z_j = A_j B_j` and `<Z_j> = -<B_j A_j>`.

pub mod config;
pub mod ed;
pub mod freefermion;
pub mod observables;
pub mod rdm;
pub mod validate;
pub mod wick;

pub use config::{
    center_site, centered_pair, factorizing_field, Backend, Boundary, ChainConfig, SiteQuad,
    ED_DEFAULT_SITES, ED_MAX_SITES, PRODUCTION_SITES,
};
pub use ed::{build_hamiltonian, ed_ground_state, ed_pauli_expectation, ed_solve, EdSolution};
pub use freefermion::{ff_correlators, ff_correlators_window, CorrelatorTable};
pub use observables::{
    convergence_gap, pair_concurrence, quad_measures, residual_report, table_for, QuadMeasures,
    ReducedStates, ResidualReport,
};
pub use rdm::{ff_rdm, ff_rdm1, ff_rdm2, ff_rdm_sites};
pub use validate::cross_validate;
pub use wick::{pauli_expectation, symmetry_filter_enabled, MajoranaContractions};
