//! Reduced density matrices from Pauli-string expectations,
//! `rho = 2^{-k} sum_P <P> P`.

use super::freefermion::CorrelatorTable;
use super::wick::{all_strings, pauli_expectation};
use crate::error::{Error, Result};
use crate::numkernel::jacobi::herm_eig;
use crate::numkernel::matrix::{ComplexMatrix, C64};
use crate::numkernel::qubits::Pauli;
use crate::states::DensityMatrix;

/// Eigenvalues below this are clamped and the state renormalized.
pub const PSD_REPAIR: f64 = 1e-12;
/// Clamps beyond this are logged.
pub const PSD_WARN: f64 = 1e-9;
/// Below this the backend is considered inconsistent.
pub const PSD_ABORT: f64 = 1e-7;

/// Assembles `2^{-k} sum_P e(P) P` over all `4^k` strings.
pub fn rdm_from_expectations(
    k: usize,
    mut expectation: impl FnMut(&[Pauli]) -> Result<f64>,
) -> Result<ComplexMatrix> {
    let dim = 1usize << k;
    let scale = 1.0 / dim as f64;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for labels in all_strings(k) {
        let e = expectation(&labels)?;
        if e == 0.0 {
            continue;
        }
        for b in 0..dim {
            let mut out = 0usize;
            let mut phase = C64::new(scale * e, 0.0);
            for (pos, &p) in labels.iter().enumerate() {
                let shift = k - 1 - pos;
                let (nb, ph) = p.action(((b >> shift) & 1) as u32);
                out |= (nb as usize) << shift;
                phase *= ph;
            }
            m[(out, b)] += phase;
        }
    }
    Ok(m)
}

/// Clamps small negative eigenvalues and renormalizes.
pub fn repair_psd(m: ComplexMatrix) -> Result<DensityMatrix> {
    let eig = herm_eig(&m)?;
    let lowest = *eig.values.last().expect("nonempty spectrum");
    if lowest >= -PSD_REPAIR {
        return Ok(DensityMatrix::new_unchecked(m));
    }
    if lowest < -PSD_ABORT {
        return Err(Error::BackendInconsistency { eigenvalue: lowest });
    }
    if lowest < -PSD_WARN {
        log::warn!("clamping reduced-state eigenvalue {lowest:e}");
    }
    let total: f64 = eig.values.iter().map(|w| w.max(0.0)).sum();
    let repaired = eig.reconstruct_with(|w| w.max(0.0) / total);
    Ok(DensityMatrix::new_unchecked(repaired.hermitian_part()))
}

/// Reduced state on ascending `sites`.
pub fn ff_rdm_sites(table: &CorrelatorTable, sites: &[usize]) -> Result<DensityMatrix> {
    let m = rdm_from_expectations(sites.len(), |labels| {
        pauli_expectation(table, sites, labels)
    })?;
    repair_psd(m)
}

/// Four-site reduced state.
pub fn ff_rdm(table: &CorrelatorTable, quad: &[usize; 4]) -> Result<DensityMatrix> {
    ff_rdm_sites(table, quad)
}

pub fn ff_rdm2(table: &CorrelatorTable, pair: &[usize; 2]) -> Result<DensityMatrix> {
    ff_rdm_sites(table, pair)
}

pub fn ff_rdm1(table: &CorrelatorTable, site: usize) -> Result<DensityMatrix> {
    ff_rdm_sites(table, &[site])
}
