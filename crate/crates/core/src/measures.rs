//! Entanglement measures built on the spin-flip construction.
//!
//! For a state `rho` on `k` qubits with flip operator `S = sigma_y^{(x)k}`,
//! `R = sqrt(rho) S rho* S sqrt(rho)` is positive semidefinite and its square
//! rooted eigenvalues form the [`SpinFlipSpectrum`]. Writing
//! `X = sqrt(rho) S sqrt(rho*)` gives `R = X X^dagger`, so the spectrum is the
//! list of singular values of `X`. They are read off the Hermitian dilation
//! `[[0, X], [X^dagger, 0]]`, which keeps near-zero values at rounding level
//! instead of the square root of it.

use crate::error::{Error, Result};
use crate::numkernel::jacobi::{herm_eig, psd_sqrt};
use crate::numkernel::matrix::{ComplexMatrix, C64};
use crate::numkernel::qubits::sigma_y_power;
use crate::states::{DensityMatrix, PureState};

/// Descending, nonnegative eigenvalues of `sqrt(R)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinFlipSpectrum {
    values: Vec<f64>,
}

impl SpinFlipSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn lambda_max(&self) -> f64 {
        self.values[0]
    }

    pub fn trace(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// `|<psi*| sigma_y^{(x)4} |psi>|` for a normalized 4-qubit state.
pub fn fourtangle_pure(psi: &PureState) -> Result<f64> {
    if psi.qubits() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "4-tangle needs 4 qubits, got {}",
            psi.qubits()
        )));
    }
    Ok(flip_overlap(psi.amplitudes()).norm())
}

/// `<psi*| sigma_y^{(x)n} |psi> = sum_b psi_b psi_{~b} i^n (-1)^{n - |b|}`.
fn flip_overlap(amps: &[C64]) -> C64 {
    let mask = amps.len() - 1;
    let n = mask.count_ones();
    let mut acc = C64::new(0.0, 0.0);
    for (b, a) in amps.iter().enumerate() {
        let term = a * amps[b ^ mask];
        if (n - b.count_ones()) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc * C64::new(0.0, 1.0).powu(n)
}

/// Spectrum of `sqrt(R)` for the flip operator `flip`, which must match the
/// dimension of `rho`.
pub fn spinflip_spectrum(rho: &DensityMatrix, flip: &ComplexMatrix) -> Result<SpinFlipSpectrum> {
    let d = rho.dim();
    if flip.rows() != d || flip.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "flip operator is {}x{}, state is {d}x{d}",
            flip.rows(),
            flip.cols()
        )));
    }
    let root = psd_sqrt(rho.matrix())?;
    let x = root.matmul(flip).matmul(&root.conj());
    let dilation = ComplexMatrix::from_fn(2 * d, 2 * d, |i, j| match (i < d, j < d) {
        (true, false) => x[(i, j - d)],
        (false, true) => x[(j, i - d)].conj(),
        _ => C64::new(0.0, 0.0),
    });
    let eig = herm_eig(&dilation)?;
    let values = eig.values[..d].iter().map(|&s| s.max(0.0)).collect();
    Ok(SpinFlipSpectrum { values })
}

/// `R = sqrt(rho) S rho* S sqrt(rho)` as a dense matrix.
pub fn spin_flip_operator(rho: &DensityMatrix, flip: &ComplexMatrix) -> Result<ComplexMatrix> {
    let root = psd_sqrt(rho.matrix())?;
    Ok(root
        .matmul(flip)
        .matmul(&rho.matrix().conj())
        .matmul(flip)
        .matmul(&root))
}

/// `max(0, 2 lambda_max - tr sqrt(R))` with the 4-qubit flip.
pub fn fourtangle_mixed(rho: &DensityMatrix) -> Result<f64> {
    if rho.qubits() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "4-tangle needs 4 qubits, got {}",
            rho.qubits()
        )));
    }
    let spec = spinflip_spectrum(rho, &sigma_y_power(4))?;
    Ok((2.0 * spec.lambda_max() - spec.trace()).clamp(0.0, 1.0))
}

/// Wootters concurrence `max(0, l1 - l2 - l3 - l4)`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.qubits() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "concurrence needs 2 qubits, got {}",
            rho.qubits()
        )));
    }
    let spec = spinflip_spectrum(rho, &sigma_y_power(2))?;
    Ok((2.0 * spec.lambda_max() - spec.trace()).clamp(0.0, 1.0))
}

/// `4 det rho_1`.
pub fn one_tangle(rho: &DensityMatrix) -> Result<f64> {
    if rho.qubits() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "one-tangle needs 1 qubit, got {}",
            rho.qubits()
        )));
    }
    let m = rho.matrix();
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    if det.im.abs() > 1e-12 {
        return Err(Error::InvalidState(format!(
            "determinant has imaginary part {:e}",
            det.im
        )));
    }
    Ok(4.0 * det.re)
}

/// `tau_1 - sum_d C_d^2`.
pub fn residual_tangle(tau1: f64, concurrences: &[f64]) -> f64 {
    tau1 - concurrences.iter().map(|c| c * c).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ket(n: usize, terms: &[(usize, C64)]) -> PureState {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        for &(i, a) in terms {
            amps[i] = a;
        }
        PureState::normalized(amps).unwrap()
    }

    fn real(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn ghz() -> PureState {
        ket(4, &[(0, real(1.0)), (15, real(1.0))])
    }

    fn w() -> PureState {
        ket(4, &[(8, real(1.0)), (4, real(1.0)), (2, real(1.0)), (1, real(1.0))])
    }

    fn phi_plus() -> PureState {
        ket(2, &[(0, real(1.0)), (3, real(1.0))])
    }

    #[test]
    fn pure_anchors() {
        assert!((fourtangle_pure(&ghz()).unwrap() - 1.0).abs() < 1e-15);
        assert!(fourtangle_pure(&w()).unwrap().abs() < 1e-15);
        let pp = phi_plus().tensor(&phi_plus());
        assert!((fourtangle_pure(&pp).unwrap() - 1.0).abs() < 1e-15);
        assert!(fourtangle_pure(&phi_plus()).is_err());
    }

    #[test]
    fn flip_overlap_matches_dense_operator() {
        let psi = ket(
            4,
            &[(3, C64::new(0.2, 0.5)), (12, C64::new(-0.4, 0.1)), (6, real(0.7)), (9, real(-0.3))],
        );
        let amps = psi.amplitudes();
        let conj: Vec<C64> = amps.iter().map(|a| a.conj()).collect();
        let s4 = sigma_y_power(4).apply(amps);
        let dense: C64 = conj.iter().zip(&s4).map(|(a, b)| a.conj() * b).sum();
        assert!((flip_overlap(amps) - dense).norm() < 1e-15);
    }

    #[test]
    fn ghz_projector_spectrum() {
        let spec = spinflip_spectrum(&ghz().projector(), &sigma_y_power(4)).unwrap();
        assert!((spec.values()[0] - 1.0).abs() < 1e-12);
        assert!(spec.values()[1..].iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn maximally_mixed_pair_spectrum() {
        let spec = spinflip_spectrum(&DensityMatrix::maximally_mixed(2), &sigma_y_power(2)).unwrap();
        for &v in spec.values() {
            assert!((v - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn spectrum_rejects_wrong_flip() {
        assert!(spinflip_spectrum(&ghz().projector(), &sigma_y_power(2)).is_err());
    }

    #[test]
    fn ghz_w_mixture_at_point_three() {
        // rho~ = p|GHZ><GHZ| + (1-p)|W~><W~| with W~ on weight-3 kets, so
        // rho rho~ = p^2 |GHZ><GHZ| and sqrt(R) has the single value p.
        let rho = ghz().projector().blend(&w().projector(), 0.3).unwrap();
        let spec = spinflip_spectrum(&rho, &sigma_y_power(4)).unwrap();
        assert!((spec.values()[0] - 0.3).abs() < 1e-13);
        assert!(spec.values()[1..].iter().all(|&v| v < 1e-13));
        assert!((fourtangle_mixed(&rho).unwrap() - 0.3).abs() < 1e-13);
    }

    #[test]
    fn ghz_bell_bell_midpoint() {
        // both components are flip-invariant, so sqrt(R) = rho and
        // C4 = |<GHZ|Bell Bell>| = 1/sqrt(2) for the overlapping pair
        let pp = phi_plus().tensor(&phi_plus());
        let rho = ghz().projector().blend(&pp.projector(), 0.5).unwrap();
        assert!((fourtangle_mixed(&rho).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
        // the i-phased pair is orthogonal to GHZ and the interference is complete
        let b = ket(2, &[(3, real(1.0)), (0, C64::new(0.0, 1.0))]);
        let bb = b.tensor(&b);
        let rho = ghz().projector().blend(&bb.projector(), 0.5).unwrap();
        assert!(fourtangle_mixed(&rho).unwrap() < 1e-12);
    }

    #[test]
    fn concurrence_anchors() {
        assert!((concurrence(&phi_plus().projector()).unwrap() - 1.0).abs() < 1e-14);
        assert!(concurrence(&PureState::basis(2, 0).projector()).unwrap() < 1e-14);
    }

    #[test]
    fn werner_half() {
        // eigen-oracle: spectrum of sqrt(R) for the Werner state is
        // ((1+3p)/4, (1-p)/4, (1-p)/4, (1-p)/4), giving (3p-1)/2
        let rho = phi_plus()
            .projector()
            .blend(&DensityMatrix::maximally_mixed(2), 0.5)
            .unwrap();
        let spec = spinflip_spectrum(&rho, &sigma_y_power(2)).unwrap();
        let expect = [0.625, 0.125, 0.125, 0.125];
        for (v, e) in spec.values().iter().zip(expect) {
            assert!((v - e).abs() < 1e-14);
        }
        assert!((concurrence(&rho).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn one_tangle_anchors() {
        assert!((one_tangle(&DensityMatrix::maximally_mixed(1)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(one_tangle(&PureState::basis(1, 0).projector()).unwrap(), 0.0);
    }

    #[test]
    fn residual_anchors() {
        assert_eq!(residual_tangle(1.0, &[1.0, 0.0]), 0.0);
        assert_eq!(residual_tangle(0.0, &[]), 0.0);
    }

    #[test]
    fn spin_flip_operator_is_consistent_with_spectrum() {
        let a = ket(2, &[(0, real(FRAC_1_SQRT_2)), (1, C64::new(0.3, 0.4)), (3, real(0.2))]);
        let rho = a
            .projector()
            .blend(&DensityMatrix::maximally_mixed(2), 0.7)
            .unwrap();
        let flip = sigma_y_power(2);
        let r = spin_flip_operator(&rho, &flip).unwrap();
        let eig = herm_eig(&r.hermitian_part()).unwrap();
        let spec = spinflip_spectrum(&rho, &flip).unwrap();
        for (w, s) in eig.values.iter().zip(spec.values()) {
            assert!((w.max(0.0).sqrt() - s).abs() < 1e-7);
        }
    }
}
