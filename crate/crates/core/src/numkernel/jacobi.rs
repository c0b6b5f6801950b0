//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Relative tolerance for the Hermiticity precondition.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Off-diagonal Frobenius norm at which the sweep stops, relative to `||M||_F`.
pub const OFFDIAG_TOL: f64 = 1e-14;
/// Eigenvalues in `[-PSD_CLAMP * ||M||, 0)` are treated as rounding noise.
pub const PSD_CLAMP: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `M = V diag(w) V^dagger` with `w` sorted descending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Rebuilds `V f(w) V^dagger`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let fw: Vec<f64> = self.values.iter().map(|&w| f(w)).collect();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            if fw[k] == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * fw[k];
                if vik == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    /// Spectral norm of the decomposed matrix.
    pub fn spectral_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, w| m.max(w.abs()))
    }
}

/// Diagonalizes a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Fails with [`Error::NotHermitian`] when `M` departs from Hermiticity by more
/// than [`HERMITIAN_TOL`] relative to its largest entry.
pub fn herm_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    m.check_hermitian(HERMITIAN_TOL)?;
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let total = a.frobenius_norm();
    let target = (OFFDIAG_TOL * total).max(f64::MIN_POSITIVE);
    let skip = target / (n as f64);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let b = a[(p, q)];
                let babs = b.norm();
                if babs <= skip {
                    continue;
                }
                rotate(&mut a, &mut v, p, q, b, babs);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::NoConvergence(format!(
            "Jacobi did not reach off-diagonal norm {target:e} in {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with `U = diag(1, e^{-i phi}) R(theta)` on the (p, q) plane.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, b: C64, babs: f64) {
    let n = a.rows();
    let phase = b / babs; // e^{i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * babs);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let sp = phase.conj() * s; // s e^{-i phi}
    let cp = phase.conj() * c; // c e^{-i phi}

    // A <- A U
    for k in 0..n {
        let x = a[(k, p)];
        let y = a[(k, q)];
        a[(k, p)] = x * c - sp * y;
        a[(k, q)] = x * s + cp * y;
    }
    // A <- U^dagger A
    for k in 0..n {
        let x = a[(p, k)];
        let y = a[(q, k)];
        a[(p, k)] = x * c - sp.conj() * y;
        a[(q, k)] = x * s + cp.conj() * y;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(app - t * babs, 0.0);
    a[(q, q)] = C64::new(aqq + t * babs, 0.0);

    for k in 0..n {
        let x = v[(k, p)];
        let y = v[(k, q)];
        v[(k, p)] = x * c - sp * y;
        v[(k, q)] = x * s + cp * y;
    }
}

/// Hermitian square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[-1e-12 ||M||, 0)` are clamped to zero; anything lower is
/// rejected. Eigenvalues whose magnitude is at rounding level
/// (`64 eps ||M||`) are also zeroed so the root keeps the numerical support
/// of `M`.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(m)?;
    psd_sqrt_from_eig(&eig)
}

pub fn psd_sqrt_from_eig(eig: &HermitianEigen) -> Result<ComplexMatrix> {
    let norm = eig.spectral_norm();
    let clamp = PSD_CLAMP * norm;
    let noise = 64.0 * f64::EPSILON * norm;
    if let Some(&w) = eig.values.iter().find(|&&w| w < -clamp) {
        return Err(Error::NotPositiveSemidefinite { eigenvalue: w });
    }
    Ok(eig.reconstruct_with(|w| if w <= noise { 0.0 } else { w.sqrt() }))
}
