//! Pure states and density matrices on qubit registers.

use crate::error::{Error, Result};
use crate::numkernel::jacobi::herm_eig;
use crate::numkernel::matrix::{ComplexMatrix, C64};
use crate::numkernel::qubits::{self, qubit_count};

const NORM_TOL: f64 = 1e-12;
const DENSITY_TOL: f64 = 1e-10;

/// Normalized amplitude vector over `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    qubits: usize,
    amps: Vec<C64>,
}

impl PureState {
    /// Wraps amplitudes whose norm must already be 1 within `1e-12`.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let qubits = qubit_count(amps.len())?;
        let norm = norm(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm {norm} differs from 1")));
        }
        Ok(Self { qubits, amps })
    }

    /// Rescales the amplitudes to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let qubits = qubit_count(amps.len())?;
        let norm = norm(&amps);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite vector".into()));
        }
        Ok(Self {
            qubits,
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Computational basis state `|index>`.
    pub fn basis(qubits: usize, index: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << qubits];
        amps[index] = C64::new(1.0, 0.0);
        Self { qubits, amps }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// `|self> (x) |other>`.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        PureState {
            qubits: self.qubits + other.qubits,
            amps,
        }
    }

    /// `|psi><psi|`.
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            qubits: self.qubits,
            m: ComplexMatrix::outer(&self.amps, &self.amps),
        }
    }

    /// Reduced state on `keep` (distinct, ascending) without forming the full
    /// projector.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let n = self.qubits;
        qubits::check_sites(keep, n)?;
        let k = keep.len();
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let embed = |bits: usize, sites: &[usize]| -> usize {
            let w = sites.len();
            sites.iter().enumerate().fold(0usize, |acc, (pos, &q)| {
                acc | (((bits >> (w - 1 - pos)) & 1) << (n - 1 - q))
            })
        };
        let kept_idx: Vec<usize> = (0..1usize << k).map(|a| embed(a, keep)).collect();
        let mut m = ComplexMatrix::zeros(1 << k, 1 << k);
        for t in 0..1usize << traced.len() {
            let off = embed(t, &traced);
            for (a, &ia) in kept_idx.iter().enumerate() {
                let x = self.amps[ia | off];
                if x.norm_sqr() == 0.0 {
                    continue;
                }
                for (b, &ib) in kept_idx.iter().enumerate() {
                    m[(a, b)] += x * self.amps[ib | off].conj();
                }
            }
        }
        Ok(DensityMatrix { qubits: k, m })
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn norm(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian, unit-trace, positive semidefinite `2^n x 2^n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    m: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity, all within `1e-10`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let qubits = qubit_count(m.rows())?;
        if !m.is_square() {
            return Err(Error::DimensionMismatch("density matrix must be square".into()));
        }
        m.check_hermitian(DENSITY_TOL)?;
        let tr = m.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let eig = herm_eig(&m)?;
        if let Some(&w) = eig.values.iter().find(|&&w| w < -DENSITY_TOL) {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: w });
        }
        Ok(Self { qubits, m })
    }

    /// Skips validation; the caller guarantees the invariants.
    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        let qubits = qubit_count(m.rows()).expect("power-of-two dimension");
        Self { qubits, m }
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(qubits: usize) -> Self {
        let d = 1usize << qubits;
        Self {
            qubits,
            m: ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    /// Reduced state on `keep` (distinct, ascending).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let m = qubits::partial_trace(&self.m, keep)?;
        Ok(DensityMatrix {
            qubits: keep.len(),
            m,
        })
    }

    /// `rho_A (x) rho_B`.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            qubits: self.qubits + other.qubits,
            m: qubits::kron(&self.m, &other.m),
        }
    }

    /// `U rho U^dagger` for a unitary `U` of matching dimension.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.rows() != self.dim() || u.cols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "unitary {}x{} on a {}-dimensional state",
                u.rows(),
                u.cols(),
                self.dim()
            )));
        }
        let m = u.matmul(&self.m).matmul(&u.adjoint()).hermitian_part();
        Ok(DensityMatrix::new_unchecked(m))
    }

    /// Convex combination `p self + (1 - p) other`.
    pub fn blend(&self, other: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(
                "blending states of different dimension".into(),
            ));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidWeights(format!("weight {p} outside [0, 1]")));
        }
        let m = &self.m.scale_real(p) + &other.m.scale_real(1.0 - p);
        Ok(DensityMatrix::new_unchecked(m))
    }
}
