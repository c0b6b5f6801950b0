//! Tensor products, Pauli operators and partial traces over qubit registers.

use super::matrix::{ComplexMatrix, C64, I, ONE, ZERO};
use crate::error::{Error, Result};

/// Single-site Pauli label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let entries = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -I, I, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        ComplexMatrix::from_vec(2, 2, entries.to_vec()).unwrap()
    }

    /// `P|b> = phase |b ^ flip>` for a computational basis bit `b`.
    #[inline]
    pub fn action(self, bit: u32) -> (u32, C64) {
        match (self, bit) {
            (Pauli::I, b) => (b, ONE),
            (Pauli::X, b) => (b ^ 1, ONE),
            (Pauli::Y, 0) => (1, I),
            (Pauli::Y, _) => (0, -I),
            (Pauli::Z, 0) => (0, ONE),
            (Pauli::Z, _) => (1, -ONE),
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Tensor product `A (x) B`, block `(i, j)` equal to `A[i][j] * B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    ComplexMatrix::from_fn(ra * rb, ca * cb, |i, j| {
        a[(i / rb, j / cb)] * b[(i % rb, j % cb)]
    })
}

pub fn kron_all(factors: &[ComplexMatrix]) -> ComplexMatrix {
    let mut it = factors.iter();
    let first = it.next().expect("at least one factor").clone();
    it.fold(first, |acc, f| kron(&acc, f))
}

/// `sigma_y` tensored `n` times: the spin-flip operator.
pub fn sigma_y_power(n: usize) -> ComplexMatrix {
    let y = Pauli::Y.matrix();
    kron_all(&vec![y; n])
}

/// Pauli string `P_0 (x) P_1 (x) ...` as a dense matrix.
pub fn pauli_string(labels: &[Pauli]) -> ComplexMatrix {
    let mats: Vec<ComplexMatrix> = labels.iter().map(|p| p.matrix()).collect();
    kron_all(&mats)
}

/// Number of qubits of a `2^n`-dimensional space.
pub fn qubit_count(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

pub(crate) fn check_sites(keep: &[usize], n: usize) -> Result<()> {
    for (idx, &s) in keep.iter().enumerate() {
        if s >= n {
            return Err(Error::InvalidSites(format!(
                "site {s} out of range for {n} qubits"
            )));
        }
        if idx > 0 && keep[idx - 1] >= s {
            return Err(Error::InvalidSites(format!(
                "sites must be distinct and ascending, got {keep:?}"
            )));
        }
    }
    Ok(())
}

/// Traces out every qubit not in `keep` (distinct, ascending).
pub fn partial_trace(rho: &ComplexMatrix, keep: &[usize]) -> Result<ComplexMatrix> {
    let n = qubit_count(rho.rows())?;
    if !rho.is_square() {
        return Err(Error::DimensionMismatch("density matrix must be square".into()));
    }
    check_sites(keep, n)?;
    if keep.len() == n {
        return Ok(rho.clone());
    }
    if keep.is_empty() {
        return ComplexMatrix::from_vec(1, 1, vec![rho.trace()]);
    }
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let k = keep.len();
    let embed = |bits: usize, sites: &[usize]| -> usize {
        let width = sites.len();
        sites.iter().enumerate().fold(0usize, |acc, (pos, &q)| {
            let b = (bits >> (width - 1 - pos)) & 1;
            acc | (b << (n - 1 - q))
        })
    };
    let kept_idx: Vec<usize> = (0..1usize << k).map(|a| embed(a, keep)).collect();
    let traced_idx: Vec<usize> = (0..1usize << traced.len())
        .map(|t| embed(t, &traced))
        .collect();
    let mut out = ComplexMatrix::zeros(1 << k, 1 << k);
    for (a, &ia) in kept_idx.iter().enumerate() {
        for (b, &ib) in kept_idx.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &traced_idx {
                acc += rho[(ia | t, ib | t)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}
