//! Seeded random inputs shared by the integration suites.
#![allow(dead_code)]

use fourtangle::numkernel::{AntisymmetricMatrix, ComplexMatrix, RealMatrix, C64};
use fourtangle::{DensityMatrix, PureState};
use proptest::test_runner::{Config, RngSeed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x4a7e_2011;

/// Seed from `FOURTANGLE_SEED`, else [`DEFAULT_SEED`].
pub fn seed() -> u64 {
    std::env::var("FOURTANGLE_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn proptest_config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed()),
        failure_persistence: None,
        ..Config::default()
    }
}

/// Generator for one test case; `stream` separates suites.
pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}

pub fn complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_complex(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| complex(rng))
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    random_complex(rng, n).hermitian_part()
}

/// Unitary from Gram-Schmidt on the columns of a random matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let a = random_complex(rng, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = a.column(j);
        for _ in 0..2 {
            for u in &cols {
                let dot: C64 = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= dot * ui;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|x| x / norm).collect());
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

pub fn random_pure(rng: &mut impl Rng, qubits: usize) -> PureState {
    let amps = (0..1usize << qubits).map(|_| complex(rng)).collect();
    PureState::normalized(amps).expect("nonzero vector")
}

/// Mixture of `rank` random pure states with random weights.
pub fn random_density(rng: &mut impl Rng, qubits: usize, rank: usize) -> DensityMatrix {
    let dim = 1usize << qubits;
    let weights: Vec<f64> = (0..rank).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for w in weights {
        let psi = random_pure(rng, qubits);
        let a = psi.amplitudes();
        let p = ComplexMatrix::outer(a, a).scale_real(w / total);
        for (x, y) in m.as_mut_slice().iter_mut().zip(p.as_slice()) {
            *x += y;
        }
    }
    DensityMatrix::new(m.hermitian_part()).expect("valid mixture")
}

pub fn random_antisymmetric(rng: &mut impl Rng, n: usize) -> AntisymmetricMatrix {
    let upper: Vec<f64> = (0..n * (n.saturating_sub(1)) / 2)
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();
    AntisymmetricMatrix::from_upper(n, &upper).expect("antisymmetric")
}

pub fn random_real(rng: &mut impl Rng, n: usize) -> RealMatrix {
    RealMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0))
}

/// Tensor product of single-qubit unitaries, qubit 0 leftmost.
pub fn local_unitary(rng: &mut impl Rng, qubits: usize) -> ComplexMatrix {
    let factors: Vec<ComplexMatrix> = (0..qubits).map(|_| random_unitary(rng, 2)).collect();
    fourtangle::numkernel::kron_all(&factors)
}

/// Concurrence of a two-qubit pure state, `2 |a d - b c|`.
pub fn pure_concurrence(psi: &PureState) -> f64 {
    let a = psi.amplitudes();
    2.0 * (a[0] * a[3] - a[1] * a[2]).norm()
}
