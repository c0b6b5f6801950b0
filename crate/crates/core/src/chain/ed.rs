//! Exact diagonalization of short chains.
//!
//! The Hamiltonian is real in the computational basis and conserves the
//! parity `prod_i Z_i`. The ground state is taken in the even sector
//! (even number of `1` bits) by Lanczos with full reorthogonalization.

use super::config::{ChainConfig, DENSE_MAX_SITES, ED_MAX_SITES};
use crate::error::{Error, Result};
use crate::numkernel::band::tridiagonal_eig;
use crate::numkernel::matrix::{ComplexMatrix, C64};
use crate::numkernel::qubits::Pauli;
use crate::states::PureState;

const MAX_KRYLOV: usize = 250;
const MAX_RESTARTS: usize = 8;
const RESIDUAL_TARGET: f64 = 1e-11;

/// Dense `2^N x 2^N` Hamiltonian.
pub fn build_hamiltonian(cfg: &ChainConfig) -> Result<ComplexMatrix> {
    cfg.validate()?;
    if cfg.sites > DENSE_MAX_SITES {
        return Err(Error::InvalidConfig(format!(
            "dense Hamiltonian limited to {DENSE_MAX_SITES} sites, got {}",
            cfg.sites
        )));
    }
    let n = cfg.sites;
    let dim = 1usize << n;
    let mut h = ComplexMatrix::zeros(dim, dim);
    for b in 0..dim {
        h[(b, b)] = C64::new(diagonal(b, n), 0.0);
        for bond in 0..n - 1 {
            let (flipped, amp) = hop(cfg, b, bond);
            h[(flipped, b)] += C64::new(amp, 0.0);
        }
    }
    Ok(h)
}

#[inline]
fn bit(b: usize, site: usize, n: usize) -> usize {
    (b >> (n - 1 - site)) & 1
}

/// `-sum_i Z_i` on basis state `b`.
#[inline]
fn diagonal(b: usize, n: usize) -> f64 {
    let ones = (b & ((1usize << n) - 1)).count_ones() as f64;
    -(n as f64 - 2.0 * ones)
}

/// Bond `(i, i+1)` flips both bits. The amplitude is `-lambda gamma` when the
/// two bits agree and `-lambda` when they differ.
#[inline]
fn hop(cfg: &ChainConfig, b: usize, bond: usize) -> (usize, f64) {
    let n = cfg.sites;
    let mask = (1usize << (n - 1 - bond)) | (1usize << (n - 2 - bond));
    let same = bit(b, bond, n) == bit(b, bond + 1, n);
    let amp = if same {
        -cfg.lambda * cfg.gamma
    } else {
        -cfg.lambda
    };
    (b ^ mask, amp)
}

fn apply(cfg: &ChainConfig, v: &[f64], out: &mut [f64]) {
    let n = cfg.sites;
    for (b, o) in out.iter_mut().enumerate() {
        if b.count_ones() % 2 == 1 {
            *o = 0.0;
            continue;
        }
        let mut acc = diagonal(b, n) * v[b];
        for bond in 0..n - 1 {
            let (f, amp) = hop(cfg, b, bond);
            acc += amp * v[f];
        }
        *o = acc;
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

/// Lowest even-parity eigenpair.
#[derive(Clone, Debug)]
pub struct EdSolution {
    pub energy: f64,
    pub state: PureState,
}

/// Ground state in the even-parity sector.
pub fn ed_ground_state(cfg: &ChainConfig) -> Result<PureState> {
    Ok(ed_solve(cfg)?.state)
}

pub fn ed_solve(cfg: &ChainConfig) -> Result<EdSolution> {
    cfg.validate()?;
    if cfg.sites > ED_MAX_SITES {
        return Err(Error::InvalidConfig(format!(
            "exact diagonalization supports at most {ED_MAX_SITES} sites"
        )));
    }
    let dim = 1usize << cfg.sites;
    // deterministic start vector on the even sector
    let mut x: Vec<f64> = (0..dim)
        .map(|b| {
            if b.count_ones() % 2 == 0 {
                1.0 + 0.5 * ((b as f64 * 0.618_033_988_75).fract() - 0.5)
            } else {
                0.0
            }
        })
        .collect();
    normalize(&mut x);

    let mut hx = vec![0.0; dim];
    let mut energy = 0.0;
    for _ in 0..MAX_RESTARTS {
        let (e, v) = lanczos(cfg, &x)?;
        x = v;
        energy = e;
        apply(cfg, &x, &mut hx);
        let residual = hx
            .iter()
            .zip(&x)
            .map(|(h, v)| (h - energy * v).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= RESIDUAL_TARGET * energy.abs().max(1.0) {
            let amps = x.iter().map(|&a| C64::new(a, 0.0)).collect();
            return Ok(EdSolution {
                energy,
                state: PureState::normalized(amps)?,
            });
        }
    }
    Err(Error::NoConvergence(format!(
        "Lanczos ground state at lambda={}, gamma={}, N={} (energy {energy})",
        cfg.lambda, cfg.gamma, cfg.sites
    )))
}

fn lanczos(cfg: &ChainConfig, start: &[f64]) -> Result<(f64, Vec<f64>)> {
    let dim = start.len();
    let even_dim = (dim / 2).max(1);
    let kmax = MAX_KRYLOV.min(even_dim);
    let mut basis: Vec<Vec<f64>> = vec![start.to_vec()];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];
    loop {
        let k = basis.len();
        apply(cfg, &basis[k - 1], &mut w);
        let a = dot(&w, &basis[k - 1]);
        alpha.push(a);
        // full reorthogonalization, twice
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&w, q);
                w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = normalize(&mut w);
        let done = k >= kmax || b <= 1e-13 * a.abs().max(1.0);
        if done || k % 8 == 0 {
            let eig = tridiagonal_eig(&alpha, &beta, &[k - 1])?;
            let ritz_residual = b * eig.component(0, 0).abs();
            if done || ritz_residual <= 1e-13 * eig.values[0].abs().max(1.0) {
                let all: Vec<usize> = (0..k).collect();
                let eig = tridiagonal_eig(&alpha, &beta, &all)?;
                let mut x = vec![0.0; dim];
                for (slot, q) in basis.iter().enumerate() {
                    let y = eig.component(slot, 0);
                    x.iter_mut().zip(q).for_each(|(v, qi)| *v += y * qi);
                }
                normalize(&mut x);
                return Ok((eig.values[0], x));
            }
        }
        beta.push(b);
        basis.push(w.clone());
    }
}

/// `<psi| P_{s1} P_{s2} ... |psi>` evaluated on the state vector.
pub fn ed_pauli_expectation(psi: &PureState, sites: &[usize], labels: &[Pauli]) -> Result<f64> {
    let n = psi.qubits();
    if sites.len() != labels.len() {
        return Err(Error::MalformedLabels(format!(
            "{} sites with {} labels",
            sites.len(),
            labels.len()
        )));
    }
    crate::numkernel::qubits::check_sites(sites, n)?;
    let amps = psi.amplitudes();
    let mut acc = C64::new(0.0, 0.0);
    for (b, &a) in amps.iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let mut out = b;
        let mut phase = C64::new(1.0, 0.0);
        for (&s, &p) in sites.iter().zip(labels) {
            let shift = n - 1 - s;
            let (nb, ph) = p.action(((b >> shift) & 1) as u32);
            out = (out & !(1 << shift)) | ((nb as usize) << shift);
            phase *= ph;
        }
        acc += amps[out].conj() * phase * a;
    }
    Ok(acc.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::config::Backend;
    use crate::numkernel::jacobi::herm_eig;

    fn cfg(lambda: f64, gamma: f64, n: usize) -> ChainConfig {
        ChainConfig::new(lambda, gamma, n, Backend::Ed).unwrap()
    }

    #[test]
    fn two_sites_field_only() {
        let h = build_hamiltonian(&cfg(0.0, 1.0, 2)).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| h[(i, i)].re).collect();
        assert_eq!(diag, vec![-2.0, 0.0, 0.0, 2.0]);
        let psi = ed_ground_state(&cfg(0.0, 1.0, 2)).unwrap();
        assert!((psi.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_site_ising_by_hand() {
        // H = -l X(x)X - Z(x)I - I(x)Z in basis 00, 01, 10, 11
        let l = 0.73;
        let h = build_hamiltonian(&cfg(l, 1.0, 2)).unwrap();
        let expect = [
            [-2.0, 0.0, 0.0, -l],
            [0.0, 0.0, -l, 0.0],
            [0.0, -l, 0.0, 0.0],
            [-l, 0.0, 0.0, 2.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(h[(i, j)], C64::new(expect[i][j], 0.0));
            }
        }
    }

    #[test]
    fn xy_three_sites_is_real_symmetric() {
        let h = build_hamiltonian(&cfg(0.8, 0.5, 3)).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(h[(i, j)].im, 0.0);
                assert_eq!(h[(i, j)], h[(j, i)]);
            }
        }
    }

    #[test]
    fn lanczos_matches_dense_even_sector() {
        for (l, g) in [(0.5, 1.0), (1.3, 0.5), (2.0, 0.2)] {
            let c = cfg(l, g, 6);
            let h = build_hamiltonian(&c).unwrap();
            let even: Vec<usize> = (0..64).filter(|b: &usize| b.count_ones() % 2 == 0).collect();
            let block = ComplexMatrix::from_fn(even.len(), even.len(), |i, j| h[(even[i], even[j])]);
            let eig = herm_eig(&block).unwrap();
            let lowest = eig.values[eig.values.len() - 1];
            let sol = ed_solve(&c).unwrap();
            assert!((sol.energy - lowest).abs() < 1e-10);
        }
    }

    #[test]
    fn pauli_expectation_on_basis_state() {
        let psi = PureState::basis(3, 0b010);
        let z = ed_pauli_expectation(&psi, &[0, 1], &[Pauli::Z, Pauli::Z]).unwrap();
        assert_eq!(z, -1.0);
        let x = ed_pauli_expectation(&psi, &[1], &[Pauli::X]).unwrap();
        assert_eq!(x, 0.0);
        assert!(ed_pauli_expectation(&psi, &[1, 0], &[Pauli::Z, Pauli::Z]).is_err());
    }

    #[test]
    fn dense_size_limit() {
        let c = ChainConfig::new(1.0, 1.0, 13, Backend::Ed).unwrap();
        assert!(build_hamiltonian(&c).is_err());
    }
}
