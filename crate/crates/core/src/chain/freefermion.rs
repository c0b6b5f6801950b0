//! Free-fermion solution of the open XY chain.
//!
//! With `A_j = c_j^dag + c_j` and `B_j = c_j^dag - c_j` the Hamiltonian reads
//! `H = i sum_{jk} A_j T_{jk} Bt_k` where `Bt = -i B` is Hermitian and
//!
//! ```text
//! T_jj = -1,  T_{j+1,j} = lambda (1+gamma)/2,  T_{j,j+1} = lambda (1-gamma)/2.
//! ```
//!
//! For `T = U S V^T` the ground state has `G_jk = <B_j A_k> = (V U^T)_jk`.
//! Rather than a dense SVD, the symmetric `2N x 2N` matrix
//! `M = [[0, T], [T^T, 0]]` is stored in interleaved order (`A_j -> 2j`,
//! `Bt_j -> 2j+1`) where it has bandwidth 3. `G` is the `(B, A)` block of
//! `sign(M)`, so only the eigenvector rows belonging to the requested window
//! of sites are accumulated.

use std::ops::Range;

use super::config::ChainConfig;
use super::wick::{pauli_expectation_raw, MajoranaContractions};
use crate::error::{Error, Result};
use crate::numkernel::band::{band_eig, PartialEigen, SymmetricBand};
use crate::numkernel::qubits::Pauli;

/// Sites kept by [`ff_correlators`] when the chain is longer than this.
pub const DEFAULT_WINDOW: usize = 64;
/// Chains up to this length are solved over all sites with the parity of the
/// lowest mode fixed explicitly.
pub const PARITY_FIX_MAX_SITES: usize = 256;

const ENTRY_BOUND: f64 = 1.0 + 1e-9;

/// Elementary contractions `G[j][k] = <B_j A_k>` on a window of sites.
#[derive(Clone, Debug)]
pub struct CorrelatorTable {
    config: ChainConfig,
    window: Range<usize>,
    g: Vec<f64>,
}

impl CorrelatorTable {
    pub fn config(&self) -> &ChainConfig {
        &self.config
    }

    /// Absolute sites covered by the table.
    pub fn window(&self) -> Range<usize> {
        self.window.clone()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.window.contains(&site)
    }

    /// `<B_j A_k>` for absolute sites `j`, `k` inside the window.
    #[inline]
    pub fn get(&self, j: usize, k: usize) -> f64 {
        let w = self.window.len();
        let (j, k) = (j - self.window.start, k - self.window.start);
        self.g[j * w + k]
    }

    /// `max |G[j][k]|`.
    pub fn max_abs(&self) -> f64 {
        self.g.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl MajoranaContractions for CorrelatorTable {
    fn sites(&self) -> Range<usize> {
        self.window()
    }

    fn b_a(&self, j: usize, k: usize) -> f64 {
        self.get(j, k)
    }
}

/// Correlators on the whole chain when it is short, otherwise on a centered
/// window of [`DEFAULT_WINDOW`] sites.
pub fn ff_correlators(cfg: &ChainConfig) -> Result<CorrelatorTable> {
    let n = cfg.sites;
    let w = DEFAULT_WINDOW.min(n);
    let start = (n - w) / 2;
    ff_correlators_window(cfg, start..start + w)
}

/// Correlators restricted to `window`.
pub fn ff_correlators_window(cfg: &ChainConfig, window: Range<usize>) -> Result<CorrelatorTable> {
    cfg.validate()?;
    let n = cfg.sites;
    if window.is_empty() || window.end > n {
        return Err(Error::InvalidSites(format!(
            "window {window:?} outside a chain of {n} sites"
        )));
    }
    let full = window.start == 0 && window.end == n;
    let w = window.len();

    let (jx, jy) = cfg.couplings();
    let bandwidth = if jy == 0.0 { 1 } else { 3 };
    let mut m = SymmetricBand::zeros(2 * n, bandwidth);
    for j in 0..n {
        m.set(2 * j, 2 * j + 1, -1.0);
        if j + 1 < n {
            m.set(2 * j + 2, 2 * j + 1, jx);
            if jy != 0.0 {
                m.set(2 * j, 2 * j + 3, jy);
            }
        }
    }
    // rows: A of window sites, then B of window sites
    let rows: Vec<usize> = window
        .clone()
        .map(|j| 2 * j)
        .chain(window.clone().map(|j| 2 * j + 1))
        .collect();
    let eig = band_eig(m, &rows)?;

    let dim = 2 * n;
    // ascending eigenvalues: the positive half is the top n
    let lowest_pos = n;
    let mut g = vec![0.0; w * w];
    let skip = if full { 1 } else { 0 };
    for mode in lowest_pos + skip..dim {
        accumulate_mode(&eig, mode, w, &mut g, 2.0);
    }

    let mut table = CorrelatorTable {
        config: *cfg,
        window,
        g,
    };
    if full {
        fix_parity(&mut table, &eig, lowest_pos, w)?;
    }
    if table.max_abs() > ENTRY_BOUND {
        return Err(Error::NoConvergence(format!(
            "correlator entry {} exceeds 1",
            table.max_abs()
        )));
    }
    Ok(table)
}

/// `g[j][k] += scale * w[B_j] w[A_k]` for one eigenvector.
fn accumulate_mode(eig: &PartialEigen, mode: usize, w: usize, g: &mut [f64], scale: f64) {
    let a: Vec<f64> = (0..w).map(|k| eig.component(k, mode)).collect();
    for j in 0..w {
        let b = scale * eig.component(w + j, mode);
        if b == 0.0 {
            continue;
        }
        let row = &mut g[j * w..(j + 1) * w];
        for (x, ak) in row.iter_mut().zip(&a) {
            *x += b * ak;
        }
    }
}

/// Adds the lowest mode as `s v0 u0^T` with the sign `s` that makes the state
/// even under `prod_j Z_j`.
fn fix_parity(table: &mut CorrelatorTable, eig: &PartialEigen, lowest_pos: usize, w: usize) -> Result<()> {
    let part = |mode: usize, offset: usize| -> Vec<f64> {
        (0..w).map(|k| eig.component(offset + k, mode)).collect()
    };
    let unit = |v: Vec<f64>| -> Vec<f64> {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / norm).collect()
    };
    let sq = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
    let (plus, minus) = (lowest_pos, lowest_pos - 1);
    // near-degenerate +-eps pairs may come out rotated into each other
    let a_plus = part(plus, 0);
    let u0 = if sq(&a_plus) >= 0.25 {
        unit(a_plus)
    } else {
        unit(part(minus, 0))
    };
    let b_plus = part(plus, w);
    let v0 = if sq(&b_plus) >= 0.25 {
        unit(b_plus)
    } else {
        unit(part(minus, w))
    };
    for j in 0..w {
        for k in 0..w {
            table.g[j * w + k] += v0[j] * u0[k];
        }
    }
    let n = table.config.sites;
    if n > PARITY_FIX_MAX_SITES {
        return Ok(());
    }
    let sites: Vec<usize> = (0..n).collect();
    let labels = vec![Pauli::Z; n];
    let parity = pauli_expectation_raw(table, &sites, &labels)?.re;
    if parity < 0.0 {
        for j in 0..w {
            for k in 0..w {
                table.g[j * w + k] -= 2.0 * v0[j] * u0[k];
            }
        }
    }
    Ok(())
}
