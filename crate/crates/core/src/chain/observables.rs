//! Entanglement measures of chain reduced states.

use super::config::{center_site, centered_pair, ChainConfig, SiteQuad};
use super::freefermion::{ff_correlators_window, CorrelatorTable};
use super::rdm::ff_rdm_sites;
use crate::error::{Error, Result};
use crate::measures::{concurrence, fourtangle_mixed, one_tangle, residual_tangle};
use crate::states::{DensityMatrix, PureState};

/// A chain ground state that can produce reduced states of site subsets.
pub trait ReducedStates {
    /// Chain length.
    fn chain_sites(&self) -> usize;
    /// Whether reduced states involving `site` are available.
    fn covers(&self, site: usize) -> bool;
    /// Reduced state on ascending `sites`.
    fn reduced_state(&self, sites: &[usize]) -> Result<DensityMatrix>;
}

impl ReducedStates for CorrelatorTable {
    fn chain_sites(&self) -> usize {
        self.config().sites
    }

    fn covers(&self, site: usize) -> bool {
        self.contains(site)
    }

    fn reduced_state(&self, sites: &[usize]) -> Result<DensityMatrix> {
        ff_rdm_sites(self, sites)
    }
}

/// Exact ground state, one qubit per site.
impl ReducedStates for PureState {
    fn chain_sites(&self) -> usize {
        self.qubits()
    }

    fn covers(&self, site: usize) -> bool {
        site < self.qubits()
    }

    fn reduced_state(&self, sites: &[usize]) -> Result<DensityMatrix> {
        self.reduced(sites)
    }
}

/// Concurrences below this end the residual-tangle distance sum.
pub const RESIDUAL_CUTOFF: f64 = 1e-9;
/// Largest distance summed in the residual tangle.
pub const RESIDUAL_MAX_DISTANCE: usize = 24;

/// `C4` of a quad plus the concurrences of its first and last pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadMeasures {
    pub c4: f64,
    /// Concurrence of sites 0 and 1 of the quad (distance `n1`).
    pub c2_first: f64,
    /// Concurrence of sites 2 and 3 of the quad (distance `n3`).
    pub c2_last: f64,
}

impl QuadMeasures {
    pub fn c2_product(&self) -> f64 {
        self.c2_first * self.c2_last
    }
}

/// Measures of the quad centered in the chain.
pub fn quad_measures<S: ReducedStates + ?Sized>(
    state: &S,
    quad: &SiteQuad,
) -> Result<QuadMeasures> {
    let sites = quad.centered(state.chain_sites())?;
    quad_measures_at(state, &sites)
}

pub fn quad_measures_at<S: ReducedStates + ?Sized>(
    state: &S,
    sites: &[usize; 4],
) -> Result<QuadMeasures> {
    let rho = state.reduced_state(sites)?;
    Ok(QuadMeasures {
        c4: fourtangle_mixed(&rho)?,
        c2_first: concurrence(&rho.partial_trace(&[0, 1])?)?,
        c2_last: concurrence(&rho.partial_trace(&[2, 3])?)?,
    })
}

/// Concurrence of the centered pair at `distance`.
pub fn pair_concurrence<S: ReducedStates + ?Sized>(state: &S, distance: usize) -> Result<f64> {
    let pair = centered_pair(distance, state.chain_sites())?;
    concurrence(&state.reduced_state(&pair)?)
}

/// One-tangle of the center site against the sum of squared concurrences.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub tau1: f64,
    pub sum_c2_squared: f64,
    pub residual: f64,
    /// Largest distance included in the sum.
    pub max_distance: usize,
}

/// `tau_1(i) - sum_d [C(i, i-d)^2 + C(i, i+d)^2]` at the center site `i`,
/// summing until both concurrences at a distance fall below
/// [`RESIDUAL_CUTOFF`].
pub fn residual_report<S: ReducedStates + ?Sized>(state: &S) -> Result<ResidualReport> {
    let n = state.chain_sites();
    let i = center_site(n);
    let tau1 = one_tangle(&state.reduced_state(&[i])?)?;
    let mut concurrences = Vec::new();
    let mut max_distance = 0;
    for d in 1..=RESIDUAL_MAX_DISTANCE {
        let mut side = Vec::with_capacity(2);
        if d <= i && state.covers(i - d) {
            side.push(concurrence(&state.reduced_state(&[i - d, i])?)?);
        }
        if i + d < n && state.covers(i + d) {
            side.push(concurrence(&state.reduced_state(&[i, i + d])?)?);
        }
        if side.is_empty() {
            break;
        }
        max_distance = d;
        let done = side.iter().all(|&c| c < RESIDUAL_CUTOFF);
        concurrences.extend(side);
        if done {
            break;
        }
    }
    let sum_c2_squared = concurrences.iter().map(|c| c * c).sum();
    Ok(ResidualReport {
        tau1,
        sum_c2_squared,
        residual: residual_tangle(tau1, &concurrences),
        max_distance,
    })
}

/// Table whose window covers every site the given quads and the residual sum
/// need, centered in the chain.
pub fn table_for(cfg: &ChainConfig, quads: &[SiteQuad], residual: bool) -> Result<CorrelatorTable> {
    let n = cfg.sites;
    let mut lo = n;
    let mut hi = 0;
    for q in quads {
        let s = q.centered(n)?;
        lo = lo.min(s[0]);
        hi = hi.max(s[3] + 1);
    }
    if residual {
        let c = center_site(n);
        lo = lo.min(c.saturating_sub(RESIDUAL_MAX_DISTANCE));
        hi = hi.max((c + RESIDUAL_MAX_DISTANCE + 1).min(n));
    }
    if lo >= hi {
        return Err(Error::InvalidSites("no sites requested".into()));
    }
    ff_correlators_window(cfg, lo..hi)
}

/// Largest change of `C4` and the companion concurrences of `quad` when the
/// chain length is doubled.
pub fn convergence_gap(cfg: &ChainConfig, quad: &SiteQuad) -> Result<f64> {
    let base = quad_measures(&table_for(cfg, &[*quad], false)?, quad)?;
    let doubled_cfg = cfg.with_sites(2 * cfg.sites)?;
    let doubled = quad_measures(&table_for(&doubled_cfg, &[*quad], false)?, quad)?;
    Ok((base.c4 - doubled.c4)
        .abs()
        .max((base.c2_first - doubled.c2_first).abs())
        .max((base.c2_last - doubled.c2_last).abs()))
}
