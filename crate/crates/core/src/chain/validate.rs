use super::config::{Backend, ChainConfig, SiteQuad, ED_MAX_SITES};
use super::ed::{ed_ground_state, ed_pauli_expectation};
use super::freefermion::ff_correlators_window;
use super::wick::{all_strings, pauli_expectation};
use crate::error::{Error, Result};

/// Largest `|ED - FF|` over all 256 Pauli strings on the centered quad.
pub fn cross_validate(cfg: &ChainConfig, quad: &SiteQuad) -> Result<f64> {
    if cfg.sites > ED_MAX_SITES {
        return Err(Error::InvalidConfig(format!(
            "cross validation needs at most {ED_MAX_SITES} sites, got {}",
            cfg.sites
        )));
    }
    let sites = quad.centered(cfg.sites)?;
    let psi = ed_ground_state(&cfg.with_backend(Backend::Ed)?)?;
    let table = ff_correlators_window(&cfg.with_backend(Backend::FreeFermion)?, 0..cfg.sites)?;
    let mut worst: f64 = 0.0;
    for labels in all_strings(4) {
        let exact = ed_pauli_expectation(&psi, &sites, &labels)?;
        let free = pauli_expectation(&table, &sites, &labels)?;
        worst = worst.max((exact - free).abs());
    }
    Ok(worst)
}
