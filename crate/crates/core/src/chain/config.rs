use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest chain the exact-diagonalization backend accepts.
pub const ED_MAX_SITES: usize = 14;
/// Largest chain for which a dense Hamiltonian is materialized.
pub const DENSE_MAX_SITES: usize = 12;
/// Production chain length.
pub const PRODUCTION_SITES: usize = 1000;
/// Default chain length for exact-diagonalization checks.
pub const ED_DEFAULT_SITES: usize = 10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Boundary {
    #[default]
    Open,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Backend {
    Ed,
    #[default]
    FreeFermion,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Ed => "ed",
            Backend::FreeFermion => "freefermion",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ed" => Ok(Backend::Ed),
            "freefermion" | "ff" | "free-fermion" => Ok(Backend::FreeFermion),
            other => Err(Error::InvalidConfig(format!("unknown backend `{other}`"))),
        }
    }
}

/// One ground-state problem of the open transverse XY chain
///
/// `H = -lambda sum_i [(1+gamma)/2 X_i X_{i+1} + (1-gamma)/2 Y_i Y_{i+1}] - sum_i Z_i`
///
/// with Pauli matrices `X, Y, Z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainConfig {
    pub lambda: f64,
    pub gamma: f64,
    pub sites: usize,
    pub boundary: Boundary,
    pub backend: Backend,
}

impl ChainConfig {
    pub fn new(lambda: f64, gamma: f64, sites: usize, backend: Backend) -> Result<Self> {
        let cfg = Self {
            lambda,
            gamma,
            sites,
            boundary: Boundary::Open,
            backend,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "lambda must be finite and >= 0, got {}",
                self.lambda
            )));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::InvalidConfig(format!(
                "gamma must lie in [0, 1], got {}",
                self.gamma
            )));
        }
        if self.sites < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 sites, got {}",
                self.sites
            )));
        }
        if self.backend == Backend::Ed && self.sites > ED_MAX_SITES {
            return Err(Error::InvalidConfig(format!(
                "exact diagonalization supports at most {ED_MAX_SITES} sites, got {}",
                self.sites
            )));
        }
        Ok(())
    }

    pub fn with_backend(self, backend: Backend) -> Result<Self> {
        Self::new(self.lambda, self.gamma, self.sites, backend)
    }

    pub fn with_sites(self, sites: usize) -> Result<Self> {
        Self::new(self.lambda, self.gamma, sites, self.backend)
    }

    /// `(1+gamma)/2` and `(1-gamma)/2` scaled by `lambda`.
    pub(crate) fn couplings(&self) -> (f64, f64) {
        (
            self.lambda * (1.0 + self.gamma) / 2.0,
            self.lambda * (1.0 - self.gamma) / 2.0,
        )
    }
}

/// `(1 - gamma^2)^{-1/2}`; infinite at `gamma = 1`.
pub fn factorizing_field(gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidConfig(format!(
            "gamma must lie in [0, 1], got {gamma}"
        )));
    }
    Ok((1.0 - gamma * gamma).sqrt().recip())
}

/// Four chain sites with consecutive gaps `(n1, n2, n3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SiteQuad {
    gaps: [usize; 3],
}

impl SiteQuad {
    pub fn new(n1: usize, n2: usize, n3: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 || n3 == 0 {
            return Err(Error::InvalidSites(format!(
                "quad gaps must be positive, got ({n1},{n2},{n3})"
            )));
        }
        Ok(Self { gaps: [n1, n2, n3] })
    }

    pub fn gaps(&self) -> [usize; 3] {
        self.gaps
    }

    /// Distance from the first to the last site.
    pub fn span(&self) -> usize {
        self.gaps.iter().sum()
    }

    /// Absolute sites starting at `first`.
    pub fn at(&self, first: usize, sites: usize) -> Result<[usize; 4]> {
        let [a, b, c] = self.gaps;
        let quad = [first, first + a, first + a + b, first + a + b + c];
        if quad[3] >= sites {
            return Err(Error::InvalidSites(format!(
                "quad {self} starting at {first} does not fit in {sites} sites"
            )));
        }
        Ok(quad)
    }

    /// Absolute sites with the quad centered in a chain of `sites`.
    pub fn centered(&self, sites: usize) -> Result<[usize; 4]> {
        let span = self.span();
        if span >= sites {
            return Err(Error::InvalidSites(format!(
                "quad {self} does not fit in {sites} sites"
            )));
        }
        self.at((sites - 1 - span) / 2, sites)
    }
}

impl fmt::Display for SiteQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.gaps;
        write!(f, "({a},{b},{c})")
    }
}

impl FromStr for SiteQuad {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .collect();
        let gaps: Vec<usize> = parts
            .iter()
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidSites(format!("cannot parse quad `{s}`")))?;
        match gaps[..] {
            [a, b, c] => SiteQuad::new(a, b, c),
            _ => Err(Error::InvalidSites(format!(
                "quad `{s}` needs three gaps"
            ))),
        }
    }
}

/// The two sites `distance` apart, centered in a chain of `sites`.
pub fn centered_pair(distance: usize, sites: usize) -> Result<[usize; 2]> {
    if distance == 0 || distance >= sites {
        return Err(Error::InvalidSites(format!(
            "pair distance {distance} invalid for {sites} sites"
        )));
    }
    let first = (sites - 1 - distance) / 2;
    Ok([first, first + distance])
}

/// Center site of a chain.
pub fn center_site(sites: usize) -> usize {
    (sites - 1) / 2
}
