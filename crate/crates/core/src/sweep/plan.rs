//! Sweep plans and their plain-text `key=value` form.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::chain::{Backend, ChainConfig, SiteQuad, ED_MAX_SITES, PRODUCTION_SITES};
use crate::error::{Error, Result};
use crate::mixtures::Family;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    MixtureRank2,
    MixtureRank3,
    ChainC4,
    ChainResidual,
    Validate,
}

impl SweepMode {
    pub const ALL: [SweepMode; 5] = [
        SweepMode::MixtureRank2,
        SweepMode::MixtureRank3,
        SweepMode::ChainC4,
        SweepMode::ChainResidual,
        SweepMode::Validate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepMode::MixtureRank2 => "mixture-rank2",
            SweepMode::MixtureRank3 => "mixture-rank3",
            SweepMode::ChainC4 => "chain-c4",
            SweepMode::ChainResidual => "chain-residual",
            SweepMode::Validate => "validate",
        }
    }

    pub fn is_chain(self) -> bool {
        !matches!(self, SweepMode::MixtureRank2 | SweepMode::MixtureRank3)
    }
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepMode::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::InvalidPlan(format!("unknown mode `{s}`")))
    }
}

/// Evenly spaced points `start, start + step, ...` up to `stop`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    start: f64,
    stop: f64,
    step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::InvalidPlan(format!(
                "grid {start}:{stop}:{step} has non-finite entries"
            )));
        }
        if step <= 0.0 {
            return Err(Error::InvalidPlan(format!("grid step must be > 0, got {step}")));
        }
        if stop < start {
            return Err(Error::InvalidPlan(format!(
                "grid must be increasing, got {start} > {stop}"
            )));
        }
        Ok(Self { start, stop, step })
    }

    /// The one-point grid `{x}`.
    pub fn single(x: f64) -> Result<Self> {
        Self::new(x, x, 1.0)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| (self.start + i as f64 * self.step).min(self.stop))
            .collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.stop {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}:{}:{}", self.start, self.stop, self.step)
        }
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `start:stop:step` or a single value.
    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidPlan(format!("bad number `{t}` in grid `{s}`")))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => Grid::single(num(x)?),
            [a, b, c] => Grid::new(num(a)?, num(b)?, num(c)?),
            _ => Err(Error::InvalidPlan(format!(
                "grid `{s}` is neither `start:stop:step` nor a single value"
            ))),
        }
    }
}

/// Parses `;`-separated quads; any gap may be a range `a-b`, which expands
/// in order, e.g. `1,1-3,1` is `(1,1,1);(1,2,1);(1,3,1)`.
pub fn parse_quads(s: &str) -> Result<Vec<SiteQuad>> {
    let mut out = Vec::new();
    for item in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let mut ranges = Vec::with_capacity(3);
        for part in item.split(',') {
            let bad = || Error::InvalidPlan(format!("bad quad `{item}`"));
            let (lo, hi) = match part.split_once('-') {
                Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
                None => {
                    let v: usize = part.trim().parse().map_err(|_| bad())?;
                    (v, v)
                }
            };
            if hi < lo {
                return Err(bad());
            }
            ranges.push(lo..=hi);
        }
        if ranges.len() != 3 {
            return Err(Error::InvalidPlan(format!("quad `{item}` needs three gaps")));
        }
        for a in ranges[0].clone() {
            for b in ranges[1].clone() {
                for c in ranges[2].clone() {
                    out.push(SiteQuad::new(a, b, c)?);
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidPlan(format!("no quads in `{s}`")));
    }
    Ok(out)
}

/// Everything needed to reproduce one sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPlan {
    pub mode: SweepMode,
    pub family: Family,
    pub p: Grid,
    pub q: Grid,
    pub lambda: Grid,
    pub gamma: f64,
    pub quads: Vec<SiteQuad>,
    pub backend: Backend,
    pub sites: usize,
    pub output: Option<PathBuf>,
}

impl Default for SweepPlan {
    fn default() -> Self {
        Self {
            mode: SweepMode::ChainC4,
            family: Family::GhzW,
            p: Grid { start: 0.0, stop: 1.0, step: 0.005 },
            q: Grid { start: 0.0, stop: 1.0, step: 0.05 },
            lambda: Grid { start: 0.0, stop: 2.0, step: 0.005 },
            gamma: 1.0,
            quads: vec![SiteQuad::new(1, 1, 1).expect("valid quad")],
            backend: Backend::FreeFermion,
            sites: PRODUCTION_SITES,
            output: None,
        }
    }
}

impl SweepPlan {
    /// Default plan for `mode`.
    pub fn for_mode(mode: SweepMode) -> Self {
        let mut plan = Self { mode, ..Self::default() };
        match mode {
            SweepMode::MixtureRank3 => plan.family = Family::WBellBellBellBell,
            SweepMode::Validate => {
                plan.backend = Backend::Ed;
                plan.sites = crate::chain::ED_DEFAULT_SITES;
                plan.lambda = Grid { start: 0.0, stop: 2.0, step: 0.25 };
            }
            _ => {}
        }
        plan
    }

    pub fn validate(&self) -> Result<()> {
        match self.mode {
            SweepMode::MixtureRank2 | SweepMode::MixtureRank3 => {
                let rank = if self.mode == SweepMode::MixtureRank2 { 2 } else { 3 };
                if self.family.rank() != rank {
                    return Err(Error::InvalidPlan(format!(
                        "family {} has rank {}, mode {} needs rank {rank}",
                        self.family,
                        self.family.rank(),
                        self.mode
                    )));
                }
                for (name, g) in [("p", &self.p), ("q", &self.q)] {
                    if g.start < 0.0 || g.stop > 1.0 {
                        return Err(Error::InvalidPlan(format!(
                            "{name} grid {g} leaves [0, 1]"
                        )));
                    }
                }
            }
            SweepMode::ChainC4 | SweepMode::ChainResidual | SweepMode::Validate => {
                ChainConfig::new(self.lambda.start, self.gamma, self.sites, self.backend)?;
                ChainConfig::new(self.lambda.stop, self.gamma, self.sites, self.backend)?;
                if self.mode == SweepMode::Validate && self.sites > ED_MAX_SITES {
                    return Err(Error::InvalidPlan(format!(
                        "validation needs at most {ED_MAX_SITES} sites, got {}",
                        self.sites
                    )));
                }
                if self.mode != SweepMode::ChainResidual {
                    if self.quads.is_empty() {
                        return Err(Error::InvalidPlan("no quads".into()));
                    }
                    for q in &self.quads {
                        q.centered(self.sites)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Sets one field from its plan-file key.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let num = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| Error::InvalidPlan(format!("bad number `{v}` for `{key}`")))
        };
        match key.trim() {
            "mode" => self.mode = value.parse()?,
            "family" => self.family = value.parse()?,
            "p" => self.p = value.parse()?,
            "q" => self.q = value.parse()?,
            "lambda" => self.lambda = value.parse()?,
            "gamma" => self.gamma = num(value)?,
            "quads" | "quad" => self.quads = parse_quads(value)?,
            "backend" => self.backend = value.parse()?,
            "sites" | "n" => {
                self.sites = value
                    .parse()
                    .map_err(|_| Error::InvalidPlan(format!("bad site count `{value}`")))?
            }
            "output" => self.output = Some(PathBuf::from(value)),
            other => return Err(Error::InvalidPlan(format!("unknown plan key `{other}`"))),
        }
        Ok(())
    }

    /// Reads `key=value` lines over `self`. Blank lines and `#` comments are
    /// skipped.
    pub fn merge_text(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidPlan(format!("line {}: expected key=value, got `{line}`", lineno + 1))
            })?;
            self.apply(key, value)?;
        }
        Ok(())
    }

    /// Parses a plan file's contents. The `mode` key, when present, selects
    /// the defaults the other keys override.
    pub fn from_text(text: &str) -> Result<Self> {
        let mode = text
            .lines()
            .filter_map(|l| l.trim().split_once('='))
            .find(|(k, _)| k.trim() == "mode")
            .map(|(_, v)| v.parse::<SweepMode>())
            .transpose()?
            .unwrap_or(SweepMode::ChainC4);
        let mut plan = Self::for_mode(mode);
        plan.merge_text(text)?;
        Ok(plan)
    }

    /// The keys that matter for this mode, space separated. Feeding the
    /// pairs back through [`SweepPlan::apply`] reproduces the rows.
    pub fn echo(&self) -> String {
        let mut parts = vec![format!("mode={}", self.mode)];
        match self.mode {
            SweepMode::MixtureRank2 => {
                parts.push(format!("family={}", self.family));
                parts.push(format!("p={}", self.p));
            }
            SweepMode::MixtureRank3 => {
                parts.push(format!("family={}", self.family));
                parts.push(format!("p={}", self.p));
                parts.push(format!("q={}", self.q));
            }
            _ => {
                parts.push(format!("lambda={}", self.lambda));
                parts.push(format!("gamma={}", self.gamma));
                if self.mode != SweepMode::ChainResidual {
                    let quads: Vec<String> = self.quads.iter().map(|q| {
                        let [a, b, c] = q.gaps();
                        format!("{a},{b},{c}")
                    }).collect();
                    parts.push(format!("quads={}", quads.join(";")));
                }
                parts.push(format!("backend={}", self.backend));
                parts.push(format!("sites={}", self.sites));
            }
        }
        parts.join(" ")
    }
}
