//! Sweep evaluation.

use crate::chain::{
    cross_validate, ed_ground_state, residual_report, table_for, Backend, ChainConfig,
    CorrelatorTable, QuadMeasures, ReducedStates, ResidualReport, SiteQuad,
};
use crate::error::{Error, Result};
use crate::mixtures::{rank2_curve_with, rank3_surface_with};
use crate::parallel::{par_map, Parallelism};
use crate::states::{DensityMatrix, PureState};

use super::plan::{SweepMode, SweepPlan};

/// Slack allowed on measures outside `[0, 1]`.
pub const MEASURE_SLACK: f64 = 1e-9;
/// Largest change under doubling `N` accepted by the convergence gate.
pub const GATE_TOLERANCE: f64 = 1e-6;

/// One output record.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepRow {
    Mixture {
        p: f64,
        /// Present for rank-3 families.
        q: Option<f64>,
        c4: f64,
        c2_product: f64,
    },
    Chain {
        lambda: f64,
        gamma: f64,
        sites: usize,
        quad: SiteQuad,
        measures: QuadMeasures,
    },
    Residual {
        lambda: f64,
        gamma: f64,
        sites: usize,
        report: ResidualReport,
    },
    Validate {
        lambda: f64,
        gamma: f64,
        sites: usize,
        quad: SiteQuad,
        deviation: f64,
    },
}

/// A CSV cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(usize),
}

impl SweepRow {
    /// Column names for rows of `mode`.
    pub fn header(mode: SweepMode) -> &'static [&'static str] {
        match mode {
            SweepMode::MixtureRank2 => &["p", "c4", "c2_product"],
            SweepMode::MixtureRank3 => &["p", "q", "c4", "c2_product"],
            SweepMode::ChainC4 => &[
                "lambda", "gamma", "sites", "n1", "n2", "n3", "c4", "c2_first", "c2_last",
                "c2_product", "bound_gap",
            ],
            SweepMode::ChainResidual => &[
                "lambda",
                "gamma",
                "sites",
                "tau1",
                "sum_c2_squared",
                "residual",
                "max_distance",
            ],
            SweepMode::Validate => &["lambda", "gamma", "sites", "n1", "n2", "n3", "deviation"],
        }
    }

    /// Mode whose header describes this row.
    pub fn mode(&self) -> SweepMode {
        match self {
            SweepRow::Mixture { q: None, .. } => SweepMode::MixtureRank2,
            SweepRow::Mixture { q: Some(_), .. } => SweepMode::MixtureRank3,
            SweepRow::Chain { .. } => SweepMode::ChainC4,
            SweepRow::Residual { .. } => SweepMode::ChainResidual,
            SweepRow::Validate { .. } => SweepMode::Validate,
        }
    }

    /// Cells in header order. `bound_gap` is `C2(first) C2(last) - C4`.
    pub fn cells(&self) -> Vec<Cell> {
        use Cell::{Float, Int};
        match self {
            SweepRow::Mixture { p, q, c4, c2_product } => {
                let mut v = vec![Float(*p)];
                v.extend(q.map(Float));
                v.extend([Float(*c4), Float(*c2_product)]);
                v
            }
            SweepRow::Chain { lambda, gamma, sites, quad, measures } => {
                let [a, b, c] = quad.gaps();
                vec![
                    Float(*lambda),
                    Float(*gamma),
                    Int(*sites),
                    Int(a),
                    Int(b),
                    Int(c),
                    Float(measures.c4),
                    Float(measures.c2_first),
                    Float(measures.c2_last),
                    Float(measures.c2_product()),
                    Float(measures.c2_product() - measures.c4),
                ]
            }
            SweepRow::Residual { lambda, gamma, sites, report } => vec![
                Float(*lambda),
                Float(*gamma),
                Int(*sites),
                Float(report.tau1),
                Float(report.sum_c2_squared),
                Float(report.residual),
                Int(report.max_distance),
            ],
            SweepRow::Validate { lambda, gamma, sites, quad, deviation } => {
                let [a, b, c] = quad.gaps();
                vec![
                    Float(*lambda),
                    Float(*gamma),
                    Int(*sites),
                    Int(a),
                    Int(b),
                    Int(c),
                    Float(*deviation),
                ]
            }
        }
    }

    /// The entanglement measures carried by the row.
    pub fn measures(&self) -> Vec<f64> {
        match self {
            SweepRow::Mixture { c4, c2_product, .. } => vec![*c4, *c2_product],
            SweepRow::Chain { measures, .. } => {
                vec![measures.c4, measures.c2_first, measures.c2_last]
            }
            SweepRow::Residual { report, .. } => vec![report.tau1, report.sum_c2_squared],
            SweepRow::Validate { .. } => Vec::new(),
        }
    }

    fn check_range(&self) -> Result<()> {
        for m in self.measures() {
            if !(-MEASURE_SLACK..=1.0 + MEASURE_SLACK).contains(&m) {
                return Err(Error::InvalidState(format!(
                    "measure {m} outside [0, 1] in row {self:?}"
                )));
            }
        }
        Ok(())
    }
}

/// Execution settings that do not change the rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub parallelism: Parallelism,
    /// Share one ground state per `(lambda, gamma, N)` across quads.
    pub cache: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            parallelism: Parallelism::Threads(0),
            cache: true,
        }
    }
}

/// Ground state of one chain configuration.
pub enum Ground {
    Table(CorrelatorTable),
    Exact(PureState),
}

impl ReducedStates for Ground {
    fn chain_sites(&self) -> usize {
        match self {
            Ground::Table(t) => t.chain_sites(),
            Ground::Exact(psi) => psi.chain_sites(),
        }
    }

    fn covers(&self, site: usize) -> bool {
        match self {
            Ground::Table(t) => t.covers(site),
            Ground::Exact(psi) => psi.covers(site),
        }
    }

    fn reduced_state(&self, sites: &[usize]) -> Result<DensityMatrix> {
        match self {
            Ground::Table(t) => t.reduced_state(sites),
            Ground::Exact(psi) => psi.reduced_state(sites),
        }
    }
}

/// Ground state covering `quads` (and the residual sum when `residual`).
pub fn ground(cfg: &ChainConfig, quads: &[SiteQuad], residual: bool) -> Result<Ground> {
    match cfg.backend {
        Backend::Ed => Ok(Ground::Exact(ed_ground_state(cfg)?)),
        Backend::FreeFermion => Ok(Ground::Table(table_for(cfg, quads, residual)?)),
    }
}

/// Rows of the plan, ordered by grid index (then quad order).
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<SweepRow>> {
    run_sweep_with(plan, RunOptions::default())
}

pub fn run_sweep_with(plan: &SweepPlan, opts: RunOptions) -> Result<Vec<SweepRow>> {
    plan.validate()?;
    let par = opts.parallelism;
    let rows = match plan.mode {
        SweepMode::MixtureRank2 => {
            let c = plan.family.components();
            rank2_curve_with(&c[0], &c[1], &plan.p.values(), par)?
                .into_iter()
                .map(|pt| SweepRow::Mixture { p: pt.p, q: None, c4: pt.c4, c2_product: pt.c2_product })
                .collect()
        }
        SweepMode::MixtureRank3 => {
            let c = plan.family.components();
            rank3_surface_with(&c[0], &c[1], &c[2], &plan.p.values(), &plan.q.values(), par)?
                .into_iter()
                .map(|pt| SweepRow::Mixture {
                    p: pt.p,
                    q: Some(pt.q),
                    c4: pt.c4,
                    c2_product: pt.c2_product,
                })
                .collect()
        }
        _ => {
            let per_point = par_map(&plan.lambda.values(), par, |&lambda| {
                chain_rows(plan, lambda, opts.cache)
            });
            let mut rows = Vec::new();
            for r in per_point {
                rows.extend(r?);
            }
            rows
        }
    };
    for r in &rows {
        r.check_range()?;
    }
    Ok(rows)
}

/// Rows of a chain plan at one coupling.
pub fn chain_rows(plan: &SweepPlan, lambda: f64, cache: bool) -> Result<Vec<SweepRow>> {
    let cfg = ChainConfig::new(lambda, plan.gamma, plan.sites, plan.backend)?;
    let (gamma, sites) = (plan.gamma, plan.sites);
    match plan.mode {
        SweepMode::ChainC4 => {
            let shared = if cache { Some(ground(&cfg, &plan.quads, false)?) } else { None };
            plan.quads
                .iter()
                .map(|quad| {
                    let measures = match &shared {
                        Some(g) => crate::chain::quad_measures(g, quad)?,
                        None => crate::chain::quad_measures(&ground(&cfg, &[*quad], false)?, quad)?,
                    };
                    Ok(SweepRow::Chain { lambda, gamma, sites, quad: *quad, measures })
                })
                .collect()
        }
        SweepMode::ChainResidual => {
            let report = residual_report(&ground(&cfg, &[], true)?)?;
            Ok(vec![SweepRow::Residual { lambda, gamma, sites, report }])
        }
        SweepMode::Validate => plan
            .quads
            .iter()
            .map(|quad| {
                Ok(SweepRow::Validate {
                    lambda,
                    gamma,
                    sites,
                    quad: *quad,
                    deviation: cross_validate(&cfg, quad)?,
                })
            })
            .collect(),
        _ => Err(Error::InvalidPlan(format!("{} is not a chain mode", plan.mode))),
    }
}

/// Outcome of comparing sampled sweep points against a chain of twice the
/// length.
#[derive(Clone, Debug, PartialEq)]
pub struct GateReport {
    /// Largest change of any reported measure.
    pub worst: f64,
    /// Coupling at which `worst` occurred.
    pub worst_lambda: f64,
    /// Sampled couplings.
    pub lambdas: Vec<f64>,
}

impl GateReport {
    pub fn passed(&self) -> bool {
        self.worst < GATE_TOLERANCE
    }
}

/// Convergence gate on `samples` evenly spread grid points of a free-fermion
/// chain plan.
pub fn convergence_gate(plan: &SweepPlan, samples: usize, par: Parallelism) -> Result<GateReport> {
    if !matches!(plan.mode, SweepMode::ChainC4 | SweepMode::ChainResidual) {
        return Err(Error::InvalidPlan(format!("no convergence gate for mode {}", plan.mode)));
    }
    if plan.backend != Backend::FreeFermion {
        return Err(Error::InvalidPlan(
            "the convergence gate needs the free-fermion backend".into(),
        ));
    }
    plan.validate()?;
    let grid = plan.lambda.values();
    let lambdas = sample(&grid, samples);
    let mut doubled = plan.clone();
    doubled.sites = 2 * plan.sites;
    let gaps = par_map(&lambdas, par, |&lambda| -> Result<f64> {
        let base = chain_rows(plan, lambda, true)?;
        let big = chain_rows(&doubled, lambda, true)?;
        let mut worst: f64 = 0.0;
        for (a, b) in base.iter().zip(&big) {
            for (x, y) in a.measures().into_iter().zip(b.measures()) {
                worst = worst.max((x - y).abs());
            }
        }
        Ok(worst)
    });
    let mut report = GateReport { worst: 0.0, worst_lambda: lambdas.first().copied().unwrap_or(0.0), lambdas: lambdas.clone() };
    for (lambda, gap) in lambdas.iter().zip(gaps) {
        let gap = gap?;
        if gap > report.worst {
            report.worst = gap;
            report.worst_lambda = *lambda;
        }
    }
    Ok(report)
}

/// `samples` grid points spread evenly over `grid`, ends included.
fn sample(grid: &[f64], samples: usize) -> Vec<f64> {
    let n = grid.len();
    if samples == 0 || n == 0 {
        return Vec::new();
    }
    if samples >= n {
        return grid.to_vec();
    }
    if samples == 1 {
        return vec![grid[n / 2]];
    }
    let mut idx: Vec<usize> = (0..samples).map(|k| k * (n - 1) / (samples - 1)).collect();
    idx.dedup();
    idx.into_iter().map(|i| grid[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixtures::Family;
    use crate::sweep::plan::{parse_quads, Grid};

    fn chain_plan() -> SweepPlan {
        let mut plan = SweepPlan::for_mode(SweepMode::ChainC4);
        plan.sites = 60;
        plan.gamma = 0.5;
        plan.lambda = Grid::new(0.8, 1.2, 0.2).unwrap();
        plan.quads = parse_quads("1,1-2,1;2,1,2").unwrap();
        plan
    }

    #[test]
    fn rank2_is_linear_in_p() {
        let mut plan = SweepPlan::for_mode(SweepMode::MixtureRank2);
        plan.family = Family::GhzW;
        plan.p = Grid::new(0.0, 1.0, 0.1).unwrap();
        let rows = run_sweep(&plan).unwrap();
        assert_eq!(rows.len(), 11);
        for r in rows {
            let SweepRow::Mixture { p, c4, .. } = r else { panic!() };
            assert!((c4 - p).abs() < 1e-10);
        }
    }

    #[test]
    fn rank3_row_order() {
        let mut plan = SweepPlan::for_mode(SweepMode::MixtureRank3);
        plan.p = Grid::new(0.0, 1.0, 0.5).unwrap();
        plan.q = Grid::new(0.0, 1.0, 0.5).unwrap();
        let rows = run_sweep(&plan).unwrap();
        let pq: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| match r {
                SweepRow::Mixture { p, q: Some(q), .. } => (*p, *q),
                _ => panic!(),
            })
            .collect();
        assert_eq!(pq[1], (0.0, 0.5));
        assert_eq!(pq[3], (0.5, 0.0));
    }

    #[test]
    fn chain_rows_follow_grid_then_quads() {
        let plan = chain_plan();
        let rows = run_sweep(&plan).unwrap();
        assert_eq!(rows.len(), 9);
        let SweepRow::Chain { lambda, quad, .. } = &rows[4] else { panic!() };
        assert!((lambda - 1.0).abs() < 1e-15);
        assert_eq!(quad.gaps(), [1, 2, 1]);
    }

    #[test]
    fn cache_does_not_change_rows() {
        let plan = chain_plan();
        let seq = RunOptions { parallelism: Parallelism::Sequential, cache: true };
        let a = run_sweep_with(&plan, seq).unwrap();
        let b = run_sweep_with(&plan, RunOptions { cache: false, ..seq }).unwrap();
        for (x, y) in a.iter().zip(&b) {
            for (u, v) in x.measures().into_iter().zip(y.measures()) {
                assert!((u - v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let plan = chain_plan();
        let a = run_sweep_with(&plan, RunOptions { parallelism: Parallelism::Sequential, cache: true }).unwrap();
        let b = run_sweep_with(&plan, RunOptions { parallelism: Parallelism::Threads(2), cache: true }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ed_and_free_fermion_rows_agree() {
        let mut plan = chain_plan();
        plan.sites = 10;
        plan.quads = parse_quads("1,1,1;1,2,1").unwrap();
        let ff = run_sweep(&plan).unwrap();
        plan.backend = Backend::Ed;
        let ed = run_sweep(&plan).unwrap();
        for (x, y) in ff.iter().zip(&ed) {
            for (u, v) in x.measures().into_iter().zip(y.measures()) {
                assert!((u - v).abs() < 1e-7, "{u} vs {v}");
            }
        }
    }

    #[test]
    fn residual_rows() {
        let mut plan = SweepPlan::for_mode(SweepMode::ChainResidual);
        plan.sites = 80;
        plan.lambda = Grid::new(0.5, 1.5, 0.5).unwrap();
        let rows = run_sweep(&plan).unwrap();
        assert_eq!(rows.len(), 3);
        for r in rows {
            let SweepRow::Residual { report, .. } = r else { panic!() };
            assert!(report.residual >= -1e-9);
        }
    }

    #[test]
    fn validate_rows_are_small() {
        let mut plan = SweepPlan::for_mode(SweepMode::Validate);
        plan.sites = 8;
        plan.lambda = Grid::new(0.5, 1.5, 1.0).unwrap();
        for r in run_sweep(&plan).unwrap() {
            let SweepRow::Validate { deviation, .. } = r else { panic!() };
            assert!(deviation < 1e-8);
        }
    }

    #[test]
    fn gate_sampling() {
        let grid: Vec<f64> = (0..11).map(|i| i as f64).collect();
        assert_eq!(sample(&grid, 3), vec![0.0, 5.0, 10.0]);
        assert_eq!(sample(&grid, 0), Vec::<f64>::new());
        assert_eq!(sample(&grid, 50).len(), 11);
        let mut plan = chain_plan();
        plan.sites = 200;
        plan.lambda = Grid::new(0.5, 1.5, 0.5).unwrap();
        let gate = convergence_gate(&plan, 2, Parallelism::Sequential).unwrap();
        assert_eq!(gate.lambdas, vec![0.5, 1.5]);
        assert!(gate.passed(), "{gate:?}");
        plan.backend = Backend::Ed;
        assert!(convergence_gate(&plan, 2, Parallelism::Sequential).is_err());
    }
}
