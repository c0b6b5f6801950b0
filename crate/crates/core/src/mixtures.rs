//! Named four-qubit states and the rank-2 / rank-3 mixture families built
//! from them.
//!
//! Bell pairs use `|Phi+-> = (|11> +- |00>)/sqrt(2)` and
//! `|Psi+-> = (|10> +- |01>)/sqrt(2)`. In a Bell product the first pair sits
//! on qubits (0, 1) and the second on (2, 3).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::measures::{concurrence, fourtangle_mixed};
use crate::numkernel::matrix::{ComplexMatrix, C64};
use crate::parallel::{par_map, Parallelism};
use crate::states::{DensityMatrix, PureState};

/// Default number of grid points per axis.
pub const DEFAULT_GRID_POINTS: usize = 201;

const WEIGHT_TOL: f64 = 1e-12;
/// Values at or below this count as zero when locating transitions.
pub const ZERO_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NamedState {
    Ghz4,
    Ghz4Prime,
    W4,
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
    /// `(|11> + e^{i phi}|00>)/sqrt(2)`.
    PhiPlusPhase(f64),
}

impl NamedState {
    pub fn qubits(self) -> usize {
        match self {
            NamedState::Ghz4 | NamedState::Ghz4Prime | NamedState::W4 => 4,
            _ => 2,
        }
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedState::Ghz4 => write!(f, "ghz4"),
            NamedState::Ghz4Prime => write!(f, "ghz4prime"),
            NamedState::W4 => write!(f, "w4"),
            NamedState::PhiPlus => write!(f, "phi+"),
            NamedState::PhiMinus => write!(f, "phi-"),
            NamedState::PsiPlus => write!(f, "psi+"),
            NamedState::PsiMinus => write!(f, "psi-"),
            NamedState::PhiPlusPhase(phi) => write!(f, "phi+phase:{phi}"),
        }
    }
}

impl FromStr for NamedState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let tag = match lower.as_str() {
            "ghz4" | "ghz" => NamedState::Ghz4,
            "ghz4prime" | "ghz'" | "ghzprime" => NamedState::Ghz4Prime,
            "w4" | "w" => NamedState::W4,
            "phi+" | "phiplus" => NamedState::PhiPlus,
            "phi-" | "phiminus" => NamedState::PhiMinus,
            "psi+" | "psiplus" => NamedState::PsiPlus,
            "psi-" | "psiminus" => NamedState::PsiMinus,
            other => {
                let phase = other
                    .strip_prefix("phi+phase:")
                    .or_else(|| other.strip_prefix("phiplusphase:"))
                    .ok_or_else(|| Error::UnknownTag(s.to_string()))?;
                let phi = phase
                    .parse::<f64>()
                    .map_err(|_| Error::UnknownTag(s.to_string()))?;
                NamedState::PhiPlusPhase(phi)
            }
        };
        Ok(tag)
    }
}

/// Exact amplitudes of a named state.
pub fn named_state(tag: NamedState) -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let re = |x: f64| C64::new(x, 0.0);
    let terms: Vec<(usize, C64)> = match tag {
        NamedState::Ghz4 => vec![(0b0000, re(h)), (0b1111, re(h))],
        NamedState::Ghz4Prime => vec![(0b0100, re(h)), (0b1011, re(h))],
        NamedState::W4 => vec![
            (0b1000, re(0.5)),
            (0b0100, re(0.5)),
            (0b0010, re(0.5)),
            (0b0001, re(0.5)),
        ],
        NamedState::PhiPlus => vec![(0b11, re(h)), (0b00, re(h))],
        NamedState::PhiMinus => vec![(0b11, re(h)), (0b00, re(-h))],
        NamedState::PsiPlus => vec![(0b10, re(h)), (0b01, re(h))],
        NamedState::PsiMinus => vec![(0b10, re(h)), (0b01, re(-h))],
        NamedState::PhiPlusPhase(phi) => {
            vec![(0b11, re(h)), (0b00, C64::from_polar(h, phi))]
        }
    };
    let mut amps = vec![C64::new(0.0, 0.0); 1 << tag.qubits()];
    for (i, a) in terms {
        amps[i] = a;
    }
    PureState::normalized(amps).expect("named states are normalizable")
}

/// Four-qubit product of two Bell-type pairs.
pub fn bell_product(first: NamedState, second: NamedState) -> Result<PureState> {
    if first.qubits() != 2 || second.qubits() != 2 {
        return Err(Error::InvalidState(format!(
            "{first} (x) {second} is not a product of two pairs"
        )));
    }
    Ok(named_state(first).tensor(&named_state(second)))
}

/// `sum_i w_i |psi_i><psi_i|`.
pub fn mix(states: &[PureState], weights: &[f64]) -> Result<DensityMatrix> {
    if states.is_empty() || states.len() != weights.len() {
        return Err(Error::InvalidWeights(format!(
            "{} states with {} weights",
            states.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0)) {
        return Err(Error::InvalidWeights(format!("negative weight {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::InvalidWeights(format!("weights sum to {total}")));
    }
    let dim = states[0].amplitudes().len();
    if states.iter().any(|s| s.amplitudes().len() != dim) {
        return Err(Error::DimensionMismatch(
            "mixture components have different dimensions".into(),
        ));
    }
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (psi, &w) in states.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        let a = psi.amplitudes();
        for i in 0..dim {
            let wi = a[i] * w;
            for j in 0..dim {
                m[(i, j)] += wi * a[j].conj();
            }
        }
    }
    Ok(DensityMatrix::new_unchecked(m))
}

/// `n` uniform points on `[0, 1]`.
pub fn unit_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

/// `C_{2;0,1} * C_{2;2,3}` for a four-qubit state.
pub fn pair_concurrence_product(rho: &DensityMatrix) -> Result<f64> {
    let c12 = concurrence(&rho.partial_trace(&[0, 1])?)?;
    let c34 = concurrence(&rho.partial_trace(&[2, 3])?)?;
    Ok(c12 * c34)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub p: f64,
    pub c4: f64,
    pub c2_product: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub p: f64,
    pub q: f64,
    pub c4: f64,
    pub c2_product: f64,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if let Some(x) = grid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::InvalidWeights(format!("grid value {x} outside [0, 1]")));
    }
    Ok(())
}

fn check_four(states: &[&PureState]) -> Result<()> {
    if let Some(s) = states.iter().find(|s| s.qubits() != 4) {
        return Err(Error::DimensionMismatch(format!(
            "mixture component has {} qubits, expected 4",
            s.qubits()
        )));
    }
    Ok(())
}

/// Evaluates `rho(p) = p a + (1 - p) b` at each grid point.
pub fn rank2_curve(a: &PureState, b: &PureState, grid: &[f64]) -> Result<Vec<CurvePoint>> {
    rank2_curve_with(a, b, grid, Parallelism::Sequential)
}

pub fn rank2_curve_with(
    a: &PureState,
    b: &PureState,
    grid: &[f64],
    par: Parallelism,
) -> Result<Vec<CurvePoint>> {
    check_four(&[a, b])?;
    check_grid(grid)?;
    let states = [a.clone(), b.clone()];
    par_map(grid, par, |&p| {
        let rho = mix(&states, &[p, 1.0 - p])?;
        Ok(CurvePoint {
            p,
            c4: fourtangle_mixed(&rho)?,
            c2_product: pair_concurrence_product(&rho)?,
        })
    })
    .into_iter()
    .collect()
}

/// Evaluates `rho(p, q) = p a + (1 - p)(q b + (1 - q) c)` on the product grid,
/// `p` varying slowest.
pub fn rank3_surface(
    a: &PureState,
    b: &PureState,
    c: &PureState,
    p_grid: &[f64],
    q_grid: &[f64],
) -> Result<Vec<SurfacePoint>> {
    rank3_surface_with(a, b, c, p_grid, q_grid, Parallelism::Sequential)
}

pub fn rank3_surface_with(
    a: &PureState,
    b: &PureState,
    c: &PureState,
    p_grid: &[f64],
    q_grid: &[f64],
    par: Parallelism,
) -> Result<Vec<SurfacePoint>> {
    check_four(&[a, b, c])?;
    check_grid(p_grid)?;
    check_grid(q_grid)?;
    let states = [a.clone(), b.clone(), c.clone()];
    let points: Vec<(f64, f64)> = p_grid
        .iter()
        .flat_map(|&p| q_grid.iter().map(move |&q| (p, q)))
        .collect();
    par_map(&points, par, |&(p, q)| {
        let rho = mix(&states, &rank3_weights(p, q))?;
        Ok(SurfacePoint {
            p,
            q,
            c4: fourtangle_mixed(&rho)?,
            c2_product: pair_concurrence_product(&rho)?,
        })
    })
    .into_iter()
    .collect()
}

fn rank3_weights(p: f64, q: f64) -> [f64; 3] {
    let b = (1.0 - p) * q;
    [p, b, 1.0 - p - b]
}

/// Parameters at which `f` switches between zero (`<= ZERO_THRESHOLD`) and
/// positive, bracketed on `grid` and refined by bisection to `tol`.
pub fn zero_transitions(
    grid: &[f64],
    tol: f64,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut prev: Option<(f64, bool)> = None;
    for &x in grid {
        let positive = f(x)? > ZERO_THRESHOLD;
        if let Some((x0, pos0)) = prev {
            if pos0 != positive {
                let (mut lo, mut hi) = (x0, x);
                while hi - lo > tol {
                    let mid = 0.5 * (lo + hi);
                    if (f(mid)? > ZERO_THRESHOLD) == pos0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                out.push(0.5 * (lo + hi));
            }
        }
        prev = Some((x, positive));
    }
    Ok(out)
}

/// Mixture families addressable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// GHZ4 / W4.
    GhzW,
    /// GHZ4 / Phi+ (x) Phi+.
    GhzBellBell,
    /// GHZ4 / (|11> + i|00>)/sqrt(2) squared.
    GhzBellBellPhase,
    /// Phi+ (x) Phi+ / W4.
    BellBellW,
    /// GHZ4 / Phi- (x) Phi- / Psi- (x) Psi-.
    GhzBellBellBellBell,
    /// GHZ4' / Phi+ (x) Psi- / W4.
    GhzPrimeBellBellW,
    /// W4 / Phi- (x) Phi- / Phi+ (x) Phi+.
    WBellBellBellBell,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::GhzW,
        Family::GhzBellBell,
        Family::GhzBellBellPhase,
        Family::BellBellW,
        Family::GhzBellBellBellBell,
        Family::GhzPrimeBellBellW,
        Family::WBellBellBellBell,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::GhzW => "ghz-w",
            Family::GhzBellBell => "ghz-bellbell",
            Family::GhzBellBellPhase => "ghz-bellbell-phase",
            Family::BellBellW => "bellbell-w",
            Family::GhzBellBellBellBell => "ghz-bellbell-bellbell",
            Family::GhzPrimeBellBellW => "ghzprime-bellbell-w",
            Family::WBellBellBellBell => "w-bellbell-bellbell",
        }
    }

    pub fn rank(self) -> usize {
        self.components().len()
    }

    /// Component states in weight order.
    pub fn components(self) -> Vec<PureState> {
        use NamedState::*;
        let bb = |a, b| bell_product(a, b).expect("pair tags");
        let half_pi = std::f64::consts::FRAC_PI_2;
        match self {
            Family::GhzW => vec![named_state(Ghz4), named_state(W4)],
            Family::GhzBellBell => vec![named_state(Ghz4), bb(PhiPlus, PhiPlus)],
            Family::GhzBellBellPhase => vec![
                named_state(Ghz4),
                bb(PhiPlusPhase(half_pi), PhiPlusPhase(half_pi)),
            ],
            Family::BellBellW => vec![bb(PhiPlus, PhiPlus), named_state(W4)],
            Family::GhzBellBellBellBell => vec![
                named_state(Ghz4),
                bb(PhiMinus, PhiMinus),
                bb(PsiMinus, PsiMinus),
            ],
            Family::GhzPrimeBellBellW => vec![
                named_state(Ghz4Prime),
                bb(PhiPlus, PsiMinus),
                named_state(W4),
            ],
            Family::WBellBellBellBell => vec![
                named_state(W4),
                bb(PhiMinus, PhiMinus),
                bb(PhiPlus, PhiPlus),
            ],
        }
    }

    /// Mixture at `(p, q)`; `q` is ignored for rank-2 families.
    pub fn density(self, p: f64, q: f64) -> Result<DensityMatrix> {
        let states = self.components();
        if states.len() == 2 {
            mix(&states, &[p, 1.0 - p])
        } else {
            mix(&states, &rank3_weights(p, q))
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownTag(s.to_string()))
    }
}
