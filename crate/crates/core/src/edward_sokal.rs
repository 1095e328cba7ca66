//! Coordinate-wise variational updates for the Edward–Sokal coupling of the
//! two-node Ising model.
//!
//! The variational family has two spin marginals `x1 = q(σ1 = 1)`,
//! `x2 = q(σ2 = 1)` and an edge weight `y`, the probability that the edge is
//! absent. Configurations with an open edge and disagreeing spins are
//! excluded, which leaves six terms in the objective.
//!
//! There is no closed-form update. Each coordinate is set to the point of a
//! uniform grid on `(0, 1)` where the partial derivative of the objective is
//! smallest in absolute value. The partial derivatives can come from the
//! simplified closed forms ([`es_grad_x1`], [`es_grad_x2`], [`es_grad_y`]) or
//! from central differences of [`es_elbo`]; [`gradient_fidelity`] compares
//! the two.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::math::{exp, ln, xlogx};
use crate::oracle::{fd_derivative, Phase};
use crate::{Error, Result};

/// Default line-search grid spacing.
pub const DEFAULT_RESOLUTION: f64 = 1e-6;
/// Largest accepted line-search grid spacing.
pub const MAX_RESOLUTION: f64 = 0.01;
/// Number of cells in the coarse stage of the two-stage search.
pub const COARSE_CELLS: usize = 1000;
/// Largest finite-difference step used by [`GradientSource::FiniteDifference`].
pub const FD_GRADIENT_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ESParams {
    /// Edge weight, strictly inside `(0, 1)`.
    pub p: f64,
}

impl ESParams {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p < 1.0 {
            Ok(ESParams { p })
        } else {
            Err(Error::Domain {
                what: "p",
                value: p,
            })
        }
    }

    /// `p = 1 - e^{-β}` for an inverse temperature `β > 0`.
    pub fn from_beta(beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Domain {
                what: "beta",
                value: beta,
            });
        }
        ESParams::new(1.0 - exp(-beta))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ESState {
    pub x1: f64,
    pub x2: f64,
    /// Probability that the edge is absent.
    pub y: f64,
}

impl ESState {
    /// Fails unless every coordinate is strictly inside `(0, 1)`.
    pub fn new(x1: f64, x2: f64, y: f64) -> Result<Self> {
        let s = ESState { x1, x2, y };
        s.validate()?;
        Ok(s)
    }

    /// `x1` and `x2` exchanged.
    pub fn swap(self) -> Self {
        ESState {
            x1: self.x2,
            x2: self.x1,
            y: self.y,
        }
    }

    pub fn get(&self, coordinate: Coordinate) -> f64 {
        match coordinate {
            Coordinate::X1 => self.x1,
            Coordinate::X2 => self.x2,
            Coordinate::Y => self.y,
        }
    }

    pub fn with(self, coordinate: Coordinate, value: f64) -> Self {
        match coordinate {
            Coordinate::X1 => ESState { x1: value, ..self },
            Coordinate::X2 => ESState { x2: value, ..self },
            Coordinate::Y => ESState { y: value, ..self },
        }
    }

    fn validate(&self) -> Result<()> {
        for (what, value) in [("x1", self.x1), ("x2", self.x2), ("y", self.y)] {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::Domain { what, value });
            }
        }
        Ok(())
    }
}

impl Phase for ESState {
    fn distance(&self, other: &Self) -> f64 {
        (self.x1 - other.x1)
            .abs()
            .max((self.x2 - other.x2).abs())
            .max((self.y - other.y).abs())
    }
}

/// The coordinates in update order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Coordinate {
    X1,
    X2,
    Y,
}

impl Coordinate {
    pub const ALL: [Coordinate; 3] = [Coordinate::X1, Coordinate::X2, Coordinate::Y];

    pub fn name(self) -> &'static str {
        match self {
            Coordinate::X1 => "x1",
            Coordinate::X2 => "x2",
            Coordinate::Y => "y",
        }
    }
}

/// The six-term objective. `0 ln 0 = 0` at the boundary.
pub fn es_elbo(s: ESState, q: ESParams) -> f64 {
    let ESState { x1, x2, y } = s;
    let (n1, n2, ny) = (1.0 - x1, 1.0 - x2, 1.0 - y);
    let log_closed = ln(1.0 - q.p);
    let log_open = ln(q.p);
    let term = |w: f64, log_weight: f64| xlogx(w) - w * log_weight;
    term(x1 * x2 * y, log_closed)
        + term(n1 * x2 * y, log_closed)
        + term(x1 * n2 * y, log_closed)
        + term(n1 * n2 * y, log_closed)
        + term(x1 * x2 * ny, log_open)
        + term(n1 * n2 * ny, log_open)
}

/// Simplified closed form for the `x1` partial derivative.
pub fn es_grad_x1(s: ESState, q: ESParams) -> f64 {
    marginal_partial(s.x1, s.x2, s.y, q.p)
}

/// Simplified closed form for the `x2` partial derivative.
pub fn es_grad_x2(s: ESState, q: ESParams) -> f64 {
    marginal_partial(s.x2, s.x1, s.y, q.p)
}

fn marginal_partial(own: f64, other: f64, y: f64, p: f64) -> f64 {
    let open = 1.0 - y;
    y * ln(own / (1.0 - own))
        + open * ln(1.0 / (1.0 - own))
        + other * open * ln(own * (1.0 - own))
        + other * open * ln(other * (1.0 - other) * open * open / (p * p))
        + ln(p / ((1.0 - other) * open))
        + (2.0 * other - 1.0) * open
}

/// Simplified closed form for the `y` partial derivative.
pub fn es_grad_y(s: ESState, q: ESParams) -> f64 {
    let ESState { x1, x2, y } = s;
    let p = q.p;
    let agree_up = x1 * x2;
    let agree_down = (1.0 - x1) * (1.0 - x2);
    let split_a = (1.0 - x1) * x2;
    let split_b = x1 * (1.0 - x2);
    let odds_y = ln(y / (1.0 - y));
    let odds_p = ln(p / (1.0 - p));
    agree_up * odds_y
        + agree_up * odds_p
        + agree_down * odds_y
        + agree_down * odds_p
        + split_a * ln(split_a * y / (1.0 - p))
        + split_b * ln(split_b * y / (1.0 - p))
        + split_a
        + split_b
}

/// Central-difference partial derivative of [`es_elbo`].
///
/// The step shrinks near the boundary so every stencil node stays inside
/// `(0, 1)`.
pub fn fd_partial(coordinate: Coordinate, s: ESState, q: ESParams) -> f64 {
    let z = s.get(coordinate);
    let h = FD_GRADIENT_STEP.min(z / 4.0).min((1.0 - z) / 4.0);
    fd_derivative(|t| Ok(es_elbo(s.with(coordinate, t), q)), z, 1, h).unwrap_or(f64::NAN)
}

/// Where line-search partial derivatives come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum GradientSource {
    /// The simplified closed forms.
    #[default]
    Printed,
    /// Central differences of the objective.
    FiniteDifference,
}

impl GradientSource {
    pub fn partial(self, coordinate: Coordinate, s: ESState, q: ESParams) -> f64 {
        match (self, coordinate) {
            (GradientSource::Printed, Coordinate::X1) => es_grad_x1(s, q),
            (GradientSource::Printed, Coordinate::X2) => es_grad_x2(s, q),
            (GradientSource::Printed, Coordinate::Y) => es_grad_y(s, q),
            (GradientSource::FiniteDifference, c) => fd_partial(c, s, q),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum LineSearch {
    /// Coarse scan over about [`COARSE_CELLS`] points, then every grid point
    /// in the two coarse cells around the coarse minimiser.
    #[default]
    TwoStage,
    /// Every grid point.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CaviConfig {
    pub resolution: f64,
    pub gradient: GradientSource,
    pub search: LineSearch,
}

impl Default for CaviConfig {
    fn default() -> Self {
        CaviConfig {
            resolution: DEFAULT_RESOLUTION,
            gradient: GradientSource::default(),
            search: LineSearch::default(),
        }
    }
}

impl CaviConfig {
    pub fn with_resolution(resolution: f64) -> Self {
        CaviConfig {
            resolution,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.resolution > 0.0 && self.resolution <= MAX_RESOLUTION {
            Ok(())
        } else {
            Err(Error::Domain {
                what: "resolution",
                value: self.resolution,
            })
        }
    }
}

/// The interior grid `{Δ, 2Δ, …}` strictly below 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineGrid {
    resolution: f64,
    last: usize,
}

impl LineGrid {
    pub fn new(resolution: f64) -> Result<Self> {
        CaviConfig::with_resolution(resolution).validate()?;
        let last = libm::ceil(1.0 / resolution - 1e-6) as usize - 1;
        Ok(LineGrid { resolution, last })
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.last
    }

    pub fn is_empty(&self) -> bool {
        self.last == 0
    }

    /// The `k`-th point, `1 ≤ k ≤ len()`.
    pub fn point(&self, k: usize) -> f64 {
        k as f64 * self.resolution
    }

    /// Grid point minimising `|f|`, ties going to the smaller point. NaN
    /// values never win.
    pub fn argmin_abs<F>(&self, f: F, search: LineSearch) -> f64
    where
        F: Fn(f64) -> f64,
    {
        match search {
            LineSearch::Exact => self.point(self.argmin_range(&f, 1, self.last, 1)),
            LineSearch::TwoStage => {
                let stride = ((self.last + 1) / COARSE_CELLS).max(1);
                let coarse = self.argmin_range(&f, stride, self.last, stride);
                let lo = coarse.saturating_sub(stride).max(1);
                let hi = (coarse + stride).min(self.last);
                self.point(self.argmin_range(&f, lo, hi, 1))
            }
        }
    }

    fn argmin_range<F>(&self, f: &F, first: usize, last: usize, stride: usize) -> usize
    where
        F: Fn(f64) -> f64,
    {
        let mut best = first;
        let mut best_value = f64::INFINITY;
        let mut k = first;
        while k <= last {
            let v = f(self.point(k)).abs();
            if v < best_value {
                best = k;
                best_value = v;
            }
            k += stride;
        }
        best
    }
}

/// One sweep `x1 → x2 → y` with the default line search and printed partials.
pub fn es_cavi_step(s: ESState, q: ESParams, resolution: f64) -> Result<ESState> {
    es_cavi_step_with(s, q, &CaviConfig::with_resolution(resolution))
}

/// One sweep `x1 → x2 → y`; each coordinate sees the already-updated ones.
pub fn es_cavi_step_with(s: ESState, q: ESParams, config: &CaviConfig) -> Result<ESState> {
    config.validate()?;
    s.validate()?;
    let grid = LineGrid::new(config.resolution)?;
    let mut state = s;
    for coordinate in Coordinate::ALL {
        let value = grid.argmin_abs(
            |z| {
                config
                    .gradient
                    .partial(coordinate, state.with(coordinate, z), q)
            },
            config.search,
        );
        state = state.with(coordinate, value);
    }
    Ok(state)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct EsTrajectory {
    /// Every visited state, starting with the initial one.
    pub states: Vec<ESState>,
    /// `elbos[k] = es_elbo(states[k])`.
    pub elbos: Vec<f64>,
    pub converged: bool,
}

impl EsTrajectory {
    pub fn iterations(&self) -> usize {
        self.states.len() - 1
    }

    pub fn terminal(&self) -> ESState {
        self.states[self.states.len() - 1]
    }

    pub fn terminal_elbo(&self) -> f64 {
        self.elbos[self.elbos.len() - 1]
    }
}

/// Sweeps with the default configuration. `tol` defaults to twice the
/// resolution when `None`.
pub fn simulate_es(
    s0: ESState,
    q: ESParams,
    max_iter: usize,
    tol: Option<f64>,
) -> Result<EsTrajectory> {
    simulate_es_with(s0, q, &CaviConfig::default(), max_iter, tol)
}

/// Sweeps until successive states differ by less than `tol` in max-norm.
pub fn simulate_es_with(
    s0: ESState,
    q: ESParams,
    config: &CaviConfig,
    max_iter: usize,
    tol: Option<f64>,
) -> Result<EsTrajectory> {
    if max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1"));
    }
    config.validate()?;
    let tol = tol.unwrap_or(2.0 * config.resolution);
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    s0.validate()?;

    let mut states = vec![s0];
    let mut elbos = vec![es_elbo(s0, q)];
    let mut converged = false;
    for _ in 0..max_iter {
        let last = states[states.len() - 1];
        let next = es_cavi_step_with(last, q, config)?;
        states.push(next);
        elbos.push(es_elbo(next, q));
        if next.distance(&last) < tol {
            converged = true;
            break;
        }
    }
    Ok(EsTrajectory {
        states,
        elbos,
        converged,
    })
}

/// Closed-form versus finite-difference partials at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct FidelitySample {
    pub state: ESState,
    pub params: ESParams,
    /// In [`Coordinate::ALL`] order.
    pub printed: [f64; 3],
    pub finite_difference: [f64; 3],
}

impl FidelitySample {
    pub fn error(&self, coordinate: Coordinate) -> f64 {
        let i = coordinate as usize;
        (self.printed[i] - self.finite_difference[i]).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct GradientFidelity {
    pub tolerance: f64,
    pub samples: Vec<FidelitySample>,
}

impl GradientFidelity {
    pub fn max_error(&self, coordinate: Coordinate) -> f64 {
        self.samples
            .iter()
            .map(|s| s.error(coordinate))
            .fold(0.0, f64::max)
    }

    pub fn agrees(&self, coordinate: Coordinate) -> bool {
        self.samples
            .iter()
            .all(|s| s.error(coordinate) <= self.tolerance)
    }

    pub fn all_agree(&self) -> bool {
        Coordinate::ALL.iter().all(|&c| self.agrees(c))
    }

    /// Coordinates whose closed form disagrees somewhere.
    pub fn mismatches(&self) -> Vec<Coordinate> {
        Coordinate::ALL
            .iter()
            .copied()
            .filter(|&c| !self.agrees(c))
            .collect()
    }

    /// The gradient source consistent with the objective: the closed forms
    /// when they agree everywhere, finite differences otherwise.
    pub fn recommended_source(&self) -> GradientSource {
        if self.all_agree() {
            GradientSource::Printed
        } else {
            GradientSource::FiniteDifference
        }
    }
}

/// Compare the closed-form partials with finite differences of [`es_elbo`].
pub fn gradient_fidelity(
    points: &[(ESState, ESParams)],
    tolerance: f64,
) -> Result<GradientFidelity> {
    let mut samples = Vec::with_capacity(points.len());
    for &(state, params) in points {
        state.validate()?;
        let mut printed = [0.0; 3];
        let mut finite_difference = [0.0; 3];
        for (i, c) in Coordinate::ALL.into_iter().enumerate() {
            printed[i] = GradientSource::Printed.partial(c, state, params);
            finite_difference[i] = fd_partial(c, state, params);
        }
        samples.push(FidelitySample {
            state,
            params,
            printed,
            finite_difference,
        });
    }
    Ok(GradientFidelity { tolerance, samples })
}
