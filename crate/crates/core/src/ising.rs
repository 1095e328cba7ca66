//! Mean-field CAVI on the two-node Ising model.
//!
//! The variational family is a product of two Bernoulli factors,
//! `q1(x1 = 1) = ζ` and `q2(x2 = 1) = ξ`. Each coordinate update is a logistic
//! function of the other coordinate, so with `j12 = 1` and no fields both
//! coordinates are driven by the scalar map `x ↦ σ(2β(2x - 1))`
//! ([`MapFamily::SigmoidCavi`](crate::scalar::MapFamily::SigmoidCavi)).

use alloc::vec;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::math::{binary_entropy, log_sum_exp, logistic};
use crate::oracle::Phase;
use crate::scalar::{find_fixed_points, Map1D};
use crate::{Error, Result};

/// Default convergence tolerance of [`simulate`].
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Default iteration cap of [`simulate`].
pub const DEFAULT_MAX_ITER: usize = 100_000;
/// A 2-cycle is declared only when its two points are at least this many
/// tolerances apart. Oscillating convergence to a fixed point brings states
/// two steps apart together faster than successive states.
pub const CYCLE_SEPARATION: f64 = 1e4;

/// Predicted attractor points closer than this are one point.
const SAME_STATE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct IsingParams {
    pub beta: f64,
    pub j12: f64,
    pub h1: f64,
    pub h2: f64,
}

impl IsingParams {
    /// Unit coupling, no external fields.
    pub const fn new(beta: f64) -> Self {
        IsingParams {
            beta,
            j12: 1.0,
            h1: 0.0,
            h2: 0.0,
        }
    }

    pub const fn with_fields(beta: f64, j12: f64, h1: f64, h2: f64) -> Self {
        IsingParams { beta, j12, h1, h2 }
    }

    /// Unit coupling and zero fields.
    pub fn is_canonical(&self) -> bool {
        self.j12 == 1.0 && self.h1 == 0.0 && self.h2 == 0.0
    }

    fn validate(&self) -> Result<()> {
        for (what, value) in [
            ("beta", self.beta),
            ("j12", self.j12),
            ("h1", self.h1),
            ("h2", self.h2),
        ] {
            if !value.is_finite() {
                return Err(Error::Domain { what, value });
            }
        }
        Ok(())
    }

    fn update(&self, other: f64, field: f64) -> f64 {
        logistic(2.0 * self.beta * (self.j12 * (2.0 * other - 1.0) + field))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct MeanFieldState {
    /// `q1(x1 = 1)`.
    pub zeta: f64,
    /// `q2(x2 = 1)`.
    pub xi: f64,
}

impl MeanFieldState {
    /// Fails unless both coordinates lie in `[0, 1]`.
    pub fn new(zeta: f64, xi: f64) -> Result<Self> {
        let s = MeanFieldState { zeta, xi };
        s.validate()?;
        Ok(s)
    }

    pub const fn symmetric() -> Self {
        MeanFieldState { zeta: 0.5, xi: 0.5 }
    }

    pub fn swap(self) -> Self {
        MeanFieldState {
            zeta: self.xi,
            xi: self.zeta,
        }
    }

    /// The state with both spins flipped: `(1 - ζ, 1 - ξ)`.
    pub fn label_switch(self) -> Self {
        MeanFieldState {
            zeta: 1.0 - self.zeta,
            xi: 1.0 - self.xi,
        }
    }

    fn validate(&self) -> Result<()> {
        for (what, value) in [("zeta", self.zeta), ("xi", self.xi)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::Domain { what, value });
            }
        }
        Ok(())
    }
}

impl Phase for MeanFieldState {
    fn distance(&self, other: &Self) -> f64 {
        (self.zeta - other.zeta)
            .abs()
            .max((self.xi - other.xi).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum UpdateMode {
    /// `ζ` first, then `ξ` from the new `ζ`.
    Sequential,
    /// Both coordinates from the old state.
    Parallel,
}

pub fn seq_step(s: MeanFieldState, p: &IsingParams) -> MeanFieldState {
    let zeta = p.update(s.xi, p.h1);
    let xi = p.update(zeta, p.h2);
    MeanFieldState { zeta, xi }
}

pub fn par_step(s: MeanFieldState, p: &IsingParams) -> MeanFieldState {
    MeanFieldState {
        zeta: p.update(s.xi, p.h1),
        xi: p.update(s.zeta, p.h2),
    }
}

pub fn step(s: MeanFieldState, p: &IsingParams, mode: UpdateMode) -> MeanFieldState {
    match mode {
        UpdateMode::Sequential => seq_step(s, p),
        UpdateMode::Parallel => par_step(s, p),
    }
}

/// `ln Z` by enumerating the four spin configurations.
pub fn log_partition(p: &IsingParams) -> f64 {
    let mut terms = [0.0; 4];
    for (slot, (s1, s2)) in
        terms
            .iter_mut()
            .zip([(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)])
    {
        *slot = p.beta * (p.j12 * s1 * s2 + p.h1 * s1 + p.h2 * s2);
    }
    log_sum_exp(&terms)
}

/// Exact ELBO `E_q[ln p] + H(q)` in nats, including `-ln Z`.
pub fn elbo(s: MeanFieldState, p: &IsingParams) -> f64 {
    let m1 = 2.0 * s.zeta - 1.0;
    let m2 = 2.0 * s.xi - 1.0;
    let energy = p.beta * (p.j12 * m1 * m2 + p.h1 * m1 + p.h2 * m2);
    energy - log_partition(p) + binary_entropy(s.zeta) + binary_entropy(s.xi)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub enum Terminal {
    ConvergedToFixedPoint(MeanFieldState),
    ConvergedToCycle {
        points: Vec<MeanFieldState>,
        period: usize,
    },
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct TrajectoryRecord {
    /// Every visited state, starting with the initial one.
    pub states: Vec<MeanFieldState>,
    /// `elbos[k] = elbo(states[k])`.
    pub elbos: Vec<f64>,
    pub terminal: Terminal,
}

impl TrajectoryRecord {
    /// Number of update steps taken.
    pub fn iterations(&self) -> usize {
        self.states.len() - 1
    }
}

/// Iterate from `s0` until successive states differ by less than `tol` in
/// max-norm (fixed point), states two apart do while successive states stay
/// [`CYCLE_SEPARATION`]` * tol` apart (2-cycle), or `max_iter` steps.
pub fn simulate(
    s0: MeanFieldState,
    p: &IsingParams,
    mode: UpdateMode,
    max_iter: usize,
    tol: f64,
) -> Result<TrajectoryRecord> {
    if max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1"));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    s0.validate()?;
    p.validate()?;

    let mut states = vec![s0];
    let mut elbos = vec![elbo(s0, p)];
    let mut terminal = Terminal::MaxIterations;
    for _ in 0..max_iter {
        let last = states[states.len() - 1];
        let next = step(last, p, mode);
        states.push(next);
        elbos.push(elbo(next, p));
        let step_size = next.distance(&last);
        if step_size < tol {
            terminal = Terminal::ConvergedToFixedPoint(next);
            break;
        }
        if states.len() >= 3
            && next.distance(&states[states.len() - 3]) < tol
            && step_size >= CYCLE_SEPARATION * tol
        {
            terminal = Terminal::ConvergedToCycle {
                points: vec![last, next],
                period: 2,
            };
            break;
        }
    }
    Ok(TrajectoryRecord {
        states,
        elbos,
        terminal,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Regime {
    /// `β < -1`.
    AntiferroOutside,
    /// `|β| ≤ 1`.
    Dobrushin,
    /// `β > 1`.
    FerroOutside,
}

impl Regime {
    pub fn of(beta: f64) -> Self {
        if beta < -1.0 {
            Regime::AntiferroOutside
        } else if beta > 1.0 {
            Regime::FerroOutside
        } else {
            Regime::Dobrushin
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub enum PredictedAttractor {
    FixedPoint(MeanFieldState),
    /// Points in the order the dynamics visits them.
    Cycle(Vec<MeanFieldState>),
    /// The initialisation sits on the repelling symmetric point and stays
    /// there in exact arithmetic.
    Boundary(MeanFieldState),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct RegimePrediction {
    pub regime: Regime,
    pub attractor: PredictedAttractor,
}

impl RegimePrediction {
    /// Whether a simulated trajectory ended on the predicted attractor, with
    /// every point matched within `tol` in max-norm.
    pub fn is_reached_by(&self, record: &TrajectoryRecord, tol: f64) -> bool {
        match (&self.attractor, &record.terminal) {
            (
                PredictedAttractor::FixedPoint(want) | PredictedAttractor::Boundary(want),
                Terminal::ConvergedToFixedPoint(got),
            ) => want.distance(got) <= tol,
            (PredictedAttractor::Cycle(want), Terminal::ConvergedToCycle { points, .. }) => {
                let covered = |a: &[MeanFieldState], b: &[MeanFieldState]| {
                    a.iter().all(|x| b.iter().any(|y| x.distance(y) <= tol))
                };
                covered(want, points) && covered(points, want)
            }
            _ => false,
        }
    }
}

/// The attractor the closed-form analysis assigns to `s0`.
///
/// Every coordinate subsequence of either update scheme iterates the second
/// iterate `g∘g` of `g(x) = σ(2β(2x - 1))`. For `|β| > 1` that map sends
/// `x < 1/2` to `c0`, `x > 1/2` to `c1` and fixes `1/2`; for `|β| ≤ 1` it
/// sends everything to `1/2`. The other coordinate then follows as `g` of the
/// limit.
pub fn predict_regime(
    s0: MeanFieldState,
    p: &IsingParams,
    mode: UpdateMode,
) -> Result<RegimePrediction> {
    if !p.is_canonical() {
        return Err(Error::UnsupportedParams(
            "regime prediction needs j12 = 1 and zero fields",
        ));
    }
    p.validate()?;
    s0.validate()?;

    let regime = Regime::of(p.beta);
    let g = Map1D::sigmoid(p.beta);
    let limit = second_iterate_limit(p.beta)?;
    let half = MeanFieldState::symmetric();
    let outside = regime != Regime::Dobrushin;

    let attractor = match mode {
        UpdateMode::Sequential => {
            if outside && s0.xi == 0.5 {
                PredictedAttractor::Boundary(half)
            } else {
                let xi = limit(s0.xi);
                PredictedAttractor::FixedPoint(MeanFieldState {
                    zeta: g.apply(xi),
                    xi,
                })
            }
        }
        UpdateMode::Parallel => {
            if outside && s0 == half {
                PredictedAttractor::Boundary(half)
            } else {
                let even = MeanFieldState {
                    zeta: limit(s0.zeta),
                    xi: limit(s0.xi),
                };
                let odd = MeanFieldState {
                    zeta: g.apply(even.xi),
                    xi: g.apply(even.zeta),
                };
                if even.distance(&odd) <= SAME_STATE {
                    PredictedAttractor::FixedPoint(even)
                } else {
                    PredictedAttractor::Cycle(vec![even, odd])
                }
            }
        }
    };
    Ok(RegimePrediction { regime, attractor })
}

/// The symmetric pair `c0 < 1/2 < c1` of the map at `|β| > 1`.
///
/// The pair is the same for `β` and `-β`: there it is the 2-cycle.
pub fn symmetric_pair(beta: f64) -> Result<Option<(f64, f64)>> {
    if beta.abs() <= 1.0 {
        return Ok(None);
    }
    let points = find_fixed_points(&Map1D::sigmoid(beta.abs()))?;
    match (points.first(), points.last()) {
        (Some(lo), Some(hi)) if points.len() == 3 => Ok(Some((lo.location, hi.location))),
        _ => Err(Error::InvalidArgument(
            "expected three fixed points outside |beta| <= 1",
        )),
    }
}

fn second_iterate_limit(beta: f64) -> Result<impl Fn(f64) -> f64> {
    let pair = symmetric_pair(beta)?;
    Ok(move |x: f64| match pair {
        Some((c0, _)) if x < 0.5 => c0,
        Some((_, c1)) if x > 0.5 => c1,
        _ => 0.5,
    })
}
