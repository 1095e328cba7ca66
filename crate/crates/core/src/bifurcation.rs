//! Codimension-one bifurcation checks for scalar maps.
//!
//! [`check_pitchfork`] and [`check_period_doubling`] evaluate the
//! nondegeneracy conditions at a candidate `(x*, α*)`. [`scan_bifurcations`]
//! finds candidates by following fixed-point branches across a parameter grid
//! and watching `|f_x| - 1` change sign. [`bifurcation_diagram`] is the
//! behavioural counterpart: long-run attractors from a fixed set of
//! initialisations.

use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::Serialize;

use crate::scalar::fixed_points::fixed_point_locations;
use crate::scalar::{Map1D, MapFamily, MAX_CYCLE_PERIOD};
use crate::{Error, Result};

/// Band for equality conditions and threshold for nonzero conditions.
pub const CONDITION_TOLERANCE: f64 = 1e-6;
/// Width of the parameter bracket at which scan refinement stops.
pub const LOCATION_TOLERANCE: f64 = 1e-8;
/// Attractor points closer than this are merged in diagrams.
pub const DIAGRAM_MERGE: f64 = 1e-6;
/// `|f^p(a) - a|` below which `a` is considered `p`-periodic in diagrams.
pub const DIAGRAM_PERIOD_TOLERANCE: f64 = 1e-8;

const PRECONDITION_RESIDUAL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub enum BifurcationKind {
    Pitchfork,
    PeriodDoubling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub enum Verdict {
    Confirmed,
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub enum Criticality {
    SuperCritical,
    SubCritical,
    NotApplicable,
}

/// One checked condition. Equality conditions carry a `target` and pass when
/// `|value - target| <= threshold`; nonzero conditions pass when
/// `|value| > threshold`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct Condition {
    pub name: &'static str,
    pub value: f64,
    pub target: Option<f64>,
    pub threshold: f64,
    pub satisfied: bool,
}

impl Condition {
    fn equals(name: &'static str, value: f64, target: f64) -> Self {
        Condition {
            name,
            value,
            target: Some(target),
            threshold: CONDITION_TOLERANCE,
            satisfied: (value - target).abs() <= CONDITION_TOLERANCE,
        }
    }

    fn nonzero(name: &'static str, value: f64) -> Self {
        Condition {
            name,
            value,
            target: None,
            threshold: CONDITION_TOLERANCE,
            satisfied: value.abs() > CONDITION_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct BifurcationCheck {
    pub family: MapFamily,
    pub kind: BifurcationKind,
    pub x_star: f64,
    pub alpha_star: f64,
    pub conditions: Vec<Condition>,
    pub verdict: Verdict,
    pub criticality: Criticality,
}

impl BifurcationCheck {
    pub fn is_confirmed(&self) -> bool {
        self.verdict == Verdict::Confirmed
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    fn new(map: &Map1D, kind: BifurcationKind, x_star: f64, conditions: Vec<Condition>) -> Self {
        let verdict = if conditions.iter().all(|c| c.satisfied) {
            Verdict::Confirmed
        } else {
            Verdict::Rejected
        };
        BifurcationCheck {
            family: map.family,
            kind,
            x_star,
            alpha_star: map.param,
            conditions,
            verdict,
            criticality: Criticality::NotApplicable,
        }
    }
}

fn fixed_point_jet(map: &Map1D, x_star: f64) -> Result<crate::scalar::Jet> {
    let jet = map.jet(x_star)?;
    let residual = (jet.value - x_star).abs();
    if residual > PRECONDITION_RESIDUAL {
        return Err(Error::NotAFixedPoint {
            x: x_star,
            residual,
        });
    }
    Ok(jet)
}

/// Pitchfork conditions at `(x_star, alpha_star)`: multiplier `+1`,
/// `f_xx = f_α = 0`, `f_xxx ≠ 0`, `f_αx ≠ 0`. Criticality of a confirmed
/// pitchfork is the sign of `-f_xxx / f_αx`.
pub fn check_pitchfork(map: &Map1D, x_star: f64, alpha_star: f64) -> Result<BifurcationCheck> {
    let map = map.with_param(alpha_star);
    let jet = fixed_point_jet(&map, x_star)?;
    let conditions = alloc::vec![
        Condition::equals("f(x*) = x*", jet.value - x_star, 0.0),
        Condition::equals("f_x = 1", jet.dx, 1.0),
        Condition::equals("f_xx = 0", jet.dxx, 0.0),
        Condition::equals("f_alpha = 0", jet.dalpha, 0.0),
        Condition::nonzero("f_xxx != 0", jet.dxxx),
        Condition::nonzero("f_alpha_x != 0", jet.dalpha_dx),
    ];
    let mut check = BifurcationCheck::new(&map, BifurcationKind::Pitchfork, x_star, conditions);
    if check.is_confirmed() {
        check.criticality = if -jet.dxxx / jet.dalpha_dx > 0.0 {
            Criticality::SuperCritical
        } else {
            Criticality::SubCritical
        };
    }
    Ok(check)
}

/// Period-doubling conditions at `(x_star, alpha_star)`: multiplier `-1`,
/// `(1/2) f_xx² + (1/3) f_xxx ≠ 0`, `f_αx ≠ 0`.
pub fn check_period_doubling(
    map: &Map1D,
    x_star: f64,
    alpha_star: f64,
) -> Result<BifurcationCheck> {
    let map = map.with_param(alpha_star);
    let jet = fixed_point_jet(&map, x_star)?;
    let nondegeneracy = 0.5 * jet.dxx * jet.dxx + jet.dxxx / 3.0;
    let conditions = alloc::vec![
        Condition::equals("f(x*) = x*", jet.value - x_star, 0.0),
        Condition::equals("f_x = -1", jet.dx, -1.0),
        Condition::nonzero("f_xx^2/2 + f_xxx/3 != 0", nondegeneracy),
        Condition::nonzero("f_alpha_x != 0", jet.dalpha_dx),
    ];
    Ok(BifurcationCheck::new(
        &map,
        BifurcationKind::PeriodDoubling,
        x_star,
        conditions,
    ))
}

/// A fixed point on a branch with its stability margin `|f_x| - 1`.
#[derive(Debug, Clone, Copy)]
struct BranchPoint {
    x: f64,
    margin: f64,
}

fn branch_points(map: &Map1D) -> Vec<BranchPoint> {
    fixed_point_locations(map)
        .into_iter()
        .map(|x| BranchPoint {
            x,
            margin: map.jet_unchecked(x).dx.abs() - 1.0,
        })
        .collect()
}

fn nearest(points: &[BranchPoint], x: f64) -> Option<BranchPoint> {
    points
        .iter()
        .copied()
        .min_by(|a, b| (a.x - x).abs().total_cmp(&(b.x - x).abs()))
}

fn crosses(from: f64, to: f64) -> bool {
    (from <= 0.0 && to > 0.0) || (from >= 0.0 && to < 0.0)
}

/// Bisect the parameter bracket `[a, b]` on the branch through `start` (a
/// point at `a`) until it is narrower than [`LOCATION_TOLERANCE`].
fn refine(base: &Map1D, mut a: f64, mut b: f64, start: BranchPoint) -> (f64, f64) {
    let mut left = start;
    if left.margin == 0.0 {
        return (left.x, a);
    }
    for _ in 0..200 {
        if b - a <= LOCATION_TOLERANCE {
            break;
        }
        let mid = 0.5 * (a + b);
        let Some(p) = nearest(&branch_points(&base.with_param(mid)), left.x) else {
            break;
        };
        if p.margin == 0.0 {
            return (p.x, mid);
        }
        if (p.margin < 0.0) == (left.margin < 0.0) {
            a = mid;
            left = p;
        } else {
            b = mid;
        }
    }
    let alpha = 0.5 * (a + b);
    let x = nearest(&branch_points(&base.with_param(alpha)), left.x).map_or(left.x, |p| p.x);
    (x, alpha)
}

/// Locates parameter values in `[param_lo, param_hi]` where a fixed point's
/// multiplier crosses `±1` and runs the matching checker at each.
///
/// Branches are continued between grid steps by nearest fixed point. Checks
/// found at the same `(x*, α*)` are reported once, preferring a confirmed one.
pub fn scan_bifurcations(
    family: MapFamily,
    param_lo: f64,
    param_hi: f64,
    step: f64,
) -> Result<Vec<BifurcationCheck>> {
    if !(param_lo < param_hi) || !(step > 0.0) {
        return Err(Error::InvalidArgument(
            "scan needs param_lo < param_hi and step > 0",
        ));
    }
    let base = Map1D::new(family, param_lo);
    let steps = libm::floor((param_hi - param_lo) / step + 1e-9) as usize;
    let grid: Vec<f64> = (0..=steps).map(|k| param_lo + k as f64 * step).collect();

    let mut checks: Vec<BifurcationCheck> = Vec::new();
    let mut previous = branch_points(&base.with_param(grid[0]));
    for pair in grid.windows(2) {
        let current = branch_points(&base.with_param(pair[1]));
        for &p in &previous {
            let Some(q) = nearest(&current, p.x) else {
                continue;
            };
            if !crosses(p.margin, q.margin) {
                continue;
            }
            let (x_star, alpha_star) = refine(&base, pair[0], pair[1], p);
            let map = base.with_param(alpha_star);
            let check = if map.jet_unchecked(x_star).dx > 0.0 {
                check_pitchfork(&map, x_star, alpha_star)?
            } else {
                check_period_doubling(&map, x_star, alpha_star)?
            };
            push_unique(&mut checks, check);
        }
        previous = current;
    }
    Ok(checks)
}

fn push_unique(checks: &mut Vec<BifurcationCheck>, check: BifurcationCheck) {
    let same = checks.iter_mut().find(|c| {
        (c.alpha_star - check.alpha_star).abs() <= 10.0 * CONDITION_TOLERANCE
            && (c.x_star - check.x_star).abs() <= 1e-3
    });
    match same {
        Some(existing) => {
            if !existing.is_confirmed() && check.is_confirmed() {
                *existing = check;
            }
        }
        None => checks.push(check),
    }
}

/// A long-run point of some orbit, with the smallest `p` for which it is
/// `p`-periodic (if any within the search range).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct AttractorPoint {
    pub x: f64,
    pub period: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct BifurcationDiagram {
    pub family: MapFamily,
    pub param_grid: Vec<f64>,
    /// Sorted, deduplicated attractor points per parameter value.
    pub attractors: Vec<Vec<AttractorPoint>>,
}

impl BifurcationDiagram {
    /// Number of distinct attractor points at grid index `i`.
    pub fn point_count(&self, i: usize) -> usize {
        self.attractors[i].len()
    }

    /// Longest period among the attractor points at grid index `i`.
    pub fn asymptotic_period(&self, i: usize) -> Option<usize> {
        self.attractors[i].iter().map(|a| a.period).max().flatten()
    }
}

/// Iterate every initialisation `burn_in` times, then record the next `keep`
/// iterates, merging points closer than [`DIAGRAM_MERGE`].
pub fn bifurcation_diagram(
    family: MapFamily,
    param_grid: &[f64],
    inits: &[f64],
    burn_in: usize,
    keep: usize,
) -> Result<BifurcationDiagram> {
    if keep == 0 {
        return Err(Error::InvalidArgument("keep must be at least 1"));
    }
    if let Some(&bad) = inits.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::Domain {
            what: "initial state",
            value: bad,
        });
    }
    let attractors = param_grid
        .iter()
        .map(|&alpha| diagram_column(&Map1D::new(family, alpha), inits, burn_in, keep))
        .collect();
    Ok(BifurcationDiagram {
        family,
        param_grid: param_grid.to_vec(),
        attractors,
    })
}

/// One column of a bifurcation diagram.
pub fn diagram_column(
    map: &Map1D,
    inits: &[f64],
    burn_in: usize,
    keep: usize,
) -> Vec<AttractorPoint> {
    let mut xs: Vec<f64> = Vec::new();
    for &x0 in inits {
        let mut x = map.iterate(x0, burn_in);
        for _ in 0..keep {
            xs.push(x);
            x = map.apply(x);
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|b, a| (*b - *a).abs() < DIAGRAM_MERGE);
    let max_period = keep.max(MAX_CYCLE_PERIOD);
    xs.into_iter()
        .map(|x| {
            let mut y = x;
            let period = (1..=max_period).find(|_| {
                y = map.apply(y);
                (y - x).abs() <= DIAGRAM_PERIOD_TOLERANCE
            });
            AttractorPoint { x, period }
        })
        .collect()
}
