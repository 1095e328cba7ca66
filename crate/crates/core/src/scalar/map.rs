use core::fmt;
use core::str::FromStr;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::math::logistic;
use crate::{Error, Result};

/// The built-in map families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum MapFamily {
    /// `x ↦ 1 / (1 + exp(-2β(2x - 1)))`, the decoupled CAVI update.
    SigmoidCavi,
    /// Second iterate of [`MapFamily::SigmoidCavi`].
    SigmoidCaviSecondIterate,
    /// `x ↦ µ x (1 - x)`.
    Logistic,
    /// Second iterate of [`MapFamily::Logistic`].
    LogisticSecondIterate,
}

impl MapFamily {
    pub const ALL: [MapFamily; 4] = [
        MapFamily::SigmoidCavi,
        MapFamily::SigmoidCaviSecondIterate,
        MapFamily::Logistic,
        MapFamily::LogisticSecondIterate,
    ];

    /// The one-step family this family is built from.
    pub fn base(self) -> MapFamily {
        match self {
            MapFamily::SigmoidCavi | MapFamily::SigmoidCaviSecondIterate => MapFamily::SigmoidCavi,
            MapFamily::Logistic | MapFamily::LogisticSecondIterate => MapFamily::Logistic,
        }
    }

    pub fn is_second_iterate(self) -> bool {
        matches!(
            self,
            MapFamily::SigmoidCaviSecondIterate | MapFamily::LogisticSecondIterate
        )
    }

    /// Sigmoid families fix `1/2` for every `β`.
    pub fn is_sigmoid(self) -> bool {
        self.base() == MapFamily::SigmoidCavi
    }

    /// Short name used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            MapFamily::SigmoidCavi => "sigmoid",
            MapFamily::SigmoidCaviSecondIterate => "sigmoid2",
            MapFamily::Logistic => "logistic",
            MapFamily::LogisticSecondIterate => "logistic2",
        }
    }
}

impl fmt::Display for MapFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MapFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigmoid" => Ok(MapFamily::SigmoidCavi),
            "sigmoid2" => Ok(MapFamily::SigmoidCaviSecondIterate),
            "logistic" => Ok(MapFamily::Logistic),
            "logistic2" => Ok(MapFamily::LogisticSecondIterate),
            _ => Err(Error::InvalidArgument("unknown map family")),
        }
    }
}

/// Which partial derivative to evaluate. `alpha` is the family parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivative {
    Dx,
    Dxx,
    Dxxx,
    Dalpha,
    DalphaDx,
}

/// Value and partial derivatives of a map at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Jet {
    pub value: f64,
    pub dx: f64,
    pub dxx: f64,
    pub dxxx: f64,
    pub dalpha: f64,
    pub dalpha_dx: f64,
}

impl Jet {
    pub fn get(&self, which: Derivative) -> f64 {
        match which {
            Derivative::Dx => self.dx,
            Derivative::Dxx => self.dxx,
            Derivative::Dxxx => self.dxxx,
            Derivative::Dalpha => self.dalpha,
            Derivative::DalphaDx => self.dalpha_dx,
        }
    }

    /// Jet of `outer ∘ inner`, where `outer` was evaluated at `inner.value`.
    fn compose(outer: &Jet, inner: &Jet) -> Jet {
        let g1 = inner.dx;
        Jet {
            value: outer.value,
            dx: outer.dx * g1,
            dxx: outer.dxx * g1 * g1 + outer.dx * inner.dxx,
            dxxx: outer.dxxx * g1 * g1 * g1
                + 3.0 * outer.dxx * g1 * inner.dxx
                + outer.dx * inner.dxxx,
            dalpha: outer.dalpha + outer.dx * inner.dalpha,
            dalpha_dx: (outer.dxx * inner.dalpha + outer.dalpha_dx) * g1
                + outer.dx * inner.dalpha_dx,
        }
    }
}

/// A parametric scalar map `x ↦ f(x, param)` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Map1D {
    pub family: MapFamily,
    pub param: f64,
}

impl Map1D {
    pub const fn new(family: MapFamily, param: f64) -> Self {
        Map1D { family, param }
    }

    pub const fn sigmoid(beta: f64) -> Self {
        Map1D::new(MapFamily::SigmoidCavi, beta)
    }

    pub const fn logistic(mu: f64) -> Self {
        Map1D::new(MapFamily::Logistic, mu)
    }

    pub fn with_param(self, param: f64) -> Self {
        Map1D { param, ..self }
    }

    /// The same map family with the second-iterate flag dropped.
    pub fn base(self) -> Self {
        Map1D {
            family: self.family.base(),
            ..self
        }
    }

    /// `f(x)`; fails outside `[0, 1]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        check_domain(x)?;
        Ok(self.apply(x))
    }

    /// `f(x)` without the domain check.
    pub fn apply(&self, x: f64) -> f64 {
        let once = |x: f64| match self.family.base() {
            MapFamily::SigmoidCavi => logistic(2.0 * self.param * (2.0 * x - 1.0)),
            _ => self.param * x * (1.0 - x),
        };
        if self.family.is_second_iterate() {
            once(once(x))
        } else {
            once(x)
        }
    }

    /// `f^n(x)`.
    pub fn iterate(&self, mut x: f64, n: usize) -> f64 {
        for _ in 0..n {
            x = self.apply(x);
        }
        x
    }

    /// All closed-form partial derivatives at `x`.
    pub fn jet(&self, x: f64) -> Result<Jet> {
        check_domain(x)?;
        Ok(self.jet_unchecked(x))
    }

    pub(crate) fn jet_unchecked(&self, x: f64) -> Jet {
        let inner = base_jet(self.family.base(), self.param, x);
        if self.family.is_second_iterate() {
            let outer = base_jet(self.family.base(), self.param, inner.value);
            Jet::compose(&outer, &inner)
        } else {
            inner
        }
    }

    pub fn deriv(&self, x: f64, which: Derivative) -> Result<f64> {
        Ok(self.jet(x)?.get(which))
    }
}

fn check_domain(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "x",
            value: x,
        })
    }
}

fn base_jet(family: MapFamily, param: f64, x: f64) -> Jet {
    match family {
        MapFamily::SigmoidCavi => {
            let beta = param;
            let u = 2.0 * x - 1.0;
            let g = logistic(2.0 * beta * u);
            let s = g * (1.0 - g);
            let k = 4.0 * beta;
            let tilt = 1.0 - 2.0 * g;
            let dx = k * s;
            Jet {
                value: g,
                dx,
                dxx: k * k * s * tilt,
                dxxx: k * k * dx * (tilt * tilt - 2.0 * s),
                dalpha: 2.0 * u * s,
                dalpha_dx: 4.0 * s * (1.0 + 2.0 * beta * u * tilt),
            }
        }
        _ => {
            let mu = param;
            Jet {
                value: mu * x * (1.0 - x),
                dx: mu * (1.0 - 2.0 * x),
                dxx: -2.0 * mu,
                dxxx: 0.0,
                dalpha: x * (1.0 - x),
                dalpha_dx: 1.0 - 2.0 * x,
            }
        }
    }
}
