//! Step laws for the driving sequence `x_n` on (-1, 1) and the induced
//! additive increments `gamma_n = log((1+x_n)/(1-x_n))`.

use rand::distr::Open01;
use rand::Rng;

use crate::error::{Error, Result};
use crate::mobius::gamma_from_x;

/// Mode of the asymmetric triangular density.
pub const TRIANGULAR_MODE: f64 = 0.1;
/// CDF value at the mode: (1 + mode)/2.
const TRIANGULAR_CDF_AT_MODE: f64 = 0.55;

/// One sampled step: the Möbius parameter and its additive form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSample {
    pub x: f64,
    pub gamma: f64,
}

/// Distribution of the step parameter `x_n` on (-1, 1).
///
/// Samples always lie strictly inside the open interval. Every variant
/// consumes exactly one uniform draw per sample, which keeps parallel
/// stream accounting trivial.
#[derive(Debug, Clone, PartialEq)]
pub enum StepLaw {
    /// `x` uniform on (-1, 1); the induced `gamma` is standard logistic.
    UniformX,
    /// Triangular density on (-1, 1) with mode [`TRIANGULAR_MODE`]:
    /// `(x+1)/1.1` below the mode, `(1-x)/0.9` above it.
    Triangular,
    /// Tabulated inverse CDF, linearly interpolated.
    InverseCdfTable(CdfTable),
}

impl StepLaw {
    /// Draw `x` via inverse-CDF transform of one open-interval uniform.
    pub fn sample_x<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        match self {
            StepLaw::UniformX => 2.0 * u - 1.0,
            StepLaw::Triangular => {
                if u <= TRIANGULAR_CDF_AT_MODE {
                    -1.0 + (2.0 * (1.0 + TRIANGULAR_MODE) * u).sqrt()
                } else {
                    1.0 - (2.0 * (1.0 - TRIANGULAR_MODE) * (1.0 - u)).sqrt()
                }
            }
            StepLaw::InverseCdfTable(table) => table.x_at(u),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> StepSample {
        let x = self.sample_x(rng);
        StepSample {
            x,
            gamma: gamma_from_x(x),
        }
    }

    /// Distribution function of `x`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= -1.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        match self {
            StepLaw::UniformX => 0.5 * (x + 1.0),
            StepLaw::Triangular => {
                if x <= TRIANGULAR_MODE {
                    (x + 1.0) * (x + 1.0) / (2.0 * (1.0 + TRIANGULAR_MODE))
                } else {
                    1.0 - (1.0 - x) * (1.0 - x) / (2.0 * (1.0 - TRIANGULAR_MODE))
                }
            }
            StepLaw::InverseCdfTable(table) => table.cdf(x),
        }
    }

    /// Density of `x` where one exists; tables carry none.
    pub fn density(&self, x: f64) -> Option<f64> {
        if !(-1.0..=1.0).contains(&x) {
            return Some(0.0);
        }
        match self {
            StepLaw::UniformX => Some(0.5),
            StepLaw::Triangular => Some(if x <= TRIANGULAR_MODE {
                (x + 1.0) / (1.0 + TRIANGULAR_MODE)
            } else {
                (1.0 - x) / (1.0 - TRIANGULAR_MODE)
            }),
            StepLaw::InverseCdfTable(_) => None,
        }
    }
}

/// Sorted `(u, x)` knots of an inverse CDF, covering u = 0 to u = 1.
///
/// The endpoints may sit at x = ±1 (full support), but interpolation against
/// an open-interval uniform keeps samples strictly inside (-1, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct CdfTable {
    knots: Vec<(f64, f64)>,
}

impl CdfTable {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Config("inverse-CDF table needs at least 2 knots".into()));
        }
        let n = knots.len();
        if knots[0].0 != 0.0 || knots[n - 1].0 != 1.0 {
            return Err(Error::Config("table must span u = 0 to u = 1".into()));
        }
        for w in knots.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::Config("table u-knots must be strictly increasing".into()));
            }
            if w[0].1 > w[1].1 {
                return Err(Error::Config("table x-knots must be non-decreasing".into()));
            }
        }
        for (i, &(u, x)) in knots.iter().enumerate() {
            if !u.is_finite() || !x.is_finite() || x.abs() > 1.0 {
                return Err(Error::Config(format!("knot {i} out of range: ({u}, {x})")));
            }
            let inner = i > 0 && i < n - 1;
            if inner && x.abs() >= 1.0 {
                return Err(Error::Config(format!(
                    "interior knot {i} sits on the boundary x = {x}"
                )));
            }
        }
        // a ±1 endpoint must be isolated, else interpolation can return ±1
        if knots[0].1 <= -1.0 && knots[1].1 <= -1.0 {
            return Err(Error::Config("two leading knots at x = -1".into()));
        }
        if knots[n - 1].1 >= 1.0 && knots[n - 2].1 >= 1.0 {
            return Err(Error::Config("two trailing knots at x = 1".into()));
        }
        Ok(Self { knots })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    /// Piecewise-linear inverse CDF at `u` in (0, 1).
    pub fn x_at(&self, u: f64) -> f64 {
        let i = match self
            .knots
            .binary_search_by(|&(ku, _)| ku.partial_cmp(&u).unwrap())
        {
            Ok(i) => return self.knots[i].1,
            Err(i) => i,
        };
        let (u0, x0) = self.knots[i - 1];
        let (u1, x1) = self.knots[i];
        x0 + (x1 - x0) * (u - u0) / (u1 - u0)
    }

    /// CDF recovered from the table (inverse of the interpolation).
    pub fn cdf(&self, x: f64) -> f64 {
        if x < self.knots[0].1 {
            return 0.0;
        }
        if x >= self.knots[self.knots.len() - 1].1 {
            return 1.0;
        }
        for w in self.knots.windows(2) {
            let (u0, x0) = w[0];
            let (u1, x1) = w[1];
            if x < x1 {
                if x1 == x0 {
                    return u0;
                }
                return u0 + (u1 - u0) * (x - x0) / (x1 - x0);
            }
        }
        1.0
    }
}
