//! Stochastic layer: step-law sampling, the one-arc walk driven by the
//! additive parameter `omega_n`, the alternating two-pencil walk, and a
//! deterministic (optionally parallel) ensemble runner.

mod ensemble;
mod law;

pub use ensemble::{
    run_ensemble, run_ensemble_serial, trajectory_rng, EnsembleConfig, TrajectoryRecord,
    VarsigmaInit, WalkKind, MAX_ENSEMBLE_RECORDS,
};
#[cfg(feature = "parallel")]
pub use ensemble::run_ensemble_parallel;
pub use law::{CdfTable, StepLaw, StepSample, TRIANGULAR_MODE};

use rand::distr::Open01;
use rand::Rng;
use std::f64::consts::FRAC_PI_2;

use crate::disk::{
    from_bipolar, from_bipolar_saturating, to_bipolar, BipolarPoint, DiskPoint, Pole,
    SATURATION_TAU,
};
use crate::error::{Error, Result};
use crate::mobius::GroupElement;

/// A Cartesian position plus a flag marking that the true point was closer
/// to a pole than doubles can represent; tau-domain bookkeeping stays exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionSample {
    pub point: DiskPoint,
    pub saturated: bool,
}

/// Running state of the one-arc walk: after `n` steps the start point has
/// been moved by the group element with parameter `omega = gamma_1 + ... + gamma_n`.
#[derive(Debug, Clone, Copy)]
pub struct WalkState {
    n: u64,
    omega: f64,
    pole: Pole,
    z0: DiskPoint,
    varsigma0: f64,
    tau0: f64,
}

impl WalkState {
    /// Start at `z0`, which must not coincide with a pole.
    pub fn new(z0: DiskPoint, pole: Pole) -> Result<Self> {
        let b = to_bipolar(z0, pole)?;
        Ok(Self {
            n: 0,
            omega: 0.0,
            pole,
            z0,
            varsigma0: b.varsigma(),
            tau0: b.tau(),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn pole(&self) -> Pole {
        self.pole
    }

    pub fn z0(&self) -> DiskPoint {
        self.z0
    }

    pub fn varsigma(&self) -> f64 {
        self.varsigma0
    }

    /// Current tau coordinate, bookkept additively.
    pub fn tau(&self) -> f64 {
        self.tau0 + self.omega
    }

    /// Advance one step: `omega += gamma`.
    pub fn step(&mut self, gamma: f64) {
        self.omega += gamma;
        self.n += 1;
    }

    /// Current Cartesian position. Inside the saturation window the group
    /// element is applied to the start point directly; past it the result is
    /// the attracting pole plus a flag.
    pub fn position(&self) -> PositionSample {
        position_from(self.pole, self.z0, self.tau0, self.varsigma0, self.omega)
    }
}

fn position_from(
    pole: Pole,
    z0: DiskPoint,
    tau0: f64,
    varsigma0: f64,
    omega: f64,
) -> PositionSample {
    let tau = tau0 + omega;
    if tau.abs() <= SATURATION_TAU && tau0.abs() <= SATURATION_TAU {
        PositionSample {
            point: GroupElement::from_gamma(omega, pole).apply(z0),
            saturated: false,
        }
    } else {
        let b = BipolarPoint::new(varsigma0, tau, pole)
            .expect("walk coordinates stay in the chart's domain");
        let (point, saturated) = from_bipolar_saturating(&b);
        PositionSample { point, saturated }
    }
}

/// One transition of the two-pencil walk, after the coin has been resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZStep {
    /// Coin 1: translate along the current arc by `gamma`.
    Translate { x: f64, gamma: f64 },
    /// Coin 0: jump to the arc labeled by a fresh angular coordinate.
    Redraw { varsigma: f64 },
}

/// Running state of the two-pencil walk. The angular coordinate changes only
/// on redraw steps; the additive coordinate changes only on translate steps.
#[derive(Debug, Clone, Copy)]
pub struct ZWalkState {
    n: u64,
    s: u64,
    omega_tilde: f64,
    varsigma: f64,
    tau0: f64,
    p: f64,
    pole: Pole,
}

impl ZWalkState {
    /// `p` is the probability of a translate step, in (0, 1]. `p = 1` is the
    /// degenerate case that never redraws and reproduces the one-arc walk on
    /// the same increment stream.
    pub fn new(p: f64, varsigma0: f64, tau0: f64, pole: Pole) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Config(format!("p must lie in (0, 1], got {p}")));
        }
        if !varsigma0.is_finite() || varsigma0.abs() > FRAC_PI_2 {
            return Err(Error::Config(format!(
                "varsigma0 must lie in [-pi/2, pi/2], got {varsigma0}"
            )));
        }
        if !tau0.is_finite() {
            return Err(Error::Config(format!("tau0 must be finite, got {tau0}")));
        }
        Ok(Self {
            n: 0,
            s: 0,
            omega_tilde: 0.0,
            varsigma: varsigma0,
            tau0,
            p,
            pole,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of translate steps so far.
    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn omega_tilde(&self) -> f64 {
        self.omega_tilde
    }

    pub fn varsigma(&self) -> f64 {
        self.varsigma
    }

    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    pub fn tau(&self) -> f64 {
        self.tau0 + self.omega_tilde
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn pole(&self) -> Pole {
        self.pole
    }

    /// Deterministic part of the transition; used directly by tests that
    /// force a particular coin.
    pub fn apply_step(&mut self, step: ZStep) {
        match step {
            ZStep::Translate { gamma, .. } => {
                self.omega_tilde += gamma;
                self.s += 1;
            }
            ZStep::Redraw { varsigma } => {
                self.varsigma = varsigma.clamp(-FRAC_PI_2, FRAC_PI_2);
            }
        }
        self.n += 1;
    }

    /// Draw the coin, then the one variate the outcome needs, and advance.
    /// Draw order per step: coin first (skipped when p = 1), then either a
    /// step-law sample or a fresh uniform angular coordinate.
    pub fn step_random<R: Rng + ?Sized>(&mut self, law: &StepLaw, rng: &mut R) -> ZStep {
        let translate = self.p >= 1.0 || rng.random_bool(self.p);
        let step = if translate {
            let s = law.sample(rng);
            ZStep::Translate {
                x: s.x,
                gamma: s.gamma,
            }
        } else {
            ZStep::Redraw {
                varsigma: sample_varsigma(rng),
            }
        };
        self.apply_step(step);
        step
    }

    /// Current Cartesian position from the bipolar coordinates, saturating
    /// past the representable window.
    pub fn position(&self) -> PositionSample {
        let b = BipolarPoint::new(self.varsigma, self.tau(), self.pole)
            .expect("walk coordinates stay in the chart's domain");
        let (point, saturated) = from_bipolar_saturating(&b);
        PositionSample { point, saturated }
    }

    /// The same position evaluated through the group action: apply the
    /// accumulated element to the point at `(varsigma, tau0)`. Agrees with
    /// [`Self::position`] inside the saturation window; used as the second
    /// route in consistency checks.
    pub fn position_via_group(&self) -> Result<DiskPoint> {
        let base = from_bipolar(&BipolarPoint::new(self.varsigma, self.tau0, self.pole)?)?;
        Ok(GroupElement::from_gamma(self.omega_tilde, self.pole).apply(base))
    }
}

/// Uniform draw on [-pi/2, pi/2] (open at the endpoints, so redrawn arcs
/// never degenerate to the boundary).
pub fn sample_varsigma<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    (u - 0.5) * std::f64::consts::PI
}
