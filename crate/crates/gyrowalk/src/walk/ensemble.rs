//! Deterministic multi-trajectory runner.
//!
//! Trajectory `t` of a run draws from a ChaCha8 stream obtained as
//! `seed_from_u64(seed)` with the stream counter set to `t`, so every
//! trajectory's randomness is a pure function of `(seed, t)`. Records are
//! emitted in `(trajectory, step)` order regardless of how the work was
//! scheduled, which makes serial and parallel runs byte-identical.
//!
//! Per-trajectory draw order: one angular draw when the start is random,
//! then per step a coin (two-pencil walk only, skipped when p = 1) followed
//! by the single variate that the step consumes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::law::StepLaw;
use super::{sample_varsigma, PositionSample, WalkState, ZWalkState};
use crate::disk::{from_bipolar, BipolarPoint, DiskPoint, Pole, OVERFLOW_TAU};
use crate::error::{Error, Result};

/// Initial angular coordinate of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VarsigmaInit {
    /// Drawn uniformly on [-pi/2, pi/2] from the trajectory's own stream.
    UniformHalfPi,
    /// Fixed value; useful for pinning the sandwich bounds at 0 and pi/2.
    Fixed(f64),
}

/// Which walk the runner drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkKind {
    U,
    Z,
}

/// Configuration of one ensemble run.
#[derive(Debug, Clone)]
pub struct EnsembleConfig {
    pub trajectories: u64,
    pub steps: u64,
    pub seed: u64,
    pub record_stride: u64,
    pub law: StepLaw,
    /// Translate probability; only read by the two-pencil walk.
    pub p: f64,
    pub tau0: f64,
    pub varsigma0: VarsigmaInit,
    pub pole: Pole,
}

impl EnsembleConfig {
    pub fn validate(&self, kind: WalkKind) -> Result<()> {
        if self.trajectories < 1 {
            return Err(Error::Config("trajectories must be >= 1".into()));
        }
        if self.steps < 1 {
            return Err(Error::Config("steps must be >= 1".into()));
        }
        if self.record_stride < 1 {
            return Err(Error::Config("record_stride must be >= 1".into()));
        }
        if !self.tau0.is_finite() || self.tau0.abs() > OVERFLOW_TAU {
            return Err(Error::Config(format!("tau0 out of range: {}", self.tau0)));
        }
        if let VarsigmaInit::Fixed(v) = self.varsigma0 {
            if !v.is_finite() || v.abs() > std::f64::consts::FRAC_PI_2 {
                return Err(Error::Config(format!(
                    "fixed varsigma0 must lie in [-pi/2, pi/2], got {v}"
                )));
            }
        }
        if kind == WalkKind::Z && !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::Config(format!("p must lie in (0, 1], got {}", self.p)));
        }
        Ok(())
    }

    fn records_per_trajectory(&self) -> u64 {
        let full = self.steps / self.record_stride;
        if self.steps.is_multiple_of(self.record_stride) {
            full
        } else {
            full + 1 // final state is recorded regardless
        }
    }
}

/// Cap on the total number of records a single run may materialize.
pub const MAX_ENSEMBLE_RECORDS: u64 = 50_000_000;

/// One recorded sample of a trajectory. `omega` is the accumulated additive
/// parameter (the translate-only sum for the two-pencil walk); `tau` and the
/// Busemann/distance columns are bookkept in the tau domain and stay exact at
/// any magnitude; `x`/`y` hold the Cartesian position or the attracting pole
/// when `saturated` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRecord {
    pub traj: u64,
    pub n: u64,
    pub omega: f64,
    pub varsigma: f64,
    pub tau: f64,
    pub x: f64,
    pub y: f64,
    pub saturated: bool,
    pub busemann_plus: f64,
    pub busemann_minus: f64,
    pub dist_p: f64,
}

/// The RNG stream for trajectory `traj` of a run seeded with `seed`.
pub fn trajectory_rng(seed: u64, traj: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(traj);
    rng
}

fn make_record(
    traj: u64,
    n: u64,
    omega: f64,
    varsigma: f64,
    tau: f64,
    position: PositionSample,
    pole: Pole,
) -> TrajectoryRecord {
    let b = BipolarPoint::new(varsigma, tau, pole)
        .expect("walk coordinates stay in the chart's domain");
    TrajectoryRecord {
        traj,
        n,
        omega,
        varsigma,
        tau,
        x: position.point.re(),
        y: position.point.im(),
        saturated: position.saturated,
        busemann_plus: b.busemann_plus(),
        busemann_minus: b.busemann_minus(),
        dist_p: b.dist_origin(),
    }
}

fn run_trajectory(cfg: &EnsembleConfig, kind: WalkKind, traj: u64) -> Result<Vec<TrajectoryRecord>> {
    let mut rng = trajectory_rng(cfg.seed, traj);
    let varsigma0 = match cfg.varsigma0 {
        VarsigmaInit::Fixed(v) => v,
        VarsigmaInit::UniformHalfPi => sample_varsigma(&mut rng),
    };
    let mut out = Vec::with_capacity(cfg.records_per_trajectory() as usize);

    match kind {
        WalkKind::U => {
            let start = BipolarPoint::new(varsigma0, cfg.tau0, cfg.pole)?;
            let z0: DiskPoint = from_bipolar(&start)?;
            let mut walk = WalkState::new(z0, cfg.pole)?;
            for n in 1..=cfg.steps {
                walk.step(cfg.law.sample(&mut rng).gamma);
                if n % cfg.record_stride == 0 || n == cfg.steps {
                    out.push(make_record(
                        traj,
                        n,
                        walk.omega(),
                        walk.varsigma(),
                        walk.tau(),
                        walk.position(),
                        cfg.pole,
                    ));
                }
            }
        }
        WalkKind::Z => {
            let mut walk = ZWalkState::new(cfg.p, varsigma0, cfg.tau0, cfg.pole)?;
            for n in 1..=cfg.steps {
                walk.step_random(&cfg.law, &mut rng);
                if n % cfg.record_stride == 0 || n == cfg.steps {
                    out.push(make_record(
                        traj,
                        n,
                        walk.omega_tilde(),
                        walk.varsigma(),
                        walk.tau(),
                        walk.position(),
                        cfg.pole,
                    ));
                }
            }
        }
    }
    Ok(out)
}

fn check_budget(cfg: &EnsembleConfig) -> Result<()> {
    let per = cfg.records_per_trajectory();
    let total = cfg.trajectories.checked_mul(per);
    match total {
        Some(t) if t <= MAX_ENSEMBLE_RECORDS => Ok(()),
        _ => Err(Error::ResourceExhausted {
            completed: 0,
            requested: cfg.trajectories,
            reason: format!(
                "run would materialize {} records (cap {MAX_ENSEMBLE_RECORDS}); raise the stride",
                total.map_or_else(|| "overflowing many".into(), |t| t.to_string()),
            ),
        }),
    }
}

/// Run every trajectory on the current thread. Output is sorted by
/// `(trajectory, step)`.
pub fn run_ensemble_serial(cfg: &EnsembleConfig, kind: WalkKind) -> Result<Vec<TrajectoryRecord>> {
    cfg.validate(kind)?;
    check_budget(cfg)?;
    let mut out = Vec::new();
    for t in 0..cfg.trajectories {
        out.extend(run_trajectory(cfg, kind, t)?);
    }
    Ok(out)
}

/// Run trajectories on the rayon pool. Stream independence makes the result
/// identical to the serial runner.
#[cfg(feature = "parallel")]
pub fn run_ensemble_parallel(cfg: &EnsembleConfig, kind: WalkKind) -> Result<Vec<TrajectoryRecord>> {
    cfg.validate(kind)?;
    check_budget(cfg)?;
    let per: Vec<Vec<TrajectoryRecord>> = (0..cfg.trajectories)
        .into_par_iter()
        .map(|t| run_trajectory(cfg, kind, t))
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

/// Run an ensemble with the configured execution backend: rayon under the
/// `parallel` feature (default), the serial runner otherwise.
pub fn run_ensemble(cfg: &EnsembleConfig, kind: WalkKind) -> Result<Vec<TrajectoryRecord>> {
    #[cfg(feature = "parallel")]
    {
        run_ensemble_parallel(cfg, kind)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_ensemble_serial(cfg, kind)
    }
}
