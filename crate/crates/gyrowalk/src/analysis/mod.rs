//! Estimators and statistical checks for the walks' limit behavior:
//! escape rates to the boundary, uniform Euclidean convergence rates, the
//! CLT of log-distances, oscillation detection for mean-zero laws, and
//! iterated-logarithm statistics. Everything is computed from tau-domain
//! quantities, so the estimates stay exact no matter how close to the
//! boundary a long walk has drifted.

mod ks;
mod quadrature;

pub use ks::{ks_statistic, normal_cdf};
pub use quadrature::{epsilon_x, step_law_moments, Moments};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use serde::Serialize;

use crate::disk::{poincare_distance, to_bipolar, BipolarPoint, DiskPoint, Pole};
use crate::error::{Error, Result};
use crate::walk::{trajectory_rng, EnsembleConfig, StepLaw, TrajectoryRecord, WalkKind};

/// Minimum walk length for rate estimation.
const MIN_RATE_STEPS: u64 = 10_000;

/// Escape-rate estimates from the final state of a walk, against the
/// quadrature prediction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateReport {
    pub n: u64,
    /// (1/n) * Busemann function at the attracting pole.
    pub busemann_rate: f64,
    /// (1/n) * hyperbolic distance from the origin.
    pub distance_rate: f64,
    /// (1/n) * log Euclidean distance to the attracting pole.
    pub euclid_log_rate: f64,
    /// Sign of the mean increment; selects the attracting pole.
    pub epsilon_x: i8,
    /// |E(gamma)| from quadrature, scaled by the translate probability for
    /// the two-pencil walk.
    pub expected_rate: f64,
}

fn signed_epsilon(m: &Moments) -> Result<i8> {
    match epsilon_x(m) {
        0 => Err(Error::NotApplicable(
            "the step law has mean-zero increments; use oscillation_check".into(),
        )),
        e => Ok(e),
    }
}

fn rates_from_final(
    rec: &TrajectoryRecord,
    pole: Pole,
    eps: i8,
    expected_rate: f64,
) -> Result<RateReport> {
    if rec.n < MIN_RATE_STEPS {
        return Err(Error::Precondition(format!(
            "rate estimation needs n >= {MIN_RATE_STEPS}, got {}",
            rec.n
        )));
    }
    let b = BipolarPoint::new(rec.varsigma, rec.tau, pole)?;
    let n = rec.n as f64;
    Ok(RateReport {
        n: rec.n,
        busemann_rate: if eps > 0 {
            rec.busemann_plus / n
        } else {
            rec.busemann_minus / n
        },
        distance_rate: rec.dist_p / n,
        euclid_log_rate: b.ln_abs_to(eps as f64) / n,
        epsilon_x: eps,
        expected_rate,
    })
}

/// Escape rates of the one-arc walk from its recorded trajectory (the final
/// record is used). Requires a law with nonzero mean increment.
pub fn escape_rate(records: &[TrajectoryRecord], law: &StepLaw, pole: Pole) -> Result<RateReport> {
    let m = step_law_moments(law)?;
    let eps = signed_epsilon(&m)?;
    let rec = records
        .last()
        .ok_or_else(|| Error::Precondition("no records supplied".into()))?;
    rates_from_final(rec, pole, eps, m.mean_gamma.abs())
}

/// Uniform escape rate: `(1/n) log sup |U_n(z) - eps*a|` over a grid of at
/// least `grid_min` points of the closed disk with both poles `delta`-excised,
/// all grid points sharing one increment path. The supremum is evaluated in
/// the tau domain, where the n-step image of `(varsigma, tau)` is
/// `(varsigma, tau + omega_n)`.
pub fn uniform_escape_rate(
    law: &StepLaw,
    delta: f64,
    grid_min: usize,
    n: u64,
    seed: u64,
    pole: Pole,
) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Config(format!("delta must lie in (0, 1), got {delta}")));
    }
    let m = step_law_moments(law)?;
    let eps = signed_epsilon(&m)? as f64;

    let mut rng = trajectory_rng(seed, 0);
    let mut omega = 0.0;
    for _ in 0..n {
        omega += law.sample(&mut rng).gamma;
    }

    // |z - a| >= delta on the closed disk iff tau <= ln(2/delta - 1); the
    // mirror bound caps tau from below.
    let tau_delta = (2.0 / delta - 1.0).ln();
    let side = (grid_min as f64).sqrt().ceil() as usize;
    let side = side.max(2);
    let mut sup_ln = f64::NEG_INFINITY;
    for i in 0..side {
        let varsigma =
            -std::f64::consts::FRAC_PI_2 + i as f64 * std::f64::consts::PI / (side - 1) as f64;
        for j in 0..side {
            let tau = -tau_delta + j as f64 * 2.0 * tau_delta / (side - 1) as f64;
            let b = BipolarPoint::new(
                varsigma.clamp(-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
                tau + omega,
                pole,
            )?;
            sup_ln = sup_ln.max(b.ln_abs_to(eps));
        }
    }
    Ok(sup_ln / n as f64)
}

/// One row of the CLT tail table at threshold `s`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CltThreshold {
    pub s: f64,
    /// Empirical P((1/a_n) log|U_n + a| < -s) and its limit F_W(-s).
    pub emp_toward_minus: f64,
    pub expected_toward_minus: f64,
    /// Empirical P((1/a_n) log|U_n - a| < -s) and its limit 1 - F_W(s).
    pub emp_toward_plus: f64,
    pub expected_toward_plus: f64,
}

/// Distributional comparison of the scaled walk against its normal limit.
#[derive(Debug, Clone, Serialize)]
pub struct CltReport {
    pub n: u64,
    pub replicas: u64,
    /// The CLT scaling, sqrt(n).
    pub a_n: f64,
    /// Standard deviation of one increment, from quadrature.
    pub sigma_hat: f64,
    /// KS distance of omega_n / a_n against Normal(0, sigma^2).
    pub ks_statistic: f64,
    pub thresholds: Vec<CltThreshold>,
}

fn replica_omegas(law: &StepLaw, n: u64, replicas: u64, seed: u64) -> Vec<f64> {
    let one = |r: u64| -> f64 {
        let mut rng = trajectory_rng(seed, r);
        let mut omega = 0.0;
        for _ in 0..n {
            omega += law.sample(&mut rng).gamma;
        }
        omega
    };
    #[cfg(feature = "parallel")]
    {
        (0..replicas).into_par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..replicas).map(one).collect()
    }
}

/// Run `replicas` independent walks of length `n` started at the origin and
/// compare the scaled additive parameter and the two log-distance tails
/// against the normal limit with variance from quadrature.
///
/// Requires a mean-zero law: the mean must be statistically indistinguishable
/// from zero at the configured sample size.
pub fn clt_report(
    law: &StepLaw,
    n: u64,
    replicas: u64,
    thresholds: &[f64],
    seed: u64,
) -> Result<CltReport> {
    if n < 2 || replicas < 10 {
        return Err(Error::Precondition("need n >= 2 and replicas >= 10".into()));
    }
    let m = step_law_moments(law)?;
    let sigma = m.var_gamma.sqrt();
    if !(sigma > 0.0) {
        return Err(Error::Precondition("law has zero variance".into()));
    }
    let guard = 3.0 * sigma / ((n * replicas) as f64).sqrt();
    if m.mean_gamma.abs() >= guard {
        return Err(Error::Precondition(format!(
            "law mean {:.6} is not centered (guard {:.6}); the CLT statement needs E(gamma) = 0",
            m.mean_gamma, guard
        )));
    }

    let omegas = replica_omegas(law, n, replicas, seed);
    let a_n = (n as f64).sqrt();
    let scaled: Vec<f64> = omegas.iter().map(|w| w / a_n).collect();
    let ks = ks_statistic(&scaled, |x| normal_cdf(x, 0.0, sigma));

    // log-distances to the poles from the origin start, in the tau domain
    let pole = Pole::unit();
    let mut rows = Vec::with_capacity(thresholds.len());
    for &s in thresholds {
        if !(s > 0.0) {
            return Err(Error::Config(format!("thresholds must be positive, got {s}")));
        }
        let mut hit_minus = 0u64;
        let mut hit_plus = 0u64;
        for &w in &omegas {
            let b = BipolarPoint::new(0.0, w, pole)?;
            if b.ln_abs_to_minus() / a_n < -s {
                hit_minus += 1;
            }
            if b.ln_abs_to_plus() / a_n < -s {
                hit_plus += 1;
            }
        }
        let fw_neg = normal_cdf(-s, 0.0, sigma);
        rows.push(CltThreshold {
            s,
            emp_toward_minus: hit_minus as f64 / replicas as f64,
            expected_toward_minus: fw_neg,
            emp_toward_plus: hit_plus as f64 / replicas as f64,
            expected_toward_plus: 1.0 - normal_cdf(s, 0.0, sigma),
        });
    }

    Ok(CltReport {
        n,
        replicas,
        a_n,
        sigma_hat: sigma,
        ks_statistic: ks,
        thresholds: rows,
    })
}

/// Range diagnostics of the additive walk for a mean-zero law.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OscillationReport {
    pub n: u64,
    pub max_omega: f64,
    pub min_omega: f64,
    /// Pass threshold; both extremes must clear it in magnitude.
    pub threshold: f64,
    /// Number of strict sign changes along the path.
    pub sign_changes: u64,
    pub straddles: bool,
}

/// Track the extremes of the additive walk over `n` steps. The default pass
/// threshold is `0.2 * sigma * sqrt(n)`. Only applicable to mean-zero laws;
/// drifting laws escape one-sidedly and belong to [`escape_rate`].
pub fn oscillation_check(
    law: &StepLaw,
    n: u64,
    threshold: Option<f64>,
    seed: u64,
) -> Result<OscillationReport> {
    let m = step_law_moments(law)?;
    if epsilon_x(&m) != 0 {
        return Err(Error::NotApplicable(format!(
            "law drifts (E(gamma) = {:.6}); use escape_rate",
            m.mean_gamma
        )));
    }
    let sigma = m.var_gamma.sqrt();
    let threshold = threshold.unwrap_or(0.2 * sigma * (n as f64).sqrt());

    let mut rng = trajectory_rng(seed, 0);
    let mut omega = 0.0f64;
    let mut max_omega = 0.0f64;
    let mut min_omega = 0.0f64;
    let mut sign_changes = 0u64;
    let mut last_sign = 0i8;
    for _ in 0..n {
        omega += law.sample(&mut rng).gamma;
        max_omega = max_omega.max(omega);
        min_omega = min_omega.min(omega);
        let sign = if omega > 0.0 {
            1
        } else if omega < 0.0 {
            -1
        } else {
            0
        };
        if sign != 0 {
            if last_sign != 0 && sign != last_sign {
                sign_changes += 1;
            }
            last_sign = sign;
        }
    }
    Ok(OscillationReport {
        n,
        max_omega,
        min_omega,
        threshold,
        sign_changes,
        straddles: max_omega > threshold && min_omega < -threshold,
    })
}

/// Normalizer for the iterated-logarithm statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LilNormalizer {
    /// sqrt(2 n log log n); the classical scaling, acceptance default.
    Standard,
    /// sqrt(2 pi n log log n); reported alongside for comparison.
    WithPi,
}

impl LilNormalizer {
    pub fn value(&self, n: u64) -> f64 {
        let n = n as f64;
        let core = 2.0 * n * n.ln().ln();
        match self {
            LilNormalizer::Standard => core.sqrt(),
            LilNormalizer::WithPi => (std::f64::consts::PI * core).sqrt(),
        }
    }
}

/// Running-sup statistics at one checkpoint. The `sup_*` fields carry the
/// supremum-to-date of statistic/normalizer; the `raw_*` fields carry the
/// statistic at the checkpoint itself.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LilCheckpoint {
    pub n: u64,
    pub sup_busemann_plus: f64,
    pub sup_busemann_minus: f64,
    pub sup_dist: f64,
    pub raw_busemann_plus: f64,
    pub raw_busemann_minus: f64,
    pub raw_dist: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LilReport {
    pub normalizer: LilNormalizer,
    /// sqrt(E gamma^2) from quadrature.
    pub sigma: f64,
    /// Hyperbolic distance of the start point from the origin; the exact
    /// agreement band between the three statistics is twice this over the
    /// normalizer.
    pub dist_origin_z0: f64,
    pub checkpoints: Vec<LilCheckpoint>,
}

/// Normalized running sups start here; the normalizer needs log log n > 0,
/// and the first few steps would otherwise dominate the sup with pre-asymptotic
/// noise.
const LIL_MIN_N: u64 = 16;

/// Iterated-logarithm scan over a caller-supplied increment stream. Exposed
/// for deterministic diagnostics; [`lil_report`] wires in a seeded law.
pub fn lil_scan(
    gammas: impl Iterator<Item = f64>,
    n_max: u64,
    z0: DiskPoint,
    pole: Pole,
    normalizer: LilNormalizer,
    sigma: f64,
) -> Result<LilReport> {
    if n_max < LIL_MIN_N {
        return Err(Error::Precondition(format!("n_max must be >= {LIL_MIN_N}")));
    }
    let b0 = to_bipolar(z0, pole)?;
    let d0 = if z0.interior() {
        poincare_distance(DiskPoint::origin(), z0)?
    } else {
        f64::INFINITY
    };
    let tau0 = b0.tau();
    let ln_cos = b0.varsigma().cos().ln();

    let mut checkpoints = Vec::new();
    let mut next_checkpoint = 16u64.min(n_max);
    let mut sup_plus = f64::NEG_INFINITY;
    let mut sup_minus = f64::NEG_INFINITY;
    let mut sup_dist = f64::NEG_INFINITY;

    let mut omega = 0.0f64;
    let mut n = 0u64;
    for gamma in gammas {
        n += 1;
        if n > n_max {
            break;
        }
        omega += gamma;
        let tau = tau0 + omega;
        let b_plus = -tau - ln_cos;
        let b_minus = tau - ln_cos;
        let dist = BipolarPoint::new(b0.varsigma(), tau, pole)?.dist_origin();
        if n >= LIL_MIN_N {
            let norm = normalizer.value(n);
            sup_plus = sup_plus.max(b_plus / norm);
            sup_minus = sup_minus.max(b_minus / norm);
            sup_dist = sup_dist.max(dist / norm);
        }
        if n == next_checkpoint || n == n_max {
            let norm = normalizer.value(n);
            checkpoints.push(LilCheckpoint {
                n,
                sup_busemann_plus: sup_plus,
                sup_busemann_minus: sup_minus,
                sup_dist,
                raw_busemann_plus: b_plus / norm,
                raw_busemann_minus: b_minus / norm,
                raw_dist: dist / norm,
            });
            while next_checkpoint <= n {
                next_checkpoint = next_checkpoint.saturating_mul(2);
            }
            if n == n_max {
                break;
            }
        }
    }
    if n < n_max {
        return Err(Error::Precondition(format!(
            "increment stream ended at {n} of {n_max} steps"
        )));
    }
    Ok(LilReport {
        normalizer,
        sigma,
        dist_origin_z0: d0,
        checkpoints,
    })
}

/// Running sups of the three distance statistics against the chosen
/// normalizer, sampled at geometric checkpoints. Requires a mean-zero law
/// with positive variance.
pub fn lil_report(
    law: &StepLaw,
    n_max: u64,
    normalizer: LilNormalizer,
    z0: DiskPoint,
    pole: Pole,
    seed: u64,
) -> Result<LilReport> {
    let m = step_law_moments(law)?;
    if epsilon_x(&m) != 0 {
        return Err(Error::Precondition(format!(
            "iterated-logarithm statistics need a mean-zero law; mean = {:.6}",
            m.mean_gamma
        )));
    }
    if !(m.var_gamma > 0.0) {
        return Err(Error::Precondition("law has zero variance".into()));
    }
    let mut rng = trajectory_rng(seed, 0);
    let law = law.clone();
    let gammas = std::iter::from_fn(move || Some(law.sample(&mut rng).gamma));
    lil_scan(gammas, n_max, z0, pole, normalizer, m.var_gamma.sqrt())
}

/// Escape rates of the two-pencil walk per its configuration; the expected
/// rate picks up the translate probability `p`.
pub fn z_rate_report(cfg: &EnsembleConfig) -> Result<RateReport> {
    let m = step_law_moments(&cfg.law)?;
    let eps = signed_epsilon(&m)?;
    let mut one = cfg.clone();
    one.record_stride = one.steps;
    let records = crate::walk::run_ensemble_serial(&one, WalkKind::Z)?;
    let rec = records
        .last()
        .ok_or_else(|| Error::Precondition("empty run".into()))?;
    rates_from_final(rec, cfg.pole, eps, cfg.p * m.mean_gamma.abs())
}
