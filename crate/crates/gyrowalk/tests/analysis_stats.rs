//! Statistical-layer integration checks that sit between the unit tests and
//! the acceptance gate.

use gyrowalk::analysis::{escape_rate, step_law_moments, z_rate_report, LilNormalizer};
use gyrowalk::disk::{poincare_distance, BipolarPoint, DiskPoint, Pole};
use gyrowalk::walk::{
    run_ensemble_serial, trajectory_rng, EnsembleConfig, StepLaw, VarsigmaInit, WalkKind,
    ZWalkState,
};

/// The Euclidean log-rate of the two-pencil walk is insensitive to the
/// initial tau on a shared noise stream (uniformity on compact tau0 sets).
#[test]
fn z_rate_uniform_in_tau0() {
    let pole = Pole::unit();
    let mut rates = Vec::new();
    for tau0 in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        let cfg = EnsembleConfig {
            trajectories: 1,
            steps: 100_000,
            seed: 21,
            record_stride: 100_000,
            law: StepLaw::Triangular,
            p: 0.5,
            tau0,
            varsigma0: VarsigmaInit::Fixed(0.4),
            pole,
        };
        rates.push(z_rate_report(&cfg).unwrap().euclid_log_rate);
    }
    let spread = rates.iter().cloned().fold(f64::MIN, f64::max)
        - rates.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread <= 0.005, "euclid_log_rate spread {spread} across tau0");
}

/// The distance rate deviates from |omega_n|/n by at most d_p(0, z0)/n,
/// on any finite path (exact sandwich, checked on a stochastic run).
#[test]
fn escape_rate_error_bound_is_exact() {
    let pole = Pole::unit();
    let law = StepLaw::Triangular;
    let cfg = EnsembleConfig {
        trajectories: 1,
        steps: 50_000,
        seed: 13,
        record_stride: 50_000,
        law: law.clone(),
        p: 1.0,
        tau0: 0.8,
        varsigma0: VarsigmaInit::Fixed(-0.6),
        pole,
    };
    let records = run_ensemble_serial(&cfg, WalkKind::U).unwrap();
    let rec = records.last().unwrap();
    let z0 = gyrowalk::disk::from_bipolar(
        &gyrowalk::disk::BipolarPoint::new(-0.6, 0.8, pole).unwrap(),
    )
    .unwrap();
    let d0 = poincare_distance(DiskPoint::origin(), z0).unwrap();
    let n = rec.n as f64;

    let report = escape_rate(&records, &law, pole).unwrap();
    assert!(
        (report.distance_rate - rec.omega.abs() / n).abs() <= d0 / n + 1e-12,
        "distance-rate error bound violated"
    );
}

/// Running-sup iterated-logarithm statistic of the two-pencil walk scales
/// with sigma * sqrt(p): only the translate steps feed the additive
/// coordinate, so the effective per-step variance is p * E(gamma^2).
/// The band is the same wide [0.6, 1.3] used for the one-arc statistic.
#[test]
fn z_walk_lil_scales_with_sqrt_p() {
    let pole = Pole::unit();
    let law = StepLaw::UniformX;
    let p = 0.5f64;
    let sigma = step_law_moments(&law).unwrap().var_gamma.sqrt();
    let target = sigma * p.sqrt();

    let mut walk = ZWalkState::new(p, 0.2, 0.0, pole).unwrap();
    let mut rng = trajectory_rng(7, 0);
    let mut sup = f64::NEG_INFINITY;
    let n_max = 1_000_000u64;
    for n in 1..=n_max {
        walk.step_random(&law, &mut rng);
        if n >= 16 {
            let d = BipolarPoint::new(walk.varsigma(), walk.tau(), pole)
                .unwrap()
                .dist_origin();
            sup = sup.max(d / LilNormalizer::Standard.value(n));
        }
    }
    let ratio = sup / target;
    assert!(
        (0.6..=1.3).contains(&ratio),
        "sup d/phi = {sup:.4}, sigma*sqrt(p) = {target:.4}, ratio {ratio:.4}"
    );
}

/// Busemann and distance record columns follow the additive structure:
/// consecutive records of a one-arc walk differ by exactly the omega gap.
#[test]
fn u_walk_records_shift_additively() {
    let pole = Pole::from_angle(0.7);
    let cfg = EnsembleConfig {
        trajectories: 1,
        steps: 2_000,
        seed: 5,
        record_stride: 50,
        law: StepLaw::UniformX,
        p: 1.0,
        tau0: -0.3,
        varsigma0: VarsigmaInit::Fixed(0.9),
        pole,
    };
    let records = run_ensemble_serial(&cfg, WalkKind::U).unwrap();
    for w in records.windows(2) {
        let gap = w[1].omega - w[0].omega;
        assert!((w[1].busemann_plus - w[0].busemann_plus + gap).abs() <= 1e-9);
        assert!((w[1].busemann_minus - w[0].busemann_minus - gap).abs() <= 1e-9);
        assert!((w[1].tau - w[0].tau - gap).abs() <= 1e-12);
    }
}
