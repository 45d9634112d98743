//! Exact-identity self-test suite.
//!
//! Each trial draws a start point and a 200-step increment path, then checks
//! the chart and group identities the walk engine relies on, at 1e-9:
//! the tau shift and arc invariance of the bipolar chart, the Busemann
//! shifts, the cross-ratio scaling, orbit-circle membership, the distance
//! sandwich, the per-step monotone-approach equivalence, the boundary
//! half-angle law, and the group laws.
//!
//! Sampling keeps |tau| within the window where a Cartesian point still
//! resolves tau to well below the tolerance: the error of a recovered
//! coordinate grows like e^|tau| * eps, which crosses 1e-9 near |tau| = 17,
//! so increments are reflected at a |tau| <= 13 running window. The paths
//! stay far inside the saturation bound |omega| <= 30.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::disk::{
    busemann, from_bipolar, on_orbit_circle, poincare_distance, to_bipolar, BipolarPoint,
    DiskPoint, Pole,
};
use crate::mobius::{x_from_gamma, GroupElement};
use crate::walk::trajectory_rng;

const TOL: f64 = 1e-9;
const PATH_STEPS: u32 = 200;
const TAU_WINDOW: f64 = 13.0;

/// Aggregate result of one named identity check.
#[derive(Debug, Clone)]
pub struct CheckSummary {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    /// Largest deviation observed (0 for purely boolean checks that passed).
    pub worst: f64,
}

impl CheckSummary {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            failures: 0,
            worst: 0.0,
        }
    }

    fn record(&mut self, deviation: f64, tol: f64) {
        self.cases += 1;
        if !(deviation.abs() <= tol) {
            self.failures += 1;
        }
        if deviation.abs() > self.worst {
            self.worst = deviation.abs();
        }
    }

    fn record_bool(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
    }
}

/// Outcome of the whole suite.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub trials: u64,
    pub seed: u64,
    pub checks: Vec<CheckSummary>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    pub fn total_failures(&self) -> u64 {
        self.checks.iter().map(|c| c.failures).sum()
    }

    pub fn total_cases(&self) -> u64 {
        self.checks.iter().map(|c| c.cases).sum()
    }
}

struct Suite {
    tau_shift: CheckSummary,
    arc_invariance: CheckSummary,
    busemann_shift: CheckSummary,
    cross_ratio: CheckSummary,
    orbit_circle: CheckSummary,
    distance_sandwich: CheckSummary,
    monotone_approach: CheckSummary,
    boundary_half_angle: CheckSummary,
    group_commutativity: CheckSummary,
    group_homomorphism: CheckSummary,
    group_isometry: CheckSummary,
    group_fixed_points: CheckSummary,
    group_permutation: CheckSummary,
}

impl Suite {
    fn new() -> Self {
        Self {
            tau_shift: CheckSummary::new("tau-shift"),
            arc_invariance: CheckSummary::new("arc-invariance"),
            busemann_shift: CheckSummary::new("busemann-shift"),
            cross_ratio: CheckSummary::new("cross-ratio"),
            orbit_circle: CheckSummary::new("orbit-circle"),
            distance_sandwich: CheckSummary::new("distance-sandwich"),
            monotone_approach: CheckSummary::new("monotone-approach"),
            boundary_half_angle: CheckSummary::new("boundary-half-angle"),
            group_commutativity: CheckSummary::new("group-commutativity"),
            group_homomorphism: CheckSummary::new("group-homomorphism"),
            group_isometry: CheckSummary::new("group-isometry"),
            group_fixed_points: CheckSummary::new("group-fixed-points"),
            group_permutation: CheckSummary::new("group-permutation"),
        }
    }

    fn into_report(self, trials: u64, seed: u64) -> VerifyReport {
        VerifyReport {
            trials,
            seed,
            checks: vec![
                self.tau_shift,
                self.arc_invariance,
                self.busemann_shift,
                self.cross_ratio,
                self.orbit_circle,
                self.distance_sandwich,
                self.monotone_approach,
                self.boundary_half_angle,
                self.group_commutativity,
                self.group_homomorphism,
                self.group_isometry,
                self.group_fixed_points,
                self.group_permutation,
            ],
        }
    }
}

/// Signed increment, reflected so the running tau stays in the window.
fn draw_gamma<R: Rng>(rng: &mut R, tau: f64) -> f64 {
    let gamma = rng.random_range(-0.45..0.45);
    if (tau + gamma).abs() > TAU_WINDOW {
        -gamma
    } else {
        gamma
    }
}

fn interior_path_trial<R: Rng>(rng: &mut R, suite: &mut Suite) {
    let pole = Pole::from_angle(rng.random_range(-PI..PI));
    let alpha = pole.alpha();
    let varsigma0 = rng.random_range(-FRAC_PI_2 * 0.9..FRAC_PI_2 * 0.9);
    let tau0 = rng.random_range(-1.5..1.5);
    let z0 = from_bipolar(&BipolarPoint::new(varsigma0, tau0, pole).unwrap()).unwrap();
    let b0 = to_bipolar(z0, pole).unwrap();
    let d0 = poincare_distance(DiskPoint::origin(), z0).unwrap();
    let base_plus = busemann(alpha, z0).unwrap();
    let base_minus = busemann(-alpha, z0).unwrap();
    let base_ratio = (z0.to_complex() + alpha) / (z0.to_complex() - alpha);

    let mut omega = 0.0f64;
    let mut prev = z0;
    for _ in 0..PATH_STEPS {
        let gamma = draw_gamma(rng, b0.tau() + omega);
        omega += gamma;
        let here = GroupElement::from_gamma(omega, pole).apply(z0);

        // tau shift and arc invariance of the bipolar chart
        let b = to_bipolar(here, pole).unwrap();
        suite.tau_shift.record(b.tau() - (b0.tau() + omega), TOL);
        suite.arc_invariance.record(b.varsigma() - b0.varsigma(), TOL);

        // Busemann functions shift by -omega toward the pole, +omega away
        let bp = busemann(alpha, here).unwrap();
        let bm = busemann(-alpha, here).unwrap();
        suite.busemann_shift.record(bp + omega - base_plus, TOL);
        suite.busemann_shift.record(bm - omega - base_minus, TOL);

        // cross-ratio scaling: (U+a)/(U-a) = (z+a)/(z-a) * e^omega
        let lhs = (here.to_complex() + alpha) / (here.to_complex() - alpha);
        let rhs = base_ratio * omega.exp();
        suite
            .cross_ratio
            .record((lhs - rhs).norm() / rhs.norm(), TOL);

        // the whole orbit stays on the circle through z0 and the poles
        suite
            .orbit_circle
            .record_bool(on_orbit_circle(here.to_complex(), z0, pole).unwrap());

        // distance sandwich around |omega|
        let d = poincare_distance(DiskPoint::origin(), here).unwrap();
        let excess = (d - omega.abs()).abs() - d0;
        suite.distance_sandwich.record(excess.max(0.0), TOL);

        // per-step four-way equivalence, both orientations
        if gamma.abs() > 1e-12 {
            let x = x_from_gamma(gamma);
            for eps in [1.0f64, -1.0] {
                let ea = alpha * eps;
                let closer = (here.to_complex() - ea).norm() < (prev.to_complex() - ea).norm();
                let x_positive = eps * x > 0.0;
                let gamma_positive = eps * gamma > 0.0;
                let busemann_drops =
                    busemann(ea, here).unwrap() < busemann(ea, prev).unwrap();
                suite.monotone_approach.record_bool(
                    closer == x_positive
                        && x_positive == gamma_positive
                        && gamma_positive == busemann_drops,
                );
            }
        }
        prev = here;
    }
}

fn boundary_trial<R: Rng>(rng: &mut R, suite: &mut Suite) {
    let pole = Pole::from_angle(rng.random_range(-PI..PI));
    let alpha = pole.alpha();
    // boundary start away from the poles
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let theta = sign * rng.random_range(0.15..PI - 0.15);
    let z0 = DiskPoint::from_complex(alpha * Complex64::new(theta.cos(), theta.sin())).unwrap();

    let half_angles = |z: DiskPoint| -> (f64, f64) {
        let zc = z.to_complex();
        let psi_plus = (zc * (-alpha).conj()).arg().abs();
        let psi_minus = (zc * alpha.conj()).arg().abs();
        (psi_plus, psi_minus)
    };
    let (psi_plus0, psi_minus0) = half_angles(z0);
    let tan_plus0 = (psi_plus0 / 2.0).tan();
    let tan_minus0 = (psi_minus0 / 2.0).tan();

    let tau0 = to_bipolar(z0, pole).unwrap().tau();
    let mut omega = 0.0f64;
    for _ in 0..50 {
        omega += draw_gamma(rng, tau0 + omega);
        let here = GroupElement::from_gamma(omega, pole).apply(z0);
        let (psi_plus, psi_minus) = half_angles(here);
        let expect_plus = omega.exp() * tan_plus0;
        let expect_minus = (-omega).exp() * tan_minus0;
        suite
            .boundary_half_angle
            .record(((psi_plus / 2.0).tan() - expect_plus) / expect_plus, TOL);
        suite
            .boundary_half_angle
            .record(((psi_minus / 2.0).tan() - expect_minus) / expect_minus, TOL);
    }
}

fn group_trial<R: Rng>(rng: &mut R, suite: &mut Suite) {
    let pole = Pole::from_angle(rng.random_range(-PI..PI));
    let g1 = GroupElement::from_gamma(rng.random_range(-6.0..6.0), pole);
    let g2 = GroupElement::from_gamma(rng.random_range(-6.0..6.0), pole);
    let z = DiskPoint::from_complex(Complex64::from_polar(
        rng.random_range(0.0..0.7),
        rng.random_range(-PI..PI),
    ))
    .unwrap();
    let w = DiskPoint::from_complex(Complex64::from_polar(
        rng.random_range(0.0..0.7),
        rng.random_range(-PI..PI),
    ))
    .unwrap();

    // commutativity is exact real addition
    let ab = g1.compose(&g2).unwrap().gamma();
    let ba = g2.compose(&g1).unwrap().gamma();
    suite.group_commutativity.record_bool(ab == ba);

    // composed action equals sequential action
    let via_compose = g1.compose(&g2).unwrap().apply(z);
    let via_apply = g1.apply(g2.apply(z));
    suite.group_homomorphism.record(
        (via_compose.to_complex() - via_apply.to_complex()).norm(),
        1e-12,
    );

    // isometry of the action
    let before = poincare_distance(z, w).unwrap();
    let after = poincare_distance(g1.apply(z), g1.apply(w)).unwrap();
    suite.group_isometry.record(after - before, 1e-10);

    // fixed points
    for a in [pole.alpha(), pole.neg_alpha()] {
        let img = g1.apply(DiskPoint::from_complex(a).unwrap());
        suite
            .group_fixed_points
            .record((img.to_complex() - a).norm(), 1e-12);
    }

    // order independence of a longer composition
    let gammas: Vec<f64> = (0..20).map(|_| rng.random_range(-1.0..1.0)).collect();
    let fwd: f64 = gammas.iter().sum();
    let mut shuffled = gammas.clone();
    for i in (1..shuffled.len()).rev() {
        let j = rng.random_range(0..=i);
        shuffled.swap(i, j);
    }
    let rev: f64 = shuffled.iter().sum();
    suite.group_permutation.record(fwd - rev, TOL);
}

/// Run the whole identity suite: `trials` start points with one 200-step
/// path each, plus boundary and group-law sub-trials. Deterministic in
/// `(trials, seed)`.
pub fn run_identity_suite(trials: u64, seed: u64) -> VerifyReport {
    let mut suite = Suite::new();
    for t in 0..trials {
        let mut rng = trajectory_rng(seed, t);
        interior_path_trial(&mut rng, &mut suite);
        boundary_trial(&mut rng, &mut suite);
        group_trial(&mut rng, &mut suite);
    }
    suite.into_report(trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_clean() {
        let report = run_identity_suite(40, 7);
        for check in &report.checks {
            assert_eq!(
                check.failures, 0,
                "{} failed {} of {} cases (worst {:.3e})",
                check.name, check.failures, check.cases, check.worst
            );
            assert!(check.cases > 0, "{} ran no cases", check.name);
        }
        assert!(report.passed());
    }

    #[test]
    fn deterministic_in_seed() {
        let a = run_identity_suite(5, 3);
        let b = run_identity_suite(5, 3);
        for (x, y) in a.checks.iter().zip(b.checks.iter()) {
            assert_eq!(x.worst, y.worst);
            assert_eq!(x.cases, y.cases);
        }
    }
}
