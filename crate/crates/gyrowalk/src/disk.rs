//! Deterministic geometry of the Poincaré disk.
//!
//! Everything here is pure: the hyperbolic metric, Busemann functions,
//! bipolar coordinates anchored at a pair of opposite boundary poles, and
//! the Apollonian circles through those poles. No randomness.
//!
//! Bipolar coordinates `(varsigma, tau)` are the workhorse chart. A point
//! `z` of the closed disk satisfies `(z + a)/(a - z) = exp(tau + i*varsigma)`
//! where `a` is the pole; `tau` is unbounded along the circular arc through
//! `z` and the poles, while `varsigma` labels the arc itself and stays in
//! `[-pi/2, pi/2]`. Distances and Busemann functions have closed forms in
//! this chart that remain accurate for |tau| far beyond the range where a
//! Cartesian point near the boundary retains any precision, which is what
//! makes long-time walk statistics exact.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use crate::error::{Error, Result};

/// Membership tolerance for the closed unit disk.
pub const CLOSED_DISK_TOL: f64 = 1e-12;
/// Points with |z| < 1 - INTERIOR_TOL count as interior.
pub const INTERIOR_TOL: f64 = 1e-12;
/// Beyond this |tau| a Cartesian image is numerically a pole; conversions
/// saturate and raise a flag while tau-domain bookkeeping continues.
pub const SATURATION_TAU: f64 = 30.0;
/// Hard guard for `from_bipolar`: cosh overflows past ~709.
pub const OVERFLOW_TAU: f64 = 700.0;

/// A point of the closed unit disk, stored in Cartesian complex form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::from_complex(Complex64::new(re, im))
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        let modulus = z.norm();
        if !modulus.is_finite() || modulus > 1.0 + CLOSED_DISK_TOL {
            return Err(Error::OutsideDisk { modulus });
        }
        Ok(Self(z))
    }

    pub fn origin() -> Self {
        Self(Complex64::new(0.0, 0.0))
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }

    pub fn to_complex(&self) -> Complex64 {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Strictly inside the disk, away from the boundary by more than the
    /// interior tolerance.
    pub fn interior(&self) -> bool {
        self.0.norm() < 1.0 - INTERIOR_TOL
    }
}

/// A pair of opposite boundary points `a` and `-a` anchoring the bipolar
/// chart and the group of gyrotranslations that fix them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    alpha: Complex64,
}

impl Pole {
    pub fn new(alpha: Complex64) -> Result<Self> {
        let modulus = alpha.norm();
        if !(modulus.is_finite() && (modulus - 1.0).abs() <= CLOSED_DISK_TOL) {
            return Err(Error::NotUnitModulus { modulus });
        }
        Ok(Self { alpha })
    }

    /// Pole at angle `theta` on the unit circle.
    pub fn from_angle(theta: f64) -> Self {
        Self {
            alpha: Complex64::new(theta.cos(), theta.sin()),
        }
    }

    /// The pole at `+1`.
    pub fn unit() -> Self {
        Self {
            alpha: Complex64::new(1.0, 0.0),
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn neg_alpha(&self) -> Complex64 {
        -self.alpha
    }

    /// The attracting endpoint for the given sign, as a disk point.
    pub fn endpoint(&self, sign: f64) -> DiskPoint {
        DiskPoint(if sign >= 0.0 { self.alpha } else { -self.alpha })
    }
}

/// An interior (or boundary) point in bipolar coordinates relative to a pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipolarPoint {
    varsigma: f64,
    tau: f64,
    pole: Pole,
}

impl BipolarPoint {
    pub fn new(varsigma: f64, tau: f64, pole: Pole) -> Result<Self> {
        if !tau.is_finite() {
            return Err(Error::Config(format!("tau must be finite, got {tau}")));
        }
        if !varsigma.is_finite() || varsigma.abs() > FRAC_PI_2 + 1e-12 {
            return Err(Error::Config(format!(
                "varsigma must lie in [-pi/2, pi/2], got {varsigma}"
            )));
        }
        Ok(Self {
            varsigma: varsigma.clamp(-FRAC_PI_2, FRAC_PI_2),
            tau,
            pole,
        })
    }

    pub fn varsigma(&self) -> f64 {
        self.varsigma
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn pole(&self) -> Pole {
        self.pole
    }

    /// The raw angular coordinate `sigma = sign(varsigma)*pi - varsigma`,
    /// with `sign(0) = +1` so the diameter through the poles maps to `pi`.
    pub fn sigma(&self) -> f64 {
        if self.varsigma >= 0.0 {
            PI - self.varsigma
        } else {
            -PI - self.varsigma
        }
    }

    fn is_boundary(&self) -> bool {
        self.varsigma.abs() >= FRAC_PI_2
    }

    /// ln(cosh(tau) + cos(varsigma)), stable for any |tau|.
    fn ln_cosh_plus_cos(&self) -> f64 {
        let t = self.tau.abs();
        let c = self.varsigma.cos();
        if t <= 1.0 {
            (self.tau.cosh() + c).ln()
        } else {
            t - LN_2 + ((-2.0 * t).exp() + 2.0 * c * (-t).exp()).ln_1p()
        }
    }

    /// Busemann function at the pole `+a`, evaluated here. Closed form
    /// `-tau - ln(cos(varsigma))`; exact in the tau domain at any magnitude.
    pub fn busemann_plus(&self) -> f64 {
        if self.is_boundary() {
            return f64::INFINITY;
        }
        -self.tau - self.varsigma.cos().ln()
    }

    /// Busemann function at the pole `-a`: `tau - ln(cos(varsigma))`.
    pub fn busemann_minus(&self) -> f64 {
        if self.is_boundary() {
            return f64::INFINITY;
        }
        self.tau - self.varsigma.cos().ln()
    }

    /// Hyperbolic distance to the origin, computed in the log domain so it
    /// stays exact when the Cartesian image would round to a pole.
    pub fn dist_origin(&self) -> f64 {
        if self.is_boundary() {
            return f64::INFINITY;
        }
        let c = self.varsigma.cos();
        // ln(1 - |z|^2) = ln(2 cos(varsigma)) - ln(cosh(tau) + cos(varsigma))
        let ln_a = (2.0 * c).ln() - self.ln_cosh_plus_cos();
        let a = ln_a.exp(); // may underflow to 0 for huge |tau|; handled below
        let z_abs = (1.0 - a).max(0.0).sqrt();
        2.0 * (1.0 + z_abs).ln() - ln_a
    }

    /// ln |z - a| in the tau domain: `(-tau + ln 2 - ln(cosh tau + cos varsigma)) / 2`.
    pub fn ln_abs_to_plus(&self) -> f64 {
        0.5 * (-self.tau + LN_2 - self.ln_cosh_plus_cos())
    }

    /// ln |z + a|, the mirror of [`Self::ln_abs_to_plus`].
    pub fn ln_abs_to_minus(&self) -> f64 {
        0.5 * (self.tau + LN_2 - self.ln_cosh_plus_cos())
    }

    /// ln |z - sign*a|.
    pub fn ln_abs_to(&self, sign: f64) -> f64 {
        if sign >= 0.0 {
            self.ln_abs_to_plus()
        } else {
            self.ln_abs_to_minus()
        }
    }
}

/// Poincaré distance `log((1+rho)/(1-rho))` with `rho = |(z-w)/(1 - conj(z) w)|`.
///
/// Both points must be interior; the distance to a boundary point is infinite
/// and reported as a domain error.
pub fn poincare_distance(z: DiskPoint, w: DiskPoint) -> Result<f64> {
    if !z.interior() || !w.interior() {
        return Err(Error::BoundaryPoint);
    }
    let zc = z.to_complex();
    let wc = w.to_complex();
    // squared-norm ratio keeps the computation bit-symmetric in (z, w)
    let num = (zc - wc).norm_sqr();
    let den = (Complex64::new(1.0, 0.0) - zc.conj() * wc).norm_sqr();
    let rho = (num / den).sqrt();
    Ok(2.0 * rho.atanh())
}

/// Busemann function `B_xi(z) = -log((1 - |z|^2) / |xi - z|^2)` for a
/// boundary direction `xi` and an interior point `z`.
pub fn busemann(xi: Complex64, z: DiskPoint) -> Result<f64> {
    let modulus = xi.norm();
    if !(modulus.is_finite() && (modulus - 1.0).abs() <= CLOSED_DISK_TOL) {
        return Err(Error::NotUnitModulus { modulus });
    }
    if !z.interior() {
        return Err(Error::BoundaryPoint);
    }
    let zc = z.to_complex();
    let num = 1.0 - zc.norm_sqr();
    let den = (xi - zc).norm_sqr();
    Ok(-(num / den).ln())
}

/// Bipolar coordinates of `z`: `tau = log(|z+a|/|z-a|)` and the continuous
/// angular coordinate `varsigma = arg((z+a)/(a-z))`.
pub fn to_bipolar(z: DiskPoint, pole: Pole) -> Result<BipolarPoint> {
    let a = pole.alpha();
    let zc = z.to_complex();
    let num = zc + a;
    let den = a - zc;
    if num.norm_sqr() == 0.0 || den.norm_sqr() == 0.0 {
        return Err(Error::PoleSingularity);
    }
    let w = num / den;
    let tau = 0.5 * w.norm_sqr().ln();
    // Re(w) >= 0 on the closed disk; roundoff may nudge the angle past pi/2.
    let varsigma = w.im.atan2(w.re).clamp(-FRAC_PI_2, FRAC_PI_2);
    BipolarPoint::new(varsigma, tau, pole)
}

/// Cartesian point of a bipolar pair, via
/// `x = sinh(tau)/(cosh(tau) + cos(varsigma))`,
/// `y = sin(varsigma)/(cosh(tau) + cos(varsigma))`, rotated by the pole.
///
/// Fails with an overflow guard past |tau| = 700; callers that expect large
/// |tau| should use [`from_bipolar_saturating`].
pub fn from_bipolar(b: &BipolarPoint) -> Result<DiskPoint> {
    if b.tau().abs() > OVERFLOW_TAU {
        return Err(Error::TauOverflow { tau: b.tau() });
    }
    let (s, c) = b.varsigma().sin_cos();
    let denom = b.tau().cosh() + c;
    let x = b.tau().sinh() / denom;
    let y = s / denom;
    DiskPoint::from_complex(b.pole().alpha() * Complex64::new(x, y))
}

/// Like [`from_bipolar`], but past the saturation threshold the Cartesian
/// image is replaced by the attracting pole and flagged, rather than losing
/// precision silently.
pub fn from_bipolar_saturating(b: &BipolarPoint) -> (DiskPoint, bool) {
    if b.tau().abs() > SATURATION_TAU {
        (b.pole().endpoint(b.tau()), true)
    } else {
        let p = from_bipolar(b).expect("|tau| <= saturation threshold cannot overflow");
        (p, false)
    }
}

/// A member of the elliptic pencil: a circle through both poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApollonianCircle {
    pub center: Complex64,
    pub radius: f64,
    pub pole: Pole,
}

impl ApollonianCircle {
    pub fn contains(&self, u: Complex64, tol: f64) -> bool {
        ((u - self.center).norm() - self.radius).abs() <= tol
    }
}

/// The circle through `z` and both poles. Its center is `-i*a*c` and radius
/// `sqrt(1 + c^2)`, where `c` solves the defining equation
/// `|z + i*c*a|^2 = 1 + c^2`, i.e. `c = (1 - |z|^2) / (2 Re(i conj(z) a))`.
///
/// Degenerates to the diameter when `z` lies on the line through the poles.
pub fn orbit_circle(z: DiskPoint, pole: Pole) -> Result<ApollonianCircle> {
    let a = pole.alpha();
    let zc = z.to_complex();
    if (zc - a).norm_sqr() == 0.0 || (zc + a).norm_sqr() == 0.0 {
        return Err(Error::PoleSingularity);
    }
    let denom = 2.0 * (Complex64::i() * zc.conj() * a).re;
    if denom.abs() < 1e-12 {
        return Err(Error::DegenerateCircle);
    }
    let c = (1.0 - zc.norm_sqr()) / denom;
    Ok(ApollonianCircle {
        center: -Complex64::i() * a * c,
        radius: (1.0 + c * c).sqrt(),
        pole,
    })
}

/// Relative tolerance for orbit-circle membership.
pub const ORBIT_TOL: f64 = 1e-9;

/// Whether `u` lies on the circle through `z` and the poles, tested through
/// the circle equation: `(u+a)/(u-a) * (z-a)/(z+a)` is real. The imaginary
/// part is compared against `ORBIT_TOL` relative to the product's modulus,
/// which keeps the test meaningful when the product is large. The equation
/// also covers the degenerate diameter case.
pub fn on_orbit_circle(u: Complex64, z: DiskPoint, pole: Pole) -> Result<bool> {
    let a = pole.alpha();
    let zc = z.to_complex();
    if (u - a).norm_sqr() == 0.0
        || (u + a).norm_sqr() == 0.0
        || (zc - a).norm_sqr() == 0.0
        || (zc + a).norm_sqr() == 0.0
    {
        return Err(Error::PoleSingularity);
    }
    let r = ((u + a) / (u - a)) * ((zc - a) / (zc + a));
    Ok(r.im.abs() <= ORBIT_TOL * r.norm().max(1.0))
}
