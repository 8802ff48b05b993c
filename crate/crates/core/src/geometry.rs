//! Fan-beam parameterisation of inward-pointing boundary vectors and the
//! straight-line flow through the unit disk.

use crate::cmath;
use alloc::format;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;
const ASIN_CLAMP: f64 = 1e-12;

/// Entry angle `β` and inward direction `α ∈ [-π/2, π/2]` of a chord.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanBeamPoint {
    pub beta: f64,
    pub alpha: f64,
}

/// A point of the unit sphere bundle: position and direction angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub z: Complex64,
    pub theta: f64,
}

pub fn wrap_angle(a: f64) -> f64 {
    let r = a - TWO_PI * libm::floor(a / TWO_PI);
    if r >= TWO_PI {
        0.0
    } else {
        r
    }
}

impl FanBeamPoint {
    pub fn new(beta: f64, alpha: f64) -> Self {
        Self { beta, alpha }
    }

    pub fn mu(&self) -> f64 {
        libm::cos(self.alpha)
    }

    /// Chord length `τ = 2 cos α`.
    pub fn tau(&self) -> f64 {
        2.0 * self.mu()
    }

    /// Direction of travel `θ = β + α + π`.
    pub fn theta(&self) -> f64 {
        self.beta + self.alpha + PI
    }

    /// `e^{iθ}` along the chord.
    pub fn direction(&self) -> Complex64 {
        cmath::polar(1.0, self.theta())
    }

    pub fn entry(&self) -> Complex64 {
        cmath::polar(1.0, self.beta)
    }

    /// Same point with `β` wrapped into `[0, 2π)`.
    pub fn normalized(&self) -> Self {
        Self { beta: wrap_angle(self.beta), alpha: self.alpha }
    }

    /// Point at arclength `t` without range checking.
    pub fn at(&self, t: f64) -> Complex64 {
        self.entry() + t * self.direction()
    }
}

/// The flow `φ_t(β, α)` on the chord starting at `e^{iβ}`.
pub fn chord_point(p: FanBeamPoint, t: f64) -> Result<PhasePoint> {
    let tau = p.tau();
    let slack = 1e-14 * tau.max(1.0);
    if !(t >= -slack && t <= tau + slack) {
        return Err(Error::ChordRange { t, tau });
    }
    Ok(PhasePoint { z: p.at(t), theta: p.theta() })
}

/// `d` restricted to the chord: `(2 cos α) t − t²`.
pub fn d_along(p: FanBeamPoint, t: f64) -> f64 {
    (2.0 * p.mu() - t) * t
}

/// `π_F`: the fan-beam coordinates of the chord through `q`.
pub fn fanbeam_project(q: PhasePoint) -> Result<FanBeamPoint> {
    if q.z.norm() > 1.0 + ASIN_CLAMP {
        return Err(Error::Geometry(format!("|z| = {} exceeds 1", q.z.norm())));
    }
    let e = cmath::polar(1.0, -q.theta);
    // (z e^{-iθ} - z̄ e^{iθ}) / 2i = Im(z e^{-iθ})
    let mut s = (q.z * e).im;
    if s.abs() > 1.0 {
        if s.abs() > 1.0 + ASIN_CLAMP {
            return Err(Error::Geometry(format!("sin α = {s} outside [-1, 1]")));
        }
        s = s.signum();
    }
    let alpha = libm::asin(s);
    Ok(FanBeamPoint { beta: wrap_angle(q.theta - PI - alpha), alpha })
}

/// Arclength at which the chord of `fanbeam_project(q)` reaches `q.z`.
pub fn arclength_to(q: PhasePoint, p: FanBeamPoint) -> f64 {
    ((q.z - p.entry()) * p.direction().conj()).re
}

/// Antipodal scattering relation `(β, α) ↦ (β + π + 2α, −α)`.
pub fn scatter_antipodal(p: FanBeamPoint) -> FanBeamPoint {
    FanBeamPoint { beta: wrap_angle(p.beta + PI + 2.0 * p.alpha), alpha: -p.alpha }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn chord_points() {
        let p = FanBeamPoint::new(0.4, -0.3);
        let q = chord_point(p, 0.0).unwrap();
        assert!(close(q.z, cmath::polar(1.0, 0.4), 1e-15));
        let c = chord_point(FanBeamPoint::new(0.0, 0.0), 1.0).unwrap();
        assert!(c.z.norm() < 1e-15);
        assert!((c.theta - PI).abs() < 1e-15);
        let e = chord_point(FanBeamPoint::new(0.0, 0.0), 2.0).unwrap();
        assert!(close(e.z, Complex64::new(-1.0, 0.0), 1e-15));
        assert!(matches!(chord_point(p, 5.0), Err(Error::ChordRange { .. })));
    }

    #[test]
    fn d_along_values() {
        let p = FanBeamPoint::new(1.0, PI / 3.0);
        assert_eq!(d_along(p, 0.0), 0.0);
        assert!((d_along(FanBeamPoint::new(0.0, 0.0), 1.0) - 1.0).abs() < 1e-15);
        assert!((d_along(p, p.mu()) - 0.25).abs() < 1e-15);
        for i in 0..=10 {
            let t = p.tau() * i as f64 / 10.0;
            let z = chord_point(p, t).unwrap().z;
            assert!((d_along(p, t) - (1.0 - z.norm_sqr())).abs() < 1e-14);
        }
    }

    #[test]
    fn projection_examples() {
        let f = fanbeam_project(PhasePoint { z: Complex64::new(0.0, 0.0), theta: 2.5 }).unwrap();
        assert!((f.beta - wrap_angle(2.5 - PI)).abs() < 1e-15 && f.alpha == 0.0);
        let (b0, a0) = (1.1, 0.6);
        let q = PhasePoint { z: cmath::polar(1.0, b0), theta: b0 + PI + a0 };
        let f = fanbeam_project(q).unwrap();
        assert!((f.beta - b0).abs() < 1e-12 && (f.alpha - a0).abs() < 1e-12);
        let bad = PhasePoint { z: Complex64::new(1.5, 0.0), theta: 0.0 };
        assert!(matches!(fanbeam_project(bad), Err(Error::Geometry(_))));
    }

    #[test]
    fn scattering_examples() {
        let s = scatter_antipodal(FanBeamPoint::new(0.0, 0.0));
        assert!((s.beta - PI).abs() < 1e-15 && s.alpha == 0.0);
        let s = scatter_antipodal(FanBeamPoint::new(0.0, PI / 4.0));
        assert!((s.beta - 1.5 * PI).abs() < 1e-15 && (s.alpha + PI / 4.0).abs() < 1e-15);
        let p = FanBeamPoint::new(5.0, -1.2);
        let back = scatter_antipodal(scatter_antipodal(p));
        assert!((back.beta - p.beta).abs() < 1e-12 && back.alpha == p.alpha);
    }

    #[test]
    fn scattering_reverses_chord() {
        let p = FanBeamPoint::new(0.3, 0.9);
        let s = scatter_antipodal(p);
        let exit = chord_point(p, p.tau()).unwrap();
        assert!(close(s.entry(), exit.z, 1e-14));
        assert!(close(s.direction(), -p.direction(), 1e-14));
    }
}
