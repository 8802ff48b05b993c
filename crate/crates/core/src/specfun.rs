//! Gamma/Beta functions, Gegenbauer polynomials and the normalised
//! polynomials `L̂_n^γ` that carry the α-dependence of the fan-beam basis.
//!
//! `L̂_n^γ(x) = C_n^{γ+1}(x) · n!(2γ+1)!/(n+2γ+1)! · K_n^{-1/2} · √(2π)` with
//! `K_n = 2^{2γ+1} n! (2γ+1)!² / ((n+γ+1)(n+2γ+1)!)` and `x! = Γ(x+1)`.
//! All such constants are assembled in log space.

use crate::cmath;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// The weight exponent `γ` together with the constants derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParam {
    gamma: f64,
    beta_gg: f64,
    poincare_c0: f64,
    audit_scale: Option<f64>,
}

impl WeightParam {
    /// Accepts any `γ > -1`; enough for forward transforms.
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= -1.0 {
            return Err(Error::Domain(format!("weight exponent {gamma} must satisfy γ > -1")));
        }
        let beta_gg = beta(gamma + 1.0, gamma + 1.0)?;
        let poincare_c0 = if gamma < 0.0 { libm::pow(2.0, -gamma) } else { 1.0 };
        Ok(Self { gamma, beta_gg, poincare_c0, audit_scale: None })
    }

    /// Requires `-1 < γ < 1`, the range where the gauge decompositions hold.
    pub fn for_decomposition(gamma: f64) -> Result<Self> {
        if !(gamma < 1.0) {
            return Err(Error::Domain(format!("weight exponent {gamma} must satisfy -1 < γ < 1 for decompositions")));
        }
        Self::new(gamma)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `B(γ+1, γ+1)`.
    pub fn beta_weight(&self) -> f64 {
        self.beta_gg
    }

    /// `C₀ = max(2^{-γ}, 1)`.
    pub fn poincare_c0(&self) -> f64 {
        self.poincare_c0
    }

    /// Squared-norm constant `c_γ` measured by the basis audit, if run.
    pub fn audit_scale(&self) -> Option<f64> {
        self.audit_scale
    }

    pub fn with_audit_scale(mut self, c: f64) -> Self {
        self.audit_scale = Some(c);
        self
    }
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && libm::floor(x) == x
}

/// Euler's Gamma function on the reals.
pub fn gamma_real(x: f64) -> Result<f64> {
    if !x.is_finite() || is_pole(x) {
        return Err(Error::Domain(format!("Gamma has a pole at {x}")));
    }
    Ok(libm::tgamma(x))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    libm::lgamma(x)
}

/// `ln x!` with `x! = Γ(x+1)`, `x > -1`.
pub fn ln_factorial(x: f64) -> f64 {
    ln_gamma(x + 1.0)
}

pub fn ln_binomial(n: u32, k: u32) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n as f64) - ln_factorial(k as f64) - ln_factorial((n - k) as f64)
}

pub fn binomial(n: u32, k: u32) -> f64 {
    if n <= 60 {
        let k = k.min(n - k);
        let mut acc = 1.0f64;
        for i in 0..k {
            acc = acc * (n - i) as f64 / (i + 1) as f64;
        }
        libm::round(acc)
    } else {
        libm::exp(ln_binomial(n, k))
    }
}

/// Beta function `B(x, y) = Γ(x)Γ(y)/Γ(x+y)`.
pub fn beta(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::Domain(format!("Beta requires positive arguments, got ({x}, {y})")));
    }
    Ok(libm::exp(ln_beta(x, y)))
}

pub fn ln_beta(x: f64, y: f64) -> f64 {
    ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)
}

/// `C_n^λ(t)` by the three-term recurrence
/// `(k+1) C_{k+1} = 2(k+λ) t C_k − (k+2λ−1) C_{k−1}`.
pub fn gegenbauer(n: u32, lambda: f64, t: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * lambda * t;
    for k in 1..n {
        let k = k as f64;
        let next = (2.0 * (k + lambda) * t * cur - (k + 2.0 * lambda - 1.0) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Evaluates `C_0^λ, …, C_N^λ` at one point.
#[derive(Debug, Clone, Copy)]
pub struct GegenbauerTable {
    pub lambda: f64,
    pub max_degree: u32,
}

impl GegenbauerTable {
    pub fn new(lambda: f64, max_degree: u32) -> Self {
        Self { lambda, max_degree }
    }

    pub fn values(&self, t: f64) -> Vec<f64> {
        let n = self.max_degree as usize;
        let mut out = Vec::with_capacity(n + 1);
        out.push(1.0);
        if n == 0 {
            return out;
        }
        out.push(2.0 * self.lambda * t);
        for k in 1..n {
            let kf = k as f64;
            let next =
                (2.0 * (kf + self.lambda) * t * out[k] - (kf + 2.0 * self.lambda - 1.0) * out[k - 1]) / (kf + 1.0);
            out.push(next);
        }
        out
    }
}

fn ln_norm_factor(n: u32, gamma: f64) -> f64 {
    let nf = n as f64;
    // ln K_n, K_n = 2^{2γ+1} n! (2γ+1)!² / ((n+γ+1)(n+2γ+1)!)
    (2.0 * gamma + 1.0) * core::f64::consts::LN_2 + ln_factorial(nf) + 2.0 * ln_factorial(2.0 * gamma + 1.0)
        - libm::log(nf + gamma + 1.0)
        - ln_factorial(nf + 2.0 * gamma + 1.0)
}

/// The factor multiplying `C_n^{γ+1}` in `L̂_n^γ`.
pub fn lhat_scale(n: u32, gamma: f64) -> f64 {
    let nf = n as f64;
    let ln = ln_factorial(nf) + ln_factorial(2.0 * gamma + 1.0)
        - ln_factorial(nf + 2.0 * gamma + 1.0)
        - 0.5 * ln_norm_factor(n, gamma)
        + 0.5 * libm::log(2.0 * PI);
    libm::exp(ln)
}

/// `L̂_n^γ(x)`.
pub fn lhat(n: u32, gamma: f64, x: f64) -> f64 {
    gegenbauer(n, gamma + 1.0, x) * lhat_scale(n, gamma)
}

/// `L̂_0^γ(x), …, L̂_N^γ(x)`.
pub fn lhat_all(max_degree: u32, gamma: f64, x: f64) -> Vec<f64> {
    let mut v = GegenbauerTable::new(gamma + 1.0, max_degree).values(x);
    for (n, c) in v.iter_mut().enumerate() {
        *c *= lhat_scale(n as u32, gamma);
    }
    v
}

/// Coefficient of `x^n` in `L̂_n^γ`.
pub fn lhat_leading(n: u32, gamma: f64) -> f64 {
    let nf = n as f64;
    let ln = nf * core::f64::consts::LN_2 + ln_factorial(2.0 * gamma + 1.0) + ln_factorial(nf + gamma)
        - ln_factorial(nf + 2.0 * gamma + 1.0)
        - ln_factorial(gamma)
        - 0.5 * ln_norm_factor(n, gamma)
        + 0.5 * libm::log(2.0 * PI);
    libm::exp(ln)
}

/// Closed form of `Σ_n w^n C_n^λ(t) (n+λ) = λ(1−w²)/(1−2wt+w²)^{λ+1}`.
///
/// The base is factored as `(1 − w e^{iϑ})(1 − w e^{−iϑ})` with `t = cos ϑ`
/// so each factor stays in the right half-plane for `|w| < 1` and the
/// principal powers compose to the analytic continuation from `w = 0`.
pub fn gegenbauer_weighted_sum(lambda: f64, w: Complex64, t: f64) -> Result<Complex64> {
    if !(w.norm() < 1.0) {
        return Err(Error::Domain(format!("|w| = {} must be < 1", w.norm())));
    }
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} outside [-1, 1]")));
    }
    let base = Complex64::new(1.0, 0.0) - 2.0 * w * t + w * w;
    if base.im == 0.0 && base.re <= 0.0 {
        return Err(Error::Domain(format!("base {base} on the branch cut")));
    }
    let vt = libm::acos(t);
    let e = Complex64::new(libm::cos(vt), libm::sin(vt));
    let one = Complex64::new(1.0, 0.0);
    let f1 = one - w * e;
    let f2 = one - w * e.conj();
    let p = -(lambda + 1.0);
    Ok(lambda * (one - w * w) * cmath::powf(f1, p) * cmath::powf(f2, p))
}
