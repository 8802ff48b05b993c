//! Gauss rules built by Golub–Welsch, uniform angle rules, boundary inner
//! products on `∂₊SD` and exact monomial Gram integrals on the weighted disk.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::geometry::{FanBeamPoint, PhasePoint};
use crate::specfun::{beta, ln_beta};
use crate::tensorfield::PolyZZbar;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadKind {
    /// `s^a (1-s)^b` on `[0, 1]`.
    Jacobi01 { a: f64, b: f64 },
    /// `(1-x²)^{λ-1/2}` on `[-1, 1]`; `λ = γ+1` for the fan-beam α-integral.
    Gegenbauer { lambda: f64 },
    /// Unit weight on `[-1, 1]`.
    Legendre,
    /// Unit weight on `[0, 1]`, Clenshaw–Curtis nodes.
    ClenshawCurtis01,
    /// `M` equispaced points on `[0, 2π)`.
    UniformAngle { m: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: QuadKind,
    pub order: usize,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn integrate_c<F: FnMut(f64) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// The chord exponent `γ` when this is a symmetric `s^γ(1-s)^γ` rule.
    pub fn chord_gamma(&self) -> Option<f64> {
        match self.kind {
            QuadKind::Jacobi01 { a, b } if a == b => Some(a),
            _ => None,
        }
    }
}

/// Eigenvalues and squared first eigenvector components of the symmetric
/// tridiagonal matrix with diagonal `diag` and off-diagonal `off`
/// (`off[i]` couples rows `i` and `i+1`). Implicit QL with Wilkinson shifts.
fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&off[..n - 1]);
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Quadrature(format!("QL iteration did not converge at row {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok((idx.iter().map(|&i| d[i]).collect(), idx.iter().map(|&i| z[i] * z[i]).collect()))
}

/// Monic recurrence coefficients of Jacobi polynomials for
/// `(1-x)^a (1+x)^b` on `[-1, 1]`: diagonal and squared off-diagonal.
fn jacobi_recurrence(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut diag = Vec::with_capacity(n);
    let mut off2 = Vec::with_capacity(n);
    let ab = a + b;
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let dk = if k == 0 { (b - a) / (ab + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
        diag.push(dk);
        let j = kf + 1.0;
        let sj = 2.0 * j + ab;
        let bj = if k == 0 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
        } else {
            4.0 * j * (j + a) * (j + b) * (j + ab) / (sj * sj * (sj + 1.0) * (sj - 1.0))
        };
        off2.push(bj);
    }
    (diag, off2)
}

fn gauss_jacobi_pm1(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Quadrature("a Gauss rule needs at least one node".into()));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::Quadrature(format!("Jacobi exponents ({a}, {b}) must exceed -1")));
    }
    let (diag, off2) = jacobi_recurrence(n, a, b);
    let off: Vec<f64> = off2.iter().map(|&v| libm::sqrt(v)).collect();
    tridiagonal_eigen(&diag, &off)
}

/// Gauss rule for `s^a (1-s)^b` on `[0, 1]`.
pub fn jacobi01(n: usize, a: f64, b: f64) -> Result<QuadRule> {
    // s = (1+x)/2 turns (1-x)^{b}(1+x)^{a} into 2^{a+b} s^a (1-s)^b
    let (x, v) = gauss_jacobi_pm1(n, b, a)?;
    let mass = libm::exp(ln_beta(a + 1.0, b + 1.0));
    Ok(QuadRule {
        nodes: x.iter().map(|&x| 0.5 * (1.0 + x)).collect(),
        weights: v.iter().map(|&v| mass * v).collect(),
        kind: QuadKind::Jacobi01 { a, b },
        order: n,
    })
}

/// Chord rule: `s^γ (1-s)^γ` on `[0, 1]`.
pub fn jacobi_rule(n: usize, gamma: f64) -> Result<QuadRule> {
    jacobi01(n, gamma, gamma)
}

/// Gauss–Gegenbauer rule for `(1-x²)^{λ-1/2}` on `[-1, 1]`.
pub fn gegenbauer_rule(n: usize, lambda: f64) -> Result<QuadRule> {
    let e = lambda - 0.5;
    let (x, v) = gauss_jacobi_pm1(n, e, e)?;
    let mass = libm::exp((2.0 * e + 1.0) * core::f64::consts::LN_2 + ln_beta(e + 1.0, e + 1.0));
    Ok(QuadRule {
        nodes: x,
        weights: v.iter().map(|&v| mass * v).collect(),
        kind: QuadKind::Gegenbauer { lambda },
        order: n,
    })
}

/// Gauss–Legendre on `[-1, 1]`.
pub fn legendre_rule(n: usize) -> Result<QuadRule> {
    let (x, v) = gauss_jacobi_pm1(n, 0.0, 0.0)?;
    Ok(QuadRule { nodes: x, weights: v.iter().map(|&v| 2.0 * v).collect(), kind: QuadKind::Legendre, order: n })
}

/// Clenshaw–Curtis rule with `n + 1` nodes on `[0, 1]`, nodes ascending.
pub fn clenshaw_curtis01(n: usize) -> Result<QuadRule> {
    if n == 0 {
        return Err(Error::Quadrature("Clenshaw–Curtis needs n >= 1".into()));
    }
    let nf = n as f64;
    let mut nodes = Vec::with_capacity(n + 1);
    let mut weights = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let th = PI * (n - j) as f64 / nf;
        nodes.push(0.5 * (1.0 + libm::cos(th)));
        let cj = if j == 0 || j == n { 1.0 } else { 2.0 };
        let mut s = 0.0;
        for k in 1..=n / 2 {
            let bk = if 2 * k == n { 1.0 } else { 2.0 };
            s += bk / (4.0 * (k * k) as f64 - 1.0) * libm::cos(2.0 * k as f64 * th);
        }
        // weights on [-1, 1] halved for [0, 1]
        weights.push(0.5 * cj / nf * (1.0 - s));
    }
    Ok(QuadRule { nodes, weights, kind: QuadKind::ClenshawCurtis01, order: n })
}

pub fn uniform_angle(m: usize) -> Result<QuadRule> {
    if m == 0 {
        return Err(Error::Quadrature("uniform angle rule needs M >= 1".into()));
    }
    let h = 2.0 * PI / m as f64;
    Ok(QuadRule {
        nodes: (0..m).map(|i| i as f64 * h).collect(),
        weights: vec![h; m],
        kind: QuadKind::UniformAngle { m },
        order: m,
    })
}

/// `∫₀^τ f(φ_t) (2μt − t²)^γ dt` by the substitution `t = 2μs`.
pub fn chord_integrate<F>(p: FanBeamPoint, rule: &QuadRule, mut f: F) -> Result<Complex64>
where
    F: FnMut(PhasePoint) -> Complex64,
{
    let gamma =
        rule.chord_gamma().ok_or_else(|| Error::Quadrature("chord integrals need a symmetric Jacobi rule".into()))?;
    let tau = p.tau();
    let theta = p.theta();
    let mut acc = Complex64::new(0.0, 0.0);
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * f(PhasePoint { z: p.at(tau * s), theta });
    }
    Ok(acc * libm::pow(tau, 2.0 * gamma + 1.0))
}

/// How the α-direction of a boundary grid is discretised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaRule {
    /// Gauss–Gegenbauer in `x = sin α`; exact for products of fan-beam
    /// polynomials.
    GegenbauerSin,
    /// Gauss–Legendre in `α` over `[-π/2, π/2]`; for general integrands.
    LegendreAlpha,
}

/// Product grid on `∂₊SD` carrying the weights of `μ^{-2γ} dβ dα`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryGrid {
    pub gamma: f64,
    pub alpha_rule: AlphaRule,
    pub betas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub beta_weight: f64,
    pub alpha_weights: Vec<f64>,
}

impl BoundaryGrid {
    pub fn new(gamma: f64, m_beta: usize, n_alpha: usize, alpha_rule: AlphaRule) -> Result<Self> {
        let b = uniform_angle(m_beta)?;
        let (alphas, alpha_weights) = match alpha_rule {
            AlphaRule::GegenbauerSin => {
                let g = gegenbauer_rule(n_alpha, gamma + 1.0)?;
                let mut al = Vec::with_capacity(n_alpha);
                let mut wt = Vec::with_capacity(n_alpha);
                for (&x, &w) in g.nodes.iter().zip(&g.weights) {
                    let mu = libm::sqrt(1.0 - x * x);
                    al.push(libm::asin(x));
                    wt.push(w * libm::pow(mu, -4.0 * gamma - 2.0));
                }
                (al, wt)
            }
            AlphaRule::LegendreAlpha => {
                let g = legendre_rule(n_alpha)?;
                let h = 0.5 * PI;
                let al: Vec<f64> = g.nodes.iter().map(|&x| h * x).collect();
                let wt =
                    al.iter().zip(&g.weights).map(|(&a, &w)| h * w * libm::pow(libm::cos(a), -2.0 * gamma)).collect();
                (al, wt)
            }
        };
        Ok(Self { gamma, alpha_rule, betas: b.nodes, alphas, beta_weight: b.weights[0], alpha_weights })
    }

    /// Grid with Gegenbauer α nodes sized for degrees up to `n_max`.
    pub fn for_degree(gamma: f64, n_max: u32) -> Result<Self> {
        let n = n_max as usize;
        Self::new(gamma, 4 * n + 8, n + 4, AlphaRule::GegenbauerSin)
    }

    pub fn m_beta(&self) -> usize {
        self.betas.len()
    }

    pub fn n_alpha(&self) -> usize {
        self.alphas.len()
    }

    pub fn len(&self) -> usize {
        self.m_beta() * self.n_alpha()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major `(β_i, α_j)` at flat index `i * n_alpha + j`.
    pub fn point(&self, idx: usize) -> FanBeamPoint {
        let na = self.n_alpha();
        FanBeamPoint::new(self.betas[idx / na], self.alphas[idx % na])
    }

    pub fn points(&self) -> impl Iterator<Item = FanBeamPoint> + '_ {
        self.betas.iter().flat_map(move |&b| self.alphas.iter().map(move |&a| FanBeamPoint::new(b, a)))
    }

    pub fn weight(&self, idx: usize) -> f64 {
        self.beta_weight * self.alpha_weights[idx % self.n_alpha()]
    }

    /// `Σ W u v̄` over grid samples.
    pub fn inner(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        debug_assert_eq!(u.len(), self.len());
        debug_assert_eq!(v.len(), self.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, (a, b)) in u.iter().zip(v).enumerate() {
            acc += self.weight(idx) * a * b.conj();
        }
        acc
    }

    pub fn norm(&self, u: &[Complex64]) -> f64 {
        libm::sqrt(self.inner(u, u).re.max(0.0))
    }

    pub fn sample<F: FnMut(FanBeamPoint) -> Complex64>(&self, f: F) -> Vec<Complex64> {
        self.points().map(f).collect()
    }
}

/// `∫ u v̄ μ^{-2γ} dβ dα` for callables, on the given grid.
pub fn boundary_inner<U, V>(grid: &BoundaryGrid, mut u: U, mut v: V) -> Complex64
where
    U: FnMut(FanBeamPoint) -> Complex64,
    V: FnMut(FanBeamPoint) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for (idx, p) in grid.points().enumerate() {
        acc += grid.weight(idx) * u(p) * v(p).conj();
    }
    acc
}

/// `⟨z^a z̄^b, z^c z̄^d⟩` in `L²(D, d^γ dA)`.
pub fn monomial_inner(a: u32, b: u32, c: u32, d: u32, gamma: f64) -> f64 {
    if a as i64 - b as i64 != c as i64 - d as i64 {
        return 0.0;
    }
    let s = (a + b + c + d) as f64 / 2.0;
    PI * libm::exp(ln_beta(s + 1.0, gamma + 1.0))
}

/// Exact `⟨P, Q⟩` in `L²(D, d^γ dA)`, conjugate-linear in `Q`.
pub fn disk_inner_exact(p: &PolyZZbar, q: &PolyZZbar, gamma: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (&(a, b), &cp) in p.terms() {
        for (&(c, d), &cq) in q.terms() {
            let g = monomial_inner(a, b, c, d, gamma);
            if g != 0.0 {
                acc += cp * cq.conj() * g;
            }
        }
    }
    acc
}

/// `π B(n+1, γ+1) = ‖z^n‖²`.
pub fn holomorphic_norm_sq(n: u32, gamma: f64) -> f64 {
    PI * beta(n as f64 + 1.0, gamma + 1.0).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::beta;

    #[test]
    fn small_jacobi_rules() {
        let r = jacobi_rule(1, 0.0).unwrap();
        assert!((r.nodes[0] - 0.5).abs() < 1e-15 && (r.weights[0] - 1.0).abs() < 1e-15);
        let r = jacobi_rule(2, 0.0).unwrap();
        let s3 = libm::sqrt(3.0);
        assert!((r.nodes[0] - (3.0 - s3) / 6.0).abs() < 1e-15);
        assert!((r.nodes[1] - (3.0 + s3) / 6.0).abs() < 1e-15);
        assert!((r.weights[0] - 0.5).abs() < 1e-15 && (r.weights[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn jacobi_moment() {
        let r = jacobi_rule(4, 0.5).unwrap();
        let got = r.integrate(|s| s * s * s);
        let want = beta(4.5, 1.5).unwrap();
        assert!((got - want).abs() / want < 1e-13);
    }

    #[test]
    fn jacobi_exactness_across_gamma() {
        for &g in &[-0.9, -0.5, 0.0, 0.3, 0.9] {
            let n = 9;
            let r = jacobi_rule(n, g).unwrap();
            assert!(r.nodes.iter().all(|&s| s > 0.0 && s < 1.0));
            assert!(r.weights.iter().all(|&w| w > 0.0));
            for a in 0..(2 * n) {
                let got = r.integrate(|s| libm::pow(s, a as f64));
                let want = beta(a as f64 + g + 1.0, g + 1.0).unwrap();
                assert!((got - want).abs() / want < 1e-12, "γ={g} a={a}");
            }
        }
    }

    #[test]
    fn asymmetric_jacobi() {
        let r = jacobi01(6, 0.0, 0.7).unwrap();
        for a in 0..12 {
            let got = r.integrate(|s| libm::pow(s, a as f64));
            let want = beta(a as f64 + 1.0, 1.7).unwrap();
            assert!((got - want).abs() / want < 1e-12);
        }
    }

    #[test]
    fn clenshaw_curtis_polynomials() {
        let r = clenshaw_curtis01(16).unwrap();
        for a in 0..=16 {
            let got = r.integrate(|s| libm::pow(s, a as f64));
            assert!((got - 1.0 / (a as f64 + 1.0)).abs() < 1e-13, "a={a}");
        }
        assert_eq!(r.nodes[0], 0.0);
        assert!((r.nodes[16] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn boundary_constant_norm() {
        let g = BoundaryGrid::new(0.0, 8, 12, AlphaRule::LegendreAlpha).unwrap();
        let one = |_p: FanBeamPoint| Complex64::new(1.0, 0.0);
        let v = boundary_inner(&g, one, one);
        assert!((v.re - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn disk_inner_examples() {
        let one = PolyZZbar::constant(Complex64::new(1.0, 0.0));
        assert!((disk_inner_exact(&one, &one, 0.0).re - PI).abs() < 1e-14);
        let z3 = PolyZZbar::monomial(3, 0, Complex64::new(1.0, 0.0));
        let v = disk_inner_exact(&z3, &z3, 0.4).re;
        assert!((v - PI * beta(4.0, 1.4).unwrap()).abs() < 1e-14);
        let z = PolyZZbar::monomial(1, 0, Complex64::new(1.0, 0.0));
        let zb = PolyZZbar::monomial(0, 1, Complex64::new(1.0, 0.0));
        assert_eq!(disk_inner_exact(&z, &zb, 0.0), Complex64::new(0.0, 0.0));
    }
}
