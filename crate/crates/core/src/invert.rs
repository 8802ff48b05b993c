//! Reconstruction of the iterated-tt representative from data.
//!
//! Two routes for the tt parts: coefficient division by singular values
//! ([`recon_tt_svd`]) and pointwise pairing against the closed-form kernel
//! `G_{2j}^γ` ([`recon_tt_kernel`]). The scalar part (even order) and the
//! curl part `w₁` (odd order) come from the `Π₀` / `Π_⊥` blocks; the curl
//! potential `h` with `w₁ = −2i d^{−γ}∂h`, `h|∂D = 0` is solved mode by mode.

use crate::cmath;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::basis::{check_sigma, psi_raw, zernike_leading, Basis, Parity, PsiIndex, ZernikeSeries};
use crate::dataspace::{block_of, Block, SinoCoeffs};
use crate::geometry::FanBeamPoint;
use crate::quadrature::{chord_integrate, jacobi01, jacobi_rule, BoundaryGrid, QuadRule};
use crate::specfun::{beta, ln_gamma};
use crate::tensorfield::{holo_project, HoloSide, IttForm, PolyZZbar, TtCoeffs};
use crate::xray::{sino_project, SinoGrid};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Kernel evaluations are restricted to `|z| ≤ 1 − KERNEL_EPS`.
pub const KERNEL_EPS: f64 = 1e-3;

/// Below this modulus a kernel denominator factor counts as singular.
pub const KERNEL_SINGULAR: f64 = 1e-8;

/// Relative tolerance of the potential solver residual check.
pub const POTENTIAL_TOL: f64 = 1e-6;

fn support_error(order: u32, bad: Vec<PsiIndex>) -> Error {
    Error::OutOfRange { order, indices: bad }
}

/// `f̃₀ = Σ u_{n,k}/σ_{n,k} Ẑ_{n,k}` from the `Π₀` block.
pub fn invert_pi0(u: &SinoCoeffs, basis: &Basis) -> Result<ZernikeSeries> {
    let bad: Vec<PsiIndex> = u.iter().map(|(i, _)| i).filter(|&i| block_of(i) != Block::Pi0).collect();
    if !bad.is_empty() {
        return Err(support_error(0, bad));
    }
    divide_by_sigma(u, basis)
}

/// `w₁ = Σ u_{n,k}/σ_{n,k} Ẑ_{n,k}` from the `Π_⊥` block.
pub fn recover_w1(u: &SinoCoeffs, basis: &Basis) -> Result<ZernikeSeries> {
    let bad: Vec<PsiIndex> = u.iter().map(|(i, _)| i).filter(|&i| block_of(i) != Block::PiPerp).collect();
    if !bad.is_empty() {
        return Err(support_error(1, bad));
    }
    divide_by_sigma(u, basis)
}

fn divide_by_sigma(u: &SinoCoeffs, basis: &Basis) -> Result<ZernikeSeries> {
    let idx: Vec<(u32, u32)> = u.iter().map(|(i, _)| (i.n, i.k as u32)).collect();
    check_sigma(basis, &idx)?;
    let mut s = ZernikeSeries::new();
    for (i, c) in u.iter() {
        s.insert(i.n, i.k as u32, c / basis.sigma(i.n, i.k as u32));
    }
    Ok(s)
}

/// tt parts of an order-`m` dataset, keyed by `j`.
pub fn recon_tt_svd(u: &SinoCoeffs, m: u32, basis: &Basis) -> Result<BTreeMap<u32, TtCoeffs>> {
    let parity = Parity::of_order(m);
    let allowed = Block::for_order(m);
    let bad: Vec<PsiIndex> =
        u.iter().map(|(i, _)| i).filter(|&i| i.parity != parity || !allowed.contains(&block_of(i))).collect();
    if !bad.is_empty() {
        return Err(support_error(m, bad));
    }
    let mut out: BTreeMap<u32, TtCoeffs> = BTreeMap::new();
    for (i, c) in u.iter() {
        let (j, order) = match block_of(i) {
            Block::Pi2j(j) => (j, 2 * j),
            Block::Pi2j1(j) => (j, 2 * j + 1),
            _ => continue,
        };
        let n = i.n;
        check_sigma(basis, &[(n, 0)])?;
        let t = out.entry(j).or_insert_with(|| TtCoeffs::new(order));
        // σ_{n,0} = σ_{n,n}
        let v = c / basis.sigma(n, 0);
        if i.k <= 0 {
            t.plus.insert(n, v);
        } else {
            t.minus.insert(n, v);
        }
    }
    Ok(out)
}

/// Options for [`to_itt`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IttOptions {
    /// Solve for the curl potential `h` when the order is odd.
    pub solve_potential: bool,
    /// Coefficients at or below `support_tol · ‖u‖` are dropped before the
    /// support check.
    pub support_tol: f64,
}

impl Default for IttOptions {
    fn default() -> Self {
        Self { solve_potential: true, support_tol: 1e-8 }
    }
}

/// Iterated-tt representative of order-`m` data.
pub fn to_itt(u: &SinoCoeffs, m: u32, basis: &Basis, opts: &IttOptions) -> Result<IttForm> {
    let u = u.pruned(opts.support_tol * u.norm());
    let mut out = IttForm::new(m, basis.gamma());
    out.tt = recon_tt_svd(&u, m, basis)?;
    if m.is_multiple_of(2) {
        out.scalar = invert_pi0(&u.filter(|i| block_of(i) == Block::Pi0), basis)?;
    } else {
        out.w1 = recover_w1(&u.filter(|i| block_of(i) == Block::PiPerp), basis)?;
        if opts.solve_potential && !out.w1.is_empty() {
            out.potential = Some(solve_potential(&basis.synthesize(&out.w1)?, basis.gamma())?);
        }
    }
    Ok(out)
}

/// Index set large enough to hold order-`m` data up to degree `n_max`, plus
/// one extra diagonal on each side for detecting out-of-range content.
pub fn data_indices(n_max: u32, m: u32) -> Vec<PsiIndex> {
    crate::basis::index_box(n_max, Parity::of_order(m), m / 2 + 1)
}

/// [`to_itt`] applied to a sampled sinogram.
pub fn to_itt_grid(s: &SinoGrid, m: u32, n_max: u32, basis: &Basis, opts: &IttOptions) -> Result<IttForm> {
    let u = sino_project(s, &data_indices(n_max, m), basis)?;
    to_itt(&u, m, basis, opts)
}

/// Closed form of `G_{2j}^γ(β, α; z)`:
/// `μ^{2γ+1} e^{2jiθ}/(2^{4γ+2}γ!²) · (γ+1)(1 + e^{2i(β+α)}z²) /
/// ((1 + e^{iβ}z)(1 + e^{i(β+2α+π)}z))^{γ+2}`.
pub fn kernel_g(j: u32, gamma: f64, p: FanBeamPoint, z: Complex64) -> Result<Complex64> {
    if !(z.norm() <= 1.0 - KERNEL_EPS) {
        return Err(Error::Domain(format!("|z| = {} exceeds 1 − {KERNEL_EPS}", z.norm())));
    }
    let one = Complex64::new(1.0, 0.0);
    let f1 = one + cmath::polar(1.0, p.beta) * z;
    let f2 = one + cmath::polar(1.0, p.beta + 2.0 * p.alpha + PI) * z;
    if f1.norm() < KERNEL_SINGULAR || f2.norm() < KERNEL_SINGULAR {
        return Err(Error::Singular(format!("kernel denominator vanishes at z = {z}")));
    }
    let e = -(gamma + 2.0);
    let num = (gamma + 1.0) * (one + cmath::polar(1.0, 2.0 * (p.beta + p.alpha)) * z * z);
    let ln_c = (4.0 * gamma + 2.0) * core::f64::consts::LN_2 + 2.0 * ln_gamma(gamma + 1.0);
    let pre = libm::pow(p.mu(), 2.0 * gamma + 1.0) * libm::exp(-ln_c);
    Ok(cmath::polar(pre, 2.0 * j as f64 * p.theta()) * num * cmath::powf(f1, e) * cmath::powf(f2, e))
}

/// `2π Σ_{n<terms} ψ_{n,−j} ĝ_{n,0} z^n / σ_{n,0}²`, the series that
/// [`kernel_g`] sums.
pub fn kernel_series(j: u32, gamma: f64, p: FanBeamPoint, z: Complex64, terms: u32) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zn = Complex64::new(1.0, 0.0);
    for n in 0..terms {
        let s = crate::basis::sigma(n, 0, gamma);
        acc += psi_raw(PsiIndex::plus(n, -(j as i32)), p, gamma) * zernike_leading(n, 0, gamma) * zn / (s * s);
        zn *= z;
    }
    acc * (2.0 * PI)
}

/// Factor turning `⟨D, G⟩` into the tt coefficient: `1/(2π c_γ)`.
pub fn kernel_scale(basis: &Basis) -> f64 {
    1.0 / (2.0 * PI * basis.norm_sq())
}

/// Values of one tt part at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TtPointValue {
    pub j: u32,
    pub z: Complex64,
    /// Coefficient of `dz^{m_j}`.
    pub dz: Complex64,
    /// Coefficient of `dz̄^{m_j}`.
    pub dzbar: Complex64,
}

/// Boundary grid fine enough for kernel pairings up to radius `r_max`.
pub fn kernel_grid(gamma: f64, r_max: f64) -> Result<BoundaryGrid> {
    let k = kernel_resolution(r_max)?;
    BoundaryGrid::new(gamma, k.max(32), k / 2 + 8, crate::quadrature::AlphaRule::GegenbauerSin)
}

fn kernel_resolution(r_max: f64) -> Result<usize> {
    if !(r_max < 1.0 - KERNEL_EPS) {
        return Err(Error::Domain(format!("radius {r_max} too close to the boundary")));
    }
    if r_max <= 0.0 {
        return Ok(16);
    }
    let k = libm::ceil(libm::log(1e-13) / libm::log(r_max)) as usize;
    Ok(k + k % 2)
}

/// tt parts of order-`m` data at each point of `points`, by pairing `D`
/// with `G_{2j}^γ(·, ·; −z̄)` (times `e^{iθ}` for odd `m`).
pub fn recon_tt_kernel(d: &SinoGrid, m: u32, points: &[Complex64], basis: &Basis) -> Result<Vec<TtPointValue>> {
    let grid = &d.grid;
    let r_max = points.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let k = kernel_resolution(r_max)?;
    if grid.m_beta() < k || 2 * grid.n_alpha() < k {
        return Err(Error::Resolution(format!(
            "kernel pairing up to |z| = {r_max} needs {k} β nodes and {} α nodes",
            k / 2
        )));
    }
    let gamma = basis.gamma();
    let js: Vec<u32> = if m.is_multiple_of(2) { (1..=m / 2).collect() } else { (0..=(m - 1) / 2).collect() };
    let kappa = kernel_scale(basis);
    let odd = m % 2 == 1;
    let mut out = Vec::with_capacity(points.len() * js.len());
    for &j in &js {
        for &z in points {
            let w = -z.conj();
            let mut holo = Complex64::new(0.0, 0.0);
            let mut anti = Complex64::new(0.0, 0.0);
            for (flat, p) in grid.points().enumerate() {
                let mut g = kernel_g(j, gamma, p, w)?;
                if odd {
                    g *= cmath::polar(1.0, p.theta());
                }
                let wd = grid.weight(flat) * d.values[flat];
                holo += wd * g.conj();
                anti += wd * g;
            }
            out.push(TtPointValue { j, z, dz: holo * kappa, dzbar: anti * kappa });
        }
    }
    Ok(out)
}

/// Evaluation points: `n_r` Gauss–Legendre radii on `[0, r_max]` times
/// `n_omega` uniform angles.
pub fn z_grid(r_max: f64, n_r: usize, n_omega: usize) -> Result<Vec<Complex64>> {
    let radii = jacobi01(n_r, 0.0, 0.0)?;
    let mut pts = Vec::with_capacity(n_r * n_omega);
    for &s in &radii.nodes {
        for i in 0..n_omega {
            pts.push(cmath::polar(r_max * s, 2.0 * PI * i as f64 / n_omega as f64));
        }
    }
    Ok(pts)
}

/// Default evaluation points: 6 radii on `[0, 0.9]` times 64 angles.
pub fn default_z_grid() -> Vec<Complex64> {
    z_grid(0.9, 6, 64).expect("fixed rule")
}

/// One angular mode `h_q(r) e^{iqω}` of the curl potential, with samples.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialModeFn {
    pub q: i64,
    /// `(p, c)` pairs: `r^q h_q(r) = −i Σ c ∫_r^1 s^p (1−s²)^γ ds`.
    pub terms: Vec<(u32, Complex64)>,
    pub radii: Vec<f64>,
    pub samples: Vec<Complex64>,
}

/// Solution `h` of `∂h = (i/2) d^γ w₁`, `h|∂D = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSolution {
    pub gamma: f64,
    pub w1: PolyZZbar,
    pub modes: Vec<RadialModeFn>,
    /// Relative residual of `−2i d^{−γ}∂h − w₁` at interior points.
    pub residual: f64,
    tail: QuadRule,
    head: QuadRule,
}

/// Number of intervals of the Clenshaw–Curtis sampling grid.
pub const RADIAL_SAMPLES: usize = 256;

impl PotentialSolution {
    fn t_p(&self, p: u32) -> f64 {
        0.5 * beta((p as f64 + 1.0) / 2.0, self.gamma + 1.0).unwrap_or(f64::NAN)
    }

    /// `∫_0^1 (1−u)^γ s^p (1+s)^γ du` with `s = r + (1−r)u`.
    fn tail_integral(&self, p: u32, r: f64) -> f64 {
        let g = self.gamma;
        self.tail.integrate(|u| {
            let s = r + (1.0 - r) * u;
            libm::pow(s, p as f64) * libm::pow(1.0 + s, g)
        })
    }

    /// `∫_0^1 u^p (1 − r²u²)^γ du`.
    fn head_integral(&self, p: u32, r: f64) -> f64 {
        let g = self.gamma;
        self.head.integrate(|u| libm::pow(u, p as f64) * libm::pow(1.0 - r * r * u * u, g))
    }

    /// `(h_q(r), d^{−γ} h_q(r), d^{−γ} h_q(r)/r)`; the last is zero for `q = 0`.
    fn radial(&self, mode: &RadialModeFn, r: f64) -> (Complex64, Complex64, Complex64) {
        let g = self.gamma;
        let q = mode.q;
        let zero = Complex64::new(0.0, 0.0);
        if r >= 0.5 {
            let s: Complex64 = mode.terms.iter().map(|&(p, c)| c * self.tail_integral(p, r)).sum();
            let rq = libm::pow(r, q as f64);
            let h = -I * s * libm::pow(1.0 - r, g + 1.0) / rq;
            let hd = -I * s * (1.0 - r) * libm::pow(1.0 + r, -g) / rq;
            let hdr = if q == 0 { zero } else { hd / r };
            return (h, hd, hdr);
        }
        let dinv = libm::pow(1.0 - r * r, -g);
        if q >= 1 {
            // regular branch: the constant parts cancel by compatibility
            let (mut h, mut hr) = (zero, zero);
            for &(p, c) in &mode.terms {
                let k = self.head_integral(p, r);
                let e = p as i64 - q;
                h += c * libm::pow(r, (e + 1) as f64) * k;
                hr += c * libm::pow(r, e as f64) * k;
            }
            (I * h, I * h * dinv, I * hr * dinv)
        } else {
            let mut s = zero;
            for &(p, c) in &mode.terms {
                s += c * (self.t_p(p) - libm::pow(r, (p + 1) as f64) * self.head_integral(p, r));
            }
            let h = -I * s * libm::pow(r, (-q) as f64);
            let hr = if q == 0 { zero } else { -I * s * libm::pow(r, (-q - 1) as f64) * dinv };
            (h, h * dinv, hr)
        }
    }

    /// `h(z)`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let (r, w) = cmath::to_polar(z);
        self.modes.iter().map(|m| self.radial(m, r).0 * cmath::polar(1.0, m.q as f64 * w)).sum()
    }

    /// `d^{−γ} ℓ₁(⋆dh)(z, θ)`, smooth up to the boundary.
    pub fn star_dh_unweighted(&self, z: Complex64, theta: f64) -> Complex64 {
        let (r, w) = cmath::to_polar(z);
        let wz = self.w1.eval(z);
        // d^{−γ}∂̄h = (i/2) e^{2iω} w₁ − Σ_q (q/r) d^{−γ} h_q e^{i(q+1)ω}
        let mut dbar = 0.5 * I * cmath::polar(1.0, 2.0 * w) * wz;
        for m in &self.modes {
            if m.q != 0 {
                let (_, _, hr) = self.radial(m, r);
                dbar -= (m.q as f64) * hr * cmath::polar(1.0, (m.q + 1) as f64 * w);
            }
        }
        // ℓ₁(⋆dh) = −i ∂h e^{iθ} + i ∂̄h e^{−iθ}, with d^{−γ}∂h = (i/2) w₁
        cmath::polar(1.0, theta) * (0.5 * wz) + cmath::polar(1.0, -theta) * (I * dbar)
    }

    /// `I₁(⋆dh)` on one chord.
    pub fn forward_star_dh(&self, p: FanBeamPoint, rule: &QuadRule) -> Result<Complex64> {
        chord_integrate(p, rule, |q| self.star_dh_unweighted(q.z, q.theta))
    }

    fn residual_check(&self) -> f64 {
        let h = 1e-5;
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for &r in &[0.2, 0.45, 0.55, 0.8] {
            for i in 0..7 {
                let z = cmath::polar(r, 0.3 + 2.0 * PI * i as f64 / 7.0);
                let hx = (self.eval(z + h) - self.eval(z - h)) / (2.0 * h);
                let hy = (self.eval(z + I * h) - self.eval(z - I * h)) / (2.0 * h);
                let dh = 0.5 * (hx - I * hy);
                let got = -2.0 * I * dh * libm::pow(1.0 - r * r, -self.gamma);
                let want = self.w1.eval(z);
                worst = worst.max((got - want).norm());
                scale = scale.max(want.norm());
            }
        }
        if scale == 0.0 {
            worst
        } else {
            worst / scale
        }
    }
}

/// Solves `w₁ = −2i d^{−γ}∂h`, `h|∂D = 0`, for `w₁` orthogonal to the
/// holomorphic polynomials.
pub fn solve_potential(w1: &PolyZZbar, gamma: f64) -> Result<PotentialSolution> {
    if !(gamma > -1.0 && gamma < 1.0) {
        return Err(Error::Domain(format!("weight exponent {gamma} outside (-1, 1)")));
    }
    let (proj, _) = holo_project(w1, gamma, HoloSide::KerDbar);
    let scale = w1.max_abs_coeff();
    if proj.max_abs_coeff() > 1e-9 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Precondition(format!("w₁ has a holomorphic component of size {:e}", proj.max_abs_coeff())));
    }
    // z^a z̄^b in w₁ feeds mode q = a − b + 1 with exponent p = 2a + 1
    let mut by_q: BTreeMap<i64, Vec<(u32, Complex64)>> = BTreeMap::new();
    for (&(a, b), &c) in w1.terms() {
        by_q.entry(a as i64 - b as i64 + 1).or_default().push((2 * a + 1, c));
    }
    let mut sol = PotentialSolution {
        gamma,
        w1: w1.clone(),
        modes: Vec::new(),
        residual: 0.0,
        tail: jacobi01(40, 0.0, gamma)?,
        head: jacobi01(40, 0.0, 0.0)?,
    };
    let cc = crate::quadrature::clenshaw_curtis01(RADIAL_SAMPLES)?;
    for (q, terms) in by_q {
        let mut mode = RadialModeFn { q, terms, radii: cc.nodes.clone(), samples: Vec::new() };
        mode.samples = cc.nodes.iter().map(|&r| sol.radial(&mode, r).0).collect();
        sol.modes.push(mode);
    }
    sol.residual = sol.residual_check();
    if !(sol.residual < POTENTIAL_TOL) {
        return Err(Error::Solver { residual: sol.residual, tol: POTENTIAL_TOL });
    }
    Ok(sol)
}

/// Chord rule for [`PotentialSolution::forward_star_dh`].
pub fn potential_chord_rule(gamma: f64) -> Result<QuadRule> {
    jacobi_rule(40, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kernel_at_origin() {
        let p = FanBeamPoint::new(0.0, 0.0);
        let g = kernel_g(0, 0.0, p, c(0.0, 0.0)).unwrap();
        assert!((g - c(0.25, 0.0)).norm() < 1e-15);
        let p = FanBeamPoint::new(0.4, 0.7);
        let gamma = 0.3;
        let g = kernel_g(2, gamma, p, c(0.0, 0.0)).unwrap();
        let want = libm::pow(p.mu(), 2.0 * gamma + 1.0) * (gamma + 1.0)
            / (libm::pow(2.0, 4.0 * gamma + 2.0) * libm::exp(2.0 * ln_gamma(gamma + 1.0)));
        assert!((g - cmath::polar(want, 4.0 * p.theta())).norm() < 1e-14);
    }

    #[test]
    fn kernel_matches_series() {
        let p = FanBeamPoint::new(0.7, 0.3);
        let z = c(0.2, 0.1);
        for &g in &[-0.5, 0.0, 0.4] {
            for j in 0..3 {
                let a = kernel_g(j, g, p, z).unwrap();
                let b = kernel_series(j, g, p, z, 200);
                assert!((a - b).norm() < 1e-8 * a.norm(), "γ={g} j={j}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn kernel_rejects_boundary() {
        let p = FanBeamPoint::new(0.0, 0.0);
        assert!(matches!(kernel_g(0, 0.0, p, c(0.9995, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn pi0_examples() {
        let b = Basis::new(0.0, 3).unwrap();
        let u = SinoCoeffs::from_entries(0.0, [(PsiIndex::plus(2, 1), c(b.sigma(2, 1), 0.0))]);
        let f = invert_pi0(&u, &b).unwrap();
        assert!((f.get(2, 1) - c(1.0, 0.0)).norm() < 1e-14);
        assert!(invert_pi0(&SinoCoeffs::new(0.0), &b).unwrap().is_empty());
        let bad = SinoCoeffs::from_entries(0.0, [(PsiIndex::plus(2, -1), c(1.0, 0.0))]);
        assert!(matches!(invert_pi0(&bad, &b), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn w1_examples() {
        let b = Basis::new(0.0, 3).unwrap();
        let u = SinoCoeffs::from_entries(0.0, [(PsiIndex::minus(1, 1), c(b.sigma(1, 1), 0.0))]);
        let w = recover_w1(&u, &b).unwrap();
        assert!((w.get(1, 1) - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn tt_svd_examples() {
        let b = Basis::new(0.0, 4).unwrap();
        let u = SinoCoeffs::from_entries(0.0, [(PsiIndex::plus(3, -1), c(b.sigma(3, 0), 0.0))]);
        let t = recon_tt_svd(&u, 2, &b).unwrap();
        assert!((t[&1].plus[&3] - c(1.0, 0.0)).norm() < 1e-14 && t[&1].order == 2);
        let u = SinoCoeffs::from_entries(0.0, [(PsiIndex::minus(1, 2), c(b.sigma(1, 1), 0.0))]);
        let t = recon_tt_svd(&u, 1, &b).unwrap();
        assert!((t[&0].minus[&1] - c(1.0, 0.0)).norm() < 1e-14 && t[&0].order == 1);
    }

    #[test]
    fn ill_conditioned_refused() {
        let b = Basis::new(-0.95, 2).unwrap();
        let u = SinoCoeffs::from_entries(-0.95, [(PsiIndex::plus(2, 1), c(1.0, 0.0))]);
        assert!(invert_pi0(&u, &b).is_ok());
        let big = Basis::new(0.0, 0).unwrap();
        assert!(!big.is_ill_conditioned(200, 100));
    }

    #[test]
    fn zero_potential() {
        let s = solve_potential(&PolyZZbar::zero(), 0.3).unwrap();
        assert!(s.modes.is_empty());
        assert_eq!(s.eval(c(0.3, 0.1)), c(0.0, 0.0));
    }

    #[test]
    fn holomorphic_w1_rejected() {
        assert!(matches!(solve_potential(&PolyZZbar::z(), 0.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn manufactured_potential() {
        for &g in &[-0.5, 0.0, 0.5] {
            // h = d^{γ+1} x gives w₁ = i[(γ+2) z z̄ + (γ+1) z̄² − 1]
            let w1 =
                PolyZZbar::from_terms([((1, 1), c(0.0, g + 2.0)), ((0, 2), c(0.0, g + 1.0)), ((0, 0), c(0.0, -1.0))]);
            let s = solve_potential(&w1, g).unwrap();
            for &r in &[0.0, 0.1, 0.49, 0.5, 0.7, 0.95, 0.99] {
                for &w in &[0.0, 1.0, 2.5] {
                    let z = cmath::polar(r, w);
                    let want = libm::pow(1.0 - r * r, g + 1.0) * z.re;
                    assert!((s.eval(z) - want).norm() < 1e-10, "γ={g} r={r}");
                }
            }
        }
    }
}
