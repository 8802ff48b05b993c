//! Symmetric tensor fields stored as fiberwise Fourier modes.
//!
//! An `m`-tensor `f` is represented by `ℓ_m f(z, θ) = Σ_k f_k(z) e^{ikθ}` with
//! `k ∈ {−m, −m+2, …, m}`; each `f_k` is a [`PolyZZbar`]. A term
//! `f dz^a dz̄^b` (`a + b = m`) lands in mode `a − b`.

mod itt;
mod poly;

use crate::cmath;
use alloc::collections::BTreeMap;
use alloc::format;

use num_complex::Complex64;

pub use itt::{IttForm, TtCoeffs};
pub use poly::PolyZZbar;

use crate::quadrature::{disk_inner_exact, holomorphic_norm_sq, monomial_inner};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ModeField {
    order: u32,
    modes: BTreeMap<i32, PolyZZbar>,
}

impl ModeField {
    pub fn zero(order: u32) -> Self {
        Self { order, modes: BTreeMap::new() }
    }

    /// Scalar function viewed as an order-0 field.
    pub fn scalar(f: PolyZZbar) -> Self {
        let mut out = Self::zero(0);
        out.modes.insert(0, f);
        out.prune_empty();
        out
    }

    pub fn from_modes<I: IntoIterator<Item = (i32, PolyZZbar)>>(order: u32, modes: I) -> Result<Self> {
        let mut out = Self::zero(order);
        for (k, p) in modes {
            out.add_mode(k, &p)?;
        }
        Ok(out)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modes(&self) -> impl Iterator<Item = (i32, &PolyZZbar)> {
        self.modes.iter().map(|(&k, p)| (k, p))
    }

    pub fn mode(&self, k: i32) -> Option<&PolyZZbar> {
        self.modes.get(&k)
    }

    pub fn is_zero(&self) -> bool {
        self.modes.values().all(|p| p.is_zero())
    }

    fn check_key(&self, k: i32) -> Result<()> {
        let m = self.order as i32;
        if k.abs() > m || (m - k) % 2 != 0 {
            return Err(Error::Parity(format!("mode {k} not admissible at order {m}")));
        }
        Ok(())
    }

    pub fn add_mode(&mut self, k: i32, p: &PolyZZbar) -> Result<()> {
        self.check_key(k)?;
        *self.modes.entry(k).or_default() += p;
        self.prune_empty();
        Ok(())
    }

    fn prune_empty(&mut self) {
        self.modes.retain(|_, p| !p.is_zero());
    }

    /// `ℓ_m f(z, θ)`.
    pub fn eval(&self, z: Complex64, theta: f64) -> Complex64 {
        self.modes.iter().map(|(&k, p)| p.eval(z) * cmath::polar(1.0, k as f64 * theta)).sum()
    }

    /// True for `f_m dz^m + f_{−m} dz̄^m` with `f_m` holomorphic and
    /// `f_{−m}` antiholomorphic.
    pub fn is_tt(&self) -> bool {
        let m = self.order as i32;
        self.modes
            .iter()
            .all(|(&k, p)| (k == m && p.is_holomorphic()) || (k == -m && p.is_antiholomorphic()) || p.is_zero())
            && (m > 0 || self.modes.is_empty())
    }

    pub fn map_modes<F: Fn(&PolyZZbar) -> PolyZZbar>(&self, f: F) -> Self {
        let mut out = Self { order: self.order, modes: self.modes.iter().map(|(&k, p)| (k, f(p))).collect() };
        out.prune_empty();
        out
    }

    /// Multiplies every mode by `d = 1 − |z|²`.
    pub fn mul_d(&self) -> Self {
        let d = PolyZZbar::d();
        self.map_modes(|p| p * &d)
    }

    /// Same mode functions at order `m + 2`: the symmetrized product with
    /// the metric.
    pub fn l_embed(&self) -> Self {
        Self { order: self.order + 2, modes: self.modes.clone() }
    }

    pub fn l_embed_pow(&self, times: u32) -> Self {
        Self { order: self.order + 2 * times, modes: self.modes.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::Parity(format!("cannot add orders {} and {}", self.order, other.order)));
        }
        let mut out = self.clone();
        for (&k, p) in &other.modes {
            out.add_mode(k, p)?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map_modes(|p| p.scale(s))
    }

    pub fn max_degree(&self) -> u32 {
        self.modes.values().filter_map(|p| p.degree()).max().unwrap_or(0)
    }
}

/// `ℓ_m` of `Σ c_{a,b}(z) dz^a dz̄^b` (symmetrized products).
pub fn lift_ell_m(order: u32, components: &[(u32, u32, PolyZZbar)]) -> Result<ModeField> {
    let mut out = ModeField::zero(order);
    for (a, b, p) in components {
        if a + b != order {
            return Err(Error::Precondition(format!("component dz^{a} dz̄^{b} is not of order {order}")));
        }
        out.add_mode(*a as i32 - *b as i32, p)?;
    }
    Ok(out)
}

/// Geodesic vector field: `(XF)_k = ∂F_{k−1} + ∂̄F_{k+1}`, i.e. `d^s`.
pub fn apply_x(f: &ModeField) -> ModeField {
    let mut out = ModeField::zero(f.order + 1);
    for (&k, p) in &f.modes {
        *out.modes.entry(k + 1).or_default() += &p.d_z();
        *out.modes.entry(k - 1).or_default() += &p.d_zbar();
    }
    out.prune_empty();
    out
}

/// `X_⊥ u = i e^{iθ} ∂u − i e^{−iθ} ∂̄u`, so that `X_⊥ ∘ ℓ₀ = −ℓ₁ ∘ ⋆d`.
pub fn apply_xperp(u: &PolyZZbar) -> ModeField {
    let mut out = ModeField::zero(1);
    out.modes.insert(1, u.d_z().scale(I));
    out.modes.insert(-1, u.d_zbar().scale(-I));
    out.prune_empty();
    out
}

/// `ℓ₁(⋆du)`.
pub fn star_d(u: &PolyZZbar) -> ModeField {
    apply_xperp(u).scale(Complex64::new(-1.0, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoloSide {
    /// Project onto `span{z^n}` (kernel of `∂̄`).
    KerDbar,
    /// Project onto `span{z̄^n}` (kernel of `∂`).
    KerD,
}

/// Orthogonal projection in `L²(D, d^γ dA)` onto holomorphic (or
/// antiholomorphic) polynomials; returns `(projection, residual)`.
pub fn holo_project(p: &PolyZZbar, gamma: f64, side: HoloSide) -> (PolyZZbar, PolyZZbar) {
    let mut proj = PolyZZbar::zero();
    for (&(a, b), &c) in p.terms() {
        // ⟨z^a z̄^b, z^n⟩ is nonzero only for n = a − b
        match side {
            HoloSide::KerDbar if a >= b => {
                let n = a - b;
                let g = monomial_inner(a, b, n, 0, gamma);
                proj.add_term(n, 0, c * g / holomorphic_norm_sq(n, gamma));
            }
            HoloSide::KerD if b >= a => {
                let n = b - a;
                let g = monomial_inner(a, b, 0, n, gamma);
                proj.add_term(0, n, c * g / holomorphic_norm_sq(n, gamma));
            }
            _ => {}
        }
    }
    let residual = p - &proj;
    (proj, residual)
}

/// `‖u‖² / ‖∇u‖²` in `L²(D, d^γ dA)` for `u` vanishing on the circle.
pub fn poincare_ratio(u: &PolyZZbar, gamma: f64) -> Result<f64> {
    let scale = u.max_abs_coeff().max(f64::MIN_POSITIVE);
    if let Some((q, v)) = u.boundary_trace().into_iter().find(|(_, v)| v.norm() > 1e-12 * scale) {
        return Err(Error::Precondition(format!("u does not vanish on the boundary (trace mode {q} = {v})")));
    }
    if u.is_zero() {
        return Err(Error::Precondition("u is identically zero".into()));
    }
    let num = disk_inner_exact(u, u, gamma).re;
    let ux = u.d_x();
    let uy = u.d_y();
    let den = disk_inner_exact(&ux, &ux, gamma).re + disk_inner_exact(&uy, &uy, gamma).re;
    Ok(num / den)
}

/// Fiber inner product of two fields mode by mode, integrated over the
/// disk with weight `d^γ`; the circle average contributes `2π` per mode.
pub fn field_inner(f: &ModeField, g: &ModeField, gamma: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (&k, p) in &f.modes {
        if let Some(q) = g.modes.get(&k) {
            acc += disk_inner_exact(p, q, gamma);
        }
    }
    acc * (2.0 * core::f64::consts::PI)
}
