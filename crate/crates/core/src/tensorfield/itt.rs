use alloc::collections::BTreeMap;

use num_complex::Complex64;

use super::{ModeField, PolyZZbar};
use crate::basis::{Basis, ZernikeSeries};
use crate::invert::PotentialSolution;
use crate::Result;

/// A tt tensor `f dz^m + g dz̄^m` with `f = Σ plus[n] Ẑ_{n,0}` and
/// `g = Σ minus[n] Ẑ_{n,n}`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TtCoeffs {
    pub order: u32,
    pub plus: BTreeMap<u32, Complex64>,
    pub minus: BTreeMap<u32, Complex64>,
}

impl TtCoeffs {
    pub fn new(order: u32) -> Self {
        Self { order, ..Self::default() }
    }

    pub fn is_empty(&self) -> bool {
        self.plus.values().chain(self.minus.values()).all(|c| c.norm() == 0.0)
    }

    /// Holomorphic coefficient of `dz^m`.
    pub fn holomorphic(&self, basis: &Basis) -> Result<PolyZZbar> {
        let mut p = PolyZZbar::zero();
        for (&n, &c) in &self.plus {
            p += &basis.zhat(n, 0)?.scale(c);
        }
        Ok(p)
    }

    /// Antiholomorphic coefficient of `dz̄^m`.
    pub fn antiholomorphic(&self, basis: &Basis) -> Result<PolyZZbar> {
        let mut p = PolyZZbar::zero();
        for (&n, &c) in &self.minus {
            p += &basis.zhat(n, n)?.scale(c);
        }
        Ok(p)
    }

    pub fn to_field(&self, basis: &Basis) -> Result<ModeField> {
        let m = self.order as i32;
        ModeField::from_modes(self.order, [(m, self.holomorphic(basis)?), (-m, self.antiholomorphic(basis)?)])
    }

    /// Reads the `±m` modes of a tt field.
    pub fn from_field(f: &ModeField, basis: &Basis) -> Result<Self> {
        let m = f.order() as i32;
        if !f.is_tt() {
            return Err(crate::Error::Precondition("field is not transverse tracefree".into()));
        }
        let mut out = Self::new(f.order());
        if let Some(p) = f.mode(m) {
            out.plus = basis.holomorphic_to_zhat(p)?;
        }
        if let Some(p) = f.mode(-m) {
            out.minus = basis.antiholomorphic_to_zhat(p)?;
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        fn side(a: &BTreeMap<u32, Complex64>, b: &BTreeMap<u32, Complex64>) -> f64 {
            a.keys()
                .chain(b.keys())
                .map(|n| {
                    let x = a.get(n).copied().unwrap_or_default();
                    let y = b.get(n).copied().unwrap_or_default();
                    (x - y).norm()
                })
                .fold(0.0, f64::max)
        }
        side(&self.plus, &other.plus).max(side(&self.minus, &other.minus))
    }

    pub fn max_abs(&self) -> f64 {
        self.plus.values().chain(self.minus.values()).map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Representative of an order-`m` tensor modulo the transform's kernel.
///
/// Even `m = 2p`: `L^p f̃₀ + Σ_{j=1}^p L^{p−j} f̃_{2j}`.
/// Odd `m = 2p+1`: `L^p ⋆dh + Σ_{j=0}^p L^{p−j} f̃_{2j+1}`, where the curl part
/// is carried by `w₁ = −2i d^{−γ}∂h` (same data as `w₁ dz`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IttForm {
    pub order: u32,
    pub gamma: f64,
    /// `f̃₀` on `Ẑ_{n,k}` (even order).
    pub scalar: ZernikeSeries,
    /// `w₁` on `Ẑ_{n,k}`, `k ≥ 1` (odd order).
    pub w1: ZernikeSeries,
    pub potential: Option<PotentialSolution>,
    /// tt parts keyed by `j`; part `j` has order `2j` (even) or `2j+1` (odd).
    pub tt: BTreeMap<u32, TtCoeffs>,
}

impl IttForm {
    pub fn new(order: u32, gamma: f64) -> Self {
        Self { order, gamma, ..Self::default() }
    }

    pub fn is_empty(&self) -> bool {
        self.scalar.is_empty() && self.w1.is_empty() && self.tt.values().all(|t| t.is_empty())
    }

    /// Polynomial field of order `m` with the same transform as this form.
    pub fn to_field(&self, basis: &Basis) -> Result<ModeField> {
        let m = self.order;
        let p = m / 2;
        let mut out = ModeField::zero(m);
        if m.is_multiple_of(2) {
            let f0 = ModeField::scalar(basis.synthesize(&self.scalar)?);
            out = out.add(&f0.l_embed_pow(p))?;
        } else {
            let w = ModeField::from_modes(1, [(1, basis.synthesize(&self.w1)?)])?;
            out = out.add(&w.l_embed_pow(p))?;
        }
        for (&j, t) in &self.tt {
            out = out.add(&t.to_field(basis)?.l_embed_pow(p - j))?;
        }
        Ok(out)
    }

    /// Largest coefficient difference across all parts.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = self.scalar.max_abs_diff(&other.scalar).max(self.w1.max_abs_diff(&other.w1));
        let empty = TtCoeffs::default();
        for j in self.tt.keys().chain(other.tt.keys()) {
            let a = self.tt.get(j).unwrap_or(&empty);
            let b = other.tt.get(j).unwrap_or(&empty);
            worst = worst.max(a.max_abs_diff(b));
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.tt.values().map(|t| t.max_abs()).fold(self.scalar.max_abs().max(self.w1.max_abs()), f64::max)
    }
}
