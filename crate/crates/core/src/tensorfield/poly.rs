use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A polynomial `Σ c_{a,b} z^a z̄^b` with complex coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PolyZZbar {
    terms: BTreeMap<(u32, u32), Complex64>,
}

impl PolyZZbar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(a: u32, b: u32, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(a, b, c);
        p
    }

    pub fn z() -> Self {
        Self::monomial(1, 0, Complex64::new(1.0, 0.0))
    }

    pub fn zbar() -> Self {
        Self::monomial(0, 1, Complex64::new(1.0, 0.0))
    }

    /// `d = 1 − z z̄`.
    pub fn d() -> Self {
        let mut p = Self::constant(Complex64::new(1.0, 0.0));
        p.add_term(1, 1, Complex64::new(-1.0, 0.0));
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Complex64)>>(it: I) -> Self {
        let mut p = Self::zero();
        for ((a, b), c) in it {
            p.add_term(a, b, c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, a: u32, b: u32) -> Complex64 {
        self.terms.get(&(a, b)).copied().unwrap_or(ZERO)
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: Complex64) {
        if c == ZERO {
            return;
        }
        let e = self.terms.entry((a, b)).or_insert(ZERO);
        *e += c;
        if *e == ZERO {
            self.terms.remove(&(a, b));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree `max(a + b)`, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, b)| a + b).max()
    }

    pub fn max_powers(&self) -> (u32, u32) {
        self.terms.keys().fold((0, 0), |(ma, mb), &(a, b)| (ma.max(a), mb.max(b)))
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|&(_, b)| b == 0)
    }

    pub fn is_antiholomorphic(&self) -> bool {
        self.terms.keys().all(|&(a, _)| a == 0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops terms with `|c| ≤ tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        Self { terms: self.terms.iter().filter(|(_, c)| c.norm() > tol).map(|(k, c)| (*k, *c)).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        if s == ZERO {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, c)| (*k, c * s)).collect() }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Complex conjugate as a function: `z^a z̄^b ↦ z^b z̄^a`.
    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(&(a, b), c)| ((b, a), c.conj())).collect() }
    }

    /// Wirtinger `∂ = ½(∂_x − i∂_y)`.
    pub fn d_z(&self) -> Self {
        Self::from_terms(self.terms.iter().filter(|(&(a, _), _)| a > 0).map(|(&(a, b), c)| ((a - 1, b), c * a as f64)))
    }

    /// Wirtinger `∂̄ = ½(∂_x + i∂_y)`.
    pub fn d_zbar(&self) -> Self {
        Self::from_terms(self.terms.iter().filter(|(&(_, b), _)| b > 0).map(|(&(a, b), c)| ((a, b - 1), c * b as f64)))
    }

    pub fn d_x(&self) -> Self {
        self.d_z() + self.d_zbar()
    }

    pub fn d_y(&self) -> Self {
        (self.d_z() - self.d_zbar()).scale(Complex64::new(0.0, 1.0))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(Complex64::new(1.0, 0.0));
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let (ma, mb) = self.max_powers();
        let zp = powers(z, ma);
        let zbp = powers(z.conj(), mb);
        self.terms.iter().map(|(&(a, b), c)| c * zp[a as usize] * zbp[b as usize]).sum()
    }

    /// Terms with `a − b = q`.
    pub fn diagonal(&self, q: i64) -> Self {
        Self::from_terms(self.terms.iter().filter(|(&(a, b), _)| a as i64 - b as i64 == q).map(|(k, c)| (*k, *c)))
    }

    /// The distinct values of `a − b` in the support.
    pub fn diagonals(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.terms.keys().map(|&(a, b)| a as i64 - b as i64).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Restriction to `|z| = 1` as Fourier coefficients `q ↦ Σ_{a−b=q} c`.
    pub fn boundary_trace(&self) -> BTreeMap<i64, Complex64> {
        let mut out = BTreeMap::new();
        for (&(a, b), c) in &self.terms {
            *out.entry(a as i64 - b as i64).or_insert(ZERO) += c;
        }
        out
    }
}

fn powers(z: Complex64, n: u32) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(1.0, 0.0); n as usize + 1];
    for i in 1..v.len() {
        v[i] = v[i - 1] * z;
    }
    v
}

impl AddAssign<&PolyZZbar> for PolyZZbar {
    fn add_assign(&mut self, rhs: &PolyZZbar) {
        for (&(a, b), &c) in &rhs.terms {
            self.add_term(a, b, c);
        }
    }
}

impl SubAssign<&PolyZZbar> for PolyZZbar {
    fn sub_assign(&mut self, rhs: &PolyZZbar) {
        for (&(a, b), &c) in &rhs.terms {
            self.add_term(a, b, -c);
        }
    }
}

impl Add for PolyZZbar {
    type Output = PolyZZbar;
    fn add(mut self, rhs: PolyZZbar) -> PolyZZbar {
        self += &rhs;
        self
    }
}

impl Sub for PolyZZbar {
    type Output = PolyZZbar;
    fn sub(mut self, rhs: PolyZZbar) -> PolyZZbar {
        self -= &rhs;
        self
    }
}

impl Add for &PolyZZbar {
    type Output = PolyZZbar;
    fn add(self, rhs: &PolyZZbar) -> PolyZZbar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &PolyZZbar {
    type Output = PolyZZbar;
    fn sub(self, rhs: &PolyZZbar) -> PolyZZbar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for PolyZZbar {
    type Output = PolyZZbar;
    fn neg(self) -> PolyZZbar {
        self.scale_re(-1.0)
    }
}

impl Mul for &PolyZZbar {
    type Output = PolyZZbar;
    fn mul(self, rhs: &PolyZZbar) -> PolyZZbar {
        let mut out = PolyZZbar::zero();
        for (&(a, b), &c) in &self.terms {
            for (&(e, f), &g) in &rhs.terms {
                out.add_term(a + e, b + f, c * g);
            }
        }
        out
    }
}

impl Mul for PolyZZbar {
    type Output = PolyZZbar;
    fn mul(self, rhs: PolyZZbar) -> PolyZZbar {
        &self * &rhs
    }
}
