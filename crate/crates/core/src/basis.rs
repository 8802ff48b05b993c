//! Fan-beam polynomials `ψ_{n,k}^{γ,±}`, generalised Zernike polynomials
//! `Z_{n,k}^γ` and the singular values `σ_{n,k}^γ` of the weighted transform.
//!
//! `ψ_{n,k}(β, α) = μ^{2γ+1} e^{(n−2k)iθ} L̂_n^γ(sin α) / 2π` with
//! `θ = β + α + π`, and `ψ^−_{n,k} = e^{iθ} ψ_{n,k}`. The printed constants
//! in `L̂_n^γ` do not make `ψ` unit length; [`Basis::new`] measures the common
//! squared norm `c_γ` by quadrature and the hatted families `ψ̂ = ψ/√c_γ`,
//! `Ẑ = Z/(√c_γ σ)` are orthonormal.

use crate::cmath;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;

use crate::geometry::FanBeamPoint;
use crate::quadrature::{disk_inner_exact, BoundaryGrid};
use crate::specfun::{lhat, lhat_leading, lhat_scale, ln_binomial, ln_factorial, ln_gamma, WeightParam};
use crate::tensorfield::PolyZZbar;
use crate::{Error, Result};

/// Relative spread allowed among audited squared norms.
pub const AUDIT_TOL: f64 = 1e-10;

/// Singular values below this multiple of `σ_{0,0}` are refused.
pub const SIGMA_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub fn symbol(self) -> &'static str {
        match self {
            Parity::Plus => "+",
            Parity::Minus => "-",
        }
    }

    /// Parity of data produced by tensors of order `m`.
    pub fn of_order(m: u32) -> Self {
        if m.is_multiple_of(2) {
            Parity::Plus
        } else {
            Parity::Minus
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "+" => Some(Parity::Plus),
            "-" | "−" => Some(Parity::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Index of `ψ_{n,k}^{γ,±}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PsiIndex {
    pub n: u32,
    pub k: i32,
    pub parity: Parity,
}

impl PsiIndex {
    pub fn new(n: u32, k: i32, parity: Parity) -> Self {
        Self { n, k, parity }
    }

    pub fn plus(n: u32, k: i32) -> Self {
        Self::new(n, k, Parity::Plus)
    }

    pub fn minus(n: u32, k: i32) -> Self {
        Self::new(n, k, Parity::Minus)
    }

    /// Frequency `q` of the factor `e^{iqθ}`.
    pub fn frequency(&self) -> i64 {
        let q = self.n as i64 - 2 * self.k as i64;
        match self.parity {
            Parity::Plus => q,
            Parity::Minus => q + 1,
        }
    }

    /// Index of the pointwise complex conjugate.
    pub fn conjugate(&self) -> Self {
        let n = self.n as i32;
        match self.parity {
            Parity::Plus => Self::plus(self.n, n - self.k),
            Parity::Minus => Self::minus(self.n, n - self.k + 1),
        }
    }
}

impl Ord for PsiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.parity, self.n, self.k).cmp(&(other.parity, other.n, other.k))
    }
}

impl PartialOrd for PsiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PsiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ψ{}({},{})", self.parity, self.n, self.k)
    }
}

/// `ln σ_{n,k}^γ`.
pub fn ln_sigma(n: u32, k: u32, gamma: f64) -> f64 {
    let ln_sq = (2.0 * gamma + 2.0) * core::f64::consts::LN_2
        + libm::log(PI)
        + ln_binomial(n, k)
        + ln_factorial((n - k) as f64 + gamma)
        + ln_factorial(k as f64 + gamma)
        - ln_factorial(n as f64 + 2.0 * gamma + 1.0);
    0.5 * ln_sq
}

/// `σ_{n,k}^γ = (2^{2γ+2}π C(n,k) (n−k+γ)!(k+γ)!/(n+2γ+1)!)^{1/2}`.
pub fn sigma(n: u32, k: u32, gamma: f64) -> f64 {
    assert!(k <= n, "σ_{{n,k}} needs 0 ≤ k ≤ n");
    libm::exp(ln_sigma(n, k, gamma))
}

/// `ψ_{n,k}^{γ,±}` with the printed normalisation.
pub fn psi_raw(idx: PsiIndex, p: FanBeamPoint, gamma: f64) -> Complex64 {
    let mu = p.mu();
    let amp = libm::pow(mu, 2.0 * gamma + 1.0) * lhat(idx.n, gamma, libm::sin(p.alpha)) / (2.0 * PI);
    cmath::polar(amp, idx.frequency() as f64 * p.theta())
}

/// Leading coefficient `ĝ_{n,k}` of `Z_{n,k}`, multiplying `z^{n−k} z̄^k`.
pub fn zernike_leading(n: u32, k: u32, gamma: f64) -> Complex64 {
    let mag = lhat_leading(n, gamma) * libm::exp(ln_binomial(n, k)) / libm::pow(2.0, n as f64);
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    // 1/i^n
    let phase = match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    phase * (sign * mag)
}

fn neg_i_pow(j: u32) -> Complex64 {
    match j % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// `Z_{n,k}^γ`: the `e^{−(n−2k)iθ}` part of `L̂_n^γ((z e^{−iθ} − z̄ e^{iθ})/2i)`.
///
/// With the explicit Gegenbauer expansion
/// `C_n^λ(x) = Σ_m (−1)^m Γ(n−m+λ)/(Γ(λ) m! (n−2m)!) (2x)^{n−2m}` and
/// `2x = −i(z − z̄)`, the monomial `z^a z̄^b` with `a − b = n − 2k` comes from
/// the single term `m = (n − a − b)/2`, so no cancellation occurs.
pub fn zernike_build(n: u32, k: u32, gamma: f64) -> PolyZZbar {
    assert!(k <= n, "Z_{{n,k}} needs 0 ≤ k ≤ n");
    let lambda = gamma + 1.0;
    let ln_scale = libm::log(lhat_scale(n, gamma)) - ln_gamma(lambda);
    let mut out = PolyZZbar::zero();
    for m in 0..=k.min(n - k) {
        let a = n - k - m;
        let b = k - m;
        let j = a + b;
        let ln_mag = ln_scale + ln_gamma((n - m) as f64 + lambda)
            - ln_factorial(m as f64)
            - ln_factorial(a as f64)
            - ln_factorial(b as f64);
        let sign = if (m + b).is_multiple_of(2) { 1.0 } else { -1.0 };
        out.add_term(a, b, neg_i_pow(j) * (sign * libm::exp(ln_mag)));
    }
    out
}

/// Coefficients on the orthonormal family `Ẑ_{n,k}`, keyed by `(n, k)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ZernikeSeries {
    pub coeffs: BTreeMap<(u32, u32), Complex64>,
}

impl ZernikeSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, n: u32, k: u32, c: Complex64) {
        *self.coeffs.entry((n, k)).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn get(&self, n: u32, k: u32) -> Complex64 {
        self.coeffs.get(&(n, k)).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.values().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn max_degree(&self) -> u32 {
        self.coeffs.keys().map(|&(n, _)| n).max().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), Complex64)> + '_ {
        self.coeffs.iter().map(|(&i, &c)| (i, c))
    }

    /// Largest `|a − b|` over the union of both supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut keys: Vec<(u32, u32)> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.iter().map(|&(n, k)| (self.get(n, k) - other.get(n, k)).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Cached Zernike polynomials and constants for one `γ` up to degree `n_max`.
#[derive(Debug, Clone)]
pub struct Basis {
    weight: WeightParam,
    n_max: u32,
    norm_sq: f64,
    zernike: Vec<Vec<PolyZZbar>>,
}

/// Outcome of the normalisation audit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditReport {
    /// Mean measured `‖ψ_{n,k}‖²`.
    pub norm_sq: f64,
    /// `(max − min)/mean` over the sample.
    pub spread: f64,
    pub samples: usize,
}

/// Measures `‖ψ_{n,k}‖²` on a grid exact for the sample and checks that it
/// does not depend on `(n, k, ±)`.
pub fn normalization_audit(gamma: f64, n_sample: u32) -> Result<AuditReport> {
    let n_sample = n_sample.max(2);
    let grid = BoundaryGrid::for_degree(gamma, n_sample)?;
    let mut values = Vec::new();
    for n in 0..=n_sample {
        for &k in &[-2i32, 0, n as i32 / 2, n as i32, n as i32 + 3] {
            for parity in [Parity::Plus, Parity::Minus] {
                let idx = PsiIndex::new(n, k, parity);
                let f = |p: FanBeamPoint| psi_raw(idx, p, gamma);
                values.push(crate::quadrature::boundary_inner(&grid, f, f).re);
            }
        }
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let min = values.iter().copied().fold(f64::MAX, f64::min);
    let spread = (max - min) / mean;
    if !(spread < AUDIT_TOL) || !(mean > 0.0) {
        return Err(Error::Audit { spread, tol: AUDIT_TOL });
    }
    Ok(AuditReport { norm_sq: mean, spread, samples: values.len() })
}

impl Basis {
    pub fn new(gamma: f64, n_max: u32) -> Result<Self> {
        let weight = WeightParam::new(gamma)?;
        let audit = normalization_audit(gamma, n_max.clamp(2, 8))?;
        let weight = weight.with_audit_scale(audit.norm_sq);
        let zernike = (0..=n_max).map(|n| (0..=n).map(|k| zernike_build(n, k, gamma)).collect()).collect();
        Ok(Self { weight, n_max, norm_sq: audit.norm_sq, zernike })
    }

    pub fn gamma(&self) -> f64 {
        self.weight.gamma()
    }

    pub fn weight(&self) -> &WeightParam {
        &self.weight
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// Audited `c_γ = ‖ψ_{n,k}‖²`.
    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    fn check(&self, n: u32) -> Result<()> {
        if n > self.n_max {
            return Err(Error::BasisRange { n_max: self.n_max, requested: n });
        }
        Ok(())
    }

    pub fn sigma(&self, n: u32, k: u32) -> f64 {
        sigma(n, k, self.gamma())
    }

    /// `σ_{n,k} < SIGMA_FLOOR · σ_{0,0}`.
    pub fn is_ill_conditioned(&self, n: u32, k: u32) -> bool {
        let g = self.gamma();
        ln_sigma(n, k, g) < libm::log(SIGMA_FLOOR) + ln_sigma(0, 0, g)
    }

    /// `ψ̂_{n,k}^{±}`.
    pub fn psi_hat(&self, idx: PsiIndex, p: FanBeamPoint) -> Complex64 {
        psi_raw(idx, p, self.gamma()) / libm::sqrt(self.norm_sq)
    }

    /// Unnormalised `Z_{n,k}`.
    pub fn zernike(&self, n: u32, k: u32) -> Result<&PolyZZbar> {
        self.check(n)?;
        Ok(&self.zernike[n as usize][k as usize])
    }

    /// `1/(√c_γ σ_{n,k})`, the factor turning `Z` into `Ẑ`.
    pub fn zhat_scale(&self, n: u32, k: u32) -> f64 {
        libm::exp(-ln_sigma(n, k, self.gamma())) / libm::sqrt(self.norm_sq)
    }

    /// `Ẑ_{n,k}`.
    pub fn zhat(&self, n: u32, k: u32) -> Result<PolyZZbar> {
        Ok(self.zernike(n, k)?.scale_re(self.zhat_scale(n, k)))
    }

    /// Leading coefficient of `Ẑ_{n,k}`.
    pub fn zhat_leading(&self, n: u32, k: u32) -> Complex64 {
        zernike_leading(n, k, self.gamma()) * self.zhat_scale(n, k)
    }

    /// `Σ c_{n,k} Ẑ_{n,k}` as a polynomial.
    pub fn synthesize(&self, s: &ZernikeSeries) -> Result<PolyZZbar> {
        let mut out = PolyZZbar::zero();
        for ((n, k), c) in s.iter() {
            if c != Complex64::new(0.0, 0.0) {
                out += &self.zhat(n, k)?.scale(c);
            }
        }
        Ok(out)
    }

    /// Coefficients `⟨P, Ẑ_{n,k}⟩` for `n ≤ deg P`.
    pub fn analyze(&self, p: &PolyZZbar) -> Result<ZernikeSeries> {
        let mut s = ZernikeSeries::new();
        let Some(deg) = p.degree() else {
            return Ok(s);
        };
        self.check(deg)?;
        for n in 0..=deg {
            for k in 0..=n {
                let c = disk_inner_exact(p, &self.zhat(n, k)?, self.gamma());
                if c != Complex64::new(0.0, 0.0) {
                    s.insert(n, k, c);
                }
            }
        }
        Ok(s)
    }

    /// Holomorphic `Σ a_n z^n` as coefficients on `Ẑ_{n,0}`.
    pub fn holomorphic_to_zhat(&self, p: &PolyZZbar) -> Result<BTreeMap<u32, Complex64>> {
        if !p.is_holomorphic() {
            return Err(Error::Precondition("polynomial is not holomorphic".into()));
        }
        let mut out = BTreeMap::new();
        for (&(a, _), &c) in p.terms() {
            self.check(a)?;
            out.insert(a, c / self.zhat_leading(a, 0));
        }
        Ok(out)
    }

    /// Antiholomorphic `Σ b_n z̄^n` as coefficients on `Ẑ_{n,n}`.
    pub fn antiholomorphic_to_zhat(&self, p: &PolyZZbar) -> Result<BTreeMap<u32, Complex64>> {
        if !p.is_antiholomorphic() {
            return Err(Error::Precondition("polynomial is not antiholomorphic".into()));
        }
        let mut out = BTreeMap::new();
        for (&(_, b), &c) in p.terms() {
            self.check(b)?;
            out.insert(b, c / self.zhat_leading(b, b));
        }
        Ok(out)
    }
}

/// Index set used by projections: all `ψ^{±}_{n,k}` with `n ≤ n_max` and
/// `k_lo(n) ≤ k ≤ k_hi(n)`.
pub fn index_box(n_max: u32, parity: Parity, k_margin: u32) -> Vec<PsiIndex> {
    let mut out = Vec::new();
    let m = k_margin as i32;
    for n in 0..=n_max {
        for k in -m..=(n as i32 + m + 1) {
            out.push(PsiIndex::new(n, k, parity));
        }
    }
    out
}

pub(crate) fn check_sigma(basis: &Basis, indices: &[(u32, u32)]) -> Result<()> {
    let bad: Vec<(u32, u32)> = indices.iter().copied().filter(|&(n, k)| basis.is_ill_conditioned(n, k)).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::IllConditioned { indices: bad })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        assert!((sigma(0, 0, 0.0) - 2.0 * libm::sqrt(PI)).abs() < 1e-14);
        for n in 0..12 {
            for k in 0..=n {
                let want = 2.0 * libm::sqrt(PI / (n as f64 + 1.0));
                assert!((sigma(n, k, 0.0) - want).abs() < 1e-13 * want);
                assert!((sigma(n, k, 0.37) - sigma(n, n - k, 0.37)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zernike_leading_and_support() {
        for &g in &[-0.5, 0.0, 0.6] {
            for n in 0..9 {
                for k in 0..=n {
                    let z = zernike_build(n, k, g);
                    for (&(a, b), _) in z.terms() {
                        assert!(a + b <= n && (n - a - b) % 2 == 0);
                        assert_eq!(a as i64 - b as i64, n as i64 - 2 * k as i64);
                    }
                    let lead = z.coeff(n - k, k);
                    let want = zernike_leading(n, k, g);
                    assert!((lead - want).norm() < 1e-12 * want.norm());
                }
                assert_eq!(zernike_build(n, 0, g).num_terms(), 1);
                assert_eq!(zernike_build(n, n, g).num_terms(), 1);
            }
        }
    }

    #[test]
    fn audit_constant() {
        let r = normalization_audit(0.0, 8).unwrap();
        // π²/2 for ‖L̂_n‖² at γ = 0, divided by 2π
        assert!((r.norm_sq - PI / 4.0).abs() < 1e-12);
        assert!(r.spread < AUDIT_TOL);
    }

    #[test]
    fn conjugate_index() {
        let i = PsiIndex::plus(4, 1);
        assert_eq!(i.conjugate(), PsiIndex::plus(4, 3));
        assert_eq!(PsiIndex::minus(3, 1).conjugate(), PsiIndex::minus(3, 3));
        assert_eq!(Parity::parse("−"), Some(Parity::Minus));
    }

    #[test]
    fn zhat_orthonormal() {
        let b = Basis::new(0.3, 5).unwrap();
        for n in 0..=5 {
            for k in 0..=n {
                let z = b.zhat(n, k).unwrap();
                for m in 0..=5 {
                    for j in 0..=m {
                        let v = disk_inner_exact(&z, &b.zhat(m, j).unwrap(), 0.3);
                        let want = if (n, k) == (m, j) { 1.0 } else { 0.0 };
                        assert!((v - Complex64::new(want, 0.0)).norm() < 1e-10, "{n},{k} {m},{j}");
                    }
                }
            }
        }
    }

    #[test]
    fn basis_range_error() {
        let b = Basis::new(0.0, 3).unwrap();
        assert!(matches!(b.zernike(4, 0), Err(Error::BasisRange { .. })));
    }
}
