//! Coefficient-level data space: sinograms as coefficients on `ψ̂^{±}_{n,k}`,
//! the orthogonal blocks `Π₀, Π_{2j}, Π_⊥, Π_{2j+1}` and the range test.
//!
//! Index layout, per parity:
//!
//! * `+`: `0 ≤ k ≤ n` is `Π₀`; `k = −j` and `k = n + j` (`j ≥ 1`) are the two
//!   diagonals of `Π_{2j}`.
//! * `−`: `1 ≤ k ≤ n` is `Π_⊥`; `k = −j` and `k = n + j + 1` (`j ≥ 0`) are the
//!   two diagonals of `Π_{2j+1}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::basis::{sigma, Parity, PsiIndex};
use crate::{Error, Result};

/// Sparse coefficients on the orthonormal fan-beam family.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SinoCoeffs {
    pub gamma: f64,
    coeffs: BTreeMap<PsiIndex, Complex64>,
}

impl SinoCoeffs {
    pub fn new(gamma: f64) -> Self {
        Self { gamma, coeffs: BTreeMap::new() }
    }

    pub fn from_entries<I: IntoIterator<Item = (PsiIndex, Complex64)>>(gamma: f64, it: I) -> Self {
        let mut s = Self::new(gamma);
        for (i, c) in it {
            s.add(i, c);
        }
        s
    }

    pub fn add(&mut self, idx: PsiIndex, c: Complex64) {
        *self.coeffs.entry(idx).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn set(&mut self, idx: PsiIndex, c: Complex64) {
        self.coeffs.insert(idx, c);
    }

    pub fn get(&self, idx: PsiIndex) -> Complex64 {
        self.coeffs.get(&idx).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (PsiIndex, Complex64)> + '_ {
        self.coeffs.iter().map(|(&i, &c)| (i, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sq())
    }

    pub fn max_degree(&self) -> u32 {
        self.coeffs.keys().map(|i| i.n).max().unwrap_or(0)
    }

    /// Keeps entries with `|c| > tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        Self::from_entries(self.gamma, self.iter().filter(|(_, c)| c.norm() > tol))
    }

    pub fn filter<F: Fn(PsiIndex) -> bool>(&self, keep: F) -> Self {
        Self::from_entries(self.gamma, self.iter().filter(|(i, _)| keep(*i)))
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in other.iter() {
            out.add(i, c);
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in other.iter() {
            out.add(i, -c);
        }
        out
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self::from_entries(self.gamma, self.iter().map(|(i, c)| (i, c * s)))
    }

    /// Largest coefficient of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.minus(other).coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// The single parity present, if homogeneous and nonempty.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.coeffs.keys().map(|i| i.parity);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }
}

/// One of the orthogonal pieces of the data space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    Pi0,
    Pi2j(u32),
    PiPerp,
    Pi2j1(u32),
}

impl Block {
    pub fn parity(self) -> Parity {
        match self {
            Block::Pi0 | Block::Pi2j(_) => Parity::Plus,
            Block::PiPerp | Block::Pi2j1(_) => Parity::Minus,
        }
    }

    /// Order of the tt tensors feeding this block (`0` for `Π₀`, `1` for `Π_⊥`).
    pub fn tensor_order(self) -> u32 {
        match self {
            Block::Pi0 => 0,
            Block::PiPerp => 1,
            Block::Pi2j(j) => 2 * j,
            Block::Pi2j1(j) => 2 * j + 1,
        }
    }

    /// Blocks that make up the range of the order-`m` transform.
    pub fn for_order(m: u32) -> Vec<Block> {
        if m.is_multiple_of(2) {
            let mut v = alloc::vec![Block::Pi0];
            v.extend((1..=m / 2).map(Block::Pi2j));
            v
        } else {
            let mut v = alloc::vec![Block::PiPerp];
            v.extend((0..=(m - 1) / 2).map(Block::Pi2j1));
            v
        }
    }

    /// The two diagonals of a `Π_{2j}` / `Π_{2j+1}` block at degree `n`.
    pub fn diagonal_indices(self, n: u32) -> Option<(PsiIndex, PsiIndex)> {
        let ni = n as i32;
        match self {
            Block::Pi2j(j) => Some((PsiIndex::plus(n, -(j as i32)), PsiIndex::plus(n, ni + j as i32))),
            Block::Pi2j1(j) => Some((PsiIndex::minus(n, -(j as i32)), PsiIndex::minus(n, ni + j as i32 + 1))),
            _ => None,
        }
    }
}

/// The block containing `ψ̂^{±}_{n,k}`.
pub fn block_of(idx: PsiIndex) -> Block {
    let n = idx.n as i32;
    let k = idx.k;
    match idx.parity {
        Parity::Plus => {
            if (0..=n).contains(&k) {
                Block::Pi0
            } else if k < 0 {
                Block::Pi2j((-k) as u32)
            } else {
                Block::Pi2j((k - n) as u32)
            }
        }
        Parity::Minus => {
            if (1..=n).contains(&k) {
                Block::PiPerp
            } else if k <= 0 {
                Block::Pi2j1((-k) as u32)
            } else {
                Block::Pi2j1((k - n - 1) as u32)
            }
        }
    }
}

/// Restriction of `u` to `block`.
pub fn project(block: Block, u: &SinoCoeffs) -> Result<SinoCoeffs> {
    if let Some(p) = u.iter().map(|(i, _)| i.parity).find(|&p| p != block.parity()) {
        return Err(Error::Parity(format!(
            "block {block:?} holds parity {} data, input contains parity {p}",
            block.parity()
        )));
    }
    Ok(u.filter(|i| block_of(i) == block))
}

/// `(Σ (n+1)^{2α} |a_n|²)^{1/2}` for a sequence indexed by `n`.
pub fn scale_norm(seq: &[(u32, Complex64)], alpha: f64) -> f64 {
    let s: f64 = seq.iter().map(|&(n, a)| libm::pow(n as f64 + 1.0, 2.0 * alpha) * a.norm_sqr()).sum();
    libm::sqrt(s)
}

/// Thresholds for [`range_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeTolerances {
    /// Condition (a) passes when the out-of-range energy is at most
    /// `a_rel · ‖u‖`.
    pub a_rel: f64,
    /// Largest acceptable `h^{(1+γ)/2}` norm of a diagonal.
    pub b_max: f64,
    /// Largest acceptable `Σ |u_{n,k}|²/σ²` over `Π₀` or `Π_⊥`.
    pub c_max: f64,
}

impl Default for RangeTolerances {
    fn default() -> Self {
        Self { a_rel: 1e-8, b_max: 1e12, c_max: 1e12 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionA {
    pub pass: bool,
    /// `ℓ²` norm of the coefficients outside the order-`m` blocks.
    pub residual: f64,
    pub offending: Vec<PsiIndex>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalNorm {
    pub j: u32,
    /// Norm of the `k = −j` diagonal.
    pub lower: f64,
    /// Norm of the `k = n + j` (or `n + j + 1`) diagonal.
    pub upper: f64,
    pub norm: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionC {
    pub sum: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeReport {
    pub order: u32,
    pub gamma: f64,
    pub a: ConditionA,
    pub b: Vec<DiagonalNorm>,
    pub c: ConditionC,
    pub pass: bool,
}

type Diagonal = Vec<(u32, Complex64)>;

/// Finite-data version of the range characterisation for order `m`.
pub fn range_check(u: &SinoCoeffs, m: u32, tol: &RangeTolerances) -> RangeReport {
    let gamma = u.gamma;
    let parity = Parity::of_order(m);
    let allowed = Block::for_order(m);
    let mut offending = Vec::new();
    let mut out_energy = 0.0;
    // per j: (lower diagonal, upper diagonal)
    let mut diag: BTreeMap<u32, (Diagonal, Diagonal)> = BTreeMap::new();
    let mut c_sum = 0.0;
    let floor = tol.a_rel * u.norm();
    for (idx, c) in u.iter() {
        let b = block_of(idx);
        if idx.parity != parity || !allowed.contains(&b) {
            if c.norm() > floor {
                offending.push(idx);
            }
            out_energy += c.norm_sqr();
            continue;
        }
        match b {
            Block::Pi0 | Block::PiPerp => {
                let s = sigma(idx.n, idx.k as u32, gamma);
                c_sum += c.norm_sqr() / (s * s);
            }
            Block::Pi2j(j) | Block::Pi2j1(j) => {
                let e = diag.entry(j).or_default();
                if idx.k <= 0 {
                    e.0.push((idx.n, c));
                } else {
                    e.1.push((idx.n, c));
                }
            }
        }
    }
    let residual = libm::sqrt(out_energy);
    let a = ConditionA { pass: residual <= floor, residual, offending };
    let alpha = 0.5 * (1.0 + gamma);
    let b: Vec<DiagonalNorm> = allowed
        .iter()
        .filter_map(|blk| match *blk {
            Block::Pi2j(j) | Block::Pi2j1(j) => Some(j),
            _ => None,
        })
        .map(|j| {
            let (lo, hi) = diag.get(&j).cloned().unwrap_or_default();
            let lower = scale_norm(&lo, alpha);
            let upper = scale_norm(&hi, alpha);
            let norm = libm::hypot(lower, upper);
            DiagonalNorm { j, lower, upper, norm, pass: norm <= tol.b_max }
        })
        .collect();
    let c = ConditionC { sum: c_sum, pass: c_sum <= tol.c_max };
    let pass = a.pass && b.iter().all(|d| d.pass) && c.pass;
    RangeReport { order: m, gamma, a, b, c, pass }
}
