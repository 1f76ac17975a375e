//! Weighted spaces `⊕ᵢ H^(λ+2i)` with kernel weights `μᵢ`, the matrix kernel `B^(λ,μ)`,
//! sampled positivity and the kernel recursion `(1−zw̄)B^(λ,μ) = B^(λ−1,μ″)`.
//!
//! A block carrying kernel `μ·K` has squared norms divided by `μ`, so the Gram entry of
//! `z^d` in block `i` is `(1/μᵢ)·d!/(λ+2i)_d`.

use num_complex::Complex64;

use crate::algebra::{binomial, falling, monomial_norms, pochhammer, rising_over_factorial, Scalar};
use crate::blockops::defect_parameters;
use crate::error::{Error, Result};
use crate::linalg::{cplx, min_eigenvalue, CMat};

/// One summand `H^(λ+2·index)` with kernel weight `mu`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceBlock<T> {
    pub index: usize,
    pub mu: T,
}

/// Descriptor of a truncated weighted direct sum of `H^(λ+2i)` spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSpaceDesc<T> {
    pub lambda: T,
    pub blocks: Vec<SpaceBlock<T>>,
    /// Truncation degree per block.
    pub trunc: usize,
}

impl<T: Scalar> WeightedSpaceDesc<T> {
    /// `⊕_{i<n} H^(λ+2i)` with weights `mu`; every weight must be positive.
    pub fn new(lambda: T, mu: &[T], trunc: usize) -> Result<Self> {
        if mu.iter().any(|m| *m <= T::zero()) {
            return Err(Error::Precondition("space weights must be positive".into()));
        }
        Ok(Self::with_blocks(
            lambda,
            mu.iter().cloned().enumerate().map(|(index, mu)| SpaceBlock { index, mu }).collect(),
            trunc,
        ))
    }

    /// Keeps only the summands with positive weight (zero weight means the summand is absent).
    pub fn from_nonnegative(lambda: T, mu: &[T], trunc: usize) -> Result<Self> {
        if mu.iter().any(|m| *m < T::zero()) {
            return Err(Error::Precondition("space weights must be nonnegative".into()));
        }
        Ok(Self::with_blocks(
            lambda,
            mu.iter()
                .cloned()
                .enumerate()
                .filter(|(_, m)| !m.is_zero())
                .map(|(index, mu)| SpaceBlock { index, mu })
                .collect(),
            trunc,
        ))
    }

    pub fn with_blocks(lambda: T, blocks: Vec<SpaceBlock<T>>, trunc: usize) -> Self {
        Self { lambda, blocks, trunc }
    }

    /// The scalar space `H^(λ)` with unit weight.
    pub fn scalar(lambda: T, trunc: usize) -> Self {
        Self::with_blocks(lambda, vec![SpaceBlock { index: 0, mu: T::one() }], trunc)
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_len(&self) -> usize {
        self.trunc + 1
    }

    pub fn dim(&self) -> usize {
        self.n_blocks() * self.block_len()
    }

    /// Parameter `λ + 2·index` of the block at position `pos`.
    pub fn block_lambda(&self, pos: usize) -> T {
        self.lambda.clone() + T::from_int(2 * self.blocks[pos].index as i64)
    }

    /// Flat coordinate of degree `d` in the block at position `pos`.
    pub fn offset(&self, pos: usize, d: usize) -> usize {
        pos * self.block_len() + d
    }

    /// Gram diagonal `(1/μ)·d!/(λ+2i)_d`, block by block.
    pub fn gram_diagonal(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.dim());
        for pos in 0..self.n_blocks() {
            let inv_mu = T::one() / self.blocks[pos].mu.clone();
            for g in monomial_norms(&self.block_lambda(pos), self.trunc) {
                out.push(g * inv_mu.clone());
            }
        }
        out
    }

    /// Flat indices of every block's degrees `0..=max_degree`.
    pub fn columns_up_to(&self, max_degree: usize) -> Vec<usize> {
        (0..self.n_blocks())
            .flat_map(|pos| (0..=max_degree.min(self.trunc)).map(move |d| (pos, d)))
            .map(|(pos, d)| self.offset(pos, d))
            .collect()
    }

    pub fn to_f64(&self) -> WeightedSpaceDesc<f64> {
        WeightedSpaceDesc {
            lambda: self.lambda.to_f64(),
            blocks: self.blocks.iter().map(|b| SpaceBlock { index: b.index, mu: b.mu.to_f64() }).collect(),
            trunc: self.trunc,
        }
    }
}

/// A kernel evaluation `B(z,w)`.
#[derive(Clone, Debug)]
pub struct KernelSample {
    pub z: Complex64,
    pub w: Complex64,
    pub value: CMat,
}

/// `∂_z^a ∂_{w̄}^b (1−zw̄)^{−s}` in closed form.
fn mixed_derivative(a: usize, b: usize, s: f64, z: Complex64, w: Complex64) -> Complex64 {
    let wb = w.conj();
    let base = 1.0 - z * wb;
    let mut acc = cplx(0.0, 0.0);
    for i in 0..=a.min(b) {
        let coef = binomial::<f64>(a, i) * falling::<f64>(b, i) * pochhammer(&(s + b as f64), a - i) * pochhammer(&s, b);
        acc += z.powu((b - i) as u32) * wb.powu((a - i) as u32) * base.powf(-(s + (a + b - i) as f64)) * coef;
    }
    acc
}

/// Coefficient of `(ℓ, p)` in the kernel before the mixed derivative of block `j`.
fn kernel_weight<T: Scalar>(lambda: &T, mu_j: &T, l: usize, p: usize, j: usize) -> T {
    let s = lambda.clone() + T::from_int(2 * j as i64);
    binomial::<T>(l, j) * binomial::<T>(p, j) * mu_j.clone() / (pochhammer(&s, l - j) * pochhammer(&s, p - j))
}

/// The n×n matrix kernel `B^(λ,μ)(z,w)`.
pub fn matrix_kernel_b(lambda: f64, mu: &[f64], z: Complex64, w: Complex64) -> Result<KernelSample> {
    if !(z.norm() < 1.0 && w.norm() < 1.0) {
        return Err(Error::Precondition("kernel points must lie in the open disc".into()));
    }
    let n = mu.len();
    let value = CMat::from_fn(n, n, |l, p| {
        (0..=l.min(p))
            .map(|j| {
                mixed_derivative(l - j, p - j, lambda + 2.0 * j as f64, z, w) * kernel_weight(&lambda, &mu[j], l, p, j)
            })
            .sum()
    });
    Ok(KernelSample { z, w, value })
}

/// Coefficient of `z^r w̄^t` in entry `(ℓ, p)` of `B^(λ,μ)`; nonzero only if `r − t = p − ℓ`.
pub fn kernel_series_coeff<T: Scalar>(lambda: &T, mu: &[T], l: usize, p: usize, r: usize, t: usize) -> T {
    if r + l != t + p {
        return T::zero();
    }
    let mut acc = T::zero();
    for (j, mu_j) in mu.iter().enumerate().take(l.min(p) + 1) {
        let s = lambda.clone() + T::from_int(2 * j as i64);
        let m = r + l - j;
        let coef = rising_over_factorial(&s, m) * falling::<T>(m, l - j) * falling::<T>(m, p - j);
        acc = acc + kernel_weight(lambda, mu_j, l, p, j) * coef;
    }
    acc
}

/// Outcome of an exact (or tolerance-based, in the floating backend) identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactCheck {
    pub passed: bool,
    /// Largest absolute discrepancy; exactly zero when the rational check passes.
    pub residual: f64,
    pub checked: usize,
    pub first_failure: Option<String>,
}

impl ExactCheck {
    pub fn from_parts(residual: f64, checked: usize, first_failure: Option<String>) -> Self {
        Self { passed: first_failure.is_none(), residual, checked, first_failure }
    }
}

/// Compares `(1−zw̄)·B^(λ,μ)` with `B^(λ−1,μ″)` coefficient by coefficient to total degree `degree`.
pub fn check_god_identity<T: Scalar>(lambda: &T, mu: &[T], degree: usize) -> Result<ExactCheck> {
    if *lambda <= T::one() {
        return Err(Error::Precondition("kernel recursion needs λ > 1".into()));
    }
    let params = defect_parameters(lambda, mu)?;
    let lower = lambda.clone() - T::one();
    let n = mu.len();
    let mut worst = 0.0f64;
    let mut checked = 0;
    let mut first = None;
    for l in 0..n {
        for p in 0..n {
            for r in 0..=degree {
                for t in 0..=(degree - r) {
                    if r + l != t + p {
                        continue;
                    }
                    let mut lhs = kernel_series_coeff(lambda, mu, l, p, r, t);
                    if r > 0 && t > 0 {
                        lhs = lhs - kernel_series_coeff(lambda, mu, l, p, r - 1, t - 1);
                    }
                    let rhs = kernel_series_coeff(&lower, &params.mu_doubleprime, l, p, r, t);
                    let diff = (lhs - rhs).abs_val();
                    let bad = if T::is_exact() { !diff.is_zero() } else { diff.to_f64() > T::eq_tolerance() };
                    if bad && first.is_none() {
                        first = Some(format!("entry ({l},{p}), coefficient z^{r} w̄^{t}"));
                    }
                    worst = worst.max(diff.to_f64());
                    checked += 1;
                }
            }
        }
    }
    Ok(ExactCheck::from_parts(worst, checked, first))
}

/// Default sampling grid: 12 points on the circle of radius 0.3 and 13 on radius 0.6.
pub fn default_positivity_grid() -> Vec<Complex64> {
    let tau = std::f64::consts::TAU;
    let inner = (0..12).map(|k| Complex64::from_polar(0.3, tau * k as f64 / 12.0));
    let outer = (0..13).map(|k| Complex64::from_polar(0.6, tau * (k as f64 + 0.5) / 13.0));
    inner.chain(outer).collect()
}

/// Smallest eigenvalue of the block Gram matrix `[B(zᵢ, z_k)]`.
pub fn check_kernel_positivity(lambda: f64, mu: &[f64], points: &[Complex64]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Precondition("positivity needs at least one point".into()));
    }
    let n = mu.len();
    let m = points.len();
    let mut g = CMat::zeros(n * m, n * m);
    for (i, &zi) in points.iter().enumerate() {
        for (k, &zk) in points.iter().enumerate() {
            let b = matrix_kernel_b(lambda, mu, zi, zk)?.value;
            g.view_mut((i * n, k * n), (n, n)).copy_from(&b);
        }
    }
    Ok(min_eigenvalue(&g))
}
