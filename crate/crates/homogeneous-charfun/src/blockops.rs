//! Block operators on `⊕ᵢ H^(λ+2i)`: the multiplication operator `A`, the inclusions `B⁺`/`B⁻`,
//! the middle operator `C`, the weight maps `μ ↦ μ′, μ″`, Gram adjoints and the exact identities
//! that tie them together.
//!
//! Matrices are stored in the monomial basis. The orthonormal form is
//! `G_cod^{1/2}·M·G_dom^{−1/2}` with the Gram diagonals of [`WeightedSpaceDesc`].

use nalgebra::DMatrix;

use crate::algebra::{falling, monomial_norms, pochhammer, Scalar};
use crate::error::{Error, Result};
use crate::linalg::{cplx, spectral_norm_real, CMat, DenseMat};
use crate::spaces::{ExactCheck, SpaceBlock, WeightedSpaceDesc};

/// Basis in which a matrix is expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// Monomials `z^d` with the Gram inner product.
    Monomial,
    /// Normalized monomials.
    Orthonormal,
}

/// A grid of degree-truncated blocks between two weighted spaces, in the monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockOperator<T> {
    pub matrix: DenseMat<T>,
    pub domain: WeightedSpaceDesc<T>,
    pub codomain: WeightedSpaceDesc<T>,
}

impl<T: Scalar> BlockOperator<T> {
    /// Builds from a rule sending `(codomain pos, domain pos, degree d)` to the image monomial
    /// `coef·z^e`; images with `e > N` are truncated.
    pub fn from_rule(
        domain: WeightedSpaceDesc<T>,
        codomain: WeightedSpaceDesc<T>,
        rule: impl Fn(usize, usize, usize) -> Option<(usize, T)>,
    ) -> Self {
        let mut matrix = DenseMat::zeros(codomain.dim(), domain.dim());
        for i in 0..codomain.n_blocks() {
            for j in 0..domain.n_blocks() {
                for d in 0..=domain.trunc {
                    if let Some((e, v)) = rule(i, j, d) {
                        if e <= codomain.trunc && !v.is_zero() {
                            matrix.set(codomain.offset(i, e), domain.offset(j, d), v);
                        }
                    }
                }
            }
        }
        Self { matrix, domain, codomain }
    }

    pub fn identity(space: WeightedSpaceDesc<T>) -> Self {
        Self { matrix: DenseMat::identity(space.dim()), domain: space.clone(), codomain: space }
    }

    /// Block at codomain position `i`, domain position `j`.
    pub fn block(&self, i: usize, j: usize) -> DenseMat<T> {
        let (r0, c0) = (self.codomain.offset(i, 0), self.domain.offset(j, 0));
        let (nr, nc) = (self.codomain.block_len(), self.domain.block_len());
        let mut b = DenseMat::zeros(nr, nc);
        for r in 0..nr {
            for c in 0..nc {
                b.set(r, c, self.matrix.get(r0 + r, c0 + c).clone());
            }
        }
        b
    }

    pub fn is_zero_block(&self, i: usize, j: usize) -> bool {
        let b = self.block(i, j);
        (0..b.rows()).all(|r| (0..b.cols()).all(|c| b.get(r, c).is_zero()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.domain.dim(), other.codomain.dim(), "incompatible spaces in composition");
        Self {
            matrix: self.matrix.mul(&other.matrix),
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { matrix: self.matrix.add(&other.matrix), domain: self.domain.clone(), codomain: self.codomain.clone() }
    }

    pub fn neg(&self) -> Self {
        Self { matrix: self.matrix.neg(), domain: self.domain.clone(), codomain: self.codomain.clone() }
    }

    /// Real orthonormal-basis matrix.
    pub fn orthonormal_real(&self) -> DMatrix<f64> {
        let gc: Vec<f64> = self.codomain.gram_diagonal().iter().map(|g| g.to_f64().sqrt()).collect();
        let gd: Vec<f64> = self.domain.gram_diagonal().iter().map(|g| g.to_f64().sqrt()).collect();
        DMatrix::from_fn(self.matrix.rows(), self.matrix.cols(), |r, c| {
            self.matrix.get(r, c).to_f64() * gc[r] / gd[c]
        })
    }

    /// Complex orthonormal-basis matrix.
    pub fn orthonormal(&self) -> CMat {
        self.orthonormal_real().map(|x| cplx(x, 0.0))
    }

    /// Matrix in the requested basis.
    pub fn in_basis(&self, basis: Basis) -> DMatrix<f64> {
        match basis {
            Basis::Monomial => DMatrix::from_fn(self.matrix.rows(), self.matrix.cols(), |r, c| self.matrix.get(r, c).to_f64()),
            Basis::Orthonormal => self.orthonormal_real(),
        }
    }

    pub fn to_f64(&self) -> BlockOperator<f64> {
        BlockOperator {
            matrix: self.matrix.map(|x| x.to_f64()),
            domain: self.domain.to_f64(),
            codomain: self.codomain.to_f64(),
        }
    }
}

impl BlockOperator<f64> {
    /// Inverse of [`BlockOperator::orthonormal_real`].
    pub fn from_orthonormal(m: &DMatrix<f64>, domain: WeightedSpaceDesc<f64>, codomain: WeightedSpaceDesc<f64>) -> Self {
        let gc: Vec<f64> = codomain.gram_diagonal().iter().map(|g| g.sqrt()).collect();
        let gd: Vec<f64> = domain.gram_diagonal().iter().map(|g| g.sqrt()).collect();
        let mut matrix = DenseMat::zeros(m.nrows(), m.ncols());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                matrix.set(r, c, m[(r, c)] * gd[c] / gc[r]);
            }
        }
        Self { matrix, domain, codomain }
    }
}

/// Adjoint with respect to the Gram inner products: `M* = G_dom⁻¹·Mᵀ·G_cod`.
pub fn weighted_adjoint<T: Scalar>(op: &BlockOperator<T>) -> BlockOperator<T> {
    let gd = op.domain.gram_diagonal();
    let gc = op.codomain.gram_diagonal();
    let mut m = DenseMat::zeros(op.matrix.cols(), op.matrix.rows());
    for r in 0..op.matrix.rows() {
        for c in 0..op.matrix.cols() {
            let v = op.matrix.get(r, c);
            if !v.is_zero() {
                m.set(c, r, v.clone() * gc[r].clone() / gd[c].clone());
            }
        }
    }
    BlockOperator { matrix: m, domain: op.codomain.clone(), codomain: op.domain.clone() }
}

/// Multiplication by `z` on `H^(λ)`, truncated at degree `N`.
pub fn weighted_shift<T: Scalar>(lambda: T, n_trunc: usize) -> BlockOperator<T> {
    let space = WeightedSpaceDesc::scalar(lambda, n_trunc);
    BlockOperator::from_rule(space.clone(), space, |_, _, d| Some((d + 1, T::one())))
}

/// `∂^k : H^(λ) → H^(λ+2k)` with unit weights.
pub fn derivative_block<T: Scalar>(lambda_from: T, k: usize, n_trunc: usize) -> BlockOperator<T> {
    let lambda_to = lambda_from.clone() + T::from_int(2 * k as i64);
    let dom = WeightedSpaceDesc::scalar(lambda_from, n_trunc);
    let cod = WeightedSpaceDesc::scalar(lambda_to, n_trunc);
    BlockOperator::from_rule(dom, cod, |_, _, d| (d >= k).then(|| (d - k, falling::<T>(d, k))))
}

/// The multiplication operator `M^(λ,μ)` in the coordinates of `⊕ᵢ H^(λ+2i)`.
pub fn build_a<T: Scalar>(lambda: T, mu: &[T], n_trunc: usize) -> Result<BlockOperator<T>> {
    let space = WeightedSpaceDesc::new(lambda, mu, n_trunc)?;
    Ok(build_a_on(&space))
}

/// `A` on a given descriptor (blocks must be consecutive from 0).
pub fn build_a_on<T: Scalar>(space: &WeightedSpaceDesc<T>) -> BlockOperator<T> {
    let lam = space.lambda.clone();
    let idx: Vec<usize> = space.blocks.iter().map(|b| b.index).collect();
    BlockOperator::from_rule(space.clone(), space.clone(), |p, q, d| {
        let (i, j) = (idx[p], idx[q]);
        if i == j {
            return Some((d + 1, T::one()));
        }
        if i < j || d + j + 1 < i {
            return None;
        }
        let k = i - j - 1;
        let coef = -pochhammer(&T::from_int(j as i64 + 1), i - j)
            / pochhammer(&(lam.clone() + T::from_int(2 * j as i64)), 2 * (i - j) - 1);
        Some((d - k, coef * falling::<T>(d, k)))
    })
}

/// Inclusion-type operator with blocks `b_ij = (j+1)_{i−j}/(λ+2j)_{2i−2j}·∂^{i−j}` from the
/// domain (parameter `λ`) into the codomain (parameter `λ+1`).
pub fn build_b_between<T: Scalar>(domain: &WeightedSpaceDesc<T>, codomain: &WeightedSpaceDesc<T>) -> BlockOperator<T> {
    let lam = domain.lambda.clone();
    let di: Vec<usize> = domain.blocks.iter().map(|b| b.index).collect();
    let ci: Vec<usize> = codomain.blocks.iter().map(|b| b.index).collect();
    BlockOperator::from_rule(domain.clone(), codomain.clone(), |p, q, d| {
        let (i, j) = (ci[p], di[q]);
        if i < j || d + j < i {
            return None;
        }
        let coef = pochhammer(&T::from_int(j as i64 + 1), i - j)
            / pochhammer(&(lam.clone() + T::from_int(2 * j as i64)), 2 * (i - j));
        Some((d - (i - j), coef * falling::<T>(d, i - j)))
    })
}

/// `B` from `⊕ H^(λ+2i)` weighted by `mu` into `⊕ H^(λ+2i+1)` weighted by `mu_target`.
pub fn build_bplus<T: Scalar>(lambda: T, mu: &[T], mu_target: &[T], n_trunc: usize) -> Result<BlockOperator<T>> {
    let dom = WeightedSpaceDesc::new(lambda.clone(), mu, n_trunc)?;
    let cod = WeightedSpaceDesc::new(lambda + T::one(), mu_target, n_trunc)?;
    Ok(build_b_between(&dom, &cod))
}

/// Weight lists derived from `(λ, μ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectParameters<T> {
    /// Reciprocals `1/μ′_k`; zero marks a summand absent from the defect space.
    pub nu_prime: Vec<T>,
    /// `μ″_k`; zero marks a summand absent from the adjoint defect space.
    pub mu_doubleprime: Vec<T>,
    /// All `μ′`, `μ″` strictly positive.
    pub generic: bool,
}

impl<T: Scalar> DefectParameters<T> {
    /// `μ′_k = 1/ν′_k`, or `None` where `ν′_k` vanishes.
    pub fn mu_prime(&self) -> Vec<Option<T>> {
        self.nu_prime.iter().map(|v| (!v.is_zero()).then(|| T::one() / v.clone())).collect()
    }

    pub fn require_generic(&self) -> Result<()> {
        if self.generic {
            Ok(())
        } else {
            Err(Error::NonGeneric(format!(
                "1/μ′ = {:?}, μ″ = {:?}",
                self.nu_prime.iter().map(Scalar::to_f64).collect::<Vec<_>>(),
                self.mu_doubleprime.iter().map(Scalar::to_f64).collect::<Vec<_>>()
            )))
        }
    }
}

/// In floating point, a difference that cancels to rounding level is the exact zero of the
/// extremal weights; keep it zero so both backends drop the same blocks.
fn snap_cancellation<T: Scalar>(v: T, scale: &T) -> T {
    if !T::is_exact() && v.abs_val().to_f64() <= 64.0 * f64::EPSILON * scale.abs_val().to_f64() {
        T::zero()
    } else {
        v
    }
}

/// Computes `1/μ′` and `μ″`. Non-generic input still returns the values with `generic = false`.
pub fn defect_parameters<T: Scalar>(lambda: &T, mu: &[T]) -> Result<DefectParameters<T>> {
    if *lambda <= T::one() {
        return Err(Error::Precondition("defect parameters need λ > 1".into()));
    }
    if mu.is_empty() || mu.iter().any(|m| *m <= T::zero()) {
        return Err(Error::Precondition("weights must be positive and nonempty".into()));
    }
    let n = mu.len();
    let lk = |k: usize| lambda.clone() + T::from_int(2 * k as i64);
    let mut nu_prime = Vec::with_capacity(n);
    for k in 0..n {
        let lead = (lk(k) - T::one()) / lk(k) / mu[k].clone();
        let mut v = lead.clone();
        if k + 1 < n {
            let r = T::from_int(k as i64 + 1) / lk(k);
            v = v - r.clone() * r / mu[k + 1].clone();
        }
        nu_prime.push(snap_cancellation(v, &lead));
    }
    let mut mu_doubleprime = vec![mu[0].clone()];
    for k in 0..n - 1 {
        let kk = T::from_int(k as i64 + 1);
        let v = mu[k + 1].clone() - kk.clone() * kk * mu[k].clone() / ((lk(k) - T::one()) * lk(k));
        mu_doubleprime.push(snap_cancellation(v, &mu[k + 1]));
    }
    let generic = nu_prime.iter().chain(&mu_doubleprime).all(|v| *v > T::zero());
    Ok(DefectParameters { nu_prime, mu_doubleprime, generic })
}

/// Codomain of `B⁺`: `⊕ H^(λ+2k+1)` with weights `μ′`, dropping summands where `1/μ′ = 0`.
pub fn bplus_codomain<T: Scalar>(lambda: &T, params: &DefectParameters<T>, n_trunc: usize) -> Result<WeightedSpaceDesc<T>> {
    if params.nu_prime.iter().any(|v| *v < T::zero()) {
        return Err(Error::NonGeneric("negative 1/μ′ entry".into()));
    }
    let blocks = params
        .nu_prime
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(index, v)| SpaceBlock { index, mu: T::one() / v.clone() })
        .collect();
    Ok(WeightedSpaceDesc::with_blocks(lambda.clone() + T::one(), blocks, n_trunc))
}

/// Domain of `B⁻`: `⊕ H^(λ+2j−1)` with weights `μ″`, dropping summands where `μ″ = 0`.
pub fn bminus_domain<T: Scalar>(lambda: &T, params: &DefectParameters<T>, n_trunc: usize) -> Result<WeightedSpaceDesc<T>> {
    WeightedSpaceDesc::from_nonnegative(lambda.clone() - T::one(), &params.mu_doubleprime, n_trunc)
        .map_err(|_| Error::NonGeneric("negative μ″ entry".into()))
}

/// The pair `(B⁺, B⁻)` for `(λ, μ)`; absent summands are dropped.
pub fn build_b_pair<T: Scalar>(lambda: &T, mu: &[T], n_trunc: usize) -> Result<(BlockOperator<T>, BlockOperator<T>)> {
    let params = defect_parameters(lambda, mu)?;
    let space = WeightedSpaceDesc::new(lambda.clone(), mu, n_trunc)?;
    let plus = build_b_between(&space, &bplus_codomain(lambda, &params, n_trunc)?);
    let minus = build_b_between(&bminus_domain(lambda, &params, n_trunc)?, &space);
    Ok((plus, minus))
}

/// The middle operator `C : ⊕ H^(λ+2k+1) → ⊕ H^(λ+2j−1)`, block `(j,k)` a multiple of `(∂^{k−j+1})*`.
pub fn build_c<T: Scalar>(lambda: &T, mu: &[T], n_trunc: usize) -> Result<BlockOperator<T>> {
    let params = defect_parameters(lambda, mu)?;
    params.require_generic()?;
    let dom = bplus_codomain(lambda, &params, n_trunc)?;
    let cod = bminus_domain(lambda, &params, n_trunc)?;
    let (nup, mupp) = (&params.nu_prime, &params.mu_doubleprime);
    // Unweighted squared norms of each summand, long enough for the raised degrees.
    let n = mu.len();
    let norms_dom: Vec<Vec<T>> =
        (0..n).map(|k| monomial_norms(&(lambda.clone() + T::from_int(2 * k as i64 + 1)), n_trunc)).collect();
    let norms_cod: Vec<Vec<T>> =
        (0..n).map(|j| monomial_norms(&(lambda.clone() + T::from_int(2 * j as i64 - 1)), n_trunc + n + 1)).collect();
    let op = BlockOperator::from_rule(dom, cod, |j, k, d| {
        if j > k + 1 {
            return None;
        }
        let m = k + 1 - j;
        let e = d + m;
        if e > n_trunc {
            return None;
        }
        let adj = norms_dom[k][d].clone() / norms_cod[j][e].clone() * falling::<T>(e, m);
        let lj = lambda.clone() + T::from_int(2 * j as i64) - T::one();
        let coef = if j == k + 1 {
            T::from_int(k as i64 + 1) * mu[k].clone() * nup[k].clone() / (lambda.clone() + T::from_int(2 * k as i64) - T::one())
        } else {
            -mupp[j].clone() * nup[k].clone() * pochhammer(&T::from_int(j as i64 + 1), k - j)
                / pochhammer(&lj, 2 * (k - j) + 1)
        };
        Some((e, coef * adj))
    });
    Ok(op)
}

/// The constants `x_jk` of the orthonormal-basis middle operator (zero for `j > k+1`).
pub fn c_constants(lambda: f64, mu: &[f64]) -> Result<Vec<Vec<f64>>> {
    let p = defect_parameters(&lambda, mu)?;
    p.require_generic()?;
    let n = mu.len();
    let (nup, mupp) = (&p.nu_prime, &p.mu_doubleprime);
    Ok((0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    if j > k + 1 {
                        0.0
                    } else if j == k + 1 {
                        (k as f64 + 1.0) * mu[k] * (nup[k] / mupp[k + 1]).sqrt() / (lambda + 2.0 * k as f64 - 1.0)
                    } else {
                        -(mupp[j] * nup[k]).sqrt() * pochhammer(&(j as f64 + 1.0), k - j)
                            / pochhammer(&(lambda + 2.0 * j as f64 - 1.0), 2 * (k - j) + 1)
                    }
                })
                .collect()
        })
        .collect())
}

fn discrepancy<T: Scalar>(lhs: &BlockOperator<T>, rhs: &BlockOperator<T>, cols: &[usize], what: &str) -> ExactCheck {
    let (res, first) = lhs.matrix.column_discrepancy(&rhs.matrix, cols);
    let first = first.map(|c| {
        let bl = lhs.domain.block_len();
        format!("{what}: domain block {}, degree {}", c / bl, c % bl)
    });
    ExactCheck::from_parts(res, cols.len(), first)
}

/// `A*A + (B⁺)*B⁺ = I` on columns of degree `≤ N−1`.
pub fn check_defect_identity<T: Scalar>(lambda: &T, mu: &[T], n_trunc: usize) -> Result<ExactCheck> {
    defect_parameters(lambda, mu)?.require_generic()?;
    let a = build_a(lambda.clone(), mu, n_trunc)?;
    let (bp, _) = build_b_pair(lambda, mu, n_trunc)?;
    let lhs = weighted_adjoint(&a).compose(&a).add(&weighted_adjoint(&bp).compose(&bp));
    let id = BlockOperator::identity(a.domain.clone());
    Ok(discrepancy(&lhs, &id, &a.domain.columns_up_to(n_trunc.saturating_sub(1)), "A*A + B*B − I"))
}

/// `B⁻C = −A·(B⁺)*` on columns of degree `≤ N−n−1`.
pub fn check_c_equation<T: Scalar>(lambda: &T, mu: &[T], n_trunc: usize) -> Result<ExactCheck> {
    let c = build_c(lambda, mu, n_trunc)?;
    let a = build_a(lambda.clone(), mu, n_trunc)?;
    let (bp, bm) = build_b_pair(lambda, mu, n_trunc)?;
    let lhs = bm.compose(&c);
    let rhs = a.compose(&weighted_adjoint(&bp)).neg();
    let cols = c.domain.columns_up_to(n_trunc.saturating_sub(mu.len() + 1));
    Ok(discrepancy(&lhs, &rhs, &cols, "B⁻C + AB⁺*"))
}

/// The product formula at `z = 0`: `C·B⁺ = −(B⁻)*·A` on columns of degree `≤ N−n−1`.
pub fn check_master_at_zero<T: Scalar>(lambda: &T, mu: &[T], n_trunc: usize) -> Result<ExactCheck> {
    let c = build_c(lambda, mu, n_trunc)?;
    let a = build_a(lambda.clone(), mu, n_trunc)?;
    let (bp, bm) = build_b_pair(lambda, mu, n_trunc)?;
    let lhs = c.compose(&bp);
    let rhs = weighted_adjoint(&bm).compose(&a).neg();
    let cols = a.domain.columns_up_to(n_trunc.saturating_sub(mu.len() + 1));
    Ok(discrepancy(&lhs, &rhs, &cols, "CB⁺ + B⁻*A"))
}

/// Largest singular value of the orthonormal-basis matrix.
pub fn operator_norm<T: Scalar>(op: &BlockOperator<T>) -> f64 {
    spectral_norm_real(&op.orthonormal_real())
}

/// Result of scanning `‖A_N‖` over doubling truncations.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractivityScan {
    /// `(N, ‖A_N‖)` in scan order.
    pub norms: Vec<(usize, f64)>,
    /// First truncation where the norm exceeded `1 + margin`.
    pub first_violation: Option<usize>,
}

/// Doubles `N` from `start` up to `max_n`, stopping at the first norm above `1 + margin`.
pub fn contractivity_scan(lambda: f64, mu: &[f64], start: usize, max_n: usize, margin: f64) -> Result<ContractivityScan> {
    let mut norms = Vec::new();
    let mut n = start.max(1);
    while n <= max_n {
        let norm = operator_norm(&build_a(lambda, mu, n)?);
        norms.push((n, norm));
        if norm > 1.0 + margin {
            return Ok(ContractivityScan { norms, first_violation: Some(n) });
        }
        n *= 2;
    }
    Ok(ContractivityScan { norms, first_violation: None })
}

/// The contractivity inequalities `λ ≥ 1` and `μ_{k+1}/μ_k ≥ (k+1)²/((λ+2k−1)(λ+2k))`.
pub fn contractivity_condition(lambda: f64, mu: &[f64]) -> bool {
    lambda >= 1.0
        && mu.windows(2).enumerate().all(|(k, w)| {
            let k = k as f64;
            w[1] / w[0] >= (k + 1.0).powi(2) / ((lambda + 2.0 * k - 1.0) * (lambda + 2.0 * k))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_rational;
    use crate::linalg::max_abs;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn qs(v: &[&str]) -> Vec<BigRational> {
        v.iter().map(|s| q(s)).collect()
    }

    #[test]
    fn shift_examples() {
        let s1 = weighted_shift(1.0, 10).orthonormal_real();
        for d in 0..10 {
            assert!((s1[(d + 1, d)] - 1.0).abs() < 1e-15);
        }
        let s2 = weighted_shift(2.0, 10).orthonormal_real();
        assert!((s2[(1, 0)] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(operator_norm(&weighted_shift(1.5, 30)) <= 1.0 + 1e-12);
        let adj = weighted_adjoint(&weighted_shift(2.0, 10)).orthonormal_real();
        for d in 0..10 {
            assert!((adj[(d, d + 1)] - ((d as f64 + 1.0) / (2.0 + d as f64)).sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn derivative_examples() {
        let id = derivative_block(q("3"), 0, 6);
        assert_eq!(id.matrix, DenseMat::identity(7));
        let d1 = derivative_block(q("3"), 1, 6);
        assert_eq!(*d1.matrix.get(1, 2), q("2"));
        let d2 = derivative_block(q("3"), 2, 6);
        assert_eq!(*d2.matrix.get(3, 5), q("20"));
    }

    #[test]
    fn a_examples() {
        let a1 = build_a(q("5/2"), &qs(&["1"]), 8).unwrap();
        assert_eq!(a1.matrix, weighted_shift(q("5/2"), 8).matrix);
        let a = build_a(2.5, &[1.0, 3.0], 8).unwrap();
        let o = a.orthonormal_real();
        // Block (1,0) is −(1/λ)·I in monomials; the orthonormal form picks up the Gram ratio.
        let g0 = monomial_norms(&2.5, 8);
        let g1 = monomial_norms(&4.5, 8);
        for d in 0..=8 {
            let want = -(1.0f64 / 3.0).sqrt() / 2.5 * (g1[d] / g0[d]).sqrt();
            assert!((o[(9 + d, d)] - want).abs() < 1e-14);
        }
        let a3 = build_a(q("7"), &qs(&["1", "1", "1"]), 6).unwrap();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert!(a3.is_zero_block(i, j));
        }
    }

    #[test]
    fn b_examples() {
        let b = build_bplus(2.0, &[1.0], &[2.0], 10).unwrap().orthonormal_real();
        for d in 0..=10 {
            assert!((b[(d, d)] - (1.0 / (2.0 + d as f64)).sqrt()).abs() < 1e-14);
        }
        let b3 = build_bplus(q("7"), &qs(&["1", "2", "3"]), &qs(&["1", "1", "1"]), 6).unwrap();
        for i in 0..3 {
            assert_eq!(b3.block(i, i), DenseMat::identity(7));
            for j in i + 1..3 {
                assert!(b3.is_zero_block(i, j));
            }
        }
    }

    #[test]
    fn defect_parameter_examples() {
        let p = defect_parameters(&q("5/2"), &qs(&["1", "1"])).unwrap();
        assert!(p.generic);
        assert_eq!(p.mu_doubleprime, qs(&["1", "11/15"]));
        let e = defect_parameters(&q("2"), &qs(&["1", "1/2"])).unwrap();
        assert_eq!(e.mu_doubleprime, qs(&["1", "0"]));
        assert!(!e.generic);
        assert!(e.require_generic().is_err());
        let s = defect_parameters(&q("2"), &qs(&["1"])).unwrap();
        assert_eq!(s.mu_prime(), vec![Some(q("2"))]);
        assert_eq!(s.mu_doubleprime, qs(&["1"]));
        assert!(defect_parameters(&q("1"), &qs(&["1"])).is_err());
    }

    #[test]
    fn float_extremal_cancellation_is_zero() {
        // μ = (1, 4/15) at λ = 5/2 makes 1/μ′₀ vanish; 2.5 and 4/15 are not exact in binary.
        let p = defect_parameters(&2.5, &[1.0, 4.0 / 15.0]).unwrap();
        assert_eq!(p.nu_prime[0], 0.0);
        assert!(p.nu_prime[1] > 0.0);
        let e = defect_parameters(&3.5, &[1.0, 4.0 / 35.0]).unwrap();
        assert_eq!(e.nu_prime[0], 0.0);
    }

    #[test]
    fn c_examples() {
        let x = c_constants(3.0, &[1.0]).unwrap();
        assert!((x[0][0] + 1.0 / 6.0f64.sqrt()).abs() < 1e-15);
        // y₀₀ = x₀₀·√((λ−1)₂) = −1 for n = 1.
        assert!((x[0][0] * (2.0f64 * 3.0).sqrt() + 1.0).abs() < 1e-14);
        let c = build_c(&q("7"), &qs(&["1", "1", "1"]), 8).unwrap();
        assert!(c.is_zero_block(2, 0));
        assert!(!c.is_zero_block(1, 0));
        assert!(build_c(&q("2"), &qs(&["1", "1/2"]), 8).is_err());
    }

    #[test]
    fn c_orthonormal_blocks_match_constants() {
        let (lam, mu) = (5.5, [1.0, 0.8, 0.6]);
        let c = build_c(&lam, &mu, 12).unwrap();
        let o = c.orthonormal_real();
        let x = c_constants(lam, &mu).unwrap();
        let bl = 13;
        for j in 0..3 {
            for k in 0..3 {
                if j > k + 1 {
                    continue;
                }
                let m = k + 1 - j;
                let dk = monomial_norms(&(lam + 2.0 * k as f64 + 1.0), 12);
                let dj = monomial_norms(&(lam + 2.0 * j as f64 - 1.0), 12 + m);
                for d in 0..=(12 - m) {
                    let adj = dk[d].sqrt() / dj[d + m].sqrt() * falling::<f64>(d + m, m);
                    let want = x[j][k] * adj;
                    let got = o[(j * bl + d + m, k * bl + d)];
                    assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "({j},{k}) d={d}");
                }
            }
        }
    }

    #[test]
    fn adjoint_examples() {
        let a = build_a(q("5/2"), &qs(&["1", "1"]), 6).unwrap();
        assert_eq!(weighted_adjoint(&weighted_adjoint(&a)), a);
        let id = BlockOperator::identity(a.domain.clone());
        assert_eq!(weighted_adjoint(&id), id);
        // ⟨Ax, y⟩ = ⟨x, A*y⟩ on basis pairs.
        let adj = weighted_adjoint(&a);
        let g = a.domain.gram_diagonal();
        for r in 0..a.matrix.rows() {
            for c in 0..a.matrix.cols() {
                assert_eq!(a.matrix.get(r, c).clone() * g[r].clone(), adj.matrix.get(c, r).clone() * g[c].clone());
            }
        }
        let o = a.to_f64();
        let back = BlockOperator::from_orthonormal(&o.orthonormal_real(), o.domain.clone(), o.codomain.clone());
        let diff = back.orthonormal() - o.orthonormal();
        assert!(max_abs(&diff) < 1e-13);
    }

    #[test]
    fn exact_identities() {
        assert!(check_defect_identity(&q("2"), &qs(&["1"]), 20).unwrap().passed);
        assert!(check_defect_identity(&q("5/2"), &qs(&["1", "1"]), 20).unwrap().passed);
        assert!(check_defect_identity(&q("7"), &qs(&["1", "2/3", "1/2"]), 12).unwrap().passed);
        assert!(check_c_equation(&q("2"), &qs(&["1"]), 20).unwrap().passed);
        assert!(check_c_equation(&q("3"), &qs(&["1", "1", "1"]), 14).unwrap().passed);
        assert!(check_master_at_zero(&q("5/2"), &qs(&["1", "1"]), 16).unwrap().passed);
        assert!(check_master_at_zero(&q("7"), &qs(&["1", "2/3", "1/2"]), 12).unwrap().passed);
    }

    #[test]
    fn perturbed_c_fails() {
        let lam = q("5/2");
        let mu = qs(&["1", "1"]);
        let mut c = build_c(&lam, &mu, 12).unwrap();
        let v = c.matrix.get(13 + 1, 0).clone();
        c.matrix.set(13 + 1, 0, v + q("1/1000"));
        let a = build_a(lam.clone(), &mu, 12).unwrap();
        let (bp, bm) = build_b_pair(&lam, &mu, 12).unwrap();
        let lhs = bm.compose(&c);
        let rhs = a.compose(&weighted_adjoint(&bp)).neg();
        let r = discrepancy(&lhs, &rhs, &c.domain.columns_up_to(9), "x");
        assert!(!r.passed);
    }

    #[test]
    fn contractivity_examples() {
        assert!(operator_norm(&build_a(2.5, &[1.0, 1.0], 60).unwrap()) <= 1.0 + 1e-12);
        assert!(contractivity_condition(2.5, &[1.0, 1.0]));
        assert!(!contractivity_condition(1.5, &[1.0, 0.1]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn generic_identities_hold_exactly(num in 3i64..20, m1 in 1i64..6, m2 in 1i64..6) {
            let lam = BigRational::new(num.into(), 2.into());
            let mu = vec![q("1"), BigRational::new(m1.into(), 3.into()), BigRational::new(m2.into(), 5.into())];
            let p = defect_parameters(&lam, &mu).unwrap();
            prop_assume!(p.generic);
            prop_assert!(check_defect_identity(&lam, &mu, 8).unwrap().passed);
            prop_assert!(check_c_equation(&lam, &mu, 8).unwrap().passed);
        }

        #[test]
        fn contraction_when_condition_holds(lam in 1.0f64..6.0, r1 in 0.05f64..2.0) {
            let mu = [1.0, r1];
            if contractivity_condition(lam, &mu) {
                prop_assert!(operator_norm(&build_a(lam, &mu, 24).unwrap()) <= 1.0 + 1e-12);
            }
        }
    }
}
