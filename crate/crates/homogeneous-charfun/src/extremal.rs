//! Homogeneous polynomials on the bidisc and the extremal operators `M_{λ,n}`.
//!
//! `Hom(p)` carries the inner product of `H^(λ)⊗H²` under `f⊗g ↦ g(z)f(w)`, so
//! `‖zⁱw^{p−i}‖² = (p−i)!/(λ)_{p−i}`. `V_{k,λ}(p)` is the orthogonal complement in `Hom(p)` of
//! the polynomials vanishing to order `k` on the diagonal.

use num_complex::Complex64;

use crate::algebra::{binomial, falling, pochhammer, rising_over_factorial, Scalar};
use crate::blockops::{build_a, build_b_pair, defect_parameters};
use crate::charfun::{coincidence_align, theta_power_raw, transfer_factor, AlignMode, Alignment};
use crate::error::{Error, Result};
use crate::linalg::{cplx, max_abs, singular_values, submatrix, CMat, DenseMat};
use crate::reps::{block_indices, working_truncation};
use crate::spaces::{check_god_identity, ExactCheck};

/// `Σ aᵢ zⁱ w^{p−i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiHomPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> BiHomPoly<T> {
    /// Coefficients `a₀..a_p`; an empty vector is promoted to the zero constant.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        BiHomPoly { coeffs }
    }

    pub fn zero(p: usize) -> Self {
        BiHomPoly { coeffs: vec![T::zero(); p + 1] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `‖zⁱw^{p−i}‖²` in `H^(λ)⊗H²`.
    pub fn weight(lambda: &T, p: usize, i: usize) -> T {
        T::one() / rising_over_factorial(lambda, p - i)
    }

    /// Inner product in `H^(λ)⊗H²` (real coefficients).
    pub fn inner(&self, other: &Self, lambda: &T) -> T {
        let p = self.degree();
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .enumerate()
            .fold(T::zero(), |acc, (i, (a, b))| acc + a.clone() * b.clone() * Self::weight(lambda, p, i))
    }

    pub fn norm_sq(&self, lambda: &T) -> T {
        self.inner(self, lambda)
    }

    /// Multiplication by `z`.
    pub fn mul_z(&self) -> Self {
        let mut c = vec![T::zero()];
        c.extend(self.coeffs.iter().cloned());
        BiHomPoly { coeffs: c }
    }

    /// `∂f/∂w`, of degree `p−1`.
    pub fn d_w(&self) -> Self {
        let p = self.degree();
        if p == 0 {
            return Self::zero(0);
        }
        BiHomPoly { coeffs: (0..p).map(|i| self.coeffs[i].clone() * T::from_int((p - i) as i64)).collect() }
    }

    /// `(f(z,w) − f(w,w))/(z−w)` by exact division: the coefficient of `zᵃw^{p−1−a}` is `Σ_{i>a} aᵢ`.
    pub fn divided_difference(&self) -> Self {
        let p = self.degree();
        if p == 0 {
            return Self::zero(0);
        }
        let mut out = vec![T::zero(); p];
        let mut tail = T::zero();
        for a in (0..p).rev() {
            tail = tail + self.coeffs[a + 1].clone();
            out[a] = tail.clone();
        }
        BiHomPoly { coeffs: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        BiHomPoly { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect() }
    }

    pub fn scale(&self, s: &T) -> Self {
        BiHomPoly { coeffs: self.coeffs.iter().map(|a| a.clone() * s.clone()).collect() }
    }

    /// Value at `(z, w)`.
    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let p = self.degree();
        self.coeffs.iter().enumerate().map(|(i, a)| z.powu(i as u32) * w.powu((p - i) as u32) * a.to_f64()).sum()
    }
}

/// `h^λ_{j,p}(z,w) = Σ_{j≤i≤p} C(i,j)·C(p−i+λ−1, p−i)·zⁱw^{p−i}`.
pub fn h_basis<T: Scalar>(lambda: &T, j: usize, p: usize) -> BiHomPoly<T> {
    BiHomPoly::new((0..=p).map(|i| binomial::<T>(i, j) * rising_over_factorial(lambda, p - i)).collect())
}

/// `(z−w)^k·zⁱw^{p−k−i}` for `0 ≤ i ≤ p−k`; they span the polynomials in `Hom(p)` vanishing to
/// order `k` on the diagonal.
pub fn vanishing_generators<T: Scalar>(k: usize, p: usize) -> Vec<BiHomPoly<T>> {
    if k > p {
        return Vec::new();
    }
    (0..=p - k)
        .map(|i| {
            let mut c = vec![T::zero(); p + 1];
            for a in 0..=k {
                let sign = if (k - a).is_multiple_of(2) { T::one() } else { -T::one() };
                c[a + i] = binomial::<T>(k, a) * sign;
            }
            BiHomPoly::new(c)
        })
        .collect()
}

fn orthogonality_residual<T: Scalar>(fs: &[BiHomPoly<T>], gs: &[BiHomPoly<T>], lambda: &T) -> f64 {
    let mut worst = 0.0f64;
    for f in fs {
        let nf = f.norm_sq(lambda).to_f64().sqrt();
        for g in gs {
            let ip = f.inner(g, lambda);
            let r = if T::is_exact() {
                if ip.is_zero() { 0.0 } else { ip.abs_val().to_f64().max(f64::MIN_POSITIVE) }
            } else {
                ip.to_f64().abs() / (nf * g.norm_sq(lambda).to_f64().sqrt()).max(1e-300)
            };
            worst = worst.max(r);
        }
    }
    worst
}

fn coefficient_rank<T: Scalar>(polys: &[BiHomPoly<T>], p: usize) -> usize {
    let mut m = DenseMat::<T>::zeros(p + 1, polys.len());
    for (c, f) in polys.iter().enumerate() {
        for (r, a) in f.coeffs.iter().enumerate() {
            m.set(r, c, a.clone());
        }
    }
    m.rank(1e-12)
}

/// Outcome of the basis check for `V_{k,λ}(p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VanishingFiltration {
    pub passed: bool,
    /// `dim V_{k,λ}(p) = (p+1) − rank(vanishing generators)`.
    pub dimension: usize,
    /// Rank of `{h^λ_{j,p} : j < k}`.
    pub rank: usize,
    /// Largest normalized inner product of an `h`-vector with a vanishing generator.
    pub residual: f64,
}

/// Verifies that `{h^λ_{j,p} : 0 ≤ j < k}` is a basis of `V_{k,λ}(p)` by brute force.
pub fn check_vanishing_filtration<T: Scalar>(lambda: &T, k: usize, p: usize) -> Result<VanishingFiltration> {
    if k > p + 1 {
        return Err(Error::Precondition(format!("need k ≤ p+1, got k = {k}, p = {p}")));
    }
    let hs: Vec<BiHomPoly<T>> = (0..k).map(|j| h_basis(lambda, j, p)).collect();
    let gens = vanishing_generators::<T>(k, p);
    let dimension = p + 1 - coefficient_rank(&gens, p);
    let rank = coefficient_rank(&hs, p);
    let residual = orthogonality_residual(&hs, &gens, lambda);
    let passed = rank == k && dimension == k && residual <= 1e-10;
    Ok(VanishingFiltration { passed, dimension, rank, residual })
}

/// `√(λ(λ−1))·Θ*_λ f = ∂f/∂w − (λ−1)·(f(z,w) − f(w,w))/(z−w)`, exact for rational `λ`.
pub fn theta_star_scaled<T: Scalar>(lambda: &T, f: &BiHomPoly<T>) -> BiHomPoly<T> {
    let dd = f.divided_difference().scale(&(T::one() - lambda.clone()));
    f.d_w().add(&dd)
}

/// `Θ*_λ f` for `f ∈ H^(λ−1)⊗H²`, landing in `H^(λ+1)⊗H²` with degree `p−1` (constants map to 0).
pub fn theta_star_action(lambda: f64, f: &BiHomPoly<f64>) -> Result<BiHomPoly<f64>> {
    if lambda <= 1.0 {
        return Err(Error::Precondition("Θ*_λ needs λ > 1".into()));
    }
    Ok(theta_star_scaled(&lambda, f).scale(&(1.0 / (lambda * (lambda - 1.0)).sqrt())))
}

/// `Θ*_{λ,n} = Θ*_{λ+2n−2} ∘ … ∘ Θ*_{λ+2} ∘ Θ*_λ` up to the positive constant
/// `∏ √((λ+2ℓ)(λ+2ℓ−1))`.
fn theta_star_composite_scaled<T: Scalar>(lambda: &T, n: usize, f: &BiHomPoly<T>) -> Option<BiHomPoly<T>> {
    let mut g = f.clone();
    for l in 0..n {
        if g.degree() == 0 {
            return None;
        }
        g = theta_star_scaled(&(lambda.clone() + T::from_int(2 * l as i64)), &g);
    }
    Some(g)
}

/// Kernel of `Θ*_{λ,n}` on `Hom(p)` and the splitting of `Θ*_λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelDimension {
    pub dim: usize,
    /// `min(n, p+1)`.
    pub expected: usize,
    /// Largest coefficient of `Θ*_{λ,n} h^{λ−1}_{j,p}`, `j < min(n, p+1)`.
    pub kernel_residual: f64,
    /// `Θ*_λ(V_{n,λ−1}(p)) ⊆ V_{n−1,λ+1}(p−1)`: normalized inner products with vanishing generators.
    pub mapping_residual: f64,
    /// `Θ*_λ(V^⊥_{n,λ−1}(p)) ⊥ V_{n−1,λ+1}(p−1)`.
    pub complement_residual: f64,
}

/// Kernel dimension of `Θ*_{λ,n}|_{Hom(p)}` from singular values `≤ 1e−8·σ_max` in the orthonormal
/// monomial basis, with exact subspace residuals.
pub fn kernel_dimension_check<T: Scalar>(lambda: &T, n: usize, p: usize) -> Result<KernelDimension> {
    if *lambda <= T::one() || n == 0 {
        return Err(Error::Precondition("need λ > 1 and n ≥ 1".into()));
    }
    let lower = lambda.clone() - T::one();
    let upper = lambda.clone() + T::from_int(2 * n as i64 - 1);
    let expected = n.min(p + 1);

    let dim = if p < n {
        p + 1
    } else {
        let q = p - n;
        let scale: f64 = (0..n)
            .map(|l| {
                let x = lambda.to_f64() + 2.0 * l as f64;
                1.0 / (x * (x - 1.0)).sqrt()
            })
            .product();
        let mut m = CMat::zeros(q + 1, p + 1);
        for c in 0..=p {
            let mut e = vec![T::zero(); p + 1];
            e[c] = T::one();
            let img = theta_star_composite_scaled(lambda, n, &BiHomPoly::new(e)).unwrap_or_else(|| BiHomPoly::zero(q));
            let wd = BiHomPoly::weight(&lower, p, c).to_f64().sqrt();
            for (r, a) in img.coeffs.iter().enumerate() {
                let wc = BiHomPoly::weight(&upper, q, r).to_f64().sqrt();
                m[(r, c)] = cplx(a.to_f64() * wc / wd * scale, 0.0);
            }
        }
        let sv = singular_values(&m);
        let top = sv.first().copied().unwrap_or(0.0);
        let rank = sv.iter().filter(|&&s| s > 1e-8 * top.max(1e-300)).count();
        p + 1 - rank
    };

    let hs: Vec<BiHomPoly<T>> = (0..expected).map(|j| h_basis(&lower, j, p)).collect();
    let kernel_residual = hs
        .iter()
        .filter_map(|h| theta_star_composite_scaled(lambda, n, h))
        .flat_map(|g| g.coeffs.into_iter().map(|c| c.abs_val().to_f64()))
        .fold(0.0, f64::max);

    let (mut mapping_residual, mut complement_residual) = (0.0f64, 0.0f64);
    if p >= 1 {
        let raised = lambda.clone() + T::one();
        let images: Vec<BiHomPoly<T>> = hs.iter().map(|h| theta_star_scaled(lambda, h)).filter(|g| !g.is_zero()).collect();
        mapping_residual = orthogonality_residual(&images, &vanishing_generators::<T>(n - 1, p - 1), &raised);
        let comp: Vec<BiHomPoly<T>> =
            vanishing_generators::<T>(n, p).iter().map(|g| theta_star_scaled(lambda, g)).filter(|g| !g.is_zero()).collect();
        let targets: Vec<BiHomPoly<T>> = (0..(n - 1).min(p)).map(|j| h_basis(&raised, j, p - 1)).collect();
        complement_residual = orthogonality_residual(&comp, &targets, &raised);
    }
    Ok(KernelDimension { dim, expected, kernel_residual, mapping_residual, complement_residual })
}

/// The extremal weights `μ_k = k!²/(λ−1)_{2k}`, `0 ≤ k < n`.
pub fn extremal_weights<T: Scalar>(lambda: &T, n: usize) -> Vec<T> {
    let lower = lambda.clone() - T::one();
    (0..n).map(|k| falling::<T>(k, k) * falling::<T>(k, k) / pochhammer(&lower, 2 * k)).collect()
}

/// `Jf = ((1/(λ−1)_ℓ)·∂^ℓf/∂w^ℓ|_△)_{ℓ<n}` for `f ∈ Hom(p)`; entry `ℓ` is the coefficient of `t^{p−ℓ}`.
pub fn jet<T: Scalar>(lambda: &T, n: usize, f: &BiHomPoly<T>) -> Vec<T> {
    let p = f.degree();
    let lower = lambda.clone() - T::one();
    (0..n)
        .map(|l| {
            let s = f.coeffs.iter().enumerate().fold(T::zero(), |acc, (t, a)| acc + a.clone() * falling::<T>(p - t, l));
            s / pochhammer(&lower, l)
        })
        .collect()
}

/// Coordinates of a jet in `⊕_ℓ H^(λ+2ℓ)`: `x_ℓ = F_ℓ − Σ_{j<ℓ} C(ℓ,j)/(λ+2j)_{ℓ−j}·∂^{ℓ−j}x_j`.
pub fn jet_coordinates<T: Scalar>(lambda: &T, p: usize, jet: &[T]) -> Vec<T> {
    let mut x: Vec<T> = Vec::with_capacity(jet.len());
    for l in 0..jet.len() {
        let mut v = jet[l].clone();
        for (j, xj) in x.iter().enumerate().take_while(|(j, _)| *j <= p) {
            let k = l - j;
            let c = binomial::<T>(l, j) / pochhammer(&(lambda.clone() + T::from_int(2 * j as i64)), k);
            v = v - c * xj.clone() * falling::<T>(p - j, k);
        }
        x.push(v);
    }
    x
}

/// `A` applied to coordinates of homogeneous degree `p` (block `ℓ` holds the coefficient of `t^{p−ℓ}`).
fn apply_a_homogeneous<T: Scalar>(lambda: &T, p: usize, x: &[T]) -> Vec<T> {
    (0..x.len())
        .map(|i| {
            let mut v = x[i].clone();
            for j in 0..i {
                if p < j {
                    continue;
                }
                let k = i - j - 1;
                let coef = -pochhammer(&T::from_int(j as i64 + 1), i - j)
                    / pochhammer(&(lambda.clone() + T::from_int(2 * j as i64)), 2 * (i - j) - 1);
                v = v + coef * x[j].clone() * falling::<T>(p - j, k);
            }
            v
        })
        .collect()
}

/// Outcome of the jet-map checks.
#[derive(Clone, Debug)]
pub struct JetCheck {
    /// `(1−zw̄)B^(λ,μ) = B^(λ−1,e₀)` coefficientwise for the extremal `μ`.
    pub kernel_identity: ExactCheck,
    /// `μ″ = e₀`.
    pub mu_doubleprime_is_e0: bool,
    /// `max |⟨Jf,Jg⟩_{H^(λ,μ)} − ⟨f,g⟩|` over the `h`-basis of `V_{n,λ−1}(p)`, `p ≤ P`.
    pub isometry: f64,
    /// `max |J(z·f) − A·Jf|`.
    pub intertwining: f64,
    pub checked: usize,
}

/// Verifies the jet construction for `M_{λ,n}` up to bidegree `P`.
pub fn jet_check<T: Scalar>(lambda: &T, n: usize, max_degree: usize) -> Result<JetCheck> {
    if *lambda <= T::one() || n == 0 {
        return Err(Error::Precondition("need λ > 1 and n ≥ 1".into()));
    }
    let mu = extremal_weights(lambda, n);
    let params = defect_parameters(lambda, &mu)?;
    let mu_doubleprime_is_e0 =
        params.mu_doubleprime.iter().enumerate().all(|(k, m)| if k == 0 { (m.clone() - T::one()).is_zero() } else { m.is_zero() });
    let kernel_identity = check_god_identity(lambda, &mu, 2 * max_degree.max(n))?;

    let lower = lambda.clone() - T::one();
    let gram_weight =
        |l: usize, p: usize| T::one() / (mu[l].clone() * rising_over_factorial(&(lambda.clone() + T::from_int(2 * l as i64)), p - l));
    let (mut isometry, mut intertwining, mut checked) = (0.0f64, 0.0f64, 0);
    for p in 0..=max_degree {
        let hs: Vec<BiHomPoly<T>> = (0..n.min(p + 1)).map(|j| h_basis(&lower, j, p)).collect();
        let xs: Vec<Vec<T>> = hs.iter().map(|h| jet_coordinates(lambda, p, &jet(lambda, n, h))).collect();
        for (a, x) in hs.iter().zip(&xs) {
            for (b, y) in hs.iter().zip(&xs) {
                let g1 = a.inner(b, &lower);
                let g2 = (0..n.min(p + 1)).fold(T::zero(), |acc, l| acc + x[l].clone() * y[l].clone() * gram_weight(l, p));
                isometry = isometry.max((g1 - g2).abs_val().to_f64());
                checked += 1;
            }
            let xz = jet_coordinates(lambda, p + 1, &jet(lambda, n, &a.mul_z()));
            let ax = apply_a_homogeneous(lambda, p, x);
            for (u, v) in xz.iter().zip(&ax) {
                intertwining = intertwining.max((u.clone() - v.clone()).abs_val().to_f64());
            }
            checked += 1;
        }
    }
    Ok(JetCheck { kernel_identity, mu_doubleprime_is_e0, isometry, intertwining, checked })
}

/// Evaluation points of the default grid with `|z| ≤ 0.5`.
pub fn extremal_model_grid() -> Vec<Complex64> {
    crate::charfun::default_z_grid().into_iter().filter(|z| z.norm() <= 0.5).collect()
}

/// Outcome of the coincidence check for `M_{λ,n}`.
#[derive(Clone, Debug)]
pub struct ExtremalModelCheck {
    /// `‖(1/√((λ−1)_{2n}))D⁺_{λ−1}*(∂ⁿ)*D⁺_{λ+2n−1} − θ_λθ_{λ+2}⋯θ_{λ+2n−2}‖` (largest entry).
    pub forms_discrepancy: f64,
    /// Left-only Procrustes fit of `θ_{λ,n}(z)·B⁺` onto `(B⁻)*(I−zA*)⁻¹(zI−A)`.
    pub alignment: Alignment,
    /// Best scalar `ω` with `ω·θ_{λ,n}B⁺ ≈ (B⁻)*(I−zA*)⁻¹(zI−A)` and its residual.
    pub omega: Complex64,
    pub scalar_residual: f64,
    /// Largest singular value of `θ_{λ,n}(z)` over resolved columns.
    pub max_singular: f64,
}

/// Compares `θ_{λ,n}` with the characteristic function of `M_{λ,n}` over `zs`, rows of degree
/// `≤ N` and columns of degree `≤ interior`.
pub fn check_extremal_model(lambda: f64, n: usize, zs: &[Complex64], n_trunc: usize, interior: usize) -> Result<ExtremalModelCheck> {
    if lambda <= 1.0 || n == 0 || zs.is_empty() {
        return Err(Error::Precondition("need λ > 1, n ≥ 1 and a nonempty grid".into()));
    }
    if zs.iter().any(|z| z.norm() > 0.5) {
        return Err(Error::Precondition("grid points must satisfy |z| ≤ 0.5".into()));
    }
    let mu = extremal_weights(&lambda, n);
    let radius = zs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let w = working_truncation(n_trunc, interior, radius, lambda + 2.0 * n as f64 + 2.0) + 2 * n;
    let a = build_a(lambda, &mu, w)?.orthonormal();
    let (bp, bm) = build_b_pair(&lambda, &mu, w)?;
    if bp.codomain.n_blocks() != 1 || bm.domain.n_blocks() != 1 {
        return Err(Error::Numerical("extremal defect spaces should each have one block".into()));
    }
    let bp = bp.orthonormal();
    let bm_star = bm.orthonormal().adjoint();
    let rows: Vec<usize> = (0..=n_trunc).collect();
    let cols = block_indices(n, w, interior);
    let single = block_indices(1, w, interior);

    let (mut s1, mut s2) = (Vec::new(), Vec::new());
    let (mut forms_discrepancy, mut max_singular) = (0.0f64, 0.0f64);
    for &z in zs {
        let closed = theta_power_raw(lambda, n, z, w)?;
        let mut prod = theta_power_raw(lambda, 1, z, w)?;
        for k in 1..n {
            prod *= theta_power_raw(lambda + 2.0 * k as f64, 1, z, w)?;
        }
        forms_discrepancy = forms_discrepancy.max(max_abs(&(submatrix(&closed, &rows, &single) - submatrix(&prod, &rows, &single))));
        let all_rows: Vec<usize> = (0..=w).collect();
        max_singular = max_singular.max(singular_values(&submatrix(&closed, &all_rows, &single))[0]);
        s1.push(submatrix(&(&closed * &bp), &rows, &cols));
        s2.push(submatrix(&(&bm_star * transfer_factor(&a, z)?), &rows, &cols));
    }
    let alignment = coincidence_align(&s1, &s2, 0, AlignMode::LeftOnly)?;
    let num: Complex64 = s1.iter().zip(&s2).map(|(l, r)| l.iter().zip(r.iter()).map(|(x, y)| x.conj() * y).sum::<Complex64>()).sum();
    let den: f64 = s1.iter().map(|l| l.iter().map(|x| x.norm_sqr()).sum::<f64>()).sum();
    let omega = num / den;
    let scalar_residual = s1.iter().zip(&s2).map(|(l, r)| max_abs(&(l * omega - r))).fold(0.0, f64::max);
    Ok(ExtremalModelCheck { forms_discrepancy, alignment, omega, scalar_residual, max_singular })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn h_basis_rows() {
        let one = h_basis(&q(2, 1), 0, 0);
        assert_eq!(one.coeffs(), &[q(1, 1)]);
        let h = h_basis(&q(2, 1), 1, 2);
        assert_eq!(h.coeffs(), &[q(0, 1), q(2, 1), q(2, 1)]);
        let lam = q(5, 2);
        let h0 = h_basis(&lam, 0, 4);
        for i in 0..=4 {
            assert_eq!(h0.coeffs()[i], rising_over_factorial(&lam, 4 - i));
        }
    }

    #[test]
    fn theta_star_examples() {
        let lam = 3.0;
        let z = BiHomPoly::new(vec![0.0, 1.0]);
        let out = theta_star_action(lam, &z).unwrap();
        assert!((out.coeffs()[0] + ((lam - 1.0) / lam).sqrt()).abs() < 1e-15);
        assert!(theta_star_action(lam, &BiHomPoly::new(vec![1.0])).unwrap().is_zero());
        let l = q(7, 2);
        for p in 1..8 {
            assert!(theta_star_scaled(&l, &h_basis(&(l.clone() - q(1, 1)), 0, p)).is_zero());
        }
    }

    #[test]
    fn divided_difference_matches_evaluation() {
        let f = BiHomPoly::new(vec![1.0, -2.0, 0.5, 3.0]);
        let (z, w) = (cplx(0.3, 0.1), cplx(-0.2, 0.4));
        let want = (f.eval(z, w) - f.eval(w, w)) / (z - w);
        assert!((f.divided_difference().eval(z, w) - want).norm() < 1e-13);
    }

    #[test]
    fn vanishing_filtration_edges() {
        let c = check_vanishing_filtration(&q(2, 1), 0, 3).unwrap();
        assert!(c.passed && c.dimension == 0);
        let c = check_vanishing_filtration(&q(2, 1), 4, 3).unwrap();
        assert!(c.passed && c.dimension == 4);
        let c = check_vanishing_filtration(&q(5, 2), 2, 4).unwrap();
        assert!(c.passed, "{c:?}");
        assert!(check_vanishing_filtration(&q(2, 1), 5, 3).is_err());
    }

    #[test]
    fn kernel_dimensions() {
        let k = kernel_dimension_check(&q(3, 1), 1, 0).unwrap();
        assert_eq!((k.dim, k.expected), (1, 1));
        let k = kernel_dimension_check(&q(5, 2), 2, 5).unwrap();
        assert_eq!(k.dim, 2);
        assert_eq!(k.kernel_residual, 0.0);
        assert_eq!(k.mapping_residual, 0.0);
        assert_eq!(k.complement_residual, 0.0);
        let k = kernel_dimension_check(&q(4, 1), 3, 1).unwrap();
        assert_eq!((k.dim, k.expected), (2, 2));
    }

    #[test]
    fn kernel_dimension_float_backend() {
        let k = kernel_dimension_check(&2.5f64, 3, 7).unwrap();
        assert_eq!(k.dim, 3);
        assert!(k.kernel_residual < 1e-9 && k.mapping_residual < 1e-10 && k.complement_residual < 1e-10);
    }

    #[test]
    fn extremal_weights_recursion() {
        let lam = q(5, 2);
        let mu = extremal_weights(&lam, 4);
        assert_eq!(mu[0], q(1, 1));
        for k in 0..3 {
            let kk = q(k as i64 + 1, 1);
            let want = kk.clone() * kk * mu[k].clone()
                / ((lam.clone() + q(2 * k as i64 - 1, 1)) * (lam.clone() + q(2 * k as i64, 1)));
            assert_eq!(mu[k + 1], want);
        }
    }

    #[test]
    fn jet_checks_exact() {
        let j = jet_check(&q(2, 1), 2, 12).unwrap();
        assert!(j.kernel_identity.passed && j.mu_doubleprime_is_e0);
        assert_eq!(j.isometry, 0.0);
        assert_eq!(j.intertwining, 0.0);
        let j = jet_check(&q(5, 2), 3, 8).unwrap();
        assert_eq!((j.isometry, j.intertwining), (0.0, 0.0));
    }

    #[test]
    fn jet_n1_is_diagonal_restriction() {
        let lam = q(3, 1);
        let f = h_basis(&q(2, 1), 0, 3);
        let jf = jet(&lam, 1, &f);
        let diag: BigRational = f.coeffs().iter().cloned().fold(q(0, 1), |a, b| a + b);
        assert_eq!(jf, vec![diag]);
    }

    #[test]
    fn extremal_model_single_and_double() {
        let grid = extremal_model_grid();
        for n in [1usize, 2] {
            let c = check_extremal_model(2.0, n, &grid, 48, 16).unwrap();
            assert!(c.forms_discrepancy <= 1e-8, "n={n}: {c:?}");
            assert!(c.alignment.residual <= 1e-6, "n={n}: {c:?}");
            assert!(c.max_singular <= 1.0 + 1e-10, "n={n}: {c:?}");
            assert!((c.omega.norm() - 1.0).abs() < 1e-8, "n={n}: {c:?}");
        }
    }

    #[test]
    fn extremal_model_non_dyadic_lambda() {
        let c = check_extremal_model(2.5, 2, &extremal_model_grid(), 32, 12).unwrap();
        assert!(c.alignment.residual <= 1e-6, "{c:?}");
        assert!((c.omega.norm() - 1.0).abs() < 1e-8, "{c:?}");
    }

    proptest! {
        #[test]
        fn filtration_is_monotone(p in 0usize..7, k in 0usize..7, num in 3i64..12) {
            prop_assume!(k <= p);
            let lam = q(num, 2);
            // Vanishing to order k+1 implies vanishing to order k, so V_k ⊥ gens(k+1).
            let hs: Vec<_> = (0..k).map(|j| h_basis(&lam, j, p)).collect();
            prop_assert_eq!(orthogonality_residual(&hs, &vanishing_generators(k + 1, p), &lam), 0.0);
        }

        #[test]
        fn kernel_dimension_is_min(p in 0usize..8, n in 1usize..4, num in 3i64..10) {
            let k = kernel_dimension_check(&q(num, 2), n, p).unwrap();
            prop_assert_eq!(k.dim, n.min(p + 1));
        }
    }
}
