//! Truncated discrete series matrices `D⁺_λ(φ)` and `D₁⁻(φ)`, the projective law, the operator
//! calculus `c(φ,T)`, `φ(T)`, and the companion-representation identities in the coordinates
//! of `⊕ H^(λ+2i)`.
//!
//! `D⁺_λ(φ)` acts by `g ↦ c(φ⁻¹,·)^λ·(g∘φ⁻¹)`, so `D⁺_λ(φψ) = m·D⁺_λ(φ)D⁺_λ(ψ)` with
//! `m = m₀(φ,ψ)` when `λ = 1`.

use num_complex::Complex64;

use crate::algebra::{monomial_norms, TruncatedSeries};
use crate::blockops::{build_a, build_b_pair, defect_parameters};
use crate::error::{Error, Result};
use crate::linalg::{block_diag, cplx, max_abs, solve, submatrix, CMat};
use crate::mobius::{branch_s, multiplier_m0, MobiusMap};

/// A truncated representation matrix in the orthonormal basis of `H^(λ)`.
#[derive(Clone, Debug)]
pub struct RepMatrix {
    pub matrix: CMat,
    pub lambda: f64,
    pub map: MobiusMap,
    /// Columns of degree up to this bound are trusted.
    pub interior: usize,
}

impl RepMatrix {
    pub fn truncation(&self) -> usize {
        self.matrix.ncols() - 1
    }

    /// Largest `| ‖column‖ − 1 |` over interior columns.
    pub fn interior_unitarity_defect(&self) -> f64 {
        (0..=self.interior.min(self.truncation()))
            .map(|k| (self.matrix.column(k).norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Smallest truncation `W ≥ N` at which columns of degree `≤ interior` of composition operators
/// with `|α| ≤ radius` are resolved to `1e−15`, capped at 400.
///
/// Column `k` of `D⁺_λ(φ)` spreads up to degree about `k(1+|α|)/(1−|α|)` before its geometric
/// tail `|α|^{d}·d^{power}` sets in, so both parts enter the bound.
pub fn working_truncation(n_trunc: usize, interior: usize, radius: f64, power: f64) -> usize {
    let floor = n_trunc.max(interior + 8);
    if radius <= 0.0 {
        return floor;
    }
    let r = radius.min(0.95);
    let spread = interior as f64 * (1.0 + r) / (1.0 - r);
    let mut w = floor;
    while w < 400 {
        let log_tail = (w as f64 - spread).max(0.0) * r.ln() + power * (w as f64).ln();
        if log_tail <= (1e-15f64).ln() {
            break;
        }
        w += 4;
    }
    w.max(floor)
}

/// Largest interior degree that a truncation at `N` resolves for maps with `|α| ≤ radius`.
pub fn trusted_interior(n_trunc: usize, radius: f64, power: f64) -> usize {
    (0..=n_trunc).rev().find(|&i| working_truncation(0, i, radius, power) <= n_trunc).unwrap_or(0)
}

/// Matrix of `D⁺_λ(f)` truncated at degree `N`.
pub fn discrete_series_matrix(lambda: f64, f: &MobiusMap, n_trunc: usize) -> RepMatrix {
    let g = f.invert();
    let a = g.alpha();
    let one = cplx(1.0, 0.0);
    let lin = TruncatedSeries::new(vec![one, -a.conj()], n_trunc);
    let mut col = lin.powf(-lambda).expect("unit constant term").scale(g.cocycle_pow_prefactor(lambda));
    let gz = TruncatedSeries::new(vec![-a, one], n_trunc)
        .mul(&lin.recip().expect("unit constant term"))
        .scale(g.beta());
    let norms: Vec<f64> = monomial_norms(&lambda, n_trunc).into_iter().map(f64::sqrt).collect();
    let mut m = CMat::zeros(n_trunc + 1, n_trunc + 1);
    for k in 0..=n_trunc {
        for r in 0..=n_trunc {
            m[(r, k)] = col.coeff(r) * (norms[r] / norms[k]);
        }
        if k < n_trunc {
            col = col.mul(&gz);
        }
    }
    let interior = trusted_interior(n_trunc, f.alpha().norm(), 0.0);
    RepMatrix { matrix: m, lambda, map: *f, interior }
}

/// `D₁⁻(f) = m₀(f,f⁻¹)·D₁⁺(f*)`.
pub fn d1_minus_matrix(f: &MobiusMap, n_trunc: usize) -> RepMatrix {
    let m0 = multiplier_m0(f, &f.invert());
    let mut rep = discrete_series_matrix(1.0, &f.star(), n_trunc);
    rep.matrix *= cplx(m0, 0.0);
    rep.map = *f;
    rep
}

/// `⊕ᵢ D⁺_{λᵢ}(f)` over the given parameters.
pub fn direct_sum_rep(lambdas: &[f64], f: &MobiusMap, n_trunc: usize) -> CMat {
    let parts: Vec<CMat> = lambdas.iter().map(|&l| discrete_series_matrix(l, f, n_trunc).matrix).collect();
    block_diag(&parts)
}

/// Indices of degrees `0..=max_degree` inside each of `n_blocks` blocks of length `w + 1`.
pub fn block_indices(n_blocks: usize, w: usize, max_degree: usize) -> Vec<usize> {
    (0..n_blocks).flat_map(|b| (0..=max_degree.min(w)).map(move |d| b * (w + 1) + d)).collect()
}

/// Outcome of the projective-law check.
#[derive(Clone, Debug)]
pub struct ProjectiveLaw {
    /// Best unimodular `m` with `D(fg) ≈ m·D(f)D(g)`.
    pub multiplier: Complex64,
    pub residual: f64,
}

/// Fits the unimodular scalar in `D⁺_λ(fg) = m·D⁺_λ(f)D⁺_λ(g)` on interior columns.
pub fn check_projective_law(lambda: f64, f: &MobiusMap, g: &MobiusMap, n_trunc: usize, interior: usize) -> Result<ProjectiveLaw> {
    if interior > n_trunc {
        return Err(Error::Precondition("interior must not exceed the truncation".into()));
    }
    let radius = f.alpha().norm().max(g.alpha().norm()).max(f.compose(g).alpha().norm());
    let w = working_truncation(n_trunc, interior, radius, lambda + 2.0);
    let p = discrete_series_matrix(lambda, &f.compose(g), w).matrix;
    let q = discrete_series_matrix(lambda, f, w).matrix * discrete_series_matrix(lambda, g, w).matrix;
    let rows: Vec<usize> = (0..=n_trunc).collect();
    let cols: Vec<usize> = (0..=interior).collect();
    let p = submatrix(&p, &rows, &cols);
    let q = submatrix(&q, &rows, &cols);
    let inner: Complex64 = q.iter().zip(p.iter()).map(|(a, b)| a.conj() * b).sum();
    if inner.norm() == 0.0 {
        return Err(Error::Numerical("degenerate projective fit".into()));
    }
    let multiplier = inner / inner.norm();
    let residual = max_abs(&(p - q * multiplier));
    Ok(ProjectiveLaw { multiplier, residual })
}

/// `c(φ,T) = s(β)√(1−|α|²)(I−ᾱT)⁻¹` and `φ(T) = β(T−αI)(I−ᾱT)⁻¹`.
pub fn mobius_of_operator(f: &MobiusMap, t: &CMat) -> Result<(CMat, CMat)> {
    let n = t.nrows();
    let id = CMat::identity(n, n);
    let (a, b) = (f.alpha(), f.beta());
    let den = &id - t * a.conj();
    let inv = solve(&den, &id)?;
    let c = &inv * (branch_s(b) * (1.0 - a.norm_sqr()).sqrt());
    let phi = (t - &id * a) * &inv * b;
    Ok((c, phi))
}

/// Which companion identity to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `Σ′(f)·B⁺ = m₀(f,f⁻¹)·B⁺·Σ(f)·c(f,A)⁻¹`.
    Right,
    /// `Σ″(f)·(B⁻)* = m₀(f,f⁻¹)·(B⁻)*·Σ(f)·(c(f,A)*)⁻¹`.
    Left,
}

/// Max-entry residual of a companion identity on rows of degree `≤ N` and columns of degree
/// `≤ interior`.
pub fn companion_check(lambda: f64, mu: &[f64], f: &MobiusMap, n_trunc: usize, interior: usize, side: Side) -> Result<f64> {
    defect_parameters(&lambda, mu)?.require_generic()?;
    let n = mu.len();
    let power = lambda + 2.0 * n as f64 + 2.0;
    let w = working_truncation(n_trunc, interior, f.alpha().norm(), power);
    let a = build_a(lambda, mu, w)?.orthonormal();
    let (bp, bm) = build_b_pair(&lambda, mu, w)?;
    let sigma = direct_sum_rep(&(0..n).map(|i| lambda + 2.0 * i as f64).collect::<Vec<_>>(), f, w);
    let m0 = cplx(multiplier_m0(f, &f.invert()), 0.0);
    let (al, s) = (f.alpha(), branch_s(f.beta()));
    let scale = (1.0 - al.norm_sqr()).sqrt();
    let id = CMat::identity(a.nrows(), a.ncols());
    let (lhs, rhs) = match side {
        Side::Right => {
            let b = bp.orthonormal();
            let lams: Vec<f64> = bp.codomain.blocks.iter().map(|bl| lambda + 1.0 + 2.0 * bl.index as f64).collect();
            let sig1 = direct_sum_rep(&lams, f, w);
            let c_inv = (&id - &a * al.conj()) / (s * scale);
            (sig1 * &b, &b * sigma * c_inv * m0)
        }
        Side::Left => {
            let bstar = bm.orthonormal().adjoint();
            let lams: Vec<f64> = bm.domain.blocks.iter().map(|bl| lambda - 1.0 + 2.0 * bl.index as f64).collect();
            let sig2 = direct_sum_rep(&lams, f, w);
            let c_adj_inv = (&id - a.adjoint() * al) / (s.conj() * scale);
            (sig2 * &bstar, &bstar * sigma * c_adj_inv * m0)
        }
    };
    let rows = block_indices(lhs.nrows() / (w + 1), w, n_trunc);
    let cols = block_indices(n, w, interior);
    Ok(max_abs(&(submatrix(&lhs, &rows, &cols) - submatrix(&rhs, &rows, &cols))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::series_compose_pow;
    use crate::blockops::weighted_shift;
    use crate::mobius::{branch_s_pow, random_map};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn identity_and_rotation() {
        let id = discrete_series_matrix(2.5, &MobiusMap::identity(), 12).matrix;
        assert!(max_abs(&(id - CMat::identity(13, 13))) < 1e-15);
        let beta = Complex64::from_polar(1.0, 0.7);
        let r = discrete_series_matrix(2.5, &MobiusMap::rotation(beta), 12).matrix;
        for k in 0..=12 {
            let want = branch_s_pow(beta.conj(), 2.5) * beta.conj().powu(k as u32);
            assert!(close(r[(k, k)], want, 1e-14));
        }
    }

    #[test]
    fn column_zero_is_cocycle_series() {
        let phi = MobiusMap::involution_at(cplx(0.5, 0.0)).unwrap();
        let rep = discrete_series_matrix(1.0, &phi, 20).matrix;
        let series = series_compose_pow(&phi.invert(), 1.0, 0, 20);
        for r in 0..=20 {
            assert!(close(rep[(r, 0)], series.coeff(r), 1e-14));
        }
    }

    #[test]
    fn interior_columns_are_unit() {
        let f = MobiusMap::new(cplx(0.4, -0.3), Complex64::from_polar(1.0, 1.1)).unwrap();
        let rep = discrete_series_matrix(2.5, &f, 60);
        assert!(rep.interior > 0);
        assert!(rep.interior_unitarity_defect() < 1e-12);
        let n = working_truncation(48, 16, 0.6, 4.5);
        let mut rep = discrete_series_matrix(2.5, &MobiusMap::involution_at(cplx(0.0, 0.6)).unwrap(), n);
        rep.interior = 16;
        assert!(rep.interior_unitarity_defect() < 1e-12);
    }

    #[test]
    fn d1_minus_examples() {
        let id = d1_minus_matrix(&MobiusMap::identity(), 8).matrix;
        assert!(max_abs(&(id - CMat::identity(9, 9))) < 1e-15);
        let r = MobiusMap::rotation(cplx(-1.0, 0.0));
        let m = d1_minus_matrix(&r, 8).matrix;
        let plus = discrete_series_matrix(1.0, &r.star(), 8).matrix;
        assert!(max_abs(&(m + plus)) < 1e-15);
        let real = MobiusMap::involution_at(cplx(0.3, 0.0)).unwrap();
        let m0 = multiplier_m0(&real, &real.invert());
        let diff = d1_minus_matrix(&real, 10).matrix - discrete_series_matrix(1.0, &real, 10).matrix * cplx(m0, 0.0);
        assert!(max_abs(&diff) < 1e-14);
    }

    #[test]
    fn projective_law_examples() {
        let id = MobiusMap::identity();
        let law = check_projective_law(2.0, &id, &id, 24, 8).unwrap();
        assert!(close(law.multiplier, cplx(1.0, 0.0), 1e-15) && law.residual < 1e-15);
        let ri = MobiusMap::rotation(cplx(0.0, 1.0));
        assert!(check_projective_law(2.0, &ri, &ri, 24, 8).unwrap().residual <= 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let f = random_map(&mut rng, 0.5);
            let g = random_map(&mut rng, 0.5);
            let law = check_projective_law(1.0, &f, &g, 48, 16).unwrap();
            assert!(close(law.multiplier, cplx(multiplier_m0(&f, &g), 0.0), 1e-8), "{law:?}");
        }
    }

    #[test]
    fn operator_calculus() {
        let t = weighted_shift(2.0, 10).orthonormal();
        let (c, phi) = mobius_of_operator(&MobiusMap::identity(), &t).unwrap();
        assert!(max_abs(&(c - CMat::identity(11, 11))) < 1e-15 && max_abs(&(phi - &t)) < 1e-15);
        let beta = Complex64::from_polar(1.0, -2.0);
        let (c, phi) = mobius_of_operator(&MobiusMap::rotation(beta), &t).unwrap();
        assert!(max_abs(&(c - CMat::identity(11, 11) * branch_s(beta))) < 1e-15);
        assert!(max_abs(&(phi - &t * beta)) < 1e-15);
        let f = MobiusMap::new(cplx(0.3, 0.2), Complex64::from_polar(1.0, 0.4)).unwrap();
        let a = build_a(2.5, &[1.0, 1.0], 20).unwrap().orthonormal();
        let (c, phi) = mobius_of_operator(&f, &a).unwrap();
        let id = CMat::identity(a.nrows(), a.ncols());
        let lhs = &id - phi.adjoint() * &phi;
        let rhs = c.adjoint() * (&id - a.adjoint() * &a) * &c;
        assert!(max_abs(&(lhs - rhs)) < 1e-10);
        // c(φ,T)² = φ′(T) = β(1−|α|²)(I−ᾱT)⁻².
        let inv = solve(&(&id - &a * f.alpha().conj()), &id).unwrap();
        let deriv = &inv * &inv * (f.beta() * (1.0 - f.alpha().norm_sqr()));
        assert!(max_abs(&(&c * &c - deriv)) < 1e-10);
    }

    #[test]
    fn companion_examples() {
        let mu = [1.0, 1.0];
        for side in [Side::Right, Side::Left] {
            assert!(companion_check(2.5, &mu, &MobiusMap::identity(), 24, 8, side).unwrap() < 1e-14);
            let r = MobiusMap::rotation(cplx(0.0, 1.0));
            assert!(companion_check(2.5, &mu, &r, 24, 8, side).unwrap() < 1e-12);
            let phi = MobiusMap::involution_at(cplx(0.3, 0.0)).unwrap();
            assert!(companion_check(2.5, &mu, &phi, 48, 16, side).unwrap() < 1e-6);
        }
        assert!(companion_check(2.0, &[1.0, 0.5], &MobiusMap::identity(), 8, 2, Side::Right).is_err());
    }

    #[test]
    fn working_truncation_grows_with_radius() {
        assert_eq!(working_truncation(48, 16, 0.0, 6.0), 48);
        let small = working_truncation(48, 16, 0.2, 6.0);
        let large = working_truncation(48, 16, 0.6, 6.0);
        assert!(small <= large && large <= 400);
    }
}
