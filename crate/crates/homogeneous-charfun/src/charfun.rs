//! Defect operators, the characteristic function evaluated directly from
//! `θ(z)D = D_*(I−zT*)⁻¹(zI−T)`, the explicit product formulas in the coordinates of
//! `⊕ H^(λ+2j∓1)`, the inverse-free product-formula check, Möbius covariance and
//! coincidence alignment.

use std::io::Write;

use num_complex::Complex64;

use crate::algebra::{monomial_norms, pochhammer};
use crate::blockops::{build_a, build_b_pair, build_c, c_constants, defect_parameters};
use crate::error::{Error, Result};
use crate::linalg::{cplx, max_abs, polar_unitary, psd_sqrt, singular_values, solve, spectral_norm, submatrix, CMat};
use crate::mobius::MobiusMap;
use crate::reps::{block_indices, discrete_series_matrix, mobius_of_operator, working_truncation};

/// Evaluation points `{0, 0.3, 0.5i, −0.4+0.2i, 0.6e^{iπ/3}, −0.25−0.45i}`.
pub fn default_z_grid() -> Vec<Complex64> {
    vec![
        cplx(0.0, 0.0),
        cplx(0.3, 0.0),
        cplx(0.0, 0.5),
        cplx(-0.4, 0.2),
        Complex64::from_polar(0.6, std::f64::consts::FRAC_PI_3),
        cplx(-0.25, -0.45),
    ]
}

/// How a sample was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleForm {
    /// `D_*(I−zT*)⁻¹(zI−T)`.
    Direct,
    /// Conjugation of the middle operator by discrete series matrices.
    Matrix,
    /// Products of scalar factors `θ_{λ+2ℓ}`.
    ExplicitProduct,
}

/// A characteristic-function value at `z`.
#[derive(Clone, Debug)]
pub struct CharFunSample {
    pub z: Complex64,
    pub matrix: CMat,
    pub form: SampleForm,
    /// Per-block column degrees up to this bound are resolved.
    pub interior: usize,
}

impl CharFunSample {
    /// Largest singular value over the resolved columns.
    pub fn interior_norm(&self, n_blocks: usize) -> f64 {
        let w = self.matrix.ncols() / n_blocks - 1;
        let cols = block_indices(n_blocks, w, self.interior);
        let rows: Vec<usize> = (0..self.matrix.nrows()).collect();
        spectral_norm(&submatrix(&self.matrix, &rows, &cols))
    }
}

/// `D = (I−T*T)^{1/2}` and `D_* = (I−TT*)^{1/2}`.
pub fn defect_sqrt(t: &CMat) -> Result<(CMat, CMat)> {
    let norm = spectral_norm(t);
    if norm > 1.0 + 1e-8 {
        return Err(Error::Precondition(format!("operator is not a contraction (norm {norm})")));
    }
    let id_in = CMat::identity(t.ncols(), t.ncols());
    let id_out = CMat::identity(t.nrows(), t.nrows());
    let d = psd_sqrt(&(id_in - t.adjoint() * t), 1e-10)?;
    let dstar = psd_sqrt(&(id_out - t * t.adjoint()), 1e-10)?;
    Ok((d, dstar))
}

/// `(I−zT*)⁻¹(zI−T)`.
pub fn transfer_factor(t: &CMat, z: Complex64) -> Result<CMat> {
    let n = t.nrows();
    let id = CMat::identity(n, n);
    solve(&(&id - t.adjoint() * z), &(&id * z - t))
}

/// `Θ̂(z) = D_*(I−zT*)⁻¹(zI−T)`, so that `θ(z)(Dx) = Θ̂(z)x`.
pub fn theta_direct(t: &CMat, z: Complex64) -> Result<CMat> {
    if !(z.norm() < 1.0) {
        return Err(Error::Precondition("z must lie in the open disc".into()));
    }
    let (_, dstar) = defect_sqrt(t)?;
    Ok(dstar * transfer_factor(t, z)?)
}

fn derivative_on(lambda_from: f64, k: usize, w: usize) -> CMat {
    let src = monomial_norms(&lambda_from, w);
    let dst = monomial_norms(&(lambda_from + 2.0 * k as f64), w);
    let mut m = CMat::zeros(w + 1, w + 1);
    for d in k..=w {
        let ff: f64 = ((d - k + 1)..=d).map(|x| x as f64).product();
        m[(d - k, d)] = cplx(ff * dst[d - k].sqrt() / src[d].sqrt(), 0.0);
    }
    m
}

/// `(1/√((λ−1)_{2n}))·D⁺_{λ−1}(φ_z)*·(∂ⁿ)*·D⁺_{λ+2n−1}(φ_z)` at truncation `w`.
pub(crate) fn theta_power_raw(lambda: f64, n: usize, z: Complex64, w: usize) -> Result<CMat> {
    let phi = MobiusMap::involution_at(z)?;
    let left = discrete_series_matrix(lambda - 1.0, &phi, w).matrix;
    let right = discrete_series_matrix(lambda + 2.0 * n as f64 - 1.0, &phi, w).matrix;
    let d = derivative_on(lambda - 1.0, n, w);
    let scale = 1.0 / pochhammer(&(lambda - 1.0), 2 * n).sqrt();
    Ok(left.adjoint() * d.adjoint() * right * cplx(scale, 0.0))
}

fn restrict(m: &CMat, n_row_blocks: usize, n_col_blocks: usize, w: usize, rows: usize, cols: usize) -> CMat {
    submatrix(m, &block_indices(n_row_blocks, w, rows), &block_indices(n_col_blocks, w, cols))
}

/// Tail exponent used to size working truncations for `n` summands.
fn tail_power(lambda: f64, n: usize) -> f64 {
    lambda + 2.0 * n as f64 + 2.0
}

/// The scalar characteristic function `θ_λ(z) : H^(λ+1) → H^(λ−1)`, rows and columns to degree `N`.
pub fn theta_scalar(lambda: f64, z: Complex64, n_trunc: usize, interior: usize) -> Result<CharFunSample> {
    if lambda <= 1.0 {
        return Err(Error::Precondition("θ_λ needs λ > 1".into()));
    }
    let w = working_truncation(n_trunc, interior, z.norm(), tail_power(lambda, 1)) + 2;
    let raw = theta_power_raw(lambda, 1, z, w)?;
    Ok(CharFunSample { z, matrix: restrict(&raw, 1, 1, w, n_trunc, n_trunc), form: SampleForm::Matrix, interior })
}

/// Both forms of the characteristic function of a generic `M^(λ,μ)`.
#[derive(Clone, Debug)]
pub struct GenericTheta {
    pub matrix_form: CharFunSample,
    pub entrywise_form: CharFunSample,
    /// Largest entry difference on resolved columns.
    pub discrepancy: f64,
}

fn theta_generic_raw(lambda: f64, mu: &[f64], z: Complex64, w: usize) -> Result<(CMat, CMat)> {
    let n = mu.len();
    let phi = MobiusMap::involution_at(z)?;
    let c = build_c(&lambda, mu, w)?.orthonormal();
    let left: Vec<CMat> = (0..n).map(|j| discrete_series_matrix(lambda + 2.0 * j as f64 - 1.0, &phi, w).matrix).collect();
    let right: Vec<CMat> = (0..n).map(|k| discrete_series_matrix(lambda + 2.0 * k as f64 + 1.0, &phi, w).matrix).collect();
    let bl = w + 1;
    let mut matrix = CMat::zeros(n * bl, n * bl);
    for j in 0..n {
        for k in 0..n {
            let blk = c.view((j * bl, k * bl), (bl, bl)).into_owned();
            if blk.iter().all(|x| *x == cplx(0.0, 0.0)) {
                continue;
            }
            let v = left[j].adjoint() * blk * &right[k];
            matrix.view_mut((j * bl, k * bl), (bl, bl)).copy_from(&v);
        }
    }
    let x = c_constants(lambda, mu)?;
    let factors: Vec<CMat> = (0..n)
        .map(|l| theta_power_raw(lambda + 2.0 * l as f64, 1, z, w))
        .collect::<Result<_>>()?;
    let mut entrywise = CMat::zeros(n * bl, n * bl);
    for k in 0..n {
        if k + 1 < n {
            let v = CMat::identity(bl, bl) * cplx(x[k + 1][k], 0.0);
            entrywise.view_mut(((k + 1) * bl, k * bl), (bl, bl)).copy_from(&v);
        }
        let mut prod = factors[k].clone();
        for j in (0..=k).rev() {
            if j < k {
                prod = &factors[j] * prod;
            }
            let y = x[j][k] * pochhammer(&(lambda + 2.0 * j as f64 - 1.0), 2 * (k - j) + 2).sqrt();
            entrywise.view_mut((j * bl, k * bl), (bl, bl)).copy_from(&(&prod * cplx(y, 0.0)));
        }
    }
    Ok((matrix, entrywise))
}

/// The matrix form `(⊕D⁺_{λ+2j−1}(φ_z))*·C·(⊕D⁺_{λ+2k+1}(φ_z))` and the entrywise form
/// `θ_jk = y_jk ∏_{j≤ℓ≤k} θ_{λ+2ℓ}`, restricted to degree `N`.
pub fn theta_generic(lambda: f64, mu: &[f64], z: Complex64, n_trunc: usize, interior: usize) -> Result<GenericTheta> {
    let n = mu.len();
    let w = working_truncation(n_trunc, interior, z.norm(), tail_power(lambda, n)) + 2 * n;
    let (m, e) = theta_generic_raw(lambda, mu, z, w)?;
    let m = restrict(&m, n, n, w, n_trunc, n_trunc);
    let e = restrict(&e, n, n, w, n_trunc, n_trunc);
    let cols = block_indices(n, n_trunc, interior);
    let rows: Vec<usize> = (0..m.nrows()).collect();
    let discrepancy = max_abs(&(submatrix(&m, &rows, &cols) - submatrix(&e, &rows, &cols)));
    Ok(GenericTheta {
        matrix_form: CharFunSample { z, matrix: m, form: SampleForm::Matrix, interior },
        entrywise_form: CharFunSample { z, matrix: e, form: SampleForm::ExplicitProduct, interior },
        discrepancy,
    })
}

/// The two sides of `θ^(λ,μ)(z)·B⁺ = (B⁻)*·(I−zA*)⁻¹(zI−A)` on rows `≤ N`, columns `≤ interior`.
pub fn master_sides(lambda: f64, mu: &[f64], z: Complex64, n_trunc: usize, interior: usize) -> Result<(CMat, CMat)> {
    defect_parameters(&lambda, mu)?.require_generic()?;
    let n = mu.len();
    let w = working_truncation(n_trunc, interior, z.norm(), tail_power(lambda, n)) + 2 * n;
    let (theta, _) = theta_generic_raw(lambda, mu, z, w)?;
    let a = build_a(lambda, mu, w)?.orthonormal();
    let (bp, bm) = build_b_pair(&lambda, mu, w)?;
    let lhs = theta * bp.orthonormal();
    let rhs = bm.orthonormal().adjoint() * transfer_factor(&a, z)?;
    Ok((restrict(&lhs, n, n, w, n_trunc, interior), restrict(&rhs, n, n, w, n_trunc, interior)))
}

/// Max-entry residual of the inverse-free product formula.
pub fn master_check(lambda: f64, mu: &[f64], z: Complex64, n_trunc: usize, interior: usize) -> Result<f64> {
    let (l, r) = master_sides(lambda, mu, z, n_trunc, interior)?;
    Ok(max_abs(&(l - r)))
}

/// Largest deviation between the singular values of `Θ̂_{φ(T)}(z)·c(φ,T)⁻¹` and
/// `Θ̂_T(φ⁻¹(z))` on the given columns, over the grid.
pub fn check_covariance(t: &CMat, f: &MobiusMap, zs: &[Complex64], cols: &[usize]) -> Result<f64> {
    let (c, phi_t) = mobius_of_operator(f, t)?;
    let c_inv = solve(&c, &CMat::identity(c.nrows(), c.ncols()))?;
    let (_, dstar) = defect_sqrt(t)?;
    let (_, dstar_phi) = defect_sqrt(&phi_t)?;
    let rows: Vec<usize> = (0..t.nrows()).collect();
    let finv = f.invert();
    let mut worst = 0.0f64;
    for &z in zs {
        let lhs = &dstar_phi * transfer_factor(&phi_t, z)? * &c_inv;
        let rhs = &dstar * transfer_factor(t, finv.apply(z))?;
        let sl = singular_values(&submatrix(&lhs, &rows, cols));
        let sr = singular_values(&submatrix(&rhs, &rows, cols));
        for (a, b) in sl.iter().zip(&sr) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

/// Which unitaries the alignment may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlignMode {
    /// `u·θ₁(z) ≈ θ₂(z)` with `v = I`.
    LeftOnly,
    /// `u·θ₁(z) ≈ θ₂(z)·v`, alternating Procrustes steps.
    TwoSided,
}

/// Unitaries realizing a coincidence `u·θ₁(z) = θ₂(z)·v` and the worst residual.
#[derive(Clone, Debug)]
pub struct Alignment {
    pub u: CMat,
    pub v: CMat,
    /// `max_z ‖u·θ₁(z) − θ₂(z)·v‖` (largest entry).
    pub residual: f64,
    /// The base sample has rank below its smaller dimension, so the fit is not unique.
    pub rank_deficient: bool,
}

/// Procrustes alignment of two sample sets.
pub fn coincidence_align(s1: &[CMat], s2: &[CMat], base: usize, mode: AlignMode) -> Result<Alignment> {
    if s1.len() != s2.len() || s1.is_empty() || base >= s1.len() {
        return Err(Error::Precondition("sample sets must be nonempty, equal length, with a valid base".into()));
    }
    if s1.iter().zip(s2).any(|(a, b)| a.shape() != b.shape()) {
        return Err(Error::Precondition("sample shapes differ".into()));
    }
    let (rows, cols) = s1[0].shape();
    let sv = singular_values(&s1[base]);
    let top = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&x| x > 1e-10 * top.max(1e-300)).count();
    let rank_deficient = rank < rows.min(cols);
    let fit_u = |v: &CMat, set: &[(&CMat, &CMat)]| {
        let m: CMat = set.iter().map(|(a, b)| *b * v * a.adjoint()).fold(CMat::zeros(rows, rows), |acc, x| acc + x);
        polar_unitary(&m)
    };
    let fit_v = |u: &CMat, set: &[(&CMat, &CMat)]| {
        let m: CMat = set.iter().map(|(a, b)| b.adjoint() * u * *a).fold(CMat::zeros(cols, cols), |acc, x| acc + x);
        polar_unitary(&m)
    };
    let all: Vec<(&CMat, &CMat)> = s1.iter().zip(s2).collect();
    let mut v = CMat::identity(cols, cols);
    let mut u = fit_u(&v, &all[base..=base]);
    let residual_of = |u: &CMat, v: &CMat| {
        all.iter().map(|(a, b)| max_abs(&(u * *a - *b * v))).fold(0.0, f64::max)
    };
    match mode {
        AlignMode::LeftOnly => u = fit_u(&v, &all),
        AlignMode::TwoSided => {
            let mut best = residual_of(&u, &v);
            for _ in 0..200 {
                v = fit_v(&u, &all);
                u = fit_u(&v, &all);
                let r = residual_of(&u, &v);
                if (best - r).abs() <= 1e-15 * best.max(1.0) {
                    best = r;
                    break;
                }
                best = r;
            }
            let _ = best;
        }
    }
    let residual = residual_of(&u, &v);
    Ok(Alignment { u, v, residual, rank_deficient })
}

/// Writes rows `re(z), im(z), row, col, re(entry), im(entry)`.
pub fn write_samples_csv<W: Write>(samples: &[CharFunSample], mut out: W) -> Result<()> {
    writeln!(out, "re_z,im_z,row,col,re,im")?;
    for s in samples {
        for c in 0..s.matrix.ncols() {
            for r in 0..s.matrix.nrows() {
                let e = s.matrix[(r, c)];
                writeln!(out, "{:?},{:?},{},{},{:?},{:?}", s.z.re, s.z.im, r, c, e.re, e.im)?;
            }
        }
    }
    Ok(())
}
