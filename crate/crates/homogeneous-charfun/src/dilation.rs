//! The minimal unitary dilation
//!
//! ```text
//! Ŵ = [ I⊗S   iD   iC*i_** ]
//!     [ 0     T    (i_*D_*)* ]
//!     [ 0     0    I⊗S*     ]
//! ```
//!
//! on `(𝒟⊗H²) ⊕ ℋ ⊕ (𝒟_*⊗H²)` with Hardy factors truncated at degree `N_H`, the block formulas
//! for `φ(Ŵ)`, extraction of the characteristic operator from the dilation, and the extended
//! representation `σ̂` in the coordinates of the model spaces.
//!
//! Ŵ is applied block by block; it is never assembled for the checks, because the tensor
//! factors make the ambient dimension large.

use num_complex::Complex64;

use crate::blockops::{build_a, build_b_pair, build_c, defect_parameters};
use crate::charfun::{defect_sqrt, theta_direct};
use crate::error::{Error, Result};
use crate::linalg::{cplx, max_abs, spectral_norm, CMat};
use crate::mobius::MobiusMap;
use crate::reps::{d1_minus_matrix, direct_sum_rep, discrete_series_matrix, mobius_of_operator, working_truncation};

/// The blocks of `Ŵ`: `D : ℋ → 𝒟`, `D_* : ℋ → 𝒟_*` and `C : 𝒟 → 𝒟_*` with `CD = −D_*T`.
///
/// Coordinates: `𝒟⊗H²` first (index `deg·dim𝒟 + i`), then `ℋ`, then `𝒟_*⊗H²`.
#[derive(Clone, Debug)]
pub struct DilationBlocks {
    pub t: CMat,
    pub d: CMat,
    pub dstar: CMat,
    pub c: CMat,
    /// Hardy truncation degree `N_H`.
    pub hardy_trunc: usize,
    /// Degree attached to each coordinate of `ℋ`, used to pick interior vectors.
    pub base_degree: Vec<usize>,
}

/// Builds the dilation of a contraction `T` with `𝒟 = 𝒟_* = ℂ^h`, `D = (I−T*T)^{1/2}`,
/// `D_* = (I−TT*)^{1/2}` and `C = −T`.
pub fn build_dilation(t: &CMat, hardy_trunc: usize) -> Result<DilationBlocks> {
    let (d, dstar) = defect_sqrt(t)?;
    Ok(DilationBlocks {
        t: t.clone(),
        d,
        dstar,
        c: -t,
        hardy_trunc,
        base_degree: (0..t.nrows()).collect(),
    })
}

/// The dilation of `M^(λ,μ)` in model coordinates: `𝒟 = H^(λ+1,μ′)`, `𝒟_* = H^(λ−1,μ″)`,
/// `D = B⁺`, `D_* = (B⁻)*` and `C` the middle operator, every space truncated at `N`.
pub fn build_model_dilation(lambda: f64, mu: &[f64], n_trunc: usize, hardy_trunc: usize) -> Result<DilationBlocks> {
    let a = build_a(lambda, mu, n_trunc)?.orthonormal();
    let (bp, bm) = build_b_pair(&lambda, mu, n_trunc)?;
    let c = build_c(&lambda, mu, n_trunc)?.orthonormal();
    Ok(DilationBlocks {
        t: a,
        d: bp.orthonormal(),
        dstar: bm.orthonormal().adjoint(),
        c,
        hardy_trunc,
        base_degree: (0..mu.len()).flat_map(|_| 0..=n_trunc).collect(),
    })
}

impl DilationBlocks {
    fn dd(&self) -> usize {
        self.d.nrows()
    }

    fn ds(&self) -> usize {
        self.dstar.nrows()
    }

    fn h(&self) -> usize {
        self.t.nrows()
    }

    fn hardy_len(&self) -> usize {
        self.hardy_trunc + 1
    }

    /// Offset of `ℋ`.
    pub fn base_offset(&self) -> usize {
        self.hardy_len() * self.dd()
    }

    /// Offset of `𝒟_*⊗H²`.
    pub fn star_offset(&self) -> usize {
        self.base_offset() + self.h()
    }

    pub fn dim(&self) -> usize {
        self.star_offset() + self.hardy_len() * self.ds()
    }

    /// Index of `e_i ⊗ z^deg` in `𝒟⊗H²`.
    pub fn f_index(&self, deg: usize, i: usize) -> usize {
        deg * self.dd() + i
    }

    /// Index of `e_i ⊗ z^deg` in `𝒟_*⊗H²`.
    pub fn fstar_index(&self, deg: usize, i: usize) -> usize {
        self.star_offset() + deg * self.ds() + i
    }

    /// `Ŵ·X` for a block of column vectors.
    pub fn apply(&self, x: &CMat) -> CMat {
        let (dd, ds, h, hl) = (self.dd(), self.ds(), self.h(), self.hardy_len());
        let (oh, os) = (self.base_offset(), self.star_offset());
        let k = x.ncols();
        let mut y = CMat::zeros(self.dim(), k);
        let xh = x.rows(oh, h);
        let xs0 = x.rows(os, ds);
        y.rows_mut(0, dd).copy_from(&(&self.d * xh + self.c.adjoint() * xs0));
        if hl > 1 {
            y.rows_mut(dd, (hl - 1) * dd).copy_from(&x.rows(0, (hl - 1) * dd));
            y.rows_mut(os, (hl - 1) * ds).copy_from(&x.rows(os + ds, (hl - 1) * ds));
        }
        y.rows_mut(oh, h).copy_from(&(&self.t * xh + self.dstar.adjoint() * xs0));
        y
    }

    /// `Ŵ*·X` for a block of column vectors.
    pub fn apply_adjoint(&self, x: &CMat) -> CMat {
        let (dd, ds, h, hl) = (self.dd(), self.ds(), self.h(), self.hardy_len());
        let (oh, os) = (self.base_offset(), self.star_offset());
        let k = x.ncols();
        let mut y = CMat::zeros(self.dim(), k);
        let xf0 = x.rows(0, dd);
        let xh = x.rows(oh, h);
        if hl > 1 {
            y.rows_mut(0, (hl - 1) * dd).copy_from(&x.rows(dd, (hl - 1) * dd));
            y.rows_mut(os + ds, (hl - 1) * ds).copy_from(&x.rows(os, (hl - 1) * ds));
        }
        y.rows_mut(oh, h).copy_from(&(self.t.adjoint() * xh + self.d.adjoint() * xf0));
        y.rows_mut(os, ds).copy_from(&(&self.c * xf0 + &self.dstar * xh));
        y
    }

    /// The full matrix of `Ŵ`.
    pub fn assemble(&self) -> CMat {
        self.apply(&CMat::identity(self.dim(), self.dim()))
    }

    /// Unit vectors with Hardy degree `≤ N_H−K−1` and base degree `≤ max_base`.
    pub fn interior_indices(&self, k: usize, max_base: usize) -> Vec<usize> {
        let top = self.hardy_trunc.saturating_sub(k + 1);
        let mut out: Vec<usize> = (0..=top).flat_map(|deg| (0..self.dd()).map(move |i| (deg, i))).map(|(deg, i)| self.f_index(deg, i)).collect();
        out.extend(self.base_degree.iter().enumerate().filter(|(_, &d)| d <= max_base).map(|(i, _)| self.base_offset() + i));
        out.extend((0..=top).flat_map(|deg| (0..self.ds()).map(move |i| (deg, i))).map(|(deg, i)| self.fstar_index(deg, i)));
        out
    }

    /// `φ(Ŵ)·X = β(Ŵ−α)(I−ᾱŴ)⁻¹X`, the inverse summed as a Neumann series.
    pub fn apply_mobius(&self, f: &MobiusMap, x: &CMat) -> Result<CMat> {
        let a = f.alpha().conj();
        let mut sum = x.clone();
        let mut term = x.clone();
        let mut n = 0;
        while max_abs(&term) > 1e-17 * max_abs(x).max(1e-300) {
            term = self.apply(&term) * a;
            sum += &term;
            n += 1;
            if n > 2000 {
                return Err(Error::Numerical("Neumann series for (I−ᾱŴ)⁻¹ did not converge".into()));
            }
        }
        Ok((self.apply(&sum) - &sum * f.alpha()) * f.beta())
    }
}

fn unit_columns(dim: usize, idx: &[usize]) -> CMat {
    let mut m = CMat::zeros(dim, idx.len());
    for (c, &r) in idx.iter().enumerate() {
        m[(r, c)] = cplx(1.0, 0.0);
    }
    m
}

fn shift_matrix(n: usize, adjoint: bool) -> CMat {
    let mut s = CMat::zeros(n + 1, n + 1);
    for d in 0..n {
        if adjoint {
            s[(d, d + 1)] = cplx(1.0, 0.0);
        } else {
            s[(d + 1, d)] = cplx(1.0, 0.0);
        }
    }
    s
}

/// Residuals of the dilation checks.
#[derive(Clone, Debug, PartialEq)]
pub struct DilationReport {
    /// `max |⟨Ŵx,Ŵy⟩ − ⟨x,y⟩|` over interior unit vectors.
    pub isometry: f64,
    /// `max_k ‖P_ℋŴᵏ|_ℋ − Tᵏ‖` (largest entry) on interior base columns, `1 ≤ k ≤ K`.
    pub power_compression: f64,
    /// Largest entry deviation of `φ(Ŵ)`'s diagonal and superdiagonal blocks from their closed
    /// forms, over the supplied maps.
    pub mobius_blocks: f64,
}

/// Checks isometry, power compression up to `K`, and the block formulas of `φ(Ŵ)` for `maps`.
pub fn check_dilation(b: &DilationBlocks, k: usize, maps: &[MobiusMap]) -> Result<DilationReport> {
    let max_base = b.base_degree.iter().copied().max().unwrap_or(0).saturating_sub(k + 1);
    let idx = b.interior_indices(k, max_base);
    let x = unit_columns(b.dim(), &idx);
    let wx = b.apply(&x);
    let gram = wx.adjoint() * &wx;
    let isometry = max_abs(&(gram - CMat::identity(idx.len(), idx.len())));

    let (h, oh) = (b.h(), b.base_offset());
    let base_cols: Vec<usize> = (0..h).filter(|&i| b.base_degree[i] <= max_base).collect();
    let base_idx: Vec<usize> = base_cols.iter().map(|&i| oh + i).collect();
    let mut v = unit_columns(b.dim(), &base_idx);
    let mut tk = CMat::identity(h, h);
    let mut power_compression = 0.0f64;
    for _ in 0..k {
        v = b.apply(&v);
        tk = &b.t * tk;
        let got = v.rows(oh, h).into_owned();
        let want = crate::linalg::select_columns(&tk, &base_cols);
        power_compression = power_compression.max(max_abs(&(got - want)));
    }

    let mut mobius_blocks = 0.0f64;
    for f in maps {
        mobius_blocks = mobius_blocks.max(mobius_block_residual(b, f, &idx)?);
    }
    Ok(DilationReport { isometry, power_compression, mobius_blocks })
}

fn mobius_block_residual(b: &DilationBlocks, f: &MobiusMap, idx: &[usize]) -> Result<f64> {
    let (dd, ds, h, hl) = (b.dd(), b.ds(), b.h(), b.hardy_len());
    let (oh, os) = (b.base_offset(), b.star_offset());
    let x = unit_columns(b.dim(), idx);
    let got = b.apply_mobius(f, &x)?;

    let (c_t, phi_t) = mobius_of_operator(f, &b.t)?;
    let (c_s, phi_s) = mobius_of_operator(f, &shift_matrix(b.hardy_trunc, false))?;
    let (c_ss, phi_ss) = mobius_of_operator(f, &shift_matrix(b.hardy_trunc, true))?;
    let d_ct = &b.d * &c_t;
    let c_t_dstar = &c_t * b.dstar.adjoint();

    // Predicted values of the five named blocks; the (1,3) rows are left out.
    let mut want = CMat::zeros(b.dim(), idx.len());
    for (col, &r) in idx.iter().enumerate() {
        if r < oh {
            let (deg, i) = (r / dd, r % dd);
            for e in 0..hl {
                want[(e * dd + i, col)] = phi_s[(e, deg)];
            }
        } else if r < os {
            let j = r - oh;
            for e in 0..hl {
                let coef = c_s[(e, 0)];
                for i in 0..dd {
                    want[(e * dd + i, col)] = coef * d_ct[(i, j)];
                }
            }
            for i in 0..h {
                want[(oh + i, col)] = phi_t[(i, j)];
            }
        } else {
            let (deg, i) = ((r - os) / ds, (r - os) % ds);
            for e in 0..hl {
                want[(os + e * ds + i, col)] = phi_ss[(e, deg)];
            }
            let coef = c_ss[(0, deg)];
            for row in 0..h {
                want[(oh + row, col)] = coef * c_t_dstar[(row, i)];
            }
        }
    }
    let mut worst = 0.0f64;
    for (col, &r) in idx.iter().enumerate() {
        if r < oh {
            // (1,1) and the zero blocks below it.
            for row in 0..b.dim() {
                worst = worst.max((got[(row, col)] - want[(row, col)]).norm());
            }
        } else if r < os {
            for row in 0..os {
                worst = worst.max((got[(row, col)] - want[(row, col)]).norm());
            }
            for row in os..b.dim() {
                worst = worst.max(got[(row, col)].norm());
            }
        } else {
            for row in oh..b.dim() {
                worst = worst.max((got[(row, col)] - want[(row, col)]).norm());
            }
        }
    }
    Ok(worst)
}

/// Residuals of the characteristic-operator extraction.
#[derive(Clone, Debug, PartialEq)]
pub struct CharOperatorReport {
    /// `max_m ‖c_m D − θ̂_m‖` (largest entry), `c_m` extracted from the dilation and `θ̂_m`
    /// the Taylor coefficients of `z ↦ D_*(I−zT*)⁻¹(zI−T)`.
    pub coefficient_deviation: f64,
    /// `‖c₀D + D_*T‖`.
    pub first_coefficient: f64,
    /// `‖G − I‖` for the Gram matrix of `{Ŵⁿ(e_i⊗1)}` spanning the truncated `F_*`.
    pub fstar_gram: f64,
    /// Number of coefficients compared.
    pub coefficients: usize,
}

/// Taylor coefficients `0..count` of a matrix function on the disc from `points` samples on the
/// circle of the given radius.
pub fn taylor_coefficients(f: impl Fn(Complex64) -> Result<CMat>, radius: f64, points: usize, count: usize) -> Result<Vec<CMat>> {
    let samples: Vec<(Complex64, CMat)> = (0..points)
        .map(|j| {
            let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / points as f64);
            f(w * radius).map(|m| (w, m))
        })
        .collect::<Result<_>>()?;
    let (r, c) = samples[0].1.shape();
    Ok((0..count)
        .map(|m| {
            let mut acc = CMat::zeros(r, c);
            for (w, s) in &samples {
                acc += s * w.conj().powu(m as u32);
            }
            acc / cplx(points as f64 * radius.powi(m as i32), 0.0)
        })
        .collect())
}

/// Builds the orthonormal system `Ψ(y⊗zᵐ) = Ŵᵐ(y⊗1)` for `m < N_H`, reads
/// `Θ(Dx⊗1) = j_*^* Ŵ*(Dx⊗1)` in it, and compares with the Taylor coefficients of
/// `θ(z)D` (256 samples at radius 0.8).
pub fn check_characteristic_operator(t: &CMat, hardy_trunc: usize) -> Result<CharOperatorReport> {
    if spectral_norm(t) >= 1.0 {
        return Err(Error::Precondition("the characteristic-operator check needs ‖T‖ < 1".into()));
    }
    let b = build_dilation(t, hardy_trunc)?;
    let (dd, ds, dim) = (b.dd(), b.ds(), b.dim());
    let count = hardy_trunc;

    let mut psi = Vec::with_capacity(count);
    let mut cur = unit_columns(dim, &(0..ds).map(|i| b.fstar_index(0, i)).collect::<Vec<_>>());
    for _ in 0..count {
        psi.push(cur.clone());
        cur = b.apply(&cur);
    }
    let mut basis = CMat::zeros(dim, count * ds);
    for (m, p) in psi.iter().enumerate() {
        basis.columns_mut(m * ds, ds).copy_from(p);
    }
    let fstar_gram = max_abs(&(basis.adjoint() * &basis - CMat::identity(count * ds, count * ds)));

    let mut v = CMat::zeros(dim, b.h());
    v.rows_mut(0, dd).copy_from(&b.d);
    let image = b.apply_adjoint(&v);
    let coeffs: Vec<CMat> = psi.iter().map(|p| p.adjoint() * &image).collect();

    let taylor = taylor_coefficients(|z| theta_direct(t, z), 0.8, 256, count)?;
    let coefficient_deviation = coeffs.iter().zip(&taylor).map(|(a, b)| max_abs(&(a - b))).fold(0.0, f64::max);
    let first_coefficient = max_abs(&(&coeffs[0] + &b.dstar * t));
    Ok(CharOperatorReport { coefficient_deviation, first_coefficient, fstar_gram, coefficients: count })
}

/// `X ↦ Σ(f)·X·D(f)ᵀ` on each column of a tensor block, where `X` holds the coefficients of
/// `z^deg` in its columns.
fn apply_tensor(rep_base: &CMat, rep_hardy: &CMat, x: &CMat, offset: usize, base_dim: usize, hardy_len: usize, out: &mut CMat) {
    for col in 0..x.ncols() {
        let block = CMat::from_fn(base_dim, hardy_len, |i, deg| x[(offset + deg * base_dim + i, col)]);
        let y = rep_base * block * rep_hardy.transpose();
        for deg in 0..hardy_len {
            for i in 0..base_dim {
                out[(offset + deg * base_dim + i, col)] = y[(i, deg)];
            }
        }
    }
}

/// `‖σ̂(f)·φ(Ŵ) − Ŵ·σ̂(f)‖` (largest entry) for `M^(λ,μ)`, with
/// `σ̂ = (Σ′⊗D₁⁺) ⊕ Σ ⊕ (Σ″⊗D₁⁻)` and `Σ, Σ′, Σ″` the direct sums of discrete series on the
/// model spaces of `ℋ`, `𝒟` and `𝒟_*`. Rows are read to degree `N` (base) and `N_H` (Hardy);
/// columns cover degrees up to `N/2` and `N_H/2`.
pub fn check_sigma_hat(lambda: f64, mu: &[f64], f: &MobiusMap, n_trunc: usize, hardy_trunc: usize) -> Result<f64> {
    let params = defect_parameters(&lambda, mu)?;
    params.require_generic()?;
    let n = mu.len();
    let r = f.alpha().norm();
    let (ib, ih) = (n_trunc / 2, hardy_trunc / 2);
    let power = lambda + 2.0 * n as f64 + 2.0;
    let w = working_truncation(n_trunc, ib, r, power) + 2 * n;
    let wh = working_truncation(hardy_trunc, ih, r, 3.0);
    let b = build_model_dilation(lambda, mu, w, wh)?;

    let lam_h: Vec<f64> = (0..n).map(|i| lambda + 2.0 * i as f64).collect();
    let lam_d: Vec<f64> = (0..n).map(|k| lambda + 1.0 + 2.0 * k as f64).collect();
    let lam_s: Vec<f64> = (0..n).map(|j| lambda - 1.0 + 2.0 * j as f64).collect();
    let sigma = direct_sum_rep(&lam_h, f, w);
    let sigma_d = direct_sum_rep(&lam_d, f, w);
    let sigma_s = direct_sum_rep(&lam_s, f, w);
    let d1p = discrete_series_matrix(1.0, f, wh).matrix;
    let d1m = d1_minus_matrix(f, wh).matrix;

    let (dd, ds, h, hl) = (b.dd(), b.ds(), b.h(), b.hardy_len());
    let (oh, os) = (b.base_offset(), b.star_offset());
    let sigma_hat = |x: &CMat| {
        let mut out = CMat::zeros(x.nrows(), x.ncols());
        apply_tensor(&sigma_d, &d1p, x, 0, dd, hl, &mut out);
        out.rows_mut(oh, h).copy_from(&(&sigma * x.rows(oh, h)));
        apply_tensor(&sigma_s, &d1m, x, os, ds, hl, &mut out);
        out
    };

    let block_deg = |i: usize| i % (w + 1);
    let cols: Vec<usize> = (0..b.dim())
        .filter(|&i| {
            if i < oh {
                i / dd <= ih && block_deg(i % dd) <= ib
            } else if i < os {
                block_deg(i - oh) <= ib
            } else {
                (i - os) / ds <= ih && block_deg((i - os) % ds) <= ib
            }
        })
        .collect();
    let rows: Vec<usize> = (0..b.dim())
        .filter(|&i| {
            if i < oh {
                i / dd <= hardy_trunc && block_deg(i % dd) <= n_trunc
            } else if i < os {
                block_deg(i - oh) <= n_trunc
            } else {
                (i - os) / ds <= hardy_trunc && block_deg((i - os) % ds) <= n_trunc
            }
        })
        .collect();

    let x = unit_columns(b.dim(), &cols);
    let lhs = sigma_hat(&b.apply_mobius(f, &x)?);
    let rhs = b.apply(&sigma_hat(&x));
    let diff = lhs - rhs;
    Ok(rows.iter().flat_map(|&r| diff.row(r).iter().map(|z| z.norm()).collect::<Vec<_>>()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockops::weighted_shift;
    use crate::linalg::hermitian_eigen;

    fn shift(lambda: f64, n: usize) -> CMat {
        weighted_shift(lambda, n).orthonormal()
    }

    fn maps() -> Vec<MobiusMap> {
        let phi = MobiusMap::involution_at(cplx(0.3, 0.0)).unwrap();
        vec![MobiusMap::rotation(cplx(0.0, 1.0)), phi, MobiusMap::rotation(cplx(0.0, 1.0)).compose(&MobiusMap::involution_at(cplx(0.2, 0.0)).unwrap())]
    }

    #[test]
    fn zero_operator_has_identity_defects() {
        let b = build_dilation(&CMat::zeros(4, 4), 5).unwrap();
        assert!(max_abs(&(&b.d - CMat::identity(4, 4))) < 1e-14);
        assert!(max_abs(&(&b.dstar - CMat::identity(4, 4))) < 1e-14);
        assert!(max_abs(&b.c) == 0.0);
        let rep = check_dilation(&b, 1, &[]).unwrap();
        assert!(rep.power_compression < 1e-15);
    }

    #[test]
    fn unitary_operator_splits() {
        let u = CMat::from_fn(3, 3, |i, j| if (i + 1) % 3 == j { cplx(1.0, 0.0) } else { cplx(0.0, 0.0) });
        let b = build_dilation(&u, 4).unwrap();
        assert!(max_abs(&b.d) < 1e-7 && max_abs(&b.dstar) < 1e-7);
        let full = b.assemble();
        let oh = b.base_offset();
        let mid = full.view((oh, oh), (3, 3)).into_owned();
        assert!(max_abs(&(mid - &u)) < 1e-15);
        assert!(max_abs(&full.view((0, oh), (oh, 3)).into_owned()) < 1e-7);
    }

    #[test]
    fn column_of_id_block_is_defect_at_degree_zero() {
        let t = shift(2.0, 10);
        let b = build_dilation(&t, 6).unwrap();
        let full = b.assemble();
        let oh = b.base_offset();
        for j in 0..11 {
            for i in 0..11 {
                assert!((full[(i, oh + j)] - b.d[(i, j)]).norm() < 1e-15);
            }
            for r in 11..oh {
                assert!(full[(r, oh + j)].norm() == 0.0);
            }
        }
    }

    #[test]
    fn assembled_matrix_matches_structural_adjoint_and_zero_pattern() {
        let t = shift(2.5, 6);
        let b = build_dilation(&t, 5).unwrap();
        let full = b.assemble();
        let adj = b.apply_adjoint(&CMat::identity(b.dim(), b.dim()));
        assert!(max_abs(&(full.adjoint() - adj)) < 1e-15);
        let (oh, os) = (b.base_offset(), b.star_offset());
        assert!(max_abs(&full.view((oh, 0), (b.dim() - oh, oh)).into_owned()) == 0.0);
        assert!(max_abs(&full.view((os, oh), (b.dim() - os, os - oh)).into_owned()) == 0.0);
    }

    #[test]
    fn dilation_checks_for_weighted_shift() {
        let t = shift(2.0, 32);
        let b = build_dilation(&t, 24).unwrap();
        let rep = check_dilation(&b, 6, &maps()).unwrap();
        assert!(rep.isometry <= 1e-10, "{rep:?}");
        assert!(rep.power_compression <= 1e-10, "{rep:?}");
        assert!(rep.mobius_blocks <= 1e-8, "{rep:?}");
    }

    #[test]
    fn rotation_blocks_are_exact() {
        let b = build_dilation(&shift(2.5, 12), 8).unwrap();
        let rep = check_dilation(&b, 2, &[MobiusMap::rotation(Complex64::from_polar(1.0, 0.9))]).unwrap();
        assert!(rep.mobius_blocks <= 1e-12, "{rep:?}");
    }

    #[test]
    fn full_matrix_is_unitary_away_from_the_hardy_edge() {
        let b = build_dilation(&shift(3.0, 5), 6).unwrap();
        let full = b.assemble();
        let g = full.adjoint() * &full;
        let (ev, _) = hermitian_eigen(&g);
        // Exactly dim(𝒟) directions (the top Hardy degree) leave the truncation.
        let lost = ev.iter().filter(|&&e| e < 0.5).count();
        assert_eq!(lost, b.d.nrows());
    }

    #[test]
    fn characteristic_operator_matches_closed_form() {
        let t = shift(2.5, 32);
        let rep = check_characteristic_operator(&t, 24).unwrap();
        assert!(rep.coefficient_deviation <= 1e-8, "{rep:?}");
        assert!(rep.first_coefficient <= 1e-12, "{rep:?}");
        assert!(rep.fstar_gram <= 1e-10, "{rep:?}");
    }

    #[test]
    fn zero_operator_characteristic_function_is_z() {
        let t = CMat::zeros(3, 3);
        let rep = check_characteristic_operator(&t, 6).unwrap();
        assert!(rep.coefficient_deviation <= 1e-12);
        let c = taylor_coefficients(|z| theta_direct(&t, z), 0.8, 64, 3).unwrap();
        assert!(max_abs(&c[0]) < 1e-14 && max_abs(&(&c[1] - CMat::identity(3, 3))) < 1e-13 && max_abs(&c[2]) < 1e-13);
    }

    #[test]
    fn dft_coefficients_match_series_oracle() {
        // θ̂(z) = −D_*T + Σ_{m≥1} zᵐ D_* T*^{m−1} (I−T*T).
        let t = shift(3.0, 8) * cplx(0.9, 0.1);
        let (_, dstar) = defect_sqrt(&t).unwrap();
        let c = taylor_coefficients(|z| theta_direct(&t, z), 0.8, 256, 10).unwrap();
        let id = CMat::identity(9, 9);
        let mut p = id.clone();
        assert!(max_abs(&(&c[0] + &dstar * &t)) < 1e-13);
        for m in 1..10 {
            let want = &dstar * &p * (&id - t.adjoint() * &t);
            assert!(max_abs(&(&c[m] - want)) < 1e-12, "m = {m}");
            p = t.adjoint() * p;
        }
    }

    #[test]
    fn sigma_hat_identity_and_rotation() {
        let r = check_sigma_hat(3.0, &[1.0], &MobiusMap::identity(), 12, 8).unwrap();
        assert!(r < 1e-13, "{r}");
        let r = check_sigma_hat(3.0, &[1.0], &MobiusMap::rotation(Complex64::from_polar(1.0, 0.7)), 12, 8).unwrap();
        assert!(r <= 1e-10, "{r}");
    }

    #[test]
    fn sigma_hat_for_involution() {
        let phi = MobiusMap::involution_at(cplx(0.3, 0.0)).unwrap();
        let r = check_sigma_hat(3.0, &[1.0], &phi, 24, 16).unwrap();
        assert!(r <= 1e-5, "{r}");
    }
}
