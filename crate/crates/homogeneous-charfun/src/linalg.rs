//! Dense matrices: a small generic row-major type for the exact backend and thin
//! wrappers around `nalgebra` for complex floating work.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::algebra::Scalar;
use crate::error::{Error, Result};

/// Complex dense matrix used by the floating backend.
pub type CMat = DMatrix<Complex64>;
/// Complex dense vector.
pub type CVec = DVector<Complex64>;

pub fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Row-major dense matrix over a [`Scalar`] field; multiplication skips zero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a.clone()).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> DenseMat<U> {
        DenseMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Largest `|a − b|` over the listed columns, plus the first column where entries differ
    /// beyond the scalar's equality tolerance.
    pub fn column_discrepancy(&self, other: &Self, cols: &[usize]) -> (f64, Option<usize>) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut worst = 0.0f64;
        let mut first = None;
        for &c in cols {
            for r in 0..self.rows {
                let a = self.get(r, c);
                let b = other.get(r, c);
                let diff = (a.clone() - b.clone()).abs_val();
                let differs = if T::is_exact() { !diff.is_zero() } else { diff.to_f64() > T::eq_tolerance() };
                if differs && first.is_none() {
                    first = Some(c);
                }
                worst = worst.max(diff.to_f64());
            }
        }
        (worst, first)
    }

    pub fn to_complex(&self) -> CMat {
        CMat::from_fn(self.rows, self.cols, |r, c| cplx(self.get(r, c).to_f64(), 0.0))
    }

    /// Rank by Gaussian elimination; pivots below `tol · max|entry|` count as zero
    /// (exact zero test in the rational backend).
    pub fn rank(&self, tol: f64) -> usize {
        let mut m = self.clone();
        let scale = m.data.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
        let is_zero = |x: &T| if T::is_exact() { x.is_zero() } else { x.to_f64().abs() <= tol * scale };
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let pivot = (rank..m.rows)
                .filter(|&r| !is_zero(m.get(r, c)))
                .max_by(|&a, &b| m.get(a, c).abs_val().partial_cmp(&m.get(b, c).abs_val()).unwrap());
            let Some(p) = pivot else { continue };
            for j in 0..m.cols {
                let (x, y) = (m.get(p, j).clone(), m.get(rank, j).clone());
                m.set(p, j, y);
                m.set(rank, j, x);
            }
            let pv = m.get(rank, c).clone();
            for r in (rank + 1)..m.rows {
                let f = m.get(r, c).clone() / pv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(r, j).clone() - f.clone() * m.get(rank, j).clone();
                    m.set(r, j, v);
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Spectral norm.
pub fn spectral_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Spectral norm of a real matrix (cheaper than the complex route).
pub fn spectral_norm_real(m: &DMatrix<f64>) -> f64 {
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let h = (m + m.adjoint()) * cplx(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(m.nrows(), idx.len(), |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigen(m).0.first().copied().unwrap_or(0.0)
}

/// Square root of a Hermitian positive semidefinite matrix. Eigenvalues in `[−clamp, 0)`
/// are set to zero; anything more negative is an error.
pub fn psd_sqrt(m: &CMat, clamp: f64) -> Result<CMat> {
    let (vals, vecs) = hermitian_eigen(m);
    if let Some(&v) = vals.first() {
        if v < -clamp {
            return Err(Error::Numerical(format!("matrix is not positive semidefinite (eigenvalue {v:e})")));
        }
    }
    let d = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&v| cplx(v.max(0.0).sqrt(), 0.0)),
    ));
    Ok(&vecs * d * vecs.adjoint())
}

/// Unitary polar factor `U V^H` of `m = U Σ V^H` (square input).
pub fn polar_unitary(m: &CMat) -> CMat {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^H");
    u * vt
}

/// Solves `a x = b` by LU with partial pivoting.
pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Numerical("singular system".into()))
}

/// Block-diagonal direct sum.
pub fn block_diag(parts: &[CMat]) -> CMat {
    let n: usize = parts.iter().map(|p| p.nrows()).sum();
    let m: usize = parts.iter().map(|p| p.ncols()).sum();
    let mut out = CMat::zeros(n, m);
    let (mut r, mut c) = (0, 0);
    for p in parts {
        out.view_mut((r, c), (p.nrows(), p.ncols())).copy_from(p);
        r += p.nrows();
        c += p.ncols();
    }
    out
}

/// Selects rows and columns by index.
pub fn submatrix(m: &CMat, rows: &[usize], cols: &[usize]) -> CMat {
    CMat::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Selects columns by index.
pub fn select_columns(m: &CMat, cols: &[usize]) -> CMat {
    CMat::from_fn(m.nrows(), cols.len(), |i, j| m[(i, cols[j])])
}
