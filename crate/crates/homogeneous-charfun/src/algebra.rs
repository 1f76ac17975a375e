//! Exact and floating scalars, Pochhammer combinatorics, truncated power series
//! and the two Pochhammer summation identities behind the block operators.

use std::fmt::Debug;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::mobius::MobiusMap;

/// Arbitrary-precision reduced fraction.
pub type RationalScalar = BigRational;

/// Real field used by the dual backend: `BigRational` (exact) or `f64`.
pub trait Scalar:
    Clone + Debug + PartialEq + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self;
    fn from_ratio(n: i64, d: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;
    /// True for the rational backend.
    fn is_exact() -> bool;
    /// Entry-wise comparison tolerance; zero for exact arithmetic.
    fn eq_tolerance() -> f64;
}

impl Scalar for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn is_exact() -> bool {
        true
    }
    fn eq_tolerance() -> f64 {
        0.0
    }
}

impl Scalar for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn is_exact() -> bool {
        false
    }
    fn eq_tolerance() -> f64 {
        1e-10
    }
}

/// Rising factorial `(x)_p = x (x+1) ... (x+p-1)`; `(x)_0 = 1`.
pub fn pochhammer<T: Scalar>(x: &T, p: usize) -> T {
    let mut acc = T::one();
    for i in 0..p {
        acc = acc * (x.clone() + T::from_int(i as i64));
    }
    acc
}

/// `(x)_p / p!`, i.e. the generalized binomial `binom(x+p-1, p)`.
pub fn rising_over_factorial<T: Scalar>(x: &T, p: usize) -> T {
    let mut acc = T::one();
    for i in 0..p {
        acc = acc * (x.clone() + T::from_int(i as i64)) / T::from_int(i as i64 + 1);
    }
    acc
}

/// Binomial coefficient `binom(n, k)` in the scalar field (zero when k > n).
pub fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::from_int((n - i) as i64) / T::from_int(i as i64 + 1);
    }
    acc
}

/// Falling factorial `d!/(d-k)!` (zero when k > d).
pub fn falling<T: Scalar>(d: usize, k: usize) -> T {
    if k > d {
        return T::zero();
    }
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::from_int((d - i) as i64);
    }
    acc
}

/// Squared monomial norms `d!/(x)_d` for d = 0..=n, computed by ratios.
pub fn monomial_norms<T: Scalar>(x: &T, n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n + 1);
    let mut g = T::one();
    for d in 0..=n {
        out.push(g.clone());
        g = g * T::from_int(d as i64 + 1) / (x.clone() + T::from_int(d as i64));
    }
    out
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.125"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let num = BigInt::from_str(&digits).map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = BigRational::new(num, den);
    Ok(if neg { -r } else { r })
}

/// Formats a rational as `"p/q"` (or `"p"` for integers).
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Both sides of a summation identity.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentitySides<T> {
    pub lhs: T,
    pub rhs: T,
}

impl<T: Scalar> IdentitySides<T> {
    pub fn holds(&self) -> bool {
        if T::is_exact() {
            self.lhs == self.rhs
        } else {
            (self.lhs.to_f64() - self.rhs.to_f64()).abs() <= T::eq_tolerance()
        }
    }
}

/// First identity: for `0 <= j < l`,
/// `sum_{i=j+1}^{l} (j+1)_{i-j} binom(l,i) / ((λ+2j)_{2i-2j-1} (λ+2i)_{l-i}) = (l-j) binom(l,j)/(λ+2j)_{l-j}`.
pub fn check_identity1<T: Scalar>(lambda: &T, j: usize, l: usize) -> Result<IdentitySides<T>> {
    if j >= l {
        return Err(Error::Precondition(format!("identity 1 needs j < l, got j={j}, l={l}")));
    }
    let int = |k: usize| T::from_int(k as i64);
    let lj = lambda.clone() + int(2 * j);
    // Each factor of the summand is updated in place as i advances.
    let mut rising = int(j + 1);
    let mut binom = binomial::<T>(l, j + 1);
    let mut left = lj.clone();
    let mut right = pochhammer(&(lambda.clone() + int(2 * j + 2)), l - j - 1);
    let mut lhs = T::zero();
    for i in (j + 1)..=l {
        lhs = lhs + rising.clone() * binom.clone() / (left.clone() * right.clone());
        if i == l {
            break;
        }
        let m = 2 * (i - j) - 1;
        rising = rising * int(i + 1);
        binom = binom * int(l - i) / int(i + 1);
        left = left * (lj.clone() + int(m)) * (lj.clone() + int(m + 1));
        right = right * (lambda.clone() + int(i + l)) / ((lambda.clone() + int(2 * i)) * (lambda.clone() + int(2 * i + 1)));
    }
    let rhs = int(l - j) * binomial::<T>(l, j) / pochhammer(&lj, l - j);
    Ok(IdentitySides { lhs, rhs })
}

/// Second identity: for `0 <= j <= l`,
/// `sum_{i=j}^{l} (j+1)_{i-j} binom(l,i) / ((λ+2j)_{2i-2j} (λ+2i+1)_{l-i}) = binom(l,j)/(λ+2j)_{l-j}`.
pub fn check_identity2<T: Scalar>(lambda: &T, j: usize, l: usize) -> Result<IdentitySides<T>> {
    if j > l {
        return Err(Error::Precondition(format!("identity 2 needs j <= l, got j={j}, l={l}")));
    }
    let int = |k: usize| T::from_int(k as i64);
    let lj = lambda.clone() + int(2 * j);
    let mut rising = T::one();
    let mut binom = binomial::<T>(l, j);
    let mut left = T::one();
    let mut right = pochhammer(&(lambda.clone() + int(2 * j + 1)), l - j);
    let mut lhs = T::zero();
    for i in j..=l {
        lhs = lhs + rising.clone() * binom.clone() / (left.clone() * right.clone());
        if i == l {
            break;
        }
        let m = 2 * (i - j);
        rising = rising * int(i + 1);
        binom = binom * int(l - i) / int(i + 1);
        left = left * (lj.clone() + int(m)) * (lj.clone() + int(m + 1));
        right = right * (lambda.clone() + int(i + l + 1)) / ((lambda.clone() + int(2 * i + 1)) * (lambda.clone() + int(2 * i + 2)));
    }
    let rhs = binomial::<T>(l, j) / pochhammer(&lj, l - j);
    Ok(IdentitySides { lhs, rhs })
}

/// Sweeps both identities over every admissible `(j, l)` with `l <= l_max`;
/// returns the first failing `(identity, j, l)` if any.
pub fn sweep_identities<T: Scalar>(lambda: &T, l_max: usize) -> Option<(u8, usize, usize)> {
    for l in 0..=l_max {
        for j in 0..=l {
            if j < l && !check_identity1(lambda, j, l).map(|s| s.holds()).unwrap_or(false) {
                return Some((1, j, l));
            }
            if !check_identity2(lambda, j, l).map(|s| s.holds()).unwrap_or(false) {
                return Some((2, j, l));
            }
        }
    }
    None
}

/// Degree-truncated complex power series `c_0 + c_1 z + ... + c_N z^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Series from coefficients, padded or cut to truncation degree `n`.
    pub fn new(mut coeffs: Vec<Complex64>, n: usize) -> Self {
        coeffs.resize(n + 1, Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(Vec::new(), n)
    }

    pub fn constant(c: Complex64, n: usize) -> Self {
        Self::new(vec![c], n)
    }

    /// `c z^k`, which is zero when `k > n`.
    pub fn monomial(c: Complex64, k: usize, n: usize) -> Self {
        let mut s = Self::zero(n);
        if k <= n {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.degree().min(other.degree());
        Self::new((0..=n).map(|k| self.coeffs[k] + other.coeffs[k]).collect(), n)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Cauchy product truncated at the smaller degree.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.degree().min(other.degree());
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Term-wise derivative; the result keeps degree `N-1`.
    pub fn derivative(&self) -> Self {
        let n = self.degree();
        if n == 0 {
            return Self::zero(0);
        }
        Self::new((1..=n).map(|k| self.coeffs[k] * k as f64).collect(), n - 1)
    }

    /// Antiderivative with zero constant term, truncated to the same degree.
    pub fn integral(&self) -> Self {
        let n = self.degree();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for k in 1..=n {
            out[k] = self.coeffs[k - 1] / k as f64;
        }
        Self { coeffs: out }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.norm() == 0.0 {
            return Err(Error::Precondition("series inverse needs c0 != 0".into()));
        }
        let n = self.degree();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        out[0] = 1.0 / c0;
        for k in 1..=n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 1..=k {
                s += self.coeffs[i] * out[k - i];
            }
            out[k] = -s / c0;
        }
        Ok(Self { coeffs: out })
    }

    /// Principal logarithm: `Log(c_0) + ∫ f'/f`.
    pub fn log(&self) -> Result<Self> {
        let n = self.degree();
        let inv = self.recip()?;
        let dlog = Self::new(self.derivative().coeffs, n).mul(&inv);
        let mut out = dlog.integral();
        out.coeffs[0] = self.coeffs[0].ln();
        Ok(out)
    }

    /// Exponential, via the recurrence `k e_k = Σ i f_i e_{k-i}`.
    pub fn exp(&self) -> Self {
        let n = self.degree();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        out[0] = self.coeffs[0].exp();
        for k in 1..=n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 1..=k {
                s += self.coeffs[i] * out[k - i] * i as f64;
            }
            out[k] = s / k as f64;
        }
        Self { coeffs: out }
    }

    /// Principal power `exp(p · Log f)`.
    pub fn powf(&self, p: f64) -> Result<Self> {
        Ok(self.log()?.scale(Complex64::new(p, 0.0)).exp())
    }

    pub fn powi(&self, k: usize) -> Self {
        let mut acc = Self::constant(Complex64::new(1.0, 0.0), self.degree());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Taylor coefficients to degree `n` of `z ↦ c(f,z)^λ · f(z)^k`, with the factor-wise
/// branch of `c^λ` fixed in [`MobiusMap::cocycle_pow`].
pub fn series_compose_pow(f: &MobiusMap, lambda: f64, k: usize, n: usize) -> TruncatedSeries {
    let one = Complex64::new(1.0, 0.0);
    let a = f.alpha();
    let lin = TruncatedSeries::new(vec![one, -a.conj()], n);
    let prefactor = f.cocycle_pow_prefactor(lambda);
    let cpow = lin
        .powf(-lambda)
        .expect("1 - conj(alpha) z has unit constant term")
        .scale(prefactor);
    // f(z) = β (z − α) / (1 − ᾱ z)
    let fz = TruncatedSeries::new(vec![-a, one], n)
        .mul(&lin.recip().expect("unit constant term"))
        .scale(f.beta());
    cpow.mul(&fz.powi(k))
}

/// Coefficients of `(1 − ᾱ z)^{−λ}` by the binomial series `Σ (λ)_m/m! ᾱ^m z^m`.
pub fn binomial_series(alpha: Complex64, lambda: f64, n: usize) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut c = Complex64::new(1.0, 0.0);
    for m in 0..=n {
        coeffs.push(c);
        c = c * alpha.conj() * ((lambda + m as f64) / (m as f64 + 1.0));
    }
    TruncatedSeries::new(coeffs, n)
}
