//! Disc automorphisms `φ(z) = β(z−α)/(1−ᾱz)`, the cocycle `c(φ,z)`, the square-root
//! branch `s`, the outer automorphism `φ ↦ φ*` and the ±1-valued multiplier `m₀`.
//!
//! The branch is `s(β) = exp(i·Arg(β)/2)` with `Arg ∈ (−π, π]`. Every multiplier value
//! depends on this choice; the identities checked elsewhere do not.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const UNIT_TOL: f64 = 1e-14;

/// A disc automorphism in `(α, β)` normal form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    alpha: Complex64,
    beta: Complex64,
}

/// `Arg ∈ (−π, π]`; a negative zero imaginary part still gives `π` on the negative axis.
pub fn principal_arg(beta: Complex64) -> f64 {
    if beta.im == 0.0 && beta.re < 0.0 {
        std::f64::consts::PI
    } else {
        beta.arg()
    }
}

/// Principal square root on the unit circle.
pub fn branch_s(beta: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, principal_arg(beta) / 2.0)
}

/// `s(β)^λ := exp(iλ·Arg(β)/2)`.
pub fn branch_s_pow(beta: Complex64, lambda: f64) -> Complex64 {
    Complex64::from_polar(1.0, lambda * principal_arg(beta) / 2.0)
}

impl MobiusMap {
    /// Builds `φ` from its zero `α` and unimodular factor `β` (renormalized).
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        if !(alpha.norm() < 1.0) {
            return Err(Error::Precondition(format!("|alpha| must be < 1, got {}", alpha.norm())));
        }
        let m = beta.norm();
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::Precondition("beta must be nonzero".into()));
        }
        let beta = if (m - 1.0).abs() <= UNIT_TOL { beta } else { beta / m };
        Ok(Self { alpha, beta: beta / beta.norm() })
    }

    pub fn identity() -> Self {
        Self { alpha: Complex64::new(0.0, 0.0), beta: Complex64::new(1.0, 0.0) }
    }

    /// `z ↦ βz`.
    pub fn rotation(beta: Complex64) -> Self {
        Self::new(Complex64::new(0.0, 0.0), beta).expect("rotation parameters are valid")
    }

    /// The involution `φ_z(w) = (z−w)/(1−z̄w)` swapping 0 and z.
    pub fn involution_at(z: Complex64) -> Result<Self> {
        if !(z.norm() < 1.0) {
            return Err(Error::Precondition(format!("involution point must satisfy |z| < 1, got {z}")));
        }
        Self::new(z, Complex64::new(-1.0, 0.0))
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// Membership in the rotation subgroup (`φ(0) = 0`).
    pub fn is_rotation(&self) -> bool {
        self.alpha == Complex64::new(0.0, 0.0)
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.beta * (z - self.alpha) / (1.0 - self.alpha.conj() * z)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let d = 1.0 - self.alpha.conj() * z;
        self.beta * (1.0 - self.alpha.norm_sqr()) / (d * d)
    }

    /// 2×2 matrix `[[β, −βα], [−ᾱ, 1]]` acting by linear fractional transformation.
    fn matrix(&self) -> [[Complex64; 2]; 2] {
        let one = Complex64::new(1.0, 0.0);
        [[self.beta, -self.beta * self.alpha], [-self.alpha.conj(), one]]
    }

    fn from_matrix(m: [[Complex64; 2]; 2]) -> Self {
        let alpha = -m[0][1] / m[0][0];
        let beta = m[0][0] / m[1][1];
        Self::new(alpha, beta).expect("product of disc automorphisms is a disc automorphism")
    }

    /// `z ↦ f(g(z))`.
    pub fn compose(&self, g: &MobiusMap) -> MobiusMap {
        let a = self.matrix();
        let b = g.matrix();
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self::from_matrix(m)
    }

    /// Two-sided inverse, `(α, β)⁻¹ = (−αβ, β̄)`.
    pub fn invert(&self) -> MobiusMap {
        Self::new(-self.alpha * self.beta, self.beta.conj()).expect("inverse is valid")
    }

    /// `φ*(z) = conj(φ(z̄))`, with parameters `(ᾱ, β̄)`.
    pub fn star(&self) -> MobiusMap {
        Self { alpha: self.alpha.conj(), beta: self.beta.conj() }
    }

    /// `c(φ,z) = s(β)·√(1−|α|²)/(1−ᾱz)`; its square is `φ′(z)`.
    pub fn cocycle_c(&self, z: Complex64) -> Complex64 {
        branch_s(self.beta) * (1.0 - self.alpha.norm_sqr()).sqrt() / (1.0 - self.alpha.conj() * z)
    }

    /// The z-independent factor `s(β)^λ (1−|α|²)^{λ/2}` of `c(φ,z)^λ`.
    pub fn cocycle_pow_prefactor(&self, lambda: f64) -> Complex64 {
        branch_s_pow(self.beta, lambda) * (1.0 - self.alpha.norm_sqr()).powf(lambda / 2.0)
    }

    /// `c(φ,z)^λ`, defined factor by factor with `(1−ᾱz)^{−λ}` on the principal branch.
    pub fn cocycle_pow(&self, lambda: f64, z: Complex64) -> Complex64 {
        self.cocycle_pow_prefactor(lambda) * (1.0 - self.alpha.conj() * z).powf(-lambda)
    }
}

/// The multiplier `m₀(φ₁, φ₂) = s(β̄)/(s(β̄₁)s(β̄₂)) · u/|u|` with `u = 1+α₁ᾱ₂β̄₂`,
/// where `β` belongs to `φ₁φ₂`. The result is ±1 up to rounding.
pub fn multiplier_m0(f: &MobiusMap, g: &MobiusMap) -> f64 {
    let fg = f.compose(g);
    let u = 1.0 + f.alpha * g.alpha.conj() * g.beta.conj();
    let v = branch_s(fg.beta.conj()) / (branch_s(f.beta.conj()) * branch_s(g.beta.conj())) * u / u.norm();
    v.re
}

/// The same multiplier read off from the cocycle chain
/// `c(g⁻¹f⁻¹, z) = m₀(f,g)·c(g⁻¹, f⁻¹(z))·c(f⁻¹, z)`, evaluated at `z`.
pub fn multiplier_from_chain(f: &MobiusMap, g: &MobiusMap, z: Complex64) -> Complex64 {
    let fi = f.invert();
    let gi = g.invert();
    gi.compose(&fi).cocycle_c(z) / (gi.cocycle_c(fi.apply(z)) * fi.cocycle_c(z))
}

/// Seeded random automorphism with `|α| ≤ max_alpha`, uniform in area and phase.
pub fn random_map<R: rand::Rng>(rng: &mut R, max_alpha: f64) -> MobiusMap {
    let r = max_alpha * rng.random::<f64>().sqrt();
    let t = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    let b = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    MobiusMap::new(Complex64::from_polar(r, t), Complex64::from_polar(1.0, b)).expect("valid")
}

/// Aggregate multiplier diagnostics over seeded random maps.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierReport {
    pub pairs: usize,
    /// `max ||m₀| − 1|`.
    pub unimodular: f64,
    /// `max |m₀² − 1|`.
    pub square: f64,
    /// `max |chain(z) − m₀|` over the subsampled pairs and points.
    pub cocycle: f64,
    /// Pairs violating the product relation for `m₀(f,f⁻¹)`, `m₀(g,g⁻¹)`, `m₀(fg,(fg)⁻¹)`, `m₀(g⁻¹,f⁻¹)`.
    pub simple_failures: usize,
    /// Triples violating `m₀(f,g)m₀(fg,h) = m₀(f,gh)m₀(g,h)`.
    pub cocycle_law_failures: usize,
}

/// Samples `pairs` random pairs (`|α| ≤ 0.95`) from `seed`; the chain formula is checked on
/// every `pairs/chain_pairs`-th pair at `points` random points with `|z| ≤ 0.9`.
pub fn check_multiplier_properties(seed: u64, pairs: usize, chain_pairs: usize, points: usize) -> MultiplierReport {
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let stride = (pairs / chain_pairs.max(1)).max(1);
    let mut rep = MultiplierReport { pairs, unimodular: 0.0, square: 0.0, cocycle: 0.0, simple_failures: 0, cocycle_law_failures: 0 };
    for i in 0..pairs {
        let f = random_map(&mut rng, 0.95);
        let g = random_map(&mut rng, 0.95);
        let h = random_map(&mut rng, 0.95);
        let m = multiplier_m0(&f, &g);
        rep.unimodular = rep.unimodular.max((m.abs() - 1.0).abs());
        rep.square = rep.square.max((m * m - 1.0).abs());
        if i % stride == 0 {
            for _ in 0..points {
                let z = Complex64::from_polar(0.9 * rng.random::<f64>().sqrt(), rng.random_range(-PI..PI));
                rep.cocycle = rep.cocycle.max((multiplier_from_chain(&f, &g, z) - m).norm());
            }
        }
        let fg = f.compose(&g);
        let sign = |x: f64| x.round() as i64;
        let simple = sign(multiplier_m0(&f, &f.invert()))
            * sign(multiplier_m0(&g, &g.invert()))
            * sign(multiplier_m0(&fg, &fg.invert()))
            * sign(multiplier_m0(&g.invert(), &f.invert()));
        if simple != sign(m) {
            rep.simple_failures += 1;
        }
        let lhs = sign(m) * sign(multiplier_m0(&fg, &h));
        let rhs = sign(multiplier_m0(&f, &g.compose(&h))) * sign(multiplier_m0(&g, &h));
        if lhs != rhs {
            rep.cocycle_law_failures += 1;
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &MobiusMap, b: &MobiusMap) -> bool {
        (a.alpha() - b.alpha()).norm() < 1e-12 && (a.beta() - b.beta()).norm() < 1e-12
    }

    #[test]
    fn group_examples() {
        let phi = MobiusMap::involution_at(c(0.3, 0.0)).unwrap();
        assert!(close(&phi.compose(&phi.invert()), &MobiusMap::identity()));
        assert!(close(&phi.compose(&phi), &MobiusMap::identity()));
        let (b1, b2) = (c(0.0, 1.0), Complex64::from_polar(1.0, 2.0));
        assert!(close(
            &MobiusMap::rotation(b1).compose(&MobiusMap::rotation(b2)),
            &MobiusMap::rotation(b1 * b2)
        ));
        assert!(close(&MobiusMap::identity().invert(), &MobiusMap::identity()));
        assert!(close(&MobiusMap::rotation(b2).invert(), &MobiusMap::rotation(b2.conj())));
        let pz = MobiusMap::involution_at(c(0.2, -0.5)).unwrap();
        assert!(close(&pz.invert(), &pz));
    }

    #[test]
    fn involution_examples() {
        let p0 = MobiusMap::involution_at(c(0.0, 0.0)).unwrap();
        assert_eq!(p0.alpha(), c(0.0, 0.0));
        assert!((p0.beta() - c(-1.0, 0.0)).norm() < 1e-15);
        let z = c(0.4, -0.3);
        assert!(MobiusMap::involution_at(z).unwrap().apply(z).norm() < 1e-15);
        let half = MobiusMap::involution_at(c(0.5, 0.0)).unwrap();
        assert!((half.apply(c(0.25, 0.0)) - c(2.0 / 7.0, 0.0)).norm() < 1e-15);
        assert!(MobiusMap::involution_at(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn star_examples() {
        assert!(close(&MobiusMap::identity().star(), &MobiusMap::identity()));
        assert!(close(&MobiusMap::rotation(c(0.0, 1.0)).star(), &MobiusMap::rotation(c(0.0, -1.0))));
        let p = MobiusMap::involution_at(c(0.35, 0.0)).unwrap();
        assert!(close(&p.star(), &p));
        let f = MobiusMap::new(c(0.1, 0.4), c(0.6, 0.8)).unwrap();
        let z = c(-0.2, 0.3);
        assert!((f.star().apply(z) - f.apply(z.conj()).conj()).norm() < 1e-15);
    }

    #[test]
    fn cocycle_examples() {
        let z = c(0.3, -0.6);
        assert!((MobiusMap::identity().cocycle_c(z) - 1.0).norm() < 1e-15);
        let b = Complex64::from_polar(1.0, 2.5);
        assert!((MobiusMap::rotation(b).cocycle_c(z) - branch_s(b)).norm() < 1e-15);
        let half = MobiusMap::involution_at(c(0.5, 0.0)).unwrap();
        assert!((half.cocycle_c(c(0.0, 0.0)) - c(0.0, 0.75f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn multiplier_examples() {
        let f = MobiusMap::new(c(0.3, 0.2), c(0.0, -1.0)).unwrap();
        assert_eq!(multiplier_m0(&MobiusMap::identity(), &f), 1.0);
        assert!((multiplier_m0(&f, &MobiusMap::identity()) - 1.0).abs() < 1e-15);
        let r = MobiusMap::rotation(c(-1.0, 0.0));
        assert!((multiplier_m0(&r, &r) + 1.0).abs() < 1e-15);
        let b = f.beta();
        let want = (branch_s(b) * branch_s(b.conj())).re;
        assert!((multiplier_m0(&f, &f.invert()) - want).abs() < 1e-12);
    }

    #[test]
    fn multiplier_bulk_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let f = random_map(&mut rng, 0.95);
            let g = random_map(&mut rng, 0.95);
            let m = multiplier_m0(&f, &g);
            assert!((m.abs() - 1.0).abs() < 1e-12);
            let chain = multiplier_from_chain(&f, &g, c(0.1, -0.3));
            assert!((chain - m).norm() < 1e-11);
            // m₀ of a pair from the inverse-pair multipliers
            let fg = f.compose(&g);
            let lhs = multiplier_m0(&f, &f.invert())
                * multiplier_m0(&g, &g.invert())
                * multiplier_m0(&fg, &fg.invert())
                * multiplier_m0(&g.invert(), &f.invert());
            assert_eq!(lhs.round(), m.round());
            // inverting both maps agrees with starring both
            assert_eq!(
                multiplier_m0(&g.invert(), &f.invert()).round(),
                multiplier_m0(&f.star(), &g.star()).round()
            );
        }
    }

    use std::f64::consts::PI;

    fn arb_map() -> impl Strategy<Value = MobiusMap> {
        (0.0f64..0.9, -PI..PI, -PI..PI).prop_map(|(r, t, b)| {
            MobiusMap::new(Complex64::from_polar(r, t), Complex64::from_polar(1.0, b)).unwrap()
        })
    }

    fn arb_disc() -> impl Strategy<Value = Complex64> {
        (0.0f64..1.0, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    proptest! {
        #[test]
        fn compose_is_functional_composition(f in arb_map(), g in arb_map(), h in arb_map(), z in arb_disc()) {
            prop_assert!((f.compose(&g).apply(z) - f.apply(g.apply(z))).norm() < 1e-12);
            let l = f.compose(&g).compose(&h).apply(z);
            let r = f.compose(&g.compose(&h)).apply(z);
            prop_assert!((l - r).norm() < 1e-12);
            prop_assert!(close(&f.compose(&f.invert()), &MobiusMap::identity()));
            prop_assert!(close(&f.invert().compose(&f), &MobiusMap::identity()));
            prop_assert!(close(&f.star().star(), &f));
        }

        #[test]
        fn cocycle_squares_to_derivative(f in arb_map(), z in arb_disc()) {
            let c = f.cocycle_c(z);
            prop_assert!((c * c - f.derivative(z)).norm() < 1e-12 * (1.0 + f.derivative(z).norm()));
            let c3 = f.cocycle_pow(3.0, z);
            prop_assert!((c3 - c * c * c).norm() < 1e-11 * (1.0 + c3.norm()));
            // c^(λ+1) = c · c^λ with the factor-wise branch
            let lam = 1.37;
            prop_assert!((f.cocycle_pow(lam + 1.0, z) - c * f.cocycle_pow(lam, z)).norm() < 1e-11 * (1.0 + c3.norm()));
        }

        #[test]
        fn multiplier_cocycle_identity(f in arb_map(), g in arb_map(), h in arb_map()) {
            let lhs = multiplier_m0(&f, &g) * multiplier_m0(&f.compose(&g), &h);
            let rhs = multiplier_m0(&f, &g.compose(&h)) * multiplier_m0(&g, &h);
            prop_assert_eq!(lhs.round(), rhs.round());
        }
    }
}
