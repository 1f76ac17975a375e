// Characteristic functions transform covariantly under disc automorphisms: the function of
// `φ(T)` equals that of `T` composed with `φ⁻¹`, up to constant unitaries.

use homcharfun::blockops::build_a;
use homcharfun::charfun::{check_covariance, default_z_grid};
use homcharfun::reps::block_indices;
use homcharfun::MobiusMap;
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let t = build_a(2.5, &[1.0, 1.0], 24)?.orthonormal();
    let zs: Vec<Complex64> = default_z_grid().into_iter().filter(|z| z.norm() <= 0.4).collect();
    let cols = block_indices(2, 24, 8);
    for a in [0.1, 0.3, 0.5] {
        let f = MobiusMap::involution_at(Complex64::new(a, 0.0))?;
        println!("φ_{a}: residual {:.2e} over {} points", check_covariance(&t, &f, &zs, &cols)?, zs.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("covariance example");
}
