// Truncated discrete series matrices `D⁺_λ(f)` and the projective law
// `D(fg) = m₀(f,g)·D(f)D(g)` on columns the truncation resolves.

use homcharfun::mobius::multiplier_m0;
use homcharfun::reps::{check_projective_law, discrete_series_matrix, trusted_interior};
use homcharfun::MobiusMap;
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = 1.0;
    let f = MobiusMap::new(Complex64::new(0.3, 0.2), Complex64::from_polar(1.0, 3.0))?;
    let g = MobiusMap::new(Complex64::new(-0.1, 0.4), Complex64::from_polar(1.0, 2.0))?;

    let d = discrete_series_matrix(lambda, &f, 48);
    println!("D⁺_1(f): {}×{}, trusted interior {}", d.matrix.nrows(), d.matrix.ncols(), d.interior);
    println!("interior column norm defect {:.2e}", d.interior_unitarity_defect());
    for n in [48, 96, 192] {
        println!("trusted interior at N={n}, |α|=0.5: {}", trusted_interior(n, 0.5, 2.0));
    }

    let law = check_projective_law(lambda, &f, &g, 32, 8)?;
    println!("fitted multiplier {:.12}, m₀ = {}", law.multiplier, multiplier_m0(&f, &g));
    println!("residual {:.2e}", law.residual);

    let rot = discrete_series_matrix(2.5, &MobiusMap::rotation(Complex64::from_polar(1.0, 0.7)), 6);
    println!("rotation acts diagonally: entry (3,3) = {:.6}", rot.matrix[(3, 3)]);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("discrete_series example");
}
