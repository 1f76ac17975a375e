// Bi-homogeneous polynomials, the adjoint factor `Θ*`, the filtration by vanishing order on the
// diagonal and the dimension of the kernel of iterated adjoints.

use homcharfun::algebra::parse_rational;
use homcharfun::extremal::{check_vanishing_filtration, h_basis, kernel_dimension_check, theta_star_scaled, BiHomPoly};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = parse_rational("5/2")?;
    let h = h_basis(&lambda, 1, 3);
    println!("h_1 in degree 3: {:?}", h.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("‖h_1‖² = {}", h.norm_sq(&lambda));

    let f = BiHomPoly::new(vec![parse_rational("1")?, parse_rational("-2")?, parse_rational("1/3")?]);
    let g = theta_star_scaled(&lambda, &f);
    println!("scaled Θ* of {:?}: {:?}", f.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>(), g.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>());

    for p in 0..4 {
        for k in 0..=p + 1 {
            let c = check_vanishing_filtration(&lambda, k, p)?;
            print!("(p={p},k={k}):{} ", if c.passed { "ok" } else { "FAIL" });
        }
        println!();
    }
    for n in 1..=3 {
        let dims: Vec<usize> = (0..6).map(|p| kernel_dimension_check(&lambda, n, p).map(|k| k.dim)).collect::<Result<_, _>>()?;
        println!("n = {n}: kernel dimensions by degree {dims:?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("extremal_kernels example");
}
