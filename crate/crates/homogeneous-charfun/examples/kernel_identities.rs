// Pochhammer identities in exact arithmetic, the kernel series identity, matrix kernel values and
// Gram positivity on a grid.

use homcharfun::algebra::{check_identity1, parse_rational, sweep_identities};
use homcharfun::spaces::{check_god_identity, check_kernel_positivity, default_positivity_grid, matrix_kernel_b};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = parse_rational("5/2")?;
    let sides = check_identity1(&lambda, 2, 5)?;
    println!("identity at j=2, l=5 holds exactly: {}", sides.holds());
    println!("sweep l ≤ 30: first failure {:?}", sweep_identities(&lambda, 30));

    let mu = [parse_rational("1")?, parse_rational("2/3")?];
    let check = check_god_identity(&lambda, &mu, 24)?;
    println!("kernel series identity: passed {}, {} coefficients", check.passed, check.checked);

    let k = matrix_kernel_b(2.5, &[1.0, 2.0 / 3.0], Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.4))?;
    println!("B(z,w) is {}×{}, entry (0,0) = {:.6}", k.value.nrows(), k.value.ncols(), k.value[(0, 0)]);

    let grid = default_positivity_grid();
    for mu in [vec![1.0, 2.0 / 3.0], vec![1.0, -0.1]] {
        let min = check_kernel_positivity(2.0, &mu, &grid)?;
        println!("μ = {mu:?}: min Gram eigenvalue {min:.3e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("kernel_identities example");
}
