// Disc automorphisms, the branch-dependent multiplier `m₀(f, g)`, and a seeded sweep of
// its algebraic properties.

use homcharfun::mobius::{check_multiplier_properties, multiplier_from_chain, multiplier_m0};
use homcharfun::MobiusMap;
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = MobiusMap::new(Complex64::new(0.4, -0.3), Complex64::from_polar(1.0, 2.9))?;
    let g = MobiusMap::new(Complex64::new(-0.7, 0.1), Complex64::from_polar(1.0, -2.5))?;
    let z = Complex64::new(0.2, 0.5);

    println!("f(z) = {:.6}, g(f(z)) = {:.6}", f.apply(z), g.apply(f.apply(z)));
    println!("(f∘g)(z) = {:.6}", f.compose(&g).apply(z));
    println!("m₀(f, g) = {}", multiplier_m0(&f, &g));
    println!("chain value at z = {:.3}", multiplier_from_chain(&f, &g, z));

    let report = check_multiplier_properties(7, 2_000, 200, 5);
    println!(
        "{} pairs: max ||m₀|−1| = {:.1e}, max |chain − m₀| = {:.1e}, relation failures = {}",
        report.pairs,
        report.unimodular,
        report.cocycle,
        report.simple_failures + report.cocycle_law_failures
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("mobius_multiplier example");
}
