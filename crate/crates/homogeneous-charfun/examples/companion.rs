// Homogeneity: `φ(A)` is unitarily equivalent to `A` through the direct sum of discrete series
// representations, checked from both sides.

use homcharfun::reps::{companion_check, Side};
use homcharfun::MobiusMap;
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (lambda, mu) = (2.5, [1.0, 1.0]);
    let maps = [
        ("rot(i)", MobiusMap::rotation(Complex64::i())),
        ("φ_0.3", MobiusMap::involution_at(Complex64::new(0.3, 0.0))?),
        ("rot(i)∘φ_0.2", MobiusMap::rotation(Complex64::i()).compose(&MobiusMap::involution_at(Complex64::new(0.2, 0.0))?)),
    ];
    for (name, f) in &maps {
        let right = companion_check(lambda, &mu, f, 32, 10, Side::Right)?;
        let left = companion_check(lambda, &mu, f, 32, 10, Side::Left)?;
        println!("{name:<14} right {right:.2e}  left {left:.2e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("companion example");
}
