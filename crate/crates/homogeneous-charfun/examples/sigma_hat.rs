// The representation lifted to the dilation space intertwines `Ŵ` with `φ(Ŵ)`.

use homcharfun::dilation::check_sigma_hat;
use homcharfun::MobiusMap;
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let rot = MobiusMap::rotation(Complex64::from_polar(1.0, 1.1));
    println!("rotation, λ=5/2, μ=(1,1): {:.2e}", check_sigma_hat(2.5, &[1.0, 1.0], &rot, 12, 8)?);
    let phi = MobiusMap::involution_at(Complex64::new(0.3, 0.0))?;
    println!("φ_0.3, λ=3, μ=(1): {:.2e}", check_sigma_hat(3.0, &[1.0], &phi, 16, 10)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("sigma_hat example");
}
