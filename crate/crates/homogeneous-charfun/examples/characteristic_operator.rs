// Taylor coefficients of the characteristic function read off the dilation, compared with a
// discrete Fourier transform of the closed formula.

use homcharfun::blockops::weighted_shift;
use homcharfun::charfun::theta_direct;
use homcharfun::dilation::{check_characteristic_operator, taylor_coefficients};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let t = weighted_shift(2.5, 16).orthonormal();
    let r = check_characteristic_operator(&t, 12)?;
    println!("{} coefficients, max deviation {:.2e}", r.coefficients, r.coefficient_deviation);
    println!("leading coefficient vs −T: {:.2e}; F_* Gram defect {:.2e}", r.first_coefficient, r.fstar_gram);

    let c = taylor_coefficients(|z| theta_direct(&t, z), 0.8, 128, 3)?;
    for (m, cm) in c.iter().enumerate() {
        println!("‖θ_{m}‖_max = {:.6}", cm.iter().map(|x| x.norm()).fold(0.0, f64::max));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("characteristic_operator example");
}
