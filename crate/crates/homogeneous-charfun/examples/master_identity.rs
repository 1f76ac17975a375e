// The characteristic function of a generic homogeneous operator: its matrix and entrywise forms
// agree, and it factors `B⁻*(I−zA*)⁻¹(zI−A)` through `B⁺`.

use homcharfun::charfun::{default_z_grid, master_check, theta_generic, theta_scalar};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (lambda, mu) = (2.5, [1.0, 1.0]);
    for z in default_z_grid() {
        let forms = theta_generic(lambda, &mu, z, 24, 8)?;
        let master = master_check(lambda, &mu, z, 24, 8)?;
        println!(
            "z = {z:>22.3}: forms differ by {:.1e}, identity residual {:.1e}, ‖θ(z)‖ ≤ {:.6}",
            forms.discrepancy,
            master,
            forms.matrix_form.interior_norm(mu.len())
        );
    }
    let s = theta_scalar(3.0, num_complex::Complex64::new(0.0, 0.5), 16, 6)?;
    println!("θ_3(0.5i) top-left corner {:.6}", s.matrix[(0, 0)]);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("master_identity example");
}
