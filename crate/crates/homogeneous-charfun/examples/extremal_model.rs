// The product of scalar factors `θ_λ θ_{λ+2} ⋯` is the characteristic function of the extremal
// operator with `n` summands, up to one unimodular constant.

use homcharfun::extremal::{check_extremal_model, extremal_model_grid};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let grid = extremal_model_grid();
    for (lambda, n) in [(2.0, 1), (2.0, 2), (2.5, 2)] {
        let c = check_extremal_model(lambda, n, &grid, 32, 10)?;
        println!(
            "λ = {lambda}, n = {n}: product vs closed form {:.1e}, alignment {:.1e}, ω = {:.6}, |ω| = {:.12}",
            c.forms_discrepancy,
            c.alignment.residual,
            c.omega,
            c.omega.norm()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("extremal_model example");
}
