// The multiplication operator `A`, the defect factors `B⁺`, `B⁻`, the middle operator `C` and
// the exact identities linking them, plus the contractivity criterion.

use homcharfun::algebra::parse_rational;
use homcharfun::blockops::{
    build_a, build_b_pair, build_c, check_c_equation, check_defect_identity, check_master_at_zero, contractivity_condition,
    contractivity_scan, defect_parameters, operator_norm,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = parse_rational("5/2")?;
    let mu = [parse_rational("1")?, parse_rational("1")?];

    let params = defect_parameters(&lambda, &mu)?;
    println!("1/μ′ = {:?}", params.nu_prime.iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("μ″ = {:?}, generic {}", params.mu_doubleprime.iter().map(ToString::to_string).collect::<Vec<_>>(), params.generic);

    let a = build_a(lambda.clone(), &mu, 12)?;
    let (bp, bm) = build_b_pair(&lambda, &mu, 12)?;
    let c = build_c(&lambda, &mu, 12)?;
    println!("A on {} dims, B⁺ into {} blocks, B⁻ from {} blocks, C {}×{}", a.domain.dim(), bp.codomain.n_blocks(), bm.domain.n_blocks(), c.codomain.dim(), c.domain.dim());
    println!("‖A_12‖ = {:.12}", operator_norm(&a));

    for (name, check) in [
        ("I − A*A = B⁺*B⁺", check_defect_identity(&lambda, &mu, 16)?),
        ("C equation", check_c_equation(&lambda, &mu, 16)?),
        ("identity at z = 0", check_master_at_zero(&lambda, &mu, 16)?),
    ] {
        println!("{name}: exact {} over {} coefficients", check.passed, check.checked);
    }

    let bad = [1.0, 0.1];
    println!("contractive for λ=3/2, μ={bad:?}: {}", contractivity_condition(1.5, &bad));
    let scan = contractivity_scan(1.5, &bad, 8, 512, 1e-3)?;
    println!("norms {:?}, first violation {:?}", scan.norms, scan.first_violation);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("block_operators example");
}
