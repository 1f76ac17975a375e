// The jet map `J` restricted to the diagonal: an exact isometry that intertwines multiplication
// by `z` with the extremal operator.

use homcharfun::algebra::parse_rational;
use homcharfun::extremal::{extremal_weights, jet, jet_coordinates, jet_check, BiHomPoly};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = parse_rational("5/2")?;
    let mu = extremal_weights(&lambda, 3);
    println!("extremal weights for n = 3: {:?}", mu.iter().map(ToString::to_string).collect::<Vec<_>>());

    let f = BiHomPoly::new((1..=5).map(|i| parse_rational(&format!("{i}/7"))).collect::<Result<Vec<_>, _>>()?);
    let j = jet(&lambda, 3, &f);
    println!("jet: {:?}", j.iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("coordinates: {:?}", jet_coordinates(&lambda, f.degree(), &j).iter().map(ToString::to_string).collect::<Vec<_>>());

    let c = jet_check(&lambda, 3, 8)?;
    println!("kernel identity exact {}, isometry {:.1e}, intertwining {:.1e}", c.kernel_identity.passed, c.isometry, c.intertwining);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("jet_map example");
}
