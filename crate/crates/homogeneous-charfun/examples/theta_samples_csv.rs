// Samples of a scalar characteristic function written as CSV.

use homcharfun::charfun::{theta_scalar, write_samples_csv};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let samples = [0.0, 0.25, 0.5]
        .into_iter()
        .map(|r| theta_scalar(2.0, Complex64::from_polar(r, 0.4), 3, 2))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    write_samples_csv(&samples, &mut out)?;
    let text = String::from_utf8(out)?;
    for line in text.lines().take(6) {
        println!("{line}");
    }
    println!("… {} lines total", text.lines().count());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("theta_samples_csv example");
}
