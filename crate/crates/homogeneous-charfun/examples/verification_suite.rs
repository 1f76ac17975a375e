// Runs a handful of checks through the batch runner and prints their JSON lines.

use homcharfun::suite::{exit_code, run_suite, SuiteConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let config: SuiteConfig = serde_json::from_str(
        r#"{
            "lambda": "2",
            "mu": ["1", "2/3"],
            "truncation": 24,
            "interior": 8,
            "checks": ["identities", "god", "defect", "c-equation", "positivity", "theta-forms"],
            "tolerances": {"theta-forms": 1e-9}
        }"#,
    )?;
    let reports = run_suite(&config)?;
    for r in &reports {
        println!("{}", serde_json::to_string(r)?);
    }
    println!("exit code {}", exit_code(&reports));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("verification_suite example");
}
