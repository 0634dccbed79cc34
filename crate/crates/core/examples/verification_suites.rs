// Seeded verification suites.

use kummer_core::suites::{run_suite, SUITES};
use kummer_core::Result;

pub fn run_example() -> Result<()> {
    for suite in ["exponent-h1", "cm-counterexample", "sl2-squares"] {
        let report = run_suite(suite, 7, 3)?;
        println!("{suite}: {}/{} pass, stats {:?}", report.passed, report.instances, report.statistics);
        assert!(report.all_passed());
    }
    println!("available: {}", SUITES.join(", "));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
