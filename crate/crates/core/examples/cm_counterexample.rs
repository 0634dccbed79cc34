// A group whose Kummer failure is unbounded in n.

use kummer_core::kummer::cm_counterexample;
use kummer_core::Result;

pub fn run_example() -> Result<()> {
    for (ell, n) in [(3, 2), (3, 3), (5, 2), (5, 3)] {
        let (_, r) = cm_counterexample(ell, n)?;
        println!(
            "ℓ={ell} n={n}: #G={} index in split Cartan={} #fiber={} A={}",
            r.order, r.index_in_split_cartan, r.fiber_order, r.a_ell
        );
        assert_eq!(r.index_in_split_cartan, (ell as u128).pow(n - 1));
        assert!(r.closure_inside_predicate && r.law_table_checked);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
