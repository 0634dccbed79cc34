// Arboreal groups (Z/N)² ⋊ H and the total failure identity.

use kummer_core::kummer::{close_arboreal, failures, total_failure_identity_check, ArborealElement};
use kummer_core::matgroup::{Mat2, DEFAULT_CAP};
use kummer_core::Result;

pub fn run_example() -> Result<()> {
    let n = 12;
    let gens = vec![
        ArborealElement::translation([1, 0], n),
        ArborealElement::new([0, 0], Mat2::new([1, 1, 0, 1], n)),
        ArborealElement::new([0, 0], Mat2::new([0, 1, 11, 0], n)),
        ArborealElement::new([0, 0], Mat2::new([5, 0, 0, 1], n)),
        ArborealElement::new([0, 0], Mat2::new([7, 0, 0, 1], n)),
    ];
    let g = close_arboreal(n, gens, DEFAULT_CAP)?;
    println!("#G = {} = #H {} * #V {}", g.order(), g.torsion_projection().order(), g.fiber_order());
    for ell in [2, 3] {
        let f = failures(&g, ell)?;
        println!("ℓ={ell}: A={} B={}", f.a, f.b);
    }
    let r = total_failure_identity_check(&g)?;
    println!("N²/#V = {}, ∏ A·B = {}", r.total_failure, r.product_of_failures);
    assert!(r.identity_holds);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
