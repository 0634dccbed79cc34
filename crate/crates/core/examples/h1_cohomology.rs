// First cohomology of matrix groups acting on (Z/ℓ^k)².

use kummer_core::cohomology::{h1, h1_cyclic_oracle, sah_annihilator_check, GModule};
use kummer_core::matgroup::{Mat2, MatGroup, DEFAULT_CAP};
use kummer_core::Result;

pub fn run_example() -> Result<()> {
    let gl = MatGroup::gl2(2)?;
    let r = h1(&gl, &GModule::new(2, 1)?)?;
    println!("H¹(GL₂(F₂), F₂²) has order {}", r.order);

    let sigma = Mat2::new([1, 1, 0, 1], 9);
    let g = MatGroup::generate(9, vec![sigma], DEFAULT_CAP)?;
    let m = GModule::new(3, 2)?;
    let direct = h1(&g, &m)?;
    let oracle = h1_cyclic_oracle(&sigma, &m)?;
    println!("unipotent mod 9: H¹ = {:?}, cyclic formula {:?}", direct.invariant_factors, oracle.invariant_factors);
    assert_eq!(direct, oracle);

    let sah = sah_annihilator_check(&MatGroup::gl2(7)?, &GModule::new(7, 1)?)?;
    println!("Sah: λ={} annihilates H¹ of order {}", sah.lambda, sah.h1.order);
    assert!(sah.holds);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
