// Cartan subgroups of GL₂(Z/ℓ^k) and their normalisers.

use kummer_core::matgroup::{cartan, cartan_normaliser, gl2_order, CartanData};
use kummer_core::Result;

pub fn run_example() -> Result<()> {
    for (ell, k, gamma, delta) in [(5, 1, 0, 2), (5, 1, 0, 1), (3, 2, 0, 2), (2, 2, 1, -1)] {
        let data = CartanData::new(ell, k, gamma, delta)?;
        let c = cartan(&data)?;
        let n = cartan_normaliser(&c, &data)?;
        println!(
            "ℓ={ell} k={k} γ={gamma} δ={delta}: #C={} #N(C)={} #GL₂={}",
            c.order(),
            n.order(),
            gl2_order(data.modulus())
        );
        assert!(c.is_abelian());
        assert_eq!(n.order(), 2 * c.order());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
