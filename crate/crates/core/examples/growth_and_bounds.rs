// Growth parameters of ℓ-adic towers and explicit constants.

use kummer_core::bounds::{c_total, detect_growth_parameter, synthetic_tower, universal_m, T0};
use kummer_core::Result;

pub fn run_example() -> Result<()> {
    for ell in [2, 3, 5] {
        let tower = synthetic_tower(ell, 1, 3, 4)?;
        let params = detect_growth_parameter(&tower, 4)?;
        println!("ℓ={ell}: orders {:?}, n_ℓ = {}", params.orders, params.n_min);
    }
    let c = c_total(&[(2, 2, 1), (3, 1, 0)]);
    println!("C = {c}");
    println!("M over T₀ = {T0:?} is {}", universal_m());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
