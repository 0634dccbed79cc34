// Residues modulo N, p-adic logarithm/exponential and Teichmüller lifts.

use kummer_core::residue::{mth_root_in_unit_group, padic_exp, padic_log, teichmuller, Modulus, Residue};
use kummer_core::Result;

pub fn run_example() -> Result<()> {
    let m81 = Modulus::prime_power(3, 4)?;
    let x = Residue::from_u64(4, &m81);
    let log = padic_log(&x, 3)?;
    let back = padic_exp(&log, 3)?;
    println!("log_3(4) mod 81 = {}, exp(log) = {}", log.value(), back.value());
    assert_eq!(back, x);

    let omega = teichmuller(&Residue::from_u64(2, &Modulus::new(5)?), 3)?;
    println!("Teichmüller lift of 2 mod 125 = {}", omega.value());
    assert_eq!(omega.pow(4).value(), 1);

    let y = Residue::from_u64(10, &m81);
    let root = mth_root_in_unit_group(&y, 3, 1)?;
    println!("a cube root of 10 mod 81 is {}", root.value());
    assert_eq!(root.pow(3), y);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
