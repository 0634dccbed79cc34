// Smith and Howell forms over Z/ℓ^k.

use kummer_core::linalg::{howell_contains, howell_form, smith, Ring};
use kummer_core::Result;

pub fn run_example() -> Result<()> {
    let ring = Ring::new(3, 3)?;
    let rows = vec![vec![3, 6, 9], vec![9, 0, 18], vec![1, 2, 3]];
    let s = smith(&ring, &rows, 3, false, false);
    println!("Smith valuations over Z/27: {:?}", s.diag);
    let h = howell_form(&ring, &rows, 3);
    println!("Howell basis: {h:?}");
    assert!(howell_contains(&ring, &h, &[2, 4, 6]));
    assert!(!howell_contains(&ring, &h, &[0, 1, 0]));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
