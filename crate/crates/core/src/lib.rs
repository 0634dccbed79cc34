pub mod error;
pub mod bounds;
pub mod cli;
pub mod cohomology;
pub mod group;
pub mod linalg;
pub mod matgroup;
pub mod kummer;
pub mod modulegen;
pub mod residue;
pub mod suites;

pub use error::{Error, Result};
