//! Finite-dimensional operator algebras: block *-algebras, states and GNS,
//! completely positive maps and their dilations, POVMs, finite groups and
//! crossed products, Hilbert C*-modules, and induced representations.

pub mod algebra;
pub mod cli;
pub mod cpmaps;
pub mod error;
pub mod groups;
pub mod hmod;
pub mod induce;
pub mod json;
pub mod linalg;
pub mod povm;
pub mod random;
pub mod spectral;
pub mod states;

pub use algebra::{AlgElem, BlockShape, Tolerances};
pub use error::{Error, Result};
pub use linalg::{CVec, Mat};
pub use num_complex::Complex64 as C64;
