//! Finite truncations of homogeneous contractions on weighted Bergman-type spaces, their
//! defect operators, Möbius-covariant representations and characteristic functions, together
//! with exact and numerical checks of the identities relating them.

pub mod algebra;
pub mod blockops;
pub mod charfun;
pub mod dilation;
pub mod error;
pub mod extremal;
pub mod linalg;
pub mod mobius;
pub mod reps;
pub mod spaces;
pub mod suite;

pub use error::{Error, Result};
pub use mobius::MobiusMap;
