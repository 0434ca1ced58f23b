//! Finite p-groups built from bracket algebras over F_p, exact checks of their
//! index-p² subgroup structure, and a small integral cohomology engine for
//! exponent computations on cyclic, abelian and tiny tabulated groups.

pub mod bracket;
pub mod cli;
pub mod cohom;
pub mod error;
pub mod fpla;
pub mod group;
pub mod lattice;
pub mod verify;

pub use error::{Error, Result};
