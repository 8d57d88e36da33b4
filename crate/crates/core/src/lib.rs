//! pp formulas over finite-dimensional algebras, the lattice maps induced by
//! bimodules, interpretation functors and their verification oracles.

pub mod algebra;
pub mod bimodule;
pub mod controlled;
pub mod decompose;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod hom;
pub mod interp;
pub mod inventory;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod module;
pub mod pp;
pub mod quiver;
pub mod report;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
