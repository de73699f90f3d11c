//! Exact lattice cohomology for Galois lattices, band groups, root data and
//! the cohomological pieces of endoscopic transfer factors.
//!
//! Conventions: vectors are rows, matrices act on column vectors from the
//! left, and every action is a left action.

pub mod endoscopy;
pub mod error;
pub mod finabgroup;
pub mod galois;
pub mod group;
pub mod lattice;
pub mod local_field;
pub mod matrix;
pub mod normal_form;
pub mod qmodz;
pub mod rational;
pub mod reductive;
pub mod scalar;
pub mod tori;
pub mod u_band;

pub use error::{Error, Result};
pub use finabgroup::{FinAbGroup, GroupHom};
pub use galois::{EquivariantMap, FiniteGaloisModule, GaloisLattice};
pub use group::{FiniteGroup, GroupMap};
pub use lattice::SubLattice;
pub use matrix::Matrix;
pub use qmodz::QModZ;
pub use scalar::IntScalar;

/// Arbitrary-precision integer used by every lattice computation.
pub type Int = num_bigint::BigInt;
/// Integer matrix over [`Int`].
pub type IntMatrix = Matrix<Int>;
