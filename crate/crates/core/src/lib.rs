//! Real-space topological invariants for finite disordered lattice models.
//!
//! Operators are dense complex matrices on the lattice ⊗ orbital (⊗ spinor)
//! space. The flat index of a basis vector is `site_rank * orbitals + orbital`,
//! with sites enumerated in row-major order (last coordinate fastest).

pub mod clifford;
pub mod error;
pub mod geometry;
pub mod invariants;
pub mod lattice;
pub mod nccalc;
pub mod operator;
pub mod spectral;

pub use error::{Error, Result};
pub use faer::c64;
pub use geometry::{Boundary, Geometry, Site};
pub use operator::DenseOperator;
