//! Exact linear algebra over Q and Z.

mod echelon;
mod lattice;
mod matrix;
mod modp;
mod modsolve;
mod poly;
mod subspace;

pub use echelon::{AffineSolution, EchelonBuilder, Infeasibility};
pub use lattice::{hnf, integer_kernel, saturate_under, ZLattice};
pub use modp::has_irrational_eigenvalue;
pub use modsolve::LinearSystem;
pub use matrix::{dot, vec_add, vec_is_zero, vec_scale, vec_sub, QMatrix, QVector};
pub use poly::QPoly;
pub use subspace::Subspace;
