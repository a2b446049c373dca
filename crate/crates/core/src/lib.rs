//! Exact gradings, derivation tori, contraction cones and cohopfian
//! analysis of finite-dimensional algebras over Q, together with the
//! BCH group law, dilations and lattice systoles of the associated
//! simply connected nilpotent groups.

pub mod algebra;
pub mod carnot;
pub mod catalog;
pub mod cohopf;
pub mod cone;
pub mod error;
pub mod exactlin;
pub mod grading;
pub mod io;
pub mod nilgroup;
pub mod rational;
pub mod tori;

pub use algebra::{Algebra, AlgebraKind, LowerSeries, ValidationReport, Violation};
pub use carnot::{car, carnot_test, carnot_with_prescribed_v1, invariant_carnot, CarnotOutcome, CarnotWitness};
pub use cohopf::{classify, AbsoluteGrading, Classification, CohopfReport};
pub use cone::{cone_flags, contractive_decomposition, ConeFlags, ContractiveDecomposition};
pub use error::{Error, Result};
pub use exactlin::{QMatrix, QPoly, QVector, Subspace, ZLattice};
pub use grading::{Grading, Weight};
pub use io::{parse_algebra, parse_algebra_file, read_algebra, write_algebra, AlgebraFile};
pub use nilgroup::{DefendoCertificate, LatticeSubgroup, NilGroup};
pub use rational::Rational;
pub use tori::{maximal_split_torus, CertificateLevel, SplitTorus, TorusOptions};
