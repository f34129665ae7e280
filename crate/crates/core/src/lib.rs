//! Computational core for quantum automorphism groups of connected, locally
//! finite graphs: bi-labeled graphs, homomorphism matrices, intertwiner
//! spaces, the Haar functional model, planar isomorphism and quantization of
//! Cayley graphs.

pub mod algebra;
pub mod bilabeled;
pub mod error;
pub mod graphs;
pub mod hommat;
pub mod linalg;
pub mod morspace;
pub mod quantiso;
pub mod quantization;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Field, Fp};

/// Exact rational scalar used for spans, ranks and Gram data.
pub type Rational = num_rational::BigRational;
/// Floating scalar used by spectral decompositions.
pub type Real = f64;
/// Exact echelon basis.
pub type ExactEchelon = linalg::Echelon<Rational>;
/// Echelon basis over the 61-bit Mersenne prime field.
pub type ModularEchelon = linalg::Echelon<Fp>;

/// Trace kernel with exact entries.
pub type ExactKernel = morspace::TraceKernel<Rational>;
/// Trace kernel in double precision.
pub type FloatKernel = morspace::TraceKernel<Real>;
pub type ExactHaar = algebra::Haar<Rational>;
pub type FloatHaar = algebra::Haar<Real>;

/// Schema tag embedded in every JSON report.
pub const SCHEMA: &str = "qgs/1";
