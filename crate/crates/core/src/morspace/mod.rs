//! Morphism spaces of the graph category on a target graph: spans, quantum
//! orbits, minimal projections, dimensions and the modular function.

pub mod boundary;
pub mod kernel;
pub mod modular;
pub mod mor;
pub mod orbits;
pub mod spectral;
pub mod window;

pub use boundary::{boundary_labels, BoundaryClosure, Category, ClosureConfig, SizeSpace};
pub use mor::{boundary_of, least_squares, MorBasis, MorContext, MorMatrix};
pub use orbits::{quantum_orbits, Exactness, OrbitPartition};
pub use spectral::{
    check_conjugate, conjugate_solutions, equivalent, irreducibles, minimal_projections, ConjugateReport, IrreducibleSet,
    MinimalProjection, SpectralConfig,
};
pub use kernel::TraceKernel;
pub use modular::{finite_pair_classes, mu_assignment, pair_classes, MuAssignment, PairClass};
pub use window::{
    analyze_window, edge_substitute, gadget_family, near_diagonal_classes, pair_signatures, parallel, reach, NearDiagonal, Window,
    WindowReport,
};
