//! Finite graphs, locally finite graph providers, balls and automorphisms.

mod aut;
mod finite;
mod group;
mod provider;

pub use aut::{classical_aut, tuple_orbits, AutGroup, UnionFind, DEFAULT_AUT_LIMIT};
pub use finite::FiniteGraph;
pub use group::{GroupSpec, Word, WordOracle};
pub use provider::{
    ball, distance, grandparent_graph, product_graph, tree_graph, EmbeddedBall, GraphProvider, NeighborOracle,
    OrientedTree, ProviderKind, DEFAULT_VERTEX_BUDGET,
};
