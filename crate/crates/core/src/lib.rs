//! Spectral and combinatorial tooling for testing the inequality
//! `λ_1² + λ_2² <= 2(1 - 1/ω) m` on graphs other than complete graphs.

mod bits;
pub mod graph;
pub mod spectral;

pub use graph::{
    clique_number, independence_number, is_k4_free, parse_edge_list, parse_graph6, to_edge_list, to_graph6, EdgeListError,
    Graph, Graph6Error, GraphError, PartSizes,
};
pub use spectral::{eigenvalues, Spectrum};
pub mod multipartite;
pub mod conjecture;
pub mod search;
pub mod stability;
