//! Explicit objects: amalgams, kernel subgraphs, the sum hypergraph, derived
//! graphs and template generators.

pub mod amalgam;
pub mod sum;
pub mod templates;

pub use amalgam::{
    amalgam, find_amalgam, find_automorphism, is_strongly_edge_transitive, kernel_subgraph, Amalgam, KernelIndex,
    KernelPacking, DEFAULT_PACKING_BUDGET,
};
pub use sum::{derived_graph, sum_hypergraph, DerivedGraph, SumHypergraph};
pub use templates::{balanced_multipartite, multipartite_classes, parse_template, random_amalgam_free_host, random_graph};
