//! A small common view of graphs and uniform hypergraphs as sets of vertex tuples.

use crate::error::Result;
use crate::graph::{Edge, Graph};
use crate::hypergraph::Hypergraph;

/// Anything made of vertices `0..n` and a set of sorted vertex tuples.
pub trait Structure: Clone + std::fmt::Debug {
    fn vertex_count(&self) -> usize;

    /// Number of vertices per edge: 2 for graphs.
    fn arity(&self) -> usize;

    fn edge_tuples(&self) -> Vec<Vec<usize>>;

    /// `sorted` must be in ascending order.
    fn contains_tuple(&self, sorted: &[usize]) -> bool;

    fn from_tuples(n: usize, arity: usize, tuples: Vec<Vec<usize>>) -> Result<Self>;
}

impl Structure for Graph {
    fn vertex_count(&self) -> usize {
        Graph::vertex_count(self)
    }

    fn arity(&self) -> usize {
        2
    }

    fn edge_tuples(&self) -> Vec<Vec<usize>> {
        self.edges().iter().map(|e| vec![e.lo(), e.hi()]).collect()
    }

    fn contains_tuple(&self, sorted: &[usize]) -> bool {
        sorted.len() == 2 && self.has_edge(sorted[0], sorted[1])
    }

    fn from_tuples(n: usize, arity: usize, tuples: Vec<Vec<usize>>) -> Result<Self> {
        if arity != 2 {
            return Err(crate::Error::invalid("graphs have arity 2"));
        }
        let mut edges = Vec::with_capacity(tuples.len());
        for t in tuples {
            if t.len() != 2 {
                return Err(crate::Error::invalid(format!("{t:?} is not a pair")));
            }
            edges.push(Edge::new(t[0], t[1]));
        }
        Graph::new(n, edges)
    }
}

impl Structure for Hypergraph {
    fn vertex_count(&self) -> usize {
        Hypergraph::vertex_count(self)
    }

    fn arity(&self) -> usize {
        self.uniformity()
    }

    fn edge_tuples(&self) -> Vec<Vec<usize>> {
        self.edges().to_vec()
    }

    fn contains_tuple(&self, sorted: &[usize]) -> bool {
        self.edge_id(sorted).is_some()
    }

    fn from_tuples(n: usize, arity: usize, tuples: Vec<Vec<usize>>) -> Result<Self> {
        Hypergraph::new(n, arity, tuples)
    }
}
