//! The sum hypergraph on `1..=n` and derived graphs of ordered triple systems.

use log::warn;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::hypergraph::{Hypergraph, LinearHypergraph};

/// The triples `{x, y, z}` of distinct values in `1..=n` with `x + y + z`
/// equal to `n` or `2n`. Stored 0-based: vertex `i` is the number `i + offset`.
#[derive(Debug, Clone)]
pub struct SumHypergraph {
    pub hypergraph: LinearHypergraph,
    pub n: usize,
    pub offset: usize,
}

impl SumHypergraph {
    /// The number a stored vertex stands for.
    pub fn value(&self, vertex: usize) -> usize {
        vertex + self.offset
    }

    /// Whether `{a, b, c}` (1-based values) is an edge.
    pub fn has_triple(&self, a: usize, b: usize, c: usize) -> bool {
        [a, b, c].iter().all(|&x| x >= self.offset && x - self.offset < self.n)
            && self
                .hypergraph
                .has_edge(&[a - self.offset, b - self.offset, c - self.offset])
    }
}

pub fn sum_hypergraph(n: usize) -> Result<SumHypergraph> {
    if n == 0 || n % 16 != 0 {
        return Err(Error::precondition(format!("n must be a positive multiple of 16, got {n}")));
    }
    let mut edges = Vec::new();
    for x in 1..=n {
        for y in x + 1..=n {
            for target in [n, 2 * n] {
                if target > x + y {
                    let z = target - x - y;
                    if z > y && z <= n {
                        edges.push([x - 1, y - 1, z - 1]);
                    }
                }
            }
        }
    }
    let hypergraph = Hypergraph::new(n, 3, edges)?;
    let hypergraph = LinearHypergraph::try_from(hypergraph)
        .map_err(|e| Error::LemmaViolation(format!("sum hypergraph is not linear: {e}")))?;
    Ok(SumHypergraph {
        hypergraph,
        n,
        offset: 1,
    })
}

#[derive(Debug, Clone)]
pub struct DerivedGraph {
    pub graph: Graph,
    /// Pairs of hyperedges with the same extreme vertices.
    pub collisions: Vec<(Vec<usize>, Vec<usize>)>,
}

impl DerivedGraph {
    pub fn is_injective(&self) -> bool {
        self.collisions.is_empty()
    }
}

/// Keeps the order-extreme pair `xz` of every triple `x < y < z`.
pub fn derived_graph(h: &Hypergraph) -> Result<DerivedGraph> {
    if h.uniformity() != 3 {
        return Err(Error::precondition(format!(
            "derived graphs need a 3-uniform hypergraph, got k = {}",
            h.uniformity()
        )));
    }
    let mut first_of: std::collections::BTreeMap<Edge, usize> = Default::default();
    let mut collisions = Vec::new();
    for (id, e) in h.edges().iter().enumerate() {
        let pair = Edge::new(e[0], e[2]);
        match first_of.get(&pair) {
            Some(&prev) => collisions.push((h.edge(prev).to_vec(), e.clone())),
            None => {
                first_of.insert(pair, id);
            }
        }
    }
    if !collisions.is_empty() {
        warn!(
            "{} hyperedges share their extreme pair with an earlier one; the derived graph has fewer edges",
            collisions.len()
        );
    }
    let graph = Graph::new(h.vertex_count(), first_of.into_keys())?;
    Ok(DerivedGraph { graph, collisions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::vertex_connectivity;
    use crate::inseparable::inseparability_witness;

    /// Scans all triples directly.
    fn brute_count(n: usize) -> usize {
        let mut c = 0;
        for x in 1..=n {
            for y in x + 1..=n {
                for z in y + 1..=n {
                    if x + y + z == n || x + y + z == 2 * n {
                        c += 1;
                    }
                }
            }
        }
        c
    }

    #[test]
    fn small_sum_hypergraphs() {
        for n in [16, 32, 48, 64] {
            let s = sum_hypergraph(n).unwrap();
            assert_eq!(s.hypergraph.edge_count(), brute_count(n));
        }
        let s = sum_hypergraph(48).unwrap();
        assert!(s.has_triple(1, 2, 45));
        assert!(s.has_triple(15, 16, 17));
        assert!(!s.has_triple(1, 2, 3));
        assert!(s.has_triple(47, 48, 1));
        assert!(!s.has_triple(0, 2, 46));
        assert_eq!(s.value(0), 1);
        assert!(sum_hypergraph(40).is_err());
        assert!(sum_hypergraph(0).is_err());
    }

    #[test]
    fn derived_graph_of_s48() {
        let s = sum_hypergraph(48).unwrap();
        assert!(s.hypergraph.is_connected());
        assert_eq!(inseparability_witness(&s.hypergraph), None);
        let d = derived_graph(&s.hypergraph).unwrap();
        assert!(d.is_injective());
        assert_eq!(d.graph.edge_count(), s.hypergraph.edge_count());
        assert!(9 * d.graph.min_degree() >= 48);
        assert!(vertex_connectivity(&d.graph).unwrap() >= 4);
    }

    #[test]
    fn derived_graph_collisions() {
        let one = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        assert_eq!(derived_graph(&one).unwrap().graph.edges(), &[Edge::new(0, 2)]);
        // {1,2,5} and {1,3,5} in 1-based labels.
        let two = Hypergraph::new(5, 3, [[0, 1, 4], [0, 2, 4]]).unwrap();
        let d = derived_graph(&two).unwrap();
        assert_eq!(d.graph.edges(), &[Edge::new(0, 4)]);
        assert_eq!(d.collisions.len(), 1);
        assert!(derived_graph(&Hypergraph::new(4, 4, [[0, 1, 2, 3]]).unwrap()).is_err());
    }
}
