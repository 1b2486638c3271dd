//! (e,v)-inseparability of linear uniform hypergraphs.
//!
//! A linear k-uniform hypergraph is inseparable when it is connected with at
//! least two edges, stays connected after deleting any set of fewer than k
//! vertices no two of which share an edge, and stays connected after
//! deleting all vertices of any single edge.

use serde::Serialize;

use crate::hypergraph::{Hypergraph, LinearHypergraph};

/// Why a hypergraph fails to be inseparable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", content = "vertices", rename_all = "kebab-case")]
pub enum SeparationWitness {
    TooFewEdges,
    Disconnected,
    /// Deleting these pairwise non-co-edged vertices disconnects.
    VertexSet(Vec<usize>),
    /// Deleting the vertices of this edge disconnects.
    Edge(Vec<usize>),
}

pub fn is_ev_inseparable(h: &LinearHypergraph) -> bool {
    inseparability_witness(h).is_none()
}

/// The first violated condition, or `None` if `h` is inseparable.
///
/// Single vertices are tried by decreasing degree (ties by id), larger vertex
/// sets in lexicographic order, then edges in order.
pub fn inseparability_witness(h: &LinearHypergraph) -> Option<SeparationWitness> {
    witness_of(h.hypergraph())
}

pub(crate) fn witness_of(h: &Hypergraph) -> Option<SeparationWitness> {
    if h.edge_count() < 2 {
        return Some(SeparationWitness::TooFewEdges);
    }
    if !h.is_connected() {
        return Some(SeparationWitness::Disconnected);
    }
    let n = h.vertex_count();
    let k = h.uniformity();
    let mut removed = vec![false; n];

    let mut singles: Vec<usize> = (0..n).collect();
    singles.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
    for v in singles {
        removed[v] = true;
        let ok = h.is_connected_without(&removed);
        removed[v] = false;
        if !ok {
            return Some(SeparationWitness::VertexSet(vec![v]));
        }
    }

    if k > 2 {
        let mut together = vec![false; n * n];
        for e in h.edges() {
            for &a in e {
                for &b in e {
                    together[a * n + b] = true;
                }
            }
        }
        let mut chosen = Vec::new();
        if let Some(z) = independent_sets(h, &together, k - 1, 0, &mut chosen, &mut removed) {
            return Some(SeparationWitness::VertexSet(z));
        }
    }

    for e in h.edges() {
        e.iter().for_each(|&v| removed[v] = true);
        let ok = h.is_connected_without(&removed);
        e.iter().for_each(|&v| removed[v] = false);
        if !ok {
            return Some(SeparationWitness::Edge(e.clone()));
        }
    }
    None
}

/// Depth-first over independent sets of size 2..=max_size in lexicographic order.
fn independent_sets(
    h: &Hypergraph,
    together: &[bool],
    max_size: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    removed: &mut [bool],
) -> Option<Vec<usize>> {
    let n = h.vertex_count();
    for v in from..n {
        if chosen.iter().any(|&c| together[c * n + v]) {
            continue;
        }
        chosen.push(v);
        removed[v] = true;
        if chosen.len() >= 2 && !h.is_connected_without(removed) {
            let z = chosen.clone();
            removed[v] = false;
            chosen.pop();
            return Some(z);
        }
        if chosen.len() < max_size {
            if let Some(z) = independent_sets(h, together, max_size, v + 1, chosen, removed) {
                removed[v] = false;
                chosen.pop();
                return Some(z);
            }
        }
        removed[v] = false;
        chosen.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_edges_sharing_a_vertex() {
        let h = LinearHypergraph::new(5, 3, [[0, 1, 2], [2, 3, 4]]).unwrap();
        assert_eq!(
            inseparability_witness(&h),
            Some(SeparationWitness::VertexSet(vec![2]))
        );
    }

    #[test]
    fn single_edge_and_disconnected() {
        let one = LinearHypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        assert_eq!(inseparability_witness(&one), Some(SeparationWitness::TooFewEdges));
        let two = LinearHypergraph::new(6, 3, [[0, 1, 2], [3, 4, 5]]).unwrap();
        assert_eq!(inseparability_witness(&two), Some(SeparationWitness::Disconnected));
    }

    #[test]
    fn fano_plane_fails_on_an_edge() {
        // Every two lines of the Fano plane meet, so deleting a line leaves
        // four isolated points.
        let fano = LinearHypergraph::new(
            7,
            3,
            [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]],
        )
        .unwrap();
        assert_eq!(
            inseparability_witness(&fano),
            Some(SeparationWitness::Edge(vec![0, 1, 2]))
        );
    }

    /// Definition-level check that rebuilds every deleted hypergraph.
    fn brute(h: &Hypergraph) -> bool {
        let n = h.vertex_count();
        let k = h.uniformity();
        let connected_after = |z: &[usize]| {
            let keep: Vec<usize> = (0..n).filter(|v| !z.contains(v)).collect();
            h.induced(&keep).is_connected()
        };
        if h.edge_count() < 2 || !h.is_connected() {
            return false;
        }
        for mask in 1u64..(1 << n) {
            let z: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if z.len() >= k {
                continue;
            }
            let independent = h
                .edges()
                .iter()
                .all(|e| e.iter().filter(|v| z.contains(v)).count() <= 1);
            if independent && !connected_after(&z) {
                return false;
            }
        }
        h.edges().iter().all(|e| connected_after(e))
    }

    #[test]
    fn agrees_with_definition_on_random_systems() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut seen_true = 0;
        for round in 0..150 {
            let n = 7 + round % 6;
            let mut triples = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        triples.push([a, b, c]);
                    }
                }
            }
            triples.shuffle(&mut rng);
            let mut edges: Vec<[usize; 3]> = Vec::new();
            for t in triples {
                if edges.iter().all(|e| e.iter().filter(|v| t.contains(v)).count() <= 1) {
                    edges.push(t);
                }
            }
            let h = LinearHypergraph::new(n, 3, &edges).unwrap();
            let fast = is_ev_inseparable(&h);
            assert_eq!(fast, brute(&h), "{edges:?}");
            seen_true += fast as usize;
        }
        assert!(seen_true > 0);
    }
}
