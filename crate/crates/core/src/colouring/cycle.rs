//! Colouring hosts without `(m, C_l)` so that no `l`-cycle is monochromatic.

use std::collections::BTreeSet;

use super::{free_partition, EdgeColouring, SetMapping};
use crate::connectivity::disjoint_paths_up_to;
use crate::constructions::KernelIndex;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

#[derive(Debug, Clone)]
pub struct CycleColouring {
    pub colouring: EdgeColouring,
    pub cycle_length: usize,
    pub m: usize,
    /// `chains[i][j]` is the sorted set `K_{j+1}` for host edge `i`.
    pub chains: Vec<Vec<Vec<usize>>>,
}

impl CycleColouring {
    /// The last chain set of edge `i`.
    pub fn closure(&self, i: usize) -> &[usize] {
        self.chains[i].last().expect("chains have l >= 3 entries")
    }

    /// A pair of distinct same-coloured edges with the second spanned by the
    /// closure of the first, if any.
    pub fn freeness_violation(&self) -> Option<(Edge, Edge)> {
        let host = self.colouring.host();
        for (i, &e) in host.edges().iter().enumerate() {
            let inside = spanned_edges(host, self.closure(i));
            for j in inside {
                if j != i && self.colouring.colours()[j] == self.colouring.colours()[i] {
                    return Some((e, host.edges()[j]));
                }
            }
        }
        None
    }
}

fn spanned_edges(host: &Graph, vertices: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for (a, &u) in vertices.iter().enumerate() {
        for &v in &vertices[a + 1..] {
            if let Some(j) = host.edge_index(Edge::new(u, v)) {
                out.push(j);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Builds the chains `K_1 ⊆ ... ⊆ K_l` for every edge and colours the edges
/// so that each edge differs from every other edge inside its `K_l`.
pub fn cycle_free_colouring(host: &Graph, cycle_length: usize, m: usize, budget: u64) -> Result<CycleColouring> {
    let l = cycle_length;
    if l < 3 {
        return Err(Error::precondition("cycle length must be at least 3"));
    }
    if m == 0 {
        return Err(Error::precondition("m must be at least 1"));
    }
    let cycle = Graph::cycle(l)?;
    let index = KernelIndex::new(host, &cycle);
    let threshold = 2 * l * m + 1;
    let mut chains = Vec::with_capacity(host.edge_count());
    for (i, &e) in host.edges().iter().enumerate() {
        let packing = index.packing(i, m, budget)?;
        if packing.multiplicity() >= m {
            return Err(Error::precondition(format!(
                "host contains an amalgam of {m} {l}-cycles with kernel {e}"
            )));
        }
        let mut current: BTreeSet<usize> = packing.vertices().into_iter().collect();
        let mut chain = vec![current.iter().copied().collect::<Vec<_>>()];
        // Bounded sets of inner path vertices, computed once per (pair, length).
        while chain.len() < l {
            let members: Vec<usize> = current.iter().copied().collect();
            let mut next = current.clone();
            for (a, &u) in members.iter().enumerate() {
                for &v in &members[a + 1..] {
                    for k in 2..l {
                        let found = disjoint_paths_up_to(host, u, v, k, threshold)?;
                        if found.paths.len() < threshold {
                            for p in &found.paths {
                                next.extend(p[1..p.len() - 1].iter().copied());
                            }
                        }
                    }
                }
            }
            current = next;
            chain.push(current.iter().copied().collect());
        }
        chains.push(chain);
    }
    let images = chains
        .iter()
        .enumerate()
        .map(|(i, chain)| {
            spanned_edges(host, chain.last().expect("non-empty chain"))
                .into_iter()
                .filter(|&j| j != i)
                .collect()
        })
        .collect();
    let f = SetMapping::new(host.edge_count(), images)?;
    let classes = free_partition(&f, f.max_image_size())?;
    let colouring = if classes.is_empty() {
        EdgeColouring::constant(host.clone())
    } else {
        EdgeColouring::from_classes(host.clone(), &classes)?
    };
    Ok(CycleColouring {
        colouring,
        cycle_length: l,
        m,
        chains,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::DEFAULT_PACKING_BUDGET;

    #[test]
    fn five_cycle() {
        let c5 = Graph::cycle(5).unwrap();
        let out = cycle_free_colouring(&c5, 5, 1, DEFAULT_PACKING_BUDGET);
        assert!(out.is_err(), "C_5 is itself (1, C_5)");
        let out = cycle_free_colouring(&c5, 5, 2, DEFAULT_PACKING_BUDGET).unwrap();
        assert!(out.colouring.used_colours() > 1);
        assert_eq!(out.chains[0][0], vec![0, 1, 2, 3, 4]);
        assert!(out.freeness_violation().is_none());
    }

    #[test]
    fn trees_use_one_colour() {
        let tree = Graph::new(6, [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]).unwrap();
        let out = cycle_free_colouring(&tree, 3, 1, DEFAULT_PACKING_BUDGET).unwrap();
        assert_eq!(out.colouring.used_colours(), 1);
        for (i, e) in tree.edges().iter().enumerate() {
            assert_eq!(out.closure(i), &[e.lo(), e.hi()]);
        }
    }

    #[test]
    fn petersen_needs_m_three() {
        let p = Graph::petersen();
        // The outer pentagon and 0-1-6-8-5 meet exactly in the edge 01.
        let err = cycle_free_colouring(&p, 5, 2, DEFAULT_PACKING_BUDGET).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let out = cycle_free_colouring(&p, 5, 3, DEFAULT_PACKING_BUDGET).unwrap();
        assert!(out.freeness_violation().is_none());
    }
}
