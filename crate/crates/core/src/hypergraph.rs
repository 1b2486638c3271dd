//! k-uniform hypergraphs on `0..n`, ordered by vertex id.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// A k-uniform hypergraph. Edges are stored as sorted vertex tuples and the
/// edge list itself is sorted, so two equal hypergraphs compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
    /// For every vertex, the ids of the edges containing it (ascending).
    incidence: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new<I, E>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        if k < 2 {
            return Err(Error::invalid(format!("uniformity must be at least 2, got {k}")));
        }
        let mut list = Vec::new();
        for e in edges {
            let mut t = e.as_ref().to_vec();
            t.sort_unstable();
            if t.len() != k {
                return Err(Error::invalid(format!(
                    "edge {t:?} has {} vertices, expected {k}",
                    t.len()
                )));
            }
            if t.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("edge {t:?} repeats a vertex")));
            }
            if t[k - 1] >= n {
                return Err(Error::invalid(format!("edge {t:?} leaves the vertex range 0..{n}")));
            }
            list.push(t);
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("repeated edge {:?}", w[0])));
        }
        let mut incidence = vec![Vec::new(); n];
        for (id, e) in list.iter().enumerate() {
            for &v in e {
                incidence[v].push(id);
            }
        }
        Ok(Hypergraph {
            n,
            k,
            edges: list,
            incidence,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn uniformity(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &[usize] {
        &self.edges[id]
    }

    /// Ids of the edges through `v`.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    /// `tuple` must be sorted.
    pub fn edge_id(&self, tuple: &[usize]) -> Option<usize> {
        self.edges.binary_search_by(|e| e.as_slice().cmp(tuple)).ok()
    }

    pub fn has_edge(&self, tuple: &[usize]) -> bool {
        let mut t = tuple.to_vec();
        t.sort_unstable();
        self.edge_id(&t).is_some()
    }

    /// The first pair of distinct edges sharing two or more vertices.
    pub fn linearity_violation(&self) -> Option<(usize, usize)> {
        // Pairs inside edges must be unique.
        let mut seen = std::collections::HashMap::new();
        for (id, e) in self.edges.iter().enumerate() {
            for i in 0..e.len() {
                for j in i + 1..e.len() {
                    if let Some(&prev) = seen.get(&(e[i], e[j])) {
                        return Some((prev, id));
                    }
                    seen.insert((e[i], e[j]), id);
                }
            }
        }
        None
    }

    pub fn is_linear(&self) -> bool {
        self.linearity_violation().is_none()
    }

    /// Connectivity in the partition sense, computed on the incidence graph.
    pub fn is_connected(&self) -> bool {
        self.is_connected_without(&vec![false; self.n])
    }

    /// Connectivity of the hypergraph obtained by deleting every vertex with
    /// `removed[v]` together with all edges meeting a deleted vertex.
    pub fn is_connected_without(&self, removed: &[bool]) -> bool {
        let alive = (0..self.n).filter(|&v| !removed[v]).count();
        if alive <= 1 {
            return true;
        }
        let start = (0..self.n).find(|&v| !removed[v]).expect("alive vertex");
        let mut seen = vec![false; self.n];
        let mut edge_used = vec![false; self.edges.len()];
        seen[start] = true;
        let mut reached = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &id in &self.incidence[v] {
                if edge_used[id] {
                    continue;
                }
                edge_used[id] = true;
                let e = &self.edges[id];
                if e.iter().any(|&w| removed[w]) {
                    continue;
                }
                for &w in e {
                    if !seen[w] {
                        seen[w] = true;
                        reached += 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        reached == alive
    }

    /// The sub-hypergraph induced on `vertices`, relabelled to `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Hypergraph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let mut ids: Vec<usize> = vertices
            .iter()
            .flat_map(|&v| self.incidence[v].iter().copied())
            .collect();
        ids.sort_unstable();
        ids.dedup();
        let edges: Vec<Vec<usize>> = ids
            .into_iter()
            .filter(|&id| self.edges[id].iter().all(|&w| pos[w] != usize::MAX))
            .map(|id| self.edges[id].iter().map(|&w| pos[w]).collect())
            .collect();
        Hypergraph::new(vertices.len(), self.k, edges).expect("induced edges are valid")
    }

    /// Ids of the edges lying entirely inside `vertices` (a membership mask).
    pub fn edges_within(&self, inside: &[bool]) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&id| self.edges[id].iter().all(|&w| inside[w]))
            .collect()
    }
}

/// A hypergraph verified to be linear: distinct edges share at most one vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearHypergraph {
    inner: Hypergraph,
}

impl LinearHypergraph {
    pub fn new<I, E>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        Hypergraph::new(n, k, edges)?.try_into()
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.inner
    }

    pub fn into_inner(self) -> Hypergraph {
        self.inner
    }
}

impl TryFrom<Hypergraph> for LinearHypergraph {
    type Error = Error;

    fn try_from(h: Hypergraph) -> Result<Self> {
        if let Some((a, b)) = h.linearity_violation() {
            return Err(Error::invalid(format!(
                "edges {:?} and {:?} share more than one vertex",
                h.edge(a),
                h.edge(b)
            )));
        }
        Ok(LinearHypergraph { inner: h })
    }
}

impl std::ops::Deref for LinearHypergraph {
    type Target = Hypergraph;

    fn deref(&self) -> &Hypergraph {
        &self.inner
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Hypergraph::new(3, 3, [[0, 1, 1]]).is_err());
        assert!(Hypergraph::new(3, 3, [[0, 1]]).is_err());
        assert!(Hypergraph::new(3, 3, [[0, 1, 3]]).is_err());
        assert!(Hypergraph::new(4, 3, [[0, 1, 2], [2, 1, 0]]).is_err());
        assert!(Hypergraph::new(4, 1, Vec::<Vec<usize>>::new()).is_err());
    }

    #[test]
    fn linearity() {
        let h = Hypergraph::new(5, 3, [[0, 1, 2], [0, 1, 4]]).unwrap();
        assert_eq!(h.linearity_violation(), Some((0, 1)));
        assert!(LinearHypergraph::try_from(h).is_err());
        assert!(LinearHypergraph::new(5, 3, [[0, 1, 2], [2, 3, 4]]).is_ok());
    }

    #[test]
    fn connectivity() {
        assert!(Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap().is_connected());
        assert!(!Hypergraph::new(6, 3, [[0, 1, 2], [3, 4, 5]]).unwrap().is_connected());
        assert!(Hypergraph::new(0, 3, Vec::<Vec<usize>>::new()).unwrap().is_connected());
        assert!(Hypergraph::new(1, 3, Vec::<Vec<usize>>::new()).unwrap().is_connected());
        let h = Hypergraph::new(5, 3, [[0, 1, 2], [2, 3, 4]]).unwrap();
        let mut removed = vec![false; 5];
        removed[2] = true;
        assert!(!h.is_connected_without(&removed));
    }

    #[test]
    fn induced_keeps_only_inner_edges() {
        let h = Hypergraph::new(5, 3, [[0, 1, 2], [2, 3, 4]]).unwrap();
        let sub = h.induced(&[4, 3, 2, 1]);
        assert_eq!(sub.edges(), &[vec![0, 1, 2]]);
    }
}
