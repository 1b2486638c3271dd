//! Simple undirected graphs on the dense vertex set `0..n`.
//!
//! Vertex ids double as the vertex order, so an [`OrderedGraph`] is a plain
//! [`Graph`] whose ids are read as ranks.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// An unordered pair of distinct vertices, stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: usize,
    hi: usize,
}

impl serde::Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(s)
    }
}

impl Edge {
    /// Builds the edge `{a, b}`. Loops are rejected by [`Graph::new`], not here.
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Edge { lo: a, hi: b }
        } else {
            Edge { lo: b, hi: a }
        }
    }

    pub fn lo(self) -> usize {
        self.lo
    }

    pub fn hi(self) -> usize {
        self.hi
    }

    pub fn contains(self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint that is not `v`, if `v` is an endpoint.
    pub fn other(self, v: usize) -> Option<usize> {
        if v == self.lo {
            Some(self.hi)
        } else if v == self.hi {
            Some(self.lo)
        } else {
            None
        }
    }

    pub fn shares_vertex(self, other: Edge) -> bool {
        self.contains(other.lo) || self.contains(other.hi)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

impl From<(usize, usize)> for Edge {
    fn from((a, b): (usize, usize)) -> Self {
        Edge::new(a, b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    /// Sorted, duplicate free.
    edges: Vec<Edge>,
    /// Sorted neighbour lists.
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting loops, out-of-range endpoints and repeated edges.
    pub fn new<I, E>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut list = Vec::new();
        for e in edges {
            let e: Edge = e.into();
            if e.lo == e.hi {
                return Err(Error::invalid(format!("loop at vertex {}", e.lo)));
            }
            if e.hi >= n {
                return Err(Error::invalid(format!(
                    "edge {e} has an endpoint outside 0..{n}"
                )));
            }
            list.push(e);
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("repeated edge {}", w[0])));
        }
        Ok(Self::from_sorted_unchecked(n, list))
    }

    /// Like [`Graph::new`] but silently drops repeated edges.
    pub fn new_dedup<I, E>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut list: Vec<Edge> = edges.into_iter().map(Into::into).collect();
        list.sort_unstable();
        list.dedup();
        Self::new(n, list)
    }

    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<Edge>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.lo].push(e.hi);
            adj[e.hi].push(e.lo);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn empty(n: usize) -> Self {
        Graph::from_sorted_unchecked(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for a in 0..n {
            for b in a + 1..n {
                edges.push(Edge::new(a, b));
            }
        }
        Graph::from_sorted_unchecked(n, edges)
    }

    /// The cycle `0-1-...-(n-1)-0`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid(format!("a cycle needs at least 3 vertices, got {n}")));
        }
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// The path `0-1-...-(n-1)`.
    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|i| Edge::new(i - 1, i)).collect();
        Graph::from_sorted_unchecked(n, edges)
    }

    /// The Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`.
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::new(10, edges).expect("petersen graph is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.adj[a].binary_search(&b).is_ok()
    }

    /// Position of `e` in [`Graph::edges`].
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1) / 2
    }

    /// Connected in the partition sense; graphs on at most one vertex are connected.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// Vertex sets of the connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// The subgraph induced on `vertices`, relabelled to `0..k` in the order given.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = pos[w];
                if j != usize::MAX && i < j {
                    edges.push(Edge::new(i, j));
                }
            }
        }
        edges.sort_unstable();
        Graph::from_sorted_unchecked(vertices.len(), edges)
    }

    /// Deletes `removed` and returns the remaining graph together with the
    /// original id of each surviving vertex.
    pub fn without_vertices(&self, removed: &[usize]) -> (Graph, Vec<usize>) {
        let mut gone = vec![false; self.n];
        for &v in removed {
            gone[v] = true;
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| !gone[v]).collect();
        (self.induced_subgraph(&keep), keep)
    }

    /// The spanning subgraph with the given edge subset.
    pub fn spanning_subgraph<I: IntoIterator<Item = Edge>>(&self, edges: I) -> Result<Graph> {
        let list: Vec<Edge> = edges.into_iter().collect();
        if let Some(e) = list.iter().find(|e| !self.has_edge(e.lo, e.hi)) {
            return Err(Error::invalid(format!("{e} is not an edge of the graph")));
        }
        Graph::new(self.n, list)
    }

    /// Adds one edge between existing vertices.
    pub fn with_edge(&self, e: Edge) -> Result<Graph> {
        let mut list = self.edges.clone();
        list.push(e);
        Graph::new(self.n, list)
    }

    /// Vertices of `other` are shifted past those of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge::new(e.lo + shift, e.hi + shift)));
        edges.sort_unstable();
        Graph::from_sorted_unchecked(self.n + other.n, edges)
    }

    /// Adjacency rows as bitmasks, available for graphs on at most 64 vertices.
    pub fn adjacency_masks(&self) -> Option<Vec<u64>> {
        if self.n > 64 {
            return None;
        }
        Some(
            self.adj
                .iter()
                .map(|row| row.iter().fold(0u64, |m, &w| m | (1u64 << w)))
                .collect(),
        )
    }
}

/// A graph whose vertex ids are also its total order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedGraph {
    graph: Graph,
}

impl OrderedGraph {
    pub fn new(graph: Graph) -> Self {
        OrderedGraph { graph }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    /// Relabels `graph` so that vertex `order[i]` receives rank `i`.
    pub fn with_order(graph: &Graph, order: &[usize]) -> Result<Self> {
        let n = graph.vertex_count();
        let mut rank = vec![usize::MAX; n];
        if order.len() != n {
            return Err(Error::invalid("order must list every vertex exactly once"));
        }
        for (i, &v) in order.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return Err(Error::invalid("order must list every vertex exactly once"));
            }
            rank[v] = i;
        }
        let edges = graph.edges().iter().map(|e| Edge::new(rank[e.lo()], rank[e.hi()]));
        Ok(OrderedGraph::new(Graph::new(n, edges)?))
    }
}

impl std::ops::Deref for OrderedGraph {
    type Target = Graph;

    fn deref(&self) -> &Graph {
        &self.graph
    }
}

impl From<Graph> for OrderedGraph {
    fn from(graph: Graph) -> Self {
        OrderedGraph::new(graph)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_duplicates_and_range() {
        assert!(Graph::new(3, [(1, 1)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
        assert_eq!(Graph::new_dedup(3, [(0, 1), (1, 0)]).unwrap().edge_count(), 1);
    }

    #[test]
    fn named_graphs() {
        assert_eq!(Graph::complete(5).edge_count(), 10);
        assert_eq!(Graph::cycle(6).unwrap().edge_count(), 6);
        let p = Graph::petersen();
        assert_eq!(p.edge_count(), 15);
        assert!((0..10).all(|v| p.degree(v) == 3));
        assert!(Graph::cycle(2).is_err());
    }

    #[test]
    fn connectivity_and_components() {
        assert!(Graph::empty(0).is_connected());
        assert!(Graph::empty(1).is_connected());
        assert!(!Graph::empty(2).is_connected());
        let g = Graph::new(5, [(0, 1), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
    }

    #[test]
    fn induced_relabels_in_given_order() {
        let g = Graph::complete(4);
        let h = g.induced_subgraph(&[3, 1, 0]);
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 3);
        let (rest, keep) = Graph::cycle(5).unwrap().without_vertices(&[2]);
        assert_eq!(keep, vec![0, 1, 3, 4]);
        assert_eq!(rest.edge_count(), 3);
    }

    #[test]
    fn reorder() {
        let g = Graph::path(3);
        let o = OrderedGraph::with_order(&g, &[1, 0, 2]).unwrap();
        assert!(o.has_edge(0, 1) && o.has_edge(0, 2) && !o.has_edge(1, 2));
    }
}
