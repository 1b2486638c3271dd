//! Enumeration of copies of a small template inside a host.
//!
//! A copy is an image subgraph, not a map: embeddings that differ by an
//! automorphism of the template produce the same copy and are reported once,
//! represented by the lexicographically least embedding with that image.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::hypergraph::Hypergraph;
use crate::structure::Structure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CopyMode {
    /// Not necessarily induced: template edges map to host edges.
    Subgraph,
    /// Additionally, template non-edges map to host non-edges.
    Induced,
}

/// An injective map from template vertices into the host.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CopyEmbedding {
    /// `images[i]` is the host vertex of template vertex `i`.
    pub images: Vec<usize>,
    pub mode: CopyMode,
    pub ordered: bool,
}

/// The vertex and edge sets covered by a copy, both sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Footprint {
    pub vertices: Vec<usize>,
    pub edges: Vec<Vec<usize>>,
}

impl CopyEmbedding {
    pub fn new(images: Vec<usize>, mode: CopyMode, ordered: bool) -> Self {
        CopyEmbedding {
            images,
            mode,
            ordered,
        }
    }

    pub fn footprint<S: Structure>(&self, template: &S) -> Footprint {
        let mut vertices = self.images.clone();
        vertices.sort_unstable();
        let mut edges: Vec<Vec<usize>> = template
            .edge_tuples()
            .into_iter()
            .map(|t| {
                let mut img: Vec<usize> = t.iter().map(|&v| self.images[v]).collect();
                img.sort_unstable();
                img
            })
            .collect();
        edges.sort_unstable();
        Footprint { vertices, edges }
    }

    /// Image edges of a graph template as indices into `host.edges()`.
    pub fn host_edge_indices(&self, template: &Graph, host: &Graph) -> Vec<usize> {
        let mut out: Vec<usize> = template
            .edges()
            .iter()
            .map(|e| {
                host.edge_index(Edge::new(self.images[e.lo()], self.images[e.hi()]))
                    .expect("embedding maps edges to edges")
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Checks every invariant of an embedding against host and template.
    pub fn validate<S: Structure>(&self, host: &S, template: &S) -> Result<()> {
        let n = template.vertex_count();
        if self.images.len() != n {
            return Err(Error::invalid(format!(
                "embedding has {} images for a template on {n} vertices",
                self.images.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for &v in &self.images {
            if v >= host.vertex_count() {
                return Err(Error::invalid(format!("image {v} outside the host")));
            }
            if !seen.insert(v) {
                return Err(Error::invalid(format!("image {v} used twice")));
            }
        }
        let fp = self.footprint(template);
        for e in &fp.edges {
            if !host.contains_tuple(e) {
                return Err(Error::invalid(format!("image {e:?} is not a host edge")));
            }
        }
        if self.ordered && self.images.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("ordered embedding is not increasing"));
        }
        if self.mode == CopyMode::Induced {
            let inside: std::collections::HashSet<usize> = fp.vertices.iter().copied().collect();
            let count = host
                .edge_tuples()
                .into_iter()
                .filter(|t| t.iter().all(|v| inside.contains(v)))
                .count();
            if count != fp.edges.len() {
                return Err(Error::invalid("embedding is not induced"));
            }
        }
        Ok(())
    }
}

/// All copies of `template` in `host`, sorted by their footprint.
pub fn enumerate_copies(
    host: &Graph,
    template: &Graph,
    mode: CopyMode,
    ordered: bool,
) -> Vec<CopyEmbedding> {
    if template.vertex_count() > host.vertex_count() {
        return Vec::new();
    }
    let mut search = GraphSearch::new(host, template, mode, ordered);
    search.run(0);
    search.finish()
}

/// Hypergraph counterpart of [`enumerate_copies`]; uniformities must agree.
pub fn enumerate_hypergraph_copies(
    host: &Hypergraph,
    template: &Hypergraph,
    mode: CopyMode,
    ordered: bool,
) -> Result<Vec<CopyEmbedding>> {
    if host.uniformity() != template.uniformity() {
        return Err(Error::precondition(format!(
            "uniformity mismatch: host {} vs template {}",
            host.uniformity(),
            template.uniformity()
        )));
    }
    if template.vertex_count() > host.vertex_count() {
        return Ok(Vec::new());
    }
    let mut search = HyperSearch::new(host, template, mode, ordered);
    search.run(0);
    Ok(search.finish())
}

/// Template vertices in an order where each vertex (after the first of its
/// component) is adjacent to an earlier one whenever possible.
fn search_order(n: usize, neighbours: impl Fn(usize) -> Vec<usize>, degree: impl Fn(usize) -> usize) -> Vec<usize> {
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by(|&a, &b| {
                (links[a], degree(a))
                    .cmp(&(links[b], degree(b)))
                    .then(b.cmp(&a))
            })
            .expect("unplaced vertex remains");
        placed[next] = true;
        order.push(next);
        for w in neighbours(next) {
            links[w] += 1;
        }
    }
    order
}

type Key = (Vec<usize>, Vec<Vec<usize>>);

fn keep_least(results: &mut BTreeMap<Key, Vec<usize>>, key: Key, images: &[usize]) {
    match results.get_mut(&key) {
        Some(best) => {
            if images < best.as_slice() {
                *best = images.to_vec();
            }
        }
        None => {
            results.insert(key, images.to_vec());
        }
    }
}

struct GraphSearch<'a> {
    host: &'a Graph,
    template: &'a Graph,
    mode: CopyMode,
    ordered: bool,
    order: Vec<usize>,
    /// For each position, earlier positions whose template vertices are adjacent.
    back_adjacent: Vec<Vec<usize>>,
    back_nonadjacent: Vec<Vec<usize>>,
    images: Vec<usize>,
    used: Vec<bool>,
    results: BTreeMap<Key, Vec<usize>>,
}

impl<'a> GraphSearch<'a> {
    fn new(host: &'a Graph, template: &'a Graph, mode: CopyMode, ordered: bool) -> Self {
        let n = template.vertex_count();
        let order = search_order(n, |v| template.neighbours(v).to_vec(), |v| template.degree(v));
        let mut back_adjacent = Vec::with_capacity(n);
        let mut back_nonadjacent = Vec::with_capacity(n);
        for i in 0..n {
            let t = order[i];
            let (adj, non): (Vec<usize>, Vec<usize>) =
                (0..i).partition(|&j| template.has_edge(t, order[j]));
            back_adjacent.push(adj);
            back_nonadjacent.push(non);
        }
        GraphSearch {
            host,
            template,
            mode,
            ordered,
            order,
            back_adjacent,
            back_nonadjacent,
            images: vec![usize::MAX; n],
            used: vec![false; host.vertex_count()],
            results: BTreeMap::new(),
        }
    }

    fn fits(&self, pos: usize, c: usize) -> bool {
        let t = self.order[pos];
        if self.used[c] || self.host.degree(c) < self.template.degree(t) {
            return false;
        }
        for &j in &self.back_adjacent[pos] {
            if !self.host.has_edge(c, self.images[self.order[j]]) {
                return false;
            }
        }
        if self.mode == CopyMode::Induced {
            for &j in &self.back_nonadjacent[pos] {
                if self.host.has_edge(c, self.images[self.order[j]]) {
                    return false;
                }
            }
        }
        if self.ordered {
            for j in 0..pos {
                let s = self.order[j];
                if (s < t) != (self.images[s] < c) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, pos: usize) {
        if pos == self.order.len() {
            self.record();
            return;
        }
        let candidates: Vec<usize> = match self.back_adjacent[pos].first() {
            Some(&j) => self.host.neighbours(self.images[self.order[j]]).to_vec(),
            None => (0..self.host.vertex_count()).collect(),
        };
        let t = self.order[pos];
        for c in candidates {
            if self.fits(pos, c) {
                self.images[t] = c;
                self.used[c] = true;
                self.run(pos + 1);
                self.used[c] = false;
                self.images[t] = usize::MAX;
            }
        }
    }

    fn record(&mut self) {
        let mut vertices = self.images.clone();
        vertices.sort_unstable();
        let mut edges: Vec<Vec<usize>> = self
            .template
            .edges()
            .iter()
            .map(|e| {
                let a = self.images[e.lo()];
                let b = self.images[e.hi()];
                vec![a.min(b), a.max(b)]
            })
            .collect();
        edges.sort_unstable();
        let images = self.images.clone();
        keep_least(&mut self.results, (vertices, edges), &images);
    }

    fn finish(self) -> Vec<CopyEmbedding> {
        let (mode, ordered) = (self.mode, self.ordered);
        self.results
            .into_values()
            .map(|images| CopyEmbedding::new(images, mode, ordered))
            .collect()
    }
}

struct HyperSearch<'a> {
    host: &'a Hypergraph,
    template: &'a Hypergraph,
    mode: CopyMode,
    ordered: bool,
    order: Vec<usize>,
    /// Template edges whose last vertex (in search order) sits at each position.
    completes: Vec<Vec<usize>>,
    /// For each position, an earlier position sharing a template edge.
    anchor: Vec<Option<usize>>,
    images: Vec<usize>,
    preimage: Vec<usize>,
    results: BTreeMap<Key, Vec<usize>>,
}

impl<'a> HyperSearch<'a> {
    fn new(host: &'a Hypergraph, template: &'a Hypergraph, mode: CopyMode, ordered: bool) -> Self {
        let n = template.vertex_count();
        let neighbours = |v: usize| {
            let mut out: Vec<usize> = template
                .incident(v)
                .iter()
                .flat_map(|&id| template.edge(id).iter().copied())
                .filter(|&w| w != v)
                .collect();
            out.sort_unstable();
            out.dedup();
            out
        };
        let order = search_order(n, neighbours, |v| template.degree(v));
        let mut position = vec![0; n];
        for (i, &t) in order.iter().enumerate() {
            position[t] = i;
        }
        let mut completes = vec![Vec::new(); n];
        for (id, e) in template.edges().iter().enumerate() {
            let last = e.iter().map(|&v| position[v]).max().expect("nonempty edge");
            completes[last].push(id);
        }
        let anchor = (0..n)
            .map(|i| {
                let nb = neighbours(order[i]);
                (0..i).find(|&j| nb.contains(&order[j]))
            })
            .collect();
        HyperSearch {
            host,
            template,
            mode,
            ordered,
            order,
            completes,
            anchor,
            images: vec![usize::MAX; n],
            preimage: vec![usize::MAX; host.vertex_count()],
            results: BTreeMap::new(),
        }
    }

    fn consistent(&self, pos: usize, c: usize) -> bool {
        let t = self.order[pos];
        for &id in &self.completes[pos] {
            let mut img: Vec<usize> = self.template.edge(id).iter().map(|&v| self.images[v]).collect();
            img.sort_unstable();
            if self.host.edge_id(&img).is_none() {
                return false;
            }
        }
        if self.mode == CopyMode::Induced {
            for &id in self.host.incident(c) {
                let e = self.host.edge(id);
                if e.iter().all(|&w| self.preimage[w] != usize::MAX) {
                    let mut pre: Vec<usize> = e.iter().map(|&w| self.preimage[w]).collect();
                    pre.sort_unstable();
                    if self.template.edge_id(&pre).is_none() {
                        return false;
                    }
                }
            }
        }
        if self.ordered {
            for j in 0..pos {
                let s = self.order[j];
                if (s < t) != (self.images[s] < c) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, pos: usize) {
        if pos == self.order.len() {
            self.record();
            return;
        }
        let t = self.order[pos];
        let candidates: Vec<usize> = match self.anchor[pos] {
            Some(j) => {
                let a = self.images[self.order[j]];
                let mut out: Vec<usize> = self
                    .host
                    .incident(a)
                    .iter()
                    .flat_map(|&id| self.host.edge(id).iter().copied())
                    .filter(|&w| w != a)
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            }
            None => (0..self.host.vertex_count()).collect(),
        };
        for c in candidates {
            if self.preimage[c] != usize::MAX || self.host.degree(c) < self.template.degree(t) {
                continue;
            }
            self.images[t] = c;
            self.preimage[c] = t;
            if self.consistent(pos, c) {
                self.run(pos + 1);
            }
            self.preimage[c] = usize::MAX;
            self.images[t] = usize::MAX;
        }
    }

    fn record(&mut self) {
        let emb = CopyEmbedding::new(self.images.clone(), self.mode, self.ordered);
        let fp = emb.footprint(self.template);
        keep_least(&mut self.results, (fp.vertices, fp.edges), &emb.images);
    }

    fn finish(self) -> Vec<CopyEmbedding> {
        let (mode, ordered) = (self.mode, self.ordered);
        self.results
            .into_values()
            .map(|images| CopyEmbedding::new(images, mode, ordered))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_in_triangle() {
        let k3 = Graph::complete(3);
        let copies = enumerate_copies(&k3, &k3, CopyMode::Induced, false);
        assert_eq!(copies.len(), 1);
        assert_eq!(copies[0].images, vec![0, 1, 2]);
    }

    #[test]
    fn four_cycles_in_k4() {
        let k4 = Graph::complete(4);
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(enumerate_copies(&k4, &c4, CopyMode::Subgraph, false).len(), 3);
        assert_eq!(enumerate_copies(&k4, &c4, CopyMode::Induced, false).len(), 0);
    }

    #[test]
    fn template_larger_than_host() {
        assert!(enumerate_copies(&Graph::complete(3), &Graph::complete(4), CopyMode::Subgraph, false).is_empty());
    }

    #[test]
    fn ordered_paths() {
        // The monotone path 0-1-2 embeds into the path 0-1-2-3 in order only as
        // consecutive triples; unordered it also embeds reversed, which is the
        // same image.
        let host = Graph::path(4);
        let tpl = Graph::path(3);
        assert_eq!(enumerate_copies(&host, &tpl, CopyMode::Subgraph, true).len(), 2);
        let star = Graph::new(3, [(0, 1), (0, 2)]).unwrap();
        assert_eq!(enumerate_copies(&host, &star, CopyMode::Subgraph, true).len(), 0);
        assert_eq!(enumerate_copies(&host, &star, CopyMode::Subgraph, false).len(), 2);
    }

    #[test]
    fn embeddings_validate() {
        let host = Graph::petersen();
        let c5 = Graph::cycle(5).unwrap();
        let copies = enumerate_copies(&host, &c5, CopyMode::Subgraph, false);
        assert_eq!(copies.len(), 12);
        for c in &copies {
            c.validate(&host, &c5).unwrap();
        }
        let bad = CopyEmbedding::new(vec![0, 1, 2, 3, 9], CopyMode::Subgraph, false);
        assert!(bad.validate(&host, &c5).is_err());
    }

    #[test]
    fn hypergraph_edges_as_copies() {
        let host = Hypergraph::new(6, 3, [[0, 1, 2], [2, 3, 4], [0, 4, 5]]).unwrap();
        let edge = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        let copies = enumerate_hypergraph_copies(&host, &edge, CopyMode::Subgraph, false).unwrap();
        assert_eq!(copies.len(), 3);
        let ordered = enumerate_hypergraph_copies(&host, &edge, CopyMode::Subgraph, true).unwrap();
        assert_eq!(ordered.len(), 3);
        assert!(ordered.iter().all(|c| c.images.windows(2).all(|w| w[0] < w[1])));
        let path = Hypergraph::new(5, 3, [[0, 1, 2], [2, 3, 4]]).unwrap();
        let paths = enumerate_hypergraph_copies(&host, &path, CopyMode::Induced, false).unwrap();
        assert_eq!(paths.len(), 3);
        let wrong = Hypergraph::new(2, 2, [[0, 1]]).unwrap();
        assert!(enumerate_hypergraph_copies(&host, &wrong, CopyMode::Subgraph, false).is_err());
    }
}
