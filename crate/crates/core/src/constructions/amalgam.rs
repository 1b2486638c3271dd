//! Amalgams `(m, F)`: `m` copies of `F` glued along one edge, the kernel.

use log::warn;

use crate::copies::{enumerate_copies, CopyEmbedding, CopyMode};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// Largest template for which automorphisms are searched exhaustively.
pub const TRANSITIVITY_MAX_VERTICES: usize = 10;

/// Default step budget for kernel multiplicity searches.
pub const DEFAULT_PACKING_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone)]
pub struct Amalgam {
    pub graph: Graph,
    /// Always the edge `0-1`.
    pub kernel: Edge,
    pub m: usize,
    pub template: Graph,
    /// The `m` constituent copies.
    pub copies: Vec<CopyEmbedding>,
    /// False when the template was too large to check strong edge transitivity.
    pub edge_transitivity_verified: bool,
}

/// Glues `m` copies of `template` along its first edge.
pub fn amalgam(template: &Graph, m: usize) -> Result<Amalgam> {
    if template.edge_count() == 0 {
        return Err(Error::precondition("amalgams need a template with an edge"));
    }
    if m == 0 {
        return Err(Error::precondition("amalgams need at least one copy"));
    }
    let verified = check_transitive_or_warn(template)?;
    let v = template.vertex_count();
    let kernel = template.edges()[0];
    let others: Vec<usize> = (0..v).filter(|&x| !kernel.contains(x)).collect();
    let mut copies = Vec::with_capacity(m);
    let mut edges = Vec::new();
    for i in 0..m {
        let mut img = vec![0; v];
        img[kernel.lo()] = 0;
        img[kernel.hi()] = 1;
        for (rank, &x) in others.iter().enumerate() {
            img[x] = 2 + i * (v - 2) + rank;
        }
        for e in template.edges() {
            edges.push((img[e.lo()], img[e.hi()]));
        }
        copies.push(CopyEmbedding::new(img, CopyMode::Subgraph, false));
    }
    let graph = Graph::new_dedup(m * (v - 2) + 2, edges)?;
    Ok(Amalgam {
        graph,
        kernel: Edge::new(0, 1),
        m,
        template: template.clone(),
        copies,
        edge_transitivity_verified: verified,
    })
}

/// Rejects templates known not to be strongly edge transitive; returns
/// whether the property could be verified.
pub(crate) fn check_transitive_or_warn(template: &Graph) -> Result<bool> {
    if template.vertex_count() > TRANSITIVITY_MAX_VERTICES {
        warn!(
            "strong edge transitivity of a {}-vertex template not verified; gluing along its first edge",
            template.vertex_count()
        );
        return Ok(false);
    }
    if !is_strongly_edge_transitive(template)? {
        return Err(Error::precondition("template is not strongly edge transitive"));
    }
    Ok(true)
}

/// Whether every ordered adjacent pair can be sent to every other by an automorphism.
pub fn is_strongly_edge_transitive(g: &Graph) -> Result<bool> {
    if g.edge_count() == 0 {
        return Err(Error::precondition("strong edge transitivity needs an edge"));
    }
    if g.vertex_count() > TRANSITIVITY_MAX_VERTICES {
        return Err(Error::CapExceeded(format!(
            "automorphism search is limited to {TRANSITIVITY_MAX_VERTICES} vertices, got {}",
            g.vertex_count()
        )));
    }
    // Automorphisms form a group, so it suffices to reach every arc from one arc.
    let e = g.edges()[0];
    for f in g.edges() {
        for (a, b) in [(f.lo(), f.hi()), (f.hi(), f.lo())] {
            if find_automorphism(g, &[(e.lo(), a), (e.hi(), b)]).is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Some automorphism extending the partial map `fixed`, by backtracking.
pub fn find_automorphism(g: &Graph, fixed: &[(usize, usize)]) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for &(x, y) in fixed {
        if map[x] != usize::MAX && map[x] != y || used[y] && map[x] != y {
            return None;
        }
        map[x] = y;
        used[y] = true;
    }
    for &(x, _) in fixed {
        for &(z, _) in fixed {
            if g.has_edge(x, z) != g.has_edge(map[x], map[z]) || g.degree(x) != g.degree(map[x]) {
                return None;
            }
        }
    }
    fn extend(g: &Graph, x: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        let n = g.vertex_count();
        if x == n {
            return true;
        }
        if map[x] != usize::MAX {
            return extend(g, x + 1, map, used);
        }
        for y in 0..n {
            if used[y] || g.degree(y) != g.degree(x) {
                continue;
            }
            let consistent = (0..n).all(|z| map[z] == usize::MAX || g.has_edge(x, z) == g.has_edge(y, map[z]));
            if consistent {
                map[x] = y;
                used[y] = true;
                if extend(g, x + 1, map, used) {
                    return true;
                }
                map[x] = usize::MAX;
                used[y] = false;
            }
        }
        false
    }
    extend(g, 0, &mut map, &mut used).then_some(map)
}

/// A largest family of copies of a template through one host edge whose
/// vertex sets pairwise meet exactly in that edge.
#[derive(Debug, Clone)]
pub struct KernelPacking {
    pub kernel: Edge,
    /// Host vertex sets of the chosen copies, each sorted.
    pub petals: Vec<Vec<usize>>,
}

impl KernelPacking {
    pub fn multiplicity(&self) -> usize {
        self.petals.len()
    }

    /// Vertices of the amalgam formed by the packing, or just the kernel.
    pub fn vertices(&self) -> Vec<usize> {
        let mut out = vec![self.kernel.lo(), self.kernel.hi()];
        for p in &self.petals {
            out.extend(p.iter().copied());
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// All copies of `template` in `host` grouped by the host edges they contain.
///
/// Templates are assumed strongly edge transitive, so any edge of a copy can
/// serve as its kernel.
pub struct KernelIndex {
    kernels: Vec<Vec<Vec<usize>>>,
    edges: Vec<Edge>,
}

impl KernelIndex {
    pub fn new(host: &Graph, template: &Graph) -> Self {
        let copies = enumerate_copies(host, template, CopyMode::Subgraph, false);
        let mut kernels = vec![Vec::new(); host.edge_count()];
        for c in &copies {
            let fp = c.footprint(template);
            for idx in c.host_edge_indices(template, host) {
                kernels[idx].push(fp.vertices.clone());
            }
        }
        KernelIndex {
            kernels,
            edges: host.edges().to_vec(),
        }
    }

    /// Whether the edge with this index lies in some copy.
    pub fn in_some_copy(&self, edge: usize) -> bool {
        !self.kernels[edge].is_empty()
    }

    /// A maximum packing at the edge, stopping early once `stop_at` petals
    /// are found. Errors when more than `budget` search steps are needed.
    pub fn packing(&self, edge: usize, stop_at: usize, budget: u64) -> Result<KernelPacking> {
        let kernel = self.edges[edge];
        let petals: Vec<Vec<usize>> = self.kernels[edge]
            .iter()
            .map(|vs| vs.iter().copied().filter(|&v| !kernel.contains(v)).collect())
            .collect();
        let mut search = PetalSearch {
            petals: &petals,
            stop_at,
            budget,
            steps: 0,
            current: Vec::new(),
            best: Vec::new(),
        };
        search.run(0)?;
        let mut chosen: Vec<Vec<usize>> = search.best.iter().map(|&i| self.kernels[edge][i].clone()).collect();
        chosen.sort();
        Ok(KernelPacking { kernel, petals: chosen })
    }
}

struct PetalSearch<'a> {
    petals: &'a [Vec<usize>],
    stop_at: usize,
    budget: u64,
    steps: u64,
    current: Vec<usize>,
    best: Vec<usize>,
}

impl<'a> PetalSearch<'a> {
    fn done(&self) -> bool {
        self.best.len() >= self.stop_at
    }

    fn run(&mut self, from: usize) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::budget("kernel multiplicity search", self.steps - 1));
        }
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if self.done() || self.current.len() + (self.petals.len() - from) <= self.best.len() {
            return Ok(());
        }
        for i in from..self.petals.len() {
            if self.current.len() + (self.petals.len() - i) <= self.best.len() {
                break;
            }
            let disjoint = self
                .current
                .iter()
                .all(|&j| self.petals[j].iter().all(|v| self.petals[i].binary_search(v).is_err()));
            if disjoint {
                self.current.push(i);
                self.run(i + 1)?;
                self.current.pop();
                if self.done() {
                    return Ok(());
                }
            }
        }
        Ok(())
    }
}

/// The spanning subgraph of `host` on the edges that are kernels of some
/// copy of `(m, template)`.
pub fn kernel_subgraph(host: &Graph, template: &Graph, m: usize, budget: u64) -> Result<Graph> {
    if template.edge_count() == 0 || m == 0 {
        return Err(Error::precondition("kernel subgraphs need a template with an edge and m >= 1"));
    }
    check_transitive_or_warn(template)?;
    let index = KernelIndex::new(host, template);
    let mut keep = Vec::new();
    for (i, &e) in host.edges().iter().enumerate() {
        if index.packing(i, m, budget)?.multiplicity() >= m {
            keep.push(e);
        }
    }
    host.spanning_subgraph(keep)
}

/// The first host edge that is the kernel of a copy of `(m, template)`.
pub fn find_amalgam(host: &Graph, template: &Graph, m: usize, budget: u64) -> Result<Option<KernelPacking>> {
    let index = KernelIndex::new(host, template);
    for i in 0..host.edge_count() {
        let p = index.packing(i, m, budget)?;
        if p.multiplicity() >= m {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::templates::balanced_multipartite;

    #[test]
    fn counts() {
        for (t, m, v, e) in [
            (Graph::complete(3), 1, 3, 3),
            (Graph::complete(3), 3, 5, 7),
            (Graph::cycle(5).unwrap(), 2, 8, 9),
        ] {
            let a = amalgam(&t, m).unwrap();
            assert_eq!((a.graph.vertex_count(), a.graph.edge_count()), (v, e));
            assert!(a.edge_transitivity_verified);
            for c in &a.copies {
                c.validate(&a.graph, &t).unwrap();
                assert!(c.images.contains(&0) && c.images.contains(&1));
            }
        }
        assert!(amalgam(&Graph::empty(3), 2).is_err());
        assert!(amalgam(&Graph::path(3), 2).is_err());
    }

    #[test]
    fn transitivity() {
        assert!(is_strongly_edge_transitive(&Graph::cycle(5).unwrap()).unwrap());
        assert!(is_strongly_edge_transitive(&balanced_multipartite(3, 2).unwrap()).unwrap());
        assert!(is_strongly_edge_transitive(&Graph::petersen()).unwrap());
        assert!(!is_strongly_edge_transitive(&Graph::path(3)).unwrap());
        // Edge transitive but not arc transitive on the ordered pairs: a star is fine
        // only when both orientations map, which fails for leaves vs centre.
        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!is_strongly_edge_transitive(&star).unwrap());
        assert!(is_strongly_edge_transitive(&Graph::complete(11)).is_err());
    }

    #[test]
    fn kernel_subgraphs() {
        let book = amalgam(&Graph::complete(3), 3).unwrap().graph;
        let k = kernel_subgraph(&book, &Graph::complete(3), 3, DEFAULT_PACKING_BUDGET).unwrap();
        assert_eq!(k.edges(), &[Edge::new(0, 1)]);
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(kernel_subgraph(&c5, &Graph::complete(3), 1, DEFAULT_PACKING_BUDGET).unwrap().edge_count(), 0);
        let k5 = Graph::complete(5);
        assert_eq!(kernel_subgraph(&k5, &Graph::complete(3), 3, DEFAULT_PACKING_BUDGET).unwrap().edge_count(), 10);
        assert_eq!(kernel_subgraph(&k5, &Graph::complete(3), 4, DEFAULT_PACKING_BUDGET).unwrap().edge_count(), 0);
    }

    #[test]
    fn packing_budget_is_reported() {
        let k8 = Graph::complete(8);
        let index = KernelIndex::new(&k8, &Graph::complete(3));
        let err = index.packing(0, usize::MAX, 1).unwrap_err();
        assert!(err.is_budget());
        assert_eq!(index.packing(0, usize::MAX, DEFAULT_PACKING_BUDGET).unwrap().multiplicity(), 6);
    }
}
