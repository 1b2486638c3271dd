//! Vertex connectivity via Menger's theorem, and packings of fixed-length
//! internally disjoint paths.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Unit-capacity max flow on a split-vertex network (Dinic).
struct FlowNetwork {
    head: Vec<usize>,
    next: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<u32>,
    level: Vec<u32>,
    iter: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork {
            head: vec![NONE; nodes],
            next: Vec::new(),
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![0; nodes],
            iter: vec![0; nodes],
        }
    }

    fn add_arc(&mut self, a: usize, b: usize, c: u32) {
        for (x, y, cc) in [(a, b, c), (b, a, 0)] {
            self.to.push(y);
            self.cap.push(cc);
            self.next.push(self.head[x]);
            self.head[x] = self.to.len() - 1;
        }
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = u32::MAX);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            let mut a = self.head[v];
            while a != NONE {
                let w = self.to[a];
                if self.cap[a] > 0 && self.level[w] == u32::MAX {
                    self.level[w] = self.level[v] + 1;
                    q.push_back(w);
                }
                a = self.next[a];
            }
        }
        self.level[t] != u32::MAX
    }

    fn dfs(&mut self, v: usize, t: usize) -> bool {
        if v == t {
            return true;
        }
        while self.iter[v] != NONE {
            let a = self.iter[v];
            let w = self.to[a];
            if self.cap[a] > 0 && self.level[w] == self.level[v] + 1 && self.dfs(w, t) {
                self.cap[a] -= 1;
                self.cap[a ^ 1] += 1;
                return true;
            }
            self.iter[v] = self.next[a];
        }
        false
    }

    /// Max flow from `s` to `t`, stopping early once `limit` is reached.
    fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let mut flow = 0;
        while flow < limit && self.bfs(s, t) {
            self.iter.clone_from(&self.head);
            while flow < limit && self.dfs(s, t) {
                flow += 1;
            }
        }
        flow
    }
}

/// Maximum number of internally vertex-disjoint `s`-`t` paths, capped at `limit`.
pub fn local_connectivity(g: &Graph, s: usize, t: usize, limit: usize) -> usize {
    let n = g.vertex_count();
    // Vertex v splits into v_in = 2v and v_out = 2v + 1.
    let mut net = FlowNetwork::new(2 * n);
    for v in 0..n {
        let c = if v == s || v == t { u32::MAX / 2 } else { 1 };
        net.add_arc(2 * v, 2 * v + 1, c);
    }
    for e in g.edges() {
        net.add_arc(2 * e.lo() + 1, 2 * e.hi(), 1);
        net.add_arc(2 * e.hi() + 1, 2 * e.lo(), 1);
    }
    net.max_flow(2 * s + 1, 2 * t, limit)
}

/// The least number of vertices whose removal disconnects `g` or leaves a
/// single vertex; complete graphs return `n - 1`.
pub fn vertex_connectivity(g: &Graph) -> Result<usize> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::precondition(format!(
            "vertex connectivity needs at least 2 vertices, got {n}"
        )));
    }
    if g.is_complete() {
        return Ok(n - 1);
    }
    if !g.is_connected() {
        return Ok(0);
    }
    // Even's scheme: some vertex among the first best+1 lies outside a
    // minimum separator, so only pairs with a source among them matter.
    let mut best = g.min_degree();
    let mut i = 0;
    while i <= best && i < n {
        for j in i + 1..n {
            if !g.has_edge(i, j) {
                best = best.min(local_connectivity(g, i, j, best));
            }
        }
        i += 1;
    }
    Ok(best)
}

/// A collection of `u`-`v` paths, each listed as its full vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathPacking {
    pub paths: Vec<Vec<usize>>,
    /// False when the collection is only known to be a lower bound.
    pub exact: bool,
}

/// Exact search applies to paths of at most this many edges...
pub const EXACT_MAX_LENGTH: usize = 4;
/// ...in hosts with at most this many vertices.
pub const EXACT_MAX_VERTICES: usize = 64;

/// A maximum set of `u`-`v` paths with exactly `length` edges and pairwise
/// disjoint interiors.
pub fn max_disjoint_paths(g: &Graph, u: usize, v: usize, length: usize) -> Result<PathPacking> {
    disjoint_paths_up_to(g, u, v, length, usize::MAX)
}

/// Like [`max_disjoint_paths`] but stops as soon as `threshold` paths are
/// found; the result then holds exactly `threshold` paths.
pub fn disjoint_paths_up_to(
    g: &Graph,
    u: usize,
    v: usize,
    length: usize,
    threshold: usize,
) -> Result<PathPacking> {
    let n = g.vertex_count();
    if u >= n || v >= n {
        return Err(Error::invalid("path endpoints outside the graph"));
    }
    if u == v {
        return Err(Error::precondition("path endpoints must differ"));
    }
    if length == 0 {
        return Err(Error::precondition("path length must be at least 1"));
    }
    if length == 1 {
        let paths = if g.has_edge(u, v) && threshold > 0 {
            vec![vec![u, v]]
        } else {
            Vec::new()
        };
        return Ok(PathPacking { paths, exact: true });
    }
    let paths = fixed_length_paths(g, u, v, length);
    let exact = length <= EXACT_MAX_LENGTH && n <= EXACT_MAX_VERTICES;
    let chosen = if exact {
        PackingSearch::new(n, &paths, threshold).solve()
    } else {
        improve_packing(n, &paths, greedy_packing(n, &paths, threshold), threshold)
    };
    Ok(PathPacking {
        paths: chosen.into_iter().map(|i| paths[i].clone()).collect(),
        exact,
    })
}

/// All simple `u`-`v` paths with exactly `length` edges, in lexicographic order.
pub fn fixed_length_paths(g: &Graph, u: usize, v: usize, length: usize) -> Vec<Vec<usize>> {
    fn extend(g: &Graph, v: usize, length: usize, path: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("path starts at u");
        if path.len() == length {
            if g.has_edge(last, v) {
                let mut p = path.clone();
                p.push(v);
                out.push(p);
            }
            return;
        }
        for &w in g.neighbours(last) {
            if !on[w] && w != v {
                on[w] = true;
                path.push(w);
                extend(g, v, length, path, on, out);
                path.pop();
                on[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut on = vec![false; g.vertex_count()];
    on[u] = true;
    let mut path = vec![u];
    extend(g, v, length, &mut path, &mut on, &mut out);
    out
}

fn interior(path: &[usize]) -> &[usize] {
    &path[1..path.len() - 1]
}

fn greedy_packing(n: usize, paths: &[Vec<usize>], threshold: usize) -> Vec<usize> {
    let mut used = vec![false; n];
    let mut chosen = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        if chosen.len() >= threshold {
            break;
        }
        if interior(p).iter().all(|&w| !used[w]) {
            interior(p).iter().for_each(|&w| used[w] = true);
            chosen.push(i);
        }
    }
    chosen
}

/// Repeatedly trades one chosen path for two that fit in its place.
fn improve_packing(n: usize, paths: &[Vec<usize>], mut chosen: Vec<usize>, threshold: usize) -> Vec<usize> {
    'outer: while chosen.len() < threshold {
        for drop in 0..chosen.len() {
            let mut used = vec![false; n];
            for (k, &i) in chosen.iter().enumerate() {
                if k != drop {
                    interior(&paths[i]).iter().for_each(|&w| used[w] = true);
                }
            }
            let fits: Vec<usize> = (0..paths.len())
                .filter(|&i| interior(&paths[i]).iter().all(|&w| !used[w]))
                .collect();
            for (a, &p) in fits.iter().enumerate() {
                for &q in &fits[a + 1..] {
                    if interior(&paths[p]).iter().all(|w| !interior(&paths[q]).contains(w)) {
                        chosen.remove(drop);
                        chosen.extend([p, q]);
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    chosen.sort_unstable();
    chosen
}

/// Branch and bound over paths for a maximum interior-disjoint subfamily.
struct PackingSearch<'a> {
    paths: &'a [Vec<usize>],
    threshold: usize,
    inner: usize,
    used: Vec<bool>,
    current: Vec<usize>,
    best: Vec<usize>,
}

impl<'a> PackingSearch<'a> {
    fn new(n: usize, paths: &'a [Vec<usize>], threshold: usize) -> Self {
        let inner = paths.first().map_or(1, |p| p.len() - 2);
        PackingSearch {
            paths,
            threshold,
            inner,
            used: vec![false; n],
            current: Vec::new(),
            best: Vec::new(),
        }
    }

    fn solve(mut self) -> Vec<usize> {
        self.best = greedy_packing(self.used.len(), self.paths, self.threshold);
        if self.best.len() < self.threshold {
            self.branch(0);
        }
        self.best
    }

    fn branch(&mut self, from: usize) {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if self.best.len() >= self.threshold {
            return;
        }
        let free = self.used.iter().filter(|&&u| !u).count().saturating_sub(2);
        if self.current.len() + free / self.inner <= self.best.len() {
            return;
        }
        for i in from..self.paths.len() {
            let p = &self.paths[i];
            if interior(p).iter().any(|&w| self.used[w]) {
                continue;
            }
            interior(p).iter().for_each(|&w| self.used[w] = true);
            self.current.push(i);
            self.branch(i + 1);
            self.current.pop();
            interior(p).iter().for_each(|&w| self.used[w] = false);
            if self.best.len() >= self.threshold {
                return;
            }
        }
    }
}
