//! Exact 2-densities.
//!
//! `d2(G) = (e - 1) / (v - 2)` on at least three vertices and `1` for `K_2`;
//! `m2(G)` is the maximum of `d2` over subgraphs with an edge. Everything is
//! computed in exact rational arithmetic.
//!
//! `m2` is found by a Dinkelbach iteration: for a candidate value `t = p/q`,
//! some subgraph beats `t` iff some vertex set `W` containing a fixed edge has
//! `q*e(W) - p*|W| > q - 2p`, and the left side is maximised over `W` by a
//! minimum cut in the usual max-closure network.

use std::collections::VecDeque;
use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A reduced fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::invalid("zero denominator"));
        }
        Ok(Rational(Ratio::new(numer, denom)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl std::str::FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::invalid(format!("not a rational: {s:?}")))
        };
        match s.split_once('/') {
            Some((a, b)) => Rational::new(parse(a)?, parse(b)?),
            None => Ok(Rational::integer(parse(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `d2` of a graph with `e >= 1` edges on `v` vertices, given just the counts.
fn ratio_of(e: usize, v: usize) -> Rational {
    if v == 2 {
        Rational::integer(1)
    } else {
        Rational(Ratio::new(e as i64 - 1, v as i64 - 2))
    }
}

/// The 2-density of `g` on its vertex set as given.
pub fn two_density(g: &Graph) -> Result<Rational> {
    if g.edge_count() == 0 {
        return Err(Error::precondition("2-density of an edgeless graph"));
    }
    Ok(ratio_of(g.edge_count(), g.vertex_count()))
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub d2: Rational,
    pub m2: Rational,
    /// Host vertices of a subgraph attaining `m2`, ascending.
    pub m2_witness_vertices: Vec<usize>,
    /// The induced subgraph on the witness vertices.
    #[serde(skip)]
    pub m2_witness: Graph,
    /// False for graphs with fewer than two edges, where the notion is undefined.
    pub strictly_2_balanced: bool,
}

/// `m2` together with a witness vertex set, sorted ascending.
pub fn max_two_density(g: &Graph) -> Result<(Rational, Vec<usize>)> {
    if g.edge_count() == 0 {
        return Err(Error::precondition("maximum 2-density of an edgeless graph"));
    }
    let first = g.edges()[0];
    let mut best = Rational::integer(1);
    let mut witness = vec![first.lo(), first.hi()];
    loop {
        let (p, q) = (best.numer(), best.denom());
        let threshold = q - 2 * p;
        let mut improved = None;
        for e in g.edges() {
            let (value, set) = max_closure(g, p, q, [e.lo(), e.hi()]);
            if value > threshold {
                improved = Some(set);
                break;
            }
        }
        match improved {
            Some(set) => {
                let sub = g.induced_subgraph(&set);
                let d = ratio_of(sub.edge_count(), set.len());
                debug_assert!(d > best);
                best = d;
                witness = set;
            }
            None => return Ok((best, witness)),
        }
    }
}

/// Whether `d2(g)` strictly exceeds `d2` of every proper subgraph with an edge.
pub fn is_strictly_two_balanced(g: &Graph) -> Result<bool> {
    if g.edge_count() < 2 {
        return Err(Error::precondition(format!(
            "strict 2-balance needs at least 2 edges, got {}",
            g.edge_count()
        )));
    }
    let d = two_density(g)?;
    // A single edge is a proper subgraph with density 1.
    if d <= Rational::integer(1) {
        return Ok(false);
    }
    // Dropping edges but keeping every vertex only lowers the density, so
    // it suffices to look at subgraphs missing some vertex.
    for x in 0..g.vertex_count() {
        let (rest, _) = g.without_vertices(&[x]);
        if rest.edge_count() == 0 {
            continue;
        }
        if max_two_density(&rest)?.0 >= d {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn density_report(g: &Graph) -> Result<DensityReport> {
    let d2 = two_density(g)?;
    let (m2, vertices) = max_two_density(g)?;
    let strictly = g.edge_count() >= 2 && is_strictly_two_balanced(g)?;
    Ok(DensityReport {
        d2,
        m2,
        m2_witness: g.induced_subgraph(&vertices),
        m2_witness_vertices: vertices,
        strictly_2_balanced: strictly,
    })
}

/// Maximum of `q*e(W) - p*|W|` over vertex sets `W` containing `forced`,
/// with a maximiser of least size.
fn max_closure(g: &Graph, p: i64, q: i64, forced: [usize; 2]) -> (i64, Vec<usize>) {
    let n = g.vertex_count();
    let m = g.edge_count();
    let (source, sink) = (0, 1);
    let vertex = |v: usize| 2 + v;
    let edge = |i: usize| 2 + n + i;
    let inf = i64::MAX / 4;
    let mut net = Network::new(2 + n + m);
    for (i, e) in g.edges().iter().enumerate() {
        net.add_arc(source, edge(i), q);
        net.add_arc(edge(i), vertex(e.lo()), inf);
        net.add_arc(edge(i), vertex(e.hi()), inf);
    }
    for v in 0..n {
        if forced.contains(&v) {
            net.add_arc(source, vertex(v), inf);
        } else {
            net.add_arc(vertex(v), sink, p);
        }
    }
    let cut = net.max_flow(source, sink);
    let side = net.source_side(source);
    let set: Vec<usize> = (0..n).filter(|&v| side[vertex(v)]).collect();
    // The forced vertices always pay p each.
    (q * m as i64 - cut - 2 * p, set)
}

/// Dinic's algorithm with 64-bit capacities.
struct Network {
    head: Vec<usize>,
    next: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<i64>,
    level: Vec<u32>,
    iter: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl Network {
    fn new(nodes: usize) -> Self {
        Network {
            head: vec![NONE; nodes],
            next: Vec::new(),
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![0; nodes],
            iter: vec![0; nodes],
        }
    }

    fn add_arc(&mut self, a: usize, b: usize, c: i64) {
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
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let mut a = self.head[v];
            while a != NONE {
                let w = self.to[a];
                if self.cap[a] > 0 && self.level[w] == u32::MAX {
                    self.level[w] = self.level[v] + 1;
                    queue.push_back(w);
                }
                a = self.next[a];
            }
        }
        self.level[t] != u32::MAX
    }

    fn dfs(&mut self, v: usize, t: usize, pushed: i64) -> i64 {
        if v == t {
            return pushed;
        }
        while self.iter[v] != NONE {
            let a = self.iter[v];
            let w = self.to[a];
            if self.cap[a] > 0 && self.level[w] == self.level[v] + 1 {
                let got = self.dfs(w, t, pushed.min(self.cap[a]));
                if got > 0 {
                    self.cap[a] -= got;
                    self.cap[a ^ 1] += got;
                    return got;
                }
            }
            self.iter[v] = self.next[a];
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.clone_from(&self.head);
            loop {
                let got = self.dfs(s, t, i64::MAX);
                if got == 0 {
                    break;
                }
                flow += got;
            }
        }
        flow
    }

    /// Nodes reachable from `s` in the residual network.
    fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let mut a = self.head[v];
            while a != NONE {
                let w = self.to[a];
                if self.cap[a] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
                a = self.next[a];
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use proptest::prelude::*;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b).unwrap()
    }

    /// Maximum over all vertex subsets of the induced density.
    fn brute_m2(g: &Graph) -> Rational {
        let n = g.vertex_count();
        let mut best = r(1, 1);
        for mask in 0u32..(1 << n) {
            if mask.count_ones() < 3 {
                continue;
            }
            let w: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let e = g.induced_subgraph(&w).edge_count();
            if e > 0 {
                best = best.max(r(e as i64 - 1, w.len() as i64 - 2));
            }
        }
        best
    }

    /// Strict balance straight from the definition, over edge subsets.
    fn brute_strict(g: &Graph) -> bool {
        let d = two_density(g).unwrap();
        let m = g.edge_count();
        (1u32..(1 << m) - 1).all(|mask| {
            let edges: Vec<Edge> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| g.edges()[i]).collect();
            let mut vs: Vec<usize> = edges.iter().flat_map(|e| [e.lo(), e.hi()]).collect();
            vs.sort_unstable();
            vs.dedup();
            let sub = ratio_of(edges.len(), vs.len());
            sub < d
        // Deleting an isolated vertex keeps every edge and raises the density.
        }) && (0..g.vertex_count()).all(|v| g.degree(v) > 0)
    }

    #[test]
    fn small_values() {
        assert_eq!(two_density(&Graph::complete(2)).unwrap(), r(1, 1));
        assert_eq!(two_density(&Graph::complete(3)).unwrap(), r(2, 1));
        assert_eq!(two_density(&Graph::cycle(5).unwrap()).unwrap(), r(4, 3));
        assert!(two_density(&Graph::empty(2)).is_err());
        assert!(two_density(&Graph::empty(4)).is_err());
        assert_eq!(max_two_density(&Graph::complete(4)).unwrap(), (r(5, 2), vec![0, 1, 2, 3]));
        assert_eq!(max_two_density(&Graph::complete(6)).unwrap().0, r(7, 2));
        assert_eq!(max_two_density(&Graph::path(7)).unwrap().0, r(1, 1));
        assert!(max_two_density(&Graph::empty(3)).is_err());
    }

    #[test]
    fn strict_balance_examples() {
        assert!(is_strictly_two_balanced(&Graph::cycle(5).unwrap()).unwrap());
        assert!(is_strictly_two_balanced(&Graph::complete(4)).unwrap());
        let pendant = Graph::new(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        assert!(!is_strictly_two_balanced(&pendant).unwrap());
        assert!(!is_strictly_two_balanced(&Graph::path(3)).unwrap());
        assert!(is_strictly_two_balanced(&Graph::complete(2)).is_err());
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(r(10, 4).to_string(), "5/2");
        assert_eq!(r(4, 2).to_string(), "2");
        assert_eq!("5/2".parse::<Rational>().unwrap(), r(5, 2));
        assert_eq!("-3".parse::<Rational>().unwrap(), r(-3, 1));
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn witness_attains_m2() {
        let g = Graph::new(7, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (5, 3), (3, 6), (4, 6), (5, 6)])
            .unwrap();
        let rep = density_report(&g).unwrap();
        assert_eq!(rep.m2, r(5, 2));
        assert_eq!(rep.m2_witness_vertices, vec![3, 4, 5, 6]);
        assert_eq!(two_density(&rep.m2_witness).unwrap(), rep.m2);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (3..=max_n).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for a in 0..n {
                    for b in a + 1..n {
                        if bits[k] {
                            edges.push((a, b));
                        }
                        k += 1;
                    }
                }
                Graph::new(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn m2_matches_subset_enumeration(g in arb_graph(9)) {
            prop_assume!(g.edge_count() > 0);
            let (m2, w) = max_two_density(&g).unwrap();
            prop_assert_eq!(m2, brute_m2(&g));
            let sub = g.induced_subgraph(&w);
            prop_assert_eq!(two_density(&sub).unwrap(), m2);
            prop_assert!(m2 >= two_density(&g).unwrap());
        }

        #[test]
        fn strict_balance_matches_definition(g in arb_graph(6)) {
            prop_assume!(g.edge_count() >= 2);
            prop_assert_eq!(is_strictly_two_balanced(&g).unwrap(), brute_strict(&g));
        }

        #[test]
        fn adding_an_edge_never_lowers_m2(g in arb_graph(9), pick in any::<usize>()) {
            prop_assume!(g.edge_count() > 0);
            let n = g.vertex_count();
            let missing: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .filter(|&(a, b)| !g.has_edge(a, b))
                .collect();
            prop_assume!(!missing.is_empty());
            let (a, b) = missing[pick % missing.len()];
            let bigger = g.with_edge(Edge::new(a, b)).unwrap();
            prop_assert!(max_two_density(&bigger).unwrap().0 >= max_two_density(&g).unwrap().0);
        }
    }
}
