//! Deciding `G -> (F)_r` by backtracking over the copy hypergraph.
//!
//! The vertices of the copy hypergraph are host edges and its hyperedges are
//! the edge sets of copies. An `r`-colouring of host edges avoids
//! monochromatic copies iff it properly colours that hypergraph.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::colouring::EdgeColouring;
use crate::copies::{enumerate_copies, CopyEmbedding, CopyMode};
use crate::error::{Error, Result};
use crate::forest::CopySystem;
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrowMode {
    /// Not necessarily induced copies.
    Nni,
    Induced,
    /// Induced copies whose vertex order agrees with the template's.
    Ordered,
}

impl ArrowMode {
    pub fn copy_mode(self) -> (CopyMode, bool) {
        match self {
            ArrowMode::Nni => (CopyMode::Subgraph, false),
            ArrowMode::Induced => (CopyMode::Induced, false),
            ArrowMode::Ordered => (CopyMode::Induced, true),
        }
    }

    fn of_copy(c: &CopyEmbedding) -> Self {
        match (c.mode, c.ordered) {
            (CopyMode::Subgraph, false) => ArrowMode::Nni,
            (CopyMode::Induced, false) => ArrowMode::Induced,
            // Ordered subgraph copies have no mode of their own; report them as ordered.
            (_, true) => ArrowMode::Ordered,
        }
    }
}

impl fmt::Display for ArrowMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArrowMode::Nni => "nni",
            ArrowMode::Induced => "induced",
            ArrowMode::Ordered => "ordered",
        })
    }
}

impl FromStr for ArrowMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nni" => Ok(ArrowMode::Nni),
            "induced" => Ok(ArrowMode::Induced),
            "ordered" => Ok(ArrowMode::Ordered),
            other => Err(Error::invalid(format!("unknown mode {other:?}"))),
        }
    }
}

/// Search caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArrowConfig {
    pub max_copies: usize,
    pub max_nodes: u64,
}

impl Default for ArrowConfig {
    fn default() -> Self {
        ArrowConfig {
            max_copies: 1 << 20,
            max_nodes: 1 << 26,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ArrowingResult {
    pub arrows: bool,
    /// Lexicographically least colouring without a monochromatic copy.
    pub witness: Option<EdgeColouring>,
    pub copies_considered: usize,
    pub mode: ArrowMode,
    pub nodes: u64,
}

/// Whether every `r`-colouring of `host` has a monochromatic copy of `template`.
pub fn arrows(host: &Graph, template: &Graph, r: usize, mode: ArrowMode, config: ArrowConfig) -> Result<ArrowingResult> {
    if template.edge_count() == 0 {
        return Err(Error::precondition("the template needs an edge"));
    }
    let (cm, ordered) = mode.copy_mode();
    let copies = enumerate_copies(host, template, cm, ordered);
    let sets: Vec<Vec<usize>> = copies.iter().map(|c| c.host_edge_indices(template, host)).collect();
    decide(host, sets, r, mode, config)
}

/// As [`arrows`], counting only the copies listed in `system`.
pub fn arrows_system(system: &CopySystem<Graph>, r: usize, config: ArrowConfig) -> Result<ArrowingResult> {
    if system.template().edge_count() == 0 {
        return Err(Error::precondition("the template needs an edge"));
    }
    let mode = system.copies().first().map_or(ArrowMode::Nni, ArrowMode::of_copy);
    let sets = system
        .copies()
        .iter()
        .map(|c| c.host_edge_indices(system.template(), system.host()))
        .collect();
    decide(system.host(), sets, r, mode, config)
}

/// The copies of `template` (in `mode`) that `colouring` leaves monochromatic.
pub fn verify_colouring(host: &Graph, template: &Graph, colouring: &EdgeColouring, mode: ArrowMode) -> Result<Vec<CopyEmbedding>> {
    if colouring.host() != host {
        return Err(Error::invalid("colouring belongs to a different host"));
    }
    let (cm, ordered) = mode.copy_mode();
    let colours = colouring.colours();
    Ok(enumerate_copies(host, template, cm, ordered)
        .into_iter()
        .filter(|c| {
            let idx = c.host_edge_indices(template, host);
            idx.iter().all(|&i| colours[i] == colours[idx[0]])
        })
        .collect())
}

fn decide(host: &Graph, mut sets: Vec<Vec<usize>>, r: usize, mode: ArrowMode, config: ArrowConfig) -> Result<ArrowingResult> {
    if r == 0 {
        return Err(Error::precondition("at least one colour is needed"));
    }
    if sets.len() > config.max_copies {
        return Err(Error::CapExceeded(format!(
            "{} copies exceed the cap of {}",
            sets.len(),
            config.max_copies
        )));
    }
    let copies_considered = sets.len();
    sets.sort();
    sets.dedup();
    // A copy containing another is monochromatic only if the smaller one is.
    let minimal: Vec<Vec<usize>> = sets
        .iter()
        .filter(|s| !sets.iter().any(|t| t.len() < s.len() && t.iter().all(|x| s.binary_search(x).is_ok())))
        .cloned()
        .collect();
    let mut search = Search::new(host.edge_count(), minimal, r, config.max_nodes);
    let found = search.run(0, 0)?;
    let witness = if found {
        Some(EdgeColouring::new(host.clone(), search.colour, r)?)
    } else {
        None
    };
    Ok(ArrowingResult {
        arrows: !found,
        witness,
        copies_considered,
        mode,
        nodes: search.nodes,
    })
}

/// Assigns colours to edges `0, 1, ...` in order, trying small colours
/// first and never skipping past the next unused colour, so the first
/// solution found is the lexicographically least one.
struct Search {
    r: usize,
    sets: Vec<Vec<usize>>,
    /// Sets containing each edge.
    of_edge: Vec<Vec<usize>>,
    colour: Vec<usize>,
    assigned: Vec<usize>,
    /// `count[s * r + c]`: edges of set `s` with colour `c`.
    count: Vec<u32>,
    /// `banned[e * r + c]`: sets that would turn monochromatic if `e` took colour `c`.
    banned: Vec<u32>,
    nodes: u64,
    max_nodes: u64,
}

impl Search {
    fn new(edges: usize, sets: Vec<Vec<usize>>, r: usize, max_nodes: u64) -> Self {
        let mut of_edge = vec![Vec::new(); edges];
        for (s, set) in sets.iter().enumerate() {
            for &e in set {
                of_edge[e].push(s);
            }
        }
        let mut search = Search {
            r,
            assigned: vec![0; sets.len()],
            count: vec![0; sets.len() * r],
            banned: vec![0; edges * r],
            colour: vec![usize::MAX; edges],
            sets,
            of_edge,
            nodes: 0,
            max_nodes,
        };
        // Single-edge copies forbid every colour of their edge.
        for s in 0..search.sets.len() {
            if search.sets[s].len() == 1 {
                let e = search.sets[s][0];
                for c in 0..r {
                    search.banned[e * r + c] += 1;
                }
            }
        }
        search
    }

    fn run(&mut self, e: usize, used: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::budget("arrowing search", self.nodes - 1));
        }
        if e == self.colour.len() {
            return Ok(true);
        }
        let top = (used + 1).min(self.r);
        for c in 0..top {
            if self.banned[e * self.r + c] > 0 {
                continue;
            }
            let (ok, trail) = self.assign(e, c);
            if ok && self.run(e + 1, used.max(c + 1))? {
                return Ok(true);
            }
            self.unassign(e, c, &trail);
        }
        Ok(false)
    }

    /// Colours `e` and bans the last free edge of every set that is one
    /// edge short of being monochromatic. Fails if some edge loses every colour.
    fn assign(&mut self, e: usize, c: usize) -> (bool, Vec<usize>) {
        let r = self.r;
        self.colour[e] = c;
        let mut trail = Vec::new();
        let mut ok = true;
        for k in 0..self.of_edge[e].len() {
            let s = self.of_edge[e][k];
            self.assigned[s] += 1;
            self.count[s * r + c] += 1;
            let size = self.sets[s].len();
            if self.assigned[s] + 1 == size && self.count[s * r + c] as usize == self.assigned[s] {
                let free = *self.sets[s]
                    .iter()
                    .find(|&&u| self.colour[u] == usize::MAX)
                    .expect("one edge of the set is uncoloured");
                self.banned[free * r + c] += 1;
                trail.push(free);
                if (0..r).all(|d| self.banned[free * r + d] > 0) {
                    ok = false;
                }
            }
        }
        (ok, trail)
    }

    fn unassign(&mut self, e: usize, c: usize, trail: &[usize]) {
        let r = self.r;
        for &free in trail {
            self.banned[free * r + c] -= 1;
        }
        for k in 0..self.of_edge[e].len() {
            let s = self.of_edge[e][k];
            self.assigned[s] -= 1;
            self.count[s * r + c] -= 1;
        }
        self.colour[e] = usize::MAX;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::pentagon_triangle_forest;

    /// Tries every 2-colouring with edge 0 fixed to colour 0.
    fn brute_arrows_two(host: &Graph, template: &Graph, mode: ArrowMode) -> bool {
        let (cm, ordered) = mode.copy_mode();
        let masks: Vec<u64> = enumerate_copies(host, template, cm, ordered)
            .iter()
            .map(|c| c.host_edge_indices(template, host).iter().map(|&i| 1u64 << i).sum())
            .collect();
        let m = host.edge_count();
        assert!(m <= 24);
        (0u64..1 << m.saturating_sub(1)).all(|low| {
            let red = low << 1;
            masks.iter().any(|&s| s & red == s || s & red == 0)
        })
    }

    fn cfg() -> ArrowConfig {
        ArrowConfig::default()
    }

    #[test]
    fn classical_triangle_values() {
        let k3 = Graph::complete(3);
        let one = arrows(&k3, &k3, 1, ArrowMode::Nni, cfg()).unwrap();
        assert!(one.arrows && one.witness.is_none());
        let k6 = arrows(&Graph::complete(6), &k3, 2, ArrowMode::Nni, cfg()).unwrap();
        assert!(k6.arrows);
        let k5 = Graph::complete(5);
        let res = arrows(&k5, &k3, 2, ArrowMode::Nni, cfg()).unwrap();
        assert!(!res.arrows);
        let w = res.witness.unwrap();
        assert!(verify_colouring(&k5, &k3, &w, ArrowMode::Nni).unwrap().is_empty());
        assert!(brute_arrows_two(&Graph::complete(6), &k3, ArrowMode::Nni));
        assert!(!brute_arrows_two(&k5, &k3, ArrowMode::Nni));
        // Both colour classes are 5-cycles.
        let red: Vec<_> = (0..10).filter(|&i| w.colours()[i] == 0).map(|i| k5.edges()[i]).collect();
        let red = Graph::new(5, red).unwrap();
        assert!(red.degree(0) == 2 && red.is_connected() && red.edge_count() == 5);
    }

    #[test]
    fn witnesses_are_lexicographically_least() {
        // The least 2-colouring of K_5 without a monochromatic triangle, by brute force.
        let k5 = Graph::complete(5);
        let k3 = Graph::complete(3);
        let copies: Vec<Vec<usize>> = enumerate_copies(&k5, &k3, CopyMode::Subgraph, false)
            .iter()
            .map(|c| c.host_edge_indices(&k3, &k5))
            .collect();
        let least = (0u32..1 << 10)
            .map(|x| (0..10).map(|i| (x >> (9 - i)) as usize & 1).collect::<Vec<_>>())
            .find(|col| copies.iter().all(|s| s.iter().any(|&i| col[i] != col[s[0]])))
            .unwrap();
        let res = arrows(&k5, &k3, 2, ArrowMode::Nni, cfg()).unwrap();
        assert_eq!(res.witness.unwrap().colours(), least.as_slice());
    }

    #[test]
    fn agrees_with_brute_force_on_small_hosts() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let templates = [Graph::complete(3), Graph::path(3), Graph::cycle(4).unwrap()];
        for round in 0..60 {
            let n = 4 + round % 4;
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .filter(|_| rng.gen_bool(0.6))
                .collect();
            let host = Graph::new(n, edges).unwrap();
            if host.edge_count() == 0 {
                continue;
            }
            for t in &templates {
                for mode in [ArrowMode::Nni, ArrowMode::Induced, ArrowMode::Ordered] {
                    let res = arrows(&host, t, 2, mode, cfg()).unwrap();
                    assert_eq!(res.arrows, brute_arrows_two(&host, t, mode), "{host:?} {t:?} {mode}");
                    if let Some(w) = res.witness {
                        assert!(verify_colouring(&host, t, &w, mode).unwrap().is_empty());
                    }
                }
                let nni = arrows(&host, t, 2, ArrowMode::Nni, cfg()).unwrap().arrows;
                let ind = arrows(&host, t, 2, ArrowMode::Induced, cfg()).unwrap().arrows;
                assert!(!ind || nni);
            }
        }
    }

    #[test]
    fn systems() {
        let k6 = Graph::complete(6);
        let k3 = Graph::complete(3);
        let all = enumerate_copies(&k6, &k3, CopyMode::Subgraph, false);
        let full = CopySystem::new(k6.clone(), k3.clone(), all.clone()).unwrap();
        assert!(arrows_system(&full, 2, cfg()).unwrap().arrows);
        let empty = CopySystem::new(k6.clone(), k3.clone(), vec![]).unwrap();
        assert!(!arrows_system(&empty, 1, cfg()).unwrap().arrows);
        let star: Vec<_> = all.into_iter().filter(|c| c.images.contains(&0)).collect();
        assert_eq!(star.len(), 10);
        let star = CopySystem::new(k6, k3, star).unwrap();
        let res = arrows_system(&star, 2, cfg()).unwrap();
        assert!(!res.arrows);
        let forest = pentagon_triangle_forest();
        assert!(!arrows_system(&forest, 2, cfg()).unwrap().arrows);
    }

    #[test]
    fn budgets_are_reported() {
        let tight = ArrowConfig { max_copies: 1 << 20, max_nodes: 3 };
        let err = arrows(&Graph::complete(6), &Graph::complete(3), 2, ArrowMode::Nni, tight).unwrap_err();
        assert!(err.is_budget());
        let capped = ArrowConfig { max_copies: 5, max_nodes: 1 << 20 };
        assert!(arrows(&Graph::complete(6), &Graph::complete(3), 2, ArrowMode::Nni, capped).is_err());
    }
}
