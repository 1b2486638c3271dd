//! Systems of copies and forests of copies.
//!
//! A set of copies is a forest if it can be enumerated so that each copy
//! meets the union of the earlier ones in nothing, in one vertex, or in
//! exactly the vertex set of an edge that belongs to the new copy and to
//! some earlier copy. The same definition is used for linear hypergraphs.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::copies::{CopyEmbedding, CopyMode, Footprint};
use crate::density::two_density;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hypergraph::{Hypergraph, LinearHypergraph};
use crate::inseparable::witness_of;
use crate::structure::Structure;

/// Default number of search states for exact forest recognition.
pub const DEFAULT_FOREST_BUDGET: u64 = 1 << 22;

/// Copies of one template inside one host, pairwise distinct as subgraphs.
#[derive(Debug, Clone)]
pub struct CopySystem<S: Structure> {
    host: S,
    template: S,
    copies: Vec<CopyEmbedding>,
    footprints: Vec<Footprint>,
}

impl<S: Structure> CopySystem<S> {
    pub fn new(host: S, template: S, copies: Vec<CopyEmbedding>) -> Result<Self> {
        let mut footprints = Vec::with_capacity(copies.len());
        let mut seen = HashSet::new();
        for (i, c) in copies.iter().enumerate() {
            c.validate(&host, &template)
                .map_err(|e| Error::invalid(format!("copy {i}: {e}")))?;
            let fp = c.footprint(&template);
            if !seen.insert(fp.clone()) {
                return Err(Error::invalid(format!("copy {i} repeats an earlier copy")));
            }
            footprints.push(fp);
        }
        Ok(CopySystem {
            host,
            template,
            copies,
            footprints,
        })
    }

    pub fn host(&self) -> &S {
        &self.host
    }

    pub fn template(&self) -> &S {
        &self.template
    }

    pub fn copies(&self) -> &[CopyEmbedding] {
        &self.copies
    }

    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn footprint(&self, i: usize) -> &Footprint {
        &self.footprints[i]
    }

    /// The same host and template with only the copies at `indices`.
    pub fn subsystem(&self, indices: &[usize]) -> Result<Self> {
        let copies = indices
            .iter()
            .map(|&i| {
                self.copies
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::invalid(format!("no copy {i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        CopySystem::new(self.host.clone(), self.template.clone(), copies)
    }

    /// Everything covered by some copy, relabelled to `0..len` in host order.
    pub fn union(&self) -> Union<S> {
        let mut vertices: Vec<usize> = self.footprints.iter().flat_map(|f| f.vertices.iter().copied()).collect();
        vertices.sort_unstable();
        vertices.dedup();
        let mut pos = HashMap::new();
        for (i, &v) in vertices.iter().enumerate() {
            pos.insert(v, i);
        }
        let mut tuples: Vec<Vec<usize>> = self
            .footprints
            .iter()
            .flat_map(|f| f.edges.iter())
            .map(|t| t.iter().map(|v| pos[v]).collect())
            .collect();
        tuples.sort_unstable();
        tuples.dedup();
        let structure = S::from_tuples(vertices.len(), self.template.arity(), tuples)
            .expect("union of valid copies is a valid structure");
        Union { structure, vertices }
    }
}

/// The union of a copy system, with `vertices[i]` the host id of vertex `i`.
#[derive(Debug, Clone)]
pub struct Union<S> {
    pub structure: S,
    pub vertices: Vec<usize>,
}

/// How copy `ordering[j]` meets the union of the copies before it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", content = "at", rename_all = "kebab-case")]
pub enum Junction {
    Empty,
    Vertex(usize),
    Edge(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForestCertificate {
    /// Indices into the system's copies.
    pub ordering: Vec<usize>,
    /// `junctions[j]` belongs to `ordering[j + 1]`; the first copy has none.
    pub junctions: Vec<Junction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ForestVerdict {
    Forest(ForestCertificate),
    /// Certified: no enumeration works.
    NotForest,
    /// The exact search ran out of budget and the elimination heuristic failed.
    Unknown { explored: u64 },
}

impl ForestVerdict {
    pub fn is_forest(&self) -> bool {
        matches!(self, ForestVerdict::Forest(_))
    }

    pub fn certificate(&self) -> Option<&ForestCertificate> {
        match self {
            ForestVerdict::Forest(c) => Some(c),
            _ => None,
        }
    }
}

/// Union bookkeeping: how many placed copies cover each vertex and edge.
struct Cover<'a, S: Structure> {
    system: &'a CopySystem<S>,
    vertex_uses: Vec<u32>,
    edge_uses: HashMap<&'a [usize], u32>,
    /// For each copy, the other copies it shares vertices with and the shared vertices.
    overlaps: Vec<Vec<(usize, Vec<usize>)>>,
    /// The copies containing each edge.
    edge_owners: HashMap<&'a [usize], Vec<usize>>,
}

impl<'a, S: Structure> Cover<'a, S> {
    fn new(system: &'a CopySystem<S>) -> Self {
        Cover {
            system,
            vertex_uses: vec![0; system.host.vertex_count()],
            edge_uses: HashMap::new(),
            overlaps: overlaps(system),
            edge_owners: {
                let mut owners: HashMap<&'a [usize], Vec<usize>> = HashMap::new();
                for (i, fp) in system.footprints.iter().enumerate() {
                    for e in &fp.edges {
                        owners.entry(e.as_slice()).or_default().push(i);
                    }
                }
                owners
            },
        }
    }

    fn meet(&self, i: usize) -> Vec<usize> {
        let fp = &self.system.footprints[i];
        fp.vertices.iter().copied().filter(|&v| self.vertex_uses[v] > 0).collect()
    }

    /// Whether `b` could still be placed after the copy it shares `shared`
    /// with, judging only by the vertices `b` is then known to meet.
    fn can_follow(&self, placed: u128, b: usize, meet_b: &[usize], shared: &[usize]) -> bool {
        let k = self.system.template.arity();
        let mut m: Vec<usize> = meet_b.iter().chain(shared).copied().collect();
        m.sort_unstable();
        m.dedup();
        if m.len() < k {
            return true;
        }
        // The meet must be an own edge, covered by then: already covered
        // or owned by some other copy still to come.
        m.len() == k
            && self.system.footprints[b].edges.binary_search(&m).is_ok()
            && (self.edge_uses.contains_key(m.as_slice())
                || self.edge_owners[m.as_slice()].iter().any(|&w| w != b && placed >> w & 1 == 0))
    }

    /// Some unplaced pair that cannot be placed in either order.
    fn stuck_pair(&self, placed: u128) -> bool {
        let c = self.system.len();
        let meets: Vec<Option<Vec<usize>>> =
            (0..c).map(|i| (placed >> i & 1 == 0).then(|| self.meet(i))).collect();
        for b in 0..c {
            let Some(meet_b) = &meets[b] else { continue };
            for (a, shared) in &self.overlaps[b] {
                let a = *a;
                if a > b {
                    let Some(meet_a) = &meets[a] else { continue };
                    if !self.can_follow(placed, b, meet_b, shared) && !self.can_follow(placed, a, meet_a, shared) {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// The junction of copy `i` against the current union, if admissible.
    fn junction(&self, i: usize) -> Option<Junction> {
        let fp = &self.system.footprints[i];
        let meet: Vec<usize> = fp
            .vertices
            .iter()
            .copied()
            .filter(|&v| self.vertex_uses[v] > 0)
            .collect();
        match meet.len() {
            0 => Some(Junction::Empty),
            1 => Some(Junction::Vertex(meet[0])),
            len if len == self.system.template.arity() => {
                let own = fp.edges.binary_search(&meet).is_ok();
                let earlier = self.edge_uses.contains_key(meet.as_slice());
                (own && earlier).then_some(Junction::Edge(meet))
            }
            _ => None,
        }
    }

    /// True if copy `i` can never be placed after the current union.
    ///
    /// Its meet with the union only grows. Once the meet has at least edge
    /// size it must be a covered edge of the copy; if it is an uncovered own
    /// edge, any copy covering that edge later would meet the union in it
    /// while it is still uncovered, so it stays uncovered forever.
    fn hopeless(&self, i: usize) -> bool {
        let fp = &self.system.footprints[i];
        let k = self.system.template.arity();
        let meet = fp.vertices.iter().filter(|&&v| self.vertex_uses[v] > 0).count();
        meet >= k && self.junction(i).is_none()
    }

    fn place(&mut self, i: usize) {
        let fp = &self.system.footprints[i];
        for &v in &fp.vertices {
            self.vertex_uses[v] += 1;
        }
        for e in &fp.edges {
            *self.edge_uses.entry(e.as_slice()).or_insert(0) += 1;
        }
    }

    fn remove(&mut self, i: usize) {
        let fp = &self.system.footprints[i];
        for &v in &fp.vertices {
            self.vertex_uses[v] -= 1;
        }
        for e in &fp.edges {
            let c = self.edge_uses.get_mut(e.as_slice()).expect("placed edge");
            *c -= 1;
            if *c == 0 {
                self.edge_uses.remove(e.as_slice());
            }
        }
    }
}

fn overlaps<S: Structure>(system: &CopySystem<S>) -> Vec<Vec<(usize, Vec<usize>)>> {
    let c = system.len();
    let mut by_vertex: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..c {
        for &v in &system.footprints[i].vertices {
            by_vertex.entry(v).or_default().push(i);
        }
    }
    let mut out = vec![Vec::new(); c];
    for i in 0..c {
        let mut others: Vec<usize> = system.footprints[i]
            .vertices
            .iter()
            .flat_map(|v| by_vertex[v].iter().copied())
            .filter(|&j| j != i)
            .collect();
        others.sort_unstable();
        others.dedup();
        for j in others {
            let shared: Vec<usize> = system.footprints[i]
                .vertices
                .iter()
                .copied()
                .filter(|v| system.footprints[j].vertices.binary_search(v).is_ok())
                .collect();
            out[i].push((j, shared));
        }
    }
    out
}

/// Replays an enumeration and returns its junctions, failing at the first
/// copy that meets its predecessors in a forbidden way.
pub fn replay_ordering<S: Structure>(system: &CopySystem<S>, ordering: &[usize]) -> Result<Vec<Junction>> {
    check_permutation(system.len(), ordering)?;
    let mut cover = Cover::new(system);
    let mut junctions = Vec::new();
    for (j, &i) in ordering.iter().enumerate() {
        if j > 0 {
            match cover.junction(i) {
                Some(q) => junctions.push(q),
                None => {
                    return Err(Error::invalid(format!(
                        "copy {i} at position {j} meets its predecessors in a forbidden set"
                    )))
                }
            }
        }
        cover.place(i);
    }
    Ok(junctions)
}

/// Checks a certificate against the system by direct replay.
pub fn verify_certificate<S: Structure>(system: &CopySystem<S>, cert: &ForestCertificate) -> Result<()> {
    let junctions = replay_ordering(system, &cert.ordering)?;
    if junctions != cert.junctions {
        return Err(Error::invalid("recorded junctions differ from the replay"));
    }
    Ok(())
}

fn check_permutation(len: usize, ordering: &[usize]) -> Result<()> {
    let mut seen = vec![false; len];
    if ordering.len() != len {
        return Err(Error::invalid(format!(
            "ordering has {} entries for {len} copies",
            ordering.len()
        )));
    }
    for &i in ordering {
        if i >= len || seen[i] {
            return Err(Error::invalid(format!("ordering is not a permutation (entry {i})")));
        }
        seen[i] = true;
    }
    Ok(())
}

pub fn is_forest_of_copies<S: Structure>(system: &CopySystem<S>) -> ForestVerdict {
    recognise_forest(system, DEFAULT_FOREST_BUDGET)
}

/// Decides whether `system` is a forest of copies.
///
/// The exact search walks placed-copy sets depth first, trying the smallest
/// admissible copy first and remembering dead sets, so the certificate is the
/// lexicographically least valid enumeration. If more than `budget` sets
/// would be visited it falls back to reverse elimination, whose failures are
/// reported as unknown.
pub fn recognise_forest<S: Structure>(system: &CopySystem<S>, budget: u64) -> ForestVerdict {
    let c = system.len();
    if c == 0 {
        return ForestVerdict::Forest(ForestCertificate {
            ordering: Vec::new(),
            junctions: Vec::new(),
        });
    }
    if c <= 128 {
        let mut search = OrderSearch {
            cover: Cover::new(system),
            dead: HashSet::new(),
            order: Vec::new(),
            explored: 0,
            budget,
        };
        match search.run(0) {
            Some(true) => {
                let ordering = search.order.clone();
                let junctions = replay_ordering(system, &ordering).expect("search ordering replays");
                return ForestVerdict::Forest(ForestCertificate { ordering, junctions });
            }
            Some(false) => return ForestVerdict::NotForest,
            None => {
                let explored = search.explored;
                return match eliminate(system) {
                    Some(cert) => ForestVerdict::Forest(cert),
                    None => ForestVerdict::Unknown { explored },
                };
            }
        }
    }
    match eliminate(system) {
        Some(cert) => ForestVerdict::Forest(cert),
        None => ForestVerdict::Unknown { explored: 0 },
    }
}

struct OrderSearch<'a, S: Structure> {
    cover: Cover<'a, S>,
    dead: HashSet<u128>,
    order: Vec<usize>,
    explored: u64,
    budget: u64,
}

impl<'a, S: Structure> OrderSearch<'a, S> {
    /// `None` when the budget ran out.
    fn run(&mut self, placed: u128) -> Option<bool> {
        let c = self.cover.system.len();
        if self.order.len() == c {
            return Some(true);
        }
        if self.dead.contains(&placed) {
            return Some(false);
        }
        self.explored += 1;
        if self.explored > self.budget {
            return None;
        }
        if (0..c).any(|i| placed >> i & 1 == 0 && self.cover.hopeless(i)) || self.cover.stuck_pair(placed) {
            self.dead.insert(placed);
            return Some(false);
        }
        for i in 0..c {
            if placed >> i & 1 == 1 {
                continue;
            }
            if !self.order.is_empty() && self.cover.junction(i).is_none() {
                continue;
            }
            self.cover.place(i);
            self.order.push(i);
            let res = self.run(placed | 1 << i);
            if res != Some(false) {
                return res;
            }
            self.order.pop();
            self.cover.remove(i);
        }
        self.dead.insert(placed);
        Some(false)
    }
}

/// Reverse elimination: repeatedly drop the smallest copy that could come last.
fn eliminate<S: Structure>(system: &CopySystem<S>) -> Option<ForestCertificate> {
    let c = system.len();
    let mut cover = Cover::new(system);
    (0..c).for_each(|i| cover.place(i));
    let mut alive = vec![true; c];
    let mut reversed = Vec::new();
    for _ in 0..c {
        let pick = (0..c).find(|&i| {
            if !alive[i] {
                return false;
            }
            cover.remove(i);
            let ok = reversed.len() + 1 == c || cover.junction(i).is_some();
            cover.place(i);
            ok
        })?;
        cover.remove(pick);
        alive[pick] = false;
        reversed.push(pick);
    }
    reversed.reverse();
    let junctions = replay_ordering(system, &reversed).ok()?;
    Some(ForestCertificate {
        ordering: reversed,
        junctions,
    })
}

/// Whether every junction of `ordering` after the first copy is an edge.
pub fn is_edgy_forest<S: Structure>(system: &CopySystem<S>, ordering: &[usize]) -> Result<bool> {
    check_permutation(system.len(), ordering)?;
    Ok(match replay_ordering(system, ordering) {
        Ok(junctions) => junctions.iter().all(|q| matches!(q, Junction::Edge(_))),
        Err(_) => false,
    })
}

/// A cyclic sequence of `len` copies of `template` where consecutive copies
/// share exactly one edge and no other two copies share an edge.
///
/// Copy `i + 1` is glued onto copy `i` by identifying one designated edge of
/// the template with another; the last copy is glued back onto the first.
/// The designated pair is the lexicographically first (with the straight
/// orientation before the flipped one) for which the result has exactly this
/// intersection pattern.
pub fn build_cycle_of_copies(template: &Graph, len: usize) -> Result<CopySystem<Graph>> {
    if len < 3 {
        return Err(Error::precondition(format!("a cycle of copies needs at least 3 copies, got {len}")));
    }
    if template.edge_count() == 0 || two_density(template)?.ratio() <= 1.into() {
        return Err(Error::precondition("cycles of copies need a template with 2-density above 1"));
    }
    let edges = template.edges();
    for (ai, &a) in edges.iter().enumerate() {
        for (bi, &b) in edges.iter().enumerate() {
            if ai == bi {
                continue;
            }
            for flipped in [false, true] {
                if let Some(images) = glue_cycle(template, [a.lo(), a.hi()], [b.lo(), b.hi()], flipped, len) {
                    let n = images.iter().flatten().max().map_or(0, |&m| m + 1);
                    let mut host_edges = Vec::new();
                    for img in &images {
                        for e in edges {
                            host_edges.push((img[e.lo()], img[e.hi()]));
                        }
                    }
                    let host = Graph::new_dedup(n, host_edges)?;
                    let copies = images
                        .into_iter()
                        .map(|img| CopyEmbedding::new(img, CopyMode::Subgraph, false))
                        .collect();
                    let system = CopySystem::new(host, template.clone(), copies)?;
                    if has_cycle_pattern(&system) {
                        return Ok(system);
                    }
                }
            }
        }
    }
    Err(Error::precondition(
        "no choice of gluing edges closes the cycle without extra intersections",
    ))
}

/// Vertex images for each copy, or `None` if the closing step is inconsistent.
fn glue_cycle(template: &Graph, a: [usize; 2], b: [usize; 2], flipped: bool, len: usize) -> Option<Vec<Vec<usize>>> {
    let v = template.vertex_count();
    let mut next_id = 0;
    let mut out: Vec<Vec<usize>> = Vec::with_capacity(len);
    for i in 0..len {
        let mut img: Vec<Option<usize>> = vec![None; v];
        if i > 0 {
            let prev = &out[i - 1];
            let (s0, s1) = (prev[b[0]], prev[b[1]]);
            let (t0, t1) = if flipped { (s1, s0) } else { (s0, s1) };
            img[a[0]] = Some(t0);
            img[a[1]] = Some(t1);
        }
        if i == len - 1 {
            let first = &out[0];
            // Copy 0's designated edge a must be this copy's edge b, glued the same way.
            let (t0, t1) = (first[a[0]], first[a[1]]);
            let (s0, s1) = if flipped { (t1, t0) } else { (t0, t1) };
            for (x, want) in [(b[0], s0), (b[1], s1)] {
                match img[x] {
                    Some(have) if have != want => return None,
                    _ => img[x] = Some(want),
                }
            }
        }
        let mut full = Vec::with_capacity(v);
        for slot in img {
            full.push(slot.unwrap_or_else(|| {
                next_id += 1;
                next_id - 1
            }));
        }
        let mut sorted = full.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        out.push(full);
    }
    Some(out)
}

fn has_cycle_pattern(system: &CopySystem<Graph>) -> bool {
    let len = system.len();
    let sets: Vec<HashSet<&Vec<usize>>> = (0..len).map(|i| system.footprint(i).edges.iter().collect()).collect();
    for i in 0..len {
        for j in i + 1..len {
            let shared = sets[i].intersection(&sets[j]).count();
            let adjacent = j == i + 1 || (i == 0 && j == len - 1);
            if shared != usize::from(adjacent) {
                return false;
            }
        }
    }
    let mut uses: HashMap<&Vec<usize>, usize> = HashMap::new();
    for s in &sets {
        for e in s {
            *uses.entry(e).or_insert(0) += 1;
        }
    }
    uses.values().all(|&u| u <= 2)
}

/// Index of the first copy in which the sub-hypergraph of the union induced
/// on `vertices` (host ids) is itself induced.
///
/// `vertices` must induce an (e,v)-inseparable hypergraph; finding no such copy
/// means the locality guarantee for forests of linear hypergraphs failed.
pub fn locate_inseparable_subgraph(forest: &CopySystem<Hypergraph>, vertices: &[usize]) -> Result<usize> {
    if !forest.host().is_linear() {
        return Err(Error::precondition("host is not linear"));
    }
    if !is_forest_of_copies(forest).is_forest() {
        return Err(Error::precondition("system is not a certified forest of copies"));
    }
    let mut w = vertices.to_vec();
    w.sort_unstable();
    w.dedup();
    let inside: HashSet<usize> = w.iter().copied().collect();
    let covered: HashSet<usize> = (0..forest.len()).flat_map(|i| forest.footprint(i).vertices.clone()).collect();
    if let Some(v) = w.iter().find(|v| !covered.contains(v)) {
        return Err(Error::precondition(format!("vertex {v} is not in the union")));
    }
    let mut inner: Vec<&Vec<usize>> = (0..forest.len())
        .flat_map(|i| forest.footprint(i).edges.iter())
        .filter(|e| e.iter().all(|v| inside.contains(v)))
        .collect();
    inner.sort_unstable();
    inner.dedup();
    let pos: HashMap<usize, usize> = w.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let j = Hypergraph::new(
        w.len(),
        forest.template().uniformity(),
        inner.iter().map(|e| e.iter().map(|v| pos[v]).collect::<Vec<_>>()),
    )?;
    if let Some(reason) = witness_of(&j) {
        return Err(Error::precondition(format!("subgraph is not inseparable: {reason:?}")));
    }
    for i in 0..forest.len() {
        let fp = forest.footprint(i);
        if w.iter().all(|v| fp.vertices.binary_search(v).is_ok()) && inner.iter().all(|e| fp.edges.binary_search(e).is_ok())
        {
            return Ok(i);
        }
    }
    Err(Error::LemmaViolation(format!(
        "inseparable subgraph on {w:?} lies in no single copy"
    )))
}

/// Every vertex set inducing an (e,v)-inseparable sub-hypergraph of `h`,
/// sorted.
///
/// If deleting a small set `S` (a vertex, two vertices on no common edge, or
/// the vertices of an edge when `h` is linear) disconnects the candidate
/// region, every answer minus `S` sits in one component, so the search
/// recurses into each component plus `S`. A region without such a set is
/// itself an answer; its proper subsets are split by the first missing vertex.
/// Vertices with fewer than two edges inside the region are dropped first.
/// `cap` bounds the number of regions visited.
pub fn inseparable_induced_sets(h: &Hypergraph, cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = h.vertex_count();
    if n > 64 {
        return Err(Error::CapExceeded(format!("{n} vertices, at most 64 supported")));
    }
    let masks: Vec<u64> = h.edges().iter().map(|e| e.iter().fold(0, |m, &v| m | 1 << v)).collect();
    let mut state = SetSearch {
        h,
        masks: &masks,
        linear: h.is_linear(),
        found: BTreeSet::new(),
        cap,
        visited: 0,
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    state.run(0, all)?;
    Ok(state.found.into_iter().map(|m| bits(m).collect()).collect())
}

struct SetSearch<'a> {
    h: &'a Hypergraph,
    masks: &'a [u64],
    linear: bool,
    found: BTreeSet<u64>,
    cap: usize,
    visited: usize,
}

impl<'a> SetSearch<'a> {
    /// Records every answer `w` with `chosen ⊆ w ⊆ region`.
    fn run(&mut self, chosen: u64, region: u64) -> Result<()> {
        self.visited += 1;
        if self.visited > self.cap {
            return Err(Error::CapExceeded(format!("more than {} search regions", self.cap)));
        }
        let Some(region) = self.core(chosen, region) else {
            return Ok(());
        };
        if region == 0 {
            return Ok(());
        }
        if let Some(cut) = self.separator(region) {
            for comp in self.components(region & !cut) {
                let sub = comp | cut;
                if chosen & !sub == 0 {
                    self.run(chosen, sub)?;
                }
            }
            return Ok(());
        }
        if !self.found.contains(&region) {
            let w: Vec<usize> = bits(region).collect();
            if witness_of(&self.h.induced(&w)).is_none() {
                self.found.insert(region);
            }
        }
        let mut keep = chosen;
        for v in bits(region & !chosen) {
            self.run(keep, region & !(1 << v))?;
            keep |= 1 << v;
        }
        Ok(())
    }

    /// Largest subset of `region` in which every vertex has two edges inside,
    /// or `None` if that loses a chosen vertex.
    fn core(&self, chosen: u64, mut region: u64) -> Option<u64> {
        loop {
            let mut drop = 0u64;
            for v in bits(region) {
                let d = self.h.incident(v).iter().filter(|&&id| self.masks[id] & !region == 0).count();
                if d < 2 {
                    drop |= 1 << v;
                }
            }
            if drop & chosen != 0 {
                return None;
            }
            if drop == 0 {
                return Some(region);
            }
            region &= !drop;
        }
    }

    /// Vertex sets of the components of the sub-hypergraph induced on `region`.
    fn components(&self, region: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut left = region;
        while left != 0 {
            let mut reach = left & left.wrapping_neg();
            loop {
                let mut grown = reach;
                for &m in self.masks {
                    if m & !region == 0 && m & reach != 0 {
                        grown |= m;
                    }
                }
                if grown == reach {
                    break;
                }
                reach = grown;
            }
            out.push(reach);
            left &= !reach;
        }
        out
    }

    fn separates(&self, region: u64, cut: u64) -> bool {
        self.components(region & !cut).len() > 1
    }

    fn separator(&self, region: u64) -> Option<u64> {
        if self.components(region).len() > 1 {
            return Some(0);
        }
        let k = self.h.uniformity();
        let inside: Vec<u64> = self.masks.iter().copied().filter(|m| m & !region == 0).collect();
        let vs: Vec<usize> = bits(region).collect();
        for &v in &vs {
            if self.separates(region, 1 << v) {
                return Some(1 << v);
            }
        }
        if k >= 3 {
            for (i, &a) in vs.iter().enumerate() {
                for &b in &vs[i + 1..] {
                    let pair = 1u64 << a | 1 << b;
                    if inside.iter().all(|m| m & pair != pair) && self.separates(region, pair) {
                        return Some(pair);
                    }
                }
            }
        }
        if self.linear {
            for &m in &inside {
                if self.separates(region, m) {
                    return Some(m);
                }
            }
        }
        None
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

/// Relative weights of the three junction types in [`random_forest`].
#[derive(Debug, Clone, Copy)]
pub struct JunctionWeights {
    pub empty: u32,
    pub vertex: u32,
    pub edge: u32,
}

impl Default for JunctionWeights {
    fn default() -> Self {
        JunctionWeights {
            empty: 1,
            vertex: 2,
            edge: 3,
        }
    }
}

/// A random forest of `count` copies of `template`, host = union, with the
/// copy list shuffled so that recognition has work to do.
///
/// Every new copy is attached to the union so far by a random junction; all
/// its other vertices are fresh, so the generation order certifies the forest.
pub fn random_forest<S: Structure, R: Rng>(
    template: &S,
    count: usize,
    weights: JunctionWeights,
    rng: &mut R,
) -> Result<CopySystem<S>> {
    let v = template.vertex_count();
    let k = template.arity();
    let t_edges = template.edge_tuples();
    if t_edges.is_empty() {
        return Err(Error::precondition("template has no edges"));
    }
    let mut images: Vec<Vec<usize>> = Vec::with_capacity(count);
    let mut union_edges: Vec<Vec<usize>> = Vec::new();
    let mut seen_edges = HashSet::new();
    let mut next_id = 0usize;
    for i in 0..count {
        let mut img: Vec<Option<usize>> = vec![None; v];
        if i > 0 {
            let mut options = vec![(0u8, weights.empty), (1, weights.vertex)];
            // Gluing along the whole template would repeat a copy.
            if v > k {
                options.push((2, weights.edge));
            }
            let total: u32 = options.iter().map(|o| o.1).sum();
            let mut roll = if total == 0 { 0 } else { rng.gen_range(0..total) };
            let mut kind = 0;
            for (o, w) in options {
                if roll < w {
                    kind = o;
                    break;
                }
                roll -= w;
            }
            match kind {
                1 => {
                    let host_v = rng.gen_range(0..next_id);
                    img[rng.gen_range(0..v)] = Some(host_v);
                }
                2 => {
                    let host_e = union_edges.choose(rng).expect("union has edges").clone();
                    let mut t = t_edges.choose(rng).expect("template has edges").clone();
                    t.shuffle(rng);
                    for (tv, hv) in t.into_iter().zip(host_e) {
                        img[tv] = Some(hv);
                    }
                }
                _ => {}
            }
        }
        let full: Vec<usize> = img
            .into_iter()
            .map(|s| {
                s.unwrap_or_else(|| {
                    next_id += 1;
                    next_id - 1
                })
            })
            .collect();
        for t in &t_edges {
            let mut e: Vec<usize> = t.iter().map(|&x| full[x]).collect();
            e.sort_unstable();
            if seen_edges.insert(e.clone()) {
                union_edges.push(e);
            }
        }
        images.push(full);
    }
    images.shuffle(rng);
    union_edges.sort();
    let host = S::from_tuples(next_id, k, union_edges)?;
    let copies = images
        .into_iter()
        .map(|img| CopyEmbedding::new(img, CopyMode::Subgraph, false))
        .collect();
    CopySystem::new(host, template.clone(), copies)
}

/// Triangles around a pentagon, each on one pentagon edge and one outer vertex.
///
/// Vertices `0..5` form the pentagon; triangle `i` uses pentagon edge
/// `{i, i+1}` and an outer vertex. Ten vertices and fifteen edges.
pub fn pentagon_triangle_cycle() -> CopySystem<Graph> {
    triangle_system(&[
        [0, 1, 6],
        [1, 2, 7],
        [2, 3, 8],
        [3, 4, 9],
        [4, 0, 5],
    ])
}

/// The pentagon cycle of triangles plus the chords `0-2` and `0-3` and three
/// more triangles triangulating the pentagon: eight triangles, 17 edges.
pub fn pentagon_triangle_forest() -> CopySystem<Graph> {
    triangle_system(&[
        [0, 1, 6],
        [1, 2, 7],
        [2, 3, 8],
        [3, 4, 9],
        [4, 0, 5],
        [0, 3, 2],
        [0, 2, 1],
        [0, 4, 3],
    ])
}

fn triangle_system(triangles: &[[usize; 3]]) -> CopySystem<Graph> {
    let mut edges = Vec::new();
    for t in triangles {
        edges.extend([(t[0], t[1]), (t[1], t[2]), (t[0], t[2])]);
    }
    let host = Graph::new_dedup(10, edges).expect("triangle edges are simple");
    let copies = triangles
        .iter()
        .map(|t| CopyEmbedding::new(t.to_vec(), CopyMode::Subgraph, false))
        .collect();
    CopySystem::new(host, Graph::complete(3), copies).expect("triangles are copies")
}

/// Convenience wrapper for forests of a linear hypergraph template.
pub fn random_linear_forest<R: Rng>(
    template: &LinearHypergraph,
    count: usize,
    weights: JunctionWeights,
    rng: &mut R,
) -> Result<CopySystem<Hypergraph>> {
    let system = random_forest(template.hypergraph(), count, weights, rng)?;
    if !system.host().is_linear() {
        return Err(Error::LemmaViolation("forest of linear hypergraphs is not linear".into()));
    }
    Ok(system)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copies::enumerate_copies;
    use crate::inseparable::is_ev_inseparable;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Tries every enumeration; only for tiny systems.
    fn brute_forest<S: Structure>(system: &CopySystem<S>) -> bool {
        fn permute<S: Structure>(system: &CopySystem<S>, order: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            if order.len() == system.len() {
                return replay_ordering(system, order).is_ok();
            }
            for i in 0..system.len() {
                if !used[i] {
                    used[i] = true;
                    order.push(i);
                    if permute(system, order, used) {
                        return true;
                    }
                    order.pop();
                    used[i] = false;
                }
            }
            false
        }
        permute(system, &mut Vec::new(), &mut vec![false; system.len()])
    }

    fn triangles(host: &Graph) -> CopySystem<Graph> {
        let copies = enumerate_copies(host, &Graph::complete(3), CopyMode::Subgraph, false);
        CopySystem::new(host.clone(), Graph::complete(3), copies).unwrap()
    }

    #[test]
    fn figure_systems() {
        let cycle = pentagon_triangle_cycle();
        let u = cycle.union().structure;
        assert_eq!((u.vertex_count(), u.edge_count()), (10, 15));
        assert_eq!(enumerate_copies(&u, &Graph::complete(3), CopyMode::Subgraph, false).len(), 5);
        assert_eq!(is_forest_of_copies(&cycle), ForestVerdict::NotForest);
        assert!(!brute_forest(&cycle));

        let forest = pentagon_triangle_forest();
        let u = forest.union().structure;
        assert_eq!((u.vertex_count(), u.edge_count()), (10, 17));
        let verdict = is_forest_of_copies(&forest);
        let cert = verdict.certificate().expect("eight triangles form a forest");
        verify_certificate(&forest, cert).unwrap();
        assert!(brute_forest(&forest));
    }

    #[test]
    fn books_and_singletons() {
        let book = Graph::new(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        let s = triangles(&book);
        assert_eq!(s.len(), 2);
        let u = s.union().structure;
        assert_eq!((u.vertex_count(), u.edge_count()), (4, 5));
        assert!(is_edgy_forest(&s, &[0, 1]).unwrap());
        assert!(is_edgy_forest(&s, &[1, 0]).unwrap());
        assert!(is_edgy_forest(&s, &[0, 0]).is_err());
        let single = s.subsystem(&[1]).unwrap();
        assert!(is_forest_of_copies(&single).is_forest());

        let apart = triangles(&Graph::complete(3).disjoint_union(&Graph::complete(3)));
        assert!(is_forest_of_copies(&apart).is_forest());
        assert!(!is_edgy_forest(&apart, &[0, 1]).unwrap());
        let bowtie = Graph::new(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
        let s = triangles(&bowtie);
        assert!(is_forest_of_copies(&s).is_forest());
        assert!(!is_edgy_forest(&s, &[0, 1]).unwrap());
    }

    #[test]
    fn k4_triangles_are_not_a_forest() {
        // Any third triangle of K4 meets the other two in three vertices.
        let s = triangles(&Graph::complete(4));
        assert_eq!(is_forest_of_copies(&s), ForestVerdict::NotForest);
        let two = s.subsystem(&[0, 1]).unwrap();
        assert!(is_forest_of_copies(&two).is_forest());
    }

    #[test]
    fn recognition_agrees_with_all_orderings() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for round in 0..60 {
            // Random subsets of triangles of small dense graphs.
            let n = 5 + round % 3;
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.6) {
                        edges.push((a, b));
                    }
                }
            }
            let host = Graph::new(n, edges).unwrap();
            let all = triangles(&host);
            let mut pick: Vec<usize> = (0..all.len()).filter(|_| rng.gen_bool(0.5)).collect();
            pick.truncate(7);
            let s = all.subsystem(&pick).unwrap();
            let verdict = is_forest_of_copies(&s);
            assert_eq!(verdict.is_forest(), brute_forest(&s));
            if let Some(cert) = verdict.certificate() {
                verify_certificate(&s, cert).unwrap();
            }
        }
    }

    #[test]
    fn random_forests_are_recognised() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for t in [Graph::complete(3), Graph::cycle(4).unwrap(), Graph::complete(4)] {
            for count in [1, 5, 12, 30, 60, 120] {
                let s = random_forest(&t, count, JunctionWeights::default(), &mut rng).unwrap();
                // A small budget, so the exact search must succeed on its own.
                let verdict = recognise_forest(&s, 10_000);
                verify_certificate(&s, verdict.certificate().unwrap()).unwrap();
            }
        }
    }

    #[test]
    fn pruning_keeps_small_forests_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for round in 0..200 {
            let t = [Graph::complete(3), Graph::cycle(4).unwrap(), Graph::path(3)][round % 3].clone();
            let s = random_forest(&t, 7, JunctionWeights::default(), &mut rng).unwrap();
            // Drop one copy: the rest may or may not be a forest.
            let keep: Vec<usize> = (0..7).filter(|&i| i != round % 7).collect();
            let sub = s.subsystem(&keep).unwrap();
            assert_eq!(is_forest_of_copies(&sub).is_forest(), brute_forest(&sub));
        }
    }

    #[test]
    fn tiny_budget_falls_back_to_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = random_forest(&Graph::complete(3), 20, JunctionWeights::default(), &mut rng).unwrap();
        let v = recognise_forest(&s, 1);
        verify_certificate(&s, v.certificate().unwrap()).unwrap();
        let cycle = pentagon_triangle_cycle();
        assert!(matches!(recognise_forest(&cycle, 1), ForestVerdict::Unknown { .. }));
    }

    #[test]
    fn cycles_of_copies() {
        for (t, len, v, e) in [
            (Graph::complete(3), 3, 4, 6),
            (Graph::complete(3), 5, 6, 10),
            (Graph::cycle(4).unwrap(), 3, 7, 9),
            (Graph::cycle(4).unwrap(), 4, 9, 12),
        ] {
            let s = build_cycle_of_copies(&t, len).unwrap();
            assert_eq!(s.len(), len);
            let u = s.union().structure;
            assert_eq!((u.vertex_count(), u.edge_count()), (v, e));
        }
        assert!(build_cycle_of_copies(&Graph::complete(3), 2).is_err());
        assert!(build_cycle_of_copies(&Graph::path(4), 3).is_err());
    }

    fn fano() -> LinearHypergraph {
        LinearHypergraph::new(
            7,
            3,
            [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]],
        )
        .unwrap()
    }

    /// A linear triple system on 10 points that is (e,v)-inseparable.
    fn member() -> LinearHypergraph {
        LinearHypergraph::new(
            10,
            3,
            [
                [0, 1, 5], [0, 2, 6], [0, 3, 7], [0, 8, 9], [1, 2, 3], [1, 4, 9], [1, 6, 8],
                [2, 4, 5], [2, 7, 9], [3, 4, 8], [4, 6, 7], [5, 6, 9], [5, 7, 8],
            ],
        )
        .unwrap()
    }

    /// Two copies of `member` glued on `shared` template vertices.
    fn glued(shared: &[usize]) -> CopySystem<Hypergraph> {
        let t = member().into_inner();
        let first: Vec<usize> = (0..10).collect();
        let mut next = 10;
        let second: Vec<usize> = (0..10)
            .map(|v| {
                if shared.contains(&v) {
                    v
                } else {
                    next += 1;
                    next - 1
                }
            })
            .collect();
        let mut edges: Vec<Vec<usize>> = Vec::new();
        for img in [&first, &second] {
            for e in t.edges() {
                let mut x: Vec<usize> = e.iter().map(|&v| img[v]).collect();
                x.sort_unstable();
                if !edges.contains(&x) {
                    edges.push(x);
                }
            }
        }
        let host = Hypergraph::new(next, 3, edges).unwrap();
        let copies = vec![
            CopyEmbedding::new(first, CopyMode::Subgraph, false),
            CopyEmbedding::new(second, CopyMode::Subgraph, false),
        ];
        CopySystem::new(host, t, copies).unwrap()
    }

    #[test]
    fn locate_in_glued_members() {
        assert!(is_ev_inseparable(&member()));
        let t = member().into_inner();
        let one = CopySystem::new(
            t.clone(),
            t.clone(),
            vec![CopyEmbedding::new((0..10).collect(), CopyMode::Subgraph, false)],
        )
        .unwrap();
        assert_eq!(locate_inseparable_subgraph(&one, &(0..10).collect::<Vec<_>>()).unwrap(), 0);

        let on_vertex = glued(&[0]);
        assert_eq!(locate_inseparable_subgraph(&on_vertex, &(0..10).collect::<Vec<_>>()).unwrap(), 0);
        let on_edge = glued(&[0, 1, 5]);
        let second = on_edge.copies()[1].images.clone();
        assert_eq!(locate_inseparable_subgraph(&on_edge, &second).unwrap(), 1);
        // The union itself is separable at the junction.
        let all: Vec<usize> = (0..on_vertex.host().vertex_count()).collect();
        assert!(locate_inseparable_subgraph(&on_vertex, &all).is_err());
    }

    #[test]
    fn inseparable_sets_of_glued_members() {
        for shared in [&[0][..], &[0, 1, 5][..]] {
            let s = glued(shared);
            let sets = inseparable_induced_sets(s.host(), 1 << 22).unwrap();
            assert!(!sets.is_empty());
            for w in &sets {
                locate_inseparable_subgraph(&s, w).unwrap();
            }
        }
    }

    #[test]
    fn fano_has_no_inseparable_induced_sets() {
        // Any two lines meet, so deleting the points of a line isolates the rest.
        let sets = inseparable_induced_sets(fano().hypergraph(), 1 << 20).unwrap();
        assert!(sets.is_empty());
    }

    fn exhaustive_sets(h: &Hypergraph) -> Vec<Vec<usize>> {
        let n = h.vertex_count();
        let mut out = Vec::new();
        for s in 1u32..1 << n {
            let w: Vec<usize> = (0..n).filter(|v| s >> v & 1 == 1).collect();
            if witness_of(&h.induced(&w)).is_none() {
                out.push(w);
            }
        }
        out
    }

    #[test]
    fn decomposition_search_matches_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut nonempty = 0;
        for round in 0..60 {
            let k = 2 + round % 3;
            let n = rng.gen_range(k + 2..=11);
            let want = rng.gen_range(2..=3 * n);
            let mut edges: Vec<Vec<usize>> = Vec::new();
            for _ in 0..want {
                let mut e = rand::seq::index::sample(&mut rng, n, k).into_vec();
                e.sort_unstable();
                // Mix linear and non-linear systems.
                let clash = edges.iter().any(|f| f.iter().filter(|v| e.contains(v)).count() > 1);
                if !edges.contains(&e) && (round % 2 == 0 || !clash) {
                    edges.push(e);
                }
            }
            let h = Hypergraph::new(n, k, edges).unwrap();
            let want = exhaustive_sets(&h);
            nonempty += usize::from(!want.is_empty());
            assert_eq!(inseparable_induced_sets(&h, 1 << 24).unwrap(), want, "round {round}");
        }
        assert!(nonempty >= 10, "{nonempty}");
        let m = member().into_inner();
        assert_eq!(inseparable_induced_sets(&m, 1 << 24).unwrap(), exhaustive_sets(&m));
    }
}
