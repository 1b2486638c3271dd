//! Named templates and random hosts.

use rand::seq::SliceRandom;
use rand::Rng;

use super::amalgam::find_amalgam;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// Complete multipartite graph with `parts` classes of `part_size` vertices;
/// class `i` is `i*part_size..(i+1)*part_size`.
pub fn balanced_multipartite(parts: usize, part_size: usize) -> Result<Graph> {
    let n = parts * part_size;
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if a / part_size.max(1) != b / part_size.max(1) {
                edges.push((a, b));
            }
        }
    }
    if parts < 2 || part_size == 0 || edges.len() < 2 {
        return Err(Error::precondition(format!(
            "K({parts} x {part_size}) has fewer than two edges"
        )));
    }
    Graph::new(n, edges)
}

/// The classes of a balanced complete multipartite graph, or `None`.
pub fn multipartite_classes(g: &Graph) -> Option<Vec<Vec<usize>>> {
    let n = g.vertex_count();
    let mut class = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if class[v] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (v..n).filter(|&w| w == v || !g.has_edge(v, w)).collect();
        for &w in &members {
            if class[w] != usize::MAX {
                return None;
            }
            class[w] = classes.len();
        }
        classes.push(members);
    }
    for a in 0..n {
        for b in a + 1..n {
            if (class[a] != class[b]) != g.has_edge(a, b) {
                return None;
            }
        }
    }
    let size = classes.first().map_or(0, Vec::len);
    classes.iter().all(|c| c.len() == size).then_some(classes)
}

/// Parses names like `K3`, `K_4`, `C5`, `P3` (three vertices), `K2,2,2`,
/// `K_{2,2}` and `petersen`.
pub fn parse_template(name: &str) -> Result<Graph> {
    let bad = || Error::invalid(format!("unknown template {name:?}"));
    let lower = name.trim().to_ascii_lowercase();
    if lower == "petersen" {
        return Ok(Graph::petersen());
    }
    let mut chars = lower.chars();
    let head = chars.next().ok_or_else(bad)?;
    let rest: String = chars.filter(|c| !matches!(c, '_' | '{' | '}')).collect();
    let numbers: Vec<usize> = rest
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    match (head, numbers.as_slice()) {
        ('k', [n]) => Ok(Graph::complete(*n)),
        ('c', [n]) => Graph::cycle(*n),
        ('p', [n]) => Ok(Graph::path(*n)),
        ('k', parts) if parts.len() >= 2 => {
            if parts.iter().any(|&p| p != parts[0]) {
                return Err(Error::invalid(format!("{name:?} is not balanced")));
            }
            balanced_multipartite(parts.len(), parts[0])
        }
        _ => Err(bad()),
    }
}

/// A binomial random graph.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(n, edges).expect("distinct pairs")
}

/// A random graph with no copy of `(m, template)`: edges of offending
/// amalgams are deleted one at a time, chosen at random among the petals.
pub fn random_amalgam_free_host<R: Rng>(
    n: usize,
    p: f64,
    template: &Graph,
    m: usize,
    budget: u64,
    rng: &mut R,
) -> Result<Graph> {
    let mut g = random_graph(n, p, rng);
    while let Some(packing) = find_amalgam(&g, template, m, budget)? {
        let petal = packing.petals.choose(rng).expect("a packing of size m >= 1");
        let inside: Vec<Edge> = g
            .edges()
            .iter()
            .copied()
            .filter(|e| *e != packing.kernel && petal.binary_search(&e.lo()).is_ok() && petal.binary_search(&e.hi()).is_ok())
            .collect();
        let drop = *inside.choose(rng).expect("a copy has an edge besides the kernel");
        g = g.spanning_subgraph(g.edges().iter().copied().filter(|&e| e != drop))?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::amalgam::DEFAULT_PACKING_BUDGET;
    use rand::SeedableRng;

    #[test]
    fn multipartite_examples() {
        assert_eq!(balanced_multipartite(3, 1).unwrap(), Graph::complete(3));
        let c4 = balanced_multipartite(2, 2).unwrap();
        assert_eq!(c4.edge_count(), 4);
        assert!(c4.neighbours(0).iter().all(|&v| v >= 2));
        let k222 = balanced_multipartite(3, 2).unwrap();
        assert_eq!((k222.vertex_count(), k222.edge_count()), (6, 12));
        assert!(balanced_multipartite(2, 1).is_err());
        assert!(balanced_multipartite(1, 5).is_err());
        assert_eq!(multipartite_classes(&k222).unwrap().len(), 3);
        assert!(multipartite_classes(&Graph::cycle(5).unwrap()).is_none());
        assert!(multipartite_classes(&Graph::path(3)).is_none());
    }

    #[test]
    fn names() {
        assert_eq!(parse_template("K3").unwrap(), Graph::complete(3));
        assert_eq!(parse_template("K_{2,2,2}").unwrap(), balanced_multipartite(3, 2).unwrap());
        assert_eq!(parse_template("c5").unwrap(), Graph::cycle(5).unwrap());
        assert_eq!(parse_template("P3").unwrap(), Graph::path(3));
        assert_eq!(parse_template("Petersen").unwrap(), Graph::petersen());
        assert!(parse_template("K2,3").is_err());
        assert!(parse_template("X3").is_err());
        assert!(parse_template("").is_err());
    }

    #[test]
    fn amalgam_free_hosts() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for m in 1..=3 {
            let g = random_amalgam_free_host(10, 0.6, &Graph::complete(3), m, DEFAULT_PACKING_BUDGET, &mut rng).unwrap();
            assert!(find_amalgam(&g, &Graph::complete(3), m, DEFAULT_PACKING_BUDGET).unwrap().is_none());
        }
    }
}
