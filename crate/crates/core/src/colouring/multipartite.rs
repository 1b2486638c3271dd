//! Colouring hosts without `(m, F)` for balanced complete multipartite `F`.

use super::{free_partition, EdgeColouring, SetMapping};
use crate::constructions::{amalgam::check_transitive_or_warn, multipartite_classes, KernelIndex};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// The set mapping on host edges: `f(e)` collects, for every vertex `z` of
/// a maximum amalgam with kernel `e` other than the ends of `e`, the host
/// edges joining `z` to an end of `e`. Edges in no copy map to the empty set.
pub fn multipartite_set_mapping(host: &Graph, template: &Graph, m: usize, budget: u64) -> Result<SetMapping> {
    if template.edge_count() < 2 || multipartite_classes(template).is_none() {
        return Err(Error::precondition(
            "template must be a balanced complete multipartite graph with at least two edges",
        ));
    }
    if m == 0 {
        return Err(Error::precondition("m must be at least 1"));
    }
    check_transitive_or_warn(template)?;
    let index = KernelIndex::new(host, template);
    let mut images = Vec::with_capacity(host.edge_count());
    for (i, &e) in host.edges().iter().enumerate() {
        if !index.in_some_copy(i) {
            images.push(Vec::new());
            continue;
        }
        let packing = index.packing(i, m, budget)?;
        if packing.multiplicity() >= m {
            return Err(Error::precondition(format!(
                "host contains an amalgam of {m} copies with kernel {e}"
            )));
        }
        let mut img = Vec::new();
        for z in packing.vertices() {
            if e.contains(z) {
                continue;
            }
            for end in [e.lo(), e.hi()] {
                if let Some(j) = host.edge_index(crate::graph::Edge::new(z, end)) {
                    img.push(j);
                }
            }
        }
        images.push(img);
    }
    SetMapping::new(host.edge_count(), images)
}

/// At most `4 m v(F)` colours and no monochromatic copy of `template`.
pub fn multipartite_free_colouring(host: &Graph, template: &Graph, m: usize, budget: u64) -> Result<EdgeColouring> {
    let f = multipartite_set_mapping(host, template, m, budget)?;
    let classes = free_partition(&f, f.max_image_size())?;
    let colouring = if classes.is_empty() {
        EdgeColouring::constant(host.clone())
    } else {
        EdgeColouring::from_classes(host.clone(), &classes)?
    };
    let bound = 4 * m * template.vertex_count();
    if colouring.colour_count() > bound {
        return Err(Error::LemmaViolation(format!(
            "{} colours exceed the bound {bound}",
            colouring.colour_count()
        )));
    }
    Ok(colouring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{balanced_multipartite, DEFAULT_PACKING_BUDGET};

    #[test]
    fn single_triangle_is_rainbow() {
        let k3 = Graph::complete(3);
        let c = multipartite_free_colouring(&k3, &k3, 2, DEFAULT_PACKING_BUDGET).unwrap();
        assert_eq!(c.used_colours(), 3);
    }

    #[test]
    fn triangle_free_hosts_need_nothing() {
        let c5 = Graph::cycle(5).unwrap();
        let f = multipartite_set_mapping(&c5, &Graph::complete(3), 1, DEFAULT_PACKING_BUDGET).unwrap();
        assert_eq!(f.max_image_size(), 0);
        let c = multipartite_free_colouring(&c5, &Graph::complete(3), 1, DEFAULT_PACKING_BUDGET).unwrap();
        assert_eq!(c.colour_count(), 1);
    }

    #[test]
    fn rejections() {
        let k4 = Graph::complete(4);
        let k3 = Graph::complete(3);
        assert!(multipartite_free_colouring(&k4, &k3, 2, DEFAULT_PACKING_BUDGET).is_err());
        assert!(multipartite_free_colouring(&k4, &Graph::cycle(5).unwrap(), 2, DEFAULT_PACKING_BUDGET).is_err());
        assert!(multipartite_free_colouring(&k4, &Graph::path(3), 2, DEFAULT_PACKING_BUDGET).is_err());
        let c4 = balanced_multipartite(2, 2).unwrap();
        assert!(multipartite_free_colouring(&k4, &c4, 3, DEFAULT_PACKING_BUDGET).is_ok());
    }
}
