//! Free-set partitions and the colourings built from them.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

pub mod cycle;
pub mod multipartite;
pub mod split;

pub use cycle::{cycle_free_colouring, CycleColouring};
pub use multipartite::{multipartite_free_colouring, multipartite_set_mapping};
pub use split::{longest_monotone_path, partite_split, PartiteSplit};

/// A map `f` from `0..ground_size` to subsets with `x` never in `f(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetMapping {
    ground_size: usize,
    images: Vec<Vec<usize>>,
}

impl SetMapping {
    /// Images are sorted and deduplicated.
    pub fn new(ground_size: usize, images: Vec<Vec<usize>>) -> Result<Self> {
        if images.len() != ground_size {
            return Err(Error::invalid(format!(
                "{} images given for a ground set of size {ground_size}",
                images.len()
            )));
        }
        let mut images = images;
        for (x, img) in images.iter_mut().enumerate() {
            img.sort_unstable();
            img.dedup();
            if let Some(&y) = img.iter().find(|&&y| y >= ground_size) {
                return Err(Error::invalid(format!("f({x}) contains {y}, outside the ground set")));
            }
            if img.binary_search(&x).is_ok() {
                return Err(Error::invalid(format!("{x} lies in its own image")));
            }
        }
        Ok(SetMapping { ground_size, images })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn image(&self, x: usize) -> &[usize] {
        &self.images[x]
    }

    pub fn max_image_size(&self) -> usize {
        self.images.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Whether no member of `set` lies in the image of another.
    pub fn is_free(&self, set: &[usize]) -> bool {
        let inside: BTreeSet<usize> = set.iter().copied().collect();
        set.iter().all(|&y| self.images[y].iter().all(|z| !inside.contains(z)))
    }
}

/// Splits the ground set into at most `2k + 1` free classes, each sorted,
/// ordered by least element.
///
/// The conflict graph (`x ~ y` when one lies in the other's image) is
/// `2k`-degenerate, so greedy colouring along a degeneracy order suffices.
pub fn free_partition(f: &SetMapping, k: usize) -> Result<Vec<Vec<usize>>> {
    if let Some(x) = (0..f.ground_size).find(|&x| f.images[x].len() > k) {
        return Err(Error::precondition(format!(
            "|f({x})| = {} exceeds k = {k}",
            f.images[x].len()
        )));
    }
    let class_of = greedy_free_classes(f);
    let count = class_of.iter().map(|&c| c + 1).max().unwrap_or(0);
    let mut classes = vec![Vec::new(); count];
    for (x, &c) in class_of.iter().enumerate() {
        classes[c].push(x);
    }
    classes.sort();
    if classes.len() > 2 * k + 1 {
        return Err(Error::LemmaViolation(format!(
            "greedy colouring used {} classes for k = {k}",
            classes.len()
        )));
    }
    Ok(classes)
}

fn greedy_free_classes(f: &SetMapping) -> Vec<usize> {
    let n = f.ground_size;
    let mut conflicts: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for x in 0..n {
        for &y in &f.images[x] {
            conflicts[x].insert(y);
            conflicts[y].insert(x);
        }
    }
    // Repeatedly strip a vertex of least remaining degree, smallest id first.
    let mut degree: Vec<usize> = conflicts.iter().map(BTreeSet::len).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|x| (degree[x], x)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while let Some((_, x)) = queue.pop_first() {
        removed[x] = true;
        order.push(x);
        for &y in &conflicts[x] {
            if !removed[y] {
                queue.remove(&(degree[y], y));
                degree[y] -= 1;
                queue.insert((degree[y], y));
            }
        }
    }
    // Each vertex sees at most 2k coloured conflicts when its turn comes.
    let mut class_of = vec![usize::MAX; n];
    for &x in order.iter().rev() {
        let taken: BTreeSet<usize> = conflicts[x]
            .iter()
            .map(|&y| class_of[y])
            .filter(|&c| c != usize::MAX)
            .collect();
        class_of[x] = (0..).find(|c| !taken.contains(c)).expect("unbounded range");
    }
    class_of
}

/// A total colouring of a graph's edges by `0..colour_count`, indexed like
/// `host.edges()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColouring {
    host: Graph,
    colour_of: Vec<usize>,
    colour_count: usize,
}

impl EdgeColouring {
    pub fn new(host: Graph, colour_of: Vec<usize>, colour_count: usize) -> Result<Self> {
        if colour_of.len() != host.edge_count() {
            return Err(Error::invalid(format!(
                "{} colours given for {} edges",
                colour_of.len(),
                host.edge_count()
            )));
        }
        if colour_count == 0 {
            return Err(Error::invalid("a colouring needs at least one colour"));
        }
        if let Some(i) = colour_of.iter().position(|&c| c >= colour_count) {
            return Err(Error::invalid(format!(
                "edge {} has colour {} but only {colour_count} colours exist",
                host.edges()[i],
                colour_of[i]
            )));
        }
        Ok(EdgeColouring {
            host,
            colour_of,
            colour_count,
        })
    }

    /// Every edge coloured `0`.
    pub fn constant(host: Graph) -> Self {
        let colour_of = vec![0; host.edge_count()];
        EdgeColouring {
            host,
            colour_of,
            colour_count: 1,
        }
    }

    /// Colours edge `i` by its class in `classes`.
    pub fn from_classes(host: Graph, classes: &[Vec<usize>]) -> Result<Self> {
        let mut colour_of = vec![usize::MAX; host.edge_count()];
        for (c, class) in classes.iter().enumerate() {
            for &i in class {
                if i >= colour_of.len() || colour_of[i] != usize::MAX {
                    return Err(Error::invalid("classes must partition the edge indices"));
                }
                colour_of[i] = c;
            }
        }
        if colour_of.contains(&usize::MAX) {
            return Err(Error::invalid("classes must cover every edge"));
        }
        EdgeColouring::new(host, colour_of, classes.len().max(1))
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn colour_count(&self) -> usize {
        self.colour_count
    }

    pub fn colours(&self) -> &[usize] {
        &self.colour_of
    }

    pub fn colour(&self, e: Edge) -> Option<usize> {
        self.host.edge_index(e).map(|i| self.colour_of[i])
    }

    /// Number of distinct colours actually used.
    pub fn used_colours(&self) -> usize {
        self.colour_of.iter().collect::<BTreeSet<_>>().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        let empty = SetMapping::new(4, vec![vec![]; 4]).unwrap();
        assert_eq!(free_partition(&empty, 0).unwrap(), vec![vec![0, 1, 2, 3]]);
        let shift = SetMapping::new(5, (0..5).map(|x| vec![(x + 1) % 5]).collect()).unwrap();
        let classes = free_partition(&shift, 1).unwrap();
        assert!(classes.len() <= 3);
        assert!(classes.iter().all(|c| shift.is_free(c)));
        let swap = SetMapping::new(2, vec![vec![1], vec![0]]).unwrap();
        assert_eq!(free_partition(&swap, 1).unwrap(), vec![vec![0], vec![1]]);
        assert!(free_partition(&swap, 0).is_err());
        assert!(SetMapping::new(2, vec![vec![0], vec![]]).is_err());
        assert!(SetMapping::new(2, vec![vec![2], vec![]]).is_err());
    }

    #[test]
    fn colourings_are_total() {
        let k3 = Graph::complete(3);
        assert!(EdgeColouring::new(k3.clone(), vec![0, 1], 2).is_err());
        assert!(EdgeColouring::new(k3.clone(), vec![0, 1, 2], 2).is_err());
        let c = EdgeColouring::from_classes(k3.clone(), &[vec![0, 2], vec![1]]).unwrap();
        assert_eq!(c.colour(Edge::new(0, 2)), Some(1));
        assert_eq!(c.used_colours(), 2);
        assert!(EdgeColouring::from_classes(k3, &[vec![0, 2]]).is_err());
    }

    fn mapping() -> impl Strategy<Value = (SetMapping, usize)> {
        (1usize..40, 1usize..5).prop_flat_map(|(n, k)| {
            proptest::collection::vec(proptest::collection::vec(0..n, 0..=k), n).prop_map(move |raw| {
                let images = raw
                    .into_iter()
                    .enumerate()
                    .map(|(x, img)| img.into_iter().filter(|&y| y != x).collect())
                    .collect();
                (SetMapping::new(n, images).unwrap(), k)
            })
        })
    }

    proptest! {
        #[test]
        fn partitions_are_free_and_small((f, k) in mapping()) {
            let classes = free_partition(&f, k).unwrap();
            prop_assert!(classes.len() <= 2 * k + 1);
            let mut seen: Vec<usize> = classes.concat();
            seen.sort_unstable();
            prop_assert_eq!(seen, (0..f.ground_size()).collect::<Vec<_>>());
            for class in &classes {
                for &a in class {
                    for &b in class {
                        prop_assert!(!f.image(a).contains(&b));
                    }
                }
            }
        }
    }
}
