use std::collections::{BTreeSet, HashSet};

use super::TarskiSheaf;
use crate::error::{Error, Result};
use crate::lattice::{Elem, MonotoneMap};

/// Longest loop [`holonomy`] will enumerate.
pub const MAX_HOLONOMY_LENGTH: usize = 8;

/// One step `i → j` along edge `e`: `F∨(j ⊴ e) ∘ F∧(i ⊴ e)`.
fn step_image(sheaf: &TarskiSheaf, from: usize, to: usize, image: &[Elem]) -> Result<Vec<Elem>> {
    let e = sheaf.graph().edge_between(from, to).ok_or(Error::NotAPath(from, to))?;
    let (down, up) = (sheaf.restriction(from, e).lower(), sheaf.restriction(to, e).upper());
    Ok(image.iter().map(|&x| up.apply(down.apply(x))).collect())
}

/// Parallel transport of `x` along a node sequence. A one-node path is the identity.
pub fn transport(sheaf: &TarskiSheaf, path: &[usize], x: Elem) -> Result<Elem> {
    let start = *path.first().ok_or_else(|| Error::shape("empty path"))?;
    check_node(sheaf, start)?;
    if x >= sheaf.node_stalk(start).size() {
        return Err(Error::shape(format!("value {x} outside stalk at node {start}")));
    }
    let mut v = vec![x];
    for w in path.windows(2) {
        v = step_image(sheaf, w[0], w[1], &v)?;
    }
    Ok(v[0])
}

/// The transport map `F(start) → F(end)` along a path.
pub fn transport_map(sheaf: &TarskiSheaf, path: &[usize]) -> Result<MonotoneMap> {
    let start = *path.first().ok_or_else(|| Error::shape("empty path"))?;
    check_node(sheaf, start)?;
    let dom = sheaf.node_stalk(start).clone();
    let mut image: Vec<Elem> = dom.elements().collect();
    for w in path.windows(2) {
        image = step_image(sheaf, w[0], w[1], &image)?;
    }
    let end = *path.last().unwrap();
    MonotoneMap::new(dom, sheaf.node_stalk(end).clone(), image)
}

fn check_node(sheaf: &TarskiSheaf, i: usize) -> Result<()> {
    if i >= sheaf.graph().node_count() {
        return Err(Error::shape(format!("node {i} outside graph")));
    }
    Ok(())
}

/// Distinct transport maps of closed walks at `base` of length at most
/// `max_len`, the identity included, sorted by image table.
pub fn holonomy(sheaf: &TarskiSheaf, base: usize, max_len: usize) -> Result<Vec<MonotoneMap>> {
    if max_len > MAX_HOLONOMY_LENGTH {
        return Err(Error::too_large("holonomy loop length", max_len as u64, MAX_HOLONOMY_LENGTH as u64));
    }
    check_node(sheaf, base)?;
    let dom = sheaf.node_stalk(base).clone();
    let identity: Vec<Elem> = dom.elements().collect();
    // The future of a walk depends only on its current node and map, so
    // each (node, map) state is expanded once, at its shortest length.
    let mut seen: HashSet<(usize, Vec<Elem>)> = HashSet::from([(base, identity.clone())]);
    let mut frontier = vec![(base, identity.clone())];
    let mut loops: BTreeSet<Vec<Elem>> = BTreeSet::from([identity]);
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (node, image) in &frontier {
            for &(to, _) in sheaf.graph().neighbors(*node) {
                let moved = step_image(sheaf, *node, to, image)?;
                if to == base {
                    loops.insert(moved.clone());
                }
                if seen.insert((to, moved.clone())) {
                    next.push((to, moved));
                }
            }
        }
        frontier = next;
    }
    loops
        .into_iter()
        .map(|image| MonotoneMap::new(dom.clone(), dom.clone(), image))
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::galois::{from_relation_covariant, GaloisConnection, Relation};
    use crate::lattice::FiniteLattice;
    use crate::sheaf::{sections_bruteforce, Graph};

    fn p2() -> Arc<FiniteLattice> {
        Arc::new(FiniteLattice::powerset(["r", "s"]).unwrap())
    }

    fn twisted_triangle() -> TarskiSheaf {
        let p = p2();
        let rel = Relation::new(["r", "s"], ["r", "s"], &[(0, 1), (1, 0)]).unwrap();
        let swap = Arc::new(from_relation_covariant(&rel).unwrap());
        let id = Arc::new(GaloisConnection::identity(p.clone()));
        let g = Graph::cycle(3);
        let restrictions = vec![[swap, id.clone()], [id.clone(), id.clone()], [id.clone(), id]];
        TarskiSheaf::build(g, vec![p.clone(); 3], vec![p; 3], restrictions).unwrap()
    }

    #[test]
    fn trivial_and_constant_paths() {
        let sheaf = TarskiSheaf::constant(Graph::path(3), p2());
        assert_eq!(transport(&sheaf, &[1], 2).unwrap(), 2);
        assert_eq!(transport(&sheaf, &[0, 1, 2, 1], 2).unwrap(), 2);
        assert!(matches!(transport(&sheaf, &[0, 2], 1), Err(Error::NotAPath(0, 2))));
        let h = holonomy(&sheaf, 0, 4).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].image(), &[0, 1, 2, 3]);
    }

    #[test]
    fn twisted_loop_has_swap_holonomy() {
        let sheaf = twisted_triangle();
        let h = holonomy(&sheaf, 0, 3).unwrap();
        let images: Vec<&[Elem]> = h.iter().map(|m| m.image()).collect();
        assert!(images.contains(&[0, 2, 1, 3].as_slice()));
        assert!(images.contains(&[0, 1, 2, 3].as_slice()));
    }

    #[test]
    fn sections_are_dominated_by_transport() {
        let sheaf = twisted_triangle();
        for x in sections_bruteforce(&sheaf).unwrap() {
            for path in [[0, 1], [1, 0], [0, 2], [2, 1]] {
                let moved = transport(&sheaf, &path, x.0[path[0]]).unwrap();
                assert!(sheaf.node_stalk(path[1]).leq(x.0[path[1]], moved));
            }
        }
    }

    #[test]
    fn concatenation() {
        let sheaf = twisted_triangle();
        let whole = transport_map(&sheaf, &[0, 1, 2, 0]).unwrap();
        let first = transport_map(&sheaf, &[0, 1]).unwrap();
        let rest = transport_map(&sheaf, &[1, 2, 0]).unwrap();
        assert_eq!(whole.image(), rest.after(&first).unwrap().image());
    }

    #[test]
    fn loop_budget_guard() {
        let sheaf = twisted_triangle();
        assert!(matches!(holonomy(&sheaf, 0, 9), Err(Error::TooLarge { .. })));
    }
}
