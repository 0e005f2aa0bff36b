use crate::graph::{RedBlueGraph, Vertex};
use crate::vertex_set::VertexSet;

/// First induced path `u – center – w` inside `alive`, scanning centers in
/// ascending order and then neighbor pairs lexicographically.
pub fn find_induced_p3(g: &RedBlueGraph, alive: &VertexSet) -> Option<(Vertex, Vertex, Vertex)> {
    for center in alive.iter() {
        let nbrs = g.neighbors(center).intersection(alive);
        for u in nbrs.iter() {
            let mut rest = nbrs.difference(g.neighbors(u));
            rest.remove(u);
            if let Some(w) = rest.iter().find(|&w| w > u) {
                return Some((u, center, w));
            }
        }
    }
    None
}

/// True iff every connected component is a clique.
pub fn is_cluster(g: &RedBlueGraph) -> bool {
    find_induced_p3(g, &g.all_vertices()).is_none()
}

/// A minimum cluster deletion set, found by iterative deepening over the
/// budget with three-way branching on an induced P3.
pub fn find_cluster_deletion_set(g: &RedBlueGraph) -> VertexSet {
    find_cluster_deletion_set_bounded(g, g.n()).expect("deleting every vertex leaves a cluster")
}

/// A minimum cluster deletion set of size at most `max_size`, if one exists.
pub fn find_cluster_deletion_set_bounded(g: &RedBlueGraph, max_size: usize) -> Option<VertexSet> {
    let mut alive = g.all_vertices();
    (0..=max_size.min(g.n())).find_map(|budget| branch(g, &mut alive, budget))
}

fn branch(g: &RedBlueGraph, alive: &mut VertexSet, budget: usize) -> Option<VertexSet> {
    let Some((u, c, w)) = find_induced_p3(g, alive) else {
        return Some(alive.complement());
    };
    if budget == 0 {
        return None;
    }
    for v in [u, c, w] {
        alive.remove(v);
        let found = branch(g, alive, budget - 1);
        alive.insert(v);
        if found.is_some() {
            return found;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::uniform;
    use crate::graph::Color;

    fn path(n: usize) -> RedBlueGraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        uniform(n, Color::RedBlue, &edges)
    }

    #[test]
    fn cluster_recognition() {
        let two_triangles = uniform(6, Color::Red, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        assert!(is_cluster(&two_triangles));
        assert!(!is_cluster(&path(3)));
        assert!(is_cluster(&RedBlueGraph::empty()));
    }

    #[test]
    fn deletion_sets() {
        let two_triangles = uniform(6, Color::Red, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        assert!(find_cluster_deletion_set(&two_triangles).is_empty());
        assert_eq!(find_cluster_deletion_set(&path(3)).len(), 1);
        let p5 = path(5);
        let m = find_cluster_deletion_set(&p5);
        assert_eq!(m.to_vec(), vec![2]);
        let rest = p5.induced_subgraph(&m.complement()).unwrap().graph;
        assert!(is_cluster(&rest));
    }

    #[test]
    fn bounded_search_gives_up() {
        let p5 = path(7);
        assert!(find_cluster_deletion_set_bounded(&p5, 1).is_none());
        assert_eq!(find_cluster_deletion_set_bounded(&p5, 2).unwrap().len(), 2);
    }
}
