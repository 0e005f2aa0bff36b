//! Modular decomposition.
//!
//! [`modular_decomposition`] builds the canonical tree by repeatedly splitting
//! a vertex set into its maximal strong modules: connected components when the
//! induced graph is disconnected, co-components when its complement is, and
//! otherwise the maximal proper modules, which then partition the set. Module
//! closures are computed directly, giving a simple cubic-time algorithm.
//!
//! The width of a tree is the largest child count of any node. Series and
//! parallel nodes with many children can be split into nested binary nodes of
//! the same kind without changing the graph, so [`MdTree::binarized`] yields a
//! tree whose width is the modular width.

use crate::graph::{RedBlueGraph, Vertex};
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MdKind {
    Leaf(Vertex),
    Series,
    Parallel,
    Prime,
}

#[derive(Clone, Debug)]
pub struct MdNode {
    pub kind: MdKind,
    pub children: Vec<usize>,
    /// Quotient graph on the children: `quotient[i]` holds the indices of the
    /// children adjacent to child `i`.
    pub quotient: Vec<VertexSet>,
    /// Vertices of the graph represented by this node.
    pub vertices: VertexSet,
}

#[derive(Clone, Debug)]
pub struct MdTree {
    nodes: Vec<MdNode>,
    root: Option<usize>,
}

impl MdTree {
    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn node(&self, id: usize) -> &MdNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[MdNode] {
        &self.nodes
    }

    /// Maximum number of children of any node; 0 for a single leaf or an empty graph.
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.children.len()).max().unwrap_or(0)
    }

    /// Node ids with every child listed before its parent.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let Some(root) = self.root else { return out };
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                out.push(id);
            } else {
                stack.push((id, true));
                for &c in self.nodes[id].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Edges generated by composing the quotient graphs bottom-up, as sorted `(u, v)` with `u < v`.
    pub fn generated_edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut edges = Vec::new();
        for node in &self.nodes {
            for (i, &ci) in node.children.iter().enumerate() {
                for j in node.quotient[i].iter().filter(|&j| j > i) {
                    let cj = node.children[j];
                    for u in self.nodes[ci].vertices.iter() {
                        for v in self.nodes[cj].vertices.iter() {
                            edges.push((u.min(v), u.max(v)));
                        }
                    }
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    /// Splits every series or parallel node with more than two children into a
    /// chain of binary nodes of the same kind.
    pub fn binarized(&self) -> MdTree {
        let mut out = MdTree {
            nodes: Vec::with_capacity(self.nodes.len() * 2),
            root: None,
        };
        out.root = self.root.map(|r| out.copy_binarized(self, r));
        out
    }

    fn copy_binarized(&mut self, src: &MdTree, id: usize) -> usize {
        let node = &src.nodes[id];
        let children: Vec<usize> = node.children.iter().map(|&c| self.copy_binarized(src, c)).collect();
        match node.kind {
            MdKind::Series | MdKind::Parallel if children.len() > 2 => {
                let mut acc = children[children.len() - 1];
                for &c in children[..children.len() - 1].iter().rev() {
                    acc = self.push_binary(node.kind, c, acc);
                }
                acc
            }
            _ => {
                self.nodes.push(MdNode {
                    kind: node.kind,
                    children,
                    quotient: node.quotient.clone(),
                    vertices: node.vertices.clone(),
                });
                self.nodes.len() - 1
            }
        }
    }

    fn push_binary(&mut self, kind: MdKind, a: usize, b: usize) -> usize {
        let mut quotient = vec![VertexSet::new(2); 2];
        if kind == MdKind::Series {
            quotient[0].insert(1);
            quotient[1].insert(0);
        }
        self.nodes.push(MdNode {
            kind,
            children: vec![a, b],
            quotient,
            vertices: self.nodes[a].vertices.union(&self.nodes[b].vertices),
        });
        self.nodes.len() - 1
    }
}

/// Whether `set` is a module of `g`: every vertex outside it sees all of it or none of it.
pub fn is_module(g: &RedBlueGraph, set: &VertexSet) -> bool {
    let size = set.len();
    set.complement().iter().all(|x| {
        let seen = g.neighbors(x).intersection_len(set);
        seen == 0 || seen == size
    })
}

/// Smallest module of `g[domain]` containing `seed`.
fn module_closure(g: &RedBlueGraph, domain: &VertexSet, seed: VertexSet) -> VertexSet {
    let mut module = seed;
    loop {
        let size = module.len();
        let splitters: Vec<Vertex> = domain
            .difference(&module)
            .iter()
            .filter(|&x| {
                let seen = g.neighbors(x).intersection_len(&module);
                seen != 0 && seen != size
            })
            .collect();
        if splitters.is_empty() {
            return module;
        }
        for x in splitters {
            module.insert(x);
        }
    }
}

fn components(g: &RedBlueGraph, domain: &VertexSet, complement: bool) -> Vec<VertexSet> {
    let mut unvisited = domain.clone();
    let mut out = Vec::new();
    while let Some(start) = unvisited.first() {
        unvisited.remove(start);
        let mut comp = g.set_of([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let next = if complement {
                unvisited.difference(g.neighbors(v))
            } else {
                unvisited.intersection(g.neighbors(v))
            };
            for u in next.iter() {
                unvisited.remove(u);
                comp.insert(u);
                stack.push(u);
            }
        }
        out.push(comp);
    }
    out
}

/// The canonical modular decomposition tree of `g`.
pub fn modular_decomposition(g: &RedBlueGraph) -> MdTree {
    let mut tree = MdTree {
        nodes: Vec::new(),
        root: None,
    };
    if g.n() > 0 {
        tree.root = Some(decompose(g, g.all_vertices(), &mut tree.nodes));
    }
    tree
}

fn decompose(g: &RedBlueGraph, set: VertexSet, nodes: &mut Vec<MdNode>) -> usize {
    if set.len() == 1 {
        nodes.push(MdNode {
            kind: MdKind::Leaf(set.first().unwrap()),
            children: Vec::new(),
            quotient: Vec::new(),
            vertices: set,
        });
        return nodes.len() - 1;
    }
    let (kind, parts) = {
        let comps = components(g, &set, false);
        if comps.len() > 1 {
            (MdKind::Parallel, comps)
        } else {
            let cocomps = components(g, &set, true);
            if cocomps.len() > 1 {
                (MdKind::Series, cocomps)
            } else {
                (MdKind::Prime, maximal_modules(g, &set))
            }
        }
    };
    let reps: Vec<Vertex> = parts.iter().map(|p| p.first().unwrap()).collect();
    let c = parts.len();
    let mut quotient = vec![VertexSet::new(c); c];
    for i in 0..c {
        for j in 0..c {
            if i != j && g.has_edge(reps[i], reps[j]) {
                quotient[i].insert(j);
            }
        }
    }
    let children = parts.into_iter().map(|p| decompose(g, p, nodes)).collect();
    nodes.push(MdNode {
        kind,
        children,
        quotient,
        vertices: set,
    });
    nodes.len() - 1
}

/// Partition of `set` into maximal proper modules; valid when both `g[set]`
/// and its complement are connected.
fn maximal_modules(g: &RedBlueGraph, set: &VertexSet) -> Vec<VertexSet> {
    let mut assigned = g.empty_set();
    let mut parts = Vec::new();
    for v in set.iter() {
        if assigned.contains(v) {
            continue;
        }
        let mut module = g.set_of([v]);
        for u in set.iter() {
            if module.contains(u) {
                continue;
            }
            let mut seed = module.clone();
            seed.insert(u);
            let grown = module_closure(g, set, seed);
            if grown != *set {
                module = grown;
            }
        }
        assigned.union_with(&module);
        parts.push(module);
    }
    parts
}
