//! Red-blue reinforcement parameterized by modular width.
//!
//! Tables live on the binarized modular decomposition. For a node `b`,
//! `f_b(γ)` is the fewest blue deletions after which `G_b` is dominable by at
//! most `γ` red vertices of `G_b`. An internal node guesses the set `X` of
//! children that contain a dominator and combines the tables of the children
//! in `X` that have no quotient neighbor in `X` by a min-plus product.

use thiserror::Error;

use crate::decomp::modular::{modular_decomposition, MdKind, MdTree};
use crate::graph::{Certificate, RedBlueGraph, Vertex};
use crate::solve::{timed, SolveResult, SolverKind};

pub const INFINITE: usize = usize::MAX;
pub const DEFAULT_MAX_WIDTH: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MwError {
    #[error("modular width {width} exceeds the limit of {cap}")]
    WidthTooLarge { width: usize, cap: usize },
}

/// `f_b` for one node, stored for `γ ∈ 0..=|R_b|`; larger budgets read the last entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MwTable {
    values: Vec<usize>,
    /// Guess attaining each value, as a bitmask over the children.
    choice: Vec<u32>,
}

impl MwTable {
    pub fn get(&self, gamma: usize) -> usize {
        self.values[gamma.min(self.values.len() - 1)]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

pub fn compute_leaf_table(g: &RedBlueGraph, v: Vertex) -> MwTable {
    let values = match (g.is_red(v), g.is_blue(v)) {
        (_, false) => vec![0],
        (false, true) => vec![1],
        (true, true) => vec![1, 0],
    };
    MwTable {
        choice: vec![0; values.len()],
        values,
    }
}

/// What a node needs to know about each child.
#[derive(Clone, Copy, Debug)]
pub struct ChildSummary<'a> {
    pub table: &'a MwTable,
    pub reds: usize,
    pub blues: usize,
}

/// Min-plus chain over the children in `members`, each receiving at least one
/// unit of budget. Entry `t` is the best total with exactly `t` units split.
fn chain(children: &[ChildSummary], members: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut acc = vec![0];
    for i in members {
        let child = &children[i];
        let mut next = vec![INFINITE; acc.len() + child.reds];
        for (t1, &a) in acc.iter().enumerate() {
            if a == INFINITE {
                continue;
            }
            for t2 in 1..=child.reds {
                let v = a + child.table.get(t2);
                if v < next[t1 + t2] {
                    next[t1 + t2] = v;
                }
            }
        }
        acc = next;
    }
    acc
}

struct Guess {
    forced: usize,
    x1: u32,
    x2: u32,
}

fn classify(quotient: &[u32], children: &[ChildSummary], x: u32) -> Option<Guess> {
    let c = children.len();
    if (0..c).any(|i| x >> i & 1 == 1 && children[i].reds == 0) {
        return None;
    }
    let mut forced = 0;
    let mut x1 = 0;
    for i in 0..c {
        let seen = quotient[i] & x != 0;
        if x >> i & 1 == 1 {
            if seen {
                x1 |= 1 << i;
            }
        } else if !seen {
            forced += children[i].blues;
        }
    }
    Some(Guess { forced, x1, x2: x & !x1 })
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

/// Combines child tables at an internal node with quotient adjacency
/// `quotient` (bitmask per child).
pub fn combine_node(quotient: &[u32], children: &[ChildSummary]) -> MwTable {
    let c = children.len();
    assert!(c < 32);
    let reds: usize = children.iter().map(|ch| ch.reds).sum();
    let mut values = vec![INFINITE; reds + 1];
    let mut choice = vec![0u32; reds + 1];
    for x in 0..1u32 << c {
        let Some(guess) = classify(quotient, children, x) else {
            continue;
        };
        let x1 = guess.x1.count_ones() as usize;
        let acc = chain(children, bits(guess.x2));
        let mut prefix = INFINITE;
        for gamma in x1..=reds {
            if let Some(&a) = acc.get(gamma - x1) {
                prefix = prefix.min(a);
            }
            if prefix == INFINITE {
                continue;
            }
            let total = guess.forced + prefix;
            if total < values[gamma] {
                values[gamma] = total;
                choice[gamma] = x;
            }
        }
    }
    debug_assert!(values.windows(2).all(|w| w[1] <= w[0]));
    MwTable { values, choice }
}

struct Solved {
    tree: MdTree,
    tables: Vec<MwTable>,
    reds: Vec<usize>,
    blues: Vec<usize>,
    quotients: Vec<Vec<u32>>,
}

fn quotient_masks(tree: &MdTree, id: usize) -> Vec<u32> {
    tree.node(id).quotient.iter().map(|q| q.iter().fold(0u32, |m, j| m | 1 << j)).collect()
}

fn fill(g: &RedBlueGraph, cap: usize) -> Result<Solved, MwError> {
    let tree = modular_decomposition(g).binarized();
    let width = tree.width();
    if width > cap {
        return Err(MwError::WidthTooLarge { width, cap });
    }
    let count = tree.nodes().len();
    let mut tables: Vec<Option<MwTable>> = vec![None; count];
    let mut reds = vec![0; count];
    let mut blues = vec![0; count];
    let mut quotients = vec![Vec::new(); count];
    for id in tree.postorder() {
        let node = tree.node(id);
        reds[id] = node.vertices.intersection_len(g.red());
        blues[id] = node.vertices.intersection_len(g.blue());
        let table = match node.kind {
            MdKind::Leaf(v) => compute_leaf_table(g, v),
            _ => {
                quotients[id] = quotient_masks(&tree, id);
                let children: Vec<ChildSummary> = node
                    .children
                    .iter()
                    .map(|&ch| ChildSummary {
                        table: tables[ch].as_ref().expect("children first"),
                        reds: reds[ch],
                        blues: blues[ch],
                    })
                    .collect();
                combine_node(&quotients[id], &children)
            }
        };
        tables[id] = Some(table);
    }
    Ok(Solved {
        tree,
        tables: tables.into_iter().map(|t| t.expect("every node filled")).collect(),
        reds,
        blues,
        quotients,
    })
}

impl Solved {
    fn summaries(&self, id: usize) -> Vec<ChildSummary<'_>> {
        self.tree
            .node(id)
            .children
            .iter()
            .map(|&ch| ChildSummary {
                table: &self.tables[ch],
                reds: self.reds[ch],
                blues: self.blues[ch],
            })
            .collect()
    }

    /// Deletions and dominators attaining `f_id(gamma)`.
    fn witness(&self, g: &RedBlueGraph, id: usize, gamma: usize, out: &mut Certificate) {
        let node = self.tree.node(id);
        let table = &self.tables[id];
        let gamma = gamma.min(table.values.len() - 1);
        if let MdKind::Leaf(v) = node.kind {
            match (g.is_red(v), g.is_blue(v)) {
                (true, true) if gamma >= 1 => {
                    out.dominators.insert(v);
                }
                (_, true) => {
                    out.deleted.insert(v);
                }
                _ => {}
            }
            return;
        }
        let children = self.summaries(id);
        let x = table.choice[gamma];
        let guess = classify(&self.quotients[id], &children, x).expect("stored guesses are valid");
        for (i, &ch) in node.children.iter().enumerate() {
            let in_x = x >> i & 1 == 1;
            let seen = self.quotients[id][i] & x != 0;
            if !in_x && !seen {
                out.deleted.union_with(&self.tree.node(ch).vertices.intersection(g.blue()));
            }
            if guess.x1 >> i & 1 == 1 {
                let red = self.tree.node(ch).vertices.intersection(g.red()).first().expect("valid guess");
                out.dominators.insert(red);
            }
        }
        // Re-run the chain keeping split points.
        let members: Vec<usize> = bits(guess.x2).collect();
        let budget = gamma - guess.x1.count_ones() as usize;
        let mut layers = vec![vec![0usize]];
        for &i in &members {
            let acc = layers.last().unwrap();
            let mut next = vec![INFINITE; acc.len() + children[i].reds];
            for (t1, &a) in acc.iter().enumerate() {
                if a == INFINITE {
                    continue;
                }
                for t2 in 1..=children[i].reds {
                    next[t1 + t2] = next[t1 + t2].min(a + children[i].table.get(t2));
                }
            }
            layers.push(next);
        }
        let last = layers.last().unwrap();
        let mut t = (0..=budget.min(last.len() - 1)).min_by_key(|&t| (last[t], t)).expect("nonempty");
        for (p, &i) in members.iter().enumerate().rev() {
            let prev = &layers[p];
            let target = layers[p + 1][t];
            let t2 = (1..=children[i].reds.min(t))
                .find(|&t2| t - t2 < prev.len() && prev[t - t2] != INFINITE && prev[t - t2] + children[i].table.get(t2) == target)
                .expect("split exists");
            let ch = node.children[i];
            let mut part = Certificate {
                deleted: g.empty_set(),
                dominators: g.empty_set(),
            };
            self.witness(g, ch, t2, &mut part);
            if part.dominators.is_empty() {
                // Neighbors of this child rely on it holding a dominator.
                let red = self.tree.node(ch).vertices.intersection(g.red()).first().expect("valid guess");
                part.dominators.insert(red);
                part.deleted.remove(red);
            }
            out.deleted.union_with(&part.deleted);
            out.dominators.union_with(&part.dominators);
            t -= t2;
        }
    }
}

/// The table of every node of the binarized decomposition, in node order.
pub fn node_tables(g: &RedBlueGraph) -> Result<(MdTree, Vec<MwTable>), MwError> {
    let solved = fill(g, DEFAULT_MAX_WIDTH)?;
    Ok((solved.tree, solved.tables))
}

pub fn solve_mw(g: &RedBlueGraph, k: usize, gamma: usize) -> Result<SolveResult, MwError> {
    solve_mw_with_cap(g, k, gamma, DEFAULT_MAX_WIDTH)
}

pub fn solve_mw_with_cap(g: &RedBlueGraph, k: usize, gamma: usize, cap: usize) -> Result<SolveResult, MwError> {
    let (outcome, elapsed) = timed(|| -> Result<_, MwError> {
        let solved = fill(g, cap)?;
        let Some(root) = solved.tree.root() else {
            return Ok((0, Certificate::empty(g)));
        };
        let size = solved.tables[root].get(gamma);
        let mut cert = Certificate::empty(g);
        solved.witness(g, root, gamma, &mut cert);
        debug_assert_eq!(cert.deleted.len(), size);
        debug_assert!(g.verify_certificate(&cert, size, gamma).is_ok());
        Ok((size, cert))
    });
    let (size, cert) = outcome?;
    Ok(SolveResult {
        answer: size <= k,
        min_deletions: Some(size),
        witness: Some(cert),
        solver: SolverKind::ModularWidth,
        elapsed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{c4_all, uniform};
    use crate::graph::Color;

    fn single(color: Color) -> RedBlueGraph {
        uniform(1, color, &[])
    }

    #[test]
    fn leaf_rules() {
        assert_eq!(compute_leaf_table(&single(Color::Red), 0).get(0), 0);
        assert_eq!(compute_leaf_table(&single(Color::Blue), 0).get(5), 1);
        let rb = compute_leaf_table(&single(Color::RedBlue), 0);
        assert_eq!((rb.get(0), rb.get(1)), (1, 0));
    }

    #[test]
    fn single_vertex_instances() {
        assert!(solve_mw(&single(Color::RedBlue), 0, 1).unwrap().answer);
        assert!(!solve_mw(&single(Color::Blue), 0, 3).unwrap().answer);
    }

    #[test]
    fn c4() {
        let g = c4_all();
        assert!(solve_mw(&g, 1, 1).unwrap().answer);
        assert!(!solve_mw(&g, 0, 1).unwrap().answer);
        assert_eq!(solve_mw(&g, 0, 2).unwrap().min_deletions, Some(0));
    }

    #[test]
    fn series_of_two_red_blue_leaves() {
        let leaf = compute_leaf_table(&single(Color::RedBlue), 0);
        let kids = [ChildSummary { table: &leaf, reds: 1, blues: 1 }; 2];
        let f = combine_node(&[0b10, 0b01], &kids);
        assert_eq!(f.get(1), 0);
        assert_eq!(f.get(0), 2);
    }

    #[test]
    fn parallel_red_and_blue() {
        let red = compute_leaf_table(&single(Color::Red), 0);
        let blue = compute_leaf_table(&single(Color::Blue), 0);
        let kids = [
            ChildSummary { table: &red, reds: 1, blues: 0 },
            ChildSummary { table: &blue, reds: 0, blues: 1 },
        ];
        let f = combine_node(&[0, 0], &kids);
        assert_eq!(f.values(), &[1, 1]);
    }

    #[test]
    fn tables_are_monotone() {
        let g = uniform(6, Color::RedBlue, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let (_, tables) = node_tables(&g).unwrap();
        for t in tables {
            assert!(t.values().windows(2).all(|w| w[1] <= w[0]));
        }
    }
}
