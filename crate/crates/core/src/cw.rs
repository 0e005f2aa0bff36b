//! Red-blue reinforcement over a clique-width expression.
//!
//! Every expression node `t` gets a table `f_t(α, β, m)`: the fewest deletions
//! `S_t` such that some `D_t ⊆ R_t ∖ S_t` with `|D_t| ≤ m` satisfies
//!
//! * for every label `i` with `α_i = 1`, each blue vertex labeled `i` is in
//!   `S_t` or has a neighbor (or itself) in `D_t`;
//! * for every label `i`, `D_t` holds a vertex labeled `i` iff `β_i = 1`.
//!
//! Labels are renumbered densely to `0..L`, and `α`, `β` are bitmasks over
//! them. `m` is stored for `0..=|R_t|` only, since larger budgets change
//! nothing.

pub mod convolution;

use rayon::prelude::*;
use thiserror::Error;

use crate::decomp::cw_expr::{CwEvalError, CwExpr, Label};
use crate::graph::{Certificate, Color, RedBlueGraph, Vertex};
use crate::solve::{timed, SolveResult, SolverKind};

pub use convolution::fast_minplus_cover_convolution;

/// Cell value for "no `(S_t, D_t)` fits".
pub const INF: u32 = u32::MAX;
pub const DEFAULT_MAX_LABELS: usize = 10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum UnionMode {
    /// Enumerates every pair of finite cells `(β_1, β_2)`.
    #[default]
    Naive,
    /// Min-plus cover product through ranked zeta and Möbius transforms.
    Fast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CwOptions {
    pub union_mode: UnionMode,
    /// Keep every table and rebuild `(S, D)` from the root optimum.
    pub witness: bool,
    pub max_labels: usize,
}

impl Default for CwOptions {
    fn default() -> Self {
        Self {
            union_mode: UnionMode::Naive,
            witness: false,
            max_labels: DEFAULT_MAX_LABELS,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CwSolveError {
    #[error("invalid expression: {0}")]
    Expression(#[from] CwEvalError),
    #[error("the expression does not evaluate to the input graph")]
    Mismatch,
    #[error("expression uses {labels} labels; the limit is {cap}")]
    TooManyLabels { labels: usize, cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CwTable {
    labels: usize,
    max_m: usize,
    values: Vec<u32>,
}

impl CwTable {
    pub fn new(labels: usize, max_m: usize) -> Self {
        Self {
            labels,
            max_m,
            values: vec![INF; (1 << (2 * labels)) * (max_m + 1)],
        }
    }

    pub fn labels(&self) -> usize {
        self.labels
    }

    /// Largest stored `m`; queries above it read this entry.
    pub fn max_m(&self) -> usize {
        self.max_m
    }

    fn idx(&self, alpha: usize, beta: usize, m: usize) -> usize {
        (((alpha << self.labels) | beta) * (self.max_m + 1)) + m.min(self.max_m)
    }

    pub fn get(&self, alpha: usize, beta: usize, m: usize) -> u32 {
        self.values[self.idx(alpha, beta, m)]
    }

    pub fn set(&mut self, alpha: usize, beta: usize, m: usize, value: u32) {
        let i = self.idx(alpha, beta, m);
        self.values[i] = value;
    }

    /// Drops the entries above `max_m`.
    pub fn truncated(self, max_m: usize) -> CwTable {
        if max_m >= self.max_m {
            return self;
        }
        let mut t = CwTable::new(self.labels, max_m);
        let full = 1 << self.labels;
        for alpha in 0..full {
            for beta in 0..full {
                for m in 0..=max_m {
                    t.set(alpha, beta, m, self.get(alpha, beta, m));
                }
            }
        }
        t
    }

    fn alpha_slice(&self) -> usize {
        (1 << self.labels) * (self.max_m + 1)
    }

    /// Nonincreasing in `m` and nondecreasing in `α`.
    pub fn is_monotone(&self) -> bool {
        let full = 1 << self.labels;
        for alpha in 0..full {
            for beta in 0..full {
                for m in 1..=self.max_m {
                    if self.get(alpha, beta, m) > self.get(alpha, beta, m - 1) {
                        return false;
                    }
                }
                for i in 0..self.labels {
                    if alpha >> i & 1 == 1 {
                        for m in 0..=self.max_m {
                            if self.get(alpha ^ 1 << i, beta, m) > self.get(alpha, beta, m) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

fn add(a: u32, b: u32) -> u32 {
    if a == INF || b == INF {
        INF
    } else {
        a + b
    }
}

/// Table of a single vertex with label `label` (0-based).
pub fn introduce_table(labels: usize, label: usize, color: Color) -> CwTable {
    let mut t = CwTable::new(labels, usize::from(color.is_red()));
    let unit = 1 << label;
    for alpha in 0..1usize << labels {
        let need = (alpha >> label & 1) as u32;
        match color {
            Color::Red => {
                t.set(alpha, 0, 0, 0);
                t.set(alpha, 0, 1, 0);
                t.set(alpha, unit, 1, 0);
            }
            Color::Blue => t.set(alpha, 0, 0, need),
            Color::RedBlue => {
                t.set(alpha, unit, 1, 0);
                t.set(alpha, 0, 0, need);
                t.set(alpha, 0, 1, need);
            }
        }
    }
    t
}

fn with_bits(mask: usize, i: usize, p: bool, j: usize, q: bool) -> usize {
    let mut out = mask & !(1 << i) & !(1 << j);
    if p {
        out |= 1 << i;
    }
    if q {
        out |= 1 << j;
    }
    out
}

/// Child cells whose minimum defines a rename cell, in a fixed order.
fn rename_sources(i: usize, j: usize, alpha: usize, beta: usize) -> Vec<(usize, usize)> {
    if beta >> i & 1 == 1 {
        return Vec::new();
    }
    let aj = alpha >> j & 1 == 1;
    let a = with_bits(alpha, i, aj, j, aj);
    if beta >> j & 1 == 0 {
        vec![(a, with_bits(beta, i, false, j, false))]
    } else {
        vec![
            (a, with_bits(beta, i, true, j, true)),
            (a, with_bits(beta, i, true, j, false)),
            (a, with_bits(beta, i, false, j, true)),
        ]
    }
}

/// Relabels `i` to `j` (0-based).
pub fn rename_table(child: &CwTable, i: usize, j: usize) -> CwTable {
    if i == j {
        return child.clone();
    }
    let mut t = CwTable::new(child.labels, child.max_m);
    let full = 1 << child.labels;
    for alpha in 0..full {
        for beta in 0..full {
            let sources = rename_sources(i, j, alpha, beta);
            for m in 0..=child.max_m {
                let v = sources.iter().map(|&(a, b)| child.get(a, b, m)).min().unwrap_or(INF);
                t.set(alpha, beta, m, v);
            }
        }
    }
    t
}

/// `α` values of the child whose minimum defines a join cell.
fn join_sources(i: usize, j: usize, alpha: usize, beta: usize) -> Vec<usize> {
    let (ai, aj) = (alpha >> i & 1 == 1, alpha >> j & 1 == 1);
    let (bi, bj) = (beta >> i & 1 == 1, beta >> j & 1 == 1);
    let clear_i = alpha & !(1 << i);
    let clear_j = alpha & !(1 << j);
    match (ai, aj) {
        (false, false) => vec![alpha],
        (true, false) if bj => vec![alpha, clear_i],
        (false, true) if bi => vec![alpha, clear_j],
        (true, false) | (false, true) => vec![alpha],
        (true, true) => match (bi, bj) {
            (false, false) => vec![alpha],
            (true, false) => vec![alpha, clear_j],
            (false, true) => vec![alpha, clear_i],
            (true, true) => vec![clear_i & clear_j, clear_i, clear_j, alpha],
        },
    }
}

/// Adds all edges between labels `i` and `j` (0-based, distinct).
pub fn join_table(child: &CwTable, i: usize, j: usize) -> CwTable {
    assert_ne!(i, j, "join of a label with itself");
    let mut t = CwTable::new(child.labels, child.max_m);
    let full = 1 << child.labels;
    for alpha in 0..full {
        for beta in 0..full {
            let sources = join_sources(i, j, alpha, beta);
            for m in 0..=child.max_m {
                let v = sources.iter().map(|&a| child.get(a, beta, m)).min().unwrap_or(INF);
                t.set(alpha, beta, m, v);
            }
        }
    }
    t
}

/// Disjoint union: `min` over `β_1 ∪ β_2 = β` and `m_1 + m_2 = m` of the sum.
pub fn union_tables(left: &CwTable, right: &CwTable, mode: UnionMode) -> CwTable {
    union_tables_capped(left, right, mode, usize::MAX)
}

/// [`union_tables`] storing only `m ≤ max_m`.
pub fn union_tables_capped(left: &CwTable, right: &CwTable, mode: UnionMode, max_m: usize) -> CwTable {
    assert_eq!(left.labels, right.labels);
    let labels = left.labels;
    let full = 1usize << labels;
    let mut t = CwTable::new(labels, (left.max_m + right.max_m).min(max_m));
    let slice = t.alpha_slice();
    let stride = t.max_m + 1;
    let bound = max_finite(left).max(max_finite(right));
    t.values.par_chunks_mut(slice).enumerate().for_each(|(alpha, out)| {
        let column = |table: &CwTable, m: usize| -> Vec<u32> { (0..full).map(|b| table.get(alpha, b, m)).collect() };
        let lefts: Vec<Vec<u32>> = (0..=left.max_m.min(stride - 1)).map(|m| column(left, m)).collect();
        let rights: Vec<Vec<u32>> = (0..=right.max_m.min(stride - 1)).map(|m| column(right, m)).collect();
        let mut best = |beta: usize, m: usize, v: u32| {
            let cell = &mut out[beta * stride + m];
            if v < *cell {
                *cell = v;
            }
        };
        match mode {
            UnionMode::Naive => {
                let finite = |col: &Vec<u32>| -> Vec<(usize, u32)> {
                    col.iter().enumerate().filter(|(_, &v)| v != INF).map(|(b, &v)| (b, v)).collect()
                };
                let lf: Vec<_> = lefts.iter().map(finite).collect();
                let rf: Vec<_> = rights.iter().map(finite).collect();
                for (m1, l) in lf.iter().enumerate() {
                    for (m2, r) in rf.iter().enumerate().take(stride - m1) {
                        for &(b1, v1) in l {
                            for &(b2, v2) in r {
                                best(b1 | b2, m1 + m2, v1 + v2);
                            }
                        }
                    }
                }
            }
            UnionMode::Fast => {
                let lz: Vec<_> = lefts.iter().map(|c| convolution::Transformed::new(c, labels, bound)).collect();
                let rz: Vec<_> = rights.iter().map(|c| convolution::Transformed::new(c, labels, bound)).collect();
                for (m1, l) in lz.iter().enumerate() {
                    for (m2, r) in rz.iter().enumerate().take(stride - m1) {
                        for (beta, v) in l.cover_product(r).into_iter().enumerate() {
                            best(beta, m1 + m2, v);
                        }
                    }
                }
            }
        }
        // `|D| ≤ m` semantics: a larger budget never hurts.
        for beta in 0..full {
            for m in 1..stride {
                let prev = out[beta * stride + m - 1];
                if prev < out[beta * stride + m] {
                    out[beta * stride + m] = prev;
                }
            }
        }
    });
    t
}

fn max_finite(t: &CwTable) -> u32 {
    t.values.iter().copied().filter(|&v| v != INF).max().unwrap_or(0)
}

/// An expression flattened into an arena, with dense 0-based labels and
/// 0-based graph vertices.
#[derive(Clone, Debug)]
enum Node {
    Vertex { v: Vertex, label: usize, color: Color },
    Rename { from: usize, to: usize, child: usize },
    Join { a: usize, b: usize, child: usize },
    Union { left: usize, right: usize },
}

struct Arena {
    nodes: Vec<Node>,
    labels: usize,
}

impl Arena {
    /// `position` maps an expression vertex id to its graph vertex.
    fn new(expr: &CwExpr, position: &dyn Fn(usize) -> Vertex) -> Self {
        let used = expr.labels();
        let dense = |l: Label| used.binary_search(&l).expect("label collected");
        let mut arena = Arena {
            nodes: Vec::new(),
            labels: used.len(),
        };
        arena.push(expr, &dense, position);
        arena
    }

    /// Children are pushed before parents, so the root is last.
    fn push(&mut self, e: &CwExpr, dense: &dyn Fn(Label) -> usize, position: &dyn Fn(usize) -> Vertex) -> usize {
        let node = match e {
            CwExpr::Vertex { id, label, color } => Node::Vertex {
                v: position(*id),
                label: dense(*label),
                color: *color,
            },
            CwExpr::Rename { from, to, child } => Node::Rename {
                from: dense(*from),
                to: dense(*to),
                child: self.push(child, dense, position),
            },
            CwExpr::Join { a, b, child } => Node::Join {
                a: dense(*a),
                b: dense(*b),
                child: self.push(child, dense, position),
            },
            CwExpr::Union(l, r) => {
                let left = self.push(l, dense, position);
                let right = self.push(r, dense, position);
                Node::Union { left, right }
            }
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Fills tables bottom-up, storing `m ≤ max_m` only. With `keep` every
    /// table is returned; otherwise only the root's survives.
    fn fill(&self, mode: UnionMode, keep: bool, max_m: usize) -> Vec<Option<CwTable>> {
        let mut tables: Vec<Option<CwTable>> = vec![None; self.nodes.len()];
        let take = |tables: &mut Vec<Option<CwTable>>, id: usize| -> CwTable {
            if keep {
                tables[id].clone().expect("child filled")
            } else {
                tables[id].take().expect("child filled")
            }
        };
        for (id, node) in self.nodes.iter().enumerate() {
            let table = match *node {
                Node::Vertex { label, color, .. } => introduce_table(self.labels, label, color).truncated(max_m),
                Node::Rename { from, to, child } => rename_table(&take(&mut tables, child), from, to),
                Node::Join { a, b, child } => join_table(&take(&mut tables, child), a, b),
                Node::Union { left, right } => {
                    let l = take(&mut tables, left);
                    let r = take(&mut tables, right);
                    union_tables_capped(&l, &r, mode, max_m)
                }
            };
            debug_assert!(table.is_monotone());
            tables[id] = Some(table);
        }
        tables
    }

    /// Rebuilds `(S_t, D_t)` attaining `tables[id](α, β, m)`.
    fn witness(&self, tables: &[Option<CwTable>], id: usize, alpha: usize, beta: usize, m: usize, out: &mut Certificate) {
        let table = |i: usize| tables[i].as_ref().expect("all tables kept");
        let target = table(id).get(alpha, beta, m);
        debug_assert_ne!(target, INF);
        match self.nodes[id] {
            Node::Vertex { v, label, color } => {
                if beta != 0 {
                    out.dominators.insert(v);
                } else if color.is_blue() && alpha >> label & 1 == 1 {
                    out.deleted.insert(v);
                }
            }
            Node::Rename { from, to, child } => {
                let (a, b) = if from == to {
                    (alpha, beta)
                } else {
                    rename_sources(from, to, alpha, beta)
                        .into_iter()
                        .find(|&(a, b)| table(child).get(a, b, m) == target)
                        .expect("rename source")
                };
                self.witness(tables, child, a, b, m, out);
            }
            Node::Join { a, b, child } => {
                let source = join_sources(a, b, alpha, beta)
                    .into_iter()
                    .find(|&s| table(child).get(s, beta, m) == target)
                    .expect("join source");
                self.witness(tables, child, source, beta, m, out);
            }
            Node::Union { left, right } => {
                let (l, r) = (table(left), table(right));
                let m = m.min(table(id).max_m());
                for m1 in 0..=m.min(l.max_m()) {
                    let m2 = m - m1;
                    // β_1 ⊆ β, and β_2 adds what β_1 lacks plus any part of β_1.
                    let mut b1 = beta;
                    loop {
                        let lv = l.get(alpha, b1, m1);
                        if lv != INF {
                            let rest = beta & !b1;
                            let mut extra = b1;
                            loop {
                                let b2 = rest | extra;
                                if add(lv, r.get(alpha, b2, m2)) == target {
                                    self.witness(tables, left, alpha, b1, m1, out);
                                    self.witness(tables, right, alpha, b2, m2, out);
                                    return;
                                }
                                if extra == 0 {
                                    break;
                                }
                                extra = (extra - 1) & b1;
                            }
                        }
                        if b1 == 0 {
                            break;
                        }
                        b1 = (b1 - 1) & beta;
                    }
                }
                unreachable!("union cell has a decomposition");
            }
        }
    }
}

/// Renumbers labels to `1..=L` in order of first use, preserving structure.
pub fn densify_labels(expr: &CwExpr) -> CwExpr {
    let used = expr.labels();
    let map = |l: Label| used.binary_search(&l).expect("label collected") as Label + 1;
    fn go(e: &CwExpr, map: &dyn Fn(Label) -> Label) -> CwExpr {
        match e {
            CwExpr::Vertex { id, label, color } => CwExpr::vertex(*id, map(*label), *color),
            CwExpr::Rename { from, to, child } => CwExpr::rename(map(*from), map(*to), go(child, map)),
            CwExpr::Join { a, b, child } => CwExpr::join(map(*a), map(*b), go(child, map)),
            CwExpr::Union(l, r) => CwExpr::union(go(l, map), go(r, map)),
        }
    }
    go(expr, &map)
}

/// Table at the root of `expr`, treating labels `1..=labels` as bits
/// `0..labels`. Every label in `expr` must be at most `labels`.
pub fn expression_table(expr: &CwExpr, labels: usize, mode: UnionMode) -> CwTable {
    let mut ids = Vec::new();
    expr.visit(&mut |e| {
        if let CwExpr::Vertex { id, .. } = e {
            ids.push(*id);
        }
    });
    ids.sort_unstable();
    let position = |id: usize| ids.binary_search(&id).expect("introduced");
    let mut arena = Arena::new(expr, &position);
    // Keep the caller's label numbering rather than the dense one.
    let used = expr.labels();
    assert!(used.last().is_none_or(|&l| l as usize <= labels));
    for node in arena.nodes.iter_mut() {
        let undense = |l: usize| used[l] as usize - 1;
        match node {
            Node::Vertex { label, .. } => *label = undense(*label),
            Node::Rename { from, to, .. } => {
                *from = undense(*from);
                *to = undense(*to);
            }
            Node::Join { a, b, .. } => {
                *a = undense(*a);
                *b = undense(*b);
            }
            Node::Union { .. } => {}
        }
    }
    arena.labels = labels;
    arena.fill(mode, false, usize::MAX).pop().flatten().expect("root table")
}

/// Decides `(G, k, γ)` given a clique-width expression of `G`.
pub fn solve_cw(g: &RedBlueGraph, expr: &CwExpr, k: usize, gamma: usize, options: &CwOptions) -> Result<SolveResult, CwSolveError> {
    let evaluated = expr.evaluate()?;
    if !evaluated.ids.iter().copied().eq(1..=g.n()) || evaluated.graph != *g {
        return Err(CwSolveError::Mismatch);
    }
    let labels = expr.width();
    if labels > options.max_labels {
        return Err(CwSolveError::TooManyLabels {
            labels,
            cap: options.max_labels,
        });
    }
    let (outcome, elapsed) = timed(|| {
        if g.n() == 0 {
            return (0, Some(Certificate::empty(g)));
        }
        let arena = Arena::new(expr, &|id| id - 1);
        // entries with m > γ never reach the root
        let tables = arena.fill(options.union_mode, options.witness, gamma);
        let root = tables.len() - 1;
        let table = tables[root].as_ref().expect("root table");
        let all = (1 << arena.labels) - 1;
        let mut best = (INF, 0, 0);
        for beta in 0..=all {
            for m in 0..=gamma.min(table.max_m()) {
                let v = table.get(all, beta, m);
                if v < best.0 {
                    best = (v, beta, m);
                }
            }
        }
        let witness = options.witness.then(|| {
            let mut cert = Certificate::empty(g);
            arena.witness(&tables, root, all, best.1, best.2, &mut cert);
            cert
        });
        (best.0 as usize, witness)
    });
    let (size, witness) = outcome;
    if let Some(cert) = &witness {
        debug_assert!(g.verify_certificate(cert, size, gamma).is_ok());
    }
    Ok(SolveResult {
        answer: size <= k,
        min_deletions: Some(size),
        witness,
        solver: SolverKind::CliqueWidth,
        elapsed,
    })
}
