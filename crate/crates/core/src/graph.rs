//! Red-blue graphs, domination predicates and certificate checking.
//!
//! Vertices are indexed `0..n` in memory. The on-disk `rbg` format and all
//! user-facing output use 1-based ids.

use std::fmt::Write as _;

use thiserror::Error;

use crate::vertex_set::VertexSet;

pub type Vertex = usize;

/// Vertex color as carried by the clique-width DSL and generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Red,
    Blue,
    RedBlue,
}

impl Color {
    pub fn is_red(self) -> bool {
        matches!(self, Color::Red | Color::RedBlue)
    }

    pub fn is_blue(self) -> bool {
        matches!(self, Color::Blue | Color::RedBlue)
    }

    pub fn from_flags(red: bool, blue: bool) -> Option<Color> {
        match (red, blue) {
            (true, true) => Some(Color::RedBlue),
            (true, false) => Some(Color::Red),
            (false, true) => Some(Color::Blue),
            (false, false) => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Color::Red => "r",
            Color::Blue => "b",
            Color::RedBlue => "rb",
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("vertex {0} has no color")]
    Uncolored(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
}

/// An undirected simple graph whose vertices are red, blue, or both.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RedBlueGraph {
    adj: Vec<VertexSet>,
    red: VertexSet,
    blue: VertexSet,
}

impl RedBlueGraph {
    /// Builds a graph from 0-based edges and per-vertex colors.
    pub fn new(colors: &[Color], edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let n = colors.len();
        let mut g = Self {
            adj: vec![VertexSet::new(n); n],
            red: VertexSet::new(n),
            blue: VertexSet::new(n),
        };
        for (v, c) in colors.iter().enumerate() {
            if c.is_red() {
                g.red.insert(v);
            }
            if c.is_blue() {
                g.blue.insert(v);
            }
        }
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from explicit color sets. Every vertex must be in `red ∪ blue`.
    pub fn from_sets(red: VertexSet, blue: VertexSet, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let n = red.capacity();
        assert_eq!(blue.capacity(), n);
        if let Some(v) = red.union(&blue).complement().first() {
            return Err(GraphError::Uncolored(v + 1));
        }
        let mut g = Self {
            adj: vec![VertexSet::new(n); n],
            red,
            blue,
        };
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn empty() -> Self {
        Self {
            adj: Vec::new(),
            red: VertexSet::new(0),
            blue: VertexSet::new(0),
        }
    }

    fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<bool, GraphError> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::OutOfRange { vertex: x + 1, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u + 1));
        }
        let fresh = self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(fresh)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn red(&self) -> &VertexSet {
        &self.red
    }

    pub fn blue(&self) -> &VertexSet {
        &self.blue
    }

    pub fn is_red(&self, v: Vertex) -> bool {
        self.red.contains(v)
    }

    pub fn is_blue(&self, v: Vertex) -> bool {
        self.blue.contains(v)
    }

    pub fn color(&self, v: Vertex) -> Color {
        Color::from_flags(self.is_red(v), self.is_blue(v)).expect("every vertex is colored")
    }

    pub fn neighbors(&self, v: Vertex) -> &VertexSet {
        &self.adj[v]
    }

    pub fn closed_neighborhood(&self, v: Vertex) -> VertexSet {
        let mut s = self.adj[v].clone();
        s.insert(v);
        s
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].contains(v)
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n()
    }

    /// Edges `(u, v)` with `u < v`, in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices()
            .flat_map(move |u| self.adj[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.n())
    }

    pub fn set_of(&self, vertices: impl IntoIterator<Item = Vertex>) -> VertexSet {
        VertexSet::from_iter_with_capacity(self.n(), vertices)
    }

    /// Subgraph induced by `keep`, renumbered densely in ascending original order.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<InducedSubgraph, GraphError> {
        if keep.capacity() > self.n() {
            if let Some(v) = keep.iter().find(|&v| v >= self.n()) {
                return Err(GraphError::OutOfRange { vertex: v + 1, n: self.n() });
            }
        }
        let original: Vec<Vertex> = keep.iter().collect();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in original.iter().enumerate() {
            index[v] = i;
        }
        let k = original.len();
        let mut red = VertexSet::new(k);
        let mut blue = VertexSet::new(k);
        let mut adj = vec![VertexSet::new(k); k];
        for (i, &v) in original.iter().enumerate() {
            if self.is_red(v) {
                red.insert(i);
            }
            if self.is_blue(v) {
                blue.insert(i);
            }
            for u in self.adj[v].iter() {
                if index[u] != usize::MAX {
                    adj[i].insert(index[u]);
                }
            }
        }
        Ok(InducedSubgraph {
            graph: RedBlueGraph { adj, red, blue },
            original,
        })
    }

    /// Whether `dominators` dominates every blue vertex through closed neighborhoods.
    pub fn is_rb_dominating(&self, dominators: &VertexSet) -> Result<bool, CertificateViolation> {
        if !dominators.is_subset(&self.red) {
            return Err(CertificateViolation::DominatorNotRed);
        }
        Ok(self.undominated_blues(dominators).is_empty())
    }

    /// Blue vertices with no member of `dominators` in their closed neighborhood.
    pub fn undominated_blues(&self, dominators: &VertexSet) -> VertexSet {
        let mut out = self.blue.clone();
        for d in dominators.iter() {
            out.difference_with(&self.adj[d]);
            out.remove(d);
        }
        out
    }

    /// Checks `cert` against budgets `k` and `gamma`.
    pub fn verify_certificate(&self, cert: &Certificate, k: usize, gamma: usize) -> Result<(), CertificateViolation> {
        use CertificateViolation::*;
        if !cert.deleted.is_subset(&self.blue) {
            return Err(DeletedNotBlue);
        }
        if !cert.dominators.is_subset(&self.red) {
            return Err(DominatorNotRed);
        }
        if cert.deleted.intersects(&cert.dominators) {
            return Err(DominatorDeleted);
        }
        if cert.deleted.len() > k {
            return Err(TooManyDeletions);
        }
        if cert.dominators.len() > gamma {
            return Err(TooManyDominators);
        }
        let mut missed = self.undominated_blues(&cert.dominators);
        missed.difference_with(&cert.deleted);
        if !missed.is_empty() {
            return Err(Undominated(missed.first().unwrap() + 1));
        }
        Ok(())
    }

    /// Canonical `rbg` text: header, color lines by ascending id, edges in lexicographic order.
    pub fn to_rbg(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p rbg {} {}", self.n(), self.edge_count()).unwrap();
        for v in self.vertices() {
            if self.is_red(v) {
                writeln!(out, "r {}", v + 1).unwrap();
            }
            if self.is_blue(v) {
                writeln!(out, "b {}", v + 1).unwrap();
            }
        }
        for (u, v) in self.edges() {
            writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
        }
        out
    }

    pub fn parse_rbg(text: &str) -> Result<Self, GraphError> {
        parse_rbg(text)
    }
}

/// An induced subgraph together with the original id of each new vertex.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: RedBlueGraph,
    pub original: Vec<Vertex>,
}

/// A witness `(S, D)`: deleted blue vertices and red dominators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub deleted: VertexSet,
    pub dominators: VertexSet,
}

impl Certificate {
    /// No deletions and no dominators, sized for `g`.
    pub fn empty(g: &RedBlueGraph) -> Self {
        Self {
            deleted: g.empty_set(),
            dominators: g.empty_set(),
        }
    }
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum CertificateViolation {
    #[error("a deleted vertex is not blue")]
    DeletedNotBlue,
    #[error("a dominator is not red")]
    DominatorNotRed,
    #[error("a dominator was deleted")]
    DominatorDeleted,
    #[error("deletion budget exceeded")]
    TooManyDeletions,
    #[error("domination budget exceeded")]
    TooManyDominators,
    #[error("blue vertex {0} is neither deleted nor dominated")]
    Undominated(usize),
}

/// How the domination target is given: directly, or as a decrease of `γ_rb(G)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DominationTarget {
    Gamma(usize),
    Alpha(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub k: usize,
    pub target: DominationTarget,
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum BudgetError {
    #[error("the red-blue domination number is infeasible: some blue vertex sees no red vertex")]
    InfeasibleDomination,
    #[error("alpha {alpha} exceeds the red-blue domination number {gamma_rb}")]
    AlphaTooLarge { alpha: usize, gamma_rb: usize },
}

impl Budgets {
    /// Resolves the domination budget given `γ_rb(G)` (`None` when infeasible).
    pub fn resolve_gamma(&self, gamma_rb: Option<usize>) -> Result<usize, BudgetError> {
        match self.target {
            DominationTarget::Gamma(g) => Ok(g),
            DominationTarget::Alpha(alpha) => {
                let gamma_rb = gamma_rb.ok_or(BudgetError::InfeasibleDomination)?;
                gamma_rb
                    .checked_sub(alpha)
                    .ok_or(BudgetError::AlphaTooLarge { alpha, gamma_rb })
            }
        }
    }
}

fn parse_rbg(text: &str) -> Result<RedBlueGraph, GraphError> {
    let err = |line: usize, message: String| GraphError::Parse { line, message };
    let mut header: Option<(usize, usize)> = None;
    let mut red = VertexSet::new(0);
    let mut blue = VertexSet::new(0);
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let kind = tokens.next().unwrap();
        let nums: Vec<&str> = tokens.collect();
        let parse_num = |s: &str| -> Result<usize, GraphError> {
            s.parse::<usize>().map_err(|_| err(line_no, format!("expected a non-negative integer, found `{s}`")))
        };
        match kind {
            "p" => {
                if header.is_some() {
                    return Err(err(line_no, "duplicate header".into()));
                }
                if nums.len() != 3 || nums[0] != "rbg" {
                    return Err(err(line_no, "expected `p rbg <n> <m>`".into()));
                }
                let n = parse_num(nums[1])?;
                let m = parse_num(nums[2])?;
                red = VertexSet::new(n);
                blue = VertexSet::new(n);
                header = Some((n, m));
            }
            "r" | "b" | "e" => {
                let (n, _) = header.ok_or_else(|| err(line_no, "line before `p rbg` header".into()))?;
                let arity = if kind == "e" { 2 } else { 1 };
                if nums.len() != arity {
                    return Err(err(line_no, format!("`{kind}` takes {arity} vertex id(s)")));
                }
                let mut ids = [0usize; 2];
                for (slot, s) in ids.iter_mut().zip(&nums) {
                    let v = parse_num(s)?;
                    if v == 0 || v > n {
                        return Err(err(line_no, format!("vertex id {v} out of range 1..={n}")));
                    }
                    *slot = v - 1;
                }
                match kind {
                    "r" => {
                        red.insert(ids[0]);
                    }
                    "b" => {
                        blue.insert(ids[0]);
                    }
                    _ => edges.push((line_no, ids[0], ids[1])),
                }
            }
            other => return Err(err(line_no, format!("unknown line type `{other}`"))),
        }
    }

    let (n, m) = header.ok_or_else(|| err(0, "missing `p rbg` header".into()))?;
    if edges.len() != m {
        return Err(err(
            edges.last().map_or(0, |e| e.0),
            format!("header declares {m} edges but {} edge lines were found", edges.len()),
        ));
    }
    let mut g = RedBlueGraph {
        adj: vec![VertexSet::new(n); n],
        red,
        blue,
    };
    if let Some(v) = g.red.union(&g.blue).complement().first() {
        return Err(GraphError::Uncolored(v + 1));
    }
    for (line_no, u, v) in edges {
        match g.add_edge(u, v) {
            Ok(true) => {}
            Ok(false) => return Err(err(line_no, format!("duplicate edge {} {}", u + 1, v + 1))),
            Err(GraphError::SelfLoop(x)) => return Err(err(line_no, format!("self-loop at vertex {x}"))),
            Err(e) => return Err(e),
        }
    }
    Ok(g)
}
