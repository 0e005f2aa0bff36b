//! Clique-width expressions and their s-expression syntax.
//!
//! ```text
//! expr := "(v" id label color ")"      introduce vertex `id` with `label`
//!       | "(ren" i j expr ")"           relabel every i to j
//!       | "(join" i j expr ")"          connect every i-vertex to every j-vertex
//!       | "(u" expr expr ")"            disjoint union
//! color := r | b | rb
//! ```
//!
//! Vertex ids are 1-based and labels are positive. `;` starts a line comment.

use std::collections::{BTreeSet, HashSet};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::graph::{Color, RedBlueGraph};

pub type Label = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CwExpr {
    Vertex { id: usize, label: Label, color: Color },
    Rename { from: Label, to: Label, child: Box<CwExpr> },
    Join { a: Label, b: Label, child: Box<CwExpr> },
    Union(Box<CwExpr>, Box<CwExpr>),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct CwParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CwEvalError {
    #[error("vertex {0} introduced more than once")]
    DuplicateVertex(usize),
    #[error("vertex id 0 is not allowed")]
    ZeroVertex,
    #[error("label 0 is not allowed")]
    ZeroLabel,
    #[error("join of label {0} with itself")]
    SelfJoin(Label),
}

/// A red-blue graph together with the final label of every vertex. Graph
/// vertex `i` is the expression vertex `ids[i]`; ids are ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: RedBlueGraph,
    pub labels: Vec<Label>,
    pub ids: Vec<usize>,
}

impl CwExpr {
    pub fn vertex(id: usize, label: Label, color: Color) -> CwExpr {
        CwExpr::Vertex { id, label, color }
    }

    pub fn rename(from: Label, to: Label, child: CwExpr) -> CwExpr {
        CwExpr::Rename {
            from,
            to,
            child: Box::new(child),
        }
    }

    pub fn join(a: Label, b: Label, child: CwExpr) -> CwExpr {
        CwExpr::Join {
            a,
            b,
            child: Box::new(child),
        }
    }

    pub fn union(left: CwExpr, right: CwExpr) -> CwExpr {
        CwExpr::Union(Box::new(left), Box::new(right))
    }

    pub fn parse(text: &str) -> Result<CwExpr, CwParseError> {
        let mut parser = Parser::new(text);
        let expr = parser.expr()?;
        if let Some(tok) = parser.peek() {
            return Err(parser.error_at(tok.offset, "trailing input after expression"));
        }
        Ok(expr)
    }

    /// Canonical single-line text.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Distinct labels used anywhere in the expression, ascending.
    pub fn labels(&self) -> Vec<Label> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| match e {
            CwExpr::Vertex { label, .. } => {
                out.insert(*label);
            }
            CwExpr::Rename { from, to, .. } => {
                out.insert(*from);
                out.insert(*to);
            }
            CwExpr::Join { a, b, .. } => {
                out.insert(*a);
                out.insert(*b);
            }
            CwExpr::Union(..) => {}
        });
        out.into_iter().collect()
    }

    /// Number of distinct labels, the width of this expression.
    pub fn width(&self) -> usize {
        self.labels().len()
    }

    pub fn vertex_count(&self) -> usize {
        let mut count = 0;
        self.visit(&mut |e| {
            if matches!(e, CwExpr::Vertex { .. }) {
                count += 1;
            }
        });
        count
    }

    /// Pre-order traversal without recursion.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a CwExpr)) {
        let mut stack = vec![self];
        while let Some(e) = stack.pop() {
            f(e);
            match e {
                CwExpr::Vertex { .. } => {}
                CwExpr::Rename { child, .. } | CwExpr::Join { child, .. } => stack.push(child),
                CwExpr::Union(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
    }

    /// Checks ids, labels and joins without building the graph.
    pub fn check(&self) -> Result<(), CwEvalError> {
        let mut seen = HashSet::new();
        let mut result = Ok(());
        self.visit(&mut |e| {
            if result.is_err() {
                return;
            }
            result = match e {
                CwExpr::Vertex { id, label, .. } => {
                    if *id == 0 {
                        Err(CwEvalError::ZeroVertex)
                    } else if *label == 0 {
                        Err(CwEvalError::ZeroLabel)
                    } else if !seen.insert(*id) {
                        Err(CwEvalError::DuplicateVertex(*id))
                    } else {
                        Ok(())
                    }
                }
                CwExpr::Rename { from, to, .. } if *from == 0 || *to == 0 => Err(CwEvalError::ZeroLabel),
                CwExpr::Join { a, b, .. } if *a == 0 || *b == 0 => Err(CwEvalError::ZeroLabel),
                CwExpr::Join { a, b, .. } if a == b => Err(CwEvalError::SelfJoin(*a)),
                _ => Ok(()),
            };
        });
        result
    }

    /// Builds the labeled graph, numbering vertices by ascending id.
    pub fn evaluate(&self) -> Result<LabeledGraph, CwEvalError> {
        self.check()?;
        let mut intro = Vec::new();
        self.visit(&mut |e| {
            if let CwExpr::Vertex { id, color, .. } = e {
                intro.push((*id, *color));
            }
        });
        intro.sort_unstable_by_key(|&(id, _)| id);
        let ids: Vec<usize> = intro.iter().map(|&(id, _)| id).collect();
        let colors: Vec<Color> = intro.iter().map(|&(_, c)| c).collect();
        let position = |id: usize| ids.binary_search(&id).expect("introduced vertex");
        let mut edges = Vec::new();
        let members = eval_members(self, &mut edges);
        let mut labels = vec![0; ids.len()];
        for (id, l) in members {
            labels[position(id)] = l;
        }
        let edges: Vec<(usize, usize)> = edges.into_iter().map(|(u, v)| (position(u), position(v))).collect();
        let graph = RedBlueGraph::new(&colors, &edges).expect("distinct endpoints");
        Ok(LabeledGraph { graph, labels, ids })
    }

    /// True iff the expression evaluates to exactly `g`, ignoring labels:
    /// ids `1..=n` map to vertices `0..n` with the same colors and edges.
    pub fn validate(&self, g: &RedBlueGraph) -> bool {
        self.evaluate()
            .is_ok_and(|lg| lg.ids.iter().copied().eq(1..=g.n()) && lg.graph == *g)
    }

    /// A linear expression for any graph, introducing vertices in order.
    ///
    /// Introduced vertices sharing the same set of not-yet-introduced
    /// neighbours share a label, so the width is one more than the largest
    /// number of distinct such sets at any point. `None` for the empty graph.
    pub fn linear_from_graph(g: &RedBlueGraph) -> Option<CwExpr> {
        // (label, pending neighbours)
        let mut classes: Vec<(Label, BTreeSet<usize>)> = Vec::new();
        let mut expr: Option<CwExpr> = None;
        for v in g.vertices() {
            let used: HashSet<Label> = classes.iter().map(|c| c.0).collect();
            let label = (1..).find(|l| !used.contains(l)).expect("unbounded");
            let leaf = CwExpr::vertex(v + 1, label, g.color(v));
            let mut e = match expr.take() {
                None => leaf,
                Some(e) => CwExpr::union(e, leaf),
            };
            for (l, pending) in &classes {
                if pending.contains(&v) {
                    e = CwExpr::join(label, *l, e);
                }
            }
            for (_, pending) in classes.iter_mut() {
                pending.remove(&v);
            }
            classes.push((label, g.neighbors(v).iter().filter(|&u| u > v).collect()));
            let mut merged: Vec<(Label, BTreeSet<usize>)> = Vec::new();
            for (l, pending) in classes {
                match merged.iter().find(|c| c.1 == pending) {
                    Some(&(keep, _)) => e = CwExpr::rename(l, keep, e),
                    None => merged.push((l, pending)),
                }
            }
            classes = merged;
            expr = Some(e);
        }
        expr
    }
}

/// Returns `(vertex id, label)` for every vertex under `e`, appending the
/// edges created by joins.
fn eval_members(e: &CwExpr, edges: &mut Vec<(usize, usize)>) -> Vec<(usize, Label)> {
    match e {
        CwExpr::Vertex { id, label, .. } => vec![(*id, *label)],
        CwExpr::Rename { from, to, child } => {
            let mut m = eval_members(child, edges);
            for (_, l) in m.iter_mut() {
                if l == from {
                    *l = *to;
                }
            }
            m
        }
        CwExpr::Join { a, b, child } => {
            let m = eval_members(child, edges);
            for &(u, lu) in &m {
                if lu != *a {
                    continue;
                }
                for &(v, lv) in &m {
                    if lv == *b {
                        edges.push((u, v));
                    }
                }
            }
            m
        }
        CwExpr::Union(l, r) => {
            let mut m = eval_members(l, edges);
            m.extend(eval_members(r, edges));
            m
        }
    }
}

impl fmt::Display for CwExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_expr(self, &mut out);
        f.write_str(&out)
    }
}

fn write_expr(e: &CwExpr, out: &mut String) {
    match e {
        CwExpr::Vertex { id, label, color } => {
            write!(out, "(v {id} {label} {})", color.symbol()).unwrap();
        }
        CwExpr::Rename { from, to, child } => {
            write!(out, "(ren {from} {to} ").unwrap();
            write_expr(child, out);
            out.push(')');
        }
        CwExpr::Join { a, b, child } => {
            write!(out, "(join {a} {b} ").unwrap();
            write_expr(child, out);
            out.push(')');
        }
        CwExpr::Union(l, r) => {
            out.push_str("(u ");
            write_expr(l, out);
            out.push(' ');
            write_expr(r, out);
            out.push(')');
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TokKind {
    Open,
    Close,
    Atom,
}

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    kind: TokKind,
    text: &'a str,
    offset: usize,
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token<'a>>,
    pos: usize,
    seen: HashSet<usize>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let mut tokens = Vec::new();
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            match c {
                b';' => {
                    while i < bytes.len() && bytes[i] != b'\n' {
                        i += 1;
                    }
                }
                b'(' | b')' => {
                    tokens.push(Token {
                        kind: if c == b'(' { TokKind::Open } else { TokKind::Close },
                        text: &src[i..i + 1],
                        offset: i,
                    });
                    i += 1;
                }
                _ if c.is_ascii_whitespace() => i += 1,
                _ => {
                    let start = i;
                    while i < bytes.len() && !bytes[i].is_ascii_whitespace() && !matches!(bytes[i], b'(' | b')' | b';') {
                        i += 1;
                    }
                    tokens.push(Token {
                        kind: TokKind::Atom,
                        text: &src[start..i],
                        offset: start,
                    });
                }
            }
        }
        Self {
            src,
            tokens,
            pos: 0,
            seen: HashSet::new(),
        }
    }

    fn error_at(&self, offset: usize, message: impl Into<String>) -> CwParseError {
        let before = &self.src[..offset.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(before.chars().count(), |nl| before[nl + 1..].chars().count()) + 1;
        CwParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<Token<'a>> {
        self.tokens.get(self.pos).copied()
    }

    fn next(&mut self, what: &str) -> Result<Token<'a>, CwParseError> {
        let tok = self
            .peek()
            .ok_or_else(|| self.error_at(self.src.len(), format!("unexpected end of input, expected {what}")))?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect(&mut self, kind: TokKind, what: &str) -> Result<Token<'a>, CwParseError> {
        let tok = self.next(what)?;
        if tok.kind != kind {
            return Err(self.error_at(tok.offset, format!("expected {what}, found `{}`", tok.text)));
        }
        Ok(tok)
    }

    fn number(&mut self, what: &str) -> Result<(u64, usize), CwParseError> {
        let tok = self.expect(TokKind::Atom, what)?;
        tok.text
            .parse::<u64>()
            .map(|v| (v, tok.offset))
            .map_err(|_| self.error_at(tok.offset, format!("expected {what}, found `{}`", tok.text)))
    }

    fn label(&mut self) -> Result<Label, CwParseError> {
        let (v, offset) = self.number("a label")?;
        if v == 0 || v > Label::MAX as u64 {
            return Err(self.error_at(offset, "labels must be positive"));
        }
        Ok(v as Label)
    }

    fn expr(&mut self) -> Result<CwExpr, CwParseError> {
        self.expect(TokKind::Open, "`(`")?;
        let head = self.expect(TokKind::Atom, "an operator")?;
        let expr = match head.text {
            "v" => {
                let (id, offset) = self.number("a vertex id")?;
                if id == 0 {
                    return Err(self.error_at(offset, "vertex ids are 1-based"));
                }
                if !self.seen.insert(id as usize) {
                    return Err(self.error_at(offset, format!("duplicate vertex id {id}")));
                }
                let label = self.label()?;
                let color_tok = self.expect(TokKind::Atom, "a color")?;
                let color = match color_tok.text {
                    "r" => Color::Red,
                    "b" => Color::Blue,
                    "rb" => Color::RedBlue,
                    other => return Err(self.error_at(color_tok.offset, format!("unknown color `{other}`"))),
                };
                CwExpr::vertex(id as usize, label, color)
            }
            "ren" => {
                let from = self.label()?;
                let to = self.label()?;
                CwExpr::rename(from, to, self.expr()?)
            }
            "join" => {
                let a = self.label()?;
                let b = self.label()?;
                if a == b {
                    return Err(self.error_at(head.offset, format!("join of label {a} with itself")));
                }
                CwExpr::join(a, b, self.expr()?)
            }
            "u" => {
                let left = self.expr()?;
                let right = self.expr()?;
                CwExpr::union(left, right)
            }
            other => return Err(self.error_at(head.offset, format!("unknown operator `{other}`"))),
        };
        self.expect(TokKind::Close, "`)`")?;
        Ok(expr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_k2() {
        let e = CwExpr::parse("(join 1 2 (u (v 1 1 r) (v 2 2 b)))").unwrap();
        let lg = e.evaluate().unwrap();
        assert!(lg.graph.has_edge(0, 1));
        assert_eq!(lg.graph.color(0), Color::Red);
        assert_eq!(lg.graph.color(1), Color::Blue);
        assert_eq!(lg.labels, vec![1, 2]);
        let k2 = RedBlueGraph::parse_rbg("p rbg 2 1\nr 1\nb 2\ne 1 2").unwrap();
        assert!(e.validate(&k2));
        let both_red = RedBlueGraph::parse_rbg("p rbg 2 1\nr 1\nr 2\ne 1 2").unwrap();
        assert!(!e.validate(&both_red));
        let no_edge = CwExpr::parse("(u (v 1 1 r) (v 2 2 b))").unwrap();
        assert!(!no_edge.validate(&k2));
    }

    #[test]
    fn rename_single_vertex() {
        let e = CwExpr::parse("(ren 2 1 (v 3 2 rb))").unwrap();
        let lg = e.evaluate().unwrap();
        assert_eq!(lg.labels, vec![1]);
        assert_eq!(lg.ids, vec![3]);
        assert_eq!(lg.graph.color(0), Color::RedBlue);
    }

    #[test]
    fn parse_errors() {
        let self_join = CwExpr::parse("(join 1 1 (v 1 1 r))").unwrap_err();
        assert!(self_join.message.contains("itself"));
        assert!(CwExpr::parse("(u (v 1 1 r) (v 2 1 b)").is_err());
        assert!(CwExpr::parse("(x 1 1 r)").unwrap_err().message.contains("unknown operator"));
        assert!(CwExpr::parse("(v 1 0 r)").unwrap_err().message.contains("positive"));
        let dup = CwExpr::parse("(u (v 1 1 r)\n (v 1 2 b))").unwrap_err();
        assert_eq!((dup.line, dup.column), (2, 5));
        assert!(CwExpr::parse("(v 1 1 q)").is_err());
        assert!(CwExpr::parse("(v 1 1 r) (v 2 1 r)").is_err());
    }

    #[test]
    fn comments_and_whitespace() {
        let e = CwExpr::parse("; a K2\n( join 1 2\n  (u (v 1 1 r) ; left\n     (v 2 2 b) ) )").unwrap();
        assert_eq!(e.to_text(), "(join 1 2 (u (v 1 1 r) (v 2 2 b)))");
    }

    #[test]
    fn join_is_idempotent() {
        let once = CwExpr::parse("(join 1 2 (u (v 1 1 r) (v 2 2 b)))").unwrap();
        let twice = CwExpr::parse("(join 1 2 (join 1 2 (u (v 1 1 r) (v 2 2 b))))").unwrap();
        assert_eq!(once.evaluate().unwrap(), twice.evaluate().unwrap());
    }

    #[test]
    fn rename_before_join() {
        let e = CwExpr::parse("(join 1 2 (u (v 1 1 r) (ren 1 2 (v 2 1 b))))").unwrap();
        assert!(e.evaluate().unwrap().graph.has_edge(0, 1));
    }

    #[test]
    fn evaluation_errors() {
        let gap = CwExpr::parse("(u (v 1 1 r) (v 3 1 b))").unwrap();
        assert_eq!(gap.evaluate().unwrap().ids, vec![1, 3]);
        let two = RedBlueGraph::parse_rbg("p rbg 2 0\nr 1\nb 2").unwrap();
        assert!(!gap.validate(&two));
        let collide = CwExpr::union(CwExpr::vertex(1, 1, Color::Red), CwExpr::vertex(1, 1, Color::Red));
        assert_eq!(collide.evaluate(), Err(CwEvalError::DuplicateVertex(1)));
    }

    #[test]
    fn width_counts_labels() {
        let e = CwExpr::parse("(ren 3 1 (join 1 3 (u (v 1 1 r) (v 2 3 b))))").unwrap();
        assert_eq!(e.labels(), vec![1, 3]);
        assert_eq!(e.width(), 2);
    }

    #[test]
    fn linear_expression_reproduces_graph() {
        assert!(CwExpr::linear_from_graph(&RedBlueGraph::empty()).is_none());
        let colors = [Color::Red, Color::Blue, Color::Red, Color::Blue, Color::Red];
        let c5 = RedBlueGraph::new(&colors, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let e = CwExpr::linear_from_graph(&c5).unwrap();
        assert!(e.validate(&c5));
        assert!(e.width() <= 4);
        let path = RedBlueGraph::new(&[Color::Red; 6], &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        assert!(CwExpr::linear_from_graph(&path).unwrap().width() <= 3);
    }
}
