//! Non-planar rooted trees, forests and admissible cuts.
//!
//! A [`Tree`] keeps its children sorted by the canonical order, so two values
//! compare equal exactly when they are isomorphic as rooted trees. The total
//! order compares vertex counts first and then the sorted child lists
//! lexicographically. Among the two trees with three vertices this puts the
//! cherry `[[][]]` before the ladder `[[[]]]`, since the cherry's first child
//! is a single vertex.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A canonical non-planar rooted tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    // Field order matters: the derived ordering compares the degree first.
    degree: usize,
    children: Vec<Tree>,
}

impl Tree {
    /// The single-vertex tree.
    pub fn leaf() -> Self {
        Tree {
            degree: 1,
            children: Vec::new(),
        }
    }

    /// Attach `children` below a fresh root.
    pub fn graft(mut children: Vec<Tree>) -> Self {
        children.sort();
        let degree = 1 + children.iter().map(Tree::degree).sum::<usize>();
        Tree { degree, children }
    }

    /// The ladder (path) with `n` vertices.
    pub fn ladder(n: usize) -> Self {
        assert!(n >= 1, "a ladder needs at least one vertex");
        (1..n).fold(Tree::leaf(), |t, _| Tree::graft(vec![t]))
    }

    /// A root carrying `n - 1` leaves.
    pub fn corolla(n: usize) -> Self {
        assert!(n >= 1, "a corolla needs at least one vertex");
        Tree::graft(vec![Tree::leaf(); n - 1])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Number of edges, one per non-root vertex.
    pub fn edge_count(&self) -> usize {
        self.degree - 1
    }

    pub fn to_bracket(&self) -> String {
        let mut s = String::with_capacity(2 * self.degree);
        self.write_bracket(&mut s);
        s
    }

    fn write_bracket(&self, out: &mut String) {
        out.push('[');
        for c in &self.children {
            c.write_bracket(out);
        }
        out.push(']');
    }

    /// All subtrees in preorder, paired with the preorder index of their parent.
    fn preorder(&self) -> Vec<(&Tree, Option<usize>)> {
        fn walk<'a>(t: &'a Tree, parent: Option<usize>, out: &mut Vec<(&'a Tree, Option<usize>)>) {
            let me = out.len();
            out.push((t, parent));
            for c in &t.children {
                walk(c, Some(me), out);
            }
        }
        let mut out = Vec::with_capacity(self.degree);
        walk(self, None, &mut out);
        out
    }

    /// Rebuild the tree without the subtrees whose preorder index is in `removed`.
    fn without(&self, removed: &[bool]) -> Tree {
        fn build(t: &Tree, idx: &mut usize, removed: &[bool]) -> Tree {
            *idx += 1;
            let mut kept = Vec::new();
            for c in &t.children {
                if removed[*idx] {
                    *idx += c.degree;
                } else {
                    kept.push(build(c, idx, removed));
                }
            }
            Tree::graft(kept)
        }
        let mut idx = 0;
        build(self, &mut idx, removed)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bracket())
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({})", self.to_bracket())
    }
}

/// The canonical total order on trees.
pub fn canonical_order(a: &Tree, b: &Tree) -> Ordering {
    a.cmp(b)
}

/// A commutative monomial of trees. The empty forest is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Forest {
    trees: Vec<Tree>,
    degree: usize,
}

impl Forest {
    pub fn unit() -> Self {
        Forest::default()
    }

    pub fn new(mut trees: Vec<Tree>) -> Self {
        trees.sort();
        let degree = trees.iter().map(Tree::degree).sum();
        Forest { trees, degree }
    }

    pub fn single(t: Tree) -> Self {
        let degree = t.degree();
        Forest {
            trees: vec![t],
            degree,
        }
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_unit(&self) -> bool {
        self.trees.is_empty()
    }

    /// The tree, when the forest consists of exactly one.
    pub fn as_tree(&self) -> Option<&Tree> {
        match self.trees.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }

    /// Multiset union.
    pub fn mul(&self, other: &Forest) -> Forest {
        let mut trees = Vec::with_capacity(self.trees.len() + other.trees.len());
        trees.extend_from_slice(&self.trees);
        trees.extend_from_slice(&other.trees);
        trees.sort();
        Forest {
            trees,
            degree: self.degree + other.degree,
        }
    }

    /// Space-separated bracket strings; the unit renders as `1`.
    pub fn to_text(&self) -> String {
        if self.trees.is_empty() {
            return "1".to_string();
        }
        self.trees
            .iter()
            .map(Tree::to_bracket)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl Ord for Forest {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then(self.trees.len().cmp(&other.trees.len()))
            .then_with(|| self.trees.cmp(&other.trees))
    }
}

impl PartialOrd for Forest {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Tree> for Forest {
    fn from(t: Tree) -> Self {
        Forest::single(t)
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Forest({})", self.to_text())
    }
}

/// An admissible cut: the pruned forest and the root-carrying cotree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cut {
    pub pruned: Forest,
    pub cotree: Tree,
}

impl Cut {
    /// Number of cut edges.
    pub fn size(&self) -> usize {
        self.pruned.trees().len()
    }
}

/// Parse a bracket string such as `[[][]]` into its canonical tree.
pub fn parse_tree(text: &str) -> Result<Tree> {
    let bytes = text.as_bytes();
    let mut pos = skip_ws(bytes, 0);
    if pos >= bytes.len() {
        return Err(parse_err(pos, "empty input"));
    }
    let tree = parse_node(bytes, &mut pos)?;
    let end = skip_ws(bytes, pos);
    if end != bytes.len() {
        return Err(parse_err(end, "trailing characters after the root"));
    }
    Ok(tree)
}

/// Parse a whitespace-separated list of bracket strings into a forest.
/// The literal `1` denotes the empty forest.
pub fn parse_forest(text: &str) -> Result<Forest> {
    let trimmed = text.trim();
    if trimmed == "1" {
        return Ok(Forest::unit());
    }
    let bytes = text.as_bytes();
    let mut pos = skip_ws(bytes, 0);
    let mut trees = Vec::new();
    while pos < bytes.len() {
        trees.push(parse_node(bytes, &mut pos)?);
        pos = skip_ws(bytes, pos);
    }
    if trees.is_empty() {
        return Err(parse_err(pos, "empty forest"));
    }
    Ok(Forest::new(trees))
}

pub(crate) fn parse_node(bytes: &[u8], pos: &mut usize) -> Result<Tree> {
    if bytes.get(*pos) != Some(&b'[') {
        return Err(parse_err(*pos, "expected '['"));
    }
    *pos += 1;
    let mut children = Vec::new();
    loop {
        *pos = skip_ws(bytes, *pos);
        match bytes.get(*pos) {
            Some(b'[') => children.push(parse_node(bytes, pos)?),
            Some(b']') => {
                *pos += 1;
                return Ok(Tree::graft(children));
            }
            Some(_) => return Err(parse_err(*pos, "unexpected character")),
            None => return Err(parse_err(*pos, "unbalanced brackets")),
        }
    }
}

fn skip_ws(bytes: &[u8], mut pos: usize) -> usize {
    while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
        pos += 1;
    }
    pos
}

fn parse_err(pos: usize, msg: &str) -> Error {
    Error::Parse {
        pos,
        msg: msg.to_string(),
    }
}

/// Product over all vertices of the size of the subtree they root.
pub fn tree_factorial(t: &Tree) -> u64 {
    t.degree as u64 * t.children.iter().map(tree_factorial).product::<u64>()
}

/// The same number computed edge by edge: every primitive cut contributes the
/// size of the subtree it prunes, and the root contributes the whole tree.
pub fn tree_factorial_by_edges(t: &Tree) -> u64 {
    admissible_cuts(t)
        .iter()
        .filter(|c| c.size() == 1)
        .map(|c| c.pruned.degree() as u64)
        .product::<u64>()
        * t.degree as u64
}

/// All admissible cuts of `t`, excluding the empty and the full cut.
///
/// Every non-root vertex owns its incoming edge; a subset of edges is
/// admissible when no chosen vertex lies below another chosen vertex.
pub fn admissible_cuts(t: &Tree) -> Vec<Cut> {
    let nodes = t.preorder();
    let n = nodes.len();
    let edges: Vec<usize> = (1..n).collect();
    let is_ancestor = |anc: usize, mut v: usize| -> bool {
        while let Some(p) = nodes[v].1 {
            if p == anc {
                return true;
            }
            v = p;
        }
        false
    };

    let mut cuts = Vec::new();
    for mask in 1u64..(1u64 << edges.len()) {
        let chosen: Vec<usize> = edges
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask & (1 << bit) != 0)
            .map(|(_, &v)| v)
            .collect();
        let admissible = chosen
            .iter()
            .all(|&a| chosen.iter().all(|&b| a == b || !is_ancestor(a, b)));
        if !admissible {
            continue;
        }
        let mut removed = vec![false; n];
        for &v in &chosen {
            removed[v] = true;
        }
        let pruned = Forest::new(chosen.iter().map(|&v| nodes[v].0.clone()).collect());
        cuts.push(Cut {
            pruned,
            cotree: t.without(&removed),
        });
    }
    cuts.sort();
    cuts
}

/// All trees with exactly `n` vertices, in canonical order.
pub fn enumerate_trees(n: usize) -> Vec<Tree> {
    if n == 0 {
        return Vec::new();
    }
    let mut by_degree: Vec<Vec<Tree>> = vec![Vec::new(), vec![Tree::leaf()]];
    for d in 2..=n {
        let smaller: Vec<Tree> = by_degree[1..d].iter().flatten().cloned().collect();
        let mut trees: Vec<Tree> = multisets(&smaller, d - 1)
            .into_iter()
            .map(Tree::graft)
            .collect();
        trees.sort();
        by_degree.push(trees);
    }
    by_degree.swap_remove(n)
}

/// All trees with between one and `n` vertices, in canonical order.
pub fn trees_up_to(n: usize) -> Vec<Tree> {
    let mut out = Vec::new();
    for d in 1..=n {
        out.extend(enumerate_trees(d));
    }
    out
}

/// All forests of total degree exactly `n` (the unit for `n = 0`).
pub fn enumerate_forests(n: usize) -> Vec<Forest> {
    if n == 0 {
        return vec![Forest::unit()];
    }
    let pool = trees_up_to(n);
    let mut out: Vec<Forest> = multisets(&pool, n).into_iter().map(Forest::new).collect();
    out.sort();
    out
}

/// All forests of total degree at most `n`, including the unit.
pub fn forests_up_to(n: usize) -> Vec<Forest> {
    (0..=n).flat_map(enumerate_forests).collect()
}

/// Non-decreasing selections from `pool` (sorted by degree) with degree sum `target`.
fn multisets(pool: &[Tree], target: usize) -> Vec<Vec<Tree>> {
    fn go(pool: &[Tree], start: usize, left: usize, cur: &mut Vec<Tree>, out: &mut Vec<Vec<Tree>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            let d = pool[i].degree();
            if d > left {
                break;
            }
            cur.push(pool[i].clone());
            go(pool, i, left - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, 0, target, &mut Vec::new(), &mut out);
    out
}
