//! Slick and classic clique-width expressions.
//!
//! Both grammars are stored as flat arenas. Children always have smaller
//! indices than their parent, so a forward scan over the arena is a valid
//! bottom-up traversal and nothing here recurses on tree depth.

mod eval;
mod graph;
mod parse;
mod print;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::ExprError;

pub use eval::{eval_classic, eval_slick};
pub use graph::{graphs_equal, LabeledGraph};
pub use parse::{parse_classic, parse_slick};

/// Index of a node inside an expression arena.
pub type NodeId = usize;

/// A label in `1..=k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(u32);

impl Label {
    pub fn new(value: u32) -> Self {
        assert!(value >= 1, "labels start at 1");
        Label(value)
    }

    pub fn checked(value: u64, width: usize) -> Result<Self, ExprError> {
        if value >= 1 && value <= width as u64 {
            Ok(Label(value as u32))
        } else {
            Err(ExprError::LabelOutOfRange { label: value, width })
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Zero-based position, handy for per-label tables.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn from_index(i: usize) -> Self {
        Label(i as u32 + 1)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Vertex name, `[A-Za-z0-9_]+`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(name: impl Into<String>) -> Result<Self, ExprError> {
        let name = name.into();
        if is_ident(&name) {
            Ok(VertexId(name))
        } else {
            Err(ExprError::InvalidVertexName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Total map `[k] -> [k]`; unlisted labels map to themselves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelMap {
    image: Vec<Label>,
}

impl LabelMap {
    pub fn identity(width: usize) -> Self {
        LabelMap {
            image: (0..width).map(Label::from_index).collect(),
        }
    }

    /// Builds a map from explicit `(from, to)` pairs. Each source may appear once.
    pub fn from_pairs(width: usize, pairs: impl IntoIterator<Item = (Label, Label)>) -> Result<Self, ExprError> {
        let mut map = LabelMap::identity(width);
        let mut seen = HashSet::new();
        for (from, to) in pairs {
            for l in [from, to] {
                if l.index() >= width {
                    return Err(ExprError::LabelOutOfRange {
                        label: l.get() as u64,
                        width,
                    });
                }
            }
            if !seen.insert(from) {
                return Err(ExprError::DuplicateSource(from.get()));
            }
            map.image[from.index()] = to;
        }
        Ok(map)
    }

    /// Constant map sending every label to `target`.
    pub fn constant(width: usize, target: Label) -> Self {
        LabelMap {
            image: vec![target; width],
        }
    }

    pub fn width(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, l: Label) -> Label {
        self.image[l.index()]
    }

    pub fn set(&mut self, from: Label, to: Label) {
        self.image[from.index()] = to;
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, l)| l.index() == i)
    }

    /// Non-identity entries in ascending source order.
    pub fn pairs(&self) -> impl Iterator<Item = (Label, Label)> + '_ {
        self.image
            .iter()
            .enumerate()
            .map(|(i, &to)| (Label::from_index(i), to))
            .filter(|(from, to)| from != to)
    }

    /// All labels whose image is `target`.
    pub fn preimage(&self, target: Label) -> impl Iterator<Item = Label> + '_ {
        self.image
            .iter()
            .enumerate()
            .filter(move |(_, &to)| to == target)
            .map(|(i, _)| Label::from_index(i))
    }
}

/// Edge-creating relation `S`: `(i, j)` joins left label `i` to right label `j`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct JoinRelation(BTreeSet<(Label, Label)>);

impl JoinRelation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Strict construction: rejects repeated pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Label, Label)>) -> Result<Self, ExprError> {
        let mut rel = JoinRelation::new();
        for (a, b) in pairs {
            if !rel.insert(a, b) {
                return Err(ExprError::DuplicatePair(a.get(), b.get()));
            }
        }
        Ok(rel)
    }

    /// Returns false when the pair was already present.
    pub fn insert(&mut self, left: Label, right: Label) -> bool {
        self.0.insert((left, right))
    }

    pub fn contains(&self, left: Label, right: Label) -> bool {
        self.0.contains(&(left, right))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, Label)> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_label(&self) -> Option<Label> {
        self.0.iter().map(|&(a, b)| a.max(b)).max()
    }
}

impl FromIterator<(Label, Label)> for JoinRelation {
    fn from_iter<T: IntoIterator<Item = (Label, Label)>>(iter: T) -> Self {
        JoinRelation(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlickNode {
    Atom {
        label: Label,
        vertex: VertexId,
    },
    Join {
        s: JoinRelation,
        l: LabelMap,
        r: LabelMap,
        left: NodeId,
        right: NodeId,
    },
}

/// A slick k-expression: atoms `i(v)` combined by `⊕_{S,L,R}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlickExpr {
    width: usize,
    nodes: Vec<SlickNode>,
    root: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassicNode {
    Atom { label: Label, vertex: VertexId },
    Union { left: NodeId, right: NodeId },
    Eta { i: Label, j: Label, child: NodeId },
    Rho { from: Label, to: Label, child: NodeId },
}

/// A classic k-expression over `i(v)`, `η`, `ρ` and `⊕`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicExpr {
    width: usize,
    nodes: Vec<ClassicNode>,
    root: NodeId,
}

/// Shared checks for arena trees: children precede parents, every node but
/// the root is used exactly once, vertex names are unique.
fn check_tree<'a>(
    len: usize,
    root: NodeId,
    children: impl Iterator<Item = (NodeId, Vec<NodeId>)>,
    names: impl Iterator<Item = &'a VertexId>,
) -> Result<(), ExprError> {
    if root >= len {
        return Err(ExprError::BadRoot(root));
    }
    let mut used = vec![false; len];
    for (parent, kids) in children {
        for c in kids {
            if c >= parent {
                return Err(ExprError::ForwardReference { parent, child: c });
            }
            if std::mem::replace(&mut used[c], true) {
                return Err(ExprError::ChildReused(c));
            }
        }
    }
    if used[root] {
        return Err(ExprError::ChildReused(root));
    }
    if let Some(orphan) = (0..len).find(|&i| i != root && !used[i]) {
        return Err(ExprError::Unreachable(orphan));
    }
    let mut seen = HashSet::new();
    for name in names {
        if !seen.insert(name) {
            return Err(ExprError::DuplicateVertex(name.0.clone()));
        }
    }
    Ok(())
}

fn check_label(l: Label, width: usize) -> Result<(), ExprError> {
    Label::checked(l.get() as u64, width).map(|_| ())
}

impl SlickExpr {
    /// Validating constructor.
    pub fn from_nodes(width: usize, nodes: Vec<SlickNode>, root: NodeId) -> Result<Self, ExprError> {
        if width == 0 {
            return Err(ExprError::ZeroWidth);
        }
        for node in &nodes {
            match node {
                SlickNode::Atom { label, .. } => check_label(*label, width)?,
                SlickNode::Join { s, l, r, .. } => {
                    for (a, b) in s.iter() {
                        check_label(a, width)?;
                        check_label(b, width)?;
                    }
                    for m in [l, r] {
                        if m.width() != width {
                            return Err(ExprError::MapWidth {
                                found: m.width(),
                                expected: width,
                            });
                        }
                    }
                }
            }
        }
        check_tree(
            nodes.len(),
            root,
            nodes.iter().enumerate().map(|(i, n)| match n {
                SlickNode::Atom { .. } => (i, vec![]),
                SlickNode::Join { left, right, .. } => (i, vec![*left, *right]),
            }),
            nodes.iter().filter_map(|n| match n {
                SlickNode::Atom { vertex, .. } => Some(vertex),
                _ => None,
            }),
        )?;
        Ok(SlickExpr { width, nodes, root })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn nodes(&self) -> &[SlickNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &SlickNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of atoms, i.e. vertices of the generated graph.
    pub fn atom_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, SlickNode::Atom { .. }))
            .count()
    }

    /// Vertex names in arena order; position in this list is the vertex ordinal.
    pub fn vertices(&self) -> Vec<&VertexId> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                SlickNode::Atom { vertex, .. } => Some(vertex),
                _ => None,
            })
            .collect()
    }

    /// Same expression with a different declared width (must still cover all labels).
    pub fn with_width(self, width: usize) -> Result<Self, ExprError> {
        let nodes = self
            .nodes
            .into_iter()
            .map(|n| match n {
                SlickNode::Join { s, l, r, left, right } => SlickNode::Join {
                    s,
                    l: resize_map(&l, width),
                    r: resize_map(&r, width),
                    left,
                    right,
                },
                atom => atom,
            })
            .collect();
        SlickExpr::from_nodes(width, nodes, self.root)
    }

    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            if let SlickNode::Join { left, right, .. } = n {
                depth[i] = 1 + depth[*left].max(depth[*right]);
            }
        }
        depth[self.root]
    }

    /// The subexpression rooted at `id`, as a standalone expression.
    pub fn subexpr(&self, id: NodeId) -> SlickExpr {
        let mut keep = vec![false; self.nodes.len()];
        keep[id] = true;
        for i in (0..=id).rev() {
            if keep[i] {
                if let SlickNode::Join { left, right, .. } = &self.nodes[i] {
                    keep[*left] = true;
                    keep[*right] = true;
                }
            }
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for i in 0..=id {
            if !keep[i] {
                continue;
            }
            remap[i] = nodes.len();
            nodes.push(match &self.nodes[i] {
                SlickNode::Join { s, l, r, left, right } => SlickNode::Join {
                    s: s.clone(),
                    l: l.clone(),
                    r: r.clone(),
                    left: remap[*left],
                    right: remap[*right],
                },
                atom => atom.clone(),
            });
        }
        let root = nodes.len() - 1;
        SlickExpr {
            width: self.width,
            nodes,
            root,
        }
    }

    /// Node ids in post order (left subtree, right subtree, node).
    pub fn post_order(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((id, expanded)) = stack.pop() {
            match &self.nodes[id] {
                SlickNode::Join { left, right, .. } if !expanded => {
                    stack.push((id, true));
                    stack.push((*right, false));
                    stack.push((*left, false));
                }
                _ => out.push(id),
            }
        }
        out
    }

    /// Per-vertex degree of the generated graph without materialising edges,
    /// in `O(k^2 n)`. Indexed by vertex ordinal.
    pub fn degrees(&self) -> Vec<u64> {
        let k = self.width;
        // counts[node][label]: vertices of the subtree carrying that output label
        let mut counts: Vec<Vec<u64>> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let mut c = vec![0u64; k];
            match n {
                SlickNode::Atom { label, .. } => c[label.index()] = 1,
                SlickNode::Join { l, r, left, right, .. } => {
                    for a in 0..k {
                        c[l.apply(Label::from_index(a)).index()] += counts[*left][a];
                        c[r.apply(Label::from_index(a)).index()] += counts[*right][a];
                    }
                }
            }
            counts.push(c);
        }
        // extra[node][label]: degree gained above this node by a vertex with that output label
        let mut extra: Vec<Vec<u64>> = vec![Vec::new(); self.nodes.len()];
        extra[self.root] = vec![0; k];
        for i in (0..self.nodes.len()).rev() {
            if let SlickNode::Join { s, l, r, left, right } = &self.nodes[i] {
                let up = std::mem::take(&mut extra[i]);
                let mut el: Vec<u64> = (0..k).map(|a| up[l.apply(Label::from_index(a)).index()]).collect();
                let mut er: Vec<u64> = (0..k).map(|b| up[r.apply(Label::from_index(b)).index()]).collect();
                for (a, b) in s.iter() {
                    el[a.index()] += counts[*right][b.index()];
                    er[b.index()] += counts[*left][a.index()];
                }
                extra[*left] = el;
                extra[*right] = er;
            }
        }
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| match n {
                SlickNode::Atom { label, .. } => Some(extra[i][label.index()]),
                _ => None,
            })
            .collect()
    }
}

fn resize_map(m: &LabelMap, width: usize) -> LabelMap {
    let mut out = LabelMap::identity(width);
    for (from, to) in m.pairs() {
        if from.index() < width {
            out.set(from, to);
        }
    }
    out
}

impl ClassicExpr {
    pub fn from_nodes(width: usize, nodes: Vec<ClassicNode>, root: NodeId) -> Result<Self, ExprError> {
        if width == 0 {
            return Err(ExprError::ZeroWidth);
        }
        for node in &nodes {
            match node {
                ClassicNode::Atom { label, .. } => check_label(*label, width)?,
                ClassicNode::Eta { i, j, .. } => {
                    check_label(*i, width)?;
                    check_label(*j, width)?;
                    if i == j {
                        return Err(ExprError::EtaSameLabel(i.get()));
                    }
                }
                ClassicNode::Rho { from, to, .. } => {
                    check_label(*from, width)?;
                    check_label(*to, width)?;
                }
                ClassicNode::Union { .. } => {}
            }
        }
        check_tree(
            nodes.len(),
            root,
            nodes.iter().enumerate().map(|(i, n)| (i, classic_children(n))),
            nodes.iter().filter_map(|n| match n {
                ClassicNode::Atom { vertex, .. } => Some(vertex),
                _ => None,
            }),
        )?;
        Ok(ClassicExpr { width, nodes, root })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn nodes(&self) -> &[ClassicNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &ClassicNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn atom_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, ClassicNode::Atom { .. }))
            .count()
    }

    /// Unary operators count as one level, like joins.
    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            depth[i] = match n {
                ClassicNode::Atom { .. } => 0,
                ClassicNode::Union { left, right } => 1 + depth[*left].max(depth[*right]),
                ClassicNode::Eta { child, .. } | ClassicNode::Rho { child, .. } => 1 + depth[*child],
            };
        }
        depth[self.root]
    }

    /// Largest label mentioned anywhere in the expression.
    pub fn max_label(&self) -> Label {
        self.nodes
            .iter()
            .map(|n| match n {
                ClassicNode::Atom { label, .. } => *label,
                ClassicNode::Eta { i, j, .. } => (*i).max(*j),
                ClassicNode::Rho { from, to, .. } => (*from).max(*to),
                ClassicNode::Union { .. } => Label::new(1),
            })
            .max()
            .unwrap_or(Label::new(1))
    }
}

pub(crate) fn classic_children(n: &ClassicNode) -> Vec<NodeId> {
    match n {
        ClassicNode::Atom { .. } => vec![],
        ClassicNode::Union { left, right } => vec![*left, *right],
        ClassicNode::Eta { child, .. } | ClassicNode::Rho { child, .. } => vec![*child],
    }
}

/// Incremental arena builder for slick expressions.
#[derive(Debug, Clone)]
pub struct SlickBuilder {
    width: usize,
    nodes: Vec<SlickNode>,
}

impl SlickBuilder {
    pub fn new(width: usize) -> Self {
        SlickBuilder {
            width,
            nodes: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn atom(&mut self, label: u32, name: &str) -> NodeId {
        self.push(SlickNode::Atom {
            label: Label::new(label),
            vertex: VertexId(name.to_string()),
        })
    }

    /// Join with `S` given as raw pairs and `L`/`R` as `(from, to)` pairs.
    pub fn join(
        &mut self,
        s: &[(u32, u32)],
        l: &[(u32, u32)],
        r: &[(u32, u32)],
        left: NodeId,
        right: NodeId,
    ) -> NodeId {
        let s = s.iter().map(|&(a, b)| (Label::new(a), Label::new(b))).collect();
        let l = self.map(l);
        let r = self.map(r);
        self.join_with(s, l, r, left, right)
    }

    pub fn join_with(&mut self, s: JoinRelation, l: LabelMap, r: LabelMap, left: NodeId, right: NodeId) -> NodeId {
        self.push(SlickNode::Join { s, l, r, left, right })
    }

    fn map(&self, pairs: &[(u32, u32)]) -> LabelMap {
        let mut m = LabelMap::identity(self.width);
        for &(a, b) in pairs {
            m.set(Label::new(a), Label::new(b));
        }
        m
    }

    pub fn push(&mut self, node: SlickNode) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn node_mut(&mut self, id: NodeId) -> &mut SlickNode {
        &mut self.nodes[id]
    }

    pub fn node(&self, id: NodeId) -> &SlickNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Finishes with the last pushed node as root.
    pub fn finish(self) -> Result<SlickExpr, ExprError> {
        let root = self.nodes.len().wrapping_sub(1);
        SlickExpr::from_nodes(self.width, self.nodes, root)
    }
}

/// Incremental arena builder for classic expressions.
#[derive(Debug, Clone)]
pub struct ClassicBuilder {
    width: usize,
    nodes: Vec<ClassicNode>,
}

impl ClassicBuilder {
    pub fn new(width: usize) -> Self {
        ClassicBuilder {
            width,
            nodes: Vec::new(),
        }
    }

    pub fn atom(&mut self, label: u32, name: &str) -> NodeId {
        self.push(ClassicNode::Atom {
            label: Label::new(label),
            vertex: VertexId(name.to_string()),
        })
    }

    pub fn union(&mut self, left: NodeId, right: NodeId) -> NodeId {
        self.push(ClassicNode::Union { left, right })
    }

    pub fn eta(&mut self, i: u32, j: u32, child: NodeId) -> NodeId {
        self.push(ClassicNode::Eta {
            i: Label::new(i),
            j: Label::new(j),
            child,
        })
    }

    pub fn rho(&mut self, from: u32, to: u32, child: NodeId) -> NodeId {
        self.push(ClassicNode::Rho {
            from: Label::new(from),
            to: Label::new(to),
            child,
        })
    }

    pub fn push(&mut self, node: ClassicNode) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn finish(self) -> Result<ClassicExpr, ExprError> {
        let root = self.nodes.len().wrapping_sub(1);
        ClassicExpr::from_nodes(self.width, self.nodes, root)
    }
}
