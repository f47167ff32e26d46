//! Parse-tree diagonalization of `M - cI` for matrices of a slick expression.
//!
//! The expression is walked in post order. Each node builds a [`KBox`] from
//! its children's boxes and releases the rows it can finish; the root box is
//! diagonalized outright. Every step is a congruence, so the released values
//! are the diagonal of a matrix congruent to `M - cI`.

mod kbox;

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

pub use kbox::{
    annihilate_m0, combine_boxes, diagonalize_box, leaf_box, merge_children, reduce_duplicate_type_ii, reduce_kp, KBox,
    RowKind, RowMeta, Sink,
};

use crate::error::DiagError;
use crate::expr::{NodeId, SlickExpr, SlickNode, VertexId};
use crate::scalar::{format_list, int, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
enum DiagonalSource {
    Zero,
    Table(HashMap<String, Scalar>),
}

/// A symmetric matrix shaped like the graph: one common nonzero value on
/// edges, zero on non-edges, and an arbitrary diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixSpec {
    off_diagonal: Scalar,
    diagonal: DiagonalSource,
}

impl MatrixSpec {
    pub fn adjacency() -> Self {
        MatrixSpec {
            off_diagonal: Scalar::one(),
            diagonal: DiagonalSource::Zero,
        }
    }

    /// `D - A`.
    pub fn laplacian(e: &SlickExpr) -> Self {
        MatrixSpec {
            off_diagonal: -Scalar::one(),
            diagonal: degree_table(e),
        }
    }

    /// `D + A`.
    pub fn signless_laplacian(e: &SlickExpr) -> Self {
        MatrixSpec {
            off_diagonal: Scalar::one(),
            diagonal: degree_table(e),
        }
    }

    /// Off-diagonal value `w` and a per-vertex diagonal table.
    pub fn custom(w: Scalar, diagonal: HashMap<String, Scalar>) -> Result<Self, DiagError> {
        if w.is_zero() {
            return Err(DiagError::ZeroOffDiagonal);
        }
        Ok(MatrixSpec {
            off_diagonal: w,
            diagonal: DiagonalSource::Table(diagonal),
        })
    }

    pub fn off_diagonal(&self) -> &Scalar {
        &self.off_diagonal
    }

    pub fn diagonal_of(&self, v: &VertexId) -> Result<Scalar, DiagError> {
        match &self.diagonal {
            DiagonalSource::Zero => Ok(Scalar::zero()),
            DiagonalSource::Table(t) => t
                .get(v.as_str())
                .cloned()
                .ok_or_else(|| DiagError::MissingDiagonal(v.to_string())),
        }
    }
}

fn degree_table(e: &SlickExpr) -> DiagonalSource {
    let table = e
        .vertices()
        .into_iter()
        .zip(e.degrees())
        .map(|(v, d)| (v.as_str().to_string(), int(d as i64)))
        .collect();
    DiagonalSource::Table(table)
}

/// One released diagonal value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagEntry {
    /// Vertex ordinal whose row was released.
    pub vertex: usize,
    /// Parse-tree node that released it.
    pub node: NodeId,
    pub value: Scalar,
}

/// Released entries in emission order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiagList(Vec<DiagEntry>);

impl DiagList {
    pub fn new(entries: Vec<DiagEntry>) -> Self {
        DiagList(entries)
    }

    pub fn entries(&self) -> &[DiagEntry] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> Vec<Scalar> {
        self.0.iter().map(|e| e.value.clone()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &DiagEntry> {
        self.0.iter()
    }

    /// Product of all values; equals `det(M - cI)`.
    pub fn product(&self) -> Scalar {
        self.0.iter().fold(Scalar::one(), |acc, e| acc * &e.value)
    }
}

impl FromIterator<Scalar> for DiagList {
    fn from_iter<T: IntoIterator<Item = Scalar>>(iter: T) -> Self {
        DiagList(
            iter.into_iter()
                .enumerate()
                .map(|(i, value)| DiagEntry {
                    vertex: i,
                    node: 0,
                    value,
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Options {
    /// Validate every box and the type lifecycle of every row.
    pub check_invariants: bool,
    /// Record one [`NodeTrace`] per parse-tree node.
    pub trace: bool,
    /// Keep a copy of each transmitted box in the trace.
    pub keep_boxes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeTrace {
    pub node: NodeId,
    /// Shape of the box the node transmits (for the root: before the final
    /// diagonalization).
    pub kp: usize,
    pub kpp: usize,
    pub emitted: Vec<Scalar>,
    pub boxed: Option<KBox>,
}

impl fmt::Display for NodeTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "node={} kp={} kpp={} emit=[{}]",
            self.node,
            self.kp,
            self.kpp,
            format_list(&self.emitted)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub entries: DiagList,
    /// Arithmetic operations on matrix entries.
    pub ops: u64,
    /// Post-order, empty unless requested.
    pub trace: Vec<NodeTrace>,
}

/// Diagonal of a matrix congruent to `M - cI`, with `M` described by `spec`
/// over the graph of `e`.
pub fn diagonalize(e: &SlickExpr, c: &Scalar, spec: &MatrixSpec) -> Result<DiagList, DiagError> {
    run(e, c, spec, Options::default()).map(|r| r.entries)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Stage {
    Unseen,
    TypeII,
    TypeI,
    Done,
}

struct Lifecycle(Vec<Stage>);

impl Lifecycle {
    fn observe(&mut self, b: &KBox, node: NodeId) -> Result<(), DiagError> {
        for row in b.rows() {
            let next = match row.kind {
                RowKind::TypeII => Stage::TypeII,
                RowKind::TypeI => Stage::TypeI,
            };
            let prev = self.0[row.vertex];
            if prev == Stage::Done || prev > next {
                return Err(invariant(
                    node,
                    format!("vertex {} moved backwards in type", row.vertex),
                ));
            }
            self.0[row.vertex] = next;
        }
        Ok(())
    }

    fn release(&mut self, entries: &[DiagEntry], node: NodeId) -> Result<(), DiagError> {
        for e in entries {
            if std::mem::replace(&mut self.0[e.vertex], Stage::Done) == Stage::Done {
                return Err(invariant(node, format!("vertex {} released twice", e.vertex)));
            }
        }
        Ok(())
    }
}

fn invariant(node: NodeId, detail: String) -> DiagError {
    DiagError::Invariant { node, detail }
}

/// [`diagonalize`] with instrumentation.
pub fn run(e: &SlickExpr, c: &Scalar, spec: &MatrixSpec, opts: Options) -> Result<Run, DiagError> {
    let k = e.width();
    let mut ordinal = vec![usize::MAX; e.len()];
    let mut diagonal = Vec::with_capacity(e.atom_count());
    for (id, node) in e.nodes().iter().enumerate() {
        if let SlickNode::Atom { vertex, .. } = node {
            ordinal[id] = diagonal.len();
            diagonal.push(spec.diagonal_of(vertex)?);
        }
    }
    let n = diagonal.len();
    let mut life = Lifecycle(vec![Stage::Unseen; n]);
    let mut boxes: Vec<Option<KBox>> = vec![None; e.len()];
    let mut entries = Vec::with_capacity(n);
    let mut ops = 0u64;
    let mut trace = Vec::new();
    for id in e.post_order() {
        let mut sink = Sink::new(id);
        let b = match e.node(id) {
            SlickNode::Atom { label, .. } => {
                sink.ops += 1;
                leaf_box(*label, ordinal[id], &diagonal[ordinal[id]], c)
            }
            SlickNode::Join { s, l, r, left, right } => {
                let lb = boxes[*left].take().expect("child box computed");
                let rb = boxes[*right].take().expect("child box computed");
                combine_boxes(lb, rb, s, l, r, spec, &mut sink)
            }
        };
        if opts.check_invariants {
            life.release(&sink.entries, id)?;
            b.validate(k).map_err(|d| invariant(id, d))?;
            life.observe(&b, id)?;
        }
        let (kp, kpp) = (b.kp(), b.kpp());
        let boxed = opts.keep_boxes.then(|| b.clone());
        if id == e.root() {
            let before = sink.entries.len();
            diagonalize_box(b, &mut sink);
            if opts.check_invariants {
                life.release(&sink.entries[before..], id)?;
            }
        } else {
            boxes[id] = Some(b);
        }
        if opts.trace {
            trace.push(NodeTrace {
                node: id,
                kp,
                kpp,
                emitted: sink.values(),
                boxed,
            });
        }
        ops += sink.ops;
        entries.extend(sink.entries);
    }
    if opts.check_invariants && entries.len() != n {
        return Err(invariant(
            e.root(),
            format!("released {} entries for {} vertices", entries.len(), n),
        ));
    }
    Ok(Run {
        entries: DiagList(entries),
        ops,
        trace,
    })
}
