//! The k-box and the congruence steps applied to it.
//!
//! A box holds the undiagonalized rows of a subtree: type-i rows (zero
//! outside the box) and type-ii rows (still equal to the original matrix
//! outside the box). Every mutation is a paired row/column operation, so the
//! box stays congruent to the submatrix it stands for.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::{DiagEntry, MatrixSpec};
use crate::error::BoxParseError;
use crate::expr::{JoinRelation, Label, LabelMap, NodeId};
use crate::scalar::{parse_scalar, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowKind {
    /// Row is zero outside the box.
    TypeI,
    /// Row still matches the original matrix outside the box.
    TypeII,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowMeta {
    pub kind: RowKind,
    pub label: Label,
    /// Vertex ordinal (arena order of atoms).
    pub vertex: usize,
}

/// Collects emitted diagonal entries and counts arithmetic operations.
#[derive(Debug, Clone, Default)]
pub struct Sink {
    pub node: NodeId,
    pub entries: Vec<DiagEntry>,
    pub ops: u64,
}

impl Sink {
    pub fn new(node: NodeId) -> Self {
        Sink {
            node,
            ..Default::default()
        }
    }

    fn emit(&mut self, vertex: usize, value: Scalar) {
        self.entries.push(DiagEntry {
            vertex,
            node: self.node,
            value,
        });
    }

    pub fn values(&self) -> Vec<Scalar> {
        self.entries.iter().map(|e| e.value.clone()).collect()
    }
}

/// `[k', k'', M, Λ]`, with type bookkeeping kept per row instead of by
/// physically permuting the matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KBox {
    rows: Vec<RowMeta>,
    /// Row-major, `rows.len()` squared.
    m: Vec<Scalar>,
}

impl KBox {
    pub fn empty() -> Self {
        KBox {
            rows: Vec::new(),
            m: Vec::new(),
        }
    }

    /// Builds a box from explicit parts; `matrix` must be square with one row per meta.
    pub fn from_parts(rows: Vec<RowMeta>, matrix: Vec<Vec<Scalar>>) -> Self {
        let n = rows.len();
        assert_eq!(matrix.len(), n);
        let mut m = Vec::with_capacity(n * n);
        for row in matrix {
            assert_eq!(row.len(), n);
            m.extend(row);
        }
        KBox { rows, m }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// k': number of type-i rows.
    pub fn kp(&self) -> usize {
        self.rows.iter().filter(|r| r.kind == RowKind::TypeI).count()
    }

    /// k'': number of type-ii rows.
    pub fn kpp(&self) -> usize {
        self.rows.iter().filter(|r| r.kind == RowKind::TypeII).count()
    }

    pub fn rows(&self) -> &[RowMeta] {
        &self.rows
    }

    pub fn labels(&self) -> Vec<Label> {
        self.rows.iter().map(|r| r.label).collect()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.m[i * self.rows.len() + j]
    }

    pub fn matrix(&self) -> Vec<Vec<Scalar>> {
        let n = self.rows.len();
        (0..n).map(|i| self.m[i * n..(i + 1) * n].to_vec()).collect()
    }

    fn indices(&self, kind: RowKind) -> Vec<usize> {
        (0..self.rows.len()).filter(|&i| self.rows[i].kind == kind).collect()
    }

    fn block(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|&i| cols.iter().map(|&j| self.entry(i, j).clone()).collect())
            .collect()
    }

    /// M⁽⁰⁾: type-i rows against type-i columns, in row order.
    pub fn m0(&self) -> Vec<Vec<Scalar>> {
        let t1 = self.indices(RowKind::TypeI);
        self.block(&t1, &t1)
    }

    /// M⁽¹⁾: type-i rows against type-ii columns.
    pub fn m1(&self) -> Vec<Vec<Scalar>> {
        self.block(&self.indices(RowKind::TypeI), &self.indices(RowKind::TypeII))
    }

    /// M⁽²⁾: type-ii rows against type-ii columns.
    pub fn m2(&self) -> Vec<Vec<Scalar>> {
        let t2 = self.indices(RowKind::TypeII);
        self.block(&t2, &t2)
    }

    pub fn type_ii_labels(&self) -> Vec<Label> {
        self.rows
            .iter()
            .filter(|r| r.kind == RowKind::TypeII)
            .map(|r| r.label)
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.rows.len();
        (0..n).all(|i| (i + 1..n).all(|j| self.entry(i, j) == self.entry(j, i)))
    }

    /// Checks the box invariants for width `k`, returning a description of
    /// the first violation.
    pub fn validate(&self, k: usize) -> Result<(), String> {
        let (kp, kpp) = (self.kp(), self.kpp());
        if kp > kpp {
            return Err(format!("k'={kp} exceeds k''={kpp}"));
        }
        if kpp > k {
            return Err(format!("k''={kpp} exceeds k={k}"));
        }
        if !self.is_empty() && kpp == 0 {
            return Err("non-empty box without type-ii rows".into());
        }
        if let Some(r) = self.rows.iter().find(|r| r.label.index() >= k) {
            return Err(format!("label {} out of range", r.label));
        }
        let mut seen = vec![false; k];
        for l in self.type_ii_labels() {
            if std::mem::replace(&mut seen[l.index()], true) {
                return Err(format!("label {l} on two type-ii rows"));
            }
        }
        if self.m.len() != self.rows.len() * self.rows.len() {
            return Err("matrix order does not match row count".into());
        }
        if !self.is_symmetric() {
            return Err("matrix is not symmetric".into());
        }
        Ok(())
    }

    /// `R_t += f R_s` followed by `C_t += f C_s`.
    fn add_multiple(&mut self, target: usize, source: usize, factor: &Scalar, ops: &mut u64) {
        debug_assert_ne!(target, source);
        let n = self.rows.len();
        for j in 0..n {
            let v = &self.m[source * n + j];
            if !v.is_zero() {
                let delta = factor * v;
                self.m[target * n + j] += delta;
            }
        }
        for i in 0..n {
            let v = &self.m[i * n + source];
            if !v.is_zero() {
                let delta = factor * v;
                self.m[i * n + target] += delta;
            }
        }
        *ops += 4 * n as u64;
    }

    fn remove_row(&mut self, r: usize) -> RowMeta {
        let n = self.rows.len();
        let mut m = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != r) {
            for j in (0..n).filter(|&j| j != r) {
                m.push(std::mem::take(&mut self.m[i * n + j]));
            }
        }
        self.m = m;
        self.rows.remove(r)
    }

    /// Emits the diagonal of row `r` as a final entry and drops the row.
    /// Caller guarantees the row is zero off the diagonal.
    fn release(&mut self, r: usize, sink: &mut Sink) {
        let value = self.entry(r, r).clone();
        let meta = self.remove_row(r);
        sink.emit(meta.vertex, value);
    }

    /// Pivots on row `p` (nonzero diagonal): clears row and column `p` against
    /// every other row of the box, then releases it.
    fn pivot(&mut self, p: usize, sink: &mut Sink) {
        let d = self.entry(p, p).clone();
        for j in 0..self.rows.len() {
            if j == p || self.entry(j, p).is_zero() {
                continue;
            }
            let f = -(self.entry(j, p) / &d);
            sink.ops += 2;
            self.add_multiple(j, p, &f, &mut sink.ops);
        }
        self.release(p, sink);
    }

    /// `(0 m; m 0) -> (-m 0; 0 m)` on rows `i < j`.
    fn split_off_diagonal(&mut self, i: usize, j: usize, ops: &mut u64) {
        let half = Scalar::new(1.into(), 2.into());
        self.add_multiple(j, i, &half, ops);
        self.add_multiple(i, j, &-Scalar::one(), ops);
    }

    /// Symmetric elimination restricted to rows accepted by `eligible`.
    /// Stops once every eligible row has zero diagonal and there is no
    /// nonzero entry between two eligible rows.
    fn eliminate(&mut self, sink: &mut Sink, eligible: impl Fn(&RowMeta) -> bool) {
        loop {
            let cand: Vec<usize> = (0..self.rows.len()).filter(|&i| eligible(&self.rows[i])).collect();
            if let Some(&p) = cand.iter().find(|&&i| !self.entry(i, i).is_zero()) {
                self.pivot(p, sink);
                continue;
            }
            let off = cand.iter().enumerate().find_map(|(a, &i)| {
                cand[a + 1..]
                    .iter()
                    .find(|&&j| !self.entry(i, j).is_zero())
                    .map(|&j| (i, j))
            });
            match off {
                Some((i, j)) => self.split_off_diagonal(i, j, &mut sink.ops),
                None => break,
            }
        }
    }
}

impl fmt::Display for KBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .matrix()
            .iter()
            .map(|r| format!("[{}]", crate::scalar::format_list(r)))
            .collect();
        let labels: Vec<String> = self.rows.iter().map(|r| r.label.to_string()).collect();
        write!(
            f,
            "[{}, {}, [{}], ({})]",
            self.kp(),
            self.kpp(),
            rows.join(","),
            labels.join(",")
        )
    }
}

impl KBox {
    /// Copy with the type-i rows moved in front, the layout used by records.
    pub fn grouped(&self) -> KBox {
        let mut order: Vec<usize> = (0..self.size()).collect();
        order.sort_by_key(|&i| self.rows[i].kind != RowKind::TypeI);
        let matrix = order
            .iter()
            .map(|&i| order.iter().map(|&j| self.entry(i, j).clone()).collect())
            .collect();
        KBox::from_parts(order.iter().map(|&i| self.rows[i].clone()).collect(), matrix)
    }
}

/// Splits `s` at the bracket that closes the one it starts with.
fn split_group(s: &str, open: char, close: char) -> Result<(&str, &str), BoxParseError> {
    let bad = || BoxParseError(format!("expected {open}...{close} in {s:?}"));
    if !s.starts_with(open) {
        return Err(bad());
    }
    let mut depth = 0;
    for (i, ch) in s.char_indices() {
        if ch == open {
            depth += 1;
        } else if ch == close {
            depth -= 1;
            if depth == 0 {
                return Ok((&s[1..i], &s[i + 1..]));
            }
        }
    }
    Err(bad())
}

fn parse_count(s: &str) -> Result<usize, BoxParseError> {
    s.trim().parse().map_err(|_| BoxParseError(format!("bad count {s:?}")))
}

/// Parses the display form `[k', k'', [[..],..], (labels)]`; the first k'
/// rows are type-i. Vertex ordinals are set to row positions.
impl FromStr for KBox {
    type Err = BoxParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (inner, rest) = split_group(text.trim(), '[', ']')?;
        if !rest.trim().is_empty() {
            return Err(BoxParseError(format!("trailing text {rest:?}")));
        }
        let mut parts = inner.splitn(3, ',');
        let kp = parse_count(parts.next().unwrap_or(""))?;
        let kpp = parse_count(parts.next().unwrap_or(""))?;
        let rest = parts.next().unwrap_or("").trim();
        let (matrix_text, rest) = split_group(rest, '[', ']')?;
        let labels_text = rest
            .trim()
            .strip_prefix(',')
            .ok_or_else(|| BoxParseError("missing label list".into()))?;
        let (labels_text, tail) = split_group(labels_text.trim(), '(', ')')?;
        if !tail.trim().is_empty() {
            return Err(BoxParseError(format!("trailing text {tail:?}")));
        }
        let mut matrix = Vec::new();
        let mut m = matrix_text.trim();
        while !m.is_empty() {
            let (row, after) = split_group(m, '[', ']')?;
            let row = row
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(parse_scalar)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| BoxParseError(e.to_string()))?;
            matrix.push(row);
            m = after.trim().trim_start_matches(',').trim();
        }
        let labels = labels_text
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(|x| match x.trim().parse::<u32>() {
                Ok(v) if v >= 1 => Ok(Label::new(v)),
                _ => Err(BoxParseError(format!("bad label {x:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let n = kp + kpp;
        if labels.len() != n || matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(BoxParseError(format!("expected {n} rows, columns and labels")));
        }
        let rows = labels
            .into_iter()
            .enumerate()
            .map(|(i, label)| RowMeta {
                kind: if i < kp { RowKind::TypeI } else { RowKind::TypeII },
                label,
                vertex: i,
            })
            .collect();
        Ok(KBox::from_parts(rows, matrix))
    }
}

/// Box for a leaf `i(v)`: `[0, 1, (d(v) - c), (i)]`.
pub fn leaf_box(label: Label, vertex: usize, diagonal: &Scalar, shift: &Scalar) -> KBox {
    KBox {
        rows: vec![RowMeta {
            kind: RowKind::TypeII,
            label,
            vertex,
        }],
        m: vec![diagonal - shift],
    }
}

/// Disjoint union of the children's boxes plus the cross entries created by
/// `S` between type-ii rows, followed by relabelling through `L` and `R`.
pub fn merge_children(
    left: KBox,
    right: KBox,
    s: &JoinRelation,
    l: &LabelMap,
    r: &LabelMap,
    spec: &MatrixSpec,
) -> KBox {
    let (nl, nr) = (left.size(), right.size());
    let n = nl + nr;
    let mut m = vec![Scalar::zero(); n * n];
    for i in 0..nl {
        for j in 0..nl {
            m[i * n + j] = left.m[i * nl + j].clone();
        }
    }
    for i in 0..nr {
        for j in 0..nr {
            m[(nl + i) * n + nl + j] = right.m[i * nr + j].clone();
        }
    }
    for (a, b) in s.iter() {
        for (i, ri) in left.rows.iter().enumerate() {
            if ri.kind != RowKind::TypeII || ri.label != a {
                continue;
            }
            for (j, rj) in right.rows.iter().enumerate() {
                if rj.kind == RowKind::TypeII && rj.label == b {
                    m[i * n + nl + j] = spec.off_diagonal().clone();
                    m[(nl + j) * n + i] = spec.off_diagonal().clone();
                }
            }
        }
    }
    let rows = left
        .rows
        .into_iter()
        .map(|row| RowMeta {
            label: l.apply(row.label),
            ..row
        })
        .chain(right.rows.into_iter().map(|row| RowMeta {
            label: r.apply(row.label),
            ..row
        }))
        .collect();
    KBox { rows, m }
}

/// Turns type-ii rows sharing a label into type-i rows until type-ii labels
/// are distinct. For each label (ascending) the last row in box order
/// survives; every earlier duplicate `j'` gets `R_j' -= R_j`, `C_j' -= C_j`.
/// Emits nothing.
pub fn reduce_duplicate_type_ii(b: &mut KBox, sink: &mut Sink) {
    let mut by_label: std::collections::BTreeMap<Label, Vec<usize>> = Default::default();
    for (i, row) in b.rows.iter().enumerate() {
        if row.kind == RowKind::TypeII {
            by_label.entry(row.label).or_default().push(i);
        }
    }
    let minus_one = -Scalar::one();
    for (_, idx) in by_label {
        let Some((&survivor, rest)) = idx.split_last() else {
            continue;
        };
        for &dup in rest {
            b.add_multiple(dup, survivor, &minus_one, &mut sink.ops);
            b.rows[dup].kind = RowKind::TypeI;
        }
    }
}

/// Makes M⁽⁰⁾ zero or empty, releasing one nonzero diagonal entry per
/// eliminated type-i row. Pivots on the lowest-index nonzero diagonal; if
/// the whole diagonal of M⁽⁰⁾ is zero, splits the first nonzero
/// off-diagonal pair `(i, j)`, `i < j`.
pub fn annihilate_m0(b: &mut KBox, sink: &mut Sink) {
    b.eliminate(sink, |r| r.kind == RowKind::TypeI);
}

/// Requires M⁽⁰⁾ = 0. Row-reduces M⁽¹⁾ among type-i rows; rows that end up
/// zero are released as zero diagonal entries. Afterwards `k' <= k''`.
/// No-op when `k' <= k''` already holds.
pub fn reduce_kp(b: &mut KBox, sink: &mut Sink) {
    if b.kp() <= b.kpp() {
        return;
    }
    debug_assert!(b.m0().iter().flatten().all(Zero::is_zero), "M0 must be zero");
    let t1 = b.indices(RowKind::TypeI);
    let t2 = b.indices(RowKind::TypeII);
    let mut used = vec![false; t1.len()];
    for &col in &t2 {
        let Some(p) = (0..t1.len()).find(|&a| !used[a] && !b.entry(t1[a], col).is_zero()) else {
            continue;
        };
        used[p] = true;
        let pv = b.entry(t1[p], col).clone();
        for a in 0..t1.len() {
            if used[a] || b.entry(t1[a], col).is_zero() {
                continue;
            }
            let f = -(b.entry(t1[a], col) / &pv);
            sink.ops += 2;
            b.add_multiple(t1[a], t1[p], &f, &mut sink.ops);
        }
    }
    // Zero rows, highest index first so earlier indices stay valid.
    let zero_rows: Vec<usize> = (0..t1.len()).filter(|&a| !used[a]).map(|a| t1[a]).collect();
    for &r in zero_rows.iter().rev() {
        debug_assert!((0..b.size()).all(|j| b.entry(r, j).is_zero()));
        b.release(r, sink);
    }
    // release() pushed in reverse; restore ascending row order
    let start = sink.entries.len() - zero_rows.len();
    sink.entries[start..].reverse();
}

/// One internal node: merge, then the reductions that restore
/// `k' <= k'' <= k`.
pub fn combine_boxes(
    left: KBox,
    right: KBox,
    s: &JoinRelation,
    l: &LabelMap,
    r: &LabelMap,
    spec: &MatrixSpec,
    sink: &mut Sink,
) -> KBox {
    let mut b = merge_children(left, right, s, l, r, spec);
    sink.ops += (b.size() * b.size()) as u64;
    reduce_duplicate_type_ii(&mut b, sink);
    if b.kp() > b.kpp() {
        annihilate_m0(&mut b, sink);
    }
    if b.kp() > b.kpp() {
        reduce_kp(&mut b, sink);
    }
    b
}

/// Fully diagonalizes whatever is left in the root box.
pub fn diagonalize_box(mut b: KBox, sink: &mut Sink) {
    b.eliminate(sink, |_| true);
    while !b.is_empty() {
        debug_assert!((0..b.size()).all(|j| b.entry(0, j).is_zero()));
        b.release(0, sink);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn meta(kinds: &[(RowKind, u32)]) -> Vec<RowMeta> {
        kinds
            .iter()
            .enumerate()
            .map(|(v, &(kind, l))| RowMeta {
                kind,
                label: Label::new(l),
                vertex: v,
            })
            .collect()
    }

    use RowKind::{TypeI as I, TypeII as II};

    #[test]
    fn leaf_box_subtracts_shift() {
        let b = leaf_box(Label::new(2), 0, &int(0), &int(5));
        assert_eq!((b.kp(), b.kpp()), (0, 1));
        assert_eq!(b.matrix(), ints(&[&[-5]]));
        assert_eq!(b.labels(), vec![Label::new(2)]);
        let b = leaf_box(Label::new(1), 0, &int(3), &int(0));
        assert_eq!(b.matrix(), ints(&[&[3]]));
    }

    #[test]
    fn merge_without_relation_is_block_diagonal() {
        let spec = MatrixSpec::adjacency();
        let a = leaf_box(Label::new(1), 0, &int(0), &int(1));
        let c = leaf_box(Label::new(2), 1, &int(0), &int(1));
        let m = merge_children(
            a,
            c,
            &JoinRelation::new(),
            &LabelMap::identity(2),
            &LabelMap::identity(2),
            &spec,
        );
        assert_eq!(m.matrix(), ints(&[&[-1, 0], &[0, -1]]));
    }

    #[test]
    fn distinct_labels_untouched_by_duplicate_reduction() {
        let mut b = KBox::from_parts(meta(&[(II, 1), (II, 2)]), ints(&[&[0, 1], &[1, 0]]));
        let before = b.clone();
        let mut sink = Sink::new(0);
        reduce_duplicate_type_ii(&mut b, &mut sink);
        assert_eq!(b, before);
        assert!(sink.entries.is_empty());
    }

    #[test]
    fn equal_leaf_labels_merge_into_type_i() {
        // two leaves, same label, S empty, c = 0
        let spec = MatrixSpec::adjacency();
        let a = leaf_box(Label::new(1), 0, &int(0), &int(0));
        let c = leaf_box(Label::new(1), 1, &int(0), &int(0));
        let mut sink = Sink::new(2);
        let b = combine_boxes(
            a,
            c,
            &JoinRelation::new(),
            &LabelMap::identity(1),
            &LabelMap::identity(1),
            &spec,
            &mut sink,
        );
        assert_eq!((b.kp(), b.kpp()), (1, 1));
        assert!(sink.entries.is_empty());
        assert_eq!(b.matrix(), ints(&[&[0, 0], &[0, 0]]));
    }

    #[test]
    fn annihilate_noop_when_m0_zero() {
        let mut b = KBox::from_parts(meta(&[(I, 1), (II, 1)]), ints(&[&[0, 1], &[1, 0]]));
        let before = b.clone();
        let mut sink = Sink::new(0);
        annihilate_m0(&mut b, &mut sink);
        assert_eq!(b, before);
        assert!(sink.entries.is_empty());
    }

    #[test]
    fn annihilate_uses_two_by_two_split() {
        // M0 = (0 3; 3 0), no type-ii coupling
        let mut b = KBox::from_parts(
            meta(&[(I, 1), (I, 1), (II, 1)]),
            ints(&[&[0, 3, 0], &[3, 0, 0], &[0, 0, 7]]),
        );
        let mut sink = Sink::new(0);
        annihilate_m0(&mut b, &mut sink);
        assert_eq!(sink.values(), vec![int(-3), int(3)]);
        assert_eq!(b.matrix(), ints(&[&[7]]));
    }

    #[test]
    fn reduce_kp_second_row_already_zero() {
        let mut b = KBox::from_parts(
            meta(&[(I, 1), (I, 2), (II, 1)]),
            ints(&[&[0, 0, 1], &[0, 0, 0], &[1, 0, 0]]),
        );
        let mut sink = Sink::new(0);
        reduce_kp(&mut b, &mut sink);
        assert_eq!(sink.values(), vec![int(0)]);
        assert_eq!(sink.entries[0].vertex, 1);
        assert_eq!((b.kp(), b.kpp()), (1, 1));
    }

    #[test]
    fn reduce_kp_rank_one_emits_two_zeros() {
        // M1 = (1; 2; -3), rank 1
        let mut b = KBox::from_parts(
            meta(&[(I, 1), (I, 1), (I, 1), (II, 1)]),
            ints(&[&[0, 0, 0, 1], &[0, 0, 0, 2], &[0, 0, 0, -3], &[1, 2, -3, 5]]),
        );
        let mut sink = Sink::new(0);
        reduce_kp(&mut b, &mut sink);
        assert_eq!(sink.values(), vec![int(0), int(0)]);
        assert_eq!((b.kp(), b.kpp()), (1, 1));
        assert_eq!(b.matrix(), ints(&[&[0, 1], &[1, 5]]));
    }

    #[test]
    fn reduce_kp_noop_when_balanced() {
        let mut b = KBox::from_parts(meta(&[(I, 1), (II, 1)]), ints(&[&[0, 1], &[1, 0]]));
        let before = b.clone();
        let mut sink = Sink::new(0);
        reduce_kp(&mut b, &mut sink);
        assert_eq!(b, before);
    }

    #[test]
    fn diagonalize_box_cases() {
        let mut sink = Sink::new(0);
        diagonalize_box(KBox::from_parts(meta(&[(II, 1)]), ints(&[&[0]])), &mut sink);
        assert_eq!(sink.values(), vec![int(0)]);

        let mut sink = Sink::new(0);
        diagonalize_box(
            KBox::from_parts(meta(&[(II, 1), (II, 2)]), ints(&[&[0, 1], &[1, 0]])),
            &mut sink,
        );
        assert_eq!(sink.values(), vec![int(-1), int(1)]);

        let mut sink = Sink::new(0);
        diagonalize_box(
            KBox::from_parts(meta(&[(I, 1), (II, 1)]), ints(&[&[0, 2], &[2, 1]])),
            &mut sink,
        );
        // pivot on the 1, then the Schur complement 0 - 4/1
        assert_eq!(sink.values(), vec![int(1), int(-4)]);
        let _ = ratio(1, 2);
    }

    #[test]
    fn validate_flags_asymmetry_and_bounds() {
        let b = KBox::from_parts(meta(&[(II, 1), (II, 2)]), ints(&[&[0, 1], &[2, 0]]));
        assert_eq!(b.validate(2), Err("matrix is not symmetric".into()));
        let b = KBox::from_parts(meta(&[(II, 1), (II, 1)]), ints(&[&[0, 1], &[1, 0]]));
        assert!(b.validate(2).unwrap_err().contains("two type-ii"));
        let b = KBox::from_parts(
            meta(&[(I, 1), (I, 2), (II, 1)]),
            ints(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]),
        );
        assert!(b.validate(2).unwrap_err().contains("exceeds"));
    }

    #[test]
    fn record_round_trip() {
        let b = KBox::from_parts(
            meta(&[(II, 1), (I, 2), (II, 2)]),
            vec![
                vec![int(1), int(0), ratio(1, 2)],
                vec![int(0), int(-3), int(0)],
                vec![ratio(1, 2), int(0), int(0)],
            ],
        );
        let g = b.grouped();
        assert_eq!(g.rows()[0].kind, I);
        assert_eq!(g.to_string(), "[1, 2, [[-3,0,0],[0,1,1/2],[0,1/2,0]], (2,1,2)]");
        let back: KBox = g.to_string().parse().unwrap();
        assert_eq!(back.to_string(), g.to_string());
        assert_eq!((back.kp(), back.kpp()), (1, 2));
        let empty: KBox = "[0, 0, [], ()]".parse().unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn record_rejects_malformed() {
        assert!("[0, 1, [[0]], (0)]".parse::<KBox>().is_err());
        assert!("[0, 2, [[0,1]], (1,2)]".parse::<KBox>().is_err());
        assert!("[0, 1, [[x]], (1)]".parse::<KBox>().is_err());
        assert!("0, 1, [[0]], (1)".parse::<KBox>().is_err());
        let asym: KBox = "[0, 2, [[0,1],[2,0]], (1,2)]".parse().unwrap();
        assert!(asym.validate(2).is_err());
    }
}
