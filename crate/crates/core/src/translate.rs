//! Translations between classic and slick expressions.
//!
//! `classic -> slick` keeps the width; `slick -> classic` doubles it. Both
//! run in time linear in the number of nodes for fixed width.

use std::collections::BTreeSet;

use crate::error::ExprError;
use crate::expr::{ClassicExpr, ClassicNode, JoinRelation, Label, LabelMap, NodeId, SlickExpr, SlickNode};

/// Unordered label pair, stored smaller first.
type Pair = (Label, Label);

fn pair(a: Label, b: Label) -> Pair {
    (a.min(b), a.max(b))
}

/// Output labels carried by at least one vertex, per node.
type Presence = Vec<Vec<bool>>;

fn presence_of(node: &SlickNode, present: &Presence, width: usize) -> Vec<bool> {
    let mut p = vec![false; width];
    match node {
        SlickNode::Atom { label, .. } => p[label.index()] = true,
        SlickNode::Join { l, r, left, right, .. } => {
            for (a, (&in_left, &in_right)) in present[*left].iter().zip(&present[*right]).enumerate() {
                let a_label = Label::from_index(a);
                if in_left {
                    p[l.apply(a_label).index()] = true;
                }
                if in_right {
                    p[r.apply(a_label).index()] = true;
                }
            }
        }
    }
    p
}

fn presence(nodes: &[SlickNode], width: usize) -> Presence {
    let mut present = Vec::with_capacity(nodes.len());
    for n in nodes {
        let p = presence_of(n, &present, width);
        present.push(p);
    }
    present
}

/// Applies a set of `η` operations (given on the output labels of `nodes[at]`)
/// to node `at`: edges between the two children become `S` pairs, edges
/// inside a child become pending pairs on that child. Pairs naming a label
/// that no vertex carries are skipped.
fn expand(nodes: &mut [SlickNode], pending: &mut [BTreeSet<Pair>], present: &Presence, at: NodeId, width: usize) {
    let todo = std::mem::take(&mut pending[at]);
    if todo.is_empty() {
        return;
    }
    let SlickNode::Join { s, l, r, left, right } = &mut nodes[at] else {
        return;
    };
    let (left, right) = (*left, *right);
    let labels = |side: usize| (0..width).filter(move |&a| present[side][a]).map(Label::from_index);
    for a in labels(left) {
        for b in labels(right) {
            if todo.contains(&pair(l.apply(a), r.apply(b))) {
                s.insert(a, b);
            }
        }
    }
    for (child, map) in [(left, &*l), (right, &*r)] {
        for a in labels(child) {
            for b in labels(child).filter(|&b| b > a) {
                let (x, y) = (map.apply(a), map.apply(b));
                if x != y && todo.contains(&pair(x, y)) {
                    pending[child].insert((a, b));
                }
            }
        }
    }
}

/// Pushes all pending pairs to the leaves, top-down.
fn flush(nodes: &mut [SlickNode], pending: &mut [BTreeSet<Pair>], present: &Presence, width: usize) {
    for at in (0..nodes.len()).rev() {
        expand(nodes, pending, present, at, width);
    }
}

/// `η_{i,j}(s)` as a slick expression of the same width and depth: only `S`
/// relations change.
pub fn eta_to_slick(i: Label, j: Label, s: &SlickExpr) -> Result<SlickExpr, ExprError> {
    eta_all_to_slick(&[(i, j)], s)
}

/// Several `η` operations at the root at once. Equivalent to applying them
/// one at a time in any order.
pub fn eta_all_to_slick(pairs: &[(Label, Label)], s: &SlickExpr) -> Result<SlickExpr, ExprError> {
    let width = s.width();
    let mut nodes = s.nodes().to_vec();
    let mut pending = vec![BTreeSet::new(); nodes.len()];
    for &(i, j) in pairs {
        if i == j {
            return Err(ExprError::EtaSameLabel(i.get()));
        }
        for l in [i, j] {
            Label::checked(l.get() as u64, width)?;
        }
        pending[s.root()].insert(pair(i, j));
    }
    let present = presence(&nodes, width);
    flush(&mut nodes, &mut pending, &present, width);
    SlickExpr::from_nodes(width, nodes, s.root())
}

pub fn classic_to_slick(r: &ClassicExpr) -> SlickExpr {
    let width = r.width();
    let mut nodes: Vec<SlickNode> = Vec::with_capacity(r.len());
    let mut pending: Vec<BTreeSet<Pair>> = Vec::with_capacity(r.len());
    let mut present: Presence = Vec::with_capacity(r.len());
    let mut image: Vec<NodeId> = vec![usize::MAX; r.len()];
    for (id, node) in r.nodes().iter().enumerate() {
        image[id] = match node {
            ClassicNode::Atom { label, vertex } => {
                nodes.push(SlickNode::Atom {
                    label: *label,
                    vertex: vertex.clone(),
                });
                pending.push(BTreeSet::new());
                present.push(presence_of(nodes.last().unwrap(), &present, width));
                nodes.len() - 1
            }
            ClassicNode::Union { left, right } => {
                nodes.push(SlickNode::Join {
                    s: JoinRelation::new(),
                    l: LabelMap::identity(width),
                    r: LabelMap::identity(width),
                    left: image[*left],
                    right: image[*right],
                });
                pending.push(BTreeSet::new());
                present.push(presence_of(nodes.last().unwrap(), &present, width));
                nodes.len() - 1
            }
            ClassicNode::Eta { i, j, child } => {
                let t = image[*child];
                pending[t].insert(pair(*i, *j));
                // resolve now so a later relabel at `t` cannot disturb it
                expand(&mut nodes, &mut pending, &present, t, width);
                t
            }
            ClassicNode::Rho { from, to, child } => {
                let t = image[*child];
                match &mut nodes[t] {
                    SlickNode::Atom { label, .. } => {
                        if label == from {
                            *label = *to;
                        }
                    }
                    SlickNode::Join { l, r, .. } => {
                        for m in [l, r] {
                            for a in (0..width).map(Label::from_index) {
                                if m.apply(a) == *from {
                                    m.set(a, *to);
                                }
                            }
                        }
                    }
                }
                present[t] = presence_of(&nodes[t], &present, width);
                t
            }
        };
    }
    flush(&mut nodes, &mut pending, &present, width);
    SlickExpr::from_nodes(width, nodes, image[r.root()]).expect("translation preserves validity")
}

/// Sequence of `(from, to)` renamings realizing `f: [2k] -> [k]` on labels
/// in three rounds: merge each class onto its largest member, pack the
/// representatives into the top of `[2k]`, then move them to their images.
/// Identity steps are omitted.
fn relabel_rounds(f: &[Label]) -> Vec<(Label, Label)> {
    let n = f.len();
    let mut steps = Vec::new();
    // g(i) = max { j | f(j) = f(i) }
    let mut rep = vec![usize::MAX; n];
    let mut top = vec![usize::MAX; n];
    for (i, l) in f.iter().enumerate() {
        top[l.index()] = i;
    }
    for (i, l) in f.iter().enumerate() {
        rep[i] = top[l.index()];
        if rep[i] != i {
            steps.push((Label::from_index(i), Label::from_index(rep[i])));
        }
    }
    let reps: Vec<usize> = (0..n).filter(|&i| rep[i] == i).collect();
    let q = reps.len();
    // h: reps[t] -> n - q + t, largest first so no target is still occupied
    for (t, &r) in reps.iter().enumerate().rev() {
        let target = n - q + t;
        if target != r {
            steps.push((Label::from_index(r), Label::from_index(target)));
        }
    }
    // f o h^-1
    for (t, &r) in reps.iter().enumerate() {
        let source = n - q + t;
        if f[r].index() != source {
            steps.push((Label::from_index(source), f[r]));
        }
    }
    steps
}

/// Equivalent classic expression of width `2k`.
pub fn slick_to_classic(s: &SlickExpr) -> ClassicExpr {
    let k = s.width();
    let mut nodes: Vec<ClassicNode> = Vec::new();
    let mut image: Vec<NodeId> = vec![usize::MAX; s.len()];
    let push = |nodes: &mut Vec<ClassicNode>, n: ClassicNode| {
        nodes.push(n);
        nodes.len() - 1
    };
    for (id, node) in s.nodes().iter().enumerate() {
        image[id] = match node {
            SlickNode::Atom { label, vertex } => push(
                &mut nodes,
                ClassicNode::Atom {
                    label: *label,
                    vertex: vertex.clone(),
                },
            ),
            SlickNode::Join {
                s: rel,
                l,
                r,
                left,
                right,
            } => {
                let mut lt = image[*left];
                for a in (0..k).map(Label::from_index) {
                    lt = push(
                        &mut nodes,
                        ClassicNode::Rho {
                            from: a,
                            to: Label::from_index(a.index() + k),
                            child: lt,
                        },
                    );
                }
                let mut t = push(
                    &mut nodes,
                    ClassicNode::Union {
                        left: lt,
                        right: image[*right],
                    },
                );
                for (a, b) in rel.iter() {
                    t = push(
                        &mut nodes,
                        ClassicNode::Eta {
                            i: Label::from_index(a.index() + k),
                            j: b,
                            child: t,
                        },
                    );
                }
                let f: Vec<Label> = (0..2 * k)
                    .map(|i| {
                        if i < k {
                            r.apply(Label::from_index(i))
                        } else {
                            l.apply(Label::from_index(i - k))
                        }
                    })
                    .collect();
                for (from, to) in relabel_rounds(&f) {
                    t = push(&mut nodes, ClassicNode::Rho { from, to, child: t });
                }
                t
            }
        };
    }
    ClassicExpr::from_nodes(2 * k, nodes, image[s.root()]).expect("translation preserves validity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{graphs_equal, parse_classic, parse_slick};

    fn l(x: u32) -> Label {
        Label::new(x)
    }

    #[test]
    fn eta_on_atom_is_identity() {
        let s = parse_slick("k 2 (v 1 v)").unwrap();
        assert_eq!(eta_to_slick(l(1), l(2), &s).unwrap(), s);
    }

    #[test]
    fn eta_fires_between_components() {
        let s = parse_slick("k 2 (join (S) (L) (R) (v 1 a) (v 2 b))").unwrap();
        let t = eta_to_slick(l(1), l(2), &s).unwrap();
        assert_eq!(t.to_string(), "k 2\n(join (S (1 2)) (L) (R) (v 1 a) (v 2 b))\n");
    }

    #[test]
    fn eta_recurses_into_collapsed_child() {
        // left child outputs labels 1 and 3; L sends 3 -> 2, so η(1,2) is
        // needed inside the left child
        let s = parse_slick("k 3 (join (S) (L (3 2)) (R) (join (S) (L) (R) (v 1 a) (v 3 b)) (v 3 c))").unwrap();
        let t = eta_to_slick(l(1), l(2), &s).unwrap();
        assert_eq!(t.depth(), s.depth());
        let mut g = s.eval();
        g.add_edge(0, 1);
        assert!(graphs_equal(&t.eval(), &g));
        assert!(eta_to_slick(l(2), l(2), &s).is_err());
    }

    #[test]
    fn classic_base_cases() {
        let r = parse_classic("k 2 (v 1 a)").unwrap();
        assert_eq!(classic_to_slick(&r).to_string(), "k 2\n(v 1 a)\n");
        let r = parse_classic("k 2 (rho 1 2 (v 1 a))").unwrap();
        assert_eq!(classic_to_slick(&r).to_string(), "k 2\n(v 2 a)\n");
        let r = parse_classic("k 2 (eta 1 2 (u (v 1 a) (v 2 b)))").unwrap();
        assert_eq!(
            classic_to_slick(&r).to_string(),
            "k 2\n(join (S (1 2)) (L) (R) (v 1 a) (v 2 b))\n"
        );
    }

    #[test]
    fn eta_then_rho_on_same_join() {
        let r = parse_classic("k 2 (rho 1 2 (eta 1 2 (u (v 1 a) (v 2 b))))").unwrap();
        let s = classic_to_slick(&r);
        assert!(graphs_equal(&s.eval(), &r.eval()));
    }

    #[test]
    fn slick_to_classic_small() {
        let s = parse_slick("k 1 (v 1 a)").unwrap();
        assert_eq!(slick_to_classic(&s).to_string(), "k 2\n(v 1 a)\n");
        let s = parse_slick("k 2 (join (S (1 2)) (L) (R) (v 1 a) (v 2 b))").unwrap();
        let c = slick_to_classic(&s);
        assert_eq!(c.width(), 4);
        assert!(c.to_string().contains("(eta 3 2"));
        assert!(graphs_equal(&c.eval(), &s.eval()));
    }

    #[test]
    fn relabel_rounds_realize_map() {
        // [2k] -> [k] with k = 3
        let f = vec![l(2), l(2), l(1), l(3), l(1), l(2)];
        let mut cur: Vec<Label> = (0..6).map(Label::from_index).collect();
        for (from, to) in relabel_rounds(&f) {
            for c in cur.iter_mut() {
                if *c == from {
                    *c = to;
                }
            }
        }
        assert_eq!(cur, f);
        let id: Vec<Label> = vec![l(1), l(2), l(3), l(1), l(2), l(3)];
        assert!(relabel_rounds(&id).iter().all(|(a, b)| a != b));
    }
}
