//! Random and structured expression families.
//!
//! Tree shapes come from Rémy's algorithm, which samples binary trees with
//! `n` leaves uniformly. All generators are deterministic for a given RNG
//! state.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{
    ClassicExpr, ClassicNode, JoinRelation, Label, LabelMap, SlickBuilder, SlickExpr, SlickNode, VertexId,
};

/// Seeded RNG used across the crate and the CLI.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random binary tree with `n >= 1` leaves, as `(children, root)`
/// where `children[x]` is `None` for leaves.
fn remy_tree(n: usize, rng: &mut impl Rng) -> (Vec<Option<(usize, usize)>>, usize) {
    assert!(n >= 1, "need at least one leaf");
    let mut children: Vec<Option<(usize, usize)>> = vec![None];
    let mut parent: Vec<usize> = vec![usize::MAX];
    let mut root = 0;
    for _ in 1..n {
        let x = rng.gen_range(0..children.len());
        let leaf = children.len();
        children.push(None);
        parent.push(usize::MAX);
        let z = children.len();
        let kids = if rng.gen_bool(0.5) { (x, leaf) } else { (leaf, x) };
        children.push(Some(kids));
        parent.push(parent[x]);
        if x == root {
            root = z;
        } else {
            let p = parent[x];
            let (a, b) = children[p].expect("parent is internal");
            children[p] = Some(if a == x { (z, b) } else { (a, z) });
        }
        parent[x] = z;
        parent[leaf] = z;
    }
    (children, root)
}

/// Post order of a tree given by `children`, left before right.
fn post_order(children: &[Option<(usize, usize)>], root: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(children.len());
    let mut stack = vec![(root, false)];
    while let Some((x, expanded)) = stack.pop() {
        match children[x] {
            Some((a, b)) if !expanded => {
                stack.push((x, true));
                stack.push((b, false));
                stack.push((a, false));
            }
            _ => out.push(x),
        }
    }
    out
}

fn random_label(k: usize, rng: &mut impl Rng) -> Label {
    Label::from_index(rng.gen_range(0..k))
}

fn random_relation(k: usize, rng: &mut impl Rng) -> JoinRelation {
    let mut s = JoinRelation::new();
    for a in 0..k {
        for b in 0..k {
            if rng.gen_bool(0.5) {
                s.insert(Label::from_index(a), Label::from_index(b));
            }
        }
    }
    s
}

/// Each label keeps its value or moves to a uniform label, with equal odds.
fn random_map(k: usize, rng: &mut impl Rng) -> LabelMap {
    let mut m = LabelMap::identity(k);
    for a in 0..k {
        if rng.gen_bool(0.5) {
            m.set(Label::from_index(a), random_label(k, rng));
        }
    }
    m
}

fn vertex(prefix: &str, i: usize) -> VertexId {
    VertexId::new(format!("{prefix}{i}")).expect("generated names are identifiers")
}

/// Builds a slick expression on a Rémy tree, filling atoms and joins with
/// the given samplers. Vertices are named `<prefix><i>`.
fn slick_on_tree<R: Rng>(
    n: usize,
    k: usize,
    prefix: &str,
    rng: &mut R,
    mut atom: impl FnMut(&mut R) -> Label,
    mut join: impl FnMut(&mut R) -> (JoinRelation, LabelMap, LabelMap),
) -> SlickExpr {
    let (children, root) = remy_tree(n, rng);
    let order = post_order(&children, root);
    let mut id = vec![usize::MAX; children.len()];
    let mut b = SlickBuilder::new(k);
    let mut next_vertex = 0;
    for x in order {
        id[x] = match children[x] {
            None => {
                let label = atom(rng);
                next_vertex += 1;
                b.push(SlickNode::Atom {
                    label,
                    vertex: vertex(prefix, next_vertex - 1),
                })
            }
            Some((l, r)) => {
                let (s, lm, rm) = join(rng);
                b.join_with(s, lm, rm, id[l], id[r])
            }
        };
    }
    b.finish().expect("generated expression is valid")
}

/// Random slick `k`-expression with `n` atoms: uniform tree shape, uniform
/// atom labels, each `S` pair present with probability 1/2, random `L`/`R`.
pub fn random_slick(n: usize, k: usize, rng: &mut impl Rng) -> SlickExpr {
    slick_on_tree(
        n,
        k,
        "v",
        rng,
        |rng| random_label(k, rng),
        |rng| (random_relation(k, rng), random_map(k, rng), random_map(k, rng)),
    )
}

/// Random slick expression with `n` uniform in `1..=max_n` and `k` uniform
/// in `1..=max_k`, both drawn from `rng` first.
pub fn random_sized_slick(max_n: usize, max_k: usize, rng: &mut impl Rng) -> SlickExpr {
    let n = rng.gen_range(1..=max_n);
    let k = rng.gen_range(1..=max_k);
    random_slick(n, k, rng)
}

/// Random slick 1-expression; every join is a disjoint union or a complete join.
pub fn random_cograph(n: usize, rng: &mut impl Rng) -> SlickExpr {
    cograph_with_labels(n, 1, "v", rng)
}

/// Cograph whose vertices carry random labels in `[k]`. Every join is
/// all-or-nothing across labels, so labels do not affect the graph.
fn cograph_with_labels(n: usize, k: usize, prefix: &str, rng: &mut impl Rng) -> SlickExpr {
    slick_on_tree(
        n,
        k,
        prefix,
        rng,
        |rng| random_label(k, rng),
        |rng| {
            let s = if rng.gen_bool(0.5) {
                (0..k)
                    .flat_map(|a| (0..k).map(move |b| (Label::from_index(a), Label::from_index(b))))
                    .collect()
            } else {
                JoinRelation::new()
            };
            (s, LabelMap::identity(k), LabelMap::identity(k))
        },
    )
}

/// Joins two expressions of the same width under a new root.
pub fn join_exprs(a: &SlickExpr, b: &SlickExpr, s: JoinRelation, l: LabelMap, r: LabelMap) -> SlickExpr {
    assert_eq!(a.width(), b.width());
    let offset = a.len();
    let shift = |node: &SlickNode| match node {
        SlickNode::Join { s, l, r, left, right } => SlickNode::Join {
            s: s.clone(),
            l: l.clone(),
            r: r.clone(),
            left: left + offset,
            right: right + offset,
        },
        atom => atom.clone(),
    };
    let mut nodes: Vec<SlickNode> = a.nodes().to_vec();
    nodes.extend(b.nodes().iter().map(shift));
    nodes.push(SlickNode::Join {
        s,
        l,
        r,
        left: a.root(),
        right: b.root() + offset,
    });
    let root = nodes.len() - 1;
    SlickExpr::from_nodes(a.width(), nodes, root).expect("vertex names must differ between operands")
}

/// Two random cographs on `n_left` and `n_right` vertices, each vertex
/// labeled 1 or 2 at random, joined by `S = {(2,2)}`. Width 2.
pub fn joined_cograph_pair(n_left: usize, n_right: usize, rng: &mut impl Rng) -> SlickExpr {
    let a = cograph_with_labels(n_left, 2, "x", rng);
    let b = cograph_with_labels(n_right, 2, "y", rng);
    let two = Label::new(2);
    join_exprs(
        &a,
        &b,
        [(two, two)].into_iter().collect(),
        LabelMap::identity(2),
        LabelMap::identity(2),
    )
}

/// `t` disjoint paths `a-b-c-d`, or `2t` disjoint edges when `middle` is false.
fn path_copies(t: usize, middle: bool) -> SlickExpr {
    assert!(t >= 1);
    let mut b = SlickBuilder::new(2);
    let mut acc = None;
    for i in 0..t {
        let a = b.atom(1, &format!("a{i}"));
        let bb = b.atom(2, &format!("b{i}"));
        let ab = b.join(&[(1, 2)], &[], &[], a, bb);
        let c = b.atom(2, &format!("c{i}"));
        let d = b.atom(1, &format!("d{i}"));
        let cd = b.join(&[(2, 1)], &[], &[], c, d);
        let top: &[(u32, u32)] = if middle { &[(2, 2)] } else { &[] };
        let p = b.join(top, &[], &[], ab, cd);
        acc = Some(match acc {
            None => p,
            Some(prev) => b.join(&[], &[], &[], prev, p),
        });
    }
    b.finish().expect("valid")
}

/// `t` disjoint copies of `P4`, width 2.
pub fn copies_of_p4(t: usize) -> SlickExpr {
    path_copies(t, true)
}

/// `2t` disjoint copies of `K2`, width 2.
pub fn copies_of_k2(t: usize) -> SlickExpr {
    path_copies(t, false)
}

fn random_classic_label_op(k: usize, child: usize, rng: &mut impl Rng) -> ClassicNode {
    let i = random_label(k, rng);
    if rng.gen_bool(0.5) && k >= 2 {
        let mut others: Vec<Label> = (0..k).map(Label::from_index).filter(|&j| j != i).collect();
        others.shuffle(rng);
        ClassicNode::Eta { i, j: others[0], child }
    } else {
        ClassicNode::Rho {
            from: i,
            to: random_label(k, rng),
            child,
        }
    }
}

/// Random classic `k`-expression with `n` atoms: a Rémy tree of unions with
/// up to two random `η`/`ρ` operations above every node.
pub fn random_classic(n: usize, k: usize, rng: &mut impl Rng) -> ClassicExpr {
    let (children, root) = remy_tree(n, rng);
    let order = post_order(&children, root);
    let mut id = vec![usize::MAX; children.len()];
    let mut nodes: Vec<ClassicNode> = Vec::new();
    let mut next_vertex = 0;
    for x in order {
        let mut t = match children[x] {
            None => {
                next_vertex += 1;
                nodes.push(ClassicNode::Atom {
                    label: random_label(k, rng),
                    vertex: vertex("v", next_vertex - 1),
                });
                nodes.len() - 1
            }
            Some((l, r)) => {
                nodes.push(ClassicNode::Union {
                    left: id[l],
                    right: id[r],
                });
                nodes.len() - 1
            }
        };
        for _ in 0..rng.gen_range(0..=2) {
            nodes.push(random_classic_label_op(k, t, rng));
            t = nodes.len() - 1;
        }
        id[x] = t;
    }
    ClassicExpr::from_nodes(k, nodes, id[root]).expect("generated expression is valid")
}
