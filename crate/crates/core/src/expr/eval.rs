use super::{ClassicExpr, ClassicNode, Label, LabeledGraph, SlickExpr, SlickNode};

fn bucket(members: &[usize], g: &LabeledGraph, width: usize) -> Vec<Vec<usize>> {
    let mut b = vec![Vec::new(); width];
    for &v in members {
        b[g.label(v).index()].push(v);
    }
    b
}

impl SlickExpr {
    /// Labeled graph generated by the expression. Vertex ordinals follow arena order.
    pub fn eval(&self) -> LabeledGraph {
        let mut g = LabeledGraph::new();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            match node {
                SlickNode::Atom { label, vertex } => {
                    members[i].push(g.add_vertex(vertex.clone(), *label));
                }
                SlickNode::Join { s, l, r, left, right } => {
                    let lm = std::mem::take(&mut members[*left]);
                    let rm = std::mem::take(&mut members[*right]);
                    if !s.is_empty() {
                        let lb = bucket(&lm, &g, self.width);
                        let rb = bucket(&rm, &g, self.width);
                        for (a, b) in s.iter() {
                            for &u in &lb[a.index()] {
                                for &w in &rb[b.index()] {
                                    g.add_edge(u, w);
                                }
                            }
                        }
                    }
                    for &u in &lm {
                        g.set_label(u, l.apply(g.label(u)));
                    }
                    for &w in &rm {
                        g.set_label(w, r.apply(g.label(w)));
                    }
                    let mut all = lm;
                    all.extend(rm);
                    members[i] = all;
                }
            }
        }
        g
    }
}

impl ClassicExpr {
    pub fn eval(&self) -> LabeledGraph {
        let mut g = LabeledGraph::new();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for (idx, node) in self.nodes.iter().enumerate() {
            members[idx] = match node {
                ClassicNode::Atom { label, vertex } => vec![g.add_vertex(vertex.clone(), *label)],
                ClassicNode::Union { left, right } => {
                    let mut all = std::mem::take(&mut members[*left]);
                    all.extend(std::mem::take(&mut members[*right]));
                    all
                }
                ClassicNode::Eta { i, j, child } => {
                    let m = std::mem::take(&mut members[*child]);
                    let with = |l: Label| -> Vec<usize> { m.iter().copied().filter(|&v| g.label(v) == l).collect() };
                    let (us, ws) = (with(*i), with(*j));
                    for &u in &us {
                        for &w in &ws {
                            g.add_edge(u, w);
                        }
                    }
                    m
                }
                ClassicNode::Rho { from, to, child } => {
                    let m = std::mem::take(&mut members[*child]);
                    for &v in &m {
                        if g.label(v) == *from {
                            g.set_label(v, *to);
                        }
                    }
                    m
                }
            };
        }
        g
    }
}

/// Free-function form of [`SlickExpr::eval`].
pub fn eval_slick(e: &SlickExpr) -> LabeledGraph {
    e.eval()
}

/// Free-function form of [`ClassicExpr::eval`].
pub fn eval_classic(e: &ClassicExpr) -> LabeledGraph {
    e.eval()
}
