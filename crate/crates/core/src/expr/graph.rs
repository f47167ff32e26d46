use std::collections::{BTreeMap, BTreeSet};

use super::{Label, VertexId};

/// Vertices with labels plus an undirected simple edge set.
///
/// Edges are stored as ordinal pairs `(u, v)` with `u < v`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledGraph {
    vertices: Vec<(VertexId, Label)>,
    edges: BTreeSet<(usize, usize)>,
}

impl LabeledGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: VertexId, label: Label) -> usize {
        self.vertices.push((id, label));
        self.vertices.len() - 1
    }

    /// Inserts `{u, v}`; self-loops are ignored. Returns true if the edge is new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u < self.vertices.len() && v < self.vertices.len());
        if u == v {
            return false;
        }
        self.edges.insert((u.min(v), u.max(v)))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn set_label(&mut self, v: usize, label: Label) {
        self.vertices[v].1 = label;
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[(VertexId, Label)] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn label(&self, v: usize) -> Label {
        self.vertices[v].1
    }

    pub fn name(&self, v: usize) -> &VertexId {
        &self.vertices[v].0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|(id, _)| id.as_str() == name)
    }

    pub fn degrees(&self) -> Vec<u64> {
        let mut deg = vec![0u64; self.vertices.len()];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Number of connected components (isolated vertices count).
    pub fn component_count(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut comps = n;
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
                comps -= 1;
            }
        }
        comps
    }

    /// Edge set keyed by vertex names, order-independent.
    pub fn named_edges(&self) -> BTreeSet<(&VertexId, &VertexId)> {
        self.edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (&self.vertices[u].0, &self.vertices[v].0);
                (a.min(b), a.max(b))
            })
            .collect()
    }

    /// Induced subgraph on the named vertices, in this graph's vertex order.
    pub fn induced<'a>(&self, names: impl IntoIterator<Item = &'a VertexId>) -> LabeledGraph {
        let wanted: BTreeSet<&VertexId> = names.into_iter().collect();
        let mut out = LabeledGraph::new();
        let mut map = vec![usize::MAX; self.vertices.len()];
        for (i, (id, label)) in self.vertices.iter().enumerate() {
            if wanted.contains(id) {
                map[i] = out.add_vertex(id.clone(), *label);
            }
        }
        for &(u, v) in &self.edges {
            if map[u] != usize::MAX && map[v] != usize::MAX {
                out.add_edge(map[u], map[v]);
            }
        }
        out
    }
}

/// Identity-level equality: same vertex names, same labels, same edges.
/// Vertex order is irrelevant; no isomorphism search is attempted.
pub fn graphs_equal(g1: &LabeledGraph, g2: &LabeledGraph) -> bool {
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return false;
    }
    let labels = |g: &LabeledGraph| -> BTreeMap<VertexId, Label> { g.vertices.iter().cloned().collect() };
    let l1 = labels(g1);
    if l1.len() != g1.vertex_count() || l1 != labels(g2) {
        return false;
    }
    g1.named_edges() == g2.named_edges()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vid(s: &str) -> VertexId {
        VertexId::new(s).unwrap()
    }

    fn path(names: &[&str]) -> LabeledGraph {
        let mut g = LabeledGraph::new();
        for n in names {
            g.add_vertex(vid(n), Label::new(1));
        }
        for i in 1..names.len() {
            g.add_edge(i - 1, i);
        }
        g
    }

    #[test]
    fn equal_to_itself_and_order_independent() {
        let g = path(&["a", "b", "c"]);
        assert!(graphs_equal(&g, &g));
        let mut h = LabeledGraph::new();
        for n in ["c", "b", "a"] {
            h.add_vertex(vid(n), Label::new(1));
        }
        h.add_edge(0, 1);
        h.add_edge(1, 2);
        assert!(graphs_equal(&g, &h));
    }

    #[test]
    fn label_change_breaks_equality() {
        let g = path(&["a", "b"]);
        let mut h = g.clone();
        h.set_label(1, Label::new(2));
        assert!(!graphs_equal(&g, &h));
    }

    #[test]
    fn no_self_loops_or_parallel_edges() {
        let mut g = path(&["a", "b"]);
        assert!(!g.add_edge(0, 0));
        assert!(!g.add_edge(1, 0));
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn components_and_degrees() {
        let mut g = path(&["a", "b", "c"]);
        g.add_vertex(vid("d"), Label::new(1));
        assert_eq!(g.component_count(), 2);
        assert_eq!(g.degrees(), vec![1, 2, 1, 0]);
    }
}
