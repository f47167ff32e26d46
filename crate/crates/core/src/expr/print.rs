use std::fmt::{self, Write};

use super::{ClassicExpr, ClassicNode, LabelMap, NodeId, SlickExpr, SlickNode};

enum Step {
    Node(NodeId),
    Text(&'static str),
}

fn write_map(f: &mut impl Write, tag: &str, m: &LabelMap) -> fmt::Result {
    write!(f, "({tag}")?;
    for (a, b) in m.pairs() {
        write!(f, " ({a} {b})")?;
    }
    f.write_char(')')
}

impl fmt::Display for SlickExpr {
    /// `k <width>` header, then the expression on one line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k {}", self.width)?;
        let mut stack = vec![Step::Node(self.root)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Text(t) => f.write_str(t)?,
                Step::Node(id) => match &self.nodes[id] {
                    SlickNode::Atom { label, vertex } => write!(f, "(v {label} {vertex})")?,
                    SlickNode::Join { s, l, r, left, right } => {
                        f.write_str("(join (S")?;
                        for (a, b) in s.iter() {
                            write!(f, " ({a} {b})")?;
                        }
                        f.write_str(") ")?;
                        write_map(f, "L", l)?;
                        f.write_char(' ')?;
                        write_map(f, "R", r)?;
                        f.write_char(' ')?;
                        stack.push(Step::Text(")"));
                        stack.push(Step::Node(*right));
                        stack.push(Step::Text(" "));
                        stack.push(Step::Node(*left));
                    }
                },
            }
        }
        f.write_char('\n')
    }
}

impl fmt::Display for ClassicExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k {}", self.width)?;
        let mut stack = vec![Step::Node(self.root)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Text(t) => f.write_str(t)?,
                Step::Node(id) => match &self.nodes[id] {
                    ClassicNode::Atom { label, vertex } => write!(f, "(v {label} {vertex})")?,
                    ClassicNode::Union { left, right } => {
                        f.write_str("(u ")?;
                        stack.push(Step::Text(")"));
                        stack.push(Step::Node(*right));
                        stack.push(Step::Text(" "));
                        stack.push(Step::Node(*left));
                    }
                    ClassicNode::Eta { i, j, child } => {
                        write!(f, "(eta {i} {j} ")?;
                        stack.push(Step::Text(")"));
                        stack.push(Step::Node(*child));
                    }
                    ClassicNode::Rho { from, to, child } => {
                        write!(f, "(rho {from} {to} ")?;
                        stack.push(Step::Text(")"));
                        stack.push(Step::Node(*child));
                    }
                },
            }
        }
        f.write_char('\n')
    }
}
