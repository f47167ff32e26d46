//! Reader for the parenthesized prefix syntax.
//!
//! ```text
//! k <INT>
//! slick   := (v INT IDENT) | (join (S pair*) (L pair*) (R pair*) slick slick)
//! classic := (v INT IDENT) | (u classic classic) | (eta INT INT classic) | (rho INT INT classic)
//! pair    := (INT INT)
//! ```
//!
//! The reader keeps an explicit stack, so nesting depth is bounded only by memory.

use std::collections::HashSet;

use super::{ClassicExpr, ClassicNode, JoinRelation, Label, LabelMap, NodeId, SlickExpr, SlickNode, VertexId};
use crate::error::{ExprError, ParseError, ParseErrorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn err(self, kind: impl Into<ParseErrorKind>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            kind: kind.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Word(String),
}

fn tokenize(text: &str) -> Vec<(Tok, Pos)> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut word: Option<(String, Pos)> = None;
    for ch in text.chars() {
        let here = Pos { line, column };
        let delim = ch.is_whitespace() || ch == '(' || ch == ')';
        if delim {
            if let Some((w, p)) = word.take() {
                out.push((Tok::Word(w), p));
            }
            match ch {
                '(' => out.push((Tok::Open, here)),
                ')' => out.push((Tok::Close, here)),
                _ => {}
            }
        } else {
            word.get_or_insert_with(|| (String::new(), here)).0.push(ch);
        }
        if ch == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    if let Some((w, p)) = word.take() {
        out.push((Tok::Word(w), p));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GroupKind {
    S,
    L,
    R,
}

#[derive(Debug, Clone)]
enum Item {
    Word(String, Pos),
    Expr(NodeId, Pos),
    Pair(Label, Label, Pos),
    Group(GroupKind, Vec<(Label, Label, Pos)>, Pos),
}

impl Item {
    fn pos(&self) -> Pos {
        match self {
            Item::Word(_, p) | Item::Expr(_, p) | Item::Pair(_, _, p) | Item::Group(_, _, p) => *p,
        }
    }

    fn describe(&self) -> String {
        match self {
            Item::Word(w, _) => format!("`{w}`"),
            Item::Expr(..) => "expression".into(),
            Item::Pair(..) => "pair".into(),
            Item::Group(..) => "pair list".into(),
        }
    }
}

fn parse_int(word: &str, pos: Pos) -> Result<u64, ParseError> {
    if word.is_empty() || !word.bytes().all(|b| b.is_ascii_digit()) {
        return Err(pos.err(ParseErrorKind::BadInteger(word.to_string())));
    }
    word.parse()
        .map_err(|_| pos.err(ParseErrorKind::BadInteger(word.to_string())))
}

fn label(word: &str, pos: Pos, width: usize) -> Result<Label, ParseError> {
    Label::checked(parse_int(word, pos)?, width).map_err(|e| pos.err(e))
}

/// Splits off the `k <INT>` header and returns the width plus remaining tokens.
fn header(text: &str) -> Result<(usize, Vec<(Tok, Pos)>), ParseError> {
    let toks = tokenize(text);
    let start = Pos { line: 1, column: 1 };
    let mut it = toks.into_iter();
    match it.next() {
        Some((Tok::Word(w), _)) if w == "k" => {}
        Some((_, p)) => return Err(p.err(ParseErrorKind::MissingHeader)),
        None => return Err(start.err(ParseErrorKind::MissingHeader)),
    }
    let width = match it.next() {
        Some((Tok::Word(w), p)) => {
            let k = parse_int(&w, p)?;
            if k == 0 || k > u32::MAX as u64 {
                return Err(p.err(ExprError::ZeroWidth));
            }
            k as usize
        }
        Some((_, p)) => return Err(p.err(ParseErrorKind::MissingHeader)),
        None => return Err(start.err(ParseErrorKind::MissingHeader)),
    };
    Ok((width, it.collect()))
}

/// Drives the token stream; `close` turns a finished list into an item.
fn read<F>(toks: Vec<(Tok, Pos)>, mut close: F) -> Result<NodeId, ParseError>
where
    F: FnMut(Vec<Item>, Pos) -> Result<Item, ParseError>,
{
    let mut stack: Vec<(Pos, Vec<Item>)> = Vec::new();
    let mut result: Option<Item> = None;
    let mut last = Pos { line: 1, column: 1 };
    for (tok, pos) in toks {
        last = pos;
        match tok {
            Tok::Open => {
                if stack.is_empty() && result.is_some() {
                    return Err(pos.err(ParseErrorKind::TrailingInput));
                }
                stack.push((pos, Vec::new()));
            }
            Tok::Word(w) => match stack.last_mut() {
                Some((_, items)) => items.push(Item::Word(w, pos)),
                None if result.is_some() => return Err(pos.err(ParseErrorKind::TrailingInput)),
                None => {
                    return Err(pos.err(ParseErrorKind::Unexpected {
                        expected: "`(`",
                        found: format!("`{w}`"),
                    }))
                }
            },
            Tok::Close => {
                let (open, items) = stack.pop().ok_or_else(|| {
                    pos.err(ParseErrorKind::Unexpected {
                        expected: "`(` or end of input",
                        found: "`)`".into(),
                    })
                })?;
                let item = close(items, open)?;
                match stack.last_mut() {
                    Some((_, items)) => items.push(item),
                    None => result = Some(item),
                }
            }
        }
    }
    if !stack.is_empty() {
        return Err(last.err(ParseErrorKind::UnexpectedEof));
    }
    match result {
        Some(Item::Expr(id, _)) => Ok(id),
        Some(other) => Err(other.pos().err(ParseErrorKind::Unexpected {
            expected: "expression",
            found: other.describe(),
        })),
        None => Err(last.err(ParseErrorKind::UnexpectedEof)),
    }
}

fn expect_len(items: &[Item], n: usize, open: Pos, what: &'static str) -> Result<(), ParseError> {
    if items.len() == n {
        return Ok(());
    }
    let (pos, found) = match items.get(n) {
        Some(extra) => (extra.pos(), extra.describe()),
        None => (open, "`)`".to_string()),
    };
    Err(pos.err(ParseErrorKind::Unexpected { expected: what, found }))
}

fn unexpected(item: &Item, expected: &'static str) -> ParseError {
    item.pos().err(ParseErrorKind::Unexpected {
        expected,
        found: item.describe(),
    })
}

fn expr_of(item: &Item) -> Result<NodeId, ParseError> {
    match item {
        Item::Expr(id, _) => Ok(*id),
        other => Err(unexpected(other, "expression")),
    }
}

fn word_of<'a>(item: &'a Item, expected: &'static str) -> Result<(&'a str, Pos), ParseError> {
    match item {
        Item::Word(w, p) => Ok((w.as_str(), *p)),
        other => Err(unexpected(other, expected)),
    }
}

/// Shared state for atom handling.
struct Atoms {
    width: usize,
    names: HashSet<String>,
}

impl Atoms {
    fn atom(&mut self, items: &[Item], open: Pos) -> Result<(Label, VertexId), ParseError> {
        expect_len(items, 3, open, "(v INT IDENT)")?;
        let (lw, lp) = word_of(&items[1], "label")?;
        let l = label(lw, lp, self.width)?;
        let (name, np) = word_of(&items[2], "vertex name")?;
        let vertex = VertexId::new(name).map_err(|e| np.err(e))?;
        if !self.names.insert(name.to_string()) {
            return Err(np.err(ExprError::DuplicateVertex(name.to_string())));
        }
        Ok((l, vertex))
    }
}

fn pair(items: &[Item], open: Pos, width: usize) -> Result<Item, ParseError> {
    expect_len(items, 2, open, "(INT INT)")?;
    let (a, ap) = word_of(&items[0], "label")?;
    let (b, bp) = word_of(&items[1], "label")?;
    Ok(Item::Pair(label(a, ap, width)?, label(b, bp, width)?, open))
}

fn group(kind: GroupKind, items: &[Item], open: Pos) -> Result<Item, ParseError> {
    let mut pairs = Vec::with_capacity(items.len() - 1);
    let mut seen = HashSet::new();
    for it in &items[1..] {
        match it {
            Item::Pair(a, b, p) => {
                let dup = match kind {
                    GroupKind::S => !seen.insert((*a, *b)),
                    GroupKind::L | GroupKind::R => !seen.insert((*a, *a)),
                };
                if dup {
                    let err = match kind {
                        GroupKind::S => ExprError::DuplicatePair(a.get(), b.get()),
                        _ => ExprError::DuplicateSource(a.get()),
                    };
                    return Err(p.err(err));
                }
                pairs.push((*a, *b, *p));
            }
            other => return Err(unexpected(other, "(INT INT)")),
        }
    }
    Ok(Item::Group(kind, pairs, open))
}

fn take_group(item: &Item, kind: GroupKind, expected: &'static str) -> Result<Vec<(Label, Label)>, ParseError> {
    match item {
        Item::Group(k, pairs, _) if *k == kind => Ok(pairs.iter().map(|&(a, b, _)| (a, b)).collect()),
        other => Err(unexpected(other, expected)),
    }
}

/// Parses a slick expression file.
pub fn parse_slick(text: &str) -> Result<SlickExpr, ParseError> {
    let (width, toks) = header(text)?;
    let mut atoms = Atoms {
        width,
        names: HashSet::new(),
    };
    let mut nodes: Vec<SlickNode> = Vec::new();
    let root = read(toks, |items, open| {
        let head = match items.first() {
            Some(Item::Word(w, _)) => w.clone(),
            Some(other) => return Err(unexpected(other, "form name")),
            None => {
                return Err(open.err(ParseErrorKind::Unexpected {
                    expected: "form name",
                    found: "`)`".into(),
                }))
            }
        };
        match head.as_str() {
            "v" => {
                let (label, vertex) = atoms.atom(&items, open)?;
                nodes.push(SlickNode::Atom { label, vertex });
                Ok(Item::Expr(nodes.len() - 1, open))
            }
            "join" => {
                expect_len(&items, 6, open, "(join (S ..) (L ..) (R ..) expr expr)")?;
                let s = take_group(&items[1], GroupKind::S, "(S pair*)")?;
                let l = take_group(&items[2], GroupKind::L, "(L pair*)")?;
                let r = take_group(&items[3], GroupKind::R, "(R pair*)")?;
                let left = expr_of(&items[4])?;
                let right = expr_of(&items[5])?;
                let s: JoinRelation = s.into_iter().collect();
                let l = LabelMap::from_pairs(width, l).map_err(|e| open.err(e))?;
                let r = LabelMap::from_pairs(width, r).map_err(|e| open.err(e))?;
                nodes.push(SlickNode::Join { s, l, r, left, right });
                Ok(Item::Expr(nodes.len() - 1, open))
            }
            "S" => group(GroupKind::S, &items, open),
            "L" => group(GroupKind::L, &items, open),
            "R" => group(GroupKind::R, &items, open),
            w if w.bytes().all(|b| b.is_ascii_digit()) => pair(&items, open, width),
            _ => Err(items[0].pos().err(ParseErrorKind::UnknownForm(head))),
        }
    })?;
    SlickExpr::from_nodes(width, nodes, root).map_err(|e| Pos { line: 1, column: 1 }.err(e))
}

/// Parses a classic expression file.
pub fn parse_classic(text: &str) -> Result<ClassicExpr, ParseError> {
    let (width, toks) = header(text)?;
    let mut atoms = Atoms {
        width,
        names: HashSet::new(),
    };
    let mut nodes: Vec<ClassicNode> = Vec::new();
    let root = read(toks, |items, open| {
        let head = match items.first() {
            Some(Item::Word(w, _)) => w.clone(),
            Some(other) => return Err(unexpected(other, "form name")),
            None => {
                return Err(open.err(ParseErrorKind::Unexpected {
                    expected: "form name",
                    found: "`)`".into(),
                }))
            }
        };
        let node = match head.as_str() {
            "v" => {
                let (label, vertex) = atoms.atom(&items, open)?;
                ClassicNode::Atom { label, vertex }
            }
            "u" => {
                expect_len(&items, 3, open, "(u expr expr)")?;
                ClassicNode::Union {
                    left: expr_of(&items[1])?,
                    right: expr_of(&items[2])?,
                }
            }
            "eta" | "rho" => {
                expect_len(&items, 4, open, "(eta|rho INT INT expr)")?;
                let (a, ap) = word_of(&items[1], "label")?;
                let (b, bp) = word_of(&items[2], "label")?;
                let (a, b) = (label(a, ap, width)?, label(b, bp, width)?);
                let child = expr_of(&items[3])?;
                if head == "eta" {
                    if a == b {
                        return Err(ap.err(ExprError::EtaSameLabel(a.get())));
                    }
                    ClassicNode::Eta { i: a, j: b, child }
                } else {
                    ClassicNode::Rho { from: a, to: b, child }
                }
            }
            _ => return Err(items[0].pos().err(ParseErrorKind::UnknownForm(head))),
        };
        nodes.push(node);
        Ok(Item::Expr(nodes.len() - 1, open))
    })?;
    ClassicExpr::from_nodes(width, nodes, root).map_err(|e| Pos { line: 1, column: 1 }.err(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(r: Result<SlickExpr, ParseError>) -> ParseErrorKind {
        r.unwrap_err().kind
    }

    #[test]
    fn single_atom() {
        let e = parse_slick("k 1\n(v 1 a)").unwrap();
        assert_eq!(e.width(), 1);
        assert_eq!(
            e.node(e.root()),
            &SlickNode::Atom {
                label: Label::new(1),
                vertex: VertexId::new("a").unwrap()
            }
        );
    }

    #[test]
    fn label_out_of_range() {
        let err = parse_slick("k 2\n(v 3 a)").unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::Invalid(ExprError::LabelOutOfRange { label: 3, width: 2 })
        );
        assert_eq!((err.line, err.column), (2, 4));
    }

    #[test]
    fn syntax_errors_report_position() {
        let err = parse_slick("k 1\n(v 1 a").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnexpectedEof);
        let err = parse_slick("k 1\n  (w 1 a)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownForm("w".into()));
        assert_eq!((err.line, err.column), (2, 4));
        assert_eq!(kind(parse_slick("(v 1 a)")), ParseErrorKind::MissingHeader);
        assert_eq!(kind(parse_slick("k 1\n(v 1 a) (v 1 b)")), ParseErrorKind::TrailingInput);
        assert_eq!(
            kind(parse_slick("k 1\n(v x a)")),
            ParseErrorKind::BadInteger("x".into())
        );
        assert_eq!(
            kind(parse_slick("k 0\n(v 1 a)")),
            ParseErrorKind::Invalid(ExprError::ZeroWidth)
        );
    }

    #[test]
    fn duplicate_vertex_and_source() {
        assert_eq!(
            kind(parse_slick("k 1\n(join (S) (L) (R) (v 1 a) (v 1 a))")),
            ParseErrorKind::Invalid(ExprError::DuplicateVertex("a".into()))
        );
        assert_eq!(
            kind(parse_slick("k 2\n(join (S) (L (1 2) (1 1)) (R) (v 1 a) (v 1 b))")),
            ParseErrorKind::Invalid(ExprError::DuplicateSource(1))
        );
        assert_eq!(
            kind(parse_slick("k 2\n(join (S (1 2) (1 2)) (L) (R) (v 1 a) (v 1 b))")),
            ParseErrorKind::Invalid(ExprError::DuplicatePair(1, 2))
        );
    }

    #[test]
    fn join_groups_must_be_in_order() {
        let err = parse_slick("k 1\n(join (L) (S) (R) (v 1 a) (v 1 b))").unwrap_err();
        assert!(matches!(
            err.kind,
            ParseErrorKind::Unexpected {
                expected: "(S pair*)",
                ..
            }
        ));
    }

    #[test]
    fn classic_forms() {
        let e = parse_classic("k 2\n(eta 1 2 (u (v 1 a) (v 2 b)))").unwrap();
        assert!(matches!(e.node(e.root()), ClassicNode::Eta { .. }));
        assert_eq!(e.depth(), 2);
        let e = parse_classic("k 3\n(rho 1 3 (v 1 a))").unwrap();
        assert_eq!(
            e.node(e.root()),
            &ClassicNode::Rho {
                from: Label::new(1),
                to: Label::new(3),
                child: 0
            }
        );
        let err = parse_classic("k 2\n(eta 1 1 (v 1 a))").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Invalid(ExprError::EtaSameLabel(1)));
    }

    #[test]
    fn deep_nesting_does_not_recurse() {
        let n = 50_000;
        let mut text = String::from("k 1\n");
        for _ in 1..n {
            text.push_str("(join (S (1 1)) (L) (R) ");
        }
        text.push_str("(v 1 x0)");
        for i in 1..n {
            text.push_str(&format!(" (v 1 x{i}))"));
        }
        let e = parse_slick(&text).unwrap();
        assert_eq!(e.atom_count(), n);
        assert_eq!(e.depth(), n - 1);
    }
}
