use thiserror::Error;

/// Malformed rational literal.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational number {0:?}")]
pub struct ScalarParseError(pub String);

/// Structural violation of an expression invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("label {label} out of range 1..={width}")]
    LabelOutOfRange { label: u64, width: usize },
    #[error("width must be at least 1")]
    ZeroWidth,
    #[error("duplicate vertex name {0:?}")]
    DuplicateVertex(String),
    #[error("invalid vertex name {0:?}")]
    InvalidVertexName(String),
    #[error("label {0} appears twice as a map source")]
    DuplicateSource(u32),
    #[error("pair ({0} {1}) listed twice")]
    DuplicatePair(u32, u32),
    #[error("eta requires distinct labels, got ({0} {0})")]
    EtaSameLabel(u32),
    #[error("label map has width {found}, expected {expected}")]
    MapWidth { found: usize, expected: usize },
    #[error("node {0} is used as a child more than once")]
    ChildReused(usize),
    #[error("node {child} referenced before it exists (parent {parent})")]
    ForwardReference { parent: usize, child: usize },
    #[error("node {0} is not reachable from the root")]
    Unreachable(usize),
    #[error("root {0} does not exist")]
    BadRoot(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing `k <int>` header")]
    MissingHeader,
    #[error("unexpected end of input")]
    UnexpectedEof,
    #[error("unexpected {found}; expected {expected}")]
    Unexpected { expected: &'static str, found: String },
    #[error("invalid integer {0:?}")]
    BadInteger(String),
    #[error("unknown form {0:?}")]
    UnknownForm(String),
    #[error("trailing input after expression")]
    TrailingInput,
    #[error(transparent)]
    Invalid(#[from] ExprError),
}

/// Parse failure with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagError {
    #[error("node {node}: invariant violated: {detail}")]
    Invariant { node: usize, detail: String },
    #[error("no diagonal entry for vertex {0:?}")]
    MissingDiagonal(String),
    #[error("off-diagonal value must be nonzero")]
    ZeroOffDiagonal,
}

impl DiagError {
    pub fn node(&self) -> Option<usize> {
        match self {
            DiagError::Invariant { node, .. } => Some(*node),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("malformed interval: {0}")]
    MalformedInterval(String),
    #[error("expression root is an atom, not a join")]
    RootIsAtom,
    #[error(transparent)]
    Diag(#[from] DiagError),
}

/// Malformed k-box record.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid box record: {0}")]
pub struct BoxParseError(pub String);
