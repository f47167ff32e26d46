//! Eigenvalue location for graphs of bounded slick clique-width.
//!
//! A graph is supplied as a slick k-expression. [`diag::diagonalize`] walks
//! its parse tree once and emits the diagonal of a matrix congruent to
//! `A - cI`; by Sylvester's law of inertia the signs of those entries count
//! eigenvalues above, at and below `c`. [`spectral`] turns two such runs into
//! interval counts, and [`oracle`] recomputes everything densely for
//! cross-checking.

pub mod diag;
pub mod error;
pub mod expr;
pub mod generate;
pub mod oracle;
pub mod scalar;
pub mod spectral;
pub mod translate;

pub use diag::{diagonalize, DiagEntry, DiagList, KBox, MatrixSpec};
pub use error::{BoxParseError, DiagError, ExprError, ParseError, SpectralError};
pub use expr::{graphs_equal, parse_classic, parse_slick, ClassicExpr, Label, LabeledGraph, SlickExpr, VertexId};
pub use scalar::Scalar;
pub use spectral::{count_eigenvalues, inertia, Inertia, Interval};
