//! Serialization and drawing.
//!
//! - [`json`]: documents for blocks, tilings and block graphs. Large
//!   numbers are written as decimal strings.
//! - [`dot`]: Graphviz export of block graphs.
//! - [`svg`]: static drawings of layers and tilings.
//!
//! Every writer is a pure function of its input, so equal inputs give
//! byte-identical output.

pub mod dot;
pub mod json;
pub mod svg;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Sequence(#[from] crate::fsequence::SequenceError),
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
    #[error(transparent)]
    Graph(#[from] crate::blockgraph::GraphError),
    #[error("{0}")]
    Invalid(String),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
