use thiserror::Error;

use crate::graph::{ColorSet, EdgeId, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge list is empty")]
    Empty,
    #[error("dimension {0} is too small (need n >= 2)")]
    DimensionTooSmall(usize),
    #[error("dimension {0} is too large")]
    DimensionTooLarge(usize),
    #[error("color {color} is outside 0..={n}")]
    InvalidColor { color: usize, n: usize },
    #[error("color set {0} is not contained in the palette")]
    InvalidColorSet(ColorSet),
    #[error("loop at vertex {vertex} (color {color})")]
    LoopEdge { vertex: Vertex, color: usize },
    #[error("degree violation at vertex {vertex}: {detail}")]
    DegreeViolation { vertex: Vertex, detail: String },
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("no edge with id {0}")]
    InvalidEdge(EdgeId),
    #[error("no vertex with id {0}")]
    InvalidVertex(Vertex),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("operation requires n = 4, got n = {0}")]
    WrongDimension(usize),
    #[error("not a gem: {colors}-residue starting at vertex {vertex} is not a 2-sphere (chi = {chi})")]
    NotAGem { colors: ColorSet, vertex: Vertex, chi: i64 },
    #[error("prerequisite failed: {0}")]
    PrerequisiteFailed(String),
    #[error("gem has {0} residues missing the apex color (expected exactly one)")]
    MultipleApexResidues(usize),
    #[error("attestation conflict: {0}")]
    AttestationConflict(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrisectionError {
    #[error("the residue missing the apex color is disconnected ({0} components)")]
    ApexResidueDisconnected(usize),
    #[error("permutation must end with the apex color 4")]
    PermutationApex,
    #[error("collapse incomplete: {} squares left ({residual:?})", residual.len())]
    Incomplete { residual: Vec<EdgeId> },
    #[error("edge {0} is not a 4-colored edge")]
    NotApexEdge(EdgeId),
    #[error("missing trisection certificate: {0}")]
    MissingCertificate(String),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("curve count mismatch: {system} has {found} curves, genus is {genus}")]
    CountMismatch { system: &'static str, found: usize, genus: usize },
    #[error("gamma expansion diverged at edge {0}")]
    ExpansionDiverged(EdgeId),
    #[error("unsupported export format: {0}")]
    UnsupportedFormat(String),
    #[error("ordering does not satisfy the collapse property: {0}")]
    InvalidOrdering(String),
    #[error(transparent)]
    Trisection(#[from] TrisectionError),
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("json: {0}")]
    Json(String),
    #[error("invalid gem: {0}")]
    Validation(#[from] GraphError),
}

/// Top-level error with a process exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("not in the class G_s^(4): {0}")]
    NotInClass(String),
    #[error(transparent)]
    Trisection(#[from] TrisectionError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("internal failure: {0}")]
    Internal(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// 0 ok; 1 parse/validation; 2 not in G_s^(4); 3 internal; 4 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Graph(_) => 1,
            Error::Validation(ValidationError::MultipleApexResidues(_)) => 2,
            Error::Validation(_) => 1,
            Error::NotInClass(_) => 2,
            Error::Trisection(TrisectionError::ApexResidueDisconnected(_)) => 2,
            Error::Trisection(TrisectionError::Validation(_)) => 1,
            Error::Trisection(_) | Error::Diagram(_) | Error::Internal(_) => 3,
            Error::Io(_) => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
