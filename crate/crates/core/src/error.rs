use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("no admissible root; real roots found: {roots:?}")]
    NoAdmissibleRoot { roots: Vec<f64> },

    #[error("more than one admissible root ({roots:?}); contradicts uniqueness of the positive critical point")]
    MultipleAdmissibleRoots { roots: Vec<f64> },

    #[error("closed-form estimate has Birch residual {residual:e} above tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("boundary data: {0}")]
    BoundaryData(String),

    #[error("unsupported face: {0}")]
    UnsupportedFace(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("tree is not 3-valent")]
    NotThreeValent,

    #[error("tree has {leaves} leaves; at most {max} supported")]
    TreeTooLarge { leaves: usize, max: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("incompatible marginals: {0}")]
    IncompatibleMarginals(String),

    #[error("parse error: {0}")]
    Parse(String),
}
