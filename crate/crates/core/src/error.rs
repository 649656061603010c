use thiserror::Error;

/// Errors raised by the cone, polytope, toric and polar layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zero generator at index {0}")]
    ZeroGenerator(usize),

    #[error("degenerate pairing: matrix is singular")]
    DegeneratePairing,

    #[error("cone is not full-dimensional (rank {rank} < {dim}); its interior is empty")]
    NotFullDimensional { rank: usize, dim: usize },

    #[error("cone is neither pointed nor full-dimensional")]
    NotPointedOrFull,

    #[error("unbounded polyhedron: recession direction {0:?}")]
    Unbounded(Vec<String>),

    #[error("minkowski sum is not representable with the shared normals")]
    MinkowskiNormals,

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("fan not projective for this toolkit: nef cone has rank {rank} < {dim}")]
    NotProjective { rank: usize, dim: usize },

    #[error("class lies outside the nef cone (margin {margin:.3e})")]
    NotNef { margin: f64 },

    #[error("decomposition defined only for big classes (margin {margin:.3e})")]
    NotBig { margin: f64 },

    #[error("optimizer did not converge after {restarts} restarts (best ratio {best:.6e})")]
    NoConvergence {
        restarts: usize,
        best: f64,
        trace: Vec<f64>,
    },

    #[error("projection formula fails: {0}")]
    ProjectionFormula(String),

    #[error("lift does not push forward correctly: {0}")]
    LiftMismatch(String),

    #[error("quadratic form has signature ({pos},{neg}), expected (1,{expected_neg})")]
    Signature {
        pos: usize,
        neg: usize,
        expected_neg: usize,
    },

    #[error("unknown preset: {0}")]
    UnknownPreset(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad input rather than by the mathematics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::Io(_)
                | Error::Json(_)
                | Error::UnknownPreset(_)
                | Error::DimensionMismatch { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
