use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cell `{0}` is defined more than once")]
    DuplicateCell(String),
    #[error("cell `{cell}` refers to unknown facet `{facet}`")]
    DanglingFacet { cell: String, facet: String },
    #[error("cell `{cell}` of dimension {dim} lists facet `{facet}` of dimension {facet_dim}")]
    DimensionMismatch {
        cell: String,
        dim: usize,
        facet: String,
        facet_dim: usize,
    },
    #[error("cell `{cell}` lists facet `{facet}` more than once")]
    DuplicateFacet { cell: String, facet: String },
    #[error("cell `{cell}` has incidence {sign} with `{facet}`, expected +1 or -1")]
    BadSign { cell: String, facet: String, sign: i64 },
    #[error("boundary of boundary of `{cell}` is nonzero on `{face}`")]
    NonSquareZeroBoundary { cell: String, face: String },
    #[error("empty input")]
    EmptyInput,
    #[error("simplex {0:?} repeats a vertex")]
    RepeatedVertex(Vec<u64>),
    #[error("unknown builtin complex `{0}`")]
    UnknownName(String),
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("chain refers to cell `{cell}` of dimension {dim}, chain degree is {degree}")]
    ChainDegree { cell: String, dim: usize, degree: usize },
    #[error("degree {degree} out of range 0..={max}")]
    BadDegree { degree: usize, max: usize },

    #[error("differentials d{degree} and d{next} do not compose to zero")]
    NotAComplex { degree: usize, next: usize },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("integer overflow in exact matrix arithmetic")]
    Overflow,

    #[error("no value given for cell `{0}`")]
    MissingValue(String),
    #[error("value given for unknown cell `{0}`")]
    ExtraValue(String),
    #[error("function is not a discrete Morse function ({0} violations)")]
    NotMorse(usize),
    #[error("function is not generic ({0} comparable pairs share a value)")]
    NotGeneric(usize),
    #[error("function is not tame ({0} violating pairs)")]
    NotTame(usize),

    #[error("Morse differential fails to square to zero in degree {degree}")]
    DifferentialNotSquareZero { degree: usize },
    #[error("PL differential differs from the discrete Morse differential in degree {degree} at ({row}, {col})")]
    MatrixMismatch { degree: usize, row: String, col: String },

    #[error("Gram matrix is singular")]
    SingularGram,
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("gradient on simplex {simplex} is parallel to the facet opposite `{vertex}`")]
    DegenerateDirection { simplex: String, vertex: String },
    #[error("metric: {0}")]
    Metric(String),
    #[error("point: {0}")]
    BadPoint(String),

    #[error("cell `{0}` is not critical")]
    NotCritical(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
