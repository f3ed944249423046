use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed PD code: {0}")]
    MalformedPd(String),

    #[error("edge label {label} appears {count} times (expected 2)")]
    EdgeMultiplicity { label: i64, count: usize },

    #[error("inconsistent orientation: {0}")]
    Orientation(String),

    #[error("diagram has more than one component")]
    MultiComponent,

    #[error("diagram must have at least one crossing")]
    NoCrossings,

    #[error("face count {faces} fails the sphere check for {crossings} crossings (non-planar input)")]
    NonPlanar { faces: usize, crossings: usize },

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("arc {0} does not exist")]
    InvalidArc(usize),

    #[error("face {0} does not exist")]
    InvalidFace(usize),

    #[error("operation needs the edge (PD) data of the diagram, which is missing")]
    MissingEdgeData,

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),

    #[error("invalid parabolic vector: (0, 0)")]
    ZeroVector,

    #[error("arc {0} has no color")]
    MissingArcColor(usize),

    #[error("face {0} has no value")]
    MissingFaceValue(usize),

    #[error("region coloring inconsistent at face {face} (differs beyond sign by {deviation:e})")]
    InconsistentRegionColoring { face: usize, deviation: f64 },

    #[error("arc coloring fails at crossings {0:?}")]
    BrokenArcColoring(Vec<usize>),

    #[error("no generic shadow coloring found within the search budget")]
    SearchExhausted,

    #[error("conjugator does not carry the color of arc {arc2} onto the color of arc {arc1}")]
    ConjugatorMismatch { arc1: usize, arc2: usize },

    #[error("conjugator must have determinant 1 (got {0})")]
    ConjugatorNotUnimodular(String),

    #[error("connecting arcs {0} and {1} carry different colors")]
    ConnectingArcsDisagree(usize, usize),

    #[error("splice record does not match the diagram: {0}")]
    SpliceMismatch(String),

    #[error("region variable vanishes at face {0}")]
    ZeroDeterminant(usize),

    #[error("crossing potential needs nonzero arguments")]
    ZeroArgument,

    #[error("dilogarithm argument at the branch point 1 (degenerate region variables)")]
    BranchPoint,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("division by (1-t)^2 leaves a remainder of norm {0:e}")]
    NonZeroRemainder(f64),

    #[error("determinant interpolation residual {0:e} exceeds tolerance")]
    InterpolationResidual(f64),

    #[error("generator {0} is not mapped to a colored arc")]
    UnmappedGenerator(usize),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("exact arithmetic requested for floating-point input")]
    NotExact,

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("JSON schema: {0}")]
    Schema(String),

    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),

    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    /// Failures of the mathematics on well-formed input (residuals,
    /// remainders, broken colorings), as opposed to malformed input.
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::InconsistentRegionColoring { .. }
                | Error::BrokenArcColoring(_)
                | Error::SearchExhausted
                | Error::ConnectingArcsDisagree(..)
                | Error::ZeroDeterminant(_)
                | Error::BranchPoint
                | Error::NonZeroRemainder(_)
                | Error::InterpolationResidual(_)
                | Error::Singular(_)
        )
    }
}
