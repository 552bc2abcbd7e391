use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The input encodes a non-orientable identification (a signed edge with
    /// matching signs, or a pairing that cannot carry a global rotation).
    /// Everything downstream assumes orientable surfaces.
    #[error("non-orientable input: {0}")]
    NonOrientable(String),

    #[error("invalid map data: {0}")]
    InvalidMap(String),

    #[error("invalid curve or arc: {0}")]
    InvalidCurve(String),

    #[error("invalid trisection parameters: {0}")]
    InvalidParams(String),

    #[error("diagram validation failed: {0}")]
    InvalidDiagram(String),

    /// A cut/cap operation was asked to cut along something that is not an
    /// embedded system of disjoint closed curves away from the boundary.
    #[error("surgery obstruction: {0}")]
    SurgeryObstruction(String),

    /// A slide band is blocked: it re-enters the slid family, runs along a
    /// curve, or gets too close to the boundary for the detour to embed.
    #[error("band obstructed: {0}")]
    BandObstructed(String),

    /// Bounded search (slide disjointification, normalization widening) gave
    /// up before finding a witness. The operation may still be possible at a
    /// higher depth.
    #[error("search exhausted at depth {depth}: {what}")]
    SearchExhausted { what: String, depth: u32 },

    /// A homology-level certificate shows the requested standardization is
    /// impossible, not merely undiscovered.
    #[error("homology obstruction: {0}")]
    HomologyObstruction(String),

    #[error("gluing mismatch: {0}")]
    GluingMismatch(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("render layout failure: {0}")]
    Layout(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
