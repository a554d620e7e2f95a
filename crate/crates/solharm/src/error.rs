use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation requested at a singular point.
    #[error("singularity: {0}")]
    Singularity(String),

    /// Harmonic index with |m| > l.
    #[error("harmonic index out of range: l = {l}, m = {m}")]
    IndexOutOfRange { l: u32, m: i32 },

    /// A vector required to satisfy b·b = 0 does not.
    #[error("vector is not null: |b·b| = {0:.3e}")]
    NotNull(f64),

    /// A vector required to be unit length is not.
    #[error("vector is not unit length: |v| = {0:.17}")]
    NotUnit(f64),

    /// A polynomial required to satisfy Laplace's equation does not.
    #[error("polynomial is not harmonic: |laplacian| = {0:.3e}")]
    NotHarmonic(f64),

    /// Frame triad fails orthonormality or handedness.
    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    /// Series requires strictly distinct radii.
    #[error("series not convergent: |r| = |r'| = {0:.17}")]
    EqualRadius(f64),

    /// Image-charge source lies inside the sphere.
    #[error("source inside sphere: |R| = {r} <= a = {a}")]
    SourceInsideSphere { r: f64, a: f64 },

    /// Finite-difference evaluation too close to a coordinate pole.
    #[error("evaluation too close to pole: theta = {0:.17}")]
    PoleProximity(f64),

    /// Integrand produced a non-finite value.
    #[error("non-finite integrand value at node {0}")]
    NonFinite(usize),

    /// A quantity that must be real carries a large imaginary residue.
    #[error("internal consistency: imaginary residue {0:.3e} too large")]
    ImaginaryResidue(f64),

    /// Malformed input data (CSV/JSON).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
