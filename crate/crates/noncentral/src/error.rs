use thiserror::Error;

/// Errors reported by the numeric layers of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation point at or beyond the declared radius of a series.
    #[error("radius error: t = {t} is not below the radius hint {radius}")]
    Radius { t: f64, radius: f64 },

    /// A truncated normalizing sum came out zero (or not finite).
    #[error("degenerate normalizer: truncated sum is {0}")]
    DegenerateNormalizer(f64),

    /// A requested tail bound could not be achieved within the truncation cap.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// A series spec violates the structural assumptions (p_0 = 0, v not 0).
    #[error("invalid series spec: {0}")]
    InvalidSpec(String),

    /// Residual of a coefficient identity exceeded the requested tolerance.
    #[error("coverage error: {0}")]
    Coverage(String),
}
