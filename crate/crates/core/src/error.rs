use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// The inverse x-derivative is undefined on data with a nonzero x-mean.
    #[error("nonzero x-mean {mean:.3e} on row y={row} (max |f| = {scale:.3e})")]
    NonZeroMean { row: usize, mean: f64, scale: f64 },

    #[error("singular metric: det g = {det:.3e} at ({i}, {j})")]
    SingularMetric { i: usize, j: usize, det: f64 },

    /// Frame transport requested on coefficients that fail the zero-curvature test.
    #[error("curvature obstruction: zero-curvature residual {residual:.3e} exceeds {limit:.1e}")]
    CurvatureObstruction { residual: f64, limit: f64 },

    #[error("spectral parameter sits on a pole (lambda = {0})")]
    PoleAtLambda(f64),

    #[error("constraint violated: {what} (worst deviation {deviation:.3e})")]
    ConstraintViolated { what: String, deviation: f64 },

    #[error("|k| = {value:.3e} below the 1e-8 floor at ({i}, {j})")]
    DivisionBySmallK { i: usize, j: usize, value: f64 },

    #[error("time stack required: {0}")]
    MissingTimeStack(String),

    #[error("spin field is not unit length (worst | |S| - 1 | = {0:.3e})")]
    NonUnitSpin(f64),

    #[error("gauge matrix not orthogonal/unitary (deviation {0:.3e})")]
    NonOrthogonalGauge(f64),

    #[error("gauge matrix not invertible at point {0}")]
    SingularGauge(usize),

    #[error("unknown catalog entry '{0}'")]
    UnknownName(String),

    #[error("solution blew up at t = {t:.4} (linf = {linf:.3e})")]
    BlowUp { t: f64, linf: f64 },

    #[error("field format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
