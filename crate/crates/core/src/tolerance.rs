//! Tolerance ladder shared by every module and the acceptance suite.

/// Purely algebraic identities (same data, rearranged arithmetic).
pub const ALGEBRAIC: f64 = 1e-12;
/// Identities involving spectral derivatives of smooth, resolved data.
pub const SPECTRAL: f64 = 1e-8;
/// Residuals of time-stepped numerical solutions.
pub const TIME_STEPPED: f64 = 1e-5;
/// Absolute floor below which `|k|` is treated as vanishing in divisions.
pub const K_FLOOR: f64 = 1e-8;
/// Frame transport refuses coefficients whose zero-curvature residual exceeds this.
pub const TRANSPORT_PRECONDITION: f64 = 1e-6;
/// Unit-spin and orthogonality checks.
pub const UNIT: f64 = 1e-10;
/// Smallest admissible metric determinant.
pub const DET_FLOOR: f64 = 1e-12;
