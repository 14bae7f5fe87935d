//! Residual operators, reduction maps and desk-scale solvers for the chain
//! self-dual Yang-Mills -> Bogomolny -> (2+1) frame systems -> {KP, mKP, DS,
//! Ishimori, spin systems}.
//!
//! Every equation is represented as a function returning a [`ResidualReport`]
//! (or the residual field itself), so that "solution of the downstream
//! equation annihilates the upstream residual" becomes a numeric assertion.
//!
//! All fields live on a uniform periodic [`Grid2`]; spatial derivatives are
//! Fourier-spectral, time derivatives are fourth-order differences over a
//! [`TimeStack`].

pub mod error;
pub mod field;
pub mod fixtures;
pub mod frames;
pub mod grid;
pub mod io;
pub mod mat;
pub mod mmlxii;
pub mod random;
pub mod reductions;
pub mod residual;
pub mod sdym;
pub mod solvers;
pub mod spectral;
pub mod stack;
pub mod surface;
pub mod tolerance;
pub mod transport;

pub use error::{Error, Result};
pub use field::{commutator, ComplexField, Field, MatrixField, Sample, ScalarField};
pub use grid::{Axis, Grid2};
pub use mat::Mat;
pub use num_complex::Complex64;
pub use residual::{residual_norm, ResidualReport};
pub use stack::TimeStack;
