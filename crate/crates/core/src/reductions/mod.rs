//! Named reductions of the (2+1) frame system: the spin equation with a
//! scalar potential and its Schrodinger-type counterpart, the plane-case
//! spin flow with KP, mKP and the Miura-type map, and the constant-length
//! spin construction.

pub mod ds;
pub mod ishimori;
pub mod kp;
pub mod spin;

pub use ds::{ds_construct, ds_construct_detrended, ds_modulus_defects, ds_potential, ds_residual, DSFields, DSInputs, DSStack, PhaseSources};
pub use ishimori::{ishimori_coefficients, ishimori_residual, IshimoriCoefficients, SpinField2p1};
pub use kp::{exp_wavefunction, kp_lax_residual, kp_residual, miura_lax_field, miura_u, mkp_residual, mx_omega3, mx_residual};
pub use spin::{extract_structure, gauge_conjugate, m0_residual, spin_constraint_check, StructureFit};
