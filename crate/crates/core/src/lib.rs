//! Point-mass perturbations of measures on the unit circle, studied through
//! their Verblunsky coefficients.
//!
//! The crate evaluates orthonormal polynomials with an overflow-safe Szegő
//! recursion, computes the coefficient change `Δₙ(ζ) = αₙ(dν) − αₙ(dμ)` caused
//! by adding a mass at `ζ`, locates spectral gaps, and provides drivers that
//! check the asymptotic behavior of `Δₙ` numerically.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod coeffs;
pub mod error;
pub mod jacobi_bridge;
pub mod matrix;
pub mod pointmass;
pub mod scaled;
pub mod spectral;
pub mod szego;

pub use coeffs::{
    bv_partial_sum, make_sequence, AsymptoticClass, CoefficientSequence, DecayForm, DecaySpec,
    SequenceSpec,
};
pub use error::{Error, Result};
pub use matrix::TransferMatrix2;
pub use pointmass::{PerturbationMethod, PerturbationResult, PointMassSpec};
pub use scaled::Scaled;
pub use spectral::{EigenPair, GapGeometry};
pub use szego::{cd_kernel, evaluate, szego_step, transfer_matrix, ScaledPolyState};
