//! Numerical laboratory for weighted Bergman projections on the unit disc
//! and for ordinary Bergman projections of Hartogs domains in C^2.
//!
//! The crate computes moment functions of radial weights, weighted Bergman
//! kernels (series, closed-form and Gram-matrix oracles), monomial projection
//! blow-up ratios, Bekolle-Bonami A_p^+ quantities on the upper half-plane,
//! Cayley transport of weights between the half-plane and the disc, and
//! Forelli-Rudin inflation kernels for Hartogs domains, together with
//! numerical checks of the identities connecting all of these.
//!
//! Modules follow the data flow:
//!
//! - [`numerics`]: singularity-aware quadrature on `[0,1]` and on half-plane
//!   disc regions, plus controlled series summation. Everything else consumes it.
//! - [`weights`]: the weight families (power, Dostanic-type, holomorphic-modulus,
//!   half-plane power forms), derivatives, sign onsets, and the Cayley transform.
//! - [`moments`]: the moment function `Phi`, its integration-by-parts ladder,
//!   truncated moments, and log-convexity machinery.
//! - [`projector`]: exact monomial projection arithmetic and the blow-up
//!   ratio `R_k(m)` experiments.
//! - [`bekolle`]: the A_p^+ disc-averaged quantity and geometric disc sweeps.
//! - [`kernels`]: Bergman kernels on the disc and half-plane, Gram-matrix
//!   reproducing-kernel oracles, and the |g|^2 factorization identities.
//! - [`inflation`]: Hartogs domains `{|w|^2 < mu(z)}` and the inflation
//!   kernel series with its slice/lifting/factorization checks.
//! - [`cli`]: the configuration-driven experiment runner behind the
//!   `bergman-lab` binary.

// `!(x > 0.0)`-style guards are deliberate: they reject NaN along with the
// wrong sign, which `x <= 0.0` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bekolle;
pub mod cli;
pub mod error;
pub mod inflation;
pub mod kernels;
pub mod moments;
pub mod numerics;
pub mod projector;
pub mod weights;

pub use error::{LabError, Result};
