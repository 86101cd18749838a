//! Photon-added coherent states for shape-invariant potentials.
//!
//! The crate evaluates expansion coefficients, normalizations, overlaps,
//! reproducing kernels, photon statistics and resolution-of-identity weights
//! for four families of shape-invariant systems, each both in closed
//! hypergeometric / Meijer G form and through direct series oracles.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod measures;
pub mod quadrature;
pub mod series;
pub mod specfun;
pub mod states;
pub mod statistics;
pub mod systems;

pub use error::{Error, Result};
pub use measures::{
    moment_check, moment_checks, moment_density, quadrature_for, weight, weight_m0_closed,
    weight_positivity_scan, MomentCheck,
};
pub use num_complex::Complex64;
pub use quadrature::{EndpointStrategy, QuadratureConfig};
pub use specfun::{ln_gamma, meijer_g_q0, pfq, ContourConfig, MeijerGSpec, SeriesResult};
pub use states::{
    fock_amplitude, gram_series, inner_product, inner_product_closed, kernel,
    kernel_idempotence_check,
    normalization, state_coefficient, NormMethod, TruncationPolicy,
};
pub use systems::{CoeffMethod, Family, PacsPoint, SipSystem};
pub use statistics::{g2, mandel_q, mean_n, mean_n2, pnd, report, StatMethod, StatsReport};
