//! Free-membrane and free-plate spectra by the Rayleigh-Ritz method,
//! closed-form eigenvalue bounds for sums of eigenvalues, and numerical
//! instantiation of the Fourier-transform argument behind those bounds.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod domains;
pub mod eigensolver;
pub mod error;
pub mod exact;
pub mod fourier;
pub mod numerics;
pub mod ritz;
pub mod spectrum;

pub use domains::{quadrature, unit_ball_volume, DomainKind, DomainSpec, Point, QuadratureRule};
pub use eigensolver::{solve_generalized, EigResult, SymMatrix};
pub use error::{Error, Result};
pub use spectrum::{Method, Operator, Spectrum};
