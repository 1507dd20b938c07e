//! Special functions and scalar solvers shared by the rest of the crate.

mod bessel;
mod gamma;
mod legendre;
mod solve;

pub use bessel::{bessel_j, bessel_j_orders, BESSEL_MAX_ARG, BESSEL_MAX_ORDER};
pub use gamma::gamma;
pub use legendre::{gauss_legendre_nodes, legendre_eval, legendre_table};
pub use solve::{find_root, minimize_unimodal, Bracket, DEFAULT_MIN_TOL, DEFAULT_ROOT_TOL};
