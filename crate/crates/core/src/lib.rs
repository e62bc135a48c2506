//! Ground-state phase diagram of one-dimensional hard-core lattice bosons
//! with convex power-law interactions `V(r) = C / r^beta`.
//!
//! * [`specfun`]: zeta and polygamma functions.
//! * [`classical`]: the hopping-free crystals and the devil's staircase.
//! * [`strongcoupling`]: first and second order corrections in the hopping.
//! * [`edlab`]: exact diagonalization of finite open chains.
//! * [`export`]: CSV and JSON records for all of the above.

pub mod classical;
pub mod edlab;
pub mod error;
pub mod export;
pub mod series;
pub mod specfun;
pub mod strongcoupling;

pub use error::{Error, Result};
