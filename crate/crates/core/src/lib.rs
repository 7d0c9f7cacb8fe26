//! Laboratory for nonclassical (undercompressive) shock waves of scalar
//! conservation laws with concave-convex flux.
//!
//! The crate is organized around the objects of the theory:
//!
//! - [`core_models`]: flux, entropy, and kinetic-function algebra (the tangent
//!   map φ♮, zero-dissipation map φ♭₀, companion map φ♯, entropy dissipation E);
//! - [`riemann`]: the nonclassical Riemann solver driven by a kinetic function;
//! - [`traveling_wave`]: saddle-to-saddle shooting for the diffusive-dispersive
//!   regularization, producing kinetic functions by phase-plane analysis;
//! - [`front_tracking`]: event-driven front tracking for the Cauchy problem
//!   with generalized-strength bookkeeping;
//! - [`fd_schemes`]: semi-discrete entropy-conservative finite differences with
//!   explicit discrete diffusion/dispersion (controlled dissipation);
//! - [`kinetic_lab`]: measurement of numerical kinetic functions from computed
//!   profiles, and table comparison;
//! - [`table`]: the plain-text kinetic-table v1 exchange format.

pub mod core_models;
pub mod fd_schemes;
pub mod front_tracking;
pub mod kinetic_lab;
pub mod quad;
pub mod riemann;
pub mod roots;
pub mod table;
pub mod traveling_wave;
pub mod validation;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Arguments with magnitude at or below this are treated as the inflection
/// point: all kinetic-algebra maps (φ♮, φ♭₀, φ♯) vanish there continuously.
pub const DEGENERACY_THRESHOLD: f64 = 1e-13;
