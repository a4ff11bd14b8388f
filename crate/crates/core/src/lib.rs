//! Numerical verification of infimum identities for functionals of the form
//! φ + λψ on finite-dimensional ℓp spaces, where φ is a non-zero linear
//! functional and ψ is Lipschitz with constant exactly ‖φ‖_{X*}.
//!
//! The crate is organized bottom-up:
//!
//! * [`banach`]: ℓp spaces, dual norms, half-space geometry.
//! * [`functional`]: ψ as a certified expression tree, random instances.
//! * [`gamma`]: convex γ on [a, b] ⊆ [−1, 1] and their restricted conjugates.
//! * [`optimizer`]: budgeted multistart infimum search and ray certificates.
//! * [`theorems`]: one verifier per identity, producing reports.
//! * [`experiment`]: configuration-driven runs, report files and plot tables.

pub mod banach;
pub mod error;
pub mod experiment;
pub mod functional;
pub mod gamma;
pub mod optimizer;
pub mod rng;
pub mod theorems;

pub use error::{Error, Result};
