//! Numerical laboratory for the coupled spin-oscillator `S² × R²`.
//!
//! * [`classical`]: momentum map, Hamiltonian flow, the focus-focus fiber.
//! * [`taylor`]: the Taylor series invariant `(a₁, a₂) = (π/2, 5 ln 2)`.
//! * [`quantum`]: `Ĵ`-eigenspaces, the tridiagonal matrix of `Ĥ`, joint spectrum.
//! * [`inverse`]: recovery of `B₂₂` and `a₂` from eigenvalue spacings.
//! * [`polygon`]: semitoric polygon, lattice development, height invariant.

pub mod classical;
pub mod error;
pub mod exec;
pub mod fmt;
pub mod inverse;
pub mod polygon;
pub mod quantum;
pub mod taylor;

pub use error::{Error, Result};
pub use exec::Exec;
