//! Grand-canonical statistical mechanics of ideal and interacting
//! test-particle gases on static and stationary relativistic spacetimes.
//!
//! The crate models a classical gas of massive test particles in thermal
//! equilibrium with respect to the time translations of a spacetime with a
//! timelike Killing field.  The redshift (lapse) `α(x)` of the Killing
//! field acts on the gas as an effective temperature-dependent one-body
//! potential, and the whole equilibrium theory — activities, expected
//! occupation, pressure identities, Newtonian limits, Gibbs-state
//! uniqueness bounds — becomes classical statistical mechanics with that
//! potential.  Everything that would overflow `f64` (Gibbs factors
//! `e^{βmc²}`, Bessel tails) is handled in log domain throughout.
//!
//! # Module map
//!
//! * [`constants`] — fundamental constants (configurable `c`, `ħ`, `G`,
//!   `k_B`) and gas state (`m`, `T`, `μ`) with the derived log-activities.
//! * [`specfun`] — the scaled Bessel function `e^γ K₂(γ)` and the
//!   log-domain one-body weight.
//! * [`quad`] — adaptive Gauss–Kronrod and tensor-product Gauss–Legendre
//!   quadrature, linear and log-domain.
//! * [`geometry`] — the supported spacetimes (Minkowski, Einstein static,
//!   de Sitter, anti-de Sitter, Kerr circular-orbit frame), their lapse
//!   functions, charts, regions and proper volumes.
//! * [`thermo`] — ideal-gas observables: expected particle number,
//!   pressure decomposition, Tolman temperature, dust closure, Newtonian
//!   limit sweeps and the anti-de Sitter pressure sequence.
//! * [`gibbs`] — interacting gases: interaction potentials, truncated
//!   grand-canonical partition functions, a grand-canonical Monte Carlo
//!   sampler, and Dobrushin-style uniqueness certificates.
//!
//! # Conventions
//!
//! Quantities are SI-dimensionful unless a function documents otherwise;
//! natural units are available via
//! [`constants::PhysicalConstants::natural`].  Chart coordinates are
//! Cartesian triples `[f64; 3]` on the chart described by each spacetime's
//! documentation.  Fallible operations return [`error::Result`], and the
//! error taxonomy in [`error::Error`] distinguishes bad inputs from
//! numerical failures honestly: quadrature and samplers report their best
//! estimate and achieved error bound instead of silently degrading.

// Validation guards are written `!(x > 0.0)` on purpose: NaN fails every
// comparison, so the negated form rejects NaN together with the
// out-of-range values, which `x <= 0.0` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod geometry;
pub mod gibbs;
pub mod quad;
pub mod specfun;
pub mod thermo;

pub use error::{Error, Result};
