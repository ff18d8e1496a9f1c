//! Grand-canonical point-process machinery for interacting test-particle
//! gases: interaction energies with boundary conditions, truncated
//! partition functions, a birth/death/move Monte Carlo sampler targeting
//! the local specification, and the anti-de Sitter uniqueness certificate.
//!
//! # The local specification
//!
//! Fixing a region `Λ` and a boundary configuration `s` outside it, the
//! conditional Gibbs distribution over configurations `x ⊂ Λ` has density
//!
//! ```text
//! π(x | s) ∝ ∏_i ν(x_i) · e^{−β Ṽ(x | s)}
//! ```
//!
//! with respect to the unit-rate Poisson process on the chart, where
//! `ν(x) = z_red e^{w(x)}` is the one-body intensity (see
//! [`crate::thermo`]) and `Ṽ` collects the pair and higher interaction
//! terms between all subsets meeting `x`, with ranges measured in proper
//! Riemannian distance.  The vacuum term `|Λ|ρ_vac` is an additive
//! constant of the energy: it cancels from every acceptance ratio, so the
//! sampler never evaluates it — changing the cosmological constant
//! provably cannot alter a trajectory.
//!
//! # Modules
//!
//! * [`energy`](self) — [`Potential`], [`Configuration`],
//!   [`BoundaryCondition`], [`conditional_energy`], [`interaction_energy`].
//! * [`partition`](self) — [`truncated_partition`]: deterministic /
//!   quasi-random evaluation of `log Σ_{n≤n_max} zⁿ Q̃_n/n!` with a
//!   rigorous superstability tail bound.
//! * [`chain`](self) — [`gcmc_chain`] birth/death/translate sampler,
//!   [`BirthSampler`], [`ChainStats`], [`specification_probability`].
//! * [`certificate`](self) — [`uniqueness_certificate`]: the shell-series
//!   divergence criterion certifying Gibbs-state uniqueness on anti-de
//!   Sitter backgrounds.

mod certificate;
mod chain;
mod energy;
mod partition;

pub use certificate::{
    uniqueness_certificate, ShellTerm, UniquenessReport, UniquenessVerdict,
};
pub use chain::{
    birth_log_acceptance_ratio, death_log_acceptance_ratio, gcmc_chain, log_unnormalized_density,
    specification_probability, BirthSampler, ChainParams, ChainStats, CountPredicate, GcmcRun,
    MoveStats, OccupationEvent, SampledConfiguration, SpecificationEstimate,
};
pub use energy::{
    conditional_energy, interaction_energy, BoundaryCondition, Configuration, PairPotential,
    Potential, TripletPotential,
};
pub use partition::{truncated_partition, TruncatedPartition};
