//! Criterion benchmarks for the `relgas-core` numerical kernels.
//!
//! This crate contains no library code; it exists to host the benchmark
//! targets:
//!
//! * `specfun` — the scaled Bessel function `e^γ K₂(γ)` across its series,
//!   crossover and asymptotic regimes, and the log-domain one-body weight.
//! * `quadrature` — the adaptive Gauss–Kronrod integrator, Gauss–Legendre
//!   node generation, and the log-domain weighted one-particle integrals
//!   that dominate every ideal-gas observable.
//! * `sampler` — short grand-canonical Monte Carlo chains for the ideal
//!   and hard-core gases.
//!
//! Run them with `cargo bench -p relgas-bench`.
