//! Truncated grand-canonical partition function with a rigorous
//! superstability tail bound.
//!
//! The log partition function of the interacting gas in `Λ` given the
//! boundary condition `s` factorizes as
//!
//! ```text
//! ln Z_Λ(s) = −β|Λ|_proper ρ_vac
//!             + ln Σ_{n≥0} (z_redⁿ/n!) M_n,
//! M_n = ∫_Λⁿ ∏ᵢ e^{w(xᵢ)} · e^{−β V(x₁..x_n | s)} dx   (chart measure),
//! ```
//!
//! with `w` the one-body log weight and `V(·|s)` the interaction energy of
//! the interior points among themselves and against the boundary.  The sum
//! is truncated at `n_max` and the discarded remainder is *bounded*, not
//! estimated: stability `V ≥ −B·n` gives `(z_redⁿ/n!) M_n ≤ aⁿ/n!` with
//!
//! ```text
//! a = z_red · sup_Λ e^{w} · |Λ|_chart · e^{βB},
//! Σ_{n>n_max} aⁿ/n! ≤ a^{n_max+1}/(n_max+1)! · e^{a},
//! ```
//!
//! so the reported `tail_bound_rel` is a guaranteed relative bound on the
//! truncation error of the interaction sum.  When it exceeds the caller's
//! tolerance the function fails loudly instead of returning a value whose
//! accuracy it cannot vouch for.

use crate::constants::{GasSpec, PhysicalConstants};
use crate::error::{Error, Result};
use crate::geometry::kerr::KerrOrbit;
use crate::geometry::{
    proper_pair_distance, radial_alpha_minus_one, volume, Region, Spacetime, VolumeKind,
};
use crate::gibbs::energy::{insertion_energy, interaction_energy, BoundaryCondition, Potential};
use crate::quad::{ln_factorial, log_integrate_ball_3d, log_integrate_cube_3d, log_sum_exp};
use crate::specfun::log_one_body_weight_from_alpha_minus_one;
use crate::thermo::{vacuum_energy, weighted_q1};

/// Hard cap on the truncation order: beyond eight particles the
/// configuration integrals are 24-dimensional and the low-discrepancy
/// engine below cannot be trusted to its own convergence test.
const MAX_TRUNCATION_ORDER: u32 = 8;

/// Absolute log-domain tolerance requested from the tensor-product
/// quadratures of the one- and two-particle integrals.
const TENSOR_LOG_TOL: f64 = 1e-8;

/// Low-discrepancy stabilisation threshold: two successive sample-count
/// doublings must agree to this in the log.
const QMC_LOG_TOL: f64 = 1e-5;

/// First checkpoint of the low-discrepancy integrator.
const QMC_START: usize = 4096;

/// Sample budget of the low-discrepancy integrator.
const QMC_MAX: usize = 1 << 20;

/// Primes used as Halton bases, enough for `3 × MAX_TRUNCATION_ORDER`
/// dimensions.
const HALTON_PRIMES: [u32; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

/// Kerr one-body-weight bound: grid resolution per axis used to bound
/// `sup_Λ w` on the non-radial chart.
const KERR_SUP_GRID: usize = 17;

/// Truncated log partition function with its guaranteed tail bound.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedPartition {
    /// `ln Z_Λ(s)` truncated at `n_max` particles, vacuum term included.
    pub log_value: f64,
    /// Guaranteed relative bound on the discarded `n > n_max` remainder
    /// of the interaction sum.
    pub tail_bound_rel: f64,
    /// Log of each retained term `(z_redⁿ/n!) M_n`, index = particle
    /// number `n = 0..=n_max`; `−∞` marks a term that vanishes exactly
    /// (e.g. hard cores that no `n`-point configuration can avoid).
    pub term_logs: Vec<f64>,
}

/// Computes the truncated log partition function `ln Z_Λ(s)` up to
/// `n_max` particles and certifies the truncation error.
///
/// * `M₀ = 1` and `M₁` reduce to the ideal-gas machinery whenever the
///   boundary condition cannot influence them.
/// * `M₂` on a radially symmetric chart with a ball or shell region
///   collapses to a three-dimensional `(ρ₁, ρ₂, cos ψ)` quadrature.
/// * Everything else — higher orders, box regions, non-empty boundary
///   conditions, and any quadrature that refuses to stabilise on a
///   discontinuous hard-core integrand — runs through a deterministic
///   Halton low-discrepancy integrator in `3n` dimensions whose
///   convergence test is agreement of successive sample doublings to
///   `10⁻⁵` in the log.
///
/// # Errors
///
/// * [`Error::Domain`] for invalid truncation order (`n_max > 8`) or
///   tolerance, or a region/spacetime mismatch.
/// * [`Error::Numeric`] when a configuration integral does not converge,
///   or when the certified tail bound exceeds `tail_rel_tol` (the error
///   carries the truncated value and the bound, so the caller may still
///   inspect them).
#[allow(clippy::too_many_arguments)]
pub fn truncated_partition(
    st: &Spacetime,
    region: &Region,
    gas: &GasSpec,
    k: &PhysicalConstants,
    pot: &Potential,
    s: &BoundaryCondition,
    lambda: f64,
    n_max: u32,
    tail_rel_tol: f64,
) -> Result<TruncatedPartition> {
    region.validate_for(st)?;
    st.validate(k)?;
    if n_max > MAX_TRUNCATION_ORDER {
        return Err(Error::domain(format!(
            "truncation order {n_max} exceeds the supported maximum \
             {MAX_TRUNCATION_ORDER}"
        )));
    }
    if !(tail_rel_tol.is_finite() && tail_rel_tol > 0.0) {
        return Err(Error::domain(format!(
            "tail tolerance must be positive and finite, got {tail_rel_tol}"
        )));
    }
    let rho_vac = vacuum_energy(lambda, k)?.rho_vac;
    let beta = gas.beta(k);
    let log_z_red = gas.log_reduced_activity(k);
    let v_proper = volume(st, region, VolumeKind::ProperRiemannian)?;
    let v_chart = volume(st, region, VolumeKind::ChartLebesgue)?;

    // Retained terms ln[(z_redⁿ/n!) M_n].  Without interactions the
    // configuration integrals factorize, M_n = M₁ⁿ exactly, so one
    // quadrature serves the whole series.
    let mut term_logs = Vec::with_capacity(n_max as usize + 1);
    term_logs.push(0.0);
    if pot.is_ideal() {
        let m1 = weighted_q1(st, region, gas, k)?.log_value;
        for n in 1..=n_max {
            term_logs.push(n as f64 * (log_z_red + m1) - ln_factorial(n as u64));
        }
    } else {
        for n in 1..=n_max {
            let log_m = log_m_n(st, region, gas, k, pot, s, n)?;
            term_logs.push(n as f64 * log_z_red + log_m - ln_factorial(n as u64));
        }
    }
    let interaction_log_sum = log_sum_exp(&term_logs);

    // Superstability tail: a = z_red · sup e^w · V_chart · e^{βB}.
    let sup_w = sup_one_body_weight(st, region, gas, k)?;
    let log_a = log_z_red + sup_w + v_chart.ln() + beta * pot.stability_b;
    let a = log_a.exp();
    let log_tail = ((n_max + 1) as f64) * log_a - ln_factorial(n_max as u64 + 1) + a;
    let tail_bound_rel = (log_tail - interaction_log_sum).exp();

    let log_value = -beta * v_proper * rho_vac + interaction_log_sum;
    if !(tail_bound_rel <= tail_rel_tol) {
        return Err(Error::Numeric {
            message: format!(
                "truncation at n_max = {n_max} leaves a certified relative tail \
                 bound {tail_bound_rel:.3e}, above the requested {tail_rel_tol:.3e}; \
                 raise n_max or shrink the region/activity"
            ),
            best_estimate: log_value,
            error_bound: tail_bound_rel,
        });
    }
    Ok(TruncatedPartition {
        log_value,
        tail_bound_rel,
        term_logs,
    })
}

/// One-body log weight at a chart point, `NaN` on evaluation error (the
/// quadrature engines translate that into an honest numeric failure).
fn w_at(st: &Spacetime, x: [f64; 3], theta: f64, k: &PhysicalConstants) -> f64 {
    crate::geometry::alpha_minus_one_of(st, x, k)
        .and_then(|am1| log_one_body_weight_from_alpha_minus_one(am1, theta))
        .unwrap_or(f64::NAN)
}

/// `ln M_n` for one particle number, dispatching to the cheapest engine
/// that is exact for the case at hand; `−∞` is a legitimate value (the
/// `n`-particle configuration integral vanishes identically).
fn log_m_n(
    st: &Spacetime,
    region: &Region,
    gas: &GasSpec,
    k: &PhysicalConstants,
    pot: &Potential,
    s: &BoundaryCondition,
    n: u32,
) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let boundary_blind = s.is_empty() || pot.is_ideal();
    if n == 1 && boundary_blind {
        return Ok(weighted_q1(st, region, gas, k)?.log_value);
    }
    if n == 1 {
        return log_m_1_with_boundary(st, region, gas, k, pot, s);
    }
    if pot.is_ideal() {
        // M_n = M₁ⁿ; the caller multiplies, this arm is only reached when
        // it chose not to.
        return Ok(n as f64 * weighted_q1(st, region, gas, k)?.log_value);
    }
    if n == 2 && boundary_blind && st.is_radial() {
        match *region {
            Region::Ball { radius } => {
                match log_m_2_radial(st, gas, k, pot, 0.0, radius) {
                    Ok(v) => return Ok(v),
                    Err(Error::Numeric { .. }) => {} // fall through to QMC
                    Err(e) => return Err(e),
                }
            }
            Region::Shell { inner, outer } => {
                match log_m_2_radial(st, gas, k, pot, inner, outer) {
                    Ok(v) => return Ok(v),
                    Err(Error::Numeric { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            Region::Box { .. } => {}
        }
    }
    qmc_log_m_n(st, region, gas, k, pot, s, n)
}

/// `ln M₁` when a non-trivial boundary condition shifts the one-body
/// integrand by `−β V(x | s)`.
fn log_m_1_with_boundary(
    st: &Spacetime,
    region: &Region,
    gas: &GasSpec,
    k: &PhysicalConstants,
    pot: &Potential,
    s: &BoundaryCondition,
) -> Result<f64> {
    let theta = gas.theta(k);
    let beta = gas.beta(k);
    let g = |x: [f64; 3]| -> f64 {
        let v = match insertion_energy(x, &[], s.points(), pot, st, k) {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        if v == f64::INFINITY {
            return f64::NEG_INFINITY;
        }
        w_at(st, x, theta, k) - beta * v
    };
    let attempt = match *region {
        Region::Ball { radius } => log_integrate_ball_3d(g, 0.0, radius, TENSOR_LOG_TOL),
        Region::Shell { inner, outer } => log_integrate_ball_3d(g, inner, outer, TENSOR_LOG_TOL),
        Region::Box { half_extents: h } => log_integrate_cube_3d(
            g,
            [[-h[0], h[0]], [-h[1], h[1]], [-h[2], h[2]]],
            TENSOR_LOG_TOL,
        ),
    };
    match attempt {
        Ok(q) => Ok(q.log_value),
        Err(Error::Overflow { log_value, .. }) if log_value == f64::NEG_INFINITY => {
            Ok(f64::NEG_INFINITY)
        }
        // Hard-core boundaries cut the integrand; fall back to the
        // discontinuity-tolerant engine.
        Err(Error::Numeric { .. }) => qmc_log_m_n(st, region, gas, k, pot, s, 1),
        Err(e) => Err(e),
    }
}

/// `ln M₂` on a radially symmetric chart over a ball or shell, reduced to
/// the three variables `(ρ₁, ρ₂, t = cos ψ)`:
///
/// ```text
/// M₂ = ∫∫∫ 8π² ρ₁²ρ₂² e^{w(ρ₁)+w(ρ₂)} e^{−βφ₂(d(ρ₁,ρ₂,t))} dρ₁ dρ₂ dt,
/// ```
///
/// with `d` the proper pair distance between points at radii `ρ₁, ρ₂`
/// separated by chart angle `ψ`.
fn log_m_2_radial(
    st: &Spacetime,
    gas: &GasSpec,
    k: &PhysicalConstants,
    pot: &Potential,
    r_inner: f64,
    r_outer: f64,
) -> Result<f64> {
    let theta = gas.theta(k);
    let beta = gas.beta(k);
    let ln_8pi2 = (8.0 * std::f64::consts::PI * std::f64::consts::PI).ln();
    let w_radial = |rho: f64| -> f64 {
        log_one_body_weight_from_alpha_minus_one(radial_alpha_minus_one(st, rho), theta)
            .unwrap_or(f64::NAN)
    };
    let g = |[rho1, rho2, t]: [f64; 3]| -> f64 {
        if rho1 == 0.0 || rho2 == 0.0 {
            return f64::NEG_INFINITY;
        }
        let sin_psi = (1.0 - t * t).max(0.0).sqrt();
        let x1 = [rho1, 0.0, 0.0];
        let x2 = [rho2 * t, rho2 * sin_psi, 0.0];
        let d = match proper_pair_distance(st, x1, x2, k) {
            Ok(d) => d,
            Err(_) => return f64::NAN,
        };
        let phi = pot.pair.evaluate(d);
        if phi == f64::INFINITY {
            return f64::NEG_INFINITY;
        }
        ln_8pi2 + 2.0 * rho1.ln() + 2.0 * rho2.ln() + w_radial(rho1) + w_radial(rho2) - beta * phi
    };
    let q = log_integrate_cube_3d(
        g,
        [[r_inner, r_outer], [r_inner, r_outer], [-1.0, 1.0]],
        TENSOR_LOG_TOL,
    );
    match q {
        Ok(q) => Ok(q.log_value),
        Err(Error::Overflow { log_value, .. }) if log_value == f64::NEG_INFINITY => {
            Ok(f64::NEG_INFINITY)
        }
        Err(e) => Err(e),
    }
}

/// Van der Corput radical inverse of `index` in the given base: the
/// digit-reversed fraction that drives the Halton sequence.
fn radical_inverse(mut index: usize, base: u32) -> f64 {
    let b = base as f64;
    let mut inv_b = 1.0 / b;
    let mut value = 0.0;
    while index > 0 {
        value += (index % base as usize) as f64 * inv_b;
        index /= base as usize;
        inv_b /= b;
    }
    value
}

/// Maps a `3n`-dimensional Halton point to `n` chart points uniformly
/// distributed (chart-Lebesgue) over the region.
fn map_uniform_to_region(u: &[f64], region: &Region, points: &mut [[f64; 3]]) {
    match *region {
        Region::Ball { radius } => map_shell(u, 0.0, radius, points),
        Region::Shell { inner, outer } => map_shell(u, inner, outer, points),
        Region::Box { half_extents: h } => {
            for (i, p) in points.iter_mut().enumerate() {
                for axis in 0..3 {
                    p[axis] = (2.0 * u[3 * i + axis] - 1.0) * h[axis];
                }
            }
        }
    }
}

fn map_shell(u: &[f64], r_inner: f64, r_outer: f64, points: &mut [[f64; 3]]) {
    let c_in = r_inner.powi(3);
    let c_out = r_outer.powi(3);
    for (i, p) in points.iter_mut().enumerate() {
        let rho = (c_in + u[3 * i] * (c_out - c_in)).cbrt();
        let mu = 2.0 * u[3 * i + 1] - 1.0;
        let phi = 2.0 * std::f64::consts::PI * u[3 * i + 2];
        let s = (1.0 - mu * mu).max(0.0).sqrt();
        *p = [rho * s * phi.cos(), rho * s * phi.sin(), rho * mu];
    }
}

/// `ln M_n` by deterministic Halton low-discrepancy integration in `3n`
/// dimensions:
///
/// ```text
/// M_n = V_chartⁿ · E[ ∏ᵢ e^{w(xᵢ)} e^{−βV(x|s)} ],   x ~ Uniform(Λ)ⁿ,
/// ```
///
/// with the empirical mean accumulated in log domain (streaming
/// log-sum-exp) and checked for stabilisation at every sample-count
/// doubling from 4096 up to 2²⁰.  Returns `−∞` when every sampled
/// configuration is forbidden (hard cores covering the region), which is
/// the exact value whenever the allowed set has zero volume.
fn qmc_log_m_n(
    st: &Spacetime,
    region: &Region,
    gas: &GasSpec,
    k: &PhysicalConstants,
    pot: &Potential,
    s: &BoundaryCondition,
    n: u32,
) -> Result<f64> {
    let dims = 3 * n as usize;
    debug_assert!(dims <= HALTON_PRIMES.len());
    let theta = gas.theta(k);
    let beta = gas.beta(k);
    let v_chart = volume(st, region, VolumeKind::ChartLebesgue)?;
    let n_ln_v = n as f64 * v_chart.ln();

    let mut u = vec![0.0_f64; dims];
    let mut points = vec![[0.0_f64; 3]; n as usize];
    let mut max_term = f64::NEG_INFINITY;
    let mut sum = 0.0_f64;
    let mut prev_estimate: Option<f64> = None;
    let mut checkpoint = QMC_START;
    let mut last_diff = f64::INFINITY;
    let mut estimate = f64::NEG_INFINITY;

    for index in 1..=QMC_MAX {
        for (d, slot) in u.iter_mut().enumerate() {
            *slot = radical_inverse(index, HALTON_PRIMES[d]);
        }
        map_uniform_to_region(&u, region, &mut points);

        let v = interaction_energy(&points, s.points(), pot, st, k)?;
        let term = if v == f64::INFINITY {
            f64::NEG_INFINITY
        } else {
            let mut t = -beta * v;
            for p in &points {
                let w = w_at(st, *p, theta, k);
                if w.is_nan() {
                    return Err(Error::Numeric {
                        message: format!(
                            "one-body weight evaluation failed at chart point {p:?} \
                             during the {n}-particle configuration integral"
                        ),
                        best_estimate: f64::NAN,
                        error_bound: f64::INFINITY,
                    });
                }
                t += w;
            }
            t
        };
        if term > f64::NEG_INFINITY {
            if term <= max_term {
                sum += (term - max_term).exp();
            } else {
                sum = sum * (max_term - term).exp() + 1.0;
                max_term = term;
            }
        }

        if index == checkpoint {
            estimate = if max_term == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else {
                n_ln_v + max_term + sum.ln() - (index as f64).ln()
            };
            if let Some(prev) = prev_estimate {
                if prev == f64::NEG_INFINITY && estimate == f64::NEG_INFINITY {
                    return Ok(f64::NEG_INFINITY);
                }
                last_diff = (estimate - prev).abs();
                if last_diff <= QMC_LOG_TOL {
                    return Ok(estimate);
                }
            }
            prev_estimate = Some(estimate);
            checkpoint *= 2;
        }
    }
    Err(Error::Numeric {
        message: format!(
            "the {n}-particle configuration integral did not stabilise to \
             {QMC_LOG_TOL:.0e} in the log within {QMC_MAX} low-discrepancy samples"
        ),
        best_estimate: estimate,
        error_bound: last_diff,
    })
}

/// Upper bound on `sup_Λ w`, the largest one-body log weight over the
/// region.
///
/// `w` is strictly decreasing in the lapse, so the supremum sits at the
/// lapse minimum.  On radially symmetric charts the lapse is monotone in
/// `ρ` and the bound is the larger of the two radial endpoint values
/// (for a box: radius 0 and the circumradius, which bracket its radial
/// extent).  On the Kerr chart the lapse field is sampled on a
/// `17³` grid over the circumscribing cube and the grid minimum of
/// `B = (α²−1)y⁻²` is lowered by twice the largest observed single-step
/// variation — a first-order intra-cell pad that is conservative for the
/// slowly varying tidal field of a trusted chart.
fn sup_one_body_weight(
    st: &Spacetime,
    region: &Region,
    gas: &GasSpec,
    k: &PhysicalConstants,
) -> Result<f64> {
    let theta = gas.theta(k);
    if st.is_radial() {
        let (rho_min, rho_max) = match *region {
            Region::Ball { radius } => (0.0, radius),
            Region::Shell { inner, outer } => (inner, outer),
            Region::Box { .. } => (0.0, region.circumradius()),
        };
        let w_lo = log_one_body_weight_from_alpha_minus_one(
            radial_alpha_minus_one(st, rho_min),
            theta,
        )?;
        let w_hi = log_one_body_weight_from_alpha_minus_one(
            radial_alpha_minus_one(st, rho_max),
            theta,
        )?;
        return Ok(w_lo.max(w_hi));
    }
    // Kerr chart: bound min α over the circumscribing cube from below.
    let orbit = KerrOrbit::from_spacetime(st, k)?;
    let y = 1.0 / k.c;
    let r = region.circumradius();
    let m = KERR_SUP_GRID;
    let h = 2.0 * r / (m - 1) as f64;
    let coord = |i: usize| -> f64 { -r + i as f64 * h };
    let mut b = vec![0.0_f64; m * m * m];
    let mut b_min = f64::INFINITY;
    for i in 0..m {
        for j in 0..m {
            for l in 0..m {
                let v = orbit.b_of([coord(i), coord(j), coord(l)], y);
                b[(i * m + j) * m + l] = v;
                if v < b_min {
                    b_min = v;
                }
            }
        }
    }
    let mut step_max = 0.0_f64;
    for i in 0..m {
        for j in 0..m {
            for l in 0..m {
                let here = b[(i * m + j) * m + l];
                if i + 1 < m {
                    step_max = step_max.max((b[((i + 1) * m + j) * m + l] - here).abs());
                }
                if j + 1 < m {
                    step_max = step_max.max((b[(i * m + j + 1) * m + l] - here).abs());
                }
                if l + 1 < m {
                    step_max = step_max.max((b[(i * m + j) * m + l + 1] - here).abs());
                }
            }
        }
    }
    let b_low = b_min - 2.0 * step_max;
    let y2b = y * y * b_low;
    if y2b <= -1.0 {
        return Err(Error::domain(
            "lapse lower bound is not timelike over the region; the Kerr chart \
             cannot certify a one-body weight bound here",
        ));
    }
    let am1_low = y2b / (1.0 + (1.0 + y2b).sqrt());
    log_one_body_weight_from_alpha_minus_one(am1_low, theta)
}
