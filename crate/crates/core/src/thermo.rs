//! Ideal-gas observables, the Tolman temperature, the anti-de Sitter
//! infinite-volume pressure, the dust closure, and the Newtonian-limit
//! machinery.
//!
//! # The grand-canonical structure
//!
//! For an ideal gas of test particles the grand-canonical measure over
//! configurations in a region `Λ` is a Poisson point process on the chart
//! with intensity
//!
//! ```text
//! ν(x) = z_red · e^{w(x)},          w(x) = βmc² + ln(K₂(γ(x))/γ(x)),
//! ```
//!
//! where `z_red = 4π (mc/2πħ)³ e^{βμ}` is the reduced activity (the rest
//! energy factor `e^{βmc²}` lives in `w`, appearing exactly once in every
//! observable), and `γ(x) = α(x)·βmc²`.  The headline observables are
//!
//! ```text
//! ⟨N_Λ⟩ = ∫_Λ ν(x) dx,
//! P_Λ   = −ρ_vac + ⟨N_Λ⟩ k_B T / |Λ|_proper,
//! Pr(N_Λ = n) = Poisson(⟨N_Λ⟩),
//! ```
//!
//! with `ρ_vac = λc⁴/8πG` the vacuum energy density of the cosmological
//! constant and `|Λ|_proper` the Riemannian proper volume.  Configuration
//! integrals are always with respect to chart-Lebesgue measure; volume
//! denominators use proper volume — both volumes are reported so the
//! distinction stays auditable.
//!
//! # Newtonian limit
//!
//! Along `y = 1/c → 0` at fixed `m`, `T`, `μ`, the lapse of a spacetime
//! admitting the limit behaves as `α = 1 + α″(0)y²/2 + O(y⁴)`, yielding
//! the classical external potential `U(x) = m·α″(0)/2` and the classical
//! activity `z_newt = (m/2πħ²β)^{3/2} e^{βμ}`.  The relativistic Poisson
//! law converges to the classical one; [`newtonian_limit_sweep`] tabulates
//! the convergence and the total-variation distance between the two
//! occupation laws.

use crate::constants::{GasSpec, PhysicalConstants};
use crate::error::{Error, Result};
use crate::geometry::{
    alpha_minus_one_of, alpha_of, alpha_second_deriv_fd, radial_alpha_minus_one, volume, Region,
    Spacetime, VolumeKind,
};
use crate::quad::{
    ln_factorial, log_integrate_ball_3d, log_integrate_cube_3d, log_radial_volume_integral,
    LogQuadrature,
};
use crate::specfun::log_one_body_weight_from_alpha_minus_one;

/// Relative tolerance requested from the 1-D radial quadratures.
const RADIAL_REL_TOL: f64 = 1e-12;

/// Relative tolerance requested from tensor-product 3-D quadratures.
const TENSOR_REL_TOL: f64 = 1e-10;

/// Natural log of the largest finite `f64`; exponentials above this
/// overflow.
const LOG_F64_MAX: f64 = 709.782712893384;

/// Vacuum energy density associated with a cosmological constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VacuumEnergy {
    /// Cosmological constant (1/m²).
    pub lambda: f64,
    /// Energy density `λc⁴/(8πG)` (J/m³); carries the sign of `λ`.
    pub rho_vac: f64,
}

/// Computes the vacuum energy density `ρ_vac = λc⁴/(8πG)`.
///
/// The sign of `ρ_vac` equals the sign of `λ`, and `λ = 0` gives exactly
/// zero.  Any finite `λ` is accepted: the vacuum term is a bookkeeping
/// offset of the pressure, independent of the background geometry, so
/// callers may combine any `λ` with any spacetime (shifting `λ` moves the
/// pressure by `−Δρ_vac` and nothing else).
pub fn vacuum_energy(lambda: f64, k: &PhysicalConstants) -> Result<VacuumEnergy> {
    if !lambda.is_finite() {
        return Err(Error::domain(format!(
            "cosmological constant must be finite, got {lambda}"
        )));
    }
    k.validated()?;
    let rho_vac = lambda * k.c.powi(4) / (8.0 * std::f64::consts::PI * k.g_newton);
    Ok(VacuumEnergy { lambda, rho_vac })
}

/// Complete ideal-gas state report for one (spacetime, region, gas,
/// vacuum) combination.  All fields derive from one shared quadrature, so
/// the gas-law identity `β(P + ρ_vac)|Λ|_proper = ⟨N⟩` holds to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealGasReport {
    /// `ln ∫_Λ e^{w(x)} dx` (chart measure), the weighted one-particle
    /// configuration integral in log domain.
    pub weighted_q1_log: f64,
    /// Linear-domain value of the integral when representable in `f64`.
    pub weighted_q1_linear: Option<f64>,
    /// Expected particle number `⟨N_Λ⟩` (dimensionless).
    pub expected_n: f64,
    /// Finite-volume pressure (Pa).
    pub pressure: f64,
    /// Vacuum energy density `λc⁴/8πG` (J/m³).
    pub rho_vac: f64,
    /// Proper Riemannian volume of the region (m³).
    pub proper_volume: f64,
    /// Chart-Lebesgue volume of the region (m³).
    pub chart_volume: f64,
}

/// Log of the local Poisson intensity `ν(x) = z_red·e^{w(x)}` with respect
/// to chart-Lebesgue measure (ln of a 1/m³ quantity).
///
/// This is the density a particle detector at `x` sees (per unit chart
/// volume) and the birth intensity of the grand-canonical sampler.
pub fn log_local_intensity(
    st: &Spacetime,
    x: [f64; 3],
    gas: &GasSpec,
    k: &PhysicalConstants,
) -> Result<f64> {
    let am1 = alpha_minus_one_of(st, x, k)?;
    let w = log_one_body_weight_from_alpha_minus_one(am1, gas.theta(k))?;
    Ok(gas.log_reduced_activity(k) + w)
}

/// `ln ∫_Λ e^{w(x)} dx` over chart-Lebesgue measure: the weighted
/// one-particle configuration integral, with `w` the one-body log weight
/// `βmc² + ln(K₂(γ)/γ)`.
///
/// Radially symmetric spacetimes with ball or shell regions reduce to an
/// adaptive 1-D radial quadrature; every other combination uses
/// tensor-product quadrature in three dimensions.  The returned
/// [`LogQuadrature`] carries the achieved error bound (relative, on the
/// linear-scale value) and the work done.
///
/// # Errors
///
/// [`Error::Domain`] when the region does not fit the chart;
/// [`Error::Numeric`] when quadrature does not stabilize (the error
/// carries the best estimate and its bound).
pub fn weighted_q1(
    st: &Spacetime,
    region: &Region,
    gas: &GasSpec,
    k: &PhysicalConstants,
) -> Result<LogQuadrature> {
    region.validate_for(st)?;
    st.validate(k)?;
    let theta = gas.theta(k);

    // NaN marks an evaluation error inside the closure; the quadrature
    // engines reject non-finite samples with an honest numeric error.
    let w_radial = |rho: f64| -> f64 {
        log_one_body_weight_from_alpha_minus_one(radial_alpha_minus_one(st, rho), theta)
            .unwrap_or(f64::NAN)
    };
    let w_cartesian = |x: [f64; 3]| -> f64 {
        alpha_minus_one_of(st, x, k)
            .and_then(|am1| log_one_body_weight_from_alpha_minus_one(am1, theta))
            .unwrap_or(f64::NAN)
    };

    match (st.is_radial(), *region) {
        (true, Region::Ball { radius }) => {
            log_radial_volume_integral(w_radial, 0.0, radius, RADIAL_REL_TOL)
        }
        (true, Region::Shell { inner, outer }) => {
            log_radial_volume_integral(w_radial, inner, outer, RADIAL_REL_TOL)
        }
        (true, Region::Box { half_extents: h }) => log_integrate_cube_3d(
            w_cartesian,
            [[-h[0], h[0]], [-h[1], h[1]], [-h[2], h[2]]],
            TENSOR_REL_TOL,
        ),
        (false, Region::Ball { radius }) => {
            log_integrate_ball_3d(w_cartesian, 0.0, radius, TENSOR_REL_TOL)
        }
        (false, Region::Shell { inner, outer }) => {
            log_integrate_ball_3d(w_cartesian, inner, outer, TENSOR_REL_TOL)
        }
        (false, Region::Box { half_extents: h }) => log_integrate_cube_3d(
            w_cartesian,
            [[-h[0], h[0]], [-h[1], h[1]], [-h[2], h[2]]],
            TENSOR_REL_TOL,
        ),
    }
}

/// Expected particle number `⟨N_Λ⟩ = exp(ln z_red + ln ∫ e^w)`.
///
/// The rest-energy factor `e^{βmc²}` enters exactly once, inside `w`; the
/// reduced activity `z_red` carries the phase-space and chemical-potential
/// factors.
///
/// # Errors
///
/// Propagates quadrature errors; [`Error::Overflow`] with the log value
/// when `⟨N⟩` exceeds `f64` range.
pub fn expected_particles(
    st: &Spacetime,
    region: &Region,
    gas: &GasSpec,
    k: &PhysicalConstants,
) -> Result<f64> {
    let q1 = weighted_q1(st, region, gas, k)?;
    let log_n = gas.log_reduced_activity(k) + q1.log_value;
    if log_n > LOG_F64_MAX {
        return Err(Error::overflow(
            "expected particle number exceeds f64 range",
            log_n,
        ));
    }
    Ok(log_n.exp())
}

/// Finite-volume pressure `P_Λ = −ρ_vac + ⟨N_Λ⟩ k_B T / |Λ|_proper` (Pa).
///
/// `lambda` is the cosmological constant entering only through `ρ_vac`; it
/// may be varied independently of the background spacetime (the occupation
/// law is invariant under such shifts, the pressure moves by `−Δρ_vac`).
pub fn finite_pressure(
    st: &Spacetime,
    region: &Region,
    gas: &GasSpec,
    k: &PhysicalConstants,
    lambda: f64,
) -> Result<f64> {
    Ok(ideal_gas_report(st, region, gas, k, lambda)?.pressure)
}

/// Assembles the full [`IdealGasReport`] from one shared quadrature pass.
pub fn ideal_gas_report(
    st: &Spacetime,
    region: &Region,
    gas: &GasSpec,
    k: &PhysicalConstants,
    lambda: f64,
) -> Result<IdealGasReport> {
    let rho_vac = vacuum_energy(lambda, k)?.rho_vac;
    let q1 = weighted_q1(st, region, gas, k)?;
    let log_n = gas.log_reduced_activity(k) + q1.log_value;
    if log_n > LOG_F64_MAX {
        return Err(Error::overflow(
            "expected particle number exceeds f64 range",
            log_n,
        ));
    }
    let expected_n = log_n.exp();
    let proper_volume = volume(st, region, VolumeKind::ProperRiemannian)?;
    let chart_volume = volume(st, region, VolumeKind::ChartLebesgue)?;
    let beta = gas.beta(k);
    let pressure = -rho_vac + expected_n / (beta * proper_volume);
    let weighted_q1_linear = if q1.log_value <= LOG_F64_MAX {
        Some(q1.log_value.exp())
    } else {
        None
    };
    Ok(IdealGasReport {
        weighted_q1_log: q1.log_value,
        weighted_q1_linear,
        expected_n,
        pressure,
        rho_vac,
        proper_volume,
        chart_volume,
    })
}

/// Poisson occupation probability `Pr(N = n) = e^{−mean} mean^n / n!`,
/// evaluated in log domain.
///
/// # Errors
///
/// [`Error::Domain`] for negative or non-finite `mean`.
pub fn particle_pmf(mean: f64, n: u64) -> Result<f64> {
    if !(mean.is_finite() && mean >= 0.0) {
        return Err(Error::domain(format!(
            "Poisson mean must be nonnegative and finite, got {mean}"
        )));
    }
    if mean == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    Ok((-mean + n as f64 * mean.ln() - ln_factorial(n)).exp())
}

/// Position-dependent equilibrium (Tolman) temperature
/// `T̃(x) = T / α(x)`, normalized so `T̃ = T` on the observer worldline
/// at the origin (where `α = 1`).
pub fn tolman_temperature(
    st: &Spacetime,
    x: [f64; 3],
    temperature_at_origin: f64,
    k: &PhysicalConstants,
) -> Result<f64> {
    if !(temperature_at_origin.is_finite() && temperature_at_origin > 0.0) {
        return Err(Error::domain(format!(
            "temperature must be positive and finite, got {temperature_at_origin}"
        )));
    }
    Ok(temperature_at_origin / alpha_of(st, x, k)?)
}

/// One row of the anti-de Sitter increasing-ball pressure sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdsPressureRow {
    /// Ball index `k` (radius = `k · r1`).
    pub k_index: u32,
    /// Ball chart radius (m).
    pub radius: f64,
    /// Finite-volume pressure of that ball (Pa).
    pub pressure: f64,
}

/// Pressure of the ideal gas on anti-de Sitter balls of radius `k·r1`,
/// `k = 1..=k_max`.
///
/// As the balls exhaust space the gas term dies like
/// `exp(−βmc²(cosh(a·k·r1) − 1))` against the exponentially growing
/// proper volume, so the sequence converges to the pure vacuum pressure
/// `−ρ_vac = −λc⁴/8πG > 0`: the thermodynamic pressure of empty AdS is
/// positive no matter the gas on top of it.
///
/// `r1` sets the radius unit of the sequence; `a·r1 ≈ 1` (with
/// `a = √(|λ|/3)`) probes the crossover scale in a few steps.
pub fn ads_pressure_sequence(
    gas: &GasSpec,
    k: &PhysicalConstants,
    lambda: f64,
    r1: f64,
    k_max: u32,
) -> Result<Vec<AdsPressureRow>> {
    if !(lambda.is_finite() && lambda < 0.0) {
        return Err(Error::domain(format!(
            "the infinite-volume pressure sequence requires lambda < 0, got {lambda}"
        )));
    }
    if !(r1.is_finite() && r1 > 0.0) {
        return Err(Error::domain(format!(
            "base radius r1 must be positive and finite, got {r1}"
        )));
    }
    if k_max < 1 {
        return Err(Error::domain("k_max must be at least 1"));
    }
    let st = Spacetime::anti_de_sitter(lambda)?;
    let mut rows = Vec::with_capacity(k_max as usize);
    for idx in 1..=k_max {
        let radius = idx as f64 * r1;
        let region = Region::ball(radius)?;
        let pressure = finite_pressure(&st, &region, gas, k, lambda)?;
        rows.push(AdsPressureRow {
            k_index: idx,
            radius,
            pressure,
        });
    }
    Ok(rows)
}

/// Temperature of the pressure-free (dust) closure of the Einstein
/// equations with a positive cosmological constant, in kelvin.
///
/// Setting the gas mass density to the Einstein-static value
/// `ρ_mass = λc²/4πG` and solving `P = 0` in
/// `P = −λc⁴/8πG + ρ_mass k_B T / m` gives `k_B T = mc²/2` — independent
/// of `λ`: heavier particles mean proportionally hotter static dust.
pub fn dust_closure(gas: &GasSpec, k: &PhysicalConstants, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::domain(format!(
            "the dust closure requires lambda > 0, got {lambda}"
        )));
    }
    k.validated()?;
    Ok(gas.mass * k.c * k.c / (2.0 * k.k_b))
}

/// Newtonian activity `z_newt = (m/2πħ²β)^{3/2} e^{βμ}` (1/m³) — the
/// classical-limit counterpart of the relativistic activity, with the
/// rest energy and the relativistic thermal-wavelength factors stripped.
pub fn newtonian_activity(gas: &GasSpec, k: &PhysicalConstants) -> f64 {
    gas.newtonian_activity(k)
}

/// Newtonian-analog report: activity, configuration integral and pressure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonianReport {
    /// Newtonian activity (1/m³).
    pub z_newt: f64,
    /// `ln ∫_Λ e^{−βU(x)} dx` with `U = m α″(0)/2` (chart measure).
    pub log_z_newt_integral: f64,
    /// Newtonian pressure `−ρ_vac + z_newt ∫e^{−βU} / (β ∫_Λ dx)` (Pa);
    /// note the plain chart volume in the denominator.
    pub pressure_newt: f64,
}

/// `ln ∫_Λ e^{−βU(x)} dx` for the Newtonian potential `U = m α″(0)/2`.
fn newtonian_exp_integral(
    st: &Spacetime,
    region: &Region,
    gas: &GasSpec,
    k: &PhysicalConstants,
) -> Result<LogQuadrature> {
    region.validate_for(st)?;
    if !st.has_newtonian_analog() {
        return Err(Error::unsupported_limit(
            "no Newtonian analog for this spacetime: the lapse deviates from 1 at order \
             c^0, so there is no 1/c^2 potential",
        ));
    }
    match st {
        // U ≡ 0: the integral is exactly the chart volume.
        Spacetime::Minkowski | Spacetime::EinsteinStatic { .. } => {
            let v = volume(st, region, VolumeKind::ChartLebesgue)?;
            Ok(LogQuadrature {
                log_value: v.ln(),
                error_bound: 0.0,
                panels: 0,
            })
        }
        Spacetime::KerrCircularOrbit { .. } => {
            let beta_half_m = gas.beta(k) * gas.mass / 2.0;
            let g = |x: [f64; 3]| -> f64 {
                alpha_second_deriv_fd(st, x, k)
                    .map(|a2| -beta_half_m * a2)
                    .unwrap_or(f64::NAN)
            };
            match *region {
                Region::Ball { radius } => log_integrate_ball_3d(g, 0.0, radius, TENSOR_REL_TOL),
                Region::Shell { inner, outer } => {
                    log_integrate_ball_3d(g, inner, outer, TENSOR_REL_TOL)
                }
                Region::Box { half_extents: h } => log_integrate_cube_3d(
                    g,
                    [[-h[0], h[0]], [-h[1], h[1]], [-h[2], h[2]]],
                    TENSOR_REL_TOL,
                ),
            }
        }
        _ => unreachable!("has_newtonian_analog covers the remaining cases"),
    }
}

/// Log of the Newtonian grand-canonical partition function
/// `ln Z_newt = z_newt · ∫_Λ e^{−βU(x)} dx`.
///
/// # Errors
///
/// [`Error::UnsupportedLimit`] for (anti-)de Sitter; [`Error::Overflow`]
/// when the configuration integral exceeds `f64` range.
pub fn newtonian_log_partition(
    st: &Spacetime,
    region: &Region,
    gas: &GasSpec,
    k: &PhysicalConstants,
) -> Result<f64> {
    let q = newtonian_exp_integral(st, region, gas, k)?;
    if q.log_value > LOG_F64_MAX {
        return Err(Error::overflow(
            "Newtonian configuration integral exceeds f64 range",
            q.log_value,
        ));
    }
    Ok(newtonian_activity(gas, k) * q.log_value.exp())
}

/// Newtonian pressure `P_newt = −ρ_vac + ln Z_newt / (β ∫_Λ dx)` with the
/// plain chart volume `∫_Λ dx` in the denominator (Pa).
pub fn newtonian_pressure(
    st: &Spacetime,
    region: &Region,
    gas: &GasSpec,
    k: &PhysicalConstants,
    lambda: f64,
) -> Result<f64> {
    Ok(newtonian_report(st, region, gas, k, lambda)?.pressure_newt)
}

/// Assembles the full [`NewtonianReport`].
pub fn newtonian_report(
    st: &Spacetime,
    region: &Region,
    gas: &GasSpec,
    k: &PhysicalConstants,
    lambda: f64,
) -> Result<NewtonianReport> {
    let rho_vac = vacuum_energy(lambda, k)?.rho_vac;
    let q = newtonian_exp_integral(st, region, gas, k)?;
    if q.log_value > LOG_F64_MAX {
        return Err(Error::overflow(
            "Newtonian configuration integral exceeds f64 range",
            q.log_value,
        ));
    }
    let z_newt = newtonian_activity(gas, k);
    let log_z = z_newt * q.log_value.exp();
    let chart_volume = volume(st, region, VolumeKind::ChartLebesgue)?;
    let pressure_newt = -rho_vac + log_z / (gas.beta(k) * chart_volume);
    Ok(NewtonianReport {
        z_newt,
        log_z_newt_integral: q.log_value,
        pressure_newt,
    })
}

/// One row of the Newtonian-limit sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// Light speed used for this row (m/s).
    pub c: f64,
    /// Relativistic expected particle number `⟨N⟩ = z·Q̃₁`.
    pub expected_n_rel: f64,
    /// Newtonian expected particle number `z_newt ∫ e^{−βU}`.
    pub expected_n_newt: f64,
    /// Total-variation distance between the Poisson occupation laws with
    /// the two means.
    pub tv_distance: f64,
}

/// Sweeps the light speed upward and tabulates the convergence of the
/// relativistic occupation law to its Newtonian limit.
///
/// The mass, temperature and chemical potential are held fixed while
/// `c` runs through `c_values` (strictly increasing); for each `c` the
/// relativistic mean uses `θ = βmc²` at that `c`, while the Newtonian
/// mean is `c`-independent.  The mean gap closes like the leading
/// `15/(8βmc²)` correction of the Bessel asymptotics — a factor ≈ 4 per
/// doubling of `c`.
///
/// # Errors
///
/// [`Error::UnsupportedLimit`] if the spacetime has no Newtonian analog;
/// [`Error::Domain`] for an empty or non-increasing `c` grid, or when a
/// Kerr orbit stops being valid at one of the requested light speeds.
pub fn newtonian_limit_sweep(
    st: &Spacetime,
    region: &Region,
    gas: &GasSpec,
    k_base: &PhysicalConstants,
    c_values: &[f64],
) -> Result<Vec<SweepRow>> {
    if !st.has_newtonian_analog() {
        return Err(Error::unsupported_limit(
            "no Newtonian analog for this spacetime: the lapse deviates from 1 at order \
             c^0, so there is no 1/c^2 potential",
        ));
    }
    if c_values.is_empty() {
        return Err(Error::domain("the light-speed grid must not be empty"));
    }
    if c_values.windows(2).any(|w| !(w[1] > w[0])) || !(c_values[0] > 0.0) {
        return Err(Error::domain(
            "the light-speed grid must be positive and strictly increasing",
        ));
    }
    // The Newtonian side does not depend on c.
    let q_newt = newtonian_exp_integral(st, region, gas, k_base)?;
    let n_newt = newtonian_activity(gas, k_base) * q_newt.log_value.exp();

    let mut rows = Vec::with_capacity(c_values.len());
    for &c in c_values {
        let kc = k_base.with_c(c);
        st.validate(&kc)?;
        let n_rel = expected_particles(st, region, gas, &kc)?;
        let tv_distance = poisson_tv_distance(n_rel, n_newt)?;
        rows.push(SweepRow {
            c,
            expected_n_rel: n_rel,
            expected_n_newt: n_newt,
            tv_distance,
        });
    }
    Ok(rows)
}

/// Total-variation distance `½ Σ_n |p₁(n) − p₂(n)|` between two Poisson
/// laws, truncated once both cumulative tails are below `1e-15`.
pub fn poisson_tv_distance(mean1: f64, mean2: f64) -> Result<f64> {
    if !(mean1.is_finite() && mean1 >= 0.0 && mean2.is_finite() && mean2 >= 0.0) {
        return Err(Error::domain(format!(
            "Poisson means must be nonnegative and finite, got {mean1}, {mean2}"
        )));
    }
    if mean1 == mean2 {
        return Ok(0.0);
    }
    const TAIL: f64 = 1e-15;
    let mut half_l1 = 0.0;
    let top = mean1.max(mean2);
    let mut n: u64 = 0;
    loop {
        let p1 = particle_pmf(mean1, n)?;
        let p2 = particle_pmf(mean2, n)?;
        half_l1 += 0.5 * (p1 - p2).abs();
        let next = (n + 1) as f64;
        if next > top {
            // Past the mode the term ratios mean/(n+1) < 1 are decreasing,
            // so the remaining mass obeys the geometric bound
            // sum_{j>n} p(j) <= p(n) * r / (1 - r) with r = mean/(n+1).
            let tail = |mean: f64, p: f64| {
                let r = mean / next;
                p * r / (1.0 - r)
            };
            if tail(mean1, p1) < TAIL && tail(mean2, p2) < TAIL {
                break;
            }
        }
        n += 1;
        if n > 100_000_000 {
            return Err(Error::numeric(
                "Poisson total-variation truncation did not close; means too large",
                half_l1,
                particle_pmf(mean1, n)? + particle_pmf(mean2, n)?,
            ));
        }
    }
    Ok(half_l1.min(1.0))
}
