//! Physical constants and gas parameters.
//!
//! Everything in this crate is dimensionful SI by default, with the four
//! fundamental constants (`c`, `ħ`, `G`, `k_B`) kept *configurable*: the
//! Newtonian limit is literally a sweep in the speed of light, so `c` must
//! remain a free parameter rather than a hard-wired number.  For analytic
//! work and tests it is often convenient to set all four constants to 1
//! ([`PhysicalConstants::natural`]) and quote masses, temperatures and
//! lengths in the resulting natural units.
//!
//! # Conventions
//!
//! * `β = 1/(k_B T)` (units 1/J),
//! * `θ = β m c²` — the dimensionless rest-energy-to-temperature ratio that
//!   controls every relativistic correction in the crate,
//! * the physical activity
//!   `z = 4π (mc)³/(2πħ)³ · e^{β(mc² + μ)}`  (units 1/m³)
//!   absorbs the momentum integral and the rest energy.  Because `e^{βmc²}`
//!   overflows `f64` for everyday parameters, the activity is only ever
//!   exposed in log domain, split as `ln z = ln z_red + θ` with the
//!   *reduced* activity `z_red = 4π (mc)³/(2πħ)³ · e^{βμ}`.

use crate::error::{Error, Result};

/// The four fundamental constants used throughout the crate.
///
/// All fields are strictly positive, finite reals.  SI values are the
/// default; [`PhysicalConstants::natural`] gives the all-ones system.
///
/// # Examples
///
/// ```
/// use relgas_core::constants::PhysicalConstants;
///
/// let si = PhysicalConstants::SI;
/// assert_eq!(si.c, 2.997_924_58e8);
///
/// // A Newtonian-limit sweep doubles c while keeping everything else:
/// let faster = si.with_c(2.0 * si.c);
/// assert_eq!(faster.hbar, si.hbar);
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Speed of light `c` (m/s).
    pub c: f64,
    /// Reduced Planck constant `ħ` (J·s).
    pub hbar: f64,
    /// Newton's gravitational constant `G` (m³/(kg·s²)).
    pub g_newton: f64,
    /// Boltzmann constant `k_B` (J/K).
    pub k_b: f64,
}

impl PhysicalConstants {
    /// CODATA SI values (exact where the SI defines them exactly).
    pub const SI: Self = Self {
        c: 2.997_924_58e8,
        hbar: 1.054_571_817e-34,
        g_newton: 6.674_30e-11,
        k_b: 1.380_649e-23,
    };

    /// Natural units: `c = ħ = G = k_B = 1`.
    pub const fn natural() -> Self {
        Self {
            c: 1.0,
            hbar: 1.0,
            g_newton: 1.0,
            k_b: 1.0,
        }
    }

    /// Replaces the speed of light, keeping the other constants.
    ///
    /// This is the primitive of every Newtonian-limit sweep.
    pub fn with_c(self, c: f64) -> Self {
        Self { c, ..self }
    }

    /// Validates that all four constants are strictly positive and finite.
    pub fn validated(self) -> Result<Self> {
        for (name, v) in [
            ("c", self.c),
            ("hbar", self.hbar),
            ("g_newton", self.g_newton),
            ("k_b", self.k_b),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!(
                    "physical constant {name} must be a positive finite real, got {v}"
                )));
            }
        }
        Ok(self)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI
    }
}

/// Particle species and thermodynamic state of the gas.
///
/// The chemical potential is measured *excluding* the rest energy: the full
/// single-particle Gibbs weight is `e^{β(mc² + μ)}`, with the rest-energy
/// factor always handled in log domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasSpec {
    /// Particle mass `m` (kg), strictly positive.
    pub mass: f64,
    /// Temperature `T` (K), strictly positive.
    pub temperature: f64,
    /// Chemical potential `μ` (J), any finite real.
    pub chemical_potential: f64,
}

impl GasSpec {
    /// Builds a validated gas specification.
    ///
    /// # Errors
    ///
    /// Returns a domain error unless `mass > 0`, `temperature > 0` and all
    /// three fields are finite.
    pub fn new(mass: f64, temperature: f64, chemical_potential: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::domain(format!(
                "particle mass must be a positive finite real, got {mass}"
            )));
        }
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::domain(format!(
                "temperature must be a positive finite real, got {temperature}"
            )));
        }
        if !chemical_potential.is_finite() {
            return Err(Error::domain(format!(
                "chemical potential must be finite, got {chemical_potential}"
            )));
        }
        Ok(Self {
            mass,
            temperature,
            chemical_potential,
        })
    }

    /// Returns a copy with a different chemical potential.
    pub fn with_chemical_potential(self, chemical_potential: f64) -> Self {
        Self {
            chemical_potential,
            ..self
        }
    }

    /// Inverse temperature `β = 1/(k_B T)` (1/J).
    pub fn beta(&self, k: &PhysicalConstants) -> f64 {
        1.0 / (k.k_b * self.temperature)
    }

    /// Dimensionless rest-energy ratio `θ = β m c²`.
    pub fn theta(&self, k: &PhysicalConstants) -> f64 {
        self.beta(k) * self.mass * k.c * k.c
    }

    /// Log of the *reduced* activity
    /// `z_red = 4π (mc)³/(2πħ)³ · e^{βμ}`  (z_red in 1/m³).
    ///
    /// The full physical activity is `z = z_red · e^{θ}`; the two factors
    /// are kept apart so `e^{βmc²}` never has to be represented linearly.
    pub fn log_reduced_activity(&self, k: &PhysicalConstants) -> f64 {
        let mc = self.mass * k.c;
        (4.0 * std::f64::consts::PI).ln() + 3.0 * (mc / (2.0 * std::f64::consts::PI * k.hbar)).ln()
            + self.beta(k) * self.chemical_potential
    }

    /// Log of the full physical activity `ln z = ln z_red + θ`.
    pub fn log_activity(&self, k: &PhysicalConstants) -> f64 {
        self.log_reduced_activity(k) + self.theta(k)
    }

    /// Newtonian activity `z_Newt = (m/(2πħ²β))^{3/2} · e^{βμ}` (1/m³),
    /// the classical ideal-gas fugacity over a cubed thermal wavelength.
    ///
    /// # Examples
    ///
    /// ```
    /// use relgas_core::constants::{GasSpec, PhysicalConstants};
    ///
    /// let k = PhysicalConstants::natural();
    /// let gas = GasSpec::new(1.0, 1.0, 0.0).unwrap();
    /// let expected = (1.0 / (2.0 * std::f64::consts::PI)).powf(1.5);
    /// assert!((gas.newtonian_activity(&k) - expected).abs() < 1e-15);
    /// ```
    pub fn newtonian_activity(&self, k: &PhysicalConstants) -> f64 {
        let beta = self.beta(k);
        (self.mass / (2.0 * std::f64::consts::PI * k.hbar * k.hbar * beta)).powf(1.5)
            * (beta * self.chemical_potential).exp()
    }
}
