//! Kerr circular-orbit frame: Boyer–Lindquist machinery, the second-order
//! Fermi-chart transforms, and the Killing-norm (lapse) field along a
//! circular geodesic orbit.
//!
//! The comoving frame of a circular equatorial geodesic at radius `r₀`
//! around a Kerr black hole (mass `M`, specific angular momentum `a`,
//! units m²/s) has the Killing field `K = K^t ∂_t + K^φ ∂_φ` with
//!
//! ```text
//! K^t = (a√(GM)/c² + r₀^{3/2})/D,   K^φ = √(GM)/D,
//! D²  = r₀³ − 3GM r₀²/c² + 2a√(GM) r₀^{3/2}/c²,
//! ```
//!
//! and the squared lapse `A = α² = −g(K,K)/c²` follows from the
//! Boyer–Lindquist metric.  Chart points use the second-order Fermi
//! normal expansion around the orbit point: `x¹` points radially outward,
//! `x²` along decreasing polar angle, `x³` along the orbit.
//!
//! # Why everything is written in `α² − 1` form
//!
//! The Newtonian-limit machinery differentiates `α` twice with respect to
//! `y = 1/c` at `y = 0`, where `α = 1 + O(y²)`.  Forming `α` first and
//! subtracting 1 would lose all significant digits precisely where the
//! limit is taken.  Instead, every `y`-dependence below is regrouped so
//! that `B(y²; x) = (α² − 1)/y²` is evaluated *without any cancellation*:
//! each term of `α² − 1` carries an explicit `y²` factor that is divided
//! out symbolically, and the one genuinely cancelling difference
//! `K^t − 1` is rewritten as `y²·G₁/D` with
//! `G₁ = a√(GM) + (3GM r₀² − 2a√(GM) r₀^{3/2})/(r₀^{3/2} + D)`.
//! The finite-difference engine then never divides rounding noise by a
//! small step squared, and the plain step `h = 10⁻⁴/c` is accurate for
//! every field strength.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::geometry::Spacetime;

/// Internal bundle of the Kerr orbit data in "natural SI" form
/// (`gm = G·M` in m³/s², `a` in m²/s, `r0` in m).
#[derive(Debug, Clone, Copy)]
pub(crate) struct KerrOrbit {
    pub gm: f64,
    pub a: f64,
    pub r0: f64,
    pub trust_radius: f64,
}

impl KerrOrbit {
    /// Extracts the orbit data from a [`Spacetime::KerrCircularOrbit`];
    /// any other variant is a caller bug surfaced as a domain error.
    pub(crate) fn from_spacetime(st: &Spacetime, k: &PhysicalConstants) -> Result<Self> {
        match *st {
            Spacetime::KerrCircularOrbit {
                central_mass,
                spin,
                orbit_radius,
                trust_radius_factor,
            } => Ok(Self {
                gm: k.g_newton * central_mass,
                a: spin,
                r0: orbit_radius,
                trust_radius: trust_radius_factor * orbit_radius,
            }),
            _ => Err(Error::domain(
                "Kerr chart operation called on a non-Kerr spacetime",
            )),
        }
    }

    /// `Δ₀ = r₀² − 2GM r₀ y² + a² y²` at inverse light speed `y`.
    fn delta0(&self, y: f64) -> f64 {
        let y2 = y * y;
        self.r0 * self.r0 - 2.0 * self.gm * self.r0 * y2 + self.a * self.a * y2
    }

    /// `D² = r₀³ − 3GM r₀² y² + 2a√(GM) r₀^{3/2} y²`.
    fn d_squared(&self, y: f64) -> f64 {
        let y2 = y * y;
        self.r0.powi(3) - 3.0 * self.gm * self.r0 * self.r0 * y2
            + 2.0 * self.a * self.gm.sqrt() * self.r0.powf(1.5) * y2
    }

    /// Second-order Fermi-to-Boyer–Lindquist transform at inverse light
    /// speed `y` (`y = 0` is the Newtonian chart).  No trust-radius check;
    /// callers gate on it.
    pub(crate) fn fermi_to_bl(&self, x: [f64; 3], y: f64) -> (f64, f64) {
        let [x1, x2, x3] = x;
        let r0 = self.r0;
        let y2 = y * y;
        let sqrt_d0 = self.delta0(y).sqrt();
        let theta = std::f64::consts::FRAC_PI_2 + x2 / r0 - sqrt_d0 * x1 * x2 / r0.powi(3);
        let r = r0
            + sqrt_d0 * x1 / r0
            + (r0 * self.gm * y2 - self.a * self.a * y2) * x1 * x1 / (2.0 * r0.powi(3))
            + self.delta0(y) * x2 * x2 / (2.0 * r0.powi(3))
            + (r0 - self.gm * y2) * x3 * x3 / (2.0 * r0 * r0);
        (r, theta)
    }

    /// `B(y²; x) = (α²(y; x) − 1)/y²`, evaluated cancellation-free and
    /// finite at `y = 0` (where it equals `2/m` times the printed
    /// Boyer–Lindquist Newtonian potential, exactly).
    pub(crate) fn b_of(&self, x: [f64; 3], y: f64) -> f64 {
        let y2 = y * y;
        let (r, theta) = self.fermi_to_bl(x, y);
        let sin2 = theta.sin().powi(2);
        let rho2 = r * r + self.a * self.a * y2 * theta.cos().powi(2);
        let delta = r * r - 2.0 * self.gm * r * y2 + self.a * self.a * y2;
        let sigma = (r * r + self.a * self.a * y2).powi(2) - self.a * self.a * y2 * delta * sin2;

        let d2 = self.d_squared(y);
        let d = d2.sqrt();
        let sqrt_gm = self.gm.sqrt();
        let kt = (y2 * self.a * sqrt_gm + self.r0.powf(1.5)) / d;
        let kphi = sqrt_gm / d;
        // K^t − 1 = y²·g1/D without subtractive cancellation.
        let g1 = self.a * sqrt_gm
            + (3.0 * self.gm * self.r0 * self.r0
                - 2.0 * self.a * sqrt_gm * self.r0.powf(1.5))
                / (self.r0.powf(1.5) + d);

        (g1 / d) * (kt + 1.0) - (2.0 * self.gm * r / rho2) * kt * kt
            + 4.0 * y2 * self.gm * self.a * r * sin2 * kt * kphi / rho2
            - sigma * sin2 * self.gm / (rho2 * d2)
    }

    /// `α(y; x) − 1 = y²B/(1 + √(1 + y²B))`, full relative precision for
    /// weak fields.
    pub(crate) fn alpha_minus_one(&self, x: [f64; 3], y: f64) -> Result<f64> {
        let b = self.b_of(x, y);
        let y2b = y * y * b;
        if y2b <= -1.0 {
            return Err(Error::domain(format!(
                "Killing field is not timelike at chart point \
                 [{}, {}, {}] (alpha^2 = {})",
                x[0],
                x[1],
                x[2],
                1.0 + y2b
            )));
        }
        Ok(y2b / (1.0 + (1.0 + y2b).sqrt()))
    }

    /// Euclidean chart norm used for the trust-radius gate.
    pub(crate) fn check_trust(&self, x: [f64; 3]) -> Result<()> {
        let norm = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if norm > self.trust_radius {
            return Err(Error::domain(format!(
                "chart point at |x| = {norm} exceeds the Kerr chart trust radius \
                 {} (= trust factor x orbit radius {}); the second-order chart \
                 expansion is not reliable there",
                self.trust_radius, self.r0
            )));
        }
        Ok(())
    }
}

/// Second-order Fermi-chart to Boyer–Lindquist transform `(r, θ)` for a
/// Kerr circular-orbit frame.
///
/// `k` supplies `G`; `c` is the causal speed of the chart being mapped:
/// pass `k.c` for the physical chart, or `f64::INFINITY` for the
/// Newtonian chart (the formal `y = 1/c → 0` limit used by the
/// Newtonian-potential machinery).
///
/// # Errors
///
/// [`Error::Domain`] when `st` is not a Kerr spacetime, when `c ≤ 0`, or
/// when `|x|` exceeds the configured trust radius.
pub fn kerr_fermi_to_bl(
    x: [f64; 3],
    st: &Spacetime,
    k: &PhysicalConstants,
    c: f64,
) -> Result<(f64, f64)> {
    if !(c > 0.0) {
        return Err(Error::domain(format!(
            "chart causal speed must be positive (possibly infinite), got {c}"
        )));
    }
    let orbit = KerrOrbit::from_spacetime(st, k)?;
    orbit.check_trust(x)?;
    Ok(orbit.fermi_to_bl(x, 1.0 / c))
}

/// The printed second-order Newtonian potential on the Fermi chart:
/// `U(x) = −3GMm(x¹)²/(2r₀³) + GMm(x²)²/(2r₀³)` (joules).
///
/// The `(x³)²` coefficient is exactly zero at this order: the attraction
/// toward the orbit plane is cancelled by the centrifugal flattening
/// along the orbit direction.
pub fn kerr_newtonian_potential_fermi(
    x: [f64; 3],
    st: &Spacetime,
    k: &PhysicalConstants,
    gas_mass: f64,
) -> Result<f64> {
    let orbit = KerrOrbit::from_spacetime(st, k)?;
    orbit.check_trust(x)?;
    if !(gas_mass > 0.0 && gas_mass.is_finite()) {
        return Err(Error::domain(format!(
            "gas particle mass must be positive and finite, got {gas_mass}"
        )));
    }
    let gmm = orbit.gm * gas_mass;
    Ok(gmm * (-3.0 * x[0] * x[0] + x[1] * x[1]) / (2.0 * orbit.r0.powi(3)))
}

/// The Boyer–Lindquist form of the effective Newtonian potential of the
/// rotating frame:
/// `U(r, θ) = −GMm/r − GMm r² sin²θ/(2r₀³) + 3GMm/(2r₀)` (joules);
/// gravity plus the centrifugal well, gauged to vanish on the orbit.
pub fn kerr_newtonian_potential_bl(
    r: f64,
    theta: f64,
    st: &Spacetime,
    k: &PhysicalConstants,
    gas_mass: f64,
) -> Result<f64> {
    let orbit = KerrOrbit::from_spacetime(st, k)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!(
            "Boyer-Lindquist radius must be positive and finite, got {r}"
        )));
    }
    if !(gas_mass > 0.0 && gas_mass.is_finite()) {
        return Err(Error::domain(format!(
            "gas particle mass must be positive and finite, got {gas_mass}"
        )));
    }
    let gmm = orbit.gm * gas_mass;
    let sin2 = theta.sin().powi(2);
    Ok(-gmm / r - gmm * r * r * sin2 / (2.0 * orbit.r0.powi(3)) + 3.0 * gmm / (2.0 * orbit.r0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_orbit() -> KerrOrbit {
        // Natural units G = c = M = 1, prograde spin 0.3, orbit at 20.
        KerrOrbit {
            gm: 1.0,
            a: 0.3,
            r0: 20.0,
            trust_radius: 2.0,
        }
    }

    #[test]
    fn origin_maps_to_orbit_point() {
        let orbit = test_orbit();
        for y in [0.0, 0.5, 1.0] {
            let (r, theta) = orbit.fermi_to_bl([0.0, 0.0, 0.0], y);
            assert_eq!(r, 20.0);
            assert_eq!(theta, std::f64::consts::FRAC_PI_2);
        }
    }

    #[test]
    fn lapse_is_exactly_one_on_the_orbit() {
        // A(y; 0) = 1 for every y: the four terms of B cancel exactly on
        // the worldline, a sharp end-to-end check of every sign above.
        let orbit = test_orbit();
        for y in [0.0, 0.1, 0.5, 1.0] {
            let b = orbit.b_of([0.0, 0.0, 0.0], y);
            assert!(
                b.abs() < 1e-13 * orbit.gm / orbit.r0,
                "B(y={y}; 0) = {b:e} should vanish"
            );
        }
    }

    #[test]
    fn b_is_even_in_y() {
        let orbit = test_orbit();
        let x = [0.7, -0.4, 0.2];
        for y in [0.05, 0.3, 0.9] {
            assert_eq!(orbit.b_of(x, y), orbit.b_of(x, -y));
            let (rp, tp) = orbit.fermi_to_bl(x, y);
            let (rm, tm) = orbit.fermi_to_bl(x, -y);
            assert_eq!(rp, rm);
            assert_eq!(tp, tm);
        }
    }

    #[test]
    fn newtonian_chart_limit_of_transform() {
        // y = 0: r = r₀ + x¹ + ((x²)² + (x³)²)/(2r₀), θ = π/2 + x²/r₀ − x¹x²/r₀².
        let orbit = test_orbit();
        let x = [0.3, -0.5, 0.4];
        let (r, theta) = orbit.fermi_to_bl(x, 0.0);
        let r_expected = 20.0 + 0.3 + (0.25 + 0.16) / 40.0;
        let theta_expected = std::f64::consts::FRAC_PI_2 - 0.5 / 20.0 + 0.3 * 0.5 / 400.0;
        assert!((r - r_expected).abs() < 1e-14);
        assert!((theta - theta_expected).abs() < 1e-16);
    }

    #[test]
    fn schwarzschild_transform_on_x2_axis() {
        // a = 0, x = (0, x², 0): θ = π/2 + x²/r₀, r = r₀ + Δ₀(x²)²/(2r₀³)
        // with Δ₀ = r₀² − 2GM r₀/c².
        let orbit = KerrOrbit {
            gm: 1.0,
            a: 0.0,
            r0: 20.0,
            trust_radius: 2.0,
        };
        let c: f64 = 3.0;
        let y = 1.0 / c;
        let x2 = 0.8;
        let (r, theta) = orbit.fermi_to_bl([0.0, x2, 0.0], y);
        let delta0 = 400.0 - 2.0 * 20.0 / (c * c);
        assert!((theta - (std::f64::consts::FRAC_PI_2 + x2 / 20.0)).abs() < 1e-15);
        assert!((r - (20.0 + delta0 * x2 * x2 / (2.0 * 8000.0))).abs() < 1e-13);
    }

    #[test]
    fn radial_transform_matches_printed_coefficients() {
        // x = (x¹, 0, 0): r = r₀ + √Δ₀ x¹/r₀ + (GM r₀/c² − a²/c²)(x¹)²/(2r₀³).
        let orbit = test_orbit();
        let c: f64 = 5.0;
        let y = 1.0 / c;
        let x1 = 0.6;
        let (r, theta) = orbit.fermi_to_bl([x1, 0.0, 0.0], y);
        assert_eq!(theta, std::f64::consts::FRAC_PI_2);
        let d0 = 400.0 - 2.0 * 20.0 * y * y + 0.09 * y * y;
        let expected =
            20.0 + d0.sqrt() * x1 / 20.0 + (20.0 * y * y - 0.09 * y * y) * x1 * x1 / 16000.0;
        assert!((r - expected).abs() < 1e-13);
    }

    #[test]
    fn b_at_zero_equals_twice_bl_potential_per_mass() {
        // B(0; x) = (2/m)·U_BL(r̄(x; 0), θ̄(x; 0)) exactly (a-independent).
        let orbit = test_orbit();
        for x in [[0.4, 0.0, 0.0], [0.0, 0.7, 0.0], [0.0, 0.0, 0.9], [0.3, -0.2, 0.5]] {
            let b0 = orbit.b_of(x, 0.0);
            let (r, theta) = orbit.fermi_to_bl(x, 0.0);
            let sin2 = theta.sin().powi(2);
            let u_twice = -2.0 * orbit.gm / r - orbit.gm * r * r * sin2 / orbit.r0.powi(3)
                + 3.0 * orbit.gm / orbit.r0;
            assert!(
                (b0 - u_twice).abs() < 1e-14 * u_twice.abs().max(orbit.gm / orbit.r0),
                "x = {x:?}: B(0) = {b0:e}, 2U/m = {u_twice:e}"
            );
        }
    }

    #[test]
    fn x2_axis_lapse_expansion_coefficient() {
        // On the x²-axis the quadratic coefficient of α − 1 is
        // GM(r₀² + 3a²y² − 4a y²√(r₀GM)) y²/(2r₀²D²).  Extract the
        // numerical coefficient by Richardson extrapolation in s and
        // compare.
        let orbit = test_orbit();
        let y: f64 = 0.25;
        let y2 = y * y;
        let coeff = orbit.gm
            * (orbit.r0 * orbit.r0 + 3.0 * orbit.a * orbit.a * y2
                - 4.0 * orbit.a * y2 * (orbit.r0 * orbit.gm).sqrt())
            * y2
            / (2.0 * orbit.r0 * orbit.r0 * orbit.d_squared(y));
        let q = |s: f64| orbit.alpha_minus_one([0.0, s, 0.0], y).unwrap() / (s * s);
        let (s1, s2) = (1e-2, 5e-3);
        // α−1 carries odd cubic content through θ̄; one Richardson step
        // on halved s removes the leading O(s) residue of q.
        let extrapolated = 2.0 * q(s2) - q(s1);
        assert!(
            ((extrapolated - coeff) / coeff).abs() < 1e-5,
            "coefficient {extrapolated:e} vs printed {coeff:e}"
        );
    }
}
