//! Spacetimes with a timelike Killing field, their Fermi charts, regions
//! and proper volumes.
//!
//! Five stationary geometries are supported, each presented on a Cartesian
//! chart `x = (x¹, x², x³)` whose origin sits on a distinguished Killing
//! worldline (`α(0) = 1`):
//!
//! * **Minkowski** — flat, `α ≡ 1`, chart is all of space.
//! * **Einstein static** — closed spatial 3-sphere of radius `R = 1/√λ`,
//!   `α ≡ 1`, chart radius `πR` (the antipode).
//! * **de Sitter** (static patch) — `α = cos(aρ)` with `a = √(λ/3)`,
//!   chart radius `π/(2a)` (the horizon, where the Killing field becomes
//!   null).
//! * **anti-de Sitter** — `α = cosh(aρ)` with `a = √(|λ|/3)`, spatial
//!   hyperbolic 3-space, unbounded chart.
//! * **Kerr circular orbit** — the comoving frame of a circular equatorial
//!   geodesic around a Kerr black hole, via second-order Fermi transforms;
//!   see [`kerr`].
//!
//! The first four are *radial*: `α` and the spatial metric depend only on
//! `ρ = |x|`, with spatial line element `dρ² + f(ρ)² dΩ²` for an areal
//! function `f`.  Statistical-mechanics integrals over radial spacetimes
//! reduce to one-dimensional radial quadrature; the Kerr chart is the
//! genuinely three-dimensional case.

use crate::constants::{GasSpec, PhysicalConstants};
use crate::error::{Error, Result};
use crate::quad::integrate_cube_3d;

pub mod kerr;

pub use kerr::{kerr_fermi_to_bl, kerr_newtonian_potential_bl, kerr_newtonian_potential_fermi};

use kerr::KerrOrbit;

/// Default Kerr chart trust radius as a fraction of the orbit radius; the
/// second-order chart expansion carries an unstated `O((|x|/r₀)³)`
/// remainder, so the chart is only offered well inside the orbit scale.
pub const DEFAULT_KERR_TRUST_FACTOR: f64 = 0.1;

/// A stationary spacetime with a distinguished timelike Killing field,
/// presented on a Cartesian Fermi-type chart.
///
/// Construct through the validating constructors ([`Spacetime::minkowski`],
/// [`Spacetime::einstein_static`], [`Spacetime::de_sitter`],
/// [`Spacetime::anti_de_sitter`], [`Spacetime::kerr_circular_orbit`]);
/// the fields are public for inspection and pattern matching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spacetime {
    /// Flat spacetime, `λ = 0`.
    Minkowski,
    /// The Einstein static universe with curvature constant `λ > 0`
    /// (1/m²); spatial 3-sphere of radius `R = 1/√λ`.
    EinsteinStatic {
        /// Positive curvature constant (1/m²).
        lambda: f64,
    },
    /// The static patch of de Sitter spacetime, `λ > 0` (1/m²).
    DeSitter {
        /// Positive cosmological constant (1/m²).
        lambda: f64,
    },
    /// Anti-de Sitter spacetime, `λ < 0` (1/m²).
    AntiDeSitter {
        /// Negative cosmological constant (1/m²).
        lambda: f64,
    },
    /// The comoving frame of a circular equatorial geodesic orbit in a
    /// Kerr exterior.
    KerrCircularOrbit {
        /// Mass of the central body (kg).
        central_mass: f64,
        /// Specific angular momentum `a` of the body (m²/s), bounded by
        /// `|a| ≤ GM/c`.
        spin: f64,
        /// Boyer–Lindquist radius of the circular orbit (m).
        orbit_radius: f64,
        /// Chart trust radius as a fraction of `orbit_radius`, in
        /// `(0, 0.5]`; defaults to [`DEFAULT_KERR_TRUST_FACTOR`].
        trust_radius_factor: f64,
    },
}

impl Spacetime {
    /// Flat spacetime.
    pub const fn minkowski() -> Self {
        Self::Minkowski
    }

    /// Einstein static universe with curvature constant `lambda > 0`.
    pub fn einstein_static(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::domain(format!(
                "Einstein-static curvature constant must be positive and finite, got {lambda}"
            )));
        }
        Ok(Self::EinsteinStatic { lambda })
    }

    /// Static patch of de Sitter spacetime with `lambda > 0`.
    pub fn de_sitter(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::domain(format!(
                "de Sitter cosmological constant must be positive and finite, got {lambda}"
            )));
        }
        Ok(Self::DeSitter { lambda })
    }

    /// Anti-de Sitter spacetime with `lambda < 0`.
    pub fn anti_de_sitter(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda < 0.0) {
            return Err(Error::domain(format!(
                "anti-de Sitter cosmological constant must be negative and finite, got {lambda}"
            )));
        }
        Ok(Self::AntiDeSitter { lambda })
    }

    /// Kerr circular-orbit frame with the default chart trust factor.
    ///
    /// Validates the orbit against the physical constants: sub-extremal
    /// spin (`|a| ≤ GM/c`), orbit outside the outer horizon, and the
    /// existence of a timelike circular geodesic there (`D² > 0`).
    pub fn kerr_circular_orbit(
        central_mass: f64,
        spin: f64,
        orbit_radius: f64,
        k: &PhysicalConstants,
    ) -> Result<Self> {
        Self::kerr_circular_orbit_with_trust(
            central_mass,
            spin,
            orbit_radius,
            DEFAULT_KERR_TRUST_FACTOR,
            k,
        )
    }

    /// Kerr circular-orbit frame with an explicit chart trust factor in
    /// `(0, 0.5]`.
    pub fn kerr_circular_orbit_with_trust(
        central_mass: f64,
        spin: f64,
        orbit_radius: f64,
        trust_radius_factor: f64,
        k: &PhysicalConstants,
    ) -> Result<Self> {
        if !(central_mass.is_finite() && central_mass > 0.0) {
            return Err(Error::domain(format!(
                "central mass must be positive and finite, got {central_mass}"
            )));
        }
        if !spin.is_finite() {
            return Err(Error::domain(format!("spin must be finite, got {spin}")));
        }
        if !(orbit_radius.is_finite() && orbit_radius > 0.0) {
            return Err(Error::domain(format!(
                "orbit radius must be positive and finite, got {orbit_radius}"
            )));
        }
        if !(trust_radius_factor > 0.0 && trust_radius_factor <= 0.5) {
            return Err(Error::domain(format!(
                "trust radius factor must lie in (0, 0.5], got {trust_radius_factor}; \
                 the second-order chart expansion is meaningless beyond half the orbit radius"
            )));
        }
        let st = Self::KerrCircularOrbit {
            central_mass,
            spin,
            orbit_radius,
            trust_radius_factor,
        };
        st.validate(k)?;
        Ok(st)
    }

    /// Re-checks every construction invariant against the given constants.
    ///
    /// Useful when a value was deserialized or the constants changed;
    /// constructors call this internally.
    pub fn validate(&self, k: &PhysicalConstants) -> Result<()> {
        k.validated()?;
        match *self {
            Self::Minkowski => Ok(()),
            Self::EinsteinStatic { lambda } | Self::DeSitter { lambda } => {
                if lambda.is_finite() && lambda > 0.0 {
                    Ok(())
                } else {
                    Err(Error::domain(format!(
                        "curvature constant must be positive and finite, got {lambda}"
                    )))
                }
            }
            Self::AntiDeSitter { lambda } => {
                if lambda.is_finite() && lambda < 0.0 {
                    Ok(())
                } else {
                    Err(Error::domain(format!(
                        "anti-de Sitter constant must be negative and finite, got {lambda}"
                    )))
                }
            }
            Self::KerrCircularOrbit {
                central_mass,
                spin,
                orbit_radius,
                trust_radius_factor,
            } => {
                if !(central_mass.is_finite() && central_mass > 0.0)
                    || !spin.is_finite()
                    || !(orbit_radius.is_finite() && orbit_radius > 0.0)
                    || !(trust_radius_factor > 0.0 && trust_radius_factor <= 0.5)
                {
                    return Err(Error::domain(
                        "invalid Kerr orbit parameters (mass, spin, radius or trust factor)",
                    ));
                }
                let gm = k.g_newton * central_mass;
                let c = k.c;
                if spin.abs() > gm / c {
                    return Err(Error::domain(format!(
                        "spin |a| = {} exceeds the extremal bound GM/c = {}",
                        spin.abs(),
                        gm / c
                    )));
                }
                let rg = gm / (c * c);
                let r_plus = rg + (rg * rg - (spin / c) * (spin / c)).max(0.0).sqrt();
                if orbit_radius <= r_plus {
                    return Err(Error::domain(format!(
                        "orbit radius {orbit_radius} lies inside the outer horizon r+ = {r_plus}"
                    )));
                }
                let y2 = 1.0 / (c * c);
                let delta0 =
                    orbit_radius * orbit_radius - 2.0 * gm * orbit_radius * y2 + spin * spin * y2;
                if delta0 <= 0.0 {
                    return Err(Error::domain(format!(
                        "Boyer-Lindquist Delta is non-positive at the orbit radius \
                         (Delta_0 = {delta0})"
                    )));
                }
                let d2 = orbit_radius.powi(3) - 3.0 * gm * orbit_radius * orbit_radius * y2
                    + 2.0 * spin * gm.sqrt() * orbit_radius.powf(1.5) * y2;
                if d2 <= 0.0 {
                    return Err(Error::domain(format!(
                        "no timelike circular geodesic at r0 = {orbit_radius} \
                         (D^2 = {d2} <= 0; the orbit is at or inside the photon sphere)"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Curvature length scale `a` of the maximally symmetric cases
    /// (`√(λ/3)` or `√(|λ|/3)`, units 1/m).
    pub(crate) fn curvature_a(&self) -> Option<f64> {
        match *self {
            Self::DeSitter { lambda } => Some((lambda / 3.0).sqrt()),
            Self::AntiDeSitter { lambda } => Some((-lambda / 3.0).sqrt()),
            _ => None,
        }
    }

    /// Radius of the chart's validity ball, if it is bounded.
    pub fn chart_radius(&self) -> Option<f64> {
        match *self {
            Self::Minkowski | Self::AntiDeSitter { .. } => None,
            Self::EinsteinStatic { lambda } => Some(std::f64::consts::PI / lambda.sqrt()),
            Self::DeSitter { lambda } => {
                Some(std::f64::consts::FRAC_PI_2 / (lambda / 3.0).sqrt())
            }
            Self::KerrCircularOrbit {
                orbit_radius,
                trust_radius_factor,
                ..
            } => Some(trust_radius_factor * orbit_radius),
        }
    }

    /// True when the strict Newtonian-limit structure
    /// `α(0) = 1, α′(0) = 0, α − 1 = O(1/c²)` holds: Minkowski and the
    /// Kerr circular-orbit frame.
    ///
    /// The Einstein static universe is trivially *compatible* (its lapse
    /// is identically 1, so `U ≡ 0`), and the Newtonian operations accept
    /// it; the flag stays false because nothing scales with `1/c²` there.
    /// De Sitter and anti-de Sitter have no Newtonian analog at all: their
    /// lapse deviates from 1 at order `c⁰`.
    pub fn supports_newtonian_limit(&self) -> bool {
        matches!(self, Self::Minkowski | Self::KerrCircularOrbit { .. })
    }

    /// Spacetimes on which the Newtonian machinery is meaningful: the
    /// strict cases plus the trivial Einstein-static one.
    pub(crate) fn has_newtonian_analog(&self) -> bool {
        self.supports_newtonian_limit() || matches!(self, Self::EinsteinStatic { .. })
    }

    /// True when `α` and the spatial metric depend only on `ρ = |x|`
    /// (everything except the Kerr chart).
    pub(crate) fn is_radial(&self) -> bool {
        !matches!(self, Self::KerrCircularOrbit { .. })
    }

    /// Checks that `x` lies strictly inside the chart validity domain.
    pub(crate) fn check_in_chart(&self, x: [f64; 3], k: &PhysicalConstants) -> Result<()> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(format!(
                "chart point must be finite, got [{}, {}, {}]",
                x[0], x[1], x[2]
            )));
        }
        match self {
            Self::KerrCircularOrbit { .. } => {
                KerrOrbit::from_spacetime(self, k)?.check_trust(x)
            }
            _ => {
                if let Some(rc) = self.chart_radius() {
                    let rho = norm3(x);
                    if rho >= rc {
                        return Err(Error::domain(format!(
                            "chart point at rho = {rho} is outside the chart validity \
                             radius {rc}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

fn norm3(x: [f64; 3]) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

/// A bounded spatial region centered at the chart origin.
///
/// Construct through [`Region::ball`], [`Region::shell`] or
/// [`Region::cuboid`]; validity *for a given spacetime* (the region must
/// sit strictly inside the chart) is checked by [`Region::validate_for`],
/// which every consuming operation calls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// Euclidean chart ball `|x| ≤ radius`.
    Ball {
        /// Ball radius (m), positive.
        radius: f64,
    },
    /// Axis-aligned box `|xⁱ| ≤ half_extents[i]`.
    Box {
        /// Half side lengths (m), all positive.
        half_extents: [f64; 3],
    },
    /// Spherical shell `inner ≤ |x| ≤ outer`.
    Shell {
        /// Inner radius (m), non-negative.
        inner: f64,
        /// Outer radius (m), strictly greater than `inner`.
        outer: f64,
    },
}

impl Region {
    /// Ball of the given radius.
    pub fn ball(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::domain(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self::Ball { radius })
    }

    /// Axis-aligned box with the given half extents.
    pub fn cuboid(half_extents: [f64; 3]) -> Result<Self> {
        if half_extents.iter().any(|&h| !(h.is_finite() && h > 0.0)) {
            return Err(Error::domain(format!(
                "box half extents must all be positive and finite, got {half_extents:?}"
            )));
        }
        Ok(Self::Box { half_extents })
    }

    /// Spherical shell between the given radii.
    pub fn shell(inner: f64, outer: f64) -> Result<Self> {
        if !(inner.is_finite() && outer.is_finite() && inner >= 0.0 && outer > inner) {
            return Err(Error::domain(format!(
                "shell radii must satisfy 0 <= inner < outer, got [{inner}, {outer}]"
            )));
        }
        Ok(Self::Shell { inner, outer })
    }

    /// Radius of the smallest origin-centered ball containing the region.
    pub fn circumradius(&self) -> f64 {
        match *self {
            Self::Ball { radius } => radius,
            Self::Shell { outer, .. } => outer,
            Self::Box { half_extents: h } => norm3(h),
        }
    }

    /// Whether the chart point `x` lies in the region (boundary included).
    pub fn contains(&self, x: [f64; 3]) -> bool {
        match *self {
            Self::Ball { radius } => norm3(x) <= radius,
            Self::Shell { inner, outer } => {
                let rho = norm3(x);
                inner <= rho && rho <= outer
            }
            Self::Box { half_extents: h } => {
                x[0].abs() <= h[0] && x[1].abs() <= h[1] && x[2].abs() <= h[2]
            }
        }
    }

    /// Whether `inner` is entirely contained in `self` (set inclusion,
    /// decided exactly from the region shapes).
    pub fn contains_region(&self, inner: &Region) -> bool {
        // Radial interval [lo, hi] of |x| for ball/shell regions.
        let interval = |r: &Region| match *r {
            Self::Ball { radius } => Some((0.0, radius)),
            Self::Shell { inner, outer } => Some((inner, outer)),
            Self::Box { .. } => None,
        };
        match (interval(self), interval(inner)) {
            (Some((lo_o, hi_o)), Some((lo_i, hi_i))) => lo_o <= lo_i && hi_i <= hi_o,
            (Some((lo_o, hi_o)), None) => {
                // A box inside a ball/shell: the box contains the origin,
                // so the outer interval must start at 0 and the box
                // circumradius must fit.
                lo_o == 0.0 && inner.circumradius() <= hi_o
            }
            (None, _) => {
                let h_o = match *self {
                    Self::Box { half_extents } => half_extents,
                    _ => unreachable!(),
                };
                match *inner {
                    Self::Box { half_extents: h_i } => {
                        h_i[0] <= h_o[0] && h_i[1] <= h_o[1] && h_i[2] <= h_o[2]
                    }
                    _ => inner.circumradius() <= h_o[0].min(h_o[1]).min(h_o[2]),
                }
            }
        }
    }

    /// Checks the region's own invariants and that it sits strictly inside
    /// the chart validity domain of `st`.
    pub fn validate_for(&self, st: &Spacetime) -> Result<()> {
        match *self {
            Self::Ball { radius } => {
                if !(radius.is_finite() && radius > 0.0) {
                    return Err(Error::domain("ball radius must be positive and finite"));
                }
            }
            Self::Box { half_extents } => {
                if half_extents.iter().any(|&h| !(h.is_finite() && h > 0.0)) {
                    return Err(Error::domain("box half extents must be positive and finite"));
                }
            }
            Self::Shell { inner, outer } => {
                if !(inner.is_finite() && outer.is_finite() && inner >= 0.0 && outer > inner) {
                    return Err(Error::domain("shell radii must satisfy 0 <= inner < outer"));
                }
            }
        }
        if let Some(rc) = st.chart_radius() {
            let circum = self.circumradius();
            if circum >= rc {
                return Err(Error::domain(format!(
                    "region with circumradius {circum} does not fit strictly inside the \
                     chart validity radius {rc}"
                )));
            }
        }
        Ok(())
    }
}

/// Which volume measure [`volume`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeKind {
    /// Euclidean Lebesgue measure of the chart coordinates — the measure
    /// of the configuration-space integrals.
    ChartLebesgue,
    /// Riemannian proper volume `∫ √det(³g) d³x` of the spatial metric.
    ProperRiemannian,
}

/// Areal radius function `f(ρ)` of the radial spatial metrics
/// `dρ² + f(ρ)² dΩ²`.
fn radial_f(st: &Spacetime, rho: f64) -> f64 {
    match *st {
        Spacetime::Minkowski | Spacetime::KerrCircularOrbit { .. } => rho,
        Spacetime::EinsteinStatic { lambda } => {
            let r = 1.0 / lambda.sqrt();
            r * (rho / r).sin()
        }
        Spacetime::DeSitter { lambda } => {
            let a = (lambda / 3.0).sqrt();
            (a * rho).sin() / a
        }
        Spacetime::AntiDeSitter { lambda } => {
            let a = (-lambda / 3.0).sqrt();
            (a * rho).sinh() / a
        }
    }
}

/// `√det(³g) = (f(ρ)/ρ)²` on the Cartesian chart, with the removable
/// `ρ → 0` limit handled.  For the Kerr chart this is 1 (chart volume is
/// used as proper volume at the chart's expansion order).
pub(crate) fn sqrt_det3g(st: &Spacetime, rho: f64) -> f64 {
    if rho == 0.0 {
        return 1.0;
    }
    let fr = radial_f(st, rho) / rho;
    fr * fr
}

/// `u − sin(u)`, evaluated by series below `|u| = 0.5` where the direct
/// subtraction would cancel catastrophically (the difference is `O(u³)`
/// while the operands are `O(u)`).
fn arg_minus_sin(u: f64) -> f64 {
    if u.abs() < 0.5 {
        let u2 = u * u;
        let mut term = u * u2 / 6.0;
        let mut sum = term;
        let mut k = 1.0;
        loop {
            term *= -u2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            let next = sum + term;
            if next == sum {
                return next;
            }
            sum = next;
            k += 1.0;
        }
    } else {
        u - u.sin()
    }
}

/// `sinh(u) − u`, with the same small-argument series treatment as
/// [`arg_minus_sin`].
fn sinh_minus_arg(u: f64) -> f64 {
    if u.abs() < 0.5 {
        let u2 = u * u;
        let mut term = u * u2 / 6.0;
        let mut sum = term;
        let mut k = 1.0;
        loop {
            term *= u2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            let next = sum + term;
            if next == sum {
                return next;
            }
            sum = next;
            k += 1.0;
        }
    } else {
        u.sinh() - u
    }
}

/// Antiderivative `F(ρ) = ∫ 4π f(ρ)² dρ` of the proper radial volume
/// element, normalized to `F(0) = 0`; proper ball volume is `F(ρ₀)`.
/// Written through `u ∓ sin/sinh(u)` helpers so the value stays fully
/// accurate in the near-flat regime `aρ ≪ 1`, where the naive closed
/// forms lose all significance.
fn proper_radial_antiderivative(st: &Spacetime, rho: f64) -> f64 {
    let pi = std::f64::consts::PI;
    match *st {
        Spacetime::Minkowski | Spacetime::KerrCircularOrbit { .. } => {
            4.0 * pi * rho.powi(3) / 3.0
        }
        Spacetime::EinsteinStatic { lambda } => {
            let r = 1.0 / lambda.sqrt();
            pi * r.powi(3) * arg_minus_sin(2.0 * rho / r)
        }
        Spacetime::DeSitter { lambda } => {
            let a = (lambda / 3.0).sqrt();
            pi / a.powi(3) * arg_minus_sin(2.0 * a * rho)
        }
        Spacetime::AntiDeSitter { lambda } => {
            let a = (-lambda / 3.0).sqrt();
            pi / a.powi(3) * sinh_minus_arg(2.0 * a * rho)
        }
    }
}

/// Volume of `region` in `st` under the chosen measure.
///
/// Chart-Lebesgue volumes are closed-form.  Proper volumes are closed-form
/// for balls and shells in the radial spacetimes, and evaluated by
/// tensor-product quadrature of `√det(³g)` (relative tolerance `1e-10`)
/// for boxes on curved spatial sections.  The Kerr chart reports its
/// chart volume as proper volume: the spatial metric is only known to the
/// chart's second expansion order, where the correction is
/// `O((|x|/r₀)²)`.
///
/// # Errors
///
/// [`Error::Domain`] when the region does not fit the chart;
/// [`Error::Numeric`] if the box quadrature fails to stabilize.
pub fn volume(st: &Spacetime, region: &Region, kind: VolumeKind) -> Result<f64> {
    region.validate_for(st)?;
    match kind {
        VolumeKind::ChartLebesgue => Ok(chart_volume(region)),
        VolumeKind::ProperRiemannian => match *region {
            Region::Ball { radius } => Ok(proper_radial_antiderivative(st, radius)),
            Region::Shell { inner, outer } => Ok(proper_radial_antiderivative(st, outer)
                - proper_radial_antiderivative(st, inner)),
            Region::Box { half_extents: h } => {
                if st.is_radial() {
                    let q = integrate_cube_3d(
                        |x| sqrt_det3g(st, norm3(x)),
                        [[-h[0], h[0]], [-h[1], h[1]], [-h[2], h[2]]],
                        0.0,
                        1e-10,
                    )?;
                    Ok(q.value)
                } else {
                    Ok(chart_volume(region))
                }
            }
        },
    }
}

fn chart_volume(region: &Region) -> f64 {
    let four_thirds_pi = 4.0 * std::f64::consts::PI / 3.0;
    match *region {
        Region::Ball { radius } => four_thirds_pi * radius.powi(3),
        Region::Shell { inner, outer } => four_thirds_pi * (outer.powi(3) - inner.powi(3)),
        Region::Box { half_extents: h } => 8.0 * h[0] * h[1] * h[2],
    }
}

/// Lapse `α(x) = ‖K‖/c`, the dimensionless Killing-field norm.
///
/// # Errors
///
/// [`Error::Domain`] for points outside the chart validity domain.
pub fn alpha_of(st: &Spacetime, x: [f64; 3], k: &PhysicalConstants) -> Result<f64> {
    Ok(1.0 + alpha_minus_one_of(st, x, k)?)
}

/// `α(x) − 1`, computed cancellation-free.
///
/// In the weak-field and small-region regimes `α − 1` is many orders of
/// magnitude below 1; the one-body weight multiplies it by `θ = βmc²`
/// (which is huge in the same regimes), so its *relative* precision is
/// what controls every density and pressure downstream.  The closed forms
/// here (`−2sin²(aρ/2)`, `2sinh²(aρ/2)`, and the Kerr `y²B` form) never
/// subtract nearby quantities.
pub fn alpha_minus_one_of(st: &Spacetime, x: [f64; 3], k: &PhysicalConstants) -> Result<f64> {
    st.check_in_chart(x, k)?;
    match st {
        Spacetime::Minkowski | Spacetime::EinsteinStatic { .. } => Ok(0.0),
        Spacetime::DeSitter { .. } | Spacetime::AntiDeSitter { .. } => {
            Ok(radial_alpha_minus_one(st, norm3(x)))
        }
        Spacetime::KerrCircularOrbit { .. } => {
            KerrOrbit::from_spacetime(st, k)?.alpha_minus_one(x, 1.0 / k.c)
        }
    }
}

/// Radial form of `α(ρ) − 1` for the radially symmetric spacetimes.
/// Callers guarantee `ρ` is inside the chart.
pub(crate) fn radial_alpha_minus_one(st: &Spacetime, rho: f64) -> f64 {
    match *st {
        Spacetime::Minkowski | Spacetime::EinsteinStatic { .. } => 0.0,
        Spacetime::DeSitter { lambda } => {
            let a = (lambda / 3.0).sqrt();
            let s = (0.5 * a * rho).sin();
            -2.0 * s * s
        }
        Spacetime::AntiDeSitter { lambda } => {
            let a = (-lambda / 3.0).sqrt();
            let s = (0.5 * a * rho).sinh();
            2.0 * s * s
        }
        Spacetime::KerrCircularOrbit { .. } => {
            unreachable!("the Kerr chart is not radially symmetric")
        }
    }
}

/// `γ(x) = α(x)·βmc²`, the local argument of the Bessel weight; exactly
/// one multiplication on top of [`alpha_of`].
pub fn gamma_of(
    st: &Spacetime,
    x: [f64; 3],
    gas: &GasSpec,
    k: &PhysicalConstants,
) -> Result<f64> {
    Ok(alpha_of(st, x, k)? * gas.theta(k))
}

/// Inverse spacetime metric components at a chart point, in the chart's
/// `(t, x¹, x², x³)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseMetric {
    /// `ḡ⁰⁰ = −1/(α²c²)` (s²/m²), strictly negative.
    pub g00: f64,
    /// `ḡ⁰ⁱ` (s/m), zero for all static charts here.
    pub g0i: [f64; 3],
    /// Spatial inverse metric `ḡⁱʲ` (dimensionless).
    pub gij: [[f64; 3]; 3],
}

/// Inverse metric of the radial spacetimes on the Cartesian chart:
/// `ḡ⁰⁰ = −1/(α²c²)`, `ḡ⁰ⁱ = 0`,
/// `ḡⁱʲ = (ρ²/f²) δⁱʲ + (1 − ρ²/f²) x̂ⁱx̂ʲ`.
///
/// # Errors
///
/// [`Error::Domain`] outside the chart, and for the Kerr chart (its
/// spatial metric beyond the lapse is not determined at the chart's
/// expansion order).
pub fn chart_inverse_metric(
    st: &Spacetime,
    x: [f64; 3],
    k: &PhysicalConstants,
) -> Result<InverseMetric> {
    if matches!(st, Spacetime::KerrCircularOrbit { .. }) {
        return Err(Error::domain(
            "the Kerr Fermi chart's spatial metric is not available: the chart is a \
             second-order expansion that determines the lapse only",
        ));
    }
    st.check_in_chart(x, k)?;
    let alpha = alpha_of(st, x, k)?;
    if alpha <= 0.0 {
        return Err(Error::domain(format!(
            "Killing field is null or spacelike at this point (alpha = {alpha})"
        )));
    }
    let g00 = -1.0 / (alpha * alpha * k.c * k.c);
    let rho = norm3(x);
    let mut gij = [[0.0; 3]; 3];
    let inv_fr2 = if rho == 0.0 {
        1.0
    } else {
        let fr = radial_f(st, rho) / rho;
        1.0 / (fr * fr)
    };
    for (i, row) in gij.iter_mut().enumerate() {
        row[i] = inv_fr2;
    }
    if rho > 0.0 {
        let xhat = [x[0] / rho, x[1] / rho, x[2] / rho];
        for i in 0..3 {
            for j in 0..3 {
                gij[i][j] += (1.0 - inv_fr2) * xhat[i] * xhat[j];
            }
        }
    }
    Ok(InverseMetric {
        g00,
        g0i: [0.0; 3],
        gij,
    })
}

/// Solves the mass-shell condition `ḡ^{αβ} p̄_α p̄_β = −m²c²` for the time
/// covector component, returning the root
/// `p̄₀ = [−ḡ⁰ⁱp̄ᵢ + √((ḡ⁰ʲp̄ⱼ)² − ḡ⁰⁰(ḡʲᵏp̄ⱼp̄ₖ + m²c²))]/ḡ⁰⁰`
/// (the past-pointing branch, so the Killing energy is positive).
///
/// The result is verified by back-substitution to `1e-10` relative before
/// being returned.
///
/// # Errors
///
/// [`Error::Domain`] when `ḡ⁰⁰ ≥ 0` (coordinate time not timelike), the
/// discriminant is negative, or inputs are not finite;
/// [`Error::Numeric`] if back-substitution fails the `1e-10` check.
pub fn mass_shell_p0(metric: &InverseMetric, p_spatial: [f64; 3], m: f64, c: f64) -> Result<f64> {
    if !(m > 0.0 && m.is_finite() && c > 0.0 && c.is_finite()) {
        return Err(Error::domain(format!(
            "mass and light speed must be positive and finite, got m = {m}, c = {c}"
        )));
    }
    if !(metric.g00 < 0.0) {
        return Err(Error::domain(format!(
            "time coordinate is not timelike: g^00 = {} must be negative",
            metric.g00
        )));
    }
    let g0p: f64 = (0..3).map(|i| metric.g0i[i] * p_spatial[i]).sum();
    let mut gpp = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            gpp += metric.gij[i][j] * p_spatial[i] * p_spatial[j];
        }
    }
    let m2c2 = m * m * c * c;
    let disc = g0p * g0p - metric.g00 * (gpp + m2c2);
    if disc < 0.0 {
        return Err(Error::domain(format!(
            "mass-shell discriminant is negative ({disc}); no real solution"
        )));
    }
    let p0 = (-g0p + disc.sqrt()) / metric.g00;

    let residual = metric.g00 * p0 * p0 + 2.0 * g0p * p0 + gpp + m2c2;
    if residual.abs() > 1e-10 * m2c2 {
        return Err(Error::Numeric {
            message: format!(
                "mass-shell back-substitution residual {residual:e} exceeds 1e-10 relative"
            ),
            best_estimate: p0,
            error_bound: residual.abs() / m2c2,
        });
    }
    Ok(p0)
}

/// Geodesic distance between two chart points in the *spatial* Riemannian
/// metric — the separation that pair potentials act on.
///
/// Flat for Minkowski (and for the Kerr chart at its expansion order);
/// spherical law of cosines on the 3-sphere for Einstein static and
/// de Sitter; hyperbolic law of cosines for anti-de Sitter.  Both
/// spherical and hyperbolic cases use the haversine-style forms, which are
/// cancellation-free for nearby points.
pub fn proper_pair_distance(st: &Spacetime, x1: [f64; 3], x2: [f64; 3], k: &PhysicalConstants) -> Result<f64> {
    st.check_in_chart(x1, k)?;
    st.check_in_chart(x2, k)?;
    match *st {
        Spacetime::Minkowski | Spacetime::KerrCircularOrbit { .. } => Ok(euclidean(x1, x2)),
        Spacetime::EinsteinStatic { lambda } => {
            Ok(sphere_distance(x1, x2, 1.0 / lambda.sqrt()))
        }
        Spacetime::DeSitter { lambda } => {
            Ok(sphere_distance(x1, x2, 1.0 / (lambda / 3.0).sqrt()))
        }
        Spacetime::AntiDeSitter { lambda } => {
            Ok(hyperbolic_distance(x1, x2, (-lambda / 3.0).sqrt()))
        }
    }
}

fn euclidean(x1: [f64; 3], x2: [f64; 3]) -> f64 {
    norm3([x1[0] - x2[0], x1[1] - x2[1], x1[2] - x2[2]])
}

/// `sin²(ψ/2) = |x̂₁ − x̂₂|²/4` for unit vectors — the cancellation-free
/// half-angle of the direction separation.
fn half_angle_sin2(x1: [f64; 3], rho1: f64, x2: [f64; 3], rho2: f64) -> f64 {
    let d = [
        x1[0] / rho1 - x2[0] / rho2,
        x1[1] / rho1 - x2[1] / rho2,
        x1[2] / rho1 - x2[2] / rho2,
    ];
    0.25 * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2])
}

fn sphere_distance(x1: [f64; 3], x2: [f64; 3], radius: f64) -> f64 {
    let (rho1, rho2) = (norm3(x1), norm3(x2));
    if rho1 == 0.0 || rho2 == 0.0 {
        return rho1 + rho2;
    }
    // Haversine: sin²(d/2R) = sin²((ρ₁−ρ₂)/2R) + sin(ρ₁/R)sin(ρ₂/R)sin²(ψ/2).
    let h = (0.5 * (rho1 - rho2) / radius).sin().powi(2)
        + (rho1 / radius).sin() * (rho2 / radius).sin() * half_angle_sin2(x1, rho1, x2, rho2);
    2.0 * radius * h.sqrt().min(1.0).asin()
}

fn hyperbolic_distance(x1: [f64; 3], x2: [f64; 3], a: f64) -> f64 {
    let (rho1, rho2) = (norm3(x1), norm3(x2));
    if rho1 == 0.0 || rho2 == 0.0 {
        return rho1 + rho2;
    }
    // sinh²(ad/2) = sinh²(a(ρ₁−ρ₂)/2) + sinh(aρ₁)sinh(aρ₂)sin²(ψ/2).
    let h = (0.5 * a * (rho1 - rho2)).sinh().powi(2)
        + (a * rho1).sinh() * (a * rho2).sinh() * half_angle_sin2(x1, rho1, x2, rho2);
    2.0 / a * h.sqrt().asinh()
}

/// Number of halving levels in the `α″(0)` Romberg tableau.
const FD_LEVELS: usize = 6;

/// Second derivative `α″(0) = d²α/dy²|_{y=0}` with respect to the inverse
/// light speed `y = 1/c`, at fixed chart point `x` (units m²/s²).  The
/// Newtonian potential of the spacetime is `U(x) = m·α″(0)/2`.
///
/// For Minkowski and Einstein static this is exactly 0 (`α ≡ 1`).  For
/// the Kerr chart it is evaluated by second differences in `y` with
/// Romberg extrapolation over halved steps starting at `h = 10⁻⁴/c` and
/// plateau detection; the differences are computed through the
/// cancellation-free `(α²−1)/y²` form, so no precision is lost at small
/// steps (see [`kerr`]).
///
/// # Errors
///
/// [`Error::UnsupportedLimit`] for de Sitter and anti-de Sitter: their
/// lapse deviates from 1 at order `c⁰` (the cosmological curvature does
/// not scale with `1/c²`), so no Newtonian potential exists.
pub fn alpha_second_deriv_fd(
    st: &Spacetime,
    x: [f64; 3],
    k: &PhysicalConstants,
) -> Result<f64> {
    match st {
        Spacetime::Minkowski | Spacetime::EinsteinStatic { .. } => {
            st.check_in_chart(x, k)?;
            Ok(0.0)
        }
        Spacetime::DeSitter { .. } | Spacetime::AntiDeSitter { .. } => {
            Err(Error::unsupported_limit(
                "no Newtonian limit for (anti-)de Sitter: the lapse deviates from 1 at \
                 order c^0, so there is no 1/c^2 potential to extract",
            ))
        }
        Spacetime::KerrCircularOrbit { .. } => {
            let orbit = KerrOrbit::from_spacetime(st, k)?;
            orbit.check_trust(x)?;
            // E(h) = [α(h) − 2α(0) + α(−h)]/h² restructured through the
            // even, cancellation-free B: E(h) = 2B(h²)/(1 + √(1 + h²B)).
            let e = |h: f64| {
                let b = orbit.b_of(x, h);
                2.0 * b / (1.0 + (1.0 + h * h * b).sqrt())
            };
            let h0 = 1e-4 / k.c;
            let mut t = [[0.0_f64; FD_LEVELS]; FD_LEVELS];
            for j in 0..FD_LEVELS {
                t[j][0] = e(h0 / (1u32 << j) as f64);
                for m in 1..=j {
                    let pow = 4.0_f64.powi(m as i32);
                    t[j][m] = (pow * t[j][m - 1] - t[j - 1][m - 1]) / (pow - 1.0);
                }
            }
            // Plateau detection: among all extrapolants, keep the one
            // whose neighbor disagreements are smallest.
            let mut best = t[FD_LEVELS - 1][FD_LEVELS - 1];
            let mut best_err = f64::INFINITY;
            for j in 1..FD_LEVELS {
                for m in 1..=j {
                    let est = (t[j][m] - t[j - 1][m - 1])
                        .abs()
                        .max((t[j][m] - t[j][m - 1]).abs());
                    if est < best_err {
                        best_err = est;
                        best = t[j][m];
                    }
                }
            }
            Ok(best)
        }
    }
}
