//! Interaction potentials, configurations, boundary conditions, and the
//! conditional energy of the local specification.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::geometry::{proper_pair_distance, volume, Region, Spacetime, VolumeKind};
use crate::thermo::vacuum_energy;

/// Pair interaction `φ₂` as a function of *proper* distance.
///
/// All shapes are radial and classical; ranges are measured in the
/// Riemannian metric of the spatial slice (exact in Minkowski and the
/// curved radial spacetimes, chart-Euclidean on the Kerr chart at its
/// expansion order).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairPotential {
    /// No pair interaction (ideal gas).
    None,
    /// Pure hard core: `+∞` for `d < core_radius`, zero beyond.
    HardCore {
        /// Exclusion diameter (m).
        core_radius: f64,
    },
    /// Hard core with a constant well: `+∞` below `core_radius`,
    /// `−depth` on `[core_radius, range]`, zero beyond.
    SquareWell {
        /// Exclusion diameter (m).
        core_radius: f64,
        /// Outer range of the well (m), strictly greater than the core.
        range: f64,
        /// Well depth (J); positive values are attractive.
        depth: f64,
    },
    /// Repulsive inverse power `strength·(scale/d)^exponent` — an
    /// *infinite-range* interaction (no finite `R` with `φ₂ = 0` beyond).
    InversePower {
        /// Energy scale (J), nonnegative.
        strength: f64,
        /// Power-law exponent, positive.
        exponent: f64,
        /// Distance scale (m).
        scale: f64,
    },
}

impl PairPotential {
    fn validate(&self) -> Result<()> {
        match *self {
            Self::None => Ok(()),
            Self::HardCore { core_radius } => {
                if core_radius.is_finite() && core_radius > 0.0 {
                    Ok(())
                } else {
                    Err(Error::model(format!(
                        "hard-core radius must be positive and finite, got {core_radius}"
                    )))
                }
            }
            Self::SquareWell {
                core_radius,
                range,
                depth,
            } => {
                if !(core_radius.is_finite() && core_radius > 0.0) {
                    return Err(Error::model(format!(
                        "square-well core radius must be positive and finite, got {core_radius}"
                    )));
                }
                if !(range.is_finite() && range > core_radius) {
                    return Err(Error::model(format!(
                        "square-well range must exceed the core radius \
                         (core {core_radius}, range {range})"
                    )));
                }
                if !depth.is_finite() {
                    return Err(Error::model(format!(
                        "square-well depth must be finite, got {depth}"
                    )));
                }
                Ok(())
            }
            Self::InversePower {
                strength,
                exponent,
                scale,
            } => {
                if !(strength.is_finite() && strength >= 0.0) {
                    return Err(Error::model(format!(
                        "inverse-power strength must be nonnegative and finite, got {strength}"
                    )));
                }
                if !(exponent.is_finite() && exponent > 0.0) {
                    return Err(Error::model(format!(
                        "inverse-power exponent must be positive and finite, got {exponent}"
                    )));
                }
                if !(scale.is_finite() && scale > 0.0) {
                    return Err(Error::model(format!(
                        "inverse-power scale must be positive and finite, got {scale}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Interaction range `R`: the smallest distance beyond which the pair
    /// term vanishes identically (`0` for no interaction, `+∞` for the
    /// inverse-power law).
    pub fn range(&self) -> f64 {
        match *self {
            Self::None => 0.0,
            Self::HardCore { core_radius } => core_radius,
            Self::SquareWell { range, .. } => range,
            Self::InversePower { .. } => f64::INFINITY,
        }
    }

    /// Hard-core exclusion radius, if the potential has one.
    pub fn hard_core_radius(&self) -> Option<f64> {
        match *self {
            Self::HardCore { core_radius } | Self::SquareWell { core_radius, .. } => {
                Some(core_radius)
            }
            _ => None,
        }
    }

    /// Pair energy at proper distance `d` (J); `+∞` inside a hard core.
    pub fn evaluate(&self, d: f64) -> f64 {
        match *self {
            Self::None => 0.0,
            Self::HardCore { core_radius } => {
                if d < core_radius {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            Self::SquareWell {
                core_radius,
                range,
                depth,
            } => {
                if d < core_radius {
                    f64::INFINITY
                } else if d <= range {
                    -depth
                } else {
                    0.0
                }
            }
            Self::InversePower {
                strength,
                exponent,
                scale,
            } => {
                if d == 0.0 {
                    f64::INFINITY
                } else {
                    strength * (scale / d).powf(exponent)
                }
            }
        }
    }
}

/// Optional three-body term: a constant energy for every triple whose
/// pairwise proper distances all lie within `range`.
///
/// This is the simplest finite-range higher-order interaction; `n`-body
/// terms for `n > 3` are not provided.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripletPotential {
    /// Energy per close triple (J).
    pub strength: f64,
    /// Pairwise proper-distance range (m).
    pub range: f64,
}

/// A superstable interaction: pair term, optional triplet term, and the
/// stability constant `B ≥ 0` with `V(x | s) ≥ −B·n` for every `n`-point
/// interior configuration and admissible boundary condition (boundary
/// pairs and triples included, so `B` bounds the energy *per interior
/// particle*).
///
/// The stability constant is *asserted* by the caller (deriving sharp
/// constants is potential-specific); the sampler enforces it empirically
/// and aborts with a model error if a visited configuration violates it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potential {
    /// Pair interaction.
    pub pair: PairPotential,
    /// Optional three-body term.
    pub triplet: Option<TripletPotential>,
    /// Stability constant `B` (J), nonnegative.
    pub stability_b: f64,
}

impl Potential {
    /// Validates and builds a potential.
    pub fn new(
        pair: PairPotential,
        triplet: Option<TripletPotential>,
        stability_b: f64,
    ) -> Result<Self> {
        pair.validate()?;
        if let Some(t) = triplet {
            if !t.strength.is_finite() {
                return Err(Error::model(format!(
                    "triplet strength must be finite, got {}",
                    t.strength
                )));
            }
            if !(t.range.is_finite() && t.range > 0.0) {
                return Err(Error::model(format!(
                    "triplet range must be positive and finite, got {}",
                    t.range
                )));
            }
        }
        if !(stability_b.is_finite() && stability_b >= 0.0) {
            return Err(Error::model(format!(
                "stability constant B must be nonnegative and finite, got {stability_b}"
            )));
        }
        Ok(Self {
            pair,
            triplet,
            stability_b,
        })
    }

    /// The ideal gas: no interactions, `B = 0`.
    pub fn ideal() -> Self {
        Self {
            pair: PairPotential::None,
            triplet: None,
            stability_b: 0.0,
        }
    }

    /// True when every interaction term vanishes identically.
    pub fn is_ideal(&self) -> bool {
        matches!(self.pair, PairPotential::None) && self.triplet.is_none()
    }

    /// Overall interaction range: the largest range among the terms.
    pub fn range(&self) -> f64 {
        let pair = self.pair.range();
        match self.triplet {
            Some(t) => pair.max(t.range),
            None => pair,
        }
    }
}

/// A finite particle configuration inside a region: pairwise-distinct
/// chart points, all contained in the region (and hence in the chart).
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    points: Vec<[f64; 3]>,
    region: Region,
}

impl Configuration {
    /// Validates containment and pairwise distinctness.
    pub fn new(
        points: Vec<[f64; 3]>,
        region: Region,
        st: &Spacetime,
        k: &PhysicalConstants,
    ) -> Result<Self> {
        region.validate_for(st)?;
        for (i, p) in points.iter().enumerate() {
            st.check_in_chart(*p, k)?;
            if !region.contains(*p) {
                return Err(Error::domain(format!(
                    "configuration point {i} at {p:?} lies outside the region"
                )));
            }
            for q in &points[..i] {
                if p == q {
                    return Err(Error::domain(format!(
                        "configuration points must be pairwise distinct; {p:?} repeats"
                    )));
                }
            }
        }
        Ok(Self { points, region })
    }

    /// The empty configuration in `region`.
    pub fn empty(region: Region, st: &Spacetime) -> Result<Self> {
        region.validate_for(st)?;
        Ok(Self {
            points: Vec::new(),
            region,
        })
    }

    /// The particle positions.
    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    /// The region the configuration lives in.
    pub fn region(&self) -> &Region {
        &self.region
    }

    /// Number of particles.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// True when no particles are present.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A boundary condition: finitely many particles held fixed *outside* the
/// region.  Only points within interaction range of the region can affect
/// any energy difference, but farther points are accepted and simply
/// contribute nothing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundaryCondition {
    points: Vec<[f64; 3]>,
}

impl BoundaryCondition {
    /// The free (empty) boundary condition.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Validates that every point is inside the chart and outside the
    /// region.
    pub fn new(
        points: Vec<[f64; 3]>,
        region: &Region,
        st: &Spacetime,
        k: &PhysicalConstants,
    ) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            st.check_in_chart(*p, k)?;
            if region.contains(*p) {
                return Err(Error::domain(format!(
                    "boundary point {i} at {p:?} lies inside the region"
                )));
            }
            for q in &points[..i] {
                if p == q {
                    return Err(Error::domain(format!(
                        "boundary points must be pairwise distinct; {p:?} repeats"
                    )));
                }
            }
        }
        Ok(Self { points })
    }

    /// The boundary particle positions.
    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    /// Whether the boundary condition is free (no particles).
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Interaction energy (J) of the interior points given the boundary:
/// every pair and triple that meets the interior at least once, with
/// proper-distance range evaluation.  `+∞` signals a hard-core overlap
/// and is a legitimate value, not an error.
///
/// The vacuum and one-body terms are *not* included: the vacuum term is
/// configuration-independent and the one-body weight is the sampler's
/// intensity (see [`conditional_energy`] for the assembled energy).
pub fn interaction_energy(
    interior: &[[f64; 3]],
    boundary: &[[f64; 3]],
    pot: &Potential,
    st: &Spacetime,
    k: &PhysicalConstants,
) -> Result<f64> {
    if pot.is_ideal() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    // Interior-interior pairs.
    for i in 0..interior.len() {
        for j in (i + 1)..interior.len() {
            total += pot
                .pair
                .evaluate(proper_pair_distance(st, interior[i], interior[j], k)?);
            if total == f64::INFINITY {
                return Ok(f64::INFINITY);
            }
        }
        // Interior-boundary pairs.
        for b in boundary {
            total += pot
                .pair
                .evaluate(proper_pair_distance(st, interior[i], *b, k)?);
            if total == f64::INFINITY {
                return Ok(f64::INFINITY);
            }
        }
    }
    if let Some(trip) = pot.triplet {
        total += triplet_energy(interior, boundary, &trip, st, k)?;
    }
    Ok(total)
}

/// Sum of the triplet term over all triples meeting the interior.
fn triplet_energy(
    interior: &[[f64; 3]],
    boundary: &[[f64; 3]],
    trip: &TripletPotential,
    st: &Spacetime,
    k: &PhysicalConstants,
) -> Result<f64> {
    let close = |a: [f64; 3], b: [f64; 3]| -> Result<bool> {
        Ok(proper_pair_distance(st, a, b, k)? <= trip.range)
    };
    let mut count: u64 = 0;
    let n = interior.len();
    // Triples with all three points interior.
    for i in 0..n {
        for j in (i + 1)..n {
            if !close(interior[i], interior[j])? {
                continue;
            }
            for l in (j + 1)..n {
                if close(interior[i], interior[l])? && close(interior[j], interior[l])? {
                    count += 1;
                }
            }
            // Two interior, one boundary.
            for b in boundary {
                if close(interior[i], *b)? && close(interior[j], *b)? {
                    count += 1;
                }
            }
        }
        // One interior, two boundary.
        for bi in 0..boundary.len() {
            if !close(interior[i], boundary[bi])? {
                continue;
            }
            for bj in (bi + 1)..boundary.len() {
                if close(interior[i], boundary[bj])? && close(boundary[bi], boundary[bj])? {
                    count += 1;
                }
            }
        }
    }
    Ok(count as f64 * trip.strength)
}

/// Energy change (J) of inserting `point` into `existing` under the given
/// boundary: all new pairs and all new triples containing the point.
/// Used by the sampler for birth/death/translate deltas; `+∞` marks a
/// hard-core conflict.
pub(crate) fn insertion_energy(
    point: [f64; 3],
    existing: &[[f64; 3]],
    boundary: &[[f64; 3]],
    pot: &Potential,
    st: &Spacetime,
    k: &PhysicalConstants,
) -> Result<f64> {
    if pot.is_ideal() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for q in existing.iter().chain(boundary.iter()) {
        total += pot
            .pair
            .evaluate(proper_pair_distance(st, point, *q, k)?);
        if total == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
    }
    if let Some(trip) = pot.triplet {
        // All triples {point, u, v} with u, v from existing ∪ boundary
        // and at least the inserted point interior.
        let all: Vec<[f64; 3]> = existing.iter().chain(boundary.iter()).copied().collect();
        let mut count: u64 = 0;
        for i in 0..all.len() {
            if proper_pair_distance(st, point, all[i], k)? > trip.range {
                continue;
            }
            for j in (i + 1)..all.len() {
                if proper_pair_distance(st, point, all[j], k)? <= trip.range
                    && proper_pair_distance(st, all[i], all[j], k)? <= trip.range
                {
                    count += 1;
                }
            }
        }
        total += count as f64 * trip.strength;
    }
    Ok(total)
}

/// Conditional energy `Ṽ_Λ(x | s) = |Λ|_proper·ρ_vac + Σ φ_n` of the
/// configuration given the boundary (J); `+∞` on hard-core overlap.
///
/// The one-body term is *not* part of this sum — it enters the
/// specification through the intensity weight, matching the factorized
/// form of the partition function.  The empty configuration therefore
/// returns exactly `|Λ|_proper · ρ_vac`.
pub fn conditional_energy(
    x: &Configuration,
    s: &BoundaryCondition,
    pot: &Potential,
    st: &Spacetime,
    lambda: f64,
    k: &PhysicalConstants,
) -> Result<f64> {
    let rho_vac = vacuum_energy(lambda, k)?.rho_vac;
    let v_proper = volume(st, x.region(), VolumeKind::ProperRiemannian)?;
    let interaction = interaction_energy(x.points(), s.points(), pot, st, k)?;
    Ok(rho_vac * v_proper + interaction)
}
