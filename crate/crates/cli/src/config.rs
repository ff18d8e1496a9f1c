//! Run configuration: a TOML file of typed, unit-suffixed tables, merged
//! with command-line overrides *before* deserialization so that a flag
//! and a file key are literally the same setting.
//!
//! Every table rejects unknown keys — a typo in a config file is a
//! validation error, not a silently ignored setting.  All physical
//! quantities carry their SI unit in the key name (`mass_kg`,
//! `lambda_per_m2`, …); changing unit conventions means changing the key,
//! which keeps experiment records self-describing.

use relgas_core::constants::{GasSpec, PhysicalConstants};
use relgas_core::geometry::{Region, Spacetime};
use relgas_core::gibbs::{
    BoundaryCondition, ChainParams, PairPotential, Potential, TripletPotential,
};
use relgas_core::{Error, Result};
use serde::Deserialize;

/// The full run configuration; every section is optional at parse time
/// and demanded by the subcommands that need it.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Physical constants; defaults to SI values.
    #[serde(default)]
    pub constants: ConstantsConfig,
    /// Gas species.
    pub gas: Option<GasConfig>,
    /// Background spacetime.
    pub spacetime: Option<SpacetimeConfig>,
    /// Vacuum-energy bookkeeping (cosmological constant for the pressure
    /// and conditional-energy terms).
    pub vacuum: Option<VacuumConfig>,
    /// Spatial region.
    pub region: Option<RegionConfig>,
    /// Interaction potential; absent means the ideal gas.
    pub potential: Option<PotentialConfig>,
    /// Monte Carlo run parameters.
    pub sampler: Option<SamplerConfig>,
    /// Output format and destination.
    #[serde(default)]
    pub output: OutputConfig,
    /// Radial grid for profile commands.
    pub profile: Option<ProfileConfig>,
    /// Light-speed grid for the Newtonian-limit sweep.
    pub newton_sweep: Option<NewtonSweepConfig>,
    /// Increasing-ball sequence for the anti-de Sitter pressure limit.
    pub ads_limit: Option<AdsLimitConfig>,
    /// Uniqueness-certificate parameters.
    pub uniqueness: Option<UniquenessConfig>,
    /// Cubic evaluation grid for the Kerr potential table.
    pub kerr_grid: Option<KerrGridConfig>,
}

/// `[constants]` — SI by default; `natural_units = true` switches every
/// constant to 1, and explicit keys override either baseline.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    /// Start from `c = ħ = G = k_B = 1` instead of SI values.
    #[serde(default)]
    pub natural_units: bool,
    /// Speed of light (m/s).
    pub c_m_per_s: Option<f64>,
    /// Reduced Planck constant (J·s).
    pub hbar_j_s: Option<f64>,
    /// Newton constant (m³/(kg·s²)).
    pub g_newton_m3_per_kg_s2: Option<f64>,
    /// Boltzmann constant (J/K).
    pub k_b_j_per_k: Option<f64>,
}

/// `[gas]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasConfig {
    /// Particle rest mass (kg).
    pub mass_kg: f64,
    /// Temperature on the observer worldline (K).
    pub temperature_k: f64,
    /// Chemical potential (J); defaults to 0.
    #[serde(default)]
    pub chemical_potential_j: f64,
}

/// `[spacetime]` — `kind` selects the background, the remaining keys must
/// match it.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacetimeConfig {
    /// One of `minkowski`, `einstein-static`, `de-sitter`,
    /// `anti-de-sitter`, `kerr-orbit`.
    pub kind: String,
    /// Cosmological constant (1/m²) for the maximally symmetric kinds.
    pub lambda_per_m2: Option<f64>,
    /// Kerr central mass (kg).
    pub central_mass_kg: Option<f64>,
    /// Kerr specific angular momentum `a = J/(Mc)` times `c` (m²/s).
    pub spin_m2_per_s: Option<f64>,
    /// Kerr orbit radius (Boyer–Lindquist, m).
    pub orbit_radius_m: Option<f64>,
    /// Kerr chart trust factor in `(0, 0.5]`; defaults to 0.1.
    pub trust_radius_factor: Option<f64>,
}

/// `[vacuum]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VacuumConfig {
    /// Cosmological constant entering the vacuum energy density
    /// `λc⁴/8πG` (1/m²).
    pub lambda_per_m2: f64,
}

/// `[region]` — `kind` selects the shape.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    /// One of `ball`, `shell`, `box`.
    pub kind: String,
    /// Ball radius (m).
    pub radius_m: Option<f64>,
    /// Shell inner radius (m).
    pub inner_m: Option<f64>,
    /// Shell outer radius (m).
    pub outer_m: Option<f64>,
    /// Box half-extents (m).
    pub half_extents_m: Option<[f64; 3]>,
}

/// `[potential]` — `kind` selects the pair interaction.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    /// One of `ideal`, `hard-core`, `square-well`, `inverse-power`.
    pub kind: String,
    /// Hard-core radius (m) for `hard-core` and `square-well`.
    pub core_radius_m: Option<f64>,
    /// Well range (m) for `square-well`.
    pub range_m: Option<f64>,
    /// Well depth (J) for `square-well`.
    pub depth_j: Option<f64>,
    /// Prefactor (J) for `inverse-power`.
    pub strength_j: Option<f64>,
    /// Exponent for `inverse-power`.
    pub exponent: Option<f64>,
    /// Length scale (m) for `inverse-power`.
    pub scale_m: Option<f64>,
    /// Superstability constant `B ≥ 0` (J); defaults to 0.
    #[serde(default)]
    pub stability_b_j: f64,
    /// Optional three-body term.
    pub triplet: Option<TripletConfig>,
}

/// `[potential.triplet]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripletConfig {
    /// Energy of each close triple (J).
    pub strength_j: f64,
    /// Proper-distance range (m) within which a triple counts.
    pub range_m: f64,
}

/// `[sampler]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerConfig {
    /// RNG seed; defaults to 0.
    #[serde(default)]
    pub seed: u64,
    /// Recorded sweeps; defaults to 1000.
    #[serde(default = "default_sweeps")]
    pub sweeps: u64,
    /// Burn-in sweeps; defaults to 100.
    #[serde(default = "default_burn_in")]
    pub burn_in: u64,
    /// Moves per sweep; defaults to 50.
    #[serde(default = "default_moves_per_sweep")]
    pub moves_per_sweep: u32,
    /// Snapshot cadence (0 = keep none); defaults to 0.
    #[serde(default)]
    pub keep_every: u64,
    /// Translation step radius (m); defaults to a quarter of the region
    /// circumradius.
    pub translate_step_m: Option<f64>,
    /// Boundary-condition particles (chart coordinates, m), outside the
    /// region.
    #[serde(default)]
    pub boundary_points_m: Vec<[f64; 3]>,
}

fn default_sweeps() -> u64 {
    1000
}
fn default_burn_in() -> u64 {
    100
}
fn default_moves_per_sweep() -> u32 {
    50
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            sweeps: default_sweeps(),
            burn_in: default_burn_in(),
            moves_per_sweep: default_moves_per_sweep(),
            keep_every: 0,
            translate_step_m: None,
            boundary_points_m: Vec::new(),
        }
    }
}

/// `[output]`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// `json` (default) or `csv`.
    pub format: Option<String>,
    /// Destination file; stdout when absent.
    pub path: Option<String>,
    /// Optional extra sink for `sample`: one JSON record per retained
    /// sweep (line-delimited).
    pub samples_path: Option<String>,
}

/// `[profile]` — radial grid along the first chart axis.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    /// Innermost radius (m); defaults to 0.
    #[serde(default)]
    pub r_min_m: f64,
    /// Outermost radius (m).
    pub r_max_m: f64,
    /// Number of grid points (≥ 2).
    pub points: u32,
}

/// `[newton_sweep]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewtonSweepConfig {
    /// Strictly increasing light speeds (m/s) to sweep.
    pub c_values_m_per_s: Vec<f64>,
}

/// `[ads_limit]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdsLimitConfig {
    /// Radius of the first ball (m).
    pub r1_m: f64,
    /// Number of balls.
    pub k_max: u32,
}

/// `[uniqueness]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniquenessConfig {
    /// Shell width (m); defaults to the interaction range.
    pub shell_width_m: Option<f64>,
    /// Shells to inspect; defaults to 8.
    #[serde(default = "default_k_max")]
    pub k_max: u32,
    /// Influence tolerance in `(0, 0.5)`; defaults to 1e-6.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

impl Default for UniquenessConfig {
    fn default() -> Self {
        Self {
            shell_width_m: None,
            k_max: default_k_max(),
            epsilon: default_epsilon(),
        }
    }
}

fn default_k_max() -> u32 {
    8
}
fn default_epsilon() -> f64 {
    1e-6
}

/// `[kerr_grid]` — symmetric cubic grid for the potential table.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KerrGridConfig {
    /// Half-extent of the cube along each axis (m).
    pub half_extent_m: f64,
    /// Points per axis (odd, ≥ 3, so the grid is symmetric and contains
    /// the origin); defaults to 5.
    #[serde(default = "default_points_per_axis")]
    pub points_per_axis: u32,
}

fn default_points_per_axis() -> u32 {
    5
}

impl RunConfig {
    /// Loads a configuration: optional TOML file, then dotted-path
    /// overrides applied on the raw table before typed deserialization.
    pub fn load(path: Option<&std::path::Path>, overrides: &[(String, String)]) -> Result<Self> {
        let mut table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    Error::domain(format!("cannot read config file {}: {e}", p.display()))
                })?;
                text.parse::<toml::Table>().map_err(|e| {
                    Error::domain(format!("config file {} is not valid TOML: {e}", p.display()))
                })?
            }
            None => toml::Table::new(),
        };
        for (key, value) in overrides {
            set_dotted(&mut table, key, value)?;
        }
        RunConfig::deserialize(toml::Value::Table(table))
            .map_err(|e| Error::domain(format!("invalid configuration: {e}")))
    }

    /// The physical constants, validated.
    pub fn constants(&self) -> Result<PhysicalConstants> {
        let base = if self.constants.natural_units {
            PhysicalConstants::natural()
        } else {
            PhysicalConstants::SI
        };
        let k = PhysicalConstants {
            c: self.constants.c_m_per_s.unwrap_or(base.c),
            hbar: self.constants.hbar_j_s.unwrap_or(base.hbar),
            g_newton: self.constants.g_newton_m3_per_kg_s2.unwrap_or(base.g_newton),
            k_b: self.constants.k_b_j_per_k.unwrap_or(base.k_b),
        };
        k.validated()?;
        Ok(k)
    }

    /// The gas section, demanded.
    pub fn gas(&self) -> Result<GasSpec> {
        let g = self
            .gas
            .as_ref()
            .ok_or_else(|| Error::domain("this command needs a [gas] section"))?;
        GasSpec::new(g.mass_kg, g.temperature_k, g.chemical_potential_j)
    }

    /// The spacetime section, demanded and validated against the
    /// constants.
    pub fn spacetime(&self, k: &PhysicalConstants) -> Result<Spacetime> {
        let s = self
            .spacetime
            .as_ref()
            .ok_or_else(|| Error::domain("this command needs a [spacetime] section"))?;
        let forbid = |name: &str, set: bool| -> Result<()> {
            if set {
                return Err(Error::domain(format!(
                    "[spacetime] key {name} does not apply to kind = \"{}\"",
                    s.kind
                )));
            }
            Ok(())
        };
        let lambda = || {
            s.lambda_per_m2.ok_or_else(|| {
                Error::domain(format!(
                    "[spacetime] kind = \"{}\" needs lambda_per_m2",
                    s.kind
                ))
            })
        };
        let kerr_keys_unset = || -> Result<()> {
            forbid("central_mass_kg", s.central_mass_kg.is_some())?;
            forbid("spin_m2_per_s", s.spin_m2_per_s.is_some())?;
            forbid("orbit_radius_m", s.orbit_radius_m.is_some())?;
            forbid("trust_radius_factor", s.trust_radius_factor.is_some())
        };
        match s.kind.as_str() {
            "minkowski" => {
                forbid("lambda_per_m2", s.lambda_per_m2.is_some())?;
                kerr_keys_unset()?;
                Ok(Spacetime::minkowski())
            }
            "einstein-static" => {
                kerr_keys_unset()?;
                Spacetime::einstein_static(lambda()?)
            }
            "de-sitter" => {
                kerr_keys_unset()?;
                Spacetime::de_sitter(lambda()?)
            }
            "anti-de-sitter" => {
                kerr_keys_unset()?;
                Spacetime::anti_de_sitter(lambda()?)
            }
            "kerr-orbit" => {
                forbid("lambda_per_m2", s.lambda_per_m2.is_some())?;
                let mass = s.central_mass_kg.ok_or_else(|| {
                    Error::domain("[spacetime] kind = \"kerr-orbit\" needs central_mass_kg")
                })?;
                let spin = s.spin_m2_per_s.ok_or_else(|| {
                    Error::domain("[spacetime] kind = \"kerr-orbit\" needs spin_m2_per_s")
                })?;
                let r0 = s.orbit_radius_m.ok_or_else(|| {
                    Error::domain("[spacetime] kind = \"kerr-orbit\" needs orbit_radius_m")
                })?;
                match s.trust_radius_factor {
                    Some(f) => Spacetime::kerr_circular_orbit_with_trust(mass, spin, r0, f, k),
                    None => Spacetime::kerr_circular_orbit(mass, spin, r0, k),
                }
            }
            other => Err(Error::domain(format!(
                "unknown spacetime kind \"{other}\"; expected minkowski, einstein-static, \
                 de-sitter, anti-de-sitter, or kerr-orbit"
            ))),
        }
    }

    /// The cosmological constant for vacuum-energy bookkeeping: the
    /// `[vacuum]` table when present, else the geometric λ of the
    /// spacetime (0 for Minkowski and the Kerr chart).
    pub fn vacuum_lambda(&self, st: &Spacetime) -> f64 {
        if let Some(v) = &self.vacuum {
            return v.lambda_per_m2;
        }
        match *st {
            Spacetime::EinsteinStatic { lambda }
            | Spacetime::DeSitter { lambda }
            | Spacetime::AntiDeSitter { lambda } => lambda,
            Spacetime::Minkowski | Spacetime::KerrCircularOrbit { .. } => 0.0,
        }
    }

    /// The region section, demanded (validation against the chart happens
    /// in the core operations).
    pub fn region(&self) -> Result<Region> {
        let r = self
            .region
            .as_ref()
            .ok_or_else(|| Error::domain("this command needs a [region] section"))?;
        let forbid = |name: &str, set: bool| -> Result<()> {
            if set {
                return Err(Error::domain(format!(
                    "[region] key {name} does not apply to kind = \"{}\"",
                    r.kind
                )));
            }
            Ok(())
        };
        match r.kind.as_str() {
            "ball" => {
                forbid("inner_m", r.inner_m.is_some())?;
                forbid("outer_m", r.outer_m.is_some())?;
                forbid("half_extents_m", r.half_extents_m.is_some())?;
                let radius = r
                    .radius_m
                    .ok_or_else(|| Error::domain("[region] kind = \"ball\" needs radius_m"))?;
                Region::ball(radius)
            }
            "shell" => {
                forbid("radius_m", r.radius_m.is_some())?;
                forbid("half_extents_m", r.half_extents_m.is_some())?;
                let inner = r
                    .inner_m
                    .ok_or_else(|| Error::domain("[region] kind = \"shell\" needs inner_m"))?;
                let outer = r
                    .outer_m
                    .ok_or_else(|| Error::domain("[region] kind = \"shell\" needs outer_m"))?;
                Region::shell(inner, outer)
            }
            "box" => {
                forbid("radius_m", r.radius_m.is_some())?;
                forbid("inner_m", r.inner_m.is_some())?;
                forbid("outer_m", r.outer_m.is_some())?;
                let he = r.half_extents_m.ok_or_else(|| {
                    Error::domain("[region] kind = \"box\" needs half_extents_m")
                })?;
                Region::cuboid(he)
            }
            other => Err(Error::domain(format!(
                "unknown region kind \"{other}\"; expected ball, shell, or box"
            ))),
        }
    }

    /// The interaction potential; an absent `[potential]` section is the
    /// ideal gas.
    pub fn potential(&self) -> Result<Potential> {
        let Some(p) = &self.potential else {
            return Ok(Potential::ideal());
        };
        let forbid = |name: &str, set: bool| -> Result<()> {
            if set {
                return Err(Error::domain(format!(
                    "[potential] key {name} does not apply to kind = \"{}\"",
                    p.kind
                )));
            }
            Ok(())
        };
        let need = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| {
                Error::domain(format!("[potential] kind = \"{}\" needs {name}", p.kind))
            })
        };
        let pair = match p.kind.as_str() {
            "ideal" => {
                forbid("core_radius_m", p.core_radius_m.is_some())?;
                forbid("range_m", p.range_m.is_some())?;
                forbid("depth_j", p.depth_j.is_some())?;
                forbid("strength_j", p.strength_j.is_some())?;
                forbid("exponent", p.exponent.is_some())?;
                forbid("scale_m", p.scale_m.is_some())?;
                PairPotential::None
            }
            "hard-core" => {
                forbid("range_m", p.range_m.is_some())?;
                forbid("depth_j", p.depth_j.is_some())?;
                forbid("strength_j", p.strength_j.is_some())?;
                forbid("exponent", p.exponent.is_some())?;
                forbid("scale_m", p.scale_m.is_some())?;
                PairPotential::HardCore {
                    core_radius: need("core_radius_m", p.core_radius_m)?,
                }
            }
            "square-well" => {
                forbid("strength_j", p.strength_j.is_some())?;
                forbid("exponent", p.exponent.is_some())?;
                forbid("scale_m", p.scale_m.is_some())?;
                PairPotential::SquareWell {
                    core_radius: need("core_radius_m", p.core_radius_m)?,
                    range: need("range_m", p.range_m)?,
                    depth: need("depth_j", p.depth_j)?,
                }
            }
            "inverse-power" => {
                forbid("core_radius_m", p.core_radius_m.is_some())?;
                forbid("range_m", p.range_m.is_some())?;
                forbid("depth_j", p.depth_j.is_some())?;
                PairPotential::InversePower {
                    strength: need("strength_j", p.strength_j)?,
                    exponent: need("exponent", p.exponent)?,
                    scale: need("scale_m", p.scale_m)?,
                }
            }
            other => {
                return Err(Error::domain(format!(
                    "unknown potential kind \"{other}\"; expected ideal, hard-core, \
                     square-well, or inverse-power"
                )))
            }
        };
        let triplet = p.triplet.as_ref().map(|t| TripletPotential {
            strength: t.strength_j,
            range: t.range_m,
        });
        Potential::new(pair, triplet, p.stability_b_j)
    }

    /// Chain parameters from `[sampler]` (defaults when absent).
    pub fn chain_params(&self) -> ChainParams {
        let s = self.sampler.clone().unwrap_or_default();
        ChainParams {
            seed: s.seed,
            sweeps: s.sweeps,
            burn_in: s.burn_in,
            moves_per_sweep: s.moves_per_sweep,
            keep_every: s.keep_every,
            translate_step: s.translate_step_m,
        }
    }

    /// Boundary condition from `[sampler].boundary_points_m`, validated
    /// against the region and chart.
    pub fn boundary(
        &self,
        region: &Region,
        st: &Spacetime,
        k: &PhysicalConstants,
    ) -> Result<BoundaryCondition> {
        match &self.sampler {
            Some(s) if !s.boundary_points_m.is_empty() => {
                BoundaryCondition::new(s.boundary_points_m.clone(), region, st, k)
            }
            _ => Ok(BoundaryCondition::empty()),
        }
    }

    /// The profile grid, demanded.
    pub fn profile_grid(&self) -> Result<Vec<f64>> {
        let p = self
            .profile
            .as_ref()
            .ok_or_else(|| Error::domain("this command needs a [profile] section"))?;
        if !(p.r_min_m >= 0.0 && p.r_max_m > p.r_min_m && p.r_max_m.is_finite()) {
            return Err(Error::domain(format!(
                "[profile] needs 0 <= r_min_m < r_max_m < inf, got [{}, {}]",
                p.r_min_m, p.r_max_m
            )));
        }
        if p.points < 2 {
            return Err(Error::domain("[profile] needs at least 2 points"));
        }
        let n = p.points as usize;
        let step = (p.r_max_m - p.r_min_m) / (n - 1) as f64;
        Ok((0..n).map(|i| p.r_min_m + i as f64 * step).collect())
    }
}

/// Sets `table[path...] = value` for a dotted path like
/// `gas.mass_kg = 2.0`, creating intermediate tables as needed.  The
/// value string is parsed as a TOML literal (numbers, booleans, arrays,
/// quoted strings); anything that does not parse becomes a bare string,
/// so `--set spacetime.kind=minkowski` works without quoting.
fn set_dotted(table: &mut toml::Table, key: &str, value: &str) -> Result<()> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::domain(format!(
            "invalid override key \"{key}\": empty path segment"
        )));
    }
    let parsed = parse_toml_literal(value);
    let mut current = table;
    for part in &parts[..parts.len() - 1] {
        let entry = current
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        current = entry.as_table_mut().ok_or_else(|| {
            Error::domain(format!(
                "override key \"{key}\" descends into non-table entry \"{part}\""
            ))
        })?;
    }
    current.insert(parts[parts.len() - 1].to_string(), parsed);
    Ok(())
}

/// Parses a TOML value literal, falling back to a plain string.
fn parse_toml_literal(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("the document defines v"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}
