//! Subcommand implementations: each one pulls the sections it needs from
//! the configuration, runs the corresponding library operation, and
//! packs the result into a [`Report`].

use crate::config::RunConfig;
use crate::output::{emit, json_f64, Cell, Report};
use relgas_core::geometry::{
    alpha_of, alpha_second_deriv_fd, kerr_newtonian_potential_bl,
    kerr_newtonian_potential_fermi, Spacetime,
};
use relgas_core::gibbs::{gcmc_chain, uniqueness_certificate, MoveStats, UniquenessVerdict};
use relgas_core::thermo::{
    ads_pressure_sequence, dust_closure, ideal_gas_report, log_local_intensity,
    newtonian_limit_sweep, tolman_temperature, vacuum_energy,
};
use relgas_core::{Error, Result};
use serde_json::{json, Value};

/// Finite-volume pressure report for the configured gas and region.
pub fn pressure(cfg: &RunConfig) -> Result<Report> {
    let k = cfg.constants()?;
    let gas = cfg.gas()?;
    let st = cfg.spacetime(&k)?;
    let region = cfg.region()?;
    let lambda = cfg.vacuum_lambda(&st);
    let rep = ideal_gas_report(&st, &region, &gas, &k, lambda)?;
    let json = json!({
        "lambda_per_m2": json_f64(lambda),
        "pressure_pa": json_f64(rep.pressure),
        "rho_vac_j_per_m3": json_f64(rep.rho_vac),
        "expected_particles": json_f64(rep.expected_n),
        "weighted_q1_log_ln_m3": json_f64(rep.weighted_q1_log),
        "weighted_q1_m3": rep.weighted_q1_linear.map_or(Value::Null, json_f64),
        "proper_volume_m3": json_f64(rep.proper_volume),
        "chart_volume_m3": json_f64(rep.chart_volume),
        "beta_per_j": json_f64(gas.beta(&k)),
        "theta_rest_energy_over_kt": json_f64(gas.theta(&k)),
    });
    Ok(Report {
        json,
        columns: vec![
            "lambda_per_m2",
            "pressure_pa",
            "rho_vac_j_per_m3",
            "expected_particles",
            "weighted_q1_log_ln_m3",
            "proper_volume_m3",
            "chart_volume_m3",
        ],
        rows: vec![vec![
            Cell::Float(lambda),
            Cell::Float(rep.pressure),
            Cell::Float(rep.rho_vac),
            Cell::Float(rep.expected_n),
            Cell::Float(rep.weighted_q1_log),
            Cell::Float(rep.proper_volume),
            Cell::Float(rep.chart_volume),
        ]],
    })
}

/// Local intensity profile along the first chart axis.
pub fn density_profile(cfg: &RunConfig) -> Result<Report> {
    let k = cfg.constants()?;
    let gas = cfg.gas()?;
    let st = cfg.spacetime(&k)?;
    let grid = cfg.profile_grid()?;
    let mut rows = Vec::with_capacity(grid.len());
    let mut json_rows = Vec::with_capacity(grid.len());
    for &rho in &grid {
        let x = [rho, 0.0, 0.0];
        let alpha = alpha_of(&st, x, &k)?;
        let log_nu = log_local_intensity(&st, x, &gas, &k)?;
        let nu = log_nu.exp();
        rows.push(vec![
            Cell::Float(rho),
            Cell::Float(alpha),
            Cell::Float(log_nu),
            Cell::Float(nu),
        ]);
        json_rows.push(json!({
            "radius_m": json_f64(rho),
            "lapse_alpha": json_f64(alpha),
            "log_intensity_ln_per_m3": json_f64(log_nu),
            "intensity_per_m3": json_f64(nu),
        }));
    }
    Ok(Report {
        json: json!({ "rows": json_rows }),
        columns: vec![
            "radius_m",
            "lapse_alpha",
            "log_intensity_ln_per_m3",
            "intensity_per_m3",
        ],
        rows,
    })
}

/// Newtonian-limit sweep over a grid of light speeds.
pub fn newton_sweep(cfg: &RunConfig) -> Result<Report> {
    let k = cfg.constants()?;
    let gas = cfg.gas()?;
    let st = cfg.spacetime(&k)?;
    let region = cfg.region()?;
    let sweep = cfg
        .newton_sweep
        .as_ref()
        .ok_or_else(|| Error::domain("this command needs a [newton_sweep] section"))?;
    let table = newtonian_limit_sweep(&st, &region, &gas, &k, &sweep.c_values_m_per_s)?;
    let mut rows = Vec::with_capacity(table.len());
    let mut json_rows = Vec::with_capacity(table.len());
    for row in &table {
        rows.push(vec![
            Cell::Float(row.c),
            Cell::Float(row.expected_n_rel),
            Cell::Float(row.expected_n_newt),
            Cell::Float(row.tv_distance),
        ]);
        json_rows.push(json!({
            "c_m_per_s": json_f64(row.c),
            "expected_particles_relativistic": json_f64(row.expected_n_rel),
            "expected_particles_newtonian": json_f64(row.expected_n_newt),
            "tv_distance": json_f64(row.tv_distance),
        }));
    }
    Ok(Report {
        json: json!({ "rows": json_rows }),
        columns: vec![
            "c_m_per_s",
            "expected_particles_relativistic",
            "expected_particles_newtonian",
            "tv_distance",
        ],
        rows,
    })
}

/// Kerr Newtonian potential: finite-difference `α″(0)` against the
/// closed-form tidal quadratic on a symmetric cubic grid, plus the
/// Boyer–Lindquist potential at the orbit itself.
pub fn kerr_potential(cfg: &RunConfig) -> Result<Report> {
    let k = cfg.constants()?;
    let gas = cfg.gas()?;
    let st = cfg.spacetime(&k)?;
    let (central_mass, orbit_radius) = match st {
        Spacetime::KerrCircularOrbit {
            central_mass,
            orbit_radius,
            ..
        } => (central_mass, orbit_radius),
        _ => {
            return Err(Error::domain(
                "kerr-potential needs [spacetime] kind = \"kerr-orbit\"",
            ))
        }
    };
    let grid = cfg
        .kerr_grid
        .as_ref()
        .ok_or_else(|| Error::domain("this command needs a [kerr_grid] section"))?;
    if grid.points_per_axis < 3 || grid.points_per_axis % 2 == 0 {
        return Err(Error::domain(format!(
            "[kerr_grid] points_per_axis must be odd and at least 3, got {}",
            grid.points_per_axis
        )));
    }
    if !(grid.half_extent_m.is_finite() && grid.half_extent_m > 0.0) {
        return Err(Error::domain(format!(
            "[kerr_grid] half_extent_m must be positive and finite, got {}",
            grid.half_extent_m
        )));
    }
    let n = grid.points_per_axis as usize;
    let h = grid.half_extent_m;
    let axis: Vec<f64> = (0..n)
        .map(|i| -h + 2.0 * h * i as f64 / (n - 1) as f64)
        .collect();

    let mut rows = Vec::with_capacity(n * n * n);
    let mut json_rows = Vec::with_capacity(n * n * n);
    for &x1 in &axis {
        for &x2 in &axis {
            for &x3 in &axis {
                let x = [x1, x2, x3];
                let fd = alpha_second_deriv_fd(&st, x, &k)?;
                let u = kerr_newtonian_potential_fermi(x, &st, &k, gas.mass)?;
                let closed = 2.0 * u / gas.mass;
                rows.push(vec![
                    Cell::Float(x1),
                    Cell::Float(x2),
                    Cell::Float(x3),
                    Cell::Float(fd),
                    Cell::Float(closed),
                    Cell::Float(u),
                ]);
                json_rows.push(json!({
                    "x1_m": json_f64(x1),
                    "x2_m": json_f64(x2),
                    "x3_m": json_f64(x3),
                    "alpha_pp_fd_m2_per_s2": json_f64(fd),
                    "alpha_pp_closed_m2_per_s2": json_f64(closed),
                    "u_newton_j": json_f64(u),
                }));
            }
        }
    }
    let u_bl_orbit = kerr_newtonian_potential_bl(
        orbit_radius,
        std::f64::consts::FRAC_PI_2,
        &st,
        &k,
        gas.mass,
    )?;
    Ok(Report {
        json: json!({
            "orbit_radius_m": json_f64(orbit_radius),
            "gm_m3_per_s2": json_f64(k.g_newton * central_mass),
            "u_bl_at_orbit_j": json_f64(u_bl_orbit),
            "rows": json_rows,
        }),
        columns: vec![
            "x1_m",
            "x2_m",
            "x3_m",
            "alpha_pp_fd_m2_per_s2",
            "alpha_pp_closed_m2_per_s2",
            "u_newton_j",
        ],
        rows,
    })
}

/// Anti-de Sitter increasing-ball pressure sequence.
pub fn ads_limit(cfg: &RunConfig) -> Result<Report> {
    let k = cfg.constants()?;
    let gas = cfg.gas()?;
    let st = cfg.spacetime(&k)?;
    let lambda = match st {
        Spacetime::AntiDeSitter { lambda } => lambda,
        _ => {
            return Err(Error::domain(
                "ads-limit needs [spacetime] kind = \"anti-de-sitter\"",
            ))
        }
    };
    let limit = cfg
        .ads_limit
        .as_ref()
        .ok_or_else(|| Error::domain("this command needs an [ads_limit] section"))?;
    let rho_vac = vacuum_energy(lambda, &k)?.rho_vac;
    let table = ads_pressure_sequence(&gas, &k, lambda, limit.r1_m, limit.k_max)?;
    let mut rows = Vec::with_capacity(table.len());
    let mut json_rows = Vec::with_capacity(table.len());
    for row in &table {
        rows.push(vec![
            Cell::Int(u64::from(row.k_index)),
            Cell::Float(row.radius),
            Cell::Float(row.pressure),
        ]);
        json_rows.push(json!({
            "k_index": row.k_index,
            "radius_m": json_f64(row.radius),
            "pressure_pa": json_f64(row.pressure),
        }));
    }
    Ok(Report {
        json: json!({
            "lambda_per_m2": json_f64(lambda),
            "rho_vac_j_per_m3": json_f64(rho_vac),
            "vacuum_pressure_pa": json_f64(-rho_vac),
            "rows": json_rows,
        }),
        columns: vec!["k_index", "radius_m", "pressure_pa"],
        rows,
    })
}

/// Dust-closure temperature: the unique `T` with `k_B T = mc²/2`.
pub fn dust_closure_cmd(cfg: &RunConfig) -> Result<Report> {
    let k = cfg.constants()?;
    let gas = cfg.gas()?;
    let lambda = match (&cfg.vacuum, &cfg.spacetime) {
        (Some(v), _) => v.lambda_per_m2,
        (None, Some(_)) => {
            let st = cfg.spacetime(&k)?;
            cfg.vacuum_lambda(&st)
        }
        (None, None) => {
            return Err(Error::domain(
                "dust-closure needs a [vacuum] or [spacetime] section to fix lambda",
            ))
        }
    };
    let temperature = dust_closure(&gas, &k, lambda)?;
    let k_b_t = k.k_b * temperature;
    let half_rest = 0.5 * gas.mass * k.c * k.c;
    let json = json!({
        "lambda_per_m2": json_f64(lambda),
        "temperature_k": json_f64(temperature),
        "k_b_t_j": json_f64(k_b_t),
        "half_rest_energy_j": json_f64(half_rest),
    });
    Ok(Report {
        json,
        columns: vec![
            "lambda_per_m2",
            "temperature_k",
            "k_b_t_j",
            "half_rest_energy_j",
        ],
        rows: vec![vec![
            Cell::Float(lambda),
            Cell::Float(temperature),
            Cell::Float(k_b_t),
            Cell::Float(half_rest),
        ]],
    })
}

fn move_stats_json(stats: &MoveStats) -> Value {
    json!({
        "attempted": stats.attempted,
        "accepted": stats.accepted,
        "rate": json_f64(stats.rate()),
    })
}

/// Grand-canonical sampling run; the histogram goes to CSV, everything
/// (including retained snapshots) to JSON, and optionally one JSON line
/// per snapshot to `output.samples_path`.
pub fn sample(cfg: &RunConfig) -> Result<Report> {
    let k = cfg.constants()?;
    let gas = cfg.gas()?;
    let st = cfg.spacetime(&k)?;
    let region = cfg.region()?;
    let pot = cfg.potential()?;
    let boundary = cfg.boundary(&region, &st, &k)?;
    let params = cfg.chain_params();
    let run = gcmc_chain(&st, &region, &gas, &k, &pot, &boundary, &params)?;

    let stats = &run.stats;
    let samples_json: Vec<Value> = run
        .samples
        .iter()
        .map(|s| {
            json!({
                "sweep_index": s.sweep_index,
                "particles": s.points.len(),
                "points_m": s.points,
            })
        })
        .collect();
    if let Some(path) = &cfg.output.samples_path {
        let mut lines = String::new();
        for record in &samples_json {
            lines.push_str(&serde_json::to_string(record).map_err(|e| {
                Error::domain(format!("cannot serialize a sample record: {e}"))
            })?);
            lines.push('\n');
        }
        emit(&lines, Some(path))?;
    }

    let rows: Vec<Vec<Cell>> = stats
        .histogram
        .iter()
        .enumerate()
        .map(|(n, count)| vec![Cell::Int(n as u64), Cell::Int(*count)])
        .collect();
    Ok(Report {
        json: json!({
            "seed": stats.seed,
            "sweeps": stats.sweeps,
            "burn_in": stats.burn_in,
            "moves_per_sweep": stats.moves_per_sweep,
            "birth": move_stats_json(&stats.birth),
            "death": move_stats_json(&stats.death),
            "translate": move_stats_json(&stats.translate),
            "histogram_sweeps": stats.histogram,
            "mean_particles": json_f64(stats.mean_n),
            "std_error_particles": json_f64(stats.std_error_n),
            "batches": stats.batches,
            "samples": samples_json,
        }),
        columns: vec!["occupation_n", "sweeps_observed"],
        rows,
    })
}

/// Uniqueness certificate for the configured potential on an anti-de
/// Sitter slice.
pub fn uniqueness_check(cfg: &RunConfig) -> Result<Report> {
    let k = cfg.constants()?;
    let gas = cfg.gas()?;
    let pot = cfg.potential()?;
    let lambda = match (&cfg.vacuum, &cfg.spacetime) {
        (Some(v), _) => v.lambda_per_m2,
        (None, Some(_)) => {
            let st = cfg.spacetime(&k)?;
            cfg.vacuum_lambda(&st)
        }
        (None, None) => {
            return Err(Error::domain(
                "uniqueness-check needs a [vacuum] or [spacetime] section to fix lambda",
            ))
        }
    };
    let u = cfg.uniqueness.clone().unwrap_or_default();
    let report = uniqueness_certificate(
        &pot,
        &gas,
        &k,
        lambda,
        u.shell_width_m,
        u.k_max,
        u.epsilon,
    )?;

    let (verdict, reason) = match &report.verdict {
        UniquenessVerdict::CertifiedUnique => ("certified-unique", Value::Null),
        UniquenessVerdict::NotCertified { reason } => {
            ("not-certified", Value::String(reason.clone()))
        }
    };
    let mut rows = Vec::with_capacity(report.terms.len());
    let mut json_terms = Vec::with_capacity(report.terms.len());
    for t in &report.terms {
        rows.push(vec![
            Cell::Int(u64::from(t.k_index)),
            Cell::Float(t.chart_volume),
            Cell::Float(t.bound_exponent),
            Cell::Float(t.reciprocal_term),
        ]);
        json_terms.push(json!({
            "k_index": t.k_index,
            "chart_volume_m3": json_f64(t.chart_volume),
            "bound_exponent": json_f64(t.bound_exponent),
            "reciprocal_term": json_f64(t.reciprocal_term),
        }));
    }
    Ok(Report {
        json: json!({
            "lambda_per_m2": json_f64(lambda),
            "shell_width_m": json_f64(report.shell_width),
            "c_constant_m": json_f64(report.c_constant),
            "threshold": json_f64(report.threshold),
            "first_certified_k": report.first_certified_k,
            "verdict": verdict,
            "reason": reason,
            "terms": json_terms,
        }),
        columns: vec![
            "k_index",
            "chart_volume_m3",
            "bound_exponent",
            "reciprocal_term",
        ],
        rows,
    })
}

/// Tolman temperature profile along the first chart axis.
pub fn tolman(cfg: &RunConfig) -> Result<Report> {
    let k = cfg.constants()?;
    let gas = cfg.gas()?;
    let st = cfg.spacetime(&k)?;
    let grid = cfg.profile_grid()?;
    let mut rows = Vec::with_capacity(grid.len());
    let mut json_rows = Vec::with_capacity(grid.len());
    for &rho in &grid {
        let x = [rho, 0.0, 0.0];
        let alpha = alpha_of(&st, x, &k)?;
        let t_local = tolman_temperature(&st, x, gas.temperature, &k)?;
        rows.push(vec![
            Cell::Float(rho),
            Cell::Float(alpha),
            Cell::Float(t_local),
        ]);
        json_rows.push(json!({
            "radius_m": json_f64(rho),
            "lapse_alpha": json_f64(alpha),
            "tolman_temperature_k": json_f64(t_local),
        }));
    }
    Ok(Report {
        json: json!({
            "worldline_temperature_k": json_f64(gas.temperature),
            "rows": json_rows,
        }),
        columns: vec!["radius_m", "lapse_alpha", "tolman_temperature_k"],
        rows,
    })
}
