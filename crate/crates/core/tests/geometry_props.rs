//! Property and oracle tests for the geometry layer.
//!
//! The closed-form lapses, volumes and distances are cross-checked against
//! independent evaluations: 3-D quadrature oracles for the 1-D volume
//! antiderivatives, the exact Boyer–Lindquist composition for the Kerr
//! finite-difference Newtonian potential, and metric/inverse-metric
//! back-substitution.

use proptest::prelude::*;

use relgas_core::constants::{GasSpec, PhysicalConstants};
use relgas_core::geometry::{
    alpha_minus_one_of, alpha_of, alpha_second_deriv_fd, chart_inverse_metric, gamma_of,
    kerr_fermi_to_bl, kerr_newtonian_potential_bl, mass_shell_p0, proper_pair_distance, volume,
    Region, Spacetime, VolumeKind,
};
use relgas_core::quad::integrate_ball_3d;

fn k_nat() -> PhysicalConstants {
    PhysicalConstants::natural()
}

/// The four named curved geometries at unit curvature scale plus flat space.
fn standard_spacetimes() -> Vec<Spacetime> {
    let k = k_nat();
    vec![
        Spacetime::minkowski(),
        Spacetime::einstein_static(3.0).unwrap(),
        Spacetime::de_sitter(3.0).unwrap(),
        Spacetime::anti_de_sitter(-3.0).unwrap(),
        Spacetime::kerr_circular_orbit(1.0, 0.3, 20.0, &k).unwrap(),
    ]
}

/// A chart point guaranteed strictly inside every standard chart
/// (all chart radii are >= 1.0: de Sitter pi/2, Einstein static pi,
/// Kerr 0.1 * 20 = 2).
fn in_chart_point(u: [f64; 3]) -> [f64; 3] {
    let scale = 0.45; // |x| <= 0.45 * sqrt(3) ~ 0.78 < 1
    [u[0] * scale, u[1] * scale, u[2] * scale]
}

proptest! {
    /// The lapse is strictly positive and finite on every chart, and
    /// `gamma_of` is exactly one multiplication on top of it.
    #[test]
    fn alpha_positive_and_gamma_single_multiplication(
        u in prop::array::uniform3(-1.0_f64..1.0),
        mass in 0.5_f64..3.0,
        temperature in 0.05_f64..2.0,
        mu in -2.0_f64..1.0,
    ) {
        let k = k_nat();
        let gas = GasSpec::new(mass, temperature, mu).unwrap();
        let x = in_chart_point(u);
        for st in standard_spacetimes() {
            let alpha = alpha_of(&st, x, &k).unwrap();
            prop_assert!(alpha.is_finite() && alpha > 0.0);
            let gamma = gamma_of(&st, x, &gas, &k).unwrap();
            prop_assert_eq!(gamma, alpha * gas.theta(&k));
            // alpha and alpha - 1 come from the same cancellation-free core.
            let am1 = alpha_minus_one_of(&st, x, &k).unwrap();
            prop_assert_eq!(alpha, 1.0 + am1);
        }
    }

    /// Proper ball volumes from the closed-form antiderivative agree with
    /// a genuinely 3-D quadrature of the volume element.
    #[test]
    fn proper_ball_volume_matches_3d_quadrature(radius in 0.1_f64..1.4) {
        let charts = [
            Spacetime::einstein_static(3.0).unwrap(),
            Spacetime::de_sitter(3.0).unwrap(),
            Spacetime::anti_de_sitter(-3.0).unwrap(),
        ];
        for st in charts {
            if let Some(rc) = st.chart_radius() {
                if radius >= 0.95 * rc {
                    continue;
                }
            }
            let ball = Region::ball(radius).unwrap();
            let closed = volume(&st, &ball, VolumeKind::ProperRiemannian).unwrap();
            let det = |x: [f64; 3]| {
                let rho = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                if rho == 0.0 {
                    1.0
                } else {
                    // (f(rho)/rho)^2 recomputed here independently.
                    let f = match st {
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
                        _ => rho,
                    };
                    (f / rho) * (f / rho)
                }
            };
            let oracle = integrate_ball_3d(det, 0.0, radius, 0.0, 1e-9).unwrap();
            prop_assert!(
                (closed - oracle.value).abs() <= 1e-7 * closed.abs(),
                "spacetime {:?}: closed {} vs quadrature {}",
                st, closed, oracle.value
            );
        }
    }

    /// Proper volume never exceeds chart volume on positively curved
    /// sections, and never falls below it on negatively curved ones.
    #[test]
    fn curvature_sign_orders_volumes(radius in 0.05_f64..1.4) {
        let es = Spacetime::einstein_static(3.0).unwrap();
        let ds = Spacetime::de_sitter(3.0).unwrap();
        let ads = Spacetime::anti_de_sitter(-3.0).unwrap();
        let ball = Region::ball(radius).unwrap();
        let chart = volume(&es, &ball, VolumeKind::ChartLebesgue).unwrap();
        prop_assert!(volume(&es, &ball, VolumeKind::ProperRiemannian).unwrap() <= chart);
        prop_assert!(volume(&ds, &ball, VolumeKind::ProperRiemannian).unwrap() <= chart);
        prop_assert!(volume(&ads, &ball, VolumeKind::ProperRiemannian).unwrap() >= chart);
    }

    /// The mass-shell solver succeeds on valid chart metrics, returns the
    /// negative (positive-energy) branch, and its internal residual check
    /// passes.
    #[test]
    fn mass_shell_solutions_verified(
        u in prop::array::uniform3(-1.0_f64..1.0),
        p in prop::array::uniform3(-5.0_f64..5.0),
        mass in 0.5_f64..3.0,
    ) {
        let k = k_nat();
        let x = in_chart_point(u);
        for st in [
            Spacetime::minkowski(),
            Spacetime::einstein_static(3.0).unwrap(),
            Spacetime::de_sitter(3.0).unwrap(),
            Spacetime::anti_de_sitter(-3.0).unwrap(),
        ] {
            let metric = chart_inverse_metric(&st, x, &k).unwrap();
            let p0 = mass_shell_p0(&metric, p, mass, k.c).unwrap();
            prop_assert!(p0 < 0.0, "p0 = {} should be the negative branch", p0);
            // Massive particles are below the light cone: |p0| >= m c^2 alpha^2 / ...
            // at rest it is exactly -alpha^2 m c^2 / alpha = -alpha m c^2; just
            // check it is bounded away from zero.
            prop_assert!(p0 <= -0.5 * mass * k.c * k.c * alpha_of(&st, x, &k).unwrap());
        }
    }

    /// The chart inverse spatial metric really inverts the radial metric
    /// `g_ij = (f/rho)^2 delta_ij + (1 - (f/rho)^2) xhat_i xhat_j`.
    #[test]
    fn inverse_metric_times_metric_is_identity(u in prop::array::uniform3(-1.0_f64..1.0)) {
        let k = k_nat();
        let x = in_chart_point(u);
        for st in [
            Spacetime::einstein_static(3.0).unwrap(),
            Spacetime::de_sitter(3.0).unwrap(),
            Spacetime::anti_de_sitter(-3.0).unwrap(),
        ] {
            let inv = chart_inverse_metric(&st, x, &k).unwrap();
            let rho = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            let fr2 = if rho == 0.0 {
                1.0
            } else {
                let f = match st {
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
                    _ => rho,
                };
                (f / rho) * (f / rho)
            };
            let mut fwd = [[0.0_f64; 3]; 3];
            for (i, row) in fwd.iter_mut().enumerate() {
                row[i] = fr2;
            }
            if rho > 0.0 {
                let xh = [x[0] / rho, x[1] / rho, x[2] / rho];
                for (i, row) in fwd.iter_mut().enumerate() {
                    for (j, cell) in row.iter_mut().enumerate() {
                        *cell += (1.0 - fr2) * xh[i] * xh[j];
                    }
                }
            }
            for i in 0..3 {
                // `j` walks columns of `fwd`, so indexing is the clear form.
                #[allow(clippy::needless_range_loop)]
                for j in 0..3 {
                    let prod: f64 = (0..3).map(|l| inv.gij[i][l] * fwd[l][j]).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    prop_assert!(
                        (prod - expect).abs() < 1e-12,
                        "({},{}) product {} expect {}", i, j, prod, expect
                    );
                }
            }
        }
    }

    /// Pair distances are symmetric, vanish only at coincidence, satisfy
    /// the triangle inequality, and reduce to radial differences on rays.
    #[test]
    fn pair_distance_is_a_metric(
        u1 in prop::array::uniform3(-1.0_f64..1.0),
        u2 in prop::array::uniform3(-1.0_f64..1.0),
        u3 in prop::array::uniform3(-1.0_f64..1.0),
    ) {
        let k = k_nat();
        let (x1, x2, x3) = (in_chart_point(u1), in_chart_point(u2), in_chart_point(u3));
        for st in standard_spacetimes() {
            let d12 = proper_pair_distance(&st, x1, x2, &k).unwrap();
            let d21 = proper_pair_distance(&st, x2, x1, &k).unwrap();
            prop_assert!((d12 - d21).abs() <= 1e-15 * (1.0 + d12));
            prop_assert!(d12 >= 0.0);
            prop_assert_eq!(proper_pair_distance(&st, x1, x1, &k).unwrap(), 0.0);
            let d13 = proper_pair_distance(&st, x1, x3, &k).unwrap();
            let d32 = proper_pair_distance(&st, x3, x2, &k).unwrap();
            prop_assert!(d12 <= d13 + d32 + 1e-12);
        }
    }

    /// On positively curved sections proper distance is at most pi * R and
    /// shrinks relative to chord length; on hyperbolic sections it grows.
    #[test]
    fn distance_curvature_ordering(
        u1 in prop::array::uniform3(-1.0_f64..1.0),
        u2 in prop::array::uniform3(-1.0_f64..1.0),
    ) {
        let k = k_nat();
        let (x1, x2) = (in_chart_point(u1), in_chart_point(u2));
        let flat = {
            let d = [x1[0] - x2[0], x1[1] - x2[1], x1[2] - x2[2]];
            (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
        };
        let ads = Spacetime::anti_de_sitter(-3.0).unwrap();
        let d_ads = proper_pair_distance(&ads, x1, x2, &k).unwrap();
        prop_assert!(d_ads >= flat - 1e-13);
    }
}

/// The Kerr finite-difference second derivative agrees with the exact
/// Boyer-Lindquist composition of the effective potential: alpha''(0) at
/// chart point x equals (2/m) U(r(x), theta(x)) with the potential taken
/// in the orbit's rotating frame.
#[test]
fn kerr_alpha_second_deriv_matches_exact_composition() {
    let k = k_nat();
    let gas_mass = 1.0;
    let st = Spacetime::kerr_circular_orbit(1.0, 0.3, 20.0, &k).unwrap();
    // Probe points spread through the trust ball (radius 2 here),
    // including off-axis ones.
    let points: [[f64; 3]; 7] = [
        [0.5, 0.0, 0.0],
        [0.0, 0.5, 0.0],
        [0.0, 0.0, 0.5],
        [0.4, -0.3, 0.2],
        [-1.0, 0.7, -0.5],
        [1.2, 1.0, 0.8],
        [0.01, -0.02, 0.005],
    ];
    for x in points {
        let fd = alpha_second_deriv_fd(&st, x, &k).unwrap();
        let (r, theta) = kerr_fermi_to_bl(x, &st, &k, f64::INFINITY).unwrap();
        let exact = 2.0 / gas_mass * kerr_newtonian_potential_bl(r, theta, &st, &k, gas_mass).unwrap();
        let scale = (2.0_f64 / 20.0).max(exact.abs()); // gm/r0 sets the natural scale
        assert!(
            (fd - exact).abs() <= 1e-8 * scale,
            "x = {x:?}: fd {fd:e} vs exact {exact:e}"
        );
    }
}

/// Near the origin the finite-difference potential follows the quadratic
/// tidal form -3GM(x1)^2/(2 r0^3) + GM(x2)^2/(2 r0^3) with no (x3)^2 term,
/// up to the cubic remainder of the chart expansion.
#[test]
fn kerr_alpha_second_deriv_quadratic_near_origin() {
    let k = k_nat();
    let st = Spacetime::kerr_circular_orbit(1.0, 0.3, 20.0, &k).unwrap();
    let (gm, r0) = (1.0, 20.0_f64);
    let s = 0.02; // |x|/r0 = 1e-3: cubic remainder ~ 1e-3 relative
    let fd1 = alpha_second_deriv_fd(&st, [s, 0.0, 0.0], &k).unwrap();
    let expect1 = -3.0 * gm * s * s / r0.powi(3);
    assert!(
        (fd1 - expect1).abs() <= 5e-3 * expect1.abs(),
        "x1 axis: {fd1:e} vs {expect1:e}"
    );
    let fd2 = alpha_second_deriv_fd(&st, [0.0, s, 0.0], &k).unwrap();
    let expect2 = gm * s * s / r0.powi(3);
    assert!(
        (fd2 - expect2).abs() <= 5e-3 * expect2.abs(),
        "x2 axis: {fd2:e} vs {expect2:e}"
    );
    // The x3 direction has no quadratic term: the value there is cubic
    // in s and hence far below the quadratic scale of the other axes.
    let fd3 = alpha_second_deriv_fd(&st, [0.0, 0.0, s], &k).unwrap();
    assert!(
        fd3.abs() <= 5e-3 * expect2.abs(),
        "x3 axis should be cubic-small, got {fd3:e}"
    );
}

/// Trust-radius enforcement: operations reject points at or beyond the
/// trust boundary but accept points just inside.
#[test]
fn kerr_trust_radius_enforced() {
    let k = k_nat();
    let st = Spacetime::kerr_circular_orbit(1.0, 0.3, 20.0, &k).unwrap();
    // Default factor 0.1 -> trust radius 2.
    assert!(alpha_of(&st, [1.99, 0.0, 0.0], &k).is_ok());
    assert!(alpha_of(&st, [2.01, 0.0, 0.0], &k).is_err());
    assert!(alpha_second_deriv_fd(&st, [0.0, 2.01, 0.0], &k).is_err());
    assert!(proper_pair_distance(&st, [0.0; 3], [0.0, 0.0, 2.01], &k).is_err());
    // Wider explicit trust factor admits more.
    let wide = Spacetime::kerr_circular_orbit_with_trust(1.0, 0.3, 20.0, 0.25, &k).unwrap();
    assert!(alpha_of(&wide, [4.0, 0.0, 0.0], &k).is_ok());
}

/// The Kerr chart has no exposed inverse spatial metric.
#[test]
fn kerr_inverse_metric_unavailable() {
    let k = k_nat();
    let st = Spacetime::kerr_circular_orbit(1.0, 0.3, 20.0, &k).unwrap();
    assert!(chart_inverse_metric(&st, [0.1, 0.0, 0.0], &k).is_err());
}
