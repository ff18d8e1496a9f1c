//! Dobrushin-style uniqueness certificate on anti-de Sitter slices.
//!
//! On a hyperbolic slice the redshift factor grows like `cosh(aρ)`, so
//! the one-body weight decays as `e^{−θ cosh(aρ)}` — much faster than the
//! `ρ²`-growth of shell volumes.  For a finite-range interaction the
//! influence of a boundary condition beyond radius `kW` on the occupation
//! of the bulk is controlled by the expected number of particles in the
//! separating shell; summing a crude union bound over shells
//!
//! ```text
//! b_k = z · C · (Wk)² · e^{βB} · e^{−θ cosh(a k W)},
//! ```
//!
//! (with `C` a shell-volume constant and `B` the stability constant)
//! gives terms whose product `∏(1 − e^{−b_k}) → 1` double-exponentially.
//! Once a term `t_k = e^{−b_k}` clears `1 − ε`, every Gibbs measure for
//! the specification agrees on bounded local observables up to `ε`, and
//! the remaining terms only tighten the bound: the certificate reports
//! the first shell index where this happens, or declines honestly.
//!
//! Infinite-range interactions fall outside the argument: the verdict is
//! [`UniquenessVerdict::NotCertified`], never a fabricated bound.

use crate::constants::{GasSpec, PhysicalConstants};
use crate::error::{Error, Result};
use crate::geometry::Spacetime;
use crate::gibbs::energy::Potential;

/// Upper exponent before `e^{ln b}` is treated as infinite.
const LOG_B_CAP: f64 = 700.0;

/// Outcome of a certificate attempt.
#[derive(Debug, Clone, PartialEq)]
pub enum UniquenessVerdict {
    /// The shell terms cleared the threshold within the inspected range:
    /// the Gibbs state of the specification is unique.
    CertifiedUnique,
    /// No certificate could be issued; the reason says why (this is an
    /// honest "don't know", not a proof of non-uniqueness).
    NotCertified {
        /// Human-readable explanation.
        reason: String,
    },
}

/// One shell `kW ≤ ρ ≤ (k+1)W` of the certificate sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellTerm {
    /// Shell index `k ≥ 1`.
    pub k_index: u32,
    /// Chart volume of the shell (m³).
    pub chart_volume: f64,
    /// Exponent `b_k` of the influence bound (dimensionless); `+∞` when
    /// the bound underflows to certainty.
    pub bound_exponent: f64,
    /// `t_k = e^{−b_k}`, the per-shell decoupling probability; the
    /// certificate requires `t_k ≥ 1 − ε` for some inspected `k`.
    pub reciprocal_term: f64,
}

/// Full report of a certificate computation.
#[derive(Debug, Clone, PartialEq)]
pub struct UniquenessReport {
    /// Shell width `W` (m) used for the decomposition.
    pub shell_width: f64,
    /// Volume constant `C = sup_k |A_k| / (Wk)²` (m).
    pub c_constant: f64,
    /// Exponent threshold: certification needs `b_k ≤ −ln(1 − ε)`.
    pub threshold: f64,
    /// Inspected shell terms, `k = 1..=k_max` (empty when the potential
    /// already disqualifies the argument).
    pub terms: Vec<ShellTerm>,
    /// First shell index that cleared the threshold, if any.
    pub first_certified_k: Option<u32>,
    /// Verdict.
    pub verdict: UniquenessVerdict,
}

/// Attempts a uniqueness certificate for the gas with interaction `pot`
/// on an anti-de Sitter slice with cosmological constant `lambda < 0`.
///
/// `shell_width` overrides the decomposition width `W` (it must be at
/// least the interaction range so that one shell decouples its two
/// sides); `None` uses the range itself.  `epsilon ∈ (0, 0.5)` is the
/// influence tolerance, and `k_max ≥ 1` bounds how many shells are
/// inspected before giving up.
///
/// # Errors
///
/// * [`Error::Domain`] for `lambda ≥ 0`, a non-positive or too-small
///   `shell_width`, `epsilon` outside `(0, 0.5)`, or `k_max = 0`.
/// * [`Error::Model`] for an ideal gas with no explicit `shell_width`
///   (zero range gives no decomposition scale; uniqueness holds trivially
///   but the caller must pick the scale to certify at).
///
/// An interaction the argument cannot handle (infinite range) is *not*
/// an error: the verdict is [`UniquenessVerdict::NotCertified`].
pub fn uniqueness_certificate(
    pot: &Potential,
    gas: &GasSpec,
    k: &PhysicalConstants,
    lambda: f64,
    shell_width: Option<f64>,
    k_max: u32,
    epsilon: f64,
) -> Result<UniquenessReport> {
    k.validated()?;
    let slice = Spacetime::anti_de_sitter(lambda)?;
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::domain(format!(
            "epsilon must lie in (0, 0.5), got {epsilon}"
        )));
    }
    if k_max == 0 {
        return Err(Error::domain("k_max must be at least 1"));
    }
    let threshold = -(-epsilon).ln_1p(); // −ln(1 − ε) > 0

    let range = pot.range();
    if range.is_infinite() {
        return Ok(UniquenessReport {
            shell_width: f64::NAN,
            c_constant: f64::NAN,
            threshold,
            terms: Vec::new(),
            first_certified_k: None,
            verdict: UniquenessVerdict::NotCertified {
                reason: "the interaction has infinite range, so no shell of finite width \
                         decouples its two sides and the shell argument does not apply"
                    .to_string(),
            },
        });
    }
    let width = match shell_width {
        Some(w) => {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::domain(format!(
                    "shell width must be positive and finite, got {w}"
                )));
            }
            if w < range {
                return Err(Error::domain(format!(
                    "shell width {w} is below the interaction range {range}; shells this \
                     thin do not screen the interaction"
                )));
            }
            w
        }
        None => {
            if range > 0.0 {
                range
            } else {
                return Err(Error::model(
                    "an ideal gas has no interaction range to set the shell width; pass \
                     an explicit shell_width to certify at a chosen scale",
                ));
            }
        }
    };

    let a = slice
        .curvature_a()
        .expect("an anti-de Sitter slice always has a curvature scale");
    let theta = gas.theta(k);
    let beta_b = gas.beta(k) * pot.stability_b;
    let log_z = gas.log_activity(k);

    // |A_k| = (4π/3) W³ ((k+1)³ − k³); C = sup_k |A_k| / (Wk)², attained
    // at k = 1 since (3k² + 3k + 1)/k² decreases in k.
    let shell_volume =
        |kk: f64| 4.0 * std::f64::consts::PI / 3.0 * width.powi(3) * (3.0 * kk * kk + 3.0 * kk + 1.0);
    let mut c_constant = 0.0_f64;
    for kk in 1..=k_max {
        let kk = kk as f64;
        c_constant = c_constant.max(shell_volume(kk) / (width * kk).powi(2));
    }

    let mut terms = Vec::with_capacity(k_max as usize);
    let mut first_certified_k = None;
    for kk in 1..=k_max {
        let kf = kk as f64;
        let log_b = log_z
            + c_constant.ln()
            + 2.0 * (width * kf).ln()
            + beta_b
            - theta * (a * kf * width).cosh();
        let (bound_exponent, reciprocal_term) = if log_b > LOG_B_CAP {
            (f64::INFINITY, 0.0)
        } else {
            let b = log_b.exp();
            (b, (-b).exp())
        };
        terms.push(ShellTerm {
            k_index: kk,
            chart_volume: shell_volume(kf),
            bound_exponent,
            reciprocal_term,
        });
        if first_certified_k.is_none() && bound_exponent <= threshold {
            first_certified_k = Some(kk);
        }
    }

    let verdict = match first_certified_k {
        Some(_) => UniquenessVerdict::CertifiedUnique,
        None => UniquenessVerdict::NotCertified {
            reason: format!(
                "no shell up to k = {k_max} brought the influence exponent below the \
                 threshold {threshold:.3e}; a larger k_max, a colder gas, or a lower \
                 activity may certify"
            ),
        },
    };
    Ok(UniquenessReport {
        shell_width: width,
        c_constant,
        threshold,
        terms,
        first_certified_k,
        verdict,
    })
}
