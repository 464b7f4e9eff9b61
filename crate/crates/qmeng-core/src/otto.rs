//! The four-node thermal Otto baseline: node energies, per-leg work/heat,
//! efficiency, duration bounds, and the power model with its maximum.
//!
//! Cycle legs: 0->1 adiabatic compression (work out), 1->2 hot contact
//! (heat in), 2->3 adiabatic expansion, 3->0 cold contact (heat out).

use serde::{Deserialize, Serialize};

use crate::error::{check, Result};
use crate::numerics::golden_section_max;

/// Mean energies at the four cycle nodes plus the per-leg exchanges.
///
/// Energies are in units of mu*Bz(1); all exchanges are carried as positive
/// numbers in their stated direction (W01 out, Q12 in, W23 in, Q30 out), so
/// first-law closure reads W01 + Q30 = Q12 + W23.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleLedger {
    pub node_energies: [f64; 4],
    #[serde(rename = "W01")]
    pub w01: f64,
    #[serde(rename = "Q12")]
    pub q12: f64,
    #[serde(rename = "W23")]
    pub w23: f64,
    #[serde(rename = "Q30")]
    pub q30: f64,
    pub efficiency: f64,
}

impl CycleLedger {
    /// Residual of W01 + Q30 = Q12 + W23, relative to the ledger scale.
    pub fn closure_residual(&self) -> f64 {
        let lhs = self.w01 + self.q30;
        let rhs = self.q12 + self.w23;
        let scale = lhs.abs().max(rhs.abs()).max(1e-300);
        (lhs - rhs).abs() / scale
    }
}

/// Lower bounds on the stroke durations, in units of hbar/(mu*Bz(1)).
///
/// `adiabatic_lower` bounds the slow field ramps; `qsl_lower` is the
/// energy-time speed limit. `total_cycle_time` is their sum, the time model
/// under the power law (heat exchanges are taken as instantaneous). At b = 1
/// the speed limit diverges and both it and the total saturate to infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DurationBounds {
    pub adiabatic_lower: f64,
    pub qsl_lower: f64,
    pub total_cycle_time: f64,
}

/// Ledger of the thermal Otto cycle at compression ratio `b` and cold-bath
/// polarization p+ - p-.
pub fn otto_ledger(b: f64, polarization: f64) -> Result<CycleLedger> {
    check(b > 0.0 && b <= 1.0, "b", b, "must lie in (0, 1]")?;
    check(
        (0.0..=1.0).contains(&polarization),
        "polarization",
        polarization,
        "must lie in [0, 1]",
    )?;
    Ok(CycleLedger {
        node_energies: [-b * polarization, -polarization, 0.0, 0.0],
        w01: (1.0 - b) * polarization,
        q12: polarization,
        w23: 0.0,
        q30: b * polarization,
        efficiency: otto_efficiency(b),
    })
}

/// Otto efficiency 1 - b.
pub fn otto_efficiency(b: f64) -> f64 {
    1.0 - b
}

/// Duration bounds at compression ratio `b`.
///
/// `adiabatic_safety` scales the adiabatic lower bound (the slow-ramp
/// condition is an inequality; 1.0 uses the bound itself, which is what the
/// power law assumes).
pub fn duration_bounds(b: f64, adiabatic_safety: f64) -> Result<DurationBounds> {
    check(b > 0.0 && b <= 1.0, "b", b, "must lie in (0, 1]")?;
    check(
        adiabatic_safety >= 1.0,
        "adiabatic_safety",
        adiabatic_safety,
        "must be >= 1",
    )?;
    let adiabatic_lower = adiabatic_safety * (1.0 / b - 1.0);
    let qsl_lower = if b < 1.0 {
        1.0 / (1.0 - b)
    } else {
        f64::INFINITY
    };
    Ok(DurationBounds {
        adiabatic_lower,
        qsl_lower,
        total_cycle_time: adiabatic_lower + qsl_lower,
    })
}

/// Output power as a fraction of P_max: b(1-b)^2 / (b + (1-b)^2).
pub fn otto_power(b: f64) -> f64 {
    let r = 1.0 - b;
    b * r * r / (b + r * r)
}

/// Power normalization P_max in units of (mu*Bz(1))^2/hbar.
pub fn p_max(polarization: f64) -> f64 {
    polarization
}

const B_BRACKET: (f64, f64) = (1e-6, 1.0 - 1e-6);
const B_TOL: f64 = 1e-8;

/// Argmax and maximum of [`otto_power`] over b in (0, 1).
pub fn maximize_otto_power() -> Result<(f64, f64)> {
    golden_section_max(otto_power, B_BRACKET.0, B_BRACKET.1, B_TOL)
}

pub(crate) fn maximize_on_b<F: Fn(f64) -> f64>(f: F) -> Result<(f64, f64)> {
    golden_section_max(f, B_BRACKET.0, B_BRACKET.1, B_TOL)
}
