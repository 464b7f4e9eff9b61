//! The measurement-driven cycle: its ledger, the three efficiency formulas,
//! the corrected power law, and the gamma sweeps behind the trade-off
//! figures.
//!
//! Replacing hot-bath contact with the pulse feeds heat
//! Q12 = 2 sin^2(theta) sin^2(omega t0) (per unit mu*Bz(1)*(p+ - p-)) into
//! the spin, at the price of the radiated record. The record cost Gamma
//! enters the corrected efficiency as gamma^{-1} Gamma and the finite pulse
//! time enters the corrected power as gamma*b*(1-b) in the denominator.

use serde::{Deserialize, Serialize};

use crate::error::{check, Result};
use crate::model::DimensionlessGroups;
use crate::otto::{maximize_on_b, otto_efficiency, CycleLedger};

/// One operating point of the measurement cycle. `gamma_value` is the record
/// cost Gamma, either computed by the radiation module or supplied directly
/// (the final formulas treat it as a free cost parameter).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementCyclePoint {
    pub b: f64,
    pub cos_theta: f64,
    pub omega_t0: f64,
    pub gamma: f64,
    pub polarization: f64,
    pub gamma_value: f64,
}

impl MeasurementCyclePoint {
    pub fn new(
        b: f64,
        cos_theta: f64,
        omega_t0: f64,
        gamma: f64,
        polarization: f64,
        gamma_value: f64,
    ) -> Result<Self> {
        let point = Self {
            b,
            cos_theta,
            omega_t0,
            gamma,
            polarization,
            gamma_value,
        };
        point.validate()?;
        Ok(point)
    }

    /// Point with gamma derived from the groups and Gamma supplied.
    pub fn from_groups(groups: &DimensionlessGroups, gamma_value: f64) -> Result<Self> {
        groups.validate()?;
        Self::new(
            groups.b,
            groups.cos_theta,
            groups.omega_t0,
            groups.gamma,
            groups.polarization,
            gamma_value,
        )
    }

    pub fn validate(&self) -> Result<()> {
        check(
            self.b > 0.0 && self.b <= 1.0,
            "b",
            self.b,
            "must lie in (0, 1]",
        )?;
        check(
            self.cos_theta > 0.0 && self.cos_theta <= 1.0,
            "cos_theta",
            self.cos_theta,
            "must lie in (0, 1]",
        )?;
        check(
            self.omega_t0 > 0.0,
            "omega_t0",
            self.omega_t0,
            "must be > 0",
        )?;
        check(self.gamma > 0.0, "gamma", self.gamma, "must be > 0")?;
        check(
            (0.0..=1.0).contains(&self.polarization),
            "polarization",
            self.polarization,
            "must lie in [0, 1]",
        )?;
        check(
            self.gamma_value >= 0.0,
            "gamma_value",
            self.gamma_value,
            "must be >= 0",
        )
    }

    pub fn sin_theta(&self) -> f64 {
        (1.0 - self.cos_theta * self.cos_theta).max(0.0).sqrt()
    }

    /// sin^2(theta) sin^2(omega t0), the population-transfer fraction of the
    /// pulse.
    fn transfer(&self) -> f64 {
        let s = self.sin_theta() * self.omega_t0.sin();
        s * s
    }
}

/// The three efficiency formulas side by side (plus the Otto baseline).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyReport {
    pub eta_otto: f64,
    pub eta_q_exact: f64,
    pub eta_q_longtime: f64,
    pub eta_q_corrected: f64,
}

/// Ledger of the measurement cycle in units of mu*Bz(1)*(p+ - p-).
///
/// Node 2 is the post-pulse state; the 2->3 expansion now requires work
/// W23 = (1-b)[1 - 2 sin^2(theta) sin^2(omega t0)] because the pulse does
/// not fully depolarize the spin. Closure reads W01 + Q30 = Q12 + W23.
/// The efficiency entry is the exact measurement-cycle efficiency.
pub fn measurement_ledger(point: &MeasurementCyclePoint) -> Result<CycleLedger> {
    point.validate()?;
    let q = point.transfer();
    let b = point.b;
    let post_pulse = 1.0 - 2.0 * q;
    Ok(CycleLedger {
        node_energies: [-b, -1.0, -post_pulse, -b * post_pulse],
        w01: 1.0 - b,
        q12: 2.0 * q,
        w23: (1.0 - b) * post_pulse,
        q30: 2.0 * b * q,
        efficiency: eta_q_exact(b, point.cos_theta, point.omega_t0),
    })
}

/// Exact measurement-cycle efficiency
/// (1-b) / (1 - b(1 - 2 sin^2(theta) sin^2(omega t0))).
pub fn eta_q_exact(b: f64, cos_theta: f64, omega_t0: f64) -> f64 {
    let s_sq = (1.0 - cos_theta * cos_theta).max(0.0);
    let sin_wt = omega_t0.sin();
    (1.0 - b) / (1.0 - b * (1.0 - 2.0 * s_sq * sin_wt * sin_wt))
}

/// Long-pulse average of [`eta_q_exact`]: (1-b)/(1 - b cos^2(theta)).
pub fn eta_q_longtime(b: f64, cos_theta: f64) -> f64 {
    (1.0 - b) / (1.0 - b * cos_theta * cos_theta)
}

/// Efficiency corrected for the record cost:
/// (1-b)/(1 - b cos^2(theta) + Gamma/gamma). Gamma = 0 recovers the
/// long-pulse formula; Gamma -> infinity kills the engine.
pub fn eta_q_corrected(b: f64, cos_theta: f64, gamma: f64, gamma_value: f64) -> Result<f64> {
    check(gamma > 0.0, "gamma", gamma, "must be > 0")?;
    check(
        gamma_value >= 0.0,
        "gamma_value",
        gamma_value,
        "must be >= 0",
    )?;
    Ok((1.0 - b) / (1.0 - b * cos_theta * cos_theta + gamma_value / gamma))
}

/// All four efficiencies at one operating point.
pub fn efficiency_report(point: &MeasurementCyclePoint) -> Result<EfficiencyReport> {
    point.validate()?;
    Ok(EfficiencyReport {
        eta_otto: otto_efficiency(point.b),
        eta_q_exact: eta_q_exact(point.b, point.cos_theta, point.omega_t0),
        eta_q_longtime: eta_q_longtime(point.b, point.cos_theta),
        eta_q_corrected: eta_q_corrected(point.b, point.cos_theta, point.gamma, point.gamma_value)?,
    })
}

/// Power corrected for the measurement time, as a fraction of P_max:
/// b(1-b)^2 / (b + (1-b)^2 + gamma b(1-b)).
pub fn power_corrected(b: f64, gamma: f64) -> f64 {
    let r = 1.0 - b;
    b * r * r / (b + r * r + gamma * b * r)
}

/// Argmax and maximum of [`power_corrected`] over b in (0, 1), golden
/// section to 1e-8 in b.
pub fn maximize_power_corrected(gamma: f64) -> Result<(f64, f64)> {
    check(gamma >= 0.0, "gamma", gamma, "must be >= 0")?;
    maximize_on_b(|b| power_corrected(b, gamma))
}

/// One row of the gamma sweep behind the trade-off figures, with the
/// comparison columns for the 1/sqrt(gamma) and 1/gamma reference lines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub gamma: f64,
    pub b_star: f64,
    pub power_star: f64,
    pub b_star_sqrt_gamma: f64,
    pub power_star_gamma: f64,
}

/// Optimize the compression ratio at every gamma in the grid. Failed rows
/// carry their error and do not stop the sweep.
pub fn sweep_gamma(grid: &[f64]) -> Vec<(f64, Result<SweepRow>)> {
    grid.iter()
        .map(|&gamma| {
            let row = maximize_power_corrected(gamma).map(|(b_star, power_star)| SweepRow {
                gamma,
                b_star,
                power_star,
                b_star_sqrt_gamma: b_star * gamma.sqrt(),
                power_star_gamma: power_star * gamma,
            });
            (gamma, row)
        })
        .collect()
}

/// The default figure grid: `count` log-spaced gammas over [lo, hi].
pub fn log_spaced_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    check(lo > 0.0, "lo", lo, "must be > 0")?;
    check(hi > lo, "hi", hi, "must be > lo")?;
    check(count as f64 >= 2.0, "count", count as f64, "must be >= 2")?;
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    Ok((0..count)
        .map(|i| (ln_lo + (ln_hi - ln_lo) * i as f64 / (count - 1) as f64).exp())
        .collect())
}
