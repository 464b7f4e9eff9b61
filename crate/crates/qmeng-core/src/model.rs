//! Physical constants, engine parameters, and their reduction to the
//! dimensionless control groups consumed by every other module.
//!
//! Internally the crate works in natural units hbar = c = 1 with mu*Bz(1) as
//! the reference energy; every public formula depends only on the groups
//! {b, cos(theta), omega*t0, gamma, polarization, rad_scale}, so dimensionful
//! inputs are converted exactly once, here.

use serde::{Deserialize, Serialize};

use crate::error::{check, Error, Result};

/// Fine-structure constant used when a configuration does not supply one.
pub const ALPHA: f64 = 1.0 / 137.0;

/// Fundamental constants of the working spin, in any self-consistent unit
/// system. The charge satisfies e^2 = alpha*hbar*c and the moment mu = e*hbar/2m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
    pub alpha: f64,
    pub mass: f64,
    pub charge: f64,
    /// Gyromagnetic factor; 2 for a bare spin and fixed to 2 by default.
    pub g_factor: f64,
    /// Magnetic moment e*hbar/2m.
    pub mu: f64,
}

impl PhysicalConstants {
    /// Constants in natural units hbar = c = 1 for a particle of mass `mass`.
    pub fn natural(mass: f64, alpha: f64) -> Result<Self> {
        Self::new(1.0, 1.0, mass, alpha)
    }

    pub fn new(hbar: f64, c: f64, mass: f64, alpha: f64) -> Result<Self> {
        check(hbar > 0.0, "hbar", hbar, "must be > 0")?;
        check(c > 0.0, "c", c, "must be > 0")?;
        check(mass > 0.0, "mass", mass, "must be > 0")?;
        check(alpha > 0.0, "alpha", alpha, "must be > 0")?;
        let charge = (alpha * hbar * c).sqrt();
        let constants = Self {
            hbar,
            c,
            alpha,
            mass,
            charge,
            g_factor: 2.0,
            mu: charge * hbar / (2.0 * mass),
        };
        constants.validate()?;
        Ok(constants)
    }

    /// Consistency of the derived moment: mu^2/(hbar c^3) * m^2 c^2/hbar^2 = alpha/4.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("hbar", self.hbar),
            ("c", self.c),
            ("alpha", self.alpha),
            ("mass", self.mass),
            ("charge", self.charge),
            ("g_factor", self.g_factor),
            ("mu", self.mu),
        ] {
            check(v > 0.0, name, v, "must be > 0")?;
        }
        let lhs = self.mu * self.mu / (self.hbar * self.c.powi(3))
            * (self.mass * self.mass * self.c * self.c / (self.hbar * self.hbar));
        let rel = (lhs / (self.alpha / 4.0) - 1.0).abs();
        check(
            rel <= 1e-12,
            "mu",
            self.mu,
            "inconsistent with e^2 = alpha*hbar*c and mu = e*hbar/2m",
        )
    }
}

/// Raw physical inputs of one engine configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineParams {
    /// z-field at the cold node.
    pub bz0: f64,
    /// z-field at the compressed node; bz0 <= bz1.
    pub bz1: f64,
    /// Transverse pulse field.
    pub by: f64,
    /// Inverse temperature of the cold bath.
    pub beta: f64,
    /// Pulse duration.
    pub t0: f64,
    pub constants: PhysicalConstants,
}

impl EngineParams {
    pub fn new(
        bz0: f64,
        bz1: f64,
        by: f64,
        beta: f64,
        t0: f64,
        constants: PhysicalConstants,
    ) -> Result<Self> {
        let params = Self {
            bz0,
            bz1,
            by,
            beta,
            t0,
            constants,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        check(self.bz0 > 0.0, "Bz0", self.bz0, "must be > 0")?;
        check(
            self.bz1 >= self.bz0,
            "Bz1",
            self.bz1,
            "must satisfy Bz0 <= Bz1",
        )?;
        check(self.by >= 0.0, "By", self.by, "must be >= 0")?;
        check(self.beta > 0.0, "beta", self.beta, "must be > 0")?;
        check(self.t0 > 0.0, "t0", self.t0, "must be > 0")
    }
}

/// The reduced control set. Everything downstream depends only on these.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessGroups {
    /// Compression ratio Bz(0)/Bz(1) in (0, 1].
    pub b: f64,
    /// Tilt of the pulse-on precession axis: Bz(1)/sqrt(Bz(1)^2 + By^2).
    pub cos_theta: f64,
    /// Precession angular frequency mu*sqrt(Bz(1)^2 + By^2)/hbar. Equals 1
    /// when the groups were built directly in dimensionless form.
    pub omega: f64,
    /// Pulse angle omega*t0.
    pub omega_t0: f64,
    /// Measurement-duration parameter mu*Bz(1)*t0/hbar = omega_t0 * cos_theta.
    pub gamma: f64,
    /// Population imbalance p+ - p- set by the cold bath.
    pub polarization: f64,
    /// Radiation-coupling scale hbar*omega/(m c^2).
    pub rad_scale: f64,
    /// Fine-structure constant entering the record-cost prefactor.
    pub alpha: f64,
}

impl DimensionlessGroups {
    /// Build the groups directly, with omega = 1 as the frequency reference
    /// and the default fine-structure constant.
    pub fn from_dimensionless(
        b: f64,
        cos_theta: f64,
        omega_t0: f64,
        polarization: f64,
        rad_scale: f64,
    ) -> Result<Self> {
        let groups = Self {
            b,
            cos_theta,
            omega: 1.0,
            omega_t0,
            gamma: omega_t0 * cos_theta,
            polarization,
            rad_scale,
            alpha: ALPHA,
        };
        groups.validate()?;
        Ok(groups)
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
        check(self.omega > 0.0, "omega", self.omega, "must be > 0")?;
        check(
            self.omega_t0 > 0.0,
            "omega_t0",
            self.omega_t0,
            "must be > 0",
        )?;
        // tanh of a huge argument rounds to 1.0, so the closed interval is
        // accepted even though a thermal state only reaches 1 in the limit.
        check(
            (0.0..=1.0).contains(&self.polarization),
            "polarization",
            self.polarization,
            "must lie in [0, 1]",
        )?;
        check(
            self.rad_scale > 0.0,
            "rad_scale",
            self.rad_scale,
            "must be > 0",
        )?;
        check(self.alpha > 0.0, "alpha", self.alpha, "must be > 0")?;
        let rel = (self.gamma / (self.omega_t0 * self.cos_theta) - 1.0).abs();
        check(
            rel <= 1e-12,
            "gamma",
            self.gamma,
            "must equal omega_t0 * cos_theta",
        )
    }

    pub fn sin_theta(&self) -> f64 {
        (1.0 - self.cos_theta * self.cos_theta).max(0.0).sqrt()
    }
}

/// Thermal occupation of the spin-up/down levels at inverse temperature
/// `beta` in a field worth `mu_bz0` of Zeeman energy.
///
/// Returns `(p_plus, p_minus)` with p+ = 1/(1 + exp(-beta*mu_bz0)) >= 1/2.
pub fn thermal_populations(beta: f64, mu_bz0: f64) -> Result<(f64, f64)> {
    if !beta.is_finite() || !mu_bz0.is_finite() {
        return Err(Error::Domain {
            name: "beta*mu_bz0",
            value: beta * mu_bz0,
            constraint: "inputs must be finite",
        });
    }
    check(beta >= 0.0, "beta", beta, "must be >= 0")?;
    check(mu_bz0 >= 0.0, "mu_bz0", mu_bz0, "must be >= 0")?;
    let p_plus = 1.0 / (1.0 + (-beta * mu_bz0).exp());
    Ok((p_plus, 1.0 - p_plus))
}

/// Reduce raw physical inputs to the dimensionless groups.
pub fn derive_groups(params: &EngineParams) -> Result<DimensionlessGroups> {
    params.validate()?;
    let c = &params.constants;
    let field = (params.bz1 * params.bz1 + params.by * params.by).sqrt();
    if field == 0.0 {
        return Err(Error::DegenerateField);
    }
    let omega = c.mu * field / c.hbar;
    let (p_plus, p_minus) = thermal_populations(params.beta, c.mu * params.bz0)?;
    let groups = DimensionlessGroups {
        b: params.bz0 / params.bz1,
        cos_theta: params.bz1 / field,
        omega,
        omega_t0: omega * params.t0,
        gamma: c.mu * params.bz1 * params.t0 / c.hbar,
        polarization: p_plus - p_minus,
        rad_scale: c.hbar * omega / (c.mass * c.c * c.c),
        alpha: c.alpha,
    };
    groups.validate()?;
    Ok(groups)
}

/// JSON configuration accepted by the CLI and by library users.
///
/// Either the physical keys {"Bz0", "Bz1", "By", "beta", "t0", "mass",
/// "alpha"} or a single "dimensionless" block {"b", "cos_theta", "omega_t0",
/// "polarization", "rad_scale"} may be given, not both. `alpha` is optional
/// and defaults to 1/137.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(rename = "Bz0")]
    pub bz0: Option<f64>,
    #[serde(rename = "Bz1")]
    pub bz1: Option<f64>,
    #[serde(rename = "By")]
    pub by: Option<f64>,
    pub beta: Option<f64>,
    pub t0: Option<f64>,
    pub mass: Option<f64>,
    pub alpha: Option<f64>,
    pub dimensionless: Option<DimensionlessBlock>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionlessBlock {
    pub b: f64,
    pub cos_theta: f64,
    pub omega_t0: f64,
    pub polarization: f64,
    pub rad_scale: f64,
}

impl RawConfig {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Config(e.to_string()))
    }

    /// Resolve the configuration into dimensionless groups.
    pub fn into_groups(self) -> Result<DimensionlessGroups> {
        let physical = [self.bz0, self.bz1, self.by, self.beta, self.t0, self.mass];
        let any_physical = physical.iter().any(Option::is_some) || self.alpha.is_some();
        match (&self.dimensionless, any_physical) {
            (Some(_), true) => Err(Error::Config(
                "give either physical inputs or a \"dimensionless\" block, not both".into(),
            )),
            (None, false) => Err(Error::Config(
                "empty configuration: no physical inputs and no \"dimensionless\" block".into(),
            )),
            (Some(block), false) => DimensionlessGroups::from_dimensionless(
                block.b,
                block.cos_theta,
                block.omega_t0,
                block.polarization,
                block.rad_scale,
            ),
            (None, true) => {
                let need = |v: Option<f64>, key: &str| {
                    v.ok_or_else(|| Error::Config(format!("missing key \"{key}\"")))
                };
                let constants = PhysicalConstants::natural(
                    need(self.mass, "mass")?,
                    self.alpha.unwrap_or(ALPHA),
                )?;
                let params = EngineParams::new(
                    need(self.bz0, "Bz0")?,
                    need(self.bz1, "Bz1")?,
                    need(self.by, "By")?,
                    need(self.beta, "beta")?,
                    need(self.t0, "t0")?,
                    constants,
                )?;
                derive_groups(&params)
            }
        }
    }
}
