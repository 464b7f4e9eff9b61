//! Exact evolution of the spinor through the sudden transverse pulse, plus a
//! fixed-step integrator used only to verify the closed forms.
//!
//! During the pulse the field points along v = cos(theta) z + sin(theta) y
//! and the spin precesses about it at angular frequency omega; the field
//! jumps at t = 0 and t = t0 with the state continuous across the jumps.
//! After the pulse only a dynamical phase accumulates.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{check, Error, Result};

/// Normalized two-component state in the sigma_z basis, s+ = (1,0), s- = (0,1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    pub up: C64,
    pub down: C64,
}

impl Spinor {
    pub const S_PLUS: Spinor = Spinor {
        up: C64::new(1.0, 0.0),
        down: C64::new(0.0, 0.0),
    };
    pub const S_MINUS: Spinor = Spinor {
        up: C64::new(0.0, 0.0),
        down: C64::new(1.0, 0.0),
    };

    pub fn new(up: C64, down: C64) -> Self {
        Self { up, down }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &Spinor) -> C64 {
        self.up.conj() * other.up + self.down.conj() * other.down
    }

    /// Expectation of -sigma_z, i.e. the energy in units of mu*Bz.
    pub fn mean_energy_z(&self) -> f64 {
        self.down.norm_sqr() - self.up.norm_sqr()
    }
}

/// Which basis state the spin started in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Pulse parameters: axis tilt, precession frequency, duration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    pub cos_theta: f64,
    pub omega: f64,
    pub t0: f64,
}

impl PulseSpec {
    pub fn new(cos_theta: f64, omega: f64, t0: f64) -> Result<Self> {
        check(
            cos_theta > 0.0 && cos_theta <= 1.0,
            "cos_theta",
            cos_theta,
            "must lie in (0, 1]",
        )?;
        check(omega > 0.0, "omega", omega, "must be > 0")?;
        check(t0 > 0.0, "t0", t0, "must be > 0")?;
        Ok(Self {
            cos_theta,
            omega,
            t0,
        })
    }

    pub fn sin_theta(&self) -> f64 {
        (1.0 - self.cos_theta * self.cos_theta).max(0.0).sqrt()
    }

    /// Zeeman energy mu*Bz(1) = hbar*omega*cos(theta); sets the post-pulse
    /// phase rate.
    pub fn bz1_energy(&self) -> f64 {
        self.omega * self.cos_theta
    }
}

/// Amplitudes of the evolved s+ state in the sigma_z basis:
/// psi(t) = psi_plus s+ - psi_minus s-. The minus amplitude is real by
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseAmplitudes {
    pub psi_plus: C64,
    pub psi_minus: f64,
}

impl PulseAmplitudes {
    pub fn norm_sqr(&self) -> f64 {
        self.psi_plus.norm_sqr() + self.psi_minus * self.psi_minus
    }
}

/// Instantaneous eigenvectors of the pulse-on Hamiltonian, spin aligned
/// (phi_plus, lower energy) and anti-aligned with the tilted axis.
pub fn eigenbasis(cos_theta: f64) -> (Spinor, Spinor) {
    debug_assert!((-1.0..=1.0).contains(&cos_theta));
    // half-angle forms, valid for theta in [0, pi]
    let cos_half = ((1.0 + cos_theta) / 2.0).sqrt();
    let sin_half = ((1.0 - cos_theta) / 2.0).sqrt();
    let phi_plus = Spinor::new(C64::new(cos_half, 0.0), C64::new(0.0, sin_half));
    let phi_minus = Spinor::new(C64::new(0.0, sin_half), C64::new(cos_half, 0.0));
    (phi_plus, phi_minus)
}

/// Closed-form amplitudes during the pulse:
/// psi_plus = cos(omega t) + i sin(omega t) cos(theta),
/// psi_minus = sin(omega t) sin(theta).
pub fn pulse_amplitudes(t: f64, spec: &PulseSpec) -> Result<PulseAmplitudes> {
    check(
        (0.0..=spec.t0).contains(&t),
        "t",
        t,
        "must lie in [0, t0]; the post-pulse leg is handled by `evolve`",
    )?;
    let (s, c) = (spec.omega * t).sin_cos();
    Ok(PulseAmplitudes {
        psi_plus: C64::new(c, s * spec.cos_theta),
        psi_minus: s * spec.sin_theta(),
    })
}

fn matches_basis_state(state: &Spinor, target: &Spinor) -> bool {
    (state.up - target.up).norm() <= 1e-12 && (state.down - target.down).norm() <= 1e-12
}

/// Evolve s+ or s- through the pulse and, for t > t0, through the residual
/// z-field phase (rate mu*Bz(1)/hbar, zero accumulated at t0).
pub fn evolve(initial: &Spinor, t: f64, spec: &PulseSpec) -> Result<Spinor> {
    check(t >= 0.0, "t", t, "must be >= 0")?;
    let from_plus = if matches_basis_state(initial, &Spinor::S_PLUS) {
        true
    } else if matches_basis_state(initial, &Spinor::S_MINUS) {
        false
    } else {
        return Err(Error::UnsupportedInitialState);
    };

    let t_pulse = t.min(spec.t0);
    let amps = pulse_amplitudes(t_pulse, spec)?;
    let (phase_up, phase_down) = if t > spec.t0 {
        let phi = spec.bz1_energy() * (t - spec.t0);
        (C64::new(0.0, phi).exp(), C64::new(0.0, -phi).exp())
    } else {
        (C64::new(1.0, 0.0), C64::new(1.0, 0.0))
    };

    let state = if from_plus {
        Spinor::new(
            amps.psi_plus * phase_up,
            -C64::new(amps.psi_minus, 0.0) * phase_down,
        )
    } else {
        Spinor::new(
            C64::new(amps.psi_minus, 0.0) * phase_up,
            amps.psi_plus.conj() * phase_down,
        )
    };
    Ok(state)
}

/// Mean energy after the pulse in units of mu*Bz(1):
/// -/+ [1 - 2 sin^2(theta) sin^2(omega t0)] for initial s+/s-.
pub fn mean_energy_after_pulse(spec: &PulseSpec, initial: Sign) -> f64 {
    let s = spec.sin_theta() * (spec.omega * spec.t0).sin();
    -initial.as_f64() * (1.0 - 2.0 * s * s)
}

/// Spin expectation values in the primed (pulse-axis) frame during the pulse:
/// (Sx', Sy', Sz') = sign * (-1/2 sin(theta) sin(2 omega t),
/// 1/2 sin(theta) cos(2 omega t), cos(theta)/2). The axis component is
/// constant; the transverse pair precesses at 2 omega.
pub fn spin_expectations(t: f64, spec: &PulseSpec, initial: Sign) -> Result<(f64, f64, f64)> {
    check((0.0..=spec.t0).contains(&t), "t", t, "must lie in [0, t0]")?;
    let sign = initial.as_f64();
    let (s2, c2) = (2.0 * spec.omega * t).sin_cos();
    let st = spec.sin_theta();
    Ok((
        sign * -0.5 * st * s2,
        sign * 0.5 * st * c2,
        sign * 0.5 * spec.cos_theta,
    ))
}

const MAX_OMEGA_DT: f64 = 0.01;

/// Independent check on the closed forms: classical fixed-step 4th-order
/// integration of i d(psi)/dt = H psi with the constant pulse-on
/// Hamiltonian, sampled on a uniform grid over [0, t0].
///
/// Refuses steps with omega*dt > 0.01; the step is shrunk so that the grid
/// lands exactly on t0.
pub fn ode_oracle(spec: &PulseSpec, initial: &Spinor, dt: f64) -> Result<Vec<(f64, Spinor)>> {
    check(dt > 0.0, "dt", dt, "must be > 0")?;
    let omega_dt = spec.omega * dt;
    if omega_dt > MAX_OMEGA_DT {
        return Err(Error::StepTooLarge {
            omega_dt,
            max: MAX_OMEGA_DT,
        });
    }
    let steps = (spec.t0 / dt).ceil().max(1.0) as usize;
    let h = spec.t0 / steps as f64;
    let (ct, st) = (spec.cos_theta, spec.sin_theta());
    let w = spec.omega;
    // d/dt (u, d) = i w (ct sz + st sy) (u, d)
    //             = (i w (ct u - i st d), i w (i st u - ct d))
    let deriv = |u: C64, d: C64| -> (C64, C64) {
        let iw = C64::new(0.0, w);
        (
            iw * (ct * u - C64::i() * st * d),
            iw * (C64::i() * st * u - ct * d),
        )
    };

    let mut out = Vec::with_capacity(steps + 1);
    let mut psi = *initial;
    out.push((0.0, psi));
    for step in 0..steps {
        let (k1u, k1d) = deriv(psi.up, psi.down);
        let (k2u, k2d) = deriv(psi.up + 0.5 * h * k1u, psi.down + 0.5 * h * k1d);
        let (k3u, k3d) = deriv(psi.up + 0.5 * h * k2u, psi.down + 0.5 * h * k2d);
        let (k4u, k4d) = deriv(psi.up + h * k3u, psi.down + h * k3d);
        psi = Spinor::new(
            psi.up + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
            psi.down + (h / 6.0) * (k1d + 2.0 * k2d + 2.0 * k3d + k4d),
        );
        out.push(((step + 1) as f64 * h, psi));
    }
    Ok(out)
}
