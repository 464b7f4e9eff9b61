//! Simulator for a spin-1/2 engine whose hot stroke is a measurement pulse.
//!
//! The working substance is a single spin-1/2 in a z-field. The baseline is a
//! four-node Otto cycle ([`otto`]); the measurement variant replaces hot-bath
//! contact with a sudden transverse pulse ([`spin`]) whose precessing moment
//! radiates a "record" into the electromagnetic field. The module
//! [`radiation`] computes the record's distinguishability exponent Γ and the
//! radiated-energy figures; [`engine`] assembles the corrected efficiency and
//! power curves and their optima over the compression ratio.
//!
//! All public formulas are expressed through the dimensionless control groups
//! of [`model::DimensionlessGroups`]; raw physical inputs are converted once
//! at the boundary.

pub mod engine;
pub mod error;
pub mod model;
pub(crate) mod numerics;
pub mod otto;
pub mod radiation;
pub mod spin;

pub use error::{Error, Result};
pub use model::{
    derive_groups, thermal_populations, DimensionlessGroups, EngineParams, PhysicalConstants,
};
