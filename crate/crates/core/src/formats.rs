//! Text formats: spectrum tables, trap config files and profile CSV.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use crate::atomlaser::TrapConfig;
use crate::beamsim::{BeamError, CurrentProfile, Dispersion, MomentumSpectrum};
use crate::constants::{SpeciesError, SpeciesRegistry};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {reason}")]
    Line { line: usize, reason: String },
    #[error("spectrum file has no components")]
    NoComponents,
    #[error("invalid trap config: {0}")]
    Trap(String),
    #[error(transparent)]
    Species(#[from] SpeciesError),
    #[error(transparent)]
    Beam(#[from] BeamError),
}

/// Parses `k_rad_per_m amplitude` lines. Blank lines and `#` comments
/// (whole-line or trailing) are ignored.
pub fn parse_spectrum(text: &str, particle_mass: f64, dispersion: Dispersion) -> Result<MomentumSpectrum, FormatError> {
    let mut components = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(FormatError::Line {
                line,
                reason: format!("expected 2 columns 'k_rad_per_m amplitude', found {}", fields.len()),
            });
        }
        let number = |s: &str, what: &str| -> Result<f64, FormatError> {
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(FormatError::Line { line, reason: format!("invalid {what} '{s}'") }),
            }
        };
        let k = number(fields[0], "wavenumber")?;
        let amplitude = number(fields[1], "amplitude")?;
        if components.iter().any(|&(other, _)| other == k) {
            return Err(FormatError::Line { line, reason: format!("duplicate wavenumber {k}") });
        }
        components.push((k, amplitude));
    }
    if components.is_empty() {
        return Err(FormatError::NoComponents);
    }
    Ok(MomentumSpectrum::new(components, particle_mass, dispersion)?)
}

/// Trap config document. Frequencies are ordinary frequencies in Hz.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapConfigFile {
    pub species: String,
    pub atom_number: f64,
    pub omega_x_hz: f64,
    pub omega_perp_hz: f64,
    #[serde(rename = "B_rf_T")]
    pub b_rf_t: f64,
    #[serde(rename = "B_0_T")]
    pub b_0_t: f64,
    pub omega_rf_hz: f64,
    #[serde(rename = "K_J_per_m2", default)]
    pub k_j_per_m2: f64,
    #[serde(rename = "F", default = "unit")]
    pub f: f64,
    #[serde(default)]
    pub z_r_override_m: Option<f64>,
    #[serde(rename = "E_minus1_J", default)]
    pub e_minus1_j: Option<f64>,
}

fn unit() -> f64 {
    1.0
}

impl TrapConfigFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        toml::from_str(text).map_err(|e| FormatError::Trap(e.to_string()))
    }

    /// Resolves the species and converts Hz to rad/s.
    pub fn to_config(&self, registry: &SpeciesRegistry) -> Result<TrapConfig, FormatError> {
        let species = registry.lookup(&self.species)?.clone();
        let mut cfg = TrapConfig::new(
            species,
            self.atom_number,
            2.0 * PI * self.omega_x_hz,
            2.0 * PI * self.omega_perp_hz,
            self.b_rf_t,
            self.b_0_t,
            2.0 * PI * self.omega_rf_hz,
        );
        cfg.offset_curvature = self.k_j_per_m2;
        cfg.coupling_factor = self.f;
        cfg.e_minus1 = self.e_minus1_j;
        Ok(cfg)
    }
}

pub const PROFILE_HEADER: &str = "z_m,incoherent,coherent,total";

/// CSV rendering of a profile. `f64` Display output is the shortest string
/// that round-trips.
pub fn profile_csv(profile: &CurrentProfile) -> String {
    let mut out = String::with_capacity(profile.len() * 80);
    out.push_str(PROFILE_HEADER);
    out.push('\n');
    for i in 0..profile.len() {
        let _ = writeln!(
            out,
            "{:e},{:e},{:e},{:e}",
            profile.z_grid[i], profile.incoherent[i], profile.coherent[i], profile.total[i]
        );
    }
    out
}
