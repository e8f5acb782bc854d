//! Physical constants and the alkali-species registry.
//!
//! Values are CODATA 2018 exact or recommended values. Everything in the
//! crate is computed in SI; micrometres only appear at presentation.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Standard gravity (m/s²).
pub const STANDARD_GRAVITY: f64 = 9.806_65;
/// Bohr magneton (J/T).
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Unified atomic mass unit (kg).
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

const BUNDLED_REGISTRY: &str = include_str!("../data/species.toml");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpeciesError {
    #[error("unknown species '{name}' (known: {})", known.join(", "))]
    Unknown { name: String, known: Vec<String> },
    #[error("species '{name}': {reason}")]
    InvalidRecord { name: String, reason: String },
    #[error("invalid species registry: {0}")]
    Parse(String),
    #[error("cannot read species registry {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("physical constant '{name}' must be finite and positive, got {value}")]
    InvalidConstant { name: &'static str, value: f64 },
}

/// Constants used by every SI computation. Only `g` is expected to vary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub g: f64,
    pub mu_b: f64,
    pub c: f64,
    pub amu: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self { hbar: HBAR, g: STANDARD_GRAVITY, mu_b: BOHR_MAGNETON, c: SPEED_OF_LIGHT, amu: ATOMIC_MASS_UNIT }
    }
}

impl PhysicalConstants {
    /// Default constants with gravitational acceleration replaced.
    pub fn with_gravity(g: f64) -> Result<Self, SpeciesError> {
        let consts = Self { g, ..Self::default() };
        consts.validate()?;
        Ok(consts)
    }

    pub fn validate(&self) -> Result<(), SpeciesError> {
        for (name, value) in [("hbar", self.hbar), ("g", self.g), ("mu_B", self.mu_b), ("c", self.c), ("amu", self.amu)]
        {
            if !(value.is_finite() && value > 0.0) {
                return Err(SpeciesError::InvalidConstant { name, value });
            }
        }
        Ok(())
    }
}

/// An atomic species record. Immutable once loaded.
#[derive(Debug, Clone, PartialEq)]
pub struct Species {
    pub name: String,
    /// kg
    pub mass: f64,
    /// m
    pub scattering_length: f64,
    pub source: String,
}

impl Species {
    pub fn new(
        name: impl Into<String>,
        mass: f64,
        scattering_length: f64,
        source: impl Into<String>,
    ) -> Result<Self, SpeciesError> {
        let name = name.into();
        if !(mass.is_finite() && mass > 0.0) {
            return Err(SpeciesError::InvalidRecord { name, reason: format!("mass must be positive, got {mass}") });
        }
        if !(scattering_length.is_finite() && scattering_length > 0.0) {
            return Err(SpeciesError::InvalidRecord {
                name,
                reason: format!("scattering length must be positive, got {scattering_length}"),
            });
        }
        Ok(Self { name, mass, scattering_length, source: source.into() })
    }

    pub fn mass_amu(&self) -> f64 {
        self.mass / ATOMIC_MASS_UNIT
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpeciesEntry {
    mass_amu: f64,
    scattering_length_nm: f64,
    #[serde(default)]
    source: String,
}

/// Name-keyed species table, iterated in name order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpeciesRegistry {
    entries: BTreeMap<String, Species>,
}

impl SpeciesRegistry {
    /// The registry shipped with the crate (Na23, Rb87, Li7).
    pub fn bundled() -> Self {
        Self::from_toml_str(BUNDLED_REGISTRY).expect("bundled species registry is valid")
    }

    pub fn from_toml_str(text: &str) -> Result<Self, SpeciesError> {
        let raw: BTreeMap<String, SpeciesEntry> =
            toml::from_str(text).map_err(|e| SpeciesError::Parse(e.to_string()))?;
        let mut entries = BTreeMap::new();
        for (name, entry) in raw {
            let species = Species::new(
                name.clone(),
                entry.mass_amu * ATOMIC_MASS_UNIT,
                entry.scattering_length_nm * 1e-9,
                entry.source,
            )?;
            entries.insert(name, species);
        }
        Ok(Self { entries })
    }

    pub fn from_file(path: &Path) -> Result<Self, SpeciesError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SpeciesError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        Self::from_toml_str(&text)
    }

    pub fn lookup(&self, name: &str) -> Result<&Species, SpeciesError> {
        self.entries.get(name).ok_or_else(|| SpeciesError::Unknown {
            name: name.to_string(),
            known: self.names().map(str::to_string).collect(),
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Species> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Looks a species up in the bundled registry.
pub fn lookup_species(name: &str) -> Result<Species, SpeciesError> {
    SpeciesRegistry::bundled().lookup(name).cloned()
}
