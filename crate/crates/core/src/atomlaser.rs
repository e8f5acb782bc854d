//! rf output coupling of a trapped condensate into a falling atom laser,
//! and the coherence length of the resulting beam.
//!
//! The trapped cloud is a Thomas-Fermi condensate in a harmonic magnetic
//! trap. An rf field couples atoms out at the extraction point `z_r` below
//! the trap centre; from there they fall freely. The local wavenumber of the
//! falling beam, `k(z) = sqrt(z + z_r) / l^{3/2}`, grows with the distance
//! fallen, and the coherence length is the first `z` at which the phase
//! difference to the extraction point reaches `2 pi`:
//!
//! ```text
//! (sqrt(z + z_r) - sqrt(2 z_r)) z = 2 n pi l^{3/2}
//! ```
//!
//! `l = (hbar^2 / 2 M^2 g)^{1/3}` is the gravitational length.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::constants::{PhysicalConstants, Species};
use crate::numerics::{expand_bracket, find_root, NumericsError, DEFAULT_REL_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AtomLaserError {
    #[error("{name} must be {requirement}, got {value}")]
    InvalidParameter { name: &'static str, requirement: &'static str, value: f64 },
    #[error("extraction point below threshold: eta = {eta}, z_r = {z_r} m (rf detuning too low)")]
    NegativeExtraction { eta: f64, z_r: f64 },
    #[error("z + z_r = {0} m is above the turning point")]
    AboveTurningPoint(f64),
    #[error("zeta_r = {0} is not strictly positive; the turning region is not modelled")]
    TurningRegion(f64),
    #[error("point (x, y, z_r) lies outside the Thomas-Fermi ellipsoid (1 - r^2 = {0})")]
    OutsideCondensate(f64),
    #[error("trapped-state energy E_-1 is required to evaluate the phase at t = {0} s")]
    MissingPhaseEnergy(f64),
    #[error("coherence-length solve failed: {0}")]
    Solver(#[from] NumericsError),
}

fn positive(name: &'static str, value: f64) -> Result<f64, AtomLaserError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(AtomLaserError::InvalidParameter { name, requirement: "finite and positive", value })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<f64, AtomLaserError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(AtomLaserError::InvalidParameter { name, requirement: "finite and non-negative", value })
    }
}

/// Magnetic trap and rf coupler settings. Angular frequencies in rad/s.
#[derive(Debug, Clone, PartialEq)]
pub struct TrapConfig {
    pub species: Species,
    /// Initial number of trapped atoms; also used as the trapped population.
    pub atom_number: f64,
    pub omega_x: f64,
    pub omega_perp: f64,
    /// T
    pub b_rf: f64,
    /// T
    pub b_0: f64,
    pub omega_rf: f64,
    /// Curvature of the offset field energy, J/m².
    pub offset_curvature: f64,
    /// Finite-coupling-time factor of the output amplitude.
    pub coupling_factor: f64,
    /// Trapped-state energy (J), only enters the time-dependent phase.
    pub e_minus1: Option<f64>,
}

impl TrapConfig {
    /// A config with `K = 0`, `F = 1` and no phase energy.
    pub fn new(
        species: Species,
        atom_number: f64,
        omega_x: f64,
        omega_perp: f64,
        b_rf: f64,
        b_0: f64,
        omega_rf: f64,
    ) -> Self {
        Self {
            species,
            atom_number,
            omega_x,
            omega_perp,
            b_rf,
            b_0,
            omega_rf,
            offset_curvature: 0.0,
            coupling_factor: 1.0,
            e_minus1: None,
        }
    }

    pub fn validate(&self) -> Result<(), AtomLaserError> {
        if !(self.atom_number.is_finite() && self.atom_number >= 1.0) {
            return Err(AtomLaserError::InvalidParameter {
                name: "atom_number",
                requirement: "at least 1",
                value: self.atom_number,
            });
        }
        positive("omega_x", self.omega_x)?;
        positive("omega_perp", self.omega_perp)?;
        non_negative("B_rf", self.b_rf)?;
        non_negative("B_0", self.b_0)?;
        non_negative("omega_rf", self.omega_rf)?;
        if !self.offset_curvature.is_finite() {
            return Err(AtomLaserError::InvalidParameter {
                name: "K",
                requirement: "finite",
                value: self.offset_curvature,
            });
        }
        if !self.coupling_factor.is_finite() {
            return Err(AtomLaserError::InvalidParameter {
                name: "F",
                requirement: "finite",
                value: self.coupling_factor,
            });
        }
        Ok(())
    }

    /// Geometric mean trap frequency `(w_x w_perp^2)^{1/3}`.
    pub fn omega_bar(&self) -> f64 {
        (self.omega_x * self.omega_perp * self.omega_perp).cbrt()
    }
}

/// Thomas-Fermi chemical potential `(hbar w/2)(15 a N / sigma)^{2/5}`
/// with `sigma = sqrt(hbar / M w)`.
pub fn chemical_potential(cfg: &TrapConfig, consts: &PhysicalConstants) -> Result<f64, AtomLaserError> {
    cfg.validate()?;
    let omega_bar = cfg.omega_bar();
    let sigma = oscillator_length(consts.hbar, cfg.species.mass, omega_bar);
    Ok(chemical_potential_from(consts.hbar, omega_bar, sigma, cfg.species.scattering_length, cfg.atom_number))
}

fn oscillator_length(hbar: f64, mass: f64, omega_bar: f64) -> f64 {
    (hbar / (mass * omega_bar)).sqrt()
}

fn chemical_potential_from(hbar: f64, omega_bar: f64, sigma: f64, a: f64, n: f64) -> f64 {
    0.5 * hbar * omega_bar * (15.0 * a * n / sigma).powf(0.4)
}

/// `(hbar^2 / 2 M^2 g)^{1/3}`
pub fn gravitational_length(mass: f64, consts: &PhysicalConstants) -> f64 {
    (consts.hbar * consts.hbar / (2.0 * mass * mass * consts.g)).cbrt()
}

/// Everything derived from a [`TrapConfig`]. SI units; `omega_rf_rabi` and
/// `delta_rf` in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedTrapQuantities {
    pub mu: f64,
    pub l: f64,
    pub x0: f64,
    pub y0: f64,
    pub z0: f64,
    pub eta: f64,
    pub z_r: f64,
    pub omega_rf_rabi: f64,
    pub delta_rf: f64,
    /// Interaction strength `4 pi hbar^2 a N / M`, J·m³.
    pub u: f64,
    pub sigma: f64,
    pub omega_bar: f64,
    pub mass: f64,
    pub hbar: f64,
    pub g: f64,
}

impl DerivedTrapQuantities {
    pub fn geometry(&self) -> BeamGeometry {
        BeamGeometry { mass: self.mass, hbar: self.hbar, g: self.g, l: self.l, z_r: self.z_r }
    }

    /// Human-readable notes for configurations outside the regime where the
    /// gravitational length is small compared to the condensate.
    pub fn warnings(&self) -> Vec<String> {
        let size = self.x0.min(self.y0).min(self.z0);
        if self.l * 10.0 > size {
            vec![format!(
                "gravitational length l = {:e} m is not small compared to the condensate size {:e} m",
                self.l, size
            )]
        } else {
            Vec::new()
        }
    }
}

/// Derives trap quantities. With `z_r_override` the extraction point is
/// taken as given (it must be non-negative); otherwise `z_r = eta z0 / 2`
/// and a negative value is an error.
///
/// A nonzero offset curvature `K` adds `K z_r^2 / 2` to the offset energy,
/// with `z_r` taken from one pass at `K = 0`.
pub fn derive_trap_quantities(
    cfg: &TrapConfig,
    consts: &PhysicalConstants,
    z_r_override: Option<f64>,
) -> Result<DerivedTrapQuantities, AtomLaserError> {
    cfg.validate()?;
    let hbar = consts.hbar;
    let mass = cfg.species.mass;
    let g = consts.g;

    let omega_bar = cfg.omega_bar();
    let sigma = oscillator_length(hbar, mass, omega_bar);
    let mu = chemical_potential_from(hbar, omega_bar, sigma, cfg.species.scattering_length, cfg.atom_number);
    let l = gravitational_length(mass, consts);
    let x0 = (2.0 * mu / (mass * cfg.omega_x * cfg.omega_x)).sqrt();
    let y0 = (2.0 * mu / (mass * cfg.omega_perp * cfg.omega_perp)).sqrt();
    let z0 = y0;
    let omega_rf_rabi = consts.mu_b * cfg.b_rf / (2.0 * 2f64.sqrt() * hbar);
    let u = 4.0 * PI * hbar * hbar * cfg.species.scattering_length * cfg.atom_number / mass;

    let detuning = |v_off: f64| (v_off - hbar * cfg.omega_rf) / hbar;
    let eta_of = |delta: f64| (2.0 * hbar * delta + 4.0 * mu / 7.0) / (2.0 * mass * g * z0);

    let v_off0 = consts.mu_b * cfg.b_0 / 2.0;
    let mut delta_rf = detuning(v_off0);
    let mut eta = eta_of(delta_rf);
    let mut z_r = eta * z0 / 2.0;
    if cfg.offset_curvature != 0.0 {
        delta_rf = detuning(v_off0 + cfg.offset_curvature * z_r * z_r / 2.0);
        eta = eta_of(delta_rf);
        z_r = eta * z0 / 2.0;
    }

    match z_r_override {
        Some(value) => z_r = non_negative("z_r", value)?,
        None if z_r < 0.0 => return Err(AtomLaserError::NegativeExtraction { eta, z_r }),
        None => {}
    }

    Ok(DerivedTrapQuantities {
        mu,
        l,
        x0,
        y0,
        z0,
        eta,
        z_r,
        omega_rf_rabi,
        delta_rf,
        u,
        sigma,
        omega_bar,
        mass,
        hbar,
        g,
    })
}

/// The falling beam below the extraction point: all that the local
/// velocity, wavenumber and coherence length depend on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamGeometry {
    pub mass: f64,
    pub hbar: f64,
    pub g: f64,
    pub l: f64,
    pub z_r: f64,
}

impl BeamGeometry {
    /// Geometry for a species with an explicitly chosen extraction point.
    pub fn for_species(species: &Species, consts: &PhysicalConstants, z_r: f64) -> Result<Self, AtomLaserError> {
        Ok(Self {
            mass: species.mass,
            hbar: consts.hbar,
            g: consts.g,
            l: gravitational_length(species.mass, consts),
            z_r: non_negative("z_r", z_r)?,
        })
    }

    /// `(z + z_r) / l`
    pub fn zeta_r(&self, z: f64) -> f64 {
        (z + self.z_r) / self.l
    }

    /// `sqrt(z + z_r) / l^{3/2}`, rad/m.
    pub fn local_wavenumber(&self, z: f64) -> Result<f64, AtomLaserError> {
        let fallen = z + self.z_r;
        if fallen.is_nan() || fallen < 0.0 {
            return Err(AtomLaserError::AboveTurningPoint(fallen));
        }
        Ok(fallen.sqrt() / self.l.powf(1.5))
    }

    /// de Broglie velocity `hbar k / M`, m/s.
    pub fn local_velocity(&self, z: f64) -> Result<f64, AtomLaserError> {
        Ok(self.hbar * self.local_wavenumber(z)? / self.mass)
    }

    /// `(sqrt(z + z_r) - sqrt(2 z_r)) z - 2 n pi l^{3/2}`, in m^{3/2}.
    pub fn coherence_residual(&self, z: f64, n: u32) -> f64 {
        ((z + self.z_r).sqrt() - (2.0 * self.z_r).sqrt()) * z - 2.0 * f64::from(n) * PI * self.l.powf(1.5)
    }

    /// Root of [`coherence_residual`](Self::coherence_residual) in `z > 0`.
    pub fn coherence_length(&self, n: u32) -> Result<CoherenceResult, AtomLaserError> {
        if n == 0 {
            return Err(AtomLaserError::InvalidParameter { name: "n", requirement: "at least 1", value: 0.0 });
        }
        positive("l", self.l)?;
        non_negative("z_r", self.z_r)?;
        let f = |z: f64| self.coherence_residual(z, n);
        let bracket = expand_bracket(f, self.l)?;
        let root = find_root(f, bracket, DEFAULT_REL_TOL)?;
        Ok(CoherenceResult { l: self.l, z_r: self.z_r, n, coherence_length: root.root, residual: root.residual })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceResult {
    pub l: f64,
    pub z_r: f64,
    pub n: u32,
    /// m
    pub coherence_length: f64,
    /// m^{3/2}
    pub residual: f64,
}

/// Coherence length of the beam described by `dq`.
pub fn coherence_length(dq: &DerivedTrapQuantities, n: u32) -> Result<CoherenceResult, AtomLaserError> {
    dq.geometry().coherence_length(n)
}

/// One point of the output-coupled beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamPoint {
    pub z: f64,
    pub zeta_r: f64,
    pub psi0: Complex64,
    pub density: f64,
    pub v: f64,
    pub k: f64,
}

/// Weak-coupling output wavefunction below the extraction point,
///
/// ```text
/// psi0 = A exp(i (2/3) zeta^{3/2} - i E_-1 t / hbar) / zeta^{1/4}
/// A    = -sqrt(pi) (hbar Omega_rf / M g l) phi(x, y, z_r) F
/// phi  = sqrt(mu / U) sqrt(1 - (x/x0)^2 - (y/y0)^2 - (z_r/z0)^2)
/// ```
///
/// The trapped-state energy is only needed when `t != 0`.
pub fn evaluate_psi0(
    dq: &DerivedTrapQuantities,
    cfg: &TrapConfig,
    x: f64,
    y: f64,
    z: f64,
    t: f64,
) -> Result<BeamPoint, AtomLaserError> {
    let geometry = dq.geometry();
    let zeta = geometry.zeta_r(z);
    if zeta.is_nan() || zeta <= 0.0 {
        return Err(AtomLaserError::TurningRegion(zeta));
    }
    let inside = 1.0 - (x / dq.x0).powi(2) - (y / dq.y0).powi(2) - (dq.z_r / dq.z0).powi(2);
    if inside < 0.0 {
        return Err(AtomLaserError::OutsideCondensate(inside));
    }
    let phase_energy =
        if t == 0.0 { 0.0 } else { cfg.e_minus1.ok_or(AtomLaserError::MissingPhaseEnergy(t))? * t / dq.hbar };

    let phi = (dq.mu / dq.u).sqrt() * inside.sqrt();
    let amplitude = -PI.sqrt() * (dq.hbar * dq.omega_rf_rabi / (dq.mass * dq.g * dq.l)) * phi * cfg.coupling_factor;
    let phase = 2.0 / 3.0 * zeta.powf(1.5) - phase_energy;
    let psi0 = Complex64::from_polar(amplitude / zeta.powf(0.25), phase);
    let k = geometry.local_wavenumber(z)?;
    Ok(BeamPoint { z, zeta_r: zeta, psi0, density: psi0.norm_sqr(), v: dq.hbar * k / dq.mass, k })
}
