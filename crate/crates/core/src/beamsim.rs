//! Longitudinal beams built from a discrete momentum spectrum.
//!
//! A beam is `psi(z, t) = sum_k A_k exp(i(k z - w(k) t))` with real
//! amplitudes. Its probability current splits into a z-independent
//! incoherent part, `(hbar/m) sum_k k A_k^2`, and a coherent part made of
//! pairwise cosine cross terms whose maxima are the self-focusing points
//! `(k' - k) z = 2 n pi`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::constants::{HBAR, SPEED_OF_LIGHT};
use crate::numerics::{central_difference, NumericsError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BeamError {
    #[error("spectrum has no components")]
    EmptySpectrum,
    #[error("duplicate wavenumber {0} rad/m in spectrum")]
    DuplicateWavenumber(f64),
    #[error("component {index}: amplitude must be real, got imaginary part {imag}")]
    ComplexAmplitude { index: usize, imag: f64 },
    #[error("non-finite value in spectrum component {0}")]
    NonFiniteComponent(usize),
    #[error("particle mass must be positive, got {0}")]
    InvalidMass(f64),
    #[error("k = k' = {0} rad/m: no focus can be localized for a zero momentum difference")]
    DegeneratePair(f64),
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("z grid must be non-empty and sorted")]
    InvalidGrid,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Frequency of a component as a function of its wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dispersion {
    /// `w = hbar k^2 / 2m`
    Matter,
    /// `w = c k`
    VacuumLight,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralComponent {
    /// rad/m
    pub k: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentumSpectrum {
    components: Vec<SpectralComponent>,
    particle_mass: f64,
    dispersion: Dispersion,
}

impl MomentumSpectrum {
    /// Builds a spectrum from `(k, amplitude)` pairs. Wavenumbers must be distinct.
    pub fn new(
        components: impl IntoIterator<Item = (f64, f64)>,
        particle_mass: f64,
        dispersion: Dispersion,
    ) -> Result<Self, BeamError> {
        if !(particle_mass.is_finite() && particle_mass > 0.0) {
            return Err(BeamError::InvalidMass(particle_mass));
        }
        let components: Vec<SpectralComponent> =
            components.into_iter().map(|(k, amplitude)| SpectralComponent { k, amplitude }).collect();
        if components.is_empty() {
            return Err(BeamError::EmptySpectrum);
        }
        for (i, c) in components.iter().enumerate() {
            if !(c.k.is_finite() && c.amplitude.is_finite()) {
                return Err(BeamError::NonFiniteComponent(i));
            }
            if components[..i].iter().any(|o| o.k == c.k) {
                return Err(BeamError::DuplicateWavenumber(c.k));
            }
        }
        Ok(Self { components, particle_mass, dispersion })
    }

    /// Accepts complex amplitudes but rejects any with a nonzero imaginary part.
    pub fn from_complex(
        components: impl IntoIterator<Item = (f64, Complex64)>,
        particle_mass: f64,
        dispersion: Dispersion,
    ) -> Result<Self, BeamError> {
        let mut real = Vec::new();
        for (index, (k, a)) in components.into_iter().enumerate() {
            if a.im != 0.0 {
                return Err(BeamError::ComplexAmplitude { index, imag: a.im });
            }
            real.push((k, a.re));
        }
        Self::new(real, particle_mass, dispersion)
    }

    pub fn components(&self) -> &[SpectralComponent] {
        &self.components
    }

    pub fn particle_mass(&self) -> f64 {
        self.particle_mass
    }

    pub fn dispersion(&self) -> Dispersion {
        self.dispersion
    }

    pub fn omega(&self, k: f64) -> f64 {
        match self.dispersion {
            Dispersion::Matter => HBAR * k * k / (2.0 * self.particle_mass),
            Dispersion::VacuumLight => SPEED_OF_LIGHT * k,
        }
    }

    pub fn max_abs_k(&self) -> f64 {
        self.components.iter().map(|c| c.k.abs()).fold(0.0, f64::max)
    }

    /// Same spectrum with every amplitude multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.components {
            c.amplitude *= factor;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefunctionSample {
    pub z: f64,
    pub t: f64,
    pub value: Complex64,
}

/// Sum of plane waves `A_k exp(i(k z - w t))` in component order.
pub fn synthesize_wavefunction(spectrum: &MomentumSpectrum, z: f64, t: f64) -> Complex64 {
    spectrum
        .components
        .iter()
        .map(|c| {
            let phase = c.k * z - spectrum.omega(c.k) * t;
            Complex64::from_polar(c.amplitude, phase)
        })
        .sum()
}

pub fn sample_wavefunction(spectrum: &MomentumSpectrum, z: f64, t: f64) -> WavefunctionSample {
    WavefunctionSample { z, t, value: synthesize_wavefunction(spectrum, z, t) }
}

/// Current from its definition, `(hbar/m) Im(psi* dpsi/dz)`, with the
/// derivative taken by central differences of the real and imaginary parts.
pub fn current_density_fd(spectrum: &MomentumSpectrum, z: f64, t: f64, h: f64) -> Result<f64, BeamError> {
    let psi = synthesize_wavefunction(spectrum, z, t);
    let d_re = central_difference(|s| synthesize_wavefunction(spectrum, s, t).re, z, h)?;
    let d_im = central_difference(|s| synthesize_wavefunction(spectrum, s, t).im, z, h)?;
    Ok(HBAR / spectrum.particle_mass * (psi.re * d_im - psi.im * d_re))
}

/// Incoherent and coherent current terms sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentProfile {
    pub z_grid: Vec<f64>,
    pub incoherent: Vec<f64>,
    pub coherent: Vec<f64>,
    pub total: Vec<f64>,
}

impl CurrentProfile {
    pub fn len(&self) -> usize {
        self.z_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z_grid.is_empty()
    }
}

fn incoherent_current(spectrum: &MomentumSpectrum) -> f64 {
    let sum: f64 = spectrum.components.iter().map(|c| c.k * c.amplitude * c.amplitude).sum();
    HBAR / (2.0 * spectrum.particle_mass) * 2.0 * sum
}

fn coherent_current(spectrum: &MomentumSpectrum, z: f64) -> f64 {
    let comps = &spectrum.components;
    let mut sum = 0.0;
    for (j, kp) in comps.iter().enumerate() {
        for (i, k) in comps.iter().enumerate() {
            if i != j {
                sum += kp.amplitude * k.amplitude * k.k * ((kp.k - k.k) * z).cos();
            }
        }
    }
    HBAR / (2.0 * spectrum.particle_mass) * 2.0 * sum
}

fn check_grid(z_grid: &[f64]) -> Result<(), BeamError> {
    if z_grid.is_empty() || z_grid.iter().any(|z| !z.is_finite()) || z_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(BeamError::InvalidGrid);
    }
    Ok(())
}

/// Spectral decomposition of the current at `t = 0`. Grid points are
/// evaluated in parallel; each point's sum has a fixed order, so the result
/// is identical to [`current_density_spectral_sequential`].
pub fn current_density_spectral(spectrum: &MomentumSpectrum, z_grid: &[f64]) -> Result<CurrentProfile, BeamError> {
    check_grid(z_grid)?;
    let coherent: Vec<f64> = z_grid.par_iter().map(|&z| coherent_current(spectrum, z)).collect();
    Ok(assemble_profile(spectrum, z_grid, coherent))
}

pub fn current_density_spectral_sequential(
    spectrum: &MomentumSpectrum,
    z_grid: &[f64],
) -> Result<CurrentProfile, BeamError> {
    check_grid(z_grid)?;
    let coherent: Vec<f64> = z_grid.iter().map(|&z| coherent_current(spectrum, z)).collect();
    Ok(assemble_profile(spectrum, z_grid, coherent))
}

fn assemble_profile(spectrum: &MomentumSpectrum, z_grid: &[f64], coherent: Vec<f64>) -> CurrentProfile {
    let inc = incoherent_current(spectrum);
    CurrentProfile {
        z_grid: z_grid.to_vec(),
        incoherent: vec![inc; z_grid.len()],
        total: coherent.iter().map(|c| inc + c).collect(),
        coherent,
    }
}

/// Evenly spaced grid including both end points.
pub fn linear_grid(z_min: f64, z_max: f64, samples: usize) -> Result<Vec<f64>, BeamError> {
    if !(z_min.is_finite() && z_max.is_finite() && z_min < z_max && samples >= 2) {
        return Err(BeamError::InvalidGrid);
    }
    let step = (z_max - z_min) / (samples - 1) as f64;
    Ok((0..samples).map(|i| if i == samples - 1 { z_max } else { z_min + step * i as f64 }).collect())
}

/// Predicted longitudinal foci of one wavenumber pair.
#[derive(Debug, Clone, PartialEq)]
pub struct FocusSet {
    pub pair: (f64, f64),
    pub orders: Vec<u32>,
    pub positions: Vec<f64>,
}

/// `z_n = 2 pi n / |k' - k|` for `n = 1..=n_max`.
pub fn focus_positions(k: f64, k_prime: f64, n_max: u32) -> Result<FocusSet, BeamError> {
    if k == k_prime {
        return Err(BeamError::DegeneratePair(k));
    }
    if n_max == 0 {
        return Err(BeamError::NonPositive { name: "n_max", value: 0.0 });
    }
    let dk = (k_prime - k).abs();
    let orders: Vec<u32> = (1..=n_max).collect();
    let positions = orders.iter().map(|&n| 2.0 * PI * f64::from(n) / dk).collect();
    Ok(FocusSet { pair: (k, k_prime), orders, positions })
}

/// `2 n pi hbar / (m dv)`.
pub fn coherence_length_matter(mass: f64, delta_v: f64, n: u32) -> Result<f64, BeamError> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(BeamError::NonPositive { name: "mass", value: mass });
    }
    if !(delta_v.is_finite() && delta_v > 0.0) {
        return Err(BeamError::NonPositive { name: "delta_v", value: delta_v });
    }
    if n == 0 {
        return Err(BeamError::NonPositive { name: "n", value: 0.0 });
    }
    Ok(2.0 * f64::from(n) * PI * HBAR / (mass * delta_v))
}

/// `n c / dnu`.
pub fn coherence_length_optical(delta_nu: f64, n: u32) -> Result<f64, BeamError> {
    if !(delta_nu.is_finite() && delta_nu > 0.0) {
        return Err(BeamError::NonPositive { name: "delta_nu", value: delta_nu });
    }
    if n == 0 {
        return Err(BeamError::NonPositive { name: "n", value: 0.0 });
    }
    Ok(f64::from(n) * SPEED_OF_LIGHT / delta_nu)
}

/// Grid positions of interior local maxima of the coherent term. A
/// flat top (a run of bit-equal samples rising on the left and falling on
/// the right, as a peak midway between two grid points produces) counts as
/// one maximum, reported at the middle of the run. No sub-grid
/// interpolation.
pub fn locate_foci_numeric(profile: &CurrentProfile) -> Vec<f64> {
    let values = &profile.coherent;
    let mut foci = Vec::new();
    let mut i = 1;
    while i + 1 < values.len() {
        if values[i] > values[i - 1] {
            let mut end = i;
            while end + 1 < values.len() && values[end + 1] == values[i] {
                end += 1;
            }
            if end + 1 < values.len() && values[end + 1] < values[end] {
                foci.push(profile.z_grid[(i + end) / 2]);
            }
            i = end + 1;
        } else {
            i += 1;
        }
    }
    foci
}
