//! Self-focusing and coherence lengths of photon and atom-laser beams.
//!
//! * [`beamsim`]: discrete-spectrum beams, their probability current, and
//!   the longitudinal focusing condition `(k' - k) z = 2 n pi`.
//! * [`atomlaser`]: rf output coupling from a trapped condensate, the
//!   falling beam's local wavenumber, and the atom-laser coherence length.
//! * [`constants`], [`numerics`], [`formats`]: supporting pieces.

pub mod atomlaser;
pub mod beamsim;
pub mod constants;
pub mod formats;
pub mod numerics;

pub use atomlaser::{
    chemical_potential, coherence_length, derive_trap_quantities, evaluate_psi0, AtomLaserError, BeamGeometry,
    BeamPoint, CoherenceResult, DerivedTrapQuantities, TrapConfig,
};
pub use beamsim::{
    coherence_length_matter, coherence_length_optical, current_density_fd, current_density_spectral, focus_positions,
    locate_foci_numeric, synthesize_wavefunction, BeamError, CurrentProfile, Dispersion, FocusSet, MomentumSpectrum,
};
pub use constants::{lookup_species, PhysicalConstants, Species, SpeciesError, SpeciesRegistry};
pub use numerics::{central_difference, expand_bracket, find_root, Bracket, NumericsError, RootResult};
