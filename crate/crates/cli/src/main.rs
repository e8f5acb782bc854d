//! `cohlen`: coherence lengths of photon and atom-laser beams.
//!
//! Exit codes: 0 success, 2 input error, 3 physical-domain error,
//! 4 internal solver failure.

mod envelope;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cohlen_core::atomlaser::{derive_trap_quantities, AtomLaserError, BeamGeometry};
use cohlen_core::beamsim::{
    coherence_length_optical, current_density_spectral, focus_positions, linear_grid, locate_foci_numeric, Dispersion,
};
use cohlen_core::constants::{PhysicalConstants, SpeciesRegistry, STANDARD_GRAVITY};
use cohlen_core::formats::{parse_spectrum, profile_csv, FormatError, TrapConfigFile};
use serde_json::{json, Map, Value};

use crate::envelope::{auto_length, micrometres, Envelope};

#[derive(Debug, Parser)]
#[command(name = "cohlen", version, about = "Self-focusing and coherence lengths of photon and atom-laser beams")]
struct Cli {
    /// Emit the machine-readable JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Species registry (TOML) replacing the bundled one.
    #[arg(long, global = true, value_name = "PATH")]
    registry: Option<PathBuf>,
    /// Gravitational acceleration in m/s².
    #[arg(long, global = true, value_name = "M_PER_S2")]
    g: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optical coherence length n c / Δν.
    Optical {
        #[arg(long)]
        bandwidth_hz: f64,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Atom-laser coherence length.
    Atom(AtomArgs),
    /// Current-density profile of a discrete momentum spectrum, as CSV.
    Simulate(SimulateArgs),
    /// Species registry commands.
    Species {
        #[command(subcommand)]
        action: SpeciesAction,
    },
}

#[derive(Debug, Args)]
struct AtomArgs {
    /// Species label; defaults to the trap file's species.
    #[arg(long)]
    species: Option<String>,
    /// Extraction point below the trap centre, in metres.
    #[arg(long, value_name = "METRES")]
    zr: Option<f64>,
    /// Trap config file (TOML) from which z_r is derived.
    #[arg(long, value_name = "PATH")]
    trap: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    n: u32,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Spectrum table: one "k_rad_per_m amplitude" pair per line.
    #[arg(long, value_name = "PATH")]
    spectrum: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    z_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    z_max: f64,
    #[arg(long)]
    samples: usize,
    /// Species providing the particle mass.
    #[arg(long, default_value = "Rb87")]
    species: String,
    #[arg(long, value_enum, default_value_t = DispersionArg::Matter)]
    dispersion: DispersionArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DispersionArg {
    Matter,
    Light,
}

#[derive(Debug, Subcommand)]
enum SpeciesAction {
    /// List registry entries.
    List,
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn domain(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }

    fn solver(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }
}

impl From<AtomLaserError> for CliError {
    fn from(err: AtomLaserError) -> Self {
        match err {
            AtomLaserError::InvalidParameter { .. } => Self::input(err.to_string()),
            AtomLaserError::Solver(_) => Self::solver(err.to_string()),
            _ => Self::domain(err.to_string()),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(err: FormatError) -> Self {
        Self::input(err.to_string())
    }
}

struct Context {
    json: bool,
    registry_path: Option<PathBuf>,
    registry: SpeciesRegistry,
    consts: PhysicalConstants,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = String::new();
    match run(cli, &mut stdout) {
        Ok(()) => {
            print!("{stdout}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            print!("{stdout}");
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn run(cli: Cli, out: &mut String) -> Result<(), CliError> {
    let registry = match &cli.registry {
        Some(path) => SpeciesRegistry::from_file(path).map_err(|e| CliError::input(format!("--registry: {e}")))?,
        None => SpeciesRegistry::bundled(),
    };
    let g = cli.g.unwrap_or(STANDARD_GRAVITY);
    let consts =
        PhysicalConstants::with_gravity(g).map_err(|_| CliError::input(format!("--g must be positive, got {g}")))?;
    let ctx = Context { json: cli.json, registry_path: cli.registry, registry, consts };

    match cli.command {
        Command::Optical { bandwidth_hz, n } => cmd_optical(&ctx, bandwidth_hz, n, out),
        Command::Atom(args) => cmd_atom(&ctx, &args, out),
        Command::Simulate(args) => cmd_simulate(&ctx, &args, out),
        Command::Species { action: SpeciesAction::List } => cmd_species_list(&ctx, out),
    }
}

fn check_order(n: u32) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::input("--n must be at least 1"));
    }
    Ok(())
}

fn emit(ctx: &Context, env: &Envelope, human: impl FnOnce(&mut String), out: &mut String) {
    if ctx.json {
        out.push_str(&env.to_json());
    } else {
        human(out);
    }
}

fn cmd_optical(ctx: &Context, bandwidth_hz: f64, n: u32, out: &mut String) -> Result<(), CliError> {
    if !(bandwidth_hz.is_finite() && bandwidth_hz > 0.0) {
        return Err(CliError::input(format!("--bandwidth-hz must be positive, got {bandwidth_hz}")));
    }
    check_order(n)?;
    let length = coherence_length_optical(bandwidth_hz, n).map_err(|e| CliError::input(e.to_string()))?;
    let mut env = Envelope::new("optical");
    env.input("bandwidth_hz", bandwidth_hz).input("n", n);
    env.result("coherence_length_m", length);
    emit(
        ctx,
        &env,
        |out| {
            let _ = writeln!(out, "bandwidth: {bandwidth_hz:e} Hz, n = {n}");
            let _ = writeln!(out, "coherence_length: {} ({length:e} m)", auto_length(length));
        },
        out,
    );
    Ok(())
}

fn read_file(path: &Path, flag: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{flag} {}: {e}", path.display())))
}

fn cmd_atom(ctx: &Context, args: &AtomArgs, out: &mut String) -> Result<(), CliError> {
    check_order(args.n)?;
    if let Some(zr) = args.zr {
        if !(zr.is_finite() && zr >= 0.0) {
            return Err(CliError::input(format!("--zr must be non-negative, got {zr}")));
        }
    }
    let trap = match &args.trap {
        Some(path) => Some(TrapConfigFile::parse(&read_file(path, "--trap")?)?),
        None => None,
    };
    let species_name = match (&args.species, &trap) {
        (Some(name), Some(file)) if *name != file.species => {
            return Err(CliError::input(format!("--species {name} conflicts with trap file species {}", file.species)))
        }
        (Some(name), _) => name.clone(),
        (None, Some(file)) => file.species.clone(),
        (None, None) => return Err(CliError::input("--species is required without --trap")),
    };
    let species = ctx.registry.lookup(&species_name).map_err(|e| CliError::input(format!("--species: {e}")))?.clone();

    let mut env = Envelope::new("atom");
    env.input("species", species_name.clone()).input("n", args.n).input("g_m_per_s2", ctx.consts.g);
    let mut warnings = Vec::new();

    let geometry = match &trap {
        Some(file) => {
            let cfg = file.to_config(&ctx.registry)?;
            let z_override = match (args.zr, file.z_r_override_m) {
                (Some(zr), _) => {
                    warnings.push("--zr overrides the extraction point derived from the trap file".to_string());
                    Some(zr)
                }
                (None, file_override) => file_override,
            };
            let dq = derive_trap_quantities(&cfg, &ctx.consts, z_override)?;
            warnings.extend(dq.warnings());
            env.input("trap_file", args.trap.as_ref().unwrap().display().to_string());
            env.input(
                "z_r_source",
                if args.zr.is_some() {
                    "cli"
                } else if file.z_r_override_m.is_some() {
                    "trap_file"
                } else {
                    "derived"
                },
            );
            env.result("mu_J", dq.mu)
                .result("eta", dq.eta)
                .result("x0_m", dq.x0)
                .result("y0_m", dq.y0)
                .result("z0_m", dq.z0)
                .result("Omega_rf_rad_per_s", dq.omega_rf_rabi)
                .result("delta_rf_rad_per_s", dq.delta_rf)
                .result("U_J_m3", dq.u)
                .result("sigma_m", dq.sigma)
                .result("omega_bar_rad_per_s", dq.omega_bar);
            dq.geometry()
        }
        None => {
            let zr = args.zr.ok_or_else(|| CliError::input("one of --zr or --trap is required"))?;
            env.input("z_r_m", zr).input("z_r_source", "cli");
            BeamGeometry::for_species(&species, &ctx.consts, zr)?
        }
    };

    let result = geometry.coherence_length(args.n)?;
    if !(result.coherence_length.is_finite() && result.coherence_length > 0.0) {
        return Err(CliError::solver(format!("solver returned {}", result.coherence_length)));
    }
    env.result("l_m", result.l)
        .result("z_r_m", result.z_r)
        .result("coherence_length_m", result.coherence_length)
        .result("coherence_length_um", result.coherence_length * 1e6)
        .result("residual_m1.5", result.residual);
    if !warnings.is_empty() {
        env.result("warnings", Value::Array(warnings.iter().cloned().map(Value::from).collect()));
    }
    for warning in &warnings {
        eprintln!("warning: {warning}");
    }

    emit(
        ctx,
        &env,
        |out| {
            let _ = writeln!(out, "species: {species_name}  n = {}  g = {} m/s²", args.n, ctx.consts.g);
            const SHOWN_BELOW: [&str; 6] =
                ["l_m", "z_r_m", "coherence_length_m", "coherence_length_um", "residual_m1.5", "warnings"];
            for (key, value) in env.results.iter().filter(|(k, _)| !SHOWN_BELOW.contains(&k.as_str())) {
                let _ = writeln!(out, "{key}: {value}");
            }
            let _ = writeln!(out, "l: {}", micrometres(result.l));
            let _ = writeln!(out, "z_r: {}", micrometres(result.z_r));
            let _ = writeln!(out, "coherence_length: {}", micrometres(result.coherence_length));
            let _ = writeln!(out, "residual: {:e} m^1.5", result.residual);
        },
        out,
    );
    Ok(())
}

fn cmd_simulate(ctx: &Context, args: &SimulateArgs, out: &mut String) -> Result<(), CliError> {
    let species = ctx.registry.lookup(&args.species).map_err(|e| CliError::input(format!("--species: {e}")))?;
    let dispersion = match args.dispersion {
        DispersionArg::Matter => Dispersion::Matter,
        DispersionArg::Light => Dispersion::VacuumLight,
    };
    let text = read_file(&args.spectrum, "--spectrum")?;
    let spectrum = parse_spectrum(&text, species.mass, dispersion)
        .map_err(|e| CliError::input(format!("{}: {e}", args.spectrum.display())))?;
    let grid = linear_grid(args.z_min, args.z_max, args.samples).map_err(|_| {
        CliError::input(format!(
            "bad range: need finite --z-min < --z-max and --samples >= 2 (got {}, {}, {})",
            args.z_min, args.z_max, args.samples
        ))
    })?;
    let profile = current_density_spectral(&spectrum, &grid).map_err(|e| CliError::input(e.to_string()))?;
    out.push_str(&profile_csv(&profile));

    let comps = spectrum.components();
    if comps.len() < 2 {
        out.push_str("# no foci (single component)\n");
        return Ok(());
    }
    let foci = locate_foci_numeric(&profile);
    let listed: Vec<String> = foci.iter().map(|z| format!("{z:e}")).collect();
    let _ = writeln!(
        out,
        "# detected foci (coherent-term maxima) z_m: {}",
        if listed.is_empty() { "none".to_string() } else { listed.join(" ") }
    );
    for (i, a) in comps.iter().enumerate() {
        for b in &comps[i + 1..] {
            let dk = (b.k - a.k).abs();
            let period = 2.0 * std::f64::consts::PI / dk;
            let n_max = (args.z_max / period).floor().min(1e6);
            let in_range: Vec<String> = if n_max >= 1.0 {
                let set = focus_positions(a.k, b.k, n_max as u32).map_err(|e| CliError::input(e.to_string()))?;
                set.orders
                    .iter()
                    .zip(&set.positions)
                    .filter(|(_, z)| **z >= args.z_min)
                    .map(|(n, z)| format!("n={n}:{z:e}"))
                    .collect()
            } else {
                Vec::new()
            };
            let _ = writeln!(
                out,
                "# predicted pair k={:e} k'={:e} period_m={period:e}: {}",
                a.k,
                b.k,
                if in_range.is_empty() { "none in range".to_string() } else { in_range.join(" ") }
            );
        }
    }
    Ok(())
}

fn cmd_species_list(ctx: &Context, out: &mut String) -> Result<(), CliError> {
    let mut env = Envelope::new("species list");
    env.input("registry", ctx.registry_path.as_ref().map_or("bundled".to_string(), |p| p.display().to_string()));
    let mut table = Map::new();
    for s in ctx.registry.iter() {
        table.insert(
            s.name.clone(),
            json!({
                "mass_amu": s.mass_amu(),
                "mass_kg": s.mass,
                "scattering_length_m": s.scattering_length,
                "source": s.source,
            }),
        );
    }
    env.result("species", Value::Object(table));
    emit(
        ctx,
        &env,
        |out| {
            let _ = writeln!(out, "{:<8} {:>14} {:>22} {:>12}  source", "name", "mass_amu", "mass_kg", "a_nm");
            for s in ctx.registry.iter() {
                let _ = writeln!(
                    out,
                    "{:<8} {:>14} {:>22e} {:>12}  {}",
                    s.name,
                    s.mass_amu(),
                    s.mass,
                    s.scattering_length * 1e9,
                    s.source
                );
            }
        },
        out,
    );
    Ok(())
}
