//! Physical configuration, file parsing and unit normalization.
//!
//! Config files are flat INI-style text with `[physical]`, `[numerics]` and
//! `[run]` sections. Frequency-like entries are given as plain frequencies ν
//! in MHz and stored internally as angular frequencies ω = 2πν in rad/µs
//! (ħ = 1 throughout). Lengths are in µm, except the atomic density `n0`
//! which is accepted in cm⁻³. Times are in µs.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in µm/µs.
pub const C_LIGHT: f64 = 2.99792458e8;

/// ⁸⁷Rb D2 transition angular frequency, rad/µs (384.23 THz).
pub const OMEGA_GE_RB87_D2: f64 = TAU * 384.23e6;

/// Default envelope propagation speed for the photon kinetic term, µm/µs.
///
/// This is a model parameter, not the vacuum speed of light: with the
/// cell-periodic coupling used here, a kinetic speed of c would confine the
/// polaritonic character of the dark bands to a vanishing neighborhood of
/// k = 0 and leave bare photon branches elsewhere. The default is calibrated
/// so the dark bands are linear across the zone with the expected m⁻²
/// hopping tail; override with `c_kinetic` in the config file.
pub const C_KINETIC_DEFAULT: f64 = 3000.0;

/// Threshold on the intermediate-state weight below which a band counts as
/// dark.
pub const DARK_WEIGHT_TOL: f64 = 0.05;

/// Output-coupling specification: either an explicit rate or "same as the
/// nearest-neighbor hopping magnitude", resolved after the band stage.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GammaOut {
    EqualJ1,
    Value(f64),
}

/// All experimental and numerical parameters of a run.
///
/// Angular frequencies in rad/µs, lengths in µm, densities in µm⁻³.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhysicalConfig {
    /// Control Rabi frequency Ω.
    pub omega_ctrl: f64,
    /// Intermediate-state detuning δ_e (signed).
    pub delta_e: f64,
    /// Intermediate-state linewidth γ_e.
    pub gamma_e: f64,
    /// Rydberg-state decay rate γ_r.
    pub gamma_r: f64,
    /// Two-photon detuning δ₂ (signed, 0 on EIT resonance).
    pub delta2: f64,
    /// Lattice constant a.
    pub a: f64,
    /// Number of lattice sites N.
    pub n_sites: usize,
    /// Mean atomic density n₀ in µm⁻³.
    pub n0: f64,
    /// Gaussian width of the on-site density profile.
    pub sigma_density: f64,
    /// Van der Waals coefficient C₆ in rad/µs·µm⁶.
    pub c6: f64,
    /// Coherent pump amplitude P applied to site 1.
    pub pump: f64,
    /// Drive detuning β from the upper dark band.
    pub beta: f64,
    /// Output coupling at the chain ends.
    pub gamma_out: GammaOut,
    /// Probe transition frequency ω_ge (enters only the coupling constant g̃).
    pub omega_ge: f64,
    /// Envelope propagation speed in the photon kinetic term, µm/µs.
    pub c_kinetic: f64,
    /// Plane-wave cutoff M (reciprocal vectors -M..M).
    pub pw_cutoff: usize,
    /// Number of k-points in the Brillouin zone (≥ n_sites).
    pub k_points: usize,
    /// Gauss–Legendre order per cell for the interaction quadrature.
    pub quad_order: usize,
    /// Wannier tail truncation for the interaction quadrature, in cells.
    pub tail_cells: usize,
    /// Master seed for all stochastic components.
    pub seed: u64,
}

impl Default for PhysicalConfig {
    /// Reference parameter set: Ω/2π = 18 MHz, δ_e/2π = 20 MHz,
    /// γ_e/2π = 6 MHz, a = 532 nm, n₀ = 10¹³ cm⁻³, σ = 25 nm.
    fn default() -> Self {
        Self {
            omega_ctrl: TAU * 18.0,
            delta_e: TAU * 20.0,
            gamma_e: TAU * 6.0,
            // Chosen so the effective site decay γ_i = γ_r·(Rydberg weight)
            // of the default pipeline comes out at the reference 12.5 kHz.
            gamma_r: TAU * 0.02478,
            delta2: 0.0,
            a: 0.532,
            n_sites: 40,
            n0: 10.0,
            sigma_density: 0.025,
            c6: TAU * 86.0,
            pump: TAU * 0.125,
            beta: 0.0,
            gamma_out: GammaOut::EqualJ1,
            omega_ge: OMEGA_GE_RB87_D2,
            c_kinetic: C_KINETIC_DEFAULT,
            pw_cutoff: 15,
            k_points: 40,
            quad_order: 32,
            tail_cells: 5,
            seed: 7,
        }
    }
}

impl PhysicalConfig {
    /// Collective coupling prefactor g̃ = [6π γ_e c³ / ω_ge²]^{1/2} in
    /// µm^{3/2}/µs, with c the physical speed of light.
    pub fn g_tilde(&self) -> f64 {
        (6.0 * std::f64::consts::PI * self.gamma_e * C_LIGHT.powi(3) / self.omega_ge.powi(2))
            .sqrt()
    }

    /// Complex intermediate-state detuning Δ = δ_e - iγ_e.
    pub fn delta_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.delta_e, -self.gamma_e)
    }

    /// Plane-wave basis dimension 4(2M+1).
    pub fn basis_dim(&self) -> usize {
        4 * (2 * self.pw_cutoff + 1)
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.a <= 0.0 {
            problems.push("a must be positive".to_string());
        }
        if self.n_sites < 1 {
            problems.push("n_sites must be at least 1".to_string());
        }
        if self.pw_cutoff < 1 {
            problems.push("pw_cutoff must be at least 1".to_string());
        }
        if self.k_points < self.n_sites {
            problems.push(format!(
                "k_points ({}) must be at least n_sites ({})",
                self.k_points, self.n_sites
            ));
        }
        if self.sigma_density <= 0.0 {
            problems.push("sigma_density must be positive".to_string());
        }
        for (name, v) in [
            ("omega_ctrl", self.omega_ctrl),
            ("gamma_e", self.gamma_e),
            ("gamma_r", self.gamma_r),
            ("pump", self.pump),
            ("n0", self.n0),
            ("omega_ge", self.omega_ge),
            ("c_kinetic", self.c_kinetic),
        ] {
            if v < 0.0 {
                problems.push(format!("{name} must be non-negative"));
            }
        }
        if let GammaOut::Value(v) = self.gamma_out {
            if v < 0.0 {
                problems.push("gamma_out must be non-negative".to_string());
            }
        }
        if self.quad_order < 2 {
            problems.push("quad_order must be at least 2".to_string());
        }
        if self.tail_cells < 1 {
            problems.push("tail_cells must be at least 1".to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(problems.join("; ")))
        }
    }
}

/// Run-level parameters not part of the physics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunPlan {
    /// Final time of the output grid, µs.
    pub t_max: f64,
    /// Number of recorded grid points (excluding t = 0).
    pub n_times: usize,
    /// Trajectory count for the Monte-Carlo engine.
    pub n_traj: usize,
    /// Integrator step override for the exact engine, µs.
    pub dt: Option<f64>,
    /// Variational step override, µs.
    pub tau: Option<f64>,
    /// Variational sweeps per time step.
    pub n_sweeps: usize,
    /// Whether the output coupling needs the band stage first.
    pub deferred_gamma_out: bool,
}

impl Default for RunPlan {
    fn default() -> Self {
        Self {
            t_max: 40.0,
            n_times: 200,
            n_traj: 2000,
            dt: None,
            tau: None,
            n_sweeps: 1,
            deferred_gamma_out: true,
        }
    }
}

/// Parse and validate a config file; returns the normalized config, the run
/// plan and the canonical resolved text (used for hashing and the manifest).
pub fn validate_config(path: &Path) -> Result<(PhysicalConfig, RunPlan, String)> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&raw)
}

const REQUIRED_KEYS: [&str; 4] = ["c6", "omega_ctrl", "a", "n_sites"];

pub fn parse_config(text: &str) -> Result<(PhysicalConfig, RunPlan, String)> {
    let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    let mut current = "physical".to_string();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split(|c| c == '#' || c == ';').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            current = line[1..line.len() - 1].trim().to_lowercase();
            if !["physical", "numerics", "run"].contains(&current.as_str()) {
                return Err(Error::InvalidConfig(format!(
                    "unknown section [{current}] at line {}",
                    lineno + 1
                )));
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::InvalidConfig(format!(
                "line {} is not `key = value`: {line:?}",
                lineno + 1
            )));
        };
        sections
            .entry(current.clone())
            .or_default()
            .insert(key.trim().to_lowercase(), value.trim().to_string());
    }

    let mut cfg = PhysicalConfig::default();
    let mut plan = RunPlan::default();
    let mut seen = Vec::new();

    let parse_f64 = |key: &str, v: &str| -> Result<f64> {
        v.parse::<f64>()
            .map_err(|_| Error::InvalidConfig(format!("key `{key}`: expected a number, got {v:?}")))
    };
    let parse_usize = |key: &str, v: &str| -> Result<usize> {
        v.parse::<usize>().map_err(|_| {
            Error::InvalidConfig(format!("key `{key}`: expected an integer, got {v:?}"))
        })
    };

    if let Some(phys) = sections.get("physical") {
        for (key, value) in phys {
            seen.push(key.clone());
            match key.as_str() {
                // ν in MHz -> ω = 2πν rad/µs
                "omega_ctrl" => cfg.omega_ctrl = TAU * parse_f64(key, value)?,
                "delta_e" => cfg.delta_e = TAU * parse_f64(key, value)?,
                "gamma_e" => cfg.gamma_e = TAU * parse_f64(key, value)?,
                "gamma_r" => cfg.gamma_r = TAU * parse_f64(key, value)?,
                "delta2" => cfg.delta2 = TAU * parse_f64(key, value)?,
                "pump" => cfg.pump = TAU * parse_f64(key, value)?,
                "beta" => cfg.beta = TAU * parse_f64(key, value)?,
                "omega_ge" => cfg.omega_ge = TAU * parse_f64(key, value)?,
                // MHz·µm⁶ -> rad/µs·µm⁶
                "c6" => cfg.c6 = TAU * parse_f64(key, value)?,
                "gamma_out" => {
                    if value.eq_ignore_ascii_case("equal_j1") {
                        cfg.gamma_out = GammaOut::EqualJ1;
                    } else {
                        cfg.gamma_out = GammaOut::Value(TAU * parse_f64(key, value)?);
                    }
                }
                "a" => cfg.a = parse_f64(key, value)?,
                "sigma_density" => cfg.sigma_density = parse_f64(key, value)?,
                // cm⁻³ -> µm⁻³
                "n0" => cfg.n0 = parse_f64(key, value)? * 1e-12,
                "n_sites" => cfg.n_sites = parse_usize(key, value)?,
                "c_kinetic" => cfg.c_kinetic = parse_f64(key, value)?,
                _ => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown key `{key}` in [physical]"
                    )))
                }
            }
        }
    }
    // k_points defaults to n_sites unless given explicitly.
    cfg.k_points = cfg.n_sites.max(1);

    if let Some(num) = sections.get("numerics") {
        for (key, value) in num {
            match key.as_str() {
                "pw_cutoff" => cfg.pw_cutoff = parse_usize(key, value)?,
                "k_points" => cfg.k_points = parse_usize(key, value)?,
                "quad_order" => cfg.quad_order = parse_usize(key, value)?,
                "tail_cells" => cfg.tail_cells = parse_usize(key, value)?,
                "dt" => plan.dt = Some(parse_f64(key, value)?),
                "tau" => plan.tau = Some(parse_f64(key, value)?),
                _ => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown key `{key}` in [numerics]"
                    )))
                }
            }
        }
    }

    if let Some(run) = sections.get("run") {
        for (key, value) in run {
            match key.as_str() {
                "seed" => {
                    cfg.seed = value.parse::<u64>().map_err(|_| {
                        Error::InvalidConfig(format!("key `seed`: expected u64, got {value:?}"))
                    })?
                }
                "t_max" => plan.t_max = parse_f64(key, value)?,
                "n_times" => plan.n_times = parse_usize(key, value)?,
                "n_traj" => plan.n_traj = parse_usize(key, value)?,
                "n_sweeps" => plan.n_sweeps = parse_usize(key, value)?.max(1),
                _ => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown key `{key}` in [run]"
                    )))
                }
            }
        }
    }

    let missing: Vec<&str> = REQUIRED_KEYS
        .iter()
        .filter(|k| !seen.iter().any(|s| s == *k))
        .copied()
        .collect();
    if !missing.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "missing required keys: {}",
            missing.join(", ")
        )));
    }

    cfg.validate()?;
    plan.deferred_gamma_out = cfg.gamma_out == GammaOut::EqualJ1;
    if plan.t_max <= 0.0 || plan.n_times < 2 {
        return Err(Error::InvalidConfig(
            "t_max must be positive and n_times at least 2".to_string(),
        ));
    }

    let echo = canonical_text(&cfg, &plan);
    Ok((cfg, plan, echo))
}

/// Deterministic key = value rendering of the fully resolved configuration.
pub fn canonical_text(cfg: &PhysicalConfig, plan: &RunPlan) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "[physical]");
    let _ = writeln!(s, "omega_ctrl = {:.17e}", cfg.omega_ctrl);
    let _ = writeln!(s, "delta_e = {:.17e}", cfg.delta_e);
    let _ = writeln!(s, "gamma_e = {:.17e}", cfg.gamma_e);
    let _ = writeln!(s, "gamma_r = {:.17e}", cfg.gamma_r);
    let _ = writeln!(s, "delta2 = {:.17e}", cfg.delta2);
    let _ = writeln!(s, "a = {:.17e}", cfg.a);
    let _ = writeln!(s, "n_sites = {}", cfg.n_sites);
    let _ = writeln!(s, "n0 = {:.17e}", cfg.n0);
    let _ = writeln!(s, "sigma_density = {:.17e}", cfg.sigma_density);
    let _ = writeln!(s, "c6 = {:.17e}", cfg.c6);
    let _ = writeln!(s, "pump = {:.17e}", cfg.pump);
    let _ = writeln!(s, "beta = {:.17e}", cfg.beta);
    let _ = match cfg.gamma_out {
        GammaOut::EqualJ1 => writeln!(s, "gamma_out = equal_J1"),
        GammaOut::Value(v) => writeln!(s, "gamma_out = {:.17e}", v),
    };
    let _ = writeln!(s, "omega_ge = {:.17e}", cfg.omega_ge);
    let _ = writeln!(s, "c_kinetic = {:.17e}", cfg.c_kinetic);
    let _ = writeln!(s, "[numerics]");
    let _ = writeln!(s, "pw_cutoff = {}", cfg.pw_cutoff);
    let _ = writeln!(s, "k_points = {}", cfg.k_points);
    let _ = writeln!(s, "quad_order = {}", cfg.quad_order);
    let _ = writeln!(s, "tail_cells = {}", cfg.tail_cells);
    if let Some(dt) = plan.dt {
        let _ = writeln!(s, "dt = {:.17e}", dt);
    }
    if let Some(tau) = plan.tau {
        let _ = writeln!(s, "tau = {:.17e}", tau);
    }
    let _ = writeln!(s, "[run]");
    let _ = writeln!(s, "seed = {}", cfg.seed);
    let _ = writeln!(s, "t_max = {:.17e}", plan.t_max);
    let _ = writeln!(s, "n_times = {}", plan.n_times);
    let _ = writeln!(s, "n_traj = {}", plan.n_traj);
    let _ = writeln!(s, "n_sweeps = {}", plan.n_sweeps);
    s
}

/// SHA-256 of the canonical config text, hex-encoded.
pub fn config_hash(canonical: &str) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}
