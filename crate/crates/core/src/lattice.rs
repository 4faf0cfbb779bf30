//! The interacting N-site hard-core model: blockade radii, regularized van
//! der Waals matrix, effective decay rates, and the assembled [`SpinModel`].

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::band::WannierBand;
use crate::config::{GammaOut, PhysicalConfig};
use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;
use crate::par;

/// Hard-core spin model for the dark-state polaritons.
///
/// Hopping is Hermitian with zero diagonal, the interaction matrix is
/// symmetric and enters the Hamiltonian over ordered pairs (its 1/2
/// regularized integral makes the pair energy come out once). The pump acts
/// on site 1, output coupling on sites 1 and N.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SpinModel {
    pub n_sites: usize,
    /// J_{ij}: coefficient of σ_i⁺σ_j⁻, J_{ij} = J_{ji}*.
    pub hopping: Array2<C64>,
    /// V_{ij} ≥ 0, symmetric; diagonal unused under the hard-core constraint.
    pub interaction: Array2<f64>,
    /// On-site detuning β.
    pub beta: f64,
    /// Coherent pump amplitude on site 1.
    pub pump: f64,
    /// Per-site Rydberg decay rates γ_i.
    pub gamma_site: Vec<f64>,
    /// Output coupling rate at sites 1 and N.
    pub gamma_out: f64,
    /// Blockade window radius in sites (≥ 1).
    pub blockade_sites: usize,
}

impl SpinModel {
    /// |J₁| taken from the first off-diagonal.
    pub fn j1_abs(&self) -> f64 {
        if self.n_sites >= 2 {
            self.hopping[[1, 0]].norm()
        } else {
            0.0
        }
    }

    /// Largest rate appearing in the model; sets integrator steps.
    pub fn max_rate(&self) -> f64 {
        let mut r = self.pump.abs().max(self.beta.abs()).max(self.gamma_out);
        r = r.max(self.j1_abs());
        for &g in &self.gamma_site {
            r = r.max(g);
        }
        r.max(1e-12)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_sites;
        if self.hopping.nrows() != n
            || self.hopping.ncols() != n
            || self.interaction.nrows() != n
            || self.interaction.ncols() != n
            || self.gamma_site.len() != n
        {
            return Err(Error::Dimension(format!(
                "model arrays inconsistent with n_sites = {n}"
            )));
        }
        for i in 0..n {
            if self.hopping[[i, i]].norm() > 0.0 {
                return Err(Error::InvalidConfig("hopping diagonal must vanish".into()));
            }
            for j in 0..n {
                if (self.hopping[[i, j]] - self.hopping[[j, i]].conj()).norm() > 1e-12 {
                    return Err(Error::InvalidConfig("hopping must be Hermitian".into()));
                }
                if (self.interaction[[i, j]] - self.interaction[[j, i]]).abs() > 1e-12 {
                    return Err(Error::InvalidConfig("interaction must be symmetric".into()));
                }
            }
        }
        if self.gamma_site.iter().any(|&g| g < 0.0) || self.gamma_out < 0.0 {
            return Err(Error::InvalidConfig("decay rates must be non-negative".into()));
        }
        Ok(())
    }
}

/// Blockade radii (r̃_b, r_b): the hopping-defined radius (C₆/|J₁|)^{1/6}
/// and the EIT-linewidth radius (C₆|Δ|/Ω²)^{1/6}.
pub fn blockade_radii(cfg: &PhysicalConfig, j1_abs: f64) -> Result<(f64, f64)> {
    if cfg.c6 < 0.0 {
        return Err(Error::UnsupportedInteraction(
            "attractive van der Waals (c6 < 0) is out of scope".to_string(),
        ));
    }
    if cfg.c6 == 0.0 {
        return Ok((0.0, 0.0));
    }
    if j1_abs == 0.0 {
        return Err(Error::InvalidConfig(
            "blockade radii need J1 != 0".to_string(),
        ));
    }
    if cfg.omega_ctrl <= 0.0 {
        return Err(Error::InvalidConfig(
            "blockade radii need a control field".to_string(),
        ));
    }
    let r_tilde = (cfg.c6 / j1_abs).powf(1.0 / 6.0);
    let delta_mag = cfg.delta_complex().norm();
    let r_b = (cfg.c6 * delta_mag / cfg.omega_ctrl.powi(2)).powf(1.0 / 6.0);
    Ok((r_tilde, r_b))
}

/// Interaction matrix with quadrature-convergence warnings attached.
#[derive(Clone, Debug)]
pub struct InteractionMatrix {
    pub v: Array2<f64>,
    pub warnings: Vec<String>,
}

/// Regularized van der Waals matrix
/// V_ij = (C₆/2)∬ dz dz' |w_i(z)|²|w_j(z')|² / (r_b⁶ + |z-z'|⁶),
/// |w|² summing all four components. Tensor-product Gauss–Legendre per unit
/// cell pair with the Wannier tails truncated at `tail_cells` cells; only
/// the separation |i-j| matters because all sites share one profile.
pub fn interaction_matrix(
    wb: &WannierBand,
    r_b: f64,
    cfg: &PhysicalConfig,
) -> Result<InteractionMatrix> {
    let n = cfg.n_sites;
    let window = cfg.tail_cells.min(wb.n_cells / 2);
    if window < 1 {
        return Err(Error::InvalidConfig(
            "wannier samples span fewer cells than tail_cells requires".to_string(),
        ));
    }
    let order = cfg.quad_order.max(2);

    let v_of_distance = |order: usize| -> Vec<f64> {
        let (nodes, weights) = gauss_legendre(order);
        let a = wb.lattice_a;
        // Density on the quadrature grid over the ±window cells around one site.
        let cells: Vec<i64> = (-(window as i64)..(window as i64)).collect();
        let mut zs = Vec::with_capacity(cells.len() * order);
        let mut ws = Vec::with_capacity(cells.len() * order);
        for &c in &cells {
            let lo = c as f64 * a;
            for (x, w) in nodes.iter().zip(&weights) {
                zs.push(lo + 0.5 * a * (x + 1.0));
                ws.push(0.5 * a * w);
            }
        }
        let rho: Vec<f64> = zs.iter().map(|&z| wb.density(z)).collect();
        let r6 = r_b.powi(6);
        par::map_indexed(n, |m| {
            let sep = m as f64 * a;
            let mut acc = crate::numerics::KahanSum::new();
            for (p, (&zp, &wp)) in zs.iter().zip(&ws).enumerate() {
                let fp = rho[p] * wp;
                for (q, (&zq, &wq)) in zs.iter().zip(&ws).enumerate() {
                    let d = sep + zq - zp;
                    acc.add(fp * rho[q] * wq / (r6 + d.powi(6)));
                }
            }
            0.5 * cfg.c6 * acc.value()
        })
    };

    let coarse = v_of_distance(order);
    let fine = v_of_distance(2 * order);
    let mut warnings = Vec::new();
    for (m, (c, f)) in coarse.iter().zip(&fine).enumerate() {
        let denom = f.abs().max(1e-300);
        if (c - f).abs() / denom > 1e-4 {
            warnings.push(format!(
                "interaction quadrature not converged at |i-j| = {m}: rel change {:.2e}",
                (c - f).abs() / denom
            ));
        }
    }

    let mut v = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            v[[i, j]] = fine[(i as i64 - j as i64).unsigned_abs() as usize];
        }
    }
    Ok(InteractionMatrix { v, warnings })
}

/// Effective Rydberg decay per site, γ_i = γ_r ∫|w_r|² dz. All sites share
/// one Wannier profile, so the rate is uniform.
pub fn effective_decay(wb: &WannierBand, cfg: &PhysicalConfig) -> Vec<f64> {
    vec![cfg.gamma_r * wb.rydberg_weight; cfg.n_sites]
}

/// Assembled model plus non-fatal diagnostics.
#[derive(Clone, Debug)]
pub struct AssembledModel {
    pub model: SpinModel,
    pub r_tilde_b: f64,
    pub r_b: f64,
    pub warnings: Vec<String>,
}

/// Build the spin model from the Wannier band, interaction matrix and decay
/// rates. Resolves the `equal_J1` output-coupling sentinel, truncates
/// hopping at m = N-1, and rounds the blockade radius to sites.
pub fn assemble_spin_model(
    cfg: &PhysicalConfig,
    wb: &WannierBand,
    v: &InteractionMatrix,
    gamma: &[f64],
) -> Result<AssembledModel> {
    let n = cfg.n_sites;
    if v.v.nrows() != n || gamma.len() != n {
        return Err(Error::Dimension(format!(
            "interaction {}x{} / gamma {} inconsistent with n_sites = {n}",
            v.v.nrows(),
            v.v.ncols(),
            gamma.len()
        )));
    }
    if wb.hoppings.len() < n.saturating_sub(1) {
        return Err(Error::Dimension(format!(
            "wannier band provides {} hoppings, model needs {}",
            wb.hoppings.len(),
            n - 1
        )));
    }
    let mut warnings = Vec::new();

    // Hermitian hopping from J_{|i-j|}: row i, column j with i > j carries
    // J_m as computed, the transpose its conjugate.
    let mut hopping = Array2::<C64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            hopping[[i, j]] = wb.hopping(i as i64 - j as i64);
        }
    }

    let j1_abs = if n >= 2 { hopping[[1, 0]].norm() } else { 0.0 };
    let gamma_out = match cfg.gamma_out {
        GammaOut::EqualJ1 => j1_abs,
        GammaOut::Value(g) => g,
    };

    let (r_tilde_b, r_b) = if cfg.c6 == 0.0 {
        (0.0, 0.0)
    } else if n >= 2 {
        let radii = blockade_radii(cfg, j1_abs)?;
        if radii.1 <= radii.0 {
            warnings.push(format!(
                "r_b = {:.3} µm does not exceed r̃_b = {:.3} µm; outside the regime where \
                 the blockade only regularizes the interaction",
                radii.1, radii.0
            ));
        }
        radii
    } else {
        (0.0, 0.0)
    };

    // Validity of dropping the lower band: |J1/(2ε - β)| small.
    let denom = 2.0 * wb.site_energy.re - cfg.beta;
    if denom != 0.0 {
        let ratio = j1_abs / denom.abs();
        if ratio > 0.1 {
            warnings.push(format!(
                "single-band validity ratio |J1/(2ε-β)| = {ratio:.3} exceeds 0.1"
            ));
        }
    }

    let blockade_sites = ((r_b / cfg.a).round() as i64).max(1) as usize;

    let model = SpinModel {
        n_sites: n,
        hopping,
        interaction: v.v.clone(),
        beta: cfg.beta,
        pump: cfg.pump,
        gamma_site: gamma.to_vec(),
        gamma_out,
        blockade_sites,
    };
    model.validate()?;
    let mut all_warnings = v.warnings.clone();
    all_warnings.extend(warnings);
    Ok(AssembledModel {
        model,
        r_tilde_b,
        r_b,
        warnings: all_warnings,
    })
}

/// Run the whole single-particle stage: bands → dark upper band → Wannier →
/// interactions → decay → model.
pub fn build_pipeline(cfg: &PhysicalConfig) -> Result<PipelineOutput> {
    let bands = crate::band::solve_bands(cfg)?;
    let wannier = crate::band::wannier_transform(&bands, crate::band::BandLabel::DarkUpper, cfg)?;
    let j1_abs = wannier.hopping(1).norm();
    let r_b = if cfg.c6 > 0.0 && j1_abs > 0.0 {
        blockade_radii(cfg, j1_abs)?.1
    } else {
        0.0
    };
    let interactions = interaction_matrix(&wannier, r_b, cfg)?;
    let decay = effective_decay(&wannier, cfg);
    let assembled = assemble_spin_model(cfg, &wannier, &interactions, &decay)?;
    Ok(PipelineOutput {
        bands,
        wannier,
        assembled,
    })
}

pub struct PipelineOutput {
    pub bands: crate::band::BandStructure,
    pub wannier: WannierBand,
    pub assembled: AssembledModel,
}
