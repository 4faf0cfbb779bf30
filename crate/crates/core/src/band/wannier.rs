//! Wannier functions and hopping amplitudes of a tracked band.
//!
//! w_j(z) = N^{-1/2} Σ_k e^{-ikaj} φ_k(z) with the gauge fixed during band
//! tracking (Rydberg component at G = 0 real positive). Hoppings are the
//! discrete Fourier coefficients of the band energy measured from its mean,
//! J_m = -N^{-1} Σ_k e^{ikma} (ε(k) - ε̄), so the lattice Hamiltonian
//! reproduces ε(k) on the grid exactly.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use super::bloch::idx;
use super::solve::BandStructure;
use super::{BandLabel, N_COMPONENTS};
use crate::config::PhysicalConfig;
use crate::error::{Error, Result};

/// A single band in its localized (Wannier) representation. All sites share
/// one profile: w_j(z) = w_0(z - ja) on the N-cell ring.
#[derive(Clone, Debug)]
pub struct WannierBand {
    pub band: BandLabel,
    /// Mean band energy ε̄.
    pub site_energy: C64,
    /// J_m for m = 1..N-1 (N = number of k-points).
    pub hoppings: Vec<C64>,
    /// Uniform real-space grid across the ring, centered on site 0.
    pub z_grid: Vec<f64>,
    /// w_0 samples per component, `[component, z_index]`, normalized so
    /// Σ_c ∫|w|² dz = 1 on the ring.
    pub samples: Array2<C64>,
    pub samples_per_cell: usize,
    /// Rydberg-component weight ∫|w_r|² dz.
    pub rydberg_weight: f64,
    pub lattice_a: f64,
    pub n_cells: usize,
    pw_cutoff: usize,
    ks: Vec<f64>,
    /// Gauge-fixed Bloch coefficient vectors per k, rescaled for evaluation.
    coeffs: Vec<Array1<C64>>,
}

impl WannierBand {
    /// Hopping with sign convention J_{-m} = J_m* (Hermitian completion).
    pub fn hopping(&self, m: i64) -> C64 {
        if m == 0 {
            return C64::new(0.0, 0.0);
        }
        let idx = m.unsigned_abs() as usize - 1;
        if idx >= self.hoppings.len() {
            return C64::new(0.0, 0.0);
        }
        if m > 0 {
            self.hoppings[idx]
        } else {
            self.hoppings[idx].conj()
        }
    }

    /// Largest deviation from J_m = J_{-m}* measured on the k-grid (the -m
    /// coefficient aliases to N-m), relative to the largest |J_m|.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.hoppings.len() + 1;
        let scale = self
            .hoppings
            .iter()
            .map(|j| j.norm())
            .fold(f64::MIN_POSITIVE, f64::max);
        let mut worst: f64 = 0.0;
        for m in 1..n {
            let jm = self.hoppings[m - 1];
            let j_neg = self.hoppings[n - m - 1]; // J_{N-m} = J_{-m} on the grid
            worst = worst.max((jm - j_neg.conj()).norm());
        }
        worst / scale
    }

    /// Evaluate w_0 at an arbitrary position (4 components).
    pub fn evaluate(&self, z: f64) -> [C64; 4] {
        let npw = 2 * self.pw_cutoff + 1;
        let mut out = [C64::new(0.0, 0.0); N_COMPONENTS];
        for (ik, &k) in self.ks.iter().enumerate() {
            let bloch_phase = C64::new(0.0, k * z).exp();
            let c = &self.coeffs[ik];
            for (comp, acc) in out.iter_mut().enumerate() {
                let mut u = C64::new(0.0, 0.0);
                for j in 0..npw {
                    let g = std::f64::consts::TAU * (j as i64 - self.pw_cutoff as i64) as f64
                        / self.lattice_a;
                    u += c[idx(self.pw_cutoff, comp, j)] * C64::new(0.0, g * z).exp();
                }
                *acc += bloch_phase * u;
            }
        }
        out
    }

    /// Density profile Σ_c |w_0(z)|² at an arbitrary position.
    pub fn density(&self, z: f64) -> f64 {
        self.evaluate(z).iter().map(|c| c.norm_sqr()).sum()
    }

    /// Reconstruct ε(k) from ε̄ and the hoppings (inverse DFT identity).
    pub fn reconstruct_energy(&self, k: f64) -> C64 {
        let mut e = self.site_energy;
        for (m, j) in self.hoppings.iter().enumerate() {
            let phase = C64::new(0.0, -k * (m as f64 + 1.0) * self.lattice_a).exp();
            e -= *j * phase;
        }
        e
    }
}

/// Transform a labelled band to its Wannier representation.
pub fn wannier_transform(
    bs: &BandStructure,
    band: BandLabel,
    cfg: &PhysicalConfig,
) -> Result<WannierBand> {
    let b = bs
        .band_index(band)
        .ok_or_else(|| Error::Labelling(format!("band {band} not present in band structure")))?;
    let nk = bs.k_grid.len();
    let nkf = nk as f64;

    let energies: Vec<C64> = bs.energies.column(b).to_vec();
    let site_energy = energies.iter().sum::<C64>() / nkf;

    // J_m = -(1/N) Σ_k e^{ikma} ε̃(k), m = 1..N-1.
    let mut hoppings = Vec::with_capacity(nk - 1);
    for m in 1..nk {
        let mut acc = C64::new(0.0, 0.0);
        for (ik, &k) in bs.k_grid.iter().enumerate() {
            let eps = energies[ik] - site_energy;
            acc += eps * C64::new(0.0, k * m as f64 * bs.lattice_a).exp();
        }
        hoppings.push(-acc / nkf);
    }

    // Real-space samples of w_0 across the ring, site 0 at z = 0.
    let samples_per_cell = (4 * (2 * cfg.pw_cutoff + 1)).next_power_of_two();
    let n_samples = samples_per_cell * nk;
    let dz = bs.lattice_a / samples_per_cell as f64;
    let z0 = -(nk as f64) * bs.lattice_a / 2.0;
    let z_grid: Vec<f64> = (0..n_samples).map(|s| z0 + s as f64 * dz).collect();

    let coeffs: Vec<Array1<C64>> = (0..nk).map(|ik| bs.vectors[ik].column(b).to_owned()).collect();
    let raw = WannierBand {
        band,
        site_energy,
        hoppings,
        z_grid: z_grid.clone(),
        samples: Array2::zeros((N_COMPONENTS, 0)),
        samples_per_cell,
        rydberg_weight: 0.0,
        lattice_a: bs.lattice_a,
        n_cells: nk,
        pw_cutoff: bs.pw_cutoff,
        ks: bs.k_grid.clone(),
        coeffs,
    };

    let mut samples = Array2::<C64>::zeros((N_COMPONENTS, n_samples));
    for (s, &z) in z_grid.iter().enumerate() {
        let w = raw.evaluate(z);
        for c in 0..N_COMPONENTS {
            samples[[c, s]] = w[c];
        }
    }
    // Normalize: Σ_c ∫ |w|² dz = 1 on the ring.
    let norm_sq: f64 = samples.iter().map(|v| v.norm_sqr()).sum::<f64>() * dz;
    if norm_sq <= 0.0 {
        return Err(Error::Numerics("Wannier function has zero norm".to_string()));
    }
    let scale = 1.0 / norm_sq.sqrt();
    samples.mapv_inplace(|v| v * scale);
    let rydberg_weight: f64 = (0..n_samples)
        .map(|s| samples[[3, s]].norm_sqr())
        .sum::<f64>()
        * dz;

    let mut wb = raw;
    // Fold the normalization into the stored coefficients so evaluate() and
    // the cached samples agree.
    for c in wb.coeffs.iter_mut() {
        c.mapv_inplace(|v| v * scale);
    }
    wb.samples = samples;
    wb.rydberg_weight = rydberg_weight;
    Ok(wb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band::solve_bands;
    use approx::assert_abs_diff_eq;

    fn fig2_cfg() -> PhysicalConfig {
        PhysicalConfig {
            n_sites: 16,
            k_points: 16,
            pw_cutoff: 6,
            ..PhysicalConfig::default()
        }
    }

    /// Synthetic single-band structure with a prescribed dispersion; the
    /// eigenvector columns are constant so gauge and tracking are trivial.
    fn synthetic_bs(nk: usize, disp: impl Fn(f64) -> C64) -> BandStructure {
        let cfg = PhysicalConfig {
            n_sites: nk,
            k_points: nk,
            pw_cutoff: 1,
            ..PhysicalConfig::default()
        };
        let ks = super::super::solve::k_grid(&cfg);
        let dim = cfg.basis_dim();
        let mut energies = Array2::<C64>::zeros((nk, dim));
        let mut vectors = Vec::new();
        for (ik, &k) in ks.iter().enumerate() {
            energies[[ik, 0]] = disp(k);
            let mut v = Array2::<C64>::zeros((dim, dim));
            for d in 0..dim {
                v[[d, d]] = C64::new(1.0, 0.0);
            }
            vectors.push(v);
        }
        let mut labels = vec![BandLabel::Other; dim];
        labels[0] = BandLabel::DarkUpper;
        BandStructure {
            k_grid: ks,
            energies,
            vectors,
            e_weight: Array2::zeros((nk, dim)),
            photon_weight: Array2::zeros((nk, dim)),
            rydberg_weight: Array2::zeros((nk, dim)),
            labels,
            pw_cutoff: cfg.pw_cutoff,
            lattice_a: cfg.a,
        }
    }

    #[test]
    fn flat_band_has_no_hopping() {
        let bs = synthetic_bs(12, |_| C64::new(3.5, -0.1));
        let cfg = PhysicalConfig {
            n_sites: 12,
            k_points: 12,
            pw_cutoff: 1,
            ..PhysicalConfig::default()
        };
        let wb = wannier_transform(&bs, BandLabel::DarkUpper, &cfg).unwrap();
        assert_abs_diff_eq!(wb.site_energy.re, 3.5, epsilon = 1e-12);
        for j in &wb.hoppings {
            assert!(j.norm() < 1e-12, "flat band must have J_m = 0");
        }
    }

    #[test]
    fn cosine_band_is_nearest_neighbor() {
        let a = PhysicalConfig::default().a;
        let bs = synthetic_bs(16, move |k| C64::new(-2.0 * (k * a).cos(), 0.0));
        let cfg = PhysicalConfig {
            n_sites: 16,
            k_points: 16,
            pw_cutoff: 1,
            ..PhysicalConfig::default()
        };
        let wb = wannier_transform(&bs, BandLabel::DarkUpper, &cfg).unwrap();
        // ε(k) = -2cos(ka) = -(e^{ika} + e^{-ika}) ⟹ J_1 = 1, rest 0.
        assert_abs_diff_eq!(wb.hopping(1).re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(wb.hopping(-1).re, 1.0, epsilon = 1e-12);
        for m in 2..15 {
            assert!(wb.hopping(m).norm() < 1e-12, "J_{m} should vanish");
        }
    }

    #[test]
    fn dispersion_reconstructs_from_hoppings() {
        let bs = solve_bands(&fig2_cfg()).unwrap();
        let wb = wannier_transform(&bs, BandLabel::DarkUpper, &fig2_cfg()).unwrap();
        let b = bs.band_index(BandLabel::DarkUpper).unwrap();
        let scale = bs
            .energies
            .column(b)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        for (ik, &k) in bs.k_grid.iter().enumerate() {
            let rec = wb.reconstruct_energy(k);
            let act = bs.energies[[ik, b]];
            assert!(
                (rec - act).norm() < 1e-10 * scale,
                "reconstruction off at k = {k}: {rec} vs {act}"
            );
        }
    }

    #[test]
    fn wannier_function_is_normalized_and_orthogonal_to_translates() {
        let cfg = fig2_cfg();
        let bs = solve_bands(&cfg).unwrap();
        let wb = wannier_transform(&bs, BandLabel::DarkUpper, &cfg).unwrap();
        let dz = wb.lattice_a / wb.samples_per_cell as f64;
        let n = wb.z_grid.len();
        // <w_0|w_0> = 1.
        let norm: f64 = wb.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() * dz;
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-6);
        // <w_0|w_j> = 0 for a few circular shifts.
        for shift_cells in [1usize, 2, 5] {
            let shift = shift_cells * wb.samples_per_cell;
            let mut acc = C64::new(0.0, 0.0);
            for s in 0..n {
                let t = (s + shift) % n;
                for c in 0..N_COMPONENTS {
                    acc += wb.samples[[c, s]].conj() * wb.samples[[c, t]];
                }
            }
            let overlap = (acc * dz).norm();
            assert!(
                overlap < 1e-6,
                "|<w_0|w_{shift_cells}>| = {overlap:.2e} too large"
            );
        }
    }

    #[test]
    fn hoppings_follow_inverse_square_power_law() {
        // Reference configuration: fitted exponent of |J_m| over m ∈ [3,10]
        // is -2 ± 0.3, a consequence of the linear dark-band dispersion.
        let cfg = PhysicalConfig::default();
        let bs = solve_bands(&cfg).unwrap();
        let wb = wannier_transform(&bs, BandLabel::DarkUpper, &cfg).unwrap();
        let ms: Vec<f64> = (3..=10).map(|m| m as f64).collect();
        let js: Vec<f64> = (3..=10).map(|m| wb.hopping(m).norm()).collect();
        assert!(js.iter().all(|j| *j > 0.0));
        let (exponent, r2) = crate::numerics::power_law_fit(&ms, &js);
        assert!(
            (exponent + 2.0).abs() <= 0.3,
            "exponent {exponent:.3} outside -2 ± 0.3 (R² = {r2:.4})"
        );
    }

    #[test]
    fn hoppings_are_nearly_hermitian() {
        // J_m = J_{-m}* up to the k-variation of the dissipative part.
        let cfg = PhysicalConfig::default();
        let bs = solve_bands(&cfg).unwrap();
        let wb = wannier_transform(&bs, BandLabel::DarkUpper, &cfg).unwrap();
        let defect = wb.hermiticity_defect();
        assert!(defect < 0.05, "hermiticity defect {defect:.3e}");
    }

    #[test]
    fn gap_dominates_nearest_neighbor_hopping() {
        let cfg = PhysicalConfig::default();
        let bs = solve_bands(&cfg).unwrap();
        let wb = wannier_transform(&bs, BandLabel::DarkUpper, &cfg).unwrap();
        let gap = crate::band::band_gap(&bs).unwrap();
        assert!(
            gap > 10.0 * wb.hopping(1).norm(),
            "gap {gap:.3e} vs |J1| {:.3e}",
            wb.hopping(1).norm()
        );
    }

    #[test]
    fn missing_band_is_an_error() {
        let cfg = PhysicalConfig {
            omega_ctrl: 0.0,
            ..fig2_cfg()
        };
        let bs = solve_bands(&cfg).unwrap();
        assert!(wannier_transform(&bs, BandLabel::DarkUpper, &cfg).is_err());
    }
}
