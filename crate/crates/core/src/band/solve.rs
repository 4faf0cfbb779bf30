//! Band-structure solution: per-k diagonalization, eigenvector-overlap band
//! tracking across the Brillouin zone, gauge fixing and dark/bright
//! labelling.
//!
//! Bands are tracked by maximal successive eigenvector overlap rather than
//! energy sorting; at the k = 0 crossing of the two dark bands energy
//! sorting would mislabel them.

use ndarray::{Array1, Array2};
use ndarray_linalg::Eig;
use num_complex::Complex64 as C64;

use super::bloch::{bloch_hamiltonian, idx};
use super::coupling::coupling_fourier;
use super::{BandLabel, N_COMPONENTS};
use crate::config::{PhysicalConfig, DARK_WEIGHT_TOL};
use crate::error::{Error, Result};
use crate::par;

/// Tracked band structure over the first Brillouin zone.
#[derive(Clone, Debug)]
pub struct BandStructure {
    pub k_grid: Vec<f64>,
    /// Complex band energies, `[k_index, band]`.
    pub energies: Array2<C64>,
    /// Gauge-fixed eigenvectors per k-point; column `b` belongs to band `b`.
    pub vectors: Vec<Array2<C64>>,
    /// Intermediate-state weight per `[k_index, band]`.
    pub e_weight: Array2<f64>,
    /// Photon weight (both directions) per `[k_index, band]`.
    pub photon_weight: Array2<f64>,
    /// Rydberg weight per `[k_index, band]`.
    pub rydberg_weight: Array2<f64>,
    pub labels: Vec<BandLabel>,
    /// Plane-wave cutoff used to build the basis.
    pub pw_cutoff: usize,
    /// Lattice constant (carried for the Wannier stage).
    pub lattice_a: f64,
}

impl BandStructure {
    pub fn n_bands(&self) -> usize {
        self.energies.ncols()
    }

    pub fn band_index(&self, label: BandLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Energies of a labelled band over the k-grid.
    pub fn band_energies(&self, label: BandLabel) -> Option<Vec<C64>> {
        let b = self.band_index(label)?;
        Some(self.energies.column(b).to_vec())
    }
}

/// k-grid { 2πm/(Na) : m = -⌊N/2⌋ .. ⌈N/2⌉-1 } with N = k_points.
pub(crate) fn k_grid(cfg: &PhysicalConfig) -> Vec<f64> {
    let n = cfg.k_points as i64;
    let lo = -(n / 2);
    let hi = (n + 1) / 2 - 1;
    (lo..=hi)
        .map(|m| std::f64::consts::TAU * m as f64 / (n as f64 * cfg.a))
        .collect()
}

/// Diagonalize, track and label all bands.
pub fn solve_bands(cfg: &PhysicalConfig) -> Result<BandStructure> {
    cfg.validate()?;
    let g = coupling_fourier(cfg)?;
    let ks = k_grid(cfg);
    let dim = cfg.basis_dim();

    let eigs: Vec<Result<(Array1<C64>, Array2<C64>)>> = par::map_indexed(ks.len(), |i| {
        let h = bloch_hamiltonian(cfg, &g, ks[i]);
        h.eig()
            .map_err(|e| Error::Numerics(format!("eigensolver failed at k = {:.6}: {e}", ks[i])))
    });

    let mut energies = Array2::<C64>::zeros((ks.len(), dim));
    let mut vectors: Vec<Array2<C64>> = Vec::with_capacity(ks.len());

    let mut prev: Option<Array2<C64>> = None;
    for (ik, item) in eigs.into_iter().enumerate() {
        let (vals, vecs) = item?;
        let order = match &prev {
            None => {
                // Initial ordering by ascending real part.
                let mut order: Vec<usize> = (0..dim).collect();
                order.sort_by(|&a, &b| {
                    vals[a]
                        .re
                        .partial_cmp(&vals[b].re)
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
                order
            }
            Some(prev_vecs) => assign_by_overlap(prev_vecs, &vecs),
        };
        let mut vals_t = Array1::<C64>::zeros(dim);
        let mut vecs_t = Array2::<C64>::zeros((dim, dim));
        for (band, &src) in order.iter().enumerate() {
            vals_t[band] = vals[src];
            let mut col = vecs.column(src).to_owned();
            let norm = col.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            col.mapv_inplace(|c| c / norm);
            gauge_fix(cfg.pw_cutoff, &mut col);
            vecs_t.column_mut(band).assign(&col);
        }
        energies.row_mut(ik).assign(&vals_t);
        prev = Some(vecs_t.clone());
        vectors.push(vecs_t);
    }

    // Component weights.
    let npw = 2 * cfg.pw_cutoff + 1;
    let mut e_weight = Array2::<f64>::zeros((ks.len(), dim));
    let mut photon_weight = Array2::<f64>::zeros((ks.len(), dim));
    let mut rydberg_weight = Array2::<f64>::zeros((ks.len(), dim));
    for ik in 0..ks.len() {
        for band in 0..dim {
            let col = vectors[ik].column(band);
            let mut w = [0.0; N_COMPONENTS];
            for c in 0..N_COMPONENTS {
                for j in 0..npw {
                    w[c] += col[idx(cfg.pw_cutoff, c, j)].norm_sqr();
                }
            }
            photon_weight[[ik, band]] = w[0] + w[1];
            e_weight[[ik, band]] = w[2];
            rydberg_weight[[ik, band]] = w[3];
        }
    }

    let mut bs = BandStructure {
        k_grid: ks,
        energies,
        vectors,
        e_weight,
        photon_weight,
        rydberg_weight,
        labels: Vec::new(),
        pw_cutoff: cfg.pw_cutoff,
        lattice_a: cfg.a,
    };
    label_bands(cfg, &mut bs);
    Ok(bs)
}

/// Greedy best-overlap assignment: `order[band] = column of `cur` that
/// continues band `band` of `prev`. Pairs are claimed in descending overlap,
/// so the result is a permutation.
fn assign_by_overlap(prev: &Array2<C64>, cur: &Array2<C64>) -> Vec<usize> {
    let dim = prev.ncols();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        let pi = prev.column(i);
        for j in 0..dim {
            let cj = cur.column(j);
            let ov: C64 = pi.iter().zip(cj.iter()).map(|(a, b)| a.conj() * b).sum();
            pairs.push((ov.norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut order = vec![usize::MAX; dim];
    let mut used_prev = vec![false; dim];
    let mut used_cur = vec![false; dim];
    let mut assigned = 0;
    for (_, i, j) in pairs {
        if used_prev[i] || used_cur[j] {
            continue;
        }
        order[i] = j;
        used_prev[i] = true;
        used_cur[j] = true;
        assigned += 1;
        if assigned == dim {
            break;
        }
    }
    order
}

/// Rotate the phase so the Rydberg component at G = 0 is real and positive;
/// falls back to the forward photon component, then to the largest entry.
fn gauge_fix(m: usize, col: &mut Array1<C64>) {
    let candidates = [idx(m, 3, m), idx(m, 0, m)];
    let mut reference = None;
    for &c in &candidates {
        if col[c].norm() >= 1e-8 {
            reference = Some(col[c]);
            break;
        }
    }
    let reference = reference.unwrap_or_else(|| {
        let mut best = col[0];
        for v in col.iter() {
            if v.norm() > best.norm() {
                best = *v;
            }
        }
        best
    });
    let phase = reference / reference.norm();
    col.mapv_inplace(|v| v / phase);
}

/// Label the tracked bands. The dark pair is the two bands of lowest mean
/// |Re ε| that combine a small intermediate-state weight with genuine
/// Rydberg participation (a pure photon branch is not a polariton). Within
/// the pair the upper/lower assignment is made pointwise in Re ε: the pair
/// is exactly degenerate at the k = 0 crossing, where continuing
/// eigenvectors through the node is numerically ill-posed, and the
/// pointwise split is what makes the hoppings Hermitian.
fn label_bands(cfg: &PhysicalConfig, bs: &mut BandStructure) {
    let dim = bs.energies.ncols();
    let nk = bs.k_grid.len();
    let nkf = nk as f64;
    bs.labels = vec![BandLabel::Other; dim];
    if cfg.omega_ctrl == 0.0 {
        // No control field: the dark/bright distinction degenerates.
        return;
    }
    let mean_e: Vec<f64> = (0..dim).map(|b| bs.e_weight.column(b).sum() / nkf).collect();
    let mean_ph: Vec<f64> = (0..dim)
        .map(|b| bs.photon_weight.column(b).sum() / nkf)
        .collect();
    let mean_r: Vec<f64> = (0..dim)
        .map(|b| bs.rydberg_weight.column(b).sum() / nkf)
        .collect();
    let mean_abs_re: Vec<f64> = (0..dim)
        .map(|b| bs.energies.column(b).iter().map(|v| v.re.abs()).sum::<f64>() / nkf)
        .collect();

    let mut dark_candidates: Vec<usize> = (0..dim)
        .filter(|&b| mean_e[b] < DARK_WEIGHT_TOL && mean_r[b] >= DARK_WEIGHT_TOL)
        .collect();
    dark_candidates.sort_by(|&a, &b| {
        mean_abs_re[a]
            .partial_cmp(&mean_abs_re[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    if dark_candidates.len() >= 2 {
        let (upper, lower) = (dark_candidates[0], dark_candidates[1]);
        // Pointwise split: column `upper` takes max Re ε of the pair at
        // every k, column `lower` the min, swapping vectors and weights
        // alongside.
        for ik in 0..nk {
            if bs.energies[[ik, upper]].re < bs.energies[[ik, lower]].re {
                let eu = bs.energies[[ik, upper]];
                bs.energies[[ik, upper]] = bs.energies[[ik, lower]];
                bs.energies[[ik, lower]] = eu;
                for w in [
                    &mut bs.e_weight,
                    &mut bs.photon_weight,
                    &mut bs.rydberg_weight,
                ] {
                    let t = w[[ik, upper]];
                    w[[ik, upper]] = w[[ik, lower]];
                    w[[ik, lower]] = t;
                }
                let cu = bs.vectors[ik].column(upper).to_owned();
                let cl = bs.vectors[ik].column(lower).to_owned();
                bs.vectors[ik].column_mut(upper).assign(&cl);
                bs.vectors[ik].column_mut(lower).assign(&cu);
            }
        }
        bs.labels[upper] = BandLabel::DarkUpper;
        bs.labels[lower] = BandLabel::DarkLower;
    }

    for b in 0..dim {
        if bs.labels[b] != BandLabel::Other {
            continue;
        }
        // Atomic-dominated dissipative bands are "bright"; far photon
        // branches stay "other".
        if mean_ph[b] < 0.5 && mean_e[b] >= DARK_WEIGHT_TOL {
            bs.labels[b] = BandLabel::Bright;
        }
    }
}

/// Minimal separation between the bright manifold and the upper dark band:
/// min over k and bright bands of |Re ε_bright - Re ε_dark_upper|.
pub fn band_gap(bs: &BandStructure) -> Result<f64> {
    let du = bs.band_index(BandLabel::DarkUpper).ok_or_else(|| {
        Error::Labelling("no dark_upper band identified (labelling degenerate)".to_string())
    })?;
    let brights: Vec<usize> = (0..bs.n_bands())
        .filter(|&b| bs.labels[b] == BandLabel::Bright)
        .collect();
    if brights.is_empty() {
        return Err(Error::Labelling("no bright band identified".to_string()));
    }
    let mut gap = f64::INFINITY;
    for ik in 0..bs.k_grid.len() {
        let du_e = bs.energies[[ik, du]].re;
        for &b in &brights {
            gap = gap.min((bs.energies[[ik, b]].re - du_e).abs());
        }
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> PhysicalConfig {
        PhysicalConfig {
            n_sites: 16,
            k_points: 16,
            pw_cutoff: 6,
            ..PhysicalConfig::default()
        }
    }

    #[test]
    fn k_grid_matches_definition() {
        let cfg = PhysicalConfig {
            k_points: 4,
            n_sites: 4,
            ..PhysicalConfig::default()
        };
        let ks = k_grid(&cfg);
        let unit = std::f64::consts::TAU / (4.0 * cfg.a);
        let expect = [-2.0 * unit, -unit, 0.0, unit];
        for (a, b) in ks.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn finds_exactly_two_dark_bands() {
        let bs = solve_bands(&small_cfg()).unwrap();
        let darks = bs
            .labels
            .iter()
            .filter(|&&l| l == BandLabel::DarkUpper || l == BandLabel::DarkLower)
            .count();
        assert_eq!(darks, 2);
        assert!(bs.labels.iter().any(|&l| l == BandLabel::Bright));
    }

    #[test]
    fn dark_bands_cross_at_k_zero() {
        let bs = solve_bands(&small_cfg()).unwrap();
        let iu = bs.band_index(BandLabel::DarkUpper).unwrap();
        let il = bs.band_index(BandLabel::DarkLower).unwrap();
        let ik0 = bs.k_grid.iter().position(|&k| k == 0.0).unwrap();
        let scale = bs
            .energies
            .column(iu)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        let du = bs.energies[[ik0, iu]];
        let dl = bs.energies[[ik0, il]];
        assert!(
            (du - dl).norm() < 1e-6 * scale.max(1e-300),
            "dark bands should be degenerate at k = 0: {du} vs {dl}"
        );
    }

    #[test]
    fn k_reflection_maps_dark_bands_onto_each_other() {
        let bs = solve_bands(&small_cfg()).unwrap();
        let iu = bs.band_index(BandLabel::DarkUpper).unwrap();
        let il = bs.band_index(BandLabel::DarkLower).unwrap();
        let scale = bs
            .energies
            .column(iu)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        for (ik, &k) in bs.k_grid.iter().enumerate() {
            if k <= 0.0 {
                continue;
            }
            let Some(jk) = bs.k_grid.iter().position(|&q| (q + k).abs() < 1e-12) else {
                continue;
            };
            // The pair of dark energies at -k is the (possibly swapped) pair at k.
            let mut here = [bs.energies[[ik, iu]].re, bs.energies[[ik, il]].re];
            let mut there = [bs.energies[[jk, iu]].re, bs.energies[[jk, il]].re];
            here.sort_by(|a, b| a.partial_cmp(b).unwrap());
            there.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (a, b) in here.iter().zip(&there) {
                assert!(
                    (a - b).abs() < 1e-6 * scale,
                    "dark pair not symmetric at ±k = {k}"
                );
            }
        }
    }

    #[test]
    fn tracking_is_a_permutation_at_every_step() {
        let bs = solve_bands(&small_cfg()).unwrap();
        // Labels exist per band; every k has every band exactly once by
        // construction. Verify vectors stay normalized as a proxy for a
        // clean permutation (no column duplicated or dropped).
        for vk in &bs.vectors {
            for b in 0..bs.n_bands() {
                let n: f64 = vk.column(b).iter().map(|c| c.norm_sqr()).sum();
                assert!((n - 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn lossless_bands_are_real() {
        let cfg = PhysicalConfig {
            gamma_e: 0.0,
            ..small_cfg()
        };
        let bs = solve_bands(&cfg).unwrap();
        let scale = bs
            .energies
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        for v in bs.energies.iter() {
            assert!(v.im.abs() < 1e-10 * scale, "complex eigenvalue {v} for γ_e = 0");
        }
    }

    #[test]
    fn no_control_field_degenerates_labelling() {
        let cfg = PhysicalConfig {
            omega_ctrl: 0.0,
            ..small_cfg()
        };
        let bs = solve_bands(&cfg).unwrap();
        assert!(bs.band_index(BandLabel::DarkUpper).is_none());
        match band_gap(&bs) {
            Err(Error::Labelling(_)) => {}
            other => panic!("expected labelling error, got {other:?}"),
        }
    }

    #[test]
    fn dark_e_weight_small_away_from_crossing() {
        // Full reference configuration: e-weight of both dark bands below
        // 1e-2 at every |k| > 0.05·π/a.
        let cfg = PhysicalConfig::default();
        let bs = solve_bands(&cfg).unwrap();
        let kba = std::f64::consts::PI / cfg.a;
        for label in [BandLabel::DarkUpper, BandLabel::DarkLower] {
            let b = bs.band_index(label).unwrap();
            for (ik, &k) in bs.k_grid.iter().enumerate() {
                if k.abs() > 0.05 * kba {
                    assert!(
                        bs.e_weight[[ik, b]] < 1e-2,
                        "{label} e-weight {} at k/(π/a) = {}",
                        bs.e_weight[[ik, b]],
                        k / kba
                    );
                }
            }
        }
    }

    #[test]
    fn plane_wave_cutoff_is_converged() {
        // Raising M by 5 moves the dark-band energies by < 1e-4 relative.
        let cfg = PhysicalConfig {
            n_sites: 16,
            k_points: 16,
            ..PhysicalConfig::default()
        };
        let cfg_hi = PhysicalConfig {
            pw_cutoff: cfg.pw_cutoff + 5,
            ..cfg.clone()
        };
        let lo = solve_bands(&cfg).unwrap();
        let hi = solve_bands(&cfg_hi).unwrap();
        for label in [BandLabel::DarkUpper, BandLabel::DarkLower] {
            let bl = lo.band_index(label).unwrap();
            let bh = hi.band_index(label).unwrap();
            let scale = lo
                .energies
                .column(bl)
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max);
            for ik in 0..lo.k_grid.len() {
                let d = (lo.energies[[ik, bl]] - hi.energies[[ik, bh]]).norm();
                assert!(
                    d < 1e-4 * scale,
                    "{label} not converged at k index {ik}: Δ = {d:.3e}, scale = {scale:.3e}"
                );
            }
        }
    }

    #[test]
    fn gap_grows_with_control_field() {
        let mut gaps = Vec::new();
        for nu in [10.0, 15.0, 20.0, 25.0, 30.0] {
            let cfg = PhysicalConfig {
                omega_ctrl: std::f64::consts::TAU * nu,
                ..small_cfg()
            };
            let bs = solve_bands(&cfg).unwrap();
            gaps.push(band_gap(&bs).unwrap());
        }
        for w in gaps.windows(2) {
            assert!(w[1] > w[0], "gap not increasing: {gaps:?}");
        }
    }
}
