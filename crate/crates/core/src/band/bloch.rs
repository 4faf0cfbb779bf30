//! Bloch Hamiltonian in the plane-wave ⊗ component basis.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::coupling::CouplingFourier;
use super::N_COMPONENTS;
use crate::config::PhysicalConfig;

/// Basis index for component `c` and plane-wave slot `j` (G_j = 2π(j-M)/a).
#[inline]
pub(crate) fn idx(m: usize, c: usize, j: usize) -> usize {
    c * (2 * m + 1) + j
}

/// Bloch Hamiltonian at quasimomentum k, dimension 4(2M+1).
///
/// Photon blocks carry ±c(k+G) on the diagonal, the intermediate state the
/// complex detuning Δ = δ_e - iγ_e, the Rydberg state δ₂. The coupling
/// g_{G-G'} connects both photon components to the intermediate state and Ω
/// connects it to the Rydberg state. The matrix is non-Hermitian exactly
/// when γ_e > 0.
pub fn bloch_hamiltonian(cfg: &PhysicalConfig, g: &CouplingFourier, k: f64) -> Array2<C64> {
    let m = cfg.pw_cutoff;
    let npw = 2 * m + 1;
    let dim = N_COMPONENTS * npw;
    let mut h = Array2::<C64>::zeros((dim, dim));
    let delta = cfg.delta_complex();

    for j in 0..npw {
        let g_recip = std::f64::consts::TAU * (j as i64 - m as i64) as f64 / cfg.a;
        let kin = cfg.c_kinetic * (k + g_recip);
        h[[idx(m, 0, j), idx(m, 0, j)]] = C64::new(kin, 0.0);
        h[[idx(m, 1, j), idx(m, 1, j)]] = C64::new(-kin, 0.0);
        h[[idx(m, 2, j), idx(m, 2, j)]] = delta;
        h[[idx(m, 3, j), idx(m, 3, j)]] = C64::new(cfg.delta2, 0.0);
        // Ω couples e(G) and r(G).
        h[[idx(m, 2, j), idx(m, 3, j)]] = C64::new(cfg.omega_ctrl, 0.0);
        h[[idx(m, 3, j), idx(m, 2, j)]] = C64::new(cfg.omega_ctrl, 0.0);
    }
    // g_{G-G'} couples e(G) to both photon components at G'.
    for j in 0..npw {
        for jp in 0..npw {
            let coeff = g.get(j as i64 - jp as i64);
            if coeff.norm_sqr() == 0.0 {
                continue;
            }
            for photon in [0usize, 1] {
                h[[idx(m, 2, j), idx(m, photon, jp)]] = coeff;
                h[[idx(m, photon, jp), idx(m, 2, j)]] = coeff.conj();
            }
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band::coupling_fourier;
    use approx::assert_abs_diff_eq;
    use ndarray_linalg::Eig;

    #[test]
    fn hermitian_when_lossless() {
        let cfg = PhysicalConfig {
            gamma_e: 0.0,
            pw_cutoff: 3,
            ..PhysicalConfig::default()
        };
        let g = coupling_fourier(&cfg).unwrap();
        let h = bloch_hamiltonian(&cfg, &g, 0.7 / cfg.a);
        let dim = h.nrows();
        for i in 0..dim {
            for j in 0..dim {
                let d = (h[[i, j]] - h[[j, i]].conj()).norm();
                assert!(d < 1e-12, "not Hermitian at ({i},{j})");
            }
        }
        let (vals, _) = h.eig().unwrap();
        let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for v in vals.iter() {
            assert!(
                v.im.abs() < 1e-10 * scale,
                "eigenvalue {v} has imaginary part"
            );
        }
    }

    #[test]
    fn nonhermitian_when_lossy() {
        let cfg = PhysicalConfig {
            pw_cutoff: 2,
            ..PhysicalConfig::default()
        };
        let g = coupling_fourier(&cfg).unwrap();
        let h = bloch_hamiltonian(&cfg, &g, 0.0);
        let m = cfg.pw_cutoff;
        let e0 = idx(m, 2, m);
        assert_abs_diff_eq!(h[[e0, e0]].im, -cfg.gamma_e, epsilon = 1e-14);
    }

    #[test]
    fn decoupled_matter_block_matches_two_level_oracle() {
        // n0 = 0 kills g(z); the e/r block at each G is then the analytic
        // 2×2 [[Δ, Ω], [Ω, 0]] with eigenvalues (Δ ± √(Δ² + 4Ω²))/2, and the
        // photon modes decouple at ±c(k+G).
        let cfg = PhysicalConfig {
            n0: 0.0,
            pw_cutoff: 2,
            ..PhysicalConfig::default()
        };
        let g = coupling_fourier(&cfg).unwrap();
        let k = 0.31 * std::f64::consts::PI / cfg.a;
        let h = bloch_hamiltonian(&cfg, &g, k);
        let (vals, _) = h.eig().unwrap();

        let delta = cfg.delta_complex();
        let root = (delta * delta + 4.0 * cfg.omega_ctrl * cfg.omega_ctrl).sqrt();
        let matter = [(delta + root) / 2.0, (delta - root) / 2.0];

        // Every analytic matter eigenvalue appears (2M+1) times.
        for target in matter {
            let count = vals
                .iter()
                .filter(|v| (*v - target).norm() < 1e-8 * target.norm().max(1.0))
                .count();
            assert_eq!(count, 2 * cfg.pw_cutoff + 1, "missing dressed state {target}");
        }
        // Photon eigenvalues ±c(k+G) all present.
        for j in 0..(2 * cfg.pw_cutoff + 1) {
            let g_recip = std::f64::consts::TAU * (j as i64 - cfg.pw_cutoff as i64) as f64 / cfg.a;
            for sign in [1.0, -1.0] {
                let target = C64::new(sign * cfg.c_kinetic * (k + g_recip), 0.0);
                assert!(
                    vals.iter().any(|v| (*v - target).norm() < 1e-8 * (1.0 + target.norm())),
                    "missing photon mode {target}"
                );
            }
        }
    }
}
