//! Fourier coefficients of the space-dependent collective coupling g(z).
//!
//! The atomic density is a lattice-periodic sum of Gaussians with mean
//! density n₀; the coupling is g(z) = g̃ √n(z). One unit cell is sampled on
//! a uniform grid (spectrally accurate for smooth periodic integrands) and
//! projected onto the reciprocal vectors G_n = 2πn/a for |n| ≤ 2M.

use num_complex::Complex64 as C64;

use crate::config::PhysicalConfig;
use crate::error::{Error, Result};

/// Coefficients g_n over G_n = 2πn/a, |n| ≤ 2M.
#[derive(Clone, Debug)]
pub struct CouplingFourier {
    max_n: i64,
    coeffs: Vec<C64>,
}

impl CouplingFourier {
    /// Coefficient at reciprocal index n; zero outside the stored range.
    #[inline]
    pub fn get(&self, n: i64) -> C64 {
        if n.abs() > self.max_n {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[(n + self.max_n) as usize]
        }
    }

    pub fn max_index(&self) -> i64 {
        self.max_n
    }

    /// Mean-squared coupling Σ_n |g_n|² = (1/a)∫|g|²dz (Parseval).
    pub fn mean_square(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Periodic density profile n(z), z relative to a lattice site.
pub(crate) fn density_profile(cfg: &PhysicalConfig, z: f64) -> f64 {
    let sigma = cfg.sigma_density;
    let amp = cfg.n0 * cfg.a / ((std::f64::consts::TAU).sqrt() * sigma);
    // Enough periodic images that the dropped tail is below machine noise.
    let images = (8.0 * sigma / cfg.a).ceil() as i64 + 2;
    let mut n = 0.0;
    for l in -images..=images {
        let d = z - l as f64 * cfg.a;
        n += amp * (-d * d / (2.0 * sigma * sigma)).exp();
    }
    n
}

/// Fourier coefficients of g(z) = g̃√n(z) over one unit cell.
pub fn coupling_fourier(cfg: &PhysicalConfig) -> Result<CouplingFourier> {
    if cfg.sigma_density <= 0.0 {
        return Err(Error::InvalidConfig(
            "sigma_density must be positive".to_string(),
        ));
    }
    let max_n = 2 * cfg.pw_cutoff as i64;
    let g_tilde = cfg.g_tilde();
    // Uniform grid; resolves all retained harmonics (samples ≫ 2·max_n).
    let samples = 4096.max(16 * (2 * max_n as usize + 1));
    let dz = cfg.a / samples as f64;
    let g_vals: Vec<f64> = (0..samples)
        .map(|s| {
            let z = s as f64 * dz;
            g_tilde * density_profile(cfg, z).sqrt()
        })
        .collect();
    let mut coeffs = Vec::with_capacity(2 * max_n as usize + 1);
    for n in -max_n..=max_n {
        let gn = std::f64::consts::TAU * n as f64 / cfg.a;
        let mut acc = C64::new(0.0, 0.0);
        for (s, &g) in g_vals.iter().enumerate() {
            let z = s as f64 * dz;
            acc += g * C64::new(0.0, -gn * z).exp();
        }
        coeffs.push(acc / samples as f64);
    }
    Ok(CouplingFourier { max_n, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn base_cfg() -> PhysicalConfig {
        PhysicalConfig::default()
    }

    #[test]
    fn uniform_density_limit_has_single_mode() {
        // σ ≫ a: the profile is flat, so only G = 0 survives.
        let cfg = PhysicalConfig {
            sigma_density: 50.0 * 0.532,
            ..base_cfg()
        };
        let g = coupling_fourier(&cfg).unwrap();
        let g0 = g.get(0).norm();
        assert!(g0 > 0.0);
        for n in 1..=g.max_index() {
            assert!(g.get(n).norm() < 1e-10 * g0, "mode {n} should vanish");
        }
        // Flat profile: g0 = g̃ √n0.
        assert_abs_diff_eq!(g0, cfg.g_tilde() * cfg.n0.sqrt(), epsilon = 1e-6 * g0);
    }

    #[test]
    fn g0_matches_trapezoid_cell_average() {
        // Independent oracle: 10⁴-point trapezoid quadrature of g̃√n(z).
        let cfg = base_cfg();
        let g = coupling_fourier(&cfg).unwrap();
        let n_pts = 10_000;
        let dz = cfg.a / n_pts as f64;
        let mut acc = 0.0;
        for s in 0..n_pts {
            let z = s as f64 * dz;
            acc += cfg.g_tilde() * density_profile(&cfg, z).sqrt();
        }
        let oracle = acc / n_pts as f64;
        assert_abs_diff_eq!(g.get(0).re, oracle, epsilon = 1e-9 * oracle.abs());
        assert!(g.get(0).im.abs() < 1e-9 * oracle.abs());
    }

    #[test]
    fn doubling_density_scales_by_sqrt2() {
        let cfg = base_cfg();
        let g1 = coupling_fourier(&cfg).unwrap();
        let cfg2 = PhysicalConfig {
            n0: 2.0 * cfg.n0,
            ..cfg
        };
        let g2 = coupling_fourier(&cfg2).unwrap();
        // Compare against the dominant coefficient: the far tail sits at the
        // quadrature noise floor.
        let scale = g1.get(0).norm();
        for n in -g1.max_index()..=g1.max_index() {
            let a = g1.get(n);
            let b = g2.get(n);
            assert_abs_diff_eq!(b.re, a.re * 2.0f64.sqrt(), epsilon = 1e-12 * scale);
            assert_abs_diff_eq!(b.im, a.im * 2.0f64.sqrt(), epsilon = 1e-12 * scale);
        }
    }

    #[test]
    fn coefficients_are_conjugate_symmetric() {
        let g = coupling_fourier(&base_cfg()).unwrap();
        let scale = g.get(0).norm();
        for n in 0..=g.max_index() {
            let d = (g.get(-n) - g.get(n).conj()).norm();
            assert!(d < 1e-12 * scale, "g_-n = g_n* violated at n = {n}");
        }
    }

    #[test]
    fn nonpositive_sigma_rejected() {
        let cfg = PhysicalConfig {
            sigma_density: 0.0,
            ..base_cfg()
        };
        assert!(coupling_fourier(&cfg).is_err());
    }
}
