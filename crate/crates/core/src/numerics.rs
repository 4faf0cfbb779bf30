//! Small numerical utilities shared across modules: compensated summation,
//! Gauss–Legendre quadrature, least-squares line fits, Hermitian 4×4
//! eigenvalues and a deterministic Nelder–Mead simplex.

use num_complex::Complex64 as C64;

/// Kahan–Neumaier compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sum a slice with compensation, in slice order.
pub fn kahan_sum(xs: &[f64]) -> f64 {
    let mut acc = KahanSum::new();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Gauss–Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre polynomial. Deterministic and accurate to machine
/// precision for the orders used here (≤ 128).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be at least 1");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Recurrence for P_n(x) and P'_n(x).
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Least-squares line fit `y ≈ slope·x + intercept`; returns (slope,
/// intercept, R²). R² is 1 for a perfect fit and may be negative for fits
/// worse than the mean.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    assert!(n >= 2.0, "need at least two points");
    let mx = kahan_sum(x) / n;
    let my = kahan_sum(y) / n;
    let mut sxx = KahanSum::new();
    let mut sxy = KahanSum::new();
    for (&xi, &yi) in x.iter().zip(y) {
        sxx.add((xi - mx) * (xi - mx));
        sxy.add((xi - mx) * (yi - my));
    }
    let slope = if sxx.value() > 0.0 {
        sxy.value() / sxx.value()
    } else {
        0.0
    };
    let intercept = my - slope * mx;
    let mut ss_res = KahanSum::new();
    let mut ss_tot = KahanSum::new();
    for (&xi, &yi) in x.iter().zip(y) {
        let r = yi - (slope * xi + intercept);
        ss_res.add(r * r);
        ss_tot.add((yi - my) * (yi - my));
    }
    let r2 = if ss_tot.value() > 0.0 {
        1.0 - ss_res.value() / ss_tot.value()
    } else {
        1.0
    };
    (slope, intercept, r2)
}

/// Fit `|y| ~ x^p` on log-log axes; returns (exponent, R²). Non-positive
/// samples are rejected by the caller.
pub fn power_law_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let (slope, _, r2) = linear_fit(&lx, &ly);
    (slope, r2)
}

/// Eigenvalues of a Hermitian 4×4 matrix by cyclic complex Jacobi rotations.
/// Only the values are needed (trace norms); input is destroyed.
pub fn hermitian_eigenvalues_4(a: &mut [[C64; 4]; 4]) -> [f64; 4] {
    const SWEEPS: usize = 24;
    for _ in 0..SWEEPS {
        let mut off = 0.0;
        for p in 0..3 {
            for q in (p + 1)..4 {
                off += a[p][q].norm_sqr();
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a[p][q];
                if apq.norm_sqr() < 1e-34 {
                    continue;
                }
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                let abs = apq.norm();
                let phase = apq / abs;
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Columns: v_p' = c v_p - s phase* v_q ; v_q' = s phase v_p + c v_q.
                for r in 0..4 {
                    let arp = a[r][p];
                    let arq = a[r][q];
                    a[r][p] = c * arp - s * phase.conj() * arq;
                    a[r][q] = s * phase * arp + c * arq;
                }
                for r in 0..4 {
                    let apr = a[p][r];
                    let aqr = a[q][r];
                    a[p][r] = c * apr - s * phase * aqr;
                    a[q][r] = s * phase.conj() * apr + c * aqr;
                }
                // Clean the rotated pair to stay exactly Hermitian.
                a[p][q] = C64::new(0.0, 0.0);
                a[q][p] = C64::new(0.0, 0.0);
                a[p][p] = C64::new(a[p][p].re, 0.0);
                a[q][q] = C64::new(a[q][q].re, 0.0);
            }
        }
    }
    [a[0][0].re, a[1][1].re, a[2][2].re, a[3][3].re]
}

/// Trace norm (sum of singular values) of a Hermitian 4×4 matrix: the sum of
/// the absolute eigenvalues.
pub fn trace_norm_hermitian_4(a: &[[C64; 4]; 4]) -> f64 {
    let mut work = *a;
    let ev = hermitian_eigenvalues_4(&mut work);
    ev.iter().map(|v| v.abs()).sum()
}

/// Deterministic Nelder–Mead over 3 parameters. Reflection/expansion/
/// contraction/shrink with fixed coefficients and a fixed initial simplex,
/// so identical inputs produce identical iterates.
pub struct Simplex3 {
    pub max_iter: usize,
    pub f_tol: f64,
    pub x_tol: f64,
    pub init_step: f64,
}

impl Default for Simplex3 {
    fn default() -> Self {
        Self {
            max_iter: 240,
            f_tol: 1e-14,
            x_tol: 1e-10,
            init_step: 0.08,
        }
    }
}

pub struct SimplexOutcome {
    pub x: [f64; 3],
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl Simplex3 {
    pub fn minimize<F: FnMut(&[f64; 3]) -> f64>(&self, x0: [f64; 3], mut f: F) -> SimplexOutcome {
        let mut pts: Vec<[f64; 3]> = vec![x0; 4];
        for i in 0..3 {
            pts[i + 1][i] += self.init_step;
        }
        let mut fv: Vec<f64> = pts.iter().map(|p| f(p)).collect();
        let mut iter = 0;
        let mut converged = false;
        while iter < self.max_iter {
            iter += 1;
            // Order the simplex (stable sort keeps ties deterministic).
            let mut idx = [0usize, 1, 2, 3];
            idx.sort_by(|&a, &b| fv[a].partial_cmp(&fv[b]).unwrap_or(std::cmp::Ordering::Equal));
            let ordered: Vec<[f64; 3]> = idx.iter().map(|&i| pts[i]).collect();
            let ordered_f: Vec<f64> = idx.iter().map(|&i| fv[i]).collect();
            pts = ordered;
            fv = ordered_f;

            let spread = (fv[3] - fv[0]).abs();
            let size = (0..3)
                .map(|d| {
                    pts.iter()
                        .map(|p| (p[d] - pts[0][d]).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if spread <= self.f_tol * (1.0 + fv[0].abs()) && size <= self.x_tol {
                converged = true;
                break;
            }

            let mut centroid = [0.0; 3];
            for p in pts.iter().take(3) {
                for d in 0..3 {
                    centroid[d] += p[d] / 3.0;
                }
            }
            let worst = pts[3];
            let mut refl = [0.0; 3];
            for d in 0..3 {
                refl[d] = centroid[d] + (centroid[d] - worst[d]);
            }
            let f_refl = f(&refl);
            if f_refl < fv[0] {
                let mut exp = [0.0; 3];
                for d in 0..3 {
                    exp[d] = centroid[d] + 2.0 * (centroid[d] - worst[d]);
                }
                let f_exp = f(&exp);
                if f_exp < f_refl {
                    pts[3] = exp;
                    fv[3] = f_exp;
                } else {
                    pts[3] = refl;
                    fv[3] = f_refl;
                }
            } else if f_refl < fv[2] {
                pts[3] = refl;
                fv[3] = f_refl;
            } else {
                let mut contr = [0.0; 3];
                if f_refl < fv[3] {
                    for d in 0..3 {
                        contr[d] = centroid[d] + 0.5 * (refl[d] - centroid[d]);
                    }
                } else {
                    for d in 0..3 {
                        contr[d] = centroid[d] + 0.5 * (worst[d] - centroid[d]);
                    }
                }
                let f_contr = f(&contr);
                if f_contr < fv[3].min(f_refl) {
                    pts[3] = contr;
                    fv[3] = f_contr;
                } else {
                    // Shrink toward the best vertex.
                    for i in 1..4 {
                        for d in 0..3 {
                            pts[i][d] = pts[0][d] + 0.5 * (pts[i][d] - pts[0][d]);
                        }
                        fv[i] = f(&pts[i]);
                    }
                }
            }
        }
        let mut best = 0;
        for i in 1..4 {
            if fv[i] < fv[best] {
                best = i;
            }
        }
        SimplexOutcome {
            x: pts[best],
            f: fv[best],
            iterations: iter,
            converged,
        }
    }
}
