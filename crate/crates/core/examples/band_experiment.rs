use num_complex::Complex64 as C64;
use polariton_lattice::band::{band_gap, solve_bands, wannier_transform, BandLabel};
use polariton_lattice::config::PhysicalConfig;
use polariton_lattice::numerics::power_law_fit;

fn report(tag: &str, cfg: &PhysicalConfig) {
    println!("==== {tag}: c_kinetic = {:.6e} ====", cfg.c_kinetic);
    let bs = match solve_bands(cfg) {
        Ok(bs) => bs,
        Err(e) => { println!("solve failed: {e}"); return; }
    };
    let n_dark = bs.labels.iter().filter(|&&l| l == BandLabel::DarkUpper || l == BandLabel::DarkLower).count();
    println!("dark bands found: {n_dark}");
    if n_dark < 2 { 
        // what do near-zero bands look like?
        let nk = bs.k_grid.len();
        let mut mean_abs: Vec<(f64,f64,usize)> = (0..bs.n_bands()).map(|b| {
            let m = bs.energies.column(b).iter().map(|v| v.re.abs()).sum::<f64>()/nk as f64;
            let we = bs.e_weight.column(b).sum()/nk as f64;
            (m, we, b)
        }).collect();
        mean_abs.sort_by(|a,b| a.0.partial_cmp(&b.0).unwrap());
        println!("nearest-zero bands (mean|Re e|, mean e-weight):");
        for (m,we,_b) in mean_abs.iter().take(8) { println!("   {m:.4e}  {we:.4}"); }
        return; 
    }
    let iu = bs.band_index(BandLabel::DarkUpper).unwrap();
    let il = bs.band_index(BandLabel::DarkLower).unwrap();
    let kba = std::f64::consts::PI / cfg.a;
    // print band over k with e-weight
    println!("k/(pi/a)   Re_eu        Im_eu        ew_u      Re_el        ew_l");
    for (ik, &k) in bs.k_grid.iter().enumerate() {
        println!("{:+.3}  {:+.6e} {:+.3e} {:.2e}  {:+.6e} {:.2e}", k/kba,
            bs.energies[[ik,iu]].re, bs.energies[[ik,iu]].im, bs.e_weight[[ik,iu]],
            bs.energies[[ik,il]].re, bs.e_weight[[ik,il]]);
    }
    // linearity vs k and vs |k| over |k| <= 0.3 pi/a
    let mut xs=vec![]; let mut ys=vec![]; let mut xa=vec![]; let mut ya=vec![];
    for (ik,&k) in bs.k_grid.iter().enumerate() {
        if k.abs() <= 0.3*kba { xs.push(k); ys.push(bs.energies[[ik,iu]].re);
            if k != 0.0 { xa.push(k.abs()); ya.push(bs.energies[[ik,iu]].re); } }
    }
    let (s1,_b1,r2k) = polariton_lattice::numerics::linear_fit(&xs,&ys);
    let (s2,_b2,r2a) = polariton_lattice::numerics::linear_fit(&xa,&ya);
    println!("linear fit vs k:  slope {s1:.4e}, R2 = {r2k:.6}");
    println!("linear fit vs|k|: slope {s2:.4e}, R2 = {r2a:.6}");
    match band_gap(&bs) { Ok(g) => println!("band gap = {g:.4e} rad/us = 2pi*{:.3} MHz", g/std::f64::consts::TAU), Err(e)=>println!("gap err {e}") }
    let wb = match wannier_transform(&bs, BandLabel::DarkUpper, cfg) { Ok(w)=>w, Err(e)=>{println!("wannier failed: {e}"); return;} };
    println!("site energy = {:+.4e}{:+.4e}i", wb.site_energy.re, wb.site_energy.im);
    println!("rydberg weight = {:.4}", wb.rydberg_weight);
    println!("hermiticity defect = {:.3e}", wb.hermiticity_defect());
    let j1 = wb.hopping(1);
    println!("J_1 = {:+.4e}{:+.4e}i  |J1| = {:.4e} (2pi*{:.4} MHz)", j1.re, j1.im, j1.norm(), j1.norm()/std::f64::consts::TAU);
    for m in 1..=12.min(wb.hoppings.len()) { let j = wb.hopping(m as i64); println!("  |J_{m}| = {:.5e}   arg = {:+.3}", j.norm(), j.arg()); }
    let ms: Vec<f64> = (3..=10).map(|m| m as f64).collect();
    let js: Vec<f64> = (3..=10).map(|m| wb.hopping(m).norm()).collect();
    if js.iter().all(|v| *v > 0.0) {
        let (p, r2) = power_law_fit(&ms, &js);
        println!("power-law exponent over m in [3,10]: {p:.3}  (R2 {r2:.4})");
    }
    // gap >> J1 ?
    if let Ok(g) = band_gap(&bs) { println!("gap/|J1| = {:.2}", g/j1.norm()); }
    // blockade radii with default C6
    let dmag = (cfg.delta_e.powi(2)+cfg.gamma_e.powi(2)).sqrt();
    let rtb = (cfg.c6/j1.norm()).powf(1.0/6.0);
    let rb = (cfg.c6*dmag/cfg.omega_ctrl.powi(2)).powf(1.0/6.0);
    println!("r_tilde_b = {:.3} um ({:.2} a), r_b = {:.3} um ({:.2} a)", rtb, rtb/cfg.a, rb, rb/cfg.a);
    // validity ratio
    let ratio = (j1.norm()/(2.0*wb.site_energy.re - cfg.beta)).abs();
    println!("|J1/(2e-beta)| = {:.3e}", ratio);
}

fn main() {
    let base = PhysicalConfig::default(); // N=40, M=15
    report("default c_kinetic ~ 300", &base);
    let phys = PhysicalConfig { c_kinetic: 2.99792458e8, ..base.clone() };
    report("physical c", &phys);
    let mid = PhysicalConfig { c_kinetic: 3000.0, ..base.clone() };
    report("c = 3000", &mid);
}
