//! CALR energy dichotomy and field profile: a point-like source just inside
//! the critical radius resonates (huge dissipation energy, bounded exterior
//! field); the same source moved outside the critical radius does not.
//!
//! Run with `cargo run --release --example field_profile`.

use elasto_np::calr::{
    critical_radius, field_eval, point_source_spectrum, solve_coreshell, tune_p2,
    CoreShellConfig,
};
use elasto_np::layer_coeffs::make_medium;
use num_complex::Complex64;

fn config(mu_hat: Complex64) -> CoreShellConfig {
    let c = Complex64::new;
    let omega = 5.0;
    let ext = make_medium(c(1.0, 0.0), c(1.0, 0.0), omega).unwrap();
    let core = make_medium(c(1.0, 0.01), c(1.0, 0.0), omega).unwrap();
    let shell = make_medium(c(1.0, 0.01), mu_hat, omega).unwrap();
    CoreShellConfig::new(0.8, 1.0, core, shell, ext).unwrap()
}

fn main() {
    let c = Complex64::new;
    let n0 = 50usize;
    let rho: f64 = 0.8;
    let loss = rho.powi(n0 as i32);
    let p2 = tune_p2(n0, &config(c(-1.0, loss))).unwrap();
    let cfg = config(c(-1.0, loss) + p2);
    let (r_star, bound_radius) = critical_radius(&cfg);
    println!("tuned shell; r_* = {r_star:.4}, bounded beyond {bound_radius:.4}");

    for r_0 in [1.05f64, 1.3] {
        let src = point_source_spectrum(r_0, cfg.exterior.k_s, (30, 90), cfg.r_e).unwrap();
        let sol = solve_coreshell(&cfg, &src, 1e6).unwrap();
        println!(
            "\nsource at r_0 = {r_0} ({} r_*): energy = {:.3e} -> {:?}",
            if r_0 < r_star { "inside" } else { "outside" },
            sol.energy,
            sol.classification
        );

        // Scattered |u| along a radial ray (theta = 1.2, phi = 0.3).
        let (st, ct) = 1.2f64.sin_cos();
        let (sp, cp) = 0.3f64.sin_cos();
        println!("  scattered field along the ray:");
        for r in [1.2f64, 1.4, 1.6, 2.0, 3.0] {
            let x = [r * st * cp, r * st * sp, r * ct];
            let u = field_eval(x, &cfg, &sol, &src).unwrap();
            let un = u.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            println!("    |x| = {r:.1}   |u| = {un:.4e}");
        }
    }
}
