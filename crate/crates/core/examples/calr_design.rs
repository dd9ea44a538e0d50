//! Core-shell CALR design: tune the shell perturbation so the order-n0
//! transmission denominator nearly vanishes, and report the critical radii
//! that separate cloaked from visible sources.
//!
//! Run with `cargo run --release --example calr_design`.

use elasto_np::calr::{critical_radius, denominator_d, tune_p2, CoreShellConfig};
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
    let base = config(c(-1.0, loss));

    println!("core-shell geometry: r_i = 0.8, r_e = 1, omega = 5, n0 = {n0}");
    println!("rho^(2 n0) = {:.4e}", rho.powi(2 * n0 as i32));

    let untuned = denominator_d(n0, &base).unwrap().norm();
    let p2 = tune_p2(n0, &base).unwrap();
    let tuned = denominator_d(n0, &config(c(-1.0, loss) + p2)).unwrap().norm();
    println!("\nshell modulus mu_hat = -1 + i rho^n0 + p2:");
    println!("  untuned |d_n0| = {untuned:.4e}");
    println!("  p2*            = {:+.6e} {:+.6e}i", p2.re, p2.im);
    println!("  tuned |d_n0|   = {tuned:.4e}");
    println!("  suppression    = {:.3e}", untuned / tuned);

    let (r_star, bound_radius) = critical_radius(&base);
    println!("\ncritical radius r_* = {r_star:.6}");
    println!("bounded-field radius = {bound_radius:.6}");

    // The denominator dip in the real perturbation.
    println!("\n|d_n0| near the minimum:");
    for k in -3i32..=3 {
        let p = p2.re + k as f64 * 0.01;
        let d = denominator_d(n0, &config(c(-1.0 + p, loss))).unwrap().norm();
        println!("  p2 = {p:+.4}   |d| = {d:.4e}");
    }
}
