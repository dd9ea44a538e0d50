//! Core-free polariton resonance: sweep the shell loss, recover the resonant
//! real shell modulus, and push the resonance quantity past a target with the
//! high-order perturbation tuner.
//!
//! Run with `cargo run --release --example corefree_resonance`.

use elasto_np::layer_coeffs::make_medium;
use elasto_np::resonance::{resonance_quantity, tune_p1, tune_re_mu, CoreFreeConfig};
use num_complex::Complex64;

fn corefree(mu_hat: Complex64) -> CoreFreeConfig {
    let c = Complex64::new;
    let ext = make_medium(c(1.0, 0.0), c(1.0, 0.0), 5.0).unwrap();
    let shell = make_medium(c(1.0, 0.01), mu_hat, 5.0).unwrap();
    CoreFreeConfig::new(1.0, ext, shell).unwrap()
}

fn main() {
    let c = Complex64::new;

    // Order-5 resonance: the quantity Im(mu_hat)/|psi~|^2 is unimodal in the
    // shell loss near the resonant real part.
    println!("resonance quantity at n0 = 5, Re mu_hat = -1.87988:");
    for im in [1e-6, 3e-6, 1e-5, 1e-3, 1e-1, 1.0] {
        let q = resonance_quantity(5, &corefree(c(-1.87988, im))).unwrap();
        println!("  Im mu_hat = {im:8.0e}   quantity = {q:.4e}");
    }

    // Recover the resonant real part by direct minimization of |psi~|.
    let tuned = tune_re_mu(5, &corefree(c(-1.87988, 1e-3)), (-2.5, -1.2)).unwrap();
    println!("\ntuned Re mu_hat at n0 = 5: {tuned:.6}");

    // High-order tuning: mu_hat = -mu + p + i/M with M = 1e10 at n0 = 100.
    let m_target = 1e10;
    let template = corefree(c(-1.0, 1.0 / m_target));
    let p_star = tune_p1(100, &template, m_target).unwrap();
    let q = resonance_quantity(100, &corefree(c(-1.0 + p_star, 1.0 / m_target))).unwrap();
    println!("\nn0 = 100, M = 1e10:  p* = {p_star:+.8}  quantity = {q:.3e}");
}
