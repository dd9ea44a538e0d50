//! Cross-checks behind the library: Bessel Wronskians, the coefficient-vector
//! integral identities, and analytic layer actions against direct Kupradze
//! kernel quadrature.
//!
//! Run with `cargo run --release --example validate_identities`.

use elasto_np::harmonics::{verify_prop_identities, ModeIndex, PropId, VshKind};
use elasto_np::layer_coeffs::{action_field, kernel_quadrature_oracle, make_medium};
use elasto_np::specfun::wronskian_residual;
use num_complex::Complex64;

fn main() {
    println!("spherical Bessel Wronskian residuals:");
    for (n, t) in [(0usize, 0.5f64), (10, 2.0), (40, 25.0), (80, 100.0)] {
        println!("  n={n:<3} t={t:<6} residual = {:.2e}", wronskian_residual(n, t).unwrap());
    }

    println!("\ncoefficient-vector integral identities (worst residual over q):");
    for which in [PropId::P1, PropId::P2, PropId::P3] {
        let mut worst = 0.0f64;
        for n in 1..=4usize {
            for m in -(n as i64)..=n as i64 {
                worst = worst.max(verify_prop_identities(which, n, m).unwrap());
            }
        }
        println!("  {which:?}: {worst:.2e}");
    }

    println!("\nanalytic layer action vs kernel quadrature (relative error):");
    let medium = make_medium(Complex64::new(1.5, 0.0), Complex64::new(1.0, 0.0), 2.0).unwrap();
    for kind in [VshKind::T, VshKind::I, VshKind::N] {
        for radius in [0.5f64, 2.0] {
            let mode = ModeIndex::new(3, 1, kind).unwrap();
            let x = [radius * 0.36, radius * 0.48, radius * 0.8];
            let a = action_field(&mode, &medium, 1.0, x).unwrap();
            let o = kernel_quadrature_oracle(&mode, &medium, 1.0, x).unwrap();
            let diff: f64 = a.iter().zip(&o).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
            let scale: f64 = o.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
            println!("  {kind:?} at |x| = {radius}: {:.2e}", diff / scale);
        }
    }
}
