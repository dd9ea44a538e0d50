//! Tabulate the Neumann-Poincare eigenvalues on the unit sphere and follow
//! them toward the quasi-static limit.
//!
//! Run with `cargo run --release --example np_spectrum`.

use elasto_np::layer_coeffs::make_medium;
use elasto_np::np_spectrum::{np_eigensystem, quasistatic_probe, TOL_D1N};
use num_complex::Complex64;

fn main() {
    let medium = make_medium(Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0), 1.0).unwrap();
    println!("N-P eigenvalues, lambda = 2, mu = 1, omega = 1, R = 1");
    println!("{:>4} {:>24} {:>24} {:>24}", "n", "lambda_1", "lambda_2", "lambda_3");
    for n in [1usize, 2, 3, 5, 10, 20, 40] {
        let sys = np_eigensystem(n, &medium, 1.0, TOL_D1N).unwrap();
        println!(
            "{n:>4} {:>24} {:>24} {:>24}",
            format!("{:.3e}{:+.1e}i", sys.lambda_1.re, sys.lambda_1.im),
            format!("{:.3e}{:+.1e}i", sys.lambda_2.re, sys.lambda_2.im),
            format!("{:.3e}{:+.1e}i", sys.lambda_3.re, sys.lambda_3.im),
        );
    }

    // The T-eigenvalue accumulates at 0 like 3 / (2 (2n + 1)).
    println!("\nT-eigenvalue accumulation at 0:");
    for n in [5usize, 20, 80] {
        let sys = np_eigensystem(n, &medium, 1.0, TOL_D1N).unwrap();
        let classical = 3.0 / (2.0 * (2.0 * n as f64 + 1.0));
        println!(
            "  n={n:<3} lambda_1 = {:+.6e}  3/(2(2n+1)) = {classical:.6e}",
            sys.lambda_1.re
        );
    }

    // Quasi-static probe: a real medium converges to real static eigenvalues.
    let seq = quasistatic_probe(2, 1.0, 1.0, 1.0, &[1e-2, 1e-3, 1e-4]).unwrap();
    println!("\nquasi-static probe at n = 2 (omega = 1e-2, 1e-3, 1e-4):");
    for (sys, omega) in seq.iter().zip([1e-2, 1e-3, 1e-4]) {
        println!(
            "  omega={omega:.0e}  lambda_1={:+.9e}  max|Im| = {:.1e}",
            sys.lambda_1.re,
            sys.lambda_1
                .im
                .abs()
                .max(sys.lambda_2.im.abs())
                .max(sys.lambda_3.im.abs())
        );
    }
}
