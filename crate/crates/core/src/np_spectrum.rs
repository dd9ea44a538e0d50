//! The finite-frequency Neumann-Poincare eigensystem on a sphere.
//!
//! On each (n, m) the adjoint N-P operator acts as a scalar on T_n^m and as a
//! 2x2 block on span{I_{n-1}^m, N_{n+1}^m}; this module assembles those blocks
//! from the traction coefficient tables, solves the quadratic eigenproblem
//! (with the exact degenerate branch when the lower-left entry vanishes), and
//! provides a quasi-static limit probe.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::layer_coeffs::{make_medium, traction_coeffs, ElasticMedium, TractionCoeffs};

/// Which eigenvalue formula produced the 2x2 pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Generic,
    DegenerateD1nZero,
}

/// The three N-P eigenvalues at order n, with the 2x2 eigenvector pair in
/// (I_{n-1}^m, N_{n+1}^m) coefficients. Eigenvectors are rays; the stored
/// scaling is the closed-form one.
#[derive(Clone, Copy, Debug)]
pub struct NpEigenSystem {
    pub lambda_1: Complex64,
    pub lambda_2: Complex64,
    pub lambda_3: Complex64,
    /// Eigenvector of lambda_2: weights on (I_{n-1}^m, N_{n+1}^m).
    pub u_coeff: (Complex64, Complex64),
    /// Eigenvector of lambda_3.
    pub v_coeff: (Complex64, Complex64),
    pub branch: Branch,
}

/// The N-P action at order n: the scalar T-eigenvalue and the 2x2 block
/// [[c1 - 1/2, c2], [d1, d2 - 1/2]] acting on (I, N) coefficients.
pub fn np_matrix(
    n: usize,
    medium: &ElasticMedium,
    r: f64,
) -> Result<(Complex64, [[Complex64; 2]; 2])> {
    let tc = traction_coeffs(n, medium, r)?;
    Ok(np_matrix_from(&tc))
}

/// Assemble the N-P block data from an explicit traction table.
pub fn np_matrix_from(tc: &TractionCoeffs) -> (Complex64, [[Complex64; 2]; 2]) {
    let half = Complex64::new(0.5, 0.0);
    (
        tc.frak_b_n - half,
        [
            [tc.frak_c_1n - half, tc.frak_c_2n],
            [tc.frak_d_1n, tc.frak_d_2n - half],
        ],
    )
}

/// Eigensystem from an explicit traction table (lets callers and tests drive
/// the degenerate branches directly).
pub fn eigensystem_from_parts(tc: &TractionCoeffs, tol_d1n: f64) -> Result<NpEigenSystem> {
    let c1 = tc.frak_c_1n;
    let c2 = tc.frak_c_2n;
    let d1 = tc.frak_d_1n;
    let d2 = tc.frak_d_2n;
    let half = Complex64::new(0.5, 0.0);
    let scale = c1.norm().max(c2.norm()).max(d1.norm()).max(d2.norm());
    let lambda_1 = tc.frak_b_n - half;
    if d1.norm() <= tol_d1n * scale {
        if c2.norm() <= tol_d1n * scale && (d2 - c1).norm() <= tol_d1n * scale {
            return Err(Error::DoubleDegenerate);
        }
        return Ok(NpEigenSystem {
            lambda_1,
            lambda_2: c1 - half,
            lambda_3: d2 - half,
            u_coeff: (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            v_coeff: (c2, d2 - c1),
            branch: Branch::DegenerateD1nZero,
        });
    }
    let disc = ((d2 - c1) * (d2 - c1) + 4.0 * d1 * c2).sqrt();
    let lambda_2 = (c1 + d2 - 1.0 + disc) / 2.0;
    let lambda_3 = (c1 + d2 - 1.0 - disc) / 2.0;
    Ok(NpEigenSystem {
        lambda_1,
        lambda_2,
        lambda_3,
        u_coeff: (c1 - d2 + disc, 2.0 * d1),
        v_coeff: (c1 - d2 - disc, 2.0 * d1),
        branch: Branch::Generic,
    })
}

/// The full eigensystem at order n.
pub fn np_eigensystem(
    n: usize,
    medium: &ElasticMedium,
    r: f64,
    tol_d1n: f64,
) -> Result<NpEigenSystem> {
    let tc = traction_coeffs(n, medium, r)?;
    eigensystem_from_parts(&tc, tol_d1n)
}

/// Default relative threshold for the degenerate branch.
pub const TOL_D1N: f64 = 1e-14;

/// Swap the (lambda_2, U) and (lambda_3, V) pairs of `cur` if that matches
/// `prev` better; keeps sweeps continuous across the square-root branch cut.
pub fn align_to_previous(cur: &mut NpEigenSystem, prev: &NpEigenSystem) {
    let keep = (cur.lambda_2 - prev.lambda_2).norm() + (cur.lambda_3 - prev.lambda_3).norm();
    let swap = (cur.lambda_2 - prev.lambda_3).norm() + (cur.lambda_3 - prev.lambda_2).norm();
    if swap < keep {
        std::mem::swap(&mut cur.lambda_2, &mut cur.lambda_3);
        std::mem::swap(&mut cur.u_coeff, &mut cur.v_coeff);
    }
}

/// Max eigen-residual of the 2x2 pairs, relative to the block norm, for any
/// eigenvector scaling.
pub fn eigen_residual(block: &[[Complex64; 2]; 2], sys: &NpEigenSystem) -> f64 {
    let bnorm = block
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let res = |v: (Complex64, Complex64), lam: Complex64| -> f64 {
        let vnorm = v.0.norm().max(v.1.norm()).max(1e-300);
        let r0 = block[0][0] * v.0 + block[0][1] * v.1 - lam * v.0;
        let r1 = block[1][0] * v.0 + block[1][1] * v.1 - lam * v.1;
        r0.norm().max(r1.norm()) / (bnorm * vnorm)
    };
    res(sys.u_coeff, sys.lambda_2).max(res(sys.v_coeff, sys.lambda_3))
}

/// Eigensystems along a decreasing frequency sequence for a real medium,
/// checking Cauchy convergence toward the static limit: increments must
/// shrink at least proportionally to the frequency steps.
pub fn quasistatic_probe(
    n: usize,
    lambda: f64,
    mu: f64,
    r: f64,
    omega_list: &[f64],
) -> Result<Vec<NpEigenSystem>> {
    if omega_list.is_empty()
        || omega_list.iter().any(|&w| !(0.0 < w && w <= 0.1))
        || omega_list.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::ConfigInvalid(
            "omega_list must be strictly decreasing within (0, 0.1]".into(),
        ));
    }
    let mut out: Vec<NpEigenSystem> = Vec::with_capacity(omega_list.len());
    for &omega in omega_list {
        let medium = make_medium(
            Complex64::new(lambda, 0.0),
            Complex64::new(mu, 0.0),
            omega,
        )?;
        let mut sys = np_eigensystem(n, &medium, r, TOL_D1N)?;
        if let Some(prev) = out.last() {
            align_to_previous(&mut sys, prev);
        }
        out.push(sys);
    }
    // Cauchy increments shrink at least linearly in omega.
    for k in 0..out.len().saturating_sub(2) {
        let step_ratio = omega_list[k + 1] / omega_list[k];
        for pick in [
            |s: &NpEigenSystem| s.lambda_1,
            |s: &NpEigenSystem| s.lambda_2,
            |s: &NpEigenSystem| s.lambda_3,
        ] {
            let d0 = (pick(&out[k]) - pick(&out[k + 1])).norm();
            let d1 = (pick(&out[k + 1]) - pick(&out[k + 2])).norm();
            // Coefficient assembly cancels O(1/(omega R)^2) intermediates, so
            // increments below that roundoff floor carry no information.
            let w_min = omega_list[k + 2];
            let floor = (1e-13 / (w_min * w_min * r * r)).max(1e-12);
            if d1 > 10.0 * step_ratio * d0 && d1 > floor {
                return Err(Error::AssertionFailed(format!(
                    "quasi-static increments not shrinking: {d1:e} vs {d0:e}"
                )));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn medium(lambda: f64, mu_re: f64, mu_im: f64, omega: f64) -> ElasticMedium {
        make_medium(c(lambda, 0.0), c(mu_re, mu_im), omega).unwrap()
    }

    #[test]
    fn t_block_is_lambda_1() {
        let m = medium(1.0, 1.0, 0.0, 2.0);
        let (t, _) = np_matrix(3, &m, 1.0).unwrap();
        let tc = traction_coeffs(3, &m, 1.0).unwrap();
        assert!((t - (tc.frak_b_n - c(0.5, 0.0))).norm() < 1e-15);
    }

    #[test]
    fn trace_and_determinant_identities() {
        let m = medium(1.0, 1.0, 0.0, 2.0);
        for n in [1usize, 3, 7, 15] {
            let (_, b) = np_matrix(n, &m, 1.0).unwrap();
            let sys = np_eigensystem(n, &m, 1.0, TOL_D1N).unwrap();
            let trace = b[0][0] + b[1][1];
            assert!((sys.lambda_2 + sys.lambda_3 - trace).norm() < 1e-12);
            let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
            assert!((sys.lambda_2 * sys.lambda_3 - det).norm() < 1e-12);
        }
    }

    #[test]
    fn eigen_residual_reference_case() {
        let m = medium(1.0, 1.0, 0.0, 2.0);
        let (_, b) = np_matrix(3, &m, 1.0).unwrap();
        let sys = np_eigensystem(3, &m, 1.0, TOL_D1N).unwrap();
        assert!(eigen_residual(&b, &sys) < 1e-12);
    }

    #[test]
    fn residuals_across_orders_and_media() {
        for m in [
            medium(1.0, 1.0, 0.0, 2.0),
            medium(1.0, 2.0, 0.5, 1.0),
            medium(2.0, 1.0, 0.0, 5.0),
        ] {
            for n in 1..=40usize {
                let (_, b) = np_matrix(n, &m, 1.0).unwrap();
                let sys = np_eigensystem(n, &m, 1.0, TOL_D1N).unwrap();
                assert!(
                    eigen_residual(&b, &sys) < 1e-11,
                    "n={n} residual={}",
                    eigen_residual(&b, &sys)
                );
            }
        }
    }

    #[test]
    fn eigenvector_scaling_freedom() {
        let m = medium(1.0, 1.0, 0.0, 2.0);
        let (_, b) = np_matrix(4, &m, 1.0).unwrap();
        let mut sys = np_eigensystem(4, &m, 1.0, TOL_D1N).unwrap();
        let base = eigen_residual(&b, &sys);
        sys.u_coeff = (sys.u_coeff.0 * 1e3, sys.u_coeff.1 * 1e3);
        sys.v_coeff = (sys.v_coeff.0 * 1e3, sys.v_coeff.1 * 1e3);
        let scaled = eigen_residual(&b, &sys);
        assert!((base - scaled).abs() < 1e-13);
    }

    #[test]
    fn degenerate_branch_continuity() {
        // A synthetic table with d1 pushed to 1e-10: generic eigenvalues must
        // approach the degenerate closed forms.
        let base = TractionCoeffs {
            frak_b_n: c(0.3, 0.0),
            frak_c_1n: c(0.4, 0.1),
            frak_d_1n: c(1e-10, 0.0),
            frak_c_2n: c(0.2, -0.1),
            frak_d_2n: c(0.7, 0.05),
        };
        let generic = eigensystem_from_parts(&base, 1e-14).unwrap();
        assert_eq!(generic.branch, Branch::Generic);
        let mut exact = base;
        exact.frak_d_1n = c(0.0, 0.0);
        let degen = eigensystem_from_parts(&exact, 1e-14).unwrap();
        assert_eq!(degen.branch, Branch::DegenerateD1nZero);
        // Compare as eigenvalue sets: the degenerate clause fixes its own
        // pairing, which need not match the principal-branch ordering.
        let keep = (generic.lambda_2 - degen.lambda_2).norm()
            + (generic.lambda_3 - degen.lambda_3).norm();
        let swap = (generic.lambda_2 - degen.lambda_3).norm()
            + (generic.lambda_3 - degen.lambda_2).norm();
        assert!(keep.min(swap) < 1e-9, "set distance {}", keep.min(swap));
        // Degenerate eigenvectors satisfy the block eigen-equations too.
        let (_, b) = (np_matrix_from(&exact).0, np_matrix_from(&exact).1);
        assert!(eigen_residual(&b, &degen) < 1e-14);
    }

    #[test]
    fn double_degenerate_detected() {
        let tc = TractionCoeffs {
            frak_b_n: c(0.3, 0.0),
            frak_c_1n: c(0.4, 0.1),
            frak_d_1n: c(0.0, 0.0),
            frak_c_2n: c(0.0, 0.0),
            frak_d_2n: c(0.4, 0.1),
        };
        assert!(matches!(
            eigensystem_from_parts(&tc, 1e-14),
            Err(Error::DoubleDegenerate)
        ));
    }

    #[test]
    fn discriminant_zero_gives_equal_pair() {
        // (d2-c1)^2 + 4 d1 c2 = 0 by construction.
        let tc = TractionCoeffs {
            frak_b_n: c(0.0, 0.0),
            frak_c_1n: c(0.5, 0.0),
            frak_d_1n: c(0.1, 0.0),
            frak_c_2n: c(-0.4, 0.0),
            frak_d_2n: c(0.9, 0.0),
        };
        let sys = eigensystem_from_parts(&tc, 1e-14).unwrap();
        assert!((sys.lambda_2 - sys.lambda_3).norm() < 1e-15);
    }

    #[test]
    fn lambda_1_accumulates_at_zero() {
        // |lambda_{1,n}| <= C/n at fixed frequency; C fitted and reported.
        let m = medium(1.0, 1.0, 0.0, 2.0);
        let mut c_fit: f64 = 0.0;
        for n in 5..=40usize {
            let sys = np_eigensystem(n, &m, 1.0, TOL_D1N).unwrap();
            c_fit = c_fit.max(n as f64 * sys.lambda_1.norm());
        }
        assert!(c_fit < 2.0, "fitted C = {c_fit}");
        let tail = np_eigensystem(40, &m, 1.0, TOL_D1N).unwrap();
        assert!(tail.lambda_1.norm() < 0.05);
    }

    #[test]
    fn quasistatic_probe_examples() {
        let seq = quasistatic_probe(2, 1.0, 1.0, 1.0, &[1e-2, 1e-3, 1e-4]).unwrap();
        // Richardson-style self-consistency: the last increment dominates the
        // distance to the extrapolated limit.
        let d_mid = (seq[1].lambda_1 - seq[2].lambda_1).norm();
        let limit = seq[2].lambda_1
            + (seq[2].lambda_1 - seq[1].lambda_1) / 9.0; // ratio-10 extrapolation
        assert!(d_mid < 10.0 * (seq[2].lambda_1 - limit).norm() + 1e-10);
        // Static reality.
        assert!(seq[2].lambda_1.im.abs() < 1e-6);
        assert!(seq[2].lambda_2.im.abs() < 1e-6);
        assert!(seq[2].lambda_3.im.abs() < 1e-6);
        // Scale invariance of the static limit, via omega^2-Richardson so the
        // genuine finite-frequency term drops out before comparing radii.
        let limit = |r: f64| {
            let s = quasistatic_probe(2, 1.0, 1.0, r, &[2e-3, 1e-3]).unwrap();
            [
                (4.0 * s[1].lambda_1 - s[0].lambda_1) / 3.0,
                (4.0 * s[1].lambda_2 - s[0].lambda_2) / 3.0,
                (4.0 * s[1].lambda_3 - s[0].lambda_3) / 3.0,
            ]
        };
        let a = limit(1.0);
        let b = limit(2.0);
        for k in 0..3 {
            assert!((a[k] - b[k]).norm() < 1e-6, "k={k} diff={}", (a[k] - b[k]).norm());
        }
    }

    #[test]
    fn probe_rejects_bad_sequences() {
        assert!(quasistatic_probe(2, 1.0, 1.0, 1.0, &[]).is_err());
        assert!(quasistatic_probe(2, 1.0, 1.0, 1.0, &[0.2, 0.1]).is_err());
        assert!(quasistatic_probe(2, 1.0, 1.0, 1.0, &[1e-3, 1e-2]).is_err());
    }
}
