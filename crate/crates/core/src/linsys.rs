//! Small dense complex linear solves (2x2 / 4x4 transmission systems) with
//! partial pivoting, determinant tracking and a cheap condition estimate.
//!
//! Near-singular systems are the physically interesting ones here (resonance
//! *is* near-singularity), so solves report conditioning instead of
//! regularizing.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Outcome of a dense solve.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solution: Vec<Complex64>,
    pub det: Complex64,
    /// Max-norm residual |A x - b| relative to |b| (0 for b = 0).
    pub residual: f64,
    /// Crude condition estimate: max/min pivot modulus ratio.
    pub cond_estimate: f64,
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Plain pivoted elimination without refinement or reporting.
fn solve_once(a: &[Vec<Complex64>], b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = b.len();
    let mut m: Vec<Vec<Complex64>> = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let (pivot_row, pivot_abs) = (col..n)
            .map(|r| (r, m[r][col].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pivot_abs == 0.0 {
            return Err(Error::SingularSystem {
                det_abs: 0.0,
                cond: f64::INFINITY,
            });
        }
        if pivot_row != col {
            m.swap(pivot_row, col);
            rhs.swap(pivot_row, col);
        }
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                let sub = f * m[col][c];
                m[r][c] -= sub;
            }
            let sub = f * rhs[col];
            rhs[r] -= sub;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for c in row + 1..n {
            acc -= m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    Ok(x)
}

/// Solve A x = b by Gaussian elimination with partial pivoting.
pub fn solve(a: &[Vec<Complex64>], b: &[Complex64]) -> Result<SolveReport> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    let mut m: Vec<Vec<Complex64>> = a.to_vec();
    let mut rhs = b.to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    let mut piv_max: f64 = 0.0;
    let mut piv_min = f64::INFINITY;
    for col in 0..n {
        let (pivot_row, pivot_abs) = (col..n)
            .map(|r| (r, m[r][col].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pivot_abs == 0.0 {
            return Err(Error::SingularSystem {
                det_abs: 0.0,
                cond: f64::INFINITY,
            });
        }
        if pivot_row != col {
            m.swap(pivot_row, col);
            rhs.swap(pivot_row, col);
            det = -det;
        }
        det *= m[col][col];
        piv_max = piv_max.max(pivot_abs);
        piv_min = piv_min.min(pivot_abs);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                let sub = f * m[col][c];
                m[r][c] -= sub;
            }
            let sub = f * rhs[col];
            rhs[r] -= sub;
        }
    }
    let cond = piv_max / piv_min;
    if det.norm() < 1e-300 {
        return Err(Error::SingularSystem {
            det_abs: det.norm(),
            cond,
        });
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for c in row + 1..n {
            acc -= m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    let residual_vec = |x: &[Complex64]| -> Vec<Complex64> {
        (0..n)
            .map(|i| {
                a[i].iter()
                    .zip(x)
                    .map(|(aij, xj)| aij * xj)
                    .sum::<Complex64>()
                    - b[i]
            })
            .collect()
    };
    // Two rounds of iterative refinement: near-resonant systems are exactly
    // the interesting ones and raw elimination alone can leave the residual
    // a few digits above roundoff.
    let bnorm = max_norm(b);
    if bnorm > 0.0 {
        for _ in 0..2 {
            let r = residual_vec(&x);
            if max_norm(&r) <= 1e-15 * bnorm {
                break;
            }
            // Forward/back substitution on the stored factorization, reusing
            // the recorded row order implicitly by re-eliminating the small
            // system (n <= 4 in practice, so cost is negligible).
            if let Ok(delta) = solve_once(a, &r) {
                for (xi, di) in x.iter_mut().zip(&delta) {
                    *xi -= di;
                }
            } else {
                break;
            }
        }
    }
    // Residual against the original system.
    let residual = if bnorm == 0.0 {
        0.0
    } else {
        max_norm(&residual_vec(&x)) / bnorm
    };
    Ok(SolveReport {
        solution: x,
        det,
        residual,
        cond_estimate: cond,
    })
}
