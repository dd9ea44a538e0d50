//! Scalar and vector spherical harmonics, sphere quadrature, and independent
//! verification of the coefficient-vector integral identities.
//!
//! Harmonics are L2-orthonormal on the unit sphere with the Condon-Shortley
//! phase. Vector fields are returned in Cartesian components so that cross and
//! dot products downstream are coordinate-free.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::N_MAX;

/// Basis family of a vector spherical harmonic.
///
/// For a mode built on the scalar harmonic Y_n^m:
/// * `T`: the tangential-curl family, grad_S Y_n^m x nu (order n),
/// * `I`: grad_S Y_n^m + n Y_n^m nu (order n-1),
/// * `N`: -grad_S Y_n^m + (n+1) Y_n^m nu (order n+1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VshKind {
    T,
    I,
    N,
}

/// A vector-spherical-harmonic mode. `n` and `m` always refer to the degree
/// and order of the underlying scalar harmonic Y_n^m.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModeIndex {
    pub n: usize,
    pub m: i64,
    pub kind: VshKind,
}

impl ModeIndex {
    pub fn new(n: usize, m: i64, kind: VshKind) -> Result<Self> {
        if n == 0 || n > N_MAX || m.unsigned_abs() as usize > n {
            return Err(Error::InvalidOrder { n, m });
        }
        Ok(Self { n, m, kind })
    }

    /// Squared L2(S) norm: n(n+1) for T, n(2n+1) for I, (n+1)(2n+1) for N.
    pub fn norm2(&self) -> f64 {
        let n = self.n as f64;
        match self.kind {
            VshKind::T => n * (n + 1.0),
            VshKind::I => n * (2.0 * n + 1.0),
            VshKind::N => (n + 1.0) * (2.0 * n + 1.0),
        }
    }
}

/// A point on the unit sphere in polar coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint {
    pub theta: f64,
    pub phi: f64,
}

impl SpherePoint {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// Cartesian position on the unit sphere.
    pub fn unit(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Right-handed orthonormal frame (r_hat, theta_hat, phi_hat).
    pub fn frame(&self) -> ([f64; 3], [f64; 3], [f64; 3]) {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        (
            [st * cp, st * sp, ct],
            [ct * cp, ct * sp, -st],
            [-sp, cp, 0.0],
        )
    }
}

pub fn dot_cv(a: &[Complex64; 3], b: &[Complex64; 3]) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn conj_v(a: &[Complex64; 3]) -> [Complex64; 3] {
    [a[0].conj(), a[1].conj(), a[2].conj()]
}

#[cfg(test)]
fn real_to_cv(a: [f64; 3]) -> [Complex64; 3] {
    [
        Complex64::new(a[0], 0.0),
        Complex64::new(a[1], 0.0),
        Complex64::new(a[2], 0.0),
    ]
}

fn scale_rv(s: Complex64, v: [f64; 3]) -> [Complex64; 3] {
    [s * v[0], s * v[1], s * v[2]]
}

fn add_cv(a: [Complex64; 3], b: [Complex64; 3]) -> [Complex64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn cross_cv(a: &[Complex64; 3], b: &[f64; 3]) -> [Complex64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Fully normalized associated Legendre values P~_n^m(cos theta) for m >= 0,
/// including the Condon-Shortley phase, such that
/// Y_n^m = P~_n^m(cos theta) e^{i m phi}. Returns (P~_n^m, P~_{n-1}^m).
fn legendre_pair(n: usize, m: usize, theta: f64) -> (f64, f64) {
    debug_assert!(m <= n);
    let (st, ct) = theta.sin_cos();
    // Sectoral seed P~_m^m.
    let mut pmm = (1.0 / (4.0 * std::f64::consts::PI)).sqrt();
    for k in 1..=m {
        let kf = k as f64;
        pmm *= -((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * st;
    }
    if n == m {
        return (pmm, 0.0);
    }
    let mut p_prev = pmm; // degree m
    let mut p_curr = ((2 * m + 3) as f64).sqrt() * ct * pmm; // degree m+1
    for l in (m + 2)..=n {
        let lf = l as f64;
        let mf = m as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let b = -(((2.0 * lf + 1.0) * (lf - 1.0 - mf) * (lf - 1.0 + mf))
            / ((2.0 * lf - 3.0) * (lf * lf - mf * mf)))
            .sqrt();
        let next = a * ct * p_curr + b * p_prev;
        p_prev = p_curr;
        p_curr = next;
    }
    (p_curr, p_prev)
}

fn check_nm(n: usize, m: i64) -> Result<()> {
    if n > N_MAX || m.unsigned_abs() as usize > n {
        return Err(Error::InvalidOrder { n, m });
    }
    Ok(())
}

/// Orthonormal complex spherical harmonic Y_n^m.
pub fn ylm(n: usize, m: i64, p: &SpherePoint) -> Result<Complex64> {
    check_nm(n, m)?;
    let ma = m.unsigned_abs() as usize;
    let (pv, _) = legendre_pair(n, ma, p.theta);
    let e = Complex64::from_polar(1.0, ma as f64 * p.phi);
    let v = pv * e;
    Ok(if m >= 0 {
        v
    } else if ma % 2 == 0 {
        v.conj()
    } else {
        -v.conj()
    })
}

/// d/dtheta of Y_n^m at fixed phi.
pub fn ylm_theta_deriv(n: usize, m: i64, p: &SpherePoint) -> Result<Complex64> {
    check_nm(n, m)?;
    let ma = m.unsigned_abs() as usize;
    let (pn, pn1) = legendre_pair(n, ma, p.theta);
    let (st, ct) = p.theta.sin_cos();
    let nf = n as f64;
    let mf = ma as f64;
    // sin(theta) dP~/dtheta = n cos(theta) P~_n^m - sqrt((2n+1)(n^2-m^2)/(2n-1)) P~_{n-1}^m
    let coef = if n > 0 {
        ((2.0 * nf + 1.0) * (nf * nf - mf * mf) / (2.0 * nf - 1.0)).sqrt()
    } else {
        0.0
    };
    let dp = (nf * ct * pn - coef * pn1) / st;
    let e = Complex64::from_polar(1.0, mf * p.phi);
    let v = dp * e;
    Ok(if m >= 0 {
        v
    } else if ma % 2 == 0 {
        v.conj()
    } else {
        -v.conj()
    })
}

/// Surface gradient grad_S Y_n^m in Cartesian components.
pub fn surf_grad_ylm(n: usize, m: i64, p: &SpherePoint) -> Result<[Complex64; 3]> {
    check_nm(n, m)?;
    if n == 0 {
        return Ok([Complex64::new(0.0, 0.0); 3]);
    }
    let (_, th, ph) = p.frame();
    let dth = ylm_theta_deriv(n, m, p)?;
    let y = ylm(n, m, p)?;
    let dph = Complex64::i() * (m as f64) * y / p.theta.sin();
    Ok(add_cv(scale_rv(dth, th), scale_rv(dph, ph)))
}

/// Vector spherical harmonic at a sphere point, Cartesian components.
pub fn vsh(mode: &ModeIndex, p: &SpherePoint) -> Result<[Complex64; 3]> {
    let g = surf_grad_ylm(mode.n, mode.m, p)?;
    let y = ylm(mode.n, mode.m, p)?;
    let nu = p.unit();
    let nf = mode.n as f64;
    Ok(match mode.kind {
        VshKind::T => cross_cv(&g, &nu),
        VshKind::I => add_cv(g, scale_rv(nf * y, nu)),
        VshKind::N => add_cv([-g[0], -g[1], -g[2]], scale_rv((nf + 1.0) * y, nu)),
    })
}

/// Product quadrature on the unit sphere: Gauss-Legendre in cos(theta) times a
/// uniform trapezoid in phi; exact for spherical-harmonic products through the
/// declared degree. Weights sum to 4 pi.
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    pub nodes: Vec<SpherePoint>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

/// Gauss-Legendre nodes and weights on (-1, 1) by Newton iteration.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::with_capacity(n);
    let mut ws = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // Legendre P_n(x) and derivative via the three-term recurrence.
            let mut p0 = 1.0f64;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // Recompute derivative at the converged node for the weight.
        let mut p0 = 1.0f64;
        let mut p1 = x;
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        xs.push(x);
        ws.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (xs, ws)
}

pub fn sphere_quadrature(degree: usize) -> Result<SphereQuadrature> {
    if degree > 2 * N_MAX {
        return Err(Error::DegreeTooLarge(degree, 2 * N_MAX));
    }
    let n_theta = degree / 2 + 1;
    let n_phi = degree + 1;
    let (xs, ws) = gauss_legendre(n_theta);
    let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    let mut weights = Vec::with_capacity(n_theta * n_phi);
    for (x, w) in xs.iter().zip(&ws) {
        let theta = x.acos();
        for k in 0..n_phi {
            nodes.push(SpherePoint::new(theta, k as f64 * dphi));
            weights.push(w * dphi);
        }
    }
    Ok(SphereQuadrature {
        nodes,
        weights,
        degree,
    })
}

impl SphereQuadrature {
    pub fn integrate<F: Fn(&SpherePoint) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| f(p) * *w)
            .sum()
    }

    pub fn integrate_vec<F: Fn(&SpherePoint) -> [Complex64; 3]>(&self, f: F) -> [Complex64; 3] {
        let mut acc = [Complex64::new(0.0, 0.0); 3];
        for (p, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(p);
            for i in 0..3 {
                acc[i] += v[i] * *w;
            }
        }
        acc
    }

    /// L2(S) inner product of two vector fields, conj on the second.
    pub fn inner_vec<F, G>(&self, f: F, g: G) -> Complex64
    where
        F: Fn(&SpherePoint) -> [Complex64; 3],
        G: Fn(&SpherePoint) -> [Complex64; 3],
    {
        self.integrate(|p| dot_cv(&f(p), &conj_v(&g(p))))
    }
}

/// Coefficient vectors of the expansions I_{n-1}^m = sum_q a_{n-1,m}^q Y_{n-1}^q
/// and N_{n+1}^m = sum_q c_{n+1,m}^q Y_{n+1}^q, computed by orthonormal
/// projection of the Cartesian components. Index 0 corresponds to q = -(n-1)
/// (resp. q = -(n+1)).
pub fn coeff_vectors(n: usize, m: i64) -> Result<(Vec<[Complex64; 3]>, Vec<[Complex64; 3]>)> {
    check_nm(n, m)?;
    if n == 0 {
        return Err(Error::InvalidOrder { n, m });
    }
    let quad = sphere_quadrature(2 * n + 6)?;
    let mode_i = ModeIndex::new(n, m, VshKind::I)?;
    let mode_n = ModeIndex::new(n, m, VshKind::N)?;
    let mut a = Vec::new();
    for q in -((n as i64) - 1)..=((n as i64) - 1) {
        a.push(quad.integrate_vec(|p| {
            let v = vsh(&mode_i, p).unwrap();
            let y = ylm(n - 1, q, p).unwrap().conj();
            [v[0] * y, v[1] * y, v[2] * y]
        }));
    }
    let mut c = Vec::new();
    for q in -((n as i64) + 1)..=((n as i64) + 1) {
        c.push(quad.integrate_vec(|p| {
            let v = vsh(&mode_n, p).unwrap();
            let y = ylm(n + 1, q, p).unwrap().conj();
            [v[0] * y, v[1] * y, v[2] * y]
        }));
    }
    Ok((a, c))
}

/// Which identity family to verify.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropId {
    /// Scalar-weighted integrals of Y and grad_S Y plus the a/c conjugation
    /// relation.
    P1,
    /// Integrals of (grad_S Y . grad_S Y) nu.
    P2,
    /// Integrals of grad_S(grad_S Y) . grad_S Y (second surface derivatives by
    /// fourth-order finite differences).
    P3,
}

fn vec_norm(v: &[Complex64; 3]) -> f64 {
    dot_cv(v, &conj_v(v)).re.sqrt()
}

fn vec_sub(a: &[Complex64; 3], b: &[Complex64; 3]) -> [Complex64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale_cv(s: f64, v: &[Complex64; 3]) -> [Complex64; 3] {
    [s * v[0], s * v[1], s * v[2]]
}

/// grad_S of a scalar function given analytically as (theta, phi) |-> value,
/// via fourth-order centered differences with a pole-avoidance offset.
fn surf_grad_fd<F: Fn(f64, f64) -> Complex64>(f: &F, p: &SpherePoint) -> [Complex64; 3] {
    let (_, th_hat, ph_hat) = p.frame();
    let h = 2.5e-4;
    // Keep the stencil away from the poles.
    let theta = p.theta.clamp(2.0 * h + 1e-3, std::f64::consts::PI - 2.0 * h - 1e-3);
    let d4 = |g: &dyn Fn(f64) -> Complex64, x: f64| {
        (8.0 * (g(x + h) - g(x - h)) - (g(x + 2.0 * h) - g(x - 2.0 * h))) / (12.0 * h)
    };
    let dth = d4(&|t| f(t, p.phi), theta);
    let dph = d4(&|q| f(theta, q), p.phi) / theta.sin();
    add_cv(scale_rv(dth, th_hat), scale_rv(dph, ph_hat))
}

/// Verify one family of the coefficient-vector integral identities for mode
/// (n, m); returns the maximum absolute residual over all admissible q and
/// sub-identities.
pub fn verify_prop_identities(which: PropId, n: usize, m: i64) -> Result<f64> {
    check_nm(n, m)?;
    if n == 0 {
        return Err(Error::InvalidOrder { n, m });
    }
    let (a, c) = coeff_vectors(n, m)?;
    let a_of = |q: i64| a[(q + n as i64 - 1) as usize];
    let c_of = |q: i64| c[(q + n as i64 + 1) as usize];
    let quad = sphere_quadrature(2 * n + 8)?;
    let nf = n as f64;
    let tn = 2.0 * nf + 1.0;
    let mut worst: f64 = 0.0;
    let mut chk = |lhs: [Complex64; 3], rhs: [Complex64; 3]| {
        worst = worst.max(vec_norm(&vec_sub(&lhs, &rhs)));
    };
    match which {
        PropId::P1 => {
            for q in -(n as i64 - 1)..=(n as i64 - 1) {
                // int conj(Y_{n-1}^q) Y_n^m nu ds = a / (2n+1)
                let ynu = quad.integrate_vec(|p| {
                    let w = ylm(n - 1, q, p).unwrap().conj() * ylm(n, m, p).unwrap();
                    scale_rv(w, p.unit())
                });
                chk(ynu, scale_cv(1.0 / tn, &a_of(q)));
                // int conj(Y_{n-1}^q) grad_S Y_n^m ds = (n+1)/(2n+1) a
                let gint = quad.integrate_vec(|p| {
                    let w = ylm(n - 1, q, p).unwrap().conj();
                    let g = surf_grad_ylm(n, m, p).unwrap();
                    [w * g[0], w * g[1], w * g[2]]
                });
                chk(gint, scale_cv((nf + 1.0) / tn, &a_of(q)));
            }
            for q in -(n as i64 + 1)..=(n as i64 + 1) {
                let ynu = quad.integrate_vec(|p| {
                    let w = ylm(n + 1, q, p).unwrap().conj() * ylm(n, m, p).unwrap();
                    scale_rv(w, p.unit())
                });
                chk(ynu, scale_cv(1.0 / tn, &c_of(q)));
                let gint = quad.integrate_vec(|p| {
                    let w = ylm(n + 1, q, p).unwrap().conj();
                    let g = surf_grad_ylm(n, m, p).unwrap();
                    [w * g[0], w * g[1], w * g[2]]
                });
                chk(gint, scale_cv(-nf / tn, &c_of(q)));
            }
            // Off-degree annihilation, sampled at p = n (all q).
            if n >= 1 {
                for q in -(n as i64)..=(n as i64) {
                    let ynu = quad.integrate_vec(|p| {
                        let w = ylm(n, q, p).unwrap().conj() * ylm(n, m, p).unwrap();
                        scale_rv(w, p.unit())
                    });
                    chk(ynu, [Complex64::new(0.0, 0.0); 3]);
                }
            }
            // Conjugation relation, shifted to this mode's indices:
            // a_{n-1,m}^q = (2n+1)/(2n-1) conj(c_{n,q}^m) with c from mode (n-1, q).
            for q in -(n as i64 - 1)..=(n as i64 - 1) {
                if n >= 2 {
                    let (_, c_low) = coeff_vectors(n - 1, q)?;
                    let c_lm = c_low[(m + n as i64) as usize]; // index m among -(n)..n
                    let rel = scale_cv((2.0 * nf + 1.0) / (2.0 * nf - 1.0), &conj_v(&c_lm));
                    chk(a_of(q), rel);
                }
            }
        }
        PropId::P2 => {
            for q in -(n as i64 - 1)..=(n as i64 - 1) {
                let lhs = quad.integrate_vec(|p| {
                    let gq = surf_grad_ylm(n - 1, q, p).unwrap();
                    let gm = surf_grad_ylm(n, m, p).unwrap();
                    let w = dot_cv(&conj_v(&gq), &gm);
                    scale_rv(w, p.unit())
                });
                chk(lhs, scale_cv((nf + 1.0) * (nf - 1.0) / tn, &a_of(q)));
            }
            for q in -(n as i64 + 1)..=(n as i64 + 1) {
                let lhs = quad.integrate_vec(|p| {
                    let gq = surf_grad_ylm(n + 1, q, p).unwrap();
                    let gm = surf_grad_ylm(n, m, p).unwrap();
                    let w = dot_cv(&conj_v(&gq), &gm);
                    scale_rv(w, p.unit())
                });
                chk(lhs, scale_cv(nf * (nf + 2.0) / tn, &c_of(q)));
            }
            for q in -(n as i64)..=(n as i64) {
                let lhs = quad.integrate_vec(|p| {
                    let gq = surf_grad_ylm(n, q, p).unwrap();
                    let gm = surf_grad_ylm(n, m, p).unwrap();
                    let w = dot_cv(&conj_v(&gq), &gm);
                    scale_rv(w, p.unit())
                });
                chk(lhs, [Complex64::new(0.0, 0.0); 3]);
            }
        }
        PropId::P3 => {
            let mut run = |p_deg: usize, rhs_for: &dyn Fn(i64) -> [Complex64; 3]| -> Result<()> {
                for q in -(p_deg as i64)..=(p_deg as i64) {
                    let mut lhs = [Complex64::new(0.0, 0.0); 3];
                    for i in 0..3 {
                        // Component i of grad_S conj(Y_p^q), as an analytic
                        // function of (theta, phi) for the FD stencil.
                        let comp = |theta: f64, phi: f64| {
                            let pt = SpherePoint::new(theta, phi);
                            surf_grad_ylm(p_deg, q, &pt).unwrap()[i].conj()
                        };
                        lhs[i] = quad.integrate(|p| {
                            let gg = surf_grad_fd(&comp, p);
                            let gm = surf_grad_ylm(n, m, p).unwrap();
                            dot_cv(&gg, &gm)
                        });
                    }
                    let rhs = rhs_for(q);
                    worst = worst.max(vec_norm(&vec_sub(&lhs, &rhs)));
                }
                Ok(())
            };
            run(n - 1, &|q| {
                scale_cv(-nf * (nf + 1.0) * (nf - 1.0) / tn, &a_of(q))
            })?;
            run(n + 1, &|q| {
                scale_cv(nf * (nf + 1.0) * (nf + 2.0) / tn, &c_of(q))
            })?;
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

    #[test]
    fn y00_normalization() {
        let p = SpherePoint::new(1.1, 2.2);
        let v = ylm(0, 0, &p).unwrap();
        assert!((v - Complex64::new(1.0 / FOUR_PI.sqrt(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn y10_pole_value() {
        let p = SpherePoint::new(1e-12, 0.0);
        let v = ylm(1, 0, &p).unwrap();
        assert!((v.re - (3.0 / FOUR_PI).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn ylm_self_inner_product() {
        let quad = sphere_quadrature(16).unwrap();
        let ip = quad.integrate(|p| ylm(5, 3, p).unwrap() * ylm(5, 3, p).unwrap().conj());
        assert!((ip - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn quadrature_weight_sum_and_orthogonality() {
        let quad = sphere_quadrature(0).unwrap();
        let s: f64 = quad.weights.iter().sum();
        assert!((s - FOUR_PI).abs() < 1e-12);
        let quad = sphere_quadrature(12).unwrap();
        let ip = quad.integrate(|p| ylm(2, 1, p).unwrap() * ylm(2, 1, p).unwrap().conj());
        assert!((ip - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        let ip = quad.integrate(|p| ylm(3, 0, p).unwrap() * ylm(5, 0, p).unwrap().conj());
        assert!(ip.norm() < 1e-13);
    }

    #[test]
    fn surf_grad_tangential_and_norm() {
        let quad = sphere_quadrature(20).unwrap();
        let p = SpherePoint::new(0.9, 1.3);
        let g = surf_grad_ylm(7, -4, &p).unwrap();
        let nu = real_to_cv(p.unit());
        assert!(dot_cv(&g, &nu).norm() < 1e-12);
        // ((0,0)) -> zero
        assert!(vec_norm(&surf_grad_ylm(0, 0, &p).unwrap()) == 0.0);
        // quadrature norm^2 = n(n+1)
        for &(n, m, want) in &[(1usize, 0i64, 2.0f64), (7, -4, 56.0)] {
            let n2 = quad.inner_vec(
                |p| surf_grad_ylm(n, m, p).unwrap(),
                |p| surf_grad_ylm(n, m, p).unwrap(),
            );
            assert!((n2 - Complex64::new(want, 0.0)).norm() < 1e-11, "n={n} m={m}");
        }
    }

    #[test]
    fn vsh_norms_and_orthogonality() {
        let quad = sphere_quadrature(20).unwrap();
        let t = ModeIndex::new(1, 0, VshKind::T).unwrap();
        let n2 = quad.inner_vec(|p| vsh(&t, p).unwrap(), |p| vsh(&t, p).unwrap());
        assert!((n2 - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        let i3 = ModeIndex::new(3, 1, VshKind::I).unwrap();
        let n2 = quad.inner_vec(|p| vsh(&i3, p).unwrap(), |p| vsh(&i3, p).unwrap());
        assert!((n2 - Complex64::new(21.0, 0.0)).norm() < 1e-11);
        let nn = ModeIndex::new(3, 1, VshKind::N).unwrap();
        let n2 = quad.inner_vec(|p| vsh(&nn, p).unwrap(), |p| vsh(&nn, p).unwrap());
        assert!((n2 - Complex64::new(28.0, 0.0)).norm() < 1e-11);
        let t3 = ModeIndex::new(3, 1, VshKind::T).unwrap();
        let ip = quad.inner_vec(|p| vsh(&t3, p).unwrap(), |p| vsh(&i3, p).unwrap());
        assert!(ip.norm() < 1e-12);
    }

    #[test]
    fn full_gram_orthogonality_small_degrees() {
        let quad = sphere_quadrature(20).unwrap();
        let mut modes = Vec::new();
        for n in 1..=4usize {
            for m in -(n as i64)..=(n as i64) {
                for kind in [VshKind::T, VshKind::I, VshKind::N] {
                    modes.push(ModeIndex::new(n, m, kind).unwrap());
                }
            }
        }
        for (i, a) in modes.iter().enumerate() {
            for b in modes.iter().skip(i + 1) {
                let ip = quad.inner_vec(|p| vsh(a, p).unwrap(), |p| vsh(b, p).unwrap());
                assert!(
                    ip.norm() < 1e-11,
                    "nonorthogonal {a:?} vs {b:?}: {}",
                    ip.norm()
                );
            }
        }
    }

    #[test]
    fn divergence_identity_lemma() {
        // surface divergence of grad_S Y ^ nu vanishes: its quadrature against
        // any Y_p^q (via integration by parts against grad_S conj(Y)) is ~ 0.
        let quad = sphere_quadrature(18).unwrap();
        let t = ModeIndex::new(4, 2, VshKind::T).unwrap();
        for &(pn, pm) in &[(1usize, 0i64), (3, 3), (5, -2)] {
            let ip = quad.integrate(|p| {
                let tv = vsh(&t, p).unwrap();
                let g = surf_grad_ylm(pn, pm, p).unwrap();
                dot_cv(&tv, &conj_v(&g))
            });
            assert!(ip.norm() < 1e-10);
        }
    }

    #[test]
    fn prop_identities_examples() {
        assert!(verify_prop_identities(PropId::P1, 3, 1).unwrap() < 1e-10);
        assert!(verify_prop_identities(PropId::P2, 3, 1).unwrap() < 1e-9);
        assert!(verify_prop_identities(PropId::P2, 5, 0).unwrap() < 1e-9);
        assert!(verify_prop_identities(PropId::P3, 3, 1).unwrap() < 1e-9);
    }

    #[test]
    fn coeff_vector_conjugation_relation() {
        // a_{n,m}^q = (2n+3)/(2n+1) conj(c_{n+1,q}^m) with a from mode (n+1, m)
        // and c from mode (n, q); checked at n = 2.
        let n = 2usize;
        for m in -(n as i64 + 1)..=(n as i64 + 1) {
            let (a_up, _) = coeff_vectors(n + 1, m).unwrap(); // a_{n,m}^q, q in -n..n
            for q in -(n as i64)..=(n as i64) {
                let (_, c_q) = coeff_vectors(n, q).unwrap(); // c_{n+1,q}^s, s in -(n+1)..(n+1)
                let a_v = a_up[(q + n as i64) as usize];
                let c_v = c_q[(m + n as i64 + 1) as usize];
                let rel = scale_cv(
                    (2.0 * n as f64 + 3.0) / (2.0 * n as f64 + 1.0),
                    &conj_v(&c_v),
                );
                assert!(vec_norm(&vec_sub(&a_v, &rel)) < 1e-12, "m={m} q={q}");
            }
        }
    }
}
