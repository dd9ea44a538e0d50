//! Core-free shell resonance for T-mode sources: the per-mode 2x2
//! transmission solve, the closed-form resonance denominator, dissipation
//! energy through boundary forms, and the shear-modulus tuning procedures
//! that drive the resonance quantity past a prescribed threshold.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::layer_coeffs::ElasticMedium;
use crate::linsys;
use crate::specfun::{acute, sph_fn, Kind, ScaledFnValue};

/// Default shell first Lame parameter: the T-mode system never reads it, so
/// any value with nonnegative imaginary part is admissible.
pub const DEFAULT_LAMBDA_HAT: Complex64 = Complex64::new(1.0, 0.01);

/// A homogeneous shell occupying the ball of radius `r`, with the background
/// on the outside. Both media share one frequency.
#[derive(Clone, Copy, Debug)]
pub struct CoreFreeConfig {
    pub r: f64,
    pub exterior: ElasticMedium,
    pub shell: ElasticMedium,
}

impl CoreFreeConfig {
    pub fn new(r: f64, exterior: ElasticMedium, shell: ElasticMedium) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::ConfigInvalid("radius must be positive".into()));
        }
        if exterior.omega != shell.omega {
            return Err(Error::ConfigInvalid(
                "exterior and shell must share one frequency".into(),
            ));
        }
        if exterior.mu.im != 0.0 || exterior.lambda.im != 0.0 {
            return Err(Error::ConfigInvalid("exterior medium must be lossless".into()));
        }
        if !(exterior.mu.re > 0.0 && 3.0 * exterior.lambda.re + 2.0 * exterior.mu.re > 0.0) {
            return Err(Error::ConfigInvalid("exterior medium must be convex".into()));
        }
        if shell.mu.im < 0.0 {
            return Err(Error::ConfigInvalid("shell requires Im mu >= 0".into()));
        }
        Ok(Self { r, exterior, shell })
    }
}

/// A T-mode source expansion: finitely many (n, m) -> f_{1,n,m} entries.
#[derive(Clone, Debug, Default)]
pub struct SourceSpectrum {
    pub entries: BTreeMap<(usize, i64), Complex64>,
    /// Radius of a point-like source the entries were synthesized from, if
    /// any; exterior field evaluation needs it because the truncated incident
    /// j-series only represents the source potential inside that radius.
    pub source_radius: Option<f64>,
}

impl SourceSpectrum {
    pub fn single(n: usize, m: i64, f: Complex64) -> Result<Self> {
        if n < 1 || m.unsigned_abs() as usize > n {
            return Err(Error::InvalidOrder { n, m });
        }
        let mut entries = BTreeMap::new();
        entries.insert((n, m), f);
        Ok(Self {
            entries,
            source_radius: None,
        })
    }

    pub fn insert(&mut self, n: usize, m: i64, f: Complex64) -> Result<()> {
        if n < 1 || m.unsigned_abs() as usize > n {
            return Err(Error::InvalidOrder { n, m });
        }
        self.entries.insert((n, m), f);
        Ok(())
    }

    pub fn n_min(&self) -> Option<usize> {
        self.entries.keys().map(|&(n, _)| n).min()
    }
}

/// Per-mode transmission solution.
#[derive(Clone, Copy, Debug)]
pub struct ModeSolution {
    pub psi_1: Complex64,
    pub psi_2: Complex64,
    pub psi_tilde: Complex64,
    pub cond_estimate: f64,
}

/// The solved transmission problem for a whole spectrum.
#[derive(Clone, Debug)]
pub struct CoreFreeSolution {
    pub modes: BTreeMap<(usize, i64), ModeSolution>,
    pub energy: f64,
}

/// The 2x2 transmission matrix and right-hand side for order n: unknowns are
/// the interior and exterior layer densities (psi_1, psi_2); rows enforce
/// displacement and traction continuity of the T-mode field across r = R.
pub fn corefree_system(
    n: usize,
    cfg: &CoreFreeConfig,
    f_1nm: Complex64,
) -> Result<(Vec<Vec<Complex64>>, Vec<Complex64>)> {
    let r = cfg.r;
    let i = Complex64::i();
    let k = cfg.exterior.k_s;
    let kh = cfg.shell.k_s;
    let mu = cfg.exterior.mu;
    let muh = cfg.shell.mu;
    let jh = sph_fn(Kind::J, n, kh * r)?;
    let hh = sph_fn(Kind::H, n, kh * r)?;
    let j = sph_fn(Kind::J, n, k * r)?;
    let h = sph_fn(Kind::H, n, k * r)?;
    let ajh = acute(Kind::J, n, kh * r)?;
    let ah = acute(Kind::H, n, k * r)?;
    let a = vec![
        vec![
            jh.mul(&hh).mul_complex(-i * kh * r * r / muh).value(),
            j.mul(&h).mul_complex(i * k * r * r / mu).value(),
        ],
        vec![
            hh.mul(&ajh).mul_complex(-i * kh * r).value(),
            j.mul(&ah).mul_complex(i * k * r).value(),
        ],
    ];
    let aj = acute(Kind::J, n, k * r)?;
    let b = vec![
        j.mul_complex(f_1nm).value(),
        aj.mul_complex(f_1nm * mu / r).value(),
    ];
    Ok((a, b))
}

/// Solve the order-n transmission system for a single source coefficient.
pub fn solve_corefree_mode(
    n: usize,
    cfg: &CoreFreeConfig,
    f_1nm: Complex64,
) -> Result<(Complex64, Complex64, f64)> {
    if f_1nm.norm() == 0.0 {
        return Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 1.0));
    }
    let (a, b) = corefree_system(n, cfg, f_1nm)?;
    let rep = linsys::solve(&a, &b)?;
    if rep.residual > 1e-12 {
        return Err(Error::AssertionFailed(format!(
            "transmission solve residual {:e}",
            rep.residual
        )));
    }
    Ok((rep.solution[0], rep.solution[1], rep.cond_estimate))
}

/// The scaled building blocks of the closed-form denominator.
fn psi_tilde_scaled(n: usize, cfg: &CoreFreeConfig) -> Result<ScaledFnValue> {
    let r = cfg.r;
    let k = cfg.exterior.k_s;
    let kh = cfg.shell.k_s;
    let mu = cfg.exterior.mu;
    let muh = cfg.shell.mu;
    let jh = sph_fn(Kind::J, n, kh * r)?;
    let hh = sph_fn(Kind::H, n, kh * r)?;
    let j = sph_fn(Kind::J, n, k * r)?;
    let h = sph_fn(Kind::H, n, k * r)?;
    let jdh = crate::specfun::sph_deriv(Kind::J, n, kh * r)?;
    let hd = crate::specfun::sph_deriv(Kind::H, n, k * r)?;
    // ((mu - muh) jh + kh muh R jh') h - k mu R jh h'
    let bracket = jh
        .mul_complex(mu - muh)
        .add(&jdh.mul_complex(kh * muh * r))
        .mul(&h)
        .sub(&jh.mul(&hd).mul_complex(k * mu * r));
    Ok(bracket
        .mul(&j)
        .mul(&hh)
        .mul_complex(k * kh * r * r * r))
}

/// Closed-form resonance denominator for order n.
pub fn psi_tilde(n: usize, cfg: &CoreFreeConfig) -> Result<Complex64> {
    Ok(psi_tilde_scaled(n, cfg)?.value())
}

/// Magnitude of the denominator, safe at extreme orders.
pub fn psi_tilde_log_abs(n: usize, cfg: &CoreFreeConfig) -> Result<f64> {
    Ok(psi_tilde_scaled(n, cfg)?.log_abs())
}

/// Closed-form interior density: psi_1 = mu muh f j_n(k R) / psi~.
pub fn psi_1_closed_form(n: usize, cfg: &CoreFreeConfig, f_1nm: Complex64) -> Result<Complex64> {
    let j = sph_fn(Kind::J, n, cfg.exterior.k_s * cfg.r)?;
    let pt = psi_tilde_scaled(n, cfg)?;
    Ok(j
        .mul_complex(cfg.exterior.mu * cfg.shell.mu * f_1nm)
        .div(&pt)
        .value())
}

/// The plasmonic-resonance quantity Im(muh) / |psi~_{n0}|^2.
pub fn resonance_quantity(n0: usize, cfg: &CoreFreeConfig) -> Result<f64> {
    let la = psi_tilde_log_abs(n0, cfg)?;
    Ok(cfg.shell.mu.im * (-2.0 * la).exp())
}

/// Shell dissipation energy of the solved T-mode field, via the boundary
/// Green's form: per mode |psi_1|^2 R n(n+1) Im(muh g' conj(g)) with g the
/// interior radial factor and g' its acute combination.
pub fn dissipation_energy(
    cfg: &CoreFreeConfig,
    src: &SourceSpectrum,
    solution: &CoreFreeSolution,
) -> Result<f64> {
    let mut total = 0.0f64;
    for (&(n, m), &f) in &src.entries {
        let mode = solution.modes.get(&(n, m)).ok_or(Error::ModeMismatch)?;
        // Consistency of the supplied solution with this source entry.
        if f.norm() > 0.0 {
            let closed = psi_1_closed_form(n, cfg, f)?;
            if (closed - mode.psi_1).norm() > 1e-6 * closed.norm().max(1e-300) {
                return Err(Error::ModeMismatch);
            }
        }
        total += mode_energy(n, cfg, mode.psi_1)?;
    }
    Ok(total)
}

/// Boundary-form energy of one interior T mode with density weight psi_1.
pub fn mode_energy(n: usize, cfg: &CoreFreeConfig, psi_1: Complex64) -> Result<f64> {
    if psi_1.norm() == 0.0 {
        return Ok(0.0);
    }
    let r = cfg.r;
    let kh = cfg.shell.k_s;
    let muh = cfg.shell.mu;
    let pref = -Complex64::i() * kh * r * r / muh;
    let hh = sph_fn(Kind::H, n, kh * r)?;
    let g = hh.mul(&sph_fn(Kind::J, n, kh * r)?).mul_complex(pref);
    let ag = hh.mul(&acute(Kind::J, n, kh * r)?).mul_complex(pref);
    let pairing = (muh * ag.value() * g.value().conj()).im;
    let nf = n as f64;
    Ok(psi_1.norm_sqr() * r * nf * (nf + 1.0) * pairing)
}

/// Solve a whole spectrum and attach the dissipation energy.
pub fn solve_corefree(cfg: &CoreFreeConfig, src: &SourceSpectrum) -> Result<CoreFreeSolution> {
    let mut modes = BTreeMap::new();
    let mut energy = 0.0f64;
    for (&(n, m), &f) in &src.entries {
        let (psi_1, psi_2, cond_estimate) = solve_corefree_mode(n, cfg, f)?;
        let psi_tilde = psi_tilde(n, cfg)?;
        energy += mode_energy(n, cfg, psi_1)?;
        modes.insert(
            (n, m),
            ModeSolution {
                psi_1,
                psi_2,
                psi_tilde,
                cond_estimate,
            },
        );
    }
    Ok(CoreFreeSolution { modes, energy })
}

/// Golden-section minimization of a unimodal scalar function.
fn golden_min<F: FnMut(f64) -> f64>(mut lo: f64, mut hi: f64, tol: f64, f: &mut F) -> f64 {
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

fn with_shell_mu(cfg: &CoreFreeConfig, mu_hat: Complex64) -> Result<CoreFreeConfig> {
    let shell = crate::layer_coeffs::make_medium(cfg.shell.lambda, mu_hat, cfg.shell.omega)?;
    Ok(CoreFreeConfig { shell, ..*cfg })
}

/// Minimize |psi~_{n0}| over Re(mu_hat) in `interval` at a small fixed loss
/// (Im mu_hat = 1e-8); returns the minimizer.
pub fn tune_re_mu(n0: usize, cfg_template: &CoreFreeConfig, interval: (f64, f64)) -> Result<f64> {
    let (lo, hi) = interval;
    if !(lo < hi) {
        return Err(Error::ConfigInvalid("empty search interval".into()));
    }
    let loss = 1e-8;
    let eval = |re: f64| -> f64 {
        with_shell_mu(cfg_template, Complex64::new(re, loss))
            .and_then(|c| psi_tilde_log_abs(n0, &c))
            .unwrap_or(f64::INFINITY)
    };
    // Coarse bracket check: the interior must dip below both endpoints.
    let grid = 64;
    let mut best = (lo, f64::INFINITY);
    for k in 0..=grid {
        let x = lo + (hi - lo) * k as f64 / grid as f64;
        let v = eval(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    if best.0 <= lo + 1e-12 || best.0 >= hi - 1e-12 {
        return Err(Error::NoBracket);
    }
    let span = (hi - lo) / grid as f64;
    let mut f = eval;
    Ok(golden_min(best.0 - span, best.0 + span, 1e-9, &mut f))
}

/// Tune the real perturbation p in mu_hat = -mu + i/M + p so that the order
/// n0 resonance quantity exceeds M; returns p*.
pub fn tune_p1(n0: usize, cfg_template: &CoreFreeConfig, m_target: f64) -> Result<f64> {
    if n0 < 30 {
        return Err(Error::OrderTooSmall(n0, 30));
    }
    let mu = cfg_template.exterior.mu.re;
    let loss = 1.0 / m_target;
    let eval = |p: f64| -> f64 {
        with_shell_mu(cfg_template, Complex64::new(-mu + p, loss))
            .and_then(|c| psi_tilde_log_abs(n0, &c))
            .unwrap_or(f64::INFINITY)
    };
    // Coarse linear pass over p, then a fine pass at 1e-4 steps, then golden.
    let mut best = (0.0f64, f64::INFINITY);
    let coarse = 400;
    for k in 0..=coarse {
        let p = -0.2 + 0.4 * k as f64 / coarse as f64;
        let v = eval(p);
        if v < best.1 {
            best = (p, v);
        }
    }
    let mut fine_best = best;
    let mut p = best.0 - 1e-3;
    while p <= best.0 + 1e-3 {
        let v = eval(p);
        if v < fine_best.1 {
            fine_best = (p, v);
        }
        p += 1e-4;
    }
    let mut f = eval;
    let p_star = golden_min(fine_best.0 - 2e-4, fine_best.0 + 2e-4, 1e-12, &mut f);
    let tuned = with_shell_mu(cfg_template, Complex64::new(-mu + p_star, loss))?;
    let q = resonance_quantity(n0, &tuned)?;
    if q <= m_target {
        return Err(Error::ResonanceNotAchieved {
            achieved: q,
            target: m_target,
        });
    }
    Ok(p_star)
}
