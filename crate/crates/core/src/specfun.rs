//! Complex-argument spherical Bessel and Hankel functions of the first kind,
//! their derivatives, the "acute" combinations t f' - f, and the "grave"
//! remainders against the small-argument / large-order leading terms.
//!
//! Orders up to [`crate::N_MAX`] are supported. Individual function values
//! underflow or overflow double precision long before that (j_100(5) ~ 1e-115),
//! so every public value is carried as a [`ScaledFnValue`] mantissa/exponent
//! pair; products and ratios recombine exactly in log space.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::N_MAX;

/// A complex value stored as `mantissa * exp(log_scale)` with `log_scale` real.
///
/// Whenever the value is nonzero the mantissa modulus is kept within
/// `[0.5, 2)`, so arithmetic on mantissas never overflows while `log_scale`
/// absorbs the dynamic range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledFnValue {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl ScaledFnValue {
    pub const ZERO: ScaledFnValue = ScaledFnValue {
        mantissa: Complex64::new(0.0, 0.0),
        log_scale: 0.0,
    };

    /// Wrap a plain complex number.
    pub fn from_complex(v: Complex64) -> Self {
        Self {
            mantissa: v,
            log_scale: 0.0,
        }
        .normalized()
    }

    pub fn from_real(v: f64) -> Self {
        Self::from_complex(Complex64::new(v, 0.0))
    }

    /// `z^n` as a scaled value (principal logarithm).
    pub fn from_pow(z: Complex64, n: i32) -> Self {
        if z == Complex64::new(0.0, 0.0) {
            return if n == 0 {
                Self::from_real(1.0)
            } else {
                Self::ZERO
            };
        }
        let ln = z.ln();
        Self {
            mantissa: Complex64::from_polar(1.0, f64::from(n) * ln.im),
            log_scale: f64::from(n) * ln.re,
        }
        .normalized()
    }

    /// A positive real `exp(log)` as a scaled value.
    pub fn from_log(log: f64) -> Self {
        Self {
            mantissa: Complex64::new(1.0, 0.0),
            log_scale: log,
        }
    }

    fn normalized(mut self) -> Self {
        let m = self.mantissa.norm();
        if m == 0.0 {
            return Self::ZERO;
        }
        if !(0.5..2.0).contains(&m) {
            let shift = m.ln();
            self.mantissa /= Complex64::new(m, 0.0);
            self.log_scale += shift;
        }
        self
    }

    /// Recombine into a plain complex number (may under/overflow by design).
    pub fn value(&self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }

    /// Natural log of the modulus, `-inf` for zero.
    pub fn log_abs(&self) -> f64 {
        if self.mantissa == Complex64::new(0.0, 0.0) {
            f64::NEG_INFINITY
        } else {
            self.mantissa.norm().ln() + self.log_scale
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == Complex64::new(0.0, 0.0)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            mantissa: self.mantissa * rhs.mantissa,
            log_scale: self.log_scale + rhs.log_scale,
        }
        .normalized()
    }

    pub fn mul_complex(&self, rhs: Complex64) -> Self {
        self.mul(&Self::from_complex(rhs))
    }

    pub fn div(&self, rhs: &Self) -> Self {
        Self {
            mantissa: self.mantissa / rhs.mantissa,
            log_scale: self.log_scale - rhs.log_scale,
        }
        .normalized()
    }

    pub fn neg(&self) -> Self {
        Self {
            mantissa: -self.mantissa,
            log_scale: self.log_scale,
        }
    }

    /// Sum with scale alignment; the larger scale wins the representation.
    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return *rhs;
        }
        if rhs.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.log_scale >= rhs.log_scale {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let shift = (lo.log_scale - hi.log_scale).exp();
        Self {
            mantissa: hi.mantissa + lo.mantissa * shift,
            log_scale: hi.log_scale,
        }
        .normalized()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
}

/// Function family selector for the shared derivative/accent operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    J,
    H,
}

fn check_order(n: usize) -> Result<()> {
    if n > N_MAX {
        return Err(Error::OrderTooLarge(n, N_MAX));
    }
    Ok(())
}

fn check_finite(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    Ok(())
}

/// log((2n+1)!!)
pub fn ln_double_factorial_odd(n: usize) -> f64 {
    (0..=n).map(|k| ((2 * k + 1) as f64).ln()).sum()
}

/// j_0(z) = sin z / z with the removable singularity handled.
fn j0(z: Complex64) -> Complex64 {
    if z.norm() < 1e-8 {
        Complex64::new(1.0, 0.0) - z * z / 6.0
    } else {
        z.sin() / z
    }
}

fn j1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-8 {
        z / 3.0
    } else {
        z.sin() / (z * z) - z.cos() / z
    }
}

/// All of j_0..j_n at once via Miller's downward recurrence, normalized
/// against whichever of j_0, j_1 is better conditioned.
pub fn sph_bessel_j_all(n: usize, z: Complex64) -> Result<Vec<ScaledFnValue>> {
    check_order(n)?;
    check_finite(z)?;
    if z == Complex64::new(0.0, 0.0) {
        let mut out = vec![ScaledFnValue::ZERO; n + 1];
        out[0] = ScaledFnValue::from_real(1.0);
        return Ok(out);
    }
    if n == 0 {
        return Ok(vec![ScaledFnValue::from_complex(j0(z))]);
    }
    // Start high enough above max(n, |z|) that the parasitic solution decays
    // below double precision by the time the recursion reaches order n.
    let start = n + 24 + (1.2 * z.norm()).ceil() as usize;
    let mut f_hi = ScaledFnValue::ZERO; // trial value at order start+1
    let mut f_lo = ScaledFnValue::from_log(-600.0); // trial value at order start
    let mut seq = vec![ScaledFnValue::ZERO; n + 1];
    let inv_z = ScaledFnValue::from_complex(z.inv());
    for k in (0..=start).rev() {
        // f_{k} = ((2k+3)/z) f_{k+1} - f_{k+2}
        let fac = inv_z.mul(&ScaledFnValue::from_real((2 * k + 3) as f64));
        let f_next = fac.mul(&f_lo).sub(&f_hi);
        f_hi = f_lo;
        f_lo = f_next;
        if k <= n {
            seq[k] = f_lo;
        }
    }
    // f_lo now holds the trial j_0, f_hi the trial j_1.
    let (reference, trial) = {
        let r0 = j0(z);
        let r1 = j1(z);
        if r0.norm() >= r1.norm() {
            (ScaledFnValue::from_complex(r0), f_lo)
        } else {
            (ScaledFnValue::from_complex(r1), f_hi)
        }
    };
    let ratio = reference.div(&trial);
    for v in &mut seq {
        *v = v.mul(&ratio);
    }
    Ok(seq)
}

/// Spherical Bessel function of the first kind, j_n(z).
pub fn sph_bessel_j(n: usize, z: Complex64) -> Result<ScaledFnValue> {
    Ok(sph_bessel_j_all(n, z)?[n])
}

/// All of h_0..h_n via the (stable) upward recurrence from the closed-form
/// h_0(z) = -i e^{iz}/z and h_1(z) = -(e^{iz}/z)(1 + i/z).
pub fn sph_hankel1_all(n: usize, z: Complex64) -> Result<Vec<ScaledFnValue>> {
    check_order(n)?;
    check_finite(z)?;
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroArgument);
    }
    let i = Complex64::i();
    // e^{iz}/z in scaled form: log magnitude -Im z - ln|z|.
    let phase = ScaledFnValue {
        mantissa: Complex64::from_polar(1.0, z.re),
        log_scale: -z.im,
    }
    .mul(&ScaledFnValue::from_complex(z.inv()));
    let h0 = phase.mul_complex(-i);
    let mut seq = vec![h0; n + 1];
    if n == 0 {
        return Ok(seq);
    }
    seq[1] = phase.mul_complex(-(Complex64::new(1.0, 0.0) + i / z));
    let inv_z = ScaledFnValue::from_complex(z.inv());
    for k in 1..n {
        // h_{k+1} = ((2k+1)/z) h_k - h_{k-1}
        let fac = inv_z.mul(&ScaledFnValue::from_real((2 * k + 1) as f64));
        seq[k + 1] = fac.mul(&seq[k]).sub(&seq[k - 1]);
    }
    Ok(seq)
}

/// Spherical Hankel function of the first kind, h_n^{(1)}(z).
pub fn sph_hankel1(n: usize, z: Complex64) -> Result<ScaledFnValue> {
    Ok(sph_hankel1_all(n, z)?[n])
}

fn family_all(kind: Kind, n: usize, z: Complex64) -> Result<Vec<ScaledFnValue>> {
    match kind {
        Kind::J => sph_bessel_j_all(n, z),
        Kind::H => sph_hankel1_all(n, z),
    }
}

/// f_n(z) for the selected family.
pub fn sph_fn(kind: Kind, n: usize, z: Complex64) -> Result<ScaledFnValue> {
    Ok(family_all(kind, n, z)?[n])
}

/// Derivative f_n'(z) via f_n' = f_{n-1} - ((n+1)/z) f_n (f_0' = -f_1).
pub fn sph_deriv(kind: Kind, n: usize, z: Complex64) -> Result<ScaledFnValue> {
    check_order(n)?;
    check_finite(z)?;
    if z == Complex64::new(0.0, 0.0) {
        return match kind {
            // j_n'(0) = 1/3 for n=1, else 0.
            Kind::J => Ok(if n == 1 {
                ScaledFnValue::from_real(1.0 / 3.0)
            } else {
                ScaledFnValue::ZERO
            }),
            Kind::H => Err(Error::ZeroArgument),
        };
    }
    if n == 0 {
        return Ok(family_all(kind, 1, z)?[1].neg());
    }
    let seq = family_all(kind, n, z)?;
    let fac = ScaledFnValue::from_complex(Complex64::new((n + 1) as f64, 0.0) / z);
    Ok(seq[n - 1].sub(&fac.mul(&seq[n])))
}

/// The accented combination f'_n(z)*z - f_n(z).
pub fn acute(kind: Kind, n: usize, z: Complex64) -> Result<ScaledFnValue> {
    if z == Complex64::new(0.0, 0.0) {
        return match kind {
            Kind::J => Ok(ScaledFnValue::ZERO),
            Kind::H => Err(Error::ZeroArgument),
        };
    }
    let d = sph_deriv(kind, n, z)?;
    let f = sph_fn(kind, n, z)?;
    Ok(d.mul_complex(z).sub(&f))
}

/// Remainder of f_n against its large-order leading term:
/// j_n(t) = (t^n/(2n+1)!!)(1 + grave_j), h_n(t) = ((2n-1)!!/(i t^{n+1}))(1 + grave_h).
pub fn grave_remainder(kind: Kind, n: usize, t: Complex64) -> Result<Complex64> {
    check_order(n)?;
    if t == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroArgument);
    }
    if n == 0 {
        return Err(Error::OrderTooSmall(0, 1));
    }
    let one = ScaledFnValue::from_real(1.0);
    let r = match kind {
        Kind::J => {
            // j_n * (2n+1)!! / t^n - 1
            let lead = ScaledFnValue::from_log(ln_double_factorial_odd(n))
                .div(&ScaledFnValue::from_pow(t, n as i32));
            sph_bessel_j(n, t)?.mul(&lead).sub(&one)
        }
        Kind::H => {
            // h_n * i t^{n+1} / (2n-1)!! - 1
            let lead = ScaledFnValue::from_pow(t, (n + 1) as i32)
                .mul_complex(Complex64::i())
                .div(&ScaledFnValue::from_log(ln_double_factorial_odd(n - 1)));
            sph_hankel1(n, t)?.mul(&lead).sub(&one)
        }
    };
    Ok(r.value())
}

/// Remainder of f_n' against its large-order leading term:
/// j_n'(t) = (n t^{n-1}/(2n+1)!!)(1 + grave_j'),
/// h_n'(t) = (-(n+1)(2n-1)!!/(i t^{n+2}))(1 + grave_h').
pub fn grave_deriv_remainder(kind: Kind, n: usize, t: Complex64) -> Result<Complex64> {
    check_order(n)?;
    if t == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroArgument);
    }
    if n == 0 {
        return Err(Error::OrderTooSmall(0, 1));
    }
    let one = ScaledFnValue::from_real(1.0);
    let r = match kind {
        Kind::J => {
            let lead = ScaledFnValue::from_log(ln_double_factorial_odd(n))
                .div(&ScaledFnValue::from_pow(t, n as i32 - 1))
                .div(&ScaledFnValue::from_real(n as f64));
            sph_deriv(Kind::J, n, t)?.mul(&lead).sub(&one)
        }
        Kind::H => {
            let lead = ScaledFnValue::from_pow(t, (n + 2) as i32)
                .mul_complex(Complex64::i())
                .div(&ScaledFnValue::from_log(ln_double_factorial_odd(n - 1)))
                .div(&ScaledFnValue::from_real(-((n + 1) as f64)));
            sph_deriv(Kind::H, n, t)?.mul(&lead).sub(&one)
        }
    };
    Ok(r.value())
}

/// Relative residual of the Wronskian identity
/// j_n(t) h_n'(t) - j_n'(t) h_n(t) = i/t^2.
pub fn wronskian_residual(n: usize, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::ZeroArgument);
    }
    let z = Complex64::new(t, 0.0);
    let j = sph_bessel_j(n, z)?;
    let h = sph_hankel1(n, z)?;
    let jd = sph_deriv(Kind::J, n, z)?;
    let hd = sph_deriv(Kind::H, n, z)?;
    let lhs = j.mul(&hd).sub(&jd.mul(&h)).value();
    let rhs = Complex64::i() / (t * t);
    Ok((lhs - rhs).norm() / rhs.norm())
}
