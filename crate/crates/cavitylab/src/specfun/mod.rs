//! Bessel, Hankel and modified Bessel functions of order 0 and 1 for real
//! arguments.
//!
//! `J` and `Y` use their power series on `x < 2` and the Hankel asymptotic
//! form `sqrt(2/(pi x)) (P + iQ) e^{i(x - (2n+1)pi/4)}` with rational `P`, `Q`
//! on `x >= 2`. `K` uses its power series on `x <= 2` and Steed's continued
//! fraction above.

mod modified;
pub(crate) use modified::i0_series;
mod tables;

use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Crossover between series and asymptotic evaluation of `J`/`Y`.
pub const JY_CROSSOVER: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SpecFunError {
    #[error("{func}: argument {x} outside the domain")]
    Domain { func: &'static str, x: f64 },
    #[error("hankel1: order {0} not supported (0 or 1)")]
    Order(u32),
}

type Result<T> = std::result::Result<T, SpecFunError>;

fn check_finite(func: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(SpecFunError::Domain { func, x })
    }
}

fn check_positive(func: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(SpecFunError::Domain { func, x })
    }
}

pub fn bessel_j0(x: f64) -> Result<f64> {
    check_finite("j0", x)?;
    Ok(j0_unchecked(x.abs()))
}

pub fn bessel_j1(x: f64) -> Result<f64> {
    check_finite("j1", x)?;
    let v = j1_unchecked(x.abs());
    Ok(if x < 0.0 { -v } else { v })
}

pub fn bessel_y0(x: f64) -> Result<f64> {
    check_positive("y0", x)?;
    Ok(y0_unchecked(x))
}

pub fn bessel_y1(x: f64) -> Result<f64> {
    check_positive("y1", x)?;
    Ok(y1_unchecked(x))
}

pub fn bessel_k0(x: f64) -> Result<f64> {
    check_positive("k0", x)?;
    Ok(modified::k01(x).0)
}

pub fn bessel_k1(x: f64) -> Result<f64> {
    check_positive("k1", x)?;
    Ok(modified::k01(x).1)
}

/// `H^(1)_order(x) = J_order(x) + i Y_order(x)`, composed from the real
/// functions above.
pub fn hankel1(order: u32, x: f64) -> Result<Complex64> {
    match order {
        0 => Ok(Complex64::new(bessel_j0(x)?, bessel_y0(x)?)),
        1 => Ok(Complex64::new(bessel_j1(x)?, bessel_y1(x)?)),
        n => Err(SpecFunError::Order(n)),
    }
}

/// `(H^(1)_0(x), H^(1)_1(x))` sharing one `sin`/`cos` evaluation.
///
/// Kernel hot path: the argument must be finite and positive (not checked).
/// Agrees with [`hankel1`] to rounding.
#[inline]
pub fn hankel01(x: f64) -> (Complex64, Complex64) {
    debug_assert!(x > 0.0 && x.is_finite());
    if x < JY_CROSSOVER {
        let (j0, j1, y0, y1) = series_jy(x);
        (Complex64::new(j0, y0), Complex64::new(j1, y1))
    } else {
        let (s, c) = x.sin_cos();
        let amp = (2.0 / (PI * x)).sqrt();
        let (p0, q0) = (pq_p(x, &tables::PR0, &tables::PS0), pq_q(x, &tables::QR0, &tables::QS0, -0.125));
        let (p1, q1) = (pq_p(x, &tables::PR1, &tables::PS1), pq_q(x, &tables::QR1, &tables::QS1, 0.375));
        // e^{i(x - pi/4)} and e^{i(x - 3pi/4)}
        let e0 = Complex64::new((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2);
        let e1 = Complex64::new((s - c) * FRAC_1_SQRT_2, -(s + c) * FRAC_1_SQRT_2);
        (
            Complex64::new(p0, q0) * e0 * amp,
            Complex64::new(p1, q1) * e1 * amp,
        )
    }
}

/// `(K0(x), K1(x))`; kernel hot path, `x > 0` finite assumed.
#[inline]
pub fn bessel_k01(x: f64) -> (f64, f64) {
    debug_assert!(x > 0.0 && x.is_finite());
    modified::k01(x)
}

pub(crate) fn j0_unchecked(x: f64) -> f64 {
    if x < JY_CROSSOVER {
        series_j0(x)
    } else {
        let (s, c) = x.sin_cos();
        let p = pq_p(x, &tables::PR0, &tables::PS0);
        let q = pq_q(x, &tables::QR0, &tables::QS0, -0.125);
        (2.0 / (PI * x)).sqrt() * (p * (c + s) - q * (s - c)) * FRAC_1_SQRT_2
    }
}

pub(crate) fn j1_unchecked(x: f64) -> f64 {
    if x < JY_CROSSOVER {
        series_j1(x)
    } else {
        let (s, c) = x.sin_cos();
        let p = pq_p(x, &tables::PR1, &tables::PS1);
        let q = pq_q(x, &tables::QR1, &tables::QS1, 0.375);
        (2.0 / (PI * x)).sqrt() * (p * (s - c) + q * (s + c)) * FRAC_1_SQRT_2
    }
}

fn y0_unchecked(x: f64) -> f64 {
    if x < JY_CROSSOVER {
        series_jy(x).2
    } else {
        let (s, c) = x.sin_cos();
        let p = pq_p(x, &tables::PR0, &tables::PS0);
        let q = pq_q(x, &tables::QR0, &tables::QS0, -0.125);
        (2.0 / (PI * x)).sqrt() * (p * (s - c) + q * (c + s)) * FRAC_1_SQRT_2
    }
}

fn y1_unchecked(x: f64) -> f64 {
    if x < JY_CROSSOVER {
        series_jy(x).3
    } else {
        let (s, c) = x.sin_cos();
        let p = pq_p(x, &tables::PR1, &tables::PS1);
        let q = pq_q(x, &tables::QR1, &tables::QS1, 0.375);
        (2.0 / (PI * x)).sqrt() * (-p * (s + c) + q * (s - c)) * FRAC_1_SQRT_2
    }
}

#[inline]
fn interval(x: f64) -> usize {
    if x >= 8.0 {
        0
    } else if x >= 4.545_4 {
        1
    } else if x >= 2.857_1 {
        2
    } else {
        3
    }
}

#[inline]
fn pq_p(x: f64, pr: &[[f64; 6]; 4], ps: &[[f64; 5]; 4]) -> f64 {
    let i = interval(x);
    let (p, q) = (&pr[i], &ps[i]);
    let z = 1.0 / (x * x);
    let r = p[0] + z * (p[1] + z * (p[2] + z * (p[3] + z * (p[4] + z * p[5]))));
    let s = 1.0 + z * (q[0] + z * (q[1] + z * (q[2] + z * (q[3] + z * q[4]))));
    1.0 + r / s
}

#[inline]
fn pq_q(x: f64, qr: &[[f64; 6]; 4], qs: &[[f64; 6]; 4], lead: f64) -> f64 {
    let i = interval(x);
    let (p, q) = (&qr[i], &qs[i]);
    let z = 1.0 / (x * x);
    let r = p[0] + z * (p[1] + z * (p[2] + z * (p[3] + z * (p[4] + z * p[5]))));
    let s = 1.0 + z * (q[0] + z * (q[1] + z * (q[2] + z * (q[3] + z * (q[4] + z * q[5])))));
    (lead + r / s) / x
}

fn series_j0(x: f64) -> f64 {
    let t = -0.25 * x * x;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..40 {
        term *= t / (k * k) as f64;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn series_j1(x: f64) -> f64 {
    let t = -0.25 * x * x;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..40 {
        term *= t / (k * (k + 1)) as f64;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    0.5 * x * sum
}

/// `(J0, J1, Y0, Y1)` by the ascending series; accurate for `x < 2`.
fn series_jy(x: f64) -> (f64, f64, f64, f64) {
    let t = 0.25 * x * x;
    let lg = (0.5 * x).ln();
    // order 0: sum (-t)^k/(k!)^2 and sum (-1)^{k+1} H_k t^k/(k!)^2
    let (mut a0, mut j0, mut ys0, mut hk) = (1.0, 1.0, 0.0, 0.0);
    // order 1: sum (-t)^k/(k!(k+1)!) and sum (psi(k+1)+psi(k+2)) (-t)^k/(k!(k+1)!)
    let (mut a1, mut j1s) = (1.0, 1.0);
    let mut ys1 = -2.0 * EULER_GAMMA + 1.0;
    for k in 1..40 {
        let kf = k as f64;
        hk += 1.0 / kf;
        a0 *= -t / (kf * kf);
        j0 += a0;
        ys0 -= hk * a0;
        a1 *= -t / (kf * (kf + 1.0));
        j1s += a1;
        let psi_sum = 2.0 * (hk - EULER_GAMMA) + 1.0 / (kf + 1.0);
        ys1 += psi_sum * a1;
        if a0.abs() < 1e-18 && a1.abs() < 1e-18 {
            break;
        }
    }
    let j1 = 0.5 * x * j1s;
    let y0 = (2.0 / PI) * ((lg + EULER_GAMMA) * j0 + ys0);
    let y1 = -2.0 / (PI * x) + (2.0 / PI) * lg * j1 - (0.5 * x / PI) * ys1;
    (j0, j1, y0, y1)
}
