//! Oracles shared by the integration tests. Integer-order Bessel values come
//! from Miller's backward recurrence (J) and forward recurrence from the
//! library's Y0/Y1 (Y), independent of the assembly code.
#![allow(dead_code)]

pub mod synthetic;

use cavitylab::linalg::C64;
use cavitylab::specfun::{bessel_y0, bessel_y1};

/// `J_0..=J_nmax` at `x > 0` by Miller's algorithm normalised with
/// `J0 + 2 Σ J_2m = 1`.
pub fn bessel_j_all(nmax: usize, x: f64) -> Vec<f64> {
    let start = nmax + 40 + (1.5 * x) as usize;
    let start = start + start % 2;
    let mut out = vec![0.0; nmax + 1];
    let (mut jp1, mut j) = (0.0_f64, 1e-300_f64);
    let mut norm = 0.0;
    for n in (0..start).rev() {
        // j holds J_{n+1}, jp1 holds J_{n+2}
        let jm = 2.0 * (n as f64 + 1.0) / x * j - jp1;
        jp1 = j;
        j = jm;
        if n <= nmax {
            out[n] = j;
        }
        if n % 2 == 0 {
            norm += if n == 0 { j } else { 2.0 * j };
        }
        if j.abs() > 1e250 {
            let s = 1e-250;
            j *= s;
            jp1 *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    out.iter().map(|v| v / norm).collect()
}

pub fn bessel_y_all(nmax: usize, x: f64) -> Vec<f64> {
    let mut y = vec![bessel_y0(x).unwrap(), bessel_y1(x).unwrap()];
    for n in 1..nmax {
        let next = 2.0 * n as f64 / x * y[n] - y[n - 1];
        y.push(next);
    }
    y.truncate(nmax + 1);
    y
}

/// `(J_n, J_n', H_n, H_n')` for `n = 0..=nmax`.
pub fn cylinder_functions(nmax: usize, x: f64) -> Vec<(f64, f64, C64, C64)> {
    let j = bessel_j_all(nmax + 1, x);
    let y = bessel_y_all(nmax + 1, x);
    (0..=nmax)
        .map(|n| {
            let nf = n as f64;
            // f_n' = -f_{n+1} + (n/x) f_n
            let jd = -j[n + 1] + nf / x * j[n];
            let yd = -y[n + 1] + nf / x * y[n];
            (j[n], jd, C64::new(j[n], y[n]), C64::new(jd, yd))
        })
        .collect()
}

/// Eigenvalues of `A'_k` on the unit circle for Fourier modes `|n| ≤ nmax`
/// (each nonzero mode is double).
pub fn circle_aprime_eigenvalues(k: f64, nmax: usize) -> Vec<C64> {
    let i = C64::new(0.0, 1.0);
    cylinder_functions(nmax, k)
        .into_iter()
        .map(|(j, jd, h, _)| i * (std::f64::consts::PI * k / 2.0) * (jd - i * j) * h)
        .collect()
}

/// `∂_n u` of the total field on the unit circle at polar angle `phi` for a
/// sound-soft circle hit by `exp(i k x·(cos θ, sin θ))`.
pub fn mie_neumann_trace(k: f64, theta: f64, phi: f64) -> C64 {
    let nmax = (k + 40.0) as usize;
    let f = cylinder_functions(nmax, k);
    let i = C64::new(0.0, 1.0);
    let c = -2.0 * i / std::f64::consts::PI;
    let mut sum = c / f[0].2;
    for (n, fun) in f.iter().enumerate().skip(1) {
        let term = c * i.powu(n as u32) / fun.2 * 2.0 * ((n as f64) * (phi - theta)).cos();
        sum += term;
    }
    sum
}

/// Total field at polar `(r, phi)`, `r ≥ 1`, for the same problem.
pub fn mie_total_field(k: f64, theta: f64, r: f64, phi: f64) -> C64 {
    let nmax = (k * r + 40.0) as usize;
    let a = cylinder_functions(nmax, k);
    let b = cylinder_functions(nmax, k * r);
    let i = C64::new(0.0, 1.0);
    let mut sum = C64::new(0.0, 0.0);
    for n in 0..=nmax {
        let radial = C64::new(b[n].0, 0.0) - a[n].0 / a[n].2 * b[n].2;
        let mult = if n == 0 { 1.0 } else { 2.0 * ((n as f64) * (phi - theta)).cos() };
        sum += i.powu(n as u32) * radial * mult;
    }
    sum
}
