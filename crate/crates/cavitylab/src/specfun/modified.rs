use super::EULER_GAMMA;
use std::f64::consts::PI;

/// Series/continued-fraction crossover for `K0`, `K1`.
const K_CROSSOVER: f64 = 2.0;

pub(super) fn k01(x: f64) -> (f64, f64) {
    if x <= K_CROSSOVER {
        series_k01(x)
    } else {
        steed_k01(x)
    }
}

/// `I0(x)` by its power series (all terms positive, so no cancellation).
pub(crate) fn i0_series(x: f64) -> f64 {
    let t = 0.25 * x * x;
    let (mut term, mut sum) = (1.0, 1.0);
    let mut k = 1.0;
    while term > 1e-17 * sum {
        term *= t / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

fn series_k01(x: f64) -> (f64, f64) {
    let t = 0.25 * x * x;
    let lg = (0.5 * x).ln();
    let (mut a0, mut i0, mut s0, mut hk) = (1.0, 1.0, -EULER_GAMMA, 0.0);
    let (mut a1, mut i1s) = (1.0, 1.0);
    let mut s1 = 1.0 - 2.0 * EULER_GAMMA;
    for k in 1..40 {
        let kf = k as f64;
        hk += 1.0 / kf;
        a0 *= t / (kf * kf);
        i0 += a0;
        s0 += (hk - EULER_GAMMA) * a0;
        a1 *= t / (kf * (kf + 1.0));
        i1s += a1;
        s1 += (2.0 * (hk - EULER_GAMMA) + 1.0 / (kf + 1.0)) * a1;
        if a0 < 1e-18 * i0 && a1 < 1e-18 * i1s {
            break;
        }
    }
    let i1 = 0.5 * x * i1s;
    let k0 = -lg * i0 + s0;
    let k1 = 1.0 / x + lg * i1 - 0.25 * x * s1;
    (k0, k1)
}

/// Steed's method for the second continued fraction (Temme's normalisation),
/// order zero.
fn steed_k01(x: f64) -> (f64, f64) {
    let mut a = -0.25;
    let mut b = 2.0 * (x + 1.0);
    let mut d = 1.0 / b;
    let mut delta = d;
    let mut f = d;
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut q = 0.25;
    let mut c = 0.25;
    let mut s = 1.0 + q * delta;
    for k in 2..1000 {
        let kf = k as f64;
        a -= 2.0 * (kf - 1.0);
        b += 2.0;
        d = 1.0 / (a * d + b);
        delta *= b * d - 1.0;
        f += delta;
        let t = (prev - (b - 2.0) * cur) / a;
        prev = cur;
        cur = t;
        c *= -a / kf;
        q += c * t;
        s += q * delta;
        if (q * delta).abs() < 0.5 * f64::EPSILON * s.abs() {
            break;
        }
    }
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (0.5 + x - 0.25 * f) / x;
    (k0, k1)
}
