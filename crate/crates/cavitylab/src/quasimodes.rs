//! Laplace eigenfrequencies of an ellipse by separation in elliptic
//! coordinates: the angular Mathieu problem by Fourier-coefficient
//! tridiagonal matrices, the radial one by shooting in Prüfer form.
//!
//! With `x₁ = a cosh μ cos ν`, `x₂ = a sinh μ sin ν`, `u = M(μ) N(ν)` and
//! `q = (k a)²/4`:
//!
//! ```text
//! N'' + (α - 2q cos 2ν) N = 0      N even or odd, 2π-periodic
//! M'' - (α - 2q cosh 2μ) M = 0     M'(0)=0 (even) or M(0)=0 (odd)
//! ```
//!
//! and `M(μ₀) = 0` (Dirichlet) or `M'(μ₀) = 0` (Neumann).

use crate::error::{invalid, Error, Result};
use crate::linalg::tridiag::SymTridiag;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseSpec {
    pub a1: f64,
    pub a2: f64,
    /// Linear eccentricity `√(a1² - a2²)`.
    pub a: f64,
    pub mu0: f64,
    pub eccentricity: f64,
}

impl EllipseSpec {
    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        if !(a1 > a2 && a2 > 0.0 && a1.is_finite()) {
            return Err(invalid(format!("need a1 > a2 > 0, got a1={a1}, a2={a2}")));
        }
        let a = ((a1 - a2) * (a1 + a2)).sqrt();
        // asinh is better conditioned than acosh for nearly circular ellipses
        let mu0 = (a2 / a).asinh();
        let eccentricity = (1.0 - (a2 / a1).powi(2)).sqrt();
        Ok(EllipseSpec { a1, a2, a, mu0, eccentricity })
    }

    pub fn k_from_q(&self, q: f64) -> f64 {
        2.0 * q.sqrt() / self.a
    }

    pub fn q_from_k(&self, k: f64) -> f64 {
        let ka = k * self.a;
        0.25 * ka * ka
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" | "e" => Ok(Parity::Even),
            "odd" | "o" => Ok(Parity::Odd),
            _ => Err(invalid(format!("unknown parity `{s}` (expected even or odd)"))),
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
        })
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(BoundaryCondition::Dirichlet),
            "neumann" => Ok(BoundaryCondition::Neumann),
            _ => Err(invalid(format!("unknown boundary condition `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MathieuMode {
    pub parity: Parity,
    pub m: usize,
    pub n: usize,
    pub bc: BoundaryCondition,
    pub alpha: f64,
    pub q: f64,
    pub k: f64,
}

fn check_index(n: usize, parity: Parity) -> Result<()> {
    if parity == Parity::Odd && n == 0 {
        return Err(invalid("odd angular functions start at n = 1"));
    }
    Ok(())
}

/// Tridiagonal matrix whose `r`-th eigenvalue is `a_n(q)` or `b_n(q)`,
/// together with `r`. `size` Fourier coefficients are kept.
fn mathieu_matrix(n: usize, parity: Parity, q: f64, size: usize) -> (SymTridiag, usize) {
    let sq2 = std::f64::consts::SQRT_2;
    let (d, e): (Vec<f64>, Vec<f64>) = match (parity, n % 2) {
        // cos 2rν
        (Parity::Even, 0) => {
            let d = (0..size).map(|r| (2 * r * 2 * r) as f64).collect();
            let e = (0..size - 1).map(|r| if r == 0 { sq2 * q } else { q }).collect();
            (d, e)
        }
        // cos (2r+1)ν
        (Parity::Even, _) => {
            let d = (0..size).map(|r| ((2 * r + 1) * (2 * r + 1)) as f64 + if r == 0 { q } else { 0.0 }).collect();
            (d, vec![q; size - 1])
        }
        // sin (2r+1)ν
        (Parity::Odd, 1) => {
            let d = (0..size).map(|r| ((2 * r + 1) * (2 * r + 1)) as f64 - if r == 0 { q } else { 0.0 }).collect();
            (d, vec![q; size - 1])
        }
        // sin (2r+2)ν
        (Parity::Odd, _) => {
            let d = (0..size).map(|r| ((2 * r + 2) * (2 * r + 2)) as f64).collect();
            (d, vec![q; size - 1])
        }
    };
    let r = match parity {
        Parity::Even => n / 2,
        Parity::Odd => (n - 1) / 2,
    };
    (SymTridiag::new(d, e), r)
}

/// Mathieu characteristic value `a_n(q)` (even) or `b_n(q)` (odd).
pub fn angular_characteristic(n: usize, parity: Parity, q: f64) -> Result<f64> {
    check_index(n, parity)?;
    if !(q >= 0.0 && q.is_finite()) {
        return Err(invalid(format!("q = {q} must be a finite non-negative number")));
    }
    let mut size = n / 2 + 12 + (3.0 * q.sqrt()).ceil() as usize;
    let eval = |size: usize| {
        let (t, r) = mathieu_matrix(n, parity, q, size);
        t.eigenvalue(r)
    };
    let mut prev = eval(size);
    for _ in 0..8 {
        size += size / 2 + 8;
        let next = eval(size);
        if (next - prev).abs() <= 1e-12 * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    let last = eval(size + size / 2 + 8);
    Err(Error::NoConvergence(format!(
        "Mathieu characteristic value for n={n}, {parity}, q={q}: truncation iterates {prev} and {last}"
    )))
}

/// Outcome of integrating the radial equation from `μ = 0` to `μ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialShot {
    /// `M(μ₀)` (Dirichlet) or `M'(μ₀)/s` (Neumann) divided by the Prüfer
    /// amplitude, in `[-1, 1]`.
    pub residual: f64,
    /// Sign changes of `M` in `(0, μ₀)`.
    pub zero_count: usize,
    /// Continuous Prüfer angle at `μ₀`, with `s M = ρ sin φ`, `M' = ρ cos φ`.
    pub phase: f64,
}

/// Prüfer frequency scale: the largest `√|α - 2q cosh 2μ|` on `[0, μ₀]`.
fn prufer_scale(alpha: f64, q: f64, mu0: f64) -> f64 {
    let c0 = (alpha - 2.0 * q).abs();
    let c1 = (alpha - 2.0 * q * (2.0 * mu0).cosh()).abs();
    c0.max(c1).max(1.0).sqrt()
}

pub fn radial_shoot(alpha: f64, q: f64, parity: Parity, bc: BoundaryCondition, mu0: f64) -> Result<RadialShot> {
    if !(mu0 > 0.0 && mu0.is_finite()) || !alpha.is_finite() || !(q >= 0.0 && q.is_finite()) {
        return Err(invalid(format!("radial problem needs μ₀ > 0 and finite α, q (got {mu0}, {alpha}, {q})")));
    }
    let s = prufer_scale(alpha, q, mu0);
    let phi0 = match parity {
        Parity::Even => FRAC_PI_2,
        Parity::Odd => 0.0,
    };
    let rhs = |mu: f64, y: &[f64; 1]| {
        let c = alpha - 2.0 * q * (2.0 * mu).cosh();
        let (sn, cs) = y[0].sin_cos();
        [s * cs * cs - c / s * sn * sn]
    };
    let phi = dopri5(rhs, [phi0], 0.0, mu0, 1e-12, 1e-12)?[0];
    let zero_count = ((phi / PI).ceil() as i64 - 1).max(0) as usize;
    let residual = match bc {
        BoundaryCondition::Dirichlet => phi.sin(),
        BoundaryCondition::Neumann => phi.cos(),
    };
    Ok(RadialShot { residual, zero_count, phase: phi })
}

/// Dormand–Prince 5(4) with standard step-size control.
pub(crate) fn dopri5<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    t0: f64,
    t1: f64,
    rtol: f64,
    atol: f64,
) -> Result<[f64; N]> {
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    // fifth-order weights minus embedded fourth-order weights
    const E: [f64; 7] = [
        35.0 / 384.0 - 5179.0 / 57600.0,
        0.0,
        500.0 / 1113.0 - 7571.0 / 16695.0,
        125.0 / 192.0 - 393.0 / 640.0,
        -2187.0 / 6784.0 + 92097.0 / 339200.0,
        11.0 / 84.0 - 187.0 / 2100.0,
        -1.0 / 40.0,
    ];
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0);
    }
    let mut t = t0;
    let mut y = y0;
    let mut h = span * 1e-3;
    let mut steps = 0usize;
    while (t1 - t) * span.signum() > 0.0 {
        steps += 1;
        if steps > 5_000_000 {
            return Err(Error::NoConvergence(format!("ODE integration stalled at t = {t}")));
        }
        if (t + h - t1) * span.signum() > 0.0 {
            h = t1 - t;
        }
        let mut k = [[0.0; N]; 7];
        k[0] = f(t, &y);
        for s in 1..7 {
            let mut ys = y;
            for (i, v) in ys.iter_mut().enumerate() {
                for (l, kl) in k.iter().enumerate().take(s) {
                    *v += h * A[s][l] * kl[i];
                }
            }
            k[s] = f(t + C[s] * h, &ys);
        }
        let mut ynew = y;
        let mut err: f64 = 0.0;
        for i in 0..N {
            let mut inc = 0.0;
            let mut e = 0.0;
            for s in 0..7 {
                inc += A[6].get(s).copied().unwrap_or(0.0) * k[s][i];
                e += E[s] * k[s][i];
            }
            ynew[i] = y[i] + h * inc;
            let sc = atol + rtol * y[i].abs().max(ynew[i].abs());
            err = err.max((h * e).abs() / sc);
        }
        if !err.is_finite() {
            return Err(Error::NoConvergence(format!("non-finite ODE state at t = {t}")));
        }
        if err <= 1.0 {
            t += h;
            y = ynew;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h.abs() < 1e-15 * span.abs() {
            return Err(Error::NoConvergence(format!("ODE step size underflow at t = {t}")));
        }
    }
    Ok(y)
}

/// `φ(μ₀)` minus its target value for mode `m`: `(m+1)π` (Dirichlet) or
/// `mπ + π/2` (Neumann). Increasing in `q`.
fn phase_mismatch(m: usize, n: usize, parity: Parity, bc: BoundaryCondition, mu0: f64, q: f64) -> Result<(f64, f64)> {
    let alpha = angular_characteristic(n, parity, q)?;
    let shot = radial_shoot(alpha, q, parity, bc, mu0)?;
    let target = match bc {
        BoundaryCondition::Dirichlet => (m as f64 + 1.0) * PI,
        BoundaryCondition::Neumann => m as f64 * PI + FRAC_PI_2,
    };
    Ok((shot.phase - target, alpha))
}

/// Largest `q` tried before a mode search gives up.
pub const Q_SCAN_LIMIT: f64 = 1e8;

pub fn find_mode(m: usize, n: usize, parity: Parity, bc: BoundaryCondition, ellipse: &EllipseSpec) -> Result<MathieuMode> {
    check_index(n, parity)?;
    let mu0 = ellipse.mu0;
    let g = |q: f64| phase_mismatch(m, n, parity, bc, mu0, q);
    let mut trace = Vec::new();
    let mut lo = 1e-6;
    let (mut glo, _) = g(lo)?;
    trace.push((lo, glo));
    if glo >= 0.0 {
        return Err(Error::SearchExhausted {
            message: format!("no positive-q mode ({parity}, m={m}, n={n}, {bc}): phase already past target at q={lo}"),
            trace,
        });
    }
    let mut hi = lo;
    let mut ghi = glo;
    // geometric scan; the mismatch is monotone so the first sign change brackets the root
    while ghi < 0.0 {
        lo = hi;
        glo = ghi;
        hi = if hi < 1.0 { hi * 10.0 } else { hi * 1.5 };
        if hi > Q_SCAN_LIMIT {
            return Err(Error::SearchExhausted {
                message: format!("no bracket below q = {Q_SCAN_LIMIT} for ({parity}, m={m}, n={n}, {bc})"),
                trace,
            });
        }
        ghi = g(hi)?.0;
        trace.push((hi, ghi));
    }
    // Illinois regula falsi with bisection safeguard
    let mut side = 0i8;
    let mut q = hi;
    let mut gq = ghi;
    for it in 0..200 {
        let mut cand = (lo * ghi - hi * glo) / (ghi - glo);
        if !(cand > lo && cand < hi) || it % 8 == 7 {
            cand = 0.5 * (lo + hi);
        }
        q = cand;
        gq = g(q)?.0;
        if gq.abs() < 1e-12 || (hi - lo) <= 4.0 * f64::EPSILON * hi {
            break;
        }
        if gq < 0.0 {
            lo = q;
            glo = gq;
            if side == -1 {
                ghi *= 0.5;
            }
            side = -1;
        } else {
            hi = q;
            ghi = gq;
            if side == 1 {
                glo *= 0.5;
            }
            side = 1;
        }
    }
    if gq.abs() > 1e-11 {
        trace.push((q, gq));
        return Err(Error::SearchExhausted { message: format!("root polish stalled with mismatch {gq:e}"), trace });
    }
    let alpha = angular_characteristic(n, parity, q)?;
    Ok(MathieuMode { parity, m, n, bc, alpha, q, k: ellipse.k_from_q(q) })
}

/// Modes `m ∈ m_range` at fixed `n`, sorted by frequency.
pub fn list_quasimode_frequencies(
    n: usize,
    m_range: std::ops::Range<usize>,
    parity: Parity,
    bc: BoundaryCondition,
    ellipse: &EllipseSpec,
) -> Result<Vec<MathieuMode>> {
    let mut out = m_range.map(|m| find_mode(m, n, parity, bc, ellipse)).collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.k.total_cmp(&b.k));
    Ok(out)
}

/// Residuals of a mode recomputed with fixed-step RK4 plus Richardson
/// extrapolation, independent of the Prüfer shooting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCertificate {
    /// Boundary condition at `μ₀`, relative to the solution amplitude there.
    pub radial: f64,
    /// Symmetry condition at `ν = π/2`, relative to the amplitude there.
    pub angular: f64,
}

fn rk4_linear(c: impl Fn(f64) -> f64, y0: [f64; 2], t1: f64, steps: usize) -> [f64; 2] {
    // y'' = c(t) y
    let h = t1 / steps as f64;
    let f = |t: f64, y: [f64; 2]| [y[1], c(t) * y[0]];
    let mut y = y0;
    for i in 0..steps {
        let t = i as f64 * h;
        let k1 = f(t, y);
        let k2 = f(t + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = f(t + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = f(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for j in 0..2 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    y
}

fn richardson(c: impl Fn(f64) -> f64 + Copy, y0: [f64; 2], t1: f64, omega: f64) -> [f64; 2] {
    let steps = ((t1 * omega / 4e-3).ceil() as usize).max(2000);
    let a = rk4_linear(c, y0, t1, steps);
    let b = rk4_linear(c, y0, t1, 2 * steps);
    [(16.0 * b[0] - a[0]) / 15.0, (16.0 * b[1] - a[1]) / 15.0]
}

pub fn certify_mode(mode: &MathieuMode, ellipse: &EllipseSpec) -> ModeCertificate {
    let (alpha, q, mu0) = (mode.alpha, mode.q, ellipse.mu0);
    let start = match mode.parity {
        Parity::Even => [1.0, 0.0],
        Parity::Odd => [0.0, 1.0],
    };
    let s = prufer_scale(alpha, q, mu0);
    let y = richardson(|mu| alpha - 2.0 * q * (2.0 * mu).cosh(), start, mu0, s);
    let amp = (y[0] * y[0] + (y[1] / s).powi(2)).sqrt();
    let radial = match mode.bc {
        BoundaryCondition::Dirichlet => y[0] / amp,
        BoundaryCondition::Neumann => y[1] / s / amp,
    };
    // angular: N'' = -(α - 2q cos 2ν) N on [0, π/2]
    let sa = (alpha.abs() + 2.0 * q).max(1.0).sqrt();
    let z = richardson(|nu| -(alpha - 2.0 * q * (2.0 * nu).cos()), start, FRAC_PI_2, sa);
    let amp = (z[0] * z[0] + (z[1] / sa).powi(2)).sqrt();
    // ce_{2r}, se_{2r+1} are symmetric about π/2; ce_{2r+1}, se_{2r+2} antisymmetric
    let symmetric = matches!((mode.parity, mode.n % 2), (Parity::Even, 0) | (Parity::Odd, 1));
    let angular = if symmetric { z[1] / sa / amp } else { z[0] / amp };
    ModeCertificate { radial, angular }
}

pub const QUASIMODE_COLUMNS: [&str; 7] = ["parity", "bc", "m", "n", "alpha", "q", "k"];

pub fn write_quasimode_csv<W: std::io::Write>(w: W, modes: &[MathieuMode]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(QUASIMODE_COLUMNS)?;
    for md in modes {
        wr.write_record([
            md.parity.to_string(),
            md.bc.to_string(),
            md.m.to_string(),
            md.n.to_string(),
            format!("{:?}", md.alpha),
            format!("{:?}", md.q),
            format!("{:?}", md.k),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

/// Parses a quasimode CSV (lines starting with `#` are skipped) and checks
/// every row for consistency.
pub fn read_quasimode_csv(text: &str) -> Result<Vec<MathieuMode>> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rd.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != QUASIMODE_COLUMNS {
        return Err(Error::Parse { line: 1, message: format!("expected columns {QUASIMODE_COLUMNS:?}") });
    }
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let bad = |message: String| Error::Parse { line, message };
        if rec.len() != QUASIMODE_COLUMNS.len() {
            return Err(bad(format!("expected {} fields, found {}", QUASIMODE_COLUMNS.len(), rec.len())));
        }
        let num = |i: usize| -> Result<f64> {
            let v: f64 = rec[i].parse().map_err(|_| bad(format!("column {} is not a number", QUASIMODE_COLUMNS[i])))?;
            if !v.is_finite() {
                return Err(bad(format!("column {} is not finite", QUASIMODE_COLUMNS[i])));
            }
            Ok(v)
        };
        let int = |i: usize| -> Result<usize> {
            rec[i].parse().map_err(|_| bad(format!("column {} is not a non-negative integer", QUASIMODE_COLUMNS[i])))
        };
        let parity: Parity = rec[0].parse().map_err(|e: Error| bad(e.to_string()))?;
        let bc: BoundaryCondition = rec[1].parse().map_err(|e: Error| bad(e.to_string()))?;
        let (m, n) = (int(2)?, int(3)?);
        if parity == Parity::Odd && n == 0 {
            return Err(bad("odd mode with n = 0".into()));
        }
        let (alpha, q, k) = (num(4)?, num(5)?, num(6)?);
        if !(q > 0.0 && k > 0.0) {
            return Err(bad("q and k must be positive".into()));
        }
        out.push(MathieuMode { parity, m, n, bc, alpha, q, k });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_q_limit() {
        for (n, p) in [(0, Parity::Even), (1, Parity::Even), (1, Parity::Odd), (2, Parity::Odd), (5, Parity::Even)] {
            let a = angular_characteristic(n, p, 1e-9).unwrap();
            assert!((a - (n * n) as f64).abs() < 1e-6, "{n} {p}: {a}");
        }
    }

    #[test]
    fn ellipse_identities() {
        let e = EllipseSpec::new(1.0, 0.5).unwrap();
        assert!((e.mu0.cosh() * e.a - 1.0).abs() < 1e-12);
        assert!((e.mu0.sinh() * e.a - 0.5).abs() < 1e-12);
        let q = e.q_from_k(37.5);
        assert!((e.k_from_q(q) - 37.5).abs() < 1e-13);
    }

    #[test]
    fn dopri_exponential() {
        let y = dopri5(|_, y: &[f64; 1]| [y[0]], [1.0], 0.0, 1.0, 1e-12, 1e-12).unwrap();
        assert!((y[0] - 1f64.exp()).abs() < 1e-11);
    }
}
