//! Dense spectral diagnostics: eigenvalues with condition numbers, singular
//! values, rectangle counts, eigenvalue paths in `k` and power-law fits.

use crate::error::{invalid, Error, Result};
use crate::linalg::{dense::fingerprint, singular_values, CMat, C64};
use std::io::Write;

/// Closed rectangle `{Re ∈ [re.0, re.1], Im ∈ [im.0, im.1]}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Default for Rectangle {
    fn default() -> Self {
        Rectangle { re: (-0.1, 0.1), im: (-0.6, 0.6) }
    }
}

impl Rectangle {
    pub fn new(re: (f64, f64), im: (f64, f64)) -> Result<Self> {
        let r = Rectangle { re, im };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a < b;
        if !ok(self.re) || !ok(self.im) {
            return Err(invalid(format!("degenerate rectangle {:?} x {:?}", self.re, self.im)));
        }
        Ok(())
    }

    /// The same rectangle with the roles of the two intervals exchanged.
    pub fn swapped(&self) -> Self {
        Rectangle { re: self.im, im: self.re }
    }

    pub fn contains(&self, z: C64) -> bool {
        self.re.0 <= z.re && z.re <= self.re.1 && self.im.0 <= z.im && z.im <= self.im.1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Compute eigenvector condition numbers (needs the full eigenvector
    /// matrix and its inverse).
    pub condition_numbers: bool,
    pub rectangle: Rectangle,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions { condition_numbers: true, rectangle: Rectangle::default() }
    }
}

#[derive(Debug, Clone)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<C64>,
    /// `κ(λ_j)`, aligned with `eigenvalues`; empty when not requested.
    pub kappas: Vec<f64>,
    /// Decreasing.
    pub singular_values: Vec<f64>,
    pub norm2: f64,
    pub min_sv: f64,
    pub min_abs_eig: f64,
    pub rectangle: Rectangle,
    pub ell: usize,
    pub members: Vec<usize>,
    pub l_quantity: f64,
}

impl SpectralSummary {
    pub fn kappa_max(&self) -> Option<f64> {
        self.kappas.iter().copied().reduce(f64::max)
    }

    pub fn max_abs_eig(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn check_square_finite(b: &CMat) -> Result<()> {
    if b.nrows() != b.ncols() {
        return Err(Error::Dimension { expected: b.nrows(), got: b.ncols() });
    }
    for j in 0..b.ncols() {
        if b.col(j).iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid("matrix has non-finite entries"));
        }
    }
    Ok(())
}

pub fn full_spectrum(b: &CMat) -> Result<SpectralSummary> {
    full_spectrum_with(b, &SpectrumOptions::default())
}

pub fn full_spectrum_with(b: &CMat, opts: &SpectrumOptions) -> Result<SpectralSummary> {
    check_square_finite(b)?;
    opts.rectangle.validate()?;
    let n = b.nrows();
    let fail = |what: &str, e: &dyn std::fmt::Debug| {
        Error::NoConvergence(format!("{what} failed on {n}x{n} matrix {:016x}: {e:?}", fingerprint(b)))
    };
    let (eigenvalues, kappas) = if opts.condition_numbers {
        let eig = b.eigen().map_err(|e| fail("eigendecomposition", &e))?;
        let u = eig.U();
        let s = eig.S().column_vector();
        let lambda: Vec<C64> = (0..n).map(|j| s[j]).collect();
        (lambda, condition_numbers(&u.to_owned())?)
    } else {
        (b.eigenvalues().map_err(|e| fail("eigenvalues", &e))?, Vec::new())
    };
    let sv = singular_values(b).map_err(|e| Error::NoConvergence(format!("{e} (matrix {:016x})", fingerprint(b))))?;
    let norm2 = sv.first().copied().unwrap_or(0.0);
    let min_sv = sv.last().copied().unwrap_or(0.0);
    let min_abs_eig = eigenvalues.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let (ell, members) = count_in_rectangle(&eigenvalues, &opts.rectangle);
    let l = l_quantity(&eigenvalues, &opts.rectangle)?;
    Ok(SpectralSummary {
        eigenvalues,
        kappas,
        singular_values: sv,
        norm2,
        min_sv,
        min_abs_eig,
        rectangle: opts.rectangle,
        ell,
        members,
        l_quantity: l,
    })
}

/// `κ_j = ‖u_j‖ ‖w_j‖` where `w_j` is row `j` of `U⁻¹`, so that `w_j u_j = 1`.
fn condition_numbers(u: &CMat) -> Result<Vec<f64>> {
    use faer::linalg::solvers::Solve;
    let n = u.nrows();
    let lu = u.partial_piv_lu();
    let small = (0..n).map(|i| lu.U()[(i, i)].norm()).fold(f64::INFINITY, f64::min);
    if n > 0 && small == 0.0 {
        return Err(Error::Singular("eigenvector matrix (defective eigenvalue)".into()));
    }
    let w = lu.solve(crate::linalg::identity(n));
    Ok((0..n)
        .map(|j| {
            let cu: f64 = u.col(j).iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            let rw: f64 = (0..n).map(|l| w[(j, l)].norm_sqr()).sum::<f64>().sqrt();
            cu * rw
        })
        .collect())
}

pub fn count_in_rectangle(eigs: &[C64], rect: &Rectangle) -> (usize, Vec<usize>) {
    let members: Vec<usize> = (0..eigs.len()).filter(|&j| rect.contains(eigs[j])).collect();
    (members.len(), members)
}

/// `Σ log(1/|λ_j|)` over the eigenvalues in `rect`.
pub fn l_quantity(eigs: &[C64], rect: &Rectangle) -> Result<f64> {
    let mut s = 0.0;
    for z in eigs.iter().filter(|z| rect.contains(**z)) {
        let a = z.norm();
        if a == 0.0 {
            return Err(Error::Degenerate("zero eigenvalue inside the rectangle: L is infinite".into()));
        }
        s -= a.ln();
    }
    Ok(s)
}

/// Multiplication by `2/i`, used when plotting the spectrum of `B_k`.
pub fn rotate_two_over_i(eigs: &[C64]) -> Vec<C64> {
    eigs.iter().map(|z| z * C64::new(0.0, -2.0)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPath {
    pub k: Vec<f64>,
    pub values: Vec<C64>,
    /// `|Δλ|/Δk` per step; one shorter than `values`.
    pub speeds: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct EigenPaths {
    pub paths: Vec<EigenPath>,
    /// Median displacement exceeds ten times the median eigenvalue spacing.
    pub coarse_grid: bool,
}

/// Follows every eigenvalue through a uniform `k` grid by minimum-cost
/// bipartite matching between consecutive spectra.
pub fn track_eigenpaths(ks: &[f64], spectra: &[Vec<C64>]) -> Result<EigenPaths> {
    if ks.len() != spectra.len() {
        return Err(Error::Dimension { expected: ks.len(), got: spectra.len() });
    }
    if ks.is_empty() {
        return Ok(EigenPaths { paths: Vec::new(), coarse_grid: false });
    }
    let n = spectra[0].len();
    if let Some(s) = spectra.iter().find(|s| s.len() != n) {
        return Err(Error::Dimension { expected: n, got: s.len() });
    }
    if ks.len() > 1 {
        let step = ks[1] - ks[0];
        if !(step > 0.0) {
            return Err(invalid("k grid must be increasing"));
        }
        for w in ks.windows(2) {
            if ((w[1] - w[0]) - step).abs() > 1e-9 * step.max(w[1].abs()) {
                return Err(invalid(format!("k grid is not uniform near k = {}", w[0])));
            }
        }
    }
    // canonical start order so the result does not depend on input ordering
    let mut current = spectra[0].clone();
    current.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut paths: Vec<EigenPath> =
        current.iter().map(|&z| EigenPath { k: vec![ks[0]], values: vec![z], speeds: Vec::new() }).collect();
    let mut displacements = Vec::new();
    for step in 1..ks.len() {
        let next = &spectra[step];
        let cost: Vec<Vec<f64>> = current.iter().map(|a| next.iter().map(|b| (a - b).norm()).collect()).collect();
        let assign = hungarian(&cost);
        let dk = ks[step] - ks[step - 1];
        for (p, path) in paths.iter_mut().enumerate() {
            let z = next[assign[p]];
            let d = (z - current[p]).norm();
            displacements.push(d);
            path.k.push(ks[step]);
            path.values.push(z);
            path.speeds.push(d / dk);
        }
        current = paths.iter().map(|p| *p.values.last().expect("non-empty path")).collect();
    }
    let spacing = median(spectra.iter().flat_map(|s| nearest_neighbour_distances(s)).collect());
    let coarse_grid = match (median(displacements), spacing) {
        (Some(d), Some(s)) => d > 10.0 * s,
        _ => false,
    };
    Ok(EigenPaths { paths, coarse_grid })
}

fn nearest_neighbour_distances(s: &[C64]) -> Vec<f64> {
    (0..s.len())
        .map(|i| {
            (0..s.len()).filter(|&j| j != i).map(|j| (s[i] - s[j]).norm()).fold(f64::INFINITY, f64::min)
        })
        .filter(|d| d.is_finite())
        .collect()
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

/// Minimum-cost perfect matching on a square cost matrix (Kuhn–Munkres with
/// potentials). Returns `assign[row] = column`.
pub fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    // 1-based arrays; column 0 is a virtual start
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0; n];
    for j in 1..=n {
        assign[p[j] - 1] = j - 1;
    }
    assign
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// `‖C k^a - v‖₂` at the optimum.
    pub residual_norm: f64,
    pub iterations: usize,
}

/// Least-squares fit `values ≈ C k^a` by Levenberg–Marquardt, started from
/// the log-log linear fit.
pub fn fit_exponent(ks: &[f64], values: &[f64]) -> Result<PowerFit> {
    if ks.len() != values.len() {
        return Err(Error::Dimension { expected: ks.len(), got: values.len() });
    }
    if ks.len() < 3 {
        return Err(invalid(format!("need at least 3 samples, got {}", ks.len())));
    }
    if ks.iter().chain(values).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(invalid("power-law fit needs positive finite data"));
    }
    let lk: Vec<f64> = ks.iter().map(|k| k.ln()).collect();
    let lv: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let m = lk.len() as f64;
    let (mk, mv) = (lk.iter().sum::<f64>() / m, lv.iter().sum::<f64>() / m);
    let sxx: f64 = lk.iter().map(|x| (x - mk).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("all k values coincide"));
    }
    let sxy: f64 = lk.iter().zip(&lv).map(|(x, y)| (x - mk) * (y - mv)).sum();
    let mut a = sxy / sxx;
    let mut c = (mv - a * mk).exp();

    let sse = |c: f64, a: f64| -> f64 { ks.iter().zip(values).map(|(k, v)| (c * k.powf(a) - v).powi(2)).sum() };
    let mut cur = sse(c, a);
    let mut lambda = 1e-3;
    let mut iterations = 0;
    for it in 0..500 {
        iterations = it + 1;
        // normal equations J^T J and J^T r
        let (mut j11, mut j12, mut j22, mut g1, mut g2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (k, v) in ks.iter().zip(values) {
            let ka = k.powf(a);
            let r = c * ka - v;
            let dc = ka;
            let da = c * ka * k.ln();
            j11 += dc * dc;
            j12 += dc * da;
            j22 += da * da;
            g1 += dc * r;
            g2 += da * r;
        }
        let mut accepted = false;
        for _ in 0..60 {
            let (a11, a22) = (j11 * (1.0 + lambda), j22 * (1.0 + lambda));
            let det = a11 * a22 - j12 * j12;
            if det <= 0.0 || !det.is_finite() {
                lambda *= 10.0;
                continue;
            }
            let sc = -(a22 * g1 - j12 * g2) / det;
            let sa = -(a11 * g2 - j12 * g1) / det;
            let trial = sse(c + sc, a + sa);
            if trial.is_finite() && trial <= cur {
                let small = sc.abs() <= 1e-14 * c.abs() && sa.abs() <= 1e-14 * a.abs().max(1.0);
                c += sc;
                a += sa;
                cur = trial;
                lambda = (lambda * 0.3).max(1e-12);
                accepted = true;
                if small {
                    return Ok(PowerFit { exponent: a, prefactor: c, residual_norm: cur.sqrt(), iterations });
                }
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    Ok(PowerFit { exponent: a, prefactor: c, residual_norm: cur.sqrt(), iterations })
}

/// Spectrum rows `k, index, re_lambda, im_lambda, kappa_lambda, sigma`.
/// Singular values are listed alongside eigenvalues by index; `kappa` is
/// blank when not computed.
pub fn write_spectrum_rows<W: Write>(wr: &mut csv::Writer<W>, k: f64, s: &SpectralSummary, rotate: bool) -> Result<()> {
    let eigs = if rotate { rotate_two_over_i(&s.eigenvalues) } else { s.eigenvalues.clone() };
    for (j, z) in eigs.iter().enumerate() {
        let kappa = s.kappas.get(j).map(|v| format!("{v:e}")).unwrap_or_default();
        let sigma = s.singular_values.get(j).map(|v| format!("{v:e}")).unwrap_or_default();
        wr.write_record([format!("{k}"), j.to_string(), format!("{:e}", z.re), format!("{:e}", z.im), kappa, sigma])?;
    }
    Ok(())
}

pub const SPECTRUM_COLUMNS: [&str; 6] = ["k", "index", "re_lambda", "im_lambda", "kappa_lambda", "sigma"];
pub const SUMMARY_COLUMNS: [&str; 7] = ["k", "n", "norm2", "min_sv", "min_abs_eig", "ell", "L_quantity"];

pub fn summary_record(k: f64, s: &SpectralSummary) -> [String; 7] {
    [
        format!("{k}"),
        s.eigenvalues.len().to_string(),
        format!("{:e}", s.norm2),
        format!("{:e}", s.min_sv),
        format!("{:e}", s.min_abs_eig),
        s.ell.to_string(),
        format!("{:e}", s.l_quantity),
    ]
}
