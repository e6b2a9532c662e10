//! Residual bounds for GMRES on matrices with a cluster of eigenvalues in a
//! half plane plus a few outliers near zero.

use crate::error::{invalid, Error, Result};
use crate::linalg::{min_singular_value, norm2, vec_norm, CMat, C64};
use crate::spectral::Rectangle;
use std::f64::consts::PI;

/// The bounded open set `N` holding the outliers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutlierRegion {
    Rectangle(Rectangle),
    Disk { center: C64, radius: f64 },
    /// `{Re z < S} ∩ {|z| < radius}` where `S` is the half-plane threshold.
    LeftOfThreshold { radius: f64 },
}

impl OutlierRegion {
    fn contains(&self, z: C64, s: f64) -> bool {
        match *self {
            OutlierRegion::Rectangle(r) => r.contains(z),
            OutlierRegion::Disk { center, radius } => (z - center).norm() < radius,
            OutlierRegion::LeftOfThreshold { radius } => z.re < s && z.norm() < radius,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterBoundInput {
    pub eigenvalues: Vec<C64>,
    pub norm2: f64,
    pub kappa_star: f64,
    pub n: usize,
    /// Half plane `H = {Re z ≥ S}`.
    pub s_threshold: f64,
    pub l0: f64,
    pub l1: f64,
    pub region: OutlierRegion,
    pub epsilon: f64,
}

/// Hypotheses that could be checked on the data and failed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AssumptionReport {
    /// Eigenvalues in neither `N` nor `H`.
    pub uncovered: Vec<usize>,
    /// `S > ‖B‖₂`, impossible when `H` holds an eigenvalue of `B`; signals
    /// an underestimated norm.
    pub threshold_above_norm: bool,
}

impl AssumptionReport {
    pub fn ok(&self) -> bool {
        self.uncovered.is_empty() && !self.threshold_above_norm
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterBoundResult {
    pub delta: f64,
    pub n_eig: usize,
    pub beta: f64,
    pub gamma_beta: f64,
    pub ell: usize,
    pub outliers: Vec<usize>,
    /// `Σ_{j≤ℓ} log(1/|λ_j|)`.
    pub log_outlier_product: f64,
    pub norm2: f64,
    pub m_star: usize,
    pub epsilon: f64,
    pub report: AssumptionReport,
}

impl ClusterBoundResult {
    /// `log` of the constant multiplying `γ_β^{m-ℓ}`.
    pub fn log_prefactor(&self) -> f64 {
        let nb = self.norm2 + self.delta;
        self.log_outlier_product + (self.ell as f64 + 1.0) * (nb.ln() + 3f64.ln()) - self.delta.ln()
    }

    pub fn log_residual_bound(&self, m: usize) -> f64 {
        if m < self.ell {
            return f64::INFINITY;
        }
        self.log_prefactor() + (m - self.ell) as f64 * self.gamma_beta.ln()
    }

    /// Bound on `‖r_m‖/‖r_0‖`; infinite below `m = ℓ`.
    pub fn residual_bound(&self, m: usize) -> f64 {
        self.log_residual_bound(m).exp()
    }

    pub fn outlier_product(&self) -> f64 {
        self.log_outlier_product.exp()
    }
}

/// `(β, γ_β)` from `cos β = L0/(‖B‖₂ + δ)`.
pub fn beta_gamma(norm2: f64, l0: f64, delta: f64) -> Result<(f64, f64)> {
    let c = l0 / (norm2 + delta);
    if !(c > 0.0 && c < 1.0) {
        return Err(invalid(format!("cos β = {c} outside (0, 1)")));
    }
    let beta = c.acos();
    Ok((beta, gamma_of_beta(beta)))
}

pub fn gamma_of_beta(beta: f64) -> f64 {
    2.0 * (beta / (4.0 - 2.0 * beta / PI)).sin()
}

pub fn compute_bound(input: &ClusterBoundInput) -> Result<ClusterBoundResult> {
    let ClusterBoundInput { eigenvalues, norm2, kappa_star, n, s_threshold: s, l0, l1, region, epsilon } = input;
    let (norm2, kappa_star, s, l0, l1, eps) = (*norm2, *kappa_star, *s, *l0, *l1, *epsilon);
    if !(l0 > 0.0 && l0 < l1 && l1 <= s) {
        return Err(invalid(format!("need 0 < L0 < L1 ≤ S, got L0={l0}, L1={l1}, S={s}")));
    }
    if !(kappa_star >= 1.0 && kappa_star.is_finite()) {
        return Err(invalid(format!("κ* = {kappa_star} must be a finite number ≥ 1")));
    }
    if *n == 0 || !(norm2 > 0.0 && norm2.is_finite()) {
        return Err(invalid("need n ≥ 1 and a positive finite norm"));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid(format!("target ε = {eps} outside (0, 1]")));
    }
    if !eigenvalues.iter().any(|z| z.re >= s) {
        return Err(invalid(format!("no eigenvalue in the half plane Re z ≥ {s}")));
    }
    let mut report = AssumptionReport { threshold_above_norm: s > norm2, ..Default::default() };
    let mut outliers = Vec::new();
    for (j, &z) in eigenvalues.iter().enumerate() {
        if region.contains(z, s) {
            outliers.push(j);
        } else if z.re < s {
            report.uncovered.push(j);
        }
    }
    let mut log_prod = 0.0;
    for &j in &outliers {
        let a = eigenvalues[j].norm();
        if a == 0.0 {
            return Err(Error::Degenerate(format!("outlier eigenvalue {j} is zero")));
        }
        log_prod -= a.ln();
    }
    let mut repeated = Vec::new();
    for (p, &i) in outliers.iter().enumerate() {
        for &j in &outliers[p + 1..] {
            if eigenvalues[i] == eigenvalues[j] {
                repeated.push((i, j));
            }
        }
    }
    if !repeated.is_empty() {
        return Err(Error::Degenerate(format!("repeated outlier eigenvalues at index pairs {repeated:?}")));
    }
    let n_eig = outliers.iter().filter(|&&j| l0 < eigenvalues[j].re && eigenvalues[j].re < l1).count() + 1;
    let delta = (l1 - l0) / (4.0 * *n as f64 * kappa_star * n_eig as f64);
    let (beta, gamma) = beta_gamma(norm2, l0, delta)?;
    let mut res = ClusterBoundResult {
        delta,
        n_eig,
        beta,
        gamma_beta: gamma,
        ell: outliers.len(),
        outliers,
        log_outlier_product: log_prod,
        norm2,
        m_star: 0,
        epsilon: eps,
        report,
    };
    let x = res.ell as f64 + (res.log_prefactor() - eps.ln()) / (-gamma.ln());
    let mut m = x.ceil().max(res.ell as f64) as usize;
    // guard against the ceiling landing one short through rounding
    while res.log_residual_bound(m) > eps.ln() {
        m += 1;
    }
    res.m_star = m;
    Ok(res)
}

/// Large-norm asymptotic of `(log 1/γ_β)⁻¹`, `(3√3/4)‖B‖₂/L0`.
pub fn gamma_asymptotic(norm2: f64, l0: f64, delta: f64) -> Result<f64> {
    if !(norm2 >= 10.0 * delta && norm2 >= 10.0 * l0) || !(l0 > 0.0 && delta > 0.0) {
        return Err(invalid(format!(
            "asymptotic form needs ‖B‖ ≥ 10 δ and ‖B‖ ≥ 10 L0 (‖B‖={norm2}, L0={l0}, δ={delta}); evaluate γ_β exactly instead"
        )));
    }
    Ok(3.0 * 3f64.sqrt() / 4.0 * norm2 / l0)
}

/// `min{2+γ, 2/(1-γ^{m+1})} γ^m`.
pub fn em_lens_bound(m: usize, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < PI / 2.0) {
        return Err(invalid(format!("β = {beta} outside (0, π/2)")));
    }
    let g = gamma_of_beta(beta);
    let gm = g.powi(m as i32);
    Ok((2.0 + g).min(2.0 / (1.0 - g * gm)) * gm)
}

/// `count` points on the boundary of `{|z| ≤ 1} ∩ {Re z ≥ cos β}`, spread
/// over the arc and the chord in proportion to their lengths.
pub fn lens_boundary_samples(beta: f64, count: usize) -> Vec<C64> {
    let arc = 2.0 * beta;
    let chord = 2.0 * beta.sin();
    let n_arc = ((count as f64) * arc / (arc + chord)).round().max(2.0) as usize;
    let n_chord = count.saturating_sub(n_arc).max(2);
    let mut pts: Vec<C64> = (0..n_arc)
        .map(|i| {
            let t = -beta + arc * i as f64 / (n_arc - 1) as f64;
            C64::from_polar(1.0, t)
        })
        .collect();
    let c = beta.cos();
    let s = beta.sin();
    pts.extend((1..n_chord - 1).map(|i| C64::new(c, s - 2.0 * s * i as f64 / (n_chord - 1) as f64)));
    pts
}

/// `min_{p ∈ P_m, p(0)=1} max_i |p(z_i)|` over the samples.
pub fn em_bruteforce(m: usize, samples: &[C64]) -> Result<f64> {
    weighted_minmax(samples, &vec![1.0; samples.len()], m)
}

/// Orthonormal polynomial basis on a discrete set by Arnoldi on
/// `diag(nodes)`. `values[j]` holds `φ_j` at the nodes (scaled by the
/// starting weights), `at_zero[j] = φ_j(0)`. Stops early when the Krylov
/// space is exhausted; `exhausted` is then set.
struct PolyBasis {
    values: Vec<Vec<C64>>,
    at_zero: Vec<C64>,
    exhausted: bool,
}

fn arnoldi_basis(nodes: &[C64], start: &[C64], degree: usize) -> PolyBasis {
    let zero = C64::new(0.0, 0.0);
    let b = vec_norm(start);
    let mut values = vec![start.iter().map(|v| v / b).collect::<Vec<_>>()];
    let mut at_zero = vec![C64::new(1.0 / b, 0.0)];
    let scale = nodes.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for j in 0..degree {
        let mut w: Vec<C64> = nodes.iter().zip(&values[j]).map(|(z, q)| z * q).collect();
        let mut h = vec![zero; j + 1];
        for _ in 0..2 {
            for (i, q) in values.iter().enumerate() {
                let c: C64 = q.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
                h[i] += c;
            }
        }
        let hn = vec_norm(&w);
        if hn <= 1e-13 * scale.max(f64::MIN_POSITIVE) {
            return PolyBasis { values, at_zero, exhausted: true };
        }
        // z φ_j = Σ h_i φ_i + hn φ_{j+1}, evaluated at z = 0
        let mut next0 = zero;
        for (hi, pi) in h.iter().zip(&at_zero) {
            next0 -= hi * pi;
        }
        at_zero.push(next0 / hn);
        values.push(w.iter().map(|v| v / hn).collect());
    }
    PolyBasis { values, at_zero, exhausted: false }
}

/// `min_{p ∈ P_m, p(0)=1} max_i w_i |p(z_i)|`, solved as a second-order cone
/// program in the coefficients of a discrete-orthonormal basis.
pub fn weighted_minmax(samples: &[C64], weights: &[f64], m: usize) -> Result<f64> {
    if samples.len() != weights.len() {
        return Err(Error::Dimension { expected: samples.len(), got: weights.len() });
    }
    if samples.is_empty() {
        return Err(invalid("no sample points"));
    }
    if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) || samples.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(invalid("samples and weights must be finite, weights non-negative"));
    }
    let wmax = weights.iter().copied().fold(0.0, f64::max);
    if m == 0 || wmax == 0.0 {
        return Ok(wmax);
    }
    let ones = vec![C64::new(1.0, 0.0); samples.len()];
    let basis = arnoldi_basis(samples, &ones, m);
    if basis.exhausted {
        // a polynomial of degree ≤ m vanishes on every sample; only samples
        // at the origin keep |p| = 1
        return Ok(samples.iter().zip(weights).filter(|(z, _)| z.norm() == 0.0).map(|(_, w)| *w).fold(0.0, f64::max));
    }
    // rescale so that the equality row has unit norm: p = σ Σ a_j φ_j
    let norm0 = basis.at_zero.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let u: Vec<C64> = basis.at_zero.iter().map(|v| v / norm0).collect();
    let coeffs = solve_minmax_socp(&basis.values, weights, &u)?;
    // evaluate the returned polynomial exactly, normalised by its value at 0
    let p0: C64 = coeffs.iter().zip(&basis.at_zero).map(|(a, f)| a * f).sum();
    if p0.norm() == 0.0 {
        return Err(Error::Solver("min-max solution has p(0) = 0".into()));
    }
    let mut worst: f64 = 0.0;
    for (i, w) in weights.iter().enumerate() {
        let v: C64 = coeffs.iter().zip(&basis.values).map(|(a, q)| a * q[i]).sum();
        worst = worst.max(w * v.norm());
    }
    Ok(worst / p0.norm())
}

/// Solves `min t` over complex `a` with `Σ a_j u_j = 1` and
/// `w_i |Σ_j a_j Q_j(i)| ≤ t`; returns `a`.
fn solve_minmax_socp(q: &[Vec<C64>], weights: &[f64], u: &[C64]) -> Result<Vec<C64>> {
    use clarabel::algebra::CscMatrix;
    use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT};
    let d = q.len();
    let ns = weights.len();
    let nv = 1 + 2 * d;
    // variable layout: t, Re a_0, Im a_0, Re a_1, ...
    let (mut ri, mut ci, mut vals) = (Vec::new(), Vec::new(), Vec::new());
    let mut push = |r: usize, c: usize, v: f64| {
        if v != 0.0 {
            ri.push(r);
            ci.push(c);
            vals.push(v);
        }
    };
    let mut b = vec![0.0; 2 + 3 * ns];
    // equality rows: Re and Im of Σ a_j u_j
    for (j, uj) in u.iter().enumerate() {
        push(0, 1 + 2 * j, uj.re);
        push(0, 2 + 2 * j, -uj.im);
        push(1, 1 + 2 * j, uj.im);
        push(1, 2 + 2 * j, uj.re);
    }
    b[0] = 1.0;
    // cone rows: s = b - A x = (t, w Re p_i, w Im p_i)
    for (i, &w) in weights.iter().enumerate() {
        let r = 2 + 3 * i;
        push(r, 0, -1.0);
        for (j, col) in q.iter().enumerate() {
            let v = col[i] * w;
            push(r + 1, 1 + 2 * j, -v.re);
            push(r + 1, 2 + 2 * j, v.im);
            push(r + 2, 1 + 2 * j, -v.im);
            push(r + 2, 2 + 2 * j, -v.re);
        }
    }
    let a = CscMatrix::new_from_triplets(2 + 3 * ns, nv, ri, ci, vals);
    let p = CscMatrix::zeros((nv, nv));
    let mut c = vec![0.0; nv];
    c[0] = 1.0;
    let mut cones = vec![SupportedConeT::ZeroConeT(2)];
    cones.extend((0..ns).map(|_| SupportedConeT::SecondOrderConeT(3)));
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .max_iter(400)
        .tol_gap_abs(1e-12)
        .tol_gap_rel(1e-11)
        .tol_feas(1e-11)
        .build()
        .map_err(|e| Error::Solver(format!("settings: {e:?}")))?;
    let mut solver = DefaultSolver::new(&p, &c, &a, &b, &cones, settings).map_err(|e| Error::Solver(format!("{e:?}")))?;
    solver.solve();
    match solver.solution.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => {}
        s => return Err(Error::Solver(format!("min-max cone program ended with status {s:?}"))),
    }
    let x = &solver.solution.x;
    Ok((0..d).map(|j| C64::new(x[1 + 2 * j], x[2 + 2 * j])).collect())
}

/// Vertical line `Re z = L` in `(L0, L1)` avoiding the discs of radius
/// `δ n κ(λ_j)` about every eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BauerFikeLine {
    pub l: f64,
    pub certified: bool,
}

pub fn bauer_fike_line(eigs: &[C64], kappas: &[f64], delta: f64, n: usize, l0: f64, l1: f64) -> Result<BauerFikeLine> {
    if eigs.len() != kappas.len() {
        return Err(Error::Dimension { expected: eigs.len(), got: kappas.len() });
    }
    if !(l0 < l1) || !(delta >= 0.0) {
        return Err(invalid("need L0 < L1 and δ ≥ 0"));
    }
    let mut blocked: Vec<(f64, f64)> = eigs
        .iter()
        .zip(kappas)
        .map(|(z, k)| {
            let r = delta * n as f64 * k;
            (z.re - r, z.re + r)
        })
        .filter(|(a, b)| *b >= l0 && *a <= l1)
        .collect();
    blocked.sort_by(|a, b| a.0.total_cmp(&b.0));
    // widest open gap inside (L0, L1)
    let mut best: Option<(f64, f64)> = None;
    let mut left = l0;
    let mut consider = |a: f64, b: f64| {
        if b > a && best.map_or(true, |(p, q)| b - a > q - p) {
            best = Some((a, b));
        }
    };
    for &(a, b) in &blocked {
        consider(left, a.min(l1));
        left = left.max(b);
    }
    consider(left, l1);
    Ok(match best {
        Some((a, b)) => BauerFikeLine { l: 0.5 * (a + b), certified: true },
        None => BauerFikeLine { l: 0.5 * (l0 + l1), certified: false },
    })
}

/// Sampled evaluation of the contour bound
/// `|Γ|/2π · min_p max_{z∈Γ} Π|λ_j - z|/|λ_j| · ‖(zI - B)⁻¹‖₂ · |p(z)|`
/// with `p ∈ P_{m-ℓ}`, `p(0) = 1`. `contour` is a closed polygon.
pub fn campbell_contour_bound(b: &CMat, outliers: &[C64], contour: &[C64], m: usize) -> Result<f64> {
    let n = b.nrows();
    if b.ncols() != n {
        return Err(Error::Dimension { expected: n, got: b.ncols() });
    }
    if contour.len() < 3 {
        return Err(invalid("contour needs at least three samples"));
    }
    let r = outliers.len();
    if m < r {
        return Err(invalid(format!("m = {m} below the number of outliers {r}")));
    }
    if outliers.iter().any(|z| z.norm() == 0.0) {
        return Err(Error::Degenerate("zero outlier".into()));
    }
    // with 0 inside, p(0) = 1 forces max |p| ≥ 1 and the bound is void
    for &z in std::iter::once(&C64::new(0.0, 0.0)).chain(outliers) {
        if winding_number(contour, z) != 0 {
            return Err(invalid(format!("contour winds around {z}; the origin and outliers must lie outside")));
        }
    }
    let len: f64 = (0..contour.len()).map(|i| (contour[(i + 1) % contour.len()] - contour[i]).norm()).sum();
    let scale = norm2(b)?.max(1.0);
    let mut weights = Vec::with_capacity(contour.len());
    for &z in contour {
        let shifted = CMat::from_fn(n, n, |i, j| if i == j { z - b[(i, j)] } else { -b[(i, j)] });
        let smin = min_singular_value(&shifted)?;
        if smin <= 1e-14 * scale {
            return Err(Error::Singular(format!("contour sample {z} lies on the spectrum")));
        }
        let prod: f64 = outliers.iter().map(|l| (l - z).norm() / l.norm()).product();
        weights.push(prod / smin);
    }
    Ok(len / (2.0 * PI) * weighted_minmax(contour, &weights, m - r)?)
}

/// Winding number of the closed polygon about `z`.
fn winding_number(poly: &[C64], z: C64) -> i64 {
    let mut turn = 0.0;
    for i in 0..poly.len() {
        let a = poly[i] - z;
        let b = poly[(i + 1) % poly.len()] - z;
        turn += (b / a).arg();
    }
    (turn / (2.0 * PI)).round() as i64
}

/// `‖V‖₂ min_{p ∈ P_m, p(0)=1} (Σ|β'_j|² |p(λ_j)|²)^{1/2}` with
/// `β' = V⁻¹ b / ‖b‖`.
pub fn weighted_rhs_bound(v: &CMat, eigs: &[C64], b: &[C64], m: usize) -> Result<f64> {
    let n = v.nrows();
    if eigs.len() != n || b.len() != n {
        return Err(Error::Dimension { expected: n, got: eigs.len().min(b.len()) });
    }
    let nb = vec_norm(b);
    if nb == 0.0 {
        return Err(invalid("zero right-hand side"));
    }
    let coef = crate::gmres::direct_solve(v, b)?;
    let beta: Vec<C64> = coef.iter().map(|c| c / nb).collect();
    let vnorm = norm2(v)?;
    let bn = vec_norm(&beta);
    if bn == 0.0 {
        return Ok(0.0);
    }
    let basis = arnoldi_basis(eigs, &beta, m);
    if basis.exhausted {
        return Ok(0.0);
    }
    let phi0 = basis.at_zero.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    Ok(vnorm / phi0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_substitution() {
        // four outliers with Re in (L0, L1) give N_eig = 5
        let mut eigs: Vec<C64> = (0..4).map(|j| C64::new(0.6 + 0.1 * j as f64, 0.01)).collect();
        eigs.push(C64::new(2.0, 0.0));
        let input = ClusterBoundInput {
            eigenvalues: eigs,
            norm2: 2.0,
            kappa_star: 10.0,
            n: 100,
            s_threshold: 1.5,
            l0: 0.5,
            l1: 1.0,
            region: OutlierRegion::LeftOfThreshold { radius: 10.0 },
            epsilon: 1e-6,
        };
        let r = compute_bound(&input).unwrap();
        assert_eq!(r.n_eig, 5);
        assert!((r.delta - 2.5e-5).abs() < 1e-20);
        assert!(r.residual_bound(r.m_star) <= 1e-6);
        assert!(r.residual_bound(r.m_star - 1) > 1e-6 || r.m_star == r.ell);
    }

    #[test]
    fn single_point_minmax() {
        assert_eq!(em_bruteforce(0, &[C64::new(1.0, 0.0)]).unwrap(), 1.0);
        assert_eq!(em_bruteforce(3, &[C64::new(1.0, 0.0)]).unwrap(), 0.0);
    }

    #[test]
    fn two_point_minmax() {
        // {1, 3}: best degree-1 polynomial is 1 - z/2, max 1/2
        let v = em_bruteforce(1, &[C64::new(1.0, 0.0), C64::new(3.0, 0.0)]).unwrap();
        assert!((v - 0.5).abs() < 1e-8, "{v}");
    }

    #[test]
    fn bauer_fike_geometry() {
        let eigs = [C64::new(0.5, 0.0), C64::new(0.9, 0.0)];
        let l = bauer_fike_line(&eigs, &[1.0, 1.0], 0.05, 1, 0.5, 0.9).unwrap();
        assert!(l.certified && l.l > 0.55 && l.l < 0.85);
    }
}
