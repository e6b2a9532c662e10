//! Quadrature rules on `[0, 1]`.

use crate::linalg::tridiag::SymTridiag;

/// Nodes and weights on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// `n`-point Gauss–Legendre rule mapped to `[0, 1]`.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    Rule { nodes, weights }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `n`-point Gauss rule for `∫_0^1 -ln(x) f(x) dx`.
///
/// Recurrence coefficients come from the modified Chebyshev algorithm with
/// moments against monic shifted Legendre polynomials, which stays well
/// conditioned; nodes are the Jacobi-matrix eigenvalues and weights the
/// Christoffel numbers.
pub fn gauss_log(n: usize) -> Rule {
    assert!(n >= 1);
    let m = 2 * n;
    // shifted monic Legendre: a_k = 1/2, b_k = 1/(4(4 - k^-2))
    let a = vec![0.5; m];
    let b: Vec<f64> = (0..m)
        .map(|k| if k == 0 { 1.0 } else { 0.25 / (4.0 - 1.0 / (k * k) as f64) })
        .collect();
    let mut mom = vec![0.0; m];
    mom[0] = 1.0;
    let mut fact_ratio = 1.0; // (k!)^2/(2k)!
    for (k, mk) in mom.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        fact_ratio *= kf * kf / ((2.0 * kf - 1.0) * 2.0 * kf);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        *mk = sign * fact_ratio / (kf * (kf + 1.0));
    }
    let (alpha, beta) = modified_chebyshev(&mom, &a, &b, n);
    let jac = SymTridiag::new(alpha.clone(), beta[1..].iter().map(|v| v.sqrt()).collect());
    let nodes = jac.eigenvalues();
    let weights = nodes
        .iter()
        .map(|&x| {
            // orthonormal recurrence
            let mut pm1 = 0.0;
            let mut p = 1.0 / beta[0].sqrt();
            let mut s = p * p;
            for k in 0..n - 1 {
                let pn = ((x - alpha[k]) * p - beta[k].sqrt() * pm1) / beta[k + 1].sqrt();
                pm1 = p;
                p = pn;
                s += p * p;
            }
            1.0 / s
        })
        .collect();
    Rule { nodes, weights }
}

fn modified_chebyshev(mom: &[f64], a: &[f64], b: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let m = 2 * n;
    let mut alpha = vec![0.0; n];
    let mut beta = vec![0.0; n];
    let mut sig_prev = vec![0.0; m + 1];
    let mut sig: Vec<f64> = mom.to_vec();
    sig.push(0.0);
    alpha[0] = a[0] + mom[1] / mom[0];
    beta[0] = mom[0];
    for k in 1..n {
        let mut next = vec![0.0; m + 1];
        for l in k..(m - k) {
            next[l] = sig[l + 1] - (alpha[k - 1] - a[l]) * sig[l] - beta[k - 1] * sig_prev[l]
                + b[l] * sig[l - 1];
        }
        alpha[k] = a[k] + next[k + 1] / next[k] - sig[k] / sig[k - 1];
        beta[k] = next[k] / sig[k - 1];
        sig_prev = sig;
        sig = next;
    }
    (alpha, beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_is_exact_for_polynomials() {
        for n in [1, 2, 5, 8, 16, 32] {
            let r = gauss_legendre(n);
            for p in 0..(2 * n) {
                let v = r.integrate(|x| x.powi(p as i32));
                assert!((v - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn log_rule_matches_moments() {
        // ∫_0^1 -ln(x) x^p dx = 1/(p+1)^2
        for n in [1, 2, 4, 8, 12, 16, 24] {
            let r = gauss_log(n);
            assert!(r.nodes.iter().all(|&x| x > 0.0 && x < 1.0));
            assert!(r.weights.iter().all(|&w| w > 0.0));
            for p in 0..(2 * n) {
                let v = r.integrate(|x| x.powi(p as i32));
                let exact = 1.0 / ((p + 1) * (p + 1)) as f64;
                assert!((v - exact).abs() < 1e-13, "n={n} p={p}: {v} vs {exact}");
            }
        }
    }
}
