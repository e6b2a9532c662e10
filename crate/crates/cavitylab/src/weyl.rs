//! Phase-space volume of billiard tori trapped in a cut ellipse and the
//! Weyl-type counts built from it.

use crate::error::{invalid, Error, Result};
use crate::linalg::C64;
use crate::quadrature::gauss_legendre;
use crate::quasimodes::BoundaryCondition;
use crate::spectral::Rectangle;
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylConfig {
    pub a1: f64,
    pub a2: f64,
    /// Abscissa where the ellipse is cut.
    pub x_cut: f64,
    /// Half-width of the frequency window.
    pub p: f64,
    /// Gauss points per direction on the first pass.
    pub initial_points: usize,
}

impl WeylConfig {
    pub fn new(a1: f64, a2: f64, x_cut: f64) -> Result<Self> {
        let c = WeylConfig { a1, a2, x_cut, p: 0.45, initial_points: 24 };
        c.validate()?;
        Ok(c)
    }

    /// Cut at `x = a1 cos φ0`.
    pub fn with_cut_angle(a1: f64, a2: f64, phi0: f64) -> Result<Self> {
        Self::new(a1, a2, a1 * phi0.cos())
    }

    pub fn small_cavity() -> Self {
        Self::with_cut_angle(1.0, 0.5, 7.0 * PI / 10.0).expect("valid")
    }

    pub fn large_cavity() -> Self {
        Self::with_cut_angle(1.0, 0.5, 9.0 * PI / 10.0).expect("valid")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a1 > self.a2 && self.a2 > 0.0 && self.a1.is_finite()) {
            return Err(invalid(format!("need a1 > a2 > 0, got {} and {}", self.a1, self.a2)));
        }
        if !(self.x_cut.abs() <= self.a1) {
            return Err(invalid(format!("cut abscissa {} outside [-a1, a1]", self.x_cut)));
        }
        if !(self.p > 0.0 && self.p.is_finite()) {
            return Err(invalid(format!("window half-width {} must be positive", self.p)));
        }
        if self.initial_points < 2 {
            return Err(invalid("need at least two quadrature points"));
        }
        Ok(())
    }

    /// `-(1 - x_cut²/a1²)`.
    pub fn alpha_cut(&self) -> f64 {
        -(1.0 - (self.x_cut / self.a1).powi(2))
    }
}

/// `arcsin √((α + sin²θ)/(sinh²ω + sin²θ))` where `sin²θ ≥ -α`, else 0.
pub fn phi_integrand(alpha: f64, omega: f64, theta: f64) -> f64 {
    let s2 = theta.sin().powi(2);
    if s2 < -alpha {
        return 0.0;
    }
    let den = omega.sinh().powi(2) + s2;
    if den == 0.0 {
        // ω = θ = 0 forces α = 0; the limit along θ = 0 is π/2
        return FRAC_PI_2;
    }
    ((alpha + s2) / den).clamp(0.0, 1.0).sqrt().asin()
}

fn v_loc_with(cfg: &WeylConfig, points: usize) -> f64 {
    let alpha = cfg.alpha_cut();
    let a2 = cfg.a1 * cfg.a1 - cfg.a2 * cfg.a2;
    let mu0 = (cfg.a2 / a2.sqrt()).asinh();
    let tmin = (-alpha).max(0.0).sqrt().min(1.0).asin();
    let width = FRAC_PI_2 - tmin;
    if width <= 0.0 {
        return 0.0;
    }
    let rule = gauss_legendre(points);
    let mut total = 0.0;
    // θ = θmin + width u² absorbs the square-root edge at θmin
    for (&u, &wu) in rule.nodes.iter().zip(&rule.weights) {
        let theta = tmin + width * u * u;
        let jac = 2.0 * width * u;
        let s2 = theta.sin().powi(2);
        let mut inner = 0.0;
        for (&v, &wv) in rule.nodes.iter().zip(&rule.weights) {
            let omega = mu0 * v;
            inner += wv * phi_integrand(alpha, omega, theta) * (omega.sinh().powi(2) + s2);
        }
        total += wu * jac * mu0 * inner;
    }
    8.0 * a2 * total
}

/// `V_loc(α_cut)`; Gauss points are doubled until the value settles. On
/// failure the error carries the `(points, value)` history.
pub fn v_loc(cfg: &WeylConfig) -> Result<f64> {
    cfg.validate()?;
    let mut pts = cfg.initial_points;
    let mut prev = v_loc_with(cfg, pts);
    let mut history = vec![(pts as f64, prev)];
    while pts < 4096 {
        pts *= 2;
        let next = v_loc_with(cfg, pts);
        history.push((pts as f64, next));
        if (next - prev).abs() <= 1e-9 * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::SearchExhausted { message: "v_loc quadrature did not settle".into(), trace: history })
}

/// `2 p d V_loc/(2π)^d k^{d-1}` with `d = 2`.
pub fn window_count_from_volume(k: f64, v_loc: f64, p: f64) -> f64 {
    2.0 * p * 2.0 * v_loc / (4.0 * PI * PI) * k
}

pub fn predicted_window_count(k: f64, cfg: &WeylConfig) -> Result<f64> {
    if !(k >= 0.0) {
        return Err(invalid(format!("wavenumber {k} must be non-negative")));
    }
    Ok(window_count_from_volume(k, v_loc(cfg)?, cfg.p))
}

/// Two-term Weyl count of Laplace eigenvalues below `Λ` in a planar domain:
/// `Λ A/4π ∓ √Λ L/4π`, minus for Dirichlet.
pub fn weyl_bulk_count(lambda: f64, area: f64, perimeter: f64, bc: BoundaryCondition) -> Result<f64> {
    if !(lambda > 0.0 && area > 0.0 && perimeter >= 0.0) {
        return Err(invalid("need Λ > 0, area > 0 and perimeter ≥ 0"));
    }
    let lead = lambda * area / (4.0 * PI);
    let edge = lambda.sqrt() * perimeter / (4.0 * PI);
    Ok(match bc {
        BoundaryCondition::Dirichlet => lead - edge,
        BoundaryCondition::Neumann => lead + edge,
    })
}

/// Least-squares parabola `Re z ≈ c0 + c1 Im z + c2 (Im z)²` through a set of
/// eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticLocus {
    pub coeffs: [f64; 3],
}

impl QuadraticLocus {
    pub fn fit(points: &[C64]) -> Result<Self> {
        if points.len() < 3 {
            return Err(invalid("need at least three points for a quadratic fit"));
        }
        // normal equations in the monomials 1, x, x²
        let mut g = [[0.0; 3]; 3];
        let mut r = [0.0; 3];
        for z in points {
            let b = [1.0, z.im, z.im * z.im];
            for i in 0..3 {
                for j in 0..3 {
                    g[i][j] += b[i] * b[j];
                }
                r[i] += b[i] * z.re;
            }
        }
        let coeffs = solve3(g, r).ok_or_else(|| Error::Degenerate("points do not determine a parabola".into()))?;
        Ok(QuadraticLocus { coeffs })
    }

    pub fn re_at(&self, x: f64) -> f64 {
        self.coeffs[0] + x * (self.coeffs[1] + x * self.coeffs[2])
    }

    /// Horizontal offset `|Re z - curve(Im z)|`.
    pub fn deviation(&self, z: C64) -> f64 {
        (z.re - self.re_at(z.im)).abs()
    }

    /// Arclength of the part of the curve inside `rect`.
    pub fn length_inside(&self, rect: &Rectangle) -> f64 {
        let n = 4000;
        let (x0, x1) = rect.im;
        let h = (x1 - x0) / n as f64;
        let mut len = 0.0;
        for i in 0..n {
            let (xa, xb) = (x0 + i as f64 * h, x0 + (i + 1) as f64 * h);
            let (ya, yb) = (self.re_at(xa), self.re_at(xb));
            let inside = |y: f64| rect.re.0 <= y && y <= rect.re.1;
            if inside(ya) && inside(yb) {
                len += h.hypot(yb - ya);
            }
        }
        len
    }
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for c in 0..3 {
        let p = (c..3).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-300 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..3 {
            let f = a[r][c] / a[c][c];
            for k in c..3 {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let s: f64 = (r + 1..3).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inactive_branch_and_corner() {
        assert_eq!(phi_integrand(-0.9, 0.2, 0.1), 0.0);
        assert_eq!(phi_integrand(0.0, 0.0, 0.0), FRAC_PI_2);
        assert!((phi_integrand(0.0, 0.0, 0.7) - FRAC_PI_2).abs() < 1e-7);
    }

    #[test]
    fn cut_at_centre_has_no_volume() {
        let c = WeylConfig::new(1.0, 0.5, 0.0).unwrap();
        assert_eq!(c.alpha_cut(), -1.0);
        assert_eq!(v_loc(&c).unwrap(), 0.0);
    }

    #[test]
    fn bulk_count_leading_term() {
        let v = weyl_bulk_count(50.0, 2.0, 0.0, BoundaryCondition::Dirichlet).unwrap();
        assert!((v - 100.0 / (4.0 * PI)).abs() < 1e-14);
    }
}
