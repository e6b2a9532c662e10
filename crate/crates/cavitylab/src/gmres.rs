//! Full (unrestarted) GMRES with optional mass preconditioning, and a dense
//! LU baseline.

use crate::bem::MassMatrix;
use crate::error::{invalid, Error, Result};
use crate::linalg::{matvec, vec_norm, CMat, C64};
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preconditioner {
    None,
    Mass,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub tolerance: f64,
    /// `None` means the system size.
    pub max_iterations: Option<usize>,
    pub preconditioner: Preconditioner,
    /// Second Gram–Schmidt pass against the basis.
    pub reorthogonalize: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { tolerance: 1e-6, max_iterations: None, preconditioner: Preconditioner::Mass, reorthogonalize: false }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            // a tolerance of exactly 1 is allowed: zero iterations
            if self.tolerance != 1.0 {
                return Err(invalid(format!("tolerance {} must lie in (0, 1)", self.tolerance)));
            }
        }
        if self.max_iterations == Some(0) {
            return Err(invalid("max_iterations must be at least 1"));
        }
        Ok(())
    }
}

/// Preconditioned residual norms `r_0, ..., r_m` as recurred by Arnoldi.
#[derive(Debug, Clone, PartialEq)]
pub struct GmresTrace {
    pub residuals: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub tolerance: f64,
    /// The Krylov space became invariant before the tolerance was met.
    pub breakdown: bool,
}

impl GmresTrace {
    pub fn relative(&self) -> Vec<f64> {
        let r0 = self.residuals[0];
        self.residuals.iter().map(|r| if r0 > 0.0 { r / r0 } else { 0.0 }).collect()
    }

    pub fn final_relative(&self) -> f64 {
        *self.relative().last().expect("trace is never empty")
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["iteration", "residual_norm", "relative_residual"])?;
        for (i, (r, rel)) in self.residuals.iter().zip(self.relative()).enumerate() {
            wr.write_record([i.to_string(), format!("{r:e}"), format!("{rel:e}")])?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Anything that can apply `x ↦ A x`.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C64]) -> Vec<C64>;
}

impl LinearOperator for CMat {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        matvec(self, x)
    }
}

/// Solves `A x = b` by GMRES on `P⁻¹ A x = P⁻¹ b` with `x₀ = 0`; `P = M`
/// for mass preconditioning.
pub fn gmres_solve(
    a: &dyn LinearOperator,
    b: &[C64],
    mass: Option<&MassMatrix>,
    config: &SolveConfig,
) -> Result<(Vec<C64>, GmresTrace)> {
    config.validate()?;
    let n = a.dim();
    if b.len() != n {
        return Err(Error::Dimension { expected: n, got: b.len() });
    }
    let precond = |v: Vec<C64>| -> Result<Vec<C64>> {
        match config.preconditioner {
            Preconditioner::None => Ok(v),
            Preconditioner::Mass => {
                let m = mass.ok_or_else(|| invalid("mass preconditioning requested without a mass matrix"))?;
                if m.len() != n {
                    return Err(Error::Dimension { expected: n, got: m.len() });
                }
                Ok(m.solve(&v))
            }
        }
    };
    let zero = C64::new(0.0, 0.0);
    let r0 = precond(b.to_vec())?;
    let beta = vec_norm(&r0);
    let mut trace = GmresTrace {
        residuals: vec![beta],
        converged: false,
        iterations: 0,
        tolerance: config.tolerance,
        breakdown: false,
    };
    if beta == 0.0 || config.tolerance >= 1.0 {
        trace.converged = true;
        return Ok((vec![zero; n], trace));
    }
    let max_it = config.max_iterations.unwrap_or(n).min(n.max(1));
    let mut basis: Vec<Vec<C64>> = vec![r0.iter().map(|v| v / beta).collect()];
    // Hessenberg columns after Givens rotations (upper triangular R)
    let mut r_cols: Vec<Vec<C64>> = Vec::new();
    let mut rot: Vec<(f64, C64)> = Vec::new();
    let mut g = vec![C64::new(beta, 0.0)];
    for j in 0..max_it {
        let mut w = precond(a.apply(&basis[j]))?;
        let mut hcol = vec![zero; j + 2];
        let passes = if config.reorthogonalize { 2 } else { 1 };
        for _ in 0..passes {
            for (i, v) in basis.iter().enumerate() {
                let h: C64 = v.iter().zip(&w).map(|(vi, wi)| vi.conj() * wi).sum();
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= h * vi;
                }
                hcol[i] += h;
            }
        }
        let hnext = vec_norm(&w);
        hcol[j + 1] = C64::new(hnext, 0.0);
        for (i, &(c, s)) in rot.iter().enumerate() {
            let (x, y) = (hcol[i], hcol[i + 1]);
            hcol[i] = x * c + s * y;
            hcol[i + 1] = -s.conj() * x + y * c;
        }
        let (c, s, rr) = givens(hcol[j], hcol[j + 1]);
        hcol[j] = rr;
        hcol[j + 1] = zero;
        rot.push((c, s));
        let gj = g[j];
        g[j] = gj * c;
        g.push(-s.conj() * gj);
        r_cols.push(hcol);
        let res = g[j + 1].norm();
        trace.residuals.push(res);
        trace.iterations = j + 1;
        let happy = hnext <= 1e-14 * beta;
        if res <= config.tolerance * beta {
            trace.converged = true;
        }
        if happy && !trace.converged {
            trace.breakdown = true;
            trace.converged = true;
        }
        if trace.converged {
            break;
        }
        basis.push(w.iter().map(|v| v / hnext).collect());
    }
    // back substitution R y = g
    let m = trace.iterations;
    let mut y = vec![zero; m];
    for i in (0..m).rev() {
        let mut acc = g[i];
        for (l, yl) in y.iter().enumerate().skip(i + 1) {
            acc -= r_cols[l][i] * yl;
        }
        let d = r_cols[i][i];
        y[i] = if d.norm() > 0.0 { acc / d } else { zero };
    }
    let mut x = vec![zero; n];
    for (v, yi) in basis.iter().zip(&y) {
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += vi * yi;
        }
    }
    Ok((x, trace))
}

/// Complex Givens rotation zeroing `b` in `(a, b)`, returning `(c, s, r)`
/// with `c` real.
fn givens(a: C64, b: C64) -> (f64, C64, C64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, C64::new(0.0, 0.0), a);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb, C64::new(nb, 0.0));
    }
    let t = na.hypot(nb);
    let c = na / t;
    let phase = a / na;
    let s = phase * b.conj() / t;
    (c, s, phase * t)
}

/// `‖P⁻¹ (b - A x)‖₂`, recomputed from scratch.
pub fn true_residual(a: &dyn LinearOperator, b: &[C64], x: &[C64], mass: Option<&MassMatrix>) -> f64 {
    let ax = a.apply(x);
    let r: Vec<C64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    match mass {
        Some(m) => vec_norm(&m.solve(&r)),
        None => vec_norm(&r),
    }
}

/// Dense LU solve with partial pivoting.
pub fn direct_solve(a: &CMat, b: &[C64]) -> Result<Vec<C64>> {
    use faer::linalg::solvers::Solve;
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Dimension { expected: n, got: a.ncols() });
    }
    if b.len() != n {
        return Err(Error::Dimension { expected: n, got: b.len() });
    }
    let lu = a.partial_piv_lu();
    // reject exactly singular or numerically rank-deficient factors
    let scale = (0..n).map(|i| lu.U()[(i, i)].norm()).fold(0.0_f64, f64::max);
    let small = (0..n).map(|i| lu.U()[(i, i)].norm()).fold(f64::INFINITY, f64::min);
    if n > 0 && !(small > scale * f64::EPSILON * n as f64) {
        return Err(Error::Singular(format!("LU pivot ratio {:e}", small / scale)));
    }
    let rhs = CMat::from_fn(n, 1, |i, _| b[i]);
    let x = lu.solve(&rhs);
    Ok((0..n).map(|i| x[(i, 0)]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_precond(tol: f64) -> SolveConfig {
        SolveConfig { tolerance: tol, preconditioner: Preconditioner::None, ..Default::default() }
    }

    #[test]
    fn identity_converges_in_one_step() {
        let a = crate::linalg::identity(5);
        let b: Vec<C64> = (0..5).map(|i| C64::new(i as f64, 1.0)).collect();
        let (x, tr) = gmres_solve(&a, &b, None, &no_precond(1e-10)).unwrap();
        assert_eq!(tr.iterations, 1);
        assert!(tr.converged);
        for (xi, bi) in x.iter().zip(&b) {
            assert!((xi - bi).norm() < 1e-14);
        }
    }

    #[test]
    fn matches_lu_on_small_system() {
        let n = 12;
        let a = CMat::from_fn(n, n, |i, j| {
            let d = if i == j { 4.0 } else { 0.0 };
            C64::new(d + ((i * 7 + j * 3) % 5) as f64 * 0.1, ((i + 2 * j) % 3) as f64 * 0.2)
        });
        let b: Vec<C64> = (0..n).map(|i| C64::new(1.0, i as f64 * 0.1)).collect();
        let (x, tr) = gmres_solve(&a, &b, None, &no_precond(1e-13)).unwrap();
        let y = direct_solve(&a, &b).unwrap();
        assert!(tr.converged);
        let err: f64 = x.iter().zip(&y).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
        assert!(err < 1e-10 * vec_norm(&y));
        for w in tr.residuals.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn direct_solve_rejects_singular() {
        let a = CMat::from_fn(3, 3, |i, _| C64::new(i as f64, 0.0));
        assert!(matches!(direct_solve(&a, &[C64::new(1.0, 0.0); 3]), Err(Error::Singular(_))));
    }

    #[test]
    fn unit_tolerance_takes_no_steps() {
        let a = crate::linalg::identity(3);
        let (x, tr) = gmres_solve(&a, &[C64::new(1.0, 0.0); 3], None, &no_precond(1.0)).unwrap();
        assert_eq!(tr.iterations, 0);
        assert!(x.iter().all(|v| v.norm() == 0.0));
    }
}
