//! Element-pair Galerkin integrals for `S`, `D'` and (through `S`) `H`.
//!
//! Every unordered pair of elements is integrated once. The same quadrature
//! points give both `D'` blocks, so `S` is exactly symmetric and `D = D'ᵀ`
//! holds to the last bit.

use super::kernel::Kernel;
use crate::geometry::BoundaryMesh;
use crate::linalg::{CMat, C64};
use crate::quadrature::{gauss_legendre, gauss_log, Rule};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Quadrature orders for the pair integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Gauss points per element for well-separated pairs.
    pub far_order: usize,
    /// Gauss points per element when the element centres are closer than
    /// `near_factor` times the longer element.
    pub near_order: usize,
    /// Points per direction for the self and touching pairs, used for both
    /// the log-weighted and the plain rule.
    pub singular_order: usize,
    pub near_factor: f64,
    pub parallel: bool,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { far_order: 8, near_order: 16, singular_order: 16, near_factor: 3.0, parallel: true }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Wanted {
    pub s: bool,
    pub dprime: bool,
    pub h: bool,
}

#[derive(Debug, Default)]
pub(crate) struct Blocks {
    pub s: Option<CMat>,
    pub dprime: Option<CMat>,
    pub h: Option<CMat>,
}

type Local = [[C64; 2]; 2];

const Z: C64 = C64 { re: 0.0, im: 0.0 };
const ZERO_LOCAL: Local = [[Z; 2]; 2];

/// Integrals over element `e` (test, variable `x`) times element `f`
/// (trial, variable `y`).
#[derive(Debug, Clone, Copy)]
struct PairBlock {
    /// `∫∫ G φ_a(x) φ_b(y)`.
    s: Local,
    /// `∫∫ ∂G/∂n_x φ_a(x) φ_b(y)`, row index `a`.
    dp_ef: Local,
    /// `∫∫ ∂G/∂n_y φ_b(y) φ_a(x)`, stored `[b][a]`; this is the `D'` block
    /// with `f` as test element.
    dp_fe: Local,
}

struct Rules {
    far: Rule,
    near: Rule,
    sing: Rule,
    log: Rule,
    xi: Rule,
}

struct Ctx<'a> {
    mesh: &'a BoundaryMesh,
    ker: Kernel,
    rules: Rules,
    near_factor: f64,
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

impl Ctx<'_> {
    fn pair(&self, e: usize, f: usize) -> PairBlock {
        let m = self.mesh;
        if e == f {
            return self.self_pair(e);
        }
        let [e0, e1] = m.elements[e];
        let [f0, f1] = m.elements[f];
        if e1 == f0 || e0 == f1 {
            return self.touching_pair(e, f);
        }
        let ce = m.element_point(e, 0.5);
        let cf = m.element_point(f, 0.5);
        let d = sub(ce, cf);
        let hmax = m.lengths[e].max(m.lengths[f]);
        let rule = if dot(d, d).sqrt() < self.near_factor * hmax { &self.rules.near } else { &self.rules.far };
        self.regular_pair(e, f, rule)
    }

    fn regular_pair(&self, e: usize, f: usize, rule: &Rule) -> PairBlock {
        let m = self.mesh;
        let (he, hf) = (m.lengths[e], m.lengths[f]);
        let (ne, nf) = (m.normals[e], m.normals[f]);
        let mut blk = PairBlock { s: ZERO_LOCAL, dp_ef: ZERO_LOCAL, dp_fe: ZERO_LOCAL };
        for (&sp, &wp) in rule.nodes.iter().zip(&rule.weights) {
            let x = m.element_point(e, sp);
            let phi = [1.0 - sp, sp];
            // inner sums for this x
            let mut s_in = [Z; 2];
            let mut kx_in = [Z; 2];
            let mut ky_in = [Z; 2];
            for (&tq, &wq) in rule.nodes.iter().zip(&rule.weights) {
                let y = m.element_point(f, tq);
                let d = sub(x, y);
                let r = dot(d, d).sqrt();
                let (g, dg) = self.ker.eval(r);
                let kx = dg * (dot(d, ne) / r);
                let ky = dg * (-dot(d, nf) / r);
                let psi = [1.0 - tq, tq];
                for b in 0..2 {
                    let w = wq * psi[b];
                    s_in[b] += g * w;
                    kx_in[b] += kx * w;
                    ky_in[b] += ky * w;
                }
            }
            let w = wp * he * hf;
            for a in 0..2 {
                let wa = w * phi[a];
                for b in 0..2 {
                    blk.s[a][b] += s_in[b] * wa;
                    blk.dp_ef[a][b] += kx_in[b] * wa;
                    blk.dp_fe[b][a] += ky_in[b] * wa;
                }
            }
        }
        blk
    }

    /// Both variables on one flat element: `D'` vanishes (`(x - y)·n = 0`);
    /// the log part of `G` is integrated in `τ = |s - t|`.
    fn self_pair(&self, e: usize) -> PairBlock {
        let h = self.mesh.lengths[e];
        let ln_h = h.ln();
        let c2 = 0.5 / PI;
        // Ψ_ab(τ) = (1-τ) Σ_triangles ∫ φ_a(s) φ_b(t) dξ
        let psi = |tau: f64| -> [[f64; 2]; 2] {
            let mut out = [[0.0; 2]; 2];
            for (&xi, &w) in self.rules.xi.nodes.iter().zip(&self.rules.xi.weights) {
                let hi = tau + (1.0 - tau) * xi;
                let lo = (1.0 - tau) * xi;
                for (s, t) in [(hi, lo), (lo, hi)] {
                    let p = [1.0 - s, s];
                    let q = [1.0 - t, t];
                    for a in 0..2 {
                        for b in 0..2 {
                            out[a][b] += w * (1.0 - tau) * p[a] * q[b];
                        }
                    }
                }
            }
            out
        };
        let mut s = ZERO_LOCAL;
        for (&tau, &w) in self.rules.sing.nodes.iter().zip(&self.rules.sing.weights) {
            let (c, rem) = self.ker.log_split(h * tau);
            let smooth = rem - c2 * c * ln_h;
            let p = psi(tau);
            for a in 0..2 {
                for b in 0..2 {
                    s[a][b] += smooth * (w * p[a][b]);
                }
            }
        }
        for (&tau, &w) in self.rules.log.nodes.iter().zip(&self.rules.log.weights) {
            let (c, _) = self.ker.log_split(h * tau);
            let p = psi(tau);
            for a in 0..2 {
                for b in 0..2 {
                    s[a][b] += C64::new(w * c2 * c * p[a][b], 0.0);
                }
            }
        }
        for row in s.iter_mut() {
            for v in row.iter_mut() {
                *v *= h * h;
            }
        }
        s[1][0] = s[0][1];
        PairBlock { s, dp_ef: ZERO_LOCAL, dp_fe: ZERO_LOCAL }
    }

    /// Elements sharing one vertex `V`: Duffy split of the square at `V`.
    fn touching_pair(&self, e: usize, f: usize) -> PairBlock {
        let m = self.mesh;
        let [e0, e1] = m.elements[e];
        let [f0, f1] = m.elements[f];
        // local index of V in e and in f
        let (ve, vf) = if e1 == f0 { (1, 0) } else { (0, 1) };
        let v = m.nodes[m.elements[e][ve]];
        let ae = sub(m.nodes[if ve == 1 { e0 } else { e1 }], v);
        let bf = sub(m.nodes[if vf == 1 { f0 } else { f1 }], v);
        let (he, hf) = (m.lengths[e], m.lengths[f]);
        let (ne, nf) = (m.normals[e], m.normals[f]);
        let c2 = 0.5 / PI;
        let basis = |u: f64, vi: usize| -> [f64; 2] {
            let mut p = [u, u];
            p[vi] = 1.0 - u;
            p
        };
        let mut blk = PairBlock { s: ZERO_LOCAL, dp_ef: ZERO_LOCAL, dp_fe: ZERO_LOCAL };
        for tri in 0..2 {
            for (&w, &ww) in self.rules.sing.nodes.iter().zip(&self.rules.sing.weights) {
                // tri 0: u = z, v = z w; tri 1: v = z, u = z w
                let (cu, cv) = if tri == 0 { (1.0, w) } else { (w, 1.0) };
                let dir = [cu * ae[0] - cv * bf[0], cu * ae[1] - cv * bf[1]];
                let rho = dot(dir, dir).sqrt();
                let ln_rho = rho.ln();
                for (&z, &wz) in self.rules.sing.nodes.iter().zip(&self.rules.sing.weights) {
                    let (u, vv) = (cu * z, cv * z);
                    let r = z * rho;
                    let d = [z * dir[0], z * dir[1]];
                    let wt = he * hf * ww * wz * z;
                    let (c, rem) = self.ker.log_split(r);
                    let (_, dg) = self.ker.eval(r);
                    let gs = (rem - c2 * c * ln_rho) * wt;
                    let kx = dg * (dot(d, ne) / r) * wt;
                    let ky = dg * (-dot(d, nf) / r) * wt;
                    let p = basis(u, ve);
                    let q = basis(vv, vf);
                    for a in 0..2 {
                        for b in 0..2 {
                            let pq = p[a] * q[b];
                            blk.s[a][b] += gs * pq;
                            blk.dp_ef[a][b] += kx * pq;
                            blk.dp_fe[b][a] += ky * pq;
                        }
                    }
                }
                for (&z, &wl) in self.rules.log.nodes.iter().zip(&self.rules.log.weights) {
                    let (u, vv) = (cu * z, cv * z);
                    let (c, _) = self.ker.log_split(z * rho);
                    let wt = he * hf * ww * wl * z * c2 * c;
                    let p = basis(u, ve);
                    let q = basis(vv, vf);
                    for a in 0..2 {
                        for b in 0..2 {
                            blk.s[a][b] += C64::new(wt * p[a] * q[b], 0.0);
                        }
                    }
                }
            }
        }
        blk
    }
}

/// Rows per parallel work unit; contributions are scattered serially in
/// pair order so the result does not depend on scheduling.
const CHUNK: usize = 32;

pub(crate) fn assemble_blocks(
    mesh: &BoundaryMesh,
    ker: Kernel,
    wanted: Wanted,
    opts: &QuadratureOptions,
) -> Blocks {
    let n = mesh.len();
    let ctx = Ctx {
        mesh,
        ker,
        rules: Rules {
            far: gauss_legendre(opts.far_order),
            near: gauss_legendre(opts.near_order),
            sing: gauss_legendre(opts.singular_order),
            log: gauss_log(opts.singular_order),
            xi: gauss_legendre(3),
        },
        near_factor: opts.near_factor,
    };
    let mut s = wanted.s.then(|| CMat::zeros(n, n));
    let mut dp = wanted.dprime.then(|| CMat::zeros(n, n));
    let mut h = wanted.h.then(|| CMat::zeros(n, n));
    let kappa2 = ker.kappa2();
    let row = |e: usize| -> Vec<PairBlock> { (e..n).map(|f| ctx.pair(e, f)).collect() };
    let mut start = 0;
    while start < n {
        let end = (start + CHUNK).min(n);
        let rows: Vec<Vec<PairBlock>> = if opts.parallel {
            (start..end).into_par_iter().map(row).collect()
        } else {
            (start..end).map(row).collect()
        };
        for (e, blocks) in (start..end).zip(rows) {
            let ie = mesh.elements[e];
            let de = [-1.0 / mesh.lengths[e], 1.0 / mesh.lengths[e]];
            for (f, blk) in (e..n).zip(blocks) {
                let jf = mesh.elements[f];
                let df = [-1.0 / mesh.lengths[f], 1.0 / mesh.lengths[f]];
                let nn = dot(mesh.normals[e], mesh.normals[f]);
                let total = blk.s[0][0] + blk.s[0][1] + blk.s[1][0] + blk.s[1][1];
                for a in 0..2 {
                    for b in 0..2 {
                        let (i, j) = (ie[a], jf[b]);
                        if let Some(s) = s.as_mut() {
                            s[(i, j)] += blk.s[a][b];
                            if e != f {
                                s[(j, i)] += blk.s[a][b];
                            }
                        }
                        if let Some(dp) = dp.as_mut() {
                            dp[(i, j)] += blk.dp_ef[a][b];
                            if e != f {
                                dp[(j, i)] += blk.dp_fe[b][a];
                            }
                        }
                        if let Some(h) = h.as_mut() {
                            let v = -(total * (de[a] * df[b]) - blk.s[a][b] * (kappa2 * nn));
                            h[(i, j)] += v;
                            if e != f {
                                h[(j, i)] += v;
                            }
                        }
                    }
                }
            }
        }
        start = end;
    }
    Blocks { s, dprime: dp, h }
}
