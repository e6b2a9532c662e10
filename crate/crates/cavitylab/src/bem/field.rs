use super::kernel::{Kernel, KernelFamily};
use super::PlaneWave;
use crate::error::{invalid, Error, Result};
use crate::geometry::BoundaryMesh;
use crate::linalg::C64;
use crate::quadrature::gauss_legendre;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldValue {
    pub point: [f64; 2],
    /// Total field `u^I + D[u] - S[∂_n u]`.
    pub total: C64,
    /// The point is closer to some element than that element's length, so
    /// the quadrature may be inaccurate.
    pub near_singular: bool,
}

const FIELD_ORDER: usize = 16;

/// Total field at exterior points from P1 traces of `u` and `∂_n u`.
pub fn evaluate_field(
    mesh: &BoundaryMesh,
    dirichlet_trace: &[C64],
    neumann_trace: &[C64],
    wave: &PlaneWave,
    points: &[[f64; 2]],
) -> Result<Vec<FieldValue>> {
    let n = mesh.len();
    for t in [dirichlet_trace, neumann_trace] {
        if t.len() != n {
            return Err(Error::Dimension { expected: n, got: t.len() });
        }
    }
    let ker = Kernel::new(KernelFamily::Helmholtz, wave.k);
    let rule = gauss_legendre(FIELD_ORDER);
    points
        .iter()
        .map(|&x| {
            if !(x[0].is_finite() && x[1].is_finite()) {
                return Err(invalid("field point is not finite"));
            }
            if mesh.contains(x) {
                return Err(invalid(format!("field point ({}, {}) lies inside the obstacle", x[0], x[1])));
            }
            let mut u = wave.value(x);
            let mut near = false;
            for e in 0..n {
                let [i, j] = mesh.elements[e];
                let h = mesh.lengths[e];
                let ne = mesh.normals[e];
                if mesh.distance_to_element(e, x) < h {
                    near = true;
                }
                for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let y = mesh.element_point(e, s);
                    let d = [y[0] - x[0], y[1] - x[1]];
                    let r = d[0].hypot(d[1]);
                    if r == 0.0 {
                        return Err(invalid("field point lies on the boundary"));
                    }
                    let (g, dg) = ker.eval(r);
                    let dn = dg * ((d[0] * ne[0] + d[1] * ne[1]) / r);
                    let dir = dirichlet_trace[i] * (1.0 - s) + dirichlet_trace[j] * s;
                    let neu = neumann_trace[i] * (1.0 - s) + neumann_trace[j] * s;
                    u += (dn * dir - g * neu) * (w * h);
                }
            }
            Ok(FieldValue { point: x, total: u, near_singular: near })
        })
        .collect()
}
