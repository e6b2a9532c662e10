use super::curve::{ArclengthTable, BoundaryCurve, Point};
use crate::error::{invalid, Result};
use std::collections::hash_map::DefaultHasher;
use std::f64::consts::PI;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Content fingerprint of a mesh: equal node coordinates and ancestry give
/// equal ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MeshId(pub u64);

impl std::fmt::Display for MeshId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

/// Where an element sits on the underlying curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementParam {
    pub segment: usize,
    pub s0: f64,
    pub s1: f64,
}

/// Closed piecewise-linear mesh of a boundary curve. Element `j` joins node
/// `j` to node `j + 1 (mod n)`, so node and element counts coincide.
#[derive(Debug, Clone)]
pub struct BoundaryMesh {
    pub nodes: Vec<Point>,
    pub elements: Vec<[usize; 2]>,
    pub lengths: Vec<f64>,
    /// Outward unit normals (pointing from the obstacle into the exterior).
    pub normals: Vec<Point>,
    pub element_params: Vec<ElementParam>,
    pub points_per_wavelength: f64,
    pub wavenumber: f64,
    pub parent: Option<MeshId>,
    pub id: MeshId,
    pub curve: Arc<BoundaryCurve>,
}

impl BoundaryMesh {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_length(&self) -> f64 {
        self.lengths.iter().cloned().fold(0.0, f64::max)
    }

    pub fn min_length(&self) -> f64 {
        self.lengths.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn total_length(&self) -> f64 {
        self.lengths.iter().sum()
    }

    pub fn tangent(&self, e: usize) -> Point {
        let n = self.normals[e];
        [-n[1], n[0]]
    }

    /// Point on element `e` at local coordinate `s ∈ [0, 1]`.
    pub fn element_point(&self, e: usize, s: f64) -> Point {
        let [i, j] = self.elements[e];
        let (a, b) = (self.nodes[i], self.nodes[j]);
        [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]
    }

    /// Curve point of the same local coordinate (for evaluating exact data).
    pub fn curve_point(&self, e: usize, s: f64) -> Point {
        let p = self.element_params[e];
        self.curve.segments[p.segment].point(p.s0 + s * (p.s1 - p.s0))
    }

    /// Euclidean distance from `p` to the straight element `e`.
    pub fn distance_to_element(&self, e: usize, p: Point) -> f64 {
        let [i, j] = self.elements[e];
        let (a, b) = (self.nodes[i], self.nodes[j]);
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
        (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
    }

    /// Whether `p` lies inside the polygon (crossing-number test).
    pub fn contains(&self, p: Point) -> bool {
        let mut inside = false;
        for &[i, j] in &self.elements {
            let (a, b) = (self.nodes[i], self.nodes[j]);
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                if p[0] < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    fn from_params(
        curve: Arc<BoundaryCurve>,
        element_params: Vec<ElementParam>,
        ppw: f64,
        k: f64,
        parent: Option<MeshId>,
    ) -> Result<Self> {
        let n = element_params.len();
        if n < 3 {
            return Err(invalid(format!("mesh needs at least 3 elements, got {n}")));
        }
        let nodes: Vec<Point> = element_params
            .iter()
            .map(|p| curve.segments[p.segment].point(p.s0))
            .collect();
        let elements: Vec<[usize; 2]> = (0..n).map(|j| [j, (j + 1) % n]).collect();
        let mut lengths = Vec::with_capacity(n);
        let mut normals = Vec::with_capacity(n);
        for &[i, j] in &elements {
            let (a, b) = (nodes[i], nodes[j]);
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let h = dx.hypot(dy);
            if !(h > 0.0) {
                return Err(invalid(format!("element {i} has zero length")));
            }
            lengths.push(h);
            normals.push([dy / h, -dx / h]);
        }
        let mut hasher = DefaultHasher::new();
        for p in &nodes {
            p[0].to_bits().hash(&mut hasher);
            p[1].to_bits().hash(&mut hasher);
        }
        parent.map(|m| m.0).hash(&mut hasher);
        let id = MeshId(hasher.finish());
        Ok(BoundaryMesh {
            nodes,
            elements,
            lengths,
            normals,
            element_params,
            points_per_wavelength: ppw,
            wavenumber: k,
            parent,
            id,
            curve,
        })
    }
}

/// Arclength-uniform mesh with spacing at most `2π/(k·ppw)` on every
/// segment; segment endpoints are always nodes.
pub fn build_mesh(curve: &BoundaryCurve, k: f64, ppw: f64) -> Result<BoundaryMesh> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(invalid(format!("wavenumber {k} must be positive")));
    }
    if !(ppw >= 2.0 && ppw.is_finite()) {
        return Err(invalid(format!("points per wavelength {ppw} must be at least 2")));
    }
    build_mesh_with_spacing(curve, 2.0 * PI / (k * ppw), k, ppw)
}

/// As [`build_mesh`] with an explicit target spacing.
pub fn build_mesh_with_spacing(
    curve: &BoundaryCurve,
    h: f64,
    k: f64,
    ppw: f64,
) -> Result<BoundaryMesh> {
    curve.validate()?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(invalid(format!("mesh spacing {h} must be positive")));
    }
    let mut params = Vec::new();
    for (si, seg) in curve.segments.iter().enumerate() {
        let table = ArclengthTable::new(seg);
        let len = table.total();
        let count = ((len / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        if count > 50_000_000 {
            return Err(invalid("mesh would exceed 5e7 elements"));
        }
        let mut s_prev = 0.0;
        for i in 1..=count {
            let s_next = if i == count { 1.0 } else { table.invert(seg, len * i as f64 / count as f64) };
            params.push(ElementParam { segment: si, s0: s_prev, s1: s_next });
            s_prev = s_next;
        }
    }
    BoundaryMesh::from_params(Arc::new(curve.clone()), params, ppw, k, None)
}

/// Splits every element into `factor` sub-elements of equal curve parameter.
pub fn refine_mesh(mesh: &BoundaryMesh, factor: usize) -> Result<BoundaryMesh> {
    if factor < 2 {
        return Err(invalid(format!("refinement factor {factor} must be at least 2")));
    }
    let mut params = Vec::with_capacity(mesh.len() * factor);
    for p in &mesh.element_params {
        for i in 0..factor {
            let a = p.s0 + (p.s1 - p.s0) * (i as f64 / factor as f64);
            let b = if i + 1 == factor {
                p.s1
            } else {
                p.s0 + (p.s1 - p.s0) * ((i + 1) as f64 / factor as f64)
            };
            params.push(ElementParam { segment: p.segment, s0: a, s1: b });
        }
    }
    BoundaryMesh::from_params(
        mesh.curve.clone(),
        params,
        mesh.points_per_wavelength * factor as f64,
        mesh.wavenumber,
        Some(mesh.id),
    )
}

/// Values of a P1 function at the nodes of `mesh` refined by `factor`
/// (linear interpolation in the element coordinate).
pub fn prolong_p1<T>(coeffs: &[T], factor: usize) -> Vec<T>
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let n = coeffs.len();
    let mut out = Vec::with_capacity(n * factor);
    for j in 0..n {
        let (a, b) = (coeffs[j], coeffs[(j + 1) % n]);
        for i in 0..factor {
            let t = i as f64 / factor as f64;
            out.push(a * (1.0 - t) + b * t);
        }
    }
    out
}

/// Restriction to the parent nodes of a function given on a mesh refined by
/// `factor` (parent node `j` is child node `j·factor`).
pub fn restrict_to_parent<T: Copy>(coeffs: &[T], factor: usize) -> Vec<T> {
    coeffs.iter().step_by(factor).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::super::curve::*;
    use super::*;

    #[test]
    fn circle_node_count() {
        let m = build_mesh(&make_circle(1.0).unwrap(), 10.0, 10.0).unwrap();
        assert_eq!(m.len(), 100);
        let h = 2.0 * PI / 100.0;
        assert!(m.lengths.iter().all(|&l| l <= h * 1.1 && l > 0.0));
    }

    #[test]
    fn rejects_bad_parameters() {
        let c = make_circle(1.0).unwrap();
        assert!(build_mesh(&c, 0.0, 10.0).is_err());
        assert!(build_mesh(&c, 1.0, 1.5).is_err());
        assert!(refine_mesh(&build_mesh(&c, 5.0, 10.0).unwrap(), 1).is_err());
    }

    #[test]
    fn segment_endpoints_are_nodes() {
        let c = make_small_cavity();
        let m = build_mesh(&c, 30.0, 10.0).unwrap();
        for seg in &c.segments {
            let p = seg.start();
            assert!(m.nodes.iter().any(|q| (q[0] - p[0]).hypot(q[1] - p[1]) < 1e-14));
        }
    }

    #[test]
    fn inside_outside() {
        let m = build_mesh(&make_small_cavity(), 10.0, 10.0).unwrap();
        assert!(m.contains([0.0, 0.55]));
        assert!(!m.contains([0.0, 0.0]));
        assert!(!m.contains([2.0, 0.0]));
        assert!(m.distance_to_element(0, m.nodes[0]) == 0.0);
    }

    #[test]
    fn prolong_then_restrict_is_identity() {
        let v: Vec<f64> = (0..7).map(|i| (i as f64).sin()).collect();
        for f in [2, 3, 6] {
            assert_eq!(restrict_to_parent(&prolong_p1(&v, f), f), v);
        }
    }
}
