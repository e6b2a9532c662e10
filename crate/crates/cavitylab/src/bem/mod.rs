//! P1 Galerkin boundary elements for the exterior Helmholtz problem.
//!
//! Sign conventions: normals point out of the obstacle, `D` and `D'` are the
//! double-layer operator and its adjoint, and `H` is the normal derivative of
//! the double-layer potential, so that `S H = -1/4 + D²`. In weak form
//!
//! ```text
//! ⟨H u, v⟩ = -∫∫ G(x, y) [u'(y) v'(x) - κ² n(x)·n(y) u(y) v(x)]
//! ```
//!
//! with tangential derivatives and `κ² = k²` (or `-k²` for the modified
//! kernel).

mod assembly;
pub mod dump;
mod field;
mod kernel;
mod mass;

pub use assembly::QuadratureOptions;
pub use field::{evaluate_field, FieldValue};
pub use kernel::KernelFamily;
pub use mass::MassMatrix;

use crate::error::{invalid, Error, Result};
use crate::geometry::{BoundaryMesh, MeshId};
use crate::linalg::{transpose, CMat, C64};
use assembly::{assemble_blocks, Wanted};
use kernel::Kernel;
use std::f64::consts::PI;

/// Operator tag with its wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorKind {
    Mass,
    S(f64),
    D(f64),
    Dprime(f64),
    H(f64),
    SModified(f64),
    DModified(f64),
    HModified(f64),
    Aprime(f64),
    B(f64),
    Breg(f64),
}

impl OperatorKind {
    pub fn wavenumber(&self) -> Option<f64> {
        use OperatorKind::*;
        match *self {
            Mass => None,
            S(k) | D(k) | Dprime(k) | H(k) | SModified(k) | DModified(k) | HModified(k) | Aprime(k)
            | B(k) | Breg(k) => Some(k),
        }
    }

    /// Coupling parameter `η` of the combined operators.
    pub fn coupling(&self) -> Option<f64> {
        match *self {
            OperatorKind::Aprime(k) | OperatorKind::B(k) => Some(k),
            OperatorKind::Breg(_) => Some(0.5),
            _ => None,
        }
    }

    pub fn tag(&self) -> &'static str {
        use OperatorKind::*;
        match self {
            Mass => "mass",
            S(_) => "s",
            D(_) => "d",
            Dprime(_) => "dprime",
            H(_) => "h",
            SModified(_) => "s-ik",
            DModified(_) => "d-ik",
            HModified(_) => "h-ik",
            Aprime(_) => "aprime",
            B(_) => "b",
            Breg(_) => "breg",
        }
    }

    pub fn from_tag(tag: &str, k: f64) -> Option<Self> {
        use OperatorKind::*;
        Some(match tag {
            "mass" => Mass,
            "s" => S(k),
            "d" => D(k),
            "dprime" => Dprime(k),
            "h" => H(k),
            "s-ik" => SModified(k),
            "d-ik" => DModified(k),
            "h-ik" => HModified(k),
            "aprime" => Aprime(k),
            "b" => B(k),
            "breg" => Breg(k),
            _ => return None,
        })
    }
}

/// The three combined-field systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formulation {
    /// Sound-soft scattering, unknown `∂_n u`: `A'_k = 1/2 + D'_k - i k S_k`.
    DirichletAprime,
    /// Sound-hard scattering, unknown `u`: `B_k = i k (1/2 - D_k) + H_k`.
    NeumannB,
    /// Sound-hard, regularised: `(i/2)(1/2 - D_k) + S_{ik} H_k`.
    NeumannBreg,
}

impl Formulation {
    pub const ALL: [Formulation; 3] =
        [Formulation::DirichletAprime, Formulation::NeumannB, Formulation::NeumannBreg];

    pub fn name(&self) -> &'static str {
        match self {
            Formulation::DirichletAprime => "dirichlet-aprime",
            Formulation::NeumannB => "neumann-b",
            Formulation::NeumannBreg => "neumann-breg",
        }
    }

    pub fn kind(&self, k: f64) -> OperatorKind {
        match self {
            Formulation::DirichletAprime => OperatorKind::Aprime(k),
            Formulation::NeumannB => OperatorKind::B(k),
            Formulation::NeumannBreg => OperatorKind::Breg(k),
        }
    }
}

impl std::str::FromStr for Formulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Formulation::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| invalid(format!("unknown formulation `{s}`")))
    }
}

impl std::fmt::Display for Formulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Dense Galerkin matrix with its provenance.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub entries: CMat,
    pub kind: OperatorKind,
    pub mesh_id: MeshId,
    pub quadrature: QuadratureOptions,
}

impl OperatorMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("wavenumber {k} must be positive and finite")))
    }
}

pub fn assemble(mesh: &BoundaryMesh, kind: OperatorKind) -> Result<OperatorMatrix> {
    assemble_with(mesh, kind, &QuadratureOptions::default())
}

pub fn assemble_with(mesh: &BoundaryMesh, kind: OperatorKind, opts: &QuadratureOptions) -> Result<OperatorMatrix> {
    use OperatorKind::*;
    if let Some(k) = kind.wavenumber() {
        check_k(k)?;
    }
    let entries = match kind {
        Mass => MassMatrix::new(mesh).to_dense(),
        Aprime(k) => return assemble_system_with(mesh, Formulation::DirichletAprime, k, opts),
        B(k) => return assemble_system_with(mesh, Formulation::NeumannB, k, opts),
        Breg(k) => return assemble_system_with(mesh, Formulation::NeumannBreg, k, opts),
        S(k) | D(k) | Dprime(k) | H(k) | SModified(k) | DModified(k) | HModified(k) => {
            let fam = match kind {
                S(_) | D(_) | Dprime(_) | H(_) => KernelFamily::Helmholtz,
                _ => KernelFamily::Modified,
            };
            let wanted = match kind {
                S(_) | SModified(_) => Wanted { s: true, ..Wanted::default() },
                H(_) | HModified(_) => Wanted { h: true, ..Wanted::default() },
                _ => Wanted { dprime: true, ..Wanted::default() },
            };
            let b = assemble_blocks(mesh, Kernel::new(fam, k), wanted, opts);
            match kind {
                S(_) | SModified(_) => b.s.expect("requested"),
                H(_) | HModified(_) => b.h.expect("requested"),
                Dprime(_) => b.dprime.expect("requested"),
                _ => transpose(&b.dprime.expect("requested")),
            }
        }
    };
    Ok(OperatorMatrix { entries, kind, mesh_id: mesh.id, quadrature: *opts })
}

pub fn assemble_system(mesh: &BoundaryMesh, formulation: Formulation, k: f64) -> Result<OperatorMatrix> {
    assemble_system_with(mesh, formulation, k, &QuadratureOptions::default())
}

pub fn assemble_system_with(
    mesh: &BoundaryMesh,
    formulation: Formulation,
    k: f64,
    opts: &QuadratureOptions,
) -> Result<OperatorMatrix> {
    check_k(k)?;
    let n = mesh.len();
    let mass = MassMatrix::new(mesh);
    let helm = Kernel::new(KernelFamily::Helmholtz, k);
    let i = C64::new(0.0, 1.0);
    let entries = match formulation {
        Formulation::DirichletAprime => {
            let b = assemble_blocks(mesh, helm, Wanted { s: true, dprime: true, h: false }, opts);
            let (s, dp) = (b.s.expect("requested"), b.dprime.expect("requested"));
            let c = -i * k;
            let mut a = CMat::from_fn(n, n, |r, col| dp[(r, col)] + c * s[(r, col)]);
            add_mass(&mut a, &mass, C64::new(0.5, 0.0));
            a
        }
        Formulation::NeumannB => {
            let b = assemble_blocks(mesh, helm, Wanted { s: false, dprime: true, h: true }, opts);
            let (dp, h) = (b.dprime.expect("requested"), b.h.expect("requested"));
            let c = i * k;
            // D = D'ᵀ
            let mut a = CMat::from_fn(n, n, |r, col| h[(r, col)] - c * dp[(col, r)]);
            add_mass(&mut a, &mass, c * 0.5);
            a
        }
        Formulation::NeumannBreg => {
            let b = assemble_blocks(mesh, helm, Wanted { s: false, dprime: true, h: true }, opts);
            let (dp, h) = (b.dprime.expect("requested"), b.h.expect("requested"));
            let sik = assemble_blocks(mesh, Kernel::new(KernelFamily::Modified, k), Wanted { s: true, ..Wanted::default() }, opts)
                .s
                .expect("requested");
            let minv_h = mass.solve_matrix(&h);
            drop(h);
            let prod = &sik * &minv_h;
            drop(minv_h);
            let c = i * 0.5;
            let mut a = CMat::from_fn(n, n, |r, col| prod[(r, col)] - c * dp[(col, r)]);
            add_mass(&mut a, &mass, c * 0.5);
            a
        }
    };
    Ok(OperatorMatrix { entries, kind: formulation.kind(k), mesh_id: mesh.id, quadrature: *opts })
}

fn add_mass(a: &mut CMat, mass: &MassMatrix, c: C64) {
    let n = mass.len();
    for r in 0..n {
        a[(r, r)] += c * mass.diag[r];
        let q = (r + 1) % n;
        a[(r, q)] += c * mass.off[r];
        a[(q, r)] += c * mass.off[r];
    }
}

/// Incident wave `exp(i k x·â)`, `â = (cos θ, sin θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub k: f64,
    /// Direction angle reduced to `[0, 2π)`.
    pub theta: f64,
    pub direction: [f64; 2],
}

/// Angles are rounded to a multiple of 2⁻³⁶ rad after reduction, so that
/// `θ` and `θ + 2π` give identical data.
const ANGLE_QUANTUM: f64 = 1.0 / (1u64 << 36) as f64;

impl PlaneWave {
    pub fn new(k: f64, theta: f64) -> Result<Self> {
        check_k(k)?;
        if !theta.is_finite() {
            return Err(invalid("plane-wave angle must be finite"));
        }
        let mut t = (theta.rem_euclid(2.0 * PI) / ANGLE_QUANTUM).round() * ANGLE_QUANTUM;
        if t >= 2.0 * PI {
            t = 0.0;
        }
        let (s, c) = t.sin_cos();
        Ok(PlaneWave { k, theta: t, direction: [c, s] })
    }

    pub fn value(&self, x: [f64; 2]) -> C64 {
        let ph = self.k * (x[0] * self.direction[0] + x[1] * self.direction[1]);
        let (s, c) = ph.sin_cos();
        C64::new(c, s)
    }

    /// `(u^I, ∂_n u^I)` at `x` for unit normal `n`.
    pub fn value_and_normal_derivative(&self, x: [f64; 2], n: [f64; 2]) -> (C64, C64) {
        let u = self.value(x);
        let dn = self.k * (n[0] * self.direction[0] + n[1] * self.direction[1]);
        (u, u * C64::new(0.0, dn))
    }
}

const RHS_ORDER: usize = 8;

/// Load vectors `((u^I, φ_i), (∂_n u^I, φ_i))` on the flat elements.
pub fn plane_wave_loads(mesh: &BoundaryMesh, wave: &PlaneWave) -> (Vec<C64>, Vec<C64>) {
    let rule = crate::quadrature::gauss_legendre(RHS_ORDER);
    let n = mesh.len();
    let mut lu = vec![C64::new(0.0, 0.0); n];
    let mut ldn = vec![C64::new(0.0, 0.0); n];
    for e in 0..n {
        let [i, j] = mesh.elements[e];
        let h = mesh.lengths[e];
        for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
            let (u, dn) = wave.value_and_normal_derivative(mesh.element_point(e, s), mesh.normals[e]);
            let (wi, wj) = (w * h * (1.0 - s), w * h * s);
            lu[i] += u * wi;
            lu[j] += u * wj;
            ldn[i] += dn * wi;
            ldn[j] += dn * wj;
        }
    }
    (lu, ldn)
}

/// Galerkin right-hand side of `formulation` for an incident plane wave.
pub fn plane_wave_rhs(mesh: &BoundaryMesh, formulation: Formulation, wave: &PlaneWave) -> Result<Vec<C64>> {
    plane_wave_rhs_with(mesh, formulation, wave, &QuadratureOptions::default())
}

pub fn plane_wave_rhs_with(
    mesh: &BoundaryMesh,
    formulation: Formulation,
    wave: &PlaneWave,
    opts: &QuadratureOptions,
) -> Result<Vec<C64>> {
    let k = wave.k;
    let i = C64::new(0.0, 1.0);
    let (lu, ldn) = plane_wave_loads(mesh, wave);
    Ok(match formulation {
        Formulation::DirichletAprime => ldn.iter().zip(&lu).map(|(&d, &u)| d - i * k * u).collect(),
        Formulation::NeumannB => ldn.iter().zip(&lu).map(|(&d, &u)| i * k * u - d).collect(),
        Formulation::NeumannBreg => {
            let sik = assemble_blocks(mesh, Kernel::new(KernelFamily::Modified, k), Wanted { s: true, ..Wanted::default() }, opts)
                .s
                .expect("requested");
            let t = crate::linalg::matvec(&sik, &MassMatrix::new(mesh).solve(&ldn));
            lu.iter().zip(&t).map(|(&u, &t)| i * 0.5 * u - t).collect()
        }
    })
}
