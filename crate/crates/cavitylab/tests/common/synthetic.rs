//! Random diagonalisable matrices with a cluster in `{Re z ≥ S}` and a few
//! outliers near the origin.

use cavitylab::bound::{compute_bound, ClusterBoundInput, ClusterBoundResult, OutlierRegion};
use cavitylab::gmres::{gmres_solve, GmresTrace, Preconditioner, SolveConfig};
use cavitylab::linalg::{CMat, C64};
use cavitylab::spectral::full_spectrum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const S: f64 = 1.0;
pub const L0: f64 = 0.4;
pub const L1: f64 = 0.8;
pub const OUTLIER_RADIUS: f64 = 0.9;

pub struct Synthetic {
    pub b: CMat,
    pub v: CMat,
    pub eigs: Vec<C64>,
    pub rhs: Vec<C64>,
    pub outliers: usize,
}

pub fn random_vec(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// `B = V D V⁻¹` with `V = I + E`, `‖E‖` moderate, cluster in the disc of
/// radius 0.6 about 1.8 and `outliers` eigenvalues with `0.05 ≤ |z| < 0.9`,
/// `Re z < S`.
pub fn cluster_matrix(seed: u64, n: usize, outliers: usize) -> Synthetic {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut eigs = Vec::with_capacity(n);
    for _ in 0..outliers {
        let r = rng.gen_range(0.05..0.85);
        let t = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        eigs.push(C64::from_polar(r, t));
    }
    while eigs.len() < n {
        let r = 0.6 * rng.gen_range(0.0f64..1.0).sqrt();
        let t = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        eigs.push(C64::new(1.8, 0.0) + C64::from_polar(r, t));
    }
    let scale = 0.3 / (n as f64).sqrt();
    let v = CMat::from_fn(n, n, |i, j| {
        let d = if i == j { 1.0 } else { 0.0 };
        C64::new(d + scale * rng.gen_range(-1.0..1.0), scale * rng.gen_range(-1.0..1.0))
    });
    let d = CMat::from_fn(n, n, |i, j| if i == j { eigs[i] } else { C64::new(0.0, 0.0) });
    let vinv = {
        use faer::linalg::solvers::Solve;
        v.partial_piv_lu().solve(&cavitylab::linalg::identity(n))
    };
    let b = &v * &d * &vinv;
    let rhs = random_vec(n, &mut rng);
    Synthetic { b, v, eigs, rhs, outliers }
}

/// Bound for a synthetic matrix from its measured spectrum.
pub fn bound_for(s: &Synthetic, epsilon: f64) -> ClusterBoundResult {
    let sum = full_spectrum(&s.b).expect("spectrum");
    let input = ClusterBoundInput {
        eigenvalues: sum.eigenvalues.clone(),
        norm2: sum.norm2,
        kappa_star: sum.kappa_max().expect("condition numbers"),
        n: s.b.nrows(),
        s_threshold: S,
        l0: L0,
        l1: L1,
        region: OutlierRegion::LeftOfThreshold { radius: OUTLIER_RADIUS },
        epsilon,
    };
    compute_bound(&input).expect("bound")
}

pub fn run_gmres(b: &CMat, rhs: &[C64], tol: f64, max_iterations: usize) -> GmresTrace {
    let cfg = SolveConfig {
        tolerance: tol,
        max_iterations: Some(max_iterations),
        preconditioner: Preconditioner::None,
        reorthogonalize: true,
    };
    gmres_solve(b, rhs, None, &cfg).expect("gmres").1
}

/// Indices `m` in `[ℓ, m_max]` where the relative residual exceeds the bound.
pub fn dominance_violations(s: &Synthetic, m_max: usize) -> Vec<(usize, f64, f64)> {
    let res = bound_for(s, 1e-6);
    let n = s.b.nrows();
    let m_max = m_max.min(n);
    let tr = run_gmres(&s.b, &s.rhs, 1e-15, m_max);
    let rel = tr.relative();
    let mut bad = Vec::new();
    for m in res.ell..=m_max {
        // after convergence or breakdown the residual stays at its last value
        let r = rel.get(m).copied().unwrap_or(*rel.last().expect("trace"));
        let bound = res.residual_bound(m);
        if r > bound {
            bad.push((m, r, bound));
        }
    }
    bad
}
