//! Random diagonalisable test matrices for the bound comparison: a cluster
//! in the disc of radius 0.6 about 1.8 and a few outliers of modulus below
//! 0.85, conjugated by a perturbed identity.

use cavitylab::linalg::{identity, CMat, C64};
use faer::linalg::solvers::Solve;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const THRESHOLD: f64 = 1.0;
pub const L0: f64 = 0.4;
pub const L1: f64 = 0.8;
pub const OUTLIER_RADIUS: f64 = 0.9;

pub struct SyntheticSystem {
    pub matrix: CMat,
    pub rhs: Vec<C64>,
    pub outliers: usize,
}

pub fn synthetic_system(seed: u64, n: usize) -> SyntheticSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outliers = rng.gen_range(0..=3usize).min(n / 2);
    let mut eigs = Vec::with_capacity(n);
    for _ in 0..outliers {
        eigs.push(C64::from_polar(rng.gen_range(0.05..0.85), rng.gen_range(0.0..std::f64::consts::TAU)));
    }
    while eigs.len() < n {
        let r = 0.6 * rng.gen_range(0.0f64..1.0).sqrt();
        eigs.push(C64::new(1.8, 0.0) + C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU)));
    }
    let scale = 0.3 / (n as f64).sqrt();
    let v = CMat::from_fn(n, n, |i, j| {
        let d = if i == j { 1.0 } else { 0.0 };
        C64::new(d + scale * rng.gen_range(-1.0..1.0), scale * rng.gen_range(-1.0..1.0))
    });
    let vinv = v.partial_piv_lu().solve(&identity(n));
    let d = CMat::from_fn(n, n, |i, j| if i == j { eigs[i] } else { C64::new(0.0, 0.0) });
    let matrix = &v * &d * &vinv;
    let rhs = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    SyntheticSystem { matrix, rhs, outliers }
}
