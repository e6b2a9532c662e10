use cavitylab::bem::MassMatrix;
use cavitylab::geometry::{build_mesh, make_ellipse};
use cavitylab::gmres::*;
use cavitylab::linalg::{identity, matvec, vec_norm, CMat, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn plain(tol: f64) -> SolveConfig {
    SolveConfig { tolerance: tol, preconditioner: Preconditioner::None, ..Default::default() }
}

fn random_matrix(n: usize, shift: f64, rng: &mut ChaCha8Rng) -> CMat {
    CMat::from_fn(n, n, |i, j| {
        let d = if i == j { shift } else { 0.0 };
        C64::new(d + rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn random_vec(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn rel_diff(x: &[C64], y: &[C64]) -> f64 {
    let d: Vec<C64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    vec_norm(&d) / vec_norm(y)
}

// Gram–Schmidt on a random matrix, twice
fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMat {
    let a = random_matrix(n, 0.0, rng);
    let mut cols: Vec<Vec<C64>> = Vec::new();
    for j in 0..n {
        let mut v: Vec<C64> = (0..n).map(|i| a[(i, j)]).collect();
        for _ in 0..2 {
            for q in &cols {
                let h: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= h * qi;
                }
            }
        }
        let nv = vec_norm(&v);
        cols.push(v.iter().map(|x| x / nv).collect());
    }
    CMat::from_fn(n, n, |i, j| cols[j][i])
}

#[test]
fn distinct_eigenvalue_count_bounds_iterations() {
    let vals = [1.0, 2.0, -3.0, 0.5];
    let n = 20;
    let a = CMat::from_fn(n, n, |i, j| if i == j { C64::new(vals[i % 4], 0.0) } else { C64::new(0.0, 0.0) });
    let b: Vec<C64> = (0..n).map(|i| C64::new(1.0 + i as f64, -0.5)).collect();
    let (x, tr) = gmres_solve(&a, &b, None, &plain(1e-13)).unwrap();
    assert!(tr.converged);
    assert!(tr.iterations <= 4, "{} iterations", tr.iterations);
    assert!(true_residual(&a, &b, &x, None) < 1e-12 * vec_norm(&b));
}

#[test]
fn recurred_residual_matches_true_residual() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 60;
    let a = random_matrix(n, 6.0, &mut rng);
    let b = random_vec(n, &mut rng);
    for tol in [1e-3, 1e-6, 1e-10] {
        let (x, tr) = gmres_solve(&a, &b, None, &plain(tol)).unwrap();
        let r = true_residual(&a, &b, &x, None);
        let last = *tr.residuals.last().unwrap();
        assert!((r - last).abs() <= 1e-8 * r.max(1e-300) + 1e-14 * tr.residuals[0], "tol {tol}: {r} vs {last}");
    }
}

#[test]
fn full_krylov_space_solves_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 30;
    let a = random_matrix(n, 0.0, &mut rng);
    let b = random_vec(n, &mut rng);
    let cfg = SolveConfig { tolerance: 1e-15, preconditioner: Preconditioner::None, max_iterations: Some(n), reorthogonalize: false };
    let (_, tr) = gmres_solve(&a, &b, None, &cfg).unwrap();
    assert_eq!(tr.iterations, n);
    assert!(tr.residuals[n] <= 1e-10 * tr.residuals[0], "{:e}", tr.final_relative());
}

#[test]
fn normal_trace_invariant_under_unitary_similarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 25;
    let d: Vec<C64> = (0..n).map(|_| C64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0))).collect();
    let a = CMat::from_fn(n, n, |i, j| if i == j { d[i] } else { C64::new(0.0, 0.0) });
    let b = random_vec(n, &mut rng);
    let q = random_unitary(n, &mut rng);
    let qa = &q * &a * q.adjoint();
    let qb = matvec(&q, &b);
    let (_, t1) = gmres_solve(&a, &b, None, &plain(1e-9)).unwrap();
    let (_, t2) = gmres_solve(&qa, &qb, None, &plain(1e-9)).unwrap();
    assert_eq!(t1.iterations, t2.iterations);
    for (r1, r2) in t1.relative().iter().zip(t2.relative()) {
        assert!((r1 - r2).abs() < 1e-10, "{r1} vs {r2}");
    }
}

#[test]
fn direct_solve_identity_and_random() {
    let b: Vec<C64> = (0..4).map(|i| C64::new(i as f64, 2.0)).collect();
    assert_eq!(direct_solve(&identity(4), &b).unwrap(), b);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 50;
    let a = random_matrix(n, 10.0, &mut rng);
    let b = random_vec(n, &mut rng);
    let x = direct_solve(&a, &b).unwrap();
    assert!(true_residual(&a, &b, &x, None) <= 1e-12 * vec_norm(&b));
}

#[test]
fn gmres_agrees_with_lu_at_tight_tolerance() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n = 100;
    let a = random_matrix(n, 12.0, &mut rng);
    let b = random_vec(n, &mut rng);
    let (x, tr) = gmres_solve(&a, &b, None, &plain(1e-12)).unwrap();
    assert!(tr.converged);
    let y = direct_solve(&a, &b).unwrap();
    assert!(rel_diff(&x, &y) <= 1e-8, "{:e}", rel_diff(&x, &y));
}

#[test]
fn iteration_cap_reports_non_convergence() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let n = 40;
    let a = random_matrix(n, 0.0, &mut rng);
    let b = random_vec(n, &mut rng);
    let cfg = SolveConfig { max_iterations: Some(5), ..plain(1e-12) };
    let (_, tr) = gmres_solve(&a, &b, None, &cfg).unwrap();
    assert!(!tr.converged);
    assert_eq!(tr.iterations, 5);
    assert_eq!(tr.residuals.len(), 6);
}

#[test]
fn config_validation() {
    for tol in [0.0, -1.0, 1.5, f64::NAN] {
        assert!(plain(tol).validate().is_err(), "{tol}");
    }
    assert!(SolveConfig { max_iterations: Some(0), ..plain(1e-6) }.validate().is_err());
    let a = identity(3);
    assert!(gmres_solve(&a, &[C64::new(1.0, 0.0); 2], None, &plain(1e-6)).is_err());
    // mass preconditioning without a mass matrix
    assert!(gmres_solve(&a, &[C64::new(1.0, 0.0); 3], None, &SolveConfig::default()).is_err());
}

#[test]
fn mass_preconditioned_solve_matches_lu_of_preconditioned_system() {
    let mesh = build_mesh(&make_ellipse(1.0, 0.5).unwrap(), 8.0, 10.0).unwrap();
    let m = MassMatrix::new(&mesh);
    let n = mesh.len();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let a = CMat::from_fn(n, n, |i, j| {
        let d = if i == j { 2.0 } else { 0.0 };
        C64::new(d + 0.01 * rng.gen_range(-1.0..1.0), 0.01 * rng.gen_range(-1.0..1.0))
    });
    let b = random_vec(n, &mut rng);
    let cfg = SolveConfig { tolerance: 1e-12, ..Default::default() };
    let (x, tr) = gmres_solve(&a, &b, Some(&m), &cfg).unwrap();
    assert!(tr.converged);
    let y = direct_solve(&a, &b).unwrap();
    assert!(rel_diff(&x, &y) < 1e-8);
    let r = true_residual(&a, &b, &x, Some(&m));
    assert!(r <= 1e-11 * tr.residuals[0]);
}

#[test]
fn trace_csv_columns() {
    let a = CMat::from_fn(3, 3, |i, j| C64::new(if i == j { 1.0 + i as f64 } else { 0.1 }, 0.0));
    let (_, tr) = gmres_solve(&a, &[C64::new(1.0, 0.0); 3], None, &plain(1e-12)).unwrap();
    let mut buf = Vec::new();
    tr.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("iteration,residual_norm,relative_residual"));
    assert_eq!(lines.count(), tr.residuals.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn residuals_never_increase(seed in any::<u64>(), n in 2usize..40, shift in 0.0f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(n, shift, &mut rng);
        let b = random_vec(n, &mut rng);
        let (_, tr) = gmres_solve(&a, &b, None, &plain(1e-10)).unwrap();
        for w in tr.residuals.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
        let ratio = tr.final_relative();
        if !tr.breakdown {
            prop_assert_eq!(tr.converged, ratio <= 1e-10);
        }
    }
}
