use cavitylab::bem::{assemble_system, Formulation, MassMatrix};
use cavitylab::geometry::{build_mesh, make_small_cavity};
use cavitylab::linalg::{CMat, C64};
use cavitylab::spectral::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn diag(vals: &[C64]) -> CMat {
    CMat::from_fn(vals.len(), vals.len(), |i, j| if i == j { vals[i] } else { C64::new(0.0, 0.0) })
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn check_ordering(s: &SpectralSummary) {
    let slack = 1e-10 * s.norm2;
    assert!(s.min_sv <= s.min_abs_eig + slack, "{} > {}", s.min_sv, s.min_abs_eig);
    assert!(s.min_abs_eig <= s.max_abs_eig());
    assert!(s.max_abs_eig() <= s.norm2 + slack);
    assert!(s.kappas.iter().all(|&k| k >= 1.0 - 1e-10));
}

#[test]
fn diagonal_spectrum() {
    let s = full_spectrum(&diag(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)])).unwrap();
    let mut re: Vec<f64> = s.eigenvalues.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    for (a, b) in re.iter().zip([1.0, 2.0, 3.0]) {
        assert!((a - b).abs() < 1e-14);
    }
    for (a, b) in s.singular_values.iter().zip([3.0, 2.0, 1.0]) {
        assert!((a - b).abs() < 1e-14);
    }
    assert_eq!(s.norm2, s.singular_values[0]);
}

#[test]
fn hermitian_condition_numbers_are_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 40;
    let a = CMat::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let h = &a + a.adjoint();
    let s = full_spectrum(&h).unwrap();
    for k in &s.kappas {
        assert!((k - 1.0).abs() < 1e-8, "κ = {k}");
    }
    check_ordering(&s);
}

#[test]
fn jordan_like_condition_number_matches_closed_form() {
    let (a, b, d) = (1.0, 1e3, 1.001);
    let m = CMat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => c(a, 0.0),
        (0, 1) => c(b, 0.0),
        (1, 1) => c(d, 0.0),
        _ => c(0.0, 0.0),
    });
    // both eigenvalues of an upper-triangular 2×2 share κ = √(1 + (b/(d-a))²)
    let exact = (1.0 + (b / (d - a)).powi(2)).sqrt();
    let s = full_spectrum(&m).unwrap();
    for k in &s.kappas {
        assert!((k / exact - 1.0).abs() < 1e-6, "{k} vs {exact}");
    }
}

#[test]
fn determinant_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [5, 60, 150] {
        let a = CMat::from_fn(n, n, |i, j| c(rng.gen_range(-1.0..1.0) + if i == j { 2.0 } else { 0.0 }, rng.gen_range(-1.0..1.0)));
        let s = full_spectrum(&a).unwrap();
        let ls: f64 = s.singular_values.iter().map(|v| v.ln()).sum();
        let le: f64 = s.eigenvalues.iter().map(|z| z.norm().ln()).sum();
        assert!((ls - le).abs() < 1e-6, "n = {n}: {ls} vs {le}");
        check_ordering(&s);
    }
}

#[test]
fn rectangle_counts_and_boundaries() {
    let r = Rectangle::default();
    assert_eq!(count_in_rectangle(&[], &r).0, 0);
    let eigs = [c(0.1, 0.6), c(-0.1, -0.6), c(0.1000001, 0.0), c(0.0, 0.3)];
    let (n, members) = count_in_rectangle(&eigs, &r);
    assert_eq!(n, 3);
    assert_eq!(members, vec![0, 1, 3]);
    assert!(Rectangle::new((1.0, 0.0), (0.0, 1.0)).is_err());
    let sw = r.swapped();
    assert_eq!((sw.re, sw.im), (r.im, r.re));
}

#[test]
fn l_quantity_values() {
    let r = Rectangle::new((-2.0, 2.0), (-2.0, 2.0)).unwrap();
    let unit: Vec<C64> = (0..6).map(|j| C64::from_polar(1.0, j as f64)).collect();
    assert!(l_quantity(&unit, &r).unwrap().abs() < 1e-15);
    assert!((l_quantity(&[c(0.1, 0.0)], &r).unwrap() - 2.302585092994046).abs() < 1e-12);
    assert!(l_quantity(&[c(0.0, 0.0)], &r).is_err());
}

#[test]
fn summary_recomputes_l_quantity() {
    let vals = [c(0.05, 0.1), c(-0.02, 0.5), c(0.5, 0.0), c(1.0, 0.2)];
    let s = full_spectrum(&diag(&vals)).unwrap();
    assert_eq!(s.ell, 2);
    let direct: f64 = s.members.iter().map(|&j| -s.eigenvalues[j].norm().ln()).sum();
    assert!((s.l_quantity - direct).abs() < 1e-12);
}

#[test]
fn assembled_system_ordering() {
    let mesh = build_mesh(&make_small_cavity(), 12.0, 10.0).unwrap();
    let m = MassMatrix::new(&mesh);
    for f in [Formulation::DirichletAprime, Formulation::NeumannB, Formulation::NeumannBreg] {
        let a = assemble_system(&mesh, f, 12.0).unwrap();
        let b = m.solve_matrix(&a.entries);
        let s = full_spectrum(&b).unwrap();
        check_ordering(&s);
    }
}

#[test]
fn rotation_by_two_over_i() {
    let r = rotate_two_over_i(&[c(0.0, 0.5), c(1.0, 0.0)]);
    assert!((r[0] - c(1.0, 0.0)).norm() < 1e-15);
    assert!((r[1] - c(0.0, -2.0)).norm() < 1e-15);
}

#[test]
fn constant_spectra_have_zero_speed() {
    let s = vec![c(0.1, 0.2), c(0.5, -0.1), c(1.0, 0.0)];
    let ks = [5.0, 5.025, 5.05];
    let p = track_eigenpaths(&ks, &[s.clone(), s.clone(), s]).unwrap();
    assert_eq!(p.paths.len(), 3);
    assert!(p.paths.iter().all(|path| path.speeds.iter().all(|&v| v == 0.0)));
    assert!(!p.coarse_grid);
}

#[test]
fn translated_spectra_move_at_uniform_speed() {
    let base = vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(2.0, 2.0)];
    let shift = c(0.01, -0.005);
    let step = 0.025;
    let ks: Vec<f64> = (0..6).map(|i| 5.0 + step * i as f64).collect();
    let spectra: Vec<Vec<C64>> = (0..6).map(|i| base.iter().map(|z| z + shift * i as f64).collect()).collect();
    let p = track_eigenpaths(&ks, &spectra).unwrap();
    for path in &p.paths {
        for v in &path.speeds {
            assert!((v - shift.norm() / step).abs() < 1e-9);
        }
    }
}

#[test]
fn non_uniform_grid_rejected() {
    let s = vec![c(0.0, 0.0)];
    assert!(track_eigenpaths(&[1.0, 1.1, 1.3], &[s.clone(), s.clone(), s]).is_err());
}

#[test]
fn coarse_grid_flagged() {
    // eigenvalues 1e-3 apart jumping by 1 per step
    let spectra: Vec<Vec<C64>> =
        (0..4).map(|i| (0..3).map(|j| c(i as f64 + 1e-3 * j as f64, 0.0)).collect()).collect();
    let p = track_eigenpaths(&[0.0, 1.0, 2.0, 3.0], &spectra).unwrap();
    assert!(p.coarse_grid);
}

#[test]
fn hungarian_finds_optimum() {
    let cost = vec![vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]];
    let a = hungarian(&cost);
    let total: f64 = a.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
    // brute force over the six permutations
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let best = perms.iter().map(|p| (0..3).map(|i| cost[i][p[i]]).sum::<f64>()).fold(f64::INFINITY, f64::min);
    assert_eq!(total, best);
}

#[test]
fn power_law_fits() {
    let ks: Vec<f64> = (1..=12).map(|i| 10.0 * i as f64).collect();
    let sq: Vec<f64> = ks.iter().map(|k| k * k).collect();
    let f = fit_exponent(&ks, &sq).unwrap();
    assert!((f.exponent - 2.0).abs() < 1e-6);
    assert!((f.prefactor - 1.0).abs() < 1e-5);
    let flat = vec![3.5; ks.len()];
    let f = fit_exponent(&ks, &flat).unwrap();
    assert!(f.exponent.abs() < 1e-6);
    assert!(fit_exponent(&ks[..2], &sq[..2]).is_err());
    let mut bad = sq.clone();
    bad[3] = 0.0;
    assert!(fit_exponent(&ks, &bad).is_err());
}

#[test]
fn fit_is_least_squares_not_log_linear() {
    // additive noise on a large value dominates the LM objective
    let ks = [1.0, 2.0, 3.0, 4.0, 5.0];
    let v = [1.0, 4.0, 9.0, 16.0, 30.0];
    let f = fit_exponent(&ks, &v).unwrap();
    let sse = |c: f64, a: f64| ks.iter().zip(&v).map(|(k, y)| (c * f64::powf(*k, a) - y).powi(2)).sum::<f64>();
    let best = sse(f.prefactor, f.exponent);
    for (dc, da) in [(1e-3, 0.0), (-1e-3, 0.0), (0.0, 1e-3), (0.0, -1e-3)] {
        assert!(sse(f.prefactor + dc, f.exponent + da) >= best);
    }
}

#[test]
fn spectrum_csv_rows() {
    let s = full_spectrum(&diag(&[c(0.5, 0.0), c(0.0, 0.25)])).unwrap();
    let mut wr = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    wr.write_record(SPECTRUM_COLUMNS).unwrap();
    write_spectrum_rows(&mut wr, 3.0, &s, true).unwrap();
    wr.write_record(SUMMARY_COLUMNS).unwrap();
    wr.write_record(summary_record(3.0, &s)).unwrap();
    let text = String::from_utf8(wr.into_inner().unwrap()).unwrap();
    let mut rd = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 5);
    let rotated: Vec<f64> = rows[1..3].iter().map(|r| r[2].parse::<f64>().unwrap()).collect();
    // 2/i · 0.25i = 0.5 on the real axis
    assert!(rotated.iter().any(|v| (v - 0.5).abs() < 1e-15));
    assert_eq!(&rows[4][1], "2");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn path_matching_ignores_input_order(seed in any::<u64>(), n in 2usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base: Vec<C64> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let drift: Vec<C64> = (0..n).map(|_| c(rng.gen_range(-1e-3..1e-3), rng.gen_range(-1e-3..1e-3))).collect();
        let ks: Vec<f64> = (0..5).map(|i| 1.0 + 0.025 * i as f64).collect();
        let spectra: Vec<Vec<C64>> = (0..5).map(|i| base.iter().zip(&drift).map(|(b, d)| b + d * i as f64).collect()).collect();
        let mut shuffled = spectra.clone();
        for s in shuffled.iter_mut() {
            s.shuffle(&mut rng);
        }
        let a = track_eigenpaths(&ks, &spectra).unwrap();
        let b = track_eigenpaths(&ks, &shuffled).unwrap();
        prop_assert_eq!(a.paths, b.paths);
    }

    #[test]
    fn summary_ordering_random(seed in any::<u64>(), n in 1usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = CMat::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let s = full_spectrum(&a).unwrap();
        check_ordering(&s);
    }
}
