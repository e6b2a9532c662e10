use cavitylab::bem::{assemble, OperatorKind};
use cavitylab::geometry::{build_mesh, make_ellipse};
use cavitylab::linalg::min_singular_value;
use cavitylab::quasimodes::*;
use proptest::prelude::*;
use std::f64::consts::PI;

use BoundaryCondition::{Dirichlet, Neumann};
use Parity::{Even, Odd};

fn ellipse() -> EllipseSpec {
    EllipseSpec::new(1.0, 0.5).unwrap()
}

/// `a_1(q)` from the continued fraction
/// `a - 1 - q = q²/(a - 9 - q²/(a - 25 - ...))`, bisected on `[1, 5]`.
fn a1_continued_fraction(q: f64) -> f64 {
    let f = |a: f64| {
        let mut tail = 0.0;
        for r in (1..60).rev() {
            let odd = (2 * r + 1) as f64;
            tail = q * q / (a - odd * odd - tail);
        }
        a - 1.0 - q - tail
    };
    let (mut lo, mut hi) = (1.0, 5.0);
    assert!(f(lo) < 0.0 && f(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign changes of `y'' = c(t) y` on `(t0, t1)` by RK4 with `steps` steps.
fn count_sign_changes(c: impl Fn(f64) -> f64, y0: [f64; 2], t1: f64, steps: usize) -> usize {
    let h = t1 / steps as f64;
    let f = |t: f64, y: [f64; 2]| [y[1], c(t) * y[0]];
    let mut y = y0;
    let mut changes = 0;
    let mut last_sign = 0.0;
    for i in 0..steps {
        let t = i as f64 * h;
        let k1 = f(t, y);
        let k2 = f(t + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = f(t + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = f(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for j in 0..2 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let s = y[0].signum();
        if y[0] != 0.0 {
            if last_sign != 0.0 && s != last_sign {
                changes += 1;
            }
            last_sign = s;
        }
    }
    changes
}

#[test]
fn small_q_limit() {
    for n in 0..6 {
        assert!((angular_characteristic(n, Even, 1e-9).unwrap() - (n * n) as f64).abs() < 1e-6);
        if n > 0 {
            assert!((angular_characteristic(n, Odd, 1e-9).unwrap() - (n * n) as f64).abs() < 1e-6);
        }
    }
    assert!(angular_characteristic(0, Odd, 1.0).is_err());
    assert!(angular_characteristic(2, Even, -1.0).is_err());
}

#[test]
fn a1_matches_continued_fraction() {
    for q in [0.5, 1.0, 5.0] {
        let oracle = a1_continued_fraction(q);
        let v = angular_characteristic(1, Even, q).unwrap();
        assert!((v - oracle).abs() < 1e-11, "q = {q}: {v} vs {oracle}");
    }
    assert!((a1_continued_fraction(1.0) - 1.859_108_072_4).abs() < 1e-9);
}

#[test]
fn interlacing_at_unit_q() {
    let a0 = angular_characteristic(0, Even, 1.0).unwrap();
    let b1 = angular_characteristic(1, Odd, 1.0).unwrap();
    let a1 = angular_characteristic(1, Even, 1.0).unwrap();
    assert!(a0 < b1 && b1 < a1, "{a0} {b1} {a1}");
    assert!((a0 + 0.455_138_604_1).abs() < 1e-9);
    assert!((b1 + 0.110_248_816_9).abs() < 1e-9);
}

#[test]
fn angular_zero_counts() {
    for (n, parity) in [(0, Even), (1, Even), (1, Odd), (2, Odd), (3, Even), (4, Odd), (7, Odd)] {
        for q in [0.5, 5.0, 40.0] {
            let alpha = angular_characteristic(n, parity, q).unwrap();
            let y0 = if parity == Even { [1.0, 0.0] } else { [0.0, 1.0] };
            // stop just short of π, where odd functions vanish again
            let t1 = PI - 1e-3;
            let changes = count_sign_changes(|nu| -(alpha - 2.0 * q * (2.0 * nu).cos()), y0, t1, 40_000);
            let zeros = changes + usize::from(parity == Odd);
            assert_eq!(zeros, n, "n = {n}, {parity}, q = {q}");
        }
    }
}

#[test]
fn radial_no_oscillation_when_coefficient_positive() {
    let mu0 = ellipse().mu0;
    let shot = radial_shoot(10.0, 0.1, Even, Dirichlet, mu0).unwrap();
    assert_eq!(shot.zero_count, 0);
    assert!(shot.residual > 0.0);
}

#[test]
fn radial_odd_start_vanishes() {
    let d = radial_shoot(3.0, 2.0, Odd, Dirichlet, 1e-8).unwrap();
    let n = radial_shoot(3.0, 2.0, Odd, Neumann, 1e-8).unwrap();
    assert!(d.residual.abs() < 1e-6);
    assert!((n.residual - 1.0).abs() < 1e-6);
    assert!(radial_shoot(3.0, 2.0, Odd, Neumann, 0.0).is_err());
}

#[test]
fn residual_changes_sign_across_mode() {
    let e = ellipse();
    for (m, n, parity) in [(0, 0, Even), (3, 1, Odd), (5, 2, Even)] {
        let mode = find_mode(m, n, parity, Dirichlet, &e).unwrap();
        let shot = |q: f64| {
            let a = angular_characteristic(n, parity, q).unwrap();
            radial_shoot(a, q, parity, Dirichlet, e.mu0).unwrap().residual
        };
        let (lo, hi) = (shot(mode.q * (1.0 - 1e-4)), shot(mode.q * (1.0 + 1e-4)));
        assert!(lo * hi < 0.0, "({m},{n},{parity}): {lo} {hi}");
    }
}

#[test]
fn radial_zero_count_matches_index() {
    let e = ellipse();
    for (m, n, parity, bc) in [(0, 0, Even, Dirichlet), (2, 0, Even, Dirichlet), (4, 3, Odd, Neumann), (6, 1, Even, Neumann)] {
        let mode = find_mode(m, n, parity, bc, &e).unwrap();
        let y0 = if parity == Even { [1.0, 0.0] } else { [0.0, 1.0] };
        // Dirichlet modes vanish at μ0 itself, which is outside the open interval
        let t1 = e.mu0 * (1.0 - 1e-4);
        let c = |mu: f64| mode.alpha - 2.0 * mode.q * (2.0 * mu).cosh();
        assert_eq!(count_sign_changes(c, y0, t1, 40_000), m, "({m},{n},{parity},{bc})");
    }
}

#[test]
fn reference_odd_mode() {
    let e = ellipse();
    let d = find_mode(17, 7, Odd, Dirichlet, &e).unwrap();
    assert!((d.k / 119.997615771724 - 1.0).abs() < 1e-6, "{}", d.k);
    let n = find_mode(17, 7, Odd, Neumann, &e).unwrap();
    assert!((n.k / 119.997615771724 - 1.0).abs() > 1e-3);
    assert!((d.k - e.k_from_q(d.q)).abs() == 0.0);
    assert!((e.q_from_k(d.k) / d.q - 1.0).abs() < 1e-14);
}

#[test]
fn frequencies_increase_in_both_indices() {
    let e = ellipse();
    let ks = list_quasimode_frequencies(0, 0..11, Even, Dirichlet, &e).unwrap();
    assert_eq!(ks.len(), 11);
    for (i, w) in ks.windows(2).enumerate() {
        assert!(w[1].k > w[0].k);
        assert_eq!(w[0].m, i);
    }
    let mut prev = 0.0;
    for n in 0..6 {
        let k = find_mode(2, n, Even, Dirichlet, &e).unwrap().k;
        assert!(k > prev, "n = {n}");
        prev = k;
    }
    assert!(list_quasimode_frequencies(0, 3..3, Even, Dirichlet, &e).unwrap().is_empty());
}

#[test]
fn spacing_settles_along_minor_axis() {
    let e = ellipse();
    let ks: Vec<f64> = list_quasimode_frequencies(0, 10..21, Even, Dirichlet, &e).unwrap().iter().map(|m| m.k).collect();
    let gaps: Vec<f64> = ks.windows(2).map(|w| w[1] - w[0]).collect();
    let (lo, hi) = gaps.iter().fold((f64::INFINITY, 0.0_f64), |(a, b), g| (a.min(*g), b.max(*g)));
    assert!((hi - lo) / lo < 0.2, "gaps {gaps:?}");
}

#[test]
fn dirichlet_and_neumann_differ() {
    let e = ellipse();
    for (m, n, parity) in [(0, 1, Even), (3, 2, Odd), (8, 0, Even)] {
        let d = find_mode(m, n, parity, Dirichlet, &e).unwrap().k;
        let nn = find_mode(m, n, parity, Neumann, &e).unwrap().k;
        assert!((d - nn).abs() > 1e-3, "({m},{n},{parity})");
    }
}

#[test]
fn constant_neumann_mode_is_excluded() {
    let r = find_mode(0, 0, Even, Neumann, &ellipse());
    assert!(matches!(r, Err(cavitylab::Error::SearchExhausted { .. })));
}

#[test]
fn modes_pass_independent_certificate() {
    let e = ellipse();
    for (m, n, parity, bc) in [(0, 0, Even, Dirichlet), (5, 3, Odd, Dirichlet), (9, 0, Even, Neumann), (17, 7, Odd, Dirichlet)] {
        let mode = find_mode(m, n, parity, bc, &e).unwrap();
        let c = certify_mode(&mode, &e);
        assert!(c.radial.abs() < 1e-9 && c.angular.abs() < 1e-9, "({m},{n},{parity},{bc}): {c:?}");
    }
}

#[test]
fn single_layer_nearly_singular_at_lowest_mode() {
    let e = ellipse();
    let k0 = find_mode(0, 0, Even, Dirichlet, &e).unwrap().k;
    let curve = make_ellipse(1.0, 0.5).unwrap();
    let mesh = build_mesh(&curve, k0, 80.0).unwrap();
    let smin = |k: f64| {
        let s = assemble(&mesh, OperatorKind::S(k)).unwrap();
        min_singular_value(&s.entries).unwrap()
    };
    let at = smin(k0);
    for k in [k0 - 0.1, k0 + 0.1] {
        assert!(smin(k) >= 10.0 * at, "k = {k}: {} vs {at}", smin(k));
    }
}

#[test]
fn csv_round_trip() {
    let e = ellipse();
    let modes = vec![
        find_mode(1, 0, Even, Dirichlet, &e).unwrap(),
        find_mode(2, 3, Odd, Neumann, &e).unwrap(),
    ];
    let mut buf = Vec::new();
    write_quasimode_csv(&mut buf, &modes).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("parity,bc,m,n,alpha,q,k\n"));
    assert_eq!(read_quasimode_csv(&text).unwrap(), modes);
    let commented = format!("# generated\n{text}");
    assert_eq!(read_quasimode_csv(&commented).unwrap(), modes);
}

#[test]
fn csv_rejects_bad_rows() {
    let head = "parity,bc,m,n,alpha,q,k\n";
    for body in [
        "odd,dirichlet,1,0,1.0,2.0,3.0\n",
        "even,robin,1,0,1.0,2.0,3.0\n",
        "even,dirichlet,-1,0,1.0,2.0,3.0\n",
        "even,dirichlet,1,0,nan,2.0,3.0\n",
        "even,dirichlet,1,0,1.0,-2.0,3.0\n",
        "even,dirichlet,1,0,1.0\n",
    ] {
        assert!(read_quasimode_csv(&format!("{head}{body}")).is_err(), "{body}");
    }
    assert!(read_quasimode_csv("parity,bc,m,n,alpha,q\n").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn characteristic_values_interlace(q in 0.01f64..60.0) {
        let a: Vec<f64> = (0..4).map(|n| angular_characteristic(n, Even, q).unwrap()).collect();
        let b: Vec<f64> = (1..5).map(|n| angular_characteristic(n, Odd, q).unwrap()).collect();
        // a0 < b1 < a1 < b2 < a2 < b3 < a3 < b4
        prop_assert!(a[0] < b[0]);
        for n in 1..4 {
            prop_assert!(b[n - 1] < a[n] && a[n] < b[n]);
        }
    }

    #[test]
    fn q_k_identity(q in 1e-6f64..1e6) {
        let e = ellipse();
        prop_assert!((e.q_from_k(e.k_from_q(q)) / q - 1.0).abs() < 1e-14);
    }
}
