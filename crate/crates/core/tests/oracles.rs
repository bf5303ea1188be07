//! Closed-form values the implementation must reproduce.

use maxprod::analysis::{integrated_counting_zero, log_max_modulus};
use maxprod::*;

const LN2: f64 = std::f64::consts::LN_2;

fn pow1() -> Weight64 {
    Weight64::power(1.0).unwrap()
}

/// `ω = 1/(1-r)` with the exact certificate and `γ = 5`.
fn pow1_gamma5(terms: usize) -> Construction64 {
    let w = pow1();
    let cert = certify_with_constant(&w, 2.0, &default_probe_grid(&w)).unwrap();
    build_sequence(&w, &cert, 5.0, terms).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

#[test]
fn log_weight_values() {
    let w = pow1();
    assert_eq!(w.eval_log_weight(1.0).unwrap(), 0.0);
    assert!(close(w.eval_log_weight(1e-6).unwrap(), 6.0 * std::f64::consts::LN_10, 1e-14));
    assert_eq!(Weight64::log().eval_log_weight(1.0).unwrap(), 0.0);
}

#[test]
fn certificates_of_catalog_shapes() {
    let w = pow1();
    let cert = certify_doubling(&w, &default_probe_grid(&w)).unwrap();
    assert!(close(cert.b, 2.0, 2e-9) && cert.b >= 2.0);
    assert!(close(cert.alpha, 1.0, 2e-9));
    assert!(close(cert.c, 4.0, 5e-9));

    let half = Weight64::power(0.5).unwrap();
    let cert = certify_doubling(&half, &default_probe_grid(&half)).unwrap();
    assert!(close(cert.b, 2f64.sqrt(), 2e-9));
    assert!(close(cert.alpha, 0.5, 5e-9));
    assert!(close(cert.c, 2.0, 5e-9));

    let log = Weight64::log();
    let cert = certify_doubling(&log, &default_probe_grid(&log)).unwrap();
    assert!(close(cert.b, 1.0 + LN2, 2e-9));
}

#[test]
fn envelope_examples() {
    let w = pow1();
    let cert = certify_with_constant(&w, 2.0, &default_probe_grid(&w)).unwrap();
    assert_eq!(cert.c, 4.0);
    assert!(check_envelope(&cert, &w, 0.0, 0.9).unwrap());
    assert!(check_envelope(&cert, &w, 0.5, 0.99).unwrap());
    assert!(check_envelope(&cert, &w, 0.7, 0.7).unwrap());
}

#[test]
fn gamma_ladder() {
    let w = pow1();
    let exact = certify_with_constant(&w, 2.0, &default_probe_grid(&w)).unwrap();
    // α + log₂C = 3; the ladder 3.25, 3.5, ... first passes at 4.5
    assert_eq!(select_gamma(&exact).unwrap(), 4.5);
    assert!(construction::gamma_admissible(1.0, 4.0, 5.0));
    assert!(construction::gamma_admissible(1.0, 4.0, 4.75));
    assert!(!construction::gamma_admissible(1.0, 4.0, 4.25));

    let half = Weight64::power(0.5).unwrap();
    let cert = certify_with_constant(&half, 2f64.sqrt(), &default_probe_grid(&half)).unwrap();
    let g = select_gamma(&cert).unwrap();
    let ok = |g: f64| (2.0 * g + 1.5) / (2.0 * g - 1.5) < 0.25 * (2f64.powf(2.0 * g) / 4.0 - 1.0);
    assert!(ok(g) && !ok(g - 0.25), "γ = {g}");
}

#[test]
fn power_one_gamma_five_sequence() {
    let c = pow1_gamma5(12);
    assert_eq!(c.len(), 12);
    for k in 1..=12 {
        assert_eq!(c.n(k).unwrap(), &(BigUint::from(2u8) << (5 * (k - 1))), "n_{k}");
        assert!(close(c.eps(k).unwrap().ln(), -LN2 - 5.0 * (k - 1) as f64 * LN2, 1e-13));
    }
    for k in 1..=10 {
        assert!(close(c.log_a(k).unwrap(), 1024f64.ln(), 1e-12), "a_{k}");
    }
    assert_eq!(c.lambda(), 128.0);
    assert_eq!(c.mu(), 8192.0);
    assert_eq!(c.d(), 0.5);
    assert_eq!(c.tau(), 7.0);
    assert!(close(c.delta_bound(), 49.0 / 520.0, 1e-15));
    assert!(validate_sequence(&c).passed);
}

#[test]
fn generic_scalar_construction() {
    let w = Weight32::power(1.0).unwrap();
    let cert = certify_with_constant(&w, 2.0, &default_probe_grid(&w)).unwrap();
    let c: Construction32 = build_sequence(&w, &cert, 5.0, 6).unwrap();
    for k in 1..=6 {
        assert_eq!(c.n(k).unwrap(), &(BigUint::from(2u8) << (5 * (k - 1))));
    }
    assert_eq!(c.lambda(), 128.0f32);
}

#[test]
fn too_small_gamma_breaks_the_chain() {
    let w = pow1();
    let cert = certify_with_constant(&w, 2.0, &default_probe_grid(&w)).unwrap();
    let c = build_sequence(&w, &cert, cert.alpha, 12).unwrap();
    let report = validate_sequence(&c);
    assert!(!report.passed);
    assert_eq!(report.first_chain_failure(), Some(1));
}

#[test]
fn first_zero_circles() {
    let c = pow1_gamma5(12);
    let f0 = Product64::from_construction(&c, 0).unwrap();
    let circles = f0.zero_circles();
    let s2 = (-circles[0].ell.value()).exp();
    assert!(close(s2, 2f64.powf(-10.0 / 64.0), 1e-15));
    assert!((s2 - 0.897356).abs() < 2e-6);
    assert_eq!(circles[0].n, BigUint::from(64u8));

    let r2 = Radius64::from_ell(circles[0].ell).unwrap();
    assert_eq!(counting_function(&f0, r2), BigUint::from(64u8));
    let r4 = Radius64::from_ell(circles[1].ell).unwrap();
    assert_eq!(counting_function(&f0, r4), BigUint::from(65600u32));
    let below = Radius64::from_r(0.5).unwrap();
    assert!(f0.zeros_up_to(0.5).unwrap().is_empty());
    assert_eq!(counting_function(&f0, below), BigUint::from(0u8));

    let bound = analysis::counting_bound_check(&c, &f0).unwrap();
    let first = 64.0 * (1.0 - 2f64.powf(-10.0 / 64.0));
    assert!(close(bound.rows[0].value, first, 1e-13));
    assert!((bound.rows[0].value - 6.569).abs() < 1e-3);
}

#[test]
fn zero_points_are_exact_zeros() {
    let c = pow1_gamma5(12);
    let f0 = Product64::from_construction(&c, 0).unwrap();
    for z in f0.zero_circles().iter().take(3) {
        for l in [0u32, 1, 17] {
            let p = z.zero_point(&BigUint::from(l)).unwrap();
            assert_eq!(f0.log_modulus(&p, 1e-12).unwrap(), f64::NEG_INFINITY);
        }
    }
}

#[test]
fn origin_and_positive_axis() {
    let c = pow1_gamma5(12);
    for j in 0..2 {
        let p = Product64::from_construction(&c, j).unwrap();
        assert_eq!(p.log_modulus(&DiscPoint64::origin(), 1e-12).unwrap(), 0.0);
        assert_eq!(p.eval(&DiscPoint64::origin(), 1e-12).unwrap(), Complex::new(1.0, 0.0));
        let z = DiscPoint64::new(0.05, 0, 1).unwrap();
        let v = p.eval(&z, 1e-12).unwrap();
        assert!(v.re > 0.0 && v.im.abs() <= 1e-12 * v.re);
    }
}

#[test]
fn truncation_at_half() {
    let c = pow1_gamma5(12);
    let f0 = Product64::from_construction(&c, 0).unwrap();
    let t = f0.truncation_index(LogPos64::new(2f64.ln()), 1e-12).unwrap();
    assert!(t.used <= 2);
}

#[test]
fn single_factor_functionals() {
    let (a, n) = (1024.0f64, 64u32);
    let p = Product64::finite(vec![(a.ln(), BigUint::from(n))]).unwrap();
    let s = a.powf(-1.0 / n as f64);
    let z = DiscPoint64::from_ell(
        LogPos64::new(-s.ln()),
        RationalAngle::new(1u8, 128u8).unwrap(),
    )
    .unwrap();
    assert_eq!(p.log_modulus(&z, 1e-12).unwrap(), f64::NEG_INFINITY);

    let r = 0.995f64;
    let radius = Radius64::from_r(r).unwrap();
    let x = r.powi(n as i32);
    let max = ((1.0 + a * x) / (1.0 + x / a)).ln();
    assert!(close(log_max_modulus(&p, radius).unwrap(), max, 1e-13));
    let jensen = (a * x).ln();
    assert!((circle_mean(&p, radius, MeanMode::Log).unwrap() - jensen).abs() < 1e-9);
    assert!((integrated_counting_zero(&p, radius) - n as f64 * (r / s).ln()).abs() < 1e-12);

    // T against a brute-force quadrature of log⁺|f| on 2^16 angles
    let q = 1usize << 16;
    let brute = (0..q)
        .map(|i| {
            let w = Complex::from_polar(x, 2.0 * std::f64::consts::PI * (n as f64) * i as f64 / q as f64);
            ((1.0 + w * a) / (1.0 + w / a)).norm().ln().max(0.0)
        })
        .sum::<f64>()
        / q as f64;
    assert!((characteristic(&p, radius).unwrap() - brute).abs() < 1e-6);
}

#[test]
fn interval_closed_forms() {
    let c = pow1_gamma5(12);
    let iv = interval(&c, 0, 1, 0.09).unwrap();
    let la = 1024f64.ln();
    let lo = -la * (0.91 / 64.0 + 0.09 / 65536.0);
    let hi = -la * (0.09 * (64.0 / 2048.0) / 64.0 + (1.0 - 0.09 * 64.0 / 2048.0) / 65536.0);
    assert!(close(iv.ell_at_min.value(), -lo, 1e-14));
    assert!(close(iv.lo_log().value(), lo, 1e-14));
    assert!(close(iv.ell_at_max.value(), -hi, 1e-13));
}

#[test]
fn covering_examples() {
    let c = pow1_gamma5(16);
    let big_m = max_cover_index(&c);
    let good = covering_check(&c, c.delta_bound(), big_m).unwrap();
    assert!(good.passed);
    let one = covering_check(&c, c.delta_bound(), 1).unwrap();
    assert!(one.rows.len() == 1 && one.rows[0].margin1.is_nonnegative() && one.rows[0].margin2.is_nonnegative());
    let bad = covering_check(&c, 0.5, big_m).unwrap();
    assert_eq!(bad.first_failure(), Some(1));
}

#[test]
fn density_at_first_interval() {
    let c = pow1_gamma5(20);
    let e0 = intervals(&c, 0, c.delta_bound()).unwrap();
    let rows = density_table(&e0).unwrap();
    assert!(rows[0].ratio > 0.0);
    let tail: Vec<f64> = rows.iter().rev().skip(1).step_by(2).take(3).map(|r| r.ratio).collect();
    let (lo, hi) = tail.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
    assert!(hi / lo < 2.0, "{tail:?}");
}
