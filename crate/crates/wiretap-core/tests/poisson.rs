use proptest::prelude::*;
use wiretap_core::channel::mutual_information;
use wiretap_core::curve::{check_shape, find_crossing, Trend};
use wiretap_core::poisson::*;
use wiretap_core::ExponentQuery;

fn fig8() -> PoissonWiretapParams {
    PoissonWiretapParams::new(12.0, 5.0, 0.5, 1.5, 0.5).unwrap()
}

fn fig9() -> ConcatenationParams {
    ConcatenationParams::new(0.98, 0.02).unwrap()
}

/// Per-second information rate written out term by term.
fn h(a: f64, lambda: f64, q: f64) -> f64 {
    let s = lambda / a;
    let xl = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    a * (q * xl(1.0 + s) + (1.0 - q) * xl(s) - xl(q + s))
}

fn sigma_oracle(p: &PoissonWiretapParams, q: f64) -> f64 {
    h(p.a_y(), p.lambda_y(), q) - h(p.a_z(), p.lambda_z(), q)
}

/// Dense scan of `σ` over `[0, Γ]`, then a second scan on the winning cell.
fn scanned_capacity(p: &PoissonWiretapParams) -> f64 {
    let n = 1_000_000;
    let g = p.gamma();
    let (mut best_i, mut best) = (0usize, f64::NEG_INFINITY);
    for i in 0..=n {
        let v = sigma_oracle(p, g * i as f64 / n as f64);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let lo = g * best_i.saturating_sub(1) as f64 / n as f64;
    let hi = (g * (best_i + 1) as f64 / n as f64).min(g);
    for j in 0..=n {
        best = best.max(sigma_oracle(p, lo + (hi - lo) * j as f64 / n as f64));
    }
    best
}

#[test]
fn information_formula_matches_discretized_channel() {
    let p = fig8();
    let delta = 1e-6;
    let (pair, _, _) = discretize(&p, delta).unwrap();
    for q in [0.1, 0.38, 0.5] {
        let ib = mutual_information(&[1.0 - q, q], pair.bob()).unwrap() / delta;
        let ie = mutual_information(&[1.0 - q, q], pair.eve()).unwrap() / delta;
        assert!((ib - h(12.0, 0.5, q)).abs() < 1e-3, "{ib}");
        assert!((ie - h(5.0, 1.5, q)).abs() < 1e-3, "{ie}");
        assert!((bob_information_rate(&p, q) - h(12.0, 0.5, q)).abs() < 1e-12);
        assert!((eve_information_rate(&p, q) - h(5.0, 1.5, q)).abs() < 1e-12);
    }
}

#[test]
fn capacity_residual_and_dense_scan() {
    let p = fig8();
    let c = capacity(&p).unwrap();
    assert!(c.residual < 1e-12, "{}", c.residual);
    assert!((c.capacity - scanned_capacity(&p)).abs() < 1e-9);
    let tight = PoissonWiretapParams::new(12.0, 5.0, 0.5, 1.5, 0.2).unwrap();
    let ct = capacity(&tight).unwrap();
    assert_eq!(ct.q_gamma, 0.2);
    assert!((ct.capacity - scanned_capacity(&tight)).abs() < 1e-9);
}

#[test]
fn worst_case_q_star_analytic() {
    for s in [0.1f64, 0.5, 1.0, 2.0] {
        let p = PoissonWiretapParams::new(3.0, 2.0, 3.0 * s, 2.0 * s, 1.0).unwrap();
        let c = capacity(&p).unwrap();
        let analytic = (1.0 + s).powf(1.0 + s) / (std::f64::consts::E * s.powf(s)) - s;
        assert!((c.q_star - analytic).abs() < 1e-8, "s = {s}: {} vs {analytic}", c.q_star);
        assert!((worst_case_q_star(s) - analytic).abs() < 1e-12);
    }
    assert!((worst_case_q_star(1.0) - (4.0 / std::f64::consts::E - 1.0)).abs() < 1e-12);
}

#[test]
fn no_dark_current_capacity() {
    let p = PoissonWiretapParams::new(12.0, 5.0, 0.0, 0.0, 0.5).unwrap();
    let c = capacity(&p).unwrap();
    let qg = (-1.0f64).exp();
    let closed = -(12.0 - 5.0) * qg * qg.ln();
    assert!((c.capacity - closed).abs() < 1e-10, "{}", c.capacity);
    assert!((closed - 7.0 / std::f64::consts::E).abs() < 1e-14);
}

#[test]
fn unconstrained_duty_cycle() {
    // Γ = 1: capacity is the plain maximum of σ over [0, 1]
    let p = PoissonWiretapParams::new(12.0, 5.0, 0.5, 1.5, 1.0).unwrap();
    let c = capacity(&p).unwrap();
    assert_eq!(c.q_gamma, c.q_star);
    assert!((c.capacity - scanned_capacity(&p)).abs() < 1e-9);
}

#[test]
fn sigma_endpoints_and_concavity() {
    let p = fig8();
    assert!(sigma(&p, 0.0).abs() < 1e-12);
    assert!(sigma(&p, 1.0).abs() < 1e-12);
    let n = 400;
    let ys: Vec<f64> = (0..=n).map(|i| sigma(&p, i as f64 / n as f64)).collect();
    for w in ys.windows(3) {
        assert!(w[0] - 2.0 * w[1] + w[2] < 1e-12);
    }
}

#[test]
fn exponents_converge_linearly_in_delta() {
    let p = fig8();
    let q = 0.38;
    let deltas = [1e-2, 1e-3, 1e-4];
    let query = |d: f64| {
        let (pair, costs, g) = discretize(&p, d).unwrap();
        ExponentQuery::new(pair, None, vec![1.0 - q, q], costs, g, 0.0, 0.0).unwrap()
    };
    let queries: Vec<_> = deltas.iter().map(|&d| query(d)).collect();
    let check = |errs: &[f64], label: &str| {
        for w in errs.windows(2) {
            let ratio = w[1] / w[0];
            assert!((0.05..=0.2).contains(&ratio), "{label}: errors {errs:?}");
        }
    };
    for rho in [0.25, 0.5, 1.0] {
        let closed = reliability_exponent(&p, q, rho).unwrap();
        let errs: Vec<f64> = queries
            .iter()
            .zip(deltas)
            .map(|(qq, d)| (qq.tilted_phi_bob(rho).unwrap().value / d - closed).abs())
            .collect();
        check(&errs, &format!("bob rho={rho}"));
    }
    for rho in [0.25, 0.5, 0.75] {
        let closed = secrecy_exponent(&p, q, rho).unwrap();
        let errs: Vec<f64> = queries
            .iter()
            .zip(deltas)
            .map(|(qq, d)| (qq.tilted_phi_eve(rho).unwrap().value / d - closed).abs())
            .collect();
        check(&errs, &format!("eve rho={rho}"));
    }
}

#[test]
fn rate_maps_match_finite_differences() {
    let p = fig8();
    let q = 0.38;
    let h = 1e-6;
    for i in 1..20 {
        let rho = i as f64 / 20.0;
        let fd = (reliability_exponent(&p, q, rho + h).unwrap_or_else(|_| reliability_exponent(&p, q, rho).unwrap())
            - reliability_exponent(&p, q, rho - h).unwrap())
            / if rho + h <= 1.0 { 2.0 * h } else { h };
        assert!((fd - reliability_rate(&p, q, rho).unwrap()).abs() < 1e-6, "rho={rho}");
        let fd = -(secrecy_exponent(&p, q, rho + h).unwrap() - secrecy_exponent(&p, q, rho - h).unwrap()) / (2.0 * h);
        assert!((fd - secrecy_rate(&p, q, rho).unwrap()).abs() < 1e-6, "rho={rho}");
    }
}

#[test]
fn rho_zero_endpoints() {
    let p = fig8();
    let q = 0.38;
    assert!((reliability_rate(&p, q, 0.0).unwrap() - h(12.0, 0.5, q)).abs() < 1e-9);
    assert!((secrecy_rate(&p, q, 0.0).unwrap() - h(5.0, 1.5, q)).abs() < 1e-9);
    assert_eq!(reliability_exponent(&p, q, 0.0).unwrap(), 0.0);
    assert_eq!(secrecy_exponent(&p, q, 0.0).unwrap(), 0.0);
    let r = reliability_at(&p, q, h(12.0, 0.5, q)).unwrap();
    assert!(r.exponent.abs() < 1e-12);
    let s = secrecy_at(&p, q, h(5.0, 1.5, q)).unwrap();
    assert!(s.exponent.abs() < 1e-12);
}

#[test]
fn precondition_errors() {
    let p = fig8();
    assert!(reliability_exponent(&p, 0.6, 0.5).is_err());
    assert!(reliability_exponent(&p, 0.3, 1.5).is_err());
    assert!(secrecy_exponent(&p, 0.3, 1.0).is_err());
    assert!(secrecy_rate(&p, 0.3, -0.1).is_err());
    assert!(discretize(&p, 0.0).is_err());
    assert!(concatenate_params(&PoissonWiretapParams::new(12.0, 5.0, 0.5, 1.5, 0.01).unwrap(), &fig9()).is_err());
}

#[test]
fn fig8_curves_shape_and_crossing() {
    let p = fig8();
    let rel = reliability_curve(&p, 0.38, 200).unwrap();
    let sec = secrecy_curve(&p, 0.38, 200, 0.9).unwrap();
    assert!(check_shape(&rel, Trend::Decreasing, 1e-9).ok());
    assert!(check_shape(&sec, Trend::Increasing, 1e-9).ok());
    assert!(rel.points()[0].exponent > 0.0);
    assert!(find_crossing(&rel, &sec).is_some());
}

#[test]
fn curve_points_agree_with_pointwise_solvers() {
    let p = fig8();
    let rel = reliability_curve(&p, 0.38, 40).unwrap();
    for pt in rel.points() {
        let at = reliability_at(&p, 0.38, pt.rate).unwrap();
        assert!((at.exponent - pt.exponent).abs() < 1e-9, "R = {}", pt.rate);
    }
    let sec = secrecy_curve(&p, 0.38, 40, 0.9).unwrap();
    for pt in sec.points() {
        let at = secrecy_at(&p, 0.38, pt.rate).unwrap();
        assert!((at.exponent - pt.exponent).abs() < 1e-9, "R_E = {}", pt.rate);
    }
}

#[test]
fn concatenation_transform() {
    let p = fig8();
    let c = concatenate_params(&p, &fig9()).unwrap();
    assert!((c.a_y() - 11.52).abs() < 1e-12);
    assert!((c.lambda_y() - 0.74).abs() < 1e-12);
    assert!((c.gamma() - 0.48 / 0.96).abs() < 1e-12);
    let id = ConcatenationParams::new(1.0, 0.0).unwrap();
    assert_eq!(concatenate_params(&p, &id).unwrap(), p);
    assert_eq!(concatenated_capacity(&p, &id).unwrap(), capacity(&p).unwrap());
    let (rel, sec) = concatenated_curves(&p, &id, 0.38, 50, 0.9).unwrap();
    assert_eq!(rel.points(), reliability_curve(&p, 0.38, 50).unwrap().points());
    assert_eq!(sec.points(), secrecy_curve(&p, 0.38, 50, 0.9).unwrap().points());
}

#[test]
fn fig9_concatenation_ordering() {
    let p = fig8();
    let rel = reliability_curve(&p, 0.38, 200).unwrap();
    let sec = secrecy_curve(&p, 0.38, 200, 0.9).unwrap();
    let (rel_c, sec_c) = concatenated_curves(&p, &fig9(), 0.38, 200, 0.9).unwrap();
    let mut compared = 0;
    for pt in rel_c.points() {
        if let Some(base) = rel.interpolate(pt.rate) {
            assert!(pt.exponent <= base + 1e-9, "R = {}", pt.rate);
            compared += 1;
        }
    }
    for pt in sec.points() {
        if let Some(conc) = sec_c.interpolate(pt.rate) {
            assert!(conc >= pt.exponent - 1e-9, "R_E = {}", pt.rate);
            compared += 1;
        }
    }
    assert!(compared > 200);
    assert!(find_crossing(&rel_c, &sec_c).is_some());
}

#[test]
fn concatenation_ordering_on_discretized_pair() {
    let p = fig8();
    let conc = fig9();
    let delta = 1e-3;
    let (pair, costs, g) = discretize(&p, delta).unwrap();
    let q_v = 0.38;
    let q_x = (1.0 - q_v) * conc.b() + q_v * conc.a();
    let plain = ExponentQuery::new(pair.clone(), None, vec![1.0 - q_x, q_x], costs.clone(), g, 0.0, 0.0).unwrap();
    let concat = ExponentQuery::new(pair, Some(conc.channel()), vec![1.0 - q_v, q_v], costs, g, 0.0, 0.0).unwrap();
    let ib = plain.bob_information();
    for i in 0..=10 {
        let r = ib * i as f64 / 10.0;
        let f = plain.with_rates(r, 0.0).unwrap().reliability_function().unwrap().value;
        let fc = concat.with_rates(r, 0.0).unwrap().reliability_function().unwrap().value;
        assert!(fc <= f + 1e-9, "R = {r}: {fc} > {f}");
        let hh = plain.with_rates(0.0, r).unwrap().secrecy_function().unwrap().value;
        let hc = concat.with_rates(0.0, r).unwrap().secrecy_function().unwrap().value;
        assert!(hc >= hh - 1e-9, "R_E = {r}: {hc} < {hh}");
    }
}

prop_compose! {
    fn valid_params()(a_z in 0.5f64..10.0, k in 0.01f64..3.0, s_y in 0.0f64..2.0, m in 0.0f64..2.0, g in 0.05f64..1.0)
        -> PoissonWiretapParams {
        let a_y = a_z * (1.0 + k);
        let s_z = s_y * (1.0 + m);
        PoissonWiretapParams::new(a_y, a_z, s_y * a_y, s_z * a_z, g).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn exponents_vanish_at_rho_zero_everywhere(p in valid_params(), frac in 0.0f64..=1.0) {
        let q = frac * p.gamma();
        prop_assert_eq!(reliability_exponent(&p, q, 0.0).unwrap(), 0.0);
        prop_assert_eq!(secrecy_exponent(&p, q, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn concatenation_preserves_degradedness(p in valid_params(), b in 0.0f64..0.05, span in 0.5f64..0.95) {
        let a = b + span;
        prop_assume!(p.gamma() >= b);
        let conc = ConcatenationParams::new(a, b).unwrap();
        let c = concatenate_params(&p, &conc).unwrap();
        prop_assert!(c.a_y() >= c.a_z());
        prop_assert!(c.s_y() <= c.s_z() + 1e-12);
        let expected_s = (b + p.s_y()) / (a - b);
        prop_assert!((c.s_y() - expected_s).abs() < 1e-12 * (1.0 + expected_s));
    }

    #[test]
    fn capacity_is_nonnegative_and_residual_small(p in valid_params()) {
        let c = capacity(&p).unwrap();
        prop_assert!(c.capacity >= 0.0);
        prop_assert!(c.q_gamma <= p.gamma());
        prop_assert!(c.residual < 1e-9 * (1.0 + p.a_y()));
    }
}
