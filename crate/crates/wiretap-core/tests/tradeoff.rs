use proptest::prelude::*;
use wiretap_core::channel::{concatenate, WiretapPair};
use wiretap_core::curve::linspace;
use wiretap_core::exponent::ExponentQuery;
use wiretap_core::tradeoff::*;

fn base(rate_b: f64, rate_e: f64) -> ExponentQuery {
    ExponentQuery::new(
        WiretapPair::bsc(0.1, 0.3).unwrap(),
        None,
        vec![0.6, 0.4],
        vec![1.0, 2.0],
        1.4,
        rate_b,
        rate_e,
    )
    .unwrap()
}

fn check<'a>(rep: &'a TradeoffReport, prefix: &str) -> &'a Check {
    rep.checks.iter().find(|c| c.name.starts_with(prefix)).unwrap()
}

#[test]
fn concatenation_orders_curves() {
    let q = base(0.0, 0.0);
    let grids = Grids::around(&q, 40);
    let rep = tradeoff_scenarios(&q, Mechanism::Concatenate, &[0.025], &grids).unwrap();
    assert!(rep.passed(), "{:?}", rep.checks);
    let (direct, cat) = (&rep.scenarios[0], &rep.scenarios[1]);
    for (a, b) in direct.reliability.exponents().iter().zip(cat.reliability.exponents()) {
        assert!(a - b >= -1e-9, "{a} {b}");
    }
    for (a, b) in direct.secrecy.exponents().iter().zip(cat.secrecy.exponents()) {
        assert!(b - a >= -1e-9, "{a} {b}");
    }
    // the ordering is strict somewhere on both axes
    assert!(direct.reliability.exponents()[0] > cat.reliability.exponents()[0] + 1e-4);
    let last = grids.eve_rates.len() - 1;
    assert!(cat.secrecy.exponents()[last] > direct.secrecy.exponents()[last] + 1e-4);
}

#[test]
fn concatenated_query_matches_cascade() {
    // crossover of BSC(0.025) followed by BSC(0.1), by hand
    let eps = 0.025 * 0.9 + 0.975 * 0.1;
    let q_v1 = (0.4 - 0.025) / 0.95;
    let aux = symmetric_channel(2, 0.025).unwrap();
    let pair = WiretapPair::bsc(0.1, 0.3).unwrap();
    let cascade = concatenate(&aux, pair.bob()).unwrap();
    assert!((cascade.get(0, 1) - eps).abs() < 1e-15);
    let q_v = symmetric_preimage(&[0.6, 0.4], 0.025).unwrap();
    assert!((q_v[1] - q_v1).abs() < 1e-15);

    let cq = ExponentQuery::new(pair, Some(aux), q_v, vec![1.0, 2.0], 1.4, 0.0, 0.0).unwrap();
    let px = cq.induced_x();
    assert!((px[1] - 0.4).abs() < 1e-12);
    let ib = {
        let h = |p: f64| -p * p.ln() - (1.0 - p) * (1.0 - p).ln();
        let py1 = q_v1 * (1.0 - eps) + (1.0 - q_v1) * eps;
        h(py1) - h(eps)
    };
    assert!((cq.bob_information() - ib).abs() < 1e-12);
    assert!(cq.bob_information() < base(0.0, 0.0).bob_information());
    assert!(cq.eve_information() < base(0.0, 0.0).eve_information());
}

#[test]
fn concatenation_sweep_is_monotone_in_noise() {
    let q = base(0.0, 0.0);
    let grids = Grids {
        sum_rates: linspace(0.0, q.bob_information(), 12),
        eve_rates: linspace(0.0, 0.6, 12),
    };
    let sweep = [0.01, 0.025, 0.05, 0.1];
    let rep = tradeoff_scenarios(&q, Mechanism::Concatenate, &sweep, &grids).unwrap();
    assert!(rep.passed(), "{:?}", rep.checks);
    // noisier prefix: less reliability, more secrecy
    for w in rep.scenarios[1..].windows(2) {
        for (a, b) in w[0].reliability.exponents().iter().zip(w[1].reliability.exponents()) {
            assert!(a - b >= -1e-9);
        }
        for (a, b) in w[0].secrecy.exponents().iter().zip(w[1].secrecy.exponents()) {
            assert!(b - a >= -1e-9);
        }
    }
}

#[test]
fn rate_exchange_keeps_reliability() {
    let q = base(0.1, 0.05);
    let grids = Grids {
        sum_rates: linspace(0.1, q.bob_information(), 20),
        eve_rates: linspace(0.0, 0.6, 20),
    };
    let rep = tradeoff_scenarios(&q, Mechanism::RateExchange, &[0.05], &grids).unwrap();
    assert!(rep.passed(), "{:?}", rep.checks);
    assert!(check(&rep, "F_c invariant").worst_slack >= -1e-12);
    let reference = q.reliability_curve(&grids.sum_rates).unwrap();
    assert_eq!(rep.scenarios[0].reliability.exponents(), reference.exponents());
    // H_c at the exchanged point equals the base curve read Δ further right
    let shifted: Vec<f64> = grids.eve_rates.iter().map(|r| r + 0.05).collect();
    let direct = q.secrecy_curve(&shifted).unwrap();
    assert_eq!(rep.scenarios[0].secrecy.exponents(), direct.exponents());
    assert!(tradeoff_scenarios(&q, Mechanism::RateExchange, &[0.2], &grids).is_err());
}

#[test]
fn cost_change_moves_curves() {
    let q = base(0.0, 0.0);
    let grids = Grids {
        sum_rates: linspace(0.0, 0.4, 15),
        eve_rates: linspace(0.0, 0.6, 15),
    };
    let rep = tradeoff_scenarios(&q, Mechanism::CostChange, &[1.0, 1.2, 1.4], &grids).unwrap();
    assert!(rep.passed(), "{:?}", rep.checks);
    assert_eq!(rep.scenarios.len(), 3);
    // Γ = 1 leaves only the point mass on x = 0
    assert!(rep.scenarios[0].reliability.exponents().iter().all(|&f| f == 0.0));
    assert!(rep.scenarios[2].reliability.exponents()[0] > rep.scenarios[1].reliability.exponents()[0]);
    assert!(tradeoff_scenarios(&q, Mechanism::CostChange, &[1.4, 1.2], &grids).is_err());
}

#[test]
fn rate_shift_shapes() {
    let q = base(0.0, 0.0);
    let grids = Grids {
        sum_rates: vec![0.0],
        eve_rates: linspace(0.0, 0.5, 15),
    };
    let rep = tradeoff_scenarios(&q, Mechanism::RateShift, &[0.05, 0.1, 0.15], &grids).unwrap();
    assert!(rep.passed(), "{:?}", rep.checks);
    // larger R_B costs reliability at every R_E
    for w in rep.scenarios.windows(2) {
        for (a, b) in w[0].reliability.exponents().iter().zip(w[1].reliability.exponents()) {
            assert!(a - b >= -1e-9);
        }
        assert_eq!(w[0].secrecy.exponents(), w[1].secrecy.exponents());
    }
}

#[test]
fn empty_sweep_rejected() {
    let q = base(0.0, 0.0);
    assert!(tradeoff_scenarios(&q, Mechanism::RateShift, &[], &Grids::around(&q, 3)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn concatenation_never_helps_bob(eps_v in 0.001f64..0.15, r in 0.0f64..0.3, re in 0.0f64..0.8) {
        let q = base(0.0, 0.0);
        let grids = Grids { sum_rates: vec![r], eve_rates: vec![re] };
        let rep = tradeoff_scenarios(&q, Mechanism::Concatenate, &[eps_v], &grids).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.checks);
    }
}
