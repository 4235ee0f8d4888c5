use proptest::prelude::*;
use wiretap_core::capacity::{capacity_general, maximize_over_inputs};
use wiretap_core::channel::*;
use wiretap_core::Error;

fn entropy2(p: f64) -> f64 {
    let t = |x: f64| if x == 0.0 { 0.0 } else { -x * x.ln() };
    t(p) + t(1.0 - p)
}

/// Mutual information by the textbook double sum.
fn mi_oracle(q: &[f64], w: &[Vec<f64>]) -> f64 {
    let ny = w[0].len();
    let out: Vec<f64> = (0..ny).map(|y| q.iter().zip(w).map(|(qx, row)| qx * row[y]).sum()).collect();
    let mut s = 0.0;
    for (x, row) in w.iter().enumerate() {
        for y in 0..ny {
            let j = q[x] * row[y];
            if j > 0.0 {
                s += j * (row[y] / out[y]).ln();
            }
        }
    }
    s
}

#[test]
fn bsc_mutual_information() {
    let w = DiscreteChannel::bsc(0.1).unwrap();
    let i = mutual_information(&[0.5, 0.5], &w).unwrap();
    assert!((i - (2f64.ln() - entropy2(0.1))).abs() < 1e-15);
    assert!((i - 0.368064).abs() < 1e-6);
    assert_eq!(mutual_information(&[1.0, 0.0], &w).unwrap(), 0.0);
    let flat = DiscreteChannel::bsc(0.5).unwrap();
    assert!(mutual_information(&[0.5, 0.5], &flat).unwrap().abs() < 1e-15);
}

#[test]
fn mutual_information_errors() {
    let w = DiscreteChannel::bsc(0.1).unwrap();
    assert!(matches!(mutual_information(&[0.5, 0.3, 0.2], &w), Err(Error::Dimension(_))));
    assert!(mutual_information(&[0.7, 0.7], &w).is_err());
    assert!(DiscreteChannel::new(vec![vec![0.5, 0.6]]).is_err());
    assert!(DiscreteChannel::new(vec![vec![1.5, -0.5]]).is_err());
}

#[test]
fn cascade_examples() {
    let w = DiscreteChannel::bsc(0.1).unwrap();
    let id = concatenate(&DiscreteChannel::identity(2), &w).unwrap();
    assert_eq!(id, w);
    let c = concatenate(&DiscreteChannel::bsc(0.025).unwrap(), &w).unwrap();
    let eps = 0.1 * 0.975 + 0.9 * 0.025;
    assert!((c.get(0, 1) - eps).abs() < 1e-15);
    assert!((c.get(1, 0) - eps).abs() < 1e-15);
    let r = concatenate(&DiscreteChannel::bsc(0.5).unwrap(), &w).unwrap();
    assert!((r.get(0, 0) - 0.5).abs() < 1e-15);
    assert!(concatenate(&DiscreteChannel::identity(3), &w).is_err());
}

#[test]
fn lifted_cost_examples() {
    assert_eq!(lifted_cost(&DiscreteChannel::identity(2), &[1.0, 2.0]).unwrap(), vec![1.0, 2.0]);
    // rows: v = 0 -> P(X=1) = b, v = 1 -> P(X=1) = a
    let aux = DiscreteChannel::new(vec![vec![0.98, 0.02], vec![0.02, 0.98]]).unwrap();
    let c = lifted_cost(&aux, &[0.0, 1.0]).unwrap();
    assert!((c[1] - 0.98).abs() < 1e-15 && (c[0] - 0.02).abs() < 1e-15);
    let c = lifted_cost(&DiscreteChannel::bsc(0.5).unwrap(), &[1.0, 2.0]).unwrap();
    assert_eq!(c, vec![1.5, 1.5]);
    assert!(lifted_cost(&aux, &[1.0]).is_err());
}

#[test]
fn more_capable_examples() {
    let mc = is_more_capable(&WiretapPair::bsc(0.1, 0.3).unwrap(), 1001).unwrap();
    assert!(mc.holds);
    let same = is_more_capable(&WiretapPair::bsc(0.2, 0.2).unwrap(), 1001).unwrap();
    assert!(same.holds && same.worst_gap.abs() < 1e-15);
    let swapped = WiretapPair::bsc(0.3, 0.1).unwrap();
    let mc = is_more_capable(&swapped, 1001).unwrap();
    assert!(!mc.holds);
    let at_half = mi_oracle(&[0.5, 0.5], &swapped.bob().rows()) - mi_oracle(&[0.5, 0.5], &swapped.eve().rows());
    assert!(mc.worst_gap <= at_half + 1e-12);
}

#[test]
fn ternary_more_capable_heuristic() {
    let bob = DiscreteChannel::identity(3);
    let eve = DiscreteChannel::new(vec![vec![0.8, 0.1, 0.1], vec![0.1, 0.8, 0.1], vec![0.1, 0.1, 0.8]]).unwrap();
    assert!(is_more_capable(&WiretapPair::new(bob.clone(), eve.clone()).unwrap(), 30).unwrap().holds);
    assert!(!is_more_capable(&WiretapPair::new(eve, bob).unwrap(), 30).unwrap().holds);
}

#[test]
fn secrecy_capacity_bsc() {
    let pair = WiretapPair::bsc(0.1, 0.3).unwrap();
    let c = capacity_general(&pair, &[1.0, 1.0], 1.0, 2).unwrap();
    let expected = entropy2(0.3) - entropy2(0.1);
    assert!((c.value - expected).abs() < 1e-9, "{}", c.value);
    assert!((expected - 0.285781).abs() < 1e-6);
    assert!((c.input[1] - 0.5).abs() < 1e-4);
    assert!(c.more_capable && !c.heuristic);
    let same = capacity_general(&WiretapPair::bsc(0.2, 0.2).unwrap(), &[1.0, 1.0], 1.0, 2).unwrap();
    assert!(same.value.abs() < 1e-12);
}

#[test]
fn constrained_capacity_matches_scan() {
    let pair = WiretapPair::bsc(0.1, 0.3).unwrap();
    let (value, q) = maximize_over_inputs(&pair, &[1.0, 2.0], 1.2).unwrap();
    assert!(q[1] <= 0.2 + 1e-12);
    let n = 200_000;
    let best = (0..=n)
        .map(|i| {
            let p = 0.2 * i as f64 / n as f64;
            mi_oracle(&[1.0 - p, p], &pair.bob().rows()) - mi_oracle(&[1.0 - p, p], &pair.eve().rows())
        })
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((value - best).abs() < 1e-9, "{value} vs {best}");
}

#[test]
fn not_more_capable_is_heuristic_lower_bound() {
    // Eve sees input 0 perfectly, Bob sees input 1 perfectly
    let bob = DiscreteChannel::new(vec![vec![0.5, 0.5, 0.0], vec![0.0, 0.0, 1.0], vec![0.5, 0.5, 0.0]]).unwrap();
    let eve = DiscreteChannel::new(vec![vec![1.0, 0.0], vec![0.5, 0.5], vec![0.0, 1.0]]).unwrap();
    let pair = WiretapPair::new(bob, eve).unwrap();
    let c = capacity_general(&pair, &[1.0; 3], 1.0, 3).unwrap();
    assert!(!c.more_capable && c.heuristic);
    let (plain, _) = maximize_over_inputs(&pair, &[1.0; 3], 1.0).unwrap();
    assert!(c.value >= plain - 1e-9);
    assert!(c.value <= 2f64.ln() + 1e-12);
}

#[test]
fn cost_violation_rejected() {
    assert!(matches!(
        CostedInput::new(vec![0.5, 0.5], vec![1.0, 2.0], 1.4),
        Err(Error::CostViolation { .. })
    ));
    assert!(CostedInput::new(vec![0.6, 0.4], vec![1.0, 2.0], 1.4).is_ok());
}

fn prob_vec(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, k).prop_map(|v| {
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect()
    })
}

fn channel(k: usize, m: usize) -> impl Strategy<Value = DiscreteChannel> {
    prop::collection::vec(prob_vec(m), k).prop_map(|rows| DiscreteChannel::new(rows).unwrap())
}

proptest! {
    #[test]
    fn concatenation_is_stochastic(aux in channel(3, 2), w in channel(2, 4)) {
        let c = concatenate(&aux, &w).unwrap();
        for v in 0..3 {
            let s: f64 = c.row(v).iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn data_processing(q in prob_vec(2), aux in channel(2, 2), w in channel(2, 3)) {
        let c = concatenate(&aux, &w).unwrap();
        let px = induced_input(&q, &aux).unwrap();
        prop_assert!(mi_oracle(&q, &c.rows()) <= mi_oracle(&px, &w.rows()) + 1e-12);
    }

    #[test]
    fn lifted_cost_preserves_expectation(q in prob_vec(3), aux in channel(3, 2), c0 in 0.0f64..5.0, c1 in 0.0f64..5.0) {
        let cbar = lifted_cost(&aux, &[c0, c1]).unwrap();
        let lhs: f64 = q.iter().zip(&cbar).map(|(a, b)| a * b).sum();
        let px = induced_input(&q, &aux).unwrap();
        let rhs = px[0] * c0 + px[1] * c1;
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_matches_oracle(q in prob_vec(3), w in channel(3, 3)) {
        prop_assert!((mutual_information(&q, &w).unwrap() - mi_oracle(&q, &w.rows())).abs() < 1e-12);
    }
}
