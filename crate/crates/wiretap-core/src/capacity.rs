//! δ-secrecy capacity `sup (I(V;Y) − I(V;Z))` under an expected-cost cap.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::channel::{dot, is_more_capable, mutual_information, DiscreteChannel, WiretapPair};
use crate::error::{Error, Result};
use crate::numeric::golden_max;

const STARTS: usize = 8;
const GRID: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityResult {
    /// nats per channel use
    pub value: f64,
    /// Maximizing law on `V` (on `X` when `aux` is `None`).
    pub input: Vec<f64>,
    pub aux: Option<Vec<Vec<f64>>>,
    pub more_capable: bool,
    /// Local search over `(V, P_{X|V})`; the value is a lower bound.
    pub heuristic: bool,
}

fn gap(pair: &WiretapPair, q: &[f64]) -> f64 {
    mutual_information(q, pair.bob()).unwrap_or(f64::NAN)
        - mutual_information(q, pair.eve()).unwrap_or(f64::NAN)
}

/// Interval of `p = q(1)` meeting `c0 (1−p) + c1 p ≤ Γ`.
pub fn binary_feasible_interval(costs: &[f64], gamma: f64) -> Result<(f64, f64)> {
    if costs.len() != 2 {
        return Err(Error::Dimension(format!("{} costs for a binary input", costs.len())));
    }
    let (c0, c1) = (costs[0], costs[1]);
    let tol = 1e-12;
    if c0 == c1 {
        return if c0 <= gamma + tol {
            Ok((0.0, 1.0))
        } else {
            Err(Error::CostViolation { expected: c0, gamma })
        };
    }
    let p_star = (gamma - c0) / (c1 - c0);
    let (lo, hi) = if c1 > c0 { (0.0, p_star.min(1.0)) } else { (p_star.max(0.0), 1.0) };
    if lo > hi + tol {
        return Err(Error::CostViolation {
            expected: c0.min(c1),
            gamma,
        });
    }
    Ok((lo, hi.max(lo)))
}

/// Maximizes `I(q,W_B) − I(q,W_E)` over input laws on `X` meeting the cost cap.
pub fn maximize_over_inputs(pair: &WiretapPair, costs: &[f64], gamma: f64) -> Result<(f64, Vec<f64>)> {
    let k = pair.num_inputs();
    if costs.len() != k {
        return Err(Error::Dimension(format!("{} costs for {k} inputs", costs.len())));
    }
    if k == 1 {
        if costs[0] > gamma + 1e-12 {
            return Err(Error::CostViolation { expected: costs[0], gamma });
        }
        return Ok((0.0, vec![1.0]));
    }
    if k == 2 {
        let (lo, hi) = binary_feasible_interval(costs, gamma)?;
        let f = |p: f64| gap(pair, &[1.0 - p, p]);
        let mut best = (lo, f(lo));
        let h = (hi - lo) / GRID as f64;
        for i in 0..=GRID {
            let p = if i == GRID { hi } else { lo + h * i as f64 };
            let v = f(p);
            if v > best.1 {
                best = (p, v);
            }
        }
        if h > 0.0 {
            let (p, v) = golden_max(&mut |p| f(p), (best.0 - h).max(lo), (best.0 + h).min(hi), 1e-13);
            if v > best.1 {
                best = (p, v);
            }
        }
        return Ok((best.1.max(0.0), vec![1.0 - best.0, best.0]));
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut best = (f64::NEG_INFINITY, vec![]);
    for start in 0..STARTS {
        let q0 = feasible_start(&mut rng, costs, gamma, start == 0)?;
        let q = pairwise_ascent(&mut |q| gap(pair, q), q0, Some((costs, gamma)), 60);
        let v = gap(pair, &q);
        if v > best.0 {
            best = (v, q);
        }
    }
    Ok((best.0.max(0.0), best.1))
}

/// δ-secrecy capacity with an auxiliary alphabet of size `aux_dim`.
pub fn capacity_general(
    pair: &WiretapPair,
    costs: &[f64],
    gamma: f64,
    aux_dim: usize,
) -> Result<CapacityResult> {
    if aux_dim == 0 {
        return Err(Error::Dimension("aux_dim must be positive".into()));
    }
    let mc = is_more_capable(pair, if pair.num_inputs() == 2 { 1001 } else { 20 })?;
    let (value, input) = maximize_over_inputs(pair, costs, gamma)?;
    if mc.holds {
        return Ok(CapacityResult {
            value,
            input,
            aux: None,
            more_capable: true,
            heuristic: false,
        });
    }
    let mut best = CapacityResult {
        value,
        input,
        aux: None,
        more_capable: false,
        heuristic: true,
    };
    let mut rng = StdRng::seed_from_u64(0xa11c);
    for _ in 0..STARTS {
        let mut aux: Vec<Vec<f64>> = (0..aux_dim)
            .map(|_| feasible_start(&mut rng, costs, f64::INFINITY, false).unwrap())
            .collect();
        let mut q = random_simplex(&mut rng, aux_dim);
        // pull toward the cheapest letter until the cost cap holds
        let cheap = argmin(costs);
        let cost = |q: &[f64], aux: &[Vec<f64>]| -> f64 {
            q.iter().zip(aux).map(|(qv, row)| qv * dot(row, costs)).sum()
        };
        let mut lambda = 1.0;
        while cost(&q, &aux) > gamma && lambda > 1e-12 {
            lambda *= 0.5;
            for row in aux.iter_mut() {
                for (x, a) in row.iter_mut().enumerate() {
                    *a = lambda * *a + if x == cheap { 1.0 - lambda } else { 0.0 };
                }
            }
        }
        if cost(&q, &aux) > gamma + 1e-12 {
            continue;
        }
        let objective = |q: &[f64], aux: &[Vec<f64>]| -> f64 {
            match DiscreteChannel::new(aux.to_vec()).and_then(|a| pair.concatenate(&a)) {
                Ok(p) => gap(&p, q),
                Err(_) => f64::NEG_INFINITY,
            }
        };
        for _round in 0..30 {
            let before = objective(&q, &aux);
            let lifted: Vec<f64> = aux.iter().map(|row| dot(row, costs)).collect();
            q = pairwise_ascent(&mut |qq| objective(qq, &aux), q, Some((&lifted, gamma)), 3);
            for v in 0..aux_dim {
                let rest: f64 = (0..aux_dim)
                    .filter(|&u| u != v)
                    .map(|u| q[u] * dot(&aux[u], costs))
                    .sum();
                let budget = if q[v] > 0.0 { (gamma - rest) / q[v] } else { f64::INFINITY };
                let row = aux[v].clone();
                let new_row = pairwise_ascent(
                    &mut |r| {
                        let mut a = aux.clone();
                        a[v] = r.to_vec();
                        objective(&q, &a)
                    },
                    row,
                    Some((costs, budget)),
                    3,
                );
                aux[v] = new_row;
            }
            if objective(&q, &aux) - before < 1e-13 {
                break;
            }
        }
        let v = objective(&q, &aux);
        if v > best.value && cost(&q, &aux) <= gamma + 1e-12 {
            best.value = v;
            best.input = q;
            best.aux = Some(aux);
        }
    }
    Ok(best)
}

fn argmin(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

fn random_simplex(rng: &mut StdRng, k: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..k).map(|_| -rng.gen_range(1e-12f64..1.0).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

fn feasible_start(rng: &mut StdRng, costs: &[f64], gamma: f64, uniform: bool) -> Result<Vec<f64>> {
    let k = costs.len();
    let cheap = argmin(costs);
    if costs[cheap] > gamma + 1e-12 {
        return Err(Error::CostViolation {
            expected: costs[cheap],
            gamma,
        });
    }
    let q = if uniform { vec![1.0 / k as f64; k] } else { random_simplex(rng, k) };
    let c = dot(&q, costs);
    if c <= gamma {
        return Ok(q);
    }
    // largest mix with the cheapest point mass that meets the cap
    let lambda = (gamma - costs[cheap]) / (c - costs[cheap]);
    Ok(q.iter()
        .enumerate()
        .map(|(x, &p)| lambda * p + if x == cheap { 1.0 - lambda } else { 0.0 })
        .collect())
}

/// Coordinate ascent moving mass between pairs of letters, keeping `Σ p c ≤ budget`.
pub(crate) fn pairwise_ascent(
    f: &mut impl FnMut(&[f64]) -> f64,
    mut p: Vec<f64>,
    constraint: Option<(&[f64], f64)>,
    rounds: usize,
) -> Vec<f64> {
    let k = p.len();
    let mut current = f(&p);
    for _ in 0..rounds {
        let start = current;
        for i in 0..k {
            for j in (i + 1)..k {
                // p_i += d, p_j -= d
                let mut lo = -p[i];
                let mut hi = p[j];
                if let Some((c, budget)) = constraint {
                    let slack = budget - dot(&p, c);
                    let dc = c[i] - c[j];
                    if dc > 0.0 {
                        hi = hi.min((slack / dc).max(0.0));
                    } else if dc < 0.0 {
                        lo = lo.max((slack / dc).min(0.0));
                    }
                }
                if hi - lo < 1e-15 {
                    continue;
                }
                let mut trial = p.clone();
                let (d, v) = golden_max(
                    &mut |d| {
                        trial[i] = p[i] + d;
                        trial[j] = p[j] - d;
                        f(&trial)
                    },
                    lo,
                    hi,
                    1e-12,
                );
                if v > current {
                    p[i] = (p[i] + d).max(0.0);
                    p[j] = (p[j] - d).max(0.0);
                    current = f(&p);
                }
            }
        }
        if current - start < 1e-15 {
            break;
        }
    }
    p
}
