//! Finite-alphabet channels, costed inputs and mutual information.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::golden_max;

pub const PROB_TOL: f64 = 1e-12;

/// Row-stochastic matrix `W(y|x)` stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct DiscreteChannel {
    num_inputs: usize,
    num_outputs: usize,
    data: Vec<f64>,
}

impl DiscreteChannel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let num_inputs = rows.len();
        if num_inputs == 0 {
            return Err(Error::Dimension("channel has no input letters".into()));
        }
        let num_outputs = rows[0].len();
        if num_outputs == 0 {
            return Err(Error::Dimension("channel has no output letters".into()));
        }
        let mut data = Vec::with_capacity(num_inputs * num_outputs);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != num_outputs {
                return Err(Error::Dimension(format!(
                    "row {x} has {} entries, expected {num_outputs}",
                    row.len()
                )));
            }
            check_distribution(row).map_err(|e| match e {
                Error::Distribution(m) => Error::Distribution(format!("row {x}: {m}")),
                other => other,
            })?;
            data.extend_from_slice(row);
        }
        Ok(Self {
            num_inputs,
            num_outputs,
            data,
        })
    }

    pub fn identity(k: usize) -> Self {
        let mut data = vec![0.0; k * k];
        for i in 0..k {
            data[i * k + i] = 1.0;
        }
        Self {
            num_inputs: k,
            num_outputs: k,
            data,
        }
    }

    /// Binary symmetric channel with crossover `eps`.
    pub fn bsc(eps: f64) -> Result<Self> {
        crate::error::check_range("crossover", eps, 0.0, 1.0)?;
        Self::new(vec![vec![1.0 - eps, eps], vec![eps, 1.0 - eps]])
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.num_outputs
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[x * self.num_outputs + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.data[x * self.num_outputs..(x + 1) * self.num_outputs]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.num_inputs).map(|x| self.row(x).to_vec()).collect()
    }

    /// Output law `Σ_x q(x) W(·|x)`.
    pub fn output_distribution(&self, q: &[f64]) -> Result<Vec<f64>> {
        if q.len() != self.num_inputs {
            return Err(Error::Dimension(format!(
                "input law has {} entries, channel has {} inputs",
                q.len(),
                self.num_inputs
            )));
        }
        let mut out = vec![0.0; self.num_outputs];
        for (x, &qx) in q.iter().enumerate() {
            for (y, o) in out.iter_mut().enumerate() {
                *o += qx * self.get(x, y);
            }
        }
        Ok(out)
    }
}

impl TryFrom<Vec<Vec<f64>>> for DiscreteChannel {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<DiscreteChannel> for Vec<Vec<f64>> {
    fn from(c: DiscreteChannel) -> Self {
        c.rows()
    }
}

pub fn check_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::Distribution("empty vector".into()));
    }
    for (i, &v) in p.iter().enumerate() {
        if !v.is_finite() || !(0.0..=1.0).contains(&v) {
            return Err(Error::Distribution(format!("entry {i} = {v}")));
        }
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > PROB_TOL {
        return Err(Error::Distribution(format!("sums to {s}")));
    }
    Ok(())
}

/// Input law with per-letter costs and a cap on the expected cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostedInput {
    probs: Vec<f64>,
    costs: Vec<f64>,
    gamma: f64,
}

impl CostedInput {
    pub fn new(probs: Vec<f64>, costs: Vec<f64>, gamma: f64) -> Result<Self> {
        check_distribution(&probs)?;
        if probs.len() != costs.len() {
            return Err(Error::Dimension(format!(
                "{} probabilities but {} costs",
                probs.len(),
                costs.len()
            )));
        }
        if let Some(c) = costs.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(Error::OutOfRange {
                name: "cost",
                value: *c,
                range: "[0, inf)".into(),
            });
        }
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::OutOfRange {
                name: "gamma",
                value: gamma,
                range: "[0, inf)".into(),
            });
        }
        let expected = dot(&probs, &costs);
        if expected > gamma + PROB_TOL {
            return Err(Error::CostViolation { expected, gamma });
        }
        Ok(Self {
            probs,
            costs,
            gamma,
        })
    }

    /// Trivial cost `c ≡ 1`, `Γ = 1`: every input is feasible.
    pub fn unconstrained(probs: Vec<f64>) -> Result<Self> {
        let k = probs.len();
        Self::new(probs, vec![1.0; k], 1.0)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn expected_cost(&self) -> f64 {
        dot(&self.probs, &self.costs)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Bob's and Eve's channels sharing one input alphabet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WiretapPair {
    bob: DiscreteChannel,
    eve: DiscreteChannel,
}

impl WiretapPair {
    pub fn new(bob: DiscreteChannel, eve: DiscreteChannel) -> Result<Self> {
        if bob.num_inputs() != eve.num_inputs() {
            return Err(Error::Dimension(format!(
                "bob has {} inputs, eve has {}",
                bob.num_inputs(),
                eve.num_inputs()
            )));
        }
        Ok(Self { bob, eve })
    }

    pub fn bsc(eps_b: f64, eps_e: f64) -> Result<Self> {
        Self::new(DiscreteChannel::bsc(eps_b)?, DiscreteChannel::bsc(eps_e)?)
    }

    pub fn bob(&self) -> &DiscreteChannel {
        &self.bob
    }

    pub fn eve(&self) -> &DiscreteChannel {
        &self.eve
    }

    pub fn num_inputs(&self) -> usize {
        self.bob.num_inputs()
    }

    /// Prepends `aux` to both channels.
    pub fn concatenate(&self, aux: &DiscreteChannel) -> Result<Self> {
        Ok(Self {
            bob: concatenate(aux, &self.bob)?,
            eve: concatenate(aux, &self.eve)?,
        })
    }
}

/// `I(q, W)` in nats.
pub fn mutual_information(q: &[f64], w: &DiscreteChannel) -> Result<f64> {
    check_distribution(q)?;
    let out = w.output_distribution(q)?;
    let mut total = 0.0;
    for (x, &qx) in q.iter().enumerate() {
        if qx == 0.0 {
            continue;
        }
        for (y, &py) in out.iter().enumerate() {
            let wyx = w.get(x, y);
            if wyx == 0.0 {
                continue;
            }
            if py <= 0.0 {
                return Err(Error::NonFinite(format!(
                    "output letter {y} has zero marginal but positive W(y|{x})"
                )));
            }
            total += qx * wyx * (wyx / py).ln();
        }
    }
    Ok(total.max(0.0))
}

/// Cascade `V → X → Y`: `W⁺(y|v) = Σ_x W(y|x) aux(x|v)`.
pub fn concatenate(aux: &DiscreteChannel, w: &DiscreteChannel) -> Result<DiscreteChannel> {
    if aux.num_outputs() != w.num_inputs() {
        return Err(Error::Dimension(format!(
            "aux has {} outputs, channel has {} inputs",
            aux.num_outputs(),
            w.num_inputs()
        )));
    }
    let mut data = vec![0.0; aux.num_inputs() * w.num_outputs()];
    for v in 0..aux.num_inputs() {
        for x in 0..aux.num_outputs() {
            let a = aux.get(v, x);
            if a == 0.0 {
                continue;
            }
            for y in 0..w.num_outputs() {
                data[v * w.num_outputs() + y] += a * w.get(x, y);
            }
        }
    }
    Ok(DiscreteChannel {
        num_inputs: aux.num_inputs(),
        num_outputs: w.num_outputs(),
        data,
    })
}

/// `c̄(v) = Σ_x c(x) aux(x|v)`.
pub fn lifted_cost(aux: &DiscreteChannel, costs: &[f64]) -> Result<Vec<f64>> {
    if aux.num_outputs() != costs.len() {
        return Err(Error::Dimension(format!(
            "aux has {} outputs but {} costs given",
            aux.num_outputs(),
            costs.len()
        )));
    }
    Ok((0..aux.num_inputs())
        .map(|v| dot(aux.row(v), costs))
        .collect())
}

/// Distribution of `X` induced by `q` on `V` through `aux`.
pub fn induced_input(q: &[f64], aux: &DiscreteChannel) -> Result<Vec<f64>> {
    aux.output_distribution(q)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoreCapable {
    pub holds: bool,
    /// Input law minimizing `I(q,W_B) − I(q,W_E)` among those tried.
    pub worst_input: Vec<f64>,
    pub worst_gap: f64,
}

fn info_gap(pair: &WiretapPair, q: &[f64]) -> f64 {
    let ib = mutual_information(q, pair.bob()).unwrap_or(f64::NAN);
    let ie = mutual_information(q, pair.eve()).unwrap_or(f64::NAN);
    ib - ie
}

/// Grid certificate for `I(q,W_B) ≥ I(q,W_E)` over all input laws.
///
/// Exhaustive to grid tolerance for binary inputs; for larger alphabets it is a
/// heuristic over the simplex lattice with `grid_resolution` steps per axis.
pub fn is_more_capable(pair: &WiretapPair, grid_resolution: usize) -> Result<MoreCapable> {
    let k = pair.num_inputs();
    let n = grid_resolution.max(2);
    let mut worst = (vec![1.0 / k as f64; k], f64::INFINITY);
    if k == 1 {
        return Ok(MoreCapable {
            holds: true,
            worst_input: vec![1.0],
            worst_gap: 0.0,
        });
    }
    let mut visit = |q: &[f64]| {
        let g = info_gap(pair, q);
        if g < worst.1 {
            worst = (q.to_vec(), g);
        }
    };
    if k == 2 {
        for i in 0..=n {
            let p = i as f64 / n as f64;
            visit(&[1.0 - p, p]);
        }
        let p0 = worst.0[1];
        let h = 1.0 / n as f64;
        let (p, g) = golden_max(
            &mut |p| -info_gap(pair, &[1.0 - p, p]),
            (p0 - h).max(0.0),
            (p0 + h).min(1.0),
            1e-12,
        );
        if -g < worst.1 {
            worst = (vec![1.0 - p, p], -g);
        }
    } else {
        let mut counts = vec![0usize; k];
        simplex_lattice(n, k, 0, n, &mut counts, &mut |c| {
            let q: Vec<f64> = c.iter().map(|&m| m as f64 / n as f64).collect();
            visit(&q);
        });
        let refined = crate::capacity::pairwise_ascent(
            &mut |q: &[f64]| -info_gap(pair, q),
            worst.0.clone(),
            None,
            20,
        );
        let g = info_gap(pair, &refined);
        if g < worst.1 {
            worst = (refined, g);
        }
    }
    Ok(MoreCapable {
        holds: worst.1 >= -1e-9,
        worst_input: worst.0,
        worst_gap: worst.1,
    })
}

fn simplex_lattice(
    n: usize,
    k: usize,
    idx: usize,
    remaining: usize,
    counts: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if idx == k - 1 {
        counts[idx] = remaining;
        f(counts);
        return;
    }
    for m in 0..=remaining {
        counts[idx] = m;
        simplex_lattice(n, k, idx + 1, remaining - m, counts, f);
    }
}
