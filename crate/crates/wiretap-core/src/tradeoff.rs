//! The four reliability/secrecy tradeoff mechanisms: rate shifting, rate
//! exchange, concatenation and changing the cost cap.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::capacity::maximize_over_inputs;
use crate::channel::DiscreteChannel;
use crate::curve::{linspace, CurvePoint, ExponentCurve};
use crate::error::{Error, Result};
use crate::exponent::ExponentQuery;

/// Slack allowed in the pointwise ordering checks.
pub const ORDER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mechanism {
    /// Sweep: values of `R_B`; curves against `R_E`.
    RateShift,
    /// Sweep: shifts `Δ` moving rate from `R_B` to `R_E`.
    RateExchange,
    /// Sweep: crossover `ε_v` of a symmetric auxiliary channel.
    Concatenate,
    /// Sweep: cost caps `Γ`, input re-fit to each.
    CostChange,
}

impl FromStr for Mechanism {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rate_shift" => Ok(Self::RateShift),
            "rate_exchange" => Ok(Self::RateExchange),
            "concatenate" => Ok(Self::Concatenate),
            "cost_change" => Ok(Self::CostChange),
            other => Err(Error::Parse(format!(
                "unknown mechanism `{other}` (rate_shift, rate_exchange, concatenate, cost_change)"
            ))),
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::RateShift => "rate_shift",
            Self::RateExchange => "rate_exchange",
            Self::Concatenate => "concatenate",
            Self::CostChange => "cost_change",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub label: String,
    pub reliability: ExponentCurve,
    pub secrecy: ExponentCurve,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Smallest slack seen; negative means violated by that much.
    pub worst_slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TradeoffReport {
    pub mechanism: Mechanism,
    pub scenarios: Vec<Scenario>,
    pub checks: Vec<Check>,
}

impl TradeoffReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Rate grids for the reliability curves (sum rate `R_B+R_E`) and secrecy curves (`R_E`).
#[derive(Debug, Clone, PartialEq)]
pub struct Grids {
    pub sum_rates: Vec<f64>,
    pub eve_rates: Vec<f64>,
}

impl Grids {
    /// `[0, I_B]` for reliability, `[0, I_B + I_E]` for secrecy.
    pub fn around(query: &ExponentQuery, points: usize) -> Self {
        let ib = query.bob_information();
        let ie = query.eve_information();
        Self {
            sum_rates: linspace(0.0, ib, points),
            eve_rates: linspace(0.0, ib + ie, points),
        }
    }
}

pub fn tradeoff_scenarios(
    base: &ExponentQuery,
    mechanism: Mechanism,
    sweep: &[f64],
    grids: &Grids,
) -> Result<TradeoffReport> {
    if sweep.is_empty() {
        return Err(Error::Dimension("empty sweep".into()));
    }
    match mechanism {
        Mechanism::RateShift => rate_shift(base, sweep, grids),
        Mechanism::RateExchange => rate_exchange(base, sweep, grids),
        Mechanism::Concatenate => concatenate(base, sweep, grids),
        Mechanism::CostChange => cost_change(base, sweep, grids),
    }
}

fn tag(mut c: ExponentCurve, key: &str, value: f64) -> ExponentCurve {
    c.meta.insert(key.into(), format!("{value}"));
    c
}

fn check(name: impl Into<String>, slack: f64) -> Check {
    Check {
        name: name.into(),
        passed: slack >= -ORDER_TOL,
        worst_slack: slack,
    }
}

fn rate_shift(base: &ExponentQuery, sweep: &[f64], grids: &Grids) -> Result<TradeoffReport> {
    let mut scenarios = Vec::new();
    let mut worst_f = f64::INFINITY;
    let mut worst_h = f64::INFINITY;
    for &rb in sweep {
        let q = base.with_rates(rb, 0.0)?;
        let mut pts = Vec::new();
        for &re in &grids.eve_rates {
            let v = q.with_rates(rb, re)?.reliability_function()?;
            pts.push(CurvePoint {
                rate: re,
                exponent: v.value,
                raw: Some(v.raw),
                argmax_rho: Some(v.rho),
                argmax_r: Some(v.r),
                argmax_s: Some(v.s),
            });
        }
        let mut meta = q.secrecy_curve(&grids.eve_rates[..1])?.meta;
        meta.insert("axis".into(), "R_E".into());
        let rel = tag(ExponentCurve::new("F_c", meta, pts)?, "rate_b", rb);
        let sec = tag(q.secrecy_curve(&grids.eve_rates)?, "rate_b", rb);
        for w in rel.exponents().windows(2) {
            worst_f = worst_f.min(w[0] - w[1]);
        }
        for w in sec.exponents().windows(2) {
            worst_h = worst_h.min(w[1] - w[0]);
        }
        scenarios.push(Scenario {
            label: format!("R_B={rb}"),
            reliability: rel,
            secrecy: sec,
        });
    }
    Ok(TradeoffReport {
        mechanism: Mechanism::RateShift,
        scenarios,
        checks: vec![
            check("F_c nonincreasing in R_E", worst_f),
            check("H_c nondecreasing in R_E", worst_h),
        ],
    })
}

fn rate_exchange(base: &ExponentQuery, sweep: &[f64], grids: &Grids) -> Result<TradeoffReport> {
    let (rb, re) = (base.rate_b(), base.rate_e());
    let reference = base.reliability_curve(&grids.sum_rates)?;
    let mut scenarios = Vec::new();
    let mut worst_invariance: f64 = 0.0;
    let mut worst_gain = f64::INFINITY;
    for &d in sweep {
        if d > rb {
            return Err(Error::OutOfRange {
                name: "delta",
                value: d,
                range: format!("[0, R_B = {rb}]"),
            });
        }
        let mut f_at_fixed_sum = Vec::new();
        for &sum in &grids.sum_rates {
            // split `sum` as (R_B − Δ, rest) with the rest carried by R_E
            let shifted_b = (rb - d).min(sum);
            let v = base.with_rates(shifted_b, sum - shifted_b)?.reliability_function()?;
            f_at_fixed_sum.push(v);
        }
        let pts: Vec<CurvePoint> = grids
            .sum_rates
            .iter()
            .zip(&f_at_fixed_sum)
            .map(|(&r, v)| CurvePoint {
                rate: r,
                exponent: v.value,
                raw: Some(v.raw),
                argmax_rho: Some(v.rho),
                argmax_r: Some(v.r),
                argmax_s: Some(v.s),
            })
            .collect();
        let rel = tag(
            ExponentCurve::new("F_c", reference.meta.clone(), pts)?,
            "delta",
            d,
        );
        for (a, b) in rel.exponents().iter().zip(reference.exponents()) {
            worst_invariance = worst_invariance.max((a - b).abs());
        }
        let shifted: Vec<f64> = grids.eve_rates.iter().map(|r| r + d).collect();
        let sec_shift = base.secrecy_curve(&shifted)?;
        let sec_base = base.secrecy_curve(&grids.eve_rates)?;
        for (a, b) in sec_shift.exponents().iter().zip(sec_base.exponents()) {
            worst_gain = worst_gain.min(a - b);
        }
        // H_c at the exchanged operating point, plotted on the unshifted axis
        let pts: Vec<CurvePoint> = grids
            .eve_rates
            .iter()
            .zip(sec_shift.points())
            .map(|(&r, p)| CurvePoint { rate: r, ..*p })
            .collect();
        let mut meta = sec_shift.meta.clone();
        meta.insert("operating_point".into(), format!("R_B={} R_E={}", rb - d, re + d));
        let sec = tag(ExponentCurve::new("H_c", meta, pts)?, "delta", d);
        scenarios.push(Scenario {
            label: format!("delta={d}"),
            reliability: rel,
            secrecy: sec,
        });
    }
    Ok(TradeoffReport {
        mechanism: Mechanism::RateExchange,
        scenarios,
        checks: vec![
            Check {
                name: "F_c invariant under fixed R_B+R_E".into(),
                passed: worst_invariance <= 1e-12,
                worst_slack: -worst_invariance,
            },
            check("H_c does not decrease when R_E grows", worst_gain),
        ],
    })
}

/// k-ary symmetric channel keeping a letter with probability `1 − eps`.
pub fn symmetric_channel(k: usize, eps: f64) -> Result<DiscreteChannel> {
    crate::error::check_range("eps_v", eps, 0.0, 1.0)?;
    if k < 2 {
        return Err(Error::Dimension("symmetric channel needs at least 2 letters".into()));
    }
    let off = eps / (k - 1) as f64;
    DiscreteChannel::new(
        (0..k)
            .map(|i| (0..k).map(|j| if i == j { 1.0 - eps } else { off }).collect())
            .collect(),
    )
}

/// Law on `V` that the symmetric channel maps onto `p_x`.
pub fn symmetric_preimage(p_x: &[f64], eps: f64) -> Result<Vec<f64>> {
    let k = p_x.len();
    let off = eps / (k - 1) as f64;
    let gain = 1.0 - eps - off;
    if gain.abs() < 1e-12 {
        return Err(Error::OutOfRange {
            name: "eps_v",
            value: eps,
            range: "channel must not be fully randomizing".into(),
        });
    }
    let q: Vec<f64> = p_x.iter().map(|p| (p - off) / gain).collect();
    if q.iter().any(|&v| v < -1e-12) {
        return Err(Error::Distribution(format!(
            "no input law on V induces {p_x:?} through eps_v={eps}"
        )));
    }
    let q: Vec<f64> = q.into_iter().map(|v| v.max(0.0)).collect();
    let s: f64 = q.iter().sum();
    Ok(q.into_iter().map(|v| v / s).collect())
}

fn concatenate(base: &ExponentQuery, sweep: &[f64], grids: &Grids) -> Result<TradeoffReport> {
    if base.aux().is_some() {
        return Err(Error::Dimension("base query is already concatenated".into()));
    }
    let rel0 = base.reliability_curve(&grids.sum_rates)?;
    let sec0 = base.secrecy_curve(&grids.eve_rates)?;
    let k = base.pair().num_inputs();
    let mut scenarios = vec![Scenario {
        label: "direct".into(),
        reliability: rel0.clone(),
        secrecy: sec0.clone(),
    }];
    let mut worst_f = f64::INFINITY;
    let mut worst_h = f64::INFINITY;
    for &eps in sweep {
        let aux = symmetric_channel(k, eps)?;
        let q_v = symmetric_preimage(base.input().probs(), eps)?;
        let cq = ExponentQuery::new(
            base.pair().clone(),
            Some(aux),
            q_v,
            base.x_costs().to_vec(),
            base.gamma(),
            base.rate_b(),
            base.rate_e(),
        )?;
        let rel = tag(cq.reliability_curve(&grids.sum_rates)?, "eps_v", eps);
        let sec = tag(cq.secrecy_curve(&grids.eve_rates)?, "eps_v", eps);
        for (a, b) in rel0.exponents().iter().zip(rel.exponents()) {
            worst_f = worst_f.min(a - b);
        }
        for (a, b) in sec.exponents().iter().zip(sec0.exponents()) {
            worst_h = worst_h.min(a - b);
        }
        scenarios.push(Scenario {
            label: format!("eps_v={eps}"),
            reliability: rel,
            secrecy: sec,
        });
    }
    Ok(TradeoffReport {
        mechanism: Mechanism::Concatenate,
        scenarios,
        checks: vec![
            check("concatenated F_c <= direct F_c", worst_f),
            check("concatenated H_c >= direct H_c", worst_h),
        ],
    })
}

fn cost_change(base: &ExponentQuery, sweep: &[f64], grids: &Grids) -> Result<TradeoffReport> {
    if base.aux().is_some() {
        return Err(Error::Dimension("cost change expects a direct query".into()));
    }
    if sweep.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Parse("cost caps must be strictly increasing".into()));
    }
    let mut scenarios: Vec<Scenario> = Vec::new();
    let mut worst_f = f64::INFINITY;
    let mut worst_h = f64::INFINITY;
    for &gamma in sweep {
        let (_, q) = maximize_over_inputs(base.pair(), base.x_costs(), gamma)?;
        // the maximizer may sit a rounding step past the cap
        let q = pull_inside(q, base.x_costs(), gamma);
        let cq = ExponentQuery::new(
            base.pair().clone(),
            None,
            q,
            base.x_costs().to_vec(),
            gamma,
            base.rate_b(),
            base.rate_e(),
        )?;
        let rel = tag(cq.reliability_curve(&grids.sum_rates)?, "gamma_sweep", gamma);
        let sec = tag(cq.secrecy_curve(&grids.eve_rates)?, "gamma_sweep", gamma);
        if let Some(prev) = scenarios.last() {
            for (a, b) in rel.exponents().iter().zip(prev.reliability.exponents()) {
                worst_f = worst_f.min(a - b);
            }
            for (a, b) in prev.secrecy.exponents().iter().zip(sec.exponents()) {
                worst_h = worst_h.min(a - b);
            }
        }
        scenarios.push(Scenario {
            label: format!("gamma={gamma}"),
            reliability: rel,
            secrecy: sec,
        });
    }
    Ok(TradeoffReport {
        mechanism: Mechanism::CostChange,
        scenarios,
        checks: vec![
            check("F_c nondecreasing in gamma", worst_f),
            check("H_c nonincreasing in gamma", worst_h),
        ],
    })
}

fn pull_inside(q: Vec<f64>, costs: &[f64], gamma: f64) -> Vec<f64> {
    let c: f64 = q.iter().zip(costs).map(|(a, b)| a * b).sum();
    if c <= gamma || q.len() != 2 {
        return q;
    }
    let (lo, hi) = match crate::capacity::binary_feasible_interval(costs, gamma) {
        Ok(iv) => iv,
        Err(_) => return q,
    };
    let p = q[1].clamp(lo, hi);
    vec![1.0 - p, p]
}
