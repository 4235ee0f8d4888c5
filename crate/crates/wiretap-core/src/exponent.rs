//! Cost-tilted Gallager-type functions and the asymptotic reliability (`F_c`)
//! and secrecy (`H_c`) functions of a wiretap pair.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::channel::{
    induced_input, lifted_cost, mutual_information, CostedInput, DiscreteChannel, WiretapPair,
};
use crate::curve::{CurvePoint, ExponentCurve};
use crate::error::{Error, Result};
use crate::numeric::{bisect_predicate, ln0, scan_golden_max};

/// Tilt search is capped at `TILT_SPAN / (max c − min c)`.
pub const TILT_SPAN: f64 = 50.0;
/// Open interval for the secrecy parameter is evaluated on `[RHO_EDGE, 1 − RHO_EDGE]`.
pub const RHO_EDGE: f64 = 1e-9;
/// A raw exponent above this counts as strictly positive when locating zero crossings.
pub const POSITIVE_EXPONENT: f64 = 1e-14;

const RHO_TOL: f64 = 1e-10;
const TILT_TOL: f64 = 1e-9;
const SCAN: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentQuery {
    pair: WiretapPair,
    aux: Option<DiscreteChannel>,
    /// Law on `V` with the lifted costs `c̄(v)`.
    input: CostedInput,
    x_costs: Vec<f64>,
    rate_b: f64,
    rate_e: f64,
    tables: Tables,
}

#[derive(Debug, Clone, PartialEq)]
struct Tables {
    nv: usize,
    nx: usize,
    ln_q: Vec<f64>,
    slack_v: Vec<f64>,
    slack_x: Vec<f64>,
    ln_aux: Option<Vec<f64>>,
    ln_bob: Vec<f64>,
    ny_bob: usize,
    ln_eve: Vec<f64>,
    ny_eve: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentValue {
    /// Clamped at 0.
    pub value: f64,
    pub raw: f64,
    pub rho: f64,
    pub r: f64,
    pub s: f64,
}

#[derive(Clone, Copy)]
enum Side {
    Bob,
    Eve,
}

impl ExponentQuery {
    /// `q` lives on `V` (on `X` when `aux` is `None`); `x_costs` are the per-letter costs on `X`.
    pub fn new(
        pair: WiretapPair,
        aux: Option<DiscreteChannel>,
        q: Vec<f64>,
        x_costs: Vec<f64>,
        gamma: f64,
        rate_b: f64,
        rate_e: f64,
    ) -> Result<Self> {
        if x_costs.len() != pair.num_inputs() {
            return Err(Error::Dimension(format!(
                "{} costs for {} channel inputs",
                x_costs.len(),
                pair.num_inputs()
            )));
        }
        let v_costs = match &aux {
            Some(a) => {
                if a.num_outputs() != pair.num_inputs() {
                    return Err(Error::Dimension(format!(
                        "aux has {} outputs, channels have {} inputs",
                        a.num_outputs(),
                        pair.num_inputs()
                    )));
                }
                lifted_cost(a, &x_costs)?
            }
            None => x_costs.clone(),
        };
        let input = CostedInput::new(q, v_costs, gamma)?;
        for (name, r) in [("rate_b", rate_b), ("rate_e", rate_e)] {
            if !r.is_finite() || r < 0.0 {
                return Err(Error::OutOfRange {
                    name,
                    value: r,
                    range: "[0, inf)".into(),
                });
            }
        }
        let tables = Tables::build(&pair, aux.as_ref(), &input, &x_costs);
        Ok(Self {
            pair,
            aux,
            input,
            x_costs,
            rate_b,
            rate_e,
            tables,
        })
    }

    /// Non-concatenated query with the costed input on `X`.
    pub fn plain(pair: WiretapPair, input: &CostedInput, rate_b: f64, rate_e: f64) -> Result<Self> {
        Self::new(
            pair,
            None,
            input.probs().to_vec(),
            input.costs().to_vec(),
            input.gamma(),
            rate_b,
            rate_e,
        )
    }

    pub fn with_rates(&self, rate_b: f64, rate_e: f64) -> Result<Self> {
        let mut q = self.clone();
        for (name, r) in [("rate_b", rate_b), ("rate_e", rate_e)] {
            if !r.is_finite() || r < 0.0 {
                return Err(Error::OutOfRange {
                    name,
                    value: r,
                    range: "[0, inf)".into(),
                });
            }
        }
        q.rate_b = rate_b;
        q.rate_e = rate_e;
        Ok(q)
    }

    pub fn pair(&self) -> &WiretapPair {
        &self.pair
    }

    pub fn aux(&self) -> Option<&DiscreteChannel> {
        self.aux.as_ref()
    }

    pub fn input(&self) -> &CostedInput {
        &self.input
    }

    pub fn x_costs(&self) -> &[f64] {
        &self.x_costs
    }

    pub fn gamma(&self) -> f64 {
        self.input.gamma()
    }

    pub fn rate_b(&self) -> f64 {
        self.rate_b
    }

    pub fn rate_e(&self) -> f64 {
        self.rate_e
    }

    /// Law of `X` seen by the channels.
    pub fn induced_x(&self) -> Vec<f64> {
        match &self.aux {
            Some(a) => induced_input(self.input.probs(), a).expect("dimensions checked"),
            None => self.input.probs().to_vec(),
        }
    }

    /// Effective pair `(W_B⁺, W_E⁺)` seen from `V`.
    pub fn effective_pair(&self) -> WiretapPair {
        match &self.aux {
            Some(a) => self.pair.concatenate(a).expect("dimensions checked"),
            None => self.pair.clone(),
        }
    }

    /// `I(q, W_B⁺)`.
    pub fn bob_information(&self) -> f64 {
        mutual_information(self.input.probs(), self.effective_pair().bob()).expect("valid input")
    }

    /// `I(q, W_E⁺)`.
    pub fn eve_information(&self) -> f64 {
        mutual_information(self.input.probs(), self.effective_pair().eve()).expect("valid input")
    }

    /// Caps `(r_max, s_max)`; zero when all costs coincide (tilt cannot help).
    pub fn tilt_caps(&self) -> (f64, f64) {
        let hi = self.x_costs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = self.x_costs.iter().copied().fold(f64::INFINITY, f64::min);
        let spread = hi - lo;
        if spread > 0.0 {
            (TILT_SPAN / spread, TILT_SPAN / spread)
        } else {
            (0.0, 0.0)
        }
    }

    pub fn phi_bob(&self, rho: f64, r: f64, s: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::OutOfRange {
                name: "rho",
                value: rho,
                range: "[0, 1]".into(),
            });
        }
        check_tilt(r, s)?;
        finite(self.phi(Side::Bob, 1.0 + rho, r, s), "phi_bob")
    }

    pub fn phi_eve(&self, rho: f64, r: f64, s: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::OutOfRange {
                name: "rho",
                value: rho,
                range: "[0, 1)".into(),
            });
        }
        check_tilt(r, s)?;
        finite(self.phi(Side::Eve, 1.0 - rho, r, s), "phi_eve")
    }

    /// `−ln Σ_y ( Σ_v q(v) e^{s(Γ−c̄(v))} [Σ_x W(y|x) P(x|v) e^{a r (Γ−c(x))}]^{1/a} )^a`
    /// with `a = 1+ρ` (Bob) or `1−ρ` (Eve), in the log domain.
    fn phi(&self, side: Side, a: f64, r: f64, s: f64) -> f64 {
        let t = &self.tables;
        let (ln_w, ny) = match side {
            Side::Bob => (&t.ln_bob, t.ny_bob),
            Side::Eve => (&t.ln_eve, t.ny_eve),
        };
        let inv_a = 1.0 / a;
        let mut outer = Lse::new();
        match &t.ln_aux {
            None => {
                let tilt = r + s;
                for y in 0..ny {
                    let mut mid = Lse::new();
                    for x in 0..t.nx {
                        mid.push(t.ln_q[x] + tilt * t.slack_x[x] + ln_w[x * ny + y] * inv_a);
                    }
                    outer.push(a * mid.value());
                }
            }
            Some(ln_aux) => {
                let ar = a * r;
                for y in 0..ny {
                    let mut mid = Lse::new();
                    for v in 0..t.nv {
                        let mut inner = Lse::new();
                        for x in 0..t.nx {
                            inner.push(ln_w[x * ny + y] + ln_aux[v * t.nx + x] + ar * t.slack_x[x]);
                        }
                        mid.push(t.ln_q[v] + s * t.slack_v[v] + inner.value() * inv_a);
                    }
                    outer.push(a * mid.value());
                }
            }
        }
        -outer.value()
    }

    /// `sup_{r,s}` of `phi` at fixed `rho`, returning `(value, r, s)`.
    fn best_tilt(&self, side: Side, a: f64) -> (f64, f64, f64) {
        let (r_max, s_max) = self.tilt_caps();
        if r_max == 0.0 && s_max == 0.0 {
            return (self.phi(side, a, 0.0, 0.0), 0.0, 0.0);
        }
        if self.aux.is_none() {
            let t_max = r_max + s_max;
            let (t, v) = scan_golden_max(
                &mut |t| self.phi(side, a, t, 0.0),
                0.0,
                t_max,
                SCAN,
                TILT_TOL * t_max.max(1.0),
            );
            let r = t.min(r_max);
            return (v, r, t - r);
        }
        let over_r = |s: f64| {
            scan_golden_max(
                &mut |r| self.phi(side, a, r, s),
                0.0,
                r_max,
                SCAN,
                TILT_TOL * r_max.max(1.0),
            )
        };
        let (s, _) = scan_golden_max(&mut |s| over_r(s).1, 0.0, s_max, SCAN, TILT_TOL * s_max.max(1.0));
        let (r, v) = over_r(s);
        (v, r, s)
    }

    /// `sup_{r,s≥0} phi_bob(ρ, r, s)` at fixed `ρ`.
    pub fn tilted_phi_bob(&self, rho: f64) -> Result<ExponentValue> {
        crate::error::check_range("rho", rho, 0.0, 1.0)?;
        let (v, r, s) = self.best_tilt(Side::Bob, 1.0 + rho);
        let v = finite(v, "phi_bob")?;
        Ok(ExponentValue { value: v, raw: v, rho, r, s })
    }

    /// `sup_{r,s≥0} phi_eve(ρ, r, s)` at fixed `ρ`.
    pub fn tilted_phi_eve(&self, rho: f64) -> Result<ExponentValue> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::OutOfRange {
                name: "rho",
                value: rho,
                range: "[0, 1)".into(),
            });
        }
        let (v, r, s) = self.best_tilt(Side::Eve, 1.0 - rho);
        let v = finite(v, "phi_eve")?;
        Ok(ExponentValue { value: v, raw: v, rho, r, s })
    }

    /// `F_c = sup_{ρ∈[0,1], r,s≥0} phi_bob − ρ(R_B+R_E)`, clamped at 0.
    pub fn reliability_function(&self) -> Result<ExponentValue> {
        let rate = self.rate_b + self.rate_e;
        let (rho, _) = scan_golden_max(
            &mut |rho| self.best_tilt(Side::Bob, 1.0 + rho).0 - rho * rate,
            0.0,
            1.0,
            SCAN,
            RHO_TOL,
        );
        let (v, r, s) = self.best_tilt(Side::Bob, 1.0 + rho);
        let raw = finite(v - rho * rate, "reliability function")?;
        Ok(ExponentValue {
            value: raw.max(0.0),
            raw,
            rho,
            r,
            s,
        })
    }

    /// `H_c = sup_{ρ∈(0,1), r,s≥0} phi_eve + ρ R_E`, clamped at 0.
    pub fn secrecy_function(&self) -> Result<ExponentValue> {
        let rate = self.rate_e;
        let (rho, _) = scan_golden_max(
            &mut |rho| self.best_tilt(Side::Eve, 1.0 - rho).0 + rho * rate,
            RHO_EDGE,
            1.0 - RHO_EDGE,
            SCAN,
            RHO_TOL,
        );
        let (v, r, s) = self.best_tilt(Side::Eve, 1.0 - rho);
        let raw = finite(v + rho * rate, "secrecy function")?;
        Ok(ExponentValue {
            value: raw.max(0.0),
            raw,
            rho,
            r,
            s,
        })
    }

    /// Sum rate where `F_c` reaches 0, located by bisection on raw positivity.
    pub fn reliability_zero_rate(&self) -> Result<f64> {
        let hi = (self.pair.bob().num_outputs() as f64).ln() + 1.0;
        let mut err = None;
        let r = bisect_predicate(
            |rate| match self.with_rates(rate, 0.0).and_then(|q| q.reliability_function()) {
                Ok(v) => v.raw > POSITIVE_EXPONENT,
                Err(e) => {
                    err = Some(e);
                    false
                }
            },
            0.0,
            hi,
            1e-11,
        );
        err.map_or(Ok(r), Err)
    }

    /// Largest `R_E` where `H_c` is still 0, located by bisection on raw positivity.
    pub fn secrecy_zero_rate(&self) -> Result<f64> {
        let hi = (self.pair.eve().num_outputs() as f64).ln() + 1.0;
        let mut err = None;
        let r = bisect_predicate(
            |rate| match self.with_rates(self.rate_b, rate).and_then(|q| q.secrecy_function()) {
                Ok(v) => v.raw <= POSITIVE_EXPONENT,
                Err(e) => {
                    err = Some(e);
                    true
                }
            },
            0.0,
            hi,
            1e-11,
        );
        err.map_or(Ok(r), Err)
    }

    fn curve_meta(&self) -> BTreeMap<String, String> {
        let (r_max, s_max) = self.tilt_caps();
        let mut m = BTreeMap::new();
        m.insert("q".into(), fmt_vec(self.input.probs()));
        m.insert("costs".into(), fmt_vec(&self.x_costs));
        m.insert("gamma".into(), format!("{}", self.gamma()));
        m.insert("bob".into(), fmt_matrix(self.pair.bob()));
        m.insert("eve".into(), fmt_matrix(self.pair.eve()));
        if let Some(a) = &self.aux {
            m.insert("aux".into(), fmt_matrix(a));
        }
        m.insert("r_max".into(), format!("{r_max}"));
        m.insert("s_max".into(), format!("{s_max}"));
        m.insert("units".into(), "nats/use".into());
        m
    }

    /// `F_c` sampled at the given sum rates `R_B + R_E`.
    pub fn reliability_curve(&self, sum_rates: &[f64]) -> Result<ExponentCurve> {
        let mut pts = Vec::with_capacity(sum_rates.len());
        for &r in sum_rates {
            let v = self.with_rates(r, 0.0)?.reliability_function()?;
            pts.push(point(r, v));
        }
        ExponentCurve::new("F_c", self.curve_meta(), pts)
    }

    /// `H_c` sampled at the given `R_E`.
    pub fn secrecy_curve(&self, rates_e: &[f64]) -> Result<ExponentCurve> {
        let mut pts = Vec::with_capacity(rates_e.len());
        for &r in rates_e {
            let v = self.with_rates(self.rate_b, r)?.secrecy_function()?;
            pts.push(point(r, v));
        }
        ExponentCurve::new("H_c", self.curve_meta(), pts)
    }
}

fn point(rate: f64, v: ExponentValue) -> CurvePoint {
    CurvePoint {
        rate,
        exponent: v.value,
        raw: Some(v.raw),
        argmax_rho: Some(v.rho),
        argmax_r: Some(v.r),
        argmax_s: Some(v.s),
    }
}

pub(crate) fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("[{}]", parts.join(" "))
}

fn fmt_matrix(w: &DiscreteChannel) -> String {
    let rows: Vec<String> = w.rows().iter().map(|r| fmt_vec(r)).collect();
    format!("[{}]", rows.join(" "))
}

fn check_tilt(r: f64, s: f64) -> Result<()> {
    for (name, v) in [("r", r), ("s", s)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::OutOfRange {
                name,
                value: v,
                range: "[0, inf)".into(),
            });
        }
    }
    Ok(())
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!("{what} evaluated to {v}")))
    }
}

impl Tables {
    fn build(
        pair: &WiretapPair,
        aux: Option<&DiscreteChannel>,
        input: &CostedInput,
        x_costs: &[f64],
    ) -> Self {
        let gamma = input.gamma();
        let ln_mat = |w: &DiscreteChannel| -> Vec<f64> {
            (0..w.num_inputs())
                .flat_map(|x| w.row(x).iter().map(|&p| ln0(p)).collect::<Vec<_>>())
                .collect()
        };
        Tables {
            nv: input.probs().len(),
            nx: x_costs.len(),
            ln_q: input.probs().iter().map(|&p| ln0(p)).collect(),
            slack_v: input.costs().iter().map(|c| gamma - c).collect(),
            slack_x: x_costs.iter().map(|c| gamma - c).collect(),
            ln_aux: aux.map(ln_mat),
            ln_bob: ln_mat(pair.bob()),
            ny_bob: pair.bob().num_outputs(),
            ln_eve: ln_mat(pair.eve()),
            ny_eve: pair.eve().num_outputs(),
        }
    }
}

/// Streaming log-sum-exp accumulator.
struct Lse {
    max: f64,
    sum: f64,
}

impl Lse {
    #[inline]
    fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    #[inline]
    fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.sum += (x - self.max).exp();
        } else {
            self.sum = self.sum * (self.max - x).exp() + 1.0;
            self.max = x;
        }
    }

    #[inline]
    fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn fig5(rate_b: f64, rate_e: f64) -> ExponentQuery {
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

    #[test]
    fn phi_vanishes_at_rho_zero() {
        let q = fig5(0.0, 0.0);
        assert_abs_diff_eq!(q.phi_bob(0.0, 0.0, 0.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.phi_eve(0.0, 0.0, 0.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.phi_eve(1e-12, 0.0, 0.0).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn phi_rejects_bad_arguments() {
        let q = fig5(0.0, 0.0);
        assert!(q.phi_eve(1.0, 0.0, 0.0).is_err());
        assert!(q.phi_bob(1.5, 0.0, 0.0).is_err());
        assert!(q.phi_bob(0.5, -1.0, 0.0).is_err());
        assert!(q.phi_bob(0.5, 0.0, f64::NAN).is_err());
    }

    #[test]
    fn bob_phi_literal_two_term() {
        // BSC(0.1), q=(0.6,0.4), rho=1, no tilt: -ln Σ_y (Σ_x q √W)^2
        let q = fig5(0.0, 0.0);
        let lit = {
            let a = 0.6 * 0.9f64.sqrt() + 0.4 * 0.1f64.sqrt();
            let b = 0.6 * 0.1f64.sqrt() + 0.4 * 0.9f64.sqrt();
            -(a * a + b * b).ln()
        };
        assert_abs_diff_eq!(q.phi_bob(1.0, 0.0, 0.0).unwrap(), lit, epsilon = 1e-14);
    }

    #[test]
    fn identity_aux_matches_plain() {
        let plain = fig5(0.1, 0.05);
        let with_id = ExponentQuery::new(
            WiretapPair::bsc(0.1, 0.3).unwrap(),
            Some(DiscreteChannel::identity(2)),
            vec![0.6, 0.4],
            vec![1.0, 2.0],
            1.4,
            0.1,
            0.05,
        )
        .unwrap();
        for &(rho, r, s) in &[(0.3, 0.0, 0.0), (0.7, 0.4, 1.2), (1.0, 3.0, 0.5)] {
            assert_abs_diff_eq!(
                plain.phi_bob(rho, r, s).unwrap(),
                with_id.phi_bob(rho, r, s).unwrap(),
                epsilon = 1e-12
            );
            let re = rho.min(0.9);
            assert_abs_diff_eq!(
                plain.phi_eve(re, r, s).unwrap(),
                with_id.phi_eve(re, r, s).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn zero_at_information_rates() {
        let q = fig5(0.0, 0.0);
        let ib = q.bob_information();
        let ie = q.eve_information();
        assert!(q.with_rates(ib, 0.0).unwrap().reliability_function().unwrap().value < 1e-8);
        assert!(q.with_rates(0.0, ie).unwrap().secrecy_function().unwrap().value < 1e-8);
        assert!(q.with_rates(ib * 0.9, 0.0).unwrap().reliability_function().unwrap().value > 1e-6);
    }

    #[test]
    fn rejects_cost_violating_input() {
        let e = ExponentQuery::new(
            WiretapPair::bsc(0.1, 0.3).unwrap(),
            None,
            vec![0.5, 0.5],
            vec![1.0, 2.0],
            1.4,
            0.0,
            0.0,
        );
        assert!(matches!(e, Err(Error::CostViolation { .. })));
    }
}
