//! Discretized Poisson wiretap channel: closed-form per-second exponents,
//! parametric rate maps, secrecy capacity and concatenation.
//!
//! Peak rates `A`, dark currents `λ`, `s = λ/A`, duty cycle `Γ`. Everything
//! public is per second; `Δ` only appears in [`discretize`].

use std::collections::BTreeMap;

use serde::Serialize;

use crate::channel::{DiscreteChannel, WiretapPair};
use crate::curve::{CurvePoint, ExponentCurve};
use crate::error::{check_range, Error, Result};
use crate::numeric::{bisect, ln0, xlnx};

pub const Q_BRACKET: (f64, f64) = (1e-12, 1.0 - 1e-12);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonWiretapParams {
    a_y: f64,
    a_z: f64,
    lambda_y: f64,
    lambda_z: f64,
    gamma: f64,
}

impl PoissonWiretapParams {
    pub fn new(a_y: f64, a_z: f64, lambda_y: f64, lambda_z: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("A_y", a_y), ("A_z", a_z)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    range: "(0, inf)".into(),
                });
            }
        }
        for (name, v) in [("lambda_y", lambda_y), ("lambda_z", lambda_z)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    range: "[0, inf)".into(),
                });
            }
        }
        check_range("gamma", gamma, 0.0, 1.0)?;
        let p = Self {
            a_y,
            a_z,
            lambda_y,
            lambda_z,
            gamma,
        };
        let (sy, sz) = (p.s_y(), p.s_z());
        let s_tol = 1e-12 * sz.max(1.0);
        if a_y < a_z || sy > sz + s_tol || (a_y == a_z && (sy - sz).abs() <= s_tol) {
            return Err(Error::NotDegraded(format!(
                "need A_y >= A_z and s_y <= s_z with one strict; got A_y={a_y}, A_z={a_z}, s_y={sy}, s_z={sz}"
            )));
        }
        Ok(p)
    }

    pub fn a_y(&self) -> f64 {
        self.a_y
    }
    pub fn a_z(&self) -> f64 {
        self.a_z
    }
    pub fn lambda_y(&self) -> f64 {
        self.lambda_y
    }
    pub fn lambda_z(&self) -> f64 {
        self.lambda_z
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn s_y(&self) -> f64 {
        self.lambda_y / self.a_y
    }
    pub fn s_z(&self) -> f64 {
        self.lambda_z / self.a_z
    }

    fn meta(&self, q: f64) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("A_y".into(), format!("{}", self.a_y));
        m.insert("A_z".into(), format!("{}", self.a_z));
        m.insert("lambda_y".into(), format!("{}", self.lambda_y));
        m.insert("lambda_z".into(), format!("{}", self.lambda_z));
        m.insert("gamma".into(), format!("{}", self.gamma));
        m.insert("q".into(), format!("{q}"));
        m.insert("units".into(), "nats/s".into());
        m
    }
}

/// Auxiliary channel with `P(X=1|V=1) = a`, `P(X=1|V=0) = b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcatenationParams {
    a: f64,
    b: f64,
}

impl ConcatenationParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::OutOfRange {
                name: "a",
                value: a,
                range: "(0, 1]".into(),
            });
        }
        if !(0.0..1.0).contains(&b) {
            return Err(Error::OutOfRange {
                name: "b",
                value: b,
                range: "[0, 1)".into(),
            });
        }
        if a <= b {
            return Err(Error::OutOfRange {
                name: "a",
                value: a,
                range: format!("(b = {b}, 1]"),
            });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }

    /// The auxiliary channel as a matrix over `V = {0,1}`, `X = {0,1}`.
    pub fn channel(&self) -> DiscreteChannel {
        DiscreteChannel::new(vec![vec![1.0 - self.b, self.b], vec![1.0 - self.a, self.a]])
            .expect("valid rows")
    }
}

/// Binary pair with `W(1|0) = λΔ`, `W(1|1) = (A+λ)Δ`; costs `(0, 1)`.
pub fn discretize(params: &PoissonWiretapParams, delta: f64) -> Result<(WiretapPair, Vec<f64>, f64)> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::OutOfRange {
            name: "delta",
            value: delta,
            range: "(0, inf)".into(),
        });
    }
    let row = |a: f64, lambda: f64| -> Result<DiscreteChannel> {
        let p0 = lambda * delta;
        let p1 = (a + lambda) * delta;
        if p1 > 1.0 {
            return Err(Error::OutOfRange {
                name: "(A+lambda)*delta",
                value: p1,
                range: "[0, 1]".into(),
            });
        }
        DiscreteChannel::new(vec![vec![1.0 - p0, p0], vec![1.0 - p1, p1]])
    };
    let pair = WiretapPair::new(
        row(params.a_y, params.lambda_y)?,
        row(params.a_z, params.lambda_z)?,
    )?;
    Ok((pair, vec![0.0, 1.0], params.gamma))
}

/// `s (1 + τ q)^a` written as `((1−q) s^{1/a} + q (1+s)^{1/a})^a`, plus the
/// derivative weights `w = (1−q) s^{1/a} / B`.
///
/// Returns `(T, D(w || (1−q, q)))`; then `dT/da = −T·D`.
fn tilted(s: f64, q: f64, a: f64) -> (f64, f64) {
    let u = 1.0 / a;
    // at a = 1 the base is exactly q + s
    let direct = a == 1.0;
    let l1 = ln0(1.0 - q) + u * ln0(s);
    let l2 = ln0(q) + u * (1.0 + s).ln();
    let m = l1.max(l2);
    if m == f64::NEG_INFINITY {
        return (0.0, 0.0);
    }
    let ln_b = m + ((l1 - m).exp() + (l2 - m).exp()).ln();
    let t = if direct { q + s } else { (a * ln_b).exp() };
    let mut d = 0.0;
    for (lw_num, lp) in [(l1, ln0(1.0 - q)), (l2, ln0(q))] {
        let lw = lw_num - ln_b;
        if lw > f64::NEG_INFINITY {
            d += lw.exp() * (lw - lp);
        }
    }
    (t, d.max(0.0))
}

fn check_q(params: &PoissonWiretapParams, q: f64) -> Result<()> {
    check_range("q", q, 0.0, 1.0)?;
    if q > params.gamma + 1e-12 {
        return Err(Error::CostViolation {
            expected: q,
            gamma: params.gamma,
        });
    }
    Ok(())
}

/// `E_B(ρ, q) = A_y [q + s_y − s_y (1 + τ_y q)^{1+ρ}]` per second.
pub fn reliability_exponent(params: &PoissonWiretapParams, q: f64, rho: f64) -> Result<f64> {
    check_q(params, q)?;
    check_range("rho", rho, 0.0, 1.0)?;
    Ok(e_b(params, q, rho))
}

fn e_b(p: &PoissonWiretapParams, q: f64, rho: f64) -> f64 {
    let s = p.s_y();
    p.a_y * (q + s - tilted(s, q, 1.0 + rho).0)
}

fn e_e(p: &PoissonWiretapParams, q: f64, rho: f64) -> f64 {
    let s = p.s_z();
    p.a_z * (q + s - tilted(s, q, 1.0 - rho).0)
}

/// `R(ρ) = dE_B/dρ`, the parametric sum rate.
pub fn reliability_rate(params: &PoissonWiretapParams, q: f64, rho: f64) -> Result<f64> {
    check_q(params, q)?;
    check_range("rho", rho, 0.0, 1.0)?;
    Ok(r_b(params, q, rho))
}

fn r_b(p: &PoissonWiretapParams, q: f64, rho: f64) -> f64 {
    let (t, d) = tilted(p.s_y(), q, 1.0 + rho);
    p.a_y * t * d
}

fn r_e(p: &PoissonWiretapParams, q: f64, rho: f64) -> f64 {
    let (t, d) = tilted(p.s_z(), q, 1.0 - rho);
    p.a_z * t * d
}

/// `E_E(ρ, q) = A_z [q + s_z − s_z (1 + τ_z q)^{1−ρ}]` per second, `ρ ∈ [0,1)`.
pub fn secrecy_exponent(params: &PoissonWiretapParams, q: f64, rho: f64) -> Result<f64> {
    check_q(params, q)?;
    check_rho_open(rho)?;
    Ok(e_e(params, q, rho))
}

/// `R_E(ρ) = −dE_E/dρ`.
pub fn secrecy_rate(params: &PoissonWiretapParams, q: f64, rho: f64) -> Result<f64> {
    check_q(params, q)?;
    check_rho_open(rho)?;
    Ok(r_e(params, q, rho))
}

fn check_rho_open(rho: f64) -> Result<()> {
    if (0.0..1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "rho",
            value: rho,
            range: "[0, 1)".into(),
        })
    }
}

/// Per-second mutual information `I(q, W)/Δ` of the discretized channel in the `Δ → 0` limit.
fn info_rate(a: f64, s: f64, q: f64) -> f64 {
    a * (-xlnx(q + s) + q * xlnx(1.0 + s) + (1.0 - q) * xlnx(s))
}

/// `h_B(q) = I(q, W_B)/Δ`.
pub fn bob_information_rate(params: &PoissonWiretapParams, q: f64) -> f64 {
    info_rate(params.a_y, params.s_y(), q)
}

/// `h_E(q) = I(q, W_E)/Δ`.
pub fn eve_information_rate(params: &PoissonWiretapParams, q: f64) -> f64 {
    info_rate(params.a_z, params.s_z(), q)
}

/// `σ(q)/Δ = h_B(q) − h_E(q)`.
pub fn sigma(params: &PoissonWiretapParams, q: f64) -> f64 {
    bob_information_rate(params, q) - eve_information_rate(params, q)
}

/// `σ'(q)/Δ`.
pub fn sigma_prime(params: &PoissonWiretapParams, q: f64) -> f64 {
    let d = |a: f64, s: f64| a * (-(q + s).ln() - 1.0 + (1.0 + s) * (1.0 + s).ln() - xlnx(s));
    d(params.a_y, params.s_y()) - d(params.a_z, params.s_z())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonCapacity {
    /// Unconstrained maximizer of `σ`.
    pub q_star: f64,
    /// `min(q*, Γ)`
    pub q_gamma: f64,
    /// `|σ'(q*)|` per second at the returned root.
    pub residual: f64,
    /// nats per second
    pub capacity: f64,
}

/// Secrecy capacity per second via bisection on `σ'(q) = 0`.
pub fn capacity(params: &PoissonWiretapParams) -> Result<PoissonCapacity> {
    let (lo, hi) = Q_BRACKET;
    let f = |q: f64| sigma_prime(params, q);
    if !(f(lo) > 0.0 && f(hi) < 0.0) {
        return Err(Error::Solver(format!(
            "sigma' does not change sign on [{lo}, {hi}]: {} .. {}",
            f(lo),
            f(hi)
        )));
    }
    let q_star = bisect(f, lo, hi, 0.0, 200)?;
    let q_gamma = q_star.min(params.gamma);
    Ok(PoissonCapacity {
        q_star,
        q_gamma,
        residual: f(q_star).abs(),
        capacity: sigma(params, q_gamma),
    })
}

/// `q* = (1+s)^{1+s} / (e s^s) − s` when `s_y = s_z = s`.
pub fn worst_case_q_star(s: f64) -> f64 {
    ((1.0 + s) * (1.0 + s).ln() - 1.0 - xlnx(s)).exp() - s
}

/// `f_B(R) = max_ρ E_B(ρ) − ρR` at a given sum rate.
pub fn reliability_at(params: &PoissonWiretapParams, q: f64, rate: f64) -> Result<CurvePoint> {
    check_q(params, q)?;
    if !rate.is_finite() || rate < 0.0 {
        return Err(Error::OutOfRange {
            name: "rate",
            value: rate,
            range: "[0, inf)".into(),
        });
    }
    let r0 = r_b(params, q, 0.0);
    let r1 = r_b(params, q, 1.0);
    let rho = if rate >= r0 {
        0.0
    } else if rate <= r1 {
        1.0
    } else {
        if r1 >= r0 {
            return Err(Error::Solver("reliability rate map is not decreasing".into()));
        }
        bisect(|rho| r_b(params, q, rho) - rate, 0.0, 1.0, 1e-13, 200)?
    };
    let e = (e_b(params, q, rho) - rho * rate).max(0.0);
    Ok(CurvePoint::new(rate, e).with_rho(rho))
}

/// `f_E(R_E) = max_ρ E_E(ρ) + ρR_E`.
pub fn secrecy_at(params: &PoissonWiretapParams, q: f64, rate: f64) -> Result<CurvePoint> {
    check_q(params, q)?;
    if !rate.is_finite() || rate < 0.0 {
        return Err(Error::OutOfRange {
            name: "rate",
            value: rate,
            range: "[0, inf)".into(),
        });
    }
    let r0 = r_e(params, q, 0.0);
    if rate <= r0 {
        return Ok(CurvePoint::new(rate, 0.0).with_rho(0.0));
    }
    // R_E(ρ) grows without bound as ρ → 1
    let mut hi = 0.5;
    while r_e(params, q, hi) < rate && hi < 1.0 - 1e-15 {
        hi = 0.5 * (1.0 + hi);
    }
    if r_e(params, q, hi) < rate {
        return Err(Error::OutOfRange {
            name: "rate",
            value: rate,
            range: "beyond the representable secrecy rate map".into(),
        });
    }
    let rho = bisect(|rho| r_e(params, q, rho) - rate, 0.0, hi, 1e-13, 200)?;
    let e = (e_e(params, q, rho) + rho * rate).max(0.0);
    Ok(CurvePoint::new(rate, e).with_rho(rho))
}

/// Parametric reliability curve, with the `ρ = 1` straight line below `R(1)`.
pub fn reliability_curve(params: &PoissonWiretapParams, q: f64, points: usize) -> Result<ExponentCurve> {
    check_q(params, q)?;
    let points = points.max(4);
    let n_line = points / 4;
    let n_par = points - n_line;
    let r1 = r_b(params, q, 1.0);
    let mut pts = Vec::with_capacity(points);
    for i in 0..n_line {
        let rate = r1 * i as f64 / n_line as f64;
        pts.push(CurvePoint::new(rate, e_b(params, q, 1.0) - rate).with_rho(1.0));
    }
    for i in 0..n_par {
        let rho = 1.0 - i as f64 / (n_par - 1) as f64;
        let rate = r_b(params, q, rho);
        let e = (e_b(params, q, rho) - rho * rate).max(0.0);
        pts.push(CurvePoint::new(rate, e).with_rho(rho));
    }
    ExponentCurve::new("poisson_reliability", params.meta(q), pts)
}

/// Parametric secrecy curve over `ρ ∈ [0, rho_max]`.
pub fn secrecy_curve(
    params: &PoissonWiretapParams,
    q: f64,
    points: usize,
    rho_max: f64,
) -> Result<ExponentCurve> {
    check_q(params, q)?;
    check_rho_open(rho_max)?;
    let points = points.max(2);
    let pts = (0..points)
        .map(|i| {
            let rho = rho_max * i as f64 / (points - 1) as f64;
            let rate = r_e(params, q, rho);
            CurvePoint::new(rate, (e_e(params, q, rho) + rho * rate).max(0.0)).with_rho(rho)
        })
        .collect();
    ExponentCurve::new("poisson_secrecy", params.meta(q), pts)
}

/// Parameters of `(W_B⁺, W_E⁺)` after prepending the `(a, b)` channel, and `Γ⁺`.
pub fn concatenate_params(
    params: &PoissonWiretapParams,
    conc: &ConcatenationParams,
) -> Result<PoissonWiretapParams> {
    let (a, b) = (conc.a, conc.b);
    if params.gamma < b {
        return Err(Error::OutOfRange {
            name: "gamma",
            value: params.gamma,
            range: format!("[b = {b}, 1]"),
        });
    }
    let g = ((params.gamma - b) / (a - b)).min(1.0);
    PoissonWiretapParams::new(
        (a - b) * params.a_y,
        (a - b) * params.a_z,
        b * params.a_y + params.lambda_y,
        b * params.a_z + params.lambda_z,
        g,
    )
}

pub fn concatenated_capacity(
    params: &PoissonWiretapParams,
    conc: &ConcatenationParams,
) -> Result<PoissonCapacity> {
    capacity(&concatenate_params(params, conc)?)
}

/// Reliability and secrecy curves of the concatenated channel at `q ≤ Γ⁺`.
pub fn concatenated_curves(
    params: &PoissonWiretapParams,
    conc: &ConcatenationParams,
    q: f64,
    points: usize,
    rho_max: f64,
) -> Result<(ExponentCurve, ExponentCurve)> {
    let p = concatenate_params(params, conc)?;
    let mut rel = reliability_curve(&p, q, points)?;
    let mut sec = secrecy_curve(&p, q, points, rho_max)?;
    for c in [&mut rel, &mut sec] {
        c.meta.insert("concat_a".into(), format!("{}", conc.a));
        c.meta.insert("concat_b".into(), format!("{}", conc.b));
    }
    Ok((rel, sec))
}
