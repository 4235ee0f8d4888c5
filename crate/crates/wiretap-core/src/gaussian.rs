//! Gaussian wiretap channel: secrecy capacity and four exponent formulas.
//!
//! All functions come in two layers: plain functions of the SNR `A` (and `ρ`
//! or `β`), and wrappers taking [`GaussianWiretapParams`] and a rate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::curve::{linspace, CurvePoint, ExponentCurve};
use crate::error::{Error, Result};
use crate::numeric::bisect;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianWiretapParams {
    a_y: f64,
    a_z: f64,
    sigma_y: f64,
    sigma_z: f64,
    gamma: f64,
}

impl GaussianWiretapParams {
    pub fn new(a_y: f64, a_z: f64, sigma_y: f64, sigma_z: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [
            ("A_y", a_y),
            ("A_z", a_z),
            ("sigma_y", sigma_y),
            ("sigma_z", sigma_z),
            ("gamma", gamma),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    range: "(0, inf)".into(),
                });
            }
        }
        if sigma_y / a_y > sigma_z / a_z {
            return Err(Error::NotDegraded(format!(
                "sigma_y/A_y = {} exceeds sigma_z/A_z = {}",
                sigma_y / a_y,
                sigma_z / a_z
            )));
        }
        Ok(Self {
            a_y,
            a_z,
            sigma_y,
            sigma_z,
            gamma,
        })
    }

    /// `A_B = A_y² Γ / σ_y²`
    pub fn snr_bob(&self) -> f64 {
        self.a_y * self.a_y * self.gamma / (self.sigma_y * self.sigma_y)
    }

    /// `A_E = A_z² Γ / σ_z²`
    pub fn snr_eve(&self) -> f64 {
        self.a_z * self.a_z * self.gamma / (self.sigma_z * self.sigma_z)
    }

    /// `½ ln(1 + A_B)`
    pub fn bob_capacity(&self) -> f64 {
        0.5 * self.snr_bob().ln_1p()
    }

    /// `½ ln(1 + A_E)`
    pub fn eve_capacity(&self) -> f64 {
        0.5 * self.snr_eve().ln_1p()
    }

    fn meta(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("A_y".into(), format!("{}", self.a_y));
        m.insert("A_z".into(), format!("{}", self.a_z));
        m.insert("sigma_y".into(), format!("{}", self.sigma_y));
        m.insert("sigma_z".into(), format!("{}", self.sigma_z));
        m.insert("gamma".into(), format!("{}", self.gamma));
        m.insert("A_B".into(), format!("{}", self.snr_bob()));
        m.insert("A_E".into(), format!("{}", self.snr_eve()));
        m.insert("units".into(), "nats/use".into());
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// The `(1+ρ)`-tilted bound for reliability, the same-form bound for secrecy.
    Tilted,
    /// Gallager's Gaussian-input bound for reliability, its `ρ → −ρ` mirror for secrecy.
    Gallager,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tilted" => Ok(Self::Tilted),
            "gallager" => Ok(Self::Gallager),
            other => Err(Error::Parse(format!("unknown variant `{other}` (tilted, gallager)"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Tilted => "tilted",
            Self::Gallager => "gallager",
        })
    }
}

/// `½ ln(1 + A_B) − ½ ln(1 + A_E)`
pub fn capacity(params: &GaussianWiretapParams) -> f64 {
    params.bob_capacity() - params.eve_capacity()
}

/// `ρ² A / (2(1+ρ)(1+ρ+A))`; with `ρ → −ρ` this is the Gallager-type secrecy exponent.
pub fn tilted_exponent(a: f64, rho: f64) -> f64 {
    rho * rho * a / (2.0 * (1.0 + rho) * (1.0 + rho + a))
}

/// `½ ln(1 + A/(1+ρ)) − ρA / (2(1+ρ)(1+ρ+A))`
pub fn tilted_rate(a: f64, rho: f64) -> f64 {
    0.5 * (a / (1.0 + rho)).ln_1p() - rho * a / (2.0 * (1.0 + rho) * (1.0 + rho + a))
}

/// `ρ² A / (2(1−ρ)(1−ρ+A))`
pub fn gallager_type_secrecy_exponent(a: f64, rho: f64) -> f64 {
    rho * rho * a / (2.0 * (1.0 - rho) * (1.0 - rho + a))
}

/// `½ ln(1 + A/(1−ρ)) + ρA / (2(1−ρ)(1−ρ+A))`
pub fn gallager_type_secrecy_rate(a: f64, rho: f64) -> f64 {
    0.5 * (a / (1.0 - rho)).ln_1p() + rho * a / (2.0 * (1.0 - rho) * (1.0 - rho + a))
}

/// `A/(4β)[(β+1) − (β−1)√(1 + 4β/(A(β−1)))] + ½ ln[β − A(β−1)/2 · (√(…) − 1)]`.
///
/// Gallager's Gaussian exponent at `β = e^{2R}` and, with Eve's SNR, the
/// same-form secrecy exponent at `β = e^{2R_E}`. Requires `β > 1`.
pub fn beta_form(a: f64, beta: f64) -> f64 {
    let sq = (1.0 + 4.0 * beta / (a * (beta - 1.0))).sqrt();
    a / (4.0 * beta) * ((beta + 1.0) - (beta - 1.0) * sq)
        + 0.5 * (beta - a * (beta - 1.0) / 2.0 * (sq - 1.0)).ln()
}

/// `R_{H,c} = ½ ln(1 + A/2) − A/(4(2+A))`
pub fn critical_rate_h(a: f64) -> f64 {
    0.5 * (a / 2.0).ln_1p() - a / (4.0 * (2.0 + a))
}

/// `R_{G,c} = ½ ln[½ + A/4 + ½ √(1 + A²/4)]`
pub fn critical_rate_g(a: f64) -> f64 {
    0.5 * (0.5 + a / 4.0 + 0.5 * (1.0 + a * a / 4.0).sqrt()).ln()
}

/// `(R_{H,c}, R_{G,c})` at Bob's SNR.
pub fn critical_rates(params: &GaussianWiretapParams) -> (f64, f64) {
    let a = params.snr_bob();
    (critical_rate_h(a), critical_rate_g(a))
}

fn check_reliability_rate(params: &GaussianWiretapParams, rate: f64) -> Result<()> {
    let c = params.bob_capacity();
    if !rate.is_finite() || rate < 0.0 || rate > c {
        return Err(Error::OutOfRange {
            name: "rate",
            value: rate,
            range: format!("[0, {c}]"),
        });
    }
    Ok(())
}

fn check_secrecy_rate(params: &GaussianWiretapParams, rate: f64) -> Result<()> {
    let lo = params.eve_capacity();
    if !rate.is_finite() || rate < lo {
        return Err(Error::OutOfRange {
            name: "rate_e",
            value: rate,
            range: format!("[{lo}, inf)"),
        });
    }
    let beta = (2.0 * rate).exp();
    if !(beta.is_finite() && beta > 1.0) {
        return Err(Error::OutOfRange {
            name: "rate_e",
            value: rate,
            range: "beta = e^(2 R_E) must be finite and above 1".into(),
        });
    }
    Ok(())
}

/// Reliability exponent from the `(1+ρ)`-tilted bound; parameter `ρ` returned alongside.
pub fn reliability_tilted_with_rho(params: &GaussianWiretapParams, rate: f64) -> Result<(f64, f64)> {
    check_reliability_rate(params, rate)?;
    let a = params.snr_bob();
    let r_hc = critical_rate_h(a);
    if rate < r_hc {
        return Ok((0.5 * (a / 2.0).ln_1p() - rate, 1.0));
    }
    let (r0, r1) = (tilted_rate(a, 0.0), tilted_rate(a, 1.0));
    if r0 <= r1 {
        return Err(Error::Solver("rate map is not decreasing in rho".into()));
    }
    let rho = bisect(|rho| tilted_rate(a, rho) - rate, 0.0, 1.0, 1e-12, 200)?;
    Ok((tilted_exponent(a, rho), rho))
}

pub fn reliability_tilted(params: &GaussianWiretapParams, rate: f64) -> Result<f64> {
    reliability_tilted_with_rho(params, rate).map(|v| v.0)
}

/// Gallager's reliability exponent with Gaussian inputs.
pub fn reliability_gallager(params: &GaussianWiretapParams, rate: f64) -> Result<f64> {
    check_reliability_rate(params, rate)?;
    let a = params.snr_bob();
    if rate >= params.bob_capacity() {
        return Ok(0.0);
    }
    if rate >= critical_rate_g(a) {
        return Ok(beta_form(a, (2.0 * rate).exp()).max(0.0));
    }
    Ok(gallager_low_rate(a, rate))
}

/// Straight-line part below `R_{G,c}`.
pub fn gallager_low_rate(a: f64, rate: f64) -> f64 {
    let beta = 0.5 * (1.0 + a / 2.0 + (1.0 + a * a / 4.0).sqrt());
    1.0 - beta + a / 2.0 + 0.5 * (beta - a / 2.0).ln() + 0.5 * beta.ln() - rate
}

/// Secrecy exponent of the same `β`-form, `β = e^{2R_E}`.
pub fn secrecy_tilted(params: &GaussianWiretapParams, rate_e: f64) -> Result<f64> {
    check_secrecy_rate(params, rate_e)?;
    let a = params.snr_eve();
    if rate_e == params.eve_capacity() {
        return Ok(0.0);
    }
    Ok(beta_form(a, (2.0 * rate_e).exp()).max(0.0))
}

/// Gallager-type secrecy exponent; parameter `ρ` returned alongside.
pub fn secrecy_gallager_type_with_rho(params: &GaussianWiretapParams, rate_e: f64) -> Result<(f64, f64)> {
    check_secrecy_rate(params, rate_e)?;
    let a = params.snr_eve();
    if rate_e == params.eve_capacity() {
        return Ok((0.0, 0.0));
    }
    let mut hi = 0.5;
    while gallager_type_secrecy_rate(a, hi) < rate_e && hi < 1.0 - 1e-15 {
        hi = 0.5 * (1.0 + hi);
    }
    if gallager_type_secrecy_rate(a, 0.0) >= gallager_type_secrecy_rate(a, hi) {
        return Err(Error::Solver("secrecy rate map is not increasing in rho".into()));
    }
    let rho = bisect(|rho| gallager_type_secrecy_rate(a, rho) - rate_e, 0.0, hi, 1e-12, 200)?;
    Ok((gallager_type_secrecy_exponent(a, rho), rho))
}

pub fn secrecy_gallager_type(params: &GaussianWiretapParams, rate_e: f64) -> Result<f64> {
    secrecy_gallager_type_with_rho(params, rate_e).map(|v| v.0)
}

/// Reliability curve on `points` rates spanning `[0, ½ ln(1+A_B)]`.
pub fn reliability_curve(params: &GaussianWiretapParams, variant: Variant, points: usize) -> Result<ExponentCurve> {
    let rates = linspace(0.0, params.bob_capacity(), points.max(2));
    let mut pts = Vec::with_capacity(rates.len());
    for r in rates {
        pts.push(match variant {
            Variant::Tilted => {
                let (e, rho) = reliability_tilted_with_rho(params, r)?;
                CurvePoint::new(r, e).with_rho(rho)
            }
            Variant::Gallager => CurvePoint::new(r, reliability_gallager(params, r)?),
        });
    }
    let mut meta = params.meta();
    meta.insert("variant".into(), variant.to_string());
    ExponentCurve::new("gaussian_reliability", meta, pts)
}

/// Secrecy curve on `points` rates spanning `[½ ln(1+A_E), rate_max]`.
pub fn secrecy_curve(
    params: &GaussianWiretapParams,
    variant: Variant,
    points: usize,
    rate_max: f64,
) -> Result<ExponentCurve> {
    let lo = params.eve_capacity();
    if !(rate_max > lo) {
        return Err(Error::OutOfRange {
            name: "rate_max",
            value: rate_max,
            range: format!("({lo}, inf)"),
        });
    }
    let mut pts = Vec::new();
    for r in linspace(lo, rate_max, points.max(2)) {
        pts.push(match variant {
            Variant::Tilted => CurvePoint::new(r, secrecy_tilted(params, r)?),
            Variant::Gallager => {
                let (e, rho) = secrecy_gallager_type_with_rho(params, r)?;
                CurvePoint::new(r, e).with_rho(rho)
            }
        });
    }
    let mut meta = params.meta();
    meta.insert("variant".into(), variant.to_string());
    ExponentCurve::new("gaussian_secrecy", meta, pts)
}
