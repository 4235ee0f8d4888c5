//! Sampled exponent curves, their CSV/JSON encodings and shape checks.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lowest exponent accepted in a curve; clamping leaves at most rounding noise below 0.
pub const EXPONENT_FLOOR: f64 = -1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub rate: f64,
    pub exponent: f64,
    /// Unclamped optimizer value, when the exponent was clamped at 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<f64>,
    #[serde(default)]
    pub argmax_rho: Option<f64>,
    #[serde(default)]
    pub argmax_r: Option<f64>,
    #[serde(default)]
    pub argmax_s: Option<f64>,
}

impl CurvePoint {
    pub fn new(rate: f64, exponent: f64) -> Self {
        Self {
            rate,
            exponent,
            raw: None,
            argmax_rho: None,
            argmax_r: None,
            argmax_s: None,
        }
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.argmax_rho = Some(rho);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentCurve {
    /// e.g. `F_c`, `H_c`, `poisson_reliability`.
    pub function: String,
    pub meta: BTreeMap<String, String>,
    points: Vec<CurvePoint>,
}

impl ExponentCurve {
    pub fn new(
        function: impl Into<String>,
        meta: BTreeMap<String, String>,
        points: Vec<CurvePoint>,
    ) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if !p.rate.is_finite() || !p.exponent.is_finite() {
                return Err(Error::NonFinite(format!("curve point {i}")));
            }
            if p.exponent < EXPONENT_FLOOR {
                return Err(Error::OutOfRange {
                    name: "exponent",
                    value: p.exponent,
                    range: format!("[{EXPONENT_FLOOR}, inf)"),
                });
            }
            if i > 0 && p.rate <= points[i - 1].rate {
                return Err(Error::Parse(format!(
                    "rates not strictly increasing at point {i}"
                )));
            }
        }
        Ok(Self {
            function: function.into(),
            meta,
            points,
        })
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn rates(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.rate).collect()
    }

    pub fn exponents(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.exponent).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Piecewise-linear interpolation; `None` outside the sampled range.
    pub fn interpolate(&self, rate: f64) -> Option<f64> {
        let pts = &self.points;
        if pts.is_empty() || rate < pts[0].rate || rate > pts[pts.len() - 1].rate {
            return None;
        }
        let i = pts.partition_point(|p| p.rate < rate);
        if i < pts.len() && pts[i].rate == rate {
            return Some(pts[i].exponent);
        }
        let (a, b) = (pts[i - 1], pts[i]);
        let t = (rate - a.rate) / (b.rate - a.rate);
        Some(a.exponent + t * (b.exponent - a.exponent))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# function={}", self.function);
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}={v}");
        }
        out.push_str("rate,exponent,argmax_rho,argmax_r,argmax_s\n");
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
        for p in &self.points {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{},{},{}",
                p.rate,
                p.exponent,
                opt(p.argmax_rho),
                opt(p.argmax_r),
                opt(p.argmax_s)
            );
        }
        out
    }

    /// Parses the format written by [`to_csv`](Self::to_csv). `raw` values are not carried.
    pub fn from_csv_str(s: &str) -> Result<Self> {
        let mut function = String::new();
        let mut meta = BTreeMap::new();
        for line in s.lines().take_while(|l| l.starts_with('#')) {
            let body = line[1..].trim();
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad metadata line `{line}`")))?;
            if k == "function" {
                function = v.to_string();
            } else {
                meta.insert(k.to_string(), v.to_string());
            }
        }
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .has_headers(true)
            .from_reader(s.as_bytes());
        let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?;
        let expected = ["rate", "exponent", "argmax_rho", "argmax_r", "argmax_s"];
        if headers.iter().ne(expected.iter().copied()) {
            return Err(Error::Parse(format!("unexpected header {headers:?}")));
        }
        let num = |f: &str, col: &str| -> Result<f64> {
            f.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("{col}: {e}")))
        };
        let opt = |f: &str, col: &str| -> Result<Option<f64>> {
            if f.trim().is_empty() {
                Ok(None)
            } else {
                num(f, col).map(Some)
            }
        };
        let mut points = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            if rec.len() != 5 {
                return Err(Error::Parse(format!("row has {} fields", rec.len())));
            }
            points.push(CurvePoint {
                rate: num(&rec[0], "rate")?,
                exponent: num(&rec[1], "exponent")?,
                raw: None,
                argmax_rho: opt(&rec[2], "argmax_rho")?,
                argmax_r: opt(&rec[3], "argmax_r")?,
                argmax_s: opt(&rec[4], "argmax_s")?,
            });
        }
        Self::new(function, meta, points)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            function: String,
            #[serde(default)]
            meta: BTreeMap<String, String>,
            points: Vec<CurvePoint>,
        }
        let raw: Raw = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.function, raw.meta, raw.points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Trend {
    Increasing,
    Decreasing,
}

/// Largest violation of the monotone trend (0 when it holds).
pub fn monotone_violation(ys: &[f64], trend: Trend, strict: bool) -> f64 {
    let mut worst: f64 = 0.0;
    for w in ys.windows(2) {
        let step = match trend {
            Trend::Increasing => w[1] - w[0],
            Trend::Decreasing => w[0] - w[1],
        };
        let bad = if strict { step <= 0.0 } else { step < 0.0 };
        if bad {
            worst = worst.max(-step).max(if strict { f64::MIN_POSITIVE } else { 0.0 });
        }
    }
    worst
}

/// Most negative second difference, scaled to a uniform-grid second difference.
pub fn min_second_difference(xs: &[f64], ys: &[f64]) -> f64 {
    let mut worst = f64::INFINITY;
    for i in 1..xs.len().saturating_sub(1) {
        let s1 = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
        let s2 = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        let h = 0.5 * (xs[i + 1] - xs[i - 1]);
        worst = worst.min((s2 - s1) * h);
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeReport {
    pub monotone: bool,
    pub convex: bool,
    pub worst_monotone_violation: f64,
    pub worst_second_difference: f64,
}

impl ShapeReport {
    pub fn ok(&self) -> bool {
        self.monotone && self.convex
    }
}

/// Monotone (within `tol`) and convex (second differences ≥ −`tol`).
pub fn check_shape(curve: &ExponentCurve, trend: Trend, tol: f64) -> ShapeReport {
    let xs = curve.rates();
    let ys = curve.exponents();
    let mv = monotone_violation(&ys, trend, false);
    let sd = min_second_difference(&xs, &ys);
    ShapeReport {
        monotone: mv <= tol,
        convex: sd >= -tol,
        worst_monotone_violation: mv,
        worst_second_difference: sd,
    }
}

/// First rate in the common range where `a − b` changes sign, if any.
pub fn find_crossing(a: &ExponentCurve, b: &ExponentCurve) -> Option<f64> {
    let mut xs: Vec<f64> = a
        .rates()
        .into_iter()
        .chain(b.rates())
        .filter(|&x| a.interpolate(x).is_some() && b.interpolate(x).is_some())
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let diff = |x: f64| a.interpolate(x).unwrap() - b.interpolate(x).unwrap();
    for w in xs.windows(2) {
        let (d0, d1) = (diff(w[0]), diff(w[1]));
        if d0 == 0.0 {
            return Some(w[0]);
        }
        if d0.signum() != d1.signum() {
            return Some(w[0] + (w[1] - w[0]) * d0 / (d0 - d1));
        }
    }
    None
}

/// `n` evenly spaced points on `[a, b]` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
