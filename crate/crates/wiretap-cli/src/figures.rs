//! Data behind figures 2 through 13, each with the shape and ordering checks
//! the curves are expected to pass.

use serde::Serialize;
use wiretap_core::curve::{check_shape, find_crossing, linspace, Trend};
use wiretap_core::exponent::ExponentQuery;
use wiretap_core::gaussian::{self, GaussianWiretapParams, Variant};
use wiretap_core::poisson::{self, ConcatenationParams, PoissonWiretapParams};
use wiretap_core::tradeoff::{tradeoff_scenarios, Grids, Mechanism, TradeoffReport};
use wiretap_core::{ExponentCurve, WiretapPair};

use crate::error::CliError;
use crate::output::Named;

pub const FIGURE_IDS: std::ops::RangeInclusive<u8> = 2..=13;

/// Tolerance for monotonicity and second differences.
pub const SHAPE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure {
    pub id: u8,
    pub title: &'static str,
    pub curves: Vec<Named>,
    pub checks: Vec<FigureCheck>,
}

impl Figure {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&FigureCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// The binary BSC setup shared by figures 2 to 7.
pub fn bsc_query(rate_b: f64) -> wiretap_core::Result<ExponentQuery> {
    ExponentQuery::new(
        WiretapPair::bsc(0.1, 0.3)?,
        None,
        vec![0.6, 0.4],
        vec![1.0, 2.0],
        1.4,
        rate_b,
        0.0,
    )
}

pub fn poisson_params() -> wiretap_core::Result<PoissonWiretapParams> {
    PoissonWiretapParams::new(12.0, 5.0, 0.5, 1.5, 0.5)
}

pub const POISSON_Q: f64 = 0.38;
pub const POISSON_RHO_MAX: f64 = 0.9;

pub fn poisson_concat() -> wiretap_core::Result<ConcatenationParams> {
    ConcatenationParams::new(0.98, 0.02)
}

pub fn gaussian_params() -> wiretap_core::Result<GaussianWiretapParams> {
    GaussianWiretapParams::new(1.0, 0.5, 0.5, 0.8, 0.5)
}

struct Builder {
    id: u8,
    title: &'static str,
    curves: Vec<Named>,
    checks: Vec<FigureCheck>,
}

impl Builder {
    fn new(id: u8, title: &'static str) -> Self {
        Self {
            id,
            title,
            curves: Vec::new(),
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(FigureCheck {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn curve(&mut self, name: &str, trend: Trend, mut curve: ExponentCurve) {
        let shape = check_shape(&curve, trend, SHAPE_TOL);
        let what = match trend {
            Trend::Decreasing => "nonincreasing",
            Trend::Increasing => "nondecreasing",
        };
        self.check(
            format!("{name} {what}"),
            shape.monotone,
            format!("worst violation {:e}", shape.worst_monotone_violation),
        );
        self.check(
            format!("{name} convex"),
            shape.convex,
            format!("min second difference {:e}", shape.worst_second_difference),
        );
        curve.meta.insert("figure".into(), self.id.to_string());
        self.curves.push(Named::new(format!("fig{:02}_{name}", self.id), curve));
    }

    fn crossing(&mut self, a: &str, b: &str) {
        let find = |n: &str| {
            let stem = format!("fig{:02}_{n}", self.id);
            self.curves.iter().find(|c| c.name == stem).map(|c| c.curve.clone())
        };
        let hit = match (find(a), find(b)) {
            (Some(x), Some(y)) => find_crossing(&x, &y),
            _ => None,
        };
        self.check(
            format!("{a} crosses {b}"),
            hit.is_some(),
            hit.map_or("no crossing".into(), |r| format!("at rate {r:.6}")),
        );
    }

    fn tradeoff(&mut self, rep: &TradeoffReport) {
        for c in &rep.checks {
            self.check(c.name.clone(), c.passed, format!("worst slack {:e}", c.worst_slack));
        }
    }

    fn finish(self) -> Figure {
        Figure {
            id: self.id,
            title: self.title,
            curves: self.curves,
            checks: self.checks,
        }
    }
}

/// `points` rates per curve (at least 4).
pub fn figure(id: u8, points: usize) -> Result<Figure, CliError> {
    let points = points.max(4);
    let fig = match id {
        2 => rate_shift(points)?,
        3 => rate_exchange(points)?,
        4 => concatenation(points)?,
        5 => base_bsc(points)?,
        6 | 7 => cost_change(id, points)?,
        8 => poisson_base(points)?,
        9 => poisson_concatenated(points)?,
        10 => gaussian_reliability(points)?,
        11 => gaussian_secrecy(points)?,
        12 => gaussian_both(points)?,
        13 => gaussian_duality(points)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown figure {other}; valid ids are {}..={}",
                FIGURE_IDS.start(),
                FIGURE_IDS.end()
            )))
        }
    };
    Ok(fig)
}

fn rate_shift(points: usize) -> wiretap_core::Result<Figure> {
    let mut b = Builder::new(2, "BSC reliability and secrecy under rate shifting");
    let q = bsc_query(0.0)?;
    let grids = Grids::around(&q, points);
    let rep = tradeoff_scenarios(&q, Mechanism::RateShift, &[0.05, 0.1, 0.15], &grids)?;
    b.tradeoff(&rep);
    for s in &rep.scenarios {
        let rb = s.reliability.meta.get("rate_b").cloned().unwrap_or_default();
        b.curve(&format!("reliability_rb{rb}"), Trend::Decreasing, s.reliability.clone());
    }
    b.curve("secrecy", Trend::Increasing, rep.scenarios[0].secrecy.clone());
    Ok(b.finish())
}

fn rate_exchange(points: usize) -> wiretap_core::Result<Figure> {
    let mut b = Builder::new(3, "BSC tradeoff by rate exchange");
    let q = bsc_query(0.1)?.with_rates(0.1, 0.05)?;
    let grids = Grids::around(&q, points);
    let rep = tradeoff_scenarios(&q, Mechanism::RateExchange, &[0.05], &grids)?;
    b.tradeoff(&rep);
    b.curve("reliability", Trend::Decreasing, q.reliability_curve(&grids.sum_rates)?);
    b.curve("secrecy", Trend::Increasing, q.secrecy_curve(&grids.eve_rates)?);
    b.curve("reliability_exchanged", Trend::Decreasing, rep.scenarios[0].reliability.clone());
    b.curve("secrecy_exchanged", Trend::Increasing, rep.scenarios[0].secrecy.clone());
    Ok(b.finish())
}

fn concatenation(points: usize) -> wiretap_core::Result<Figure> {
    let mut b = Builder::new(4, "BSC tradeoff by concatenation");
    let q = bsc_query(0.0)?;
    let grids = Grids::around(&q, points);
    let rep = tradeoff_scenarios(&q, Mechanism::Concatenate, &[0.025], &grids)?;
    b.tradeoff(&rep);
    let (direct, cat) = (&rep.scenarios[0], &rep.scenarios[1]);
    b.curve("reliability", Trend::Decreasing, direct.reliability.clone());
    b.curve("secrecy", Trend::Increasing, direct.secrecy.clone());
    b.curve("reliability_concat", Trend::Decreasing, cat.reliability.clone());
    b.curve("secrecy_concat", Trend::Increasing, cat.secrecy.clone());
    Ok(b.finish())
}

fn base_bsc(points: usize) -> wiretap_core::Result<Figure> {
    let mut b = Builder::new(5, "BSC reliability and secrecy with cost constraint");
    let q = bsc_query(0.0)?;
    let grids = Grids::around(&q, points);
    b.curve("reliability", Trend::Decreasing, q.reliability_curve(&grids.sum_rates)?);
    b.curve("secrecy", Trend::Increasing, q.secrecy_curve(&grids.eve_rates)?);
    b.crossing("reliability", "secrecy");
    Ok(b.finish())
}

fn cost_change(id: u8, points: usize) -> wiretap_core::Result<Figure> {
    let title = if id == 6 {
        "BSC reliability for varied cost cap"
    } else {
        "BSC secrecy for varied cost cap"
    };
    let mut b = Builder::new(id, title);
    let q = bsc_query(0.0)?;
    let grids = Grids::around(&q, points);
    let rep = tradeoff_scenarios(&q, Mechanism::CostChange, &[1.0, 1.2, 1.4], &grids)?;
    let wanted = if id == 6 { "F_c" } else { "H_c" };
    for c in rep.checks.iter().filter(|c| c.name.starts_with(wanted)) {
        b.check(c.name.clone(), c.passed, format!("worst slack {:e}", c.worst_slack));
    }
    for s in &rep.scenarios {
        let g = s.reliability.meta.get("gamma_sweep").cloned().unwrap_or_default();
        if id == 6 {
            b.curve(&format!("reliability_gamma{g}"), Trend::Decreasing, s.reliability.clone());
        } else {
            b.curve(&format!("secrecy_gamma{g}"), Trend::Increasing, s.secrecy.clone());
        }
    }
    Ok(b.finish())
}

fn poisson_base(points: usize) -> wiretap_core::Result<Figure> {
    let mut b = Builder::new(8, "Poisson reliability and secrecy");
    let p = poisson_params()?;
    b.curve("reliability", Trend::Decreasing, poisson::reliability_curve(&p, POISSON_Q, points)?);
    b.curve(
        "secrecy",
        Trend::Increasing,
        poisson::secrecy_curve(&p, POISSON_Q, points, POISSON_RHO_MAX)?,
    );
    b.crossing("reliability", "secrecy");
    Ok(b.finish())
}

fn poisson_concatenated(points: usize) -> wiretap_core::Result<Figure> {
    let mut b = Builder::new(9, "Poisson reliability and secrecy, direct and concatenated");
    let p = poisson_params()?;
    let rel = poisson::reliability_curve(&p, POISSON_Q, points)?;
    let sec = poisson::secrecy_curve(&p, POISSON_Q, points, POISSON_RHO_MAX)?;
    let (rel_c, sec_c) = poisson::concatenated_curves(&p, &poisson_concat()?, POISSON_Q, points, POISSON_RHO_MAX)?;
    b.check(
        "concatenated reliability below direct",
        below(&rel_c, &rel) >= -SHAPE_TOL,
        format!("worst slack {:e}", below(&rel_c, &rel)),
    );
    b.check(
        "concatenated secrecy above direct",
        below(&sec, &sec_c) >= -SHAPE_TOL,
        format!("worst slack {:e}", below(&sec, &sec_c)),
    );
    b.curve("reliability", Trend::Decreasing, rel);
    b.curve("secrecy", Trend::Increasing, sec);
    b.curve("reliability_concat", Trend::Decreasing, rel_c);
    b.curve("secrecy_concat", Trend::Increasing, sec_c);
    b.crossing("reliability", "secrecy");
    b.crossing("reliability_concat", "secrecy_concat");
    Ok(b.finish())
}

/// Smallest `hi − lo` over the rates of both curves inside their common range.
fn below(lo: &ExponentCurve, hi: &ExponentCurve) -> f64 {
    lo.rates()
        .into_iter()
        .chain(hi.rates())
        .filter_map(|r| Some(hi.interpolate(r)? - lo.interpolate(r)?))
        .fold(f64::INFINITY, f64::min)
}

fn gaussian_reliability(points: usize) -> wiretap_core::Result<Figure> {
    let mut b = Builder::new(10, "Gaussian reliability, tilted and Gallager bounds");
    let p = gaussian_params()?;
    for v in [Variant::Tilted, Variant::Gallager] {
        b.curve(&format!("reliability_{v}"), Trend::Decreasing, gaussian::reliability_curve(&p, v, points)?);
    }
    for r in [0.2, 0.4] {
        let (g, t) = (gaussian::reliability_gallager(&p, r)?, gaussian::reliability_tilted(&p, r)?);
        b.check(format!("Gallager above tilted at R={r}"), g > t, format!("{g:.6} vs {t:.6}"));
    }
    Ok(b.finish())
}

fn gaussian_secrecy(points: usize) -> wiretap_core::Result<Figure> {
    let mut b = Builder::new(11, "Gaussian secrecy, same-form and Gallager-type bounds");
    let p = gaussian_params()?;
    for v in [Variant::Tilted, Variant::Gallager] {
        b.curve(&format!("secrecy_{v}"), Trend::Increasing, gaussian::secrecy_curve(&p, v, points, 1.0)?);
    }
    for r in [0.15, 0.3] {
        let (g, t) = (gaussian::secrecy_gallager_type(&p, r)?, gaussian::secrecy_tilted(&p, r)?);
        b.check(format!("Gallager-type below same-form at R_E={r}"), g < t, format!("{g:.6} vs {t:.6}"));
    }
    Ok(b.finish())
}

fn gaussian_curves(b: &mut Builder, points: usize) -> wiretap_core::Result<()> {
    let p = gaussian_params()?;
    let top = p.bob_capacity();
    for v in [Variant::Tilted, Variant::Gallager] {
        b.curve(&format!("reliability_{v}"), Trend::Decreasing, gaussian::reliability_curve(&p, v, points)?);
        b.curve(&format!("secrecy_{v}"), Trend::Increasing, gaussian::secrecy_curve(&p, v, points, top)?);
    }
    Ok(())
}

fn gaussian_both(points: usize) -> wiretap_core::Result<Figure> {
    let mut b = Builder::new(12, "Gaussian reliability and secrecy, both bound families");
    gaussian_curves(&mut b, points)?;
    b.crossing("reliability_tilted", "secrecy_tilted");
    b.crossing("reliability_gallager", "secrecy_gallager");
    Ok(b.finish())
}

fn gaussian_duality(points: usize) -> wiretap_core::Result<Figure> {
    let mut b = Builder::new(13, "Gaussian bound families and their ρ → −ρ duality");
    gaussian_curves(&mut b, points)?;
    let p = gaussian_params()?;
    let (a_b, a_e) = (p.snr_bob(), p.snr_eve());
    let mut worst_mirror: f64 = 0.0;
    let mut worst_form: f64 = 0.0;
    for rho in linspace(0.01, 0.99, 99) {
        for a in [a_b, a_e] {
            worst_mirror = worst_mirror
                .max((gaussian::tilted_exponent(a, -rho) - gaussian::gallager_type_secrecy_exponent(a, rho)).abs())
                .max((gaussian::tilted_rate(a, -rho) - gaussian::gallager_type_secrecy_rate(a, rho)).abs());
        }
    }
    for r in linspace(p.bob_capacity() * 0.5, p.bob_capacity(), 20) {
        let beta = (2.0 * r).exp();
        let direct = gaussian::reliability_gallager(&p, r)?;
        worst_form = worst_form.max((direct - gaussian::beta_form(a_b, beta)).abs());
    }
    b.check("tilted(−ρ) equals Gallager-type secrecy(ρ)", worst_mirror <= 1e-12, format!("{worst_mirror:e}"));
    b.check(
        "Gallager reliability has the same β-form as the secrecy bound",
        worst_form <= 1e-12,
        format!("{worst_form:e}"),
    );
    Ok(b.finish())
}
