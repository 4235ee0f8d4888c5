//! Secrecy measures on an explicit output ensemble `{P^(i)}` with target `π`.

use serde::{Deserialize, Serialize};

use crate::channel::check_distribution;
use crate::error::{Error, Result};

/// Mass below this is treated as zero in absolute-continuity checks.
pub const ZERO_MASS: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEnsemble", deny_unknown_fields)]
pub struct OutputEnsemble {
    members: Vec<Vec<f64>>,
    target: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnsemble {
    members: Vec<Vec<f64>>,
    target: Vec<f64>,
}

impl TryFrom<RawEnsemble> for OutputEnsemble {
    type Error = Error;
    fn try_from(r: RawEnsemble) -> Result<Self> {
        Self::new(r.members, r.target)
    }
}

impl OutputEnsemble {
    pub fn new(members: Vec<Vec<f64>>, target: Vec<f64>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Dimension("ensemble has no members".into()));
        }
        check_distribution(&target)?;
        for (i, m) in members.iter().enumerate() {
            if m.len() != target.len() {
                return Err(Error::Dimension(format!(
                    "member {i} has {} letters, target has {}",
                    m.len(),
                    target.len()
                )));
            }
            check_distribution(m)
                .map_err(|e| Error::Distribution(format!("member {i}: {e}")))?;
        }
        Ok(Self { members, target })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn members(&self) -> &[Vec<f64>] {
        &self.members
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    /// `P̄ = (1/M) Σ P^(i)`.
    pub fn average(&self) -> Vec<f64> {
        let m = self.members.len() as f64;
        let mut avg = vec![0.0; self.target.len()];
        for p in &self.members {
            for (a, v) in avg.iter_mut().zip(p) {
                *a += v / m;
            }
        }
        avg
    }
}

/// `D(p || r)` in nats; `member` labels the error.
pub fn kl_divergence(p: &[f64], r: &[f64], member: usize) -> Result<f64> {
    let mut d = 0.0;
    for (z, (&pz, &rz)) in p.iter().zip(r).enumerate() {
        if pz <= 0.0 {
            continue;
        }
        if rz < ZERO_MASS {
            return Err(Error::AbsoluteContinuity { member, letter: z });
        }
        d += pz * (pz / rz).ln();
    }
    Ok(d.max(0.0))
}

pub fn l1_distance(p: &[f64], r: &[f64]) -> f64 {
    p.iter().zip(r).map(|(a, b)| (a - b).abs()).sum()
}

/// δ: average divergence of the members from the target.
pub fn divergence_distance(e: &OutputEnsemble) -> Result<f64> {
    let mut s = 0.0;
    for (i, p) in e.members.iter().enumerate() {
        s += kl_divergence(p, &e.target, i)?;
    }
    Ok(s / e.members.len() as f64)
}

/// ∂: average L1 distance of the members from the target.
pub fn variational_distance(e: &OutputEnsemble) -> f64 {
    let s: f64 = e.members.iter().map(|p| l1_distance(p, &e.target)).sum();
    s / e.members.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InformationMeasure {
    /// `(1/M) Σ D(P^(i) || P̄)`
    pub information: f64,
    /// `D(P̄ || π)`
    pub stealth: f64,
}

pub fn mutual_information_measure(e: &OutputEnsemble) -> Result<InformationMeasure> {
    let avg = e.average();
    let mut s = 0.0;
    for (i, p) in e.members.iter().enumerate() {
        s += kl_divergence(p, &avg, i)?;
    }
    // member index M flags the average itself
    let stealth = kl_divergence(&avg, &e.target, e.members.len())?;
    Ok(InformationMeasure {
        information: s / e.members.len() as f64,
        stealth,
    })
}

/// d: average L1 distance of the members from their own average.
pub fn d_measure(e: &OutputEnsemble) -> f64 {
    let avg = e.average();
    let s: f64 = e.members.iter().map(|p| l1_distance(p, &avg)).sum();
    s / e.members.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeReport {
    pub divergence: f64,
    pub variational: f64,
    pub information: f64,
    pub stealth: f64,
    pub d: f64,
    pub average_to_target: f64,
    /// `2δ − ∂²`
    pub pinsker_slack: f64,
    /// `2∂ − d`
    pub d_slack: f64,
    /// `3∂ − d − d(P̄, π)`
    pub triangle_slack: f64,
    /// `|δ − I − stealth|`
    pub pythagorean_error: f64,
}

impl LatticeReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.pinsker_slack >= -tol
            && self.d_slack >= -tol
            && self.triangle_slack >= -tol
            && self.pythagorean_error <= tol
    }
}

pub fn check_lattice(e: &OutputEnsemble) -> Result<LatticeReport> {
    let divergence = divergence_distance(e)?;
    let variational = variational_distance(e);
    let im = mutual_information_measure(e)?;
    let d = d_measure(e);
    let average_to_target = l1_distance(&e.average(), &e.target);
    Ok(LatticeReport {
        divergence,
        variational,
        information: im.information,
        stealth: im.stealth,
        d,
        average_to_target,
        pinsker_slack: 2.0 * divergence - variational * variational,
        d_slack: 2.0 * variational - d,
        triangle_slack: 3.0 * variational - d - average_to_target,
        pythagorean_error: (divergence - im.information - im.stealth).abs(),
    })
}
