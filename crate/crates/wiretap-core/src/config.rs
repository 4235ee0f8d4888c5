//! JSON channel documents.
//!
//! ```json
//! {
//!   "bob": [[0.9, 0.1], [0.1, 0.9]],
//!   "eve": [[0.7, 0.3], [0.3, 0.7]],
//!   "costs": [1.0, 2.0],
//!   "gamma": 1.4,
//!   "q": [0.6, 0.4]
//! }
//! ```
//!
//! `costs` and `gamma` go together; without them every letter costs 1 and
//! `Γ = 1`. `aux` is an optional prefix channel `V → X`, in which case `q` is
//! a law on `V`. `rate_b` and `rate_e` default to 0.
//!
//! Ensemble documents carry the pair, block length and code sizes:
//!
//! ```json
//! { "bob": [[0.9, 0.1], [0.1, 0.9]], "eve": [[0.7, 0.3], [0.3, 0.7]],
//!   "n": 3, "m": 2, "l": 2, "q": [0.5, 0.5] }
//! ```

use serde::{Deserialize, Serialize};

use crate::channel::{CostedInput, DiscreteChannel, WiretapPair};
use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::exponent::ExponentQuery;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub bob: Vec<Vec<f64>>,
    pub eve: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub costs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub rate_b: f64,
    #[serde(default)]
    pub rate_e: f64,
}

impl ChannelConfig {
    /// Parses and validates everything that can be checked without an operation in mind.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.pair()?;
        cfg.costs()?;
        if let Some(aux) = &cfg.aux {
            DiscreteChannel::new(aux.clone())?;
        }
        Ok(cfg)
    }

    pub fn pair(&self) -> Result<WiretapPair> {
        WiretapPair::new(
            DiscreteChannel::new(self.bob.clone())?,
            DiscreteChannel::new(self.eve.clone())?,
        )
    }

    pub fn aux(&self) -> Result<Option<DiscreteChannel>> {
        self.aux.clone().map(DiscreteChannel::new).transpose()
    }

    /// `(costs, Γ)` on `X`.
    pub fn costs(&self) -> Result<(Vec<f64>, f64)> {
        let nx = self.bob.first().map_or(0, Vec::len);
        match (&self.costs, self.gamma) {
            (Some(c), Some(g)) => {
                if c.len() != nx {
                    return Err(Error::Dimension(format!("{} costs for {nx} inputs", c.len())));
                }
                if c.iter().any(|v| !v.is_finite() || *v < 0.0) || !g.is_finite() {
                    return Err(Error::NonFinite("costs and gamma must be finite, costs nonnegative".into()));
                }
                Ok((c.clone(), g))
            }
            (None, None) => Ok((vec![1.0; nx], 1.0)),
            _ => Err(Error::Parse("`costs` and `gamma` must be given together".into())),
        }
    }

    pub fn input_law(&self) -> Result<Vec<f64>> {
        self.q
            .clone()
            .ok_or_else(|| Error::Parse("missing input law `q`".into()))
    }

    /// Costed input on `X`; rejects configs carrying `aux`.
    pub fn costed_input(&self) -> Result<CostedInput> {
        if self.aux.is_some() {
            return Err(Error::Parse("`aux` given; the input law lives on V".into()));
        }
        let (c, g) = self.costs()?;
        CostedInput::new(self.input_law()?, c, g)
    }

    pub fn query(&self) -> Result<ExponentQuery> {
        let (c, g) = self.costs()?;
        ExponentQuery::new(
            self.pair()?,
            self.aux()?,
            self.input_law()?,
            c,
            g,
            self.rate_b,
            self.rate_e,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub bob: Vec<Vec<f64>>,
    pub eve: Vec<Vec<f64>>,
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub q: Vec<f64>,
}

impl EnsembleConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.spec()?;
        Ok(cfg)
    }

    pub fn spec(&self) -> Result<EnsembleSpec> {
        let pair = WiretapPair::new(
            DiscreteChannel::new(self.bob.clone())?,
            DiscreteChannel::new(self.eve.clone())?,
        )?;
        EnsembleSpec::new(pair, self.n, self.m, self.l, self.q.clone())
    }
}
