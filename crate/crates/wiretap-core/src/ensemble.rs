//! Exact random-coding ensemble averages at tiny block lengths.
//!
//! Codewords are i.i.d. `q^n`; Bob decodes the `M·L` codewords by maximum
//! likelihood (ties go to the lower index), and Eve's output for one subcode of
//! `L` codewords is compared with the `q^n`-induced target.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{check_distribution, CostedInput, WiretapPair};
use crate::error::{Error, Result};
use crate::exponent::ExponentQuery;
use crate::numeric::{ln0, scan_golden_max};

pub const MAX_N: usize = 8;
pub const MAX_CODEWORDS: usize = 16;
pub const MAX_L: usize = 8;
/// Cap on `(#multisets) · |Z|^n` for the divergence enumeration.
pub const WORK_BUDGET: f64 = 5e7;
/// Relative gap under which two likelihoods count as a tie.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSpec {
    pair: WiretapPair,
    n: usize,
    m: usize,
    l: usize,
    q: Vec<f64>,
}

impl EnsembleSpec {
    pub fn new(pair: WiretapPair, n: usize, m: usize, l: usize, q: Vec<f64>) -> Result<Self> {
        check_distribution(&q)?;
        if q.len() != pair.num_inputs() {
            return Err(Error::Dimension(format!(
                "input law has {} entries for {} inputs",
                q.len(),
                pair.num_inputs()
            )));
        }
        if n == 0 || n > MAX_N {
            return Err(Error::Infeasible(format!("block length {n} not in 1..={MAX_N}")));
        }
        if m == 0 || l == 0 || l > MAX_L || m * l > MAX_CODEWORDS {
            return Err(Error::Infeasible(format!(
                "M={m}, L={l}: need M,L >= 1, L <= {MAX_L}, M*L <= {MAX_CODEWORDS}"
            )));
        }
        let pairs = (pair.num_inputs() as f64).powi(n as i32)
            * (pair.bob().num_outputs().max(pair.eve().num_outputs()) as f64).powi(n as i32);
        if pairs > 1e7 {
            return Err(Error::Infeasible(format!("{pairs} input/output sequence pairs")));
        }
        Ok(Self { pair, n, m, l, q })
    }

    pub fn pair(&self) -> &WiretapPair {
        &self.pair
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn codewords(&self) -> usize {
        self.m * self.l
    }
}

/// Block-level tables: `q^n(x)` and `W^n(y|x)` for one channel.
struct Product {
    nx: usize,
    ny: usize,
    qn: Vec<f64>,
    /// row-major `[x][y]`
    w: Vec<f64>,
}

fn product(spec: &EnsembleSpec, bob: bool) -> Product {
    let ch = if bob { spec.pair.bob() } else { spec.pair.eve() };
    let (kx, ky, n) = (ch.num_inputs(), ch.num_outputs(), spec.n);
    let nx = kx.pow(n as u32);
    let ny = ky.pow(n as u32);
    let mut qn = vec![1.0; nx];
    let mut w = vec![1.0; nx * ny];
    for x in 0..nx {
        let xd = digits(x, kx, n);
        qn[x] = xd.iter().map(|&a| spec.q[a]).product();
        for y in 0..ny {
            let yd = digits(y, ky, n);
            w[x * ny + y] = xd.iter().zip(&yd).map(|(&a, &b)| ch.get(a, b)).product();
        }
    }
    Product { nx, ny, qn, w }
}

fn digits(mut v: usize, base: usize, n: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for slot in d.iter_mut() {
        *slot = v % base;
        v /= base;
    }
    d
}

#[inline]
fn ties(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOL * a.abs().max(b.abs())
}

/// `E_C[ε_B]`: average ML error over the ensemble, exact.
///
/// Codeword `k` (1-based) is decoded correctly iff it beats every earlier
/// codeword strictly and every later one weakly, so given `(x_k, y)` the
/// success probability is `a^{k−1} b^{K−k}` with `a = P(W(y|X) < w)` and
/// `b = P(W(y|X) ≤ w)`.
pub fn exact_ensemble_error(spec: &EnsembleSpec) -> Result<f64> {
    let k = spec.codewords();
    if k == 1 {
        return Ok(0.0);
    }
    let t = product(spec, true);
    let mut correct = 0.0;
    let mut col: Vec<(f64, f64)> = Vec::with_capacity(t.nx);
    for y in 0..t.ny {
        col.clear();
        col.extend((0..t.nx).filter(|&x| t.qn[x] > 0.0).map(|x| (t.w[x * t.ny + y], t.qn[x])));
        col.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut below = 0.0;
        let mut i = 0;
        while i < col.len() {
            let mut j = i;
            let mut mass = 0.0;
            let mut weighted = 0.0;
            while j < col.len() && ties(col[i].0, col[j].0) {
                mass += col[j].1;
                weighted += col[j].1 * col[j].0;
                j += 1;
            }
            let (a, b) = (below, below + mass);
            let s: f64 = (1..=k)
                .map(|kk| a.powi(kk as i32 - 1) * b.powi((k - kk) as i32))
                .sum::<f64>()
                / k as f64;
            correct += weighted * s;
            below = b;
            i = j;
        }
    }
    Ok((1.0 - correct).max(0.0))
}

/// `E_C[D(P^(1) || π_n)]` over the `L` codewords of one subcode, exact.
pub fn exact_ensemble_divergence(spec: &EnsembleSpec) -> Result<f64> {
    let t = product(spec, false);
    let support: Vec<usize> = (0..t.nx).filter(|&x| t.qn[x] > 0.0).collect();
    let l = spec.l;
    let count = multiset_count(support.len(), l);
    if count * t.ny as f64 > WORK_BUDGET {
        return Err(Error::Infeasible(format!(
            "{count} codeword multisets x {} outputs",
            t.ny
        )));
    }
    let target: Vec<f64> = (0..t.ny)
        .map(|y| support.iter().map(|&x| t.qn[x] * t.w[x * t.ny + y]).sum())
        .collect();
    let ln_target: Vec<f64> = target.iter().map(|&p| ln0(p)).collect();
    let ln_q: Vec<f64> = support.iter().map(|&x| t.qn[x].ln()).collect();
    let ln_fact: Vec<f64> = (0..=l).map(|i| (1..=i).map(|j| (j as f64).ln()).sum()).collect();

    let mut idx = vec![0usize; l];
    let mut total = 0.0;
    let mut mix = vec![0.0; t.ny];
    loop {
        // weight = L!/Π m_i! Π q^{m_i}
        let mut lw = ln_fact[l];
        let mut run = 1;
        for p in 0..l {
            lw += ln_q[idx[p]];
            if p + 1 < l && idx[p + 1] == idx[p] {
                run += 1;
            } else {
                lw -= ln_fact[run];
                run = 1;
            }
        }
        mix.iter_mut().for_each(|m| *m = 0.0);
        for &i in &idx {
            let x = support[i];
            for (y, m) in mix.iter_mut().enumerate() {
                *m += t.w[x * t.ny + y];
            }
        }
        let mut d = 0.0;
        for (y, &m) in mix.iter().enumerate() {
            if m > 0.0 {
                let p = m / l as f64;
                d += p * (p.ln() - ln_target[y]);
            }
        }
        total += lw.exp() * d.max(0.0);

        // next nondecreasing index tuple
        let mut p = l;
        loop {
            if p == 0 {
                return Ok(total.max(0.0));
            }
            p -= 1;
            if idx[p] + 1 < support.len() {
                let v = idx[p] + 1;
                for slot in idx[p..].iter_mut() {
                    *slot = v;
                }
                break;
            }
        }
    }
}

fn multiset_count(n: usize, k: usize) -> f64 {
    // C(n + k − 1, k)
    (0..k).fold(1.0, |acc, i| acc * (n + i) as f64 / (i + 1) as f64)
}

/// Single-letter Gallager functions with the trivial cost (`c ≡ 1`, `Γ = 1`).
fn single_letter(spec: &EnsembleSpec) -> ExponentQuery {
    let input = CostedInput::unconstrained(spec.q.clone()).expect("validated law");
    ExponentQuery::plain(spec.pair.clone(), &input, 0.0, 0.0).expect("validated spec")
}

/// `ψ(ρ) = −ln Σ_z Σ_x q(x) W_E(z|x)^{1+ρ} W_q(z)^{−ρ}` for one letter.
pub fn psi_eve(spec: &EnsembleSpec, rho: f64) -> f64 {
    let w = spec.pair.eve();
    let out = w.output_distribution(&spec.q).expect("validated");
    let mut s = 0.0;
    for (z, &pz) in out.iter().enumerate() {
        if pz <= 0.0 {
            continue;
        }
        let inner: f64 = spec
            .q
            .iter()
            .enumerate()
            .map(|(x, &qx)| qx * w.get(x, z).powf(1.0 + rho))
            .sum();
        s += inner * pz.powf(-rho);
    }
    -s.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub value: f64,
    pub rho: f64,
}

/// `2 inf_{0≤ρ≤1} (ML)^ρ e^{−n φ(ρ|W_B,q)}`.
pub fn error_bound(spec: &EnsembleSpec) -> Result<Bound> {
    let sq = single_letter(spec);
    let n = spec.n as f64;
    let ln_k = (spec.codewords() as f64).ln();
    let mut err = None;
    let (rho, neg) = scan_golden_max(
        &mut |rho| match sq.phi_bob(rho, 0.0, 0.0) {
            Ok(phi) => -(rho * ln_k - n * phi),
            Err(e) => {
                err = Some(e);
                f64::NEG_INFINITY
            }
        },
        0.0,
        1.0,
        20,
        1e-10,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(Bound {
        value: 2.0 * (-neg).exp(),
        rho,
    })
}

fn divergence_bound(spec: &EnsembleSpec, exponent: impl Fn(f64) -> f64, hi: f64) -> Bound {
    let n = spec.n as f64;
    let ln_l = (spec.l as f64).ln();
    // ln of e^{−n e(ρ)} / (ρ L^ρ)
    let log_term = |rho: f64| -n * exponent(rho) - rho.ln() - rho * ln_l;
    let (rho, neg) = scan_golden_max(&mut |r| -log_term(r), 1e-9, hi, 40, 1e-10);
    Bound {
        value: 2.0 * (-neg).exp(),
        rho,
    }
}

/// `2 inf_{0<ρ≤1} e^{−n ψ(ρ)} / (ρ L^ρ)`.
pub fn psi_bound(spec: &EnsembleSpec) -> Bound {
    divergence_bound(spec, |r| psi_eve(spec, r), 1.0)
}

/// `2 inf_{0<ρ<1} e^{−n φ(−ρ|W_E,q)} / (ρ L^ρ)`.
pub fn phi_bound(spec: &EnsembleSpec) -> Bound {
    let sq = single_letter(spec);
    divergence_bound(
        spec,
        |r| sq.phi_eve(r, 0.0, 0.0).unwrap_or(f64::NEG_INFINITY),
        1.0 - 1e-9,
    )
}

/// `min_ρ [ψ(ρ) − φ(−ρ)]` over a grid in `(0,1)`; nonnegative iff the ψ-form
/// bound is pointwise no larger than the φ-form bound.
pub fn holder_gap(spec: &EnsembleSpec, grid: usize) -> f64 {
    let sq = single_letter(spec);
    (1..grid)
        .map(|i| {
            let rho = i as f64 / grid as f64;
            psi_eve(spec, rho) - sq.phi_eve(rho, 0.0, 0.0).unwrap_or(f64::NAN)
        })
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Slacks {
    pub error: f64,
    pub psi: f64,
    pub phi: f64,
    pub holder: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub exact_error: f64,
    pub bound_error: f64,
    pub exact_divergence: f64,
    pub bound_psi: f64,
    pub bound_phi: f64,
    pub slacks: Slacks,
}

impl EnsembleReport {
    pub fn holds(&self) -> bool {
        self.slacks.error >= 0.0
            && self.slacks.psi >= 0.0
            && self.slacks.phi >= 0.0
            && self.slacks.holder >= -1e-12
    }
}

pub fn ensemble_report(spec: &EnsembleSpec) -> Result<EnsembleReport> {
    let exact_error = exact_ensemble_error(spec)?;
    let exact_divergence = exact_ensemble_divergence(spec)?;
    let be = error_bound(spec)?;
    let bp = psi_bound(spec);
    let bf = phi_bound(spec);
    Ok(EnsembleReport {
        exact_error,
        bound_error: be.value,
        exact_divergence,
        bound_psi: bp.value,
        bound_phi: bf.value,
        slacks: Slacks {
            error: be.value - exact_error,
            psi: bp.value - exact_divergence,
            phi: bf.value - exact_divergence,
            holder: holder_gap(spec, 200),
        },
    })
}

/// Mean and standard error of a Monte-Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

fn sample_index(rng: &mut impl Rng, cdf: &[f64]) -> usize {
    let u: f64 = rng.gen();
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

fn estimate(samples: impl Iterator<Item = f64>) -> Estimate {
    let (mut n, mut s, mut s2) = (0.0, 0.0, 0.0);
    for v in samples {
        n += 1.0;
        s += v;
        s2 += v * v;
    }
    let mean = s / n;
    let var = ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Estimate {
        mean,
        std_err: (var / n).sqrt(),
    }
}

fn cdf_of(p: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    p.iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect()
}

/// Monte-Carlo estimate of `E_C[ε_B]`: random codebooks, exact error per codebook.
pub fn monte_carlo_error(spec: &EnsembleSpec, codebooks: usize, rng: &mut impl Rng) -> Estimate {
    let t = product(spec, true);
    let cdf = cdf_of(&t.qn);
    let k = spec.codewords();
    let mut book = vec![0usize; k];
    estimate((0..codebooks).map(|_| {
        for c in book.iter_mut() {
            *c = sample_index(rng, &cdf);
        }
        let mut err = 0.0;
        for y in 0..t.ny {
            let mut best = 0;
            let mut wb = t.w[book[0] * t.ny + y];
            for (j, &x) in book.iter().enumerate().skip(1) {
                let w = t.w[x * t.ny + y];
                if w > wb && !ties(w, wb) {
                    best = j;
                    wb = w;
                }
            }
            for (j, &x) in book.iter().enumerate() {
                if j != best {
                    err += t.w[x * t.ny + y];
                }
            }
        }
        err / k as f64
    }))
}

/// Monte-Carlo estimate of `E_C[D(P^(1) || π_n)]`.
pub fn monte_carlo_divergence(spec: &EnsembleSpec, codebooks: usize, rng: &mut impl Rng) -> Estimate {
    let t = product(spec, false);
    let cdf = cdf_of(&t.qn);
    let target: Vec<f64> = (0..t.ny)
        .map(|y| (0..t.nx).map(|x| t.qn[x] * t.w[x * t.ny + y]).sum())
        .collect();
    let l = spec.l as f64;
    estimate((0..codebooks).map(|_| {
        let mut mix = vec![0.0; t.ny];
        for _ in 0..spec.l {
            let x = sample_index(rng, &cdf);
            for (y, m) in mix.iter_mut().enumerate() {
                *m += t.w[x * t.ny + y] / l;
            }
        }
        mix.iter()
            .zip(&target)
            .filter(|(p, _)| **p > 0.0)
            .map(|(p, r)| p * (p / r).ln())
            .sum::<f64>()
            .max(0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bsc_spec(eps: f64, n: usize, m: usize, l: usize) -> EnsembleSpec {
        EnsembleSpec::new(WiretapPair::bsc(eps, eps).unwrap(), n, m, l, vec![0.5, 0.5]).unwrap()
    }

    #[test]
    fn single_codeword_never_errs() {
        assert_eq!(exact_ensemble_error(&bsc_spec(0.1, 3, 1, 1)).unwrap(), 0.0);
    }

    #[test]
    fn noiseless_two_codewords() {
        // errors only on collision (prob 1/4 at n=2), then the second codeword loses
        let v = exact_ensemble_error(&bsc_spec(0.0, 2, 2, 1)).unwrap();
        assert_abs_diff_eq!(v, 0.125, epsilon = 1e-15);
    }

    #[test]
    fn feasibility_limits() {
        let pair = WiretapPair::bsc(0.1, 0.2).unwrap();
        assert!(EnsembleSpec::new(pair.clone(), 9, 1, 1, vec![0.5, 0.5]).is_err());
        assert!(EnsembleSpec::new(pair.clone(), 3, 8, 4, vec![0.5, 0.5]).is_err());
        assert!(EnsembleSpec::new(pair.clone(), 3, 1, 9, vec![0.5, 0.5]).is_err());
        assert!(EnsembleSpec::new(pair, 3, 4, 4, vec![0.5, 0.5]).is_ok());
    }

    #[test]
    fn point_mass_gives_zero_divergence() {
        let pair = WiretapPair::bsc(0.1, 0.3).unwrap();
        let spec = EnsembleSpec::new(pair, 3, 1, 8, vec![1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(exact_ensemble_divergence(&spec).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn flat_eve_gives_zero_divergence() {
        let v = exact_ensemble_divergence(&bsc_spec(0.5, 3, 1, 2)).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn report_bounds_hold() {
        let pair = WiretapPair::bsc(0.1, 0.3).unwrap();
        let spec = EnsembleSpec::new(pair, 3, 2, 2, vec![0.5, 0.5]).unwrap();
        let r = ensemble_report(&spec).unwrap();
        assert!(r.holds(), "{r:?}");
    }
}
