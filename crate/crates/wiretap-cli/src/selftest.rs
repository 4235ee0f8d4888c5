//! Quick invariant suite run by `wiretap selftest`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wiretap_core::curve::linspace;
use wiretap_core::ensemble::{ensemble_report, EnsembleSpec};
use wiretap_core::gaussian::{self, GaussianWiretapParams};
use wiretap_core::metrics::{check_lattice, OutputEnsemble};
use wiretap_core::poisson::{self, PoissonWiretapParams};
use wiretap_core::WiretapPair;

use crate::figures::{self, bsc_query, FIGURE_IDS};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub outcomes: Vec<Outcome>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

type Check = (bool, String);

fn run(name: &str, out: &mut Vec<Outcome>, f: impl FnOnce() -> wiretap_core::Result<Check>) {
    let t = Instant::now();
    let (passed, detail) = match f() {
        Ok(c) => c,
        Err(e) => (false, format!("error: {e}")),
    };
    out.push(Outcome {
        name: name.into(),
        passed,
        detail,
        seconds: t.elapsed().as_secs_f64(),
    });
}

fn random_dist(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..k).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

pub fn selftest(seed: u64, figure_points: usize) -> SelftestReport {
    let mut out = Vec::new();

    run("secrecy measure lattice", &mut out, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = f64::INFINITY;
        for _ in 0..1000 {
            let m = rng.gen_range(1..=8);
            let k = rng.gen_range(2..=8);
            let members = (0..m).map(|_| random_dist(&mut rng, k)).collect();
            let target = random_dist(&mut rng, k);
            let rep = check_lattice(&OutputEnsemble::new(members, target)?)?;
            worst = worst
                .min(-rep.pythagorean_error)
                .min(rep.pinsker_slack)
                .min(rep.d_slack)
                .min(rep.triangle_slack);
        }
        Ok((worst >= -1e-10, format!("worst slack {worst:e}")))
    });

    run("exponents vanish at the information rates", &mut out, || {
        let q = bsc_query(0.0)?;
        let (ib, ie) = (q.bob_information(), q.eve_information());
        let f = q.with_rates(ib, 0.0)?.reliability_function()?.value;
        let h = q.with_rates(0.0, ie)?.secrecy_function()?.value;
        let zf = q.reliability_zero_rate()?;
        let zh = q.secrecy_zero_rate()?;
        let ok = f < 1e-8 && h < 1e-8 && (zf - ib).abs() < 1e-6 && (zh - ie).abs() < 1e-6;
        Ok((ok, format!("F(I_B)={f:e} H(I_E)={h:e} |R0_F-I_B|={:e} |R0_H-I_E|={:e}", (zf - ib).abs(), (zh - ie).abs())))
    });

    run("phi vanishes at the origin", &mut out, || {
        let q = bsc_query(0.0)?;
        let b = q.phi_bob(0.0, 0.0, 0.0)?;
        let e = q.phi_eve(1e-15, 0.0, 0.0)?;
        Ok((b.abs() <= 1e-12 && e.abs() <= 1e-12, format!("{b:e} {e:e}")))
    });

    run("random-coding bounds at small block lengths", &mut out, || {
        let mut worst = f64::INFINITY;
        for n in [2, 3] {
            for (m, l) in [(1, 2), (2, 2), (4, 1)] {
                for eps in [0.1, 0.3] {
                    let spec = EnsembleSpec::new(WiretapPair::bsc(eps, 0.3)?, n, m, l, vec![0.5, 0.5])?;
                    let r = ensemble_report(&spec)?;
                    worst = worst
                        .min(r.slacks.error)
                        .min(r.slacks.psi)
                        .min(r.slacks.phi)
                        .min(r.slacks.holder + 1e-12);
                }
            }
        }
        Ok((worst >= 0.0, format!("worst slack {worst:e}")))
    });

    run("Poisson capacity root", &mut out, || {
        let p = figures::poisson_params()?;
        let c = poisson::capacity(&p)?;
        let e = PoissonWiretapParams::new(12.0, 5.0, 0.0, 0.0, 0.5)?;
        let s0 = poisson::capacity(&e)?.capacity;
        let ok = c.residual < 1e-12 && (s0 - 7.0 / std::f64::consts::E).abs() < 1e-10;
        Ok((ok, format!("residual {:e}, zero-dark capacity {s0:.12}", c.residual)))
    });

    run("Gaussian duality and critical rates", &mut out, || {
        let mut worst: f64 = 0.0;
        for rho in linspace(0.01, 0.99, 50) {
            for a in [0.1953125, 2.0, 10.0] {
                worst = worst.max(
                    (gaussian::tilted_exponent(a, -rho) - gaussian::gallager_type_secrecy_exponent(a, rho)).abs(),
                );
            }
        }
        let ordered = linspace(1e-3, 100.0, 1000)
            .into_iter()
            .all(|a| gaussian::critical_rate_h(a) <= gaussian::critical_rate_g(a));
        Ok((worst <= 1e-12 && ordered, format!("duality {worst:e}, R_Hc <= R_Gc: {ordered}")))
    });

    run("non-degraded Gaussian parameters rejected", &mut out, || {
        let rejected = GaussianWiretapParams::new(0.5, 1.0, 0.8, 0.5, 0.5).is_err();
        Ok((rejected, format!("rejected: {rejected}")))
    });

    for id in FIGURE_IDS {
        let t = Instant::now();
        let (passed, detail) = match figures::figure(id, figure_points) {
            Ok(fig) => {
                let bad: Vec<String> = fig.failures().iter().map(|c| c.name.clone()).collect();
                (bad.is_empty(), if bad.is_empty() { format!("{} checks", fig.checks.len()) } else { bad.join("; ") })
            }
            Err(e) => (false, format!("error: {e}")),
        };
        out.push(Outcome {
            name: format!("figure {id} shape checks"),
            passed,
            detail,
            seconds: t.elapsed().as_secs_f64(),
        });
    }

    SelftestReport { seed, outcomes: out }
}
