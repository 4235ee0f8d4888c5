use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wiretap_cli::figures::{self, FIGURE_IDS};
use wiretap_cli::output::{emit_curves, emit_report, render, write_file, Format, Named};
use wiretap_cli::selftest::selftest;
use wiretap_cli::CliError;
use wiretap_core::capacity::capacity_general;
use wiretap_core::channel::is_more_capable;
use wiretap_core::config::{ChannelConfig, EnsembleConfig};
use wiretap_core::ensemble::{ensemble_report, monte_carlo_divergence, monte_carlo_error};
use wiretap_core::gaussian::{self, GaussianWiretapParams, Variant};
use wiretap_core::poisson::{self, ConcatenationParams, PoissonWiretapParams};
use wiretap_core::tradeoff::{tradeoff_scenarios, Grids, Mechanism};

/// Reliability and secrecy exponents, secrecy capacities and random-coding
/// checks for wiretap channels with a cost constraint.
///
/// Exit status: 0 ok, 1 usage, 2 precondition violation, 3 property failure.
#[derive(Debug, Parser)]
#[command(name = "wiretap", version)]
struct Cli {
    /// JSON document describing the channel pair (or ensemble).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file, or directory when several curves are written. Default: stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Rates sampled per curve.
    #[arg(long, global = true, default_value_t = 50)]
    points: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// δ-secrecy capacity of the configured pair under its cost cap.
    Capacity {
        /// Auxiliary alphabet size searched when the pair is not more capable.
        #[arg(long, default_value_t = 3)]
        aux_dim: usize,
    },
    /// F_c over [0, I_B] and H_c over [0, I_B + I_E] for the configured input law.
    Exponents {
        /// Print F_c and H_c at the configured (rate_b, rate_e) instead of curves.
        #[arg(long)]
        at: bool,
    },
    /// Curves under one of the four tradeoff mechanisms.
    Tradeoff {
        #[arg(long)]
        mechanism: Mechanism,
        /// Comma-separated sweep values (R_B, Δ, ε_v or Γ).
        #[arg(long, value_delimiter = ',', required = true)]
        sweep: Vec<f64>,
    },
    /// Discretized Poisson wiretap channel, rates in nats per second.
    Poisson {
        #[command(subcommand)]
        what: PoissonCmd,
        #[command(flatten)]
        params: PoissonArgs,
    },
    /// Gaussian wiretap channel.
    Gaussian {
        #[command(subcommand)]
        what: GaussianCmd,
        #[command(flatten)]
        params: GaussianArgs,
    },
    /// Exact ensemble averages against their random-coding bounds.
    Ensemble {
        /// Also estimate both averages from this many sampled codebooks.
        #[arg(long)]
        monte_carlo: Option<usize>,
    },
    /// Write the data behind figures (all of 2..=13 by default).
    Figures {
        ids: Vec<u8>,
    },
    /// Run the invariant suite.
    Selftest,
}

#[derive(Debug, Subcommand)]
enum PoissonCmd {
    Capacity,
    Curves,
    /// Curves after prepending the (a, b) input channel.
    Concat {
        #[arg(long, default_value_t = 0.98)]
        a: f64,
        #[arg(long, default_value_t = 0.02)]
        b: f64,
    },
}

#[derive(Debug, Args)]
struct PoissonArgs {
    #[arg(long, default_value_t = 12.0)]
    a_y: f64,
    #[arg(long, default_value_t = 5.0)]
    a_z: f64,
    #[arg(long, default_value_t = 0.5)]
    lambda_y: f64,
    #[arg(long, default_value_t = 1.5)]
    lambda_z: f64,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    /// Probability of the "on" input.
    #[arg(long, default_value_t = figures::POISSON_Q)]
    q: f64,
    #[arg(long, default_value_t = figures::POISSON_RHO_MAX)]
    rho_max: f64,
}

#[derive(Debug, Subcommand)]
enum GaussianCmd {
    Capacity,
    Reliability {
        #[arg(long, default_value = "tilted")]
        variant: Variant,
    },
    Secrecy {
        #[arg(long, default_value = "tilted")]
        variant: Variant,
        /// Upper end of the R_E axis; defaults to Bob's capacity.
        #[arg(long)]
        rate_max: Option<f64>,
    },
}

#[derive(Debug, Args)]
struct GaussianArgs {
    #[arg(long, default_value_t = 1.0)]
    a_y: f64,
    #[arg(long, default_value_t = 0.5)]
    a_z: f64,
    #[arg(long, default_value_t = 0.5)]
    sigma_y: f64,
    #[arg(long, default_value_t = 0.8)]
    sigma_z: f64,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
}

fn read_config(path: Option<&Path>) -> Result<String, CliError> {
    let path = path.ok_or_else(|| CliError::Usage("this command needs --config <path.json>".into()))?;
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

#[derive(Serialize)]
struct CapacityReport {
    value: f64,
    input: Vec<f64>,
    aux: Option<Vec<Vec<f64>>>,
    more_capable: bool,
    heuristic: bool,
    worst_gap: f64,
}

fn capacity(cli: &Cli, aux_dim: usize) -> Result<(), CliError> {
    let cfg = ChannelConfig::from_json_str(&read_config(cli.config.as_deref())?)?;
    let pair = cfg.pair()?;
    let (costs, gamma) = cfg.costs()?;
    let c = capacity_general(&pair, &costs, gamma, aux_dim)?;
    let mc = is_more_capable(&pair, 1001)?;
    emit_report(
        &CapacityReport {
            value: c.value,
            input: c.input,
            aux: c.aux,
            more_capable: c.more_capable,
            heuristic: c.heuristic,
            worst_gap: mc.worst_gap,
        },
        cli.out.as_deref(),
    )
}

fn exponents(cli: &Cli, at: bool) -> Result<(), CliError> {
    let cfg = ChannelConfig::from_json_str(&read_config(cli.config.as_deref())?)?;
    let q = cfg.query()?;
    if at {
        #[derive(Serialize)]
        struct At {
            reliability: wiretap_core::ExponentValue,
            secrecy: wiretap_core::ExponentValue,
        }
        return emit_report(
            &At {
                reliability: q.reliability_function()?,
                secrecy: q.secrecy_function()?,
            },
            cli.out.as_deref(),
        );
    }
    let grids = Grids::around(&q, cli.points.max(2));
    let curves = [
        Named::new("reliability", q.reliability_curve(&grids.sum_rates)?),
        Named::new("secrecy", q.secrecy_curve(&grids.eve_rates)?),
    ];
    emit_curves(&curves, cli.out.as_deref(), cli.format)
}

fn tradeoff(cli: &Cli, mechanism: Mechanism, sweep: &[f64]) -> Result<(), CliError> {
    let cfg = ChannelConfig::from_json_str(&read_config(cli.config.as_deref())?)?;
    let q = cfg.query()?;
    let rep = tradeoff_scenarios(&q, mechanism, sweep, &Grids::around(&q, cli.points.max(2)))?;
    let mut curves = Vec::new();
    for (i, s) in rep.scenarios.iter().enumerate() {
        curves.push(Named::new(format!("{mechanism}_{i}_reliability"), s.reliability.clone()));
        curves.push(Named::new(format!("{mechanism}_{i}_secrecy"), s.secrecy.clone()));
    }
    emit_curves(&curves, cli.out.as_deref(), cli.format)?;
    for c in &rep.checks {
        eprintln!("{} {} (worst slack {:e})", if c.passed { "ok  " } else { "FAIL" }, c.name, c.worst_slack);
    }
    if rep.passed() {
        Ok(())
    } else {
        Err(CliError::Property(format!("{mechanism} ordering checks failed")))
    }
}

fn poisson_cmd(cli: &Cli, what: &PoissonCmd, a: &PoissonArgs) -> Result<(), CliError> {
    let p = PoissonWiretapParams::new(a.a_y, a.a_z, a.lambda_y, a.lambda_z, a.gamma)?;
    match what {
        PoissonCmd::Capacity => emit_report(&poisson::capacity(&p)?, cli.out.as_deref()),
        PoissonCmd::Curves => {
            let curves = [
                Named::new("poisson_reliability", poisson::reliability_curve(&p, a.q, cli.points)?),
                Named::new("poisson_secrecy", poisson::secrecy_curve(&p, a.q, cli.points, a.rho_max)?),
            ];
            emit_curves(&curves, cli.out.as_deref(), cli.format)
        }
        PoissonCmd::Concat { a: ca, b: cb } => {
            let conc = ConcatenationParams::new(*ca, *cb)?;
            let (rel, sec) = poisson::concatenated_curves(&p, &conc, a.q, cli.points, a.rho_max)?;
            let curves = [
                Named::new("poisson_reliability_concat", rel),
                Named::new("poisson_secrecy_concat", sec),
            ];
            emit_curves(&curves, cli.out.as_deref(), cli.format)
        }
    }
}

fn gaussian_cmd(cli: &Cli, what: &GaussianCmd, a: &GaussianArgs) -> Result<(), CliError> {
    let p = GaussianWiretapParams::new(a.a_y, a.a_z, a.sigma_y, a.sigma_z, a.gamma)?;
    match what {
        GaussianCmd::Capacity => {
            #[derive(Serialize)]
            struct Report {
                capacity: f64,
                snr_bob: f64,
                snr_eve: f64,
                critical_rate_h: f64,
                critical_rate_g: f64,
            }
            let (h, g) = gaussian::critical_rates(&p);
            emit_report(
                &Report {
                    capacity: gaussian::capacity(&p),
                    snr_bob: p.snr_bob(),
                    snr_eve: p.snr_eve(),
                    critical_rate_h: h,
                    critical_rate_g: g,
                },
                cli.out.as_deref(),
            )
        }
        GaussianCmd::Reliability { variant } => {
            let c = gaussian::reliability_curve(&p, *variant, cli.points)?;
            emit_curves(&[Named::new(format!("gaussian_reliability_{variant}"), c)], cli.out.as_deref(), cli.format)
        }
        GaussianCmd::Secrecy { variant, rate_max } => {
            let top = rate_max.unwrap_or_else(|| p.bob_capacity());
            let c = gaussian::secrecy_curve(&p, *variant, cli.points, top)?;
            emit_curves(&[Named::new(format!("gaussian_secrecy_{variant}"), c)], cli.out.as_deref(), cli.format)
        }
    }
}

fn ensemble(cli: &Cli, monte_carlo: Option<usize>) -> Result<(), CliError> {
    let spec = EnsembleConfig::from_json_str(&read_config(cli.config.as_deref())?)?.spec()?;
    let report = ensemble_report(&spec)?;
    #[derive(Serialize)]
    struct Full {
        #[serde(flatten)]
        report: wiretap_core::ensemble::EnsembleReport,
        holds: bool,
        monte_carlo_error: Option<wiretap_core::ensemble::Estimate>,
        monte_carlo_divergence: Option<wiretap_core::ensemble::Estimate>,
    }
    let (mut mc_e, mut mc_d) = (None, None);
    if let Some(n) = monte_carlo {
        if n < 2 {
            return Err(CliError::Usage("--monte-carlo needs at least 2 codebooks".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        mc_e = Some(monte_carlo_error(&spec, n, &mut rng));
        mc_d = Some(monte_carlo_divergence(&spec, n, &mut rng));
    }
    emit_report(
        &Full {
            report,
            holds: report.holds(),
            monte_carlo_error: mc_e,
            monte_carlo_divergence: mc_d,
        },
        cli.out.as_deref(),
    )?;
    if report.holds() {
        Ok(())
    } else {
        Err(CliError::Property("exact average exceeds its bound".into()))
    }
}

fn figures_cmd(cli: &Cli, ids: &[u8]) -> Result<(), CliError> {
    let ids: Vec<u8> = if ids.is_empty() { FIGURE_IDS.collect() } else { ids.to_vec() };
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
    let mut failed = Vec::new();
    for id in ids {
        let fig = figures::figure(id, cli.points)?;
        for c in &fig.curves {
            let p = dir.join(format!("{}.{}", c.name, cli.format.extension()));
            write_file(&p, &render(&c.curve, cli.format))?;
        }
        for c in &fig.checks {
            println!("fig{:02} {} {} ({})", id, if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
            if !c.passed {
                failed.push(format!("figure {id}: {}", c.name));
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Property(failed.join("; ")))
    }
}

fn selftest_cmd(cli: &Cli) -> Result<(), CliError> {
    let rep = selftest(cli.seed, 20);
    match cli.format {
        Format::Json => emit_report(&rep, cli.out.as_deref())?,
        Format::Csv => {
            for o in &rep.outcomes {
                println!(
                    "{} {:<45} {:>7.2}s  {}",
                    if o.passed { "ok  " } else { "FAIL" },
                    o.name,
                    o.seconds,
                    o.detail
                );
            }
        }
    }
    if rep.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = rep.outcomes.iter().filter(|o| !o.passed).map(|o| o.name.as_str()).collect();
        Err(CliError::Property(names.join("; ")))
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Capacity { aux_dim } => capacity(cli, *aux_dim),
        Command::Exponents { at } => exponents(cli, *at),
        Command::Tradeoff { mechanism, sweep } => tradeoff(cli, *mechanism, sweep),
        Command::Poisson { what, params } => poisson_cmd(cli, what, params),
        Command::Gaussian { what, params } => gaussian_cmd(cli, what, params),
        Command::Ensemble { monte_carlo } => ensemble(cli, *monte_carlo),
        Command::Figures { ids } => figures_cmd(cli, ids),
        Command::Selftest => selftest_cmd(cli),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
