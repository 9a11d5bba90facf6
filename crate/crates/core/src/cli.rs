//! Command-line surface over the geometry, contention, and sampling APIs.

use crate::contention::{self, NetworkModel};
use crate::geometry::{self, DiskChain, GeometryError, MAX_ENUMERATION_DISKS};
use crate::montecarlo::{self, SampleConfig};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Plain,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UnionMethod {
    /// Closed-form union area.
    Closed,
    /// Full inclusion-exclusion enumeration.
    Ie,
    /// Hit-or-miss sampling.
    Mc,
}

impl UnionMethod {
    fn name(self) -> &'static str {
        match self {
            Self::Closed => "closed",
            Self::Ie => "ie",
            Self::Mc => "mc",
        }
    }
}

#[derive(Parser)]
#[command(
    name = "mhc",
    version,
    about = "Contention adjustment for multihop CSMA/CA paths",
    long_about = "Computes overlap areas of collinear carrier-sense disks, the multihop \
                  contention adjustment factor, and adjusted contending-neighbor counts, \
                  with Monte Carlo cross-checks."
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Intersection area of two equal-radius circles.
    Lens {
        /// Distance between the two centers.
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        radius: f64,
        #[arg(long, value_enum, default_value = "plain")]
        format: OutputFormat,
    },
    /// Union area of a chain of carrier-sense disks.
    Union {
        /// Number of disks in the chain.
        #[arg(long)]
        hops: u32,
        /// Distance between neighboring centers.
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        spacing: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        radius: f64,
        #[arg(long, value_enum, default_value = "closed")]
        method: UnionMethod,
        /// Sample budget, used by the mc method.
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// RNG seed, used by the mc method.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "plain")]
        format: OutputFormat,
    },
    /// Contention adjustment factor for one hop count.
    Chi {
        /// Number of transmitters along the path.
        #[arg(long)]
        hops: u32,
        /// Carrier-sense range as a multiple of the transmission radius.
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, value_enum, default_value = "plain")]
        format: OutputFormat,
    },
    /// Adjustment factors and their hop-to-hop growth, one row per hop count.
    ChiTable {
        #[arg(long, default_value_t = 10)]
        max_hops: u32,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Expected contending neighbors with the multihop credit applied.
    Adjust {
        #[arg(long)]
        hops: u32,
        /// Nodes per unit area.
        #[arg(long, default_value_t = 0.005, allow_negative_numbers = true)]
        density: f64,
        /// Transmission radius.
        #[arg(long, default_value_t = 50.0, allow_negative_numbers = true)]
        r0: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        beta: f64,
        /// Report saturated-traffic counts, taking no overlap credit.
        #[arg(long)]
        no_adjust: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Cross-check the analytic results against the stochastic oracles.
    Validate {
        #[arg(long, default_value_t = 4)]
        hops: u32,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        beta: f64,
        /// Sample budget for the union-area check.
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Random deployments for the contender-count check.
        #[arg(long, default_value_t = 50)]
        trials: u32,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Distinct-contender ratio measured over random deployments.
    Deploy {
        #[arg(long)]
        hops: u32,
        #[arg(long, default_value_t = 0.005, allow_negative_numbers = true)]
        density: f64,
        #[arg(long, default_value_t = 50.0, allow_negative_numbers = true)]
        r0: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, default_value_t = 50)]
        trials: u32,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "plain")]
        format: OutputFormat,
    },
}

/// One analytic-versus-estimated comparison from the validate command.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationVerdict {
    pub check: String,
    pub analytic: f64,
    pub estimated: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ValidationVerdict {
    pub fn new(check: &str, analytic: f64, estimated: f64, tolerance: f64) -> Self {
        Self {
            check: check.to_owned(),
            analytic,
            estimated,
            tolerance,
            passed: (analytic - estimated).abs() <= tolerance,
        }
    }
}

enum Failure {
    /// Bad arguments or out-of-domain parameters; exits 2.
    Usage(String),
    /// A requested computation or cross-check failed; exits 1.
    Check(String),
}

impl Failure {
    fn usage(err: impl std::fmt::Display) -> Self {
        Self::Usage(err.to_string())
    }
}

/// Parses `std::env::args` and runs one subcommand, returning the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            2
        }
        Err(Failure::Check(message)) => {
            eprintln!("{message}");
            1
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Lens { t, radius, format } => cmd_lens(t, radius, format),
        Command::Union { hops, spacing, radius, method, samples, seed, format } => {
            cmd_union(hops, spacing, radius, method, SampleConfig::new(samples, seed), format)
        }
        Command::Chi { hops, beta, format } => cmd_chi(hops, beta, format),
        Command::ChiTable { max_hops, beta, format } => cmd_chi_table(max_hops, beta, format),
        Command::Adjust { hops, density, r0, beta, no_adjust, format } => {
            cmd_adjust(hops, density, r0, beta, no_adjust, format)
        }
        Command::Validate { hops, beta, samples, trials, seed, format } => {
            cmd_validate(hops, beta, SampleConfig::new(samples, seed), trials, format)
        }
        Command::Deploy { hops, density, r0, beta, trials, seed, format } => {
            cmd_deploy(hops, density, r0, beta, trials, seed, format)
        }
    }
}

fn fixed6(value: f64) -> String {
    format!("{value:.6}")
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string(value).expect("output structs serialize infallibly")
}

fn cmd_lens(t: f64, radius: f64, format: OutputFormat) -> Result<(), Failure> {
    #[derive(Serialize)]
    struct Output {
        t: f64,
        radius: f64,
        area: f64,
    }
    let area = geometry::lens_area(t, radius).map_err(Failure::usage)?;
    let rendered = match format {
        OutputFormat::Plain => fixed6(area),
        OutputFormat::Csv => {
            format!("t,radius,area\n{},{},{}", fixed6(t), fixed6(radius), fixed6(area))
        }
        OutputFormat::Json => to_json(&Output { t, radius, area }),
    };
    println!("{rendered}");
    Ok(())
}

fn cmd_union(
    hops: u32,
    spacing: f64,
    radius: f64,
    method: UnionMethod,
    config: SampleConfig,
    format: OutputFormat,
) -> Result<(), Failure> {
    #[derive(Serialize)]
    struct Output {
        hops: u32,
        spacing: f64,
        radius: f64,
        method: &'static str,
        area: f64,
    }
    #[derive(Serialize)]
    struct SampledOutput {
        hops: u32,
        spacing: f64,
        radius: f64,
        method: &'static str,
        mean: f64,
        std_error: f64,
        samples: u64,
    }
    let chain = DiskChain::new(hops, spacing, radius).map_err(Failure::usage)?;
    let rendered = match method {
        UnionMethod::Closed | UnionMethod::Ie => {
            let area = match method {
                UnionMethod::Closed => geometry::chain_union_closed_form(&chain),
                UnionMethod::Ie => chain_union_enumerated(&chain)?,
                UnionMethod::Mc => unreachable!(),
            };
            match format {
                OutputFormat::Plain => fixed6(area),
                OutputFormat::Csv => format!(
                    "hops,spacing,radius,method,area\n{hops},{},{},{},{}",
                    fixed6(spacing),
                    fixed6(radius),
                    method.name(),
                    fixed6(area)
                ),
                OutputFormat::Json => {
                    to_json(&Output { hops, spacing, radius, method: method.name(), area })
                }
            }
        }
        UnionMethod::Mc => {
            let estimate =
                montecarlo::estimate_union_area(&chain, config).map_err(Failure::usage)?;
            match format {
                OutputFormat::Plain => format!(
                    "{} ± {} (samples={})",
                    fixed6(estimate.mean),
                    fixed6(estimate.std_error),
                    estimate.samples
                ),
                OutputFormat::Csv => format!(
                    "mean,std_error,samples\n{},{},{}",
                    fixed6(estimate.mean),
                    fixed6(estimate.std_error),
                    estimate.samples
                ),
                OutputFormat::Json => to_json(&SampledOutput {
                    hops,
                    spacing,
                    radius,
                    method: method.name(),
                    mean: estimate.mean,
                    std_error: estimate.std_error,
                    samples: estimate.samples,
                }),
            }
        }
    };
    println!("{rendered}");
    Ok(())
}

/// Full enumeration, with the size cap reported as a failed computation
/// rather than a usage mistake.
fn chain_union_enumerated(chain: &DiskChain) -> Result<f64, Failure> {
    geometry::chain_union_inclusion_exclusion(chain).map_err(|err| match err {
        GeometryError::EnumerationTooLarge { .. } => Failure::Check(err.to_string()),
        other => Failure::usage(other),
    })
}

fn cmd_chi(hops: u32, beta: f64, format: OutputFormat) -> Result<(), Failure> {
    #[derive(Serialize)]
    struct Output {
        hops: u32,
        beta: f64,
        chi: f64,
    }
    let chi = contention::adjustment_factor(hops, beta).map_err(Failure::usage)?;
    let rendered = match format {
        OutputFormat::Plain => fixed6(chi),
        OutputFormat::Csv => format!("hops,beta,chi\n{hops},{},{}", fixed6(beta), fixed6(chi)),
        OutputFormat::Json => to_json(&Output { hops, beta, chi }),
    };
    println!("{rendered}");
    Ok(())
}

fn cmd_chi_table(max_hops: u32, beta: f64, format: OutputFormat) -> Result<(), Failure> {
    #[derive(Serialize)]
    struct Row {
        hops: u32,
        chi: f64,
        incremental_pct: Option<f64>,
    }
    if max_hops < 2 {
        return Err(Failure::Usage(format!("invalid max_hops = {max_hops}: must be >= 2")));
    }
    let mut rows = Vec::new();
    for hops in 2..=max_hops {
        let chi = contention::adjustment_factor(hops, beta).map_err(Failure::usage)?;
        // Row h reports the growth of chi from h - 1 to h transmitters.
        let incremental_pct = if hops >= 3 {
            Some(contention::incremental_increase(hops - 1).map_err(Failure::usage)?)
        } else {
            None
        };
        rows.push(Row { hops, chi, incremental_pct });
    }
    let rendered = match format {
        OutputFormat::Plain => {
            let mut out = String::new();
            for row in &rows {
                let _ = write!(out, "hops={} chi={}", row.hops, fixed6(row.chi));
                if let Some(pct) = row.incremental_pct {
                    let _ = write!(out, " incremental_pct={}", fixed6(pct));
                }
                out.push('\n');
            }
            out.trim_end().to_owned()
        }
        OutputFormat::Csv => {
            let mut out = String::from("hops,chi,incremental_pct");
            for row in &rows {
                let pct = row.incremental_pct.map(fixed6).unwrap_or_default();
                let _ = write!(out, "\n{},{},{}", row.hops, fixed6(row.chi), pct);
            }
            out
        }
        OutputFormat::Json => to_json(&rows),
    };
    println!("{rendered}");
    Ok(())
}

fn cmd_adjust(
    hops: u32,
    density: f64,
    r0: f64,
    beta: f64,
    no_adjust: bool,
    format: OutputFormat,
) -> Result<(), Failure> {
    let model = NetworkModel::from_density(density, r0, beta, 2.0, 1.0).map_err(Failure::usage)?;
    let report =
        if no_adjust { model.heavy_load_contenders(hops) } else { model.adjusted_contenders(hops) }
            .map_err(Failure::usage)?;
    let rendered = match format {
        OutputFormat::Plain => format!(
            "h={} chi={} nu_cs={} nu_cs_adjusted={} effective_area={}",
            report.hops,
            fixed6(report.chi),
            fixed6(report.nu_cs),
            fixed6(report.nu_cs_adjusted),
            fixed6(report.effective_area)
        ),
        OutputFormat::Csv => format!(
            "h,chi,nu_cs,nu_cs_adjusted,effective_area\n{},{},{},{},{}",
            report.hops,
            fixed6(report.chi),
            fixed6(report.nu_cs),
            fixed6(report.nu_cs_adjusted),
            fixed6(report.effective_area)
        ),
        OutputFormat::Json => to_json(&report),
    };
    println!("{rendered}");
    Ok(())
}

/// Square deployment region sized for the chain: at least twenty
/// carrier-sense radii across, grown if the chain itself needs more room.
fn deployment_model(density: f64, r0: f64, beta: f64, hops: u32) -> Result<NetworkModel, Failure> {
    let probe = NetworkModel::from_density(density, r0, beta, 2.0, 1.0).map_err(Failure::usage)?;
    let range = probe.carrier_sense_range();
    let chain_extent = (hops.max(1) - 1) as f64 * r0 + 4.0 * range;
    let side = (20.0 * range).max(chain_extent);
    let node_count = (density * side * side).round().max(1.0);
    NetworkModel::new(node_count, side * side, r0, beta, 2.0, 1.0).map_err(Failure::usage)
}

fn cmd_deploy(
    hops: u32,
    density: f64,
    r0: f64,
    beta: f64,
    trials: u32,
    seed: u64,
    format: OutputFormat,
) -> Result<(), Failure> {
    #[derive(Serialize)]
    struct Output {
        hops: u32,
        trials: u32,
        mean: f64,
        std_error: f64,
        expected: f64,
    }
    let model = deployment_model(density, r0, beta, hops)?;
    let expected = 1.0 - contention::adjustment_factor(hops, beta).map_err(Failure::usage)?;
    let estimate =
        montecarlo::run_deployment_trials(&model, hops, trials, seed).map_err(Failure::usage)?;
    let rendered = match format {
        OutputFormat::Plain => format!(
            "{} ± {} (expected {}, trials={})",
            fixed6(estimate.mean),
            fixed6(estimate.std_error),
            fixed6(expected),
            trials
        ),
        OutputFormat::Csv => format!(
            "mean,std_error,expected,trials\n{},{},{},{}",
            fixed6(estimate.mean),
            fixed6(estimate.std_error),
            fixed6(expected),
            trials
        ),
        OutputFormat::Json => to_json(&Output {
            hops,
            trials,
            mean: estimate.mean,
            std_error: estimate.std_error,
            expected,
        }),
    };
    println!("{rendered}");
    Ok(())
}

fn cmd_validate(
    hops: u32,
    beta: f64,
    config: SampleConfig,
    trials: u32,
    format: OutputFormat,
) -> Result<(), Failure> {
    let mut verdicts = Vec::new();
    let model = deployment_model(0.005, 50.0, beta, hops)?;
    let chain = model.contention_chain(hops).map_err(Failure::usage)?;
    let closed = geometry::chain_union_closed_form(&chain);

    if hops <= MAX_ENUMERATION_DISKS {
        let enumerated =
            geometry::chain_union_inclusion_exclusion(&chain).map_err(Failure::usage)?;
        verdicts.push(ValidationVerdict::new("ie_vs_closed", closed, enumerated, 1e-9 * closed));
    } else {
        eprintln!(
            "note: skipping ie_vs_closed, {hops} disks exceed the \
             {MAX_ENUMERATION_DISKS}-disk enumeration limit"
        );
    }

    let estimate = montecarlo::estimate_union_area(&chain, config).map_err(Failure::usage)?;
    verdicts.push(ValidationVerdict::new(
        "mc_union_vs_closed",
        closed,
        estimate.mean,
        3.0 * estimate.std_error,
    ));

    let expected_ratio = 1.0 - contention::adjustment_factor(hops, beta).map_err(Failure::usage)?;
    let deployed = montecarlo::run_deployment_trials(&model, hops, trials, config.seed)
        .map_err(Failure::usage)?;
    verdicts.push(ValidationVerdict::new(
        "deployment_vs_expected",
        expected_ratio,
        deployed.mean,
        0.02 * expected_ratio,
    ));

    let rendered = match format {
        OutputFormat::Plain => {
            let mut out = String::new();
            for verdict in &verdicts {
                let _ = writeln!(
                    out,
                    "[{}] {}: analytic={} estimated={} tolerance={}",
                    if verdict.passed { "PASS" } else { "FAIL" },
                    verdict.check,
                    fixed6(verdict.analytic),
                    fixed6(verdict.estimated),
                    fixed6(verdict.tolerance)
                );
            }
            out.trim_end().to_owned()
        }
        OutputFormat::Csv => {
            let mut out = String::from("check,analytic,estimated,tolerance,passed");
            for verdict in &verdicts {
                let _ = write!(
                    out,
                    "\n{},{},{},{},{}",
                    verdict.check,
                    fixed6(verdict.analytic),
                    fixed6(verdict.estimated),
                    fixed6(verdict.tolerance),
                    verdict.passed
                );
            }
            out
        }
        OutputFormat::Json => to_json(&verdicts),
    };
    println!("{rendered}");

    let failed = verdicts.iter().filter(|verdict| !verdict.passed).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!("{failed} of {} checks failed", verdicts.len())))
    }
}
