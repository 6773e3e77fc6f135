//! `planar-inv`: compute and check order-one invariants of planar curves.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use planar_inv_core::corpus::{base_curve, random_curves};
use planar_inv_core::exactness::{
    model_basis_check, verify_exactness, verify_window_rank, ExactnessReport, RankCertificate,
};
use planar_inv_core::io::{
    curve_to_json, parse_windows, read_config, read_text, write_text, WindowSpec,
};
use planar_inv_core::{
    compute, make_move, perturb, read_curve, render_svg, Error, MoveSite, RunConfig,
};
use serde::Serialize;

/// Exit status when a verification ran but did not pass.
const CHECK_FAILED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "planar-inv",
    version,
    about = "Order-one invariants of stable planar curves"
)]
struct Cli {
    /// JSON run configuration (tolerances, seed, trial counts).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Overrides the seed from the configuration.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Print F, G, F-hat, K, the Whitney number and per-crossing indices.
    Compute {
        curve: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        format: Format,
    },
    /// Perturb the curve repeatedly and compare the serialized F-hat.
    CheckInvariance {
        curve: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        /// Perturbation size as a fraction of the curve diameter.
        #[arg(long)]
        amplitude: Option<f64>,
    },
    /// Apply a J or S move described by a site file and report the delta.
    MoveTest { curve: PathBuf, site: PathBuf },
    /// Rank certificates and exactness reports for truncation windows.
    AlgebraVerify {
        windows: PathBuf,
        /// Also run the model basis check up to this depth.
        #[arg(long, value_name = "N")]
        basis_depth: Option<usize>,
    },
    /// Draw the curve with labelled crossings as SVG.
    Render {
        curve: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Write a base curve or a random trigonometric curve as JSON.
    Generate {
        /// Whitney number of the base curve to emit.
        #[arg(long, allow_negative_numbers = true, conflicts_with = "random")]
        base: Option<i64>,
        /// Emit a random stable curve drawn from the seed.
        #[arg(long)]
        random: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::GradingViolation { .. } => 3,
        Error::Io { .. }
        | Error::Json(_)
        | Error::Parse(_)
        | Error::MalformedCurve(_)
        | Error::SiteInvalid(_)
        | Error::WindowMisaligned(_)
        | Error::WrongKind { .. } => 1,
        _ => 2,
    }
}

fn report_error(e: &Error) {
    eprintln!("error: {e}");
    if let Error::NotStable(report) = e {
        for v in &report.violations {
            eprintln!("  {:?}: {}", v.kind, v.detail);
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct InvarianceReport {
    reference: String,
    trials: usize,
    amplitude: f64,
    identical: usize,
    stability_lost: usize,
    mismatches: Vec<Mismatch>,
    pass: bool,
}

#[derive(Serialize)]
struct Mismatch {
    seed: u64,
    invariant: String,
}

#[derive(Serialize)]
struct MoveReport {
    #[serde(flatten)]
    outcome: planar_inv_core::MoveOutcome,
    prediction_matches: Option<bool>,
}

#[derive(Serialize)]
struct WindowReport {
    window: WindowSpec,
    certificate: RankCertificate,
    exactness: ExactnessReport,
}

#[derive(Serialize)]
struct AlgebraReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    model_basis: Option<RankCertificate>,
    windows: Vec<WindowReport>,
    pass: bool,
}

fn run(cli: Cli) -> Result<u8, Error> {
    let mut cfg = match &cli.config {
        Some(p) => read_config(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let tol = cfg.tolerances.clone();

    match cli.command {
        Command::Compute { curve, format } => {
            let r = compute(&read_curve(&curve)?, &tol)?;
            match format {
                Format::Json => println!("{}", to_json(&r)),
                Format::Text => print!("{}", r.to_text()),
                Format::Both => print!("{}\n{}", to_json(&r), r.to_text()),
            }
            Ok(0)
        }
        Command::CheckInvariance {
            curve,
            trials,
            amplitude,
        } => {
            let c = read_curve(&curve)?;
            let reference = compute(&c, &tol)?.invariant.to_string();
            let trials = trials.unwrap_or(cfg.trials);
            let amplitude = amplitude.unwrap_or(cfg.amplitude_fraction) * c.diameter();
            let mut report = InvarianceReport {
                reference,
                trials,
                amplitude,
                identical: 0,
                stability_lost: 0,
                mismatches: Vec::new(),
                pass: true,
            };
            for t in 0..trials as u64 {
                let seed = cfg.seed.wrapping_add(t);
                let moved = match perturb(&c, seed, amplitude, &tol) {
                    Ok(m) => m,
                    Err(Error::StabilityLost(_)) => {
                        report.stability_lost += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                match compute(&moved, &tol) {
                    Ok(r) if r.invariant.to_string() == report.reference => report.identical += 1,
                    Ok(r) => report.mismatches.push(Mismatch {
                        seed,
                        invariant: r.invariant.to_string(),
                    }),
                    Err(e) => report.mismatches.push(Mismatch {
                        seed,
                        invariant: format!("error: {e}"),
                    }),
                }
            }
            report.pass = report.mismatches.is_empty();
            println!("{}", to_json(&report));
            println!("{}", if report.pass { "PASS" } else { "FAIL" });
            Ok(if report.pass { 0 } else { CHECK_FAILED })
        }
        Command::MoveTest { curve, site } => {
            let c = read_curve(&curve)?;
            let site: MoveSite = serde_json::from_str(&read_text(&site)?)?;
            let outcome = make_move(&c, &site, &tol)?;
            let prediction_matches = outcome.predicted().map(|p| p == outcome.delta);
            let ok = prediction_matches != Some(false);
            println!(
                "{}",
                to_json(&MoveReport {
                    outcome,
                    prediction_matches
                })
            );
            Ok(if ok { 0 } else { CHECK_FAILED })
        }
        Command::AlgebraVerify {
            windows,
            basis_depth,
        } => {
            let specs = parse_windows(&read_text(&windows)?)?;
            let model_basis = basis_depth.map(model_basis_check);
            let mut pass = model_basis.as_ref().is_none_or(|c| c.pass);
            let mut out = Vec::new();
            for spec in specs {
                let w = spec.window()?;
                let certificate = verify_window_rank(&w)?;
                let exactness = verify_exactness(&w, cfg.exactness_samples, cfg.seed)?;
                pass &= certificate.pass && exactness.pass;
                out.push(WindowReport {
                    window: spec,
                    certificate,
                    exactness,
                });
            }
            println!(
                "{}",
                to_json(&AlgebraReport {
                    model_basis,
                    windows: out,
                    pass
                })
            );
            Ok(if pass { 0 } else { CHECK_FAILED })
        }
        Command::Render { curve, out } => {
            write_text(&out, &render_svg(&read_curve(&curve)?, &tol))?;
            Ok(0)
        }
        Command::Generate { base, random, out } => {
            let c = if random {
                random_curves(1, cfg.seed, &tol).remove(0).curve
            } else {
                base_curve(base.unwrap_or(0))
            };
            emit(out.as_deref(), &(curve_to_json(&c) + "\n"))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            report_error(&e);
            ExitCode::from(exit_code(&e))
        }
    }
}
