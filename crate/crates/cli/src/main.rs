//! `kaden`: velocity fields, energies and weak Euler checks of power-law and
//! Kaden-spiral vortex sheets from the command line.
//!
//! Every subcommand prints a JSON run record to stdout. Exit status is 0 when
//! the computation converged, 1 on usage or domain errors and 2 when a
//! quadrature did not reach its tolerance.

mod commands;
mod record;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kaden_core::measures::SheetMu;
use kaden_core::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "kaden", version, about = "Vortex-sheet velocity, energy and weak Euler computations")]
struct Cli {
    /// JSON file with quadrature settings and series order.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Compact single-line JSON instead of pretty-printed.
    #[arg(long, global = true)]
    compact: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Measure {
    Timezero,
    Kaden,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Method {
    Series,
    Direct,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Scheme {
    Listing,
    Adaptive,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PvPath {
    Excision,
    Reduction,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// PV∫_0^∞ t^(α-1)/(1-t) dt against π·cot(πα).
    PvLemma {
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "excision")]
        path: PvPath,
    },
    /// Normal velocity on the μ = 2/3 sheet, with the ε-table.
    Matching {
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Comma-separated excision half-widths, strictly decreasing.
        #[arg(long, value_delimiter = ',')]
        eps_schedule: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value = "listing")]
        scheme: Scheme,
        /// Print the `eps,value` table instead of the JSON record.
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Also write the table to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// ∫ |v|² over the circle of radius r.
    SurfaceEnergy {
        #[arg(long, value_enum)]
        measure: Measure,
        #[arg(long, value_parser = parse_mu)]
        mu: SheetMu,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long)]
        r: f64,
        #[arg(long, value_enum, default_value = "series")]
        method: Method,
    },
    /// Momentum pairing of the half-line sheet against a test field.
    Residual {
        #[arg(long, value_parser = parse_mu)]
        mu: SheetMu,
        /// JSON bump: {center:[x,y], radius, amplitude, profile:{type, order}}.
        #[arg(long)]
        field: PathBuf,
    },
    /// Decay, matching and pressure-continuity verdicts.
    Conditions {
        #[arg(long, value_parser = parse_mu)]
        mu: SheetMu,
    },
    /// Velocity on a grid: `x0,x1,nx,y0,y1,ny`.
    Velocity {
        #[arg(long, value_enum, default_value = "timezero")]
        measure: Measure,
        #[arg(long, value_parser = parse_mu)]
        mu: SheetMu,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, value_delimiter = ',', num_args = 1)]
        grid: Vec<f64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Inner and outer moments up to order n.
    Moments {
        #[arg(long, value_enum)]
        measure: Measure,
        #[arg(long, value_parser = parse_mu)]
        mu: SheetMu,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        n: u32,
    },
    /// Impulse vector of the α = 1/2 sheet.
    Impulse,
    /// Runs the acceptance criteria and reports each one.
    ReproducePaper {
        /// Comma-separated criterion ids; all when omitted.
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u32>>,
    },
}

/// Accepts `0.6667` or a fraction such as `2/3`; fractions give an exact `α`.
fn parse_mu(s: &str) -> Result<SheetMu, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: f64 = p.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
        let q: f64 = q.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
        if !(p > 0.0 && q > 0.0) {
            return Err("fraction terms must be positive".into());
        }
        SheetMu::new(p / q).map_err(|e| e.to_string())?;
        return SheetMu::from_alpha(2.0 - q / p).map_err(|e| e.to_string());
    }
    let mu: f64 = s.parse().map_err(|e| format!("{e}"))?;
    SheetMu::new(mu).map_err(|e| e.to_string())
}

fn load_config(path: Option<&PathBuf>) -> Result<RunConfig, String> {
    let cfg = match path {
        None => RunConfig::default(),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", p.display()))?
        }
    };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match load_config(cli.config.as_ref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match commands::run(cli.command, &cfg, cli.compact) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
