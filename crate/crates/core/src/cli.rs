//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::harness::{self, CampaignConfig, Claim, Ensemble, Grid, GridMode};
use crate::measures::VmaxMode;
use crate::network::{analyze_with, AnalysisOptions, NetworkSpec, Topology};
use crate::optimizer::{maximize, OptimizerConfig};
use crate::qstate::{RandomKind, StateFamily};

/// Exit status when a campaign finds counterexamples.
pub const EXIT_VIOLATIONS: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "nlocal", version, about = "n-local violation bounds for linear and star networks")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Master seed for every random draw.
    #[arg(long, global = true, env = "NLOCAL_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value = "printed-0.414")]
    pub vmax_mode: VmaxMode,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Campaign violation tolerance.
    #[arg(long, global = true, default_value_t = harness::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepFamily {
    Werner,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form B, concurrences, bounds and measures for a network file.
    Analyze {
        /// JSON network descriptor.
        network: PathBuf,
    },
    /// D_n over a visibility grid.
    Sweep {
        #[arg(long, value_enum, default_value = "werner")]
        family: SweepFamily,
        /// Network sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// `start:stop:step`.
        #[arg(long, default_value = "0:1:0.01")]
        v_grid: Grid,
        #[arg(long, value_enum, default_value = "identical")]
        grid_mode: GridMode,
    },
    /// Concurrence cells where the lower bound certifies a violation.
    Regions {
        #[arg(long, value_enum)]
        topology: Topology,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        resolution: usize,
    },
    /// Violation frontiers in the plane of the two largest singular values.
    Frontier {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        resolution: usize,
    },
    /// Seeded randomized test of a bound; exits with 2 on violations.
    Campaign {
        #[arg(long, value_enum)]
        claim: Claim,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, value_enum, default_value = "mixed-ginibre")]
        ensemble: RandomKind,
        /// Draw this many leading sources from the separable ensemble.
        #[arg(long, default_value_t = 0)]
        separable: usize,
        /// Use the sources of this network file in every trial.
        #[arg(long, conflicts_with_all = ["ensemble", "separable"])]
        network: Option<PathBuf>,
    },
    /// Numerical maximisation of the inequality over settings.
    Optimize {
        #[arg(long)]
        network: PathBuf,
        #[arg(long, default_value_t = 8)]
        starts: usize,
        #[arg(long, default_value_t = 5000)]
        max_sweeps: usize,
        /// Keep the chain's Bell-measurement frames standard.
        #[arg(long)]
        standard_frames: bool,
        /// Let the star centre's two factors per qubit be non-orthogonal.
        #[arg(long)]
        free_central: bool,
    },
    /// List state families and random ensembles.
    Families,
}

fn read_network(path: &Path) -> Result<NetworkSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    NetworkSpec::from_json(&text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn key_value_csv(pairs: &[(&str, String)]) -> String {
    let mut s = String::from("key,value\n");
    for (k, v) in pairs {
        s.push_str(&format!("{k},{v}\n"));
    }
    s
}

fn families_text() -> String {
    let examples = [
        StateFamily::Werner { v: 0.8 },
        StateFamily::BellDiagonal { weights: [0.7, 0.1, 0.1, 0.1] },
        StateFamily::RankTwoBellDiagonal { c: 0.6, s: 0.2 },
        StateFamily::XState { x1: 0.2, x2: 0.3, x3: 0.3, x4: 0.2, y1: 0.1, y2: 0.2 },
        StateFamily::HorodeckiMix { p: 0.8 },
        StateFamily::PureSchmidt { c: 0.5 },
        StateFamily::Bell { index: 0 },
    ];
    let mut s = String::from("state families (JSON source descriptors):\n");
    for f in &examples {
        s.push_str(&format!("  {:<20} {}\n", f.tag(), serde_json::to_string(f).expect("serializable")));
    }
    s.push_str("  explicit             {\"family\":\"explicit\",\"re\":[[..4x4..]],\"im\":[[..4x4..]]}\n");
    s.push_str("random ensembles:\n");
    for k in RandomKind::ALL {
        s.push_str(&format!("  {k}\n"));
    }
    s.push_str("campaign claims:\n");
    for c in Claim::ALL {
        s.push_str(&format!("  {c}\n"));
    }
    s
}

/// Runs one command, writing its output to `--out` or `stdout`. Returns the
/// process exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let cfg = &cli.config;
    let mut exit = 0;
    let output = match &cli.command {
        Command::Analyze { network } => {
            let net = read_network(network)?;
            let report = analyze_with(&net, &AnalysisOptions { vmax_mode: cfg.vmax_mode });
            match cfg.format {
                Format::Json => json(&report)?,
                Format::Csv => {
                    let mut pairs = vec![
                        ("topology", report.topology.to_string()),
                        ("n", report.n.to_string()),
                        ("B", harness::fmt_float(report.b)),
                        ("violation", report.violation.to_string()),
                        ("K", harness::fmt_float(report.k)),
                        ("m", harness::fmt_float(report.measures.m)),
                        ("delta_n", harness::fmt_float(report.measures.delta_n)),
                    ];
                    let labels: Vec<String> = (1..=report.n).map(|i| format!("c{i}")).collect();
                    for (label, c) in labels.iter().zip(&report.concurrences) {
                        pairs.push((label, harness::fmt_float(*c)));
                    }
                    for e in report.upper_bounds.iter().chain(&report.lower_bounds) {
                        pairs.push((&e.label, e.value.map(harness::fmt_float).unwrap_or_default()));
                    }
                    key_value_csv(&pairs)
                }
            }
        }
        Command::Sweep { family: SweepFamily::Werner, n, v_grid, grid_mode } => {
            let rows = harness::werner_sweep(n, v_grid, *grid_mode, cfg.vmax_mode)?;
            match cfg.format {
                Format::Json => json(&rows)?,
                Format::Csv => harness::sweep_csv(&rows)?,
            }
        }
        Command::Regions { topology, n, resolution } => {
            let grid = harness::region_scan(*topology, *n, *resolution)?;
            match cfg.format {
                Format::Json => json(&grid)?,
                Format::Csv => harness::region_csv(&grid)?,
            }
        }
        Command::Frontier { n, resolution } => {
            let points = harness::frontier_scan(n, *resolution)?;
            match cfg.format {
                Format::Json => json(&points)?,
                Format::Csv => harness::frontier_csv(&points)?,
            }
        }
        Command::Campaign { claim, n, trials, ensemble, separable, network } => {
            let ensemble = match network {
                Some(path) => Ensemble::Fixed(read_network(path)?.sources().to_vec()),
                None => Ensemble::Random { kind: *ensemble, separable: *separable },
            };
            let config = CampaignConfig {
                tolerance: cfg.tolerance,
                ..CampaignConfig::new(*claim, *n, *trials, ensemble, cfg.seed)
            };
            let report = harness::run_campaign(&config)?;
            if !report.violations.is_empty() {
                exit = EXIT_VIOLATIONS;
            }
            match cfg.format {
                Format::Json => json(&report)?,
                Format::Csv => harness::campaign_csv(&report)?,
            }
        }
        Command::Optimize { network, starts, max_sweeps, standard_frames, free_central } => {
            let net = read_network(network)?;
            let config = OptimizerConfig {
                starts: *starts,
                max_sweeps: *max_sweeps,
                optimize_frames: !standard_frames,
                orthogonal_central: !free_central,
                ..OptimizerConfig::default()
            };
            let result = maximize(&net, &config, cfg.seed)?;
            let closed_form = crate::network::b_value(&net);
            match cfg.format {
                Format::Json => json(&serde_json::json!({
                    "topology": net.topology(),
                    "n": net.n(),
                    "value": result.value,
                    "closed_form": closed_form,
                    "iterations": result.iterations,
                    "converged": result.converged,
                    "start": result.start,
                    "settings": result.settings,
                }))?,
                Format::Csv => key_value_csv(&[
                    ("topology", net.topology().to_string()),
                    ("n", net.n().to_string()),
                    ("value", harness::fmt_float(result.value)),
                    ("closed_form", harness::fmt_float(closed_form)),
                    ("iterations", result.iterations.to_string()),
                    ("converged", result.converged.to_string()),
                ]),
            }
        }
        Command::Families => families_text(),
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, output)?,
        None => stdout.write_all(output.as_bytes())?,
    }
    Ok(exit)
}
