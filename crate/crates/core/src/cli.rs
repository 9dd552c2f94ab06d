//! Command-line runner. Every subcommand writes its outputs atomically into
//! the output directory together with `manifest_<subcommand>.json`.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::check::run_checks;
use crate::config::{load_config, RunConfig};
use crate::diffeo::{MapConfig, SpherePoint, Variant};
use crate::error::{Error, Result};
use crate::flux::{flux_example1, flux_example2, generator_loop_flux, FluxReport};
use crate::growth::{gamma_series, GridSpec, Schedule};
use crate::psi::PsiSpec;
use crate::volume::volume_pushforward_test;
use crate::weyl::{weyl_extrema, weyl_grid_values};

#[derive(Debug, Parser)]
#[command(name = "slowdiff", version, about = "Slow volume-preserving skew products: Weyl sums, growth, flux")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// TOML run configuration; built-in defaults when absent.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (overrides `output` in the config).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Grid values and extrema of W(N,·,α) and W'(N,·,α).
    Weyl {
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Growth sequence and ratio report.
    Growth {
        /// dyadic:<max n> or list:<n1,n2,…>
        #[arg(long)]
        schedule: Option<String>,
        /// power:<beta>, log or loglog
        #[arg(long)]
        psi: Option<String>,
    },
    /// Orbit of a point of S¹×S² (z = ±1 is a pole).
    Orbit {
        /// λ,θ,z
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        steps: u64,
    },
    /// Flux of example 1, example 2 or the generator loop.
    Flux {
        #[arg(long)]
        variant: FluxVariant,
    },
    /// Monte-Carlo volume preservation test.
    Volcheck {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        bins: u64,
    },
    /// Full invariant suite; exits nonzero on any failure.
    Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FluxVariant {
    Example1,
    Example2,
    Loop,
}

#[derive(Serialize)]
struct Manifest<'a> {
    subcommand: &'a str,
    args: String,
    files: Vec<String>,
    config: &'a RunConfig,
    version: &'static str,
    wall_time_s: f64,
}

/// Writes `bytes` to `dir/name` through a temporary file in `dir`.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    let path = dir.join(name);
    tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
    Ok(path)
}

fn json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(v).map_err(|e| Error::Config(e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

struct Outputs {
    dir: PathBuf,
    files: Vec<String>,
}

impl Outputs {
    fn put(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        write_atomic(&self.dir, name, bytes)?;
        self.files.push(name.into());
        Ok(())
    }
}

fn resolve_config(g: &GlobalArgs) -> Result<RunConfig> {
    let mut cfg = match &g.config {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(o) = &g.out {
        cfg.output = o.clone();
    }
    Ok(cfg)
}

fn parse_point(s: &str) -> Result<SpherePoint> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Config(format!("--point expects λ,θ,z, got '{s}'")))?;
    if v.len() != 3 {
        return Err(Error::Config(format!("--point expects three numbers, got {}", v.len())));
    }
    SpherePoint::from_coords(v[0], v[1], v[2])
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Weyl { .. } => "weyl",
        Command::Growth { .. } => "growth",
        Command::Orbit { .. } => "orbit",
        Command::Flux { .. } => "flux",
        Command::Volcheck { .. } => "volcheck",
        Command::Check => "check",
    }
}

/// Runs one subcommand and returns the process exit status.
pub fn run(cli: &Cli) -> Result<i32> {
    let start = Instant::now();
    let cfg = resolve_config(&cli.global)?;
    let mut out = Outputs {
        dir: cfg.output.clone(),
        files: Vec::new(),
    };
    let mut status = 0;
    match &cli.command {
        Command::Weyl { n, grid } => {
            let grid = grid.unwrap_or(cfg.grids.phi_grid);
            let f = &cfg.map.fourier;
            let values = weyl_grid_values(f, &cfg.map.alpha, *n, grid)?;
            let mut csv = String::from("x,W,Wprime\n");
            for (x, w, wp) in values {
                writeln!(csv, "{},{},{}", num(x), num(w), num(wp)).unwrap();
            }
            out.put("weyl.csv", csv.as_bytes())?;
            #[derive(Serialize)]
            struct WeylJson {
                #[serde(flatten)]
                scan: crate::weyl::WeylScanResult,
                degenerate_alpha: bool,
            }
            let scan = weyl_extrema(f, &cfg.map.alpha, *n, grid)?;
            out.put(
                "weyl.json",
                &json(&WeylJson {
                    scan,
                    degenerate_alpha: cfg.map.alpha.is_degenerate(),
                })?,
            )?;
        }
        Command::Growth { schedule, psi } => {
            let ns = match schedule {
                Some(s) => Schedule::parse(s)?,
                None => cfg.schedule.clone(),
            };
            let psi = match psi {
                Some(p) => PsiSpec::parse_flag(p)?,
                None => cfg.psi.clone(),
            };
            let grid = GridSpec {
                phi: cfg.grids.phi_grid,
                u: cfg.grids.u_grid,
            };
            let series = gamma_series(&cfg.map, &ns, grid, &psi)?;
            let mut csv = String::from("n,gamma,ratio,argmax_phi1,argmax_u,psi\n");
            for e in &series.entries {
                let u: Vec<String> = e.argmax.u.iter().map(|v| num(*v)).collect();
                writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    e.n,
                    num(e.gamma),
                    num(e.ratio),
                    num(e.argmax.phi1.value()),
                    u.join(";"),
                    num(e.psi)
                )
                .unwrap();
            }
            out.put("growth.csv", csv.as_bytes())?;
            out.put("growth.json", &json(&series.report(cfg.map.alpha.is_degenerate()))?)?;
        }
        Command::Orbit { point, steps } => {
            let p = parse_point(point)?;
            let rows = cfg.map.orbit(&p, *steps)?;
            let mut csv = String::from("step,lambda,theta,z,branch\n");
            for (k, q) in rows.iter().enumerate() {
                match *q {
                    SpherePoint::Chart { lambda, theta, z } => writeln!(
                        csv,
                        "{k},{},{},{},chart",
                        num(lambda.value()),
                        num(theta.value()),
                        num(z)
                    ),
                    SpherePoint::Pole { lambda, sign } => writeln!(
                        csv,
                        "{k},{},,{},pole",
                        num(lambda.value()),
                        num(sign as f64)
                    ),
                }
                .unwrap();
            }
            out.put("orbit.csv", csv.as_bytes())?;
        }
        Command::Flux { variant } => {
            let as_variant = |v: Variant| {
                MapConfig::new(cfg.map.fourier.clone(), cfg.map.alpha.clone(), cfg.map.bump, v)
            };
            let (name, report): (&str, FluxReport) = match variant {
                FluxVariant::Example1 => ("flux_example1.json", flux_example1(&as_variant(Variant::Example1)?)?),
                FluxVariant::Example2 => ("flux_example2.json", flux_example2(&as_variant(Variant::Example2)?)?),
                FluxVariant::Loop => ("flux_loop.json", generator_loop_flux()?),
            };
            out.put(name, &json(&report)?)?;
        }
        Command::Volcheck { m, samples, bins } => {
            let r = volume_pushforward_test(&cfg.map, *m, *samples, *bins, cfg.seed)?;
            out.put("volcheck.json", &json(&r)?)?;
        }
        Command::Check => {
            let r = run_checks(&cfg);
            for c in &r.checks {
                eprintln!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
            }
            out.put("check.json", &json(&r)?)?;
            if !r.passed {
                status = 1;
            }
        }
    }
    let name = command_name(&cli.command);
    let manifest = Manifest {
        subcommand: name,
        args: format!("{:?}", cli.command),
        files: out.files.clone(),
        config: &cfg,
        version: env!("CARGO_PKG_VERSION"),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    write_atomic(&out.dir, &format!("manifest_{name}.json"), &json(&manifest)?)?;
    Ok(status)
}

/// Entry point for the binary: parses arguments, runs, maps errors to exit 2.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
