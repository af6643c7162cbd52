//! Command-line frontend.

pub mod config;
pub mod output;
pub mod svg;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::dynamics::{acceleration, populations};
use crate::emission::{fluorescence, larmor, scale_fluorescence_to_larmor};
use crate::error::Error;
use crate::pulse::{
    area_constant, bandwidth_constant, condition_for_ratio, envelope_spectrum, mollow_condition, pulse_area,
    turn_on_duration, EnvelopeOrder,
};
use crate::scan::{scan_area, scan_intensity};
use crate::simulation::{simulate, SUPPORT_THRESHOLD};
use crate::spectra::find_triplet;
use crate::transform::uniform_omegas;
use crate::units::{au_to_fs, field_to_intensity, make_grid};
use config::{AxisKind, ModelKind, Overrides, RunConfig, ScanBlock};
use output::{verify_dir, OutputDir};

/// Failure classes mapped onto process exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(m) => CliError::Config(m),
            Error::Domain(_) | Error::Unsupported(_) | Error::GridMismatch(_) => {
                CliError::Config(e.to_string())
            }
            Error::NumericalInstability(_) | Error::Degenerate(_) | Error::Resolution(_) | Error::ScanPoint { .. } => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Numeric,
    Analytic,
    Heff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Area,
    Intensity,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    /// TOML run configuration.
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = ["fig1a", "fig1e", "fig1f", "fig1g", "fig3b", "fig3c", "fig3d"])]
    pub preset: Option<String>,
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Envelope order n or "flat".
    #[arg(long)]
    pub order: Option<String>,
    /// Pulse area θ/2π (sets τ).
    #[arg(long)]
    pub area_cycles: Option<f64>,
    /// Peak intensity in W/cm².
    #[arg(long)]
    pub intensity: Option<f64>,
    #[arg(long)]
    pub tau_fs: Option<f64>,
    #[arg(long)]
    pub no_filter: bool,
}

#[derive(Debug, Clone, clap::Args)]
pub struct OutArgs {
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Output formats; repeat or comma-separate. JSON metadata is always written.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Format::Csv, Format::Json, Format::Svg])]
    pub format: Vec<Format>,
    /// Overwrite existing files.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Parser)]
#[command(name = "rabi-absorb", version, about = "Resonant absorption spectra of a two-level atom in shaped pulses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one pulse and write time series, spectra and metadata.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sweep pulse area or intensity and write a heatmap dataset.
    Scan {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Scan axis when the configuration has no [scan] block.
        #[arg(long, value_enum)]
        axis: Option<AxisArg>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Print the triplet admissibility table for all envelope orders.
    Condition {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write envelope, turn-on derivative and envelope spectrum.
    PulseAnalyze {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Re-check the digests recorded in a run directory.
    Verify {
        dir: PathBuf,
    },
}

fn load_config(run: &RunArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match (&run.config, &run.preset) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            RunConfig::from_toml(&text)?
        }
        (None, Some(name)) => RunConfig::preset(name)?,
        (None, None) => RunConfig::preset("fig1a")?,
    };
    cfg.apply(&Overrides {
        model: run.model.map(|m| match m {
            ModelArg::Numeric => ModelKind::Numeric,
            ModelArg::Analytic => ModelKind::Analytic,
            ModelArg::Heff => ModelKind::Heff,
        }),
        order: run.order.clone(),
        area_cycles: run.area_cycles,
        intensity: run.intensity,
        tau_fs: run.tau_fs,
        no_filter: run.no_filter,
    });
    Ok(cfg)
}

fn config_echo(cfg: &RunConfig) -> Value {
    serde_json::to_value(cfg).expect("config serializes")
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn pulse_metadata(run: &config::ResolvedRun) -> Value {
    let spec = &run.spec;
    let theta = pulse_area(spec, &run.system);
    let verdict = mollow_condition(spec, &run.system).ok();
    json!({
        "theta": theta,
        "theta_cycles": theta / (2.0 * std::f64::consts::PI),
        "t_rabi_fs": au_to_fs(spec.rabi_period(&run.system)),
        "rabi_frequency_au": spec.rabi_frequency(&run.system),
        "tau_fs": au_to_fs(spec.tau),
        "peak_intensity_w_cm2": field_to_intensity(spec.peak_field()).ok(),
        "area_constant": area_constant(spec.order),
        "bandwidth_constant": finite_or_null(bandwidth_constant(spec.order)),
        "verdict": verdict.map(|v| json!({
            "tau_over_t_rabi": v.tau_over_t_rabi,
            "satisfied": v.satisfied,
            "margin_low": v.margin_low,
            "margin_high": finite_or_null(v.margin_high),
        })),
    })
}

pub fn cmd_simulate(cfg: &RunConfig, out: &OutArgs) -> Result<PathBuf, CliError> {
    let run = cfg.resolve()?;
    let hash = cfg.hash();
    let sim = simulate(&run.system, &run.spec, run.initial, run.model, &run.numerics)?;
    let omegas = &run.omegas;
    let rabi = run.spec.rabi_frequency(&run.system);

    let mut warnings = sim.warnings.clone();
    let emission = if run.emission {
        let acc = acceleration(&sim.trajectory, &run.system)?;
        let lar = larmor(&acc, omegas, None)?;
        let fl = fluorescence(&sim.trajectory, run.spec.omega0, run.gamma_filter_fraction * rabi.abs(), omegas)?;
        let fl = match scale_fluorescence_to_larmor(&fl, &lar) {
            Ok(s) => s,
            Err(e) => {
                warnings.push(format!("fluorescence left in arbitrary units: {e}"));
                fl
            }
        };
        Some((fl, lar))
    } else {
        None
    };
    let triplet = find_triplet(&sim.absorption.spectrum, run.spec.omega0, rabi, &run.triplet).ok();

    let csv = out.format.contains(&Format::Csv);
    let svg_on = out.format.contains(&Format::Svg);
    let mut names = Vec::new();
    if csv {
        names.extend(["timeseries.csv", "spectrum.csv"]);
    }
    if svg_on {
        names.push("spectrum.svg");
    }
    let mut dir = OutputDir::create(&out.out, out.force, &hash, &names)?;
    if csv {
        let (pa, pb) = populations(&sim.trajectory)?;
        let stride = run.time_stride;
        let g = sim.trajectory.grid;
        dir.write_csv(
            "timeseries.csv",
            &[
                ("t", "a.u."),
                ("E", "a.u."),
                ("A", "a.u."),
                ("p", "a.u."),
                ("pop_a", "1"),
                ("pop_b", "1"),
                ("delta_E", "a.u."),
            ],
            (0..g.len()).step_by(stride).map(|k| {
                vec![
                    g.time(k),
                    sim.field.values[k],
                    sim.potential.values[k],
                    sim.momentum.values[k],
                    pa.values[k],
                    pb.values[k],
                    sim.absorption.time_energy.values[k],
                ]
            }),
        )?;
        let mut cols = vec![("omega", "a.u."), ("absorption", "a.u.")];
        if emission.is_some() {
            cols.extend([("s_semiclassical", "arb."), ("s_quantum", "arb."), ("fluorescence", "a.u."), ("larmor", "a.u.")]);
        }
        dir.write_csv(
            "spectrum.csv",
            &cols,
            omegas.iter().enumerate().map(|(i, &w)| {
                let mut row = vec![w, sim.absorption.spectrum.values[i]];
                if let Some((fl, lar)) = &emission {
                    row.extend([fl.s_semiclassical[i], fl.s_quantum[i], fl.total[i], lar.w_total[i]]);
                }
                row
            }),
        )?;
    }
    if svg_on {
        let text = svg::line_plot(omegas, &sim.absorption.spectrum.values, "omega (a.u.)", "absorption (a.u.)", &hash);
        dir.write("spectrum.svg", &text)?;
    }
    let (pa, pb) = sim.trajectory.final_populations();
    let meta = json!({
        "command": "simulate",
        "model": run.model.label(),
        "pulse": pulse_metadata(&run),
        "photons": sim.absorption.photons,
        "absorbed_energy_au": sim.absorption.time_energy.last(),
        "filtered": sim.absorption.filtered,
        "final_populations": [pa, pb],
        "max_norm_drift": sim.trajectory.max_norm_drift(),
        "triplet": triplet,
        "emission": emission.as_ref().map(|(fl, _)| json!({
            "gamma_filter_au": fl.gamma_filter,
            "scale_factor": fl.scale_factor,
            "arbitrary_units": fl.arbitrary_units,
        })),
        "warnings": warnings,
    });
    dir.finish(config_echo(cfg), meta)
}

pub fn cmd_scan(cfg: &RunConfig, out: &OutArgs) -> Result<PathBuf, CliError> {
    let run = cfg.resolve()?;
    let hash = cfg.hash();
    let plan = run
        .scan
        .as_ref()
        .ok_or_else(|| CliError::Config("scan: configuration has no [scan] block (use --axis)".into()))?;
    let result = match plan.axis {
        AxisKind::Area => scan_area(&run.system, &run.spec, &plan.values, &run.omegas, &plan.settings)?,
        AxisKind::Intensity => scan_intensity(&run.system, &run.spec, &plan.values, &run.omegas, &plan.settings)?,
    };
    let axis = result.axis_name.label();
    let mut names = Vec::new();
    if out.format.contains(&Format::Csv) {
        names.extend(["scan.csv", "scan_points.csv"]);
    }
    if out.format.contains(&Format::Svg) {
        names.push("heatmap.svg");
    }
    let mut dir = OutputDir::create(&out.out, out.force, &hash, &names)?;
    if out.format.contains(&Format::Csv) {
        let rows = result.axis_values.iter().enumerate().flat_map(|(i, &x)| {
            let spectrum = &result.spectra[i];
            result.omegas.iter().zip(spectrum).map(move |(&w, &v)| vec![x, w, v])
        });
        dir.write_csv("scan.csv", &[(axis, "axis"), ("omega", "a.u."), ("value", "a.u.")], rows)?;
        dir.write_csv(
            "scan_points.csv",
            &[(axis, "axis"), ("photons", "1"), ("pop_a", "1"), ("pop_b", "1"), ("triplet", "bool"), ("rabi", "a.u.")],
            (0..result.axis_values.len()).map(|i| {
                vec![
                    result.axis_values[i],
                    result.photons[i],
                    result.populations_final[i].0,
                    result.populations_final[i].1,
                    f64::from(u8::from(result.triplet_flags[i])),
                    result.rabi_frequencies[i],
                ]
            }),
        )?;
    }
    if out.format.contains(&Format::Svg) {
        let y_label = match plan.axis {
            AxisKind::Area => "pulse area (Rabi cycles)",
            AxisKind::Intensity => "intensity (W/cm2)",
        };
        let text = svg::heatmap(
            &result.axis_values,
            &result.omegas,
            &result.spectra,
            run.linthresh,
            "omega (a.u.)",
            y_label,
            &hash,
        );
        dir.write("heatmap.svg", &text)?;
    }
    let meta = json!({
        "command": "scan",
        "axis": axis,
        "pulse": pulse_metadata(&run),
        "scan": result.metadata,
        "triplet_flags": result.triplet_flags,
        "photons": result.photons,
        "warnings": result.metadata.warnings,
    });
    dir.finish(config_echo(cfg), meta)
}

/// One row per order: (label, 𝒜ₙ, ℬₙ, τ/T_Rabi, satisfied).
pub fn condition_table(cfg: &RunConfig) -> Result<Vec<(String, f64, f64, f64, bool)>, CliError> {
    let run = cfg.resolve()?;
    let ratio = mollow_condition(&run.spec, &run.system)?.tau_over_t_rabi;
    let orders = (1..=10).map(EnvelopeOrder::Finite).chain(std::iter::once(EnvelopeOrder::FlatTop));
    Ok(orders
        .map(|o| {
            let r = condition_for_ratio(o, ratio);
            (o.label(), r.area_constant, r.bandwidth_constant, r.tau_over_t_rabi, r.satisfied)
        })
        .collect())
}

fn cmd_condition(cfg: &RunConfig) -> Result<(), CliError> {
    println!("{:>6} {:>8} {:>8} {:>10} {:>8}", "order", "A_n", "B_n", "tau/T_R", "verdict");
    for (label, a, b, r, ok) in condition_table(cfg)? {
        println!(
            "{label:>6} {a:>8.4} {:>8} {r:>10.4} {:>8}",
            if b.is_finite() { format!("{b:.4}") } else { "inf".to_string() },
            if ok { "pass" } else { "fail" }
        );
    }
    Ok(())
}

pub fn cmd_pulse_analyze(cfg: &RunConfig, out: &OutArgs) -> Result<(PathBuf, f64), CliError> {
    let run = cfg.resolve()?;
    let hash = cfg.hash();
    let spec = run.spec;
    let tau = spec.tau;
    let tau_prime = turn_on_duration(spec.order, tau);
    // The envelope alone needs no carrier resolution.
    let window = 2.0 * spec.support_half_width(SUPPORT_THRESHOLD);
    let grid = make_grid(window, tau / 4000.0, 0.1 * tau, 0.0)?;
    let w_max = if tau_prime > 0.0 { 8.0 * 2.0 * std::f64::consts::PI / tau_prime } else { 40.0 * 2.0 * std::f64::consts::PI / tau };
    let ws = uniform_omegas(-w_max, w_max, 2001)?;
    let lt = envelope_spectrum(&spec, &ws)?;

    let csv = out.format.contains(&Format::Csv);
    let names = if csv { vec!["envelope.csv", "envelope_spectrum.csv"] } else { vec![] };
    let mut dir = OutputDir::create(&out.out, out.force, &hash, &names)?;
    if csv {
        dir.write_csv(
            "envelope.csv",
            &[("t", "a.u."), ("envelope", "1"), ("d_envelope", "1/a.u."), ("d_envelope_sq", "1/a.u.")],
            grid.times().map(|t| {
                let l = spec.envelope(t);
                let d = spec.envelope_derivative(t);
                vec![t, l, d, 2.0 * l * d]
            }),
        )?;
        dir.write_csv(
            "envelope_spectrum.csv",
            &[("omega", "a.u."), ("power", "a.u.")],
            ws.iter().zip(&lt.values).map(|(&w, v)| vec![w, v.norm_sqr()]),
        )?;
    }
    let ratio = tau_prime / tau;
    let meta = json!({
        "command": "pulse-analyze",
        "order": spec.order.label(),
        "tau_fs": au_to_fs(tau),
        "turn_on_fs": au_to_fs(tau_prime),
        "turn_on_over_tau": ratio,
        "area_constant": area_constant(spec.order),
        "bandwidth_constant": finite_or_null(bandwidth_constant(spec.order)),
    });
    Ok((dir.finish(config_echo(cfg), meta)?, ratio))
}

fn cmd_verify(dir: &Path) -> Result<(), CliError> {
    let problems = verify_dir(dir)?;
    if problems.is_empty() {
        println!("ok: {}", dir.display());
        Ok(())
    } else {
        for p in &problems {
            eprintln!("{p}");
        }
        Err(CliError::Io(format!("{} problem(s) in {}", problems.len(), dir.display())))
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { run, out } => {
            let cfg = load_config(&run)?;
            let path = cmd_simulate(&cfg, &out)?;
            println!("wrote {}", path.display());
        }
        Command::Scan { run, out, axis, points } => {
            let mut cfg = load_config(&run)?;
            if cfg.scan.is_none() {
                let block = match axis {
                    Some(AxisArg::Intensity) => ScanBlock {
                        axis: AxisKind::Intensity,
                        start: 1e11,
                        stop: 1e14,
                        points: 61,
                        log: true,
                        ..ScanBlock::default()
                    },
                    Some(AxisArg::Area) => ScanBlock::default(),
                    None => return Err(CliError::Config("scan: no [scan] block in the configuration; pass --axis".into())),
                };
                cfg.scan = Some(block);
            } else if let (Some(a), Some(b)) = (axis, cfg.scan.as_mut()) {
                b.axis = match a {
                    AxisArg::Area => AxisKind::Area,
                    AxisArg::Intensity => AxisKind::Intensity,
                };
            }
            if let (Some(n), Some(b)) = (points, cfg.scan.as_mut()) {
                b.points = n;
            }
            let path = cmd_scan(&cfg, &out)?;
            println!("wrote {}", path.display());
        }
        Command::Condition { run } => cmd_condition(&load_config(&run)?)?,
        Command::PulseAnalyze { run, out } => {
            let cfg = load_config(&run)?;
            let (path, ratio) = cmd_pulse_analyze(&cfg, &out)?;
            println!("tau'/tau = {ratio:.4}");
            println!("wrote {}", path.display());
        }
        Command::Verify { dir } => cmd_verify(&dir)?,
    }
    Ok(())
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
