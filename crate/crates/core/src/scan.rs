//! Parameter sweeps over pulse area and peak intensity.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{acceleration, InitialState, TwoLevelSystem};
use crate::emission::{fluorescence, larmor, scale_fluorescence_to_larmor, DEFAULT_FILTER_FRACTION};
use crate::error::{Error, Result};
use crate::pulse::{pulse_area, tau_for_area, PulseSpec};
use crate::simulation::{simulate, Model, Numerics};
use crate::spectra::{find_triplet, TripletParams, TripletReport};
use crate::transform::{check_omegas, Spectrum};
use crate::units::{field_to_intensity, intensity_to_field};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "RABI_ABSORB_THREADS";

/// Peak intensity (W/cm²) above which the two-level picture is flagged.
pub const TWO_LEVEL_CEILING: f64 = 1e13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanAxis {
    /// θ/2π, completed Rabi cycles.
    PulseAreaCycles,
    /// Peak intensity in W/cm².
    Intensity,
}

impl ScanAxis {
    pub fn label(&self) -> &'static str {
        match self {
            ScanAxis::PulseAreaCycles => "pulse_area_cycles",
            ScanAxis::Intensity => "intensity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    #[default]
    Absorption,
    /// Fluorescence scaled to the Larmor spectrum of the same run.
    Fluorescence,
    Larmor,
}

/// How the pulse area is changed in an area scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AreaMode {
    /// Scale τ at fixed A₀.
    #[default]
    Duration,
    /// Scale A₀ at fixed τ.
    Amplitude,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSettings {
    pub model: Model,
    pub numerics: Numerics,
    pub initial: InitialState,
    pub observable: Observable,
    pub area_mode: AreaMode,
    pub triplet: TripletParams,
    /// Γ_F in units of the point's Ω₀.
    pub filter_fraction: f64,
}

impl Default for ScanSettings {
    fn default() -> Self {
        Self {
            model: Model::Numeric,
            numerics: Numerics::default(),
            initial: InitialState::ground(),
            observable: Observable::Absorption,
            area_mode: AreaMode::Duration,
            triplet: TripletParams::default(),
            filter_fraction: DEFAULT_FILTER_FRACTION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMetadata {
    pub observable: Observable,
    pub model: String,
    pub order: String,
    pub area_mode: AreaMode,
    pub threads: usize,
    pub warnings: Vec<String>,
}

/// One row of a scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub spectrum: Vec<f64>,
    pub populations_final: (f64, f64),
    pub photons: f64,
    /// `None` when the grid is too coarse for the point's Rabi frequency.
    pub triplet: Option<TripletReport>,
    pub peak_intensity: f64,
    pub rabi_frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub axis_name: ScanAxis,
    pub axis_values: Vec<f64>,
    pub omegas: Vec<f64>,
    /// axis × ω.
    pub spectra: Vec<Vec<f64>>,
    pub populations_final: Vec<(f64, f64)>,
    pub photons: Vec<f64>,
    pub triplet_flags: Vec<bool>,
    pub triplets: Vec<Option<TripletReport>>,
    pub rabi_frequencies: Vec<f64>,
    pub metadata: ScanMetadata,
}

/// Worker count: [`THREADS_ENV`] if set to a positive integer, else all cores.
pub fn worker_count() -> usize {
    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .map_or(cores, |n| n.min(cores))
}

/// 81 points in [0.1, 4.0] Rabi cycles.
pub fn default_area_axis() -> Vec<f64> {
    (0..81).map(|k| 0.1 + k as f64 * 3.9 / 80.0).collect()
}

/// 61 log-spaced points in [10¹¹, 10¹⁴] W/cm².
pub fn default_intensity_axis() -> Vec<f64> {
    (0..61).map(|k| 10f64.powf(11.0 + k as f64 * 3.0 / 60.0)).collect()
}

fn check_axis(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Config("scan axis is empty".into()));
    }
    if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::Config("scan axis values must be finite and positive".into()));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("scan axis must be strictly increasing".into()));
    }
    Ok(())
}

/// Pulse with area θ = 2π·cycles, reached by the configured [`AreaMode`].
pub fn spec_for_area(system: &TwoLevelSystem, base: &PulseSpec, cycles: f64, mode: AreaMode) -> Result<PulseSpec> {
    let theta = 2.0 * PI * cycles;
    match mode {
        AreaMode::Duration => base.with_tau(tau_for_area(base, system, theta)?),
        AreaMode::Amplitude => {
            let current = pulse_area(base, system);
            if current == 0.0 {
                return Err(Error::Config("zero amplitude pulse cannot be rescaled to an area".into()));
            }
            base.with_amplitude(base.amplitude * theta / current)
        }
    }
}

/// Pulse with peak intensity `intensity` (W/cm²) at the base duration.
pub fn spec_for_intensity(base: &PulseSpec, intensity: f64) -> Result<PulseSpec> {
    base.with_amplitude(intensity_to_field(intensity)? / base.omega0)
}

/// Evaluates a single scan point. Pure in (spec, settings, ω grid).
pub fn run_point(system: &TwoLevelSystem, spec: &PulseSpec, omegas: &[f64], settings: &ScanSettings) -> Result<ScanRow> {
    let numerics = Numerics {
        omegas: Some(omegas.to_vec()),
        ..settings.numerics.clone()
    };
    let out = simulate(system, spec, settings.initial, settings.model, &numerics)?;
    let rabi = spec.rabi_frequency(system);
    let spectrum = match settings.observable {
        Observable::Absorption => out.absorption.spectrum.values.clone(),
        Observable::Larmor | Observable::Fluorescence => {
            let acc = acceleration(&out.trajectory, system)?;
            let lar = larmor(&acc, omegas, None)?;
            if settings.observable == Observable::Larmor {
                lar.w_total
            } else {
                let fl = fluorescence(&out.trajectory, spec.omega0, settings.filter_fraction * rabi.abs(), omegas)?;
                match scale_fluorescence_to_larmor(&fl, &lar) {
                    Ok(scaled) => scaled.total,
                    Err(_) => fl.total,
                }
            }
        }
    };
    let triplet = match find_triplet(&Spectrum::new(omegas.to_vec(), spectrum.clone())?, spec.omega0, rabi, &settings.triplet) {
        Ok(r) => Some(r),
        Err(Error::Resolution(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(ScanRow {
        spectrum,
        populations_final: out.trajectory.final_populations(),
        photons: out.absorption.photons,
        triplet,
        peak_intensity: field_to_intensity(spec.peak_field())?,
        rabi_frequency: rabi,
    })
}

fn run_all(
    system: &TwoLevelSystem,
    axis: ScanAxis,
    axis_values: &[f64],
    specs: Vec<PulseSpec>,
    omegas: &[f64],
    settings: &ScanSettings,
    order: String,
) -> Result<ScanResult> {
    let threads = worker_count();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let rows: Vec<Result<ScanRow>> = pool.install(|| {
        specs
            .par_iter()
            .map(|spec| run_point(system, spec, omegas, settings))
            .collect()
    });

    let mut result = ScanResult {
        axis_name: axis,
        axis_values: axis_values.to_vec(),
        omegas: omegas.to_vec(),
        spectra: Vec::with_capacity(rows.len()),
        populations_final: Vec::new(),
        photons: Vec::new(),
        triplet_flags: Vec::new(),
        triplets: Vec::new(),
        rabi_frequencies: Vec::new(),
        metadata: ScanMetadata {
            observable: settings.observable,
            model: settings.model.label().to_string(),
            order,
            area_mode: settings.area_mode,
            threads,
            warnings: Vec::new(),
        },
    };
    let mut ceiling_hit = false;
    for (row, &x) in rows.into_iter().zip(axis_values) {
        let row = row.map_err(|e| Error::ScanPoint {
            axis_value: x,
            source: Box::new(e),
        })?;
        if row.spectrum.iter().any(|v| !v.is_finite()) {
            return Err(Error::ScanPoint {
                axis_value: x,
                source: Box::new(Error::NumericalInstability("non-finite spectrum".into())),
            });
        }
        ceiling_hit |= row.peak_intensity > TWO_LEVEL_CEILING * (1.0 + 1e-9);
        result.spectra.push(row.spectrum);
        result.populations_final.push(row.populations_final);
        result.photons.push(row.photons);
        result.triplet_flags.push(row.triplet.as_ref().is_some_and(|t| t.is_triplet));
        result.triplets.push(row.triplet);
        result.rabi_frequencies.push(row.rabi_frequency);
    }
    if ceiling_hit {
        result.metadata.warnings.push(format!(
            "points above {TWO_LEVEL_CEILING:e} W/cm2 lie outside the validated two-level regime"
        ));
    }
    Ok(result)
}

/// Sweeps the pulse area θ/2π at fixed intensity (or fixed τ in amplitude mode).
pub fn scan_area(
    system: &TwoLevelSystem,
    base: &PulseSpec,
    areas: &[f64],
    omegas: &[f64],
    settings: &ScanSettings,
) -> Result<ScanResult> {
    check_axis(areas)?;
    check_omegas(omegas)?;
    let specs = areas
        .iter()
        .map(|&c| {
            spec_for_area(system, base, c, settings.area_mode).map_err(|e| Error::ScanPoint {
                axis_value: c,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    run_all(system, ScanAxis::PulseAreaCycles, areas, specs, omegas, settings, base.order.label())
}

/// Sweeps the peak intensity (W/cm²) at fixed τ.
pub fn scan_intensity(
    system: &TwoLevelSystem,
    base: &PulseSpec,
    intensities: &[f64],
    omegas: &[f64],
    settings: &ScanSettings,
) -> Result<ScanResult> {
    check_axis(intensities)?;
    check_omegas(omegas)?;
    let specs = intensities
        .iter()
        .map(|&i| {
            spec_for_intensity(base, i).map_err(|e| Error::ScanPoint {
                axis_value: i,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    run_all(system, ScanAxis::Intensity, intensities, specs, omegas, settings, base.order.label())
}
