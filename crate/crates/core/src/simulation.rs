//! Single-run absorption pipeline shared by the scan and CLI layers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    analytic_flat_top_trajectory, analytic_momentum_spectrum, momentum_expectation, propagate_numeric, AmplitudeTrajectory,
    HeffShifts, HeffSolution, InitialState, TwoLevelSystem, build_effective_hamiltonian,
};
use crate::error::{Error, Result};
use crate::pulse::{flat_top_potential_ft, PulseSpec};
use crate::spectra::{absorption_spectrum, absorption_time, AbsorptionResult, GaugeForm};
use crate::transform::{apply_filter, default_absorption_omegas, fourier, Signal, Spectrum};
use crate::units::{make_grid, TimeGrid};

/// Envelope level below which a finite-order pulse is treated as off.
pub const SUPPORT_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    #[default]
    Numeric,
    /// Closed-form Rabi solution (flat-top only).
    Analytic,
    /// Effective Hamiltonian with complex shifts (flat-top only).
    Heff(HeffShifts),
}

impl Model {
    pub fn label(&self) -> &'static str {
        match self {
            Model::Numeric => "numeric",
            Model::Analytic => "analytic",
            Model::Heff(_) => "heff",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Numerics {
    pub dt: f64,
    /// Extra time added on both sides of the pulse support (a.u.).
    pub padding: f64,
    pub filter: bool,
    pub form: GaugeForm,
    /// Frequency grid; `None` selects [ω₀−3Ω₀, ω₀+3Ω₀] with 2000 points.
    pub omegas: Option<Vec<f64>>,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            dt: 0.02,
            padding: 0.0,
            filter: true,
            form: GaugeForm::Momentum,
            omegas: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimulationOutput {
    pub trajectory: AmplitudeTrajectory,
    pub field: Signal<f64>,
    pub potential: Signal<f64>,
    /// Unfiltered momentum expectation p_z(t).
    pub momentum: Signal<f64>,
    pub momentum_spectrum: Spectrum<Complex64>,
    pub absorption: AbsorptionResult,
    pub warnings: Vec<String>,
}

/// Time grid covering the pulse support plus padding.
pub fn pulse_grid(system: &TwoLevelSystem, spec: &PulseSpec, dt: f64, padding: f64) -> Result<TimeGrid> {
    let window = 2.0 * spec.support_half_width(SUPPORT_THRESHOLD);
    make_grid(window, dt, padding, system.fastest_rate(spec.omega0))
}

/// Runs one pulse through the chosen model and computes ΔE(t) and ΔẼ(ω).
pub fn simulate(
    system: &TwoLevelSystem,
    spec: &PulseSpec,
    initial: InitialState,
    model: Model,
    numerics: &Numerics,
) -> Result<SimulationOutput> {
    let omegas = match &numerics.omegas {
        Some(w) => w.clone(),
        None => {
            let rabi = spec.rabi_frequency(system);
            if rabi == 0.0 {
                return Err(Error::Config("zero pulse amplitude: no default frequency window".into()));
            }
            default_absorption_omegas(spec.omega0, rabi)?
        }
    };
    let grid = pulse_grid(system, spec, numerics.dt, numerics.padding)?;
    let mut warnings = Vec::new();

    let field = Signal::from_fn(grid, |t| spec.electric_field(t))?;
    let potential = Signal::from_fn(grid, |t| spec.vector_potential(t))?;

    let (trajectory, momentum_spectrum) = match model {
        Model::Numeric => {
            let traj = propagate_numeric(system, spec, &grid, initial)?;
            let p = momentum_expectation(&traj, system)?;
            let p = if numerics.filter { apply_filter(&p, spec) } else { p };
            let spectrum = fourier(&p, &omegas)?;
            (traj, spectrum)
        }
        Model::Analytic => {
            let traj = analytic_flat_top_trajectory(system, spec, &grid, initial)?;
            (traj, analytic_momentum_spectrum(system, spec, initial, &omegas)?)
        }
        Model::Heff(shifts) => {
            let h = build_effective_hamiltonian(system, spec, &shifts)?;
            let sol = HeffSolution::new(system, spec, &h, initial)?;
            (sol.trajectory(&grid)?, sol.spectrum(&omegas)?)
        }
    };
    let momentum = momentum_expectation(&trajectory, system)?;
    if momentum_spectrum.undecayed {
        warnings.push("momentum signal not decayed at the window edge and no filter applied".to_string());
    }

    let potential_spectrum = match model {
        Model::Numeric => fourier(&potential, &omegas)?,
        _ => flat_top_potential_ft(spec, &omegas)?,
    };
    let field_spectrum = match (numerics.form, model) {
        (GaugeForm::Momentum, _) => potential_spectrum,
        (GaugeForm::Velocity, Model::Numeric) => fourier(&field, &omegas)?,
        (GaugeForm::Velocity, _) => Spectrum::new(
            omegas.clone(),
            omegas.iter().zip(&potential_spectrum.values).map(|(&w, a)| Complex64::new(0.0, w) * a).collect(),
        )?,
    };
    let spectrum = absorption_spectrum(numerics.form, &momentum_spectrum, &field_spectrum)?;
    let time_energy = absorption_time(&field, &momentum)?;
    let photons = time_energy.last() / spec.omega0;
    Ok(SimulationOutput {
        trajectory,
        field,
        potential,
        momentum,
        momentum_spectrum,
        absorption: AbsorptionResult {
            time_energy,
            spectrum,
            photons,
            filtered: numerics.filter,
        },
        warnings,
    })
}
