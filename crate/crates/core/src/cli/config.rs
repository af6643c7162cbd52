//! Run configuration: TOML layout, presets, flag overrides and validation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::{HeffShifts, InitialState, TwoLevelSystem};
use crate::error::{Error, Result};
use crate::pulse::{tau_for_area, EnvelopeOrder, PulseSpec};
use crate::scan::{AreaMode, Observable, ScanSettings};
use crate::simulation::{Model, Numerics};
use crate::spectra::{GaugeForm, TripletParams};
use crate::transform::uniform_omegas;
use crate::units::{ev_to_au, fs_to_au, intensity_to_field};

pub const PRESETS: [(&str, &str); 7] = [
    ("fig1a", include_str!("../../presets/fig1a.toml")),
    ("fig1e", include_str!("../../presets/fig1e.toml")),
    ("fig1f", include_str!("../../presets/fig1f.toml")),
    ("fig1g", include_str!("../../presets/fig1g.toml")),
    ("fig3b", include_str!("../../presets/fig3b.toml")),
    ("fig3c", include_str!("../../presets/fig3c.toml")),
    ("fig3d", include_str!("../../presets/fig3d.toml")),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemBlock {
    pub eps_ba_ev: f64,
    pub z_ba: f64,
    pub eps_a_ev: f64,
}

impl Default for SystemBlock {
    fn default() -> Self {
        Self {
            eps_ba_ev: 10.2,
            z_ba: 0.745,
            eps_a_ev: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderField {
    Number(u32),
    Text(String),
}

impl OrderField {
    fn parse(&self) -> Result<EnvelopeOrder> {
        match self {
            OrderField::Number(n) => EnvelopeOrder::finite(*n),
            OrderField::Text(s) => s.parse(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PulseBlock {
    /// Peak intensity, W/cm².
    pub intensity: Option<f64>,
    /// Vector-potential amplitude A₀, a.u.
    pub amplitude: Option<f64>,
    pub omega0_ev: Option<f64>,
    pub detuning_ev: Option<f64>,
    pub tau_fs: Option<f64>,
    /// θ/2π; sets τ at the given amplitude.
    pub area_cycles: Option<f64>,
    pub order: OrderField,
    pub cep: f64,
}

impl Default for PulseBlock {
    fn default() -> Self {
        Self {
            intensity: None,
            amplitude: None,
            omega0_ev: None,
            detuning_ev: None,
            tau_fs: None,
            area_cycles: None,
            order: OrderField::Text("flat".into()),
            cep: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsBlock {
    pub dt: f64,
    pub padding_fs: f64,
    /// Half-width of the frequency window in units of Ω₀.
    pub omega_window: f64,
    pub omega_points: usize,
    pub filter: bool,
    pub form: GaugeForm,
}

impl Default for NumericsBlock {
    fn default() -> Self {
        Self {
            dt: 0.02,
            padding_fs: 0.0,
            omega_window: 3.0,
            omega_points: 2000,
            filter: true,
            form: GaugeForm::Momentum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    #[default]
    Numeric,
    Analytic,
    Heff,
}

impl std::str::FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "numeric" => Ok(Self::Numeric),
            "analytic" => Ok(Self::Analytic),
            "heff" => Ok(Self::Heff),
            _ => Err(Error::Config(format!("model: unknown kind '{s}' (numeric|analytic|heff)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelBlock {
    pub kind: ModelKind,
    /// Complex shifts as [re, im] in a.u.
    pub r_aa: [f64; 2],
    pub r_bb: [f64; 2],
    pub r_ab: [f64; 2],
    /// Initial amplitudes as [re, im].
    pub initial_a: [f64; 2],
    pub initial_b: [f64; 2],
    /// Also compute fluorescence and Larmor spectra.
    pub emission: bool,
    /// Γ_F in units of Ω₀.
    pub gamma_filter: f64,
}

impl Default for ModelBlock {
    fn default() -> Self {
        Self {
            kind: ModelKind::Numeric,
            r_aa: [0.0; 2],
            r_bb: [0.0; 2],
            r_ab: [0.0; 2],
            initial_a: [1.0, 0.0],
            initial_b: [0.0, 0.0],
            emission: false,
            gamma_filter: crate::emission::DEFAULT_FILTER_FRACTION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    /// Symmetric-log threshold relative to the largest |value|.
    pub linthresh: f64,
    /// Keep every n-th time sample in the time-series CSV.
    pub time_stride: usize,
    pub prominence: f64,
    pub side_tolerance: f64,
}

impl Default for OutputBlock {
    fn default() -> Self {
        let t = TripletParams::default();
        Self {
            linthresh: 1e-3,
            time_stride: 10,
            prominence: t.prominence,
            side_tolerance: t.side_tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisKind {
    Area,
    Intensity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanBlock {
    pub axis: AxisKind,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub log: bool,
    pub observable: Observable,
    pub area_mode: AreaMode,
}

impl Default for ScanBlock {
    fn default() -> Self {
        Self {
            axis: AxisKind::Area,
            start: 0.1,
            stop: 4.0,
            points: 81,
            log: false,
            observable: Observable::Absorption,
            area_mode: AreaMode::Duration,
        }
    }
}

impl ScanBlock {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points < 2 {
            return Err(Error::Config(format!("scan.points: need at least 2 points, got {}", self.points)));
        }
        if !(self.start > 0.0 && self.stop > self.start && self.stop.is_finite()) {
            return Err(Error::Config(format!(
                "scan: need 0 < start < stop, got start = {}, stop = {}",
                self.start, self.stop
            )));
        }
        let n = self.points - 1;
        Ok((0..=n)
            .map(|k| {
                let f = k as f64 / n as f64;
                if self.log {
                    self.start * (self.stop / self.start).powf(f)
                } else {
                    self.start + f * (self.stop - self.start)
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub system: SystemBlock,
    pub pulse: PulseBlock,
    pub numerics: NumericsBlock,
    pub model: ModelBlock,
    pub output: OutputBlock,
    pub scan: Option<ScanBlock>,
}

/// Command-line overrides applied on top of a file or preset.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub model: Option<ModelKind>,
    pub order: Option<String>,
    pub area_cycles: Option<f64>,
    pub intensity: Option<f64>,
    pub tau_fs: Option<f64>,
    pub no_filter: bool,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn preset(name: &str) -> Result<Self> {
        let (_, text) = PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::Config(format!("unknown preset '{name}'")))?;
        Self::from_toml(text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(m) = o.model {
            self.model.kind = m;
        }
        if let Some(order) = &o.order {
            self.pulse.order = OrderField::Text(order.clone());
        }
        if let Some(a) = o.area_cycles {
            self.pulse.area_cycles = Some(a);
            self.pulse.tau_fs = None;
        }
        if let Some(t) = o.tau_fs {
            self.pulse.tau_fs = Some(t);
            self.pulse.area_cycles = None;
        }
        if let Some(i) = o.intensity {
            self.pulse.intensity = Some(i);
            self.pulse.amplitude = None;
        }
        if o.no_filter {
            self.numerics.filter = false;
        }
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    /// Validates every field and converts to atomic units.
    pub fn resolve(&self) -> Result<ResolvedRun> {
        let s = &self.system;
        if !(s.eps_ba_ev.is_finite() && s.eps_ba_ev > 0.0) {
            return Err(Error::Config(format!("system.eps_ba_ev: must be > 0, got {}", s.eps_ba_ev)));
        }
        let eps_a = ev_to_au(s.eps_a_ev);
        let system = TwoLevelSystem::new(eps_a, eps_a + ev_to_au(s.eps_ba_ev), s.z_ba)
            .map_err(|e| Error::Config(format!("system: {e}")))?;

        let p = &self.pulse;
        let omega0 = match (p.omega0_ev, p.detuning_ev) {
            (Some(w), None) => ev_to_au(w),
            (None, Some(d)) => system.eps_ba() + ev_to_au(d),
            (None, None) => system.eps_ba(),
            (Some(_), Some(_)) => {
                return Err(Error::Config("pulse: give exactly one of omega0_ev and detuning_ev".into()));
            }
        };
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::Config(format!("pulse: carrier frequency must be > 0, got {omega0} a.u.")));
        }
        let amplitude = match (p.intensity, p.amplitude) {
            (Some(i), None) => {
                if !(i.is_finite() && i > 0.0) {
                    return Err(Error::Config(format!("pulse.intensity: must be > 0, got {i}")));
                }
                intensity_to_field(i)? / omega0
            }
            (None, Some(a)) => {
                if !(a.is_finite() && a > 0.0) {
                    return Err(Error::Config(format!("pulse.amplitude: must be > 0, got {a}")));
                }
                a
            }
            _ => return Err(Error::Config("pulse: give exactly one of intensity and amplitude".into())),
        };
        let order = p.order.parse().map_err(|e| Error::Config(format!("pulse.order: {e}")))?;
        let probe = PulseSpec::new(amplitude, omega0, 1.0, order, p.cep).map_err(|e| Error::Config(format!("pulse: {e}")))?;
        let tau = match (p.tau_fs, p.area_cycles) {
            (Some(t), None) => {
                if !(t.is_finite() && t > 0.0) {
                    return Err(Error::Config(format!("pulse.tau_fs: must be > 0, got {t}")));
                }
                fs_to_au(t)
            }
            (None, Some(c)) => tau_for_area(&probe, &system, 2.0 * std::f64::consts::PI * c)
                .map_err(|e| Error::Config(format!("pulse.area_cycles: {e}")))?,
            _ => return Err(Error::Config("pulse: give exactly one of tau_fs and area_cycles".into())),
        };
        let spec = probe.with_tau(tau).map_err(|e| Error::Config(format!("pulse: {e}")))?;

        let n = &self.numerics;
        if !(n.dt.is_finite() && n.dt > 0.0) {
            return Err(Error::Config(format!("numerics.dt: must be > 0, got {}", n.dt)));
        }
        let bound = crate::units::MAX_PHASE_PER_STEP / system.fastest_rate(omega0);
        if n.dt > bound {
            return Err(Error::Config(format!(
                "numerics.dt: {} exceeds the bound 0.05/max(|eps_a|,|eps_b|,omega0) = {bound:.6}",
                n.dt
            )));
        }
        if !(n.padding_fs.is_finite() && n.padding_fs >= 0.0) {
            return Err(Error::Config(format!("numerics.padding_fs: must be >= 0, got {}", n.padding_fs)));
        }
        if !(n.omega_window.is_finite() && n.omega_window > 0.0) {
            return Err(Error::Config(format!("numerics.omega_window: must be > 0, got {}", n.omega_window)));
        }
        if n.omega_points < 3 {
            return Err(Error::Config(format!("numerics.omega_points: need >= 3, got {}", n.omega_points)));
        }

        let scan_values = match &self.scan {
            Some(b) => Some(b.values()?),
            None => None,
        };
        // The frequency window follows the largest Rabi frequency reached.
        let rabi_ref = match (&self.scan, &scan_values) {
            (Some(b), Some(v)) if b.axis == AxisKind::Intensity => {
                system.z_ba * intensity_to_field(*v.last().expect("non-empty axis"))?
            }
            (Some(b), Some(v)) if b.axis == AxisKind::Area && b.area_mode == AreaMode::Amplitude => {
                spec.rabi_frequency(&system) * v.last().expect("non-empty axis") * 2.0 * std::f64::consts::PI
                    / crate::pulse::pulse_area(&spec, &system)
            }
            _ => spec.rabi_frequency(&system),
        }
        .abs();
        let half = n.omega_window * rabi_ref;
        let omegas = uniform_omegas(omega0 - half, omega0 + half, n.omega_points)?;

        let m = &self.model;
        let c = |v: [f64; 2]| Complex64::new(v[0], v[1]);
        let shifts = HeffShifts {
            r_aa: c(m.r_aa),
            r_bb: c(m.r_bb),
            r_ab: c(m.r_ab),
        };
        let model = match m.kind {
            ModelKind::Numeric => Model::Numeric,
            ModelKind::Analytic => Model::Analytic,
            ModelKind::Heff => Model::Heff(shifts),
        };
        if m.kind != ModelKind::Numeric && !order.is_flat_top() {
            return Err(Error::Config(format!(
                "model.kind: '{}' needs a flat-top pulse, got order {order}",
                model.label()
            )));
        }
        if !(m.gamma_filter.is_finite() && m.gamma_filter > 0.0) {
            return Err(Error::Config(format!("model.gamma_filter: must be > 0, got {}", m.gamma_filter)));
        }
        let initial = InitialState::new(c(m.initial_a), c(m.initial_b))
            .map_err(|e| Error::Config(format!("model.initial_a/initial_b: {e}")))?;
        let o = &self.output;
        if !(o.linthresh.is_finite() && o.linthresh > 0.0) {
            return Err(Error::Config(format!("output.linthresh: must be > 0, got {}", o.linthresh)));
        }
        if o.time_stride == 0 {
            return Err(Error::Config("output.time_stride: must be >= 1".into()));
        }
        let numerics = Numerics {
            dt: n.dt,
            padding: fs_to_au(n.padding_fs),
            filter: n.filter,
            form: n.form,
            omegas: Some(omegas.clone()),
        };
        let triplet = TripletParams {
            prominence: o.prominence,
            side_tolerance: o.side_tolerance,
        };
        let scan_settings = self.scan.as_ref().map(|b| ScanSettings {
            model,
            numerics: numerics.clone(),
            initial,
            observable: b.observable,
            area_mode: b.area_mode,
            triplet,
            filter_fraction: m.gamma_filter,
        });
        Ok(ResolvedRun {
            system,
            spec,
            model,
            initial,
            numerics,
            omegas,
            emission: m.emission,
            gamma_filter_fraction: m.gamma_filter,
            triplet,
            linthresh: o.linthresh,
            time_stride: o.time_stride,
            scan: match (&self.scan, scan_values, scan_settings) {
                (Some(b), Some(values), Some(settings)) => Some(ResolvedScan {
                    axis: b.axis,
                    values,
                    settings,
                }),
                _ => None,
            },
        })
    }
}

#[derive(Debug, Clone)]
pub struct ResolvedScan {
    pub axis: AxisKind,
    pub values: Vec<f64>,
    pub settings: ScanSettings,
}

/// A validated run in atomic units.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub system: TwoLevelSystem,
    pub spec: PulseSpec,
    pub model: Model,
    pub initial: InitialState,
    pub numerics: Numerics,
    pub omegas: Vec<f64>,
    pub emission: bool,
    pub gamma_filter_fraction: f64,
    pub triplet: TripletParams,
    pub linthresh: f64,
    pub time_stride: usize,
    pub scan: Option<ResolvedScan>,
}
