//! Closed-form rotating-wave solution for a flat-top pulse.
//!
//! Inside the pulse the amplitudes follow the Rabi formulas with
//! `Ω = z_ba E₀`, `W = √(Ω² + Δω²)` and `ω₀ = ε_ba + Δω`. Elapsed time
//! `s = t − t_i` drives the oscillation, while the detuning phase factors are
//! referred to the absolute time `t`, so `a(t) = e^{iΔωt/2} α(s)` and
//! `b(t) = e^{−iΔωt/2} β(s)`.
//!
//! Phase bookkeeping: the printed amplitude and coefficient formulas are each
//! written for a coupling phase of their own. For a field
//! `E(t) = −E₀ cos(ω₀t + φ)` the amplitude formulas take `φ + π/2` and the
//! momentum coefficients take `φ + π`; [`FlatTopDrive`] supplies both.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::system::{AmplitudeTrajectory, InitialState, ModelTag, TwoLevelSystem};
use crate::error::{Error, Result};
use crate::pulse::{sinc, PulseSpec};
use crate::transform::{check_omegas, Spectrum};
use crate::units::TimeGrid;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// sin(Wt/2)/W, continuous at W = 0.
fn half_sin_over(w: f64, t: f64) -> f64 {
    if (w * t).abs() < 1e-8 {
        0.5 * t
    } else {
        (0.5 * w * t).sin() / w
    }
}

/// Rabi amplitudes for a constant drive, in the printed form
/// ```text
/// a(t) = e^{iΔωt/2} [a₀ cos(Wt/2) − i (Δω a₀ + iΩ b₀ e^{iφ})/W · sin(Wt/2)]
/// b(t) = e^{−iΔωt/2}[b₀ cos(Wt/2) + i (Δω b₀ + iΩ a₀ e^{−iφ})/W · sin(Wt/2)]
/// ```
pub fn rabi_amplitudes(
    rabi: f64,
    detuning: f64,
    phase: f64,
    a0: Complex64,
    b0: Complex64,
    t: f64,
) -> (Complex64, Complex64) {
    let w = rabi.hypot(detuning);
    let c = (0.5 * w * t).cos();
    let s = half_sin_over(w, t);
    let e = Complex64::from_polar(1.0, phase);
    let a = a0 * c - I * (detuning * a0 + I * rabi * b0 * e) * s;
    let b = b0 * c + I * (detuning * b0 + I * rabi * a0 * e.conj()) * s;
    let rot = Complex64::from_polar(1.0, 0.5 * detuning * t);
    (rot * a, rot.conj() * b)
}

/// Coefficients of the momentum expectation value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumCoefficients {
    pub a_plus: Complex64,
    pub a_minus: Complex64,
    pub b: Complex64,
}

/// A±, B for `a*(s)b(s) = A₋ + A₊cos(Ws) + iB sin(Ws)`:
/// ```text
/// A± = ½[a₀*b₀ ± (Δω² a₀*b₀ − ΔωΩ|a₀|²e^{−iφ} + ΔωΩ|b₀|²e^{−iφ} − Ω² a₀b₀* e^{−2iφ})/W²]
/// B  = (2Δω a₀*b₀ − Ω|a₀|²e^{−iφ} + Ω|b₀|²e^{−iφ}) / 2W
/// ```
/// The Ω² term carries `a₀b₀*`; only that ordering reproduces the exact
/// product of the Rabi amplitudes.
pub fn momentum_coefficients(
    rabi: f64,
    detuning: f64,
    phase: f64,
    a0: Complex64,
    b0: Complex64,
) -> Result<MomentumCoefficients> {
    let w = rabi.hypot(detuning);
    if w == 0.0 {
        return Err(Error::Degenerate("generalized Rabi frequency W = 0".into()));
    }
    let x = a0.conj() * b0;
    let y = a0 * b0.conj();
    let e1 = Complex64::from_polar(1.0, -phase);
    let e2 = e1 * e1;
    let pa = a0.norm_sqr();
    let pb = b0.norm_sqr();
    let inner = (detuning * detuning * x - detuning * rabi * pa * e1 + detuning * rabi * pb * e1
        - rabi * rabi * y * e2)
        / (w * w);
    Ok(MomentumCoefficients {
        a_plus: 0.5 * (x + inner),
        a_minus: 0.5 * (x - inner),
        b: (2.0 * detuning * x - rabi * pa * e1 + rabi * pb * e1) / (2.0 * w),
    })
}

/// Detuning Δω = ω₀ − ε_ba.
pub fn detuning(system: &TwoLevelSystem, spec: &PulseSpec) -> f64 {
    spec.omega0 - system.eps_ba()
}

/// Flat-top drive parameters derived from a pulse and a system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatTopDrive {
    /// Ω = z_ba E₀.
    pub rabi: f64,
    pub detuning: f64,
    pub w: f64,
    pub t_i: f64,
    pub t_f: f64,
    /// Phase entering [`rabi_amplitudes`].
    pub amplitude_phase: f64,
    /// Phase entering [`momentum_coefficients`].
    pub coefficient_phase: f64,
    pub initial: InitialState,
    /// Initial amplitudes with the detuning phase at t_i removed.
    pub a0: Complex64,
    pub b0: Complex64,
}

impl FlatTopDrive {
    pub fn new(system: &TwoLevelSystem, spec: &PulseSpec, initial: InitialState) -> Result<Self> {
        if !spec.order.is_flat_top() {
            return Err(Error::Unsupported(format!(
                "closed-form Rabi solution needs a flat-top pulse, got order {}",
                spec.order
            )));
        }
        let rabi = system.z_ba * spec.peak_field();
        let dw = detuning(system, spec);
        let t_i = spec.t_initial();
        let rot = Complex64::from_polar(1.0, -0.5 * dw * t_i);
        Ok(Self {
            rabi,
            detuning: dw,
            w: rabi.hypot(dw),
            t_i,
            t_f: spec.t_final(),
            amplitude_phase: spec.cep + FRAC_PI_2,
            coefficient_phase: spec.cep + PI,
            initial,
            a0: initial.a * rot,
            b0: initial.b * rot.conj(),
        })
    }

    /// (a(t), b(t)); constant before t_i and after t_f.
    pub fn amplitudes(&self, t: f64) -> (Complex64, Complex64) {
        if t <= self.t_i {
            return (self.initial.a, self.initial.b);
        }
        let te = t.min(self.t_f);
        let (a, b) = rabi_amplitudes(self.rabi, self.detuning, self.amplitude_phase, self.a0, self.b0, te - self.t_i);
        let rot = Complex64::from_polar(1.0, 0.5 * self.detuning * self.t_i);
        (a * rot, b * rot.conj())
    }

    pub fn coefficients(&self) -> Result<MomentumCoefficients> {
        momentum_coefficients(self.rabi, self.detuning, self.coefficient_phase, self.a0, self.b0)
    }
}

/// (a(t), b(t)) of the flat-top Rabi solution.
pub fn analytic_flat_top_amplitudes(
    system: &TwoLevelSystem,
    spec: &PulseSpec,
    initial: InitialState,
    t: f64,
) -> Result<(Complex64, Complex64)> {
    Ok(FlatTopDrive::new(system, spec, initial)?.amplitudes(t))
}

pub fn analytic_flat_top_trajectory(
    system: &TwoLevelSystem,
    spec: &PulseSpec,
    grid: &TimeGrid,
    initial: InitialState,
) -> Result<AmplitudeTrajectory> {
    let drive = FlatTopDrive::new(system, spec, initial)?;
    let (a, b): (Vec<_>, Vec<_>) = grid.times().map(|t| drive.amplitudes(t)).unzip();
    AmplitudeTrajectory::new(*grid, a, b, ModelTag::AnalyticFlatTop)
}

/// p_z(t) = p_ba*[A₋ + A₊cos(W(t−t_i)) + iB sin(W(t−t_i))]e^{−i(ε_ba+Δω)t} + c.c.
/// inside the pulse; the frozen free-evolution value outside.
pub fn analytic_momentum_time(
    system: &TwoLevelSystem,
    spec: &PulseSpec,
    initial: InitialState,
    t: f64,
) -> Result<f64> {
    let drive = FlatTopDrive::new(system, spec, initial)?;
    let p_conj = system.p_ba().conj();
    if t < drive.t_i || t > drive.t_f {
        let (a, b) = drive.amplitudes(t);
        let v = p_conj * a.conj() * b * Complex64::from_polar(1.0, -system.eps_ba() * t);
        return Ok(2.0 * v.re);
    }
    let c = drive.coefficients()?;
    let s = t - drive.t_i;
    let ws = drive.w * s;
    let bracket = c.a_minus + c.a_plus * ws.cos() + I * c.b * ws.sin();
    let v = p_conj * bracket * Complex64::from_polar(1.0, -spec.omega0 * t);
    Ok(2.0 * v.re)
}

/// Positive-frequency transform of the in-pulse momentum:
/// ```text
/// p̃(ω) = p_ba* τ/√2π [A₋ S₀ + (A₊+B)/2 S₊ e^{−iWt_i} + (A₊−B)/2 S₋ e^{iWt_i}]
/// ```
/// with S₀ = sinc((ω−ω₀)τ/2) and S± = sinc((ω±W−ω₀)τ/2).
pub fn analytic_momentum_spectrum(
    system: &TwoLevelSystem,
    spec: &PulseSpec,
    initial: InitialState,
    omegas: &[f64],
) -> Result<Spectrum<Complex64>> {
    check_omegas(omegas)?;
    let drive = FlatTopDrive::new(system, spec, initial)?;
    let c = drive.coefficients()?;
    let tau = spec.tau;
    let pref = system.p_ba().conj() * (tau / (2.0 * PI).sqrt());
    let up = 0.5 * (c.a_plus + c.b) * Complex64::from_polar(1.0, -drive.w * drive.t_i);
    let down = 0.5 * (c.a_plus - c.b) * Complex64::from_polar(1.0, drive.w * drive.t_i);
    let values = omegas
        .iter()
        .map(|&w| {
            let k = w - spec.omega0;
            let s0 = sinc(0.5 * k * tau);
            let sp = sinc(0.5 * (k + drive.w) * tau);
            let sm = sinc(0.5 * (k - drive.w) * tau);
            pref * (c.a_minus * s0 + up * sp + down * sm)
        })
        .collect();
    Spectrum::new(omegas.to_vec(), values)
}
