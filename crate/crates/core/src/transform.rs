//! Discrete approximation of the continuous Fourier transform.
//!
//! Convention used everywhere in the crate:
//! `f̃(ω) = (2π)^{-1/2} ∫ f(t) e^{+iωt} dt`, approximated by the trapezoid rule
//! on a uniform time grid. With this sign the flat-top vector potential
//! `A₀ sin(ω₀t)` transforms to `(iA₀/√2π)(τ/2) sinc((ω−ω₀)τ/2)` near `ω₀`,
//! and `Ẽ = iωÃ`.

use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulse::PulseSpec;
use crate::units::TimeGrid;

/// Values that can be transformed: real or complex samples.
pub trait Sample: Copy + Send + Sync + Mul<f64, Output = Self> {
    fn to_complex(self) -> Complex64;
    fn magnitude(self) -> f64;
    fn is_finite_sample(self) -> bool;
}

impl Sample for f64 {
    #[inline]
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    #[inline]
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn is_finite_sample(self) -> bool {
        self.is_finite()
    }
}

impl Sample for Complex64 {
    #[inline]
    fn to_complex(self) -> Complex64 {
        self
    }
    #[inline]
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn is_finite_sample(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Samples on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Signal<T = f64> {
    pub grid: TimeGrid,
    pub values: Vec<T>,
    /// Whether the envelope filter has been applied.
    pub filtered: bool,
}

impl<T: Sample> Signal<T> {
    pub fn new(grid: TimeGrid, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(Error::GridMismatch(format!(
                "signal has {} values for a grid of {} points",
                values.len(),
                grid.n_points
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite_sample()) {
            return Err(Error::NumericalInstability(format!(
                "non-finite signal value at t = {}",
                grid.time(k)
            )));
        }
        Ok(Self {
            grid,
            values,
            filtered: false,
        })
    }

    /// Samples `f` on every grid point.
    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> T) -> Result<Self> {
        let values = grid.times().map(f).collect();
        Self::new(grid, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_magnitude(&self) -> f64 {
        self.values.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    /// True when both end samples are within 1e-6 of the maximum.
    pub fn is_decayed(&self) -> bool {
        let peak = self.max_magnitude();
        if peak == 0.0 {
            return true;
        }
        let first = self.values[0].magnitude();
        let last = self.values[self.values.len() - 1].magnitude();
        first.max(last) <= 1e-6 * peak
    }

    pub fn last(&self) -> T {
        self.values[self.values.len() - 1]
    }
}

/// Values on an angular-frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum<T = Complex64> {
    pub omegas: Vec<f64>,
    pub values: Vec<T>,
    /// Set when the source signal was neither decayed nor filtered.
    pub undecayed: bool,
}

impl<T> Spectrum<T> {
    pub fn new(omegas: Vec<f64>, values: Vec<T>) -> Result<Self> {
        if omegas.len() != values.len() {
            return Err(Error::GridMismatch(format!(
                "{} frequencies but {} values",
                omegas.len(),
                values.len()
            )));
        }
        check_omegas(&omegas)?;
        Ok(Self {
            omegas,
            values,
            undecayed: false,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Spectrum<U> {
        Spectrum {
            omegas: self.omegas.clone(),
            values: self.values.iter().map(f).collect(),
            undecayed: self.undecayed,
        }
    }

    pub fn same_grid<U>(&self, other: &Spectrum<U>) -> bool {
        self.omegas.len() == other.omegas.len()
            && self
                .omegas
                .iter()
                .zip(&other.omegas)
                .all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(1.0))
    }
}

impl Spectrum<f64> {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Trapezoid integral over the frequency grid.
    pub fn integrate(&self) -> f64 {
        trapezoid_nonuniform(&self.omegas, &self.values)
    }

    /// Trapezoid integral restricted to ω ≥ 0.
    pub fn integrate_positive(&self) -> f64 {
        let start = self.omegas.partition_point(|&w| w < 0.0);
        trapezoid_nonuniform(&self.omegas[start..], &self.values[start..])
    }
}

pub(crate) fn trapezoid_nonuniform(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1]))
        .sum()
}

pub(crate) fn check_omegas(omegas: &[f64]) -> Result<()> {
    if omegas.iter().any(|w| !w.is_finite()) {
        return Err(Error::Domain("frequency grid contains non-finite values".into()));
    }
    if omegas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("frequency grid must be strictly increasing".into()));
    }
    Ok(())
}

/// `n` equally spaced frequencies from `lo` to `hi` inclusive.
pub fn uniform_omegas(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Config(format!(
            "frequency grid needs n >= 2 and lo < hi, got [{lo}, {hi}] with {n} points"
        )));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|k| lo + k as f64 * step).collect())
}

/// Default absorption window [ω₀−3Ω₀, ω₀+3Ω₀] with 2000 points.
pub fn default_absorption_omegas(omega0: f64, rabi: f64) -> Result<Vec<f64>> {
    let r = rabi.abs();
    uniform_omegas(omega0 - 3.0 * r, omega0 + 3.0 * r, 2000)
}

/// Returns (start, step) when the grid is uniform to 1e-9 of its spacing.
fn uniform_spacing(omegas: &[f64]) -> Option<(f64, f64)> {
    if omegas.len() < 2 {
        return None;
    }
    let n = omegas.len();
    let step = (omegas[n - 1] - omegas[0]) / (n - 1) as f64;
    let uniform = omegas
        .iter()
        .enumerate()
        .all(|(k, &w)| (w - (omegas[0] + k as f64 * step)).abs() <= 1e-9 * step);
    uniform.then_some((omegas[0], step))
}

/// Transforms a signal onto `omegas` (see module docs for the convention).
///
/// Uniform grids large enough to benefit go through a chirp-z evaluation;
/// everything else uses the direct sum.
pub fn fourier<T: Sample>(signal: &Signal<T>, omegas: &[f64]) -> Result<Spectrum<Complex64>> {
    check_omegas(omegas)?;
    let work = signal.len() as f64 * omegas.len() as f64;
    let mut spec = match uniform_spacing(omegas) {
        Some(_) if work > 4.0e6 => fourier_chirp_z(signal, omegas)?,
        _ => fourier_direct(signal, omegas)?,
    };
    spec.undecayed = !signal.filtered && !signal.is_decayed();
    Ok(spec)
}

/// Reference path: direct trapezoid sum, parallel over frequencies.
pub fn fourier_direct<T: Sample>(signal: &Signal<T>, omegas: &[f64]) -> Result<Spectrum<Complex64>> {
    check_omegas(omegas)?;
    let grid = signal.grid;
    let n = signal.len();
    let norm = grid.dt / (2.0 * PI).sqrt();
    const RESYNC: usize = 512;
    let values: Vec<Complex64> = omegas
        .par_iter()
        .map(|&w| {
            let step = Complex64::from_polar(1.0, w * grid.dt);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut phasor = Complex64::new(1.0, 0.0);
            for (k, v) in signal.values.iter().enumerate() {
                if k % RESYNC == 0 {
                    phasor = Complex64::from_polar(1.0, w * grid.time(k));
                }
                let weight = if k == 0 || k + 1 == n { 0.5 } else { 1.0 };
                acc += v.to_complex() * phasor * weight;
                phasor *= step;
            }
            acc * norm
        })
        .collect();
    let mut spec = Spectrum::new(omegas.to_vec(), values)?;
    spec.undecayed = !signal.filtered && !signal.is_decayed();
    Ok(spec)
}

/// Bluestein chirp-z evaluation on a uniform frequency grid.
pub fn fourier_chirp_z<T: Sample>(signal: &Signal<T>, omegas: &[f64]) -> Result<Spectrum<Complex64>> {
    let (w0, dw) = uniform_spacing(omegas)
        .ok_or_else(|| Error::GridMismatch("chirp-z path needs a uniform frequency grid".into()))?;
    let grid = signal.grid;
    let n = signal.len();
    let m = omegas.len();
    let t0 = grid.time(0);
    let alpha = dw * grid.dt;

    // X_m = e^{iω_m t₀} Σ_j x_j e^{iω₀' j dt} e^{iα m j}, with mj = (m² + j² − (m−j)²)/2.
    let len = (n + m - 1).next_power_of_two();
    let chirp = |k: f64| Complex64::from_polar(1.0, 0.5 * alpha * k * k);

    let mut u = vec![Complex64::new(0.0, 0.0); len];
    for (j, v) in signal.values.iter().enumerate() {
        let weight = if j == 0 || j + 1 == n { 0.5 } else { 1.0 };
        let jf = j as f64;
        u[j] = v.to_complex() * weight * Complex64::from_polar(1.0, w0 * jf * grid.dt) * chirp(jf);
    }
    let mut h = vec![Complex64::new(0.0, 0.0); len];
    for k in 0..m {
        h[k] = chirp(k as f64).conj();
    }
    for k in 1..n {
        h[len - k] = chirp(k as f64).conj();
    }

    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    fwd.process(&mut u);
    fwd.process(&mut h);
    for (a, b) in u.iter_mut().zip(&h) {
        *a *= b;
    }
    inv.process(&mut u);

    let norm = grid.dt / (2.0 * PI).sqrt() / len as f64;
    let values = (0..m)
        .map(|k| {
            let w = omegas[k];
            u[k] * chirp(k as f64) * Complex64::from_polar(1.0, w * t0) * norm
        })
        .collect();
    let mut spec = Spectrum::new(omegas.to_vec(), values)?;
    spec.undecayed = !signal.filtered && !signal.is_decayed();
    Ok(spec)
}

/// Multiplies the signal pointwise by the pulse envelope Λₙ(t).
pub fn apply_filter<T: Sample>(signal: &Signal<T>, spec: &PulseSpec) -> Signal<T> {
    let values = signal
        .values
        .iter()
        .enumerate()
        .map(|(k, &v)| v * spec.envelope(signal.grid.time(k)))
        .collect();
    Signal {
        grid: signal.grid,
        values,
        filtered: true,
    }
}
