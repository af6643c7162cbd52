//! Atomic-unit bookkeeping.
//!
//! Everything inside the library is expressed in Hartree atomic units
//! (e = ħ = mₑ = 4πε₀ = 1). Human-friendly units (eV, fs, W/cm²) only appear
//! at the boundary and go through [`convert`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Conversion constants between atomic units and laboratory units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitConstants {
    pub hartree_in_ev: f64,
    /// Femtoseconds per atomic unit of time.
    pub atomic_time_in_fs: f64,
    /// W/cm² corresponding to a field of one atomic unit.
    pub atomic_intensity_in_w_cm2: f64,
    pub speed_of_light_au: f64,
}

/// CODATA-2018 values at the precision used throughout the crate.
pub const CODATA_2018: UnitConstants = UnitConstants {
    hartree_in_ev: 27.211386,
    atomic_time_in_fs: 2.4188843e-2,
    atomic_intensity_in_w_cm2: 3.50945e16,
    speed_of_light_au: 137.036,
};

impl Default for UnitConstants {
    fn default() -> Self {
        CODATA_2018
    }
}

impl UnitConstants {
    pub fn new(
        hartree_in_ev: f64,
        atomic_time_in_fs: f64,
        atomic_intensity_in_w_cm2: f64,
        speed_of_light_au: f64,
    ) -> Result<Self> {
        let all = [
            hartree_in_ev,
            atomic_time_in_fs,
            atomic_intensity_in_w_cm2,
            speed_of_light_au,
        ];
        if all.iter().any(|c| !c.is_finite() || *c <= 0.0) {
            return Err(Error::Domain(
                "unit constants must be finite and strictly positive".into(),
            ));
        }
        Ok(Self {
            hartree_in_ev,
            atomic_time_in_fs,
            atomic_intensity_in_w_cm2,
            speed_of_light_au,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// eV ↔ Hartree.
    Energy,
    /// fs ↔ ħ/Hartree.
    Time,
    /// W/cm² ↔ atomic intensity units.
    Intensity,
    /// Intensity in W/cm² ↔ peak electric field E₀ = √(I/I_au) in a.u.
    FieldAmplitude,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    ToAu,
    FromAu,
}

/// Converts `value` between laboratory units and atomic units using the
/// CODATA-2018 constants.
pub fn convert(value: f64, quantity: Quantity, direction: Direction) -> Result<f64> {
    convert_with(&CODATA_2018, value, quantity, direction)
}

pub fn convert_with(
    constants: &UnitConstants,
    value: f64,
    quantity: Quantity,
    direction: Direction,
) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::Domain(format!("non-finite value {value}")));
    }
    match (quantity, direction) {
        (Quantity::Energy, Direction::ToAu) => Ok(value / constants.hartree_in_ev),
        (Quantity::Energy, Direction::FromAu) => Ok(value * constants.hartree_in_ev),
        (Quantity::Time, Direction::ToAu) => Ok(value / constants.atomic_time_in_fs),
        (Quantity::Time, Direction::FromAu) => Ok(value * constants.atomic_time_in_fs),
        (Quantity::Intensity, dir) => {
            if value < 0.0 {
                return Err(Error::Domain(format!("negative intensity {value}")));
            }
            Ok(match dir {
                Direction::ToAu => value / constants.atomic_intensity_in_w_cm2,
                Direction::FromAu => value * constants.atomic_intensity_in_w_cm2,
            })
        }
        (Quantity::FieldAmplitude, Direction::ToAu) => {
            if value < 0.0 {
                return Err(Error::Domain(format!("negative intensity {value}")));
            }
            Ok((value / constants.atomic_intensity_in_w_cm2).sqrt())
        }
        (Quantity::FieldAmplitude, Direction::FromAu) => {
            if value < 0.0 {
                return Err(Error::Domain(format!("negative field amplitude {value}")));
            }
            Ok(value * value * constants.atomic_intensity_in_w_cm2)
        }
    }
}

pub fn ev_to_au(ev: f64) -> f64 {
    ev / CODATA_2018.hartree_in_ev
}

pub fn au_to_ev(au: f64) -> f64 {
    au * CODATA_2018.hartree_in_ev
}

pub fn fs_to_au(fs: f64) -> f64 {
    fs / CODATA_2018.atomic_time_in_fs
}

pub fn au_to_fs(au: f64) -> f64 {
    au * CODATA_2018.atomic_time_in_fs
}

/// Peak electric field (a.u.) of a laser with intensity `w_cm2`.
pub fn intensity_to_field(w_cm2: f64) -> Result<f64> {
    convert(w_cm2, Quantity::FieldAmplitude, Direction::ToAu)
}

pub fn field_to_intensity(e0: f64) -> Result<f64> {
    convert(e0, Quantity::FieldAmplitude, Direction::FromAu)
}

/// A uniform time grid symmetric about `t = 0`.
///
/// Points are `t_k = t_start + k·dt` for `k = 0..n_points`; the centre point is
/// exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    pub n_points: usize,
}

impl TimeGrid {
    /// Symmetric grid with `2·half_steps + 1` points.
    pub fn symmetric(half_steps: usize, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Config(format!("time step must be positive, got {dt}")));
        }
        if half_steps == 0 {
            return Err(Error::Config("time grid needs at least one step".into()));
        }
        let span = half_steps as f64 * dt;
        Ok(Self {
            t_start: -span,
            t_end: span,
            dt,
            n_points: 2 * half_steps + 1,
        })
    }

    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        // Written relative to the centre so that the middle point is exactly 0.
        let half = (self.n_points / 2) as f64;
        (k as f64 - half) * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |k| self.time(k))
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }
}

/// Builds a grid covering `[−window/2 − padding, window/2 + padding]`.
///
/// `fastest_rate` is the largest of |ε_a|, |ε_b| and ω₀; the step must satisfy
/// `dt ≤ 0.05 / fastest_rate`.
pub fn make_grid(window: f64, dt: f64, padding: f64, fastest_rate: f64) -> Result<TimeGrid> {
    if !(window.is_finite() && window > 0.0) {
        return Err(Error::Config(format!("pulse window must be positive, got {window}")));
    }
    if !(padding.is_finite() && padding >= 0.0) {
        return Err(Error::Config(format!("padding must be non-negative, got {padding}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Config(format!("time step must be positive, got {dt}")));
    }
    if fastest_rate > 0.0 {
        let bound = MAX_PHASE_PER_STEP / fastest_rate;
        if dt > bound {
            return Err(Error::Config(format!(
                "dt = {dt} exceeds the phase-resolution bound dt <= 0.05/max(|eps_a|,|eps_b|,omega0) = {bound:.6}"
            )));
        }
    }
    let half = window / 2.0 + padding;
    let half_steps = (half / dt - 1e-9).ceil().max(1.0) as usize;
    TimeGrid::symmetric(half_steps, dt)
}

/// Largest phase advance per time step accepted by [`make_grid`].
pub const MAX_PHASE_PER_STEP: f64 = 0.05;
