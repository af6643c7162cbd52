use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{self, TimeGrid};

/// Two essential atomic states |a⟩ (lower) and |b⟩ (upper).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelSystem {
    pub eps_a: f64,
    pub eps_b: f64,
    /// Real dipole matrix element ⟨b|z|a⟩.
    pub z_ba: f64,
}

/// Dipole element of the hydrogen 1s–2p transition.
pub const HYDROGEN_Z_BA: f64 = 0.745;
/// Hydrogen 1s–2p transition energy in eV.
pub const HYDROGEN_EPS_BA_EV: f64 = 10.2;

impl TwoLevelSystem {
    pub fn new(eps_a: f64, eps_b: f64, z_ba: f64) -> Result<Self> {
        if !(eps_a.is_finite() && eps_b.is_finite() && z_ba.is_finite()) {
            return Err(Error::Config("system parameters must be finite".into()));
        }
        if eps_b <= eps_a {
            return Err(Error::Config(format!(
                "upper level must lie above the lower one (eps_a = {eps_a}, eps_b = {eps_b})"
            )));
        }
        if z_ba == 0.0 {
            return Err(Error::Config("dipole matrix element z_ba must be nonzero".into()));
        }
        Ok(Self { eps_a, eps_b, z_ba })
    }

    /// Lower level at zero energy, upper level at `eps_ba`.
    pub fn with_transition(eps_ba: f64, z_ba: f64) -> Result<Self> {
        Self::new(0.0, eps_ba, z_ba)
    }

    /// 1s and 2p of hydrogen: ε_ba = 10.2 eV, z_ba = 0.745.
    pub fn hydrogen_1s_2p() -> Self {
        Self {
            eps_a: 0.0,
            eps_b: units::ev_to_au(HYDROGEN_EPS_BA_EV),
            z_ba: HYDROGEN_Z_BA,
        }
    }

    pub fn eps_ba(&self) -> f64 {
        self.eps_b - self.eps_a
    }

    /// p_ba = ⟨b|p̂|a⟩ = iε_ba z_ba.
    pub fn p_ba(&self) -> Complex64 {
        Complex64::new(0.0, self.eps_ba() * self.z_ba)
    }

    /// Largest phase rate entering the propagator: max(|ε_a|, |ε_b|, ω₀).
    pub fn fastest_rate(&self, omega0: f64) -> f64 {
        self.eps_a.abs().max(self.eps_b.abs()).max(omega0.abs())
    }
}

impl Default for TwoLevelSystem {
    fn default() -> Self {
        Self::hydrogen_1s_2p()
    }
}

/// Initial amplitudes (a₀, b₀).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub a: Complex64,
    pub b: Complex64,
}

impl InitialState {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = a.norm_sqr() + b.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Config(format!(
                "initial state must be normalized, |a|^2+|b|^2 = {norm}"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn ground() -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    pub fn excited() -> Self {
        Self {
            a: Complex64::new(0.0, 0.0),
            b: Complex64::new(1.0, 0.0),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }
}

impl Default for InitialState {
    fn default() -> Self {
        Self::ground()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelTag {
    Numeric,
    AnalyticFlatTop,
    EffectiveHamiltonian,
}

impl ModelTag {
    pub fn is_hermitian(&self) -> bool {
        !matches!(self, Self::EffectiveHamiltonian)
    }
}

/// Interaction-picture amplitudes a(t), b(t) on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeTrajectory {
    pub grid: TimeGrid,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub model_tag: ModelTag,
}

impl AmplitudeTrajectory {
    pub fn new(grid: TimeGrid, a: Vec<Complex64>, b: Vec<Complex64>, model_tag: ModelTag) -> Result<Self> {
        if a.len() != grid.n_points || b.len() != grid.n_points {
            return Err(Error::GridMismatch(format!(
                "trajectory lengths ({}, {}) do not match grid of {} points",
                a.len(),
                b.len(),
                grid.n_points
            )));
        }
        Ok(Self {
            grid,
            a,
            b,
            model_tag,
        })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn norm_sqr(&self, k: usize) -> f64 {
        self.a[k].norm_sqr() + self.b[k].norm_sqr()
    }

    /// Largest |‖ψ(t)‖² − ‖ψ(t₀)‖²| along the trajectory.
    pub fn max_norm_drift(&self) -> f64 {
        let n0 = self.norm_sqr(0);
        (0..self.len()).map(|k| (self.norm_sqr(k) - n0).abs()).fold(0.0, f64::max)
    }

    /// Final populations (|a|², |b|²).
    pub fn final_populations(&self) -> (f64, f64) {
        let k = self.len() - 1;
        (self.a[k].norm_sqr(), self.b[k].norm_sqr())
    }
}
