//! Super-Gaussian and flat-top laser pulses.
//!
//! The vector potential is `A(t) = A₀ Λₙ(t) sin(ω₀t + φ)` with the envelope
//! `Λₙ(t) = exp[−(ln2/2)(2t/τ)^{2n}]`, so that `Λₙ(±τ/2)² = 1/2` for every
//! finite order: `τ` is the FWHM of the squared envelope. The flat-top pulse is
//! the `n → ∞` limit, equal to one on `|t| ≤ τ/2`.
//!
//! The area constant is normalized as `𝒜ₙ = ∫Λₙdt / τ` (1.50, 1.18 and 1 for
//! n = 1, 2 and the flat top). The ratio `∫Λ_∞dt / ∫Λₙdt` is its reciprocal
//! (0.664 for a Gaussian) and is not what [`mollow_condition`] compares against.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::TwoLevelSystem;
use crate::error::{Error, Result};
use crate::quad;
use crate::transform::Spectrum;
use crate::units;

const HALF_LN2: f64 = 0.5 * LN_2;

/// Order of the super-Gaussian envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeOrder {
    Finite(u32),
    FlatTop,
}

impl EnvelopeOrder {
    pub fn finite(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("super-Gaussian order must be >= 1".into()));
        }
        Ok(Self::Finite(n))
    }

    pub fn is_flat_top(&self) -> bool {
        matches!(self, Self::FlatTop)
    }

    pub fn label(&self) -> String {
        match self {
            Self::Finite(n) => n.to_string(),
            Self::FlatTop => "flat".into(),
        }
    }
}

impl std::fmt::Display for EnvelopeOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

impl std::str::FromStr for EnvelopeOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "flat" | "flat-top" | "flattop" | "inf" => Ok(Self::FlatTop),
            other => {
                let n: u32 = other
                    .parse()
                    .map_err(|_| Error::Config(format!("invalid envelope order '{s}'")))?;
                Self::finite(n)
            }
        }
    }
}

/// Linearly polarized pulse, all quantities in atomic units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    /// Vector-potential amplitude A₀.
    pub amplitude: f64,
    /// Carrier angular frequency ω₀.
    pub omega0: f64,
    /// Duration τ (FWHM of Λ²).
    pub tau: f64,
    pub order: EnvelopeOrder,
    /// Carrier-envelope phase φ.
    pub cep: f64,
}

impl PulseSpec {
    pub fn new(amplitude: f64, omega0: f64, tau: f64, order: EnvelopeOrder, cep: f64) -> Result<Self> {
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(Error::Config(format!("amplitude must be >= 0, got {amplitude}")));
        }
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::Config(format!("carrier frequency must be > 0, got {omega0}")));
        }
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::Config(format!("pulse duration must be > 0, got {tau}")));
        }
        if let EnvelopeOrder::Finite(0) = order {
            return Err(Error::Config("super-Gaussian order must be >= 1".into()));
        }
        if !cep.is_finite() {
            return Err(Error::Config("CEP must be finite".into()));
        }
        Ok(Self {
            amplitude,
            omega0,
            tau,
            order,
            cep,
        })
    }

    /// Pulse with peak intensity given in W/cm²; `A₀ = E₀/ω₀`.
    pub fn from_intensity(
        intensity_w_cm2: f64,
        omega0: f64,
        tau: f64,
        order: EnvelopeOrder,
        cep: f64,
    ) -> Result<Self> {
        let e0 = units::intensity_to_field(intensity_w_cm2)?;
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::Config(format!("carrier frequency must be > 0, got {omega0}")));
        }
        Self::new(e0 / omega0, omega0, tau, order, cep)
    }

    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::new(self.amplitude, self.omega0, tau, self.order, self.cep)
    }

    pub fn with_amplitude(&self, amplitude: f64) -> Result<Self> {
        Self::new(amplitude, self.omega0, self.tau, self.order, self.cep)
    }

    /// Peak field E₀ = A₀ω₀.
    pub fn peak_field(&self) -> f64 {
        self.amplitude * self.omega0
    }

    pub fn t_initial(&self) -> f64 {
        -0.5 * self.tau
    }

    pub fn t_final(&self) -> f64 {
        0.5 * self.tau
    }

    /// Λₙ(t).
    pub fn envelope(&self, t: f64) -> f64 {
        envelope_value(self.order, self.tau, t)
    }

    /// dΛₙ/dt; zero for the flat top (edge deltas dropped).
    pub fn envelope_derivative(&self, t: f64) -> f64 {
        match self.order {
            EnvelopeOrder::FlatTop => 0.0,
            EnvelopeOrder::Finite(n) => {
                let x = 2.0 * t / self.tau;
                let n2 = 2 * n as i32;
                let lam = (-HALF_LN2 * x.powi(n2)).exp();
                -lam * HALF_LN2 * n2 as f64 * x.powi(n2 - 1) * (2.0 / self.tau)
            }
        }
    }

    pub fn vector_potential(&self, t: f64) -> f64 {
        self.amplitude * self.envelope(t) * (self.omega0 * t + self.cep).sin()
    }

    /// E(t) = −dA/dt, with the flat-top edge deltas dropped.
    pub fn electric_field(&self, t: f64) -> f64 {
        let phase = self.omega0 * t + self.cep;
        match self.order {
            EnvelopeOrder::FlatTop => {
                if t.abs() <= 0.5 * self.tau {
                    -self.amplitude * self.omega0 * phase.cos()
                } else {
                    0.0
                }
            }
            EnvelopeOrder::Finite(_) => {
                let lam = self.envelope(t);
                let dlam = self.envelope_derivative(t);
                -(self.amplitude * dlam * phase.sin() + self.amplitude * self.omega0 * lam * phase.cos())
            }
        }
    }

    /// Half-width beyond which Λₙ stays below `threshold`.
    pub fn support_half_width(&self, threshold: f64) -> f64 {
        match self.order {
            EnvelopeOrder::FlatTop => 0.5 * self.tau,
            EnvelopeOrder::Finite(n) => {
                let x = (-threshold.ln() / HALF_LN2).powf(1.0 / (2.0 * n as f64));
                0.5 * self.tau * x.max(1.0)
            }
        }
    }

    /// Peak resonant Rabi frequency Ω₀ = ω₀A₀z_ba.
    pub fn rabi_frequency(&self, system: &TwoLevelSystem) -> f64 {
        self.omega0 * self.amplitude * system.z_ba
    }

    /// T_Rabi = 2π/|Ω₀|; infinite for a zero-amplitude pulse.
    pub fn rabi_period(&self, system: &TwoLevelSystem) -> f64 {
        2.0 * PI / self.rabi_frequency(system).abs()
    }
}

pub(crate) fn envelope_value(order: EnvelopeOrder, tau: f64, t: f64) -> f64 {
    match order {
        EnvelopeOrder::FlatTop => {
            if t.abs() <= 0.5 * tau {
                1.0
            } else {
                0.0
            }
        }
        EnvelopeOrder::Finite(n) => {
            let x = 2.0 * t / tau;
            (-HALF_LN2 * x.powi(2 * n as i32)).exp()
        }
    }
}

/// Free-function form of [`PulseSpec::envelope`].
pub fn envelope(spec: &PulseSpec, t: f64) -> f64 {
    spec.envelope(t)
}

pub fn vector_potential(spec: &PulseSpec, t: f64) -> f64 {
    spec.vector_potential(t)
}

pub fn electric_field(spec: &PulseSpec, t: f64) -> f64 {
    spec.electric_field(t)
}

/// Upper limit in u = 2t/τ beyond which exp(−(ln2/2)u^{2n}) < 1e-20.
fn u_cutoff(n: u32) -> f64 {
    (46.0 / HALF_LN2).powf(1.0 / (2.0 * n as f64))
}

/// 𝒜ₙ = ∫Λₙ(t)dt / τ.
pub fn area_constant(order: EnvelopeOrder) -> f64 {
    match order {
        EnvelopeOrder::FlatTop => 1.0,
        EnvelopeOrder::Finite(n) => {
            let n2 = 2 * n as i32;
            // ∫Λ dt / τ = (1/2)∫ exp(−c u^{2n}) du over the real line = ∫₀^∞.
            quad::integrate(|u| (-HALF_LN2 * u.powi(n2)).exp(), 0.0, u_cutoff(n), 1e-12)
        }
    }
}

/// Pulse area θ = Ω₀ ∫Λₙ(t)dt (radians).
pub fn pulse_area(spec: &PulseSpec, system: &TwoLevelSystem) -> f64 {
    spec.rabi_frequency(system).abs() * spec.tau * area_constant(spec.order)
}

/// Duration that gives pulse area `area` (radians) at fixed amplitude.
pub fn tau_for_area(spec: &PulseSpec, system: &TwoLevelSystem, area: f64) -> Result<f64> {
    let omega = spec.rabi_frequency(system).abs();
    if omega == 0.0 {
        return Err(Error::Config("zero amplitude pulse has no finite area".into()));
    }
    if !(area.is_finite() && area > 0.0) {
        return Err(Error::Config(format!("pulse area must be > 0, got {area}")));
    }
    Ok(area / (omega * area_constant(spec.order)))
}

/// Unnormalized lobe of |d(Λₙ²)/dt| in u = 2t/τ, for u > 0.
fn turn_on_lobe(n: u32, u: f64) -> f64 {
    let n2 = 2 * n as i32;
    u.powi(n2 - 1) * (-LN_2 * u.powi(n2)).exp()
}

/// τ′ₙ: full width at half maximum of one lobe of |d(Λₙ²)/dt|.
pub fn turn_on_duration(order: EnvelopeOrder, tau: f64) -> f64 {
    match order {
        EnvelopeOrder::FlatTop => 0.0,
        EnvelopeOrder::Finite(n) => tau * 0.5 * turn_on_width_u(n),
    }
}

fn turn_on_width_u(n: u32) -> f64 {
    let g = |u: f64| turn_on_lobe(n, u);
    let hi = u_cutoff(n);

    // Bracket the maximum on a coarse scan, then refine by golden section.
    let samples = 2000;
    let step = hi / samples as f64;
    let (mut best_k, mut best) = (1, g(step));
    for k in 2..samples {
        let v = g(k as f64 * step);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let (mut a, mut b) = ((best_k - 1) as f64 * step, (best_k + 1) as f64 * step);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    while (b - a).abs() > 1e-14 * b.max(1.0) {
        if g(c) > g(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
    }
    let u_max = 0.5 * (a + b);
    let half = 0.5 * g(u_max);

    let bisect = |mut lo: f64, mut hi: f64, rising: bool| {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let above = g(mid) > half;
            if above == rising {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-15 * u_max {
                break;
            }
        }
        0.5 * (lo + hi)
    };
    let left = bisect(0.0, u_max, true);
    let right = bisect(u_max, hi, false);
    right - left
}

/// ℬₙ = τ/(2τ′ₙ); infinite for the flat top.
pub fn bandwidth_constant(order: EnvelopeOrder) -> f64 {
    match order {
        EnvelopeOrder::FlatTop => f64::INFINITY,
        EnvelopeOrder::Finite(n) => 1.0 / turn_on_width_u(n),
    }
}

/// Verdict of the admissibility condition 𝒜ₙ < τ/T_Rabi < ℬₙ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MollowConditionReport {
    pub order: EnvelopeOrder,
    pub area_constant: f64,
    /// Serialized as `null` when infinite (flat top).
    pub bandwidth_constant: f64,
    pub tau_over_t_rabi: f64,
    pub satisfied: bool,
    /// τ/T_Rabi − 𝒜ₙ.
    pub margin_low: f64,
    /// ℬₙ − τ/T_Rabi.
    pub margin_high: f64,
}

pub fn mollow_condition(spec: &PulseSpec, system: &TwoLevelSystem) -> Result<MollowConditionReport> {
    if spec.amplitude <= 0.0 {
        return Err(Error::Domain("zero amplitude: Rabi period undefined".into()));
    }
    let ratio = spec.tau / spec.rabi_period(system);
    Ok(condition_for_ratio(spec.order, ratio))
}

/// Evaluates the condition for a given τ/T_Rabi.
pub fn condition_for_ratio(order: EnvelopeOrder, ratio: f64) -> MollowConditionReport {
    let a = area_constant(order);
    let b = bandwidth_constant(order);
    MollowConditionReport {
        order,
        area_constant: a,
        bandwidth_constant: b,
        tau_over_t_rabi: ratio,
        satisfied: a < ratio && ratio < b,
        margin_low: ratio - a,
        margin_high: b - ratio,
    }
}

/// Fourier transform Λ̃ₙ(ω) = (2π)^{-1/2} ∫Λₙ(t) e^{iωt} dt (real, even).
pub fn envelope_spectrum(spec: &PulseSpec, omegas: &[f64]) -> Result<Spectrum<Complex64>> {
    let norm = 1.0 / (2.0 * PI).sqrt();
    let tau = spec.tau;
    let values = omegas
        .iter()
        .map(|&w| {
            let v = match spec.order {
                EnvelopeOrder::FlatTop => tau * sinc(0.5 * w * tau),
                EnvelopeOrder::Finite(n) => {
                    let n2 = 2 * n as i32;
                    let k = 0.5 * w * tau;
                    // 2∫₀^∞ Λ cos(ωt) dt with t = τu/2.
                    tau * quad::integrate(
                        |u| (-HALF_LN2 * u.powi(n2)).exp() * (k * u).cos(),
                        0.0,
                        u_cutoff(n),
                        1e-10,
                    )
                }
            };
            Complex64::new(norm * v, 0.0)
        })
        .collect();
    Spectrum::new(omegas.to_vec(), values)
}

/// Closed-form transform of the flat-top vector potential, positive-frequency
/// branch only: `(iA₀/√2π)(τ/2) e^{−iφ} sinc((ω−ω₀)τ/2)`.
pub fn flat_top_potential_ft(spec: &PulseSpec, omegas: &[f64]) -> Result<Spectrum<Complex64>> {
    if !spec.order.is_flat_top() {
        return Err(Error::Unsupported(format!(
            "closed-form potential transform needs a flat-top pulse, got order {}",
            spec.order
        )));
    }
    let pref = Complex64::new(0.0, spec.amplitude * 0.5 * spec.tau / (2.0 * PI).sqrt())
        * Complex64::from_polar(1.0, -spec.cep);
    let values = omegas
        .iter()
        .map(|&w| pref * sinc(0.5 * (w - spec.omega0) * spec.tau))
        .collect();
    Spectrum::new(omegas.to_vec(), values)
}

/// sin(x)/x with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Complex sin(z)/z.
pub fn csinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        Complex64::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}
