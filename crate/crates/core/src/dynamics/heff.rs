//! Non-Hermitian effective two-level Hamiltonian.
//!
//! The default model lives in the rotating frame `a_h = a`,
//! `b_h = e^{i(φ_c + Δωt)} b` with `φ_c = φ + π`, where the resonant flat-top
//! drive reads
//! ```text
//! h_aa = R_aa,  h_bb = −Δω + R_bb,  h_ab = h_ba = Ω/2 + R_ab.
//! ```
//! With all corrections `R` zero this is the Hermitian rotating-wave
//! Hamiltonian. Widths enter as `R = −iΓ/2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::analytic::detuning;
use super::system::{AmplitudeTrajectory, InitialState, ModelTag, TwoLevelSystem};
use crate::error::{Error, Result};
use crate::pulse::{csinc, PulseSpec};
use crate::transform::{check_omegas, Signal, Spectrum};
use crate::units::TimeGrid;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveHamiltonian {
    pub h_aa: Complex64,
    pub h_bb: Complex64,
    /// Off-diagonal element; h_ba = h_ab.
    pub h_ab: Complex64,
}

impl EffectiveHamiltonian {
    pub fn new(h_aa: Complex64, h_bb: Complex64, h_ab: Complex64) -> Result<Self> {
        for (name, h) in [("h_aa", h_aa), ("h_bb", h_bb), ("h_ab", h_ab)] {
            if !(h.re.is_finite() && h.im.is_finite()) {
                return Err(Error::Config(format!("{name} must be finite")));
            }
        }
        if h_aa.im > 0.0 || h_bb.im > 0.0 {
            return Err(Error::Config(format!(
                "diagonal elements must not have positive imaginary parts (gain): h_aa = {h_aa}, h_bb = {h_bb}"
            )));
        }
        Ok(Self { h_aa, h_bb, h_ab })
    }

    pub fn is_hermitian(&self) -> bool {
        self.h_aa.im == 0.0 && self.h_bb.im == 0.0 && self.h_ab.im == 0.0
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.h_aa * v[0] + self.h_ab * v[1],
            self.h_ab * v[0] + self.h_bb * v[1],
        ]
    }
}

/// Corrections added to the rotating-frame drive.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HeffShifts {
    pub r_aa: Complex64,
    pub r_bb: Complex64,
    pub r_ab: Complex64,
}

impl HeffShifts {
    /// Pure decay: R_aa = −iΓ_a/2, R_bb = −iΓ_b/2.
    pub fn widths(gamma_a: f64, gamma_b: f64) -> Self {
        Self {
            r_aa: Complex64::new(0.0, -0.5 * gamma_a),
            r_bb: Complex64::new(0.0, -0.5 * gamma_b),
            r_ab: Complex64::new(0.0, 0.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::default()
    }
}

pub fn build_effective_hamiltonian(
    system: &TwoLevelSystem,
    spec: &PulseSpec,
    shifts: &HeffShifts,
) -> Result<EffectiveHamiltonian> {
    let rabi = system.z_ba * spec.peak_field();
    let dw = detuning(system, spec);
    EffectiveHamiltonian::new(
        shifts.r_aa,
        Complex64::new(-dw, 0.0) + shifts.r_bb,
        Complex64::new(0.5 * rabi, 0.0) + shifts.r_ab,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeffEigensystem {
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    /// Unnormalized |+⟩ = h_ab|a⟩ + [(h_bb−h_aa)/2 + W/2]|b⟩.
    pub v_plus: [Complex64; 2],
    pub v_minus: [Complex64; 2],
    /// Complex generalized Rabi frequency W = λ₊ − λ₋.
    pub w: Complex64,
}

/// Eigenvalues λ± = (h_aa+h_bb)/2 ± W/2 with W = √((h_aa−h_bb)² + 4h_ab²).
pub fn heff_eigensystem(h: &EffectiveHamiltonian) -> Result<HeffEigensystem> {
    let diff = h.h_aa - h.h_bb;
    let w = (diff * diff + 4.0 * h.h_ab * h.h_ab).sqrt();
    let scale = h.h_aa.norm().max(h.h_bb.norm()).max(h.h_ab.norm());
    if scale == 0.0 || w.norm() <= 1e-12 * scale {
        return Err(Error::Degenerate(format!("W = {w} vanishes; eigenbasis incomplete")));
    }
    if h.h_ab.norm() <= 1e-14 * scale {
        return Err(Error::Degenerate("h_ab = 0: printed eigenvectors collapse".into()));
    }
    let mean = 0.5 * (h.h_aa + h.h_bb);
    let half = 0.5 * (h.h_bb - h.h_aa);
    Ok(HeffEigensystem {
        lambda_plus: mean + 0.5 * w,
        lambda_minus: mean - 0.5 * w,
        v_plus: [h.h_ab, half + 0.5 * w],
        v_minus: [h.h_ab, half - 0.5 * w],
        w,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermKind {
    CentralPlus,
    CentralMinus,
    SidePlus,
    SideMinus,
}

/// One contribution A_j e^{B_j (t − t_i)} to a_h*(t) b_h(t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeffTerm {
    pub kind: TermKind,
    pub amplitude: Complex64,
    pub rate: Complex64,
}

/// Effective-Hamiltonian evolution during a flat-top pulse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeffSolution {
    pub hamiltonian: EffectiveHamiltonian,
    pub eigen: HeffEigensystem,
    pub c_plus: Complex64,
    pub c_minus: Complex64,
    pub terms: [HeffTerm; 4],
    /// p_ba* e^{−iφ_c}, the frame factor in front of a_h* b_h.
    pub prefactor: Complex64,
    pub omega0: f64,
    pub eps_ba: f64,
    pub detuning: f64,
    pub frame_phase: f64,
    pub t_i: f64,
    pub t_f: f64,
    pub initial: InitialState,
}

impl HeffSolution {
    pub fn new(
        system: &TwoLevelSystem,
        spec: &PulseSpec,
        h: &EffectiveHamiltonian,
        initial: InitialState,
    ) -> Result<Self> {
        if !spec.order.is_flat_top() {
            return Err(Error::Unsupported(format!(
                "effective-Hamiltonian closed form needs a flat-top pulse, got order {}",
                spec.order
            )));
        }
        let eigen = heff_eigensystem(h)?;
        let dw = detuning(system, spec);
        let frame_phase = spec.cep + PI;
        let t_i = spec.t_initial();
        let a0 = initial.a;
        let b0 = initial.b * Complex64::from_polar(1.0, frame_phase + dw * t_i);

        // [h_ab h_ab; d₊ d₋][c₊; c₋] = [a0; b0]
        let (dp, dm) = (eigen.v_plus[1], eigen.v_minus[1]);
        let det = h.h_ab * (dm - dp);
        let c_plus = (a0 * dm - h.h_ab * b0) / det;
        let c_minus = (h.h_ab * b0 - a0 * dp) / det;

        let cp = c_plus * h.h_ab;
        let cm = c_minus * h.h_ab;
        let dpp = c_plus * dp;
        let dmm = c_minus * dm;
        let (lp, lm) = (eigen.lambda_plus, eigen.lambda_minus);
        let terms = [
            HeffTerm {
                kind: TermKind::CentralPlus,
                amplitude: cp.conj() * dpp,
                rate: I * (lp.conj() - lp),
            },
            HeffTerm {
                kind: TermKind::CentralMinus,
                amplitude: cm.conj() * dmm,
                rate: I * (lm.conj() - lm),
            },
            HeffTerm {
                kind: TermKind::SidePlus,
                amplitude: cp.conj() * dmm,
                rate: I * (lp.conj() - lm),
            },
            HeffTerm {
                kind: TermKind::SideMinus,
                amplitude: cm.conj() * dpp,
                rate: I * (lm.conj() - lp),
            },
        ];
        Ok(Self {
            hamiltonian: *h,
            eigen,
            c_plus,
            c_minus,
            terms,
            prefactor: system.p_ba().conj() * Complex64::from_polar(1.0, -frame_phase),
            omega0: spec.omega0,
            eps_ba: system.eps_ba(),
            detuning: dw,
            frame_phase,
            t_i,
            t_f: spec.t_final(),
            initial,
        })
    }

    /// Rotating-frame amplitudes (a_h, b_h) at elapsed time s = t − t_i.
    fn frame_amplitudes(&self, s: f64) -> (Complex64, Complex64) {
        let ep = (-I * self.eigen.lambda_plus * s).exp();
        let em = (-I * self.eigen.lambda_minus * s).exp();
        let h_ab = self.hamiltonian.h_ab;
        (
            self.c_plus * h_ab * ep + self.c_minus * h_ab * em,
            self.c_plus * self.eigen.v_plus[1] * ep + self.c_minus * self.eigen.v_minus[1] * em,
        )
    }

    /// Interaction-picture amplitudes; frozen outside the pulse.
    pub fn amplitudes(&self, t: f64) -> (Complex64, Complex64) {
        if t <= self.t_i {
            return (self.initial.a, self.initial.b);
        }
        let te = t.min(self.t_f);
        let (a, bh) = self.frame_amplitudes(te - self.t_i);
        (a, bh * Complex64::from_polar(1.0, -(self.frame_phase + self.detuning * te)))
    }

    /// p(t) = Σ_j A_j p_ba* e^{B_j(t−t_i)} e^{−i(ε_ba+Δω)t} + c.c. inside the pulse.
    pub fn momentum(&self, t: f64) -> f64 {
        if t < self.t_i || t > self.t_f {
            let (a, b) = self.amplitudes(t);
            let v = self.prefactor * Complex64::from_polar(1.0, self.frame_phase) * a.conj() * b
                * Complex64::from_polar(1.0, -self.eps_ba * t);
            return 2.0 * v.re;
        }
        let s = t - self.t_i;
        let sum: Complex64 = self.terms.iter().map(|j| j.amplitude * (j.rate * s).exp()).sum();
        2.0 * (self.prefactor * sum * Complex64::from_polar(1.0, -self.omega0 * t)).re
    }

    /// Positive-frequency transform of the in-pulse momentum:
    /// Σ_j (A_j p_ba*/√2π) e^{−B_j t_i} τ sinc((ω−ω₀−iB_j)τ/2).
    pub fn spectrum(&self, omegas: &[f64]) -> Result<Spectrum<Complex64>> {
        check_omegas(omegas)?;
        let tau = self.t_f - self.t_i;
        let norm = self.prefactor / (2.0 * PI).sqrt();
        let values = omegas
            .iter()
            .map(|&w| {
                let k = w - self.omega0;
                let sum: Complex64 = self
                    .terms
                    .iter()
                    .map(|j| j.amplitude * window_integral(j.rate, k, self.t_i, tau))
                    .sum();
                norm * sum
            })
            .collect();
        Spectrum::new(omegas.to_vec(), values)
    }

    /// Long-pulse limit Σ_j iA_j p_ba* / (√2π (ω − ω₀ − iB_j)).
    pub fn long_pulse_spectrum(&self, omegas: &[f64]) -> Result<Spectrum<Complex64>> {
        check_omegas(omegas)?;
        if let Some(j) = self.terms.iter().find(|j| j.rate.re >= 0.0 && j.amplitude.norm() > 0.0) {
            return Err(Error::Domain(format!(
                "long-pulse limit needs decaying terms; {:?} has Re B = {}",
                j.kind, j.rate.re
            )));
        }
        let norm = self.prefactor / (2.0 * PI).sqrt();
        let values = omegas
            .iter()
            .map(|&w| {
                let sum: Complex64 = self
                    .terms
                    .iter()
                    .map(|j| I * j.amplitude / (Complex64::new(w - self.omega0, 0.0) - I * j.rate))
                    .sum();
                norm * sum
            })
            .collect();
        Spectrum::new(omegas.to_vec(), values)
    }

    pub fn trajectory(&self, grid: &TimeGrid) -> Result<AmplitudeTrajectory> {
        let (a, b): (Vec<_>, Vec<_>) = grid.times().map(|t| self.amplitudes(t)).unzip();
        AmplitudeTrajectory::new(*grid, a, b, ModelTag::EffectiveHamiltonian)
    }

    pub fn momentum_signal(&self, grid: &TimeGrid) -> Result<Signal<f64>> {
        Signal::from_fn(*grid, |t| self.momentum(t))
    }
}

/// e^{−B t_i} ∫_{t_i}^{t_i+τ} e^{(B + ik)t} dt, evaluated without overflow.
fn window_integral(rate: Complex64, k: f64, t_i: f64, tau: f64) -> Complex64 {
    let q = rate + I * k;
    if (q * tau).norm() < 1e-6 {
        let z = (Complex64::new(k, 0.0) - I * rate) * (0.5 * tau);
        return (-rate * t_i).exp() * tau * csinc(z);
    }
    // = e^{ik t_i} (e^{qτ} − 1)/q
    Complex64::from_polar(1.0, k * t_i) * ((q * tau).exp() - 1.0) / q
}

/// Time-domain momentum of the effective model on a grid.
pub fn heff_momentum_time(
    system: &TwoLevelSystem,
    spec: &PulseSpec,
    h: &EffectiveHamiltonian,
    initial: InitialState,
    grid: &TimeGrid,
) -> Result<Signal<f64>> {
    HeffSolution::new(system, spec, h, initial)?.momentum_signal(grid)
}

pub fn heff_momentum_spectrum(
    system: &TwoLevelSystem,
    spec: &PulseSpec,
    h: &EffectiveHamiltonian,
    initial: InitialState,
    omegas: &[f64],
) -> Result<Spectrum<Complex64>> {
    HeffSolution::new(system, spec, h, initial)?.spectrum(omegas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::analytic::{analytic_momentum_spectrum, analytic_momentum_time};
    use crate::pulse::EnvelopeOrder;
    use crate::transform::uniform_omegas;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn setup(tau: f64, dw: f64) -> (TwoLevelSystem, PulseSpec) {
        let sys = TwoLevelSystem::hydrogen_1s_2p();
        let e0 = 5.338e-3;
        let w0 = sys.eps_ba() + dw;
        (sys, PulseSpec::new(e0 / w0, w0, tau, EnvelopeOrder::FlatTop, 0.0).unwrap())
    }

    #[test]
    fn rwa_eigenvalues() {
        let (sys, spec) = setup(2000.0, 0.0);
        let h = build_effective_hamiltonian(&sys, &spec, &HeffShifts::default()).unwrap();
        let e = heff_eigensystem(&h).unwrap();
        let om = sys.z_ba * spec.peak_field();
        assert!((e.lambda_plus - c(0.5 * om, 0.0)).norm() < 1e-15);
        assert!((e.lambda_minus - c(-0.5 * om, 0.0)).norm() < 1e-15);

        let (sys, spec) = setup(2000.0, 0.002);
        let h = build_effective_hamiltonian(&sys, &spec, &HeffShifts::default()).unwrap();
        let e = heff_eigensystem(&h).unwrap();
        let w = om.hypot(0.002);
        assert!((e.lambda_plus - c(-0.001 + 0.5 * w, 0.0)).norm() < 1e-12);
        assert!((e.lambda_minus - c(-0.001 - 0.5 * w, 0.0)).norm() < 1e-12);
        assert!(e.lambda_plus.im.abs() < 1e-18);
    }

    #[test]
    fn equal_widths_share_imaginary_part() {
        let (sys, spec) = setup(2000.0, 0.0);
        let h = build_effective_hamiltonian(&sys, &spec, &HeffShifts::widths(1e-3, 1e-3)).unwrap();
        let e = heff_eigensystem(&h).unwrap();
        assert!((e.lambda_plus.im + 0.5e-3).abs() < 1e-15);
        assert!((e.lambda_minus.im + 0.5e-3).abs() < 1e-15);
    }

    #[test]
    fn gain_rejected() {
        assert!(EffectiveHamiltonian::new(c(0.0, 1e-3), c(0.0, 0.0), c(1.0, 0.0)).is_err());
        let (sys, spec) = setup(2000.0, 0.0);
        let shifts = HeffShifts {
            r_bb: c(0.0, 1e-4),
            ..Default::default()
        };
        assert!(matches!(build_effective_hamiltonian(&sys, &spec, &shifts), Err(Error::Config(_))));
    }

    #[test]
    fn degenerate_rejected() {
        // (h_aa − h_bb)² + 4h_ab² = 0 with h_ab ≠ 0.
        let h = EffectiveHamiltonian::new(c(0.0, 0.0), c(0.0, -2.0), c(1.0, 0.0)).unwrap();
        assert!(matches!(heff_eigensystem(&h), Err(Error::Degenerate(_))));
        let h = EffectiveHamiltonian::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(matches!(heff_eigensystem(&h), Err(Error::Degenerate(_))));
    }

    #[test]
    fn hermitian_reduction_time_and_frequency() {
        for dw in [0.0, 0.0015] {
            let (sys, spec) = setup(2400.0, dw);
            let h = build_effective_hamiltonian(&sys, &spec, &HeffShifts::default()).unwrap();
            for init in [InitialState::ground(), InitialState::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap()] {
                let sol = HeffSolution::new(&sys, &spec, &h, init).unwrap();
                for j in -70..=70 {
                    let t = j as f64 * 17.3;
                    let p = analytic_momentum_time(&sys, &spec, init, t).unwrap();
                    assert!((sol.momentum(t) - p).abs() < 1e-10, "t={t}");
                }
                let ws = uniform_omegas(0.36, 0.39, 301).unwrap();
                let a = analytic_momentum_spectrum(&sys, &spec, init, &ws).unwrap();
                let b = sol.spectrum(&ws).unwrap();
                let peak = a.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
                for (x, y) in a.values.iter().zip(&b.values) {
                    assert!((x - y).norm() < 1e-10 * peak);
                }
            }
        }
    }

    #[test]
    fn decaying_terms_shrink() {
        let (sys, spec) = setup(4000.0, 0.0);
        let h = build_effective_hamiltonian(&sys, &spec, &HeffShifts::widths(0.0, 2e-3)).unwrap();
        let sol = HeffSolution::new(&sys, &spec, &h, InitialState::ground()).unwrap();
        for j in &sol.terms {
            assert!(j.rate.re < 0.0);
        }
        let traj = sol.trajectory(&TimeGrid::symmetric(2500, 1.0).unwrap()).unwrap();
        for k in 1..traj.len() {
            assert!(traj.norm_sqr(k) <= traj.norm_sqr(k - 1) + 1e-8);
        }
        // Envelope Σ|A_j e^{B_j s}| bounds |p| and decreases monotonically.
        let envelope = |s: f64| -> f64 {
            sol.terms.iter().map(|j| (j.amplitude * (j.rate * s).exp()).norm()).sum()
        };
        let mut prev = f64::INFINITY;
        for k in 0..400 {
            let s = k as f64 * 10.0;
            let env = envelope(s);
            assert!(env <= prev * (1.0 + 1e-12));
            assert!(sol.momentum(sol.t_i + s).abs() <= 2.0 * sol.prefactor.norm() * env * (1.0 + 1e-9));
            prev = env;
        }
    }

    #[test]
    fn long_pulse_limit() {
        let (sys, spec) = setup(60000.0, 0.0);
        let h = build_effective_hamiltonian(&sys, &spec, &HeffShifts::widths(1.5e-3, 1.5e-3)).unwrap();
        let sol = HeffSolution::new(&sys, &spec, &h, InitialState::ground()).unwrap();
        let ws = uniform_omegas(0.365, 0.385, 201).unwrap();
        let full = sol.spectrum(&ws).unwrap();
        let lorentz = sol.long_pulse_spectrum(&ws).unwrap();
        let peak = lorentz.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (k, (x, y)) in full.values.iter().zip(&lorentz.values).enumerate() {
            // The finite window starts at t_i rather than 0: a pure phase e^{i(ω−ω₀)t_i}.
            let shift = Complex64::from_polar(1.0, (ws[k] - spec.omega0) * sol.t_i);
            assert!((x - y * shift).norm() < 1e-6 * peak);
        }
    }

    proptest::proptest! {
        #[test]
        fn eigen_residuals(a in -1.0f64..1.0, b in -1.0f64..0.0, c_ in -1.0f64..1.0, d in -1.0f64..0.0, e in 0.05f64..1.0, f in -1.0f64..1.0) {
            let h = EffectiveHamiltonian::new(c(a, b * 0.1), c(c_, d * 0.1), c(e, f * 0.1)).unwrap();
            let es = heff_eigensystem(&h).unwrap();
            for (l, v) in [(es.lambda_plus, es.v_plus), (es.lambda_minus, es.v_minus)] {
                let hv = h.apply(v);
                let r = ((hv[0] - l * v[0]).norm_sqr() + (hv[1] - l * v[1]).norm_sqr()).sqrt();
                proptest::prop_assert!(r < 1e-12);
            }
            proptest::prop_assert!((es.lambda_plus - es.lambda_minus - es.w).norm() < 1e-14);
        }

        #[test]
        fn hermitian_real_eigenvalues(a in -1.0f64..1.0, b in -1.0f64..1.0, e in 0.01f64..1.0) {
            let h = EffectiveHamiltonian::new(c(a, 0.0), c(b, 0.0), c(e, 0.0)).unwrap();
            let es = heff_eigensystem(&h).unwrap();
            proptest::prop_assert!(es.lambda_plus.im.abs() < 1e-15 && es.lambda_minus.im.abs() < 1e-15);
        }
    }
}
