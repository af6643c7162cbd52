//! Resonance fluorescence and Larmor radiation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::AmplitudeTrajectory;
use crate::error::{Error, Result};
use crate::transform::{check_omegas, fourier, Signal};
use crate::units::CODATA_2018;

/// Default spectrometer width Γ_F as a fraction of Ω₀.
pub const DEFAULT_FILTER_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluorescenceSpectrum {
    pub omegas: Vec<f64>,
    pub s_semiclassical: Vec<f64>,
    pub s_quantum: Vec<f64>,
    /// scale_factor·(S_s + S_q).
    pub total: Vec<f64>,
    pub gamma_filter: f64,
    pub scale_factor: f64,
    /// True until [`scale_fluorescence_to_larmor`] has fixed the magnitude.
    pub arbitrary_units: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LarmorSpectrum {
    pub omegas: Vec<f64>,
    /// W(ω) = 4|ã(ω)|²/3c³.
    pub w_total: Vec<f64>,
    /// Polar angle of `w_angle`, if requested.
    pub angle: Option<f64>,
    /// W(ω; θ) = sin²θ |ã(ω)|²/2πc³.
    pub w_angle: Option<Vec<f64>>,
}

/// 2Γ_F |∫dt e^{[Γ_F − i(ω−ω₀)]t} g(t)|² over the trajectory window.
fn filtered_power(traj: &AmplitudeTrajectory, g: impl Fn(usize) -> Complex64, omega0: f64, gamma: f64, omegas: &[f64]) -> Result<Vec<f64>> {
    // ∫e^{−iνt}h dt = √2π·conj(F[h*](ν)) with F the forward transform.
    let values: Vec<Complex64> = (0..traj.len())
        .map(|k| (g(k) * (gamma * traj.grid.time(k)).exp()).conj())
        .collect();
    let mut signal = Signal::new(traj.grid, values)?;
    signal.filtered = true;
    let nus: Vec<f64> = omegas.iter().map(|w| w - omega0).collect();
    let ft = fourier(&signal, &nus)?;
    Ok(ft.values.iter().map(|v| 2.0 * gamma * 2.0 * PI * v.norm_sqr()).collect())
}

/// Filtered fluorescence spectrum
/// ```text
/// S_s(ω) = 2Γ_F |∫dt e^{[Γ_F − i(ω−ω₀)]t} a(t)b*(t)|²
/// S_q(ω) = 2Γ_F |∫dt e^{[Γ_F − i(ω−ω₀)]t} |b(t)|²|²
/// ```
/// with t measured on the trajectory grid. The result is in arbitrary units.
pub fn fluorescence(traj: &AmplitudeTrajectory, omega0: f64, gamma_filter: f64, omegas: &[f64]) -> Result<FluorescenceSpectrum> {
    if !(gamma_filter.is_finite() && gamma_filter > 0.0) {
        return Err(Error::Domain(format!("filter width must be positive, got {gamma_filter}")));
    }
    check_omegas(omegas)?;
    let s_s = filtered_power(traj, |k| traj.a[k] * traj.b[k].conj(), omega0, gamma_filter, omegas)?;
    let s_q = filtered_power(traj, |k| Complex64::new(traj.b[k].norm_sqr(), 0.0), omega0, gamma_filter, omegas)?;
    let total = s_s.iter().zip(&s_q).map(|(a, b)| a + b).collect();
    Ok(FluorescenceSpectrum {
        omegas: omegas.to_vec(),
        s_semiclassical: s_s,
        s_quantum: s_q,
        total,
        gamma_filter,
        scale_factor: 1.0,
        arbitrary_units: true,
    })
}

/// Larmor spectrum of an acceleration signal.
pub fn larmor(accel: &Signal<f64>, omegas: &[f64], angle: Option<f64>) -> Result<LarmorSpectrum> {
    let c3 = CODATA_2018.speed_of_light_au.powi(3);
    let ft = fourier(accel, omegas)?;
    let power: Vec<f64> = ft.values.iter().map(|v| v.norm_sqr()).collect();
    let w_total = power.iter().map(|p| 4.0 * p / (3.0 * c3)).collect();
    let w_angle = angle.map(|th| {
        let s2 = th.sin().powi(2);
        power.iter().map(|p| s2 * p / (2.0 * PI * c3)).collect()
    });
    Ok(LarmorSpectrum {
        omegas: omegas.to_vec(),
        w_total,
        angle,
        w_angle,
    })
}

/// Scales the fluorescence so that scale·S_s fits W(ω) in least squares.
pub fn scale_fluorescence_to_larmor(fluor: &FluorescenceSpectrum, larmor: &LarmorSpectrum) -> Result<FluorescenceSpectrum> {
    if fluor.omegas != larmor.omegas {
        return Err(Error::GridMismatch("fluorescence and Larmor spectra use different frequency grids".into()));
    }
    let ss: f64 = fluor.s_semiclassical.iter().map(|s| s * s).sum();
    if ss == 0.0 {
        return Err(Error::Domain("semiclassical fluorescence vanishes; cannot fix its scale".into()));
    }
    let sw: f64 = fluor.s_semiclassical.iter().zip(&larmor.w_total).map(|(s, w)| s * w).sum();
    let scale = sw / ss;
    let total = fluor
        .s_semiclassical
        .iter()
        .zip(&fluor.s_quantum)
        .map(|(a, b)| scale * (a + b))
        .collect();
    Ok(FluorescenceSpectrum {
        total,
        scale_factor: scale,
        arbitrary_units: false,
        ..fluor.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::ModelTag;
    use crate::transform::uniform_omegas;
    use crate::units::TimeGrid;

    fn traj(f: impl Fn(f64) -> (Complex64, Complex64)) -> AmplitudeTrajectory {
        let g = TimeGrid::symmetric(2000, 0.5).unwrap();
        let (a, b) = g.times().map(f).unzip();
        AmplitudeTrajectory::new(g, a, b, ModelTag::Numeric).unwrap()
    }

    #[test]
    fn ground_state_is_dark() {
        let t = traj(|_| (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
        let ws = uniform_omegas(0.3, 0.4, 51).unwrap();
        let f = fluorescence(&t, 0.35, 1e-3, &ws).unwrap();
        assert!(f.total.iter().all(|&v| v == 0.0));
        assert!(matches!(fluorescence(&t, 0.35, 0.0, &ws), Err(Error::Domain(_))));
    }

    #[test]
    fn global_phase_invariance() {
        let f = |t: f64| {
            let x = 0.01 * t;
            (Complex64::new(x.cos(), 0.0), Complex64::new(0.0, x.sin()))
        };
        let ph = Complex64::from_polar(1.0, 0.7);
        let ws = uniform_omegas(0.3, 0.4, 41).unwrap();
        let s1 = fluorescence(&traj(f), 0.35, 1e-3, &ws).unwrap();
        let s2 = fluorescence(&traj(|t| { let (a, b) = f(t); (a * ph, b * ph) }), 0.35, 1e-3, &ws).unwrap();
        for (x, y) in s1.total.iter().zip(&s2.total) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300));
        }
    }

    #[test]
    fn wider_filter_broadens_line() {
        let t = traj(|t| {
            let ph = Complex64::from_polar(1.0, 0.02 * t);
            (Complex64::new(0.6, 0.0), ph * 0.8)
        });
        let ws = uniform_omegas(0.25, 0.45, 2001).unwrap();
        let fwhm = |g: f64| {
            let s = fluorescence(&t, 0.35, g, &ws).unwrap().s_semiclassical;
            let m = s.iter().cloned().fold(0.0, f64::max);
            s.iter().filter(|&&v| v >= 0.5 * m).count()
        };
        assert!(fwhm(2e-3) <= fwhm(4e-3));
    }

    #[test]
    fn solid_angle_integral() {
        let g = TimeGrid::symmetric(400, 0.5).unwrap();
        let acc = Signal::from_fn(g, |t| (-(t / 50.0).powi(2)).exp() * (0.3 * t).cos()).unwrap();
        let ws = vec![0.25, 0.3, 0.35];
        let total = larmor(&acc, &ws, None).unwrap().w_total;
        // Midpoint rule in cos θ.
        let n = 2000;
        let mut integ = vec![0.0; ws.len()];
        for k in 0..n {
            let u = -1.0 + (k as f64 + 0.5) * 2.0 / n as f64;
            let th = u.acos();
            let w = larmor(&acc, &ws, Some(th)).unwrap().w_angle.unwrap();
            for (i, v) in w.iter().enumerate() {
                integ[i] += 2.0 * PI * v * 2.0 / n as f64;
            }
        }
        for (x, y) in integ.iter().zip(&total) {
            assert!((x - y).abs() < 1e-6 * y, "{x} {y}");
        }
    }

    #[test]
    fn larmor_shift_invariant() {
        let g = TimeGrid::symmetric(800, 0.5).unwrap();
        let a1 = Signal::from_fn(g, |t| (-(t / 40.0).powi(2)).exp() * (0.3 * t).cos()).unwrap();
        let a2 = Signal::from_fn(g, |t| (-((t - 25.0) / 40.0).powi(2)).exp() * (0.3 * (t - 25.0)).cos()).unwrap();
        let ws = uniform_omegas(0.2, 0.4, 21).unwrap();
        let w1 = larmor(&a1, &ws, None).unwrap().w_total;
        let w2 = larmor(&a2, &ws, None).unwrap().w_total;
        let m = w1.iter().cloned().fold(0.0, f64::max);
        for (x, y) in w1.iter().zip(&w2) {
            assert!((x - y).abs() < 1e-9 * m);
        }
        let zero = Signal::from_fn(g, |_| 0.0).unwrap();
        assert!(larmor(&zero, &ws, None).unwrap().w_total.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn scaling_is_least_squares() {
        let ws = vec![0.1, 0.2, 0.3];
        let lar = LarmorSpectrum {
            omegas: ws.clone(),
            w_total: vec![1.0, 2.0, 3.0],
            angle: None,
            w_angle: None,
        };
        let mk = |s: Vec<f64>| FluorescenceSpectrum {
            omegas: ws.clone(),
            total: s.clone(),
            s_semiclassical: s,
            s_quantum: vec![0.0; 3],
            gamma_filter: 1e-3,
            scale_factor: 1.0,
            arbitrary_units: true,
        };
        assert!((scale_fluorescence_to_larmor(&mk(vec![1.0, 2.0, 3.0]), &lar).unwrap().scale_factor - 1.0).abs() < 1e-15);
        let s = scale_fluorescence_to_larmor(&mk(vec![2.0, 4.0, 6.0]), &lar).unwrap();
        assert!((s.scale_factor - 0.5).abs() < 1e-15);
        assert!(!s.arbitrary_units);
        assert!(scale_fluorescence_to_larmor(&mk(vec![0.0; 3]), &lar).is_err());
    }
}
