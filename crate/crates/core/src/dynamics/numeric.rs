//! Explicit leapfrog propagation of the two-level amplitudes.

use num_complex::Complex64;

use super::system::{AmplitudeTrajectory, InitialState, ModelTag, TwoLevelSystem};
use crate::error::{Error, Result};
use crate::pulse::PulseSpec;
use crate::units::{TimeGrid, MAX_PHASE_PER_STEP};

/// Tolerated drift of |a|²+|b|² over a run.
pub const NORM_DRIFT_LIMIT: f64 = 1e-4;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Propagates (a₀, b₀), given at the first grid point, through the pulse.
///
/// The two-step recursion is
/// ```text
/// a(t+dt) = (2dt/i)(ε_a a(t) + E(t) z b(t) e^{−iε_ba t}) e^{iε_a dt} + a(t−dt) e^{2iε_a dt}
/// b(t+dt) = (2dt/i)(ε_b b(t) + E(t) z a(t) e^{+iε_ba t}) e^{iε_b dt} + b(t−dt) e^{2iε_b dt}
/// ```
/// with the coupling −Ȧz = Ez. The first step is a single RK4 step of the
/// interaction-picture equations. No rotating-wave approximation is made.
pub fn propagate_numeric(
    system: &TwoLevelSystem,
    spec: &PulseSpec,
    grid: &TimeGrid,
    initial: InitialState,
) -> Result<AmplitudeTrajectory> {
    let bound = MAX_PHASE_PER_STEP / system.fastest_rate(spec.omega0);
    if grid.dt > bound * (1.0 + 1e-12) {
        return Err(Error::Config(format!(
            "dt = {} exceeds the phase-resolution bound dt <= 0.05/max(|eps_a|,|eps_b|,omega0) = {bound:.6}",
            grid.dt
        )));
    }
    if (initial.norm_sqr() - 1.0).abs() > 1e-10 {
        return Err(Error::Config("initial state must be normalized".into()));
    }
    let n = grid.n_points;
    if n < 2 {
        return Err(Error::Config("propagation needs at least two grid points".into()));
    }

    let dt = grid.dt;
    let z = system.z_ba;
    let eps_ba = system.eps_ba();
    let field = |t: f64| spec.electric_field(t);

    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    a.push(initial.a);
    b.push(initial.b);

    let (a1, b1) = rk4_step(grid.time(0), dt, initial.a, initial.b, z, eps_ba, &field);
    a.push(a1);
    b.push(b1);

    let two_dt_over_i = -I * (2.0 * dt);
    let phase_a1 = Complex64::from_polar(1.0, system.eps_a * dt);
    let phase_a2 = phase_a1 * phase_a1;
    let phase_b1 = Complex64::from_polar(1.0, system.eps_b * dt);
    let phase_b2 = phase_b1 * phase_b1;

    let n0 = initial.norm_sqr();
    for k in 1..n - 1 {
        let t = grid.time(k);
        let ez = field(t) * z;
        let carrier = Complex64::from_polar(1.0, eps_ba * t);
        let (ak, bk) = (a[k], b[k]);
        let next_a = two_dt_over_i * (system.eps_a * ak + ez * bk * carrier.conj()) * phase_a1 + a[k - 1] * phase_a2;
        let next_b = two_dt_over_i * (system.eps_b * bk + ez * ak * carrier) * phase_b1 + b[k - 1] * phase_b2;
        let drift = (next_a.norm_sqr() + next_b.norm_sqr() - n0).abs();
        if !drift.is_finite() || drift > NORM_DRIFT_LIMIT {
            return Err(Error::NumericalInstability(format!(
                "norm drift {drift:.3e} at t = {t:.3} exceeds {NORM_DRIFT_LIMIT:e}; reduce dt (currently {dt})"
            )));
        }
        a.push(next_a);
        b.push(next_b);
    }
    AmplitudeTrajectory::new(*grid, a, b, ModelTag::Numeric)
}

/// One RK4 step of i ȧ = zE b e^{−iε_ba t}, i ḃ = zE a e^{iε_ba t}.
fn rk4_step(
    t: f64,
    dt: f64,
    a: Complex64,
    b: Complex64,
    z: f64,
    eps_ba: f64,
    field: &impl Fn(f64) -> f64,
) -> (Complex64, Complex64) {
    let f = |t: f64, a: Complex64, b: Complex64| {
        let ez = field(t) * z;
        let c = Complex64::from_polar(1.0, eps_ba * t);
        (-I * ez * b * c.conj(), -I * ez * a * c)
    };
    let (k1a, k1b) = f(t, a, b);
    let (k2a, k2b) = f(t + 0.5 * dt, a + k1a * (0.5 * dt), b + k1b * (0.5 * dt));
    let (k3a, k3b) = f(t + 0.5 * dt, a + k2a * (0.5 * dt), b + k2b * (0.5 * dt));
    let (k4a, k4b) = f(t + dt, a + k3a * dt, b + k3b * dt);
    (
        a + (k1a + k2a * 2.0 + k3a * 2.0 + k4a) * (dt / 6.0),
        b + (k1b + k2b * 2.0 + k3b * 2.0 + k4b) * (dt / 6.0),
    )
}
