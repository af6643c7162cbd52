//! Expectation values derived from amplitude trajectories.

use num_complex::Complex64;

use super::system::{AmplitudeTrajectory, TwoLevelSystem};
use crate::error::{Error, Result};
use crate::transform::Signal;

/// p_z(t) = a*(t) b(t) p_ba* e^{−iε_ba t} + c.c.
pub fn momentum_expectation(traj: &AmplitudeTrajectory, system: &TwoLevelSystem) -> Result<Signal<f64>> {
    let p_conj = system.p_ba().conj();
    let eps = system.eps_ba();
    let values = (0..traj.len())
        .map(|k| {
            let t = traj.grid.time(k);
            2.0 * (p_conj * traj.a[k].conj() * traj.b[k] * Complex64::from_polar(1.0, -eps * t)).re
        })
        .collect();
    Signal::new(traj.grid, values)
}

/// (|a(t)|², |b(t)|²).
pub fn populations(traj: &AmplitudeTrajectory) -> Result<(Signal<f64>, Signal<f64>)> {
    Ok((
        Signal::new(traj.grid, traj.a.iter().map(|a| a.norm_sqr()).collect())?,
        Signal::new(traj.grid, traj.b.iter().map(|b| b.norm_sqr()).collect())?,
    ))
}

/// Acceleration ṗ(t) of the momentum expectation value.
pub fn acceleration(traj: &AmplitudeTrajectory, system: &TwoLevelSystem) -> Result<Signal<f64>> {
    derivative(&momentum_expectation(traj, system)?)
}

/// Fourth-order finite difference: centred in the interior, one-sided at the
/// two points next to each end.
pub fn derivative(signal: &Signal<f64>) -> Result<Signal<f64>> {
    let f = &signal.values;
    let n = f.len();
    if n < 5 {
        return Err(Error::Config(format!(
            "derivative needs at least 5 samples, got {n}"
        )));
    }
    let h12 = 12.0 * signal.grid.dt;
    let mut d = vec![0.0; n];
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / h12;
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / h12;
    for k in 2..n - 2 {
        d[k] = (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) / h12;
    }
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / h12;
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / h12;
    let mut out = Signal::new(signal.grid, d)?;
    out.filtered = signal.filtered;
    Ok(out)
}
