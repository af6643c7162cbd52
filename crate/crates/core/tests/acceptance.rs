//! Acceptance suite. Each criterion prints one PASS/FAIL line with the
//! measured values; the process exits non-zero if any criterion fails.
//!
//! Tolerances are pinned below and are not configurable.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rabi_absorb::dynamics::{
    acceleration, analytic_flat_top_trajectory, propagate_numeric, HeffShifts, InitialState, TwoLevelSystem,
};
use rabi_absorb::emission::{fluorescence, larmor, scale_fluorescence_to_larmor, DEFAULT_FILTER_FRACTION};
use rabi_absorb::pulse::{area_constant, bandwidth_constant, tau_for_area, EnvelopeOrder, PulseSpec};
use rabi_absorb::scan::{default_area_axis, scan_area, scan_intensity, ScanSettings};
use rabi_absorb::simulation::{pulse_grid, simulate, Model, Numerics, SimulationOutput, SUPPORT_THRESHOLD};
use rabi_absorb::spectra::{absorption_spectrum, find_triplet, GaugeForm, TripletParams, TripletReport};
use rabi_absorb::transform::{fourier, uniform_omegas, Spectrum};
use rabi_absorb::units::{au_to_fs, TimeGrid};

const T_RABI_FS: f64 = 38.0;
const T_RABI_TOL_FS: f64 = 1.0;
const A1: (f64, f64) = (1.50, 0.01);
const A2: (f64, f64) = (1.18, 0.01);
const B1: (f64, f64) = (0.735, 0.005);
const B2: (f64, f64) = (1.45, 0.01);
const BN_OVER_N: (f64, f64) = (0.75, 0.85);
const AMPLITUDE_DEV_MAX: f64 = 1e-4;
const ORDER: (f64, f64) = (2.0, 0.2);
const RATIO_TARGET: f64 = 2.0;
const RATIO_TOL_NUMERIC: f64 = 0.15;
const RATIO_TOL_ANALYTIC: f64 = 0.05;
const NULL_REL_MAX: f64 = 1e-3;
const NULL_PHOTONS_MAX: f64 = 0.01;
const PARSEVAL_REL_MAX: f64 = 0.01;
const FORM_REL_MAX: f64 = 1e-6;
const HEFF_REL_MAX: f64 = 1e-8;
const ASYMMETRY_MIN: f64 = 1e-3;
const EMISSION_RATIO_MAX: f64 = 1e-4;
const XCORR_MIN: f64 = 0.95;
const R2_MIN: f64 = 0.99;

const INTENSITY: f64 = 1e12;
const DT: f64 = 0.02;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn system() -> TwoLevelSystem {
    TwoLevelSystem::hydrogen_1s_2p()
}

fn base(order: EnvelopeOrder) -> PulseSpec {
    PulseSpec::from_intensity(INTENSITY, system().eps_ba(), 1000.0, order, 0.0).unwrap()
}

/// Pulse of the given order at 10¹² W/cm² with area 2π·cycles.
fn pulse(order: EnvelopeOrder, cycles: f64) -> PulseSpec {
    let b = base(order);
    b.with_tau(tau_for_area(&b, &system(), 2.0 * PI * cycles).unwrap()).unwrap()
}

fn rabi() -> f64 {
    base(EnvelopeOrder::FlatTop).rabi_frequency(&system())
}

/// ω₀ ± 3Ω₀ with 2000 points.
fn default_omegas() -> Vec<f64> {
    let (w0, om) = (system().eps_ba(), rabi());
    uniform_omegas(w0 - 3.0 * om, w0 + 3.0 * om, 2000).unwrap()
}

fn run(spec: &PulseSpec, model: Model, numerics: Numerics) -> SimulationOutput {
    simulate(&system(), spec, InitialState::ground(), model, &numerics).unwrap()
}

fn with_omegas(omegas: &[f64]) -> Numerics {
    Numerics {
        omegas: Some(omegas.to_vec()),
        ..Numerics::default()
    }
}

fn triplet(s: &Spectrum<f64>) -> TripletReport {
    find_triplet(s, system().eps_ba(), rabi(), &TripletParams::default()).unwrap()
}

fn rel_max_dev(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

fn within(x: f64, (target, tol): (f64, f64)) -> bool {
    (x - target).abs() <= tol
}

fn in_units_of_rabi(ws: &[f64]) -> Vec<String> {
    let (w0, om) = (system().eps_ba(), rabi());
    ws.iter().map(|w| format!("{:+.3}", (w - w0) / om)).collect()
}

fn c01_rabi_period() -> Outcome {
    let t = au_to_fs(base(EnvelopeOrder::FlatTop).rabi_period(&system()));
    // 2π/(z E₀) with E₀ from I = E₀²·3.50944758e16 W/cm².
    let oracle = au_to_fs(2.0 * PI / (0.745 * (INTENSITY / 3.509_447_58e16).sqrt()));
    let pass = (t - T_RABI_FS).abs() <= T_RABI_TOL_FS && (t - oracle).abs() < 1e-3;
    outcome(pass, format!("T_Rabi = {t:.3} fs (oracle {oracle:.3}); want {T_RABI_FS} ± {T_RABI_TOL_FS}"))
}

fn c02_shape_constants() -> Outcome {
    use statrs::function::gamma::gamma;
    let a = |n: u32| area_constant(EnvelopeOrder::Finite(n));
    let b = |n: u32| bandwidth_constant(EnvelopeOrder::Finite(n));
    // ∫₀^∞ exp(−(ln2/2)u^{2n})du = Γ(1 + 1/2n)(2/ln2)^{1/2n}
    let a_oracle = |n: u32| {
        let k = 1.0 / (2.0 * n as f64);
        gamma(1.0 + k) * (2.0 / std::f64::consts::LN_2).powf(k)
    };
    let oracle_ok = (1..=10).all(|n| (a(n) - a_oracle(n)).abs() < 1e-9);
    let flat = area_constant(EnvelopeOrder::FlatTop);
    let ratios: Vec<f64> = (5..=10).map(|n| b(n) / n as f64).collect();
    let ratios_ok = ratios.iter().all(|r| (BN_OVER_N.0..=BN_OVER_N.1).contains(r));
    let pass = within(a(1), A1)
        && within(a(2), A2)
        && flat == 1.0
        && within(b(1), B1)
        && within(b(2), B2)
        && ratios_ok
        && oracle_ok;
    let rs: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    outcome(
        pass,
        format!(
            "A1 = {:.4}, A2 = {:.4}, A_flat = {flat}, B1 = {:.4}, B2 = {:.4}, Bn/n (n=5..10) = [{}], gamma-function oracle {}",
            a(1),
            a(2),
            b(1),
            b(2),
            rs.join(", "),
            if oracle_ok { "agrees" } else { "DISAGREES" }
        ),
    )
}

fn c03_oracle_equivalence() -> Outcome {
    let sys = system();
    let spec = pulse(EnvelopeOrder::FlatTop, 1.5);
    let grid = pulse_grid(&sys, &spec, DT, 0.0).unwrap();
    let num = propagate_numeric(&sys, &spec, &grid, InitialState::ground()).unwrap();
    let ana = analytic_flat_top_trajectory(&sys, &spec, &grid, InitialState::ground()).unwrap();
    let dev = (0..num.len())
        .map(|k| (num.a[k] - ana.a[k]).norm().max((num.b[k] - ana.b[k]).norm()))
        .fold(0.0, f64::max);

    // Self-convergence on a smooth pulse: same end time at dt, dt/2, dt/4.
    let smooth = pulse(EnvelopeOrder::Finite(2), 1.5);
    let dt0 = DT;
    let half = (smooth.support_half_width(SUPPORT_THRESHOLD) / dt0).ceil() as usize;
    let finals: Vec<(Complex64, Complex64)> = [1usize, 2, 4]
        .iter()
        .map(|&m| {
            let g = TimeGrid::symmetric(half * m, dt0 / m as f64).unwrap();
            let t = propagate_numeric(&sys, &smooth, &g, InitialState::ground()).unwrap();
            let k = t.len() - 1;
            (t.a[k], t.b[k])
        })
        .collect();
    let diff = |i: usize, j: usize| (finals[i].0 - finals[j].0).norm().max((finals[i].1 - finals[j].1).norm());
    let order = (diff(0, 1) / diff(1, 2)).log2();

    let pass = dev < AMPLITUDE_DEV_MAX && within(order, ORDER);
    outcome(
        pass,
        format!(
            "max |numeric - analytic| amplitude = {dev:.3e} (want < {AMPLITUDE_DEV_MAX:e}); convergence order = {order:.3} (want {} ± {})",
            ORDER.0, ORDER.1
        ),
    )
}

fn c04_triplet() -> Outcome {
    let ws = default_omegas();
    let step = ws[1] - ws[0];
    let (w0, om) = (system().eps_ba(), rabi());
    let spec = pulse(EnvelopeOrder::FlatTop, 1.5);
    let num = triplet(&run(&spec, Model::Numeric, with_omegas(&ws)).absorption.spectrum);

    let fine = uniform_omegas(w0 - 3.0 * om, w0 + 3.0 * om, 20001).unwrap();
    let ana = triplet(&run(&spec, Model::Analytic, with_omegas(&fine)).absorption.spectrum);

    let three = num.peak_positions.len() == 3 && num.peak_heights.iter().all(|h| *h > 0.0);
    let sides_ok = three
        && (num.peak_positions[0] - (w0 - om)).abs() <= step
        && (num.peak_positions[2] - (w0 + om)).abs() <= step;
    let rn = num.central_to_side_ratio.unwrap_or(f64::NAN);
    let ra = ana.central_to_side_ratio.unwrap_or(f64::NAN);
    let rn_ok = (rn / RATIO_TARGET - 1.0).abs() <= RATIO_TOL_NUMERIC;
    let ra_ok = (ra / RATIO_TARGET - 1.0).abs() <= RATIO_TOL_ANALYTIC;
    outcome(
        three && sides_ok && rn_ok && ra_ok,
        format!(
            "positive peaks at (w-w0)/Rabi = [{}] ({}); sides within one step {:.4} of +-1: {}; ratio numeric {rn:.4} ({}), analytic {ra:.4} ({})",
            in_units_of_rabi(&num.peak_positions).join(", "),
            if three { "three" } else { "not three" },
            step / om,
            if sides_ok { "yes" } else { "no" },
            if rn_ok { "ok" } else { "out of 15%" },
            if ra_ok { "ok" } else { "out of 5%" },
        ),
    )
}

fn c05_null_line() -> Outcome {
    let ws = default_omegas();
    let null = pulse(EnvelopeOrder::FlatTop, 1.0);
    let peak = pulse(EnvelopeOrder::FlatTop, 1.5);
    let ana_null = run(&null, Model::Analytic, with_omegas(&ws)).absorption.spectrum.max_abs();
    let ana_peak = run(&peak, Model::Analytic, with_omegas(&ws)).absorption.spectrum.max_abs();
    let num_null = run(&null, Model::Numeric, with_omegas(&ws));
    let num_peak = run(&peak, Model::Numeric, with_omegas(&ws)).absorption.spectrum.max_abs();
    let rel_ana = ana_null / ana_peak;
    let rel_num = num_null.absorption.spectrum.max_abs() / num_peak;
    let photons = num_null.absorption.photons;
    let pass = rel_ana < NULL_REL_MAX && photons.abs() < NULL_PHOTONS_MAX;
    outcome(
        pass,
        format!(
            "closed-form max ratio 2pi/3pi = {rel_ana:.3e} (want < {NULL_REL_MAX:e}); numeric photons = {photons:.3e} (want < {NULL_PHOTONS_MAX}); numeric max ratio (info) = {rel_num:.3e}"
        ),
    )
}

fn c06_gaussian() -> Outcome {
    let ws = default_omegas();
    let r = triplet(&run(&pulse(EnvelopeOrder::Finite(1), 1.5), Model::Numeric, with_omegas(&ws)).absorption.spectrum);
    let one_peak = r.peak_positions.len() == 1;
    let flanked = one_peak
        && r.trough_positions.len() == 2
        && r.trough_positions[0] < r.peak_positions[0]
        && r.trough_positions[1] > r.peak_positions[0];

    let settings = ScanSettings::default();
    let scan = scan_area(&system(), &base(EnvelopeOrder::Finite(1)), &default_area_axis(), &ws, &settings).unwrap();
    let flagged: Vec<String> = scan
        .axis_values
        .iter()
        .zip(&scan.triplet_flags)
        .filter(|(_, f)| **f)
        .map(|(a, _)| format!("{a:.3}"))
        .collect();
    outcome(
        one_peak && flanked && flagged.is_empty(),
        format!(
            "3pi: peaks [{}], troughs [{}]; triplet flagged at {} of {} areas in [0.1, 4] cycles{}",
            in_units_of_rabi(&r.peak_positions).join(", "),
            in_units_of_rabi(&r.trough_positions).join(", "),
            flagged.len(),
            scan.axis_values.len(),
            if flagged.is_empty() { String::new() } else { format!(" ({})", flagged.join(", ")) }
        ),
    )
}

fn c07_super_gaussian() -> Outcome {
    let ws = default_omegas();
    let flags: Vec<bool> = [1.5, 2.5, 3.5]
        .iter()
        .map(|&c| {
            triplet(&run(&pulse(EnvelopeOrder::Finite(2), c), Model::Numeric, with_omegas(&ws)).absorption.spectrum)
                .is_triplet
        })
        .collect();
    outcome(
        flags == [true, false, false],
        format!("triplet at 1.5 / 2.5 / 3.5 cycles: {} / {} / {}", flags[0], flags[1], flags[2]),
    )
}

fn c08_parseval() -> Outcome {
    let (w0, om) = (system().eps_ba(), rabi());
    let w_max = w0 + 4.0 * om;
    let ws = uniform_omegas(-w_max, w_max, 16001).unwrap();
    let numerics = Numerics {
        filter: false,
        form: GaugeForm::Velocity,
        ..with_omegas(&ws)
    };
    let out = run(&pulse(EnvelopeOrder::FlatTop, 1.5), Model::Numeric, numerics);
    let spectral = out.absorption.spectrum.integrate_positive();
    let temporal = out.absorption.time_energy.last();
    let rel = (spectral - temporal).abs() / temporal.abs();
    outcome(
        rel < PARSEVAL_REL_MAX,
        format!("int_0^inf dE(w) dw = {spectral:.6e}, dE(t_end) = {temporal:.6e}, relative gap {rel:.3e} (want < {PARSEVAL_REL_MAX})"),
    )
}

fn c09_forms() -> Outcome {
    let ws = default_omegas();
    let sys = system();

    // Flat top: the field transform is iωÃ.
    let spec = pulse(EnvelopeOrder::FlatTop, 1.5);
    let out = run(&spec, Model::Numeric, with_omegas(&ws));
    let grid = out.potential.grid;
    let traj = propagate_numeric(&sys, &spec, &grid, InitialState::ground()).unwrap();
    let p = rabi_absorb::dynamics::momentum_expectation(&traj, &sys).unwrap();
    let p = rabi_absorb::transform::apply_filter(&p, &spec);
    let p_w = fourier(&p, &ws).unwrap();
    let a_w = fourier(&out.potential, &ws).unwrap();
    let e_w = Spectrum::new(ws.clone(), ws.iter().zip(&a_w.values).map(|(w, a)| Complex64::new(0.0, *w) * a).collect()).unwrap();
    let vel = absorption_spectrum(GaugeForm::Velocity, &p_w, &e_w).unwrap();
    let mom = absorption_spectrum(GaugeForm::Momentum, &p_w, &a_w).unwrap();
    let flat = rel_max_dev(&vel.values, &mom.values);

    // Smooth pulse: independent transforms of E(t) and A(t).
    let smooth = pulse(EnvelopeOrder::Finite(2), 1.5);
    let m = run(&smooth, Model::Numeric, with_omegas(&ws));
    let v = run(
        &smooth,
        Model::Numeric,
        Numerics {
            form: GaugeForm::Velocity,
            ..with_omegas(&ws)
        },
    );
    let smooth_dev = rel_max_dev(&v.absorption.spectrum.values, &m.absorption.spectrum.values);
    outcome(
        flat < FORM_REL_MAX && smooth_dev < FORM_REL_MAX,
        format!("relative max deviation: flat top {flat:.3e}, super-Gaussian n=2 {smooth_dev:.3e} (want < {FORM_REL_MAX:e})"),
    )
}

fn c10_heff() -> Outcome {
    let (w0, om) = (system().eps_ba(), rabi());
    // Odd point count puts ω₀ on the grid with mirror partners.
    let ws = uniform_omegas(w0 - 3.0 * om, w0 + 3.0 * om, 2001).unwrap();
    let centre = 1000;
    let spec = pulse(EnvelopeOrder::FlatTop, 1.5);
    let ana = run(&spec, Model::Analytic, with_omegas(&ws)).absorption.spectrum;
    let zero = run(&spec, Model::Heff(HeffShifts::default()), with_omegas(&ws)).absorption.spectrum;
    let reduction = rel_max_dev(&zero.values, &ana.values);

    // Odd part of ΔẼ/ω inside the central lobe, relative to its maximum.
    let lobe = (0.5 * om / (ws[1] - ws[0])) as usize;
    let asymmetry = |s: &Spectrum<f64>| {
        let y: Vec<f64> = s.values.iter().zip(&s.omegas).map(|(v, w)| v / w).collect();
        let max = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        (1..=lobe).map(|d| (y[centre + d] - y[centre - d]).abs()).fold(0.0, f64::max) / max
    };
    let gammas = [0.01, 0.03, 0.1, 0.2, 0.3, 0.5];
    let asym: Vec<f64> = gammas
        .iter()
        .map(|g| {
            let s = run(&spec, Model::Heff(HeffShifts::widths(0.0, g * om)), with_omegas(&ws)).absorption.spectrum;
            asymmetry(&s)
        })
        .collect();
    let asym_ok = asym.iter().all(|a| *a > ASYMMETRY_MIN);
    let shown: Vec<String> = gammas.iter().zip(&asym).map(|(g, a)| format!("{g}:{a:.1e}")).collect();
    outcome(
        reduction < HEFF_REL_MAX && asym_ok,
        format!(
            "zero-shift vs closed form {reduction:.3e} (want < {HEFF_REL_MAX:e}); central-lobe odd part at Gamma_b/Rabi = [{}] (want > {ASYMMETRY_MIN:e})",
            shown.join(", ")
        ),
    )
}

fn emission_run(cycles: f64) -> (SimulationOutput, Vec<f64>, Vec<f64>, Vec<f64>, f64) {
    let sys = system();
    let ws = default_omegas();
    let out = run(&pulse(EnvelopeOrder::FlatTop, cycles), Model::Numeric, with_omegas(&ws));
    let lar = larmor(&acceleration(&out.trajectory, &sys).unwrap(), &ws, None).unwrap();
    let fl = fluorescence(&out.trajectory, sys.eps_ba(), DEFAULT_FILTER_FRACTION * rabi(), &ws).unwrap();
    let scaled = scale_fluorescence_to_larmor(&fl, &lar).unwrap();
    let energy = Spectrum::new(ws.clone(), scaled.total.clone()).unwrap().integrate();
    (out, lar.w_total, fl.s_semiclassical, ws, energy)
}

fn c11_emission_hierarchy() -> Outcome {
    let (out, _, _, _, fluor_energy) = emission_run(1.5);
    let absorbed = out.absorption.time_energy.last();
    let ratio = fluor_energy / absorbed;
    outcome(
        ratio <= EMISSION_RATIO_MAX,
        format!("fluorescence {fluor_energy:.3e} / absorbed {absorbed:.3e} = {ratio:.3e} (want <= {EMISSION_RATIO_MAX:e})"),
    )
}

fn c12_larmor_bands() -> Outcome {
    let (w0, om) = (system().eps_ba(), rabi());
    let (out, w, s, ws, _) = emission_run(5.5);
    let step = ws[1] - ws[0];
    let lr = triplet(&Spectrum::new(ws.clone(), w.clone()).unwrap());
    let mut by_height: Vec<(f64, f64)> = lr.peak_positions.iter().copied().zip(lr.peak_heights.iter().copied()).collect();
    by_height.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut bands: Vec<f64> = by_height.iter().take(2).map(|p| p.0).collect();
    bands.sort_by(f64::total_cmp);

    let ar = triplet(&out.absorption.spectrum);
    let nearest = |target: f64| {
        ar.peak_positions
            .iter()
            .copied()
            .filter(|p| (p - w0).abs() > 0.5 * om)
            .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
    };
    let sides = [nearest(w0 - om), nearest(w0 + om)];
    let matched = bands.len() == 2
        && bands[0] < w0
        && bands[1] > w0
        && sides.iter().zip(&bands).all(|(s, b)| s.is_some_and(|s| (s - b).abs() <= step));

    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let xcorr = s.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / (norm(&s) * norm(&w));
    let side_pos: Vec<f64> = sides.iter().flatten().copied().collect();
    outcome(
        matched && xcorr > XCORR_MIN,
        format!(
            "5.5 cycles: Larmor bands [{}], absorption sidebands [{}] (one step {:.4}); S_s/Larmor cross-correlation {xcorr:.4} (want > {XCORR_MIN})",
            in_units_of_rabi(&bands).join(", "),
            in_units_of_rabi(&side_pos).join(", "),
            step / om
        ),
    )
}

fn c13_intensity_scaling() -> Outcome {
    let sys = system();
    let w0 = sys.eps_ba();
    let tau = rabi_absorb::units::fs_to_au(97.0);
    let spec = PulseSpec::from_intensity(INTENSITY, w0, tau, EnvelopeOrder::FlatTop, 0.0).unwrap();
    let intensities: Vec<f64> = (0..21).map(|k| 10f64.powf(11.0 + 2.0 * k as f64 / 20.0)).collect();
    let om_max = spec.with_amplitude(spec.amplitude * 10.0).unwrap().rabi_frequency(&sys);
    let ws = uniform_omegas(w0 - 3.0 * om_max, w0 + 3.0 * om_max, 4001).unwrap();
    let scan = scan_intensity(&sys, &spec, &intensities, &ws, &ScanSettings::default()).unwrap();

    // Largest positive peak on each side beyond the first zero of the central sinc.
    let lobe = 2.0 * PI / tau;
    let mut pts = Vec::new();
    for ((i, row), om) in intensities.iter().zip(&scan.spectra).zip(&scan.rabi_frequencies) {
        let side = |sign: f64| {
            (1..ws.len() - 1)
                .filter(|&k| sign * (ws[k] - w0) > lobe && row[k] > 0.0 && row[k] >= row[k - 1] && row[k] >= row[k + 1])
                .max_by(|&a, &b| row[a].total_cmp(&row[b]))
                .map(|k| ws[k])
        };
        if let (Some(lo), Some(hi)) = (side(-1.0), side(1.0)) {
            pts.push((i.sqrt(), 0.5 * (hi - lo), om * tau / (2.0 * PI)));
        }
    }
    let fit = |p: &[(f64, f64, f64)]| {
        let n = p.len() as f64;
        let (mx, my) = (p.iter().map(|q| q.0).sum::<f64>() / n, p.iter().map(|q| q.1).sum::<f64>() / n);
        let sxy: f64 = p.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum();
        let sxx: f64 = p.iter().map(|q| (q.0 - mx).powi(2)).sum();
        let syy: f64 = p.iter().map(|q| (q.1 - my).powi(2)).sum();
        (sxy * sxy / (sxx * syy), sxy / sxx)
    };
    let (r2, slope) = fit(&pts);
    let past_one_cycle: Vec<_> = pts.iter().copied().filter(|q| q.2 >= 1.0).collect();
    let (r2_cycle, _) = fit(&past_one_cycle);
    // Ω₀/√I for comparison with the fitted slope.
    let expected = sys.z_ba * (1.0 / 3.509_447_58e16f64).sqrt();
    outcome(
        pts.len() == intensities.len() && r2 > R2_MIN,
        format!(
            "{} of {} intensities with both sidebands; R^2 = {r2:.5} (want > {R2_MIN}); slope / (z/sqrt(I0)) = {:.4}; R^2 over the {} points with area >= 2pi (info) = {r2_cycle:.5}",
            pts.len(),
            intensities.len(),
            slope / expected,
            past_one_cycle.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("rabi period", c01_rabi_period),
        ("shape constants", c02_shape_constants),
        ("oracle equivalence", c03_oracle_equivalence),
        ("flat-top triplet", c04_triplet),
        ("null line", c05_null_line),
        ("gaussian negative lobes", c06_gaussian),
        ("super-gaussian selectivity", c07_super_gaussian),
        ("energy consistency", c08_parseval),
        ("form equivalence", c09_forms),
        ("effective hamiltonian", c10_heff),
        ("emission hierarchy", c11_emission_hierarchy),
        ("larmor bands", c12_larmor_bands),
        ("intensity scaling", c13_intensity_scaling),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        if !o.passed {
            failed += 1;
        }
        println!(
            "[{:02}] {} {name}: {} ({:.1} s)",
            k + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
