//! Browser bindings for the demo page in `www/`.
//!
//! Each export returns a flat `Float64Array` of (x, y) pairs; points where no
//! mode converged carry NaN in y so the page can break the line there.

use plasmon_core::sweeps::{RowStatus, SweepKind, SweepSpec};
use plasmon_core::{run_sweep, Medium, ModeStatus, PlasmaConfig, RadiationField};
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 1000;

fn spec(
    kind: SweepKind,
    omega_p: f64,
    kt: f64,
    e_amp: f64,
    omega_rad: f64,
) -> Result<SweepSpec, String> {
    let plasma = PlasmaConfig::new(omega_p, kt).map_err(|e| e.to_string())?;
    let field = RadiationField::new(e_amp, omega_rad).map_err(|e| e.to_string())?;
    Ok(SweepSpec::new(kind, plasma, field))
}

fn points(n: usize) -> Result<usize, String> {
    if (2..=MAX_POINTS).contains(&n) {
        Ok(n)
    } else {
        Err(format!("need between 2 and {MAX_POINTS} points, got {n}"))
    }
}

fn mode_pairs(spec: &SweepSpec) -> Result<Vec<f64>, String> {
    let result = run_sweep(spec).map_err(|e| e.to_string())?;
    Ok(result
        .rows
        .iter()
        .flat_map(|r| {
            let y = if r.status == RowStatus::Mode(ModeStatus::Converged) {
                r.omega
            } else {
                f64::NAN
            };
            [r.x, y]
        })
        .collect())
}

pub fn dispersion_pairs(
    omega_p: f64,
    kt: f64,
    e_amp: f64,
    omega_rad: f64,
    q_max: f64,
    steps: usize,
) -> Result<Vec<f64>, String> {
    let mut s = spec(SweepKind::QSweep, omega_p, kt, e_amp, omega_rad)?;
    s.max = q_max;
    s.steps = points(steps)?;
    mode_pairs(&s)
}

pub fn field_decay_pairs(
    omega_p: f64,
    kt: f64,
    omega_rad: f64,
    q: f64,
    e_max: f64,
    steps: usize,
) -> Result<Vec<f64>, String> {
    let mut s = spec(SweepKind::ESweep, omega_p, kt, 0.0, omega_rad)?;
    s.q = q;
    s.max = e_max;
    s.steps = points(steps)?;
    mode_pairs(&s)
}

/// ε_R(Ω) across the default scan window; poles give NaN.
pub fn eps_real_pairs(
    omega_p: f64,
    kt: f64,
    e_amp: f64,
    omega_rad: f64,
    q: f64,
    steps: usize,
) -> Result<Vec<f64>, String> {
    let s = spec(SweepKind::QSweep, omega_p, kt, e_amp, omega_rad)?;
    let steps = points(steps)?;
    let medium = Medium::new(s.plasma, s.field).map_err(|e| e.to_string())?;
    let at = medium.at(q).map_err(|e| e.to_string())?;
    let window = s.solver.policy(&s.plasma);
    let step = (window.omega_hi - window.omega_lo) / (steps - 1) as f64;
    Ok((0..steps)
        .flat_map(|i| {
            let omega = window.omega_lo + i as f64 * step;
            [omega, at.eps_real(omega).map_or(f64::NAN, |v| v.value)]
        })
        .collect())
}

/// Mode frequency Omega_R(q) for q in [0, q_max].
#[wasm_bindgen]
pub fn dispersion(
    omega_p: f64,
    kt: f64,
    e_amp: f64,
    omega_rad: f64,
    q_max: f64,
    steps: usize,
) -> Result<Vec<f64>, JsError> {
    dispersion_pairs(omega_p, kt, e_amp, omega_rad, q_max, steps).map_err(|e| JsError::new(&e))
}

/// Mode frequency Omega_R(E) for E in [0, e_max] at fixed q.
#[wasm_bindgen]
pub fn field_decay(
    omega_p: f64,
    kt: f64,
    omega_rad: f64,
    q: f64,
    e_max: f64,
    steps: usize,
) -> Result<Vec<f64>, JsError> {
    field_decay_pairs(omega_p, kt, omega_rad, q, e_max, steps).map_err(|e| JsError::new(&e))
}

/// eps_R(Omega) at fixed q, whose largest zero is the plasmon.
#[wasm_bindgen]
pub fn eps_real_slice(
    omega_p: f64,
    kt: f64,
    e_amp: f64,
    omega_rad: f64,
    q: f64,
    steps: usize,
) -> Result<Vec<f64>, JsError> {
    eps_real_pairs(omega_p, kt, e_amp, omega_rad, q, steps).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_have_one_pair_per_point() {
        let d = dispersion_pairs(6e11, 1.6e-19, 10.0, 3e7, 20000.0, 21).unwrap();
        assert_eq!(d.len(), 42);
        assert_eq!(d[40], 20000.0);
        assert!(d.chunks(2).all(|p| (p[1] / 6e11 - 1.0).abs() < 0.01));

        let f = field_decay_pairs(6e11, 1.6e-19, 3e7, 0.0, 250.0, 11).unwrap();
        assert!(f
            .chunks(2)
            .collect::<Vec<_>>()
            .windows(2)
            .all(|w| w[1][1] < w[0][1]));

        let e = eps_real_pairs(6e11, 1.6e-19, 10.0, 3e7, 210.0, 50).unwrap();
        assert_eq!(e.len(), 100);
        assert!(e[99] > 0.0);
    }

    #[test]
    fn bad_input_is_reported() {
        assert!(dispersion_pairs(6e11, 1.6e-19, 10.0, 0.0, 2e4, 21).is_err());
        assert!(dispersion_pairs(6e11, 1.6e-19, 10.0, 3e7, 2e4, 1).is_err());
        assert!(eps_real_pairs(-1.0, 1.6e-19, 10.0, 3e7, 210.0, 50).is_err());
    }
}
