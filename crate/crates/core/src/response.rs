//! Conductivity and the perturbative Landau damping rate.
//!
//! The conductivity follows from ε = 1 + (4πi/Ω)σ, which keeps the Gaussian
//! 4π factor: σ is reported in those units, not converted to SI.
//!
//! The damping rate is computed twice. `gamma_ratio` is −ε_I/(∂ε_R/∂Ω) with
//! the full derivative; `gamma_closed` keeps only the leading 2/λ_m³ term of
//! the derivative, which lets the e^{−ε_γ/kT} factors cancel:
//!
//! ```text
//! γ = −(m_e/2kT)^{3/2} (√π/q³) Σ J_m² λ_m e^{−m_e λ_m²/(2kT q²)} / Σ J_m² λ_m⁻³
//! ```
//!
//! Their difference is of relative order 6q²v²/λ².

use std::f64::consts::PI;

use crate::dielectric::{Medium, Wavenumber};
use crate::error::{finite, Error, Result};
use crate::logspace::SignedLog;

/// |γ|/|Ω_R| at or above this marks the small-damping expansion as violated.
pub const SMALL_DAMPING_RATIO: f64 = 0.1;

const DEGENERATE_DENOMINATOR: f64 = 1e-300;

/// σ = σ_R + iσ_I at one (q, Ω).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conductivity {
    pub sigma_r: f64,
    pub sigma_i: f64,
    pub q: f64,
    pub omega: f64,
}

impl Conductivity {
    /// (ε_R, ε_I) recovered from 1 + (4πi/Ω)σ.
    pub fn reconstruct(&self) -> (f64, f64) {
        let k = 4.0 * PI / self.omega;
        (1.0 - k * self.sigma_i, k * self.sigma_r)
    }
}

pub fn conductivity(medium: &Medium, q: f64, omega: f64) -> Result<Conductivity> {
    conductivity_at(&medium.at(q)?, omega)
}

pub fn conductivity_at(at: &Wavenumber<'_>, omega: f64) -> Result<Conductivity> {
    finite("Omega", omega)?;
    if omega == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    if at.q() <= 0.0 {
        return Err(Error::NonPositiveWavenumber(at.q()));
    }
    let eps_r = at.eps_real(omega)?.value;
    let eps_i = at.eps_imag(omega)?.value;
    let k = omega / (4.0 * PI);
    Ok(Conductivity {
        sigma_r: k * eps_i,
        sigma_i: k * (1.0 - eps_r),
        q: at.q(),
        omega,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Ok,
    AssumptionViolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Damping,
    Growth,
    Undamped,
}

/// Imaginary part γ of Ω = Ω_R + iγ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauGamma {
    pub gamma_closed: f64,
    pub gamma_ratio: f64,
    /// Log forms of the two rates; these stay exact when the f64 values
    /// underflow to zero.
    pub closed_log: SignedLog,
    pub ratio_log: SignedLog,
    pub omega_r: f64,
    pub validity: Validity,
    pub regime: Regime,
}

impl LandauGamma {
    /// |gamma_closed/gamma_ratio − 1|.
    pub fn relative_gap(&self) -> f64 {
        self.closed_log.relative_difference(self.ratio_log)
    }
}

/// Damping rate at a mode frequency `omega_r` (normally a converged root).
pub fn landau_gamma(medium: &Medium, q: f64, omega_r: f64) -> Result<LandauGamma> {
    landau_gamma_at(&medium.at(q)?, omega_r)
}

pub fn landau_gamma_at(at: &Wavenumber<'_>, omega_r: f64) -> Result<LandauGamma> {
    finite("Omega_R", omega_r)?;
    let q = at.q();
    if q <= 0.0 {
        return Err(Error::NonPositiveWavenumber(q));
    }
    let spacing = at.medium().field().omega;
    let denominator: f64 = at
        .weights()
        .iter()
        .filter(|&(_, w)| w > 0.0)
        .map(|(m, w)| w / (m as f64 * spacing + omega_r).powi(3))
        .sum();
    if !(denominator.abs() >= DEGENERATE_DENOMINATOR) {
        return Err(Error::DegenerateDenominator(denominator));
    }

    let p = at.medium().plasma();
    let ln_prefactor = 1.5 * (p.m_e / (2.0 * p.kt)).ln() + 0.5 * PI.ln() - 3.0 * q.ln();
    let closed_log = -(SignedLog::new(1.0, ln_prefactor) * at.landau_numerator(omega_r)
        / SignedLog::from_value(denominator));

    let eps_i = at.eps_imag(omega_r)?;
    let slope = at.d_eps_real_d_omega(omega_r)?;
    let ratio_log = -(eps_i.log / slope.log);

    let gamma_ratio = ratio_log.value();
    let validity = if ratio_log.is_zero()
        || ratio_log.ln_abs - omega_r.abs().ln() < SMALL_DAMPING_RATIO.ln()
    {
        Validity::Ok
    } else {
        Validity::AssumptionViolated
    };
    let regime = match ratio_log.sign {
        s if s < 0.0 => Regime::Damping,
        s if s > 0.0 => Regime::Growth,
        _ => Regime::Undamped,
    };
    Ok(LandauGamma {
        gamma_closed: closed_log.value(),
        gamma_ratio,
        closed_log,
        ratio_log,
        omega_r,
        validity,
        regime,
    })
}
