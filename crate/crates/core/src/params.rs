//! Physical constants, plasma and radiation parameters, and the couplings
//! derived from them.

use crate::error::{finite, Error, Result};

/// Elementary charge, C (CODATA 2018, exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Electron mass, kg (CODATA 2018).
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
/// One electronvolt in joules.
pub const JOULES_PER_EV: f64 = ELEMENTARY_CHARGE;

/// Unperturbed electron plasma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasmaConfig {
    /// Natural plasma frequency, rad/s.
    pub omega_p: f64,
    /// Electron thermal energy k_B T, J.
    pub kt: f64,
    /// Electron mass, kg.
    pub m_e: f64,
    /// Elementary charge, C.
    pub e_charge: f64,
}

impl PlasmaConfig {
    /// Plasma with CODATA electron constants.
    pub fn new(omega_p: f64, kt: f64) -> Result<Self> {
        Self {
            omega_p,
            kt,
            m_e: ELECTRON_MASS,
            e_charge: ELEMENTARY_CHARGE,
        }
        .validated()
    }

    pub fn from_temperature_ev(omega_p: f64, t_ev: f64) -> Result<Self> {
        Self::new(omega_p, t_ev * JOULES_PER_EV)
    }

    pub fn validated(self) -> Result<Self> {
        positive("omega_p", self.omega_p)?;
        positive("kT", self.kt)?;
        positive("m_e", self.m_e)?;
        positive("e_charge", self.e_charge)?;
        Ok(self)
    }

    /// One-dimensional Maxwellian velocity variance kT/m_e, m²/s².
    pub fn thermal_speed_sq(&self) -> f64 {
        self.kt / self.m_e
    }
}

/// Linearly polarized external radiation in the dipole approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiationField {
    /// Electric field amplitude, V/m.
    pub e_amp: f64,
    /// Angular frequency, rad/s.
    pub omega: f64,
}

impl RadiationField {
    pub fn new(e_amp: f64, omega: f64) -> Result<Self> {
        Self { e_amp, omega }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        finite("E_amp", self.e_amp)?;
        if self.e_amp < 0.0 {
            return Err(Error::InvalidParameter {
                name: "E_amp",
                reason: format!("must be >= 0, got {}", self.e_amp),
            });
        }
        positive("omega", self.omega)?;
        Ok(self)
    }
}

/// Radiation couplings entering every photon sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCoupling {
    /// Quiver amplitude e E / (m_e ω²), m. Sets the Bessel argument q·gamma0.
    pub gamma0: f64,
    /// e² E² / (8 m_e ω³), J·s.
    pub gamma1: f64,
    /// Radiation energy 2·gamma1·ω, J.
    pub eps_gamma: f64,
    /// eps_gamma / kT, kept separately so log-space sums never take ln of an
    /// underflowed exp_factor.
    pub suppression: f64,
    /// exp(-eps_gamma / kT).
    pub exp_factor: f64,
}

impl DerivedCoupling {
    /// Coupling of a field-free plasma.
    pub const NONE: Self = Self {
        gamma0: 0.0,
        gamma1: 0.0,
        eps_gamma: 0.0,
        suppression: 0.0,
        exp_factor: 1.0,
    };

    /// Same Bessel argument but with the thermal suppression factor removed.
    pub fn without_suppression(self) -> Self {
        Self {
            suppression: 0.0,
            exp_factor: 1.0,
            ..self
        }
    }
}

pub fn derive_coupling(field: &RadiationField, plasma: &PlasmaConfig) -> Result<DerivedCoupling> {
    let field = field.validated()?;
    let plasma = plasma.validated()?;
    let RadiationField { e_amp, omega } = field;
    let (e, m) = (plasma.e_charge, plasma.m_e);

    let gamma0 = e * e_amp / (m * omega * omega);
    let gamma1 = e * e * e_amp * e_amp / (8.0 * m * omega.powi(3));
    let eps_gamma = 2.0 * gamma1 * omega;
    let suppression = eps_gamma / plasma.kt;
    Ok(DerivedCoupling {
        gamma0,
        gamma1,
        eps_gamma,
        suppression,
        exp_factor: (-suppression).exp(),
    })
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    finite(name, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be > 0, got {value}"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn plasma() -> PlasmaConfig {
        PlasmaConfig::new(6e11, 1.6e-19).unwrap()
    }

    #[test]
    fn zero_field_has_no_coupling() {
        let c = derive_coupling(&RadiationField::new(0.0, 3e7).unwrap(), &plasma()).unwrap();
        assert_eq!(c.gamma0, 0.0);
        assert_eq!(c.eps_gamma, 0.0);
        assert_eq!(c.exp_factor, 1.0);
    }

    #[test]
    fn coupling_matches_arithmetic_oracle() {
        // Reference values from 40-digit arithmetic with the same constants.
        let c = derive_coupling(&RadiationField::new(10.0, 3e7).unwrap(), &plasma()).unwrap();
        assert!((c.gamma0 / 1.954_244_456_413_515e-3 - 1.0).abs() < 1e-14);
        assert!((c.suppression / 4.892_257_508_109_008e-3 - 1.0).abs() < 1e-14);
        assert!((c.exp_factor / 0.995_119_690_092_134_2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn thermal_variance() {
        assert!((plasma().thermal_speed_sq() / 1.756_430_569_212_421e11 - 1.0).abs() < 1e-14);
        let hot = PlasmaConfig::new(6e11, 3.2e-19).unwrap();
        assert_eq!(hot.thermal_speed_sq(), 2.0 * plasma().thermal_speed_sq());
        let cold = PlasmaConfig {
            kt: 0.0,
            ..plasma()
        };
        assert_eq!(cold.thermal_speed_sq(), 0.0);
    }

    #[test]
    fn electronvolt_conversion() {
        let p = PlasmaConfig::from_temperature_ev(6e11, 1.0).unwrap();
        assert_eq!(p.kt, 1.602_176_634e-19);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(RadiationField::new(1.0, 0.0).is_err());
        assert!(RadiationField::new(1.0, -3e7).is_err());
        assert!(RadiationField::new(-1.0, 3e7).is_err());
        assert!(RadiationField::new(f64::NAN, 3e7).is_err());
        assert!(PlasmaConfig::new(0.0, 1e-19).is_err());
        assert!(PlasmaConfig::new(1e11, -1e-19).is_err());
    }

    proptest! {
        #[test]
        fn homogeneous_in_field_amplitude(e1 in 0.0f64..500.0, s in 0.01f64..20.0) {
            let p = plasma();
            let a = derive_coupling(&RadiationField::new(e1, 3e7).unwrap(), &p).unwrap();
            let b = derive_coupling(&RadiationField::new(e1 * s, 3e7).unwrap(), &p).unwrap();
            let close = |x: f64, y: f64| (x - y).abs() <= 1e-14 * y.abs().max(f64::MIN_POSITIVE);
            prop_assert!(close(b.gamma0, a.gamma0 * s));
            prop_assert!(close(b.gamma1, a.gamma1 * s * s));
            prop_assert!(close(b.eps_gamma, a.eps_gamma * s * s));
        }

        #[test]
        fn radiation_energy_identity(e_amp in 0.0f64..1e4, omega in 1e5f64..1e12) {
            let p = plasma();
            let c = derive_coupling(&RadiationField::new(e_amp, omega).unwrap(), &p).unwrap();
            let direct = p.e_charge.powi(2) * e_amp * e_amp / (4.0 * p.m_e * omega * omega);
            prop_assert!((c.eps_gamma - direct).abs() <= 4.0 * f64::EPSILON * direct);
            prop_assert!(c.exp_factor > 0.0 || c.suppression > 700.0);
            prop_assert!(c.exp_factor <= 1.0);
            prop_assert_eq!(c.exp_factor == 1.0, e_amp == 0.0 || c.suppression < f64::EPSILON / 2.0);
        }
    }
}
