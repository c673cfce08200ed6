//! Classical-limit dielectric function of a plasma dressed by the radiation
//! field.
//!
//! Every quantity is a photon sum over m with weights J_m²(qγ₀) and shifted
//! frequencies λ_m = mω + Ω:
//!
//! ```text
//! ε_R   = 1 − ω_p² e^{−ε_γ/kT} Σ J_m² [1/λ_m² + 3q²v²/λ_m⁴]
//! ∂ε_R/∂Ω =  ω_p² e^{−ε_γ/kT} Σ J_m² [2/λ_m³ + 12q²v²/λ_m⁵]
//! ε_I   = √(π/2) (m_e/kT)^{3/2} (ω_p²/q³) e^{−ε_γ/kT} Σ J_m² λ_m e^{−m_e λ_m²/(2kT q²)}
//! ```
//!
//! with v² = kT/m_e and the wavevector taken along the polarization axis.

use crate::error::{finite, Error, Result};
use crate::logspace::SignedLog;
use crate::params::{derive_coupling, DerivedCoupling, PlasmaConfig, RadiationField};
use crate::specfun::{BesselWeights, DEFAULT_TAIL_TOL};

/// Relative size of |λ_m| below which a term counts as sitting on a pole.
pub const POLE_GUARD: f64 = 1e-9;

/// Controls how the photon sums are truncated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumOptions {
    pub tail_tol: f64,
    /// Keep only |m| ≤ this order. `None` sums up to the truncation order.
    pub max_abs_m: Option<usize>,
}

impl Default for SumOptions {
    fn default() -> Self {
        Self {
            tail_tol: DEFAULT_TAIL_TOL,
            max_abs_m: None,
        }
    }
}

/// Result of evaluating one dielectric quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DielectricValue {
    pub value: f64,
    /// The same value in log form. For ε_I this is computed without ever
    /// forming the underflowing exponentials.
    pub log: SignedLog,
    /// Truncation order M of the photon sum.
    pub m_used: usize,
    pub n_terms: usize,
    /// Some |λ_m| fell under the pole guard.
    pub pole_flag: bool,
}

/// A plasma in a given radiation field, with its derived couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Medium {
    plasma: PlasmaConfig,
    field: RadiationField,
    coupling: DerivedCoupling,
    options: SumOptions,
}

impl Medium {
    pub fn new(plasma: PlasmaConfig, field: RadiationField) -> Result<Self> {
        let coupling = derive_coupling(&field, &plasma)?;
        Ok(Self {
            plasma,
            field,
            coupling,
            options: SumOptions::default(),
        })
    }

    pub fn with_options(mut self, options: SumOptions) -> Self {
        self.options = options;
        self
    }

    pub fn with_max_abs_m(mut self, max_abs_m: Option<usize>) -> Self {
        self.options.max_abs_m = max_abs_m;
        self
    }

    /// Replaces the derived coupling. Used to switch individual factors off
    /// when checking cancellations.
    pub fn with_coupling(mut self, coupling: DerivedCoupling) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn plasma(&self) -> &PlasmaConfig {
        &self.plasma
    }

    pub fn field(&self) -> &RadiationField {
        &self.field
    }

    pub fn coupling(&self) -> &DerivedCoupling {
        &self.coupling
    }

    pub fn options(&self) -> &SumOptions {
        &self.options
    }

    /// Fixes the wavenumber and precomputes the Bessel weights for it.
    pub fn at(&self, q: f64) -> Result<Wavenumber<'_>> {
        self.at_with_cap(q, self.options.max_abs_m)
    }

    pub(crate) fn at_with_cap(&self, q: f64, max_abs_m: Option<usize>) -> Result<Wavenumber<'_>> {
        finite("q", q)?;
        let mut weights = BesselWeights::new(q * self.coupling.gamma0, self.options.tail_tol);
        if let Some(cap) = max_abs_m {
            weights = weights.capped(cap);
        }
        Ok(Wavenumber {
            medium: self,
            q,
            weights,
        })
    }

    pub fn eps_real(&self, q: f64, omega: f64) -> Result<DielectricValue> {
        self.at(q)?.eps_real(omega)
    }

    pub fn eps_imag(&self, q: f64, omega: f64) -> Result<DielectricValue> {
        self.at(q)?.eps_imag(omega)
    }

    pub fn d_eps_real_d_omega(&self, q: f64, omega: f64) -> Result<DielectricValue> {
        self.at(q)?.d_eps_real_d_omega(omega)
    }
}

/// The medium at one wavenumber, with its photon weights cached.
#[derive(Debug, Clone)]
pub struct Wavenumber<'a> {
    medium: &'a Medium,
    q: f64,
    weights: BesselWeights,
}

impl Wavenumber<'_> {
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn medium(&self) -> &Medium {
        self.medium
    }

    pub fn weights(&self) -> &BesselWeights {
        &self.weights
    }

    /// Same wavenumber, weights replaced (e.g. taken to a higher order).
    pub fn with_weights(&self, weights: BesselWeights) -> Self {
        Self {
            medium: self.medium,
            q: self.q,
            weights,
        }
    }

    fn omega_p(&self) -> f64 {
        self.medium.plasma.omega_p
    }

    fn exp_factor(&self) -> f64 {
        self.medium.coupling.exp_factor
    }

    /// 3q²v², the thermal correction coefficient.
    fn thermal(&self) -> f64 {
        3.0 * self.q * self.q * self.medium.plasma.thermal_speed_sq()
    }

    /// Σ over the pairs (m, −m) of w_m·g(λ_m); `g` is even or odd in λ, so
    /// pairing makes Ω → −Ω symmetry hold bit for bit.
    fn paired_sum(&self, omega: f64, g: impl Fn(f64) -> f64) -> (f64, bool, Option<i64>) {
        let spacing = self.medium.field.omega;
        let guard = POLE_GUARD * spacing.max(omega.abs());
        let mut pole_flag = false;
        let mut exact_pole = None;
        let mut check = |m: i64, lambda: f64| {
            if lambda.abs() < guard {
                pole_flag = true;
                if lambda == 0.0 {
                    exact_pole.get_or_insert(m);
                }
            }
        };

        let w = self.weights.nonnegative();
        let mut sum = 0.0;
        for k in (1..w.len()).rev() {
            if w[k] == 0.0 {
                continue;
            }
            let shift = k as f64 * spacing;
            let (up, down) = (omega + shift, omega - shift);
            check(k as i64, up);
            check(-(k as i64), down);
            sum += w[k] * (g(up) + g(down));
        }
        check(0, omega);
        sum += w[0] * g(omega);
        (sum, pole_flag, exact_pole)
    }

    fn value(&self, value: f64, pole_flag: bool) -> DielectricValue {
        DielectricValue {
            value,
            log: SignedLog::from_value(value),
            m_used: self.weights.order(),
            n_terms: 2 * self.weights.order() + 1,
            pole_flag,
        }
    }

    /// ε_R without input checks; an exact pole yields −∞ with `pole_flag`.
    pub(crate) fn eps_real_unchecked(&self, omega: f64) -> (DielectricValue, Option<i64>) {
        let b = self.thermal();
        let wp = self.omega_p();
        let (sum, pole_flag, exact) = self.paired_sum(omega, |lambda| {
            let r = wp / lambda;
            r * r * (1.0 + b / (lambda * lambda))
        });
        let value = if exact.is_some() {
            f64::NEG_INFINITY
        } else {
            1.0 - self.exp_factor() * sum
        };
        (self.value(value, pole_flag), exact)
    }

    pub fn eps_real(&self, omega: f64) -> Result<DielectricValue> {
        finite("Omega", omega)?;
        match self.eps_real_unchecked(omega) {
            (_, Some(m)) => Err(Error::Pole { m }),
            (v, None) => Ok(v),
        }
    }

    pub fn d_eps_real_d_omega(&self, omega: f64) -> Result<DielectricValue> {
        finite("Omega", omega)?;
        let b4 = 4.0 * self.thermal();
        let wp = self.omega_p();
        let (sum, pole_flag, exact) = self.paired_sum(omega, |lambda| {
            let r = wp / lambda;
            r * r / lambda * (2.0 + b4 / (lambda * lambda))
        });
        if let Some(m) = exact {
            return Err(Error::Pole { m });
        }
        Ok(self.value(self.exp_factor() * sum, pole_flag))
    }

    /// Σ_m J_m² λ_m exp(−a λ_m²) in log form, a = m_e/(2kT q²).
    pub(crate) fn landau_numerator(&self, omega: f64) -> SignedLog {
        let p = &self.medium.plasma;
        let a = p.m_e / (2.0 * p.kt * self.q * self.q);
        let spacing = self.medium.field.omega;
        SignedLog::sum(self.weights.iter().filter(|&(_, w)| w > 0.0).map(|(m, w)| {
            let lambda = m as f64 * spacing + omega;
            if lambda == 0.0 {
                SignedLog::ZERO
            } else {
                SignedLog::new(
                    lambda.signum(),
                    w.ln() + lambda.abs().ln() - a * lambda * lambda,
                )
            }
        }))
    }

    pub fn eps_imag(&self, omega: f64) -> Result<DielectricValue> {
        finite("Omega", omega)?;
        if self.q <= 0.0 {
            return Err(Error::NonPositiveWavenumber(self.q));
        }
        let p = &self.medium.plasma;
        let ln_prefactor = 0.5 * (std::f64::consts::PI / 2.0).ln()
            + 1.5 * (p.m_e / p.kt).ln()
            + 2.0 * p.omega_p.ln()
            - 3.0 * self.q.ln()
            - self.medium.coupling.suppression;
        let log = SignedLog::new(1.0, ln_prefactor) * self.landau_numerator(omega);
        Ok(DielectricValue {
            value: log.value(),
            log,
            m_used: self.weights.order(),
            n_terms: 2 * self.weights.order() + 1,
            pole_flag: false,
        })
    }
}
