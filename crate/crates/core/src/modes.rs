//! Plasmon frequencies as roots of ε_R(q, Ω) = 0.
//!
//! ε_R is scanned on a uniform grid; every sign-change cell is bisected and
//! the candidate is kept only if |ε_R| at the converged point is below the
//! residual tolerance. Candidates are tried from the top of the window down
//! and the first accepted one is the plasmon branch.

use crate::dielectric::{Medium, Wavenumber};
use crate::error::{finite, Error, Result};
use crate::params::PlasmaConfig;

const MAX_BISECTIONS: usize = 400;

/// Scan window and tolerances for the root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketPolicy {
    pub omega_lo: f64,
    pub omega_hi: f64,
    pub n_scan: usize,
    /// Largest |ε_R| accepted at a converged root.
    pub residual_tol: f64,
    /// Relative bracket width at which bisection stops.
    pub rel_tol: f64,
}

impl BracketPolicy {
    pub const DEFAULT_N_SCAN: usize = 2000;
    pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;
    pub const DEFAULT_REL_TOL: f64 = 1e-12;

    /// Window [1e-3·ω_p, 3·ω_p] with the default tolerances.
    pub fn for_plasma(plasma: &PlasmaConfig) -> Self {
        Self {
            omega_lo: 1e-3 * plasma.omega_p,
            omega_hi: 3.0 * plasma.omega_p,
            n_scan: Self::DEFAULT_N_SCAN,
            residual_tol: Self::DEFAULT_RESIDUAL_TOL,
            rel_tol: Self::DEFAULT_REL_TOL,
        }
    }

    pub fn validated(self) -> Result<Self> {
        let bad = |name, reason: String| Err(Error::InvalidParameter { name, reason });
        finite("omega_lo", self.omega_lo)?;
        finite("omega_hi", self.omega_hi)?;
        if self.omega_lo <= 0.0 {
            return bad("omega_lo", format!("must be > 0, got {}", self.omega_lo));
        }
        if self.omega_hi <= self.omega_lo {
            return bad(
                "omega_hi",
                format!("must exceed omega_lo = {}", self.omega_lo),
            );
        }
        if self.n_scan < 100 {
            return bad("n_scan", format!("must be >= 100, got {}", self.n_scan));
        }
        if !(self.residual_tol > 0.0) {
            return bad(
                "residual_tol",
                format!("must be > 0, got {}", self.residual_tol),
            );
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return bad(
                "rel_tol",
                format!("must lie in (0, 1), got {}", self.rel_tol),
            );
        }
        Ok(self)
    }

    /// The scan grid, endpoints included.
    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let step = (self.omega_hi - self.omega_lo) / (self.n_scan - 1) as f64;
        (0..self.n_scan).map(move |i| {
            if i + 1 == self.n_scan {
                self.omega_hi
            } else {
                self.omega_lo + i as f64 * step
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeStatus {
    Converged,
    /// ε_R never changes sign inside the window.
    NoRoot,
    /// Every sign change failed the residual filter.
    PoleRejected,
}

impl ModeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ModeStatus::Converged => "converged",
            ModeStatus::NoRoot => "no_root",
            ModeStatus::PoleRejected => "pole_rejected",
        }
    }
}

impl std::fmt::Display for ModeStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One plasmon mode. For rejected candidates `omega_r` and `residual` hold
/// the highest rejected candidate; both are NaN when no sign change exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSolution {
    pub q: f64,
    pub omega_r: f64,
    /// |ε_R(q, omega_r)|.
    pub residual: f64,
    pub m_used: usize,
    pub iterations: usize,
    pub status: ModeStatus,
}

impl ModeSolution {
    pub fn is_converged(&self) -> bool {
        self.status == ModeStatus::Converged
    }
}

pub fn find_mode(medium: &Medium, q: f64, policy: &BracketPolicy) -> Result<ModeSolution> {
    let policy = policy.validated()?;
    solve(&medium.at(q)?, &policy)
}

/// As [`find_mode`], with the photon sum restricted to |m| ≤ `m_max`.
pub fn find_mode_fixed_m(
    medium: &Medium,
    q: f64,
    m_max: usize,
    policy: &BracketPolicy,
) -> Result<ModeSolution> {
    let policy = policy.validated()?;
    solve(&medium.at_with_cap(q, Some(m_max))?, &policy)
}

/// Root search at a fixed wavenumber.
pub fn solve(at: &Wavenumber<'_>, policy: &BracketPolicy) -> Result<ModeSolution> {
    finite("q", at.q())?;
    let eps = |omega: f64| at.eps_real_unchecked(omega).0.value;

    let samples: Vec<(f64, f64)> = policy.grid().map(|o| (o, eps(o))).collect();
    let mut rejected: Option<(f64, f64, usize)> = None;

    for cell in samples.windows(2).rev() {
        let ((lo, f_lo), (hi, f_hi)) = (cell[0], cell[1]);
        let (root, iterations) = if f_hi == 0.0 {
            (hi, 0)
        } else if f_lo == 0.0 {
            (lo, 0)
        } else if (f_lo < 0.0) != (f_hi < 0.0) {
            bisect(&eps, lo, hi, f_lo, policy.rel_tol)
        } else {
            continue;
        };
        let residual = eps(root).abs();
        if residual <= policy.residual_tol {
            return Ok(ModeSolution {
                q: at.q(),
                omega_r: root,
                residual,
                m_used: at.weights().order(),
                iterations,
                status: ModeStatus::Converged,
            });
        }
        rejected.get_or_insert((root, residual, iterations));
    }

    let (omega_r, residual, iterations, status) = match rejected {
        Some((o, r, it)) => (o, r, it, ModeStatus::PoleRejected),
        None => (f64::NAN, f64::NAN, 0, ModeStatus::NoRoot),
    };
    Ok(ModeSolution {
        q: at.q(),
        omega_r,
        residual,
        m_used: at.weights().order(),
        iterations,
        status,
    })
}

fn bisect(
    f: &impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    f_lo: f64,
    rel_tol: f64,
) -> (f64, usize) {
    let lo_negative = f_lo < 0.0;
    let mut iterations = 0;
    while iterations < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= rel_tol * mid.abs() || mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return (mid, iterations);
        }
        if (f_mid < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi), iterations)
}
