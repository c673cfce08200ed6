//! Parameter scans over q, E, or Ω, optionally repeated over a family of a
//! second parameter. Rows are computed independently and collected in input
//! order, so the output does not depend on how the work is scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dielectric::{Medium, SumOptions};
use crate::error::{Error, Result};
use crate::modes::{solve, BracketPolicy, ModeStatus};
use crate::params::{PlasmaConfig, RadiationField};
use crate::response::{conductivity_at, landau_gamma_at, Validity};
use crate::specfun::DEFAULT_TAIL_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    QSweep,
    ESweep,
    OmegapFamily,
    MStudy,
    ResidualScan,
    SigmaVsE,
    SigmaVsOmega,
}

impl SweepKind {
    pub const ALL: [SweepKind; 7] = [
        SweepKind::QSweep,
        SweepKind::ESweep,
        SweepKind::OmegapFamily,
        SweepKind::MStudy,
        SweepKind::ResidualScan,
        SweepKind::SigmaVsE,
        SweepKind::SigmaVsOmega,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepKind::QSweep => "q_sweep",
            SweepKind::ESweep => "E_sweep",
            SweepKind::OmegapFamily => "omegap_family",
            SweepKind::MStudy => "m_study",
            SweepKind::ResidualScan => "residual_scan",
            SweepKind::SigmaVsE => "sigma_vs_E",
            SweepKind::SigmaVsOmega => "sigma_vs_Omega",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Variable on the x axis unless overridden.
    pub fn default_var(self) -> SweepVar {
        match self {
            SweepKind::ESweep | SweepKind::SigmaVsE => SweepVar::EAmp,
            SweepKind::SigmaVsOmega => SweepVar::Omega,
            _ => SweepVar::Q,
        }
    }

    /// Family variable implied by the kind.
    pub fn implied_family(self) -> Option<FamilyVar> {
        match self {
            SweepKind::OmegapFamily => Some(FamilyVar::OmegaP),
            SweepKind::MStudy => Some(FamilyVar::MaxAbsM),
            SweepKind::SigmaVsE | SweepKind::SigmaVsOmega => Some(FamilyVar::Q),
            _ => None,
        }
    }

    /// Whether rows are plasmon modes (as opposed to fixed-Ω evaluations).
    pub fn solves_modes(self) -> bool {
        !matches!(self, SweepKind::SigmaVsE | SweepKind::SigmaVsOmega)
    }
}

/// Swept variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Q,
    EAmp,
    Omega,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Q => "q",
            SweepVar::EAmp => "E_amp",
            SweepVar::Omega => "Omega",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [SweepVar::Q, SweepVar::EAmp, SweepVar::Omega]
            .into_iter()
            .find(|v| v.name() == name)
    }

    /// Range used when a config names the variable but not its bounds.
    pub fn default_range(self, plasma: &PlasmaConfig) -> (f64, f64) {
        match self {
            SweepVar::Q => (0.0, 20000.0),
            SweepVar::EAmp => (0.0, 100.0),
            SweepVar::Omega => (1e-2 * plasma.omega_p, 3.0 * plasma.omega_p),
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            SweepVar::Q => "1/m",
            SweepVar::EAmp => "V/m",
            SweepVar::Omega => "rad/s",
        }
    }
}

/// Parameter varied across the series of a family sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyVar {
    OmegaP,
    KT,
    EAmp,
    OmegaRad,
    Q,
    Omega,
    /// Values are photon orders; +∞ means no cap.
    MaxAbsM,
}

impl FamilyVar {
    pub const ALL: [FamilyVar; 7] = [
        FamilyVar::OmegaP,
        FamilyVar::KT,
        FamilyVar::EAmp,
        FamilyVar::OmegaRad,
        FamilyVar::Q,
        FamilyVar::Omega,
        FamilyVar::MaxAbsM,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyVar::OmegaP => "omega_p",
            FamilyVar::KT => "kT",
            FamilyVar::EAmp => "E_amp",
            FamilyVar::OmegaRad => "omega_rad",
            FamilyVar::Q => "q",
            FamilyVar::Omega => "Omega",
            FamilyVar::MaxAbsM => "max_abs_m",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub var: FamilyVar,
    pub values: Vec<f64>,
}

/// Formats a family value, spelling an uncapped photon order as `full`.
pub fn family_label(var: FamilyVar, value: f64) -> String {
    if var == FamilyVar::MaxAbsM {
        match photon_cap(value) {
            Some(m) => format!("{}={m}", var.name()),
            None => format!("{}=full", var.name()),
        }
    } else {
        format!("{}={value:e}", var.name())
    }
}

fn photon_cap(value: f64) -> Option<usize> {
    value.is_finite().then_some(value as usize)
}

/// Root-finder and truncation settings. The scan window is relative to ω_p
/// unless absolute bounds are given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    pub n_scan: usize,
    pub residual_tol: f64,
    pub rel_tol: f64,
    pub tail_tol: f64,
    pub omega_lo_rel: f64,
    pub omega_hi_rel: f64,
    pub omega_lo: Option<f64>,
    pub omega_hi: Option<f64>,
    pub max_abs_m: Option<usize>,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            n_scan: BracketPolicy::DEFAULT_N_SCAN,
            residual_tol: BracketPolicy::DEFAULT_RESIDUAL_TOL,
            rel_tol: BracketPolicy::DEFAULT_REL_TOL,
            tail_tol: DEFAULT_TAIL_TOL,
            omega_lo_rel: 1e-3,
            omega_hi_rel: 3.0,
            omega_lo: None,
            omega_hi: None,
            max_abs_m: None,
        }
    }
}

impl SolverSettings {
    pub fn policy(&self, plasma: &PlasmaConfig) -> BracketPolicy {
        BracketPolicy {
            omega_lo: self.omega_lo.unwrap_or(self.omega_lo_rel * plasma.omega_p),
            omega_hi: self.omega_hi.unwrap_or(self.omega_hi_rel * plasma.omega_p),
            n_scan: self.n_scan,
            residual_tol: self.residual_tol,
            rel_tol: self.rel_tol,
        }
    }
}

/// Everything needed to reproduce one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub var: SweepVar,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub plasma: PlasmaConfig,
    pub field: RadiationField,
    pub solver: SolverSettings,
    /// Wavenumber when q is not swept.
    pub q: f64,
    /// Evaluation frequency for conductivity sweeps; ω_p when unset.
    pub omega: Option<f64>,
    pub family: Option<Family>,
    /// Draw the fixed q uniformly from this interval using `seed`.
    pub q_random: Option<(f64, f64)>,
    pub seed: u64,
    /// Points in the raw ε_R(Ω) slice emitted by residual scans.
    pub slice_steps: usize,
}

impl SweepSpec {
    /// Default range for the kind's variable and default solver settings.
    pub fn new(kind: SweepKind, plasma: PlasmaConfig, field: RadiationField) -> Self {
        let var = kind.default_var();
        let (min, max) = var.default_range(&plasma);
        Self {
            kind,
            var,
            min,
            max,
            steps: 201,
            plasma,
            field,
            solver: SolverSettings::default(),
            q: 0.0,
            omega: None,
            family: None,
            q_random: None,
            seed: 0,
            slice_steps: 400,
        }
    }

    pub fn validated(self) -> Result<Self> {
        let bad = |name, reason: String| Err(Error::InvalidParameter { name, reason });
        if !(self.min.is_finite() && self.max.is_finite()) || self.min >= self.max {
            return bad(
                "min",
                format!(
                    "sweep range needs min < max, got [{}, {}]",
                    self.min, self.max
                ),
            );
        }
        if self.steps < 2 {
            return bad("steps", format!("must be >= 2, got {}", self.steps));
        }
        if self.kind != SweepKind::ResidualScan && self.var != self.kind.default_var() {
            return bad(
                "var",
                format!(
                    "{} always sweeps {}",
                    self.kind.name(),
                    self.kind.default_var().name()
                ),
            );
        }
        if self.kind == SweepKind::ResidualScan && self.var == SweepVar::Omega {
            return bad("var", "residual_scan sweeps q or E_amp".into());
        }
        if matches!(self.kind, SweepKind::OmegapFamily | SweepKind::MStudy) {
            let implied = self
                .kind
                .implied_family()
                .expect("family kinds imply a variable");
            if self.family.as_ref().map(|f| f.var) != Some(implied) {
                return bad(
                    "family",
                    format!("{} needs family = {}", self.kind.name(), implied.name()),
                );
            }
        }
        if let Some(f) = &self.family {
            if f.values.is_empty() {
                return bad("family_values", "must not be empty".into());
            }
            if f.values.iter().any(|v| v.is_nan()) {
                return bad("family_values", "contains NaN".into());
            }
        }
        if let Some((lo, hi)) = self.q_random {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return bad(
                    "q_random",
                    format!("needs q_random_min < q_random_max, got [{lo}, {hi}]"),
                );
            }
        }
        if self.slice_steps < 2 {
            return bad(
                "slice_steps",
                format!("must be >= 2, got {}", self.slice_steps),
            );
        }
        self.plasma.validated()?;
        self.field.validated()?;
        self.solver.policy(&self.plasma).validated()?;
        Ok(self)
    }

    /// The wavenumber used where q is held fixed, after any random draw.
    pub fn fixed_q(&self) -> f64 {
        match self.q_random {
            Some((lo, hi)) => ChaCha8Rng::seed_from_u64(self.seed).random_range(lo..hi),
            None => self.q,
        }
    }

    /// Swept values, endpoints exact.
    pub fn grid(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.steps)
    }
}

pub(crate) fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    let step = (max - min) / (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                max
            } else {
                min + i as f64 * step
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Mode(ModeStatus),
    /// Direct evaluation at a given (q, Ω).
    Evaluated,
    Failed(&'static str),
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Mode(s) => s.as_str(),
            RowStatus::Evaluated => "evaluated",
            RowStatus::Failed(code) => code,
        }
    }
}

/// One output row. Quantities that do not apply to a row are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub series: String,
    /// Value of the swept variable.
    pub x: f64,
    pub q: f64,
    pub e_amp: f64,
    pub omega_rad: f64,
    pub omega_p: f64,
    pub max_abs_m: Option<usize>,
    /// Ω_R for mode rows, the evaluation frequency otherwise.
    pub omega: f64,
    pub eps_real: f64,
    pub eps_imag: f64,
    pub gamma_closed: f64,
    pub gamma_ratio: f64,
    pub ln_abs_gamma_ratio: f64,
    pub validity: Option<Validity>,
    pub sigma_r: f64,
    pub sigma_i: f64,
    pub residual: f64,
    pub m_used: Option<usize>,
    pub iterations: usize,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    /// The q actually used where q was held fixed.
    pub fixed_q: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn series(&self, label: &str) -> impl Iterator<Item = &SweepRow> + '_ {
        let label = label.to_owned();
        self.rows.iter().filter(move |r| r.series == label)
    }

    /// Series labels in order of first appearance.
    pub fn series_labels(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in &self.rows {
            if out.last() != Some(&r.series.as_str()) && !out.contains(&r.series.as_str()) {
                out.push(&r.series);
            }
        }
        out
    }
}

/// Label of the single series in sweeps without a family.
pub const MAIN_SERIES: &str = "main";
/// Label of the raw ε_R(Ω) slice appended by residual scans.
pub const SLICE_SERIES: &str = "eps_real_slice";

#[derive(Debug, Clone)]
struct Point {
    series: String,
    x: f64,
    plasma: PlasmaConfig,
    field: RadiationField,
    q: f64,
    omega: Option<f64>,
    max_abs_m: Option<usize>,
}

impl Point {
    fn medium(&self, tail_tol: f64) -> Result<Medium> {
        let field = self.field.validated()?;
        Ok(
            Medium::new(self.plasma.validated()?, field)?.with_options(SumOptions {
                tail_tol,
                max_abs_m: self.max_abs_m,
            }),
        )
    }
}

fn points(spec: &SweepSpec, fixed_q: f64) -> Vec<Point> {
    let base = Point {
        series: MAIN_SERIES.to_owned(),
        x: f64::NAN,
        plasma: spec.plasma,
        field: spec.field,
        q: fixed_q,
        omega: spec.omega,
        max_abs_m: spec.solver.max_abs_m,
    };
    let members: Vec<Point> = match &spec.family {
        None => vec![base],
        Some(f) => f
            .values
            .iter()
            .map(|&v| {
                let mut p = base.clone();
                p.series = family_label(f.var, v);
                match f.var {
                    FamilyVar::OmegaP => p.plasma.omega_p = v,
                    FamilyVar::KT => p.plasma.kt = v,
                    FamilyVar::EAmp => p.field.e_amp = v,
                    FamilyVar::OmegaRad => p.field.omega = v,
                    FamilyVar::Q => p.q = v,
                    FamilyVar::Omega => p.omega = Some(v),
                    FamilyVar::MaxAbsM => p.max_abs_m = photon_cap(v),
                }
                p
            })
            .collect(),
    };
    let grid = spec.grid();
    members
        .iter()
        .flat_map(|m| {
            grid.iter().map(move |&x| {
                let mut p = m.clone();
                p.x = x;
                match spec.var {
                    SweepVar::Q => p.q = x,
                    SweepVar::EAmp => p.field.e_amp = x,
                    SweepVar::Omega => p.omega = Some(x),
                }
                p
            })
        })
        .collect()
}

fn empty_row(p: &Point, status: RowStatus) -> SweepRow {
    SweepRow {
        series: p.series.clone(),
        x: p.x,
        q: p.q,
        e_amp: p.field.e_amp,
        omega_rad: p.field.omega,
        omega_p: p.plasma.omega_p,
        max_abs_m: p.max_abs_m,
        omega: f64::NAN,
        eps_real: f64::NAN,
        eps_imag: f64::NAN,
        gamma_closed: f64::NAN,
        gamma_ratio: f64::NAN,
        ln_abs_gamma_ratio: f64::NAN,
        validity: None,
        sigma_r: f64::NAN,
        sigma_i: f64::NAN,
        residual: f64::NAN,
        m_used: None,
        iterations: 0,
        status,
    }
}

fn mode_row(p: &Point, solver: &SolverSettings) -> SweepRow {
    let attempt = || -> Result<SweepRow> {
        let medium = p.medium(solver.tail_tol)?;
        let at = medium.at(p.q)?;
        let sol = solve(&at, &solver.policy(medium.plasma()))?;
        let mut row = empty_row(p, RowStatus::Mode(sol.status));
        row.omega = sol.omega_r;
        row.residual = sol.residual;
        row.m_used = Some(sol.m_used);
        row.iterations = sol.iterations;
        if !sol.is_converged() {
            return Ok(row);
        }
        row.eps_real = at.eps_real(sol.omega_r)?.value;
        if let Ok(v) = at.eps_imag(sol.omega_r) {
            row.eps_imag = v.value;
        }
        if let Ok(g) = landau_gamma_at(&at, sol.omega_r) {
            row.gamma_closed = g.gamma_closed;
            row.gamma_ratio = g.gamma_ratio;
            row.ln_abs_gamma_ratio = g.ratio_log.ln_abs;
            row.validity = Some(g.validity);
        }
        if let Ok(c) = conductivity_at(&at, sol.omega_r) {
            row.sigma_r = c.sigma_r;
            row.sigma_i = c.sigma_i;
        }
        Ok(row)
    };
    attempt().unwrap_or_else(|e| empty_row(p, RowStatus::Failed(e.code())))
}

fn sigma_row(p: &Point, solver: &SolverSettings) -> SweepRow {
    let attempt = || -> Result<SweepRow> {
        let medium = p.medium(solver.tail_tol)?;
        let omega = p.omega.unwrap_or(medium.plasma().omega_p);
        let at = medium.at(p.q)?;
        let c = conductivity_at(&at, omega)?;
        let mut row = empty_row(p, RowStatus::Evaluated);
        row.omega = omega;
        row.eps_real = at.eps_real(omega)?.value;
        row.eps_imag = at.eps_imag(omega)?.value;
        row.sigma_r = c.sigma_r;
        row.sigma_i = c.sigma_i;
        row.m_used = Some(at.weights().order());
        Ok(row)
    };
    attempt().unwrap_or_else(|e| empty_row(p, RowStatus::Failed(e.code())))
}

fn slice_rows(spec: &SweepSpec, fixed_q: f64) -> Vec<SweepRow> {
    let policy = spec.solver.policy(&spec.plasma);
    let q = if spec.var == SweepVar::Q {
        spec.q
    } else {
        fixed_q
    };
    let p = Point {
        series: SLICE_SERIES.to_owned(),
        x: f64::NAN,
        plasma: spec.plasma,
        field: spec.field,
        q,
        omega: None,
        max_abs_m: spec.solver.max_abs_m,
    };
    let medium = match p.medium(spec.solver.tail_tol) {
        Ok(m) => m,
        Err(e) => return vec![empty_row(&p, RowStatus::Failed(e.code()))],
    };
    let at = match medium.at(q) {
        Ok(at) => at,
        Err(e) => return vec![empty_row(&p, RowStatus::Failed(e.code()))],
    };
    linspace(policy.omega_lo, policy.omega_hi, spec.slice_steps)
        .into_iter()
        .map(|omega| {
            let mut p = p.clone();
            p.x = omega;
            p.omega = Some(omega);
            match at.eps_real(omega) {
                Ok(v) => {
                    let mut row = empty_row(&p, RowStatus::Evaluated);
                    row.omega = omega;
                    row.eps_real = v.value;
                    row.m_used = Some(v.m_used);
                    row
                }
                Err(e) => empty_row(&p, RowStatus::Failed(e.code())),
            }
        })
        .collect()
}

fn map_ordered<F>(points: &[Point], f: F) -> Vec<SweepRow>
where
    F: Fn(&Point) -> SweepRow + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        points.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        points.iter().map(f).collect()
    }
}

/// Runs any sweep kind. Row failures are recorded in the row status; only an
/// invalid spec is an error.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let spec = spec.clone().validated()?;
    let fixed_q = spec.fixed_q();
    let pts = points(&spec, fixed_q);
    let solver = spec.solver;
    let mut rows = if spec.kind.solves_modes() {
        map_ordered(&pts, |p| mode_row(p, &solver))
    } else {
        map_ordered(&pts, |p| sigma_row(p, &solver))
    };
    if spec.kind == SweepKind::ResidualScan {
        rows.extend(slice_rows(&spec, fixed_q));
    }
    Ok(SweepResult {
        spec,
        fixed_q,
        rows,
    })
}

fn expect_kind(spec: &SweepSpec, allowed: &[SweepKind]) -> Result<()> {
    if allowed.contains(&spec.kind) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "kind",
            reason: format!("{} is not accepted here", spec.kind.name()),
        })
    }
}

/// Ω_R(q) rows, one series per family member.
pub fn run_q_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    expect_kind(
        spec,
        &[
            SweepKind::QSweep,
            SweepKind::OmegapFamily,
            SweepKind::MStudy,
        ],
    )?;
    run_sweep(spec)
}

/// Ω_R(E) rows at a fixed (possibly randomly drawn) q.
pub fn run_e_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    expect_kind(spec, &[SweepKind::ESweep])?;
    run_sweep(spec)
}

/// ε_R at each converged root, plus a raw ε_R(Ω) slice.
pub fn run_residual_scan(spec: &SweepSpec) -> Result<SweepResult> {
    expect_kind(spec, &[SweepKind::ResidualScan])?;
    run_sweep(spec)
}

/// σ_R, σ_I over E or Ω, one series per q (or per Ω).
pub fn run_sigma_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    expect_kind(spec, &[SweepKind::SigmaVsE, SweepKind::SigmaVsOmega])?;
    run_sweep(spec)
}
