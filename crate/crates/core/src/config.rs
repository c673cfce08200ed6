//! INI-style run configuration.
//!
//! ```text
//! [plasma]
//! omega_p = 6e11
//! kT = 1.6e-19        # or T_eV = 1.0
//!
//! [field]
//! E_amp = 10
//! omega_rad = 3e7
//!
//! [sweep]
//! kind = q_sweep
//! min = 0
//! max = 20000
//! steps = 201
//! ```
//!
//! `[solver]` and most `[sweep]` keys are optional; [`RunConfig::echo`] writes
//! every value, defaults included, and parses back to the same config.

use std::collections::BTreeMap;
use std::fmt;

use crate::params::{
    PlasmaConfig, RadiationField, ELECTRON_MASS, ELEMENTARY_CHARGE, JOULES_PER_EV,
};
use crate::sweeps::{Family, FamilyVar, SolverSettings, SweepKind, SweepSpec, SweepVar};

/// A configuration problem, with the 1-based line it came from when known.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

fn err<T>(line: Option<usize>, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sweep: SweepSpec,
    pub output_path: Option<String>,
}

impl RunConfig {
    pub fn plasma(&self) -> &PlasmaConfig {
        &self.sweep.plasma
    }

    pub fn field(&self) -> &RadiationField {
        &self.sweep.field
    }

    pub fn solver(&self) -> &SolverSettings {
        &self.sweep.solver
    }
}

/// A `section.key = value` assignment applied on top of the config text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Override {
    pub section: String,
    pub key: String,
    pub value: String,
}

impl Override {
    pub fn new(section: &str, key: &str, value: impl Into<String>) -> Self {
        Self {
            section: section.into(),
            key: key.into(),
            value: value.into(),
        }
    }

    /// Parses `section.key=value`.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let (path, value) = text.split_once('=').ok_or_else(|| ConfigError {
            line: None,
            message: format!("expected section.key=value, got `{text}`"),
        })?;
        let (section, key) = path.trim().split_once('.').ok_or_else(|| ConfigError {
            line: None,
            message: format!("expected section.key, got `{}`", path.trim()),
        })?;
        Ok(Self::new(section.trim(), key.trim(), value.trim()))
    }
}

const KEYS: &[(&str, &[&str])] = &[
    ("plasma", &["omega_p", "kT", "T_eV", "m_e", "e_charge"]),
    ("field", &["E_amp", "omega_rad"]),
    (
        "solver",
        &[
            "n_scan",
            "residual_tol",
            "rel_tol",
            "tail_tol",
            "omega_lo_rel",
            "omega_hi_rel",
            "omega_lo",
            "omega_hi",
            "max_abs_m",
        ],
    ),
    (
        "sweep",
        &[
            "kind",
            "var",
            "min",
            "max",
            "steps",
            "q",
            "Omega",
            "family",
            "family_values",
            "q_random",
            "q_random_min",
            "q_random_max",
            "seed",
            "slice_steps",
            "output_path",
        ],
    ),
];

fn known(section: &str, key: &str) -> Result<(), String> {
    let Some((_, keys)) = KEYS.iter().find(|(s, _)| *s == section) else {
        return Err(format!("unknown section [{section}]"));
    };
    if keys.contains(&key) {
        Ok(())
    } else {
        Err(format!("unknown key `{key}` in [{section}]"))
    }
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    /// None for overrides.
    line: Option<usize>,
}

#[derive(Debug, Default)]
struct Raw {
    entries: BTreeMap<(String, String), Entry>,
}

impl Raw {
    fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.entries.get(&(section.to_owned(), key.to_owned()))
    }

    fn line(&self, section: &str, key: &str) -> Option<usize> {
        self.get(section, key).and_then(|e| e.line)
    }

    fn parsed<T>(
        &self,
        section: &str,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<Option<T>, ConfigError> {
        match self.get(section, key) {
            None => Ok(None),
            Some(e) => parse(&e.value).map(Some).map_err(|m| ConfigError {
                line: e.line,
                message: format!("[{section}] {key}: {m}"),
            }),
        }
    }

    fn number(&self, section: &str, key: &str) -> Result<Option<f64>, ConfigError> {
        self.parsed(section, key, parse_number)
    }

    fn required(&self, section: &str, key: &str) -> Result<f64, ConfigError> {
        self.number(section, key)?.map_or_else(
            || err(None, format!("missing required key `{key}` in [{section}]")),
            Ok,
        )
    }
}

fn parse_number(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a finite number")),
    }
}

fn parse_count(s: &str) -> Result<usize, String> {
    s.parse::<usize>()
        .map_err(|_| format!("`{s}` is not a non-negative integer"))
}

fn parse_photon_cap(s: &str) -> Result<Option<usize>, String> {
    if s == "full" {
        Ok(None)
    } else {
        parse_count(s).map(Some)
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("`{s}` is not a boolean")),
    }
}

fn parse_family_value(var: FamilyVar, s: &str) -> Result<f64, String> {
    if var == FamilyVar::MaxAbsM {
        return parse_photon_cap(s).map(|m| m.map_or(f64::INFINITY, |m| m as f64));
    }
    parse_number(s)
}

fn parse_text(text: &str, raw: &mut Raw) -> Result<(), ConfigError> {
    let mut section: Option<String> = None;
    for (i, line) in text.lines().enumerate() {
        let n = Some(i + 1);
        let line = line.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return err(n, format!("malformed section header `{line}`"));
            };
            let name = name.trim();
            if !KEYS.iter().any(|(s, _)| *s == name) {
                return err(n, format!("unknown section [{name}]"));
            }
            section = Some(name.to_owned());
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return err(n, format!("expected `key = value`, got `{line}`"));
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(section) = &section else {
            return err(n, format!("key `{key}` appears before any section"));
        };
        known(section, key).map_err(|m| ConfigError {
            line: n,
            message: m,
        })?;
        if value.is_empty() {
            return err(n, format!("[{section}] {key}: empty value"));
        }
        let slot = (section.clone(), key.to_owned());
        if let Some(prev) = raw.entries.get(&slot) {
            return err(
                n,
                format!(
                    "duplicate key `{key}` in [{section}] (first set on line {})",
                    prev.line.unwrap_or(0)
                ),
            );
        }
        raw.entries.insert(
            slot,
            Entry {
                value: value.to_owned(),
                line: n,
            },
        );
    }
    Ok(())
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_with(text, &[])
}

/// Parses `text`, then applies `overrides` in order before validation.
pub fn parse_config_with(text: &str, overrides: &[Override]) -> Result<RunConfig, ConfigError> {
    parse_config_layered(text, &[], overrides)
}

/// As [`parse_config_with`], with `defaults` filling keys the text leaves unset.
pub fn parse_config_layered(
    text: &str,
    defaults: &[Override],
    overrides: &[Override],
) -> Result<RunConfig, ConfigError> {
    let mut raw = Raw::default();
    parse_text(text, &mut raw)?;
    for d in defaults {
        known(&d.section, &d.key).map_err(|m| ConfigError {
            line: None,
            message: m,
        })?;
        let temperature_set =
            raw.get("plasma", "kT").is_some() || raw.get("plasma", "T_eV").is_some();
        if d.section == "plasma" && (d.key == "kT" || d.key == "T_eV") && temperature_set {
            continue;
        }
        raw.entries
            .entry((d.section.clone(), d.key.clone()))
            .or_insert(Entry {
                value: d.value.clone(),
                line: None,
            });
    }
    for o in overrides {
        known(&o.section, &o.key).map_err(|m| ConfigError {
            line: None,
            message: m,
        })?;
        // A temperature override replaces either spelling.
        if o.section == "plasma" && (o.key == "kT" || o.key == "T_eV") {
            raw.entries.remove(&("plasma".into(), "kT".into()));
            raw.entries.remove(&("plasma".into(), "T_eV".into()));
        }
        raw.entries.insert(
            (o.section.clone(), o.key.clone()),
            Entry {
                value: o.value.clone(),
                line: None,
            },
        );
    }
    build(&raw)
}

fn build(raw: &Raw) -> Result<RunConfig, ConfigError> {
    let omega_p = raw.required("plasma", "omega_p")?;
    let kt = match (raw.number("plasma", "kT")?, raw.number("plasma", "T_eV")?) {
        (Some(kt), None) => kt,
        (None, Some(t_ev)) => t_ev * JOULES_PER_EV,
        (Some(_), Some(_)) => {
            return err(
                raw.line("plasma", "T_eV"),
                "give either kT or T_eV, not both",
            )
        }
        (None, None) => return err(None, "missing required key `kT` (or `T_eV`) in [plasma]"),
    };
    let plasma = PlasmaConfig {
        omega_p,
        kt,
        m_e: raw.number("plasma", "m_e")?.unwrap_or(ELECTRON_MASS),
        e_charge: raw
            .number("plasma", "e_charge")?
            .unwrap_or(ELEMENTARY_CHARGE),
    };
    let field = RadiationField {
        e_amp: raw.required("field", "E_amp")?,
        omega: raw.required("field", "omega_rad")?,
    };

    let d = SolverSettings::default();
    let solver = SolverSettings {
        n_scan: raw
            .parsed("solver", "n_scan", parse_count)?
            .unwrap_or(d.n_scan),
        residual_tol: raw
            .number("solver", "residual_tol")?
            .unwrap_or(d.residual_tol),
        rel_tol: raw.number("solver", "rel_tol")?.unwrap_or(d.rel_tol),
        tail_tol: raw.number("solver", "tail_tol")?.unwrap_or(d.tail_tol),
        omega_lo_rel: raw
            .number("solver", "omega_lo_rel")?
            .unwrap_or(d.omega_lo_rel),
        omega_hi_rel: raw
            .number("solver", "omega_hi_rel")?
            .unwrap_or(d.omega_hi_rel),
        omega_lo: raw.number("solver", "omega_lo")?,
        omega_hi: raw.number("solver", "omega_hi")?,
        max_abs_m: raw
            .parsed("solver", "max_abs_m", parse_photon_cap)?
            .unwrap_or(d.max_abs_m),
    };
    if !(solver.tail_tol > 0.0 && solver.tail_tol < 1.0) {
        return err(
            raw.line("solver", "tail_tol"),
            format!(
                "[solver] tail_tol must lie in (0, 1), got {}",
                solver.tail_tol
            ),
        );
    }

    let kind = raw
        .parsed("sweep", "kind", |s| {
            SweepKind::from_name(s).ok_or_else(|| {
                let names: Vec<_> = SweepKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown kind `{s}` (expected one of {})", names.join(", "))
            })
        })?
        .unwrap_or(SweepKind::QSweep);
    let mut spec = SweepSpec::new(kind, plasma, field);
    spec.solver = solver;
    if let Some(var) = raw.parsed("sweep", "var", |s| {
        SweepVar::from_name(s)
            .ok_or_else(|| format!("unknown variable `{s}` (expected q, E_amp or Omega)"))
    })? {
        spec.var = var;
        (spec.min, spec.max) = var.default_range(&plasma);
    }
    spec.min = raw.number("sweep", "min")?.unwrap_or(spec.min);
    spec.max = raw.number("sweep", "max")?.unwrap_or(spec.max);
    spec.steps = raw
        .parsed("sweep", "steps", parse_count)?
        .unwrap_or(spec.steps);
    spec.q = raw.number("sweep", "q")?.unwrap_or(spec.q);
    spec.omega = raw
        .parsed("sweep", "Omega", |s| {
            if s == "omega_p" {
                Ok(None)
            } else {
                parse_number(s).map(Some)
            }
        })?
        .flatten();

    let family_var = raw.parsed("sweep", "family", |s| {
        if s == "none" {
            return Ok(None);
        }
        FamilyVar::from_name(s).map(Some).ok_or_else(|| {
            let names: Vec<_> = FamilyVar::ALL.iter().map(|v| v.name()).collect();
            format!(
                "unknown family variable `{s}` (expected none or one of {})",
                names.join(", ")
            )
        })
    })?;
    let family_var = match family_var {
        Some(v) => v,
        None => kind
            .implied_family()
            .filter(|_| raw.get("sweep", "family_values").is_some()),
    };
    spec.family = match (family_var, raw.get("sweep", "family_values")) {
        (None, None) => None,
        (None, Some(e)) => {
            return err(
                e.line,
                "[sweep] family_values given without a family variable",
            )
        }
        (Some(_), None) => {
            return err(
                raw.line("sweep", "family"),
                "[sweep] family needs family_values",
            )
        }
        (Some(var), Some(_)) => {
            let values = raw
                .parsed("sweep", "family_values", |s| {
                    s.split(',')
                        .map(|v| parse_family_value(var, v.trim()))
                        .collect::<Result<Vec<_>, _>>()
                })?
                .unwrap_or_default();
            Some(Family { var, values })
        }
    };

    if raw
        .parsed("sweep", "q_random", parse_bool)?
        .unwrap_or(false)
    {
        spec.q_random = Some((
            raw.number("sweep", "q_random_min")?.unwrap_or(0.0),
            raw.number("sweep", "q_random_max")?.unwrap_or(20000.0),
        ));
    } else if let Some(e) = raw
        .get("sweep", "q_random_min")
        .or(raw.get("sweep", "q_random_max"))
    {
        return err(
            e.line,
            "[sweep] q_random_min/q_random_max need q_random = true",
        );
    }
    spec.seed = raw
        .parsed("sweep", "seed", |s| {
            s.parse::<u64>().map_err(|_| format!("`{s}` is not a u64"))
        })?
        .unwrap_or(spec.seed);
    spec.slice_steps = raw
        .parsed("sweep", "slice_steps", parse_count)?
        .unwrap_or(spec.slice_steps);
    let output_path = raw.get("sweep", "output_path").map(|e| e.value.clone());

    let sweep = spec.validated().map_err(|e| {
        let line = match &e {
            crate::Error::InvalidParameter { name, .. } | crate::Error::NonFinite { name, .. } => {
                key_line(raw, name)
            }
            _ => None,
        };
        ConfigError {
            line,
            message: e.to_string(),
        }
    })?;
    Ok(RunConfig { sweep, output_path })
}

/// Line of the config key behind a validation error name.
fn key_line(raw: &Raw, name: &str) -> Option<usize> {
    let candidates: &[(&str, &str)] = match name {
        "kT" => &[("plasma", "kT"), ("plasma", "T_eV")],
        "omega" => &[("field", "omega_rad")],
        "omega_lo" => &[("solver", "omega_lo"), ("solver", "omega_lo_rel")],
        "omega_hi" => &[("solver", "omega_hi"), ("solver", "omega_hi_rel")],
        "q_random" => &[("sweep", "q_random_min"), ("sweep", "q_random")],
        "min" => &[("sweep", "min"), ("sweep", "max")],
        _ => &[],
    };
    candidates
        .iter()
        .copied()
        .chain(
            KEYS.iter()
                .flat_map(|(s, keys)| keys.iter().filter(|k| **k == name).map(move |k| (*s, *k))),
        )
        .find_map(|(s, k)| raw.line(s, k))
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

fn photon_cap(m: Option<usize>) -> String {
    m.map_or_else(|| "full".to_owned(), |m| m.to_string())
}

impl RunConfig {
    /// Every setting as config text; parsing it gives back `self`.
    pub fn echo(&self) -> String {
        use std::fmt::Write;
        let s = &self.sweep;
        let (p, f, v) = (&s.plasma, &s.field, &s.solver);
        let mut out = String::new();
        let mut kv = |k: &str, v: String| writeln!(out, "{k} = {v}").unwrap();
        kv("[plasma]\nomega_p", num(p.omega_p));
        kv("kT", num(p.kt));
        kv("m_e", num(p.m_e));
        kv("e_charge", num(p.e_charge));
        kv("\n[field]\nE_amp", num(f.e_amp));
        kv("omega_rad", num(f.omega));
        kv("\n[solver]\nn_scan", v.n_scan.to_string());
        kv("residual_tol", num(v.residual_tol));
        kv("rel_tol", num(v.rel_tol));
        kv("tail_tol", num(v.tail_tol));
        kv("omega_lo_rel", num(v.omega_lo_rel));
        kv("omega_hi_rel", num(v.omega_hi_rel));
        if let Some(lo) = v.omega_lo {
            kv("omega_lo", num(lo));
        }
        if let Some(hi) = v.omega_hi {
            kv("omega_hi", num(hi));
        }
        kv("max_abs_m", photon_cap(v.max_abs_m));
        kv("\n[sweep]\nkind", s.kind.name().to_owned());
        kv("var", s.var.name().to_owned());
        kv("min", num(s.min));
        kv("max", num(s.max));
        kv("steps", s.steps.to_string());
        kv("q", num(s.q));
        kv("Omega", s.omega.map_or_else(|| "omega_p".to_owned(), num));
        match &s.family {
            None => kv("family", "none".to_owned()),
            Some(fam) => {
                kv("family", fam.var.name().to_owned());
                let values: Vec<String> = fam
                    .values
                    .iter()
                    .map(|&x| {
                        if x.is_infinite() {
                            "full".to_owned()
                        } else if fam.var == FamilyVar::MaxAbsM {
                            (x as usize).to_string()
                        } else {
                            num(x)
                        }
                    })
                    .collect();
                kv("family_values", values.join(", "));
            }
        }
        match s.q_random {
            None => kv("q_random", "false".to_owned()),
            Some((lo, hi)) => {
                kv("q_random", "true".to_owned());
                kv("q_random_min", num(lo));
                kv("q_random_max", num(hi));
            }
        }
        kv("seed", s.seed.to_string());
        kv("slice_steps", s.slice_steps.to_string());
        if let Some(path) = &self.output_path {
            kv("output_path", path.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[plasma]
omega_p = 6e11
kT = 1.6e-19

[field]
E_amp = 10
omega_rad = 3e7
";

    #[test]
    fn minimal_config_uses_documented_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.plasma().omega_p, 6e11);
        assert_eq!(c.plasma().kt, 1.6e-19);
        assert_eq!(c.field().e_amp, 10.0);
        assert_eq!(c.field().omega, 3e7);
        let s = c.solver();
        assert_eq!(
            (s.n_scan, s.residual_tol, s.rel_tol, s.tail_tol),
            (2000, 1e-8, 1e-12, 1e-12)
        );
        let w = s.policy(c.plasma());
        assert_eq!((w.omega_lo, w.omega_hi), (6e8, 1.8e12));
        assert_eq!(c.sweep.kind, SweepKind::QSweep);
        assert_eq!(
            (c.sweep.min, c.sweep.max, c.sweep.steps),
            (0.0, 20000.0, 201)
        );
    }

    #[test]
    fn echo_round_trips() {
        let c = parse_config(MINIMAL).unwrap();
        let echo = c.echo();
        assert_eq!(parse_config(&echo).unwrap(), c);
        assert!(echo.contains("omega_p = 6e11"));
        assert!(echo.contains("kT = 1.6e-19"));

        let full = "[plasma]\nomega_p=1e11\nT_eV=2\n[field]\nE_amp=0\nomega_rad=3e7\n\
                    [solver]\nmax_abs_m=4\nomega_lo=1e7\n[sweep]\nkind=m_study\nfamily_values=0,2,full\n\
                    Omega=5e9\nq_random=true\nseed=7\noutput_path=out.csv\n";
        let c = parse_config(full).unwrap();
        assert_eq!(
            c.sweep.family.as_ref().unwrap().values,
            vec![0.0, 2.0, f64::INFINITY]
        );
        assert_eq!(parse_config(&c.echo()).unwrap(), c);
    }

    #[test]
    fn electronvolt_temperature() {
        let c = parse_config(&MINIMAL.replace("kT = 1.6e-19", "T_eV = 1.0")).unwrap();
        assert_eq!(c.plasma().kt, 1.602176634e-19);
    }

    #[test]
    fn errors_name_the_line() {
        let e = parse_config(&MINIMAL.replace("omega_rad = 3e7", "omega_rad = 0")).unwrap_err();
        assert_eq!(e.line, Some(7), "{e}");
        assert!(e.to_string().contains("omega"));

        let e = parse_config(&format!("{MINIMAL}colour = blue\n")).unwrap_err();
        assert_eq!(e.line, Some(8));
        assert!(e.message.contains("colour"));

        let e = parse_config(&MINIMAL.replace("6e11", "6e11x")).unwrap_err();
        assert_eq!(e.line, Some(2));

        let e = parse_config(&MINIMAL.replace("E_amp = 10\n", "")).unwrap_err();
        assert!(e.message.contains("E_amp"));

        let e = parse_config(&format!("{MINIMAL}[sweep]\nsteps = 1\n")).unwrap_err();
        assert_eq!(e.line, Some(9));

        assert!(parse_config(&format!("{MINIMAL}[extra]\n")).is_err());
        assert!(parse_config(&format!("{MINIMAL}E_amp = 3\n")).is_err());
        assert!(parse_config(&format!("{MINIMAL}T_eV = 3\n")).is_err());
    }

    #[test]
    fn overrides_take_precedence() {
        let o = [
            Override::parse("field.E_amp=0").unwrap(),
            Override::new("plasma", "T_eV", "2"),
        ];
        let c = parse_config_with(MINIMAL, &o).unwrap();
        assert_eq!(c.field().e_amp, 0.0);
        assert_eq!(c.plasma().kt, 2.0 * JOULES_PER_EV);

        let d = [
            Override::new("field", "E_amp", "3"),
            Override::new("plasma", "T_eV", "5"),
        ];
        let c = parse_config_layered(MINIMAL, &d, &o[..1]).unwrap();
        assert_eq!((c.field().e_amp, c.plasma().kt), (0.0, 1.6e-19));
        let c = parse_config_layered(
            "",
            &[
                Override::new("plasma", "omega_p", "1e11"),
                Override::new("plasma", "kT", "1e-19"),
                d[0].clone(),
                Override::new("field", "omega_rad", "1e7"),
            ],
            &[],
        )
        .unwrap();
        assert_eq!(c.field().e_amp, 3.0);
        assert!(parse_config_with(MINIMAL, &[Override::new("field", "colour", "1")]).is_err());
    }
}
