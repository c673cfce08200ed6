use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};

use plasmon_core::config::{parse_config_layered, Override, RunConfig};
use plasmon_core::sweeps::{RowStatus, SweepKind, SweepVar};
use plasmon_core::{csv, presets, run_sweep, Medium, ModeStatus};

/// Plasmon modes, conductivity and Landau damping of a plasma in an
/// external radiation field.
#[derive(Parser)]
#[command(name = "plasmon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mode frequency sweep, Omega_R(q) unless the config picks another mode sweep
    Dispersion(SweepArgs),
    /// sigma_R and sigma_I over Omega (default) or E at fixed q
    Conductivity(SweepArgs),
    /// Mode sweep over q in [2e5, 1e6] 1/m, where Landau rates are visible
    Landau(SweepArgs),
    /// eps_R, eps_I, d(eps_R)/dOmega and sigma at a single (q, Omega)
    Eval {
        /// Wavenumber, 1/m
        #[arg(allow_negative_numbers = true)]
        q: f64,
        /// Frequency Omega, rad/s
        #[arg(allow_negative_numbers = true, value_name = "OMEGA")]
        frequency: f64,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Run a built-in sweep; without a name, list them
    Preset {
        name: Option<String>,
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        sweep: SweepArgs,
    },
}

/// Physical parameters. Without --config, the plasma is omega_p = 6e11 rad/s,
/// kT = 1.6e-19 J in a field E = 10 V/m, omega = 3e7 rad/s.
#[derive(Args, Default)]
struct ParamArgs {
    /// INI config file
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Set any config key, e.g. --set solver.n_scan=4000 (repeatable)
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    set: Vec<String>,
    /// Field amplitude, V/m
    #[arg(long = "E", value_name = "V/m")]
    e_amp: Option<String>,
    /// Radiation frequency, rad/s
    #[arg(long, value_name = "rad/s")]
    omega: Option<String>,
    /// Plasma frequency, rad/s
    #[arg(long = "omega-p", value_name = "rad/s")]
    omega_p: Option<String>,
    /// Thermal energy, J
    #[arg(long = "kT", value_name = "J")]
    kt: Option<String>,
    /// Photon-order cap, or `full`
    #[arg(long = "max-abs-m", value_name = "N|full")]
    max_abs_m: Option<String>,
}

#[derive(Args, Default)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Lower end of a q sweep, 1/m
    #[arg(long = "q-min", allow_negative_numbers = true)]
    q_min: Option<String>,
    /// Upper end of a q sweep, 1/m
    #[arg(long = "q-max", allow_negative_numbers = true)]
    q_max: Option<String>,
    /// Fixed wavenumber where q is not swept, 1/m
    #[arg(long)]
    q: Option<String>,
    /// Points along the swept variable
    #[arg(long)]
    steps: Option<String>,
    /// Seed for the random-q mode
    #[arg(long)]
    seed: Option<String>,
    /// Output CSV path; stdout when absent
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command()
        .error(ErrorKind::ArgumentConflict, msg)
        .exit()
}

fn default_params() -> Vec<Override> {
    vec![
        Override::new("plasma", "omega_p", "6e11"),
        Override::new("plasma", "kT", "1.6e-19"),
        Override::new("field", "E_amp", "10"),
        Override::new("field", "omega_rad", "3e7"),
    ]
}

impl ParamArgs {
    fn overrides(&self) -> Vec<Override> {
        let mut out = Vec::new();
        for (value, section, key) in [
            (&self.omega_p, "plasma", "omega_p"),
            (&self.kt, "plasma", "kT"),
            (&self.e_amp, "field", "E_amp"),
            (&self.omega, "field", "omega_rad"),
            (&self.max_abs_m, "solver", "max_abs_m"),
        ] {
            if let Some(v) = value {
                out.push(Override::new(section, key, v.clone()));
            }
        }
        for s in &self.set {
            out.push(Override::parse(s).unwrap_or_else(|e| usage_error(format!("--set: {e}"))));
        }
        out
    }

    fn config_text(&self) -> Result<String> {
        match &self.config {
            Some(path) => std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display())),
            None => Ok(String::new()),
        }
    }
}

impl SweepArgs {
    fn overrides(&self) -> Vec<Override> {
        let mut out = Vec::new();
        for (value, key) in [
            (&self.q_min, "min"),
            (&self.q_max, "max"),
            (&self.q, "q"),
            (&self.steps, "steps"),
            (&self.seed, "seed"),
        ] {
            if let Some(v) = value {
                out.push(Override::new("sweep", key, v.clone()));
            }
        }
        out.extend(self.params.overrides());
        out
    }

    fn load(&self, text: &str, defaults: &[Override]) -> Result<RunConfig> {
        let config = parse_config_layered(text, defaults, &self.overrides())?;
        if (self.q_min.is_some() || self.q_max.is_some()) && config.sweep.var != SweepVar::Q {
            usage_error(format!(
                "--q-min/--q-max need a q sweep; this {} sweeps {} (use --set sweep.min=... instead)",
                config.sweep.kind.name(),
                config.sweep.var.name()
            ));
        }
        Ok(config)
    }
}

fn run_and_write(config: &RunConfig, out: Option<&PathBuf>) -> Result<()> {
    let result = run_sweep(&config.sweep)?;
    let path = out
        .cloned()
        .or_else(|| config.output_path.as_ref().map(PathBuf::from));
    match path {
        Some(path) => {
            csv::emit_csv(&result, &path)?;
            let converged = result
                .rows
                .iter()
                .filter(|r| r.status == RowStatus::Mode(ModeStatus::Converged))
                .count();
            let flagged = result
                .rows
                .iter()
                .filter(|r| {
                    matches!(
                        r.status,
                        RowStatus::Failed(_)
                            | RowStatus::Mode(ModeStatus::NoRoot | ModeStatus::PoleRejected)
                    )
                })
                .count();
            eprintln!(
                "wrote {} rows to {} ({converged} converged modes, {flagged} flagged)",
                result.rows.len(),
                path.display()
            );
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            csv::write_csv(&result, &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn sweep_command(
    args: &SweepArgs,
    kind_default: &str,
    accepts: fn(SweepKind) -> bool,
    extra: &[Override],
) -> Result<()> {
    let text = args.params.config_text()?;
    let mut defaults = default_params();
    defaults.push(Override::new("sweep", "kind", kind_default));
    defaults.extend_from_slice(extra);
    let config = args.load(&text, &defaults)?;
    if !accepts(config.sweep.kind) {
        usage_error(format!(
            "this subcommand cannot run a {} sweep",
            config.sweep.kind.name()
        ));
    }
    run_and_write(&config, args.out.as_ref())
}

fn eval(q: f64, omega: f64, params: &ParamArgs) -> Result<()> {
    let config = parse_config_layered(
        &params.config_text()?,
        &default_params(),
        &params.overrides(),
    )?;
    let medium =
        Medium::new(*config.plasma(), *config.field())?.with_max_abs_m(config.solver().max_abs_m);
    let medium = medium.with_options(plasmon_core::SumOptions {
        tail_tol: config.solver().tail_tol,
        ..*medium.options()
    });
    let at = medium.at(q)?;
    let eps_r = at.eps_real(omega)?;
    let slope = at.d_eps_real_d_omega(omega)?;

    let mut out = io::stdout().lock();
    writeln!(out, "q = {q:e} 1/m")?;
    writeln!(out, "Omega = {omega:e} rad/s")?;
    writeln!(out, "eps_real = {:e}", eps_r.value)?;
    match at.eps_imag(omega) {
        Ok(v) => writeln!(out, "eps_imag = {:e}", v.value)?,
        Err(e) => writeln!(out, "eps_imag = undefined ({e})")?,
    }
    writeln!(out, "d_eps_real_dOmega = {:e} s/rad", slope.value)?;
    match plasmon_core::response::conductivity_at(&at, omega) {
        Ok(c) => {
            writeln!(out, "sigma_R = {:e}", c.sigma_r)?;
            writeln!(out, "sigma_I = {:e}", c.sigma_i)?;
        }
        Err(e) => {
            writeln!(out, "sigma_R = undefined ({e})")?;
            writeln!(out, "sigma_I = undefined ({e})")?;
        }
    }
    writeln!(out, "M_used = {}", eps_r.m_used)?;
    Ok(())
}

fn preset(name: Option<&str>, list: bool, args: &SweepArgs) -> Result<()> {
    let Some(name) = name.filter(|_| !list) else {
        let mut out = io::stdout().lock();
        for p in presets::PRESETS {
            writeln!(out, "{:<12} {}", p.name, p.description)?;
        }
        return Ok(());
    };
    if args.params.config.is_some() {
        usage_error("--config cannot be combined with a preset; use --set to adjust it");
    }
    let Some(p) = presets::preset(name) else {
        let names: Vec<&str> = presets::PRESETS.iter().map(|p| p.name).collect();
        usage_error(format!(
            "unknown preset `{name}` (available: {})",
            names.join(", ")
        ));
    };
    let config = args.load(p.config, &[])?;
    run_and_write(&config, args.out.as_ref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Dispersion(args) => sweep_command(args, "q_sweep", SweepKind::solves_modes, &[]),
        Command::Conductivity(args) => sweep_command(
            args,
            "sigma_vs_Omega",
            |k| !k.solves_modes(),
            &[Override::new("sweep", "q", "5e4")],
        ),
        Command::Landau(args) => sweep_command(
            args,
            "q_sweep",
            |k| {
                matches!(
                    k,
                    SweepKind::QSweep | SweepKind::OmegapFamily | SweepKind::MStudy
                )
            },
            &[
                Override::new("sweep", "min", "2e5"),
                Override::new("sweep", "max", "1e6"),
            ],
        ),
        Command::Eval {
            q,
            frequency,
            params,
        } => eval(*q, *frequency, params),
        Command::Preset { name, list, sweep } => preset(name.as_deref(), *list, sweep),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e)
            if e.root_cause()
                .downcast_ref::<io::Error>()
                .map(io::Error::kind)
                == Some(io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
