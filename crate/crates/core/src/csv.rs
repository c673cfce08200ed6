//! CSV output with a `#` metadata block.
//!
//! Floats use Rust's shortest round-trip formatting, so reading a value back
//! gives the same f64 and identical runs give identical files.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::response::Validity;
use crate::sweeps::{SweepResult, SweepRow, SLICE_SERIES};

pub const COLUMNS: [&str; 20] = [
    "series",
    "swept",
    "q[1/m]",
    "E_amp[V/m]",
    "omega_rad[rad/s]",
    "omega_p[rad/s]",
    "max_abs_m",
    "Omega[rad/s]",
    "eps_real",
    "eps_imag",
    "gamma_closed[rad/s]",
    "gamma_ratio[rad/s]",
    "ln_abs_gamma_ratio",
    "landau_validity",
    "sigma_R[paper]",
    "sigma_I[paper]",
    "residual",
    "M_used",
    "iterations",
    "status",
];

#[derive(Debug, thiserror::Error)]
#[error("cannot write {}: {source}", path.display())]
pub struct CsvError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

fn row_fields(r: &SweepRow) -> [String; 20] {
    [
        r.series.clone(),
        num(r.x),
        num(r.q),
        num(r.e_amp),
        num(r.omega_rad),
        num(r.omega_p),
        r.max_abs_m
            .map_or_else(|| "full".to_owned(), |m| m.to_string()),
        num(r.omega),
        num(r.eps_real),
        num(r.eps_imag),
        num(r.gamma_closed),
        num(r.gamma_ratio),
        num(r.ln_abs_gamma_ratio),
        match r.validity {
            Some(Validity::Ok) => "ok",
            Some(Validity::AssumptionViolated) => "assumption_violated",
            None => "",
        }
        .to_owned(),
        num(r.sigma_r),
        num(r.sigma_i),
        num(r.residual),
        r.m_used.map_or_else(String::new, |m| m.to_string()),
        r.iterations.to_string(),
        r.status.as_str().to_owned(),
    ]
}

/// Writes the metadata block, the header row and one line per sweep row.
pub fn write_csv(result: &SweepResult, out: &mut impl Write) -> io::Result<()> {
    let spec = &result.spec;
    writeln!(
        out,
        "# {} {}",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION")
    )?;
    writeln!(out, "# swept = {} [{}]", spec.var.name(), spec.var.unit())?;
    if result.rows.iter().any(|r| r.series == SLICE_SERIES) {
        writeln!(
            out,
            "# series {SLICE_SERIES}: swept = Omega [rad/s], raw eps_real over the scan window"
        )?;
    }
    writeln!(out, "# fixed q = {} [1/m]", num(result.fixed_q))?;
    writeln!(
        out,
        "# sigma in Gaussian form: eps = 1 + (4*pi*i/Omega)*sigma, no SI conversion"
    )?;
    writeln!(out, "# NaN marks quantities that do not apply to a row")?;
    writeln!(out, "# config:")?;
    let echo = RunConfig {
        sweep: spec.clone(),
        output_path: None,
    }
    .echo();
    for line in echo.lines() {
        if line.is_empty() {
            writeln!(out, "#")?;
        } else {
            writeln!(out, "#   {line}")?;
        }
    }
    writeln!(out, "{}", COLUMNS.join(","))?;
    for r in &result.rows {
        writeln!(out, "{}", row_fields(r).join(","))?;
    }
    Ok(())
}

pub fn csv_string(result: &SweepResult) -> String {
    let mut buf = Vec::new();
    write_csv(result, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("csv output is UTF-8")
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<(), CsvError> {
    let wrap = |source| CsvError {
        path: path.to_owned(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(wrap)?);
    write_csv(result, &mut w).map_err(wrap)?;
    w.flush().map_err(wrap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::sweeps::run_sweep;

    const TWO_STEP: &str = "[plasma]\nomega_p=6e11\nkT=1.6e-19\n[field]\nE_amp=10\nomega_rad=3e7\n\
                            [sweep]\nmin=0\nmax=20000\nsteps=2\n";

    fn data_lines(text: &str) -> Vec<&str> {
        text.lines()
            .filter(|l| !l.starts_with('#'))
            .skip(1)
            .collect()
    }

    #[test]
    fn two_step_sweep_writes_two_rows() {
        let c = parse_config(TWO_STEP).unwrap();
        let text = csv_string(&run_sweep(&c.sweep).unwrap());
        let rows = data_lines(&text);
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.split(',').count() == COLUMNS.len()));
        assert!(rows.iter().all(|r| r.ends_with(",converged")));
        assert!(text.contains("\nseries,swept,q[1/m],"));
    }

    #[test]
    fn floats_round_trip_and_header_echoes_config() {
        let c = parse_config(TWO_STEP).unwrap();
        let result = run_sweep(&c.sweep).unwrap();
        let text = csv_string(&result);
        let omega: f64 = data_lines(&text)[1]
            .split(',')
            .nth(7)
            .unwrap()
            .parse()
            .unwrap();
        assert_eq!(omega, result.rows[1].omega);

        let echo: String = text
            .lines()
            .take_while(|l| l.starts_with('#'))
            .skip_while(|l| *l != "# config:")
            .skip(1)
            .map(|l| format!("{}\n", l.trim_start_matches('#').trim_start()))
            .collect();
        assert_eq!(parse_config(&echo).unwrap(), c);
    }

    #[test]
    fn io_errors_carry_the_path() {
        let c = parse_config(TWO_STEP).unwrap();
        let result = run_sweep(&c.sweep).unwrap();
        let e = emit_csv(&result, Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(e.to_string().contains("/nonexistent-dir/x.csv"));
    }
}
