use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn plasmon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plasmon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn eval_at_plasma_frequency_without_field() {
    let o = plasmon(&["eval", "0", "6e11", "--E", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "eps_real = 0e0"), "{text}");
    assert!(text.contains("eps_imag = undefined"));
    for key in ["d_eps_real_dOmega = ", "sigma_R = ", "sigma_I = "] {
        assert!(text.contains(key), "missing {key}");
    }
}

#[test]
fn eval_reports_all_components_at_finite_q() {
    let o = plasmon(&["eval", "2e5", "3e11", "--E", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let value = |key: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(key)).unwrap();
        line.split('=')
            .nth(1)
            .unwrap()
            .split_whitespace()
            .next()
            .unwrap()
            .parse()
            .unwrap()
    };
    let (er, ei, sr, si) = (
        value("eps_real"),
        value("eps_imag"),
        value("sigma_R"),
        value("sigma_I"),
    );
    let k = 3e11 / (4.0 * std::f64::consts::PI);
    assert!((sr - k * ei).abs() <= 1e-12 * sr.abs());
    assert!((si - k * (1.0 - er)).abs() <= 1e-12 * si.abs());
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["frobnicate"][..],
        &["dispersion", "--no-such-flag"],
        &["eval", "1.0"],
        &["conductivity", "--q-min", "3"],
        &["preset", "no-such-preset"],
    ] {
        let o = plasmon(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn runtime_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.ini");
    fs::write(
        &cfg,
        "[plasma]\nomega_p = 6e11\nkT = 1.6e-19\ncolour = red\n",
    )
    .unwrap();
    let o = plasmon(&["dispersion", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
    assert!(stderr(&o).contains("colour"));

    let o = plasmon(&["dispersion", "--omega", "0", "--steps", "2"]);
    assert_eq!(o.status.code(), Some(1));

    // λ_{-2} = −2·3e7 + 6e7 is exactly zero.
    let o = plasmon(&["eval", "5000", "6e7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("pole"));
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.ini");
    let out = dir.path().join("run.csv");
    fs::write(
        &cfg,
        format!(
            "[plasma]\nomega_p = 1e11\nT_eV = 1\n[field]\nE_amp = 10\nomega_rad = 3e7\n\
             [sweep]\nkind = E_sweep\nmin = 0\nmax = 100\nsteps = 5\noutput_path = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let o = plasmon(&[
        "dispersion",
        "--config",
        cfg.to_str().unwrap(),
        "--steps",
        "3",
        "--set",
        "sweep.q=0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("#   kT = 1.602176634e-19"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2][3], "1e2");
}

#[test]
fn preset_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let o = plasmon(&["preset", "disp2", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let rows = data_rows(std::str::from_utf8(&ta).unwrap());
    assert_eq!(rows.len(), 3 * 201);
    assert!(rows.iter().all(|r| r.last().unwrap() == "converged"));
}

#[test]
fn preset_list_names_every_preset() {
    let o = plasmon(&["preset", "--list"]);
    let text = stdout(&o);
    for name in [
        "disp-left",
        "disp-right",
        "ecamp-left",
        "ecamp-right",
        "disp2",
        "1e10a",
        "1e10b",
        "1e10c",
        "variandoE",
        "qtest-left",
        "qtest-right",
        "sigreal",
        "sigme",
        "sigidifo",
    ] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

/// Ω(q) for E = 0 from Ω² = (ω_p² + √(ω_p⁴ + 12q²v²ω_p²))/2.
fn write_bohm_gross_oracle(path: &Path, omega_p: f64, kt: f64, qs: &[f64]) {
    let v2 = kt / 9.109_383_701_5e-31;
    let wp2 = omega_p * omega_p;
    let mut text = String::from("q,Omega\n");
    for &q in qs {
        let omega = ((wp2 + (wp2 * wp2 + 12.0 * q * q * v2 * wp2).sqrt()) / 2.0).sqrt();
        text.push_str(&format!("{q:e},{omega:e}\n"));
    }
    fs::write(path, text).unwrap();
}

#[test]
fn field_free_dispersion_matches_bohm_gross_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bg.csv");
    let o = plasmon(&[
        "dispersion",
        "--E",
        "0",
        "--q-min",
        "0",
        "--q-max",
        "20000",
        "--steps",
        "41",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = data_rows(&fs::read_to_string(&out).unwrap());
    let qs: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();

    let oracle = dir.path().join("oracle.csv");
    write_bohm_gross_oracle(&oracle, 6e11, 1.6e-19, &qs);
    let expected: Vec<f64> = fs::read_to_string(&oracle)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();

    assert_eq!(rows.len(), 41);
    for (row, want) in rows.iter().zip(expected) {
        let got: f64 = row[7].parse().unwrap();
        assert!(
            (got / want - 1.0).abs() < 1e-9,
            "q={} got={got} want={want}",
            row[2]
        );
    }
}
