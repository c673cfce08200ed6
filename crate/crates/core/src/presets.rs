//! Ready-made sweeps for the standard dispersion, field-dependence,
//! residual and conductivity studies.
//!
//! The radiation frequency ω = 3e7 rad/s is a chosen default wherever a study
//! leaves it open. The random-q presets fix their seed. Fixed evaluation
//! frequencies avoid integer multiples of ω, where λ_m = mω + Ω vanishes.

use crate::config::{parse_config, parse_config_with, ConfigError, Override, RunConfig};

#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    /// Complete config text.
    pub config: &'static str,
}

impl Preset {
    pub fn run_config(&self) -> RunConfig {
        parse_config(self.config).expect("preset configs are valid")
    }

    pub fn run_config_with(&self, overrides: &[Override]) -> Result<RunConfig, ConfigError> {
        parse_config_with(self.config, overrides)
    }
}

macro_rules! base {
    ($omega_p:literal, $e_amp:literal) => {
        concat!(
            "[plasma]\nomega_p = ",
            $omega_p,
            "\nkT = 1.6e-19\n\n[field]\nE_amp = ",
            $e_amp,
            "\nomega_rad = 3e7\n\n"
        )
    };
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "disp-left",
        description: "Omega(q) for radiation frequencies 1e7, 3e7, 1e8 rad/s at E = 10 V/m",
        config: concat!(
            base!("6e11", "10"),
            "[sweep]\nkind = q_sweep\nmin = 0\nmax = 20000\nsteps = 201\n",
            "family = omega_rad\nfamily_values = 1e7, 3e7, 1e8\n"
        ),
    },
    Preset {
        name: "disp-right",
        description: "Omega(q) with the photon sum capped at |m| <= 0, 1, 2, 4, 8 and uncapped",
        config: concat!(
            base!("6e11", "10"),
            "[sweep]\nkind = m_study\nmin = 0\nmax = 20000\nsteps = 201\n",
            "family = max_abs_m\nfamily_values = 0, 1, 2, 4, 8, full\n"
        ),
    },
    Preset {
        name: "ecamp-left",
        description: "Omega(E) for E in [0, 250] V/m at a q drawn once from [0, 20000] 1/m",
        config: concat!(
            base!("6e11", "10"),
            "[sweep]\nkind = E_sweep\nmin = 0\nmax = 250\nsteps = 126\n",
            "q_random = true\nq_random_min = 0\nq_random_max = 20000\nseed = 2024\n"
        ),
    },
    Preset {
        name: "ecamp-right",
        description: "Omega(E) at q = 10000 1/m with the photon sum capped at |m| <= 0, 2, 8 and uncapped",
        config: concat!(
            base!("6e11", "10"),
            "[sweep]\nkind = E_sweep\nmin = 0\nmax = 250\nsteps = 126\nq = 10000\n",
            "family = max_abs_m\nfamily_values = 0, 2, 8, full\n"
        ),
    },
    Preset {
        name: "disp2",
        description: "Omega(q) for omega_p = 1e10, 1e11, 6e11 rad/s at E = 10 V/m, omega = 3e7 rad/s",
        config: concat!(
            base!("6e11", "10"),
            "[sweep]\nkind = omegap_family\nmin = 0\nmax = 20000\nsteps = 201\n",
            "family = omega_p\nfamily_values = 1e10, 1e11, 6e11\n"
        ),
    },
    Preset {
        name: "1e10a",
        description: "Omega(q) at omega_p = 1e11 rad/s",
        config: concat!(base!("1e11", "10"), "[sweep]\nkind = q_sweep\nmin = 0\nmax = 20000\nsteps = 201\n"),
    },
    Preset {
        name: "1e10b",
        description: "Omega(q) at omega_p = 1e10 rad/s",
        config: concat!(base!("1e10", "10"), "[sweep]\nkind = q_sweep\nmin = 0\nmax = 20000\nsteps = 201\n"),
    },
    Preset {
        name: "1e10c",
        description: "Omega(q) at omega_p = 1e19 rad/s",
        config: concat!(base!("1e19", "10"), "[sweep]\nkind = q_sweep\nmin = 0\nmax = 20000\nsteps = 201\n"),
    },
    Preset {
        name: "variandoE",
        description: "Omega(q) for E = 1, 10, 50, 100, 200 V/m",
        config: concat!(
            base!("6e11", "10"),
            "[sweep]\nkind = q_sweep\nmin = 0\nmax = 20000\nsteps = 201\n",
            "family = E_amp\nfamily_values = 1, 10, 50, 100, 200\n"
        ),
    },
    Preset {
        name: "qtest-left",
        description: "eps_real at each root along Omega(q) at E = 10 V/m, plus an eps_real(Omega) slice at q = 210 1/m",
        config: concat!(
            base!("6e11", "10"),
            "[sweep]\nkind = residual_scan\nvar = q\nmin = 0\nmax = 20000\nsteps = 201\nq = 210\n"
        ),
    },
    Preset {
        name: "qtest-right",
        description: "eps_real at each root along Omega(E) at q = 210 1/m, plus an eps_real(Omega) slice",
        config: concat!(
            base!("6e11", "10"),
            "[sweep]\nkind = residual_scan\nvar = E_amp\nmin = 0\nmax = 250\nsteps = 126\nq = 210\n"
        ),
    },
    Preset {
        name: "sigreal",
        description: "sigma(Omega) for q = 2e4, 5e4, 1e5 1/m at E = 10 V/m",
        config: concat!(
            base!("6e11", "10"),
            "[sweep]\nkind = sigma_vs_Omega\nmin = 1e9\nmax = 2e11\nsteps = 400\n",
            "family = q\nfamily_values = 2e4, 5e4, 1e5\n"
        ),
    },
    Preset {
        name: "sigme",
        description: "sigma(E) at Omega = 5e9 rad/s for q = 2e4, 5e4, 1e5 1/m",
        config: concat!(
            base!("6e11", "10"),
            "[sweep]\nkind = sigma_vs_E\nmin = 0\nmax = 250\nsteps = 126\nOmega = 5e9\n",
            "family = q\nfamily_values = 2e4, 5e4, 1e5\n"
        ),
    },
    Preset {
        name: "sigidifo",
        description: "sigma(E) at q = 5e4 1/m for Omega = 5e9, 5.05e9, 5.2e9 rad/s",
        config: concat!(
            base!("6e11", "10"),
            "[sweep]\nkind = sigma_vs_E\nmin = 0\nmax = 250\nsteps = 126\nq = 5e4\n",
            "family = Omega\nfamily_values = 5e9, 5.05e9, 5.2e9\n"
        ),
    },
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
