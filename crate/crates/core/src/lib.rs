// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod csv;
pub mod dielectric;
pub mod error;
pub mod logspace;
pub mod modes;
pub mod params;
pub mod presets;
pub mod response;
pub mod specfun;
pub mod sweeps;

pub use config::{
    parse_config, parse_config_layered, parse_config_with, ConfigError, Override, RunConfig,
};
pub use csv::{csv_string, emit_csv, write_csv};
pub use dielectric::{DielectricValue, Medium, SumOptions, Wavenumber};
pub use error::{Error, Result};
pub use modes::{find_mode, find_mode_fixed_m, BracketPolicy, ModeSolution, ModeStatus};
pub use params::{derive_coupling, DerivedCoupling, PlasmaConfig, RadiationField};
pub use presets::{preset, Preset, PRESETS};
pub use response::{conductivity, landau_gamma, Conductivity, LandauGamma, Regime, Validity};
pub use sweeps::{run_sweep, SweepKind, SweepResult, SweepRow, SweepSpec};
