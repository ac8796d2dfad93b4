//! Command-line flags, the flat `key = value` config file, and their resolution into a
//! [`RunConfig`]. Precedence is flag, then file, then built-in default.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use dephasing_core::model::MAX_SPINS;
use dephasing_core::{Error as CoreError, InitialQubit, ModelParams};

use crate::error::{CliError, FieldError};
use crate::svg::FigKind;

pub const DEFAULT_T_MAX: f64 = 20.0;
pub const DEFAULT_SAMPLES: usize = 2001;
pub const DEFAULT_SWEEP_N: [usize; 3] = [3, 5, 7];
/// In units of `|J_z|`.
pub const DEFAULT_SWEEP_G: [f64; 3] = [0.1, 0.3, 0.5];
/// Largest ring for which `--oracle auto` runs the full-space comparison.
pub const ORACLE_AUTO_MAX_SPINS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleMode {
    On,
    Off,
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Csv,
    Svg,
    All,
}

impl Emit {
    pub fn csv(self) -> bool {
        matches!(self, Emit::Csv | Emit::All)
    }

    pub fn svg(self) -> bool {
        matches!(self, Emit::Svg | Emit::All)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FigArg {
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
    #[value(name = "5")]
    Five,
    All,
}

fn parse_initial(s: &str) -> Result<InitialQubit, String> {
    match s.trim() {
        "plus" | "+" => Ok(InitialQubit::Plus),
        "minus" | "-" => Ok(InitialQubit::Minus),
        other => {
            let (theta, phi) = other
                .split_once(',')
                .ok_or_else(|| format!("expected `plus`, `minus` or `theta,phi`, got `{other}`"))?;
            let angle = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
            Ok(InitialQubit::Custom {
                theta: angle(theta)?,
                phi: angle(phi)?,
            })
        }
    }
}

/// Every flag is optional so that unset values can fall through to the config file.
#[derive(Parser, Clone, Debug, Default, PartialEq)]
#[command(
    name = "dephasing",
    version,
    about = "Qubit dephasing in a thermal Ising ring"
)]
pub struct Cli {
    /// Flat `key = value` file; keys are flag names with underscores
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Ring size N [default: 7]
    #[arg(long)]
    pub n_spins: Option<usize>,

    /// Coupling g (sets g0 = g1) [default: 0.5|jz|]
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,

    /// Ising coupling J_z [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub jz: Option<f64>,

    /// Longitudinal field h_z [default: -5|jz|]
    #[arg(long, allow_negative_numbers = true)]
    pub hz: Option<f64>,

    /// Inverse bath temperature [default: 1/|jz|]
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,

    /// Time horizon [default: 20]
    #[arg(long, allow_negative_numbers = true)]
    pub t_max: Option<f64>,

    /// Grid points including both ends [default: 2001]
    #[arg(long)]
    pub samples: Option<usize>,

    /// Sweep ring sizes; bare flag means 3,5,7
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    pub sweep_n: Option<Vec<usize>>,

    /// Sweep couplings; bare flag means 0.1,0.3,0.5 times |jz|
    #[arg(long, num_args = 0.., value_delimiter = ',', allow_negative_numbers = true)]
    pub sweep_g: Option<Vec<f64>>,

    /// Compare against direct exponentiation of the full Hamiltonian [default: auto]
    #[arg(long, value_enum)]
    pub oracle: Option<OracleMode>,

    /// Output directory [default: ./results]
    #[arg(long)]
    pub out_dir: Option<PathBuf>,

    /// [default: all]
    #[arg(long, value_enum)]
    pub emit: Option<Emit>,

    /// Figures to draw when emitting SVG [default: all]
    #[arg(long, value_enum, value_delimiter = ',')]
    pub fig: Option<Vec<FigArg>>,

    /// Qubit level energy ε0 [default: -0.5]
    #[arg(long, allow_negative_numbers = true)]
    pub eps0: Option<f64>,

    /// Qubit level energy ε1 [default: 0.5]
    #[arg(long, allow_negative_numbers = true)]
    pub eps1: Option<f64>,

    /// Initial qubit state: plus, minus, or theta,phi [default: plus]
    #[arg(long, value_parser = parse_initial, allow_hyphen_values = true)]
    pub initial: Option<InitialQubit>,
}

impl Cli {
    /// Fills every unset field of `self` from `lower`.
    pub fn or(self, lower: Cli) -> Cli {
        Cli {
            config: self.config.or(lower.config),
            n_spins: self.n_spins.or(lower.n_spins),
            g: self.g.or(lower.g),
            jz: self.jz.or(lower.jz),
            hz: self.hz.or(lower.hz),
            beta: self.beta.or(lower.beta),
            t_max: self.t_max.or(lower.t_max),
            samples: self.samples.or(lower.samples),
            sweep_n: self.sweep_n.or(lower.sweep_n),
            sweep_g: self.sweep_g.or(lower.sweep_g),
            oracle: self.oracle.or(lower.oracle),
            out_dir: self.out_dir.or(lower.out_dir),
            emit: self.emit.or(lower.emit),
            fig: self.fig.or(lower.fig),
            eps0: self.eps0.or(lower.eps0),
            eps1: self.eps1.or(lower.eps1),
            initial: self.initial.or(lower.initial),
        }
    }
}

/// Parses config-file text. Each line is checked on its own so diagnostics can name the
/// line and key.
pub fn parse_config_text(text: &str) -> Result<Cli, CliError> {
    let mut merged = Cli::default();
    let mut seen = HashSet::new();
    let mut errors = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let Some((key, value)) = line.split_once('=') else {
            errors.push(FieldError::new(
                format!("line {lineno}"),
                "expected `key = value`",
            ));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        let field = format!("{key} (line {lineno})");
        if key == "config" {
            errors.push(FieldError::new(
                field,
                "config files cannot include other config files",
            ));
            continue;
        }
        if key.is_empty()
            || !key
                .chars()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        {
            errors.push(FieldError::new(
                field,
                "keys are lowercase flag names with underscores",
            ));
            continue;
        }
        if !seen.insert(key.to_string()) {
            errors.push(FieldError::new(field, "duplicate key"));
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        let mut args = vec!["dephasing".to_string()];
        if value.is_empty() {
            args.push(flag);
        } else {
            args.push(format!("{flag}={value}"));
        }
        match Cli::try_parse_from(&args) {
            Ok(single) => merged = merged.or(single),
            Err(e) => errors.push(FieldError::new(field, first_line(&e.to_string()))),
        }
    }
    if errors.is_empty() {
        Ok(merged)
    } else {
        Err(CliError::ConfigInvalid(errors))
    }
}

fn first_line(s: &str) -> String {
    s.lines()
        .next()
        .unwrap_or("")
        .trim_start_matches("error: ")
        .to_string()
}

pub fn read_config_file(path: &Path) -> Result<Cli, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))?;
    parse_config_text(&text)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Base parameter point; sweeps replace `n_spins` and/or `g0 = g1`.
    pub model: ModelParams,
    pub t_max: f64,
    pub n_samples: usize,
    pub sweep_n: Option<Vec<usize>>,
    pub sweep_g: Option<Vec<f64>>,
    pub oracle: OracleMode,
    pub out_dir: PathBuf,
    pub emit: Emit,
    pub figs: Vec<FigKind>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::resolve(Cli::default()).expect("built-in defaults are valid")
    }
}

impl RunConfig {
    /// Reads `--config` if given, merges it under the flags, and resolves.
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let merged = match &cli.config {
            Some(path) => {
                let file = read_config_file(path)?;
                cli.or(file)
            }
            None => cli,
        };
        Self::resolve(merged)
    }

    /// Applies defaults to unset fields and validates. Ignores `config`.
    pub fn resolve(opts: Cli) -> Result<Self, CliError> {
        let mut errors = Vec::new();
        let jz = opts.jz.unwrap_or(1.0);
        if !jz.is_finite() {
            errors.push(FieldError::new("jz", "must be finite"));
        }
        let scale = jz.abs();
        let beta = match opts.beta {
            Some(b) => b,
            None if scale > 0.0 => 1.0 / scale,
            None => {
                errors.push(FieldError::new(
                    "beta",
                    "no default when jz = 0; set it explicitly",
                ));
                1.0
            }
        };
        let g = opts.g.unwrap_or(0.5 * scale);
        let model = ModelParams {
            n_spins: opts.n_spins.unwrap_or(7),
            j_z: jz,
            h_z: opts.hz.unwrap_or(-5.0 * scale),
            g0: g,
            g1: g,
            beta,
            eps0: opts.eps0.unwrap_or(-0.5),
            eps1: opts.eps1.unwrap_or(0.5),
            initial_qubit: opts.initial.unwrap_or(InitialQubit::Plus),
        };
        if let Err(e) = model.validate() {
            errors.push(model_error(e));
        }

        let t_max = opts.t_max.unwrap_or(DEFAULT_T_MAX);
        if !(t_max > 0.0 && t_max.is_finite()) {
            errors.push(FieldError::new("t_max", "must be positive and finite"));
        }
        let n_samples = opts.samples.unwrap_or(DEFAULT_SAMPLES);
        if n_samples < 3 {
            errors.push(FieldError::new("samples", "at least 3 grid points are needed"));
        }

        let sweep_n = opts
            .sweep_n
            .map(|v| if v.is_empty() { DEFAULT_SWEEP_N.to_vec() } else { v });
        if let Some(ns) = &sweep_n {
            for &n in ns {
                if n == 0 || n > MAX_SPINS {
                    errors.push(FieldError::new(
                        "sweep_n",
                        format!("{n} is outside 1..={MAX_SPINS}"),
                    ));
                }
            }
        }
        let sweep_g = opts.sweep_g.map(|v| {
            if v.is_empty() {
                DEFAULT_SWEEP_G.iter().map(|g| g * scale).collect()
            } else {
                v
            }
        });
        if let Some(gs) = &sweep_g {
            if gs.iter().any(|g| !g.is_finite()) {
                errors.push(FieldError::new("sweep_g", "values must be finite"));
            }
        }

        let figs = match opts.fig {
            None => FigKind::ALL.to_vec(),
            Some(list) if list.is_empty() => FigKind::ALL.to_vec(),
            Some(list) => {
                let mut out = Vec::new();
                for f in list {
                    let add: &[FigKind] = match f {
                        FigArg::Two => &[FigKind::Fig2],
                        FigArg::Three => &[FigKind::Fig3],
                        FigArg::Four => &[FigKind::Fig4],
                        FigArg::Five => &[FigKind::Fig5],
                        FigArg::All => &FigKind::ALL,
                    };
                    for k in add {
                        if !out.contains(k) {
                            out.push(*k);
                        }
                    }
                }
                out
            }
        };

        if !errors.is_empty() {
            return Err(CliError::ConfigInvalid(errors));
        }
        Ok(Self {
            model,
            t_max,
            n_samples,
            sweep_n,
            sweep_g,
            oracle: opts.oracle.unwrap_or(OracleMode::Auto),
            out_dir: opts.out_dir.unwrap_or_else(|| PathBuf::from("./results")),
            emit: opts.emit.unwrap_or(Emit::All),
            figs,
        })
    }

    /// Parameter points in sweep order: ring size outer, coupling inner.
    pub fn points(&self) -> Vec<ModelParams> {
        let ns = self.sweep_n.clone().unwrap_or_else(|| vec![self.model.n_spins]);
        let gs = self.sweep_g.clone().unwrap_or_else(|| vec![self.model.g0]);
        let mut out = Vec::with_capacity(ns.len() * gs.len());
        for &n in &ns {
            for &g in &gs {
                out.push(self.model.clone().with_spins(n).with_coupling(g));
            }
        }
        out
    }

    pub fn times(&self) -> Vec<f64> {
        dephasing_core::time_grid(self.t_max, self.n_samples)
    }

    pub fn oracle_enabled(&self, n_spins: usize) -> bool {
        match self.oracle {
            OracleMode::On => true,
            OracleMode::Off => false,
            OracleMode::Auto => n_spins <= ORACLE_AUTO_MAX_SPINS,
        }
    }
}

fn model_error(e: CoreError) -> FieldError {
    match e {
        CoreError::InvalidParams { field, reason } => {
            let field = match field {
                "j_z" => "jz",
                "h_z" => "hz",
                "g0" | "g1" => "g",
                "initial_qubit" => "initial",
                other => other,
            };
            FieldError::new(field, reason)
        }
        other => FieldError::new("model", other.to_string()),
    }
}
