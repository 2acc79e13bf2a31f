use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Seed for random sample points when --seed is not given.
pub const DEFAULT_SEED: u64 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "symdunkl",
    version,
    about = "Dunkl intertwining operator for S_d, h-harmonics and Cesàro summability experiments"
)]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check D_i V_κ[x_ℓ^n] = V_κ[∂_i x_ℓ^n] exactly.
    Verify(VerifyArgs),
    /// Orthonormal basis of the degree-n h-harmonics.
    Hbasis(HbasisArgs),
    /// Reproducing and Cesàro kernels at a coordinate vector.
    Kernel(KernelArgs),
    /// Generalized Bessel function by its available routes.
    Bessel(BesselArgs),
    /// Lebesgue constants I_n over an (n, δ) grid.
    Lebesgue(LebesgueArgs),
    /// Fitted constants of the pointwise bounds under n-doubling.
    Bounds(BoundsArgs),
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Verify(a) => &a.common,
            Command::Hbasis(a) => &a.common,
            Command::Kernel(a) => &a.common,
            Command::Bessel(a) => &a.common,
            Command::Lebesgue(a) => &a.common,
            Command::Bounds(a) => &a.common,
        }
    }
}

pub const SUBCOMMANDS: [&str; 6] = ["verify", "hbasis", "kernel", "bessel", "lebesgue", "bounds"];

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// key=value file with defaults for any flag of the subcommand.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Output file; the format follows the extension unless --format is given.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (default: SYMDUNKL_WORKERS or all cores). Results do not depend on it.
    #[arg(long)]
    #[serde(skip)]
    pub workers: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub d: usize,
    /// κ as "p/q" or a decimal.
    #[arg(long)]
    pub kappa: String,
    #[arg(long, default_value_t = 8)]
    pub max_degree: u32,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct HbasisArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub kappa: String,
    #[arg(long)]
    pub n: usize,
    /// Gauss nodes per direction of the sphere rule (default: exact for integer κ).
    #[arg(long)]
    pub sphere_order: Option<usize>,
    /// Largest accepted Gram residual.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct KernelArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub kappa: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    /// Point x as a comma list; it is scaled to the unit sphere.
    #[arg(long, allow_hyphen_values = true)]
    pub x: F64List,
    /// Also evaluate the Cesàro kernel K_n^δ(x, e_ℓ).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Also evaluate Σ Y_i(x) Y_i(e_ℓ) from the orthonormal basis and compare.
    #[arg(long)]
    pub basis: bool,
    #[arg(long)]
    pub simplex_order: Option<usize>,
    /// Largest accepted deviation between the two routes.
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BesselPath {
    Direct,
    Closed,
    Recursive,
    All,
}

#[derive(Args, Debug, Serialize)]
pub struct BesselArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub kappa: String,
    /// y as a comma list; K(x, iy) is evaluated.
    #[arg(long, allow_hyphen_values = true)]
    pub y: F64List,
    /// x for d = 2 (default e_1); for d ≥ 3 the routes are at x = e_1.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<F64List>,
    #[arg(long, value_enum, default_value_t = BesselPath::All)]
    pub path: BesselPath,
    #[arg(long, default_value_t = 40)]
    pub simplex_order: usize,
    #[arg(long, default_value_t = 40)]
    pub recursion_order: usize,
    /// Largest accepted deviation between routes.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct LebesgueArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub kappa: String,
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    /// δ values as a comma list or an inclusive range start:stop:step.
    #[arg(long)]
    pub delta: F64List,
    #[arg(long, default_value_t = 200)]
    pub n_max: usize,
    /// Gauss nodes per polar direction (default 6·n_max + 24).
    #[arg(long)]
    pub quad_order: Option<usize>,
    /// Angles on the innermost circle (default 2·(n_max + 24)).
    #[arg(long)]
    pub azimuth_order: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Estimate,
    Kernel,
    Knd,
    Szego,
}

#[derive(Args, Debug, Serialize)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub check: Check,
    /// Dimension for estimate/kernel.
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, default_value = "1")]
    pub kappa: String,
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    /// Jacobi α (knd, szego) or the exponent α of the estimate.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Cesàro order for kernel (default 1.6) and knd (default α+β+2).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Degrees for estimate/kernel as a comma list.
    #[arg(long)]
    pub n: Option<UsizeList>,
    /// Largest degree for knd/szego.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Angle grid size for knd/szego.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Random unit vectors x for estimate/kernel.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct F64List(pub Vec<f64>);

impl FromStr for F64List {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() == 3 {
            let (a, b, h) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if !(h > 0.0) || b < a {
                return Err(format!("range {s}: need start <= stop and step > 0"));
            }
            let steps = ((b - a) / h + 1e-9).floor() as usize;
            // Round to 12 decimals so 0.1-type steps print as typed.
            let v = (0..=steps)
                .map(|k| ((a + k as f64 * h) * 1e12).round() / 1e12)
                .collect();
            return Ok(F64List(v));
        }
        if parts.len() != 1 {
            return Err(format!("{s}: expected a comma list or start:stop:step"));
        }
        let v = s.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(format!("{s}: values must be finite"));
        }
        Ok(F64List(v))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct UsizeList(pub Vec<usize>);

impl FromStr for UsizeList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("not a non-negative integer: {t:?}"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(UsizeList)
    }
}

/// Reads a key=value config file into flags. Blank lines and lines starting
/// with '#' are skipped; keys may use '_' or '-'; "true" turns a switch on and
/// "false" leaves it off.
pub fn config_flags(text: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
        let key = k.trim().replace('_', "-");
        let val = v.trim();
        if key.is_empty() || key == "config" {
            return Err(format!("config line {}: bad key {:?}", i + 1, k.trim()));
        }
        match val {
            "true" => out.push(format!("--{key}")),
            "false" => {}
            _ => out.push(format!("--{key}={val}")),
        }
    }
    Ok(out)
}

/// Location of the --config value in argv, if any.
pub fn find_config(argv: &[String]) -> Option<(usize, PathBuf)> {
    argv.iter().enumerate().find_map(|(i, a)| {
        if let Some(p) = a.strip_prefix("--config=") {
            Some((i, PathBuf::from(p)))
        } else if a == "--config" {
            argv.get(i + 1).map(|p| (i, PathBuf::from(p)))
        } else {
            None
        }
    })
}

/// argv with the config flags placed right after the subcommand, so flags on
/// the command line override them.
pub fn with_config(argv: &[String], flags: Vec<String>) -> Vec<String> {
    let pos = argv.iter().position(|a| SUBCOMMANDS.contains(&a.as_str()));
    match pos {
        Some(p) => {
            let mut v = argv[..=p].to_vec();
            v.extend(flags);
            v.extend_from_slice(&argv[p + 1..]);
            v
        }
        None => argv.to_vec(),
    }
}
