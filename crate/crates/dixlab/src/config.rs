//! Flags, `--config` files and their resolution into a [`RunConfig`].

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "DIXLAB_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Trace,
    Zeta,
    Abel,
    Equivalence,
    Tensor,
    Fractal,
    WeylFuzz,
    ZooCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Trace => "trace",
            Command::Zeta => "zeta",
            Command::Abel => "abel",
            Command::Equivalence => "equivalence",
            Command::Tensor => "tensor",
            Command::Fractal => "fractal",
            Command::WeylFuzz => "weyl-fuzz",
            Command::ZooCheck => "zoo-check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Table => "txt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionArg {
    PartialSum,
    Abel,
    Zeta,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FractalOp {
    /// Geometric zeta Σ l_j^s.
    Zeta,
    /// Spectral zeta over the Dirichlet frequencies, factorized and direct.
    SpectralZeta,
    /// The largest `terms` lengths.
    Prefix,
    /// Abscissa, total length and closed form.
    Info,
}

/// Optional settings shared by the command line and `--config` files.
#[derive(Debug, Clone, Default, PartialEq, clap::Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Flags {
    /// Sequence spec, e.g. `harmonic`, `gk:k=1`, `tensor:harmonic*harmonic`.
    #[arg(long)]
    pub seq: Option<String>,
    /// Weight spec: `gk:k=<int>`, `psi:n=<int>` or `invlog`.
    #[arg(long)]
    pub weight: Option<String>,
    /// Diagonal modulation v for `equivalence`.
    #[arg(long)]
    pub v: Option<String>,
    /// Ideal index k (weight g_k) for `equivalence`.
    #[arg(long)]
    pub k: Option<u32>,
    /// Fractal string spec, e.g. `cantor`, `tensor:cantor*lacunary`.
    #[arg(long)]
    pub string: Option<String>,
    #[arg(long, value_enum)]
    pub op: Option<FractalOp>,
    /// Real part of s for `fractal`.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s_im: Option<f64>,
    #[arg(long)]
    pub m_min: Option<u32>,
    #[arg(long)]
    pub m_max: Option<u32>,
    /// Largest Abel grid exponent for `equivalence`.
    #[arg(long)]
    pub abel_m_max: Option<u32>,
    /// Largest zeta grid exponent (t = 2^m) for `equivalence`.
    #[arg(long)]
    pub t_m_max: Option<u32>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, value_enum)]
    pub criterion: Option<CriterionArg>,
    /// Number of enumerated terms for prefix-only sequences.
    #[arg(long)]
    pub terms: Option<u64>,
    /// Instances per order for `weyl-fuzz`.
    #[arg(long)]
    pub count: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Matrix orders for `weyl-fuzz`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub orders: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; defaults to $DIXLAB_OUT_DIR/<command>.<ext>, else stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Flags {
    /// Fields set in `over` win.
    pub fn overridden_by(self, over: Flags) -> Flags {
        Flags {
            seq: over.seq.or(self.seq),
            weight: over.weight.or(self.weight),
            v: over.v.or(self.v),
            k: over.k.or(self.k),
            string: over.string.or(self.string),
            op: over.op.or(self.op),
            s: over.s.or(self.s),
            s_im: over.s_im.or(self.s_im),
            m_min: over.m_min.or(self.m_min),
            m_max: over.m_max.or(self.m_max),
            abel_m_max: over.abel_m_max.or(self.abel_m_max),
            t_m_max: over.t_m_max.or(self.t_m_max),
            tolerance: over.tolerance.or(self.tolerance),
            criterion: over.criterion.or(self.criterion),
            terms: over.terms.or(self.terms),
            count: over.count.or(self.count),
            seed: over.seed.or(self.seed),
            orders: over.orders.or(self.orders),
            format: over.format.or(self.format),
            out: over.out.or(self.out),
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "dixlab", version, about = "Dixmier traces, zeta residues and fractal-string spectra")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
    /// TOML file of flag values; its entries override the command line.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn read_config_file(path: &Path) -> Result<Flags, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Every setting of one run, defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunConfig {
    pub command: Command,
    pub seq: String,
    pub weight: String,
    pub v: String,
    pub k: u32,
    pub string: String,
    pub op: FractalOp,
    pub s: f64,
    pub s_im: f64,
    pub m_min: u32,
    pub m_max: u32,
    pub abel_m_max: u32,
    pub t_m_max: u32,
    pub tolerance: f64,
    pub criterion: CriterionArg,
    pub terms: u64,
    pub count: u32,
    pub seed: u64,
    pub orders: Vec<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

const MAX_M: u32 = 26;

impl RunConfig {
    pub fn resolve(command: Command, f: Flags) -> Result<RunConfig, CliError> {
        let (m_min, m_max, tolerance) = match command {
            Command::Trace => (4, 24, 0.05),
            Command::Zeta => (6, 14, 0.05),
            Command::Abel => (2, 14, 0.05),
            Command::Equivalence => (4, 24, 0.05),
            Command::Tensor => (4, 22, 0.1),
            Command::Fractal => (4, 20, 1e-10),
            Command::WeylFuzz => (0, 0, 1e-9),
            Command::ZooCheck => (0, 0, 1e-2),
        };
        let default_seq = if command == Command::Tensor { "tensor:harmonic*harmonic" } else { "harmonic" };
        let default_weight = if command == Command::Tensor { "gk:k=1" } else { "gk:k=0" };
        let m_min = f.m_min.unwrap_or(m_min);
        let m_max = f.m_max.unwrap_or(m_max);
        let default_terms = match command {
            Command::Fractal => 16,
            Command::WeylFuzz | Command::ZooCheck => 0,
            _ => 1u64 << m_max.min(MAX_M),
        };
        let cfg = RunConfig {
            command,
            seq: f.seq.unwrap_or_else(|| default_seq.into()),
            weight: f.weight.unwrap_or_else(|| default_weight.into()),
            v: f.v.unwrap_or_else(|| "one".into()),
            k: f.k.unwrap_or(0),
            string: f.string.unwrap_or_else(|| "cantor".into()),
            op: f.op.unwrap_or(FractalOp::Zeta),
            s: f.s.unwrap_or(2.0),
            s_im: f.s_im.unwrap_or(0.0),
            m_min,
            m_max,
            abel_m_max: f.abel_m_max.unwrap_or(14),
            t_m_max: f.t_m_max.unwrap_or(14),
            tolerance: f.tolerance.unwrap_or(tolerance),
            criterion: f.criterion.unwrap_or(CriterionArg::All),
            terms: f.terms.unwrap_or(default_terms),
            count: f.count.unwrap_or(200),
            seed: f.seed.unwrap_or(0),
            orders: f.orders.unwrap_or_else(|| vec![4, 8, 16, 32]),
            format: f.format.unwrap_or(Format::Json),
            out: f.out,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return usage(format!("tolerance must be positive, got {}", self.tolerance));
        }
        let gridded = !matches!(self.command, Command::WeylFuzz | Command::ZooCheck | Command::Fractal);
        if gridded && (self.m_min > self.m_max || self.m_max > MAX_M) {
            return usage(format!("grid 2^{}..2^{} is empty or beyond 2^{MAX_M}", self.m_min, self.m_max));
        }
        if self.command == Command::Equivalence && (self.abel_m_max < 2 || self.t_m_max < 6) {
            return usage("equivalence needs abel-m-max ≥ 2 and t-m-max ≥ 6".into());
        }
        if self.command == Command::WeylFuzz {
            if self.count == 0 || self.orders.is_empty() {
                return usage("weyl-fuzz needs a positive count and at least one order".into());
            }
            if let Some(&o) = self.orders.iter().find(|&&o| o == 0 || o > dixlab_core::matrix::MAX_ORDER) {
                return usage(format!("order {o} outside 1..={}", dixlab_core::matrix::MAX_ORDER));
            }
        }
        if self.terms == 0 && !matches!(self.command, Command::WeylFuzz | Command::ZooCheck) {
            return usage("terms must be positive".into());
        }
        if !(self.s.is_finite() && self.s_im.is_finite()) {
            return usage("s must be finite".into());
        }
        Ok(())
    }

    /// Explicit `--out`, else the env directory, else stdout (`None`).
    pub fn output_path(&self, env_dir: Option<&Path>) -> Option<PathBuf> {
        self.out
            .clone()
            .or_else(|| env_dir.map(|d| d.join(format!("{}.{}", self.command.name(), self.format.extension()))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_per_command() {
        let t = RunConfig::resolve(Command::Trace, Flags::default()).unwrap();
        assert_eq!((t.m_min, t.m_max, t.seq.as_str(), t.weight.as_str()), (4, 24, "harmonic", "gk:k=0"));
        assert_eq!(t.terms, 1 << 24);
        let z = RunConfig::resolve(Command::Tensor, Flags::default()).unwrap();
        assert_eq!((z.seq.as_str(), z.m_max, z.terms), ("tensor:harmonic*harmonic", 22, 1 << 22));
        let f = RunConfig::resolve(Command::Fractal, Flags::default()).unwrap();
        assert_eq!((f.string.as_str(), f.op, f.s), ("cantor", FractalOp::Zeta, 2.0));
    }

    #[test]
    fn file_overrides_flags() {
        let cli = Flags { seq: Some("gk:k=1".into()), m_max: Some(20), ..Default::default() };
        let file: Flags = toml::from_str("m-max = 18\nweight = \"gk:k=1\"").unwrap();
        let merged = cli.overridden_by(file);
        assert_eq!(merged.seq.as_deref(), Some("gk:k=1"));
        assert_eq!(merged.m_max, Some(18));
        assert_eq!(merged.weight.as_deref(), Some("gk:k=1"));
        assert!(toml::from_str::<Flags>("bogus = 1").is_err());
    }

    #[test]
    fn rejects_bad_grids_and_tolerances() {
        let bad = |f: Flags| RunConfig::resolve(Command::Trace, f).is_err();
        assert!(bad(Flags { m_min: Some(10), m_max: Some(8), ..Default::default() }));
        assert!(bad(Flags { m_max: Some(27), ..Default::default() }));
        assert!(bad(Flags { tolerance: Some(0.0), ..Default::default() }));
        assert!(bad(Flags { tolerance: Some(-1.0), ..Default::default() }));
        let w = |o: Vec<usize>| Flags { orders: Some(o), ..Default::default() };
        assert!(RunConfig::resolve(Command::WeylFuzz, w(vec![65])).is_err());
        assert!(RunConfig::resolve(Command::WeylFuzz, w(vec![])).is_err());
        assert!(RunConfig::resolve(Command::WeylFuzz, w(vec![1, 64])).is_ok());
    }

    #[test]
    fn output_path_precedence() {
        let mut c = RunConfig::resolve(Command::Zeta, Flags::default()).unwrap();
        assert_eq!(c.output_path(None), None);
        assert_eq!(c.output_path(Some(Path::new("/tmp/o"))), Some(PathBuf::from("/tmp/o/zeta.json")));
        c.out = Some("x.json".into());
        assert_eq!(c.output_path(Some(Path::new("/tmp/o"))), Some(PathBuf::from("x.json")));
    }

    #[test]
    fn cli_parses_spec_examples() {
        let cli = Cli::try_parse_from(["dixlab", "trace", "--seq", "harmonic", "--weight", "gk:k=0", "--m-max", "24"])
            .unwrap();
        assert_eq!((cli.command, cli.flags.m_max), (Command::Trace, Some(24)));
        let cli = Cli::try_parse_from(["dixlab", "equivalence", "--v", "alternating", "--seq", "harmonic", "--k", "0"])
            .unwrap();
        assert_eq!(cli.flags.v.as_deref(), Some("alternating"));
        let cli = Cli::try_parse_from(["dixlab", "fractal", "--string", "cantor", "--op", "zeta", "--s", "2"]).unwrap();
        assert_eq!((cli.flags.op, cli.flags.s), (Some(FractalOp::Zeta), Some(2.0)));
        let cli = Cli::try_parse_from(["dixlab", "weyl-fuzz", "--orders", "4,8"]).unwrap();
        assert_eq!(cli.flags.orders, Some(vec![4, 8]));
        assert!(Cli::try_parse_from(["dixlab", "bogus"]).is_err());
    }
}
