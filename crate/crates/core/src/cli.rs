//! Command-line front end. Exit codes: 0 success, 1 bound violation, 2 configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::harness::{
    emit_report, field_info, run_suite, ExperimentConfig, Format, Kind, SetSource, SweepGrid,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ffgeom", version, about = "Finite-field incidence, distance-set and character-sum experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check inequalities: incidence, sphere-ft, gauss, kloosterman, coverage, uniformity, sum-product
    Verify(Common),
    /// Build a construction and re-check its claim
    Construct(Common),
    /// Run an experiment over a grid of fields and dimensions
    Sweep(Common),
    /// Print facts about F_q
    FieldInfo(Common),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// JSON file with an ExperimentConfig; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    s: Option<u32>,
    /// Monic modulus coefficients, low degree first, comma separated
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u64>>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    r: Option<i64>,
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Experiment or construction name
    #[arg(long)]
    kind: Option<String>,
    /// Progression length
    #[arg(long)]
    n: Option<usize>,
    /// Subgroup index
    #[arg(long)]
    divisor: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// json, csv or text
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    cap: Option<u64>,
}

fn base_config(c: &Common, default_kind: Kind) -> Result<ExperimentConfig> {
    let mut cfg = match &c.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text)?
        }
        None => {
            let p = c.p.ok_or_else(|| Error::ConfigInvalid("--p or --config is required".into()))?;
            ExperimentConfig::new(p, 1, 2, default_kind)
        }
    };
    if let Some(v) = c.p {
        cfg.p = v;
    }
    if let Some(v) = c.s {
        cfg.s = v;
    }
    if c.modulus.is_some() {
        cfg.modulus = c.modulus.clone();
    }
    if let Some(v) = c.d {
        cfg.d = v;
    }
    if c.r.is_some() {
        cfg.r = c.r;
    }
    if c.size.is_some() {
        cfg.size = c.size;
    }
    if let Some(v) = c.seed {
        cfg.seed = v;
    }
    if let Some(v) = c.trials {
        cfg.trials = v;
    }
    if c.n.is_some() {
        cfg.n = c.n;
    }
    if c.divisor.is_some() {
        cfg.divisor = c.divisor;
    }
    if c.out.is_some() {
        cfg.out = c.out.clone();
    }
    if let Some(f) = &c.format {
        cfg.format = f.parse()?;
    }
    if let Some(v) = c.cap {
        cfg.cap = v;
    }
    Ok(cfg)
}

fn config_for(command: &Command) -> Result<(ExperimentConfig, &Common)> {
    Ok(match command {
        Command::Verify(c) => {
            let mut cfg = base_config(c, Kind::VerifyIncidence)?;
            if let Some(k) = &c.kind {
                cfg.kind = k.parse()?;
            }
            if matches!(cfg.kind, Kind::Construct(_) | Kind::Sweep) {
                return Err(Error::ConfigInvalid(format!("verify cannot run {}", cfg.kind)));
            }
            (cfg, c)
        }
        Command::Construct(c) => {
            let mut cfg = base_config(c, Kind::Sweep)?;
            if let Some(k) = &c.kind {
                let name = k.strip_prefix("construct:").unwrap_or(k);
                cfg.kind = Kind::Construct(name.parse()?);
            }
            if !matches!(cfg.kind, Kind::Construct(_)) {
                return Err(Error::ConfigInvalid("construct needs --kind <construction>".into()));
            }
            (cfg, c)
        }
        Command::Sweep(c) => {
            let mut cfg = base_config(c, Kind::Sweep)?;
            if cfg.grid.is_none() {
                let inner = match &c.kind {
                    Some(k) => k.parse()?,
                    None if cfg.kind != Kind::Sweep => cfg.kind,
                    None => Kind::VerifyIncidence,
                };
                cfg.grid = Some(SweepGrid::desk(inner));
            }
            cfg.kind = Kind::Sweep;
            if cfg.source != SetSource::Random && c.config.is_none() {
                return Err(Error::ConfigInvalid("sweep sources come from --config".into()));
            }
            (cfg, c)
        }
        Command::FieldInfo(c) => (base_config(c, Kind::VerifyGauss)?, c),
    })
}

fn write_output(cfg: &ExperimentConfig, bytes: &[u8], out: &mut dyn Write) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display()))),
        None => out.write_all(bytes).map_err(|e| Error::Malformed(e.to_string())),
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<i32> {
    let (cfg, _) = config_for(command)?;
    if let Command::FieldInfo(_) = command {
        let field: Field = cfg.field()?;
        let info = field_info(&field)?;
        let bytes = match cfg.format {
            Format::Text => format!(
                "F_{} = F_{}[x]/({:?})\nprimitive element: {}\n-1 is a square: {}\nGauss constant: {:?}\nunit circle: {} points\n",
                info.q, info.spec.p, info.spec.modulus, info.primitive_element, info.minus_one_is_square,
                info.gauss_constant, info.unit_circle_size
            )
            .into_bytes(),
            _ => {
                let mut v = serde_json::to_vec_pretty(&info).map_err(|e| Error::Malformed(e.to_string()))?;
                v.push(b'\n');
                v
            }
        };
        write_output(&cfg, &bytes, out)?;
        return Ok(EXIT_OK);
    }
    let report = run_suite(&cfg)?;
    write_output(&cfg, &emit_report(&report, cfg.format)?, out)?;
    Ok(report.exit_code())
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CONFIG
        }
    }
}
