//! Command-line front end.

mod commands;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::calogero::{CalogeroError, Model};
use crate::laxops::Budget;
use crate::polyring::Backend;
use crate::rootsys::{Couplings, Family, RepKind, RootSystem, RootSystemSpec};

pub use output::Format;

/// Exit code for a passing run.
pub const EXIT_OK: i32 = 0;
/// Exit code for a verification failure or an internal error.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for usage, domain and resource errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "calogero", version, about = "Exact operator solutions of quantum Calogero systems on root systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub system: SystemArgs,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Roots, orbits, degrees, representation sets and ground-state energy.
    Info,
    /// Energy levels and degeneracies up to --max-level.
    Spectrum,
    /// The eigenfunction for one set of quantum numbers.
    Eigen {
        /// Comma-separated quantum numbers, one per degree.
        #[arg(long)]
        state: String,
    },
    /// A sinusoidal coordinate.
    Eta {
        #[arg(long)]
        j: usize,
    },
    /// The Heisenberg solution of a sinusoidal coordinate on one eigenstate.
    Heisenberg {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        state: String,
    },
    /// Runs verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Corrupts the suite's input so that it must fail.
        #[arg(long)]
        inject_fault: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    #[arg(long = "type", global = true, value_name = "FAMILY")]
    pub family: Option<String>,
    #[arg(long, global = true)]
    pub rank: Option<usize>,
    /// Dihedral order for I2.
    #[arg(long, global = true)]
    pub m: Option<u32>,
    /// Use the planar Q(sqrt 3) realization of G2.
    #[arg(long, global = true)]
    pub planar: bool,
    #[arg(long, global = true, value_name = "K=V,...")]
    pub couplings: Option<String>,
    /// Couplings file with key=value lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Representation set for the sinusoidal coordinates.
    #[arg(long, global = true)]
    pub repset: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Exact)]
    pub backend: BackendArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Degree bound of the invariant test polynomials.
    #[arg(long, global = true, default_value_t = 4)]
    pub max_degree: u32,
    #[arg(long, global = true, default_value_t = 6)]
    pub max_level: u32,
}

/// Validated configuration shared by every command.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub spec: RootSystemSpec,
    pub couplings: Couplings,
    pub backend: Option<Backend>,
    pub repset: Option<RepKind>,
    pub budget: Budget,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub max_degree: u32,
    pub max_level: u32,
    /// Set when the exact request fell back to floating point.
    pub notice: Option<String>,
}

impl CliConfig {
    pub fn from_args(a: &SystemArgs) -> Result<CliConfig, CalogeroError> {
        let family: Family = a
            .family
            .as_deref()
            .ok_or_else(|| CalogeroError::Usage("--type is required".into()))?
            .parse()?;
        let spec = match family {
            Family::I2 => {
                let m = a.m.ok_or_else(|| CalogeroError::Usage("I2 requires --m".into()))?;
                if a.rank.is_some_and(|r| r != 2) {
                    return Err(CalogeroError::Usage("I2 has rank 2".into()));
                }
                RootSystemSpec::dihedral(m)
            }
            Family::F | Family::G => RootSystemSpec::new(family, a.rank.unwrap_or(if family == Family::F { 4 } else { 2 })),
            _ => RootSystemSpec::new(family, a.rank.ok_or_else(|| CalogeroError::Usage("--rank is required".into()))?),
        };
        let spec = if a.planar { spec.planar() } else { spec };
        spec.validate()?;
        let mut couplings = Couplings::uniform_int(1);
        if let Some(path) = &a.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CalogeroError::Usage(format!("cannot read {}: {e}", path.display())))?;
            couplings = couplings.merged(&Couplings::parse(&text)?);
        }
        if let Some(text) = &a.couplings {
            couplings = couplings.merged(&Couplings::parse(text)?);
        }
        let (backend, notice) = match a.backend {
            BackendArg::Float => (Some(Backend::Float), None),
            BackendArg::Exact if spec.natural_backend() == Backend::Float => (
                Some(Backend::Float),
                Some(format!("{} has no exact realization; using the float backend", spec.name())),
            ),
            BackendArg::Exact => (None, None),
        };
        let repset = a.repset.as_deref().map(str::parse::<RepKind>).transpose()?;
        Ok(CliConfig {
            spec,
            couplings,
            backend,
            repset,
            budget: Budget::from_env()?,
            format: a.format,
            out: a.out.clone(),
            seed: a.seed,
            max_degree: a.max_degree,
            max_level: a.max_level,
            notice,
        })
    }

    pub fn root_system(&self) -> Result<RootSystem, CalogeroError> {
        Ok(RootSystem::build(self.spec, &self.couplings, self.backend)?)
    }

    pub fn model(&self) -> Result<Model, CalogeroError> {
        let rs = self.root_system()?;
        match self.repset {
            Some(kind) => Model::with_repset(rs, kind, self.budget),
            None => Model::new(rs, self.budget),
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CalogeroError::Internal(_) => EXIT_FAIL,
                _ => EXIT_USAGE,
            }
        }
    }
}
