//! Command-line front end.
//!
//! Exit codes: 0 success, 1 computation error, 2 usage or input error.

mod report;
pub mod units;

pub use report::{constitutive_from_reduce_json, SCHEMA_VERSION};

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::beam::{Boundary, Circuit};
use crate::error::Error;
use crate::materials::{load_material_db, MaterialDb};
use crate::section::{build_section, CapacitanceCondition, ClosureModel, LayupSpec, Section};
use units::Voltages;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct CommonArgs {
    /// Layup file (JSON, lengths in mm)
    #[arg(long, value_name = "PATH")]
    pub layup: PathBuf,
    /// Extra material database (JSON); built-ins PZT-5H and Al-6061 are always loaded
    #[arg(long, value_name = "PATH")]
    pub materials: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub output: OutputFormat,
}

fn parse_model(s: &str) -> Result<ClosureModel, String> {
    s.parse()
}

fn parse_boundary(s: &str) -> Result<Boundary, String> {
    s.parse()
}

fn parse_circuit(s: &str) -> Result<Circuit, String> {
    s.parse()
}

fn parse_condition(s: &str) -> Result<CapacitanceCondition, String> {
    match s {
        "blocked" => Ok(CapacitanceCondition::Blocked),
        "free" => Ok(CapacitanceCondition::Free),
        _ => Err(format!(
            "unknown condition '{s}' (expected blocked or free)"
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Coupled constitutive matrix of the section under one closure
    Reduce {
        #[command(flatten)]
        common: CommonArgs,
        /// Transverse closure: nd, ns or nsr
        #[arg(long, default_value = "nsr", value_parser = parse_model)]
        model: ClosureModel,
    },
    /// Capacitance, stiffness and coupling under all three closures
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        /// Measured capacitance per unit line, e.g. 2.86nF/mm
        #[arg(long, value_parser = units::parse_capacitance_per_length)]
        reference_capacitance: Option<f64>,
    },
    /// Layerwise T11/T22 profile for a generalized state
    Stress {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "nsr", value_parser = parse_model)]
        model: ClosureModel,
        /// Axial mid-plane strain (bare, or with ue for microstrain)
        #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = units::parse_strain)]
        eps: f64,
        /// Curvature, 1/m (or 1/mm)
        #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = units::parse_curvature)]
        kappa: f64,
        /// Terminal voltages, comma separated; one value is applied to every terminal
        #[arg(long, allow_hyphen_values = true, value_parser = units::parse_voltages)]
        voltage: Option<Voltages>,
        /// Sample points per layer
        #[arg(long, default_value_t = crate::section::DEFAULT_SAMPLES_PER_LAYER)]
        samples: usize,
    },
    /// Capacitance per unit length of one terminal
    Capacitance {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "nsr", value_parser = parse_model)]
        model: ClosureModel,
        /// blocked (constant strains) or free (N = M = 0)
        #[arg(long, default_value = "blocked", value_parser = parse_condition)]
        condition: CapacitanceCondition,
        #[arg(long, default_value_t = 0)]
        terminal: usize,
    },
    /// Free actuation, cantilever tip deflection and short-circuit sensing
    BeamStatic {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "nsr", value_parser = parse_model)]
        model: ClosureModel,
        /// Beam length (bare numbers are mm)
        #[arg(long, value_parser = units::parse_length)]
        length: f64,
        /// Terminal voltages, comma separated
        #[arg(long, allow_hyphen_values = true, value_parser = units::parse_voltages)]
        voltage: Voltages,
        /// Imposed strain for the sensing report
        #[arg(long, allow_hyphen_values = true, value_parser = units::parse_strain)]
        eps: Option<f64>,
        /// Imposed curvature for the sensing report
        #[arg(long, allow_hyphen_values = true, value_parser = units::parse_curvature)]
        kappa: Option<f64>,
    },
    /// Bending natural frequencies and modal coupling factors
    BeamModal {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "nsr", value_parser = parse_model)]
        model: ClosureModel,
        /// Beam length (bare numbers are mm)
        #[arg(long, value_parser = units::parse_length)]
        length: f64,
        /// cantilever or simply-supported
        #[arg(long, default_value = "cantilever", value_parser = parse_boundary)]
        bc: Boundary,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        modes: u32,
        /// short or open
        #[arg(long, default_value = "short", value_parser = parse_circuit)]
        circuit: Circuit,
    },
}

impl Command {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Reduce { common, .. }
            | Command::Compare { common, .. }
            | Command::Stress { common, .. }
            | Command::Capacitance { common, .. }
            | Command::BeamStatic { common, .. }
            | Command::BeamModal { common, .. } => common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Reduce { .. } => "reduce",
            Command::Compare { .. } => "compare",
            Command::Stress { .. } => "stress",
            Command::Capacitance { .. } => "capacitance",
            Command::BeamStatic { .. } => "beam-static",
            Command::BeamModal { .. } => "beam-modal",
        }
    }
}

/// Laminated piezoelectric beam models: cross-section reduction under the
/// ND, NS and NSR transverse closures.
#[derive(Debug, Clone, PartialEq, Parser)]
#[command(name = "piezolam", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, thiserror::Error)]
pub enum UsageError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("missing file: {0}")]
    MissingFile(PathBuf),
}

impl UsageError {
    pub const EXIT_CODE: i32 = 2;
}

pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = RunConfig::try_parse_from(argv)?;
    let common = config.command.common();
    check_file(&common.layup)?;
    if let Some(m) = &common.materials {
        check_file(m)?;
    }
    Ok(config)
}

fn check_file(path: &Path) -> Result<(), UsageError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(UsageError::MissingFile(path.to_path_buf()))
    }
}

/// Exit code for an error raised while running a command.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::MalformedDatabase(_)
        | Error::InvalidMaterial { .. }
        | Error::DuplicateMaterial(_)
        | Error::UnknownMaterial(_)
        | Error::MalformedLayup(_)
        | Error::NoLayers
        | Error::InvalidLayer { .. }
        | Error::InvalidSection(_)
        | Error::NoSuchTerminal { .. }
        | Error::VoltageCount { .. }
        | Error::InvalidBeam(_)
        | Error::NoSuchMode { .. } => 2,
        _ => 1,
    }
}

/// What a command produced: the report for stdout and notes for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: String,
    pub warnings: Vec<String>,
}

fn load_inputs(common: &CommonArgs) -> Result<(MaterialDb, Section), Error> {
    let db = match &common.materials {
        Some(path) => load_material_db(path)?,
        None => MaterialDb::builtin(),
    };
    let spec = LayupSpec::from_path(&common.layup)?;
    let section = build_section(&spec, &db)?;
    Ok((db, section))
}

fn expand_voltages(v: Option<&Voltages>, terminals: usize) -> Result<Vec<f64>, Error> {
    match v {
        None => Ok(vec![0.0; terminals]),
        Some(Voltages(list)) if list.len() == 1 => Ok(vec![list[0]; terminals]),
        Some(Voltages(list)) if list.len() == terminals => Ok(list.clone()),
        Some(Voltages(list)) => Err(Error::VoltageCount {
            expected: terminals,
            got: list.len(),
        }),
    }
}

pub fn run(config: &RunConfig) -> Result<RunOutput, Error> {
    let common = config.command.common();
    let (db, section) = load_inputs(common)?;
    let format = common.output;
    let report = match &config.command {
        Command::Reduce { model, .. } => report::reduce(&section, *model, format)?,
        Command::Compare {
            reference_capacitance,
            ..
        } => report::compare(&section, *reference_capacitance, format)?,
        Command::Stress {
            model,
            eps,
            kappa,
            voltage,
            samples,
            ..
        } => {
            let voltages = expand_voltages(voltage.as_ref(), section.terminal_count())?;
            let state = crate::section::GeneralizedState::new(*eps, *kappa, voltages);
            report::stress(&section, *model, &state, *samples, format)?
        }
        Command::Capacitance {
            model,
            condition,
            terminal,
            ..
        } => report::capacitance(&section, *model, *condition, *terminal, format)?,
        Command::BeamStatic {
            model,
            length,
            voltage,
            eps,
            kappa,
            ..
        } => {
            let voltages = expand_voltages(Some(voltage), section.terminal_count())?;
            let sensing = match (eps, kappa) {
                (None, None) => None,
                (e, k) => Some((e.unwrap_or(0.0), k.unwrap_or(0.0))),
            };
            report::beam_static(&section, *model, *length, &voltages, sensing, format)?
        }
        Command::BeamModal {
            model,
            length,
            bc,
            modes,
            circuit,
            ..
        } => report::beam_modal(
            &section,
            *model,
            *length,
            *bc,
            *modes as usize,
            *circuit,
            format,
        )?,
    };
    Ok(RunOutput {
        report,
        warnings: db.warnings,
    })
}
