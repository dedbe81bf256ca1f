//! Command-line front end. Every command is a composition of library calls;
//! this module only gathers inputs and formats their results.

pub mod config;
mod report;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::cones::{self, Cell, Lattice, LatticeMode};
use crate::kahler::{NewtonParams, Potential, SampleSpec};
use crate::linalg::{QVec, VecDisplay};
use crate::possys::Context;
use crate::quantize::{self, QuantizeError};
use crate::realform::RealForm;
use crate::rootdata::{build_root_system, RootSystem};

pub use config::{ConfigError, JobConfig, PotentialSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Roots with parities and the invariant form.
    Roots,
    /// Positive system, simple roots, compact simple roots and ρ.
    Rho,
    /// Inequalities of C̃ and C, with both admissibility diagnostics.
    Cone,
    /// Cells, closures, dimensions and extreme rays.
    Cells,
    /// Pseudo-Kähler classification of the cell potential.
    Classify,
    /// Spectrum of the selected cell.
    Spectrum,
    /// Gelfand model over all cells, with the exactly-once check.
    Model,
    /// Symplectic reduction at λ̂.
    Reduce,
    /// Multiplicity check at λ̂ between reduction and spectrum.
    Qr,
    /// Unitarizability inequalities.
    Unitary,
    /// SVG picture of a 2-dimensional slice.
    Atlas,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Roots => "roots",
            Command::Rho => "rho",
            Command::Cone => "cone",
            Command::Cells => "cells",
            Command::Classify => "classify",
            Command::Spectrum => "spectrum",
            Command::Model => "model",
            Command::Reduce => "reduce",
            Command::Qr => "qr",
            Command::Unitary => "unitary",
            Command::Atlas => "atlas",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "superquant", version, about = "Cones, cells, moment maps and spectra for real Lie superalgebras")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Job configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Box radius N for lattice enumeration (overrides [job] box).
    #[arg(long = "box")]
    pub box_n: Option<u32>,
    /// Newton residual tolerance (overrides [solver] tol).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Directory for report files (overrides [output] dir).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Atlas slice plane `v1;v2;origin` (overrides [atlas] slice).
    #[arg(long)]
    pub slice: Option<String>,
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub box_n: Option<u32>,
    pub tol: Option<f64>,
    pub slice: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    /// Bad input: exit code 2.
    #[error("{0}")]
    Config(String),
    /// The computation itself failed: exit code 1.
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn config_at(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::from(ConfigError { line, message: msg.to_string() })
}

/// The report printed on stdout, plus files written under the output
/// directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifacts {
    pub report: String,
    pub files: Vec<(String, Vec<u8>)>,
}

/// Resolved inputs shared by the commands.
pub struct Job<'a> {
    pub cfg: &'a JobConfig,
    pub box_n: u32,
    pub newton: NewtonParams,
    pub sampling: SampleSpec,
    pub lattice: Lattice,
    pub slice: Option<(String, usize)>,
}

impl<'a> Job<'a> {
    pub fn new(cfg: &'a JobConfig, ovr: &Overrides) -> Result<Self, CliError> {
        let tol = ovr.tol.unwrap_or(cfg.tol);
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Config(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self {
            cfg,
            box_n: ovr.box_n.unwrap_or(cfg.box_n),
            newton: NewtonParams { tol, max_iter: cfg.max_iter, divergence_norm: cfg.divergence_norm },
            sampling: SampleSpec { radius: cfg.sample_radius, per_axis: cfg.sample_points },
            lattice: Lattice { scale: cfg.lattice_scale, mode: LatticeMode::Slice },
            slice: ovr.slice.clone().map(|s| (s, 0)).or_else(|| cfg.slice.clone()),
        })
    }

    pub fn root_system(&self) -> Result<RootSystem, CliError> {
        build_root_system(&self.cfg.algebra).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn context(&self) -> Result<Context, CliError> {
        let rs = self.root_system()?;
        let Some((tag, tline)) = &self.cfg.realform else {
            return Err(config_at(0, "missing `tag` in [realform]"));
        };
        let rf = RealForm::parse(&rs.spec, tag).map_err(|e| config_at(*tline, e))?;
        let Some((f, fline)) = &self.cfg.functional else {
            return Err(config_at(0, "missing `functional` in [positive]"));
        };
        Context::new(rs, rf, f).map_err(|e| config_at(*fline, e))
    }

    pub fn cell(&self, ctx: &Context) -> Result<Cell, CliError> {
        let Some((idx, line)) = &self.cfg.cell else {
            return Ok(cones::cell_for_mask(ctx, 0));
        };
        let mut mask = 0u64;
        for &i in idx {
            let simple = ctx.ps.simples.get(i - 1).ok_or_else(|| {
                config_at(*line, format!("there are only {} simple roots", ctx.ps.simples.len()))
            })?;
            let pos = ctx.ps.pi_c.iter().position(|r| r == simple).ok_or_else(|| {
                config_at(*line, format!("simple root a{i} = {} is not compact", ctx.rs.label_weight(&simple.coords)))
            })?;
            mask |= 1 << pos;
        }
        Ok(cones::cell_for_mask(ctx, mask))
    }

    pub fn potential(&self, cell: &Cell) -> Result<Potential, CliError> {
        match &self.cfg.potential {
            PotentialSpec::Model { coefficients } => {
                let m = quantize::model_potential(cell, coefficients.as_deref()).map_err(domain)?;
                if let Some(c) = coefficients {
                    if c.len() != m.rays.len() {
                        return Err(CliError::Config(format!(
                            "config: {} coefficients given for {} extreme rays",
                            c.len(),
                            m.rays.len()
                        )));
                    }
                }
                Ok(m.potential)
            }
            PotentialSpec::Custom { terms, quad } => {
                let mut ts = Vec::new();
                for (c, w, line) in terms {
                    if w.len() != cell.region.dim() {
                        return Err(config_at(*line, format!("weight needs {} coordinates", cell.region.dim())));
                    }
                    let y = cell.to_basis(w).ok_or_else(|| config_at(*line, "weight does not lie in the cell subspace"))?;
                    ts.push((*c, y));
                }
                Potential::new(cell.dim(), ts, quad.clone()).map_err(|e| CliError::Config(format!("config: {e}")))
            }
        }
    }

    pub fn lambda_hat(&self) -> Result<QVec, CliError> {
        let Some((v, line)) = &self.cfg.lambda_hat else {
            return Err(config_at(0, "missing `lambda_hat` in [job]"));
        };
        if !self.lattice.contains(v) {
            return Err(config_at(*line, format!("λ̂ not in the integral lattice: {}", VecDisplay(v))));
        }
        Ok(v.clone())
    }
}

fn quantize_err(e: QuantizeError) -> CliError {
    match e {
        QuantizeError::NotIntegral(v) => CliError::Config(format!("λ̂ not in the integral lattice: {v}")),
        QuantizeError::OutsideBox { .. } | QuantizeError::DimensionMismatch { .. } => CliError::Config(e.to_string()),
        QuantizeError::Cone(cones::ConeError::DimensionMismatch { .. }) => CliError::Config(e.to_string()),
        other => domain(other),
    }
}

/// Runs one command on a parsed configuration.
pub fn execute(command: Command, cfg: &JobConfig, ovr: &Overrides) -> Result<Artifacts, CliError> {
    let job = Job::new(cfg, ovr)?;
    let mut files = Vec::new();
    let report = match command {
        Command::Roots => report::roots(&job.root_system()?),
        Command::Rho => report::rho(&job.context()?),
        Command::Cone => report::cone(&job.context()?),
        Command::Cells => report::cells(&job.context()?),
        Command::Classify => {
            let ctx = job.context()?;
            let cell = job.cell(&ctx)?;
            let p = job.potential(&cell)?;
            let walls = cones::regular_walls(&ctx, &cell);
            report::classify(&cell, &crate::kahler::classify_form(&p, &walls, &job.sampling))
        }
        Command::Spectrum => {
            let ctx = job.context()?;
            let cell = job.cell(&ctx)?;
            let p = job.potential(&cell)?;
            quantize::spectrum_in(&ctx, &cell, &p, job.box_n, &job.lattice, &job.newton).map_err(quantize_err)?.to_tsv()
        }
        Command::Model => {
            let ctx = job.context()?;
            let model = quantize::gelfand_model_in(&ctx, job.box_n, &job.lattice, &job.newton).map_err(quantize_err)?;
            let check = quantize::verify_exactly_once(&ctx, &model);
            report::model(&model, &check)
        }
        Command::Reduce => {
            let ctx = job.context()?;
            let cell = job.cell(&ctx)?;
            let p = job.potential(&cell)?;
            let lam = job.lambda_hat()?;
            quantize::reduce(&ctx, &cell, &p, &lam, &job.newton).map_err(quantize_err)?.to_tsv()
        }
        Command::Qr => {
            let ctx = job.context()?;
            let cell = job.cell(&ctx)?;
            let p = job.potential(&cell)?;
            let lam = job.lambda_hat()?;
            let spec = quantize::spectrum_in(&ctx, &cell, &p, job.box_n, &job.lattice, &job.newton).map_err(quantize_err)?;
            quantize::check_qr_with(&ctx, &cell, &p, &lam, &spec, &job.newton).map_err(quantize_err)?.to_tsv()
        }
        Command::Unitary => report::unitary(cfg)?,
        Command::Atlas => {
            let ctx = job.context()?;
            let cell = job.cell(&ctx)?;
            let p = job.potential(&cell)?;
            let plane = match &job.slice {
                Some((s, line)) => config::parse_slice(s).map_err(|m| config_at(*line, m))?,
                None => svg::default_plane(&ctx.rs)
                    .ok_or_else(|| CliError::Config("config: atlas needs a slice `v1;v2;origin` in rank > 2".into()))?,
            };
            if plane.iter().any(|v| v.len() != ctx.rs.ambient_dim) {
                return Err(CliError::Config(format!("slice vectors need {} coordinates", ctx.rs.ambient_dim)));
            }
            let atlas = svg::atlas(&ctx, &cell, &p, &plane, job.box_n, &job.newton);
            files.push(("atlas.svg".to_string(), atlas.svg.into_bytes()));
            atlas.summary
        }
    };
    files.insert(0, (format!("{}.tsv", command.name()), report.clone().into_bytes()));
    Ok(Artifacts { report, files })
}

/// Entry point behind the binary; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot read {}: {e}", args.config.display());
            return 2;
        }
    };
    let result = JobConfig::parse(&text).map_err(CliError::from).and_then(|cfg| {
        let ovr = Overrides { box_n: args.box_n, tol: args.tol, slice: args.slice.clone() };
        let out_dir = args.out.clone().or_else(|| cfg.out_dir.clone().map(PathBuf::from));
        execute(args.command, &cfg, &ovr).map(|a| (a, out_dir))
    });
    match result {
        Ok((artifacts, out_dir)) => {
            let _ = stdout.write_all(artifacts.report.as_bytes());
            if let Some(dir) = out_dir {
                if let Err(e) = write_files(&dir, &artifacts.files) {
                    let _ = writeln!(stderr, "error: {e}");
                    return 1;
                }
            } else if args.command == Command::Atlas {
                let _ = writeln!(stderr, "note: atlas.svg not written; pass --out DIR");
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn write_files(dir: &std::path::Path, files: &[(String, Vec<u8>)]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, bytes) in files {
        std::fs::write(dir.join(name), bytes)?;
    }
    Ok(())
}
