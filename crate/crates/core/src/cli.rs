//! The `crnf` batch front end.
//!
//! Exit codes: 0 on success, 2 on domain errors (degenerate Δ, singular kernel system),
//! 1 on I/O, parse and usage errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::error::{CrnfError, Result};
use crate::io::{self, ReportDocument};
use crate::moser::{extended_moser, moser_invariants, push_forward, FormalMap, Manifold};
use crate::normalform::{full_normalize, verify_normal_form, Status};
use crate::random::{random_manifold, Profile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Invariant s, leading pure term Δ and its nondegeneracy.
    Invariants,
    /// Partial normal form with map and certificate.
    Moser,
    /// Full normalization.
    Normalize,
    /// Residuals of every normal form condition on the input as given.
    Verify,
    /// Push the input forward by the map given with --map.
    Apply,
    /// Seeded random manifold document.
    Random,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "crnf", version, about = "Exact formal normal forms at a CR singularity")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Manifold document.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Truncate the input to this degree (random: the document degree).
    #[arg(long)]
    pub degree: Option<u32>,
    /// normalize: stop after the partial normal form.
    #[arg(long)]
    pub moser_only: bool,
    /// normalize: recompute the image of the input under the map and check it.
    #[arg(long)]
    pub verify_after: bool,
    /// Also write the map as a standalone document to <output>.map.json.
    #[arg(long)]
    pub emit_map: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// apply: map document.
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// random: number of variables N.
    #[arg(long, default_value_t = 2)]
    pub n_vars: usize,
    /// random: degree of the leading pure term.
    #[arg(long, default_value_t = 3)]
    pub s: u32,
    /// random: pure-only, mixed or generic.
    #[arg(long, default_value_t = Profile::Generic)]
    pub profile: Profile,
}

pub struct Outcome {
    pub code: i32,
    /// One-line human summary.
    pub summary: String,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CrnfError::Io(format!("{}: {e}", path.display())))
}

/// Write-then-rename so a failed run never leaves a partial file.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let io_err = |e: std::io::Error| CrnfError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(text.as_bytes()).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.output {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_manifold(cfg: &RunConfig) -> Result<Manifold> {
    let path = cfg.input.as_ref().ok_or_else(|| CrnfError::InvalidInput("--input is required".into()))?;
    let m = io::parse_manifold_json(&read(path)?)?;
    match cfg.degree {
        None => Ok(m),
        Some(k) if (3..=m.max_degree()).contains(&k) => Ok(m.truncated(k)),
        Some(k) => Err(CrnfError::InvalidInput(format!(
            "--degree {k} must lie between 3 and the document degree {}",
            m.max_degree()
        ))),
    }
}

fn empty_report(status: &str) -> ReportDocument {
    ReportDocument {
        status: status.into(),
        invariants: None,
        map: None,
        manifold: None,
        residuals: Vec::new(),
        solver_log: Vec::new(),
    }
}

fn map_path(cfg: &RunConfig) -> Result<PathBuf> {
    let out = cfg.output.as_ref().ok_or_else(|| CrnfError::InvalidInput("--emit-map needs --output".into()))?;
    let mut s = out.as_os_str().to_owned();
    s.push(".map.json");
    Ok(PathBuf::from(s))
}

fn finish(cfg: &RunConfig, report: ReportDocument) -> Result<String> {
    if cfg.emit_map {
        if let Some(map) = &report.map {
            write_atomic(&map_path(cfg)?, &io::to_json(map))?;
        }
    }
    let summary = format!(
        "{:?}: status={} residuals={} steps={}",
        cfg.command,
        report.status,
        report.residuals.len(),
        report.solver_log.len()
    )
    .to_lowercase();
    emit(cfg, &io::to_json(&report))?;
    Ok(summary)
}

/// A failed run; domain failures still carry a report describing them.
#[derive(Debug)]
pub struct Failure {
    pub error: CrnfError,
    pub report: Option<ReportDocument>,
}

impl From<CrnfError> for Failure {
    fn from(error: CrnfError) -> Self {
        Failure { error, report: None }
    }
}

/// Report of the invariants, moser, normalize or verify command on a manifold.
pub fn manifold_report(cmd: Command, m: &Manifold, verify_after: bool) -> std::result::Result<ReportDocument, Failure> {
    match cmd {
        Command::Invariants => {
            let inv = moser_invariants(&extended_moser(m).manifold);
            let mut r = empty_report("ok");
            r.invariants = Some(io::invariants_doc(&inv));
            Ok(r)
        }
        Command::Moser => {
            let res = extended_moser(m);
            let inv = moser_invariants(&res.manifold);
            let mut r = empty_report(Status::MoserOnly.name());
            r.invariants = Some(io::invariants_doc(&inv));
            r.map = Some(io::map_document(&res.map));
            r.manifold = Some(io::manifold_document(&res.manifold));
            r.residuals = io::certificate_docs(&res.certificate);
            Ok(r)
        }
        Command::Normalize => {
            let nf = full_normalize(m).map_err(|error| {
                let report = error.is_domain().then(|| {
                    let mut r = io::error_report(&error);
                    if let Some(inv) = r.invariants.as_mut() {
                        let full = io::invariants_doc(&moser_invariants(&extended_moser(m).manifold));
                        inv.s = full.s;
                        inv.delta = full.delta;
                        inv.delta_partials = full.delta_partials;
                    }
                    r
                });
                Failure { error, report }
            })?;
            let mut report = io::normal_form_report(&nf);
            if verify_after {
                let image = push_forward(m, &nf.map);
                let residuals = verify_normal_form(&image, &nf.invariants);
                report.residuals = io::residual_docs(&residuals);
                if image != nf.normalized {
                    report.status = "verify_failed".into();
                } else if nf.status == Status::Normalized && !residuals.all_zero() {
                    report.status = Status::ResidualsNonzero.name().into();
                }
            }
            Ok(report)
        }
        Command::Verify => {
            let inv = moser_invariants(m);
            let residuals = verify_normal_form(m, &inv);
            let mut r = empty_report(if residuals.all_zero() { "clean" } else { "residuals_nonzero" });
            r.invariants = Some(io::invariants_doc(&inv));
            r.residuals = io::residual_docs(&residuals);
            Ok(r)
        }
        Command::Apply | Command::Random => {
            Err(CrnfError::InvalidInput(format!("{cmd:?} does not act on a manifold alone")).into())
        }
    }
}

/// Pushes `m` forward by `map` and reports the image.
pub fn apply_report(m: &Manifold, map: &FormalMap) -> Result<ReportDocument> {
    if map.n_vars() != m.n_vars() {
        return Err(CrnfError::DimensionMismatch { expected: m.n_vars(), found: map.n_vars() });
    }
    let image = push_forward(m, map);
    let mut r = empty_report("applied");
    r.map = Some(io::map_document(map));
    r.manifold = Some(io::manifold_document(&image));
    Ok(r)
}

fn run_inner(cfg: &RunConfig) -> std::result::Result<String, Failure> {
    match cfg.command {
        Command::Random => {
            let degree = cfg.degree.ok_or_else(|| CrnfError::InvalidInput("random needs --degree".into()))?;
            let doc = random_manifold(cfg.seed, cfg.n_vars, degree, cfg.s, cfg.profile)?;
            emit(cfg, &io::to_json(&doc))?;
            Ok(format!("random: {} parts", doc.terms.len()))
        }
        Command::Apply => {
            let m = load_manifold(cfg)?;
            let path = cfg.map.as_ref().ok_or_else(|| CrnfError::InvalidInput("apply needs --map".into()))?;
            let map = io::parse_map_json(&read(path)?)?;
            Ok(finish(cfg, apply_report(&m, &map)?)?)
        }
        cmd => {
            let m = load_manifold(cfg)?;
            let cmd = if cmd == Command::Normalize && cfg.moser_only { Command::Moser } else { cmd };
            match manifold_report(cmd, &m, cfg.verify_after) {
                Ok(r) => Ok(finish(cfg, r)?),
                Err(f) => {
                    if let Some(r) = &f.report {
                        emit(cfg, &io::to_json(r))?;
                    }
                    Err(f)
                }
            }
        }
    }
}

pub fn run_command(cfg: &RunConfig) -> Outcome {
    match run_inner(cfg) {
        Ok(summary) => Outcome { code: 0, summary },
        Err(Failure { error, .. }) => {
            Outcome { code: if error.is_domain() { 2 } else { 1 }, summary: format!("error: {error}") }
        }
    }
}

/// Parses arguments, runs, prints the summary to stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let out = run_command(&cfg);
    eprintln!("{}", out.summary);
    out.code
}
