//! Command-line front end. `run` returns everything a process would emit so
//! the binary stays a thin wrapper and tests can drive it in-process.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::db::{load_db, validate_db, Database, DbError, ValidationReport};
use crate::ext::{Citation, ExtError};
use crate::gottlieb::{self, GottliebError, MatchStatus};
use crate::pipeline::{self, PipelineError};

pub const DEFAULT_DB: &str = "./data/paper.cohdb";

pub mod exit {
    pub const OK: i32 = 0;
    pub const MISMATCH: i32 = 1;
    pub const INVALID_DB: i32 = 2;
    pub const UNRESOLVED: i32 = 3;
    pub const USAGE: i32 = 4;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Ascii,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "cohomotopy",
    about = "Cohomotopy groups of suspended CP^2 from a cited dataset"
)]
struct Args {
    /// Dataset path; the built-in copy is used when the default path is absent.
    #[arg(long, global = true)]
    db: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Ascii)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// [S^{n+k} CP^2, S^n] with generators and citations.
    Compute {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long)]
        k: i32,
    },
    /// One of the k = 6, 7, 8 tables.
    Table {
        #[arg(long)]
        k: i32,
    },
    /// Path components of map(S^n CP^2, S^{n+1}).
    Components {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// The Gottlieb group G_n(CP^2, S^{n+1}).
    Gottlieb {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// pi_n of the space of pointed self-maps of CP^2.
    Mapspace {
        #[arg(long)]
        n: u32,
    },
    /// Every golden cell against the computation.
    Verify,
    /// Structural validation of the dataset.
    DbCheck,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: exit::OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: impl Into<String>) -> Self {
        let mut stderr = stderr.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(exit::USAGE, text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    let db = match open_db(args.db.as_deref()) {
        Ok(db) => db,
        Err(msg) => return Outcome::fail(exit::INVALID_DB, msg),
    };
    let report = validate_db(&db);
    if let Command::DbCheck = args.command {
        return db_check(&report);
    }
    if !report.is_ok() {
        let mut msg = String::from("invalid database:\n");
        for f in report.failures() {
            let _ = writeln!(msg, "  {} {}: {}", f.check, f.record, f.detail);
        }
        return Outcome::fail(exit::INVALID_DB, msg);
    }
    match args.command {
        Command::Compute { n, k } => compute(&db, n, k, args.format),
        Command::Table { k } => table(&db, k, args.format),
        Command::Components { n } => components(&db, n),
        Command::Gottlieb { n } => gottlieb_cmd(&db, n),
        Command::Mapspace { n } => mapspace(&db, n),
        Command::Verify => verify(&db),
        Command::DbCheck => unreachable!(),
    }
}

fn open_db(path: Option<&Path>) -> Result<Database, String> {
    let path = match path {
        Some(p) => p,
        None if Path::new(DEFAULT_DB).exists() => Path::new(DEFAULT_DB),
        None => return Ok(Database::shipped()),
    };
    load_db(path).map_err(|e| match e {
        DbError::Io { .. } => e.to_string(),
        _ => format!("{}: {e}", path.display()),
    })
}

fn pipeline_failure(e: PipelineError) -> Outcome {
    let code = match &e {
        PipelineError::Ext(ExtError::Unresolved { .. }) => exit::UNRESOLVED,
        PipelineError::UnsupportedStem { .. } | PipelineError::OutOfRange { .. } => exit::USAGE,
        _ => exit::INVALID_DB,
    };
    Outcome::fail(code, e.to_string())
}

fn gottlieb_failure(e: GottliebError) -> Outcome {
    let code = match &e {
        GottliebError::MissingWhitehead { .. } | GottliebError::MissingSource { .. } => exit::USAGE,
        _ => exit::INVALID_DB,
    };
    Outcome::fail(code, e.to_string())
}

fn first_cite(cites: &[Citation]) -> String {
    cites.first().map_or_else(
        || "[no citation]".to_string(),
        |c| format!("[{}]", c.location),
    )
}

fn citations(out: &mut String, cites: &[Citation]) {
    out.push_str("citations:\n");
    let mut seen = std::collections::BTreeSet::new();
    for c in cites {
        if seen.insert((c.location.clone(), c.quote.clone())) {
            let _ = writeln!(out, "  {c}");
        }
    }
}

fn compute(db: &Database, n: u32, k: i32, format: Format) -> Outcome {
    let r = match pipeline::compute_group(db, n, k) {
        Ok(r) => r,
        Err(e) => return pipeline_failure(e),
    };
    let group = pipeline::primary_string(&r.total);
    let paper = pipeline::paper_notation(&r.total);
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("n,k,group,paper_notation,generators,source\n");
            let source = r.provenance.first().map_or("", |c| c.location.as_str());
            let _ = writeln!(
                out,
                "{n},{k},{group},{paper},{},{source}",
                r.generators.join(";")
            );
        }
        Format::Ascii => {
            let _ = writeln!(out, "[S^{} CP^2, S^{n}]", n + k as u32);
            let _ = writeln!(out, "group: {group}  {}", first_cite(&r.provenance));
            let _ = writeln!(out, "table notation: {paper}");
            out.push_str("generators:\n");
            for g in &r.generators {
                let _ = writeln!(out, "  {g}");
            }
            if !r.two_primary.evidence_used.is_empty() {
                out.push_str("extension resolved by:\n");
                for e in &r.two_primary.evidence_used {
                    let _ = writeln!(out, "  {}  [{}]", e.evidence.kind(), e.cite.location);
                }
            }
            citations(&mut out, &r.provenance);
        }
    }
    Outcome::ok(out)
}

fn table(db: &Database, k: i32, format: Format) -> Outcome {
    match pipeline::render_table(db, k) {
        Ok(rows) => Outcome::ok(match format {
            Format::Csv => pipeline::table_csv(&rows),
            Format::Ascii => pipeline::table_ascii(&rows),
        }),
        Err(e) => pipeline_failure(e),
    }
}

fn components(db: &Database, n: u32) -> Outcome {
    match gottlieb::classify_components(db, n) {
        Ok(r) => {
            let mut out = r.render();
            out.push('\n');
            citations(&mut out, &r.cites);
            let mut o = Outcome::ok(out);
            if r.status == MatchStatus::Mismatch {
                o.code = exit::MISMATCH;
            }
            o
        }
        Err(e) => gottlieb_failure(e),
    }
}

fn gottlieb_cmd(db: &Database, n: u32) -> Outcome {
    match gottlieb::gottlieb_subgroup(db, n) {
        Ok(g) => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "G_{n}(CP^2, S^{}) = {}  {}",
                n + 1,
                pipeline::primary_string(&g.group),
                first_cite(&g.cites)
            );
            let _ = writeln!(
                out,
                "inside {} with index {}",
                pipeline::primary_string(&g.ambient),
                g.index
            );
            out.push_str("generators:\n");
            for name in &g.names {
                let _ = writeln!(out, "  {name}");
            }
            citations(&mut out, &g.cites);
            Outcome::ok(out)
        }
        Err(e) => gottlieb_failure(e),
    }
}

fn mapspace(db: &Database, n: u32) -> Outcome {
    match pipeline::mapping_space_pi(db, n) {
        Ok(m) => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "pi_{n}(map_*(CP^2, CP^2)) = {}  {}",
                pipeline::primary_string(&m.group),
                first_cite(&m.provenance)
            );
            if !m.generators.is_empty() {
                out.push_str("generators:\n");
                for g in &m.generators {
                    let _ = writeln!(out, "  {g}");
                }
            }
            citations(&mut out, &m.provenance);
            Outcome::ok(out)
        }
        Err(e) => pipeline_failure(e),
    }
}

pub fn full_verification(db: &Database) -> pipeline::VerificationReport {
    let mut report = pipeline::verify_all(db);
    report.extend(gottlieb::verify_gottlieb(db));
    report
}

fn verify(db: &Database) -> Outcome {
    let report = full_verification(db);
    let mut o = Outcome::ok(format!("{report}\n"));
    if !report.is_ok() {
        o.code = exit::MISMATCH;
    }
    o
}

fn db_check(report: &ValidationReport) -> Outcome {
    let mut out = String::new();
    for f in report.failures() {
        let _ = writeln!(out, "FAIL {} {}: {}", f.check, f.record, f.detail);
    }
    let failed = report.failures().count();
    let _ = writeln!(out, "{} checks, {failed} failures", report.results.len());
    Outcome {
        code: if failed == 0 {
            exit::OK
        } else {
            exit::INVALID_DB
        },
        stdout: out,
        stderr: String::new(),
    }
}
