//! Verification driver: runs suites of checks over parameter grids and
//! emits one [`VerificationReport`] per case.

pub mod report;
pub mod suites;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context as _};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use steinberg::building::{export_triplets, SteinbergModule};
use steinberg::exactla::SparseMatrix;
use steinberg::{Family, GroupKind, DEFAULT_CAPACITY};

pub use report::{write_reports, Format, Status, VerificationReport, CSV_COLUMNS};
pub use suites::{Context, Grid, RingChoice, Selection, Suite, Task};

#[derive(Debug, Parser)]
#[command(
    name = "steinberg",
    version,
    about = "Exact checks on Steinberg modules of finite classical groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank of the Steinberg module against the expected q^N.
    Dim {
        family: Family,
        n: usize,
        p: u32,
        #[arg(long, default_value = "Z")]
        ring: RingChoice,
        #[arg(long, default_value_t = DEFAULT_CAPACITY)]
        capacity: u64,
    },
    /// Run a suite; exits nonzero iff some case fails.
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: Suite,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a suite and write the consolidated reports to a file.
    Report {
        #[arg(value_enum, default_value = "all")]
        suite: Suite,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Plain-text export of a building, its boundaries or the module basis.
    Export {
        family: Family,
        n: usize,
        p: u32,
        #[arg(long, value_enum, default_value = "simplices")]
        what: ExportKind,
        /// Degree of the boundary map (defaults to the top degree).
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CAPACITY)]
        capacity: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    Simplices,
    Boundary,
    Basis,
}

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_delimiter = ',')]
    pub family: Vec<Family>,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<u32>,
    /// Z, Q, Fp (the field of each case) or an explicit F<prime>.
    #[arg(long, default_value = "Z")]
    pub ring: RingChoice,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random cases per parameter point in randomized suites.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_CAPACITY)]
    pub capacity: u64,
    #[arg(long, value_enum, default_value = "small")]
    pub grid: Grid,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Record wall time per case (makes output run-dependent).
    #[arg(long)]
    pub timings: bool,
}

impl RunArgs {
    pub fn selection(&self) -> Selection {
        Selection {
            families: self.family.clone(),
            ns: self.n.clone(),
            ps: self.p.clone(),
            grid: self.grid,
            ring: self.ring,
            samples: self.samples,
        }
    }
}

/// Runs every case of `suite`. Seeds are drawn in case order from one
/// generator seeded with `seed`; the output order is the case order.
pub fn run_suite(
    suite: Suite,
    sel: &Selection,
    seed: u64,
    capacity: u64,
    timings: bool,
) -> Vec<VerificationReport> {
    let tasks: Vec<Task> = suite
        .members()
        .into_iter()
        .flat_map(|s| suites::tasks(s, sel))
        .collect();
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = tasks.iter().map(|_| master.gen()).collect();
    let ctx = Context::new(capacity);
    tasks
        .par_iter()
        .zip(seeds)
        .map(|(t, s)| execute(t, &ctx, sel.ring, s, timings))
        .collect()
}

pub fn execute(
    task: &Task,
    ctx: &Context,
    ring: RingChoice,
    seed: u64,
    timings: bool,
) -> VerificationReport {
    let kind = task.kind();
    let ring = task.ring(ring);
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(|| task.run(ctx, ring, seed)));
    let millis = timings.then(|| start.elapsed().as_millis() as u64);
    let mut r = VerificationReport {
        case_id: task.case_id(),
        statement: task.statement().to_string(),
        family: kind.family.to_string(),
        n: kind.n,
        p: kind.p(),
        ring: ring.to_string(),
        status: Status::Fail,
        measured: serde_json::Value::Null,
        expected: serde_json::Value::Null,
        millis,
        detail: None,
    };
    match result {
        Ok(Ok(o)) => {
            r.status = if o.pass { Status::Pass } else { Status::Fail };
            r.measured = o.measured;
            r.expected = o.expected;
            r.detail = o.detail;
        }
        Ok(Err(e)) => {
            r.status = if e.is_capacity() {
                Status::SkippedCapacity
            } else {
                Status::Fail
            };
            r.detail = Some(e.to_string());
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            r.detail = Some(format!("panicked: {msg}"));
        }
    }
    r
}

fn output(path: Option<&PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot write {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn summary(reports: &[VerificationReport]) -> String {
    let count = |s| reports.iter().filter(|r| r.status == s).count();
    format!(
        "{} cases: {} pass, {} fail, {} skipped-capacity",
        reports.len(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::SkippedCapacity)
    )
}

fn run_reports(suite: Suite, run: &RunArgs, require_out: bool) -> anyhow::Result<ExitCode> {
    if require_out && run.out.is_none() {
        bail!("report needs --out");
    }
    let mut out = output(run.out.as_ref())?;
    let reports = run_suite(suite, &run.selection(), run.seed, run.capacity, run.timings);
    if reports.is_empty() {
        bail!("no cases selected for suite '{}'", suite.name());
    }
    write_reports(&reports, run.format, &mut out)?;
    out.flush()?;
    eprintln!("{}", summary(&reports));
    let failed = reports.iter().any(|r| r.status == Status::Fail);
    Ok(if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn dim(
    family: Family,
    n: usize,
    p: u32,
    ring: RingChoice,
    capacity: u64,
) -> anyhow::Result<ExitCode> {
    let kind = GroupKind::new(family, n, p)?;
    let task = Task::Rank(kind);
    let r = execute(&task, &Context::new(capacity), ring, 0, false);
    let mut out = io::stdout().lock();
    match r.status {
        Status::SkippedCapacity => {
            serde_json::to_writer_pretty(&mut out, &r)?;
            writeln!(out)?;
            Ok(ExitCode::SUCCESS)
        }
        _ if r.measured.is_null() => bail!("{}", r.detail.unwrap_or_default()),
        s => {
            writeln!(
                out,
                "{} (expected {})",
                r.measured["rank"], r.expected["rank"]
            )?;
            Ok(if s == Status::Pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn export(
    kind: GroupKind,
    what: ExportKind,
    degree: Option<usize>,
    capacity: u64,
    out: Option<&PathBuf>,
) -> anyhow::Result<ExitCode> {
    let st = SteinbergModule::new(kind, capacity)?;
    let text = match what {
        ExportKind::Simplices => st.complex().export_simplices(),
        ExportKind::Boundary => {
            let cc = st.chain_complex();
            let top = cc.top_degree().max(0) as usize;
            let k = degree.unwrap_or(top);
            if k > top {
                bail!("degree {k} above the top degree {top}");
            }
            export_triplets(cc.boundary(k))
        }
        ExportKind::Basis => export_triplets(&SparseMatrix::from_dense(st.basis())),
    };
    let mut w = output(out)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

pub fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Dim {
            family,
            n,
            p,
            ring,
            capacity,
        } => dim(family, n, p, ring, capacity),
        Command::Verify { suite, run } => run_reports(suite, &run, false),
        Command::Report { suite, run } => run_reports(suite, &run, true),
        Command::Export {
            family,
            n,
            p,
            what,
            degree,
            capacity,
            out,
        } => export(
            GroupKind::new(family, n, p)?,
            what,
            degree,
            capacity,
            out.as_ref(),
        ),
    }
}

/// Entry point shared by the binary: usage errors exit with 2.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
