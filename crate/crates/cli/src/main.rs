use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ncclique::group::ExtraspecialForm;
use ncclique::harness::{
    cmd_export_graph, cmd_group_info, cmd_omega, cmd_verify_suite, FamilyKind, HarnessError,
    JobMethod, JobSpec, ReportStatus, RowStatus, SuiteOptions,
};

/// Clique numbers of non-commuting graphs of finite groups.
#[derive(Parser)]
#[command(name = "ncclique", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order, center, element orders, Sylow counts and the AC flag.
    Group(JobArgs),
    /// Clique number with a certificate and closed-form cross-check.
    Omega(JobArgs),
    /// Write the non-commuting graph in DIMACS format.
    Export {
        #[command(flatten)]
        job: JobArgs,
        /// Collapse cosets of the center to single vertices.
        #[arg(long)]
        collapse: bool,
    },
    /// Run the verification suite.
    Verify {
        /// Wall-clock budget in seconds for the whole suite.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Run only these rows.
        #[arg(long = "row")]
        rows: Vec<String>,
        /// Shift the expected values of one row to check that failures are reported.
        #[arg(long, value_name = "ROW")]
        mutate: Option<String>,
        /// Write the full suite summary as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Psl2,
    Pgl2,
    Sl2,
    Gl2,
    Psl3,
    Suzuki,
    Extraspecial,
    Named,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Formula,
    Ac,
    Cover,
    #[value(alias = "lemma20")]
    Partition,
    Solver,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Plus,
    Minus,
}

#[derive(Args)]
struct JobArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_enum)]
    form: Option<Form>,
    /// Named group such as symmetric-4, alternating-5, dihedral-6 or quaternion8.
    #[arg(long)]
    name: Option<String>,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    /// Solver time limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    node_limit: Option<u64>,
    #[arg(long)]
    allow_big_memory: bool,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl JobArgs {
    fn spec(&self) -> JobSpec {
        let mut job = JobSpec::new(match self.family {
            Family::Psl2 => FamilyKind::Psl2,
            Family::Pgl2 => FamilyKind::Pgl2,
            Family::Sl2 => FamilyKind::Sl2,
            Family::Gl2 => FamilyKind::Gl2,
            Family::Psl3 => FamilyKind::Psl3,
            Family::Suzuki => FamilyKind::Suzuki,
            Family::Extraspecial => FamilyKind::Extraspecial,
            Family::Named => FamilyKind::Named,
        });
        job.q = self.q;
        job.m = self.m;
        job.p = self.p;
        job.n = self.n;
        job.form = self.form.map(|f| match f {
            Form::Plus => ExtraspecialForm::Plus,
            Form::Minus => ExtraspecialForm::Minus,
        });
        job.name = self.name.clone();
        job.method = match self.method {
            MethodArg::Auto => JobMethod::Auto,
            MethodArg::Formula => JobMethod::Formula,
            MethodArg::Ac => JobMethod::Ac,
            MethodArg::Cover => JobMethod::Cover,
            MethodArg::Partition => JobMethod::Partition,
            MethodArg::Solver => JobMethod::Solver,
        };
        job.time_limit = self.time_limit;
        job.node_limit = self.node_limit;
        job.allow_big_memory = self.allow_big_memory;
        job.cache_dir = self.cache_dir.clone();
        job.out = self.out.clone();
        job
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Group(args) => {
            cmd_group_info(&args.spec())?.emit(&mut stdout)?;
            Ok(0)
        }
        Command::Omega(args) => {
            let report = cmd_omega(&args.spec())?;
            report.emit(&mut stdout)?;
            if let Some(f) = report.formula.as_ref().filter(|f| !f.matched) {
                eprintln!(
                    "error: computed value outside closed form {}..={} ({})",
                    f.expected.lower, f.expected.upper, f.expected.source
                );
                return Ok(4);
            }
            Ok(if report.status == ReportStatus::LowerBound {
                3
            } else {
                0
            })
        }
        Command::Export { job, collapse } => {
            let summary = cmd_export_graph(&job.spec(), collapse, &mut stdout)?;
            eprintln!(
                "{} vertices, {} edges{}",
                summary.vertices,
                summary.edges,
                if summary.collapsed {
                    ", center collapsed"
                } else {
                    ""
                }
            );
            Ok(0)
        }
        Command::Verify {
            budget,
            cache_dir,
            rows,
            mutate,
            out,
        } => {
            if budget.is_some_and(|b| !(b > 0.0 && b.is_finite())) {
                return Err(HarnessError::Invalid("budget must be positive".into()).into());
            }
            let opts = SuiteOptions {
                budget: budget.map(Duration::from_secs_f64),
                cache_dir,
                mutate,
                only: rows,
            };
            let summary = cmd_verify_suite(&opts, |row| {
                let mut out = io::stdout().lock();
                let _ = writeln!(out, "{}", row.summary_line());
                for line in row.diff() {
                    let _ = writeln!(out, "{line}");
                }
            })?;
            if let Some(path) = out {
                let json = serde_json::to_string_pretty(&summary)?;
                std::fs::write(&path, json)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let failed = summary
                .rows
                .iter()
                .filter(|r| r.status == RowStatus::Fail)
                .count();
            writeln!(stdout, "{} rows, {} failed", summary.rows.len(), failed)?;
            Ok(if summary.passed { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .downcast_ref::<HarnessError>()
                .map_or(1, HarnessError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
