//! `hologeom` — batch analyses of holomorphic curves and complex surfaces
//! under the holomorphic metric.
//!
//! `hologeom analyze --spec <file.json> --out <dir>` reads an analysis
//! config, runs the requested analyses in order, and writes `report.json`
//! plus one locus file per exported polyline. Exit codes: 0 success,
//! 2 parse/validation error, 3 hypothesis violation (algebraic counts),
//! 4 numerical non-certification.

mod config;
mod export;
mod report;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use hologeom_core::complex::Branch;
use hologeom_core::geomspec;
use hologeom_core::options::NumericOptions;
use sha2::{Digest, Sha256};

use config::ConfigDocument;
use export::ExportFormat;
use report::Report;
use runner::{run_analyses, RunClass};

#[derive(Parser)]
#[command(name = "hologeom", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Principal,
    Other,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analyses in a spec file and write a report directory.
    Analyze {
        /// Analysis config (JSON).
        #[arg(long)]
        spec: PathBuf,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Square-root branch override.
        #[arg(long)]
        branch: Option<BranchArg>,
        /// Relative tolerance override (derivative-vanishing ladder).
        #[arg(long)]
        tol: Option<f64>,
        /// Locus export format.
        #[arg(long, default_value = "csv")]
        format: FormatArg,
    },
    /// Print the JSON schema of the analysis config document.
    Schema {
        /// Print the report schema instead.
        #[arg(long)]
        report: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Schema { report } => {
            if report {
                print!("{}", include_str!("../schema/report.schema.json"));
            } else {
                print!("{}", include_str!("../schema/analysis-config.schema.json"));
            }
            ExitCode::SUCCESS
        }
        Command::Analyze {
            spec,
            out,
            branch,
            tol,
            format,
        } => match analyze(spec, out, branch, tol, format) {
            Ok(class) => match class {
                RunClass::Ok => ExitCode::SUCCESS,
                RunClass::HypothesisViolation => ExitCode::from(3),
                RunClass::Uncertified => ExitCode::from(4),
            },
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}

fn analyze(
    spec_path: PathBuf,
    out_dir: PathBuf,
    branch: Option<BranchArg>,
    tol: Option<f64>,
    format: FormatArg,
) -> anyhow::Result<RunClass> {
    let raw = std::fs::read(&spec_path)
        .with_context(|| format!("reading spec file {}", spec_path.display()))?;
    let digest = format!("sha256:{:x}", Sha256::digest(&raw));

    let doc: ConfigDocument = serde_json::from_slice(&raw).context("parsing analysis config")?;
    let spec = doc.spec.build().context("building geometry spec")?;
    let diagnostics = geomspec::validate(&spec);
    if !diagnostics.is_empty() {
        let mut msg = String::from("spec validation failed:");
        for d in &diagnostics {
            msg.push_str(&format!("\n  [{:?}] {}", d.code, d.message));
        }
        anyhow::bail!(msg);
    }
    if doc.analyses.is_empty() {
        anyhow::bail!("no analyses requested");
    }

    // option layering: defaults ← spec options ← config tolerances ← flags
    let mut opts = spec.numeric_options(&NumericOptions::default());
    if let Some(t) = &doc.tolerances {
        if let Some(x) = t.tol_iso {
            opts.tol_iso = x;
        }
        if let Some(x) = t.tol_rel {
            opts.tol_rel = x;
        }
        if let Some(x) = t.root_tol {
            opts.root_tol = x;
        }
    }
    if let Some(b) = branch {
        opts.branch = match b {
            BranchArg::Principal => Branch::Principal,
            BranchArg::Other => Branch::Other,
        };
    }
    if let Some(t) = tol {
        opts.tol_rel = t;
    }
    let format = match format {
        FormatArg::Csv => ExportFormat::Csv,
        FormatArg::Json => ExportFormat::Json,
    };

    let output = run_analyses(&spec, &doc.analyses, &opts, format);

    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let report = Report {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config_digest: digest,
        branch: match opts.branch {
            Branch::Principal => "principal".into(),
            Branch::Other => "other".into(),
        },
        results: output.results,
        warnings: output.warnings,
        timing: output.timing,
    };
    let report_json = serde_json::to_string_pretty(&report)?;
    std::fs::write(out_dir.join("report.json"), &report_json)?;
    for (name, body) in &output.files {
        std::fs::write(out_dir.join(name), body)?;
    }

    Ok(output.class)
}
