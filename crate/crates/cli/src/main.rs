use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use agtractor::bgg::{bgg_operator, solve_bgg_polynomial, Bundle};
use agtractor::chart::ChartFile;
use agtractor::loci::{require_solution, zero_locus_analysis};
use agtractor::report::Status;
use agtractor::suite::{run_suite_capped, suite_report_json, Suite};
use agtractor::tensor::serial::tensor_to_json;
use agtractor::weyl::ChartWeylData;
use agtractor::Error;
use clap::{Parser, Subcommand};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "agtractor", version, about = "Exact tractor calculus for almost Grassmannian (2,n) structures")]
struct Cli {
    /// Maximum polynomial degree allowed in intermediate results.
    #[arg(long, global = true, value_name = "D")]
    degree_cap: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write a JSON report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(3..=6))]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report path; standard output if omitted.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
    },
    /// Polynomial solutions of the first BGG operator on the flat model.
    FlatBasis {
        #[arg(long)]
        bundle: Bundle,
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=6))]
        n: u32,
        #[arg(long, default_value_t = 3)]
        degree: u32,
    },
    /// Zero-locus analysis of a named solution at named points of a chart file.
    ZeroLocus {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "NAME")]
        section: String,
        #[arg(long, value_name = "NAME")]
        points: String,
    },
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::UnsupportedN(_) | Error::Io(_) | Error::Json(_) | Error::DegreeCap { .. } => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Failed(e.to_string()),
        }
    }
}

fn print_json(v: &Value) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(|e| Failure::Failed(e.to_string()))?;
    writeln!(out).map_err(|e| Failure::Failed(e.to_string()))
}

fn verify(suite: Suite, n: usize, seed: u64, cap: Option<u32>, report: Option<PathBuf>) -> Result<bool, Failure> {
    let r = run_suite_capped(suite, n, seed, cap)?;
    let doc = suite_report_json(suite, n, seed, &r);
    match report {
        Some(path) => {
            let mut text = serde_json::to_string_pretty(&doc).map_err(Error::from)?;
            text.push('\n');
            fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        }
        None => print_json(&doc)?,
    }
    for c in r.checks.iter().filter(|c| c.status == Status::Fail) {
        eprintln!("FAIL {}: {}", c.id, c.detail.as_deref().unwrap_or(""));
    }
    eprintln!(
        "{suite} n={n} seed={seed}: {} pass, {} fail, {} skipped, {} inconclusive",
        r.count(Status::Pass),
        r.count(Status::Fail),
        r.count(Status::Skipped),
        r.count(Status::Inconclusive)
    );
    Ok(r.all_pass())
}

fn flat_basis(bundle: Bundle, n: usize, degree: u32, cap: Option<u32>) -> Result<bool, Failure> {
    let mut d = ChartWeylData::flat(n)?;
    if let Some(c) = cap {
        d = d.with_degree_cap(c);
    }
    let basis = solve_bgg_polynomial(&d, bundle, degree)?;
    print_json(&basis.to_json())?;
    Ok(true)
}

fn zero_locus(input: PathBuf, section: &str, points: &str, cap: Option<u32>) -> Result<bool, Failure> {
    let file = ChartFile::load(&input, cap)?;
    let s = file.section(section)?;
    let pts = file.point_set(points)?;
    if let Err(e) = require_solution(&file.data, s) {
        let residual = bgg_operator(&file.data, s)?;
        eprintln!("refusing section {section:?}: {e}");
        eprintln!("D residual:");
        eprintln!("{}", serde_json::to_string_pretty(&tensor_to_json(&residual)).map_err(Error::from)?);
        return Err(Failure::Failed(format!("section {section:?} is not a solution")));
    }
    let z = zero_locus_analysis(&file.data, s, pts)?;
    print_json(&z.to_json())?;
    Ok(z.all_match() && z.codimension() == Some(z.expected_codimension))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = cli.degree_cap;
    let result = match cli.command {
        Command::Verify { suite, n, seed, report } => verify(suite, n as usize, seed, cap, report),
        Command::FlatBasis { bundle, n, degree } => flat_basis(bundle, n as usize, degree, cap),
        Command::ZeroLocus { input, section, points } => zero_locus(input, &section, &points, cap),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
