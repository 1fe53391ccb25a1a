//! `quartic`: census, analysis and rendering of smooth tropical plane
//! quartics.
//!
//! Exit codes: 0 on success, 2 when a curve violates an expected theorem,
//! 3 on parse, I/O or resource errors.

mod analysis;
mod render;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use quartic_core::census::{enumerate_with_counts, run_census, Checks, HeightPolicy, RunConfig, Summary};
use quartic_core::lattice::io::{parse_heights, parse_triangulation, write_triangulations};
use quartic_core::Error;

use crate::analysis::Analysis;

const SPREAD: i64 = 100_000;

#[derive(Parser)]
#[command(name = "quartic", version, about = "Census and analysis of smooth tropical plane quartics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckLevel {
    All,
    Fast,
}

impl From<CheckLevel> for Checks {
    fn from(c: CheckLevel) -> Self {
        match c {
            CheckLevel::All => Checks::All,
            CheckLevel::Fast => Checks::Fast,
        }
    }
}

fn policy(seed: Option<u64>) -> HeightPolicy {
    match seed {
        Some(seed) => HeightPolicy::Perturbed { seed, spread: SPREAD },
        None => HeightPolicy::Minimal,
    }
}

#[derive(Subcommand)]
enum Command {
    /// List unimodular triangulations with orbit and regularity counts.
    Enumerate {
        #[arg(long, default_value_t = 4)]
        degree: u32,
        /// Write the triangulations to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Run the full pipeline over every orbit.
    Census {
        #[arg(long, default_value_t = 4)]
        degree: u32,
        /// Use seeded perturbed heights instead of the minimal ones.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; 0 picks the number of cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Write records and summary here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "all")]
        checks: CheckLevel,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Only the first this many orbits.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Deep report on one curve given by a triangulation file.
    Analyze {
        file: PathBuf,
        /// Height file; defaults to heights chosen by `--seed`.
        #[arg(long)]
        heights: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "all")]
        checks: CheckLevel,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// SVG of an `analyze` JSON report.
    Render {
        report: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Violation(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TheoremViolation(_) => Failure::Violation(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn summary_table(s: &Summary) -> String {
    let mut t = String::new();
    let mut row = |k: &str, v: String| t.push_str(&format!("{k:<28} {v}\n"));
    row("degree", s.degree.to_string());
    row("triangulations", s.triangulations.to_string());
    row("regular triangulations", s.regular_triangulations.to_string());
    row("orbits", s.orbits.to_string());
    row("regular orbits", s.regular_orbits.to_string());
    for (ty, n) in &s.types {
        row(&format!("type {ty}"), n.to_string());
    }
    for (ty, counts) in &s.theta_counts {
        for (c, n) in counts {
            row(&format!("thetas {ty} {c}"), n.to_string());
        }
    }
    for (d, n) in &s.deviations {
        row(&format!("deviation {d}"), n.to_string());
    }
    row("curves with 7 classes", s.seven_bitangent_classes.to_string());
    row("curves with a family", s.curves_with_family.to_string());
    row("hyperelliptic", s.hyperelliptic.to_string());
    row("cut witness holds", format!("{}/{}", s.cut_witness_holds, s.cut_witness_checked));
    row("violations", s.violations.to_string());
    t
}

fn enumerate(degree: u32, out: Option<PathBuf>, format: Format) -> Result<(), Failure> {
    if format == Format::Svg {
        return Err(Failure::Input("svg output is only available for analyze and render".into()));
    }
    let (ts, s) = enumerate_with_counts(degree)?;
    if let Some(p) = &out {
        fs::write(p, write_triangulations(&ts))?;
    }
    let text = match format {
        Format::Json => serde_json::to_string(&s)? + "\n",
        _ => format!(
            "{} triangulations, {} orbits ({} regular triangulations, {} regular orbits)\n",
            s.triangulations, s.orbits, s.regular_triangulations, s.regular_orbits
        ),
    };
    emit(&None, &text)
}

fn census(cfg: RunConfig, out: Option<PathBuf>, format: Format) -> Result<(), Failure> {
    if format == Format::Svg {
        return Err(Failure::Input("svg output is only available for analyze and render".into()));
    }
    let c = run_census(&cfg)?;
    let text = match format {
        Format::Table => summary_table(&c.summary),
        _ => {
            let mut s = String::new();
            for r in &c.records {
                s.push_str(&serde_json::to_string(r)?);
                s.push('\n');
            }
            s.push_str(&serde_json::to_string(&serde_json::json!({ "config": c.config, "summary": c.summary }))?);
            s.push('\n');
            s
        }
    };
    emit(&out, &text)?;
    if c.summary.violations > 0 {
        return Err(Failure::Violation(format!("{} curves with violations", c.summary.violations)));
    }
    Ok(())
}

fn analyze_report(a: &Analysis) -> String {
    let r = &a.report;
    let mut t = format!(
        "type {}  genus {}  thetas {}/{}/{}\n",
        r.combinatorial_type, r.structure.genus, r.theta_counts[0], r.theta_counts[1], r.theta_counts[2]
    );
    for (i, th) in r.thetas.iter().enumerate() {
        let cat = th.category.map_or("-".to_string(), |c| c.to_string());
        let chips: Vec<String> = th.divisor.iter().map(|c| format!("{}*{}", c.coefficient, c.point)).collect();
        t.push_str(&format!("theta {i}  {cat:<9} flow {:?}  {}\n", th.flow, chips.join(" + ")));
    }
    for b in &r.bitangents {
        let fam = if b.is_family { "  family" } else { "" };
        t.push_str(&format!("bitangent theta {}  vertex {}  profile {:?}{fam}\n", b.theta, b.vertex, b.profile));
    }
    if let Some(h) = &r.hyperelliptic {
        t.push_str(&format!("hyperelliptic {}\n", h.verdict));
    }
    for v in &r.violations {
        t.push_str(&format!("violation: {v}\n"));
    }
    t
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Enumerate { degree, out, format } => enumerate(degree, out, format),
        Command::Census {
            degree,
            seed,
            jobs,
            out,
            checks,
            format,
            limit,
        } => {
            let cfg = RunConfig {
                degree,
                heights: policy(seed),
                jobs,
                checks: checks.into(),
                seed: seed.unwrap_or(0),
                max_orbits: limit,
                ..RunConfig::default()
            };
            census(cfg, out, format)
        }
        Command::Analyze {
            file,
            heights,
            seed,
            out,
            checks,
            format,
        } => {
            let t = parse_triangulation(&read(&file)?)?;
            let h = match heights {
                Some(p) => Some(parse_heights(&read(&p)?)?),
                None => None,
            };
            let a = analysis::analyze(t, h, policy(seed), checks.into())?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&a)? + "\n",
                Format::Table => analyze_report(&a),
                Format::Svg => render::render(&a),
            };
            emit(&out, &text)?;
            if !a.report.violations.is_empty() {
                return Err(Failure::Violation(a.report.violations.join("; ")));
            }
            Ok(())
        }
        Command::Render { report, out } => {
            let a: Analysis = serde_json::from_str(&read(&report)?)?;
            emit(&out, &render::render(&a))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(m)) => {
            eprintln!("theorem violation: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
