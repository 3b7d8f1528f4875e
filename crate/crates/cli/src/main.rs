use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ising_cli::config::RunConfig;
use ising_cli::report::Report;
use ising_cli::run_campaign;

const EXIT_FAIL: u8 = 1;
const EXIT_SCHEMA: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "isingff", version, about = "Verification campaigns for Ising form factors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run suites and write `report.json` plus plot CSVs.
    Verify {
        /// Suites to run; defaults to the `suites` list of the config.
        suites: Vec<String>,
        /// Config file; bare names are also looked up in `$ISINGFF_CONFIG_DIR`.
        #[arg(long, default_value = "verify-all.cfg")]
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Overrides the config seed; accepts decimal or `0x` hex.
        #[arg(long, value_parser = parse_seed)]
        seed: Option<u64>,
        #[arg(long, default_value = "isingff-out")]
        out: PathBuf,
    },
    /// Report utilities.
    Report {
        #[command(subcommand)]
        command: ReportCommand,
    },
    /// Write the plot CSVs of a report.
    Plotdata {
        report: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ReportCommand {
    /// Merge reports; later suites replace earlier ones of the same name.
    Merge {
        #[arg(required = true)]
        reports: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    }
    .map_err(|e| e.to_string())
}

fn write_report(report: &Report, out: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("report.json"), report.to_json())?;
    report.write_plotdata(out)?;
    Ok(())
}

fn verify(suites: Vec<String>, config: PathBuf, jobs: usize, seed: Option<u64>, out: PathBuf) -> u8 {
    let path = RunConfig::resolve(&config);
    let mut cfg = match RunConfig::load(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return EXIT_SCHEMA;
        }
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let selected = if suites.is_empty() { cfg.suites.clone() } else { suites };
    for s in &selected {
        if let Err(e) = ising_cli::config::check_suite(s) {
            eprintln!("{e}");
            return EXIT_SCHEMA;
        }
    }
    let report = match run_campaign(&cfg, &selected, jobs) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("internal error: {e:#}");
            return EXIT_INTERNAL;
        }
    };
    for s in &report.suites {
        println!("{:<16} {}  {}", s.suite, if s.pass { "PASS" } else { "FAIL" }, s.summary);
    }
    if let Err(e) = write_report(&report, &out) {
        eprintln!("cannot write report: {e:#}");
        return EXIT_INTERNAL;
    }
    if report.suites.iter().any(|s| s.error.is_some()) {
        EXIT_INTERNAL
    } else if report.pass {
        0
    } else {
        EXIT_FAIL
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Verify { suites, config, jobs, seed, out } => Ok(verify(suites, config, jobs, seed, out)),
        Command::Report { command: ReportCommand::Merge { reports, out } } => {
            let loaded = reports.iter().map(|p| Report::load(p)).collect::<anyhow::Result<Vec<_>>>()?;
            std::fs::write(out, Report::merge(&loaded).to_json())?;
            Ok(0)
        }
        Command::Plotdata { report, out } => {
            for p in Report::load(&report)?.write_plotdata(&out)? {
                println!("{}", p.display());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
