use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use bandbump::analysis::{
    band_logconcavity_scan, bump_logconcavity_scan, nonvacuity_scan, payoff_ev, Grid, PayoffSpec, ScanReport,
};
use bandbump::exactnum::{parse_rational, ratio_string, to_decimal};
use bandbump::oracle::{CompareOptions, DEFAULT_ORACLE_CAP};
use bandbump::table::DistTable;
use bandbump::verify::{verify, Status, VerifyOptions};
use bandbump::{joint_distribution, GameParams, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};

const USAGE: u8 = 2;
const FAILURE: u8 = 1;

/// Exact stopping-time and outcome distributions for Band or Bump.
#[derive(Parser)]
#[command(name = "bandbump", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the joint distribution table.
    Dist {
        #[command(flatten)]
        game: GameArgs,
        /// Significant figures in decimal renderings.
        #[arg(long, default_value_t = 6)]
        digits: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Check the closed forms against the exhaustive and Monte Carlo oracles.
    Verify {
        #[command(flatten)]
        game: GameArgs,
        /// Largest deck the exhaustive oracle will enumerate.
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
        /// Number of simulated games; omit to skip the simulation.
        #[arg(long)]
        mc_trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest acceptable |z| per cell.
        #[arg(long, default_value_t = 4.0)]
        z_threshold: f64,
        /// Cells with smaller exact probability are reported but not tested.
        #[arg(long, default_value_t = 0.0)]
        min_prob: f64,
    },
    /// Scan a grid of (m, s) with every 0 < l < u < s.
    Scan {
        #[arg(value_enum)]
        kind: ScanArg,
        #[arg(long, default_value_t = 2)]
        m_min: usize,
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        #[arg(long, default_value_t = 2)]
        s_min: usize,
        #[arg(long, default_value_t = 8)]
        s_max: usize,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Expected winnings per game for the given band and bump payoffs.
    Payoff {
        #[command(flatten)]
        game: GameArgs,
        /// Amount paid on a band, e.g. 2, -3, 0.25 or 1/3.
        #[arg(long, allow_hyphen_values = true)]
        band: String,
        /// Amount paid on a bump.
        #[arg(long, allow_hyphen_values = true)]
        bump: String,
        #[arg(long, default_value_t = 6)]
        digits: usize,
    },
}

#[derive(Args)]
struct GameArgs {
    /// Number of ranks.
    #[arg(short)]
    m: usize,
    /// Cards per rank.
    #[arg(short)]
    s: usize,
    /// Lower quota.
    #[arg(short)]
    l: usize,
    /// Upper quota.
    #[arg(short)]
    u: usize,
}

impl GameArgs {
    fn params(&self) -> bandbump::Result<GameParams> {
        GameParams::new(self.m, self.s, self.l, self.u)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanArg {
    Nonvacuity,
    BumpLogconcavity,
    BandLogconcavity,
}

/// Error carrying the exit code to use.
struct Exit(u8, String);

fn usage(e: impl ToString) -> Exit {
    Exit(USAGE, e.to_string())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Exit> {
    match cli.command {
        Command::Dist { game, digits, format } => {
            let table = DistTable::new(joint_distribution(game.params().map_err(usage)?), digits).map_err(usage)?;
            match format {
                Format::Csv => print!("{}", table.to_csv()),
                Format::Json => println!("{}", serde_json::to_string_pretty(&table.to_json()).expect("json value")),
            }
            Ok(0)
        }
        Command::Verify { game, oracle_cap, mc_trials, seed, z_threshold, min_prob } => {
            let params = game.params().map_err(usage)?;
            let options = VerifyOptions {
                oracle_cap,
                mc_trials,
                seed,
                compare: CompareOptions { threshold: z_threshold, min_prob },
            };
            let report = verify(params, &options);
            println!("verify {params}");
            for leg in &report.legs {
                let status = match leg.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Skipped => "skipped",
                };
                println!("  {:<22} {status:<8} {}", leg.name, leg.detail);
            }
            if let Some(mc) = &report.monte_carlo {
                for cell in mc.cells.iter().filter(|c| c.checked && c.z.abs() > mc.threshold) {
                    println!(
                        "  cell n={} {}: observed {} expected {:.2} z={:.3}",
                        cell.n, cell.outcome, cell.observed, cell.expected, cell.z
                    );
                }
            }
            if report.passed() {
                println!("PASS");
                Ok(0)
            } else {
                println!("FAIL");
                Ok(FAILURE)
            }
        }
        Command::Scan { kind, m_min, m_max, s_min, s_max, output } => {
            let grid = Grid { m: m_min.max(1)..=m_max, s: s_min..=s_max };
            let report = match kind {
                ScanArg::Nonvacuity => nonvacuity_scan(&grid),
                ScanArg::BumpLogconcavity => bump_logconcavity_scan(&grid),
                ScanArg::BandLogconcavity => band_logconcavity_scan(&grid),
            };
            let json = serde_json::to_string_pretty(&report).expect("serializable report");
            let summary = summary_line(&report);
            match output {
                Some(path) => {
                    fs::write(&path, json + "\n")
                        .map_err(|e| Exit(FAILURE, format!("writing {}: {e}", path.display())))?;
                    println!("{summary}");
                }
                None => {
                    println!("{json}");
                    eprintln!("{summary}");
                }
            }
            let failed = !report.is_clean() && report.kind.counterexamples_are_failures();
            Ok(if failed { FAILURE } else { 0 })
        }
        Command::Payoff { game, band, bump, digits } => {
            let params = game.params().map_err(usage)?;
            if digits == 0 {
                return Err(usage("at least one significant digit is required"));
            }
            let spec = PayoffSpec { band: parse_rational(&band).map_err(usage)?, bump: parse_rational(&bump).map_err(usage)? };
            let ev: Rational = payoff_ev(&joint_distribution(params), &spec).map_err(|e| Exit(FAILURE, e.to_string()))?;
            println!("exact: {}", ratio_string(&ev));
            println!("decimal: {}", to_decimal(&ev, digits));
            Ok(0)
        }
    }
}

fn summary_line(report: &ScanReport) -> String {
    let found = report.counterexamples.len();
    let noun = if report.kind.counterexamples_are_failures() { "counterexamples" } else { "findings" };
    let kind = serde_json::to_value(report.kind).expect("serializable kind");
    format!("{}: {} cells, {found} {noun}", kind.as_str().unwrap_or_default(), report.cells.len())
}
