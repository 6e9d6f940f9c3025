use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser};

use locrep_cli::{exit_code_for, run, Caps, Format, JobConfig, Subcommand, UnitSelection};

#[derive(Parser)]
#[command(name = "locrep", version, about = "Exact Whittaker-model checks for GL_n and SL_n over finite local rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand)]
enum Command {
    /// Compare dim and norm of Ind_U^G(theta_a) with the regular-orbit predictions
    Verify(Common),
    /// Evaluate the GL_2 / SL_2 regular representation tables and cross-check them
    #[command(name = "gl2-sl2-tables")]
    Tables(Common),
    /// Restriction norms of regular GL_n irreducibles to SL_n
    Branching(Common),
    /// Build (or load) and check the character table
    Chartab(Common),
    /// Conjugacy class summary
    Classes(Common),
}

#[derive(Args)]
struct Common {
    /// GL<n> or SL<n>
    #[arg(long, default_value = "GL2")]
    group: String,

    /// mixed:p^l (Z/p^l) or equal:q^l (F_q[t]/t^l)
    #[arg(long)]
    ring: String,

    /// A unit code, or "all"
    #[arg(long, default_value = "1")]
    a: String,

    /// Same as --a all
    #[arg(long)]
    all_units: bool,

    /// Worker threads (0: one per core)
    #[arg(long, default_value_t = 0)]
    threads: usize,

    #[arg(long, env = "LOCREP_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "text")]
    format: Format,

    /// Largest group order to enumerate
    #[arg(long, default_value_t = Caps::default().table)]
    table_cap: u64,

    /// Largest group order for conjugacy classes and character tables
    #[arg(long, default_value_t = Caps::default().chartab)]
    chartab_cap: u64,

    /// Include wall-clock timings (reports are then no longer reproducible byte for byte)
    #[arg(long)]
    timings: bool,
}

fn config(sub: Subcommand, c: Common) -> Result<JobConfig, String> {
    let units = if c.all_units || c.a.eq_ignore_ascii_case("all") {
        UnitSelection::All
    } else {
        UnitSelection::One(c.a.parse().map_err(|_| format!("--a expects a unit code or \"all\", got {:?}", c.a))?)
    };
    Ok(JobConfig {
        subcommand: sub,
        group: c.group,
        ring: c.ring,
        units,
        caps: Caps { table: c.table_cap, chartab: c.chartab_cap, threads: c.threads },
        out: c.out,
        format: c.format,
        cache_dir: c.cache_dir,
        timings: c.timings,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (sub, common) = match cli.command {
        Command::Verify(c) => (Subcommand::Verify, c),
        Command::Tables(c) => (Subcommand::Gl2Sl2Tables, c),
        Command::Branching(c) => (Subcommand::Branching, c),
        Command::Chartab(c) => (Subcommand::Chartab, c),
        Command::Classes(c) => (Subcommand::Classes, c),
    };
    let cfg = match config(sub, common) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code_for(&e) as u8);
        }
    };
    let body = match cfg.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
            eprintln!("{} ({} passed, {} failed)", if report.pass { "PASS" } else { "FAIL" }, report.summary.passed, report.summary.failed);
        }
        None => print!("{body}"),
    }
    ExitCode::from(if report.pass { 0 } else { 1 })
}
