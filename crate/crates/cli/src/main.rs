use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cylflow::analysis::{classify, ModeTrajectory, Thresholds};
use cylflow::config::RunConfig;
use cylflow::dynamics::StopReason;
use cylflow::propagator::{
    growth_constant, growth_initial_data, projected_decay, write_decay_report, DecaySettings,
    OscillatorBasis, Potential,
};
use cylflow::verify::{verify, Suite};
use cylflow::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_PINCH: u8 = 3;
const EXIT_VERIFICATION: u8 = 4;
const EXIT_ABORT: u8 = 5;

/// Slack on the projected decay rate accepted by `propagator`.
const DECAY_SLACK: f64 = 0.1;
const MAX_GROWTH: f64 = 10.0;

#[derive(Parser)]
#[command(
    name = "cylflow",
    version,
    about = "Rescaled mean curvature flow near the cylinder S^3 x R"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its run directory.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Run directory; defaults to `runs/<config file stem>`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an invariant battery: basis, appendix-a, propagator or normal-form.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Classify a trajectory.csv offline.
    Classify {
        file: PathBuf,
        /// Output file; defaults to `classification.json` next to the input.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON file with classification thresholds.
        #[arg(long)]
        thresholds: Option<PathBuf>,
    },
    /// Measure projected decay and unprojected growth for one potential.
    Propagator {
        #[arg(long)]
        n: usize,
        /// zero, constant:<c>, bracket:<eps>, log:<eps>, step:<eps> or well:<c>:<eps>.
        #[arg(long)]
        potential: String,
        /// Weight exponent offset `k` of the decay norm.
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// Directory for decay_report.csv.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Parse { .. } | Error::Truncation(_) | Error::Json(_) => {
            EXIT_CONFIG
        }
        Error::Pinch { .. } => EXIT_PINCH,
        Error::Verification(_) => EXIT_VERIFICATION,
        _ => EXIT_ABORT,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_for(&e))
}

fn cmd_run(config: &Path, out: Option<PathBuf>) -> Result<u8, Error> {
    let cfg = RunConfig::read(config)?;
    let dir = out.unwrap_or_else(|| {
        let stem = config
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into());
        Path::new("runs").join(stem)
    });
    let outcome = cylflow::run::run(&cfg, &dir)?;
    let rec = &outcome.record;
    println!("run directory {}", dir.display());
    println!("steps {} tau {:.16e}", rec.steps, rec.state.tau);
    println!(
        "verdict {}",
        serde_json::to_string(&outcome.classification.verdict)?
    );
    for w in &outcome.classification.warnings {
        println!("warning {w}");
    }
    Ok(match &rec.stop {
        None => 0,
        Some(StopReason::Pinch { message, .. }) => {
            eprintln!("stopped: {message}");
            EXIT_PINCH
        }
        Some(StopReason::Abort { message, .. }) => {
            eprintln!("stopped: {message}");
            EXIT_ABORT
        }
    })
}

fn cmd_verify(suite: &str, seed: u64, json: bool) -> Result<u8, Error> {
    let rep = verify(Suite::parse(suite)?, seed)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&rep)?);
    } else {
        print!("{}", rep.to_text());
    }
    Ok(if rep.passed() { 0 } else { EXIT_VERIFICATION })
}

fn cmd_classify(
    file: &Path,
    out: Option<PathBuf>,
    thresholds: Option<PathBuf>,
) -> Result<u8, Error> {
    let th = match thresholds {
        Some(p) => serde_json::from_str::<Thresholds>(&std::fs::read_to_string(&p)?)
            .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?,
        None => Thresholds::default(),
    };
    let traj = ModeTrajectory::read(file)?;
    if traj.is_empty() {
        return Err(Error::Config(format!(
            "{}: trajectory has no samples",
            file.display()
        )));
    }
    let report = classify(&traj, &th);
    let json = report.to_json()?;
    let out = out.unwrap_or_else(|| file.with_file_name("classification.json"));
    std::fs::write(&out, format!("{json}\n"))?;
    println!("{json}");
    Ok(0)
}

fn cmd_propagator(n: usize, potential: &str, k: usize, out: &Path) -> Result<u8, Error> {
    let v = Potential::parse(potential)?;
    let s = DecaySettings::default();
    if n + 4 > s.k_max {
        return Err(Error::Config(format!("--n {n}: at most {}", s.k_max - 4)));
    }
    let basis = OscillatorBasis::new(s.k_max, s.nodes);
    let row = projected_decay(&basis, v, n, k, &s)?;
    std::fs::create_dir_all(out)?;
    write_decay_report(&out.join("decay_report.csv"), std::slice::from_ref(&row))?;
    let mut growth: f64 = 0.0;
    for (_, g) in growth_initial_data(&basis) {
        growth = growth.max(growth_constant(&basis, v, &g, k, &s)?);
    }
    println!("potential {} n {n} k {k}", v.id());
    println!("fitted rate {:.16e} r2 {:.16e}", row.rate, row.r2);
    println!("rate bound {:.16e} margin {:.16e}", row.bound, row.margin);
    println!("unprojected growth constant {growth:.16e}");
    let ok = !row.inconclusive && row.margin >= -DECAY_SLACK && growth <= MAX_GROWTH;
    Ok(if ok { 0 } else { EXIT_VERIFICATION })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out } => cmd_run(&config, out),
        Command::Verify { suite, seed, json } => cmd_verify(&suite, seed, json),
        Command::Classify {
            file,
            out,
            thresholds,
        } => cmd_classify(&file, out, thresholds),
        Command::Propagator {
            n,
            potential,
            k,
            out,
        } => cmd_propagator(n, &potential, k, &out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => fail(e),
    }
}
