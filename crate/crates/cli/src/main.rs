//! `sdof`: region, construct, verify and simulate from the command line.
//!
//! Every command prints one JSON envelope on stdout,
//! `{"status": "ok", "command": ..., "payload": ...}` on success and
//! `{"status": "error", "command": ..., "code": n, "message": ...}` otherwise.
//! The process exit code matches `code` (0 on success).

mod docs;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use sdof_core::chansim::{self, CurveRecord};
use sdof_core::precoder::construct;
use sdof_core::region::{self, AntennaConfig, SdofPoint};
use sdof_core::verifier::{membership, rates, sdof_of, slope_estimate};
use sdof_core::{matcore, Error};

use docs::Failure;

#[derive(Parser)]
#[command(
    name = "sdof",
    version,
    about = "Secure degrees-of-freedom tools for two interfering MIMO links with an eavesdropper"
)]
struct Cli {
    /// Relative rank tolerance used by every rank decision.
    #[arg(long, env = "SDOF_RANK_TOL", global = true)]
    rank_tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Single-user points, strict boundary and its end points.
    Region {
        /// Antenna counts `ns1,ns2,nd1,nd2,ne`.
        #[arg(long)]
        antennas: AntennaConfig,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Builds a precoder pair for a target point and verifies it.
    Construct {
        /// Antenna counts; required unless `--channels` is given.
        #[arg(long, required_unless_present = "channels")]
        antennas: Option<AntennaConfig>,
        /// Target `d1,d2`.
        #[arg(long)]
        target: SdofPoint,
        /// Seed for the channel draw; drawn from entropy when omitted.
        #[arg(long)]
        seed: Option<u64>,
        /// Per-source transmit power in dB over the unit noise power.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        power_dbm: f64,
        /// Use these channels instead of a random draw.
        #[arg(long)]
        channels: Option<PathBuf>,
        /// Where to write `{"channels": ..., "precoder": ...}`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// S.D.o.F. by rank, set membership and high-SNR slopes of a pair.
    Verify {
        #[arg(long)]
        channels: PathBuf,
        /// Defaults to the channels file, which may hold both documents.
        #[arg(long)]
        precoder: Option<PathBuf>,
        /// Transmit powers for the slope estimate.
        #[arg(long, value_delimiter = ',', default_value = "1e6,1e8,1e10,1e12")]
        p_grid: Vec<f64>,
    },
    /// Monte-Carlo secrecy-rate curve for a scenario file.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        /// CSV destination for the curve records.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the scenario target; the first end point when neither is set.
        #[arg(long)]
        target: Option<SdofPoint>,
        #[arg(long)]
        trials: Option<usize>,
        /// Overrides the scenario seed; drawn from entropy when neither is set.
        #[arg(long)]
        seed: Option<u64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Region { .. } => "region",
            Command::Construct { .. } => "construct",
            Command::Verify { .. } => "verify",
            Command::Simulate { .. } => "simulate",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            let name = std::env::args()
                .nth(1)
                .filter(|a| ["region", "construct", "verify", "simulate"].contains(&a.as_str()));
            print_json(&json!({
                "status": "error",
                "command": name,
                "code": 2,
                "message": e.kind().to_string(),
            }));
            return ExitCode::from(2);
        }
    };
    let name = cli.command.name();
    let outcome = apply_rank_tol(cli.rank_tol).and_then(|()| run(cli.command));
    match outcome {
        Ok(Output::Json(payload)) => {
            print_json(&json!({"status": "ok", "command": name, "payload": payload}));
            ExitCode::SUCCESS
        }
        Ok(Output::Text(text)) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("sdof {name}: {}", f.message);
            print_json(&json!({
                "status": "error",
                "command": name,
                "code": f.code,
                "message": f.message,
            }));
            ExitCode::from(f.code)
        }
    }
}

fn print_json(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("json value serialises");
    emit(&format!("{text}\n"));
}

// A closed stdout (for example a pipe into `head`) is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn apply_rank_tol(tol: Option<f64>) -> Result<(), Failure> {
    match tol {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(Failure::usage(format!(
            "rank tolerance must be a positive number, got {t}"
        ))),
        t => {
            matcore::set_rank_tolerance(t);
            Ok(())
        }
    }
}

enum Output {
    Json(Value),
    Text(String),
}

fn run(cmd: Command) -> Result<Output, Failure> {
    match cmd {
        Command::Region { antennas, format } => cmd_region(&antennas, format),
        Command::Construct {
            antennas,
            target,
            seed,
            power_dbm,
            channels,
            out,
        } => cmd_construct(antennas, target, seed, power_dbm, channels, out),
        Command::Verify {
            channels,
            precoder,
            p_grid,
        } => cmd_verify(&channels, precoder.as_ref().unwrap_or(&channels), &p_grid),
        Command::Simulate {
            scenario,
            out,
            target,
            trials,
            seed,
        } => cmd_simulate(&scenario, out, target, trials, seed),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("payload serialises")
}

fn cmd_region(cfg: &AntennaConfig, format: Format) -> Result<Output, Failure> {
    let reg = region::boundary(cfg);
    match format {
        Format::Json => Ok(Output::Json(json!({
            "antennas": cfg.to_string(),
            "subset_dims": region::subset_dims(cfg).as_array(),
            "su1": reg.su1,
            "su2": reg.su2,
            "e1": reg.e1,
            "e2": reg.e2,
            "strict_boundary": reg.strict_boundary,
        }))),
        Format::Csv => {
            let mut rows = vec![
                ("su1", SdofPoint::new(reg.su1, 0)),
                ("su2", SdofPoint::new(0, reg.su2)),
                ("e1", reg.e1),
                ("e2", reg.e2),
            ];
            rows.extend(reg.strict_boundary.iter().map(|&p| ("boundary", p)));
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["point", "d1", "d2"])
                .map_err(|e| Failure::io(e.to_string()))?;
            for (kind, p) in rows {
                w.write_record([kind, &p.d1.to_string(), &p.d2.to_string()])
                    .map_err(|e| Failure::io(e.to_string()))?;
            }
            let body = w.into_inner().map_err(|e| Failure::io(e.to_string()))?;
            let text = String::from_utf8(body).expect("csv output is utf-8");
            Ok(Output::Text(text))
        }
    }
}

fn cmd_construct(
    antennas: Option<AntennaConfig>,
    target: SdofPoint,
    seed: Option<u64>,
    power_dbm: f64,
    channels: Option<PathBuf>,
    out: Option<PathBuf>,
) -> Result<Output, Failure> {
    if !power_dbm.is_finite() {
        return Err(Failure::usage("power must be finite".into()));
    }
    let power = 10f64.powf(power_dbm / 10.0);
    let (ch, seed) = match &channels {
        Some(path) => {
            let ch = docs::load_channels(path)?;
            if let Some(cfg) = antennas {
                let got = ch.config()?;
                if got != cfg {
                    return Err(Error::DimensionMismatch(format!(
                        "channels are for {got}, --antennas says {cfg}"
                    ))
                    .into());
                }
            }
            (ch, None)
        }
        None => {
            let cfg = antennas.expect("clap requires antennas without channels");
            let seed = seed.unwrap_or_else(rand::random);
            (chansim::seeded_channels(&cfg, seed)?, Some(seed))
        }
    };
    let cfg = ch.config()?;
    let pair = construct(&ch, target, power)?;
    let got = sdof_of(&ch, &pair)?;
    let mem = membership(&ch, &pair)?;
    if let Some(path) = &out {
        docs::write_json(path, &json!({"channels": ch, "precoder": pair}))?;
    }
    Ok(Output::Json(json!({
        "antennas": cfg.to_string(),
        "seed": seed,
        "target": target,
        "power_dbm": power_dbm,
        "kv": pair.kv(),
        "kw": pair.kw(),
        "sdof": got,
        "membership": mem,
        "out": out.map(|p| p.display().to_string()),
    })))
}

fn cmd_verify(channels: &Path, precoder: &Path, p_grid: &[f64]) -> Result<Output, Failure> {
    let ch = docs::load_channels(channels)?;
    let pair = docs::load_precoder(precoder)?;
    let got = sdof_of(&ch, &pair)?;
    let mem = membership(&ch, &pair)?;
    let (s1, s2) = slope_estimate(&ch, &pair, p_grid)?;
    let r = rates(&ch, &pair)?;
    let agree = (s1 - got.d1 as f64).abs() <= 0.1 && (s2 - got.d2 as f64).abs() <= 0.1;
    Ok(Output::Json(json!({
        "antennas": ch.config()?.to_string(),
        "sdof": got,
        "membership": mem,
        "slopes": {"rs1": s1, "rs2": s2},
        "p_grid": p_grid,
        "slopes_match_sdof": agree,
        "rates": {
            "power": pair.power,
            "rd1": r.rd1,
            "rd2": r.rd2,
            "re": r.re,
            "rs1": r.rs1(),
            "rs2": r.rs2(),
        },
    })))
}

fn cmd_simulate(
    path: &Path,
    out: Option<PathBuf>,
    target: Option<SdofPoint>,
    trials: Option<usize>,
    seed: Option<u64>,
) -> Result<Output, Failure> {
    let (mut sc, has_seed) = docs::load_scenario(path)?;
    if let Some(n) = trials {
        sc.trials = n;
    }
    sc.seed = match (seed, has_seed) {
        (Some(s), _) => s,
        (None, true) => sc.seed,
        (None, false) => rand::random(),
    };
    sc.validate()?;
    let target = target
        .or(sc.target)
        .unwrap_or_else(|| region::e1(&sc.config));
    let records = chansim::run_sweep(&sc, target)?;
    if let Some(p) = &out {
        write_curve(p, &records)?;
    }
    let failures: usize = records.iter().map(|r| r.failures).sum();
    Ok(Output::Json(json!({
        "antennas": sc.config.to_string(),
        "seed": sc.seed,
        "target": target,
        "trials": sc.trials,
        "sweep": sc.sweep.as_ref().map(|s| to_value(&s.variable)),
        "failures": failures,
        "records": records,
        "out": out.map(|p| p.display().to_string()),
    })))
}

/// Columns: `x,mean_rs1,se_rs1,mean_rs2,se_rs2,failures`.
fn write_curve(path: &Path, records: &[CurveRecord]) -> Result<(), Failure> {
    let io = |e: csv::Error| Failure::io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    for r in records {
        w.serialize(r).map_err(io)?;
    }
    w.flush()
        .map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}
