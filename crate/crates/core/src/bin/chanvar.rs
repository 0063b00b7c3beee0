use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use chanvar::infotheory::InfoSummary;
use chanvar::sweep::{self, SweepSpec};
use chanvar::verify::{self, VerifyConfig};
use chanvar::{schema, uncertainty, AlphaBeta, Error, Result};

#[derive(Parser)]
#[command(name = "chanvar", version, about = "Uncertainty of quantum channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Total, quantum and classical uncertainty of a channel in a state.
    Uncertainty(Point),
    /// Fidelity trade-off, entropy-exchange, coherent-information and Fano bounds.
    Bounds(Point),
    /// Evaluate a parameter grid and write CSV.
    Sweep(SweepArgs),
    /// Run the seeded property suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Point {
    /// State file (JSON) or `preset:NAME[:k=v,...]`.
    #[arg(long)]
    state: String,
    /// Channel file (JSON) or `preset:NAME[:k=v,...]`.
    #[arg(long)]
    channel: String,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep spec file (JSON).
    #[arg(long, conflicts_with = "figure", required_unless_present = "figure")]
    spec: Option<PathBuf>,
    /// Built-in Werner/isotropic sweep, 1-6.
    #[arg(long)]
    figure: Option<u32>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit JSON instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// Comma-separated list or inclusive range, e.g. `2,3` or `2-4`.
    #[arg(long, default_value = "2-4")]
    dims: String,
    /// Use this channel instead of random ones.
    #[arg(long)]
    channel: Option<String>,
    /// Run only the named properties.
    #[arg(long = "property")]
    properties: Vec<String>,
    #[arg(long)]
    json: bool,
}

fn parse_dims(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Schema(format!("cannot read dims {s:?}"));
    if let Some((a, b)) = s.split_once('-') {
        let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn cmd_uncertainty(p: &Point) -> Result<ExitCode> {
    let rho = schema::load_state(&p.state)?;
    let phi = schema::load_channel(&p.channel)?;
    let ab = AlphaBeta::new(p.alpha, p.beta)?;
    let t = uncertainty::uncertainty_triple(&rho, &phi, ab)?;
    let residual = t.decomposition_residual();
    if p.json {
        print_json(&json!({
            "alpha": ab.alpha(),
            "beta": ab.beta(),
            "V": t.total_v,
            "Q": t.quantum_q,
            "C": t.classical_c,
            "decomposition_residual": residual,
        }));
    } else {
        println!("V = {}", t.total_v);
        println!("Q = {}", t.quantum_q);
        println!("C = {}", t.classical_c);
        println!("decomposition residual = {residual}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(p: &Point) -> Result<ExitCode> {
    let rho = schema::load_state(&p.state)?;
    let phi = schema::load_channel(&p.channel)?;
    let ab = AlphaBeta::new(p.alpha, p.beta)?;
    let s = InfoSummary::compute(&rho, &phi, ab)?;
    let bounds = [
        ("fidelity_tradeoff", s.fidelity_tradeoff()),
        ("entropy_exchange_bound", s.entropy_exchange_bound()),
        ("coherent_information_bound", s.coherent_information_bound()),
        ("quantum_fano", s.quantum_fano()),
    ];
    let pure_residual = s.pure_state_residual();
    if p.json {
        let b: serde_json::Map<_, _> = bounds
            .iter()
            .map(|(n, r)| (n.to_string(), serde_json::to_value(r).expect("serializable")))
            .collect();
        print_json(&json!({
            "V": s.total_v,
            "Q": s.quantum_q,
            "C": s.classical_c,
            "Fe": s.fe,
            "Se": s.entropy_exchange,
            "Ic": s.coherent_information,
            "pure_state_residual": pure_residual,
            "bounds": b,
        }));
    } else {
        println!("V = {}  Fe = {}  Se = {}  Ic = {}", s.total_v, s.fe, s.entropy_exchange, s.coherent_information);
        println!("2V + Fe - 1 = {pure_residual}");
        for (name, r) in bounds {
            println!(
                "{name}: lhs = {} rhs = {} slack = {} {}",
                r.lhs,
                r.rhs,
                r.slack,
                if r.satisfied { "satisfied" } else { "VIOLATED" }
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_sweep(a: &SweepArgs) -> Result<ExitCode> {
    let spec = match (&a.spec, a.figure) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            SweepSpec::from_json(&text)?
        }
        (None, Some(n)) => SweepSpec::figure(n)?,
        (None, None) => unreachable!("clap requires one"),
    };
    let table = sweep::run(&spec)?;
    let text = if a.json {
        let mut s = serde_json::to_string(&json!({
            "header": table.header,
            "rows": table.rows,
            "skipped": table.skipped,
        }))
        .expect("serializable");
        s.push('\n');
        s
    } else {
        table.to_csv()
    };
    write_out(&a.out, &text)?;
    if table.skipped > 0 {
        eprintln!("skipped {} grid points with alpha + beta > 1", table.skipped);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: &VerifyArgs) -> Result<ExitCode> {
    let channel = a.channel.as_deref().map(schema::load_channel).transpose()?;
    let config = VerifyConfig {
        seed: a.seed,
        samples: a.samples,
        dims: parse_dims(&a.dims)?,
        channel,
    };
    let report = if a.properties.is_empty() {
        verify::run(&config)?
    } else {
        verify::run_only(&config, &a.properties)?
    };
    if a.json {
        print_json(&serde_json::to_value(&report).expect("serializable"));
    } else {
        print!("{}", report.to_text());
    }
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Uncertainty(p) => cmd_uncertainty(p),
        Command::Bounds(p) => cmd_bounds(p),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
