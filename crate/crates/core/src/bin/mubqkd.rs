//! `mubqkd`: invariant checks, basis and Wigner dumps, protocol sessions.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 usage or config error,
//! 3 eavesdropper detected.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mubqkd::dump;
use mubqkd::entangle::{entangled_mub, PairLabel};
use mubqkd::gf::{Field, FieldConfig, FieldSpec};
use mubqkd::hilbert::StateVec;
use mubqkd::mub::{mub_state, MubLabel};
use mubqkd::phasespace::{dwigner1, dwigner2_support};
use mubqkd::protocol::{
    run_session, BitSource, EveSpec, MeasurementMode, PairLabelSpec, SessionConfig, SessionConfigFile,
};
use mubqkd::verify;

const EXIT_INVARIANT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DETECTED: u8 = 3;

#[derive(Parser)]
#[command(name = "mubqkd", version, about = "Entangled MUB states and key-distribution sessions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check field, MUB, projection, shift and Wigner invariants.
    Verify(VerifyArgs),
    /// Dump every basis amplitude as CSV.
    Bases(BasesArgs),
    /// Dump a discrete Wigner table (or a pair's support) as CSV.
    Wigner(WignerArgs),
    /// Run a protocol session and write its transcript and summary.
    Session(SessionArgs),
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Monic modulus, lowest order first: "c0,c1,...,1".
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
}

impl FieldArgs {
    fn config(&self) -> FieldConfig {
        FieldConfig {
            p: self.p,
            n: self.n,
            modulus: self.modulus.clone(),
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Largest field size accepted.
    #[arg(long, default_value_t = 81)]
    max_d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BasesArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WignerArgs {
    /// Odd prime dimension.
    #[arg(long)]
    p: u32,
    /// Basis label; omit for the position state |c⟩.
    #[arg(long)]
    b: Option<u32>,
    #[arg(long, default_value_t = 0)]
    c: u32,
    /// Dump the support of the pair state |2;b,c⟩ instead.
    #[arg(long)]
    pair: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SessionArgs {
    /// JSON session config; explicit flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// Fixed pair label b (index); random per round unless both --b and --c are given.
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long = "check-frac")]
    check_frac: Option<f64>,
    #[arg(long)]
    mode: Option<MeasurementMode>,
    #[arg(long)]
    reps: Option<usize>,
    /// none | fixed:<basis code> | uniform-quadratic | uniform-all
    #[arg(long)]
    eve: Option<EveSpec>,
    #[arg(long)]
    delta: Option<usize>,
    /// random | 0 | 1
    #[arg(long)]
    bits: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Transcript path (JSON Lines).
    #[arg(long, default_value = "transcript.jsonl")]
    out: PathBuf,
    /// Summary path (JSON).
    #[arg(long, default_value = "summary.json")]
    stats: PathBuf,
    #[arg(long = "no-transcript")]
    no_transcript: bool,
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, Failure> {
    let field = Field::from(FieldSpec::from_config(&args.field.config()).map_err(usage)?);
    if field.d() > args.max_d {
        return Err(usage(format!(
            "field size {} exceeds --max-d {}",
            field.d(),
            args.max_d
        )));
    }
    let report = verify::run(&field, args.seed);
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &report).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INVARIANT)
    })
}

fn cmd_bases(args: &BasesArgs) -> Result<ExitCode, Failure> {
    let field = Field::from(FieldSpec::from_config(&args.field.config()).map_err(usage)?);
    dump::write_bases_csv(&field, output(args.out.as_deref())?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_wigner(args: &WignerArgs) -> Result<ExitCode, Failure> {
    let field = Field::new(args.p, 1).map_err(usage)?;
    let d = field.d();
    let c = field.from_index(args.c as usize).map_err(usage)?;
    let out = output(args.out.as_deref())?;
    if args.pair {
        let b = field
            .from_index(args.b.unwrap_or(0) as usize)
            .map_err(usage)?;
        let pair = entangled_mub(&field, &PairLabel::new(b, c));
        dump::write_pair_support_csv(&dwigner2_support(&pair.state, d).map_err(usage)?, out)?;
    } else {
        let state = match args.b {
            Some(b) => {
                let b = field.from_index(b as usize).map_err(usage)?;
                mub_state(&field, &MubLabel::quadratic(b, c))
            }
            None => StateVec::basis_vector(d, c.index()),
        };
        dump::write_wigner_csv(&dwigner1(&state, d).map_err(usage)?, out)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn session_file(args: &SessionArgs) -> Result<SessionConfigFile, Failure> {
    let mut file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => {
            let p = args
                .p
                .ok_or_else(|| usage("--p is required without --config"))?;
            let rounds = args
                .rounds
                .ok_or_else(|| usage("--rounds is required without --config"))?;
            SessionConfigFile::new(
                FieldConfig {
                    p,
                    n: 1,
                    modulus: None,
                },
                rounds,
            )
        }
    };
    if let Some(p) = args.p {
        file.field.p = p;
    }
    if let Some(n) = args.n {
        file.field.n = n;
    }
    if args.p.is_some() || args.n.is_some() {
        file.field.modulus = None;
    }
    if args.modulus.is_some() {
        file.field.modulus = args.modulus.clone();
    }
    match (args.b, args.c) {
        (Some(b), Some(c)) => file.pair_label = PairLabelSpec::Fixed { b, c },
        (None, None) => {}
        _ => return Err(usage("--b and --c must be given together")),
    }
    if let Some(rounds) = args.rounds {
        file.rounds = rounds;
    }
    if let Some(f) = args.check_frac {
        file.check_fraction = f;
    }
    if let Some(mode) = args.mode {
        file.mode = mode;
    }
    if let Some(reps) = args.reps {
        file.swap_repetitions = reps;
    }
    if let Some(eve) = args.eve {
        file.eve = eve;
    }
    if let Some(delta) = args.delta {
        file.delta = delta;
    }
    if let Some(bits) = &args.bits {
        file.bits = match bits.as_str() {
            "random" => BitSource::RANDOM,
            other => BitSource::Fixed(other.parse().map_err(|_| usage(format!("bad --bits {other:?}")))?),
        };
    }
    if let Some(seed) = args.seed {
        file.seed = seed;
    }
    Ok(file)
}

fn cmd_session(args: &SessionArgs) -> Result<ExitCode, Failure> {
    let file = session_file(args)?;
    let config = SessionConfig::from_file(&file).map_err(usage)?;
    let transcript = run_session(&config);
    if !args.no_transcript {
        transcript.write_jsonl(BufWriter::new(File::create(&args.out)?))?;
    }
    transcript.write_summary(BufWriter::new(File::create(&args.stats)?))?;

    let s = &transcript.summary;
    let fmt = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{v:.4}"));
    let verdict = if s.eavesdropping_detected {
        "EAVESDROPPING DETECTED"
    } else {
        "clean"
    };
    println!(
        "{verdict}: rounds={} messages={} ber={} checks={} pass_rate={}",
        s.rounds,
        s.message_rounds,
        fmt(s.bit_error_rate),
        s.check_rounds,
        fmt(s.check_pass_rate)
    );
    Ok(if s.eavesdropping_detected {
        ExitCode::from(EXIT_DETECTED)
    } else {
        ExitCode::SUCCESS
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Bases(args) => cmd_bases(args),
        Command::Wigner(args) => cmd_wigner(args),
        Command::Session(args) => cmd_session(args),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
