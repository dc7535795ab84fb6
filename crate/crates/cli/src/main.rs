//! `concode`: encode, corrupt, synchronise and decode concurrent-code
//! codewords, run the CDMA baseline, evaluate the closed-form models and
//! regenerate the evaluation sweeps as CSV.
//!
//! Exit status is 0 on success, 2 on a usage error and 1 on any other
//! failure.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use concurrent_codes::analysis::{
    expected_hash_calls, expected_marks, processing_gain_cc, processing_gain_cdma, signal_to_noise,
};
use concurrent_codes::cdma::{cdma_decode, cdma_encode, CdmaParams, EXPANSION};
use concurrent_codes::channel::{BurstStart, ChannelSpec, NoiseKind};
use concurrent_codes::experiment::{run_experiment, write_csv, ExperimentConfig, ExperimentId};
use concurrent_codes::sync::{
    acceptable_noise, expected_principle_marks, false_correlation_rate, synchronize, DEFAULT_Q_THRESHOLD,
};
use concurrent_codes::{
    build_table_hash, decode, encode, CodeParams, Codeword, DecodeOptions, HashFunction, Message, ModularHash,
};

#[derive(Parser, Debug)]
#[command(
    name = "concode",
    version,
    about = "Concurrent-code codec, channel simulator and experiment runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Encode messages into a codeword file; prints the mark count
    Encode(EncodeArgs),
    /// Decode a codeword file; prints one message per line and the hash-call count
    Decode(DecodeArgs),
    /// Add noise and/or a burst erasure to a codeword file
    Corrupt(CorruptArgs),
    /// List offsets in a stream whose principle-mark score reaches the threshold
    Sync(SyncArgs),
    /// Encode messages with the Hamming + interleaving + spreading baseline
    CdmaEncode(CdmaEncodeArgs),
    /// Decode a baseline codeword
    CdmaDecode(CdmaDecodeArgs),
    /// Evaluate a closed-form model
    Model(ModelArgs),
    /// Run a seeded parameter sweep and write CSV
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    /// One '0'/'1' character per bit
    Text01,
    /// u32 little-endian length, then bits packed LSB-first
    Binary,
}

#[derive(Args, Debug)]
struct CodeArgs {
    /// Data bits per message
    #[arg(long, default_value_t = 8)]
    n: u32,
    /// Checksum bits per message
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Codeword length; anything other than 2^(n+k+1) selects an open code
    #[arg(long)]
    codeword_bits: Option<usize>,
    /// Seed of the hash table
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct MessageSource {
    /// Comma-separated messages, MSB first (e.g. 1001,1101)
    #[arg(long, value_delimiter = ',')]
    messages: Option<Vec<String>>,
    /// File with one message per line, MSB first
    #[arg(long)]
    messages_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EncodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    source: MessageSource,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text01)]
    format: Format,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    input: PathBuf,
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, value_enum, default_value_t = Format::Text01)]
    format: Format,
    /// Treat improbably long zero runs as erasures and bridge them
    #[arg(long)]
    bridge_gaps: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NoiseArg {
    Mark,
    Flip,
}

#[derive(Args, Debug)]
struct CorruptArgs {
    input: PathBuf,
    /// Fraction of positions hit by noise
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, value_enum, default_value_t = NoiseArg::Mark)]
    noise_kind: NoiseArg,
    /// Length of the zeroed burst as a fraction of the codeword
    #[arg(long, default_value_t = 0.0)]
    gap_fraction: f64,
    /// Burst start; uniform over valid starts when omitted
    #[arg(long)]
    gap_start: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text01)]
    format: Format,
}

#[derive(Args, Debug)]
struct SyncArgs {
    input: PathBuf,
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, default_value_t = DEFAULT_Q_THRESHOLD)]
    q_threshold: u32,
    #[arg(long, value_enum, default_value_t = Format::Text01)]
    format: Format,
}

#[derive(Args, Debug)]
struct CdmaEncodeArgs {
    #[command(flatten)]
    source: MessageSource,
    #[arg(long, default_value_t = 2048)]
    codeword_bits: usize,
    /// Seed of the spreading codes
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text01)]
    format: Format,
}

#[derive(Args, Debug)]
struct CdmaDecodeArgs {
    input: PathBuf,
    /// Number of encoded messages
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 8)]
    n: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text01)]
    format: Format,
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// 1 marks, 2 hash calls, 3 signal-to-noise, 5 expected correlation,
    /// 7 chance correlations, 8 acceptable noise, 9 CDMA gain, 10 concurrent-code gain
    #[arg(long)]
    eq: u32,
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    q: Option<u32>,
    /// Tolerated chance correlations per codeword
    #[arg(long)]
    f: Option<f64>,
    #[arg(long = "log2L")]
    log2_l: Option<u32>,
    #[arg(long, default_value_t = 8)]
    n: u32,
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Decimal places printed
    #[arg(long, default_value_t = 3)]
    digits: usize,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long)]
    experiment: String,
    #[arg(long)]
    repeats: Option<u32>,
    /// Master seed; repeat i uses seed + i
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    /// Message count for noise and gap sweeps
    #[arg(long)]
    m: Option<usize>,
    /// Comma-separated values of the primary axis
    #[arg(long, value_delimiter = ',')]
    sweep: Option<Vec<f64>>,
    /// Comma-separated noise levels (fig3, fig4, fig12)
    #[arg(long, value_delimiter = ',')]
    noise_levels: Option<Vec<f64>>,
    #[arg(long)]
    q_threshold: Option<u32>,
    /// CSV destination; standard output when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Missing or contradictory arguments that clap cannot catch.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Corrupt(a) => cmd_corrupt(a),
        Command::Sync(a) => cmd_sync(a),
        Command::CdmaEncode(a) => cmd_cdma_encode(a),
        Command::CdmaDecode(a) => cmd_cdma_decode(a),
        Command::Model(a) => cmd_model(a),
        Command::Experiment(a) => cmd_experiment(a),
    }
}

fn read_codeword(path: &Path, format: Format) -> Result<Codeword> {
    let cw = match format {
        Format::Text01 => {
            Codeword::read_text01(File::open(path).with_context(|| format!("opening {}", path.display()))?)
        }
        Format::Binary => {
            Codeword::from_binary(&fs::read(path).with_context(|| format!("reading {}", path.display()))?)
        }
    };
    cw.with_context(|| format!("parsing {}", path.display()))
}

fn write_codeword(cw: &Codeword, path: &Path, format: Format) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    match format {
        Format::Text01 => cw.write_text01(&mut w)?,
        Format::Binary => w.write_all(&cw.to_binary())?,
    }
    w.flush()?;
    Ok(())
}

fn load_messages(source: &MessageSource) -> Result<Vec<Message>> {
    let lines: Vec<String> = match (&source.messages, &source.messages_file) {
        (Some(list), _) => list.clone(),
        (None, Some(path)) => fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?
            .lines()
            .map(str::to_string)
            .collect(),
        (None, None) => return Err(usage("one of --messages or --messages-file is required")),
    };
    lines
        .iter()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty())
        .map(|l| Message::parse(l).with_context(|| format!("bad message '{l}'")))
        .collect()
}

fn code(args: &CodeArgs) -> Result<(CodeParams, Box<dyn HashFunction>)> {
    let closed = CodeParams::closed(args.n, args.k)?;
    match args.codeword_bits {
        Some(len) if len != closed.codeword_len() => {
            let params = CodeParams::open(args.n, args.k, len)?;
            let hash = ModularHash::for_params(&params, args.seed)?;
            Ok((params, Box::new(hash)))
        }
        _ => {
            let hash = build_table_hash(&closed, args.seed)?;
            Ok((closed, Box::new(hash)))
        }
    }
}

fn cmd_encode(a: EncodeArgs) -> Result<()> {
    let (params, hash) = code(&a.code)?;
    let msgs = load_messages(&a.source)?;
    let cw = encode(&msgs, &hash, &params)?;
    write_codeword(&cw, &a.out, a.format)?;
    println!("{}", cw.mark_count());
    Ok(())
}

fn cmd_decode(a: DecodeArgs) -> Result<()> {
    let (params, hash) = code(&a.code)?;
    let cw = read_codeword(&a.input, a.format)?;
    let options = if a.bridge_gaps {
        DecodeOptions::bridging()
    } else {
        DecodeOptions::default()
    };
    let res = decode(&cw, &hash, &params, &options)?;
    let mut out = io::stdout().lock();
    for m in &res.messages {
        writeln!(out, "{m}")?;
    }
    for g in &res.gaps_used {
        writeln!(out, "gap {} {}", g.start, g.length)?;
    }
    writeln!(out, "hash_calls {}", res.hash_calls)?;
    Ok(())
}

fn cmd_corrupt(a: CorruptArgs) -> Result<()> {
    let cw = read_codeword(&a.input, a.format)?;
    let spec = ChannelSpec {
        noise_fraction: a.noise,
        gap_fraction: a.gap_fraction,
        burst_start: a.gap_start.map_or(BurstStart::Random, BurstStart::At),
        noise_kind: match a.noise_kind {
            NoiseArg::Mark => NoiseKind::Mark,
            NoiseArg::Flip => NoiseKind::Flip,
        },
        seed: a.seed,
    };
    let rx = spec.apply(&cw)?;
    write_codeword(&rx.codeword, &a.out, a.format)?;
    println!("marks {}", rx.codeword.mark_count());
    if let Some(b) = rx.burst {
        println!("burst {} {}", b.start, b.length);
    }
    Ok(())
}

fn cmd_sync(a: SyncArgs) -> Result<()> {
    let (params, hash) = code(&a.code)?;
    let stream = read_codeword(&a.input, a.format)?;
    let mut out = io::stdout().lock();
    for c in synchronize(&stream, &hash, &params, a.q_threshold)? {
        writeln!(out, "{} {}", c.offset, c.score)?;
    }
    Ok(())
}

fn cmd_cdma_encode(a: CdmaEncodeArgs) -> Result<()> {
    let msgs = load_messages(&a.source)?;
    let Some(first) = msgs.first() else {
        bail!("no messages to encode");
    };
    let params = CdmaParams::with_data_bits(msgs.len(), first.len() as usize, a.codeword_bits, a.seed)?;
    let cw = cdma_encode(&msgs, &params)?;
    write_codeword(&cw, &a.out, a.format)?;
    println!("{}", cw.mark_count());
    Ok(())
}

fn cmd_cdma_decode(a: CdmaDecodeArgs) -> Result<()> {
    let cw = read_codeword(&a.input, a.format)?;
    let params = CdmaParams::with_data_bits(a.m, a.n as usize, cw.len(), a.seed)?;
    let mut out = io::stdout().lock();
    for m in cdma_decode(&cw, &params)? {
        writeln!(out, "{m}")?;
    }
    Ok(())
}

fn need<T>(value: Option<T>, flag: &str, eq: u32) -> Result<T> {
    value.ok_or_else(|| usage(format!("--eq {eq} needs {flag}")))
}

fn cmd_model(a: ModelArgs) -> Result<()> {
    let params = CodeParams::closed(a.n, a.k)?;
    let n_eff = params.hashes_per_message() as f64;
    let len = match a.log2_l {
        Some(b) if b >= usize::BITS => return Err(usage(format!("--log2L {b} is too large"))),
        Some(b) => 1usize << b,
        None => params.codeword_len(),
    };
    let value = match a.eq {
        1 => expected_marks(need(a.m, "--m", 1)?, n_eff),
        2 => expected_hash_calls(need(a.m, "--m", 2)?, need(a.mu, "--mu", 2)?, n_eff),
        3 => signal_to_noise(need(a.m, "--m", 3)?, need(a.mu, "--mu", 3)?, &params)?,
        5 => {
            let m = need(a.m, "--m", 5)?;
            if m < 1.0 || m.fract() != 0.0 {
                bail!("--m must be a positive whole number for --eq 5");
            }
            expected_principle_marks(m as usize)?
        }
        7 => false_correlation_rate(need(a.q, "--q", 7)?, need(a.mu, "--mu", 7)?, len),
        8 => acceptable_noise(need(a.q, "--q", 8)?, need(a.f, "--f", 8)?, len),
        9 => processing_gain_cdma(need(a.m, "--m", 9)?, a.n, a.k, EXPANSION as f64),
        10 => processing_gain_cc(a.n, a.k),
        other => {
            return Err(usage(format!(
                "no model for --eq {other}; choose 1, 2, 3, 5, 7, 8, 9 or 10"
            )))
        }
    };
    println!("{value:.prec$}", prec = a.digits);
    Ok(())
}

fn cmd_experiment(a: ExperimentArgs) -> Result<()> {
    let id: ExperimentId = a
        .experiment
        .parse()
        .map_err(|e: concurrent_codes::Error| usage(e.to_string()))?;
    let mut cfg = ExperimentConfig::new(id);
    cfg.master_seed = a.seed;
    if let Some(r) = a.repeats {
        cfg.repeats = r;
    }
    if let Some(n) = a.n {
        cfg.n = n;
    }
    if let Some(k) = a.k {
        cfg.k = k;
    }
    if let Some(m) = a.m {
        cfg.messages = m;
    }
    if let Some(s) = a.sweep {
        cfg.sweep = s;
    }
    if let Some(levels) = a.noise_levels {
        cfg.noise_levels = levels;
    }
    if let Some(q) = a.q_threshold {
        cfg.q_threshold = q;
    }
    if a.m.is_none() && matches!(id, ExperimentId::Fig5 | ExperimentId::Fig9 | ExperimentId::Fig10) {
        eprintln!(
            "note: {id} uses the default of {} messages (override with --m)",
            cfg.messages
        );
    }
    let records = run_experiment(&cfg)?;
    match a.out {
        Some(path) => {
            let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(&records, BufWriter::new(file))?;
        }
        None => write_csv(&records, io::stdout().lock())?,
    }
    Ok(())
}
