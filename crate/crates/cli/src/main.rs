use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Progressive Reed-Solomon storage: encode files into shards, retrieve
/// them through crashed and Byzantine nodes, and study the access cost.
#[derive(Parser, Debug)]
#[command(name = "prs", version)]
struct Cli {
    /// Worker threads for parallel commands.
    #[arg(long, global = true, env = "PRS_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Split a file into n shards plus a manifest.
    Encode(EncodeArgs),
    /// Rebuild a file from a shard directory.
    Retrieve(RetrieveArgs),
    /// Closed-form access statistics.
    Analyze(AnalyzeArgs),
    /// Monte-Carlo retrieval experiments.
    Simulate(SimulateArgs),
    /// Time the decoders against each other.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct EncodeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Field width; n = 2^m - 1 shards are written.
    #[arg(long)]
    pub m: u32,
    /// Information symbols per group.
    #[arg(long = "khat")]
    pub k_hat: usize,
    /// Primitive polynomial, e.g. 0x409.
    #[arg(long, value_parser = parse_hex)]
    pub prim_poly: Option<u32>,
}

#[derive(Args, Debug)]
pub struct RetrieveArgs {
    #[arg(long)]
    pub shard_dir: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Shards to corrupt in memory before reading, e.g. 3,17,250.
    #[arg(long, value_delimiter = ',')]
    pub corrupt_list: Vec<usize>,
    /// Shards to treat as crashed.
    #[arg(long, value_delimiter = ',')]
    pub crash_list: Vec<usize>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "khat")]
    pub k_hat: usize,
    #[arg(long)]
    pub p: f64,
    /// Crashed nodes.
    #[arg(long, default_value_t = 0)]
    pub s: usize,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "khat")]
    pub k_hat: usize,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub s: usize,
    /// Payload bytes per trial; one group's worth when omitted.
    #[arg(long)]
    pub payload_len: Option<u64>,
    /// Summary output; `.csv` writes the histogram, anything else JSON.
    /// Stdout (JSON) when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Compare with the closed form and exit 1 on any violated check.
    #[arg(long)]
    pub check: bool,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "ird,restart,genie")]
    pub algorithms: Vec<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "khat")]
    pub k_hat: usize,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_hex(s: &str) -> Result<u32, String> {
    let digits = s.trim_start_matches("0x").trim_start_matches("0X");
    u32::from_str_radix(digits, 16).map_err(|e| format!("{s:?} is not a hex number: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let result = match cli.cmd {
        Command::Encode(a) => commands::encode(a),
        Command::Retrieve(a) => commands::retrieve(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Bench(a) => commands::bench(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
