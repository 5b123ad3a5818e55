//! `frs`: encode, corrupt and list-decode folded Reed-Solomon words, and run
//! seeded experiment grids.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use frs_core::frs::{corrupt, encode, read_word, write_word};
use frs_core::harness::{bench_config, run_config, run_experiment};
use frs_core::poly::parse_coefficients;
use frs_core::{decode_end_to_end, Algo, DecodeOptions, FoldedWord, FrsParams, Polynomial, Rational};

#[derive(Parser)]
#[command(name = "frs", version, about = "Folded Reed-Solomon list decoding toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a message polynomial (coefficients low degree first).
    Encode {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long = "rate-num")]
        rate_num: usize,
        #[arg(long = "rate-den")]
        rate_den: usize,
        #[arg(long)]
        message: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replace `errors` folded symbols with different random values.
    Corrupt {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        errors: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// List-decode a received word and write a one-line JSON report.
    Decode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        algo: Algo,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        eps: Option<Rational>,
        #[arg(long)]
        beta: Option<Rational>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also run the brute-force oracle and record agreement.
        #[arg(long)]
        oracle: bool,
        /// Code rate numerator; read from the `.rate` sidecar when omitted.
        #[arg(long = "rate-num", requires = "rate_den")]
        rate_num: Option<usize>,
        #[arg(long = "rate-den", requires = "rate_num")]
        rate_den: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a grid described by a config file.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a built-in suite.
    Bench {
        #[arg(long, value_parser = ["scaling", "success", "listsize"])]
        suite: String,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Path of the rate sidecar kept next to a word file. The word format has no
/// room for the rate, so `encode` and `corrupt` leave it here for `decode`.
fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".rate");
    PathBuf::from(s)
}

fn message_length(n: usize, num: usize, den: usize) -> Result<usize> {
    if den == 0 || num == 0 || num >= den {
        bail!("rate {num}/{den} must lie strictly between 0 and 1");
    }
    if (n * num) % den != 0 {
        bail!("n * rate = {n} * {num}/{den} is not an integer");
    }
    Ok(n * num / den)
}

fn load_word(path: &Path) -> Result<(u64, FoldedWord)> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_word(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))
}

fn save_word(path: &Path, q: u64, w: &FoldedWord) -> Result<()> {
    let mut out = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    write_word(&mut out, q, w)?;
    out.flush()?;
    Ok(())
}

fn read_rate(path: &Path) -> Result<Option<(usize, usize)>> {
    let side = sidecar(path);
    if !side.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&side)?;
    let nums: Vec<usize> = text
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("parsing {}", side.display()))?;
    match nums[..] {
        [a, b] => Ok(Some((a, b))),
        _ => bail!("{} should hold `num den`", side.display()),
    }
}

fn write_rate(path: &Path, rate: (usize, usize)) -> Result<()> {
    std::fs::write(sidecar(path), format!("{} {}\n", rate.0, rate.1))?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Encode { q, n, m, rate_num, rate_den, message, out } => {
            let rn = message_length(n, rate_num, rate_den)?;
            let params = FrsParams::new(q, n, m, rn)?;
            let text = std::fs::read_to_string(&message).with_context(|| format!("reading {}", message.display()))?;
            let coeffs = parse_coefficients(&text)?;
            if coeffs.len() > rn {
                bail!("message has {} coefficients, at most {rn} allowed", coeffs.len());
            }
            if let Some(c) = coeffs.iter().find(|&&c| c >= q) {
                bail!("coefficient {c} not reduced mod {q}");
            }
            let f = Polynomial::from_u64s(params.field(), &coeffs);
            save_word(&out, q, &encode(&params, &f)?)?;
            write_rate(&out, (rate_num, rate_den))?;
        }
        Command::Corrupt { input, errors, seed, out } => {
            let (q, w) = load_word(&input)?;
            let field = frs_core::PrimeField::new(q)?;
            save_word(&out, q, &corrupt(&field, &w, errors, seed)?)?;
            if let Some(rate) = read_rate(&input)? {
                write_rate(&out, rate)?;
            }
        }
        Command::Decode { input, algo, s, eps, beta, seed, oracle, rate_num, rate_den, out } => {
            let (q, g) = load_word(&input)?;
            let (num, den) = match (rate_num, rate_den) {
                (Some(a), Some(b)) => (a, b),
                _ => read_rate(&input)?.with_context(|| {
                    format!("no rate given: pass --rate-num/--rate-den or provide {}", sidecar(&input).display())
                })?,
            };
            let n = g.entries().len();
            let params = FrsParams::new(q, n, g.fold(), message_length(n, num, den)?)?;
            let mut opts = DecodeOptions { s, eps, seed, oracle, ..DecodeOptions::default() };
            if let Some(b) = beta {
                opts.beta = b;
            }
            let report = decode_end_to_end(&params, &g, algo, &opts)?;
            let mut w = BufWriter::new(File::create(&out).with_context(|| format!("creating {}", out.display()))?);
            writeln!(w, "{}", serde_json::to_string(&report)?)?;
            w.flush()?;
            println!("{algo}: {} codeword(s) within radius {}", report.output.len(), report.radius);
            if report.agreement == Some(false) {
                bail!("decoder output disagrees with the brute-force oracle");
            }
        }
        Command::Experiment { config, out } => {
            let aggs = run_experiment(&config, &out)?;
            println!("{} cell(s) written to {}", aggs.len(), out.display());
        }
        Command::Bench { suite, out } => {
            let aggs = run_config(&bench_config(&suite)?, &out)?;
            println!("{suite}: {} cell(s) written to {}", aggs.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    run(Cli::parse())
}
