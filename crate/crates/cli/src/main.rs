//! `lacunary`: perfect-power detection, roots, instance generation and
//! benchmarks for sparse polynomials.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use lacunary::io::PolyFile;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod bench;
mod conjecture;
mod detect;
mod gen;
mod root;

/// Environment variable that overrides every `--seed`.
pub const SEED_ENV: &str = "LACUNARY_SEED";

#[derive(Parser)]
#[command(
    name = "lacunary",
    version,
    about = "Perfect powers of lacunary polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a polynomial is a perfect power (exit 0 yes, 1 no).
    Detect(detect::DetectArgs),
    /// Compute the r-th root of a polynomial (exit 3 if there is none).
    Root(root::RootArgs),
    /// Generate a random root h and its power h^r.
    Gen(gen::GenArgs),
    /// Time the detectors over a sweep of generated instances.
    Bench(bench::BenchArgs),
    /// Scan random roots for truncated-power sparsity violations.
    Conjecture(conjecture::ConjectureArgs),
}

#[derive(Args, Clone, Debug)]
pub struct SeedArg {
    /// Seed for all randomness; drawn at random and reported when absent.
    #[arg(long)]
    seed: Option<u64>,
}

impl SeedArg {
    /// `LACUNARY_SEED`, then `--seed`, then a fresh random seed.
    pub fn resolve(&self) -> anyhow::Result<u64> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            return v
                .trim()
                .parse()
                .with_context(|| format!("{SEED_ENV}={v} is not a u64"));
        }
        Ok(self.seed.unwrap_or_else(rand::random))
    }
}

/// How a command finished.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Yes,
    No,
    NotAPower,
}

impl From<Outcome> for ExitCode {
    fn from(o: Outcome) -> ExitCode {
        ExitCode::from(match o {
            Outcome::Yes => 0,
            Outcome::No => 1,
            Outcome::NotAPower => 3,
        })
    }
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn read_poly(path: &Path) -> anyhow::Result<PolyFile> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    PolyFile::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Prints to standard output; a closed pipe is not an error.
pub fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

pub fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Parses `12345`, `2^40` or `1<<40`.
pub fn parse_u64(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let bad = || format!("`{s}` is not a non-negative integer");
    if let Some((base, exp)) = s.split_once('^') {
        let base: u64 = base.trim().parse().map_err(|_| bad())?;
        let exp: u32 = exp.trim().parse().map_err(|_| bad())?;
        return base.checked_pow(exp).ok_or_else(bad);
    }
    if let Some((a, b)) = s.split_once("<<") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        return a.checked_shl(b).filter(|v| v >> b == a).ok_or_else(bad);
    }
    s.parse().map_err(|_| bad())
}

pub fn output_path(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Detect(args) => detect::run(&args),
        Command::Root(args) => root::run(&args),
        Command::Gen(args) => gen::run(&args),
        Command::Bench(args) => bench::run(&args),
        Command::Conjecture(args) => conjecture::run(&args),
    };
    match result {
        Ok(outcome) => outcome.into(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_expressions() {
        assert_eq!(parse_u64("2^40"), Ok(1 << 40));
        assert_eq!(parse_u64("1<<20"), Ok(1 << 20));
        assert_eq!(parse_u64(" 77 "), Ok(77));
        assert!(parse_u64("2^64").is_err());
        assert!(parse_u64("1<<64").is_err());
        assert!(parse_u64("-3").is_err());
    }

    #[test]
    fn prefixes() {
        assert_eq!(
            output_path(Path::new("out/sq"), ".meta.json"),
            PathBuf::from("out/sq.meta.json")
        );
    }
}
