use std::path::PathBuf;

use clap::Args;
use lacunary::detect::{DetectionReport, Epsilon};
use lacunary::dispatch::{detect_file, FileDetection};
use lacunary::multivar::SubstitutionWitness;
use serde::Serialize;

use crate::{emit, read_poly, rng_for, Outcome, SeedArg};

#[derive(Args)]
pub struct DetectArgs {
    /// Polynomial file.
    file: PathBuf,
    /// Test only this prime exponent.
    #[arg(long)]
    r: Option<u64>,
    /// Failure probability, as `a/b`, `2^-k` or a decimal.
    #[arg(long, default_value = "2^-20")]
    epsilon: Epsilon,
    #[command(flatten)]
    seed: SeedArg,
    /// Print the full report as JSON.
    #[arg(long)]
    json: bool,
}

/// The JSON report: ring, variable count and the detector trace.
#[derive(Serialize)]
pub struct DetectOutput {
    pub ring: String,
    pub vars: usize,
    #[serde(flatten)]
    pub report: DetectionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<SubstitutionWitness>>,
}

pub fn run(args: &DetectArgs) -> anyhow::Result<Outcome> {
    let file = read_poly(&args.file)?;
    let seed = args.seed.resolve()?;
    let mut rng = rng_for(seed);
    let FileDetection {
        mut report,
        witnesses,
    } = detect_file(&file, args.r, &args.epsilon, &mut rng)?;
    report.seed = Some(seed);
    let verdict = report.verdict;
    if args.json {
        let out = DetectOutput {
            ring: file.ring.to_string(),
            vars: file.vars,
            report,
            witnesses,
        };
        emit(&(serde_json::to_string_pretty(&out)? + "\n"))?;
    } else {
        match report.r_found {
            Some(r) => println!("perfect power: r = {r} (seed {seed})"),
            None => println!("not a perfect power (seed {seed})"),
        }
    }
    Ok(if verdict { Outcome::Yes } else { Outcome::No })
}
