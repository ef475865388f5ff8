use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use lacunary::bench::{
    median_seconds, replay, run_sweep, Algorithm, BenchRecord, Sweep, SweepConfig,
};
use lacunary::detect::Epsilon;

use crate::{parse_u64, Outcome, SeedArg};

#[derive(Args)]
pub struct BenchArgs {
    /// `sparse`, `dense` or `root`.
    #[arg(long, required_unless_present = "replay")]
    mode: Option<Algorithm>,
    /// `degree` or `sparsity`.
    #[arg(long, default_value = "degree")]
    sweep: Sweep,
    /// Output CSV of bench records.
    #[arg(long, required_unless_present = "replay")]
    csv: Option<PathBuf>,
    /// Degrees of f (degree sweep) or root term counts (sparsity sweep).
    #[arg(long, value_parser = parse_u64, value_delimiter = ',')]
    points: Option<Vec<u64>>,
    /// Terms of the root in a degree sweep.
    #[arg(long, default_value_t = 30)]
    root_terms: usize,
    /// Degree of f in a sparsity sweep.
    #[arg(long, value_parser = parse_u64, default_value = "2^30")]
    degree: u64,
    #[arg(long, default_value_t = 2)]
    r: u64,
    #[arg(long, default_value_t = 32)]
    coeff_bits: u32,
    /// Instances per point.
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value = "2^-10")]
    epsilon: Epsilon,
    #[command(flatten)]
    seed: SeedArg,
    /// Re-run every row of this CSV and compare verdicts.
    #[arg(long, conflicts_with_all = ["mode", "csv"])]
    replay: Option<PathBuf>,
}

fn default_points(mode: Algorithm, sweep: Sweep) -> Vec<u64> {
    match (sweep, mode) {
        (Sweep::Sparsity, _) => vec![2, 4, 8, 16, 32],
        (Sweep::Degree, Algorithm::DenseNewtonBaseline) => {
            (8..=16).step_by(2).map(|k| 1 << k).collect()
        }
        (Sweep::Degree, _) => (20..=40).step_by(4).map(|k| 1 << k).collect(),
    }
}

pub fn run(args: &BenchArgs) -> anyhow::Result<Outcome> {
    if let Some(path) = &args.replay {
        return replay_csv(path, &args.epsilon);
    }
    let mode = args.mode.expect("required by clap");
    let csv_path = args.csv.as_ref().expect("required by clap");
    let config = SweepConfig {
        algorithm: mode,
        sweep: args.sweep,
        points: args
            .points
            .clone()
            .unwrap_or_else(|| default_points(mode, args.sweep)),
        root_terms: args.root_terms,
        degree: args.degree,
        r: args.r,
        coeff_bits: args.coeff_bits,
        trials: args.trials,
        seed: args.seed.resolve()?,
        epsilon: args.epsilon.clone(),
    };
    let records = run_sweep(&config)?;
    let mut writer = csv::Writer::from_path(csv_path)
        .with_context(|| format!("creating {}", csv_path.display()))?;
    for rec in &records {
        writer.serialize(rec)?;
    }
    writer.flush()?;
    println!("{mode} sweep, seed {}", config.seed);
    println!("{:>16} {:>10} {:>12}", "degree", "terms", "median s");
    for chunk in records.chunks(config.trials.max(1)) {
        println!(
            "{:>16} {:>10} {:>12.6}",
            chunk[0].degree,
            chunk[0].sparsity,
            median_seconds(chunk)
        );
    }
    Ok(Outcome::Yes)
}

fn replay_csv(path: &PathBuf, epsilon: &Epsilon) -> anyhow::Result<Outcome> {
    let mut reader =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let mut rows = 0;
    let mut mismatches = 0;
    for row in reader.deserialize() {
        let rec: BenchRecord = row?;
        rows += 1;
        if replay(&rec, epsilon)? != rec.verdict {
            mismatches += 1;
            eprintln!("row {}: verdict changed (seed {})", rec.index, rec.seed);
        }
    }
    println!("replayed {rows} rows, {mismatches} mismatches");
    Ok(if mismatches == 0 {
        Outcome::Yes
    } else {
        Outcome::No
    })
}
