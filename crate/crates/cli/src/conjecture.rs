use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::Args;
use lacunary::conjecture::{conjecture_scan_field, conjecture_scan_z, ScanConfig, ScanReport};
use lacunary::field::SmallPrimeField;
use lacunary::io::RingSpec;
use num_bigint::BigUint;
use serde::Serialize;

use crate::{parse_u64, Outcome, SeedArg};

#[derive(Args)]
pub struct ConjectureArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[command(flatten)]
    seed: SeedArg,
    /// Output CSV with one row per (trial, i) comparison.
    #[arg(long)]
    csv: PathBuf,
    /// `Z` or `GF:p`; the characteristic should exceed r times the degree.
    #[arg(long, default_value = "Z")]
    ring: RingSpec,
    /// Optional CSV of Newton intermediate sizes.
    #[arg(long)]
    newton_csv: Option<PathBuf>,
    /// Largest number of terms of h.
    #[arg(long, default_value_t = 20)]
    max_terms: usize,
    /// Largest degree of h.
    #[arg(long, value_parser = parse_u64, default_value = "2^40")]
    max_degree: u64,
    /// Largest exponent r.
    #[arg(long, default_value_t = 6)]
    max_r: u64,
    #[arg(long, default_value_t = 100)]
    coeff_bound: u64,
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> anyhow::Result<()> {
    let mut writer =
        csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn run(args: &ConjectureArgs) -> anyhow::Result<Outcome> {
    if args.max_terms == 0 || args.max_degree == 0 || args.max_r < 2 {
        bail!("need --max-terms >= 1, --max-degree >= 1 and --max-r >= 2");
    }
    let config = ScanConfig {
        trials: args.trials,
        terms: (1, args.max_terms),
        degree: (1, args.max_degree),
        r: (2, args.max_r),
        coeff_bound: BigUint::from(args.coeff_bound.max(1)),
        ..ScanConfig::default()
    };
    let seed = args.seed.resolve()?;
    let report: ScanReport = match &args.ring {
        RingSpec::Integers => conjecture_scan_z(&config, seed)?,
        RingSpec::Prime(p) if p.bit(0) && p.bits() <= SmallPrimeField::MAX_BITS => {
            conjecture_scan_field(&SmallPrimeField::new(p)?, &config, seed)?
        }
        RingSpec::Prime(_) => {
            let field = args.ring.prime_field()?.expect("prime ring");
            conjecture_scan_field(&field, &config, seed)?
        }
        RingSpec::Extension { .. } => bail!("conjecture supports Z and GF:p"),
    };
    write_csv(&args.csv, &report.records)?;
    if let Some(path) = &args.newton_csv {
        write_csv(path, &report.newton)?;
    }
    let violations = report.violations().count();
    let over_plus = report.newton.iter().filter(|n| n.exceeds_plus).count();
    let over_minus = report.newton.iter().filter(|n| n.exceeds_minus).count();
    println!("trials: {} (seed {seed})", args.trials);
    println!(
        "comparisons: {}",
        report.records.len() - report.degenerate_trials()
    );
    println!("degenerate trials: {}", report.degenerate_trials());
    println!("violations: {violations}");
    println!(
        "newton runs: {}, above 2t(t+r): {over_plus}, above 2t(t-r): {over_minus}",
        report.newton.len()
    );
    for v in report.violations().take(10) {
        println!(
            "  trial {}: r = {}, i = {}, {} > {}",
            v.trial, v.r, v.i, v.lhs, v.rhs
        );
    }
    Ok(Outcome::Yes)
}
