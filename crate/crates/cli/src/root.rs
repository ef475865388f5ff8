use std::path::PathBuf;

use clap::Args;
use lacunary::dispatch::root_file;
use lacunary::error::Error;
use lacunary::root::{NewtonOptions, RootDiagnostics};
use serde::Serialize;

use crate::{emit, read_poly, rng_for, write_text, Outcome, SeedArg};

#[derive(Args)]
pub struct RootArgs {
    /// Polynomial file.
    file: PathBuf,
    /// Exponent of the root.
    #[arg(long)]
    r: u64,
    #[command(flatten)]
    seed: SeedArg,
    /// Write the root here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Abort once an intermediate result exceeds this many terms.
    #[arg(long)]
    sparsity_ceiling: Option<usize>,
    /// Print a JSON summary (with the root file inline unless --out is given).
    #[arg(long)]
    json: bool,
}

#[derive(Serialize)]
struct RootOutput {
    ring: String,
    vars: usize,
    r: u64,
    seed: u64,
    certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostics: Option<RootDiagnostics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    root: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

pub fn run(args: &RootArgs) -> anyhow::Result<Outcome> {
    let file = read_poly(&args.file)?;
    let seed = args.seed.resolve()?;
    let mut rng = rng_for(seed);
    let options = NewtonOptions {
        sparsity_ceiling: args.sparsity_ceiling,
    };
    let mut out = RootOutput {
        ring: file.ring.to_string(),
        vars: file.vars,
        r: args.r,
        seed,
        certified: false,
        diagnostics: None,
        root: None,
        reason: None,
    };
    let found = match root_file(&file, args.r, &options, &mut rng) {
        Ok(found) => found,
        Err(e @ (Error::NotAPower(_) | Error::SparsityCeiling { .. })) => {
            if args.json {
                out.reason = Some(e.to_string());
                emit(&(serde_json::to_string_pretty(&out)? + "\n"))?;
            } else {
                eprintln!("no root: {e}");
            }
            return Ok(Outcome::NotAPower);
        }
        Err(e) => return Err(e.into()),
    };
    let text = found.root.to_string();
    out.certified = found.certified;
    out.diagnostics = found.diagnostics;
    if let Some(path) = &args.out {
        write_text(path, &text)?;
    } else if args.json {
        out.root = Some(text);
    } else {
        emit(&text)?;
    }
    if args.json {
        emit(&(serde_json::to_string_pretty(&out)? + "\n"))?;
    } else {
        eprintln!(
            "{} root, r = {} (seed {seed})",
            if out.certified {
                "certified"
            } else {
                "uncertified"
            },
            args.r
        );
    }
    Ok(Outcome::Yes)
}
