use std::path::PathBuf;

use anyhow::bail;
use clap::Args;
use lacunary::field::PrimeField;
use lacunary::generate::{random_multi_sparse, random_sparse, RootShape};
use lacunary::io::{PolyFile, RingSpec};
use lacunary::multivar::MultiSparsePoly;
use lacunary::poly::SparsePoly;
use lacunary::ring::{Integers, Ring};
use num_bigint::BigUint;
use serde::Serialize;

use crate::{output_path, parse_u64, rng_for, write_text, Outcome, SeedArg};

#[derive(Args)]
pub struct GenArgs {
    /// Number of terms of the root h.
    #[arg(long)]
    terms: usize,
    /// Degree of h (with --vars > 1, the bound on each partial degree).
    #[arg(long, value_parser = parse_u64)]
    degree: u64,
    /// The exponent r; the power file holds h^r.
    #[arg(long)]
    power: u64,
    /// `Z` or `GF:p`.
    #[arg(long, default_value = "Z")]
    ring: RingSpec,
    /// Coefficients of h are drawn from [-B, B] without zero.
    #[arg(long, default_value_t = 100)]
    coeff_bound: u64,
    #[arg(long, default_value_t = 1)]
    vars: usize,
    #[command(flatten)]
    seed: SeedArg,
    /// Writes PREFIX.root.sp, PREFIX.power.sp and PREFIX.meta.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct Norms {
    one: String,
    inf: String,
    two_squared: String,
}

#[derive(Serialize)]
struct Meta {
    ring: String,
    vars: usize,
    r: u64,
    seed: u64,
    coeff_bound: u64,
    root_terms: usize,
    root_degree: String,
    power_terms: usize,
    power_degree: String,
    /// Detection rejects monomials.
    monomial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    power_norms: Option<Norms>,
}

pub fn run(args: &GenArgs) -> anyhow::Result<Outcome> {
    if args.power == 0 {
        bail!("--power must be positive");
    }
    if args.coeff_bound == 0 {
        bail!("--coeff-bound must be positive");
    }
    let seed = args.seed.resolve()?;
    let (root, power, mut meta) = match &args.ring {
        RingSpec::Integers => generate(&Integers, args, seed)?,
        RingSpec::Prime(_) => {
            let field = args.ring.prime_field()?.expect("prime ring");
            generate(&field, args, seed)?
        }
        RingSpec::Extension { .. } => bail!("gen supports Z and GF:p"),
    };
    if args.ring == RingSpec::Integers {
        meta.power_norms = Some(norms_of(&power)?);
    }
    write_text(&output_path(&args.out, ".root.sp"), &root.to_string())?;
    write_text(&output_path(&args.out, ".power.sp"), &power.to_string())?;
    write_text(
        &output_path(&args.out, ".meta.json"),
        &(serde_json::to_string_pretty(&meta)? + "\n"),
    )?;
    println!(
        "h: {} terms, h^{}: {} terms (seed {seed})",
        meta.root_terms, meta.r, meta.power_terms
    );
    if meta.monomial {
        eprintln!("note: the power is a monomial, which detection rejects");
    }
    Ok(Outcome::Yes)
}

fn generate<R: GenRing>(
    ring: &R,
    args: &GenArgs,
    seed: u64,
) -> anyhow::Result<(PolyFile, PolyFile, Meta)> {
    let mut rng = rng_for(seed);
    let bound = BigUint::from(args.coeff_bound);
    let (root, power, root_terms, power_terms, root_degree, power_degree) = if args.vars > 1 {
        let h = random_multi_sparse(ring, args.vars, args.terms, args.degree, &bound, &mut rng)?;
        let f = h.pow(args.power);
        (
            R::multi_file(&h, &args.ring),
            R::multi_file(&f, &args.ring),
            h.sparsity(),
            f.sparsity(),
            h.total_degree(),
            f.total_degree(),
        )
    } else {
        let shape = RootShape::new(args.terms, args.degree, bound);
        let h = random_sparse(ring, &shape, &mut rng)?;
        let f = h.pow(args.power);
        (
            R::file(&h, &args.ring),
            R::file(&f, &args.ring),
            h.sparsity(),
            f.sparsity(),
            h.degree(),
            f.degree(),
        )
    };
    let meta = Meta {
        ring: args.ring.to_string(),
        vars: args.vars,
        r: args.power,
        seed,
        coeff_bound: args.coeff_bound,
        root_terms,
        root_degree: root_degree.to_string(),
        power_terms,
        power_degree: power_degree.to_string(),
        monomial: power_terms < 2,
        power_norms: None,
    };
    Ok((root, power, meta))
}

fn norms_of(file: &PolyFile) -> anyhow::Result<Norms> {
    let norms = if file.vars > 1 {
        let f = file.to_multi_z()?;
        let terms = f.terms().iter().map(|t| t.coeff.magnitude().clone());
        collect_norms(terms)
    } else {
        let n = file.to_sparse_z()?.norms();
        (n.one_norm, n.inf_norm, n.two_norm_squared)
    };
    Ok(Norms {
        one: norms.0.to_string(),
        inf: norms.1.to_string(),
        two_squared: norms.2.to_string(),
    })
}

fn collect_norms(mags: impl Iterator<Item = BigUint>) -> (BigUint, BigUint, BigUint) {
    let mut one = BigUint::default();
    let mut inf = BigUint::default();
    let mut two = BigUint::default();
    for m in mags {
        one += &m;
        two += &m * &m;
        inf = inf.max(m);
    }
    (one, inf, two)
}

/// Rings `gen` can write files for.
trait GenRing: Ring + Sized {
    fn file(f: &SparsePoly<Self>, spec: &RingSpec) -> PolyFile;
    fn multi_file(f: &MultiSparsePoly<Self>, spec: &RingSpec) -> PolyFile;
}

impl GenRing for Integers {
    fn file(f: &SparsePoly<Self>, _: &RingSpec) -> PolyFile {
        PolyFile::from_sparse_z(f)
    }

    fn multi_file(f: &MultiSparsePoly<Self>, _: &RingSpec) -> PolyFile {
        PolyFile::from_multi_z(f)
    }
}

impl GenRing for PrimeField {
    fn file(f: &SparsePoly<Self>, spec: &RingSpec) -> PolyFile {
        PolyFile::from_sparse_field(f, spec.clone())
    }

    fn multi_file(f: &MultiSparsePoly<Self>, spec: &RingSpec) -> PolyFile {
        PolyFile::from_multi_field(f, spec.clone())
    }
}
