//! Timing sweeps over generated instances. Every record carries the seed
//! it was generated from, so [`replay`] reproduces its verdict.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dense::dense_newton_baseline;
use crate::detect::{is_perfect_power_z, Epsilon};
use crate::error::{Error, Result};
use crate::generate::{generate, RootShape};
use crate::poly::{SparsePoly, DENSE_GUARD};
use crate::ring::Integers;
use crate::root::{compute_root_newton, NewtonOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    SparseDetect,
    DenseNewtonBaseline,
    SparseRoot,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::SparseDetect => "sparse-detect",
            Algorithm::DenseNewtonBaseline => "dense-newton-baseline",
            Algorithm::SparseRoot => "sparse-root",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sparse-detect" | "sparse" => Ok(Algorithm::SparseDetect),
            "dense-newton-baseline" | "dense" => Ok(Algorithm::DenseNewtonBaseline),
            "sparse-root" | "root" => Ok(Algorithm::SparseRoot),
            _ => Err(format!("unknown algorithm `{s}`")),
        }
    }
}

/// Parameters that regenerate one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceParams {
    pub root_terms: usize,
    /// Degree of `h`; the instance has degree `r` times this.
    pub root_degree: u64,
    pub coeff_bits: u32,
    pub r: u64,
    pub seed: u64,
}

impl InstanceParams {
    pub fn build(&self) -> Result<(SparsePoly<Integers>, ChaCha8Rng)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let bound = (BigUint::from(1u32) << self.coeff_bits) - 1u32;
        let shape = RootShape::new(
            self.root_terms,
            self.root_degree,
            bound.max(BigUint::from(1u32)),
        );
        let inst = generate(&Integers, &shape, self.r, &mut rng)?;
        Ok((inst.power, rng))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub algorithm: Algorithm,
    pub index: usize,
    pub degree: u64,
    pub sparsity: usize,
    pub height_bits: u64,
    pub r: u64,
    pub root_terms: usize,
    pub coeff_bits: u32,
    pub seconds: f64,
    pub verdict: bool,
    pub seed: u64,
}

impl BenchRecord {
    pub fn params(&self) -> InstanceParams {
        InstanceParams {
            root_terms: self.root_terms,
            root_degree: self.degree / self.r,
            coeff_bits: self.coeff_bits,
            r: self.r,
            seed: self.seed,
        }
    }
}

fn run(
    algorithm: Algorithm,
    f: &SparsePoly<Integers>,
    r: u64,
    epsilon: &Epsilon,
    rng: &mut ChaCha8Rng,
) -> Result<bool> {
    match algorithm {
        Algorithm::SparseDetect => Ok(is_perfect_power_z(f, epsilon, rng)?.verdict),
        Algorithm::DenseNewtonBaseline => {
            Ok(dense_newton_baseline(f, epsilon, DENSE_GUARD, rng)?.verdict)
        }
        Algorithm::SparseRoot => match compute_root_newton(f, r, &NewtonOptions::default()) {
            Ok(_) => Ok(true),
            Err(Error::NotAPower(_)) | Err(Error::SparsityCeiling { .. }) => Ok(false),
            Err(e) => Err(e),
        },
    }
}

/// Generates and times one instance.
pub fn measure(
    algorithm: Algorithm,
    index: usize,
    params: &InstanceParams,
    epsilon: &Epsilon,
) -> Result<BenchRecord> {
    let (f, mut rng) = params.build()?;
    let start = Instant::now();
    let verdict = run(algorithm, &f, params.r, epsilon, &mut rng)?;
    let seconds = start.elapsed().as_secs_f64();
    Ok(BenchRecord {
        algorithm,
        index,
        degree: params.root_degree * params.r,
        sparsity: f.sparsity(),
        height_bits: f.height().bits(),
        r: params.r,
        root_terms: params.root_terms,
        coeff_bits: params.coeff_bits,
        seconds,
        verdict,
        seed: params.seed,
    })
}

/// Regenerates the record's instance and returns the verdict again.
pub fn replay(record: &BenchRecord, epsilon: &Epsilon) -> Result<bool> {
    let (f, mut rng) = record.params().build()?;
    run(record.algorithm, &f, record.r, epsilon, &mut rng)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sweep {
    Degree,
    Sparsity,
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "degree" => Ok(Sweep::Degree),
            "sparsity" => Ok(Sweep::Sparsity),
            _ => Err(format!("unknown sweep `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub algorithm: Algorithm,
    pub sweep: Sweep,
    /// Degrees of `f` for a degree sweep, root term counts otherwise.
    pub points: Vec<u64>,
    /// Fixed root term count in a degree sweep.
    pub root_terms: usize,
    /// Fixed degree of `f` in a sparsity sweep.
    pub degree: u64,
    pub r: u64,
    pub coeff_bits: u32,
    pub trials: usize,
    pub seed: u64,
    pub epsilon: Epsilon,
}

impl SweepConfig {
    /// Parameters of every run, in output order.
    pub fn instances(&self) -> Vec<InstanceParams> {
        let mut out = Vec::with_capacity(self.points.len() * self.trials);
        for &point in &self.points {
            for _ in 0..self.trials {
                let (root_terms, degree) = match self.sweep {
                    Sweep::Degree => (self.root_terms, point),
                    Sweep::Sparsity => (point as usize, self.degree),
                };
                let seed = self
                    .seed
                    .wrapping_add(out.len() as u64)
                    .wrapping_mul(0x9E37_79B9_7F4A_7C15);
                out.push(InstanceParams {
                    root_terms,
                    root_degree: degree / self.r,
                    coeff_bits: self.coeff_bits,
                    r: self.r,
                    seed,
                });
            }
        }
        out
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<BenchRecord>> {
    config
        .instances()
        .iter()
        .enumerate()
        .map(|(i, p)| measure(config.algorithm, i, p, &config.epsilon))
        .collect()
}

/// Median of the `seconds` fields.
pub fn median_seconds<'a>(records: impl IntoIterator<Item = &'a BenchRecord>) -> f64 {
    let mut v: Vec<f64> = records.into_iter().map(|r| r.seconds).collect();
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}
