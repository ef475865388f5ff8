//! Empirical checks on the sparsity of truncated powers.
//!
//! For a random sparse `h` of degree `s` and each `1 ≤ i < r`, records
//! whether `τ(h^i mod x^{2s}) < τ(h^r mod x^{2s}) + r`. Alongside, a Newton
//! run on `h^r` reports the largest `τ(h^{r+1} mod x^{k+ℓ})` it met,
//! compared with `2t(t+r)` and `2t(t-r)` for `t = τ(h^r)`. Nothing here
//! asserts; violations are returned as data.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::FiniteField;
use crate::generate::{random_sparse, RootShape};
use crate::poly::SparsePoly;
use crate::ring::{Integers, Ring};
use crate::root::{compute_root_newton, compute_root_newton_field, NewtonOptions, RootDiagnostics};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub trials: usize,
    /// Inclusive range for `τ(h)`.
    pub terms: (usize, usize),
    /// Inclusive range for `deg h`.
    pub degree: (u64, u64),
    /// Inclusive range for `r`.
    pub r: (u64, u64),
    #[serde(with = "crate::decimal")]
    pub coeff_bound: BigUint,
    /// Skip the Newton diagnostic when `τ(h^r)` exceeds this.
    pub newton_max_terms: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            trials: 1000,
            terms: (1, 20),
            degree: (1, 1 << 40),
            r: (2, 6),
            coeff_bound: BigUint::from(100u32),
            newton_max_terms: 2000,
        }
    }
}

/// One `(h, r, i)` comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureRecord {
    pub trial: usize,
    pub ring: String,
    pub h_terms: usize,
    #[serde(with = "crate::decimal")]
    pub h_degree: BigUint,
    pub r: u64,
    /// Zero for degenerate trials, which carry no comparison.
    pub i: u64,
    pub lhs: usize,
    pub rhs: usize,
    pub violated: bool,
    pub degenerate: bool,
}

/// Newton intermediate sizes for one trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonSizeRecord {
    pub trial: usize,
    pub r: u64,
    /// `τ(h^r)`.
    pub t: usize,
    pub max_power_terms: usize,
    /// `2t(t+r)`.
    pub bound_plus: u64,
    /// `2t(t-r)`, negative when `t < r`.
    pub bound_minus: i64,
    pub exceeds_plus: bool,
    pub exceeds_minus: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub records: Vec<ConjectureRecord>,
    pub newton: Vec<NewtonSizeRecord>,
}

impl ScanReport {
    pub fn violations(&self) -> impl Iterator<Item = &ConjectureRecord> {
        self.records.iter().filter(|r| r.violated)
    }

    pub fn degenerate_trials(&self) -> usize {
        self.records.iter().filter(|r| r.degenerate).count()
    }
}

/// The records for one `(h, r)`, computing each `h^i mod x^{2s}` exactly.
pub fn truncated_power_records<R: Ring>(
    trial: usize,
    h: &SparsePoly<R>,
    r: u64,
) -> Vec<ConjectureRecord> {
    let s = h.degree();
    let base = ConjectureRecord {
        trial,
        ring: h.ring().to_string(),
        h_terms: h.sparsity(),
        h_degree: s.clone(),
        r,
        i: 0,
        lhs: 0,
        rhs: 0,
        violated: false,
        degenerate: false,
    };
    if s == BigUint::ZERO || h.sparsity() < 2 {
        return vec![ConjectureRecord {
            degenerate: true,
            ..base
        }];
    }
    let bound = &s * 2u32;
    let mut powers = Vec::with_capacity(r as usize);
    let mut acc = h.truncate(&bound);
    powers.push(acc.sparsity());
    for _ in 1..r {
        acc = acc.mul_bounded(h, Some(&bound));
        powers.push(acc.sparsity());
    }
    let rhs = powers[r as usize - 1] + r as usize;
    (1..r)
        .map(|i| {
            let lhs = powers[i as usize - 1];
            ConjectureRecord {
                i,
                lhs,
                rhs,
                violated: lhs >= rhs,
                ..base.clone()
            }
        })
        .collect()
}

fn newton_record(trial: usize, r: u64, t: usize, diag: &RootDiagnostics) -> NewtonSizeRecord {
    let max_power_terms = diag
        .schedule
        .iter()
        .map(|s| s.power_terms)
        .max()
        .unwrap_or(0);
    let (tt, rr) = (t as u64, r);
    let bound_plus = 2 * tt * (tt + rr);
    let bound_minus = 2 * tt as i64 * (tt as i64 - rr as i64);
    NewtonSizeRecord {
        trial,
        r,
        t,
        max_power_terms,
        bound_plus,
        bound_minus,
        exceeds_plus: max_power_terms as u64 > bound_plus,
        exceeds_minus: (max_power_terms as i64) > bound_minus,
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn scan<R: Ring>(
    ring: &R,
    config: &ScanConfig,
    seed: u64,
    mut newton: impl FnMut(&SparsePoly<R>, u64, &mut ChaCha8Rng) -> Result<RootDiagnostics>,
) -> Result<ScanReport> {
    let mut report = ScanReport::default();
    for trial in 0..config.trials {
        let mut rng = trial_rng(seed, trial);
        let s = rng.gen_range(config.degree.0..=config.degree.1);
        let max_terms = usize::try_from(s).map_or(usize::MAX, |s| s.saturating_add(1));
        let terms = rng
            .gen_range(config.terms.0..=config.terms.1)
            .min(max_terms);
        let r = rng.gen_range(config.r.0..=config.r.1);
        let h = random_sparse(
            ring,
            &RootShape::new(terms, s, config.coeff_bound.clone()),
            &mut rng,
        )?;
        let records = truncated_power_records(trial, &h, r);
        let degenerate = records.iter().any(|rec| rec.degenerate);
        report.records.extend(records);
        if degenerate {
            continue;
        }
        let f = h.pow(r);
        if f.sparsity() <= config.newton_max_terms {
            let diag = newton(&f, r, &mut rng)?;
            report
                .newton
                .push(newton_record(trial, r, f.sparsity(), &diag));
        }
    }
    Ok(report)
}

fn uncapped() -> NewtonOptions {
    NewtonOptions {
        sparsity_ceiling: Some(usize::MAX),
    }
}

/// Runs the scan over `Z`. Trial `j` draws from its own stream of `seed`,
/// so any trial can be replayed alone.
pub fn conjecture_scan_z(config: &ScanConfig, seed: u64) -> Result<ScanReport> {
    scan(&Integers, config, seed, |f, r, _| {
        compute_root_newton(f, r, &uncapped()).map(|res| res.diagnostics)
    })
}

/// Runs the scan over a finite field; the characteristic should exceed
/// `r·s` for every drawn `r` and `s`.
pub fn conjecture_scan_field<F: FiniteField>(
    field: &F,
    config: &ScanConfig,
    seed: u64,
) -> Result<ScanReport> {
    scan(field, config, seed, |f, r, rng| {
        compute_root_newton_field(f, r, &uncapped(), rng).map(|res| res.diagnostics)
    })
}
