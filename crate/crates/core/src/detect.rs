//! Monte Carlo perfect-power detection for lacunary polynomials.
//!
//! Over a finite field, `f` is tested for being an `r`-th power by
//! evaluating it at random points of an extension `F_ϱ` with `r | ϱ - 1`
//! and checking that the values are `r`-th power residues. Over the
//! integers the same test runs modulo random primes sized so that bad
//! reductions are rare. Both tests are one-sided: a perfect power is never
//! rejected.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::primes::{is_small_prime, primes_up_to};
use crate::field::{
    evaluate_terms, find_irreducible, random_prime, ExtField, FiniteField, PrimeField,
    SmallPrimeField,
};
use crate::intmath::{
    ceil_div, ceil_shift, integer_rth_root, ln_upper, log2_ceil, log2_floor, log2_upper, FRAC_BITS,
};
use crate::poly::SparsePoly;
use crate::ring::{Integers, Ring};

/// Predicted bit size above which [`compute_mu`] switches from the exact
/// logarithm to a rigorous upper bound.
const EXACT_LOG_BITS: u64 = 1 << 20;

/// A failure probability `0 < ε < 1`, kept as an exact rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Epsilon(BigRational);

impl Epsilon {
    pub fn new(value: BigRational) -> Result<Self> {
        if value <= BigRational::zero() || value >= BigRational::one() {
            return Err(Error::InvalidEpsilon(value.to_string()));
        }
        Ok(Epsilon(value))
    }

    pub fn ratio(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidEpsilon(format!("{num}/0")));
        }
        Self::new(BigRational::new(num.into(), den.into()))
    }

    /// `2^-k` for `k >= 1`.
    pub fn pow2(k: u32) -> Self {
        assert!(k >= 1, "epsilon must be below 1");
        Epsilon(BigRational::new(BigInt::one(), BigInt::one() << k))
    }

    pub fn quarter() -> Self {
        Self::pow2(2)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    /// `⌈log₂(1/ε)⌉`.
    pub fn log2_inv_ceil(&self) -> u64 {
        let num = self.0.numer().magnitude();
        let den = self.0.denom().magnitude();
        log2_ceil(&ceil_div(den, num))
    }

    /// `ε / parts`.
    pub fn split(&self, parts: usize) -> Self {
        assert!(parts >= 1);
        Epsilon(&self.0 / BigRational::from_integer(BigInt::from(parts)))
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    /// Accepts `a/b`, `2^-k` and decimals such as `0.001` or `1e-6`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidEpsilon(s.to_string());
        let t = s.trim();
        let value = if let Some(k) = t.strip_prefix("2^-") {
            let k: u32 = k.parse().map_err(|_| bad())?;
            BigRational::new(BigInt::one(), BigInt::one() << k)
        } else if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            BigRational::new(n, d)
        } else {
            parse_decimal(t).ok_or_else(bad)?
        };
        Self::new(value)
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let n: BigInt = digits.parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        BigRational::from_integer(n * num_traits::Pow::pow(&ten, scale as u32))
    } else {
        BigRational::new(n, num_traits::Pow::pow(&ten, (-scale) as u32))
    })
}

impl Serialize for Epsilon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Epsilon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// What one random evaluation saw.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialOutcome {
    /// `ξ = 1`: consistent with a perfect power.
    Residue,
    /// `ξ ≠ 1`: certainly not a perfect power.
    NonResidue,
    /// `f(α) = 0`, which is trivially an `r`-th power.
    ZeroValue,
}

/// One call of the finite-field test, possibly inside an integer round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub r: u64,
    /// The reduction prime, for rounds of the integer test.
    #[serde(with = "crate::decimal::option")]
    pub prime: Option<BigUint>,
    /// Degree of `F_ϱ` over the coefficient field.
    pub extension_degree: usize,
    /// Planned number of evaluations `m`.
    pub iterations: usize,
    pub outcomes: Vec<TrialOutcome>,
    /// `false` when no irreducible modulus was found; the call then
    /// accepts, and the event is charged to the failure budget.
    pub irreducible_found: bool,
    pub accepted: bool,
}

/// Outcome of a detection run with everything needed to audit it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub verdict: bool,
    pub r_found: Option<u64>,
    pub epsilon: Epsilon,
    pub seed: Option<u64>,
    /// Exponents that were tested, in order.
    pub candidates: Vec<u64>,
    pub trace: Vec<TraceEntry>,
}

impl DetectionReport {
    pub fn empty(epsilon: &Epsilon) -> Self {
        DetectionReport {
            verdict: false,
            r_found: None,
            epsilon: epsilon.clone(),
            seed: None,
            candidates: Vec::new(),
            trace: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Sizing of the random primes used by the integer test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeBounds {
    #[serde(with = "crate::decimal")]
    pub mu: BigUint,
    #[serde(with = "crate::decimal")]
    pub gamma: BigUint,
}

impl PrimeBounds {
    pub fn new(degree: &BigUint, height: &BigUint) -> Result<Self> {
        let mu = compute_mu(degree, height)?;
        let gamma = compute_gamma(&mu, degree);
        Ok(PrimeBounds { mu, gamma })
    }
}

fn four_square(n_minus_1: &BigUint) -> BigUint {
    n_minus_1 * n_minus_1 * 4u32
}

/// `μ = ⌈⌈log₂(2^{2n²}(n+1)^{2n}H^{2n+1})⌉ / ⌊log₂(4(n-1)²)⌋⌉`, an upper
/// bound on how many primes above `4(n-1)²` can divide the discriminant
/// times leading coefficient of a degree-`n` integer polynomial of height `H`.
///
/// Exact for moderate sizes; for astronomically large `n` the numerator is
/// replaced by a rigorous upper bound, which only makes `μ` larger.
pub fn compute_mu(n: &BigUint, height: &BigUint) -> Result<BigUint> {
    if n < &BigUint::from(2u32) {
        return Err(Error::DegreeTooSmall);
    }
    let h = height.max(&BigUint::one()).clone();
    let n1 = n + 1u32;
    let two_n = n * 2u32;
    let two_n1 = &two_n + 1u32;
    let predicted = two_n.clone() * n1.bits() + two_n1.clone() * h.bits();
    let log_rest = if predicted <= BigUint::from(EXACT_LOG_BITS) {
        let e1 = two_n.to_u32().expect("bounded by the prediction");
        let e2 = two_n1.to_u32().expect("bounded by the prediction");
        let y = num_traits::Pow::pow(&n1, e1) * num_traits::Pow::pow(&h, e2);
        BigUint::from(log2_ceil(&y))
    } else {
        let bound = &two_n * log2_upper(&n1) + &two_n1 * log2_upper(&h);
        ceil_shift(&bound, FRAC_BITS as u64)
    };
    let numerator = n * n * 2u32 + log_rest;
    let denominator = BigUint::from(log2_floor(&four_square(&(n - 1u32))));
    Ok(ceil_div(&numerator, &denominator))
}

/// `γ = max{⌈21μ ln μ⌉, 4(n-1)², 226}`, with `ln` rounded up.
pub fn compute_gamma(mu: &BigUint, n: &BigUint) -> BigUint {
    let first = if mu <= &BigUint::one() {
        BigUint::zero()
    } else {
        ceil_shift(&(mu * 21u32 * ln_upper(mu)), 2 * FRAC_BITS as u64)
    };
    let second = if n.is_zero() {
        BigUint::zero()
    } else {
        four_square(&(n - 1u32))
    };
    first.max(second).max(BigUint::from(226u32))
}

/// `m = ⌈2.5(1 + k)⌉` evaluations for failure `2^-k`.
fn iteration_count(log2_inv_eps: u64) -> usize {
    (5 * (1 + log2_inv_eps)).div_ceil(2) as usize
}

/// Smallest `ν` with `q^ν ≥ 4(n-1)²`.
fn base_extension_degree(q: &BigUint, n: &BigUint) -> usize {
    if n <= &BigUint::one() {
        return 1;
    }
    let target = four_square(&(n - 1u32));
    let mut power = q.clone();
    let mut nu = 1;
    while power < target {
        power *= q;
        nu += 1;
    }
    nu
}

fn check_exponent(r: u64) -> Result<()> {
    if r < 2 {
        return Err(Error::ExponentTooSmall(r));
    }
    if !is_small_prime(r) {
        return Err(Error::ExponentNotPrime(r));
    }
    Ok(())
}

fn check_divides(r: u64, degree: &BigUint) -> Result<()> {
    if !(degree % r).is_zero() {
        return Err(Error::ExponentDoesNotDivideDegree {
            r,
            degree: degree.clone(),
        });
    }
    Ok(())
}

fn check_characteristic<F: FiniteField>(field: &F, degree: &BigUint) -> Result<()> {
    let characteristic = field.characteristic();
    if &characteristic <= degree {
        return Err(Error::CharacteristicTooSmall {
            characteristic,
            degree: degree.clone(),
        });
    }
    Ok(())
}

/// The residue test proper, without precondition checks.
fn gf_trial<F: FiniteField, G: Rng + ?Sized>(
    f: &SparsePoly<F>,
    r: u64,
    log2_inv_eps: u64,
    rng: &mut G,
) -> TraceEntry {
    let field = f.ring();
    let nu = base_extension_degree(&field.order(), &f.degree());
    let degree = nu * (r as usize - 1);
    let iterations = iteration_count(log2_inv_eps);
    let mut entry = TraceEntry {
        r,
        prime: None,
        extension_degree: degree,
        iterations,
        outcomes: Vec::new(),
        irreducible_found: true,
        accepted: true,
    };
    // the modulus search gets half of the budget
    let Some(modulus) = find_irreducible(field, degree, log2_inv_eps + 1, rng) else {
        entry.irreducible_found = false;
        return entry;
    };
    let ext = ExtField::new_unchecked(field.clone(), modulus);
    let group = ext.order() - 1u32;
    let cofactor = &group / r;
    let terms: Vec<(Vec<F::Elem>, BigUint)> = f
        .terms()
        .iter()
        .map(|t| (ext.embed(&t.coeff), &t.exp % &group))
        .collect();
    for _ in 0..iterations {
        let alpha = ext.random(rng);
        let value = evaluate_terms(&ext, terms.iter().map(|(c, e)| (c.clone(), e)), &alpha);
        if ext.is_zero(&value) {
            entry.outcomes.push(TrialOutcome::ZeroValue);
            continue;
        }
        if ext.is_one(&ext.pow(&value, &cofactor)) {
            entry.outcomes.push(TrialOutcome::Residue);
        } else {
            entry.outcomes.push(TrialOutcome::NonResidue);
            entry.accepted = false;
            break;
        }
    }
    entry
}

/// Tests whether `f ∈ F_q[x]` is an `r`-th power for a prime `r | deg f`.
///
/// Perfect powers are always accepted; anything else is rejected with
/// probability at least `1 - ε`. If `q` is too small for the evaluation
/// bound, the evaluation field is enlarged accordingly.
pub fn is_perfect_rth_power_gf<F: FiniteField, G: Rng + ?Sized>(
    f: &SparsePoly<F>,
    r: u64,
    epsilon: &Epsilon,
    rng: &mut G,
) -> Result<DetectionReport> {
    check_exponent(r)?;
    let n = f.degree();
    if f.is_zero() || n.is_zero() {
        return Err(Error::DegreeTooSmall);
    }
    check_divides(r, &n)?;
    check_characteristic(f.ring(), &n)?;
    let entry = gf_trial(f, r, epsilon.log2_inv_ceil(), rng);
    let mut report = DetectionReport::empty(epsilon);
    report.verdict = entry.accepted;
    report.r_found = entry.accepted.then_some(r);
    report.candidates.push(r);
    report.trace.push(entry);
    Ok(report)
}

fn reduced_trial<F: FiniteField, G: Rng + ?Sized>(
    field: F,
    f: &SparsePoly<Integers>,
    r: u64,
    rng: &mut G,
) -> TraceEntry {
    let image = f.map_coeffs(field.clone(), |c| field.from_bigint(c));
    gf_trial(&image, r, 2, rng)
}

/// Exact necessary conditions for `f = h^r` over `Z`: the lowest exponent
/// is a multiple of `r` and both extreme coefficients are `r`-th powers.
fn extreme_terms_allow(f: &SparsePoly<Integers>, r: u64) -> bool {
    let (Some(low), Some(lead)) = (f.trailing_term(), f.leading_coeff()) else {
        return false;
    };
    (&low.exp % r).is_zero()
        && [&low.coeff, lead]
            .into_iter()
            .all(|c| matches!(integer_rth_root(c, r), Ok(Some(_))))
}

/// Tests whether `f ∈ Z[x]` is an `r`-th power for a prime `r | deg f`.
///
/// Each of the `⌈log₂(1/ε)⌉` rounds reduces `f` modulo a random prime in
/// `[γ, 2γ]` and runs the finite-field test there at `ε = 1/4`. Inputs whose
/// extreme terms already rule out an `r`-th root are rejected without any
/// rounds.
pub fn is_perfect_rth_power_z<G: Rng + ?Sized>(
    f: &SparsePoly<Integers>,
    r: u64,
    epsilon: &Epsilon,
    rng: &mut G,
) -> Result<DetectionReport> {
    check_exponent(r)?;
    let n = f.degree();
    if f.is_zero() || n < BigUint::from(2u32) {
        return Err(Error::DegreeTooSmall);
    }
    check_divides(r, &n)?;
    let mut report = DetectionReport::empty(epsilon);
    report.candidates.push(r);
    if !extreme_terms_allow(f, r) {
        return Ok(report);
    }
    let bounds = PrimeBounds::new(&n, &f.height())?;
    let hi = &bounds.gamma * 2u32;
    let exclude = [BigUint::from(r)];
    report.verdict = true;
    for _ in 0..epsilon.log2_inv_ceil() {
        let p = random_prime(&bounds.gamma, &hi, &exclude, rng)?;
        let mut entry = if p.bits() <= SmallPrimeField::MAX_BITS {
            reduced_trial(SmallPrimeField::new_unchecked(&p)?, f, r, rng)
        } else {
            reduced_trial(PrimeField::new_unchecked(p.clone()), f, r, rng)
        };
        entry.prime = Some(p);
        let accepted = entry.accepted;
        report.trace.push(entry);
        if !accepted {
            report.verdict = false;
            break;
        }
    }
    report.r_found = report.verdict.then_some(r);
    Ok(report)
}

fn prime_divisors_up_to(n: &BigUint, bound: u64) -> Vec<u64> {
    primes_up_to(bound)
        .into_iter()
        .filter(|&p| (n % p).is_zero())
        .collect()
}

/// Primes `r | deg f` with `r ≤ 2 log₂(τ(f)·‖f‖∞)`: the only exponents an
/// integer polynomial can be a perfect power with.
pub fn exponent_candidates_z(f: &SparsePoly<Integers>) -> Result<Vec<u64>> {
    if f.sparsity() < 2 {
        return Err(Error::MonomialInput);
    }
    let th = f.height() * f.sparsity();
    let bound = (&th * &th).bits() - 1;
    Ok(prime_divisors_up_to(&f.degree(), bound))
}

/// Primes `r | deg f` with `r ≤ τ(f)`.
pub fn exponent_candidates_gf<F: FiniteField>(f: &SparsePoly<F>) -> Result<Vec<u64>> {
    if f.sparsity() < 2 {
        return Err(Error::MonomialInput);
    }
    Ok(prime_divisors_up_to(&f.degree(), f.sparsity() as u64))
}

/// `⌊2 log₂ ‖f‖₁⌋`, an upper bound on any `r` with `f = h^r`.
pub fn exponent_bound_z(f: &SparsePoly<Integers>) -> Result<u64> {
    if f.sparsity() < 2 {
        return Err(Error::MonomialInput);
    }
    let one = f.norms().one_norm;
    Ok((&one * &one).bits() - 1)
}

fn drive<G, T>(
    candidates: Vec<u64>,
    epsilon: &Epsilon,
    rng: &mut G,
    mut test: T,
) -> Result<DetectionReport>
where
    G: Rng + ?Sized,
    T: FnMut(u64, &Epsilon, &mut G) -> Result<DetectionReport>,
{
    let mut report = DetectionReport::empty(epsilon);
    if candidates.is_empty() {
        return Ok(report);
    }
    let share = epsilon.split(candidates.len());
    for &r in &candidates {
        let sub = test(r, &share, rng)?;
        report.candidates.push(r);
        report.trace.extend(sub.trace);
        if sub.verdict {
            report.verdict = true;
            report.r_found = Some(r);
            break;
        }
    }
    Ok(report)
}

/// Decides whether `f ∈ Z[x]` is a perfect power, returning the first
/// exponent that is accepted.
pub fn is_perfect_power_z<G: Rng + ?Sized>(
    f: &SparsePoly<Integers>,
    epsilon: &Epsilon,
    rng: &mut G,
) -> Result<DetectionReport> {
    let candidates = exponent_candidates_z(f)?;
    drive(candidates, epsilon, rng, |r, eps, rng| {
        is_perfect_rth_power_z(f, r, eps, rng)
    })
}

/// Decides whether `body / scale` is a perfect power in `Q[x]`, for an
/// integral `body` and positive integer `scale`.
///
/// After cancelling the common content, `body / scale = h^r` forces
/// `scale` to be an `r`-th power, so only those candidates are tested.
pub fn is_perfect_power_q<G: Rng + ?Sized>(
    body: &SparsePoly<Integers>,
    scale: &BigUint,
    epsilon: &Epsilon,
    rng: &mut G,
) -> Result<DetectionReport> {
    if scale.is_zero() {
        return Err(Error::InvalidArgument("scale must be positive".into()));
    }
    let (body, scale) = reduce_fraction(body, scale);
    let candidates = exponent_candidates_z(&body)?
        .into_iter()
        .filter(|&r| matches!(integer_rth_root(&scale, r), Ok(Some(_))))
        .collect();
    drive(candidates, epsilon, rng, |r, eps, rng| {
        is_perfect_rth_power_z(&body, r, eps, rng)
    })
}

/// Divides `body` and `scale` by their common factor.
pub fn reduce_fraction(
    body: &SparsePoly<Integers>,
    scale: &BigUint,
) -> (SparsePoly<Integers>, BigInt) {
    let scale = BigInt::from(scale.clone());
    let g = body
        .terms()
        .iter()
        .fold(scale.clone(), |g, t| g.gcd(&t.coeff));
    if g.is_one() {
        return (body.clone(), scale);
    }
    let reduced = SparsePoly::normalize(
        Integers,
        body.terms().iter().map(|t| (&t.coeff / &g, t.exp.clone())),
    );
    (reduced, scale / g)
}

/// Decides whether `f ∈ F_q[x]` is a perfect power; needs `char F_q > deg f`.
pub fn is_perfect_power_gf<F: FiniteField, G: Rng + ?Sized>(
    f: &SparsePoly<F>,
    epsilon: &Epsilon,
    rng: &mut G,
) -> Result<DetectionReport> {
    let candidates = exponent_candidates_gf(f)?;
    check_characteristic(f.ring(), &f.degree())?;
    drive(candidates, epsilon, rng, |r, eps, rng| {
        is_perfect_rth_power_gf(f, r, eps, rng)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zpoly(pairs: &[(i64, u64)]) -> SparsePoly<Integers> {
        SparsePoly::from_i64_pairs(pairs)
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    /// `⌈log₂ X⌉` by direct big-integer evaluation of `X`.
    fn mu_oracle(n: u32, h: u32) -> BigUint {
        let x = (BigUint::one() << (2 * n * n))
            * num_traits::Pow::pow(big(n as u64 + 1), 2 * n)
            * num_traits::Pow::pow(big(h as u64), 2 * n + 1);
        let bits = x.bits();
        let ceil_log = if x.count_ones() == 1 { bits - 1 } else { bits };
        let d = 4 * (n as u64 - 1) * (n as u64 - 1);
        let floor_log = 63 - d.leading_zeros() as u64;
        big(ceil_log.div_ceil(floor_log))
    }

    #[test]
    fn extreme_terms_reject_without_rounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let eps = Epsilon::pow2(10);
        for f in [
            zpoly(&[(2, 0), (1, 4)]),
            zpoly(&[(1, 0), (3, 6)]),
            zpoly(&[(-1, 0), (1, 2)]),
            zpoly(&[(1, 1), (1, 4)]),
        ] {
            let rep = is_perfect_rth_power_z(&f, 2, &eps, &mut rng).unwrap();
            assert!(!rep.verdict && rep.trace.is_empty(), "{f:?}");
        }
        let odd = zpoly(&[(-1, 0), (-3, 1), (-3, 2), (-1, 3)]);
        assert!(
            is_perfect_rth_power_z(&odd, 3, &eps, &mut rng)
                .unwrap()
                .verdict
        );
    }

    #[test]
    fn mu_examples() {
        assert_eq!(compute_mu(&big(10), &big(1)).unwrap(), big(34));
        assert_eq!(compute_mu(&big(2), &big(1)).unwrap(), big(8));
        assert_eq!(compute_mu(&big(1), &big(1)), Err(Error::DegreeTooSmall));
        for n in 2..40u32 {
            for h in [1u32, 2, 3, 1000, 65537] {
                assert_eq!(
                    compute_mu(&big(n as u64), &big(h as u64)).unwrap(),
                    mu_oracle(n, h)
                );
            }
        }
    }

    #[test]
    fn rational_scale_filters_exponents() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let eps = Epsilon::pow2(10);
        // (x^6 + 2)^2 / 9 = ((x^6 + 2)/3)^2
        let body = zpoly(&[(1, 0), (2, 6), (1, 12)]).pow(2);
        let square = zpoly(&[(2, 0), (1, 6)]).pow(2);
        let rep = is_perfect_power_q(&square, &big(9), &eps, &mut rng).unwrap();
        assert_eq!(rep.r_found, Some(2));
        let rep = is_perfect_power_q(&square, &big(3), &eps, &mut rng).unwrap();
        assert!(!rep.verdict);
        // common content cancels: 4(x+1)^2 / 2 = 2(x+1)^2 is not a square
        let doubled = zpoly(&[(1, 0), (1, 1)]).pow(2).scale(&BigInt::from(4));
        assert!(
            !is_perfect_power_q(&doubled, &big(2), &eps, &mut rng)
                .unwrap()
                .verdict
        );
        assert!(
            is_perfect_power_q(&doubled, &big(1), &eps, &mut rng)
                .unwrap()
                .verdict
        );
        assert!(
            is_perfect_power_q(&body, &big(1), &eps, &mut rng)
                .unwrap()
                .verdict
        );
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(compute_gamma(&big(34), &big(10)), big(2518));
        assert_eq!(compute_gamma(&big(8), &big(2)), big(350));
        assert_eq!(compute_gamma(&big(1), &big(10)), big(324));
        assert_eq!(compute_gamma(&big(1), &big(3)), big(226));
    }

    #[test]
    fn huge_degree_uses_safe_upper_bound() {
        let n = BigUint::one() << 43u32;
        let h = BigUint::one() << 300u32;
        let mu = compute_mu(&n, &h).unwrap();
        // lower estimate from the 2^{2n²} factor alone
        let den = BigUint::from(log2_floor(&four_square(&(&n - 1u32))));
        assert!(mu >= (&n * &n * 2u32) / &den);
        // and the bound is not wildly above the exact value
        let approx =
            (&n * &n * 2u32 + &n * 2u32 * 44u32 + (&n * 2u32 + 1u32) * 300u32) / &den + 2u32;
        assert!(mu <= approx);
        let gamma = compute_gamma(&mu, &n);
        assert!(gamma >= four_square(&(&n - 1u32)));
    }

    #[test]
    fn mu_is_monotone_in_height() {
        for n in [2u64, 5, 17, 3000] {
            let mut prev = BigUint::zero();
            for h in [1u64, 2, 4, 8, 1 << 20, 1 << 40] {
                let mu = compute_mu(&big(n), &big(h)).unwrap();
                assert!(mu >= prev);
                prev = mu;
            }
        }
    }

    #[test]
    fn epsilon_parsing() {
        assert_eq!("1/1024".parse::<Epsilon>().unwrap(), Epsilon::pow2(10));
        assert_eq!("2^-10".parse::<Epsilon>().unwrap(), Epsilon::pow2(10));
        assert_eq!("0.25".parse::<Epsilon>().unwrap(), Epsilon::quarter());
        assert_eq!("2.5e-1".parse::<Epsilon>().unwrap(), Epsilon::quarter());
        assert!("1".parse::<Epsilon>().is_err());
        assert!("0".parse::<Epsilon>().is_err());
        assert!("-1/4".parse::<Epsilon>().is_err());
        assert!("abc".parse::<Epsilon>().is_err());
        assert_eq!(Epsilon::pow2(10).log2_inv_ceil(), 10);
        assert_eq!(Epsilon::ratio(1, 1000).unwrap().log2_inv_ceil(), 10);
        assert_eq!(Epsilon::ratio(1, 3).unwrap().log2_inv_ceil(), 2);
        assert_eq!(iteration_count(2), 8);
        assert_eq!(iteration_count(10), 28);
    }

    #[test]
    fn candidate_examples() {
        // n = 12, t = 3, height 5
        let f = zpoly(&[(5, 0), (1, 5), (1, 12)]);
        assert_eq!(exponent_candidates_z(&f).unwrap(), vec![2, 3]);
        let g = zpoly(&[(1, 0), (1, 17)]);
        assert!(exponent_candidates_z(&g).unwrap().is_empty());
        let f101 = PrimeField::new(big(101)).unwrap();
        let h = SparsePoly::from_pairs(f101, &[(1, 0), (1, 8)]);
        assert_eq!(exponent_candidates_gf(&h).unwrap(), vec![2]);
        assert_eq!(
            exponent_candidates_z(&zpoly(&[(3, 4)])),
            Err(Error::MonomialInput)
        );
    }

    #[test]
    fn exponent_bound_examples() {
        assert_eq!(exponent_bound_z(&zpoly(&[(1, 0), (1, 2)])).unwrap(), 2);
        assert_eq!(exponent_bound_z(&zpoly(&[(7, 0), (8, 2)])).unwrap(), 7);
    }

    #[test]
    fn gf_powers_always_accepted() {
        let f101 = PrimeField::new(big(101)).unwrap();
        let sq = SparsePoly::from_pairs(f101.clone(), &[(1, 0), (2, 1), (1, 2)]);
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rep = is_perfect_rth_power_gf(&sq, 2, &Epsilon::quarter(), &mut rng).unwrap();
            assert!(rep.verdict);
            assert_eq!(rep.r_found, Some(2));
        }
    }

    #[test]
    fn gf_rejects_non_square() {
        let f101 = PrimeField::new(big(101)).unwrap();
        let f = SparsePoly::from_pairs(f101, &[(1, 0), (1, 1), (1, 2)]);
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rep = is_perfect_rth_power_gf(&f, 2, &Epsilon::pow2(20), &mut rng).unwrap();
            assert!(!rep.verdict, "seed {seed}");
        }
    }

    #[test]
    fn small_field_is_extended() {
        // a dense square of degree 6 over F_7
        let f7 = PrimeField::new(big(7)).unwrap();
        let h = SparsePoly::from_pairs(f7, &[(1, 0), (3, 1), (2, 2), (1, 3)]);
        let f = h.pow(2);
        assert_eq!(f.degree(), big(6));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rep = is_perfect_rth_power_gf(&f, 2, &Epsilon::pow2(8), &mut rng).unwrap();
        assert!(rep.verdict);
        // q^ν ≥ 4·25 needs ν = 3
        assert_eq!(rep.trace[0].extension_degree, 3);
    }

    #[test]
    fn gf_preconditions() {
        let f7 = PrimeField::new(big(7)).unwrap();
        let f = SparsePoly::from_pairs(f7.clone(), &[(1, 0), (1, 8)]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            is_perfect_rth_power_gf(&f, 2, &Epsilon::quarter(), &mut rng),
            Err(Error::CharacteristicTooSmall { .. })
        ));
        let g = SparsePoly::from_pairs(f7, &[(1, 0), (1, 3)]);
        assert!(matches!(
            is_perfect_rth_power_gf(&g, 2, &Epsilon::quarter(), &mut rng),
            Err(Error::ExponentDoesNotDivideDegree { .. })
        ));
        assert_eq!(
            is_perfect_rth_power_gf(&g, 4, &Epsilon::quarter(), &mut rng),
            Err(Error::ExponentNotPrime(4))
        );
    }

    #[test]
    fn z_examples() {
        let sq = zpoly(&[(1, 0), (2, 1), (1, 2)]);
        let non = zpoly(&[(1, 0), (1, 2)]);
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            assert!(
                is_perfect_rth_power_z(&sq, 2, &Epsilon::pow2(10), &mut rng)
                    .unwrap()
                    .verdict
            );
            let rep = is_perfect_rth_power_z(&non, 2, &Epsilon::pow2(10), &mut rng).unwrap();
            assert!(!rep.verdict);
            assert!(rep.trace.len() <= 10);
        }
    }

    #[test]
    fn z_huge_degree_square() {
        let big_e = 1u64 << 30;
        let h = zpoly(&[(1, 0), (3, 1), (1, big_e)]);
        let f = h.pow(2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rep = is_perfect_rth_power_z(&f, 2, &Epsilon::pow2(10), &mut rng).unwrap();
        assert!(rep.verdict);
        assert_eq!(rep.trace.len(), 10);
    }

    #[test]
    fn drivers() {
        let h = zpoly(&[(1, 0), (3, 1), (1, 5)]);
        let f = h.pow(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rep = is_perfect_power_z(&f, &Epsilon::pow2(10), &mut rng).unwrap();
        assert_eq!((rep.verdict, rep.r_found), (true, Some(3)));
        let rep =
            is_perfect_power_z(&zpoly(&[(1, 0), (1, 2)]), &Epsilon::pow2(10), &mut rng).unwrap();
        assert!(!rep.verdict);
        let empty =
            is_perfect_power_z(&zpoly(&[(1, 0), (1, 17)]), &Epsilon::pow2(10), &mut rng).unwrap();
        assert!(!empty.verdict && empty.trace.is_empty());
    }

    #[test]
    fn same_seed_same_report() {
        let f = zpoly(&[(1, 0), (5, 3), (-2, 6)]);
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            is_perfect_power_z(&f, &Epsilon::pow2(12), &mut rng).unwrap()
        };
        assert_eq!(run(9), run(9));
        let json = serde_json::to_string(&run(9)).unwrap();
        let back: DetectionReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, run(9));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn generated_powers_pass(
            terms in prop::collection::vec((1i64..50, 1u64..1_000_000), 1..5),
            r in prop::sample::select(vec![2u64, 3, 5]),
            seed in any::<u64>(),
        ) {
            let mut pairs = terms;
            pairs.push((1, 0));
            let h = zpoly(&pairs);
            prop_assume!(h.sparsity() >= 2);
            let f = h.pow(r);
            prop_assert!(exponent_candidates_z(&f).unwrap().contains(&r));
            prop_assert!(r <= exponent_bound_z(&f).unwrap());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            prop_assert!(is_perfect_rth_power_z(&f, r, &Epsilon::pow2(4), &mut rng).unwrap().verdict);
        }
    }
}
