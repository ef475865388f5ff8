//! Sparsity-preserving Newton iteration for `r`-th roots, and the
//! deterministic certificate that checks its output.
//!
//! Writing `f = f_u·x^u·g` with `g(0) = 1`, the iteration lifts the power
//! series root `h ≡ g^{1/r}` from precision `x^k` to `x^{k+ℓ}`, using only
//! truncated sparse products. It stops at precision `deg h + 1`, so when
//! `f` really is a power the series root is the polynomial root. Every
//! answer is certified with `f′h = r·h′f`, which makes the procedure
//! correct on arbitrary input.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, NotAPowerReason, Result};
use crate::field::{rth_root_in_field, FiniteField, SmallPrimeField};
use crate::intmath::integer_rth_root;
use crate::poly::{series_inverse_quotient_capped, Exponent, SparsePoly};
use crate::ring::{Integers, Rationals, Ring};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NewtonOptions {
    /// Abort once any intermediate polynomial has more terms than this.
    /// Defaults to `4·(τ(f) + r)²`.
    pub sparsity_ceiling: Option<usize>,
}

impl NewtonOptions {
    pub fn ceiling_for(&self, terms: usize, r: u64) -> usize {
        self.sparsity_ceiling.unwrap_or_else(|| {
            let s = terms.saturating_add(r as usize);
            s.saturating_mul(s).saturating_mul(4)
        })
    }
}

/// One pass through the loop body.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonStep {
    #[serde(with = "crate::decimal")]
    pub k: BigUint,
    #[serde(with = "crate::decimal")]
    pub l: BigUint,
    /// `τ(h^{r+1} mod x^{k+ℓ})`.
    pub power_terms: usize,
    /// `τ(h)` after the update.
    pub root_terms: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDiagnostics {
    #[serde(with = "crate::decimal")]
    pub trailing_exponent: BigUint,
    pub iterations: usize,
    pub max_intermediate_sparsity: usize,
    pub sparsity_ceiling: usize,
    pub schedule: Vec<NewtonStep>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootResult<R: Ring> {
    pub root: SparsePoly<R>,
    pub certified: bool,
    pub diagnostics: RootDiagnostics,
}

/// State visible at the head of each Newton iteration.
pub struct IterationView<'a, K: Ring> {
    pub k: &'a BigUint,
    /// Current approximation `h_i`.
    pub root: &'a SparsePoly<K>,
    /// The normalised target `g`, with `g(0) = 1`.
    pub target: &'a SparsePoly<K>,
    pub r: u64,
}

fn not_a_power(reason: NotAPowerReason) -> Error {
    Error::NotAPower(reason)
}

/// `h^e mod x^bound`, by square-and-multiply with every product truncated,
/// failing once a partial result exceeds `ceiling` terms.
fn truncated_power<K: Ring>(
    h: &SparsePoly<K>,
    e: u64,
    bound: &Exponent,
    ceiling: usize,
    peak: &mut usize,
) -> Result<SparsePoly<K>> {
    let mut acc = SparsePoly::one(h.ring().clone()).truncate(bound);
    for i in (0..64 - e.leading_zeros()).rev() {
        acc = acc.mul_bounded(&acc, Some(bound));
        if (e >> i) & 1 == 1 {
            acc = acc.mul_bounded(h, Some(bound));
        }
        track(acc.sparsity(), ceiling, peak)?;
    }
    Ok(acc)
}

fn track(terms: usize, ceiling: usize, peak: &mut usize) -> Result<()> {
    *peak = (*peak).max(terms);
    if terms > ceiling {
        return Err(Error::SparsityCeiling { terms, ceiling });
    }
    Ok(())
}

struct SeriesRoot<K: Ring> {
    root: SparsePoly<K>,
    schedule: Vec<NewtonStep>,
    peak: usize,
}

/// The power series `h` with `h(0) = 1` and `h^r ≡ g mod x^{s+1}`, where
/// `s = deg g / r`.
fn newton_series<K: Ring>(
    g: &SparsePoly<K>,
    r: u64,
    ceiling: usize,
    observer: &mut dyn FnMut(&IterationView<K>),
) -> Result<SeriesRoot<K>> {
    let ring = g.ring().clone();
    let n = g.degree();
    let s = &n / r;
    let inv_r = ring
        .divide(&ring.one(), &ring.from_i64(r as i64))
        .ok_or(Error::NotInvertible)?;
    let mut h = SparsePoly::one(ring);
    let mut k = BigUint::one();
    let mut schedule = Vec::new();
    let mut peak = g.sparsity();
    while k <= s {
        observer(&IterationView {
            k: &k,
            root: &h,
            target: g,
            r,
        });
        let l = (&s + 1u32 - &k).min(k.clone());
        let bound = &k + &l;
        let hg = h.mul_bounded(g, Some(&bound));
        track(hg.sparsity(), ceiling, &mut peak)?;
        let power = truncated_power(&h, r + 1, &bound, ceiling, &mut peak)?;
        let a = (&hg - &power).shift_div(&k)?.scale(&inv_r);
        let step = series_inverse_quotient_capped(&a, g, &l, ceiling)?;
        h = &h + &step.shift_mul(&k);
        track(h.sparsity(), ceiling, &mut peak)?;
        schedule.push(NewtonStep {
            k: k.clone(),
            l: l.clone(),
            power_terms: power.sparsity(),
            root_terms: h.sparsity(),
        });
        k = bound;
    }
    Ok(SeriesRoot {
        root: h,
        schedule,
        peak,
    })
}

/// The logarithmic-derivative certificate: `true` iff `f = h^r`.
///
/// Checks `f′h = r·h′f`, `lc(f) = lc(h)^r` and `deg f = r·deg h`. The
/// identity proves `f = h^r` when the characteristic is zero or exceeds
/// `deg f`; in smaller characteristic the power is expanded instead.
pub fn verify_power<R: Ring>(f: &SparsePoly<R>, h: &SparsePoly<R>, r: u64) -> bool {
    if f.ring() != h.ring() {
        return false;
    }
    if f.is_zero() || h.is_zero() {
        return f.is_zero() && h.is_zero();
    }
    let ring = f.ring();
    if f.degree() != h.degree() * r {
        return false;
    }
    let lead = ring.pow(h.leading_coeff().unwrap(), &BigUint::from(r));
    if &lead != f.leading_coeff().unwrap() {
        return false;
    }
    let characteristic = ring.characteristic();
    if !characteristic.is_zero() && characteristic <= f.degree() {
        return h.pow(r) == *f;
    }
    let lhs = f.derivative().mul_bounded(h, None);
    let rhs = h
        .derivative()
        .scale(&ring.from_i64(r as i64))
        .mul_bounded(f, None);
    lhs == rhs
}

fn check_r(r: u64) -> Result<()> {
    if r < 2 {
        return Err(Error::ExponentTooSmall(r));
    }
    Ok(())
}

/// Splits off `x^u` and checks `r | u` and `r | deg f - u`.
fn trailing_split<R: Ring>(f: &SparsePoly<R>, r: u64) -> Result<(BigUint, R::Elem)> {
    let t = f.trailing_term().expect("nonzero input");
    if !(&t.exp % r).is_zero() {
        return Err(not_a_power(NotAPowerReason::TrailingExponent));
    }
    if !((f.degree() - &t.exp) % r).is_zero() {
        return Err(not_a_power(NotAPowerReason::Degree));
    }
    Ok((t.exp.clone(), t.coeff.clone()))
}

/// Runs the iteration modulo a large prime first. `f = h^r` over `Z`
/// implies `f ≡ (h mod p)^r`, so a failure there proves there is no root,
/// long before rational coefficients of a non-power grow out of hand.
fn modular_rejection(f: &SparsePoly<Integers>, r: u64, options: &NewtonOptions) -> Option<Error> {
    let bits = if f.degree().bits() < 61 { 61 } else { 127 };
    let p = (BigUint::one() << bits) - 1u32;
    if f.degree() >= p {
        return None;
    }
    let field = SmallPrimeField::new_unchecked(&p).ok()?;
    let image = f.map_coeffs(field.clone(), |c| field.from_bigint(c));
    if image.sparsity() != f.sparsity() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    match compute_root_newton_field(&image, r, options, &mut rng) {
        Err(e @ Error::NotAPower(_)) => Some(e),
        _ => None,
    }
}

/// Computes `h ∈ Z[x]` with `h^r = f`, or reports why none exists.
///
/// The iteration runs over `Q`; the result must come out integral. For
/// even `r` the root with positive leading coefficient is returned.
pub fn compute_root_newton(
    f: &SparsePoly<Integers>,
    r: u64,
    options: &NewtonOptions,
) -> Result<RootResult<Integers>> {
    compute_root_newton_observed(f, r, options, &mut |_| {})
}

/// [`compute_root_newton`] with a callback at the head of every iteration.
pub fn compute_root_newton_observed(
    f: &SparsePoly<Integers>,
    r: u64,
    options: &NewtonOptions,
    observer: &mut dyn FnMut(&IterationView<Rationals>),
) -> Result<RootResult<Integers>> {
    check_r(r)?;
    let ceiling = options.ceiling_for(f.sparsity(), r);
    if f.is_zero() {
        return Ok(zero_root(Integers, ceiling));
    }
    let (u, fu) = trailing_split(f, r)?;
    let b = match integer_rth_root(&fu, r) {
        Ok(Some(b)) => b,
        Ok(None) | Err(Error::EvenRootOfNegative) => {
            return Err(not_a_power(NotAPowerReason::TrailingCoefficient))
        }
        Err(e) => return Err(e),
    };
    if let Some(e) = modular_rejection(f, r, options) {
        return Err(e);
    }
    let fu_q = BigRational::from_integer(fu);
    let g = f
        .shift_div(&u)?
        .map_coeffs(Rationals, |c| BigRational::from_integer(c.clone()) / &fu_q);
    let series = newton_series(&g, r, ceiling, observer)?;
    let b_q = BigRational::from_integer(b);
    let mut terms = Vec::with_capacity(series.root.sparsity());
    for t in series.root.terms() {
        let c = &t.coeff * &b_q;
        if !c.is_integer() {
            return Err(not_a_power(NotAPowerReason::NonIntegral));
        }
        terms.push((c.to_integer(), t.exp.clone()));
    }
    let mut root = SparsePoly::normalize(Integers, terms).shift_mul(&(&u / r));
    if r.is_multiple_of(2) && root.leading_coeff().is_some_and(|c| c.is_negative()) {
        root = -&root;
    }
    finish(f, root, r, u, series, ceiling)
}

/// Computes `h ∈ F_q[x]` with `h^r = f`; requires `char F_q > deg f`.
///
/// Any of the `r`-th roots may be returned.
pub fn compute_root_newton_field<F: FiniteField, G: Rng + ?Sized>(
    f: &SparsePoly<F>,
    r: u64,
    options: &NewtonOptions,
    rng: &mut G,
) -> Result<RootResult<F>> {
    compute_root_newton_field_observed(f, r, options, rng, &mut |_| {})
}

pub fn compute_root_newton_field_observed<F: FiniteField, G: Rng + ?Sized>(
    f: &SparsePoly<F>,
    r: u64,
    options: &NewtonOptions,
    rng: &mut G,
    observer: &mut dyn FnMut(&IterationView<F>),
) -> Result<RootResult<F>> {
    check_r(r)?;
    let field = f.ring().clone();
    let ceiling = options.ceiling_for(f.sparsity(), r);
    if f.is_zero() {
        return Ok(zero_root(field, ceiling));
    }
    let characteristic = field.characteristic();
    if characteristic <= f.degree() {
        return Err(Error::CharacteristicTooSmall {
            characteristic,
            degree: f.degree(),
        });
    }
    let (u, fu) = trailing_split(f, r)?;
    let b = rth_root_in_field(&field, &fu, r, rng)?
        .ok_or(not_a_power(NotAPowerReason::TrailingCoefficient))?;
    let fu_inv = field.inv(&fu).expect("trailing coefficient is nonzero");
    let g = f.shift_div(&u)?.scale(&fu_inv);
    let series = newton_series(&g, r, ceiling, observer)?;
    let root = series.root.scale(&b).shift_mul(&(&u / r));
    finish(f, root, r, u, series, ceiling)
}

fn zero_root<R: Ring>(ring: R, ceiling: usize) -> RootResult<R> {
    RootResult {
        root: SparsePoly::zero(ring),
        certified: true,
        diagnostics: RootDiagnostics {
            trailing_exponent: BigUint::zero(),
            iterations: 0,
            max_intermediate_sparsity: 0,
            sparsity_ceiling: ceiling,
            schedule: Vec::new(),
        },
    }
}

fn finish<R: Ring, K: Ring>(
    f: &SparsePoly<R>,
    root: SparsePoly<R>,
    r: u64,
    u: BigUint,
    series: SeriesRoot<K>,
    ceiling: usize,
) -> Result<RootResult<R>> {
    if !verify_power(f, &root, r) {
        return Err(not_a_power(NotAPowerReason::CertificateFailed));
    }
    Ok(RootResult {
        root,
        certified: true,
        diagnostics: RootDiagnostics {
            trailing_exponent: u,
            iterations: series.schedule.len(),
            max_intermediate_sparsity: series.peak,
            sparsity_ceiling: ceiling,
            schedule: series.schedule,
        },
    })
}

/// `⌈‖f‖₁^{2/r}⌉`, the bound on `‖h‖₂²` for any `h` with `h^r = f`.
pub fn two_norm_bound(one_norm: &BigUint, r: u64) -> BigUint {
    // smallest b with b^r ≥ ‖f‖₁²
    let target = one_norm * one_norm;
    let r32 = u32::try_from(r).expect("small exponent");
    let b = target.nth_root(r32);
    if num_traits::Pow::pow(&b, r32) == target {
        b
    } else {
        b + 1u32
    }
}
