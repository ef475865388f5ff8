//! Multivariate sparse polynomials, perfect-power detection by random
//! substitution `x_j ↦ a_j·x`, and roots by Kronecker substitution.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::detect::{is_perfect_power_gf, is_perfect_power_z, DetectionReport, Epsilon};
use crate::error::{Error, NotAPowerReason, Result};
use crate::field::primes::is_small_prime;
use crate::field::{find_irreducible, ExtField, FiniteField};
use crate::intmath::integer_rth_root;
use crate::poly::{Exponent, SparsePoly};
use crate::ring::{Integers, Ring};
use crate::root::{compute_root_newton, compute_root_newton_field, NewtonOptions};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiTerm<C> {
    pub coeff: C,
    pub exps: Vec<Exponent>,
}

/// A polynomial in `vars` variables, terms sorted lexicographically by
/// exponent vector with `x_1` most significant.
#[derive(Clone, Debug)]
pub struct MultiSparsePoly<R: Ring> {
    ring: R,
    vars: usize,
    terms: Vec<MultiTerm<R::Elem>>,
}

impl<R: Ring> PartialEq for MultiSparsePoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.vars == other.vars && self.terms == other.terms
    }
}

impl<R: Ring> MultiSparsePoly<R> {
    pub fn zero(ring: R, vars: usize) -> Self {
        MultiSparsePoly {
            ring,
            vars,
            terms: Vec::new(),
        }
    }

    /// Merges duplicate exponent vectors and drops zero coefficients.
    ///
    /// Panics if an exponent vector has the wrong length.
    pub fn normalize<I>(ring: R, vars: usize, raw: I) -> Self
    where
        I: IntoIterator<Item = (R::Elem, Vec<Exponent>)>,
    {
        let mut acc: BTreeMap<Vec<Exponent>, R::Elem> = BTreeMap::new();
        for (c, e) in raw {
            assert_eq!(e.len(), vars, "exponent vector length");
            match acc.get_mut(&e) {
                Some(v) => ring.add_assign(v, &c),
                None => {
                    acc.insert(e, c);
                }
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !ring.is_zero(c))
            .map(|(exps, coeff)| MultiTerm { coeff, exps })
            .collect();
        MultiSparsePoly { ring, vars, terms }
    }

    pub fn from_pairs(ring: R, vars: usize, pairs: &[(i64, &[u64])]) -> Self {
        let raw: Vec<_> = pairs
            .iter()
            .map(|(c, e)| {
                (
                    ring.from_i64(*c),
                    e.iter().map(|&x| Exponent::from(x)).collect(),
                )
            })
            .collect();
        Self::normalize(ring, vars, raw)
    }

    /// Wraps terms that are already sorted, distinct and nonzero.
    pub fn from_canonical_terms(ring: R, vars: usize, terms: Vec<MultiTerm<R::Elem>>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].exps < w[1].exps));
        MultiSparsePoly { ring, vars, terms }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &[MultiTerm<R::Elem>] {
        &self.terms
    }

    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// `max ‖e‖₁` over the support.
    pub fn total_degree(&self) -> Exponent {
        self.terms
            .iter()
            .map(|t| t.exps.iter().sum())
            .max()
            .unwrap_or_default()
    }

    pub fn partial_degree(&self, var: usize) -> Exponent {
        self.terms
            .iter()
            .map(|t| t.exps[var].clone())
            .max()
            .unwrap_or_default()
    }

    /// The lexicographically largest term.
    pub fn leading_term(&self) -> Option<&MultiTerm<R::Elem>> {
        self.terms.last()
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(self.vars, other.vars));
        }
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let e = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
                raw.push((self.ring.mul(&a.coeff, &b.coeff), e));
            }
        }
        Ok(Self::normalize(self.ring.clone(), self.vars, raw))
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::normalize(
            self.ring.clone(),
            self.vars,
            [(self.ring.one(), vec![Exponent::zero(); self.vars])],
        );
        for i in (0..64 - e.leading_zeros()).rev() {
            acc = acc.checked_mul(&acc).expect("same ring");
            if (e >> i) & 1 == 1 {
                acc = acc.checked_mul(self).expect("same ring");
            }
        }
        acc
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let raw = self
            .terms
            .iter()
            .map(|t| (self.ring.mul(&t.coeff, c), t.exps.clone()));
        Self::normalize(self.ring.clone(), self.vars, raw.collect::<Vec<_>>())
    }

    /// `∂f/∂x_var`.
    pub fn partial_derivative(&self, var: usize) -> Self {
        let raw: Vec<_> = self
            .terms
            .iter()
            .filter(|t| !t.exps[var].is_zero())
            .map(|t| {
                let mut e = t.exps.clone();
                let c = self.ring.mul(&t.coeff, &self.ring.from_biguint(&e[var]));
                e[var] -= 1u32;
                (c, e)
            })
            .collect();
        Self::normalize(self.ring.clone(), self.vars, raw)
    }

    pub fn neg(&self) -> Self {
        let raw = self
            .terms
            .iter()
            .map(|t| (self.ring.neg(&t.coeff), t.exps.clone()));
        Self::normalize(self.ring.clone(), self.vars, raw.collect::<Vec<_>>())
    }
}

impl<R: Ring> fmt::Display for MultiSparsePoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{:?}", t.coeff)?;
            for (j, e) in t.exps.iter().enumerate() {
                if !e.is_zero() {
                    write!(f, "*x{}^{}", j + 1, e)?;
                }
            }
        }
        Ok(())
    }
}

/// `f(a_1 x, …, a_ℓ x)`: each term `c·x̄^ē` becomes `c·Πa_j^{e_j}·x^{‖ē‖₁}`.
pub fn substitute_univariate<R: Ring>(
    f: &MultiSparsePoly<R>,
    point: &[R::Elem],
) -> Result<SparsePoly<R>> {
    if point.len() != f.vars {
        return Err(Error::VariableMismatch(f.vars, point.len()));
    }
    let ring = f.ring();
    let raw = f.terms.iter().map(|t| {
        let c = t
            .exps
            .iter()
            .zip(point)
            .fold(t.coeff.clone(), |acc, (e, a)| {
                ring.mul(&acc, &ring.pow(a, e))
            });
        (c, t.exps.iter().sum::<Exponent>())
    });
    Ok(SparsePoly::normalize(ring.clone(), raw.collect::<Vec<_>>()))
}

/// The substitution point used in one round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionWitness {
    /// Points, as integers or as prime-field coordinate lists.
    pub points: Vec<String>,
    #[serde(with = "crate::decimal")]
    pub sample_size: BigUint,
    /// Extension degree applied to a small base field, 1 otherwise.
    pub extension_degree: usize,
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiDetectionReport {
    pub report: DetectionReport,
    pub witnesses: Vec<SubstitutionWitness>,
}

/// `8n² + 4n`.
pub fn sample_size(total_degree: &BigUint) -> BigUint {
    total_degree * total_degree * 8u32 + total_degree * 4u32
}

/// Substituted coefficients over `Z` are kept below this many bits.
pub const MAX_SUBSTITUTED_BITS: u64 = 1 << 22;

/// Redraws allowed per round when the substitution degenerates.
const REDRAWS: usize = 64;

fn check_multi_input<R: Ring>(f: &MultiSparsePoly<R>) -> Result<BigUint> {
    if f.sparsity() < 2 {
        return Err(Error::MonomialInput);
    }
    let n = f.total_degree();
    if n.is_zero() {
        return Err(Error::DegreeTooSmall);
    }
    Ok(n)
}

fn rounds(epsilon: &Epsilon) -> usize {
    epsilon.split(2).log2_inv_ceil() as usize
}

struct RoundOutcome {
    report: DetectionReport,
    witness: SubstitutionWitness,
}

fn run_rounds<G: Rng + ?Sized>(
    epsilon: &Epsilon,
    rng: &mut G,
    mut round: impl FnMut(&Epsilon, &mut G) -> Result<RoundOutcome>,
) -> Result<MultiDetectionReport> {
    let k = rounds(epsilon);
    let share = epsilon.split(2 * k);
    let mut out = MultiDetectionReport {
        report: DetectionReport::empty(epsilon),
        witnesses: Vec::new(),
    };
    for _ in 0..k {
        let RoundOutcome { report, witness } = round(&share, rng)?;
        for r in report.candidates {
            if !out.report.candidates.contains(&r) {
                out.report.candidates.push(r);
            }
        }
        out.report.trace.extend(report.trace);
        out.witnesses.push(witness);
        if report.verdict {
            out.report.verdict = true;
            out.report.r_found = report.r_found;
            break;
        }
    }
    Ok(out)
}

/// Decides whether `f ∈ Z[x_1..x_ℓ]` is a perfect power.
///
/// Runs `⌈log₂(2/ε)⌉` rounds; each substitutes points drawn from
/// `{1, …, 8n²+4n}` and calls the univariate driver with budget `ε/(2K)`.
/// Accepts as soon as one round accepts. Substitutions whose result has
/// fewer than two terms or degree zero are redrawn.
pub fn detect_multivariate_z<G: Rng + ?Sized>(
    f: &MultiSparsePoly<Integers>,
    epsilon: &Epsilon,
    rng: &mut G,
) -> Result<MultiDetectionReport> {
    let n = check_multi_input(f)?;
    let size = sample_size(&n);
    let bits_per_point = size.bits();
    let widest = f
        .terms()
        .iter()
        .map(|t| t.exps.iter().sum::<BigUint>() * bits_per_point + t.coeff.bits())
        .max()
        .unwrap_or_default();
    if widest > BigUint::from(MAX_SUBSTITUTED_BITS) {
        return Err(Error::CoefficientTooLarge(MAX_SUBSTITUTED_BITS));
    }
    let top = &size + 1u32;
    run_rounds(epsilon, rng, |share, rng| {
        for _ in 0..REDRAWS {
            let point: Vec<BigInt> = (0..f.vars())
                .map(|_| BigInt::from(rng.gen_biguint_range(&BigUint::one(), &top)))
                .collect();
            let g = substitute_univariate(f, &point)?;
            if g.sparsity() < 2 || g.degree().is_zero() {
                continue;
            }
            let report = is_perfect_power_z(&g, share, rng)?;
            let witness = SubstitutionWitness {
                points: point.iter().map(|a| a.to_string()).collect(),
                sample_size: size.clone(),
                extension_degree: 1,
                accepted: report.verdict,
            };
            return Ok(RoundOutcome { report, witness });
        }
        Err(Error::InvalidArgument(
            "every substitution degenerated".into(),
        ))
    })
}

fn describe<F: FiniteField>(field: &F, a: &F::Elem) -> String {
    let coords = field.to_prime_coords(a);
    if coords.len() == 1 {
        coords[0].to_string()
    } else {
        let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

fn field_rounds<F: FiniteField, G: Rng + ?Sized>(
    f: &MultiSparsePoly<F>,
    size: &BigUint,
    extension_degree: usize,
    epsilon: &Epsilon,
    rng: &mut G,
) -> Result<MultiDetectionReport> {
    let field = f.ring().clone();
    let top = size + 1u32;
    run_rounds(epsilon, rng, |share, rng| {
        for _ in 0..REDRAWS {
            let point: Vec<F::Elem> = (0..f.vars())
                .map(|_| field.element_at(&rng.gen_biguint_range(&BigUint::one(), &top)))
                .collect();
            let g = substitute_univariate(f, &point)?;
            if g.sparsity() < 2 || g.degree().is_zero() {
                continue;
            }
            let report = is_perfect_power_gf(&g, share, rng)?;
            let witness = SubstitutionWitness {
                points: point.iter().map(|a| describe(&field, a)).collect(),
                sample_size: size.clone(),
                extension_degree,
                accepted: report.verdict,
            };
            return Ok(RoundOutcome { report, witness });
        }
        Err(Error::InvalidArgument(
            "every substitution degenerated".into(),
        ))
    })
}

/// Decides whether `f ∈ F_q[x_1..x_ℓ]` is a perfect power; needs
/// `char F_q > n`.
///
/// When `q ≤ 8n²+4n` the points come from `F_{q^ν}` with `ν` the least
/// prime exceeding `τ(f)` and large enough. Since `ν` is coprime to every
/// candidate `r ≤ τ(f)`, being an `r`-th power over `F_{q^ν}` implies the
/// same over `F_q`.
pub fn detect_multivariate_gf<F: FiniteField, G: Rng + ?Sized>(
    f: &MultiSparsePoly<F>,
    epsilon: &Epsilon,
    rng: &mut G,
) -> Result<MultiDetectionReport> {
    let n = check_multi_input(f)?;
    let field = f.ring().clone();
    let characteristic = field.characteristic();
    if characteristic <= n {
        return Err(Error::CharacteristicTooSmall {
            characteristic,
            degree: n,
        });
    }
    let size = sample_size(&n);
    let q = field.order();
    if q > size {
        return field_rounds(f, &size, 1, epsilon, rng);
    }
    let mut nu = f.sparsity() as u64 + 1;
    while !is_small_prime(nu) || num_traits::Pow::pow(&q, nu) <= size {
        nu += 1;
    }
    let nu = nu as usize;
    let modulus = loop {
        if let Some(m) = find_irreducible(&field, nu, 20, rng) {
            break m;
        }
    };
    let ext = ExtField::new_unchecked(field.clone(), modulus);
    let lifted = MultiSparsePoly::normalize(
        ext.clone(),
        f.vars(),
        f.terms()
            .iter()
            .map(|t| (ext.embed(&t.coeff), t.exps.clone()))
            .collect::<Vec<_>>(),
    );
    field_rounds(&lifted, &size, nu, epsilon, rng)
}

/// Mixed-radix weights `1, d_1, d_1 d_2, …` for the substitution
/// `x_i ↦ y^{d_1⋯d_{i-1}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KroneckerMap {
    radices: Vec<BigUint>,
}

impl KroneckerMap {
    pub fn new(radices: Vec<BigUint>) -> Self {
        assert!(
            radices.iter().all(|d| !d.is_zero()),
            "radix must be positive"
        );
        KroneckerMap { radices }
    }

    pub fn radices(&self) -> &[BigUint] {
        &self.radices
    }

    pub fn encode(&self, exps: &[Exponent]) -> Exponent {
        let mut weight = BigUint::one();
        let mut acc = BigUint::zero();
        for (e, d) in exps.iter().zip(&self.radices) {
            acc += e * &weight;
            weight *= d;
        }
        acc
    }

    /// Digits of `e`; `None` if `e` needs more than the last radix allows.
    pub fn decode(&self, e: &Exponent) -> Option<Vec<Exponent>> {
        let mut rest = e.clone();
        let mut out = Vec::with_capacity(self.radices.len());
        for d in &self.radices {
            out.push(&rest % d);
            rest /= d;
        }
        rest.is_zero().then_some(out)
    }

    pub fn apply<R: Ring>(&self, f: &MultiSparsePoly<R>) -> SparsePoly<R> {
        let raw = f
            .terms()
            .iter()
            .map(|t| (t.coeff.clone(), self.encode(&t.exps)));
        SparsePoly::normalize(f.ring().clone(), raw.collect::<Vec<_>>())
    }

    pub fn invert<R: Ring>(&self, g: &SparsePoly<R>) -> Option<MultiSparsePoly<R>> {
        let mut raw = Vec::with_capacity(g.sparsity());
        for t in g.terms() {
            raw.push((t.coeff.clone(), self.decode(&t.exp)?));
        }
        Some(MultiSparsePoly::normalize(
            g.ring().clone(),
            self.radices.len(),
            raw,
        ))
    }
}

/// `true` iff `f = h^r`, via `∂_i f·h = r·∂_i h·f` for every variable and
/// equality of leading terms. Requires characteristic zero or above the
/// total degree of `f`.
pub fn verify_power_multi<R: Ring>(f: &MultiSparsePoly<R>, h: &MultiSparsePoly<R>, r: u64) -> bool {
    if f.ring() != h.ring() || f.vars() != h.vars() {
        return false;
    }
    if f.is_zero() || h.is_zero() {
        return f.is_zero() && h.is_zero();
    }
    let ring = f.ring();
    let (lf, lh) = (f.leading_term().unwrap(), h.leading_term().unwrap());
    let expected: Vec<Exponent> = lh.exps.iter().map(|e| e * r).collect();
    if lf.exps != expected || lf.coeff != ring.pow(&lh.coeff, &BigUint::from(r)) {
        return false;
    }
    let rr = ring.from_i64(r as i64);
    (0..f.vars()).all(|i| {
        let lhs = f.partial_derivative(i).checked_mul(h).expect("same ring");
        let rhs = h
            .partial_derivative(i)
            .scale(&rr)
            .checked_mul(f)
            .expect("same ring");
        lhs == rhs
    })
}

fn kronecker_map_for<R: Ring>(f: &MultiSparsePoly<R>, r: u64) -> Result<KroneckerMap> {
    let mut radices = Vec::with_capacity(f.vars());
    for i in 0..f.vars() {
        let d = f.partial_degree(i);
        if !(&d % r).is_zero() {
            return Err(Error::NotAPower(NotAPowerReason::PartialDegree));
        }
        radices.push(d / r + 1u32);
    }
    Ok(KroneckerMap::new(radices))
}

fn monomial_exponents(t: &MultiTerm<impl Clone>, r: u64) -> Result<Vec<Exponent>> {
    t.exps
        .iter()
        .map(|e| {
            if (e % r).is_zero() {
                Ok(e / r)
            } else {
                Err(Error::NotAPower(NotAPowerReason::PartialDegree))
            }
        })
        .collect()
}

fn finish_kronecker<R: Ring>(
    f: &MultiSparsePoly<R>,
    map: &KroneckerMap,
    root: &SparsePoly<R>,
    r: u64,
) -> Result<MultiSparsePoly<R>> {
    let h = map
        .invert(root)
        .ok_or(Error::NotAPower(NotAPowerReason::CertificateFailed))?;
    if !verify_power_multi(f, &h, r) {
        return Err(Error::NotAPower(NotAPowerReason::CertificateFailed));
    }
    Ok(h)
}

/// Computes `h ∈ Z[x_1..x_ℓ]` with `h^r = f` through Kronecker
/// substitution and the univariate Newton iteration. For even `r` the
/// root whose lexicographically leading coefficient is positive is
/// returned.
pub fn kronecker_root_z(
    f: &MultiSparsePoly<Integers>,
    r: u64,
    options: &NewtonOptions,
) -> Result<MultiSparsePoly<Integers>> {
    if r < 2 {
        return Err(Error::ExponentTooSmall(r));
    }
    if f.is_zero() {
        return Ok(f.clone());
    }
    if f.is_monomial() {
        let t = &f.terms()[0];
        let exps = monomial_exponents(t, r)?;
        let c = match integer_rth_root(&t.coeff, r) {
            Ok(Some(c)) => c,
            Ok(None) | Err(Error::EvenRootOfNegative) => {
                return Err(Error::NotAPower(NotAPowerReason::TrailingCoefficient))
            }
            Err(e) => return Err(e),
        };
        return Ok(MultiSparsePoly::normalize(Integers, f.vars(), [(c, exps)]));
    }
    let map = kronecker_map_for(f, r)?;
    let root = compute_root_newton(&map.apply(f), r, options)?.root;
    let h = finish_kronecker(f, &map, &root, r)?;
    if r.is_multiple_of(2) && h.leading_term().is_some_and(|t| t.coeff.is_negative()) {
        return Ok(h.neg());
    }
    Ok(h)
}

/// Computes `h ∈ F_q[x_1..x_ℓ]` with `h^r = f`; the characteristic must
/// exceed the degree of the Kronecker image.
pub fn kronecker_root_field<F: FiniteField, G: Rng + ?Sized>(
    f: &MultiSparsePoly<F>,
    r: u64,
    options: &NewtonOptions,
    rng: &mut G,
) -> Result<MultiSparsePoly<F>> {
    if r < 2 {
        return Err(Error::ExponentTooSmall(r));
    }
    if f.is_zero() {
        return Ok(f.clone());
    }
    let map = kronecker_map_for(f, r)?;
    let root = compute_root_newton_field(&map.apply(f), r, options, rng)?.root;
    finish_kronecker(f, &map, &root, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(vars: usize, pairs: &[(i64, &[u64])]) -> MultiSparsePoly<Integers> {
        MultiSparsePoly::from_pairs(Integers, vars, pairs)
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn substitution_examples() {
        let f = m(2, &[(1, &[1, 1]), (1, &[0, 0])]);
        assert_eq!(
            substitute_univariate(&f, &ints(&[1, 2])).unwrap(),
            SparsePoly::from_i64_pairs(&[(2, 2), (1, 0)])
        );
        let g = m(2, &[(1, &[1, 0]), (1, &[0, 1])]);
        assert!(substitute_univariate(&g, &ints(&[1, -1]))
            .unwrap()
            .is_zero());
        let k = m(2, &[(1, &[2, 0]), (1, &[0, 3])]);
        assert_eq!(
            substitute_univariate(&k, &ints(&[1, 1])).unwrap(),
            SparsePoly::from_i64_pairs(&[(1, 2), (1, 3)])
        );
        assert!(substitute_univariate(&k, &ints(&[1])).is_err());
    }

    #[test]
    fn detection_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sq = m(2, &[(1, &[2, 2]), (2, &[1, 1]), (1, &[0, 0])]);
        let rep = detect_multivariate_z(&sq, &Epsilon::pow2(10), &mut rng).unwrap();
        assert!(rep.report.verdict);
        assert_eq!(rep.report.r_found, Some(2));
        assert_eq!(rep.witnesses.len(), 1);
        assert_eq!(rep.witnesses[0].sample_size, BigUint::from(144u32));

        let not = m(2, &[(1, &[1, 1]), (1, &[0, 0])]);
        let rep = detect_multivariate_z(&not, &Epsilon::pow2(10), &mut rng).unwrap();
        assert!(!rep.report.verdict);
        assert_eq!(rep.witnesses.len(), 11);

        assert_eq!(
            detect_multivariate_z(&m(2, &[(4, &[2, 2])]), &Epsilon::quarter(), &mut rng)
                .unwrap_err(),
            Error::MonomialInput
        );
    }

    #[test]
    fn small_field_is_extended() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let f7 = PrimeField::new(BigUint::from(7u32)).unwrap();
        let h =
            MultiSparsePoly::from_pairs(f7.clone(), 2, &[(1, &[1, 0]), (3, &[0, 1]), (1, &[0, 0])]);
        let f = h.pow(2);
        let rep = detect_multivariate_gf(&f, &Epsilon::pow2(8), &mut rng).unwrap();
        assert!(rep.report.verdict);
        // τ(f) = 6, so ν is the least prime above 6 with 7^ν > 8·4 + 8
        assert_eq!(rep.witnesses[0].extension_degree, 7);
        let big = PrimeField::new(BigUint::from(1_000_003u32)).unwrap();
        let g = MultiSparsePoly::from_pairs(big, 2, &[(1, &[1, 1]), (1, &[0, 0])]);
        assert!(
            !detect_multivariate_gf(&g, &Epsilon::pow2(8), &mut rng)
                .unwrap()
                .report
                .verdict
        );
    }

    #[test]
    fn kronecker_examples() {
        let opts = NewtonOptions::default();
        let f = m(2, &[(1, &[2, 0]), (2, &[1, 1]), (1, &[0, 2])]);
        let map = kronecker_map_for(&f, 2).unwrap();
        assert_eq!(map.radices(), &[BigUint::from(2u32), BigUint::from(2u32)]);
        assert_eq!(
            map.apply(&f),
            SparsePoly::from_i64_pairs(&[(1, 2), (2, 3), (1, 4)])
        );
        assert_eq!(
            kronecker_root_z(&f, 2, &opts).unwrap(),
            m(2, &[(1, &[1, 0]), (1, &[0, 1])])
        );
        assert_eq!(
            kronecker_root_z(&m(2, &[(1, &[2, 2])]), 2, &opts).unwrap(),
            m(2, &[(1, &[1, 1])])
        );
        let cubes = m(2, &[(1, &[3, 0]), (1, &[0, 3])]);
        assert!(matches!(
            kronecker_root_z(&cubes, 3, &opts),
            Err(Error::NotAPower(_))
        ));
        assert_eq!(
            kronecker_root_z(&m(2, &[(1, &[1, 0]), (1, &[0, 2])]), 2, &opts),
            Err(Error::NotAPower(NotAPowerReason::PartialDegree))
        );
    }

    #[test]
    fn multivariate_certificate() {
        let h = m(2, &[(1, &[1, 0]), (1, &[0, 1])]);
        assert!(verify_power_multi(&h.pow(2), &h, 2));
        assert!(!verify_power_multi(
            &h.pow(2).scale(&BigInt::from(2)),
            &h,
            2
        ));
        assert!(!verify_power_multi(&h.pow(3), &h, 2));
    }

    fn arb_multi(vars: usize) -> impl Strategy<Value = MultiSparsePoly<Integers>> {
        prop::collection::vec((-9i64..10, prop::collection::vec(0u64..6, vars)), 1..6).prop_map(
            move |ts| {
                let raw: Vec<_> = ts
                    .into_iter()
                    .map(|(c, e)| (BigInt::from(c), e.into_iter().map(BigUint::from).collect()))
                    .collect();
                MultiSparsePoly::normalize(Integers, vars, raw)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn substitution_is_multiplicative(f in arb_multi(3), g in arb_multi(3), a in prop::collection::vec(-5i64..6, 3)) {
            let pt = ints(&a);
            let lhs = substitute_univariate(&f.checked_mul(&g).unwrap(), &pt).unwrap();
            let rhs = &substitute_univariate(&f, &pt).unwrap() * &substitute_univariate(&g, &pt).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn kronecker_round_trip(h in arb_multi(3), extra in prop::collection::vec(0u64..4, 3)) {
            let radices = (0..3).map(|i| h.partial_degree(i) + 1u32 + extra[i]).collect();
            let map = KroneckerMap::new(radices);
            prop_assert_eq!(map.invert(&map.apply(&h)).unwrap(), h);
        }

        #[test]
        fn kronecker_inverts_powers(h in arb_multi(2), r in 2u64..4) {
            prop_assume!(!h.is_zero());
            let f = h.pow(r);
            let root = kronecker_root_z(&f, r, &NewtonOptions::default()).unwrap();
            if r % 2 == 1 || h.leading_term().unwrap().coeff.is_positive() {
                prop_assert_eq!(root, h);
            } else {
                prop_assert_eq!(root, h.neg());
            }
        }
    }
}
