//! Lacunary univariate polynomials.
//!
//! A [`SparsePoly`] stores only its nonzero terms, sorted by strictly
//! increasing exponent. Exponents are arbitrary-precision, so the cost of
//! every operation here depends on the number of terms and the bit length
//! of the degree, never on the degree itself (except [`SparsePoly::dense_expand`]).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::{Integers, Ring};

/// Polynomial exponents; only their bit length counts toward input size.
pub type Exponent = BigUint;

/// Largest degree [`SparsePoly::dense_expand`] accepts by default.
pub const DENSE_GUARD: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term<C> {
    pub coeff: C,
    pub exp: Exponent,
}

#[derive(Clone, Debug)]
pub struct SparsePoly<R: Ring> {
    ring: R,
    terms: Vec<Term<R::Elem>>,
}

impl<R: Ring> PartialEq for SparsePoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

/// Exact coefficient norms of an integer polynomial. The 2-norm is kept
/// squared so it stays an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Norms {
    pub one_norm: BigUint,
    pub inf_norm: BigUint,
    pub two_norm_squared: BigUint,
}

impl<R: Ring> SparsePoly<R> {
    pub fn zero(ring: R) -> Self {
        SparsePoly {
            ring,
            terms: Vec::new(),
        }
    }

    pub fn one(ring: R) -> Self {
        let c = ring.one();
        Self::monomial(ring, c, Exponent::zero())
    }

    pub fn constant(ring: R, c: R::Elem) -> Self {
        Self::monomial(ring, c, Exponent::zero())
    }

    /// `c * x^exp`, or zero when `c` is zero.
    pub fn monomial(ring: R, coeff: R::Elem, exp: Exponent) -> Self {
        let terms = if ring.is_zero(&coeff) {
            Vec::new()
        } else {
            vec![Term { coeff, exp }]
        };
        SparsePoly { ring, terms }
    }

    /// Builds a polynomial from arbitrary `(coeff, exp)` pairs: duplicates
    /// are merged, zero coefficients dropped, exponents sorted.
    pub fn normalize<I>(ring: R, raw: I) -> Self
    where
        I: IntoIterator<Item = (R::Elem, Exponent)>,
    {
        let mut raw: Vec<(R::Elem, Exponent)> = raw.into_iter().collect();
        raw.sort_by(|a, b| a.1.cmp(&b.1));
        let terms = merge_sorted(&ring, raw);
        SparsePoly { ring, terms }
    }

    /// Small-integer convenience constructor, mostly for tests.
    pub fn from_pairs(ring: R, pairs: &[(i64, u64)]) -> Self {
        let raw: Vec<_> = pairs
            .iter()
            .map(|&(c, e)| (ring.from_i64(c), Exponent::from(e)))
            .collect();
        Self::normalize(ring, raw)
    }

    /// Wraps terms already in canonical form (sorted, distinct, nonzero).
    pub fn from_canonical_terms(ring: R, terms: Vec<Term<R::Elem>>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].exp < w[1].exp));
        debug_assert!(terms.iter().all(|t| !ring.is_zero(&t.coeff)));
        SparsePoly { ring, terms }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn terms(&self) -> &[Term<R::Elem>] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term<R::Elem>> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> Exponent {
        self.terms.last().map(|t| t.exp.clone()).unwrap_or_default()
    }

    pub fn leading_coeff(&self) -> Option<&R::Elem> {
        self.terms.last().map(|t| &t.coeff)
    }

    /// Lowest-degree term.
    pub fn trailing_term(&self) -> Option<&Term<R::Elem>> {
        self.terms.first()
    }

    pub fn coeff(&self, exp: &Exponent) -> Option<&R::Elem> {
        self.terms
            .binary_search_by(|t| t.exp.cmp(exp))
            .ok()
            .map(|i| &self.terms[i].coeff)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.combine(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.combine(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.mul_bounded(other, None))
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let ring = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = j == other.terms.len()
                || (i < self.terms.len() && self.terms[i].exp <= other.terms[j].exp);
            let take_right = i == self.terms.len()
                || (j < other.terms.len() && other.terms[j].exp <= self.terms[i].exp);
            let rhs = |c: &R::Elem| if subtract { ring.neg(c) } else { c.clone() };
            match (take_left, take_right) {
                (true, true) => {
                    let c = if subtract {
                        ring.sub(&self.terms[i].coeff, &other.terms[j].coeff)
                    } else {
                        ring.add(&self.terms[i].coeff, &other.terms[j].coeff)
                    };
                    if !ring.is_zero(&c) {
                        out.push(Term {
                            coeff: c,
                            exp: self.terms[i].exp.clone(),
                        });
                    }
                    i += 1;
                    j += 1;
                }
                (true, false) => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                _ => {
                    out.push(Term {
                        coeff: rhs(&other.terms[j].coeff),
                        exp: other.terms[j].exp.clone(),
                    });
                    j += 1;
                }
            }
        }
        SparsePoly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    /// Product keeping only terms with exponent below `bound` (all terms
    /// when `bound` is `None`). Products past the bound are never formed.
    pub fn mul_bounded(&self, other: &Self, bound: Option<&Exponent>) -> Self {
        assert!(
            self.ring == other.ring,
            "ring mismatch in polynomial product"
        );
        let ring = &self.ring;
        if self.is_zero() || other.is_zero() {
            return Self::zero(ring.clone());
        }
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            if let Some(b) = bound {
                if &a.exp >= b {
                    break;
                }
            }
            for b in &other.terms {
                let e = &a.exp + &b.exp;
                if let Some(limit) = bound {
                    if &e >= limit {
                        break;
                    }
                }
                raw.push((ring.mul(&a.coeff, &b.coeff), e));
            }
        }
        raw.sort_by(|x, y| x.1.cmp(&y.1));
        SparsePoly {
            ring: ring.clone(),
            terms: merge_sorted(ring, raw),
        }
    }

    /// `self^e`, truncated below `bound` after every multiplication.
    pub fn pow_bounded(&self, e: u64, bound: Option<&Exponent>) -> Self {
        let mut acc = Self::one(self.ring.clone());
        if let Some(b) = bound {
            acc = acc.truncate(b);
        }
        let bits = 64 - e.leading_zeros();
        for i in (0..bits).rev() {
            acc = acc.mul_bounded(&acc, bound);
            if (e >> i) & 1 == 1 {
                acc = acc.mul_bounded(self, bound);
            }
        }
        acc
    }

    pub fn pow(&self, e: u64) -> Self {
        self.pow_bounded(e, None)
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let ring = &self.ring;
        let terms = self
            .terms
            .iter()
            .filter_map(|t| {
                let coeff = ring.mul(&t.coeff, c);
                (!ring.is_zero(&coeff)).then(|| Term {
                    coeff,
                    exp: t.exp.clone(),
                })
            })
            .collect();
        SparsePoly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Formal derivative. Exponents are mapped into the ring first, so in
    /// characteristic `p` the terms with `p | e` vanish.
    pub fn derivative(&self) -> Self {
        let ring = &self.ring;
        let terms = self
            .terms
            .iter()
            .filter(|t| !t.exp.is_zero())
            .filter_map(|t| {
                let coeff = ring.mul(&t.coeff, &ring.from_biguint(&t.exp));
                (!ring.is_zero(&coeff)).then(|| Term {
                    coeff,
                    exp: &t.exp - 1u32,
                })
            })
            .collect();
        SparsePoly {
            ring: ring.clone(),
            terms,
        }
    }

    /// `self rem x^k`: the terms with exponent below `k`.
    pub fn truncate(&self, k: &Exponent) -> Self {
        let cut = self.terms.partition_point(|t| &t.exp < k);
        SparsePoly {
            ring: self.ring.clone(),
            terms: self.terms[..cut].to_vec(),
        }
    }

    /// Exact division by `x^k`.
    pub fn shift_div(&self, k: &Exponent) -> Result<Self> {
        if let Some(t) = self.terms.first() {
            if &t.exp < k {
                return Err(Error::ShiftBelowTerm {
                    shift: k.clone(),
                    exp: t.exp.clone(),
                });
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: t.coeff.clone(),
                exp: &t.exp - k,
            })
            .collect();
        Ok(SparsePoly {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Multiplication by `x^k`.
    pub fn shift_mul(&self, k: &Exponent) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: t.coeff.clone(),
                exp: &t.exp + k,
            })
            .collect();
        SparsePoly {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Coefficient array of length `deg + 1`, under [`DENSE_GUARD`].
    pub fn dense_expand(&self) -> Result<Vec<R::Elem>> {
        self.dense_expand_with_guard(DENSE_GUARD)
    }

    pub fn dense_expand_with_guard(&self, guard: usize) -> Result<Vec<R::Elem>> {
        if self.is_zero() {
            return Ok(Vec::new());
        }
        let deg = self.degree();
        let n = deg
            .to_usize()
            .filter(|&n| n <= guard)
            .ok_or(Error::DenseGuard {
                degree: deg.clone(),
                guard,
            })?;
        let mut out = vec![self.ring.zero(); n + 1];
        for t in &self.terms {
            out[t.exp.to_usize().expect("bounded by degree")] = t.coeff.clone();
        }
        Ok(out)
    }

    /// Inverse of [`SparsePoly::dense_expand`].
    pub fn from_dense(ring: R, coeffs: &[R::Elem]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !ring.is_zero(c))
            .map(|(i, c)| Term {
                coeff: c.clone(),
                exp: Exponent::from(i),
            })
            .collect();
        SparsePoly { ring, terms }
    }

    /// Reinterprets the coefficients in another ring, dropping terms that
    /// map to zero.
    pub fn map_coeffs<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> SparsePoly<S> {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| {
                let c = f(&t.coeff);
                (!target.is_zero(&c)).then(|| Term {
                    coeff: c,
                    exp: t.exp.clone(),
                })
            })
            .collect();
        SparsePoly {
            ring: target,
            terms,
        }
    }

    /// Evaluation at a ring element.
    pub fn evaluate(&self, at: &R::Elem) -> R::Elem {
        let ring = &self.ring;
        let mut acc = ring.zero();
        for t in &self.terms {
            let v = ring.mul(&t.coeff, &ring.pow(at, &t.exp));
            ring.add_assign(&mut acc, &v);
        }
        acc
    }
}

/// Merges runs of equal exponents in an exponent-sorted list.
fn merge_sorted<R: Ring>(ring: &R, raw: Vec<(R::Elem, Exponent)>) -> Vec<Term<R::Elem>> {
    let mut out: Vec<Term<R::Elem>> = Vec::with_capacity(raw.len());
    for (c, e) in raw {
        match out.last_mut() {
            Some(last) if last.exp == e => ring.add_assign(&mut last.coeff, &c),
            _ => {
                if let Some(last) = out.last() {
                    if ring.is_zero(&last.coeff) {
                        out.pop();
                    }
                }
                out.push(Term { coeff: c, exp: e });
            }
        }
    }
    if out.last().is_some_and(|t| ring.is_zero(&t.coeff)) {
        out.pop();
    }
    out
}

/// Power-series quotient: the `q` with `q * g ≡ a (mod x^l)`.
///
/// Sparse long division from the bottom: the lowest surviving term of the
/// running remainder fixes the next quotient term, so the work is
/// proportional to `τ(q) · τ(g)` rather than to `l`.
pub fn series_inverse_quotient<R: Ring>(
    a: &SparsePoly<R>,
    g: &SparsePoly<R>,
    l: &Exponent,
) -> Result<SparsePoly<R>> {
    series_inverse_quotient_capped(a, g, l, usize::MAX)
}

/// [`series_inverse_quotient`], failing with [`Error::SparsityCeiling`] as
/// soon as the quotient or the running remainder exceeds `cap` terms.
pub fn series_inverse_quotient_capped<R: Ring>(
    a: &SparsePoly<R>,
    g: &SparsePoly<R>,
    l: &Exponent,
    cap: usize,
) -> Result<SparsePoly<R>> {
    if a.ring != g.ring {
        return Err(Error::RingMismatch);
    }
    let ring = &a.ring;
    let g0 = match g.terms.first() {
        Some(t) if t.exp.is_zero() => t.coeff.clone(),
        _ => return Err(Error::ZeroConstantTerm),
    };
    let mut rem: BTreeMap<Exponent, R::Elem> = a
        .truncate(l)
        .terms
        .into_iter()
        .map(|t| (t.exp, t.coeff))
        .collect();
    let mut quotient = Vec::new();
    while let Some((e, c)) = rem.pop_first() {
        let qc = ring.divide(&c, &g0).ok_or(Error::NotInvertible)?;
        for gt in &g.terms[1..] {
            let exp = &e + &gt.exp;
            if &exp >= l {
                break;
            }
            let delta = ring.mul(&qc, &gt.coeff);
            match rem.entry(exp) {
                std::collections::btree_map::Entry::Occupied(mut slot) => {
                    let v = ring.sub(slot.get(), &delta);
                    if ring.is_zero(&v) {
                        slot.remove();
                    } else {
                        *slot.get_mut() = v;
                    }
                }
                std::collections::btree_map::Entry::Vacant(slot) => {
                    slot.insert(ring.neg(&delta));
                }
            }
        }
        quotient.push(Term { coeff: qc, exp: e });
        let terms = quotient.len().max(rem.len());
        if terms > cap {
            return Err(Error::SparsityCeiling {
                terms,
                ceiling: cap,
            });
        }
    }
    Ok(SparsePoly {
        ring: ring.clone(),
        terms: quotient,
    })
}

impl SparsePoly<Integers> {
    pub fn norms(&self) -> Norms {
        let mut one_norm = BigUint::zero();
        let mut inf_norm = BigUint::zero();
        let mut two_norm_squared = BigUint::zero();
        for t in &self.terms {
            let m = t.coeff.magnitude();
            one_norm += m;
            two_norm_squared += m * m;
            if m > &inf_norm {
                inf_norm = m.clone();
            }
        }
        Norms {
            one_norm,
            inf_norm,
            two_norm_squared,
        }
    }

    /// `‖f‖∞`.
    pub fn height(&self) -> BigUint {
        self.terms
            .iter()
            .map(|t| t.coeff.magnitude().clone())
            .max()
            .unwrap_or_default()
    }

    pub fn from_i64_pairs(pairs: &[(i64, u64)]) -> Self {
        Self::from_pairs(Integers, pairs)
    }
}

impl<R: Ring> Add for &SparsePoly<R> {
    type Output = SparsePoly<R>;
    fn add(self, rhs: Self) -> SparsePoly<R> {
        self.checked_add(rhs)
            .expect("ring mismatch in polynomial sum")
    }
}

impl<R: Ring> Sub for &SparsePoly<R> {
    type Output = SparsePoly<R>;
    fn sub(self, rhs: Self) -> SparsePoly<R> {
        self.checked_sub(rhs)
            .expect("ring mismatch in polynomial difference")
    }
}

impl<R: Ring> Mul for &SparsePoly<R> {
    type Output = SparsePoly<R>;
    fn mul(self, rhs: Self) -> SparsePoly<R> {
        self.mul_bounded(rhs, None)
    }
}

impl<R: Ring> Neg for &SparsePoly<R> {
    type Output = SparsePoly<R>;
    fn neg(self) -> SparsePoly<R> {
        let ring = &self.ring;
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: ring.neg(&t.coeff),
                exp: t.exp.clone(),
            })
            .collect();
        SparsePoly {
            ring: ring.clone(),
            terms,
        }
    }
}

impl<R> fmt::Display for SparsePoly<R>
where
    R: Ring,
    R::Elem: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let one = self.ring.is_one(&t.coeff);
            match (t.exp.is_zero(), t.exp.is_one()) {
                (true, _) => write!(f, "{}", t.coeff)?,
                (false, true) if one => f.write_str("x")?,
                (false, true) => write!(f, "{}*x", t.coeff)?,
                _ if one => write!(f, "x^{}", t.exp)?,
                _ => write!(f, "{}*x^{}", t.coeff, t.exp)?,
            }
        }
        Ok(())
    }
}

/// Sign of an integer polynomial's leading coefficient.
pub fn leading_sign(f: &SparsePoly<Integers>) -> i8 {
    match f.leading_coeff() {
        Some(c) if c.is_negative() => -1,
        Some(_) => 1,
        None => 0,
    }
}

/// Convenience for the common `BigInt` literal case.
pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}
