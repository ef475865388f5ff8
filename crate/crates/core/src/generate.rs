//! Random sparse instances `f = h^r` for tests and benchmarks.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_traits::{One, Pow, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multivar::MultiSparsePoly;
use crate::poly::{Exponent, SparsePoly};
use crate::ring::Ring;

/// Shape of a generated root `h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootShape {
    /// Number of terms of `h`.
    pub terms: usize,
    /// Exact degree of `h`.
    #[serde(with = "crate::decimal")]
    pub degree: BigUint,
    /// Coefficients are drawn from `[-B, B] \ {0}`.
    #[serde(with = "crate::decimal")]
    pub coeff_bound: BigUint,
}

impl RootShape {
    pub fn new(terms: usize, degree: impl Into<BigUint>, coeff_bound: impl Into<BigUint>) -> Self {
        RootShape {
            terms,
            degree: degree.into(),
            coeff_bound: coeff_bound.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance<R: Ring> {
    pub root: SparsePoly<R>,
    pub power: SparsePoly<R>,
    pub r: u64,
}

/// A nonzero integer in `[-bound, bound]`, or in `[1, bound]` when `positive`.
pub fn random_coefficient<G: Rng + ?Sized>(bound: &BigUint, positive: bool, rng: &mut G) -> BigInt {
    assert!(!bound.is_zero(), "coefficient bound must be positive");
    let mag = rng.gen_biguint_range(&BigUint::one(), &(bound + 1u32));
    if positive || rng.gen_bool(0.5) {
        BigInt::from(mag)
    } else {
        -BigInt::from(mag)
    }
}

/// A random polynomial with exactly `shape.terms` terms (for `terms ≥ 2`,
/// always including `x^0` and `x^degree`) and positive leading coefficient
/// when read as an integer.
pub fn random_sparse<R: Ring, G: Rng + ?Sized>(
    ring: &R,
    shape: &RootShape,
    rng: &mut G,
) -> Result<SparsePoly<R>> {
    if shape.terms == 0 {
        return Ok(SparsePoly::zero(ring.clone()));
    }
    let mut exps: BTreeSet<Exponent> = BTreeSet::new();
    exps.insert(shape.degree.clone());
    if shape.terms >= 2 {
        exps.insert(Exponent::zero());
        let interior = shape.degree.clone().max(BigUint::one()) - 1u32;
        if interior < BigUint::from(shape.terms - 2) || (shape.terms > 1 && shape.degree.is_zero())
        {
            return Err(Error::InvalidArgument(format!(
                "cannot place {} terms below degree {}",
                shape.terms, shape.degree
            )));
        }
        while exps.len() < shape.terms {
            exps.insert(rng.gen_biguint_range(&BigUint::one(), &shape.degree));
        }
    }
    let last = exps.len() - 1;
    let mut terms = Vec::with_capacity(exps.len());
    for (i, e) in exps.into_iter().enumerate() {
        let c = loop {
            let c = ring.from_bigint(&random_coefficient(&shape.coeff_bound, i == last, rng));
            if !ring.is_zero(&c) {
                break c;
            }
        };
        terms.push((c, e));
    }
    Ok(SparsePoly::normalize(ring.clone(), terms))
}

/// A random polynomial in `vars` variables with exactly `terms` terms, each
/// partial degree at most `max_partial_degree`, a constant term when
/// `terms ≥ 2`, and positive lex-leading coefficient.
pub fn random_multi_sparse<R: Ring, G: Rng + ?Sized>(
    ring: &R,
    vars: usize,
    terms: usize,
    max_partial_degree: u64,
    coeff_bound: &BigUint,
    rng: &mut G,
) -> Result<MultiSparsePoly<R>> {
    let room = BigUint::from(max_partial_degree + 1).pow(vars as u32);
    if vars == 0 || room < BigUint::from(terms) {
        return Err(Error::InvalidArgument(format!(
            "cannot place {terms} terms in {vars} variables of partial degree {max_partial_degree}"
        )));
    }
    let mut exps: BTreeSet<Vec<Exponent>> = BTreeSet::new();
    if terms >= 2 {
        exps.insert(vec![Exponent::zero(); vars]);
    }
    while exps.len() < terms {
        exps.insert(
            (0..vars)
                .map(|_| Exponent::from(rng.gen_range(0..=max_partial_degree)))
                .collect(),
        );
    }
    let last = exps.len().saturating_sub(1);
    let mut raw = Vec::with_capacity(exps.len());
    for (i, e) in exps.into_iter().enumerate() {
        let c = loop {
            let c = ring.from_bigint(&random_coefficient(coeff_bound, i == last, rng));
            if !ring.is_zero(&c) {
                break c;
            }
        };
        raw.push((c, e));
    }
    Ok(MultiSparsePoly::normalize(ring.clone(), vars, raw))
}

/// A random `h` of the given shape together with `f = h^r`.
pub fn generate<R: Ring, G: Rng + ?Sized>(
    ring: &R,
    shape: &RootShape,
    r: u64,
    rng: &mut G,
) -> Result<Instance<R>> {
    let root = random_sparse(ring, shape, rng)?;
    let power = root.pow(r);
    Ok(Instance { root, power, r })
}

/// Adds a nonzero integer to one randomly chosen coefficient of `f`.
///
/// The result may still happen to be a perfect power; callers that need a
/// non-power must check.
pub fn perturb<R: Ring, G: Rng + ?Sized>(f: &SparsePoly<R>, rng: &mut G) -> SparsePoly<R> {
    let ring = f.ring();
    loop {
        let idx = rng.gen_range(0..f.sparsity().max(1));
        let delta = ring.from_bigint(&random_coefficient(&BigUint::from(3u32), false, rng));
        let mut terms: Vec<_> = f
            .terms()
            .iter()
            .map(|t| (t.coeff.clone(), t.exp.clone()))
            .collect();
        if terms.is_empty() {
            return SparsePoly::constant(ring.clone(), delta);
        }
        terms[idx].0 = ring.add(&terms[idx].0, &delta);
        let g = SparsePoly::normalize(ring.clone(), terms);
        if g.degree() == f.degree()
            && g.trailing_term().map(|t| &t.exp) == f.trailing_term().map(|t| &t.exp)
        {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::ring::Integers;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = generate(&Integers, &RootShape::new(1, 7u32, 5u32), 3, &mut rng).unwrap();
        assert!(inst.root.is_monomial() && inst.power.is_monomial());
        assert_eq!(inst.power.degree(), BigUint::from(21u32));

        let inst = generate(&Integers, &RootShape::new(2, 1u64 << 40, 1u32), 2, &mut rng).unwrap();
        assert_eq!(
            inst.root,
            SparsePoly::from_i64_pairs(&[(1, 0), (1, 1 << 40)])
        );
        assert_eq!(inst.power.sparsity(), 3);

        let h = random_sparse(
            &Integers,
            &RootShape::new(30, 1u64 << 40, 1u64 << 32),
            &mut rng,
        )
        .unwrap();
        assert_eq!(h.sparsity(), 30);
        assert_eq!(h.degree(), BigUint::from(1u64 << 40));
        assert!(h.coeff(&BigUint::zero()).is_some());
        assert!(crate::poly::leading_sign(&h) > 0);

        assert!(random_sparse(&Integers, &RootShape::new(5, 3u32, 2u32), &mut rng).is_err());
    }

    #[test]
    fn seeds_reproduce() {
        let gf = PrimeField::new(BigUint::from(1_000_003u32)).unwrap();
        let shape = RootShape::new(6, 1000u32, 100u32);
        let a = generate(&gf, &shape, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = generate(&gf, &shape, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.root.sparsity(), 6);
    }

    #[test]
    fn multivariate_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_multi_sparse(&Integers, 3, 7, 4, &BigUint::from(9u32), &mut rng).unwrap();
        assert_eq!(h.sparsity(), 7);
        assert!(h.terms()[0].exps.iter().all(|e| e.is_zero()));
        assert!(h.leading_term().unwrap().coeff > BigInt::zero());
        assert!((0..3).all(|v| h.partial_degree(v) <= BigUint::from(4u32)));
        assert!(random_multi_sparse(&Integers, 2, 10, 1, &BigUint::one(), &mut rng).is_err());
    }

    #[test]
    fn perturbation_keeps_support_ends() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = SparsePoly::from_i64_pairs(&[(1, 0), (2, 5), (1, 10)]);
        for _ in 0..20 {
            let g = perturb(&f, &mut rng);
            assert_ne!(g, f);
            assert_eq!(g.degree(), f.degree());
        }
    }
}
