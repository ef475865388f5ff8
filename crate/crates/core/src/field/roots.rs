use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use super::{dense, FiniteField};
use crate::error::{Error, Result};

/// Splitting attempts before [`rth_root_in_field`] gives up. Each attempt
/// succeeds with probability about 1/2, so this is never reached in practice.
const SPLIT_ATTEMPTS: usize = 256;

/// Whether a nonzero `a` is an `r`-th power in `F_ϱ`, via `a^{(ϱ-1)/r} = 1`.
pub fn rth_power_residue<F: FiniteField>(field: &F, a: &F::Elem, r: u64) -> Result<bool> {
    if field.is_zero(a) {
        return Err(Error::InvalidArgument("residue test of zero".into()));
    }
    let group = field.order() - 1u32;
    let (cofactor, rem) = group.div_rem(&BigUint::from(r));
    if r == 0 || !rem.is_zero() {
        return Err(Error::ResidueOrder { r });
    }
    Ok(field.is_one(&field.pow(a, &cofactor)))
}

/// Some `b` with `b^r = a`, or `None` if `a` is not an `r`-th power.
///
/// When `gcd(r, ϱ-1) = 1` the `r`-th power map is a bijection and `b` is a
/// single exponentiation. Otherwise the roots of `y^r - a` are isolated by
/// `gcd(y^ϱ - y, y^r - a)` and split by random equal-degree factorisation.
/// Every returned root is checked.
pub fn rth_root_in_field<F: FiniteField, G: Rng + ?Sized>(
    field: &F,
    a: &F::Elem,
    r: u64,
    rng: &mut G,
) -> Result<Option<F::Elem>> {
    if r == 0 {
        return Err(Error::InvalidArgument("zeroth root".into()));
    }
    if field.is_zero(a) {
        return Ok(Some(field.zero()));
    }
    let order = field.order();
    let group = &order - 1u32;
    let rb = BigUint::from(r);
    let root = if rb.gcd(&group).is_one() {
        let inv = mod_inverse(&rb, &group).expect("coprime");
        Some(field.pow(a, &inv))
    } else {
        find_root(field, a, r, &order, rng)?
    };
    if let Some(b) = &root {
        assert!(field.pow(b, &rb) == *a, "extracted root fails verification");
    }
    Ok(root)
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    use num_bigint::BigInt;
    let e = BigInt::from(a.clone()).extended_gcd(&BigInt::from(m.clone()));
    if !e.gcd.is_one() {
        return None;
    }
    let m = BigInt::from(m.clone());
    Some(e.x.mod_floor(&m).to_biguint().expect("non-negative"))
}

fn find_root<F: FiniteField, G: Rng + ?Sized>(
    field: &F,
    a: &F::Elem,
    r: u64,
    order: &BigUint,
    rng: &mut G,
) -> Result<Option<F::Elem>> {
    let r =
        usize::try_from(r).map_err(|_| Error::InvalidArgument("root index too large".into()))?;
    let mut target = vec![field.zero(); r + 1];
    target[0] = field.neg(a);
    target[r] = field.one();
    let y = dense::x(field);
    let frob = dense::pow_mod(field, &y, order, &target);
    let mut split = dense::gcd(field, &dense::sub(field, &frob, &y), &target);
    if split.len() < 2 {
        return Ok(None);
    }
    let odd = order.is_odd();
    let half = (order - 1u32) >> 1u32;
    let char_two_degree = field.degree();
    let mut attempts = 0;
    // `split` is a product of distinct linear factors; halve it until one remains.
    while split.len() > 2 {
        if attempts == SPLIT_ATTEMPTS {
            return Err(Error::RootFindingExhausted(SPLIT_ATTEMPTS));
        }
        attempts += 1;
        let mapped = if odd {
            let probe = vec![field.random(rng), field.one()];
            let p = dense::pow_mod(field, &probe, &half, &split);
            dense::sub(field, &p, &[field.one()])
        } else {
            // an additive shift cancels in differences of traces; scale instead
            let probe = vec![field.zero(), field.random_nonzero(rng)];
            trace_map(field, &probe, char_two_degree, &split)
        };
        let factor = dense::gcd(field, &mapped, &split);
        if factor.len() > 1 && factor.len() < split.len() {
            let other = dense::div_rem(field, &split, &factor).0;
            split = if factor.len() <= other.len() {
                factor
            } else {
                dense::monic(field, &other)
            };
        }
    }
    Ok(Some(field.neg(&split[0])))
}

/// `u + u^2 + u^4 + ... + u^{2^{k-1}} mod m` in characteristic two.
fn trace_map<F: FiniteField>(field: &F, u: &[F::Elem], k: usize, m: &[F::Elem]) -> Vec<F::Elem> {
    let mut term = dense::rem(field, u, m);
    let mut acc = term.clone();
    for _ in 1..k {
        term = dense::mul_mod(field, &term, &term, m);
        acc = dense::add(field, &acc, &term);
    }
    acc
}
