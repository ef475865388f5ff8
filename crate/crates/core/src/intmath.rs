//! Exact integer helpers: logarithm bounds without floating point and
//! integer r-th roots.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Fraction bits of the fixed-point bounds below.
pub const FRAC_BITS: u32 = 64;

/// Working precision of the squaring loop in [`log2_upper`].
const WORK_BITS: u32 = 96;

/// `2^64 · ln 2`, rounded up.
const LN2_UPPER: u64 = 12_786_308_645_202_655_660;

/// `⌈log₂ x⌉` for `x ≥ 1`.
pub fn log2_ceil(x: &BigUint) -> u64 {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    if x.trailing_zeros() == Some(bits - 1) {
        bits - 1
    } else {
        bits
    }
}

/// `⌊log₂ x⌋` for `x ≥ 1`.
pub fn log2_floor(x: &BigUint) -> u64 {
    assert!(!x.is_zero(), "log of zero");
    x.bits() - 1
}

/// An upper bound on `log₂ x` in fixed point with [`FRAC_BITS`] fraction
/// bits, within `2^-63` of the true value.
///
/// Digits of the fractional part come from repeated squaring of the
/// mantissa, rounding up at every step so the result never undershoots.
pub fn log2_upper(x: &BigUint) -> BigUint {
    assert!(!x.is_zero(), "log of zero");
    let k = x.bits() - 1;
    let scale = BigUint::one() << WORK_BITS;
    let two = &scale << 1u32;
    // mantissa x / 2^k in [1, 2), scaled by 2^WORK_BITS and rounded up
    let mut z = ceil_shift(&(x << WORK_BITS), k);
    let mut digits = BigUint::zero();
    for _ in 0..FRAC_BITS {
        z = ceil_shift(&(&z * &z), WORK_BITS as u64);
        digits <<= 1u32;
        if z >= two {
            digits += 1u32;
            z = ceil_shift(&z, 1);
        }
    }
    (BigUint::from(k) << FRAC_BITS) + digits + 1u32
}

/// An upper bound on `ln x` in fixed point with `2·FRAC_BITS` fraction
/// bits; exactly zero for `x = 1`.
pub fn ln_upper(x: &BigUint) -> BigUint {
    if x.is_one() {
        return BigUint::zero();
    }
    log2_upper(x) * LN2_UPPER
}

/// `⌈a / 2^s⌉`.
pub fn ceil_shift(a: &BigUint, s: u64) -> BigUint {
    let q = a >> s;
    if (&q << s) == *a {
        q
    } else {
        q + 1u32
    }
}

/// `⌈a / b⌉` for `b > 0`.
pub fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    let q = a / b;
    if &q * b == *a {
        q
    } else {
        q + 1u32
    }
}

/// The integer `b` with `b^r = a`, if there is one.
///
/// Negative `a` has a root only for odd `r`; asking for an even root of a
/// negative number is an error rather than `None`.
pub fn integer_rth_root(a: &BigInt, r: u64) -> Result<Option<BigInt>> {
    if r == 0 {
        return Err(Error::InvalidArgument("zeroth root".into()));
    }
    if a.sign() == Sign::Minus && r.is_multiple_of(2) {
        return Err(Error::EvenRootOfNegative);
    }
    let mag = a.magnitude();
    if mag.is_zero() || mag.is_one() || r == 1 {
        return Ok(Some(a.clone()));
    }
    // 1 < |a| < 2^r leaves no room for a root
    if r >= mag.bits() {
        return Ok(None);
    }
    let r32 = u32::try_from(r).expect("r < bits(a)");
    let b = mag.nth_root(r32);
    if num_traits::Pow::pow(&b, r32) == *mag {
        Ok(Some(BigInt::from_biguint(a.sign(), b)))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn as_f64(fixed: &BigUint, frac: u32) -> f64 {
        let s = fixed.to_string().parse::<f64>().unwrap();
        s / 2f64.powi(frac as i32)
    }

    #[test]
    fn exact_logs() {
        assert_eq!(log2_ceil(&big(1)), 0);
        assert_eq!(log2_ceil(&big(8)), 3);
        assert_eq!(log2_ceil(&big(9)), 4);
        assert_eq!(log2_floor(&big(324)), 8);
        let bound = log2_upper(&big(8));
        assert!(bound > big(3) << FRAC_BITS);
        assert!(bound <= (big(3) << FRAC_BITS) + 1u32);
    }

    #[test]
    fn ln_of_34() {
        let v = as_f64(&ln_upper(&big(34)), 2 * FRAC_BITS);
        assert!((v - 34f64.ln()).abs() < 1e-12 && v >= 34f64.ln() - 1e-15);
        assert!(ln_upper(&big(1)).is_zero());
    }

    #[test]
    fn roots() {
        assert_eq!(
            integer_rth_root(&BigInt::from(8), 3).unwrap(),
            Some(BigInt::from(2))
        );
        assert_eq!(
            integer_rth_root(&BigInt::from(-8), 3).unwrap(),
            Some(BigInt::from(-2))
        );
        let p = BigInt::one() << 120u32;
        assert_eq!(
            integer_rth_root(&p, 2).unwrap(),
            Some(BigInt::one() << 60u32)
        );
        assert_eq!(integer_rth_root(&BigInt::from(10), 2).unwrap(), None);
        assert_eq!(
            integer_rth_root(&BigInt::from(-4), 2),
            Err(Error::EvenRootOfNegative)
        );
        assert_eq!(integer_rth_root(&BigInt::from(5), 70).unwrap(), None);
    }

    proptest! {
        #[test]
        fn log2_upper_brackets_true_value(x in 1u64..u64::MAX) {
            let b = log2_upper(&big(x));
            let exact = (x as f64).log2();
            prop_assert!(as_f64(&b, FRAC_BITS) >= exact - 1e-12);
            prop_assert!(as_f64(&b, FRAC_BITS) <= exact + 1e-9);
            prop_assert!(b >> FRAC_BITS <= big(log2_ceil(&big(x))));
        }

        #[test]
        fn upper_bound_is_never_below_exact_power(k in 1u32..200, extra in 0u64..1000) {
            let x = (BigUint::one() << k) + extra;
            let b = log2_upper(&x);
            prop_assert!(b > BigUint::from(k) << FRAC_BITS);
        }

        #[test]
        fn rth_root_of_power(b in -10_000i64..10_000, r in 1u64..9) {
            let a = num_traits::Pow::pow(&BigInt::from(b), r as u32);
            let root = integer_rth_root(&a, r).unwrap().unwrap();
            if r % 2 == 0 {
                prop_assert_eq!(root, BigInt::from(b.abs()));
            } else {
                prop_assert_eq!(root, BigInt::from(b));
            }
        }
    }
}
