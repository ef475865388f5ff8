//! Coefficient rings.
//!
//! Polynomials are generic over a [`Ring`] value that carries whatever
//! context its elements need (a modulus, an extension polynomial). The
//! integers and rationals are zero-sized; finite fields live in
//! [`crate::field`].

use std::fmt::{self, Debug, Display};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[allow(clippy::wrong_self_convention)]
pub trait Ring: Clone + Debug + Display + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Image of an integer under the canonical map `Z -> R`.
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    /// Zero for characteristic-zero rings.
    fn characteristic(&self) -> BigUint;

    /// The exact quotient `a / b`, if one exists in the ring.
    fn divide(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    fn from_biguint(&self, n: &BigUint) -> Self::Elem {
        self.from_bigint(&BigInt::from(n.clone()))
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    /// `a^e` by binary exponentiation; `0^0 = 1`.
    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}

/// The ring of integers `Z`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Integers;

impl Display for Integers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Z")
    }
}

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn characteristic(&self) -> BigUint {
        BigUint::zero()
    }
    fn divide(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        if b.is_zero() {
            return None;
        }
        let (q, r) = a.div_rem(b);
        r.is_zero().then_some(q)
    }
    fn add_assign(&self, a: &mut BigInt, b: &BigInt) {
        *a += b;
    }
    fn pow(&self, a: &BigInt, e: &BigUint) -> BigInt {
        if a.is_zero() || a.abs().is_one() {
            // exponent may be astronomically large here
            return if e.is_zero() {
                BigInt::one()
            } else if a.is_negative() && e.is_odd() {
                -BigInt::one()
            } else if a.is_zero() {
                BigInt::zero()
            } else {
                BigInt::one()
            };
        }
        let e = u32::try_from(e).expect("integer power exponent exceeds u32");
        num_traits::Pow::pow(a, e)
    }
}

/// The field of rationals `Q`; used internally where Newton iteration
/// over `Z` needs exact division.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Display for Rationals {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Q")
    }
}

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn characteristic(&self) -> BigUint {
        BigUint::zero()
    }
    fn divide(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        (!b.is_zero()).then(|| a / b)
    }
    fn add_assign(&self, a: &mut BigRational, b: &BigRational) {
        *a += b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_division_is_exact_only() {
        let z = Integers;
        assert_eq!(
            z.divide(&BigInt::from(12), &BigInt::from(4)),
            Some(BigInt::from(3))
        );
        assert_eq!(z.divide(&BigInt::from(12), &BigInt::from(5)), None);
        assert_eq!(z.divide(&BigInt::from(1), &BigInt::zero()), None);
    }

    #[test]
    fn integer_pow_handles_units_with_huge_exponent() {
        let z = Integers;
        let e = BigUint::from(10u32).pow(30);
        assert_eq!(z.pow(&BigInt::from(-1), &e), BigInt::one());
        assert_eq!(z.pow(&BigInt::from(-1), &(e + 1u32)), -BigInt::one());
        assert_eq!(
            z.pow(&BigInt::from(3), &BigUint::from(4u32)),
            BigInt::from(81)
        );
    }
}
