use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::primes::{is_probable_prime, MILLER_RABIN_ROUNDS};
use super::FiniteField;
use crate::error::{Error, Result};
use crate::ring::Ring;

fn check_prime(p: &BigUint) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    if is_probable_prime(p, MILLER_RABIN_ROUNDS, &mut rng) {
        Ok(())
    } else {
        Err(Error::NotPrime(p.clone()))
    }
}

fn reduce_bigint(n: &BigInt, p: &BigUint) -> BigUint {
    let r = n.magnitude() % p;
    if n.sign() == Sign::Minus && !r.is_zero() {
        p - r
    } else {
        r
    }
}

/// `F_p` for any prime `p`, elements stored as reduced `BigUint`s.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: BigUint,
}

impl std::fmt::Display for PrimeField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF {}", self.modulus())
    }
}

impl PrimeField {
    /// Checks `p` with Miller–Rabin.
    pub fn new(p: BigUint) -> Result<Self> {
        check_prime(&p)?;
        Ok(PrimeField { p })
    }

    /// For moduli already known to be prime.
    pub fn new_unchecked(p: BigUint) -> Self {
        PrimeField { p }
    }

    pub fn modulus(&self) -> &BigUint {
        &self.p
    }
}

impl Ring for PrimeField {
    type Elem = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one() % &self.p
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.p {
            s - &self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.p - b + a
        }
    }
    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.p - a
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.p
    }
    fn from_bigint(&self, n: &BigInt) -> BigUint {
        reduce_bigint(n, &self.p)
    }
    fn from_biguint(&self, n: &BigUint) -> BigUint {
        n % &self.p
    }
    fn characteristic(&self) -> BigUint {
        self.p.clone()
    }
    fn divide(&self, a: &BigUint, b: &BigUint) -> Option<BigUint> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
    fn pow(&self, a: &BigUint, e: &BigUint) -> BigUint {
        a.modpow(e, &self.p)
    }
}

impl FiniteField for PrimeField {
    fn order(&self) -> BigUint {
        self.p.clone()
    }
    fn degree(&self) -> usize {
        1
    }
    fn inv(&self, a: &BigUint) -> Option<BigUint> {
        (!a.is_zero()).then(|| a.modpow(&(&self.p - 2u32), &self.p))
    }
    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> BigUint {
        rng.gen_biguint_below(&self.p)
    }
    fn to_prime_coords(&self, a: &BigUint) -> Vec<BigUint> {
        vec![a.clone()]
    }
    fn from_prime_coords(&self, coords: &[BigUint]) -> BigUint {
        coords.first().map(|c| c % &self.p).unwrap_or_default()
    }
}

const LOW: u128 = u64::MAX as u128;

/// Full 256-bit product as `(hi, lo)`.
#[inline]
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a1, a0) = (a >> 64, a & LOW);
    let (b1, b0) = (b >> 64, b & LOW);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & LOW) + (p10 & LOW);
    let lo = (p00 & LOW) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

/// `F_p` for odd primes `p < 2^127`, elements kept in Montgomery form
/// with `R = 2^128`. Same semantics as [`PrimeField`], roughly an order of
/// magnitude faster for the word-sized primes the detectors draw.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmallPrimeField {
    p: u128,
    p_neg_inv: u128,
    r2: u128,
    one: u128,
}

impl std::fmt::Display for SmallPrimeField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF {}", self.modulus())
    }
}

impl SmallPrimeField {
    pub const MAX_BITS: u64 = 127;

    pub fn new(p: &BigUint) -> Result<Self> {
        check_prime(p)?;
        Self::new_unchecked(p)
    }

    /// Requires an odd prime below `2^127`; primality is not re-checked.
    pub fn new_unchecked(p: &BigUint) -> Result<Self> {
        if p.bits() > Self::MAX_BITS || !p.bit(0) {
            return Err(Error::InvalidModulus(format!(
                "{p} is not an odd modulus below 2^127"
            )));
        }
        let pv = p.to_u128().expect("fits by bit length");
        let mut inv: u128 = pv;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(pv.wrapping_mul(inv)));
        }
        debug_assert_eq!(pv.wrapping_mul(inv), 1);
        let r = BigUint::one() << 128u32;
        let one = (&r % p).to_u128().unwrap();
        let r2 = ((&r * &r) % p).to_u128().unwrap();
        Ok(SmallPrimeField {
            p: pv,
            p_neg_inv: inv.wrapping_neg(),
            r2,
            one,
        })
    }

    pub fn modulus(&self) -> u128 {
        self.p
    }

    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.p_neg_inv);
        let (mh, ml) = mul_wide(m, self.p);
        let (_, carry) = lo.overflowing_add(ml);
        let t = hi + mh + carry as u128;
        if t >= self.p {
            t - self.p
        } else {
            t
        }
    }

    #[inline]
    fn mont_mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    fn to_mont(&self, a: u128) -> u128 {
        self.mont_mul(a % self.p, self.r2)
    }

    /// Canonical residue of a field element.
    pub fn residue(&self, a: u128) -> u128 {
        self.redc(0, a)
    }

    pub fn from_residue(&self, a: u128) -> u128 {
        self.to_mont(a)
    }
}

impl Ring for SmallPrimeField {
    type Elem = u128;

    fn zero(&self) -> u128 {
        0
    }
    fn one(&self) -> u128 {
        self.one
    }
    fn is_zero(&self, a: &u128) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u128, b: &u128) -> u128 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u128, b: &u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }
    fn neg(&self, a: &u128) -> u128 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u128, b: &u128) -> u128 {
        self.mont_mul(*a, *b)
    }
    fn from_bigint(&self, n: &BigInt) -> u128 {
        let r = reduce_bigint(n, &BigUint::from(self.p));
        self.to_mont(r.to_u128().unwrap())
    }
    fn from_biguint(&self, n: &BigUint) -> u128 {
        let r = n % BigUint::from(self.p);
        self.to_mont(r.to_u128().unwrap())
    }
    fn from_i64(&self, n: i64) -> u128 {
        let m = (n.unsigned_abs() as u128) % self.p;
        let v = self.to_mont(m);
        if n < 0 {
            self.neg(&v)
        } else {
            v
        }
    }
    fn characteristic(&self) -> BigUint {
        BigUint::from(self.p)
    }
    fn divide(&self, a: &u128, b: &u128) -> Option<u128> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

impl FiniteField for SmallPrimeField {
    fn order(&self) -> BigUint {
        BigUint::from(self.p)
    }
    fn degree(&self) -> usize {
        1
    }
    fn inv(&self, a: &u128) -> Option<u128> {
        (*a != 0).then(|| self.pow(a, &BigUint::from(self.p - 2)))
    }
    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> u128 {
        // uniform residue, then into Montgomery form (a bijection)
        let bits = 128 - self.p.leading_zeros();
        let mask = if bits == 128 {
            u128::MAX
        } else {
            (1u128 << bits) - 1
        };
        loop {
            let v = rng.gen::<u128>() & mask;
            if v < self.p {
                return self.to_mont(v);
            }
        }
    }
    fn to_prime_coords(&self, a: &u128) -> Vec<BigUint> {
        vec![BigUint::from(self.residue(*a))]
    }
    fn from_prime_coords(&self, coords: &[BigUint]) -> u128 {
        coords.first().map(|c| self.from_biguint(c)).unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_composite_moduli() {
        assert!(matches!(
            PrimeField::new(BigUint::from(91u32)),
            Err(Error::NotPrime(_))
        ));
        assert!(SmallPrimeField::new(&BigUint::from(2u32)).is_err());
        assert!(PrimeField::new(BigUint::from(2u32)).is_ok());
    }

    #[test]
    fn pow_example() {
        let f = PrimeField::new(7u32.into()).unwrap();
        assert_eq!(f.pow(&3u32.into(), &6u32.into()), BigUint::one());
        assert_eq!(f.pow(&0u32.into(), &0u32.into()), BigUint::one());
        let s = SmallPrimeField::new(&7u32.into()).unwrap();
        assert_eq!(s.pow(&s.from_i64(3), &6u32.into()), s.one());
        assert_eq!(s.pow(&s.from_i64(5), &0u32.into()), s.one());
    }

    fn big_prime() -> BigUint {
        // 2^127 - 1
        (BigUint::one() << 127u32) - 1u32
    }

    proptest! {
        #[test]
        fn montgomery_matches_reference(a in any::<u128>(), b in any::<u128>(), neg in any::<bool>()) {
            for p in [BigUint::from(1_000_000_007u64), BigUint::from(18446744073709551557u64), big_prime()] {
                let big = PrimeField::new_unchecked(p.clone());
                let small = SmallPrimeField::new_unchecked(&p).unwrap();
                let (x, y) = (BigUint::from(a), BigUint::from(b));
                let xs = small.from_biguint(&x);
                let ys = small.from_biguint(&y);
                let xb = big.from_biguint(&x);
                let yb = big.from_biguint(&y);
                prop_assert_eq!(small.to_prime_coords(&small.mul(&xs, &ys))[0].clone(), big.mul(&xb, &yb));
                prop_assert_eq!(small.to_prime_coords(&small.add(&xs, &ys))[0].clone(), big.add(&xb, &yb));
                prop_assert_eq!(small.to_prime_coords(&small.sub(&xs, &ys))[0].clone(), big.sub(&xb, &yb));
                let n = if neg { -BigInt::from(a) } else { BigInt::from(a) };
                prop_assert_eq!(small.to_prime_coords(&small.from_bigint(&n))[0].clone(), big.from_bigint(&n));
                if !xb.is_zero() {
                    let inv = small.inv(&xs).unwrap();
                    prop_assert_eq!(small.mul(&inv, &xs), small.one());
                }
            }
        }
    }
}
