//! Primality testing and random prime sampling.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Rounds of Miller–Rabin after which a number is treated as prime.
pub const MILLER_RABIN_ROUNDS: usize = 64;

/// Intervals at most this wide are enumerated instead of sampled.
const ENUMERATION_WIDTH: u64 = 1 << 16;

/// All primes `<= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn small_primes() -> &'static [u64] {
    static PRIMES: std::sync::OnceLock<Vec<u64>> = std::sync::OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(1000))
}

/// Miller–Rabin with `rounds` random bases, after trial division by the
/// primes below 1000.
pub fn is_probable_prime<G: Rng + ?Sized>(n: &BigUint, rounds: usize, rng: &mut G) -> bool {
    if let Some(v) = n.to_u64() {
        if v < 2 {
            return false;
        }
    }
    for &sp in small_primes() {
        let sp_big = BigUint::from(sp);
        if n == &sp_big {
            return true;
        }
        if (n % sp).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let two = BigUint::from(2u32);
    'witness: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A uniformly random (probable) prime in `[lo, hi]` outside `exclude`.
///
/// Narrow intervals are enumerated exactly; wide ones use rejection
/// sampling over odd candidates with a budget proportional to the bit
/// length, failing explicitly if it runs out.
pub fn random_prime<G: Rng + ?Sized>(
    lo: &BigUint,
    hi: &BigUint,
    exclude: &[BigUint],
    rng: &mut G,
) -> Result<BigUint> {
    let exhausted = || Error::PrimeSearchExhausted {
        lo: lo.clone(),
        hi: hi.clone(),
    };
    if lo > hi {
        return Err(exhausted());
    }
    let width = hi - lo;
    if width <= BigUint::from(ENUMERATION_WIDTH) {
        let width = width.to_u64().unwrap();
        let candidates: Vec<BigUint> = (0..=width)
            .map(|i| lo + i)
            .filter(|c| !exclude.contains(c) && is_probable_prime(c, MILLER_RABIN_ROUNDS, rng))
            .collect();
        if candidates.is_empty() {
            return Err(exhausted());
        }
        let pick = rng.gen_range(0..candidates.len());
        return Ok(candidates[pick].clone());
    }
    // about ln(hi) draws per prime are expected
    let budget = 128 * (hi.bits() as usize + 16);
    for _ in 0..budget {
        let c = rng.gen_biguint_range(lo, &(hi + 1u32));
        if c.is_even() && c != BigUint::from(2u32) {
            continue;
        }
        if exclude.contains(&c) {
            continue;
        }
        if is_probable_prime(&c, MILLER_RABIN_ROUNDS, rng) {
            return Ok(c);
        }
    }
    Err(exhausted())
}

/// Smallest prime `>= n`.
pub fn next_prime<G: Rng + ?Sized>(n: &BigUint, rng: &mut G) -> BigUint {
    let mut c = n.clone().max(BigUint::from(2u32));
    while !is_probable_prime(&c, MILLER_RABIN_ROUNDS, rng) {
        c += 1u32;
    }
    c
}

pub fn is_small_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn trial_division(n: u64) -> bool {
        n >= 2
            && (2..n)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn agrees_with_trial_division() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 0..5000u64 {
            assert_eq!(
                is_probable_prime(&BigUint::from(n), 8, &mut rng),
                trial_division(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn random_prime_in_small_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = random_prime(&226u32.into(), &452u32.into(), &[], &mut rng).unwrap();
            let v = p.to_u64().unwrap();
            assert!((226..=452).contains(&v) && trial_division(v));
        }
        assert_eq!(
            random_prime(&7u32.into(), &7u32.into(), &[], &mut rng).unwrap(),
            BigUint::from(7u32)
        );
    }

    #[test]
    fn excluded_interval_fails() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let all: Vec<BigUint> = [11u32, 13].iter().map(|&v| v.into()).collect();
        assert!(matches!(
            random_prime(&11u32.into(), &13u32.into(), &all, &mut rng),
            Err(Error::PrimeSearchExhausted { .. })
        ));
        assert!(random_prime(&24u32.into(), &28u32.into(), &[], &mut rng).is_err());
    }

    #[test]
    fn random_prime_in_wide_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let lo = BigUint::one() << 90u32;
        let hi = &lo * 2u32;
        let p = random_prime(&lo, &hi, &[], &mut rng).unwrap();
        assert!(p >= lo && p <= hi);
        assert!(is_probable_prime(&p, 64, &mut rng));
    }

    #[test]
    fn sieve() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(primes_up_to(1).is_empty());
    }
}
