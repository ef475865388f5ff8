use rand::Rng;

use super::{dense, FiniteField};

/// Ben-Or's test: a monic `m` of degree `d` is irreducible iff
/// `gcd(x^{q^i} - x, m) = 1` for every `i <= d/2`.
pub fn is_irreducible<F: FiniteField>(field: &F, m: &[F::Elem]) -> bool {
    let d = match dense::degree::<F>(m) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    if d == 1 {
        return true;
    }
    let q = field.order();
    let x = dense::x(field);
    let mut power = dense::rem(field, &x, m);
    for _ in 0..d / 2 {
        power = dense::pow_mod(field, &power, &q, m);
        let diff = dense::sub(field, &power, &x);
        if dense::gcd(field, &diff, m).len() != 1 {
            return false;
        }
    }
    true
}

/// Number of random candidates drawn before giving up: `⌈d·(1 + k)⌉` where
/// `k = ⌈log₂(1/ε)⌉` for the caller's failure budget `ε`.
pub fn irreducible_attempt_cap(d: usize, log2_inv_eps: u64) -> usize {
    d.saturating_mul(1 + log2_inv_eps as usize)
}

/// A random monic irreducible polynomial of degree `d`, or `None` once
/// [`irreducible_attempt_cap`] candidates have failed.
///
/// Roughly one monic polynomial in `d` is irreducible, so the cap makes
/// the probability of `None` at most about `ε`.
pub fn find_irreducible<F: FiniteField, G: Rng + ?Sized>(
    field: &F,
    d: usize,
    log2_inv_eps: u64,
    rng: &mut G,
) -> Option<Vec<F::Elem>> {
    assert!(d >= 1, "irreducible polynomials have degree at least 1");
    if d == 1 {
        return Some(dense::x(field));
    }
    for _ in 0..irreducible_attempt_cap(d, log2_inv_eps) {
        let mut candidate: Vec<F::Elem> = (0..d).map(|_| field.random(rng)).collect();
        candidate.push(field.one());
        if is_irreducible(field, &candidate) {
            return Some(candidate);
        }
    }
    None
}

/// Number of monic irreducibles of degree `d` over `F_q`, by Gauss's
/// formula; used to size expectations in tests.
#[cfg(test)]
fn count_irreducible(q: u64, d: u32) -> u64 {
    let mut total: i64 = 0;
    for k in 1..=d {
        if d.is_multiple_of(k) {
            total += mobius(d / k) * (q as i64).pow(k);
        }
    }
    (total / d as i64) as u64
}

#[cfg(test)]
fn mobius(mut n: u32) -> i64 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}
