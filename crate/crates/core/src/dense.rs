//! Dense reference algorithms, linear or worse in the degree.
//!
//! [`dense_perfect_power`] decides perfect-power status exactly through a
//! squarefree decomposition over `Z`, and serves as a test oracle.
//! [`dense_newton_baseline`] is the classical Monte Carlo method: a power
//! series root modulo a random prime followed by random evaluations.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::detect::{exponent_candidates_z, Epsilon};
use crate::error::{Error, Result};
use crate::field::primes::is_small_prime;
use crate::field::{is_probable_prime, MILLER_RABIN_ROUNDS};
use crate::intmath::integer_rth_root;
use crate::poly::SparsePoly;
use crate::ring::Integers;

/// Dense integer polynomial, lowest degree first, no trailing zeros.
pub type DensePoly = Vec<BigInt>;

fn trim(mut a: DensePoly) -> DensePoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn degree(a: &[BigInt]) -> usize {
    a.len().saturating_sub(1)
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive part with positive leading coefficient.
fn primitive(a: &[BigInt]) -> DensePoly {
    let a = trim(a.to_vec());
    let Some(lc) = a.last() else { return a };
    let mut g = content(&a);
    if lc.is_negative() {
        g = -g;
    }
    a.into_iter().map(|c| c / &g).collect()
}

fn derivative(a: &[BigInt]) -> DensePoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect(),
    )
}

#[cfg(test)]
fn mul(a: &[BigInt], b: &[BigInt]) -> DensePoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

#[cfg(test)]
fn pow(a: &[BigInt], e: u64) -> DensePoly {
    let mut acc = vec![BigInt::from(1)];
    for _ in 0..e {
        acc = mul(&acc, a);
    }
    acc
}

fn inf_norm(a: &[BigInt]) -> BigInt {
    a.iter().map(|c| c.abs()).max().unwrap_or_default()
}

/// `a / b` when the quotient lies in `Z[x]`.
fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<DensePoly> {
    let lb = b.last().expect("nonzero divisor");
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return rem.iter().all(Zero::is_zero).then(Vec::new);
    }
    let mut q = vec![BigInt::zero(); rem.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let top = &rem[i + b.len() - 1];
        if top.is_zero() {
            continue;
        }
        let (c, r) = top.div_rem(lb);
        if !r.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    rem.iter().all(Zero::is_zero).then(|| trim(q))
}

fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> DensePoly {
    let lb = b.last().unwrap();
    let mut rem = a.to_vec();
    while rem.len() >= b.len() {
        let top = rem.pop().unwrap();
        let shift = rem.len() + 1 - b.len();
        for c in rem.iter_mut() {
            *c *= lb;
        }
        for (j, bj) in b[..b.len() - 1].iter().enumerate() {
            rem[shift + j] -= &top * bj;
        }
        rem = trim(rem);
    }
    rem
}

fn prs_gcd(a: &[BigInt], b: &[BigInt]) -> DensePoly {
    let (mut a, mut b) = (primitive(a), primitive(b));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = pseudo_rem(&a, &b);
        a = b;
        b = primitive(&r);
    }
    primitive(&a)
}

fn eval(a: &[BigInt], x: &BigInt) -> BigInt {
    a.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Balanced base-`ξ` digits of `v`.
fn interpolate(mut v: BigInt, xi: &BigInt) -> DensePoly {
    let half = xi >> 1u32;
    let mut out = Vec::new();
    while !v.is_zero() {
        let mut d = v.mod_floor(xi);
        if d > half {
            d -= xi;
        }
        v = (v - &d) / xi;
        out.push(d);
    }
    out
}

/// Heuristic gcd by evaluation at a large integer, retried with growing
/// points; `None` if every attempt fails.
fn heuristic_gcd(a: &[BigInt], b: &[BigInt]) -> Option<DensePoly> {
    let mut xi = inf_norm(a).min(inf_norm(b)) * 2u32 + 29u32;
    for _ in 0..6 {
        let g = primitive(&interpolate(eval(a, &xi).gcd(&eval(b, &xi)), &xi));
        if !g.is_empty() && exact_div(a, &g).is_some() && exact_div(b, &g).is_some() {
            return Some(g);
        }
        xi = xi * 73794u32 / 27011u32 + 1u32;
    }
    None
}

/// Primitive gcd with positive leading coefficient.
pub fn gcd(a: &[BigInt], b: &[BigInt]) -> DensePoly {
    let (a, b) = (primitive(a), primitive(b));
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    heuristic_gcd(&a, &b).unwrap_or_else(|| prs_gcd(&a, &b))
}

/// Primitive squarefree factors `(s_i, i)` with `pp(f) = Π s_i^i`, each of
/// positive degree.
pub fn squarefree_decomposition(f: &[BigInt]) -> Vec<(DensePoly, u64)> {
    let f = primitive(f);
    let mut c = gcd(&f, &derivative(&f));
    let mut w = exact_div(&f, &c).expect("gcd divides f");
    let mut out = Vec::new();
    let mut i = 1;
    while degree(&w) > 0 {
        let y = gcd(&w, &c);
        let z = exact_div(&w, &y).expect("gcd divides w");
        if degree(&z) > 0 {
            out.push((z, i));
        }
        c = exact_div(&c, &y).expect("gcd divides c");
        w = y;
        i += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensePowerVerdict {
    /// Every prime `r` with `f = h^r` for some `h ∈ Z[x]`.
    pub exponents: Vec<u64>,
    /// `(degree, multiplicity)` of each squarefree factor.
    pub multiplicities: Vec<(usize, u64)>,
}

impl DensePowerVerdict {
    pub fn is_power(&self) -> bool {
        !self.exponents.is_empty()
    }
}

/// Exact perfect-power status of `f ∈ Z[x]` with `1 ≤ deg f ≤ guard`.
pub fn dense_perfect_power(f: &SparsePoly<Integers>, guard: usize) -> Result<DensePowerVerdict> {
    let dense = f.dense_expand_with_guard(guard)?;
    if dense.len() < 2 {
        return Err(Error::DegreeTooSmall);
    }
    let factors = squarefree_decomposition(&dense);
    let multiplicities = factors.iter().map(|(z, i)| (degree(z), *i)).collect();
    let g = factors.iter().fold(0u64, |g, (_, i)| g.gcd(i));
    let lc = dense.last().unwrap();
    let unit = content(&dense) * if lc.is_negative() { -1 } else { 1 };
    let mut exponents = Vec::new();
    for r in (2..=g).filter(|&r| is_small_prime(r) && g % r == 0) {
        if let Ok(Some(_)) = integer_rth_root(&unit, r) {
            exponents.push(r);
        }
    }
    Ok(DensePowerVerdict {
        exponents,
        multiplicities,
    })
}

/// Arithmetic modulo a prime `p < 2^62` with `2^k | p - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NttPrime {
    p: u64,
    two_adicity: u32,
    /// An element of order exactly `2^two_adicity`.
    root: u64,
}

impl NttPrime {
    pub const TWO_ADICITY: u32 = 24;

    /// A random prime `c·2^24 + 1` with `c` in `[2^30, 2^37)`.
    pub fn random<G: Rng + ?Sized>(rng: &mut G) -> Self {
        loop {
            let c = rng.gen_range(1u64 << 30..1u64 << 37);
            let p = (c << Self::TWO_ADICITY) + 1;
            if !is_probable_prime(&BigUint::from(p), MILLER_RABIN_ROUNDS, rng) {
                continue;
            }
            let m = NttPrime {
                p,
                two_adicity: Self::TWO_ADICITY,
                root: 0,
            };
            loop {
                let a = rng.gen_range(2..p - 1);
                let w = m.pow(a, c);
                if m.pow(w, 1 << (Self::TWO_ADICITY - 1)) == p - 1 {
                    return NttPrime { root: w, ..m };
                }
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.p as u128) as u64
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    fn reduce(&self, c: &BigInt) -> u64 {
        c.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    fn ntt(&self, a: &mut [u64], invert: bool) {
        let n = a.len();
        let mut j = 0;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let mut w = self.pow(self.root, 1 << (self.two_adicity - len.trailing_zeros()));
            if invert {
                w = self.inv(w);
            }
            let half = len / 2;
            let mut twiddles = Vec::with_capacity(half);
            let mut t = 1;
            for _ in 0..half {
                twiddles.push(t);
                t = self.mul(t, w);
            }
            for chunk in a.chunks_mut(len) {
                let (lo, hi) = chunk.split_at_mut(half);
                for k in 0..half {
                    let u = lo[k];
                    let v = self.mul(hi[k], twiddles[k]);
                    lo[k] = self.add(u, v);
                    hi[k] = self.sub(u, v);
                }
            }
            len <<= 1;
        }
        if invert {
            let n_inv = self.inv(n as u64 % self.p);
            for x in a.iter_mut() {
                *x = self.mul(*x, n_inv);
            }
        }
    }

    /// `a·b mod x^limit`.
    pub fn mul_trunc(&self, a: &[u64], b: &[u64], limit: usize) -> Vec<u64> {
        let a = &a[..a.len().min(limit)];
        let b = &b[..b.len().min(limit)];
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let full = a.len() + b.len() - 1;
        let out_len = full.min(limit);
        if a.len().min(b.len()) <= 32 {
            let mut out = vec![0u64; out_len];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate().take(out_len.saturating_sub(i)) {
                    out[i + j] = self.add(out[i + j], self.mul(x, y));
                }
            }
            return out;
        }
        let n = full.next_power_of_two();
        assert!(
            n.trailing_zeros() <= self.two_adicity,
            "product too long for this prime"
        );
        let mut fa = a.to_vec();
        fa.resize(n, 0);
        let mut fb = b.to_vec();
        fb.resize(n, 0);
        self.ntt(&mut fa, false);
        self.ntt(&mut fb, false);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = self.mul(*x, *y);
        }
        self.ntt(&mut fa, true);
        fa.truncate(out_len);
        fa
    }

    fn pow_trunc(&self, a: &[u64], e: u64, limit: usize) -> Vec<u64> {
        let mut acc = vec![1u64];
        for i in (0..64 - e.leading_zeros()).rev() {
            acc = self.mul_trunc(&acc, &acc, limit);
            if (e >> i) & 1 == 1 {
                acc = self.mul_trunc(&acc, a, limit);
            }
        }
        acc
    }

    fn eval(&self, a: &[u64], x: u64) -> u64 {
        a.iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// `y` with `y^r·g ≡ 1 mod x^prec`, for `g(0) = 1`, by the
    /// division-free iteration `y ← y + y(1 - g y^r)/r`.
    fn inverse_root_series(&self, g: &[u64], r: u64, prec: usize) -> Vec<u64> {
        let inv_r = self.inv(r % self.p);
        let mut y = vec![1u64];
        let mut k = 1;
        while k < prec {
            let k2 = (2 * k).min(prec);
            let t = self.mul_trunc(&g[..g.len().min(k2)], &self.pow_trunc(&y, r, k2), k2);
            let mut e: Vec<u64> = t.iter().map(|&v| self.sub(0, v)).collect();
            e.resize(k2, 0);
            e[0] = self.add(e[0], 1);
            let corr = self.mul_trunc(&y, &e, k2);
            y.resize(k2, 0);
            for (yi, ci) in y.iter_mut().zip(corr) {
                *yi = self.add(*yi, self.mul(ci, inv_r));
            }
            k = k2;
        }
        y
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseBaselineReport {
    pub verdict: bool,
    pub r_found: Option<u64>,
    pub candidates: Vec<u64>,
    pub prime: u64,
    pub evaluations: usize,
    /// The root, lifted from its symmetric residues modulo the prime.
    pub root: Option<Vec<String>>,
}

/// Classical dense perfect-power test for `f ∈ Z[x]` with
/// `deg f ≤ guard`.
///
/// Works modulo a random prime: computes the power-series `r`-th root of
/// `f/(f_u x^u)` to precision `deg f/r + 1` by Newton iteration and checks
/// the result at random points. True powers are always accepted.
pub fn dense_newton_baseline<G: Rng + ?Sized>(
    f: &SparsePoly<Integers>,
    epsilon: &Epsilon,
    guard: usize,
    rng: &mut G,
) -> Result<DenseBaselineReport> {
    let dense = f.dense_expand_with_guard(guard)?;
    let candidates = exponent_candidates_z(f)?;
    let trailing = f.trailing_term().unwrap();
    let u = trailing.exp.to_usize().unwrap();
    let fu = trailing.coeff.clone();
    let n = dense.len() - 1;
    let prime = loop {
        let m = NttPrime::random(rng);
        if m.reduce(&fu) != 0 && m.reduce(f.leading_coeff().unwrap()) != 0 {
            break m;
        }
    };
    let p = prime.modulus();
    let per_round = (63 - (p / (n as u64 + 1)).leading_zeros()).max(1) as u64;
    let rounds = epsilon
        .split(candidates.len().max(1))
        .log2_inv_ceil()
        .div_ceil(per_round)
        .max(1) as usize;
    let fu_inv = prime.inv(prime.reduce(&fu));
    let g: Vec<u64> = dense[u..]
        .iter()
        .map(|c| prime.mul(prime.reduce(c), fu_inv))
        .collect();
    let mut report = DenseBaselineReport {
        verdict: false,
        r_found: None,
        candidates: candidates.clone(),
        prime: p,
        evaluations: 0,
        root: None,
    };
    for r in candidates {
        if !u.is_multiple_of(r as usize) || !(n - u).is_multiple_of(r as usize) {
            continue;
        }
        let Ok(Some(b)) = integer_rth_root(&fu, r) else {
            continue;
        };
        let s = (n - u) / r as usize;
        let y = prime.inverse_root_series(&g, r, s + 1);
        let h = prime.mul_trunc(&g, &prime.pow_trunc(&y, r - 1, s + 1), s + 1);
        let mut ok = true;
        for _ in 0..rounds {
            report.evaluations += 1;
            let alpha = rng.gen_range(0..p);
            if prime.eval(&g, alpha) != prime.pow(prime.eval(&h, alpha), r) {
                ok = false;
                break;
            }
        }
        if ok {
            let half = p / 2;
            let bp = prime.reduce(&b);
            let mut root = vec!["0".to_string(); u / r as usize];
            root.extend(h.iter().map(|&c| {
                let v = prime.mul(c, bp);
                if v > half {
                    (BigInt::from(v) - BigInt::from(p)).to_string()
                } else {
                    v.to_string()
                }
            }));
            report.verdict = true;
            report.r_found = Some(r);
            report.root = Some(root);
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::DENSE_GUARD;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z(pairs: &[(i64, u64)]) -> SparsePoly<Integers> {
        SparsePoly::from_i64_pairs(pairs)
    }

    fn d(xs: &[i64]) -> DensePoly {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn gcd_examples() {
        // (x+1)(x-2) and (x+1)(x+3)
        assert_eq!(gcd(&d(&[-2, -1, 1]), &d(&[3, 4, 1])), d(&[1, 1]));
        assert_eq!(gcd(&d(&[1, 0, 1]), &d(&[1, 1])), d(&[1]));
        assert_eq!(prs_gcd(&d(&[-2, -1, 1]), &d(&[3, 4, 1])), d(&[1, 1]));
        assert_eq!(gcd(&d(&[6, 6]), &d(&[4, 4])), d(&[1, 1]));
    }

    #[test]
    fn squarefree_examples() {
        // (x+1)^2 (x-1)^3 x
        let f = mul(
            &mul(&pow(&d(&[1, 1]), 2), &pow(&d(&[-1, 1]), 3)),
            &d(&[0, 1]),
        );
        let mut sf = squarefree_decomposition(&f);
        sf.sort_by_key(|(_, i)| *i);
        assert_eq!(sf, vec![(d(&[0, 1]), 1), (d(&[1, 1]), 2), (d(&[-1, 1]), 3)]);
    }

    #[test]
    fn oracle_examples() {
        let g = DENSE_GUARD;
        assert_eq!(
            dense_perfect_power(&z(&[(1, 0), (2, 1), (1, 2)]), g)
                .unwrap()
                .exponents,
            vec![2]
        );
        assert!(!dense_perfect_power(&z(&[(1, 0), (1, 2)]), g)
            .unwrap()
            .is_power());
        assert_eq!(
            dense_perfect_power(&z(&[(1, 0), (1, 1)]).pow(6).scale(&BigInt::from(64)), g)
                .unwrap()
                .exponents,
            vec![2, 3]
        );
        assert_eq!(
            dense_perfect_power(&z(&[(1, 0), (1, 1)]).pow(6).scale(&BigInt::from(-8)), g)
                .unwrap()
                .exponents,
            vec![3]
        );
        assert_eq!(
            dense_perfect_power(&z(&[(1, 0), (1, 1)]).pow(2).scale(&BigInt::from(2)), g)
                .unwrap()
                .exponents,
            Vec::<u64>::new()
        );
        assert!(dense_perfect_power(&z(&[(1, 0), (1, 1 << 30)]), g).is_err());
    }

    #[test]
    fn baseline_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let eps = Epsilon::pow2(20);
        let rep = dense_newton_baseline(&z(&[(1, 0), (2, 1), (1, 2)]), &eps, DENSE_GUARD, &mut rng)
            .unwrap();
        assert!(rep.verdict);
        assert_eq!(rep.root, Some(vec!["1".to_string(), "1".to_string()]));
        let rep =
            dense_newton_baseline(&z(&[(1, 0), (1, 2)]), &eps, DENSE_GUARD, &mut rng).unwrap();
        assert!(!rep.verdict);
        let h = z(&[(3, 2), (-5, 100), (7, 900), (1, 3000)]);
        let rep = dense_newton_baseline(&h.pow(3), &eps, DENSE_GUARD, &mut rng).unwrap();
        assert_eq!(rep.r_found, Some(3));
        let root: Vec<BigInt> = rep
            .root
            .unwrap()
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(SparsePoly::from_dense(Integers, &root), h);
    }

    #[test]
    fn ntt_matches_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let m = NttPrime::random(&mut rng);
        let a: Vec<u64> = (0..300).map(|_| rng.gen_range(0..m.modulus())).collect();
        let b: Vec<u64> = (0..200).map(|_| rng.gen_range(0..m.modulus())).collect();
        let fast = m.mul_trunc(&a, &b, 400);
        let mut slow = vec![0u64; 499];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                slow[i + j] = m.add(slow[i + j], m.mul(x, y));
            }
        }
        assert_eq!(fast, slow[..400].to_vec());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn oracle_recognises_generated_powers(
            terms in prop::collection::vec((-20i64..20, 1u64..60), 1..5),
            r in 2u64..5,
        ) {
            let mut pairs = terms;
            pairs.push((1, 0));
            let h = z(&pairs);
            prop_assume!(h.degree() > BigUint::zero());
            let v = dense_perfect_power(&h.pow(r), DENSE_GUARD).unwrap();
            prop_assert!(v.exponents.iter().any(|e| r % e == 0));
        }

        #[test]
        fn gcd_divides_both(a in prop::collection::vec(-30i64..30, 1..12), b in prop::collection::vec(-30i64..30, 1..12), c in prop::collection::vec(-5i64..5, 1..4)) {
            let (a, b, c) = (trim(d(&a)), trim(d(&b)), trim(d(&c)));
            prop_assume!(!a.is_empty() && !b.is_empty() && !c.is_empty());
            let (ac, bc) = (mul(&a, &c), mul(&b, &c));
            let g = gcd(&ac, &bc);
            prop_assert!(exact_div(&primitive(&ac), &g).is_some());
            prop_assert!(exact_div(&primitive(&bc), &g).is_some());
            prop_assert!(exact_div(&g, &primitive(&c)).is_some());
            prop_assert_eq!(g, prs_gcd(&ac, &bc));
        }
    }
}
