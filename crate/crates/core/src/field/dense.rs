//! Dense polynomials over a finite field, coefficients lowest first with
//! no trailing zeros. Used for the small-degree work: extension moduli,
//! irreducibility tests and root extraction.

use num_bigint::BigUint;

use super::FiniteField;

pub fn trim<F: FiniteField>(field: &F, a: &mut Vec<F::Elem>) {
    while a.last().is_some_and(|c| field.is_zero(c)) {
        a.pop();
    }
}

/// Degree, `None` for the zero polynomial.
pub fn degree<F: FiniteField>(a: &[F::Elem]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn add<F: FiniteField>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let zero = field.zero();
    let mut out: Vec<F::Elem> = (0..n)
        .map(|i| field.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(field, &mut out);
    out
}

pub fn sub<F: FiniteField>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let zero = field.zero();
    let mut out: Vec<F::Elem> = (0..n)
        .map(|i| field.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(field, &mut out);
    out
}

pub fn mul<F: FiniteField>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = field.mul(x, y);
            field.add_assign(&mut out[i + j], &t);
        }
    }
    trim(field, &mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn div_rem<F: FiniteField>(
    field: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = degree::<F>(b).expect("division by the zero polynomial");
    let lead_inv = field.inv(&b[db]).expect("leading coefficient is nonzero");
    let mut rem = a.to_vec();
    trim(field, &mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![field.zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        if field.is_zero(&rem[i]) {
            continue;
        }
        let c = field.mul(&rem[i], &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            let t = field.mul(&c, bj);
            rem[i - db + j] = field.sub(&rem[i - db + j], &t);
        }
        quot[i - db] = c;
    }
    rem.truncate(db);
    trim(field, &mut rem);
    trim(field, &mut quot);
    (quot, rem)
}

pub fn rem<F: FiniteField>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    div_rem(field, a, b).1
}

pub fn monic<F: FiniteField>(field: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lead) => {
            let inv = field.inv(lead).expect("nonzero leading coefficient");
            a.iter().map(|c| field.mul(c, &inv)).collect()
        }
    }
}

/// Monic greatest common divisor (zero if both inputs are zero).
pub fn gcd<F: FiniteField>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(field, &mut x);
    trim(field, &mut y);
    while !y.is_empty() {
        let r = rem(field, &x, &y);
        x = y;
        y = r;
    }
    monic(field, &x)
}

pub fn mul_mod<F: FiniteField>(
    field: &F,
    a: &[F::Elem],
    b: &[F::Elem],
    m: &[F::Elem],
) -> Vec<F::Elem> {
    rem(field, &mul(field, a, b), m)
}

/// `base^e mod m`.
pub fn pow_mod<F: FiniteField>(
    field: &F,
    base: &[F::Elem],
    e: &BigUint,
    m: &[F::Elem],
) -> Vec<F::Elem> {
    let mut acc = rem(field, &[field.one()], m);
    let base = rem(field, base, m);
    for i in (0..e.bits()).rev() {
        acc = mul_mod(field, &acc, &acc, m);
        if e.bit(i) {
            acc = mul_mod(field, &acc, &base, m);
        }
    }
    acc
}

/// The polynomial `x`.
pub fn x<F: FiniteField>(field: &F) -> Vec<F::Elem> {
    vec![field.zero(), field.one()]
}

pub fn evaluate<F: FiniteField>(field: &F, a: &[F::Elem], at: &F::Elem) -> F::Elem {
    a.iter()
        .rev()
        .fold(field.zero(), |acc, c| field.add(&field.mul(&acc, at), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::ring::Ring;

    fn poly(f: &PrimeField, c: &[i64]) -> Vec<BigUint> {
        let mut v: Vec<BigUint> = c.iter().map(|&x| f.from_i64(x)).collect();
        trim(f, &mut v);
        v
    }

    #[test]
    fn division_identity() {
        let f = PrimeField::new(13u32.into()).unwrap();
        let a = poly(&f, &[3, 0, 5, 1, 7, 2]);
        let b = poly(&f, &[1, 4, 0, 3]);
        let (q, r) = div_rem(&f, &a, &b);
        assert!(r.len() < b.len());
        assert_eq!(add(&f, &mul(&f, &q, &b), &r), a);
    }

    #[test]
    fn gcd_of_products() {
        let f = PrimeField::new(101u32.into()).unwrap();
        let common = poly(&f, &[5, 1, 1]);
        let a = mul(&f, &common, &poly(&f, &[1, 1]));
        let b = mul(&f, &common, &poly(&f, &[3, 0, 1]));
        assert_eq!(gcd(&f, &a, &b), monic(&f, &common));
    }
}
