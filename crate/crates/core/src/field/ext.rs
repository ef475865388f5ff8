use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::Pow;
use rand::Rng;

use super::{dense, is_irreducible, FiniteField};
use crate::error::{Error, Result};
use crate::ring::Ring;

/// The extension `F_q[z]/(Γ)` of a finite field `F_q` by a monic
/// irreducible `Γ` of degree `d`, with `q^d` elements.
///
/// Elements are coefficient vectors of length exactly `d`, lowest first.
/// The base may itself be an extension.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtField<F: FiniteField> {
    base: F,
    modulus: Arc<[F::Elem]>,
    order: BigUint,
}

impl<F: FiniteField> std::fmt::Display for ExtField<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GF {}^{}",
            self.characteristic(),
            FiniteField::degree(self)
        )
    }
}

impl<F: FiniteField> ExtField<F> {
    /// Validates that `modulus` is monic and irreducible over `base`.
    pub fn new(base: F, modulus: Vec<F::Elem>) -> Result<Self> {
        let mut m = modulus;
        dense::trim(&base, &mut m);
        match m.last() {
            None => return Err(Error::InvalidModulus("zero polynomial".into())),
            Some(lead) if !base.is_one(lead) => {
                return Err(Error::InvalidModulus("not monic".into()))
            }
            _ => {}
        }
        if m.len() < 2 {
            return Err(Error::InvalidModulus("degree must be at least 1".into()));
        }
        if !is_irreducible(&base, &m) {
            return Err(Error::InvalidModulus("not irreducible".into()));
        }
        Ok(Self::new_unchecked(base, m))
    }

    /// `modulus` must be monic irreducible; not re-checked.
    pub fn new_unchecked(base: F, modulus: Vec<F::Elem>) -> Self {
        let d = modulus.len() - 1;
        let order = Pow::pow(base.order(), d);
        ExtField {
            base,
            modulus: modulus.into(),
            order,
        }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    /// Monic modulus `Γ`, lowest coefficient first.
    pub fn modulus(&self) -> &[F::Elem] {
        &self.modulus
    }

    /// Degree `d` over the base field.
    pub fn ext_degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// A base-field element as a constant.
    pub fn embed(&self, c: &F::Elem) -> Vec<F::Elem> {
        let mut v = vec![self.base.zero(); self.ext_degree()];
        v[0] = c.clone();
        v
    }

    /// The class of `z`.
    pub fn generator(&self) -> Vec<F::Elem> {
        let mut v = vec![self.base.zero(); self.ext_degree()];
        if v.len() > 1 {
            v[1] = self.base.one();
        } else {
            v[0] = self.base.neg(&self.modulus[0]);
        }
        v
    }

    fn reduce(&self, mut prod: Vec<F::Elem>) -> Vec<F::Elem> {
        let d = self.ext_degree();
        let f = &self.base;
        for i in (d..prod.len()).rev() {
            if f.is_zero(&prod[i]) {
                continue;
            }
            let c = prod[i].clone();
            for j in 0..d {
                let t = f.mul(&c, &self.modulus[j]);
                prod[i - d + j] = f.sub(&prod[i - d + j], &t);
            }
        }
        prod.truncate(d);
        prod.resize(d, f.zero());
        prod
    }
}

impl<F: FiniteField> Ring for ExtField<F> {
    type Elem = Vec<F::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.ext_degree()]
    }
    fn one(&self) -> Self::Elem {
        self.embed(&self.base.one())
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|c| self.base.is_zero(c))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let d = self.ext_degree();
        let f = &self.base;
        if d == 1 {
            return vec![f.mul(&a[0], &b[0])];
        }
        let mut prod = vec![f.zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = f.mul(x, y);
                f.add_assign(&mut prod[i + j], &t);
            }
        }
        self.reduce(prod)
    }
    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        self.embed(&self.base.from_bigint(n))
    }
    fn from_biguint(&self, n: &BigUint) -> Self::Elem {
        self.embed(&self.base.from_biguint(n))
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.embed(&self.base.from_i64(n))
    }
    fn characteristic(&self) -> BigUint {
        self.base.characteristic()
    }
    fn divide(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        for (x, y) in a.iter_mut().zip(b) {
            self.base.add_assign(x, y);
        }
    }
}

impl<F: FiniteField> FiniteField for ExtField<F> {
    fn order(&self) -> BigUint {
        self.order.clone()
    }
    fn degree(&self) -> usize {
        self.base.degree() * self.ext_degree()
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        (!self.is_zero(a)).then(|| self.pow(a, &(&self.order - 2u32)))
    }
    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem {
        (0..self.ext_degree())
            .map(|_| self.base.random(rng))
            .collect()
    }
    fn to_prime_coords(&self, a: &Self::Elem) -> Vec<BigUint> {
        a.iter()
            .flat_map(|c| self.base.to_prime_coords(c))
            .collect()
    }
    fn from_prime_coords(&self, coords: &[BigUint]) -> Self::Elem {
        let k = self.base.degree();
        (0..self.ext_degree())
            .map(|i| {
                let lo = (i * k).min(coords.len());
                let hi = ((i + 1) * k).min(coords.len());
                self.base.from_prime_coords(&coords[lo..hi])
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn gf9() -> ExtField<PrimeField> {
        let f3 = PrimeField::new(3u32.into()).unwrap();
        // z^2 + 1 is irreducible over F_3
        ExtField::new(f3.clone(), vec![f3.one(), f3.zero(), f3.one()]).unwrap()
    }

    #[test]
    fn group_order_kills_every_unit() {
        let k = gf9();
        let e = k.order() - 1u32;
        for i in 1u32..9 {
            let a = k.element_at(&BigUint::from(i));
            assert_eq!(k.pow(&a, &e), k.one());
            assert_eq!(k.mul(&a, &k.inv(&a).unwrap()), k.one());
        }
    }

    #[test]
    fn rejects_reducible_modulus() {
        let f3 = PrimeField::new(3u32.into()).unwrap();
        // z^2 - 1 = (z - 1)(z + 1)
        let m = vec![f3.from_i64(-1), f3.zero(), f3.one()];
        assert!(matches!(
            ExtField::new(f3, m),
            Err(Error::InvalidModulus(_))
        ));
    }

    #[test]
    fn tower_of_extensions() {
        let k = gf9();
        // y^2 - c is irreducible over F_9 for any non-square c
        let mut found = None;
        for i in 0u32..9 {
            let c = k.element_at(&BigUint::from(i));
            let m = vec![k.neg(&c), k.zero(), k.one()];
            if let Ok(tower) = ExtField::new(k.clone(), m) {
                found = Some(tower);
                break;
            }
        }
        let tower = found.expect("some y^2 - c is irreducible over F_9");
        assert_eq!(tower.order(), BigUint::from(81u32));
        assert_eq!(tower.degree(), 4);
        let a = tower.from_prime_coords(&[1u32.into(), 2u32.into(), 0u32.into(), 1u32.into()]);
        assert_eq!(tower.pow(&a, &BigUint::from(80u32)), tower.one());
    }
}
