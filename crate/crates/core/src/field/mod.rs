//! Finite fields: prime fields with arbitrary-precision moduli, extension
//! fields `F_q[z]/(Γ)` over any finite field, and the machinery the
//! detection algorithms need on top of them (random primes, irreducible
//! polynomials, r-th power residues and roots, lacunary evaluation).

use num_bigint::BigUint;
use rand::Rng;

use crate::ring::Ring;

pub mod dense;
mod eval;
mod ext;
mod irreducible;
mod prime_field;
pub mod primes;
mod roots;

pub use eval::{evaluate_mod, evaluate_terms, PowerTable};
pub use ext::ExtField;
pub use irreducible::{find_irreducible, irreducible_attempt_cap, is_irreducible};
pub use prime_field::{PrimeField, SmallPrimeField};
pub use primes::{is_probable_prime, random_prime, MILLER_RABIN_ROUNDS};
pub use roots::{rth_power_residue, rth_root_in_field};

#[allow(clippy::wrong_self_convention)]
pub trait FiniteField: Ring {
    /// Number of elements.
    fn order(&self) -> BigUint;

    /// Degree over the prime subfield.
    fn degree(&self) -> usize;

    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Uniformly random element.
    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem;

    /// Coordinates over the prime subfield, lowest first, each reduced.
    fn to_prime_coords(&self, a: &Self::Elem) -> Vec<BigUint>;

    /// Inverse of [`FiniteField::to_prime_coords`]; missing coordinates are zero.
    fn from_prime_coords(&self, coords: &[BigUint]) -> Self::Elem;

    fn random_nonzero<G: Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem {
        loop {
            let a = self.random(rng);
            if !self.is_zero(&a) {
                return a;
            }
        }
    }

    /// The `index`-th element in a fixed enumeration of the field
    /// (base-`p` digits of `index` as prime coordinates).
    fn element_at(&self, index: &BigUint) -> Self::Elem {
        let p = self.characteristic();
        let mut coords = Vec::with_capacity(self.degree());
        let mut rest = index.clone();
        for _ in 0..self.degree() {
            coords.push(&rest % &p);
            rest /= &p;
        }
        self.from_prime_coords(&coords)
    }
}
