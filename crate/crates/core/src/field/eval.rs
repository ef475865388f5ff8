use num_bigint::BigUint;
use num_traits::Zero;

use super::FiniteField;
use crate::poly::SparsePoly;
use crate::ring::Integers;

/// Fixed-base windowed powers of one field element.
///
/// Stores `α^{d·2^{jw}}` for every window position `j` and digit `d < 2^w`,
/// so each power afterwards costs one multiplication per window. Worth it
/// when many exponents share a base, as in sparse evaluation.
pub struct PowerTable<'a, F: FiniteField> {
    field: &'a F,
    width: u32,
    table: Vec<Vec<F::Elem>>,
}

impl<'a, F: FiniteField> PowerTable<'a, F> {
    /// Table for exponents of at most `max_bits` bits, with window width
    /// chosen to minimise precomputation plus `uses` lookups.
    pub fn new(field: &'a F, base: &F::Elem, max_bits: u64, uses: usize) -> Self {
        let width = Self::best_width(max_bits, uses);
        let windows = max_bits.div_ceil(width as u64).max(1) as usize;
        let mut table = Vec::with_capacity(windows);
        let mut step = base.clone();
        for _ in 0..windows {
            let mut row = Vec::with_capacity(1 << width);
            row.push(field.one());
            for d in 1..(1usize << width) {
                row.push(field.mul(&row[d - 1], &step));
            }
            step = field.mul(&row[(1 << width) - 1], &step);
            table.push(row);
        }
        PowerTable {
            field,
            width,
            table,
        }
    }

    /// Minimises `(B/w)·(2^w + uses)` over `w`.
    fn best_width(bits: u64, uses: usize) -> u32 {
        let bits = bits.max(1) as f64;
        (1..=12u32)
            .min_by(|&a, &b| {
                let cost = |w: u32| (bits / w as f64).ceil() * ((1u64 << w) as f64 + uses as f64);
                cost(a).total_cmp(&cost(b))
            })
            .unwrap()
    }

    /// `α^e`; `e` must fit in the table's bit budget.
    pub fn pow(&self, e: &BigUint) -> F::Elem {
        let w = self.width as u64;
        assert!(
            e.bits() <= self.table.len() as u64 * w,
            "exponent exceeds table range"
        );
        let mask = (1u64 << w) - 1;
        let digits = e.to_u64_digits();
        let mut acc: Option<F::Elem> = None;
        for (j, row) in self.table.iter().enumerate() {
            let start = j as u64 * w;
            let digit = extract_bits(&digits, start, w) & mask;
            if digit == 0 {
                continue;
            }
            let v = &row[digit as usize];
            acc = Some(match acc {
                None => v.clone(),
                Some(a) => self.field.mul(&a, v),
            });
        }
        acc.unwrap_or_else(|| self.field.one())
    }
}

fn extract_bits(digits: &[u64], start: u64, len: u64) -> u64 {
    let word = (start / 64) as usize;
    let offset = start % 64;
    let lo = digits.get(word).copied().unwrap_or(0) >> offset;
    if offset + len > 64 && offset > 0 {
        let hi = digits.get(word + 1).copied().unwrap_or(0) << (64 - offset);
        lo | hi
    } else {
        lo
    }
}

/// `Σ c_i·α^{e_i}` in `field`, exponents reduced mod `ϱ - 1` for `α ≠ 0`.
pub fn evaluate_terms<'t, F, I>(field: &F, terms: I, alpha: &F::Elem) -> F::Elem
where
    F: FiniteField,
    F::Elem: 't,
    I: IntoIterator<Item = (F::Elem, &'t BigUint)>,
{
    if field.is_zero(alpha) {
        return terms
            .into_iter()
            .find(|(_, e)| e.is_zero())
            .map(|(c, _)| c)
            .unwrap_or_else(|| field.zero());
    }
    let group = field.order() - 1u32;
    let terms: Vec<(F::Elem, BigUint)> = terms.into_iter().map(|(c, e)| (c, e % &group)).collect();
    let max_bits = terms.iter().map(|(_, e)| e.bits()).max().unwrap_or(0);
    let table = PowerTable::new(field, alpha, max_bits, terms.len());
    let mut acc = field.zero();
    for (c, e) in &terms {
        let v = field.mul(c, &table.pow(e));
        field.add_assign(&mut acc, &v);
    }
    acc
}

/// Evaluates an integer polynomial at `α`, reducing coefficients into the
/// field on the fly.
pub fn evaluate_mod<F: FiniteField>(
    f: &SparsePoly<Integers>,
    field: &F,
    alpha: &F::Elem,
) -> F::Elem {
    evaluate_terms(
        field,
        f.terms()
            .iter()
            .map(|t| (field.from_bigint(&t.coeff), &t.exp)),
        alpha,
    )
}
