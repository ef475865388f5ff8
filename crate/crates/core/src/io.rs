//! The plain-text polynomial file format.
//!
//! ```text
//! lacunary 1
//! ring GF 7^2 3 1 1
//! vars 1
//! 1 0
//! 2,5 12
//! ```
//!
//! After the optional header, each body line is a coefficient followed by
//! one exponent per variable, in strictly increasing (lexicographic) order.
//! Rings are `Z`, `GF p`, or `GF p^d` followed by the `d + 1` coefficients
//! of the monic modulus, lowest first. Extension coefficients are written as
//! comma-separated prime-field coordinates. Over `Z`, coefficients may be
//! fractions `a/b`; they are cleared on input and the common denominator is
//! kept in a `scale c` header line, meaning the polynomial is `body / c`.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{ExtField, FiniteField, PrimeField};
use crate::multivar::MultiSparsePoly;
use crate::poly::{Exponent, SparsePoly};
use crate::ring::Integers;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Integers,
    Prime(BigUint),
    /// `F_p[z]/(Γ)`, with `Γ` monic, coefficients lowest first.
    Extension {
        p: BigUint,
        modulus: Vec<BigUint>,
    },
}

impl RingSpec {
    pub fn characteristic(&self) -> BigUint {
        match self {
            RingSpec::Integers => BigUint::zero(),
            RingSpec::Prime(p) | RingSpec::Extension { p, .. } => p.clone(),
        }
    }

    /// Number of prime-field coordinates per coefficient.
    fn width(&self) -> usize {
        match self {
            RingSpec::Extension { modulus, .. } => modulus.len() - 1,
            _ => 1,
        }
    }

    pub fn prime_field(&self) -> Result<Option<PrimeField>> {
        match self {
            RingSpec::Integers => Ok(None),
            RingSpec::Prime(p) | RingSpec::Extension { p, .. } => {
                PrimeField::new(p.clone()).map(Some)
            }
        }
    }

    pub fn extension_field(&self) -> Result<Option<ExtField<PrimeField>>> {
        match self {
            RingSpec::Extension { p, modulus } => {
                let base = PrimeField::new(p.clone())?;
                let m = modulus
                    .iter()
                    .map(|c| base.from_prime_coords(std::slice::from_ref(c)))
                    .collect();
                ExtField::new(base, m).map(Some)
            }
            _ => Ok(None),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => f.write_str("Z"),
            RingSpec::Prime(p) => write!(f, "GF {p}"),
            RingSpec::Extension { p, modulus } => {
                write!(f, "GF {p}^{}", modulus.len() - 1)?;
                for c in modulus {
                    write!(f, " {c}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for RingSpec {
    type Err = String;

    /// Accepts `Z`, `GF p`, `GF:p`, and `GF p^d c_0 … c_d`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s == "Z" {
            return Ok(RingSpec::Integers);
        }
        let rest = s
            .strip_prefix("GF")
            .ok_or_else(|| format!("unknown ring `{s}`"))?
            .trim_start_matches([':', ' ']);
        let mut words = rest.split_whitespace();
        let head = words.next().ok_or("missing field order")?;
        let number = |w: &str| BigUint::from_str(w).map_err(|_| format!("bad number `{w}`"));
        match head.split_once('^') {
            None => {
                if words.next().is_some() {
                    return Err("trailing text after prime".into());
                }
                Ok(RingSpec::Prime(number(head)?))
            }
            Some((p, d)) => {
                let d: usize = d
                    .parse()
                    .map_err(|_| format!("bad extension degree `{d}`"))?;
                let modulus = words
                    .map(number)
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                if d == 0 || modulus.len() != d + 1 {
                    return Err(format!("GF p^{d} needs {} modulus coefficients", d + 1));
                }
                if !modulus[d].is_one() {
                    return Err("modulus must be monic".into());
                }
                Ok(RingSpec::Extension {
                    p: number(p)?,
                    modulus,
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileTerm {
    /// One entry over `Z` and `GF p`; prime-field coordinates otherwise.
    pub coeff: Vec<BigInt>,
    pub exps: Vec<Exponent>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFile {
    pub ring: RingSpec,
    pub vars: usize,
    /// The polynomial is `body / scale`.
    pub scale: BigUint,
    pub terms: Vec<FileTerm>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

enum RawCoeff {
    Integer(Vec<BigInt>),
    Fraction(BigRational),
}

fn parse_coeff(word: &str, ring: &RingSpec, line: usize) -> Result<RawCoeff> {
    if let Some((n, d)) = word.split_once('/') {
        if *ring != RingSpec::Integers {
            return Err(parse_err(line, "fractions are only allowed over Z"));
        }
        let n = BigInt::from_str(n).map_err(|_| parse_err(line, format!("bad numerator `{n}`")))?;
        let d =
            BigInt::from_str(d).map_err(|_| parse_err(line, format!("bad denominator `{d}`")))?;
        if d.is_zero() {
            return Err(parse_err(line, "zero denominator"));
        }
        return Ok(RawCoeff::Fraction(BigRational::new(n, d)));
    }
    let coords = word
        .split(',')
        .map(|w| BigInt::from_str(w).map_err(|_| parse_err(line, format!("bad coefficient `{w}`"))))
        .collect::<Result<Vec<_>>>()?;
    let width = ring.width();
    if coords.len() > width {
        return Err(parse_err(
            line,
            format!("coefficient has more than {width} coordinates"),
        ));
    }
    let p = ring.characteristic();
    let mut coords: Vec<BigInt> = if p.is_zero() {
        coords
    } else {
        let p = BigInt::from(p);
        coords.into_iter().map(|c| c.mod_floor(&p)).collect()
    };
    while coords.len() > 1 && coords.last().is_some_and(Zero::is_zero) {
        coords.pop();
    }
    Ok(RawCoeff::Integer(coords))
}

impl PolyFile {
    pub fn parse(text: &str) -> Result<PolyFile> {
        let mut ring = RingSpec::Integers;
        let mut vars: Option<usize> = None;
        let mut scale = BigUint::one();
        let mut in_header = true;
        let mut raw: Vec<(usize, RawCoeff, Vec<Exponent>)> = Vec::new();
        for (idx, full) in text.lines().enumerate() {
            let line = idx + 1;
            let content = full.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            if in_header {
                let (key, value) = content
                    .split_once(char::is_whitespace)
                    .unwrap_or((content, ""));
                match key {
                    "lacunary" => {
                        if value.trim() != FORMAT_VERSION.to_string() {
                            return Err(parse_err(
                                line,
                                format!("unsupported format version `{}`", value.trim()),
                            ));
                        }
                        continue;
                    }
                    "ring" => {
                        ring = value.parse().map_err(|m: String| parse_err(line, m))?;
                        continue;
                    }
                    "vars" => {
                        let v: usize = value
                            .trim()
                            .parse()
                            .map_err(|_| parse_err(line, "bad variable count"))?;
                        if v == 0 {
                            return Err(parse_err(line, "need at least one variable"));
                        }
                        vars = Some(v);
                        continue;
                    }
                    "scale" => {
                        scale = BigUint::from_str(value.trim())
                            .map_err(|_| parse_err(line, "bad scale"))?;
                        if scale.is_zero() {
                            return Err(parse_err(line, "scale must be positive"));
                        }
                        if ring != RingSpec::Integers {
                            return Err(parse_err(line, "scale is only meaningful over Z"));
                        }
                        continue;
                    }
                    _ => in_header = false,
                }
            }
            let mut words = content.split_whitespace();
            let coeff = parse_coeff(words.next().unwrap(), &ring, line)?;
            let exps = words
                .map(|w| {
                    Exponent::from_str(w)
                        .map_err(|_| parse_err(line, format!("bad exponent `{w}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let expected = *vars.get_or_insert(exps.len());
            if exps.len() != expected || expected == 0 {
                return Err(parse_err(
                    line,
                    format!(
                        "expected {} exponents, found {}",
                        expected.max(1),
                        exps.len()
                    ),
                ));
            }
            if let Some((_, _, prev)) = raw.last() {
                if *prev == exps {
                    return Err(parse_err(line, "duplicate exponent"));
                }
                if *prev > exps {
                    return Err(parse_err(line, "exponents not in increasing order"));
                }
            }
            raw.push((line, coeff, exps));
        }
        let denominator = raw.iter().fold(BigInt::one(), |acc, (_, c, _)| match c {
            RawCoeff::Fraction(q) => acc.lcm(q.denom()),
            RawCoeff::Integer(_) => acc,
        });
        let mut terms = Vec::with_capacity(raw.len());
        for (line, c, exps) in raw {
            let coeff = match c {
                RawCoeff::Integer(v) => v.into_iter().map(|x| x * &denominator).collect::<Vec<_>>(),
                RawCoeff::Fraction(q) => {
                    vec![(q * BigRational::from_integer(denominator.clone())).to_integer()]
                }
            };
            if coeff.iter().all(Zero::is_zero) {
                return Err(parse_err(line, "zero coefficient"));
            }
            terms.push(FileTerm { coeff, exps });
        }
        scale *= denominator.magnitude();
        Ok(PolyFile {
            ring,
            vars: vars.unwrap_or(1),
            scale,
            terms,
        })
    }

    fn require(&self, ring: &RingSpec, vars: Option<usize>) -> Result<()> {
        let same_kind = matches!(
            (&self.ring, ring),
            (RingSpec::Integers, RingSpec::Integers)
                | (RingSpec::Prime(_), RingSpec::Prime(_))
                | (RingSpec::Extension { .. }, RingSpec::Extension { .. })
        );
        if !same_kind {
            return Err(Error::RingMismatch);
        }
        if let Some(v) = vars {
            if self.vars != v {
                return Err(Error::VariableMismatch(self.vars, v));
            }
        }
        Ok(())
    }

    /// The integral body; callers handle [`PolyFile::scale`].
    pub fn to_sparse_z(&self) -> Result<SparsePoly<Integers>> {
        self.require(&RingSpec::Integers, Some(1))?;
        let raw = self
            .terms
            .iter()
            .map(|t| (t.coeff[0].clone(), t.exps[0].clone()));
        Ok(SparsePoly::normalize(Integers, raw.collect::<Vec<_>>()))
    }

    pub fn to_multi_z(&self) -> Result<MultiSparsePoly<Integers>> {
        self.require(&RingSpec::Integers, None)?;
        let raw = self
            .terms
            .iter()
            .map(|t| (t.coeff[0].clone(), t.exps.clone()));
        Ok(MultiSparsePoly::normalize(
            Integers,
            self.vars,
            raw.collect::<Vec<_>>(),
        ))
    }

    fn field_coeff<F: FiniteField>(field: &F, c: &[BigInt]) -> F::Elem {
        let coords: Vec<BigUint> = c.iter().map(|x| x.magnitude().clone()).collect();
        field.from_prime_coords(&coords)
    }

    /// Coefficients are read as prime-field coordinates of `field`, which
    /// must match the file's ring.
    pub fn to_sparse_field<F: FiniteField>(&self, field: &F) -> Result<SparsePoly<F>> {
        if field.characteristic() != self.ring.characteristic()
            || field.degree() != self.ring.width()
        {
            return Err(Error::RingMismatch);
        }
        if self.vars != 1 {
            return Err(Error::VariableMismatch(self.vars, 1));
        }
        let raw = self
            .terms
            .iter()
            .map(|t| (Self::field_coeff(field, &t.coeff), t.exps[0].clone()));
        Ok(SparsePoly::normalize(
            field.clone(),
            raw.collect::<Vec<_>>(),
        ))
    }

    pub fn to_multi_field<F: FiniteField>(&self, field: &F) -> Result<MultiSparsePoly<F>> {
        if field.characteristic() != self.ring.characteristic()
            || field.degree() != self.ring.width()
        {
            return Err(Error::RingMismatch);
        }
        let raw = self
            .terms
            .iter()
            .map(|t| (Self::field_coeff(field, &t.coeff), t.exps.clone()));
        Ok(MultiSparsePoly::normalize(
            field.clone(),
            self.vars,
            raw.collect::<Vec<_>>(),
        ))
    }

    pub fn from_sparse_z(f: &SparsePoly<Integers>) -> PolyFile {
        let terms = f
            .terms()
            .iter()
            .map(|t| FileTerm {
                coeff: vec![t.coeff.clone()],
                exps: vec![t.exp.clone()],
            })
            .collect();
        PolyFile {
            ring: RingSpec::Integers,
            vars: 1,
            scale: BigUint::one(),
            terms,
        }
    }

    pub fn from_multi_z(f: &MultiSparsePoly<Integers>) -> PolyFile {
        let terms = f
            .terms()
            .iter()
            .map(|t| FileTerm {
                coeff: vec![t.coeff.clone()],
                exps: t.exps.clone(),
            })
            .collect();
        PolyFile {
            ring: RingSpec::Integers,
            vars: f.vars(),
            scale: BigUint::one(),
            terms,
        }
    }

    fn coords<F: FiniteField>(field: &F, c: &F::Elem) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = field
            .to_prime_coords(c)
            .into_iter()
            .map(BigInt::from)
            .collect();
        while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    }

    pub fn from_sparse_field<F: FiniteField>(f: &SparsePoly<F>, ring: RingSpec) -> PolyFile {
        let terms = f
            .terms()
            .iter()
            .map(|t| FileTerm {
                coeff: Self::coords(f.ring(), &t.coeff),
                exps: vec![t.exp.clone()],
            })
            .collect();
        PolyFile {
            ring,
            vars: 1,
            scale: BigUint::one(),
            terms,
        }
    }

    pub fn from_multi_field<F: FiniteField>(f: &MultiSparsePoly<F>, ring: RingSpec) -> PolyFile {
        let terms = f
            .terms()
            .iter()
            .map(|t| FileTerm {
                coeff: Self::coords(f.ring(), &t.coeff),
                exps: t.exps.clone(),
            })
            .collect();
        PolyFile {
            ring,
            vars: f.vars(),
            scale: BigUint::one(),
            terms,
        }
    }
}

impl fmt::Display for PolyFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lacunary {FORMAT_VERSION}")?;
        writeln!(f, "ring {}", self.ring)?;
        writeln!(f, "vars {}", self.vars)?;
        if !self.scale.is_one() {
            writeln!(f, "scale {}", self.scale)?;
        }
        for t in &self.terms {
            let coeff: Vec<String> = t.coeff.iter().map(|c| c.to_string()).collect();
            f.write_str(&coeff.join(","))?;
            for e in &t.exps {
                write!(f, " {e}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for PolyFile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolyFile::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SmallPrimeField;
    use proptest::prelude::*;

    #[test]
    fn headerless_integer_body() {
        let file = PolyFile::parse("1 0\n2 1\n1 2").unwrap();
        assert_eq!(file.ring, RingSpec::Integers);
        assert_eq!(
            file.to_sparse_z().unwrap(),
            SparsePoly::from_i64_pairs(&[(1, 0), (2, 1), (1, 2)])
        );
    }

    #[test]
    fn rejections() {
        let err = PolyFile::parse("lacunary 1\nring Z\n1 0\n0 5\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 4,
                message: "zero coefficient".into()
            }
        );
        assert!(matches!(
            PolyFile::parse("1 5\n1 2"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            PolyFile::parse("1 5\n3 5"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            PolyFile::parse("1 5\n3 x"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            PolyFile::parse("1 5 1\n3 6"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            PolyFile::parse("lacunary 2\n1 5"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            PolyFile::parse("ring GF 7\n7 1"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            PolyFile::parse("ring GF 7\n1/2 1"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn fractions_are_cleared() {
        let file = PolyFile::parse("1/4 0\n1 1\n1 2").unwrap();
        assert_eq!(file.scale, BigUint::from(4u32));
        assert_eq!(
            file.to_sparse_z().unwrap(),
            SparsePoly::from_i64_pairs(&[(1, 0), (4, 1), (4, 2)])
        );
        let text = file.to_string();
        assert!(text.contains("scale 4\n"));
        assert_eq!(PolyFile::parse(&text).unwrap(), file);
    }

    #[test]
    fn field_files() {
        let text = "lacunary 1\nring GF 7^2 3 1 1\nvars 1\n1 0\n2,5 12\n";
        let file = PolyFile::parse(text).unwrap();
        assert_eq!(file.to_string(), text);
        let ext = file.ring.extension_field().unwrap().unwrap();
        let f = file.to_sparse_field(&ext).unwrap();
        assert_eq!(f.sparsity(), 2);
        assert_eq!(PolyFile::from_sparse_field(&f, file.ring.clone()), file);

        let small = PolyFile::parse("ring GF:101\n-1 0\n1 3").unwrap();
        assert_eq!(
            small.to_string(),
            "lacunary 1\nring GF 101\nvars 1\n100 0\n1 3\n"
        );
        let gf = SmallPrimeField::new(&BigUint::from(101u32)).unwrap();
        assert_eq!(small.to_sparse_field(&gf).unwrap().sparsity(), 2);
        assert!(small.to_sparse_z().is_err());
    }

    #[test]
    fn multivariate_files() {
        let text = "lacunary 1\nring Z\nvars 2\n1 0 0\n2 1 1\n1 2 2\n";
        let file = PolyFile::parse(text).unwrap();
        let f = file.to_multi_z().unwrap();
        assert_eq!(f.sparsity(), 3);
        assert_eq!(PolyFile::from_multi_z(&f).to_string(), text);
        assert!(file.to_sparse_z().is_err());
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(
            coeffs in prop::collection::vec(prop_oneof![-1_000_000i64..-1, 1i64..1_000_000], 1..10),
            gaps in prop::collection::vec(1u64..u64::MAX / 16, 1..10),
        ) {
            let mut e = BigUint::zero();
            let pairs: Vec<_> = coeffs.iter().zip(&gaps).map(|(&c, &g)| {
                e += g;
                (BigInt::from(c), e.clone())
            }).collect();
            let f = SparsePoly::normalize(Integers, pairs);
            let text = PolyFile::from_sparse_z(&f).to_string();
            let back = PolyFile::parse(&text).unwrap();
            prop_assert_eq!(back.to_string(), text);
            prop_assert_eq!(back.to_sparse_z().unwrap(), f);
        }
    }
}
