//! Detection and root extraction on a [`PolyFile`], choosing the ring,
//! field implementation and univariate or multivariate algorithm from the
//! file header.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::detect::{
    is_perfect_power_gf, is_perfect_power_q, is_perfect_rth_power_gf, is_perfect_rth_power_z,
    reduce_fraction, DetectionReport, Epsilon,
};
use crate::error::{Error, NotAPowerReason, Result};
use crate::field::{FiniteField, SmallPrimeField};
use crate::intmath::integer_rth_root;
use crate::io::{PolyFile, RingSpec};
use crate::multivar::{
    detect_multivariate_gf, detect_multivariate_z, kronecker_root_field, kronecker_root_z,
    MultiSparsePoly, SubstitutionWitness,
};
use crate::ring::Integers;
use crate::root::{compute_root_newton, compute_root_newton_field, NewtonOptions, RootDiagnostics};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileDetection {
    pub report: DetectionReport,
    /// Substitution points, for multivariate input only.
    pub witnesses: Option<Vec<SubstitutionWitness>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FileRoot {
    pub root: PolyFile,
    pub certified: bool,
    /// Newton diagnostics, for univariate input only.
    pub diagnostics: Option<RootDiagnostics>,
}

/// Runs `body` with the field named by a finite-field ring spec.
macro_rules! with_field {
    ($spec:expr, |$field:ident| $body:expr) => {
        match $spec {
            RingSpec::Prime(p) if p.bit(0) && p.bits() <= SmallPrimeField::MAX_BITS => {
                let $field = SmallPrimeField::new(p)?;
                $body
            }
            RingSpec::Prime(_) => {
                let $field = $spec.prime_field()?.expect("prime ring");
                $body
            }
            RingSpec::Extension { .. } => {
                let $field = $spec.extension_field()?.expect("extension ring");
                $body
            }
            RingSpec::Integers => unreachable!("not a finite field"),
        }
    };
}

/// Decides whether the file's polynomial is a perfect power, testing only
/// `r` when given. Rational input over `Z` is supported in one variable.
pub fn detect_file<G: Rng + ?Sized>(
    file: &PolyFile,
    r: Option<u64>,
    epsilon: &Epsilon,
    rng: &mut G,
) -> Result<FileDetection> {
    if file.vars > 1 && r.is_some() {
        return Err(Error::InvalidArgument(
            "a fixed exponent is not supported for multivariate input".into(),
        ));
    }
    match &file.ring {
        RingSpec::Integers => detect_z(file, r, epsilon, rng),
        spec => with_field!(spec, |field| detect_field(file, &field, r, epsilon, rng)),
    }
}

fn detect_z<G: Rng + ?Sized>(
    file: &PolyFile,
    r: Option<u64>,
    epsilon: &Epsilon,
    rng: &mut G,
) -> Result<FileDetection> {
    if file.vars > 1 {
        if !file.scale.is_one() {
            return Err(Error::InvalidArgument(
                "rational coefficients are not supported for multivariate input".into(),
            ));
        }
        let rep = detect_multivariate_z(&file.to_multi_z()?, epsilon, rng)?;
        return Ok(FileDetection {
            report: rep.report,
            witnesses: Some(rep.witnesses),
        });
    }
    let body = file.to_sparse_z()?;
    let report = match r {
        None => is_perfect_power_q(&body, &file.scale, epsilon, rng)?,
        Some(r) => {
            let (body, scale) = reduce_fraction(&body, &file.scale);
            if integer_rth_root(&scale, r)?.is_none() {
                let mut rep = DetectionReport::empty(epsilon);
                rep.candidates.push(r);
                rep
            } else {
                is_perfect_rth_power_z(&body, r, epsilon, rng)?
            }
        }
    };
    Ok(FileDetection {
        report,
        witnesses: None,
    })
}

fn detect_field<F: FiniteField, G: Rng + ?Sized>(
    file: &PolyFile,
    field: &F,
    r: Option<u64>,
    epsilon: &Epsilon,
    rng: &mut G,
) -> Result<FileDetection> {
    if file.vars > 1 {
        let rep = detect_multivariate_gf(&file.to_multi_field(field)?, epsilon, rng)?;
        return Ok(FileDetection {
            report: rep.report,
            witnesses: Some(rep.witnesses),
        });
    }
    let f = file.to_sparse_field(field)?;
    let report = match r {
        None => is_perfect_power_gf(&f, epsilon, rng)?,
        Some(r) => is_perfect_rth_power_gf(&f, r, epsilon, rng)?,
    };
    Ok(FileDetection {
        report,
        witnesses: None,
    })
}

/// Computes an `r`-th root of the file's polynomial as another file in
/// the same ring. A rational input `body / c` has a root only when the
/// reduced `c` is an `r`-th power `d^r`; the root then carries `scale d`.
pub fn root_file<G: Rng + ?Sized>(
    file: &PolyFile,
    r: u64,
    options: &NewtonOptions,
    rng: &mut G,
) -> Result<FileRoot> {
    match &file.ring {
        RingSpec::Integers => root_z(file, r, options),
        spec => with_field!(spec, |field| root_field(file, &field, r, options, rng)),
    }
}

fn scale_root(scale: &BigInt, r: u64) -> Result<num_bigint::BigUint> {
    match integer_rth_root(scale, r)? {
        Some(d) => Ok(d.magnitude().clone()),
        None => Err(Error::NotAPower(NotAPowerReason::TrailingCoefficient)),
    }
}

fn root_z(file: &PolyFile, r: u64, options: &NewtonOptions) -> Result<FileRoot> {
    if r < 2 {
        return Err(Error::ExponentTooSmall(r));
    }
    if file.vars > 1 {
        let body = file.to_multi_z()?;
        let scale = BigInt::from(file.scale.clone());
        let g = body
            .terms()
            .iter()
            .fold(scale.clone(), |g, t| g.gcd(&t.coeff));
        let d = scale_root(&(scale / &g), r)?;
        let body = MultiSparsePoly::normalize(
            Integers,
            body.vars(),
            body.terms().iter().map(|t| (&t.coeff / &g, t.exps.clone())),
        );
        let mut root = PolyFile::from_multi_z(&kronecker_root_z(&body, r, options)?);
        root.scale = d;
        return Ok(FileRoot {
            root,
            certified: true,
            diagnostics: None,
        });
    }
    let (body, c) = reduce_fraction(&file.to_sparse_z()?, &file.scale);
    let d = scale_root(&c, r)?;
    let res = compute_root_newton(&body, r, options)?;
    let mut root = PolyFile::from_sparse_z(&res.root);
    root.scale = d;
    Ok(FileRoot {
        root,
        certified: res.certified,
        diagnostics: Some(res.diagnostics),
    })
}

fn root_field<F: FiniteField, G: Rng + ?Sized>(
    file: &PolyFile,
    field: &F,
    r: u64,
    options: &NewtonOptions,
    rng: &mut G,
) -> Result<FileRoot> {
    if file.vars > 1 {
        let h = kronecker_root_field(&file.to_multi_field(field)?, r, options, rng)?;
        return Ok(FileRoot {
            root: PolyFile::from_multi_field(&h, file.ring.clone()),
            certified: true,
            diagnostics: None,
        });
    }
    let res = compute_root_newton_field(&file.to_sparse_field(field)?, r, options, rng)?;
    Ok(FileRoot {
        root: PolyFile::from_sparse_field(&res.root, file.ring.clone()),
        certified: res.certified,
        diagnostics: Some(res.diagnostics),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn parse(text: &str) -> PolyFile {
        text.parse().unwrap()
    }

    #[test]
    fn every_ring_kind() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let eps = Epsilon::pow2(10);
        let cases = [
            ("1 0\n2 1\n1 2\n", Some(2)),
            ("1/9 0\n2/3 1\n1 2\n", Some(2)),
            ("ring GF 101\n1 0\n3 1\n3 2\n1 3\n", Some(3)),
            ("ring GF 2305843009213693951\n1 0\n1 2\n", None),
            ("ring GF 7^2 3 6 1\n1 0\n2 1\n1 2\n", Some(2)),
            ("vars 2\n1 0 0\n2 0 1\n1 0 2\n", Some(2)),
            ("ring GF 101\nvars 2\n1 0 0\n2 1 1\n1 2 2\n", Some(2)),
        ];
        for (text, expected) in cases {
            let file = parse(text);
            let det = detect_file(&file, None, &eps, &mut rng).unwrap();
            assert_eq!(det.report.r_found, expected, "{text}");
            assert_eq!(det.witnesses.is_some(), file.vars > 1);
            if let Some(r) = expected {
                let root = root_file(&file, r, &NewtonOptions::default(), &mut rng).unwrap();
                assert!(root.certified);
                assert_eq!(root.root.ring, file.ring);
            }
        }
    }

    #[test]
    fn rational_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let opts = NewtonOptions::default();
        let file = parse("1/4 0\n1 1\n1 2\n");
        let root = root_file(&file, 2, &opts, &mut rng).unwrap().root;
        assert_eq!(
            root.to_string(),
            "lacunary 1\nring Z\nvars 1\nscale 2\n1 0\n2 1\n"
        );
        let half = parse("1/2 0\n1 1\n1/2 2\n");
        assert!(matches!(
            root_file(&half, 2, &opts, &mut rng),
            Err(Error::NotAPower(_))
        ));
        let det = detect_file(&half, Some(2), &Epsilon::pow2(10), &mut rng).unwrap();
        assert!(!det.report.verdict);
        let multi = parse("vars 2\n1/4 0 0\n1 0 1\n1 0 2\n");
        let root = root_file(&multi, 2, &opts, &mut rng).unwrap().root;
        assert_eq!(root.scale, 2u32.into());
    }

    #[test]
    fn fixed_exponent_needs_one_variable() {
        let file = parse("vars 2\n1 0 0\n1 1 1\n");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            detect_file(&file, Some(2), &Epsilon::pow2(4), &mut rng),
            Err(Error::InvalidArgument(_))
        ));
    }
}
