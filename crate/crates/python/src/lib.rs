//! Python bindings: a `Poly` class over `Z`, `Q` (via a scale) and finite
//! fields, plus `detect`, `root`, `generate` and `verify`.

use lacunary::detect::Epsilon;
use lacunary::dispatch::{detect_file, root_file};
use lacunary::error::Error;
use lacunary::field::PrimeField;
use lacunary::generate::{random_multi_sparse, random_sparse, RootShape};
use lacunary::io::{PolyFile, RingSpec};
use lacunary::multivar::{verify_power_multi, MultiSparsePoly};
use lacunary::poly::SparsePoly;
use lacunary::ring::{Integers, Ring};
use lacunary::root::{verify_power, NewtonOptions};
use num_bigint::{BigInt, BigUint};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

create_exception!(
    lacunary,
    NotAPowerError,
    PyValueError,
    "The polynomial has no such root."
);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NotAPower(_) | Error::SparsityCeiling { .. } => {
            NotAPowerError::new_err(e.to_string())
        }
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_ring(ring: &str) -> PyResult<RingSpec> {
    ring.parse().map_err(PyValueError::new_err)
}

/// The polynomial held in a concrete ring, for arithmetic.
enum Concrete {
    Z(SparsePoly<Integers>),
    ZMulti(MultiSparsePoly<Integers>),
    Gf(SparsePoly<PrimeField>),
    GfMulti(MultiSparsePoly<PrimeField>),
}

impl Concrete {
    fn of(file: &PolyFile) -> PyResult<Concrete> {
        if file.scale != BigUint::from(1u32) {
            return Err(PyValueError::new_err(
                "arithmetic needs integral coefficients",
            ));
        }
        let c = match &file.ring {
            RingSpec::Integers if file.vars == 1 => file.to_sparse_z().map(Concrete::Z),
            RingSpec::Integers => file.to_multi_z().map(Concrete::ZMulti),
            RingSpec::Prime(_) => {
                let field = file.ring.prime_field().map_err(to_py)?.expect("prime ring");
                if file.vars == 1 {
                    file.to_sparse_field(&field).map(Concrete::Gf)
                } else {
                    file.to_multi_field(&field).map(Concrete::GfMulti)
                }
            }
            RingSpec::Extension { .. } => {
                return Err(PyValueError::new_err(
                    "arithmetic is not supported over extensions",
                ))
            }
        };
        c.map_err(to_py)
    }

    fn into_file(self, ring: &RingSpec) -> PolyFile {
        match self {
            Concrete::Z(f) => PolyFile::from_sparse_z(&f),
            Concrete::ZMulti(f) => PolyFile::from_multi_z(&f),
            Concrete::Gf(f) => PolyFile::from_sparse_field(&f, ring.clone()),
            Concrete::GfMulti(f) => PolyFile::from_multi_field(&f, ring.clone()),
        }
    }

    fn pow(&self, e: u64) -> Concrete {
        match self {
            Concrete::Z(f) => Concrete::Z(f.pow(e)),
            Concrete::ZMulti(f) => Concrete::ZMulti(f.pow(e)),
            Concrete::Gf(f) => Concrete::Gf(f.pow(e)),
            Concrete::GfMulti(f) => Concrete::GfMulti(f.pow(e)),
        }
    }

    fn mul(&self, other: &Concrete) -> PyResult<Concrete> {
        let out = match (self, other) {
            (Concrete::Z(a), Concrete::Z(b)) => a.checked_mul(b).map(Concrete::Z),
            (Concrete::ZMulti(a), Concrete::ZMulti(b)) => a.checked_mul(b).map(Concrete::ZMulti),
            (Concrete::Gf(a), Concrete::Gf(b)) => a.checked_mul(b).map(Concrete::Gf),
            (Concrete::GfMulti(a), Concrete::GfMulti(b)) => a.checked_mul(b).map(Concrete::GfMulti),
            _ => Err(Error::RingMismatch),
        };
        out.map_err(to_py)
    }

    fn verify(&self, root: &Concrete, r: u64) -> PyResult<bool> {
        Ok(match (self, root) {
            (Concrete::Z(f), Concrete::Z(h)) => verify_power(f, h, r),
            (Concrete::ZMulti(f), Concrete::ZMulti(h)) => verify_power_multi(f, h, r),
            (Concrete::Gf(f), Concrete::Gf(h)) => verify_power(f, h, r),
            (Concrete::GfMulti(f), Concrete::GfMulti(h)) => verify_power_multi(f, h, r),
            _ => return Err(to_py(Error::RingMismatch)),
        })
    }
}

/// A sparse polynomial in one or more variables.
///
/// ```python
/// Poly([(1, 0), (2, 5), (1, 10)])          # 1 + 2x^5 + x^10 over Z
/// Poly([(3, (1, 2))], ring="GF 101")       # 3 x y^2 over F_101
/// Poly.parse(open("f.sp").read())
/// ```
#[pyclass(module = "lacunary", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct Poly {
    file: PolyFile,
}

impl Poly {
    pub fn from_file(file: PolyFile) -> Self {
        Poly { file }
    }

    pub fn file(&self) -> &PolyFile {
        &self.file
    }
}

fn build_file(
    terms: Vec<(BigInt, Vec<BigUint>)>,
    ring: &RingSpec,
    vars: usize,
) -> PyResult<PolyFile> {
    if terms.iter().any(|(_, e)| e.len() != vars) {
        return Err(PyValueError::new_err(format!(
            "every term needs {vars} exponents"
        )));
    }
    let file = match ring {
        RingSpec::Integers if vars == 1 => PolyFile::from_sparse_z(&SparsePoly::normalize(
            Integers,
            terms.into_iter().map(|(c, mut e)| (c, e.remove(0))),
        )),
        RingSpec::Integers => {
            PolyFile::from_multi_z(&MultiSparsePoly::normalize(Integers, vars, terms))
        }
        RingSpec::Prime(_) => {
            let field = ring.prime_field().map_err(to_py)?.expect("prime ring");
            let raw = terms.into_iter().map(|(c, e)| (field.from_bigint(&c), e));
            if vars == 1 {
                let f =
                    SparsePoly::normalize(field.clone(), raw.map(|(c, mut e)| (c, e.remove(0))));
                PolyFile::from_sparse_field(&f, ring.clone())
            } else {
                let f = MultiSparsePoly::normalize(field.clone(), vars, raw);
                PolyFile::from_multi_field(&f, ring.clone())
            }
        }
        RingSpec::Extension { .. } => {
            return Err(PyValueError::new_err(
                "build extension-field polynomials with Poly.parse",
            ))
        }
    };
    Ok(file)
}

fn exponents(obj: &Bound<'_, PyAny>) -> PyResult<Vec<BigUint>> {
    if let Ok(e) = obj.extract::<BigUint>() {
        return Ok(vec![e]);
    }
    obj.extract::<Vec<BigUint>>()
}

#[pymethods]
impl Poly {
    #[new]
    #[pyo3(signature = (terms, ring = "Z", vars = None))]
    fn new(
        terms: Vec<(BigInt, Bound<'_, PyAny>)>,
        ring: &str,
        vars: Option<usize>,
    ) -> PyResult<Self> {
        let ring = parse_ring(ring)?;
        let terms = terms
            .into_iter()
            .map(|(c, e)| Ok((c, exponents(&e)?)))
            .collect::<PyResult<Vec<_>>>()?;
        let vars = vars
            .or_else(|| terms.first().map(|(_, e)| e.len()))
            .unwrap_or(1);
        if vars == 0 {
            return Err(PyValueError::new_err("need at least one variable"));
        }
        Ok(Poly {
            file: build_file(terms, &ring, vars)?,
        })
    }

    /// Reads the plain-text file format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        PolyFile::parse(text).map(Poly::from_file).map_err(to_py)
    }

    #[getter]
    fn ring(&self) -> String {
        self.file.ring.to_string()
    }

    #[getter]
    fn vars(&self) -> usize {
        self.file.vars
    }

    /// The polynomial is the listed terms divided by `scale`.
    #[getter]
    fn scale(&self) -> BigUint {
        self.file.scale.clone()
    }

    #[getter]
    fn sparsity(&self) -> usize {
        self.file.terms.len()
    }

    /// Total degree; -1 for the zero polynomial.
    #[getter]
    fn degree(&self) -> BigInt {
        self.file
            .terms
            .iter()
            .map(|t| BigInt::from(t.exps.iter().sum::<BigUint>()))
            .max()
            .unwrap_or_else(|| BigInt::from(-1))
    }

    /// `(coefficient, exponent)` pairs in increasing order. Exponents are
    /// tuples for several variables; extension coefficients are coordinate
    /// lists, lowest first.
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let width = match &self.file.ring {
            RingSpec::Extension { modulus, .. } => Some(modulus.len() - 1),
            _ => None,
        };
        self.file
            .terms
            .iter()
            .map(|t| {
                let coeff = if let Some(width) = width {
                    let mut coords = t.coeff.clone();
                    coords.resize(width, BigInt::from(0));
                    coords.into_pyobject(py)?.into_any()
                } else {
                    t.coeff[0].clone().into_pyobject(py)?.into_any()
                };
                let exps = if self.file.vars == 1 {
                    t.exps[0].clone().into_pyobject(py)?.into_any()
                } else {
                    pyo3::types::PyTuple::new(py, t.exps.clone())?.into_any()
                };
                Ok(pyo3::types::PyTuple::new(py, [coeff, exps])?.into_any())
            })
            .collect()
    }

    fn __pow__(&self, e: u64, modulo: Option<Py<PyAny>>) -> PyResult<Poly> {
        if modulo.is_some() {
            return Err(PyValueError::new_err("modular powers are not supported"));
        }
        let f = Concrete::of(&self.file)?.pow(e);
        Ok(Poly::from_file(f.into_file(&self.file.ring)))
    }

    fn __mul__(&self, other: &Poly) -> PyResult<Poly> {
        let f = Concrete::of(&self.file)?.mul(&Concrete::of(&other.file)?)?;
        Ok(Poly::from_file(f.into_file(&self.file.ring)))
    }

    fn __str__(&self) -> String {
        self.file.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Poly(ring='{}', vars={}, sparsity={}, degree={})",
            self.file.ring,
            self.file.vars,
            self.file.terms.len(),
            self.degree()
        )
    }
}

/// Outcome of [`detect`]; truthy when a perfect power was found.
#[pyclass(module = "lacunary", frozen, get_all)]
pub struct Detection {
    verdict: bool,
    r: Option<u64>,
    seed: u64,
    candidates: Vec<u64>,
    epsilon: String,
    /// The full report, including the Monte Carlo trace.
    report_json: String,
}

#[pymethods]
impl Detection {
    fn __bool__(&self) -> bool {
        self.verdict
    }

    fn __repr__(&self) -> String {
        format!(
            "Detection(verdict={}, r={:?}, seed={})",
            self.verdict, self.r, self.seed
        )
    }
}

fn seed_or_random(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

/// Decides whether `f` is a perfect power, with one-sided error at most
/// `epsilon`. Pass `r` to test a single prime exponent.
#[pyfunction]
#[pyo3(signature = (f, r = None, epsilon = "2^-20", seed = None))]
fn detect(f: &Poly, r: Option<u64>, epsilon: &str, seed: Option<u64>) -> PyResult<Detection> {
    let eps: Epsilon = epsilon.parse().map_err(to_py)?;
    let seed = seed_or_random(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut det = detect_file(&f.file, r, &eps, &mut rng).map_err(to_py)?;
    det.report.seed = Some(seed);
    Ok(Detection {
        verdict: det.report.verdict,
        r: det.report.r_found,
        seed,
        candidates: det.report.candidates.clone(),
        epsilon: eps.to_string(),
        report_json: serde_json::to_string(&det)
            .map_err(|e| PyValueError::new_err(e.to_string()))?,
    })
}

/// The `r`-th root of `f`; raises `NotAPowerError` when there is none.
/// Over `Z` with even `r` the root has positive leading coefficient.
#[pyfunction]
#[pyo3(signature = (f, r, seed = None, sparsity_ceiling = None))]
fn root(f: &Poly, r: u64, seed: Option<u64>, sparsity_ceiling: Option<usize>) -> PyResult<Poly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_or_random(seed));
    let options = NewtonOptions { sparsity_ceiling };
    let found = root_file(&f.file, r, &options, &mut rng).map_err(to_py)?;
    Ok(Poly::from_file(found.root))
}

/// Whether `h^r == f`, decided without expanding `h^r` where possible.
#[pyfunction]
fn verify(f: &Poly, h: &Poly, r: u64) -> PyResult<bool> {
    if f.file.ring != h.file.ring {
        return Err(to_py(Error::RingMismatch));
    }
    Concrete::of(&f.file)?.verify(&Concrete::of(&h.file)?, r)
}

/// A random root `h` with `terms` terms and degree `degree` (the bound on
/// each partial degree when `vars > 1`), and `f = h^r`.
#[pyfunction]
#[pyo3(signature = (terms, degree, r, ring = "Z", coeff_bound = 100, seed = 0, vars = 1))]
fn generate(
    terms: usize,
    degree: u64,
    r: u64,
    ring: &str,
    coeff_bound: u64,
    seed: u64,
    vars: usize,
) -> PyResult<(Poly, Poly)> {
    let spec = parse_ring(ring)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = BigUint::from(coeff_bound.max(1));
    let h = match &spec {
        RingSpec::Integers if vars > 1 => Concrete::ZMulti(
            random_multi_sparse(&Integers, vars, terms, degree, &bound, &mut rng).map_err(to_py)?,
        ),
        RingSpec::Integers => Concrete::Z(
            random_sparse(&Integers, &RootShape::new(terms, degree, bound), &mut rng)
                .map_err(to_py)?,
        ),
        RingSpec::Prime(_) => {
            let field = spec.prime_field().map_err(to_py)?.expect("prime ring");
            if vars > 1 {
                Concrete::GfMulti(
                    random_multi_sparse(&field, vars, terms, degree, &bound, &mut rng)
                        .map_err(to_py)?,
                )
            } else {
                Concrete::Gf(
                    random_sparse(&field, &RootShape::new(terms, degree, bound), &mut rng)
                        .map_err(to_py)?,
                )
            }
        }
        RingSpec::Extension { .. } => {
            return Err(PyValueError::new_err("generate supports Z and GF p"))
        }
    };
    let f = h.pow(r);
    Ok((
        Poly::from_file(h.into_file(&spec)),
        Poly::from_file(f.into_file(&spec)),
    ))
}

#[pymodule]
#[pyo3(name = "lacunary")]
pub fn lacunary_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Poly>()?;
    m.add_class::<Detection>()?;
    m.add("NotAPowerError", m.py().get_type::<NotAPowerError>())?;
    m.add_function(wrap_pyfunction!(detect, m)?)?;
    m.add_function(wrap_pyfunction!(root, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    Ok(())
}
