use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};

fn run(script: &str) {
    Python::initialize();
    Python::attach(|py| {
        let module = PyModule::new(py, "lacunary").unwrap();
        lacunary_py::lacunary_module(&module).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("lac", module).unwrap();
        let code = CString::new(script).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.print(py);
            panic!("script failed");
        }
    });
}

#[test]
fn detect_and_root_round_trip() {
    run(r#"
f = lac.Poly([(1, 0), (3, 7), (3, 14), (1, 21)])
d = lac.detect(f, seed=11)
assert d and d.r == 3 and d.seed == 11 and d.candidates == [3]
assert '"trace"' in d.report_json
h = lac.root(f, 3)
assert h.terms() == [(1, 0), (1, 7)]
assert h ** 3 == f and lac.verify(f, h, 3)
assert repr(h) == "Poly(ring='Z', vars=1, sparsity=2, degree=7)"
"#);
}

#[test]
fn errors_map_to_exceptions() {
    run(r#"
g = lac.Poly([(1, 0), (1, 2)])
try:
    lac.root(g, 2)
    raise SystemExit("expected NotAPowerError")
except lac.NotAPowerError:
    pass
assert issubclass(lac.NotAPowerError, ValueError)
for bad in (lambda: lac.Poly.parse("0 1\n"), lambda: lac.detect(g, epsilon="2"),
            lambda: lac.Poly([(1, (0, 1)), (1, 2)])):
    try:
        bad()
        raise SystemExit("expected ValueError")
    except ValueError:
        pass
"#);
}

#[test]
fn fields_and_generation() {
    run(r#"
h, f = lac.generate(4, 40, 2, ring="GF 101", seed=3)
assert h.ring == "GF 101" and f.sparsity >= 2
assert lac.generate(4, 40, 2, ring="GF 101", seed=3)[1] == f
assert lac.detect(f, seed=1).r == 2
assert lac.verify(f, lac.root(f, 2, seed=1), 2)
p = lac.Poly([(100, 0), (5, 3)], ring="GF 101")
assert p.terms() == [(100, 0), (5, 3)]
assert (p * p).terms()[0] == (1, 0)
e = lac.Poly.parse("ring GF 7^2 3 6 1\n1,0 0\n2,0 1\n1,0 2\n")
assert e.terms()[1] == ([2, 0], 1)
assert lac.detect(e, seed=4).r == 2
"#);
}
