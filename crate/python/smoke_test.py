"""Smoke test for the Python bindings.

Builds the extension with cargo unless LACUNARY_LIB points at an already
built library, then exercises the public API.
"""

import importlib.util
import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    lib = os.environ.get("LACUNARY_LIB")
    if lib is None:
        subprocess.run(
            ["cargo", "build", "--release", "-p", "lacunary-python"],
            cwd=ROOT,
            check=True,
        )
        lib = ROOT / "target" / "release" / "liblacunary_py.so"
    staged = Path(tempfile.mkdtemp()) / "lacunary.so"
    shutil.copy(lib, staged)
    spec = importlib.util.spec_from_file_location("lacunary", staged)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    lac = load_module()

    f = lac.Poly([(1, 0), (2, 2**40), (1, 2**41)])
    assert f.sparsity == 3 and f.degree == 2**41
    det = lac.detect(f, seed=7)
    assert det and det.r == 2 and det.seed == 7, det
    h = lac.root(f, 2)
    assert h.terms() == [(1, 0), (1, 2**40)]
    assert lac.verify(f, h, 2)
    assert h**2 == f

    g = lac.Poly([(1, 0), (1, 2)])
    assert not lac.detect(g, seed=1)
    try:
        lac.root(g, 2)
    except lac.NotAPowerError:
        pass
    else:
        raise AssertionError("x^2 + 1 has no square root")

    h, f = lac.generate(6, 10**5, 3, ring="GF 1000003", seed=5)
    assert f.ring == "GF 1000003"
    assert lac.detect(f, seed=2).r == 3
    assert lac.verify(f, lac.root(f, 3, seed=2), 3)

    q = lac.Poly.parse("1/4 0\n1 1\n1 2\n")
    assert q.scale == 4
    assert str(lac.root(q, 2)) == "lacunary 1\nring Z\nvars 1\nscale 2\n1 0\n2 1\n"

    m = lac.Poly([(1, (0, 0)), (2, (1, 1)), (1, (2, 2))])
    assert m.vars == 2 and lac.detect(m, seed=3).r == 2
    assert lac.root(m, 2).terms() == [(1, (0, 0)), (1, (1, 1))]

    print("python smoke test: ok")


if __name__ == "__main__":
    sys.exit(main())
