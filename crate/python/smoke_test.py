"""Smoke test for the resolvent_quad Python module.

Build the extension first:

    cargo build -p resolvent-quad-py --release --features extension-module

then run this script. It loads target/release/libresolvent_quad_py.so (or the
path in RESOLVENT_QUAD_LIB) under the module name resolvent_quad.
"""

import importlib.util
import os
import pathlib
import shutil
import sys
import tempfile

import numpy as np

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    lib = pathlib.Path(os.environ.get("RESOLVENT_QUAD_LIB", ROOT / "target" / "release" / "libresolvent_quad_py.so"))
    if not lib.exists():
        sys.exit(f"extension not found at {lib}; build it first")
    tmp = pathlib.Path(tempfile.mkdtemp())
    target = tmp / "resolvent_quad.so"
    shutil.copy(lib, target)
    spec = importlib.util.spec_from_file_location("resolvent_quad", target)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def reference(a, v, z):
    n = a.shape[0]
    return np.vdot(v, np.linalg.solve(z * np.eye(n) - a, v))


def main():
    rq = load()
    print("resolvent_quad", rq.__version__)

    a = rq.SparseHermitianMatrix.from_dense([[1.0, 0.0], [0.0, 2.0]])
    s = 2 ** -0.5
    res = rq.lanczos(a, [s, s], [3.0])
    assert abs(res.values[0] - 0.75) < 1e-13, res.values
    print(res)

    rng = np.random.default_rng(5)
    n = 60
    b = rng.standard_normal((n, n))
    dense = (b + b.T) / (2 * np.sqrt(n))
    rows, cols = np.nonzero(dense)
    m = rq.SparseHermitianMatrix.from_triplets(n, rows.tolist(), cols.tolist(), dense[rows, cols].astype(complex).tolist())
    assert m.is_real_symmetric()
    v = (rng.standard_normal(n) + 1j * rng.standard_normal(n)).tolist()
    shifts = rq.unit_circle_shifts(8)
    exact = np.array([reference(dense, np.array(v), z) for z in shifts])

    # COCG/COCR stop every shift once the seed converges, so seed with the
    # hardest shift, the one closest to the spectrum.
    hardest = min(range(len(shifts)), key=lambda i: abs(shifts[i].imag))
    for name in ["lanczos", "minres", "cocg", "cocr"]:
        kw = {"seed": hardest} if name.startswith("coc") else {}
        r = getattr(rq, name)(m, v, shifts, history=True, **kw)
        err = np.max(np.abs(np.array(r.values) - exact) / np.abs(exact))
        assert r.all_converged(), (name, r.statuses)
        assert err < 1e-8, (name, err)
        assert len(r.history(0)) == r.shift_iterations[0]
        print(f"{name:8s} iterations={r.iterations:4d} max rel err={err:.2e}")

    z = shifts[0]
    assert abs(rq.dense_quadform(m, v, z) - exact[0]) < 1e-10 * abs(exact[0])

    complex_h = rq.SparseHermitianMatrix.from_dense([[1.0, 1j], [-1j, 0.0]])
    try:
        rq.cocg(complex_h, [1.0, 0.0], [1j])
    except ValueError as e:
        print("cocg on complex Hermitian rejected:", e)
    else:
        raise AssertionError("cocg accepted a complex Hermitian matrix")
    print("ok")


if __name__ == "__main__":
    main()
