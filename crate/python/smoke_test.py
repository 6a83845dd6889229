#!/usr/bin/env python3
"""Smoke test for the wstarcat_py extension module.

Builds nothing itself: run `cargo build --release -p wstarcat-py` first.
The script locates the cdylib, exposes it under the importable name, and
exercises the main operations end to end.
"""

import os
import shutil
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load_module():
    candidates = [
        os.path.join(ROOT, "target", "release", "libwstarcat_py.so"),
        os.path.join(ROOT, "target", "debug", "libwstarcat_py.so"),
    ]
    lib = next((p for p in candidates if os.path.exists(p)), None)
    if lib is None:
        sys.exit("build the extension first: cargo build --release -p wstarcat-py")
    d = tempfile.mkdtemp(prefix="wstarcat_py_")
    shutil.copy(lib, os.path.join(d, "wstarcat_py.so"))
    sys.path.insert(0, d)
    import wstarcat_py

    return wstarcat_py


def main():
    w = load_module()
    checks = 0

    def check(cond, label):
        nonlocal checks
        if not cond:
            sys.exit(f"FAIL: {label}")
        checks += 1

    # Algebras and modules.
    a = w.Algebra([2, 3])
    check(a.dim == 13, "algebra dimension")
    m1 = w.Module(a, [1, 2])
    m2 = w.Module(a, [2, 1])
    check(m1.dim == 8 and m1.support() == [0, 1], "module basics")

    # Inner product, both routes.
    dim, r1, r2 = w.inner_product(m1, m2)
    check(dim == 4 and r1 < 1e-9 and r2 < 1e-9, "inner product double computation")

    # Fusion: fast contraction vs the definitional oracle.
    b = w.Algebra([2])
    c = w.Algebra([1])
    x = w.Bimodule(b, a, [[1, 1]])
    y = w.Bimodule(a, c, [[1], [2]])
    fused = w.fuse(x, y)
    check(fused.mult == [[3]], "fusion contraction")
    d, residual, unitary = w.fuse_oracle(x, y)
    check(d == fused.dim and unitary and residual < 1e-8, "fusion oracle")

    # L2 is the fusion unit.
    l2 = w.Bimodule.l2(a)
    check(w.fuse(l2, y) == y and w.fuse(x, w.Bimodule.l2(a)) == x, "fusion unit")

    # Conjugation is involutive.
    check(x.conjugate().conjugate() == x, "conjugate involutive")

    # Cones: the identity is in both; the transpose map on M_2 is
    # positive but not completely positive.
    scalars = w.Algebra([1])
    x2 = w.Bimodule(scalars, scalars, [[2]])
    cxx = w.fuse(x2.conjugate(), x2)
    ident = cxx.identity_map()
    check(w.vertical_cone_member(ident), "vertical cone identity")
    member, _ = w.horizontal_cone_member(ident, x2, x2)
    check(member, "horizontal cone identity")
    t = [[[[0j] * 4 for _ in range(4)]]]
    for k1 in range(2):
        for k2 in range(2):
            t[0][0][k2 * 2 + k1][k1 * 2 + k2] = 1 + 0j
    theta_t = w.BimoduleMap(cxx, cxx, t)
    check(not w.vertical_cone_member(theta_t), "transpose in neither cone")
    member, min_eig = w.horizontal_cone_member(theta_t, x2, x2)
    check(not member and min_eig < -0.5, "transpose rejected by Choi")

    # Audits: coherences, bi-involutivity, dictionary round trip.
    z = w.Bimodule(c, b, [[1]])
    for name, residual, ok in w.coherence_audit(z, x, seed=7):
        check(ok, f"coherence {name} (residual {residual})")
    xa = w.Bimodule(b, a, [[1, 0]])
    ya = w.Bimodule(c, b, [[2]])
    za = w.Bimodule(w.Algebra([2]), c, [[1]])
    for name, residual, ok in w.biinvolutive_audit(xa, ya, za):
        check(ok, f"bi-involutive {name} (residual {residual})")
    for name, residual, ok in w.vn2_audit(a, b, c, seed=3):
        check(ok, f"dictionary {name} (residual {residual})")

    # Gram-Schmidt.
    mults, remainder = w.gram_schmidt([m1, w.Module(a, [0, 1])])
    check(mults[0] == [1, 2] and mults[1] == [0, 0] and remainder == [], "gram-schmidt")

    # The CLI through the bindings.
    code, out = w.run_cli(["fuse", os.path.join(ROOT, "crates/wstarcat/tests/corpus/x.json"),
                           os.path.join(ROOT, "crates/wstarcat/tests/corpus/y.json")])
    check(code == 0 and '"mult":[[2],[4]]' in out, "cli fuse")
    code, _ = w.run_cli(["fuse", "missing.json", "missing.json"])
    check(code == 2, "cli input error")

    print(f"smoke test passed ({checks} checks)")


if __name__ == "__main__":
    main()
