"""Smoke test for the pybidisk extension module.

Build and install first:
    pip install maturin
    pip install --no-build-isolation ./crates/python
"""

import json
import math

import pybidisk as bd


def max_abs_diff(a, b):
    return max(abs(x - y) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def main():
    # f = z1 z2 + 2 z2^2
    f = bd.BiPolynomial([[0, 0, 0], [0, 1, 0]])
    f = f + bd.BiPolynomial([[0, 0, 2]])
    assert f.degrees == (1, 2)
    assert abs(f.evaluate(1j, -1) - (-1j + 2)) < 1e-14
    assert f.shift(1).coeffs() == [[0, 1, 0]]
    lo, hi = f.sup_norm()
    assert lo <= 3 + 1e-12 <= hi + 1e-12

    g1 = bd.gen_pair("poly", 4, 7)
    g2 = g1.perturb(0.1, 11)
    p1, p2 = g1.pair, g2.pair
    assert p1.dim == 4 and g1.kind == "poly"
    assert p1.distance(p2) <= 2 * 0.1 + 1e-12

    direct = bd.difference_direct(f, p1, p2)
    rhs = bd.identity_rhs(f, p1, p2)
    assert max_abs_diff(direct, rhs) < 1e-10
    assert bd.von_neumann_gap(f, p1) <= 1e-8

    m = [[3, 0], [0, 4j]]
    assert bd.singular_values(m) == [4.0, 3.0]
    assert abs(bd.schatten_norm(m, 2) - 5) < 1e-12
    assert abs(bd.schatten_norm(m, math.inf) - 4) < 1e-12

    assert abs(bd.omega_star(0.5, 0.25) - bd.omega_star(0.5, 0.25, quadrature=True)) < 1e-8
    h = bd.holder_norm({(1, 0): 1.0, (0, 3): 0.5j}, 0.5)
    assert h > 0 and math.isfinite(h)

    try:
        bd.ContractionPair([[2]], [[0]])
    except bd.BidiskError:
        pass
    else:
        raise AssertionError("non-contraction accepted")

    report = json.loads(bd.run_suite("identity", trials=20))
    assert report["pass"], report
    names = bd.list_suites()
    assert "identity" in names and "commutator" in names

    print("pybidisk smoke test OK:", len(names), "suites")


if __name__ == "__main__":
    main()
