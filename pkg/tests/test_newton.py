import math

import numpy as np
import pytest

from rgraeffe import ParameterError, Poly, build_diagram, choose_sigma, detect_clusters, iterate, psi
from rgraeffe.newton import LN4
from rgraeffe.oracle import find_roots, sorted_log_moduli
from rgraeffe.randpoly import gen_kostlan

LN = math.log


def converged(f, k_max=60):
    return iterate(f, tol=0.0, k_max=k_max).final


def test_build_diagram_examples():
    dg = build_diagram(psi(Poly([6, -5, 1])))
    np.testing.assert_allclose(dg.values, [-LN(6), -LN(5), 0.0])
    assert dg.slopes.size == 2
    dg = build_diagram(psi(Poly([0, 0, 0, 1])))
    assert list(dg.values) == [math.inf, math.inf, math.inf, 0.0]


def test_limit_slopes_quadratic():
    # slope over [i, i+1] is ln|zeta_{d-i}|: smallest modulus first
    dg = build_diagram(converged(Poly([6, -5, 1])))
    np.testing.assert_allclose(dg.slopes, [LN(2), LN(3)], atol=1e-12)


def test_choose_sigma():
    assert choose_sigma(30) == 1e-6
    assert choose_sigma(5, prior=0.05) == 0.05
    assert choose_sigma(4) == pytest.approx(8 * LN4 / 16)
    assert choose_sigma(4) == pytest.approx(0.693, abs=1e-3)


def test_sigma_precondition():
    dg = build_diagram(psi(Poly([6, -5, 1]), k=3))
    with pytest.raises(ParameterError):
        detect_clusters(dg, LN4 / 8)


def test_quadratic_complex_pair_is_one_cluster():
    f = Poly([2, 2, 1])
    # the criterion at k = 0: ln(f_1^2 / (f_0 f_2)) = ln 2 < ln 4
    assert LN(2**2 / (2 * 1)) < LN4
    rep = iterate(f).clusters
    (c,) = rep.clusters
    assert c.size == 2
    assert c.ln_modulus == pytest.approx(0.5 * LN(2), abs=1e-12)
    assert c.modulus == pytest.approx(math.sqrt(2), abs=1e-12)


def test_distinct_moduli_split():
    dg = build_diagram(converged(Poly([6, -5, 1])))
    rep = detect_clusters(dg, 0.1)
    assert rep.sizes == [1, 1]
    np.testing.assert_allclose(rep.log_moduli(), [LN(3), LN(2)], atol=1e-12)
    assert LN(3) - LN(2) >= 0.1


def test_triple_modulus_cluster():
    # x^3 - 8 has three roots of modulus 2; extra roots at 0.5 and -10
    f = Poly(np.polymul(np.polymul([1, 0, 0, -8], [1, -0.5]), [1, 10])[::-1])
    res = iterate(f)
    sizes = res.clusters.sizes
    assert sizes == [1, 3, 1]
    c = res.clusters.clusters[1]
    assert c.ln_modulus == pytest.approx(LN(2), abs=1e-10)
    # telescoping cube-root formula over the cluster's coefficient span
    m = res.final.mags
    assert c.ln_modulus == pytest.approx((m[c.lo] - m[c.hi]) / 3, abs=1e-15)


def test_cluster_formula_is_mean_slope():
    f = Poly(np.polymul([1, 1, 4], [1, -7, 1])[::-1])  # pair |z|=2 plus two reals
    final = converged(f)
    rep = detect_clusters(build_diagram(final), 1e-6)
    for c in rep.clusters:
        assert c.ln_modulus == pytest.approx((final.mags[c.lo] - final.mags[c.hi]) / c.size)


def test_conjugate_pair_with_far_factors():
    b, c = 0.6, 2.9
    f = Poly(np.polymul(np.polymul([1, b, c], [1, -40]), [1, 0.01])[::-1])
    res = iterate(f)
    pair = [cl for cl in res.clusters.clusters if cl.size == 2]
    assert len(pair) == 1
    assert pair[0].ln_modulus == pytest.approx(0.5 * LN(c), abs=1e-6)


def test_partition_and_singletons_reproduce_moduli():
    f = gen_kostlan(25, 4)
    res = iterate(f)
    assert sum(res.clusters.sizes) == 25
    assert res.clusters.sizes == [1] * 25
    np.testing.assert_array_equal(np.sort(res.clusters.log_moduli())[::-1], res.log_moduli)
    bounds = res.clusters.partition()
    assert len(bounds) == 25


def test_converged_diagram_is_convex():
    for s in range(4):
        f = gen_kostlan(20, 30 + s)
        dg = build_diagram(iterate(f).final)
        assert np.all(np.diff(dg.slopes) >= -1e-8)


def test_split_merge_dichotomy():
    # two moduli apart by e^sigma split, equal moduli merge once 2^-k ln 4 < sigma
    sigma = 1e-3
    f_split = Poly.from_roots([1.0, -math.exp(2 * sigma), 5.0])
    f_merge = Poly.from_roots([1.0, -1.0, 5.0])
    k = 20
    assert math.ldexp(LN4, -k) < sigma
    for f, want in ((f_split, [1, 1, 1]), (f_merge, [1, 2])):
        rep = detect_clusters(build_diagram(converged(f, k)), sigma)
        assert rep.sizes == want


def test_zero_roots_terminal_cluster():
    res = iterate(Poly.from_roots([0, 0, 3]))
    last = res.clusters.clusters[-1]
    assert last.size == 2 and last.ln_modulus == -math.inf and last.modulus == 0.0
    assert res.clusters.clusters[0].ln_modulus == pytest.approx(LN(3))


def test_real_pairs_match_oracle():
    f = gen_kostlan(30, 3, "real")
    res = iterate(f)
    ref = sorted_log_moduli(find_roots(f))
    assert np.max(np.abs(res.log_moduli - ref)) <= 1e-8
    assert 2 in res.clusters.sizes


def test_equal_modulus_conditioning_needs_wider_sigma():
    # four roots of modulus 1: rounding spreads the converged slopes by about eps^(1/4)
    f = Poly([-1, 0, 0, 0, 1])
    assert iterate(f, sigma=1e-3).clusters.sizes == [4]
