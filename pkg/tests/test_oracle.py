import math

import numpy as np
import pytest

from rgraeffe import Poly
from rgraeffe.oracle import _backward_residual, find_roots, sorted_log_moduli
from rgraeffe.randpoly import gen_kostlan


def test_quadratic():
    r = find_roots(Poly([6, -5, 1]))
    assert r.converged
    np.testing.assert_allclose(np.sort(r.roots.real), [2, 3], atol=1e-10)
    np.testing.assert_allclose(r.roots.imag, 0, atol=1e-10)


def test_roots_of_unity():
    r = find_roots(Poly([-1, 0, 0, 0, 1]))
    assert r.converged
    np.testing.assert_allclose(np.abs(r.roots), 1, atol=1e-12)
    np.testing.assert_allclose(np.sort_complex(r.roots**4), 1, atol=1e-11)


def test_wilkinson_ten():
    r = find_roots(Poly.from_roots(range(1, 11)))
    assert r.converged
    np.testing.assert_allclose(np.sort(r.roots.real), np.arange(1, 11), atol=1e-6)


def test_wilkinson_twenty_backward_stable():
    # forward accuracy is poor by conditioning, but the roots are backward stable
    r = find_roots(Poly.from_roots(range(1, 21)))
    assert r.converged and r.residual < 1e-12


def test_zero_roots_split_off():
    r = find_roots(Poly([0, 0, 5, 1]))
    assert np.sum(r.roots == 0) == 2
    assert np.min(np.abs(r.roots[r.roots != 0] + 5)) < 1e-12


def test_linear():
    r = find_roots(Poly([3 - 1j, 2]))
    assert r.roots[0] == pytest.approx(-(3 - 1j) / 2)


def test_sorted_log_moduli_examples():
    np.testing.assert_allclose(sorted_log_moduli(np.array([2, 3])), [math.log(3), math.log(2)])
    r = find_roots(Poly([2, 2, 1]))
    np.testing.assert_allclose(sorted_log_moduli(r), [0.5 * math.log(2)] * 2, atol=1e-14)
    lm = sorted_log_moduli(np.array([0, 5]))
    assert lm[0] == pytest.approx(math.log(5)) and lm[1] == -math.inf


def test_permutation_stability():
    r = find_roots(gen_kostlan(20, 1))
    perm = np.random.default_rng(0).permutation(20)
    np.testing.assert_array_equal(sorted_log_moduli(r.roots), sorted_log_moduli(r.roots[perm]))


def test_deterministic():
    f = gen_kostlan(40, 2)
    assert find_roots(f).roots.tobytes() == find_roots(f).roots.tobytes()


@pytest.mark.parametrize("d,kind", [(30, "real"), (100, "complex"), (128, "real")])
def test_residual_certificate(d, kind):
    for s in range(3):
        f = gen_kostlan(d, s, kind)
        r = find_roots(f)
        assert r.converged
        c = f.coeffs / f.coeffs[-1]
        assert _backward_residual(c, r.roots) == pytest.approx(r.residual)
        assert r.residual < 1e-11


def test_agrees_with_companion_eigenvalues():
    for s in range(5):
        f = gen_kostlan(50, 700 + s, "real")
        ref = np.sort(np.log(np.abs(np.roots(f.coeffs[::-1]))))[::-1]
        assert np.max(np.abs(sorted_log_moduli(find_roots(f)) - ref)) < 1e-9


def test_exact_root_is_kept():
    # once an approximation hits a root exactly, p(z) = 0 must not push it away
    f = Poly.from_roots([4.0, -1.0, 0.5, 2.0])
    r = find_roots(f)
    assert np.min(np.abs(r.roots - 4.0)) < 1e-14
