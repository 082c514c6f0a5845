import math

import numpy as np
import pytest
from scipy import stats

from rgraeffe import DegenerateInputError, ParameterError, Poly, psi
from rgraeffe.randpoly import (
    GENERATOR_ID,
    cnt_constructive_check,
    gen_kostlan,
    gen_kostlan_ren,
    kostlan_batch,
    lemma6_tail_estimate,
    log_binomials,
    min_modulus_ratio,
    separation,
    weyl_distance_proj,
    weyl_inner,
    weyl_norm,
)


def test_generator_recorded():
    assert "PCG64" in GENERATOR_ID


@pytest.mark.parametrize("kind", ["real", "complex"])
def test_determinism(kind):
    a, b = gen_kostlan(12, 5, kind), gen_kostlan(12, 5, kind)
    assert a.coeffs.tobytes() == b.coeffs.tobytes()
    r1, r2 = gen_kostlan_ren(12, 5, kind), gen_kostlan_ren(12, 5, kind)
    assert r1.mags.tobytes() == r2.mags.tobytes() and r1.args.tobytes() == r2.args.tobytes()
    assert gen_kostlan(12, 6, kind).coeffs.tobytes() != a.coeffs.tobytes()


def test_real_kind_is_real():
    assert gen_kostlan(9, 1, "real").is_real
    assert not gen_kostlan(9, 1, "complex").is_real
    r = gen_kostlan_ren(9, 1, "real")
    assert set(np.unique(r.args)) <= {0.0, math.pi}


def test_bad_arguments():
    with pytest.raises(ParameterError):
        gen_kostlan(0, 1)
    with pytest.raises(ParameterError):
        gen_kostlan(3, 1, "quaternion")


@pytest.mark.parametrize("kind", ["real", "complex"])
def test_ren_matches_plain(kind):
    for d in (5, 64, 256):
        f = gen_kostlan(d, 3, kind)
        g = gen_kostlan_ren(d, 3, kind)
        ref = psi(f)
        np.testing.assert_allclose(g.mags, ref.mags, rtol=0, atol=1e-10)
        np.testing.assert_allclose(np.cos(g.args - ref.args), 1.0, atol=1e-12)


def test_ren_high_degree_finite():
    g = gen_kostlan_ren(5000, 0)
    assert np.all(np.isfinite(g.mags))
    with pytest.raises(OverflowError):
        gen_kostlan(5000, 0)


def test_log_binomials():
    np.testing.assert_allclose(np.exp(log_binomials(6)), [1, 6, 15, 20, 15, 6, 1])


def test_variances_proportional_to_binomials():
    n, d = 100_000, 2
    batch = kostlan_batch(d, n, seed=1, kind="complex")
    # |f_i|^2 / C(d,i) is Exp(1) for complex Gaussians; compare its mean to 1 within 5%
    v = np.mean(np.abs(batch) ** 2, axis=0) / np.exp(log_binomials(d))
    np.testing.assert_allclose(v, 1.0, rtol=0.05)


@pytest.mark.parametrize("d", [2, 5, 8])
def test_chi_square_on_variances(d):
    n = 100_000
    batch = kostlan_batch(d, n, seed=d, kind="real")
    binom = np.exp(log_binomials(d))
    for i in range(d + 1):
        x = batch[:, i] / math.sqrt(binom[i])
        # (n - 1) s^2 ~ chi^2_{n-1} when the variance is 1; two-sided 1% test
        q = (n - 1) * np.var(x, ddof=1)
        p = 2 * min(stats.chi2.cdf(q, n - 1), stats.chi2.sf(q, n - 1))
        assert p > 0.01


def test_expected_weyl_norm_squared():
    d, n = 7, 20_000
    batch = kostlan_batch(d, n, seed=3)
    sq = np.array([weyl_norm(c) ** 2 for c in batch])
    assert sq.mean() == pytest.approx(d + 1, rel=0.05)


def test_batch_matches_single_stream_shape():
    b = kostlan_batch(4, 3, seed=0, kind="real")
    assert b.shape == (3, 5)


def test_projective_distance():
    f = gen_kostlan(6, 1).coeffs
    g = gen_kostlan(6, 2).coeffs
    assert weyl_distance_proj(f, f) == pytest.approx(0.0, abs=1e-7)
    assert weyl_distance_proj(f, 2 * f) == pytest.approx(0.0, abs=1e-7)
    assert weyl_distance_proj(f, g) == pytest.approx(weyl_distance_proj(g, f), abs=1e-12)
    xa = np.array([0, 0, 1, 0, 0], dtype=complex)
    xb = np.array([0, 0, 0, 0, 1], dtype=complex)
    assert weyl_inner(xa, xb) == 0
    assert weyl_distance_proj(xa, xb) == pytest.approx(1.0)
    with pytest.raises(DegenerateInputError):
        weyl_distance_proj(np.zeros(3), f[:3])


def test_projective_distance_bounds():
    rng = np.random.default_rng(0)
    for _ in range(200):
        f = rng.normal(size=6) + 1j * rng.normal(size=6)
        g = rng.normal(size=6) + 1j * rng.normal(size=6)
        assert 0.0 <= weyl_distance_proj(f, g) <= 1.0


def test_separation_examples():
    s = separation([2, 3])
    assert s.rho == pytest.approx(1 / 3) and not s.equal_moduli
    s = separation([1, 1])
    assert s.rho == 0 and s.equal_moduli
    s = separation([1, 2, 4])
    assert s.rho == pytest.approx(0.5)
    s = separation([1j, -1, 2])
    assert s.rho == pytest.approx(0.5)
    assert s.rel_sep == pytest.approx(1 / math.sqrt(2))
    with pytest.raises(ParameterError):
        separation([1])


def test_cnt_quadratic_example():
    f = Poly.from_roots([2, 3])
    chk = cnt_constructive_check(f, [2, 3])
    assert chk.rho == pytest.approx(1 / 3)
    # h = (x - 2)^2 = x^2 - 4x + 4; f - h = x + 2
    num = math.sqrt((2**2) / 1 + 1**2 / 2)
    den = math.sqrt(6**2 + 5**2 / 2 + 1)
    assert chk.lhs == pytest.approx(num / den, rel=1e-12)
    assert chk.rhs == pytest.approx(math.sqrt(2) / 3)
    assert chk.ok


def test_cnt_scale_invariant():
    f = gen_kostlan(10, 4)
    from rgraeffe.oracle import find_roots

    roots = find_roots(f).roots
    a = cnt_constructive_check(f, roots)
    b = cnt_constructive_check(Poly((3 - 1j) * f.coeffs), roots)
    assert a.ok == b.ok
    assert a.lhs == pytest.approx(b.lhs, rel=1e-10)


def test_cnt_root_count_checked():
    with pytest.raises(ParameterError):
        cnt_constructive_check(Poly.from_roots([1, 2, 3]), [1, 2])


def test_min_modulus_ratio():
    assert min_modulus_ratio([1, 2, 4.5]) == pytest.approx(2)
    assert min_modulus_ratio([1, -1]) == math.inf


def test_tail_estimate_monotone_and_zero():
    tab = lemma6_tail_estimate(6, 400, [0.0, 1e-3, 1e-2, 1e-1], seed=1)
    assert tab.prob_above[0] == 1.0
    assert np.all(np.diff(tab.prob_above) <= 0)
    assert tab.samples == 400 and tab.min_ratios.size == 400


def test_tail_estimate_accepts_root_finder():
    tab = lemma6_tail_estimate(5, 200, [1e-2, 1e-1], seed=2, root_finder=lambda c: np.roots(c[::-1]))
    ref = lemma6_tail_estimate(5, 200, [1e-2, 1e-1], seed=2)
    np.testing.assert_allclose(tab.min_ratios, ref.min_ratios, rtol=1e-8)
