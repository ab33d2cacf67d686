import numpy as np
import pytest

from tensorratio.rootfind import real_roots


def test_simple_roots():
    # (x-1)(x-2)(x-3)
    roots = real_roots([1.0, -6.0, 11.0, -6.0])
    assert np.allclose(roots, [1.0, 2.0, 3.0], atol=1e-12)


def test_zero_factor_and_multiplicity():
    # x^5 (x^2 - 2): the quintuple zero must survive the eigenvalue splitting
    coeffs = np.array([1.0, 0.0, -2.0, 0, 0, 0, 0, 0])
    roots = real_roots(coeffs)
    assert np.allclose(roots, [-np.sqrt(2), 0.0, np.sqrt(2)], atol=1e-12)


def test_double_root_reported_once():
    # (x-1)^2 (x+3)
    roots = real_roots(np.convolve([1.0, -2.0, 1.0], [1.0, 3.0]))
    assert len(roots) == 2
    assert np.allclose(roots, [-3.0, 1.0], atol=1e-6)


def test_complex_pair_excluded():
    # (x^2 + 1)(x - 4)
    roots = real_roots(np.convolve([1.0, 0.0, 1.0], [1.0, -4.0]))
    assert np.allclose(roots, [4.0], atol=1e-12)


def test_constant_and_zero():
    assert real_roots([3.0]) == []
    with pytest.raises(ValueError):
        real_roots([0.0, 0.0])


def test_scaling_invariance(rng):
    coeffs = rng.standard_normal(7)
    r1 = real_roots(coeffs)
    r2 = real_roots(1e8 * coeffs)
    assert np.allclose(r1, r2, atol=1e-10)
