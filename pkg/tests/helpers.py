"""Shared generators and independent reference computations for the tests."""
import numpy as np

from holocorr import BivarPoly, Chain, HolocorrError, validate
from holocorr.fibers import raw_fibers
from holocorr.sphere import multiset_distance, pairs_from_complex


def random_poly(rng, max_dx=3, max_dy=3):
    dx, dy = rng.integers(1, max_dx + 1), rng.integers(1, max_dy + 1)
    c = rng.standard_normal((dx + 1, dy + 1)) + 1j * rng.standard_normal((dx + 1, dy + 1))
    return BivarPoly(c)


def random_chain(rng, max_dx=3, max_dy=3, max_comps=2, max_mult=2):
    while True:
        comps = [(random_poly(rng, max_dx, max_dy), int(rng.integers(1, max_mult + 1)))
                 for _ in range(rng.integers(1, max_comps + 1))]
        try:
            return validate(Chain(tuple(comps)))
        except HolocorrError:
            continue


def random_points(rng, k, scale=1.0):
    z = scale * (rng.standard_normal(k) + 1j * rng.standard_normal(k))
    return pairs_from_complex(z)


def two_step_fibers(outer, inner, num, den):
    """``inner^dagger(outer^dagger(x))`` as raw root arrays, shape (K, d_outer * d_inner)."""
    an, ad = raw_fibers(outer, num, den)
    K = len(num)
    bn, bd = raw_fibers(inner, an.ravel(), ad.ravel())
    return bn.reshape(K, -1), bd.reshape(K, -1)


def worst_multiset_gap(n1, d1, n2, d2):
    return max(multiset_distance(n1[i], d1[i], n2[i], d2[i]) for i in range(len(n1)))


def brute_roots(coeffs):
    """Reference roots from numpy's companion-matrix solver (descending input)."""
    return np.roots(np.asarray(coeffs, dtype=complex)[::-1])
