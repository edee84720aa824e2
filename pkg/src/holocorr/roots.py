"""Univariate complex root finding.

``batch_roots`` solves many polynomials of one declared degree at once with a
vectorized Aberth-Ehrlich iteration (quadratics optionally by closed form);
rows that stall fall back to companion matrix eigenvalues. Degree drops are padded with the point at infinity, so
every row always yields exactly ``declared_degree`` sphere points.
"""
from __future__ import annotations

import cmath

import numpy as np

from .errors import NonConvergence
from .sphere import Fiber, abs2, fiber_from_pairs

DROP_TOL = 1e-13
CLUSTER_TOL = 1e-6
STEP_TOL = 1e-14
MAX_ITER = 100


def _horner(c, z):
    """p(z), p'(z) for ascending coefficient rows ``c`` (K, D+1), points (K, D)."""
    D = c.shape[1] - 1
    p = np.repeat(c[:, D:D + 1], z.shape[1], axis=1)
    dp = np.zeros_like(p)
    for k in range(D - 1, -1, -1):
        dp = dp * z + p
        p = p * z + c[:, k:k + 1]
    return p, dp


def _companion_roots(c):
    """Eigenvalues of the companion matrices of monic ascending rows."""
    K, D1 = c.shape
    D = D1 - 1
    comp = np.zeros((K, D, D), dtype=complex)
    if D > 1:
        idx = np.arange(D - 1)
        comp[:, idx + 1, idx] = 1.0
    comp[:, :, D - 1] = -c[:, :D]
    ev = np.linalg.eigvals(comp)
    if not np.all(np.isfinite(ev)):
        raise NonConvergence("companion eigenvalues are not finite")
    return ev


def _aberth(c, max_iter=MAX_ITER):
    """Simultaneous iteration on monic rows ``c`` (K, D+1) with D >= 1."""
    K, D1 = c.shape
    D = D1 - 1
    if D == 1:
        return -c[:, :1].copy()
    # Cauchy bound; start on that circle, rotated off the real axis
    R = 1.0 + np.sqrt(abs2(c[:, :D])).max(axis=1)
    unit = np.array([cmath.exp(1j * (2 * np.pi * i / D + 0.4)) for i in range(D)])
    z = R[:, None] * unit[None, :]
    eye = np.eye(D, dtype=bool)

    active = np.arange(K)
    za = z
    ca = c
    for _ in range(max_iter):
        p, dp = _horner(ca, za)
        diff = za[:, :, None] - za[:, None, :]
        diff[:, eye] = np.inf
        s = (1.0 / diff).sum(axis=2)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            delta = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(delta)
        delta[bad] = 0.0
        za = za - delta
        done = np.all(abs2(delta) <= (STEP_TOL * STEP_TOL) * abs2(za), axis=1)
        z[active] = za
        if bad.any():
            # exact hit (p == 0) gives ratio 0; anything else non-finite is a stall
            stalled = np.any(bad & (p != 0), axis=1)
            done &= ~stalled
        keep = ~done
        if not keep.any():
            return z
        active = active[keep]
        za = za[keep]
        ca = ca[keep]
    # iteration cap: accept rows whose backward error is tiny, redo the rest
    p, _ = _horner(ca, za)
    bound = np.zeros(za.shape)
    mag = np.sqrt(abs2(za))
    for k in range(D, -1, -1):
        bound = bound * mag + np.sqrt(abs2(ca[:, k:k + 1]))
    ok = np.all(np.isfinite(za), axis=1) & np.all(np.sqrt(abs2(p)) <= 1e-11 * bound, axis=1)
    if not ok.all():
        z[active[~ok]] = _companion_roots(ca[~ok])
    return z


def _quadratic(c):
    """Both roots of monic quadratics by the cancellation-free formula."""
    b, q0 = c[:, 1], c[:, 0]
    disc = np.sqrt(b * b - 4.0 * q0)
    flip = (b.real * disc.real + b.imag * disc.imag) < 0
    disc[flip] = -disc[flip]
    q = -0.5 * (b + disc)
    return np.stack([q, q0 / q], axis=1)


def _to_pairs(w):
    big = abs2(w) > 1.0
    num = np.where(big, 1.0 + 0j, w)
    with np.errstate(divide="ignore", invalid="ignore"):
        den = np.where(big, 1.0 / w, 1.0 + 0j)
    return num, den


def _solve_row(a, D):
    """One polynomial with possible degree drop or exact zero roots."""
    mag = np.sqrt(abs2(a))
    top = mag.max()
    if top == 0:
        raise ValueError("zero polynomial has no finite fiber")
    actual = D
    while actual > 0 and mag[actual] <= DROP_TOL * top:
        actual -= 1
    low = 0
    while low < actual and a[low] == 0:
        low += 1
    core = a[low:actual + 1]
    num = np.empty(D, dtype=complex)
    den = np.empty(D, dtype=complex)
    num[:low] = 0.0
    den[:low] = 1.0
    if actual - low > 0:
        w = _aberth((core / core[-1])[None, :])[0]
        num[low:actual], den[low:actual] = _to_pairs(w)
    num[actual:] = 1.0
    den[actual:] = 0.0
    return num, den


def batch_roots(coeffs, declared_degree: int | None = None, closed_form: bool = True):
    """Roots of every row of ``coeffs`` (ascending powers) as sphere pairs.

    Returns ``(num, den)`` arrays of shape ``(K, D)``. Rows whose leading
    coefficient is negligible (relative ``DROP_TOL``) are padded with infinity.
    """
    A = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    K, D1 = A.shape
    D = D1 - 1 if declared_degree is None else declared_degree
    if D1 - 1 < D:
        A = np.concatenate([A, np.zeros((K, D - D1 + 1), dtype=complex)], axis=1)
    elif D1 - 1 > D:
        if np.any(A[:, D + 1:] != 0):
            raise ValueError("declared degree below actual degree")
        A = A[:, :D + 1]
    num = np.empty((K, D), dtype=complex)
    den = np.empty((K, D), dtype=complex)
    if D == 0 or K == 0:
        return num, den
    top = np.sqrt(abs2(A).max(axis=1))
    fast = (np.sqrt(abs2(A[:, D])) > DROP_TOL * top) & (A[:, 0] != 0)
    if fast.any():
        c = A[fast] / A[fast, D:D + 1]
        w = _quadratic(c) if (D == 2 and closed_form) else _aberth(c)
        num[fast], den[fast] = _to_pairs(w)
    for i in np.flatnonzero(~fast):
        num[i], den[i] = _solve_row(A[i], D)
    return num, den


def roots(coeffs, declared_degree: int | None = None, cluster_tol: float = CLUSTER_TOL) -> Fiber:
    """All roots of one polynomial, clustered, padded with infinity.

    ``coeffs[k]`` multiplies ``w**k``.

    >>> roots([-4, 0, 1]).degree
    2
    """
    a = np.asarray(coeffs, dtype=complex).ravel()
    if not np.all(np.isfinite(a)):
        raise ValueError("coefficients must be finite")
    if declared_degree is None:
        declared_degree = len(a) - 1
    num, den = batch_roots(a[None, :], declared_degree, closed_form=False)
    return fiber_from_pairs(num[0], den[0], np.ones(declared_degree, dtype=int), cluster_tol)
