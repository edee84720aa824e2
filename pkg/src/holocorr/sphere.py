"""Points of the Riemann sphere as normalized projective pairs, and fibers.

A point is stored as ``(num, den)`` with ``max(|num|, |den|) == 1``; ``den == 0``
is the point at infinity. Array helpers operate on parallel ``num``/``den``
arrays and avoid transcendental ufuncs so results do not depend on how a batch
is split.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.optimize import linear_sum_assignment


def abs2(z):
    return z.real * z.real + z.imag * z.imag


def normalize_pairs(num, den):
    """Rescale projective pairs so that ``max(|num|, |den|) == 1``."""
    num = np.asarray(num, dtype=complex)
    den = np.asarray(den, dtype=complex)
    scale = np.sqrt(np.maximum(abs2(num), abs2(den)))
    if np.any(scale == 0):
        raise ValueError("(0, 0) is not a point of the sphere")
    return num / scale, den / scale


def pairs_from_complex(z):
    """Complex array (``inf`` allowed) to normalized pairs."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    inf = ~np.isfinite(z)
    big = np.zeros(z.shape, dtype=bool)
    big[~inf] = abs2(z[~inf]) > 1.0
    num = np.where(big | inf, 1.0 + 0j, z)
    den = np.ones(z.shape, dtype=complex)
    den[big] = 1.0 / z[big]
    den[inf] = 0.0
    num[inf] = 1.0
    return num, den


def pairs_to_complex(num, den):
    """Normalized pairs to complex values; infinity becomes ``complex(inf, 0)``."""
    num = np.asarray(num, dtype=complex)
    den = np.asarray(den, dtype=complex)
    out = np.full(num.shape, complex(np.inf, 0.0))
    fin = den != 0
    out[fin] = num[fin] / den[fin]
    return out


def chordal_pairs(n1, d1, n2, d2):
    """Chordal distance ``2|z - w| / sqrt((1+|z|^2)(1+|w|^2))`` on pairs."""
    cross = np.sqrt(abs2(n1 * d2 - n2 * d1))
    norm = np.sqrt((abs2(n1) + abs2(d1)) * (abs2(n2) + abs2(d2)))
    return 2.0 * cross / norm


@dataclass(frozen=True)
class SpherePoint:
    num: complex
    den: complex = 1.0

    def __post_init__(self):
        n, d = complex(self.num), complex(self.den)
        s = max(abs(n), abs(d))
        if s == 0:
            raise ValueError("(0, 0) is not a point of the sphere")
        object.__setattr__(self, "num", n / s)
        object.__setattr__(self, "den", d / s)

    @classmethod
    def from_complex(cls, z) -> SpherePoint:
        z = complex(z)
        if not (np.isfinite(z.real) and np.isfinite(z.imag)):
            return cls.infinity()
        if abs(z) <= 1.0:
            return cls(z, 1.0)
        return cls(1.0, 1.0 / z)

    @classmethod
    def infinity(cls) -> SpherePoint:
        return cls(1.0, 0.0)

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    def to_complex(self) -> complex:
        if self.is_infinite:
            return complex(np.inf, 0.0)
        return self.num / self.den

    def chordal(self, other: SpherePoint) -> float:
        return float(chordal_pairs(self.num, self.den, other.num, other.den))

    def __repr__(self) -> str:
        if self.is_infinite:
            return "SpherePoint(inf)"
        return f"SpherePoint({self.to_complex():.12g})"


def as_point(x) -> SpherePoint:
    if isinstance(x, SpherePoint):
        return x
    return SpherePoint.from_complex(x)


@dataclass(frozen=True)
class Fiber:
    """A finite multiset of sphere points."""

    atoms: tuple[tuple[SpherePoint, int], ...]

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.atoms)

    def points(self) -> list[SpherePoint]:
        return [p for p, m in self.atoms for _ in range(m)]

    def pairs(self) -> tuple[np.ndarray, np.ndarray]:
        pts = self.points()
        num = np.array([p.num for p in pts], dtype=complex)
        den = np.array([p.den for p in pts], dtype=complex)
        return num, den

    def to_complex(self) -> np.ndarray:
        return pairs_to_complex(*self.pairs())

    def multiplicity_of(self, z, tol: float = 1e-8) -> int:
        p = as_point(z)
        return sum(m for q, m in self.atoms if q.chordal(p) <= tol)

    def distance(self, other: Fiber) -> float:
        """Bottleneck chordal distance between two multisets of equal size."""
        return multiset_distance(*self.pairs(), *other.pairs())

    def __len__(self) -> int:
        return len(self.atoms)


def multiset_distance(n1, d1, n2, d2) -> float:
    """Largest chordal distance in an optimal matching of two point multisets."""
    if len(n1) != len(n2):
        return float("inf")
    if len(n1) == 0:
        return 0.0
    cost = chordal_pairs(n1[:, None], d1[:, None], n2[None, :], d2[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def cluster_labels(num: np.ndarray, den: np.ndarray, tol: float) -> np.ndarray:
    """Single-linkage clustering of a small point set.

    Two finite points are linked when ``|zi - zj| <= tol * max(1, |zi|, |zj|)``;
    when one of them is infinite the test is done in the reciprocal chart.
    Returns, for each point, the index of the lowest-numbered member of its
    cluster.
    """
    k = len(num)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    z = pairs_to_complex(num, den)
    for i in range(k):
        for j in range(i + 1, k):
            if _close(z[i], z[j], num[i], den[i], num[j], den[j], tol):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    return np.array([find(i) for i in range(k)], dtype=int)


def _close(zi, zj, ni, di, nj, dj, tol) -> bool:
    if np.isfinite(zi) and np.isfinite(zj):
        return abs(zi - zj) <= tol * max(1.0, abs(zi), abs(zj))
    # at least one is infinite: compare in the reciprocal chart
    ui = di / ni if ni != 0 else np.inf
    uj = dj / nj if nj != 0 else np.inf
    return abs(ui - uj) <= tol


def fiber_from_pairs(num: np.ndarray, den: np.ndarray, mults: Iterable[int], tol: float) -> Fiber:
    mults = np.asarray(list(mults), dtype=int)
    labels = cluster_labels(num, den, tol)
    atoms = []
    for rep in np.unique(labels):
        members = labels == rep
        atoms.append((_mean_point(num[members], den[members]), int(mults[members].sum())))
    return Fiber(tuple(atoms))


def _mean_point(num, den) -> SpherePoint:
    if len(num) == 1:
        return SpherePoint(num[0], den[0])
    if np.all(num != 0) and not np.all(np.abs(den) >= np.abs(num)):
        return SpherePoint(1.0, np.mean(den / num))
    return SpherePoint(np.mean(num / den), 1.0)
