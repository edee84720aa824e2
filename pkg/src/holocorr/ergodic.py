"""Test functions, the transfer operator, Birkhoff averages and invariance defects.

The averaged sums are

    A_n(x) = (1/n) sum_{j<n} d^-j sum_{y in (F^j)^dagger(x)} phi(y),

computed either from the exact backward tree or as the mean of ``phi`` along
random backward orbits, whose step-``j`` law is exactly ``d^-j (F^j)^* delta_x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .chain import Chain
from .fibers import raw_fibers
from .measure import DEFAULT_SEED, AtomicMeasure, pullback_levels, run_orbits
from .sphere import SpherePoint, as_point, chordal_pairs, pairs_from_complex, pairs_to_complex

LOG_CLAMP = 40.0
POLY_CLAMP = 1e6
DEFAULT_MARGIN = 1e-3
# relative rounding floor added to Monte-Carlo half-widths; root finding along
# an orbit is only accurate to about this level, so a zero-variance estimate
# still carries this much error
ROUND_FLOOR = 1e-12


# -- regions -----------------------------------------------------------------

def _chordal_z(z, b):
    """Chordal distance between complex arrays; ``z`` may contain infinity."""
    zn, zd = pairs_from_complex(z)
    bn, bd = pairs_from_complex(b)
    return chordal_pairs(zn, zd, bn, bd)


def _unit(v):
    r = np.abs(v)
    return np.where(r > 0, v / np.where(r > 0, r, 1), 1.0 + 0j)


class Region:
    """A subset of the sphere with a membership test and a signed depth.

    ``depth`` is positive inside and negative outside; its magnitude is the
    chordal distance to the closest point of the Euclidean boundary along the
    natural normal direction.
    """

    def contains(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def boundary_distance(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def depth(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        dist = self.boundary_distance(z)
        return np.where(self.contains(z), dist, -dist)

    def complement(self) -> Region:
        return Complement(self)

    def __or__(self, other: Region) -> Region:
        return Union((self, other))


@dataclass(frozen=True)
class Disk(Region):
    """Closed disk ``|z - center| <= radius``."""

    center: complex
    radius: float

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        fin = np.isfinite(z)
        out = np.zeros(z.shape, dtype=bool)
        out[fin] = np.abs(z[fin] - self.center) <= self.radius
        return out

    def boundary_distance(self, z):
        z = np.asarray(z, dtype=complex)
        fin = np.isfinite(z)
        far = self.center + self.radius * _unit(np.asarray(self.center))
        u = _unit(np.where(fin, z - self.center, 1.0))
        b = np.where(fin, self.center + self.radius * u, far)
        return _chordal_z(z, b)


@dataclass(frozen=True)
class Annulus(Region):
    """Closed annulus ``inner <= |z| <= outer`` around the origin."""

    inner: float
    outer: float

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        fin = np.isfinite(z)
        r = np.abs(np.where(fin, z, 0))
        return fin & (r >= self.inner) & (r <= self.outer)

    def boundary_distance(self, z):
        z = np.asarray(z, dtype=complex)
        u = _unit(np.where(np.isfinite(z), z, 1.0))
        return np.minimum(_chordal_z(z, self.inner * u), _chordal_z(z, self.outer * u))


@dataclass(frozen=True)
class HalfPlane(Region):
    """Open half-plane ``a Re z + b Im z > c``; infinity lies on its boundary."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise ValueError("half-plane normal must be nonzero")

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        fin = np.isfinite(z)
        zz = np.where(fin, z, 0)
        return fin & (self.a * zz.real + self.b * zz.imag > self.c)

    def boundary_distance(self, z):
        z = np.asarray(z, dtype=complex)
        fin = np.isfinite(z)
        zz = np.where(fin, z, 0)
        n = complex(self.a, self.b)
        s = (self.a * zz.real + self.b * zz.imag - self.c) / abs(n) ** 2
        b = zz - s * n
        return np.where(fin, _chordal_z(zz, b), 0.0)


@dataclass(frozen=True)
class Complement(Region):
    inner: Region

    def contains(self, z):
        return ~self.inner.contains(z)

    def boundary_distance(self, z):
        return self.inner.boundary_distance(z)

    def complement(self) -> Region:
        return self.inner


@dataclass(frozen=True)
class Union(Region):
    """Finite union; the depth is the largest depth among the parts."""

    parts: tuple

    def contains(self, z):
        out = np.zeros(np.shape(z), dtype=bool)
        for p in self.parts:
            out |= p.contains(z)
        return out

    def depth(self, z):
        return np.max([p.depth(z) for p in self.parts], axis=0)

    def boundary_distance(self, z):
        return np.abs(self.depth(z))


def _floats(text: str, count: int, what: str) -> list[float]:
    vals = [float(v) for v in text.split(",")]
    if len(vals) != count:
        raise ValueError(f"{what} needs {count} numbers, got {text!r}")
    return vals


def parse_region(spec: str) -> Region:
    """Parse ``disk:cx,cy,r``, ``outside:cx,cy,r``, ``annulus:r1,r2``,
    ``halfplane:a,b,c``, or several of these joined by ``|``."""
    parts = [s.strip() for s in spec.split("|")]
    if len(parts) > 1:
        return Union(tuple(parse_region(p) for p in parts))
    kind, _, args = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "disk":
        cx, cy, r = _floats(args, 3, "disk")
        return Disk(complex(cx, cy), r)
    if kind == "outside":
        cx, cy, r = _floats(args, 3, "outside")
        return Complement(Disk(complex(cx, cy), r))
    if kind == "annulus":
        r1, r2 = _floats(args, 2, "annulus")
        return Annulus(r1, r2)
    if kind == "halfplane":
        return HalfPlane(*_floats(args, 3, "halfplane"))
    raise ValueError(f"unknown region {spec!r}")


# -- test functions ----------------------------------------------------------

class TestFunction:
    """A bounded real function on the sphere.

    Instances are callable on parallel ``(num, den)`` pair arrays; ``value``
    evaluates a single point.
    """

    __test__ = False

    def __init__(self, kind: str, params: dict, evaluator: Callable[[np.ndarray], np.ndarray]):
        self.kind = kind
        self.params = params
        self._eval = evaluator

    def __call__(self, num, den) -> np.ndarray:
        return self.on_complex(pairs_to_complex(num, den))

    def on_complex(self, z) -> np.ndarray:
        return np.asarray(self._eval(np.asarray(z, dtype=complex)), dtype=float)

    def value(self, x) -> float:
        p = as_point(x)
        return float(self(np.array([p.num]), np.array([p.den]))[0])

    def __repr__(self) -> str:
        return f"TestFunction({self.kind}, {self.params})"

    @classmethod
    def const(cls, c: float) -> TestFunction:
        c = float(c)
        return cls("const", {"c": c}, lambda z: np.full(z.shape, c))

    @classmethod
    def logabs(cls, clamp: float = LOG_CLAMP) -> TestFunction:
        def f(z):
            r = np.abs(z)
            with np.errstate(divide="ignore"):
                v = np.log(r)
            return np.clip(v, -clamp, clamp)
        return cls("logabs", {"clamp": clamp}, f)

    @classmethod
    def indicator(cls, region: Region) -> TestFunction:
        return cls("indicator", {"region": region}, lambda z: region.contains(z).astype(float))

    @classmethod
    def poly(cls, terms: Sequence[tuple[float, int, int]], clamp: float = POLY_CLAMP) -> TestFunction:
        """``sum c * Re(z)**p * Im(z)**q`` clamped to ``[-clamp, clamp]``.

        At infinity the value is the limit along the positive real axis.
        """
        terms = tuple((float(c), int(p), int(q)) for c, p, q in terms)
        if any(p < 0 or q < 0 for _, p, q in terms):
            raise ValueError("exponents must be nonnegative")

        def f(z):
            z = np.where(np.isfinite(z), z, 1e300)
            x, y = z.real, z.imag
            out = np.zeros(z.shape)
            with np.errstate(over="ignore", invalid="ignore"):
                for c, p, q in terms:
                    out = out + c * x ** p * y ** q
            out = np.nan_to_num(out, nan=0.0, posinf=clamp, neginf=-clamp)
            return np.clip(out, -clamp, clamp)
        return cls("poly", {"terms": terms, "clamp": clamp}, f)

    @classmethod
    def parse(cls, spec: str) -> TestFunction:
        """``const:c``, ``logabs[:L]``, ``indicator:REGION`` or ``poly:c/p/q;c/p/q``."""
        kind, _, args = spec.partition(":")
        kind = kind.strip().lower()
        if kind == "const":
            return cls.const(float(args))
        if kind == "logabs":
            return cls.logabs(float(args) if args else LOG_CLAMP)
        if kind == "indicator":
            return cls.indicator(parse_region(args))
        if kind == "poly":
            terms = []
            for t in args.split(";"):
                c, p, q = t.split("/")
                terms.append((float(c), int(p), int(q)))
            return cls.poly(terms)
        raise ValueError(f"unknown test function {spec!r}")


# -- transfer operator and Birkhoff averages ---------------------------------

def transfer_values(chain: Chain, phi: TestFunction, num, den) -> np.ndarray:
    """``U phi`` at many base points: the fiber average ``d^-1 sum mult * phi``."""
    rn, rd = raw_fibers(chain, num, den)
    vals = phi(rn.ravel(), rd.ravel()).reshape(rn.shape)
    return vals.sum(axis=1) / chain.d


def transfer_apply(chain: Chain, phi: TestFunction, x) -> float:
    p = as_point(x)
    return float(transfer_values(chain, phi, [p.num], [p.den])[0])


@dataclass
class BirkhoffReport:
    averages: np.ndarray
    x: SpherePoint
    method: str
    half_widths: np.ndarray | None = None
    k: int | None = None
    seed: int | None = None
    target: float | None = None
    extras: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.averages)

    def limit_estimate(self) -> tuple[float, float]:
        """Least-squares fit ``A_n ~ L + c / n`` over the second half of ``n``.

        Early terms carry transients that decay faster than ``1/n``, so they
        are left out of the fit.

        Returns
        -------
        tuple of float
            ``(L, c)``.
        """
        if self.n == 1:
            return float(self.averages[0]), 0.0
        lo = self.n // 2
        n = np.arange(lo + 1, self.n + 1, dtype=float)
        X = np.stack([np.ones_like(n), 1.0 / n], axis=1)
        (L, c), *_ = np.linalg.lstsq(X, self.averages[lo:], rcond=None)
        return float(L), float(c)

    def verdict(self) -> str:
        """Compare the extrapolated limit with ``target``.

        The slack is the size of the remaining ``c / N`` term plus twice the
        last Monte Carlo half-width, with a small absolute floor.
        """
        if self.target is None:
            return "no-target"
        L, c = self.limit_estimate()
        slack = abs(c) / self.n + 1e-6
        if self.half_widths is not None:
            slack += 2.0 * float(self.half_widths[-1])
        return "consistent" if abs(L - self.target) <= slack else "inconsistent"

    def to_text(self) -> str:
        hw = self.half_widths if self.half_widths is not None else np.zeros(self.n)
        lines = ["n,A_n,half_width"]
        for i, (a, h) in enumerate(zip(self.averages, hw), start=1):
            lines.append(f"{i},{float(a)!r},{float(h)!r}")
        L, c = self.limit_estimate()
        target = "none" if self.target is None else repr(float(self.target))
        lines.append(f"# method={self.method} x={self.x.to_complex()!r} k={self.k} seed={self.seed} "
                     f"fit_limit={L!r} fit_slope={c!r} target={target} verdict={self.verdict()}")
        return "\n".join(lines) + "\n"


def _running_means(level_sums: np.ndarray) -> np.ndarray:
    n = np.arange(1, level_sums.shape[-1] + 1)
    return np.cumsum(level_sums, axis=-1) / n


def birkhoff_exact(chain: Chain, phi: TestFunction, x, N: int,
                   target: float | None = None) -> BirkhoffReport:
    """``A_1..A_N`` at ``x`` from the full backward tree of depth ``N - 1``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    levels = pullback_levels(chain, x, N - 1)
    sums = np.array([lvl.integrate(phi) for lvl in levels])
    return BirkhoffReport(_running_means(sums), as_point(x), "exact", target=target,
                          extras={"level_sums": sums})


def birkhoff_mc(chain: Chain, phi: TestFunction, x, N: int, k: int = 10_000,
                seed: int = DEFAULT_SEED, workers: int = 1,
                target: float | None = None) -> BirkhoffReport:
    """Monte-Carlo ``A_1..A_N`` from ``k`` random backward orbits ``y_0 = x, ..., y_{N-1}``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    if k < 2:
        raise ValueError("need k >= 2 orbits for an error estimate")
    _, _, obs = run_orbits(chain, x, N - 1, k, seed=seed, workers=workers, observe=phi)
    means = _running_means(obs)
    avg = means.mean(axis=0)
    hw = 2.0 * means.std(axis=0, ddof=1) / math.sqrt(k) + ROUND_FLOOR * np.abs(obs).max()
    return BirkhoffReport(avg, as_point(x), "monte-carlo", half_widths=hw, k=k, seed=seed,
                          target=target)


# -- almost-invariance -------------------------------------------------------

@dataclass(frozen=True)
class DefectReport:
    defect: float
    ambiguous: float
    region_mass: float
    complement_defect: float
    complement_ambiguous: float
    margin: float

    def to_text(self) -> str:
        return "\n".join(f"{k}={getattr(self, k)!r}" for k in
                         ("defect", "ambiguous", "region_mass", "complement_defect",
                          "complement_ambiguous", "margin")) + "\n"


def _defect(region: Region, z, fz, w, margin):
    inside = region.contains(z)
    depth = region.depth(fz)
    deep_out = depth < -margin
    near = (depth < 0) & ~deep_out
    bad = inside & deep_out.any(axis=1)
    amb = inside & ~bad & near.any(axis=1)
    return float(w[bad].sum()), float(w[amb].sum())


def invariance_defect(chain: Chain, sample: AtomicMeasure, region: Region,
                      margin: float = DEFAULT_MARGIN) -> DefectReport:
    """Estimate ``mu({x in B : F^dagger(x) not inside B})`` from a sample of ``mu``.

    Fiber points that leave ``B`` by less than ``margin`` (chordal) are not
    counted as violations; the mass of atoms whose only exits are such
    near-boundary points is reported as ``ambiguous``. The same numbers are
    computed for the complement of ``B``.
    """
    if isinstance(region, TestFunction):
        region = region.params["region"]
    z = sample.z
    rn, rd = raw_fibers(chain, sample.num, sample.den)
    fz = pairs_to_complex(rn, rd)
    w = sample.weights / sample.mass
    d1, a1 = _defect(region, z, fz, w, margin)
    comp = region.complement()
    d2, a2 = _defect(comp, z, fz, w, margin)
    mass = float(w[region.contains(z)].sum())
    return DefectReport(d1, a1, mass, d2, a2, margin)
