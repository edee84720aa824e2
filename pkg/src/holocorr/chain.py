"""Holomorphic correspondences on the Riemann sphere as weighted polynomial chains.

A component is the zero set of a bivariate polynomial ``P(x, y)`` with
coefficient matrix ``coeffs[i, j]`` multiplying ``x**i * y**j``. The declared
bidegree is read as a bidegree on P^1 x P^1, so fibers over any point of the
sphere have a fixed size once padded with infinity.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from . import errors
from .roots import batch_roots

#: coefficients agreeing to this relative tolerance make two components equal
MERGE_TOL = 1e-8
#: ``P(c, .)`` below this relative size means ``x - c`` divides ``P``
LINE_TOL = 1e-10
#: interpolated resultant coefficients below this relative size are noise
NOISE_TOL = 1e-12

FORMAT_TAG = "holocorr-chain/1"


def _powers(v, n):
    """Columns ``v**0 .. v**n`` by repeated multiplication."""
    out = np.empty(v.shape + (n + 1,), dtype=complex)
    out[..., 0] = 1.0
    for k in range(1, n + 1):
        out[..., k] = out[..., k - 1] * v
    return out


class BivarPoly:
    """Immutable bivariate complex polynomial."""

    __slots__ = ("_c",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex, ndmin=2)
        if c.ndim != 2:
            raise ValueError("coefficient matrix must be two-dimensional")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        self._c = c

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def deg_x(self) -> int:
        return self._c.shape[0] - 1

    @property
    def deg_y(self) -> int:
        return self._c.shape[1] - 1

    def __repr__(self) -> str:
        return f"BivarPoly(deg=({self.deg_x}, {self.deg_y}))"

    def __call__(self, x, y):
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        return np.einsum("...i,ij,...j->...", _powers(x, self.deg_x), self._c,
                         _powers(y, self.deg_y))

    def transpose(self) -> BivarPoly:
        return BivarPoly(self._c.T)

    def trimmed(self) -> BivarPoly:
        c = self._c
        rows = np.flatnonzero(np.any(c != 0, axis=1))
        cols = np.flatnonzero(np.any(c != 0, axis=0))
        if rows.size == 0:
            return BivarPoly(np.zeros((1, 1)))
        return BivarPoly(c[: rows[-1] + 1, : cols[-1] + 1])

    def pivot(self) -> complex:
        """Leading coefficient used for normalization.

        Highest power of ``y`` among the non-negligible coefficients of the top
        ``x`` row; negligible means below 1e-6 of that row's largest entry.
        """
        top = self._c[-1]
        mag = np.abs(top)
        j = np.flatnonzero(mag >= 1e-6 * mag.max())[-1]
        return top[j]

    def normalized(self) -> BivarPoly:
        # adding 0j turns negative zeros into positive ones
        return BivarPoly(self._c / self.pivot() + 0j)

    def same_curve(self, other: BivarPoly, tol: float = MERGE_TOL) -> bool:
        if self._c.shape != other._c.shape:
            return False
        a = self.normalized().coeffs
        b = other.normalized().coeffs
        return bool(np.abs(a - b).max() <= tol * np.abs(a).max())

    def fiber_coeffs(self, num, den, backward: bool = True) -> np.ndarray:
        """Coefficients of the fiber polynomial over sphere points ``num/den``.

        Backward: ascending coefficients in ``w`` of ``P(w, x)``, evaluated
        bihomogeneously as ``sum_j c[i, j] num**j den**(deg_y - j)``; forward
        swaps the roles of the variables. Shape ``(K, fiber degree + 1)``.
        """
        c = self._c if backward else self._c.T
        num = np.atleast_1d(np.asarray(num, dtype=complex))
        den = np.atleast_1d(np.asarray(den, dtype=complex))
        n = c.shape[1] - 1
        pn = _powers(num, n)
        pd = _powers(den, n)
        basis = [pn[..., j] * pd[..., n - j] for j in range(n + 1)]
        out = np.zeros(num.shape + (c.shape[0],), dtype=complex)
        # explicit accumulation keeps results independent of batch layout
        for i in range(c.shape[0]):
            acc = np.zeros(num.shape, dtype=complex)
            for j in range(n + 1):
                if c[i, j] != 0:
                    acc = acc + c[i, j] * basis[j]
            out[..., i] = acc
        return out


class Component(NamedTuple):
    poly: BivarPoly
    mult: int


@dataclass(frozen=True)
class Degrees:
    d: int
    d_dagger: int


@dataclass(frozen=True, eq=False)
class Chain:
    """Formal sum of polynomial curves with positive integer multiplicities."""

    components: tuple[Component, ...]

    def __post_init__(self):
        comps = tuple(Component(p if isinstance(p, BivarPoly) else BivarPoly(p), int(m))
                      for p, m in self.components)
        if not comps:
            raise ValueError("a chain needs at least one component")
        if any(m < 1 for _, m in comps):
            raise ValueError("multiplicities must be positive integers")
        object.__setattr__(self, "components", comps)

    @classmethod
    def of(cls, *components) -> Chain:
        return cls(tuple(components))

    @property
    def d(self) -> int:
        return sum(m * p.deg_x for p, m in self.components)

    @property
    def d_dagger(self) -> int:
        return sum(m * p.deg_y for p, m in self.components)

    def equivalent(self, other: Chain, tol: float = MERGE_TOL) -> bool:
        """Same components up to scalars, same multiplicities, in any order."""
        if len(self.components) != len(other.components):
            return False
        unused = list(other.components)
        for p, m in self.components:
            for k, (q, n) in enumerate(unused):
                if m == n and p.same_curve(q, tol):
                    del unused[k]
                    break
            else:
                return False
        return True

    def __repr__(self) -> str:
        parts = ", ".join(f"{m}x{p!r}" for p, m in self.components)
        return f"Chain({parts}; d={self.d}, d_dagger={self.d_dagger})"


# -- constructors ----------------------------------------------------------

def graph(coeffs: Sequence[complex]) -> BivarPoly:
    """Graph ``y - f(x)`` of a polynomial map, ``coeffs[k]`` multiplying ``z**k``."""
    f = np.asarray(coeffs, dtype=complex)
    c = np.zeros((len(f), 2), dtype=complex)
    c[:, 0] = -f
    c[0, 1] += 1.0
    return BivarPoly(c)


def rational_graph(p: Sequence[complex], q: Sequence[complex]) -> BivarPoly:
    """Graph ``q(x) y - p(x)`` of the rational map ``p/q``."""
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    n = max(len(p), len(q))
    c = np.zeros((n, 2), dtype=complex)
    c[: len(p), 0] = -p
    c[: len(q), 1] = q
    return BivarPoly(c)


def maps_chain(*maps: Sequence[complex]) -> Chain:
    """Chain of graphs of polynomial maps, each with multiplicity one."""
    return Chain(tuple(Component(graph(f), 1) for f in maps))


def identity_chain(mult: int = 1) -> Chain:
    return Chain.of(Component(graph([0, 1]), mult))


# -- validation and algebra -------------------------------------------------

def _line_factor(c: np.ndarray) -> str | None:
    """Detect a factor ``x - a`` (axis 0) or ``y - b`` (axis 1)."""
    for axis, name in ((0, "x"), (1, "y")):
        M = c if axis == 0 else c.T
        lead = M[:, -1]
        nz = np.flatnonzero(lead)
        if nz.size == 0 or nz[-1] == 0:
            continue
        lead = lead[: nz[-1] + 1]
        rn, rd = batch_roots(lead[None, :], closed_form=False)
        for num, den in zip(rn[0], rd[0]):
            if den == 0:
                continue
            r = num / den
            pw = _powers(np.asarray(r), M.shape[0] - 1)
            vals = pw @ M
            scale = np.abs(pw) @ np.abs(M)
            if np.all(np.abs(vals) <= LINE_TOL * max(scale.max(), 1e-300)):
                return f"{name} - ({r:.6g})"
    return None


def validate(chain: Chain) -> Chain:
    """Check every component defines a correspondence; return normalized chain."""
    out: list[Component] = []
    for poly, mult in chain.components:
        p = poly.trimmed()
        if not np.any(p.coeffs != 0):
            raise errors.ZeroPolynomial("component is identically zero")
        if p.deg_x == 0 and p.deg_y == 0:
            raise errors.ConstantPolynomial("component is a nonzero constant")
        line = _line_factor(p.coeffs)
        if line is not None:
            raise errors.LineComponent(f"component has the line factor {line}")
        p = p.normalized()
        for q, _ in out:
            if p.same_curve(q):
                raise errors.DuplicateComponent("two components are scalar multiples")
        out.append(Component(p, mult))
    return Chain(tuple(out))


def adjoint(chain: Chain) -> Chain:
    """Swap the coordinates of every component."""
    return Chain(tuple(Component(p.transpose(), m) for p, m in chain.components))


def topological_degree(chain: Chain, seed: int | None = 0) -> Degrees:
    """``d = sum m_i deg_x(P_i)`` and ``d_dagger = sum m_i deg_y(P_i)``.

    Cross-checked by counting finite roots over three random base points; a
    formula that disagrees at all three raises ``DegeneracyDetected``.
    """
    deg = Degrees(chain.d, chain.d_dagger)
    rng = np.random.default_rng(seed)
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    num = np.where(np.abs(z) <= 1, z, 1.0)
    den = np.where(np.abs(z) <= 1, 1.0, 1.0 / z)
    for backward, expected in ((True, deg.d), (False, deg.d_dagger)):
        counts = np.zeros(3, dtype=int)
        for p, m in chain.components:
            A = p.fiber_coeffs(num, den, backward=backward)
            _, rd = batch_roots(A)
            counts += m * np.count_nonzero(rd != 0, axis=1)
        if np.all(counts != expected):
            raise errors.DegeneracyDetected(
                f"generic fiber counts {counts.tolist()} disagree with degree {expected}")
    return deg


def _sylvester(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Batched Sylvester matrices; ``f``, ``g`` ascending with shape (..., q+1), (..., p+1)."""
    q = f.shape[-1] - 1
    p = g.shape[-1] - 1
    n = p + q
    S = np.zeros(f.shape[:-1] + (n, n), dtype=complex)
    fd = f[..., ::-1]
    gd = g[..., ::-1]
    for r in range(p):
        S[..., r, r:r + q + 1] = fd
    for r in range(q):
        S[..., p + r, r:r + p + 1] = gd
    return S


def _resultant_values(Q: BivarPoly, P: BivarPoly, x, y):
    """``Res_w(Q(x, w), P(w, y))`` at matching arrays of ``x`` and ``y``."""
    f = _powers(np.asarray(x), Q.deg_x) @ Q.coeffs     # coefficients in w of Q(x, w)
    g = _powers(np.asarray(y), P.deg_y) @ P.coeffs.T   # coefficients in w of P(w, y)
    S = _sylvester(f, g)
    return np.linalg.det(S), np.prod(np.linalg.norm(S, axis=-1), axis=-1)


def resultant_poly(Q: BivarPoly, P: BivarPoly) -> BivarPoly:
    """Bivariate resultant eliminating the middle variable.

    Evaluates Sylvester determinants on a grid of roots of unity and
    recovers coefficients with a 2-D FFT.
    """
    nx = P.deg_x * Q.deg_x
    ny = Q.deg_y * P.deg_y
    Mx, My = nx + 1, ny + 1
    xs = np.exp(2j * np.pi * np.arange(Mx) / Mx)
    ys = np.exp(2j * np.pi * np.arange(My) / My)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    vals, hadamard = _resultant_values(Q, P, X, Y)
    if np.abs(vals).max() <= 1e-11 * hadamard.max():
        raise errors.ResultantDegenerate("resultant vanishes identically: components share a curve")
    C = np.fft.fft2(vals) / (Mx * My)
    cut = NOISE_TOL * np.abs(C).max()
    C = np.where(np.abs(C.real) <= cut, 0.0, C.real) + 1j * np.where(np.abs(C.imag) <= cut, 0.0, C.imag)
    R = BivarPoly(C).trimmed()
    # off-grid consistency check against direct determinants
    rng = np.random.default_rng(12345)
    tx = rng.uniform(0.6, 1.4, 4) * np.exp(2j * np.pi * rng.random(4))
    ty = rng.uniform(0.6, 1.4, 4) * np.exp(2j * np.pi * rng.random(4))
    direct, _ = _resultant_values(Q, P, tx, ty)
    interp = R(tx, ty)
    scale = np.einsum("ki,ij,kj->k", np.abs(_powers(tx, R.deg_x)), np.abs(R.coeffs),
                      np.abs(_powers(ty, R.deg_y)))
    if np.any(np.abs(direct - interp) > 1e-8 * scale):
        raise errors.InterpolationIllConditioned("interpolated resultant fails the off-grid check")
    return R.normalized()


def compose(outer: Chain, inner: Chain) -> Chain:
    """Composition ``outer o inner``: first apply ``inner``, then ``outer``.

    Backward fibers satisfy ``(outer o inner)^dagger(x) = inner^dagger(outer^dagger(x))``.
    Numerically coincident resultant factors are merged by adding
    multiplicities; reducible resultants are kept as they are.
    """
    comps: list[Component] = []
    for P, mp in outer.components:
        for Q, mq in inner.components:
            R = resultant_poly(Q, P)
            for k, (S, ms) in enumerate(comps):
                if R.same_curve(S):
                    comps[k] = Component(S, ms + mp * mq)
                    break
            else:
                comps.append(Component(R, mp * mq))
    return Chain(tuple(comps))


# -- file format -----------------------------------------------------------

def chain_to_text(chain: Chain) -> str:
    """Serialize as JSON; one coefficient row per line, floats in repr form."""
    lines = ["{", f'  "format": "{FORMAT_TAG}",', '  "components": [']
    for k, (p, m) in enumerate(chain.components):
        lines.append("    {")
        lines.append(f'      "mult": {m},')
        lines.append('      "coeffs": [')
        # adding 0.0 drops the sign of negative zeros
        rows = [json.dumps([[float(v.real) + 0.0, float(v.imag) + 0.0] for v in row]) for row in p.coeffs]
        for r, row in enumerate(rows):
            lines.append("        " + row + ("," if r < len(rows) - 1 else ""))
        lines.append("      ]")
        lines.append("    }" + ("," if k < len(chain.components) - 1 else ""))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def chain_from_text(text: str) -> Chain:
    doc = json.loads(text)
    if doc.get("format", FORMAT_TAG) != FORMAT_TAG:
        raise ValueError(f"unsupported chain format {doc.get('format')!r}")
    comps = []
    for item in doc["components"]:
        rows = [[complex(re, im) for re, im in row] for row in item["coeffs"]]
        comps.append(Component(BivarPoly(rows), int(item.get("mult", 1))))
    return Chain(tuple(comps))


def read_chain(path: str | Path) -> Chain:
    return chain_from_text(Path(path).read_text())


def write_chain(chain: Chain, path: str | Path) -> None:
    Path(path).write_text(chain_to_text(chain))


PRESETS = {
    "square": lambda: maps_chain([0, 0, 1]),
    "boyd": lambda: maps_chain([0, 0, 1], [0, 0, 0.5]),
    "identity": lambda: identity_chain(),
}


def load_chain(spec: str) -> Chain:
    """A file path, or ``@name`` for a built-in preset (``@square``, ``@boyd``, ``@identity``)."""
    if spec.startswith("@"):
        try:
            return PRESETS[spec[1:]]()
        except KeyError:
            raise ValueError(f"unknown preset {spec!r}; known: {sorted(PRESETS)}") from None
    return read_chain(spec)

