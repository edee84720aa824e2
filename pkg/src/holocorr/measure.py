"""Atomic measures on the sphere, their pullbacks, and preimage sampling.

``pullback`` pushes an atomic measure through ``nu -> F^* nu``. Iterating the
normalized pullback from a Dirac mass gives ``d^-n (F^n)^* delta_a`` either
exactly (``exact_pullback_tree``) or by random backward orbits
(``sample_mu``).

Orbit sampling is reproducible independent of the worker count: orbits are
grouped in fixed blocks of ``BLOCK`` and block ``b`` draws from
``SeedSequence(seed, spawn_key=(b,))``, so the random stream of orbit ``i``
depends only on ``(seed, i)``.
"""
from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .chain import Chain
from .errors import InfiniteAtomPresent, TreeTooLarge
from .fibers import component_roots, raw_fibers
from .roots import CLUSTER_TOL
from .sphere import SpherePoint, abs2, as_point, pairs_from_complex, pairs_to_complex

DEFAULT_SEED = 20240611
DEFAULT_START = 3.0
BLOCK = 4096
TREE_MERGE_TOL = 1e-9
MAX_TREE_ATOMS = 10**7


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    num: np.ndarray
    den: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        num = np.array(self.num, dtype=complex, ndmin=1)
        den = np.array(self.den, dtype=complex, ndmin=1)
        w = np.array(self.weights, dtype=float, ndmin=1)
        if not (num.shape == den.shape == w.shape) or num.ndim != 1:
            raise ValueError("num, den and weights must be 1-D arrays of equal length")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and nonnegative")
        for name, arr in (("num", num), ("den", den), ("weights", w)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def dirac(cls, x, weight: float = 1.0) -> AtomicMeasure:
        p = as_point(x)
        return cls([p.num], [p.den], [weight])

    @classmethod
    def from_complex(cls, z, weights=None) -> AtomicMeasure:
        num, den = pairs_from_complex(z)
        if weights is None:
            weights = np.full(num.shape, 1.0 / max(len(num), 1))
        return cls(num, den, np.broadcast_to(weights, num.shape))

    @classmethod
    def empty(cls) -> AtomicMeasure:
        return cls(np.zeros(0, complex), np.zeros(0, complex), np.zeros(0))

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def mass(self) -> float:
        return float(math.fsum(self.weights))

    @property
    def z(self) -> np.ndarray:
        return pairs_to_complex(self.num, self.den)

    @property
    def is_infinite(self) -> np.ndarray:
        return self.den == 0

    def points(self) -> list[SpherePoint]:
        return [SpherePoint(n, d) for n, d in zip(self.num, self.den)]

    def integrate(self, phi: Callable) -> float:
        """``sum w * phi(atom)``; ``phi`` takes ``(num, den)`` arrays."""
        if len(self) == 0:
            return 0.0
        return float(np.dot(self.weights, phi(self.num, self.den)))

    def normalized(self) -> AtomicMeasure:
        return AtomicMeasure(self.num, self.den, self.weights / self.mass)

    def scaled(self, factor: float) -> AtomicMeasure:
        return AtomicMeasure(self.num, self.den, self.weights * factor)

    def merged(self, tol: float = TREE_MERGE_TOL) -> AtomicMeasure:
        """Merge atoms that fall in the same ``tol``-cell of their chart."""
        if len(self) == 0:
            return self
        recip = abs2(self.num) > abs2(self.den)
        v = np.where(recip, self.den, self.num)
        keys = np.stack([recip.astype(np.int64),
                         np.round(v.real / tol).astype(np.int64),
                         np.round(v.imag / tol).astype(np.int64)], axis=1)
        _, first, inv = np.unique(keys, axis=0, return_index=True, return_inverse=True)
        w = np.bincount(inv.ravel(), weights=self.weights, minlength=len(first))
        order = np.argsort(first)
        idx = first[order]
        return AtomicMeasure(self.num[idx], self.den[idx], w[order])


def _close_pairs(n1, d1, n2, d2, tol):
    """Vectorized version of the clustering test used for fibers."""
    fin = (d1 != 0) & (d2 != 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        z1 = np.where(fin, n1 / np.where(fin, d1, 1), 0)
        z2 = np.where(fin, n2 / np.where(fin, d2, 1), 0)
        u1 = np.where(n1 != 0, d1 / np.where(n1 != 0, n1, 1), np.inf)
        u2 = np.where(n2 != 0, d2 / np.where(n2 != 0, n2, 1), np.inf)
    scale = np.maximum(1.0, np.sqrt(np.maximum(abs2(z1), abs2(z2))))
    close_fin = np.sqrt(abs2(z1 - z2)) <= tol * scale
    with np.errstate(invalid="ignore"):
        close_inf = np.sqrt(abs2(u1 - u2)) <= tol
    return np.where(fin, close_fin, close_inf)


def _merge_rows(rn, rd, w, tol):
    """Within each row, move the weight of a root onto an earlier coincident root."""
    K, d = rn.shape
    rep = np.tile(np.arange(d), (K, 1))
    rows = np.arange(K)
    for j in range(1, d):
        for i in range(j - 1, -1, -1):
            hit = _close_pairs(rn[:, i], rd[:, i], rn[:, j], rd[:, j], tol) & (rep[:, j] == j)
            rep[hit, j] = rep[hit, i]
    out = np.zeros_like(w)
    for j in range(d):
        np.add.at(out, (rows, rep[:, j]), w[:, j])
    return out


def pullback(chain: Chain, nu: AtomicMeasure, normalize: bool = True,
             cluster_tol: float = CLUSTER_TOL) -> AtomicMeasure:
    """Pull back an atomic measure: each atom ``(a, w)`` spreads over ``F^dagger(a)``.

    Unnormalized mass is ``d * mass(nu)``; ``normalize`` divides by ``d``.
    Coincident roots of one fiber are merged, so a double root carries
    weight ``2 w``.
    """
    if len(nu) == 0:
        return nu
    rn, rd = raw_fibers(chain, nu.num, nu.den)
    scale = 1.0 / chain.d if normalize else 1.0
    w = np.repeat((nu.weights * scale)[:, None], rn.shape[1], axis=1)
    w = _merge_rows(rn, rd, w, cluster_tol)
    keep = w > 0
    return AtomicMeasure(rn[keep], rd[keep], w[keep])


def pullback_levels(chain: Chain, a, n: int, merge_tol: float = TREE_MERGE_TOL,
                    max_atoms: int = MAX_TREE_ATOMS) -> list[AtomicMeasure]:
    """``[d^-j (F^j)^* delta_a for j = 0..n]``."""
    if n < 0:
        raise ValueError("depth must be nonnegative")
    if chain.d ** n > max_atoms:
        raise TreeTooLarge(f"d^n = {chain.d}^{n} exceeds the cap of {max_atoms} atoms")
    levels = [AtomicMeasure.dirac(a)]
    for _ in range(n):
        levels.append(pullback(chain, levels[-1], normalize=True).merged(merge_tol))
    return levels


def exact_pullback_tree(chain: Chain, a, n: int, merge_tol: float = TREE_MERGE_TOL,
                        max_atoms: int = MAX_TREE_ATOMS) -> AtomicMeasure:
    """The probability measure ``d^-n (F^n)^* delta_a`` with all branches enumerated."""
    return pullback_levels(chain, a, n, merge_tol, max_atoms)[-1]


# -- random backward orbits --------------------------------------------------

class _BranchTable:
    """Integer slot layout: component ``c`` owns ``m_c * deg_c`` of the ``d`` slots."""

    def __init__(self, chain: Chain):
        self.polys = [p for p, _ in chain.components]
        self.mults = np.array([m for _, m in chain.components], dtype=np.int64)
        sizes = np.array([m * p.deg_x for p, m in chain.components], dtype=np.int64)
        self.ends = np.cumsum(sizes)
        self.starts = self.ends - sizes
        self.d = int(self.ends[-1])

    def step(self, num, den, u):
        comp = np.searchsorted(self.ends, u, side="right")
        new_n = np.empty_like(num)
        new_d = np.empty_like(den)
        for c, poly in enumerate(self.polys):
            sel = np.flatnonzero(comp == c)
            if sel.size == 0:
                continue
            r = (u[sel] - self.starts[c]) // self.mults[c]
            rn, rd = component_roots(poly, num[sel], den[sel])
            pick = np.arange(sel.size)
            new_n[sel] = rn[pick, r]
            new_d[sel] = rd[pick, r]
        return new_n, new_d


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def run_orbits(chain: Chain, start, steps: int, k: int, seed: int = DEFAULT_SEED,
               workers: int = 1, jitter: float = 0.0,
               observe: Callable | None = None):
    """Run ``k`` independent random backward orbits of ``steps`` steps.

    Each step picks a fiber point with probability ``mult / d`` through a
    uniform integer slot in ``[0, d)``. Returns ``(num, den, obs)`` where
    ``obs[i, j] = observe(y_j)`` along orbit ``i`` for ``j = 0..steps`` (or
    ``None`` when no observer is given).
    """
    if k < 1:
        raise ValueError("need at least one orbit")
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    table = _BranchTable(chain)
    a = as_point(start)
    nblocks = -(-k // BLOCK)

    def block(b):
        count = min(BLOCK, k - b * BLOCK)
        rng = _block_rng(seed, b)
        draws = rng.integers(0, table.d, size=(steps, BLOCK), dtype=np.int64)[:, :count]
        num = np.full(count, a.num)
        den = np.full(count, a.den)
        if jitter > 0:
            g = rng.standard_normal((2, BLOCK))[:, :count]
            eps = jitter * (g[0] + 1j * g[1])
            if a.is_infinite:
                num, den = pairs_from_complex(1.0 / eps)
            else:
                num, den = pairs_from_complex(a.to_complex() + eps)
        obs = None
        if observe is not None:
            obs = np.empty((count, steps + 1))
            obs[:, 0] = observe(num, den)
        for j in range(steps):
            num, den = table.step(num, den, draws[j])
            if obs is not None:
                obs[:, j + 1] = observe(num, den)
        return num, den, obs

    if workers <= 1 or nblocks == 1:
        parts = [block(b) for b in range(nblocks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(block, range(nblocks)))
    num = np.concatenate([p[0] for p in parts])
    den = np.concatenate([p[1] for p in parts])
    obs = None if observe is None else np.concatenate([p[2] for p in parts])
    return num, den, obs


def sample_mu(chain: Chain, a=DEFAULT_START, n: int = 40, k: int = 10_000,
              seed: int = DEFAULT_SEED, workers: int = 1, jitter: float = 0.0) -> AtomicMeasure:
    """Monte-Carlo version of ``d^-n (F^n)^* delta_a``: endpoints of ``k`` backward orbits."""
    num, den, _ = run_orbits(chain, a, n, k, seed=seed, workers=workers, jitter=jitter)
    return AtomicMeasure(num, den, np.full(k, 1.0 / k))


# -- summaries ---------------------------------------------------------------

def estimate_moments(measure: AtomicMeasure, kmax: int) -> np.ndarray:
    """``m_k = sum w z^k`` for ``k = 1..kmax``."""
    if np.any(measure.is_infinite):
        raise InfiniteAtomPresent("moments are undefined with an atom at infinity")
    z = measure.z
    out = np.empty(kmax, dtype=complex)
    zk = np.ones_like(z)
    for k in range(kmax):
        zk = zk * z
        out[k] = np.dot(measure.weights, zk)
    return out


def radial_histogram(measure: AtomicMeasure, edges) -> np.ndarray:
    """Mass of ``|z|`` in each bin; atoms outside the edges are dropped."""
    r = np.abs(measure.z)
    h, _ = np.histogram(r, bins=edges, weights=measure.weights)
    return h


@dataclass(frozen=True, eq=False)
class DensityGrid:
    center: complex
    width: float
    rows: int
    cols: int
    counts: np.ndarray
    infinity_mass: float

    @property
    def height(self) -> float:
        return self.width * self.rows / self.cols

    @property
    def mass(self) -> float:
        return float(self.counts.sum()) + self.infinity_mass

    def __add__(self, other: DensityGrid) -> DensityGrid:
        if (self.center, self.width, self.rows, self.cols) != (other.center, other.width, other.rows, other.cols):
            raise ValueError("grids must share window and resolution")
        return DensityGrid(self.center, self.width, self.rows, self.cols,
                           self.counts + other.counts, self.infinity_mass + other.infinity_mass)

    def to_pgm_bytes(self) -> bytes:
        """16-bit binary PGM of log-scaled counts, row 0 at the top of the window."""
        c = self.counts
        pos = c[c > 0]
        img = np.zeros(c.shape, dtype=">u2")
        if pos.size:
            unit = pos.min()
            top = np.log1p(pos.max() / unit)
            scaled = np.log1p(c / unit) / top if top > 0 else (c > 0).astype(float)
            img[...] = np.round(scaled * 65535).astype(np.uint16)
        head = f"P5\n{self.cols} {self.rows}\n65535\n".encode("ascii")
        return head + img.tobytes()

    def header_text(self) -> str:
        return (f"center_re={self.center.real!r}\ncenter_im={self.center.imag!r}\n"
                f"width={self.width!r}\nheight={self.height!r}\n"
                f"rows={self.rows}\ncols={self.cols}\n"
                f"total_mass={self.mass!r}\ninfinity_mass={self.infinity_mass!r}\n"
                "scale=log1p(count/min_positive_count), normalized to 65535\n")

    def write(self, path: str | Path) -> Path:
        """Write the PGM and a ``.txt`` sidecar next to it; returns the sidecar path."""
        path = Path(path)
        path.write_bytes(self.to_pgm_bytes())
        side = path.with_name(path.name + ".txt")
        side.write_text(self.header_text())
        return side


def bin_measure(measure: AtomicMeasure, center: complex = 0j, width: float = 4.0,
                resolution: tuple[int, int] = (512, 512)) -> DensityGrid:
    """Mass-preserving binning on a window; everything outside goes to the infinity accumulator."""
    rows, cols = resolution
    if rows < 1 or cols < 1 or rows * cols > 8192 * 8192:
        raise ValueError("resolution must be positive and at most 8192^2 cells")
    height = width * rows / cols
    z = measure.z
    fin = np.isfinite(z)
    zz = np.where(fin, z, 0)
    col = np.floor((zz.real - (center.real - width / 2)) / width * cols)
    row = np.floor(((center.imag + height / 2) - zz.imag) / height * rows)
    inside = fin & (col >= 0) & (col < cols) & (row >= 0) & (row < rows)
    flat = (row[inside].astype(np.int64) * cols + col[inside].astype(np.int64))
    counts = np.bincount(flat, weights=measure.weights[inside], minlength=rows * cols)
    return DensityGrid(complex(center), float(width), rows, cols, counts.reshape(rows, cols),
                       float(measure.weights[~inside].sum()))


# -- atom dumps --------------------------------------------------------------

ATOM_HEADER = "re,im,weight,is_infinite"


def atoms_to_text(measure: AtomicMeasure) -> str:
    buf = io.StringIO()
    buf.write(ATOM_HEADER + "\n")
    for n, d, w in zip(measure.num, measure.den, measure.weights):
        if d == 0:
            buf.write(f"inf,0.0,{float(w)!r},1\n")
        else:
            z = n / d
            buf.write(f"{float(z.real)!r},{float(z.imag)!r},{float(w)!r},0\n")
    return buf.getvalue()


def atoms_from_text(text: str) -> AtomicMeasure:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if lines and lines[0].strip() == ATOM_HEADER:
        lines = lines[1:]
    zs, ws = [], []
    for ln in lines:
        re_, im_, w, flag = ln.split(",")
        zs.append(complex(np.inf, 0) if int(flag) else complex(float(re_), float(im_)))
        ws.append(float(w))
    if not zs:
        return AtomicMeasure.empty()
    return AtomicMeasure.from_complex(np.array(zs), np.array(ws))


def write_atoms(measure: AtomicMeasure, path: str | Path) -> None:
    Path(path).write_text(atoms_to_text(measure))


def read_atoms(path: str | Path) -> AtomicMeasure:
    return atoms_from_text(Path(path).read_text())
