"""Finite correspondences: exact ground truth for the measure-theoretic statements.

A finite correspondence on states ``0..n-1`` is an integer matrix ``B`` whose
rows all sum to ``d``; ``B[x][y]`` is the multiplicity of ``y`` among the
preimages of ``x``. The normalized pullback acts on row vectors by
``nu -> nu P`` with ``P = B / d`` and the transfer operator acts on functions
by ``phi -> P phi``.

Up to ``EXACT_MAX_STATES`` states all arithmetic is in ``Fraction``; larger
instances use floats with ``FLOAT_TOL``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import NotInvariant, OracleInconsistency

EXACT_MAX_STATES = 12
FLOAT_TOL = 1e-9
SUBSET_CAP = 2**20
PIVOT_TOL = 1e-12
DOUBLINGS = 40
ITERATE_CHECKS = 5


@dataclass(frozen=True, eq=False)
class FiniteCorrespondence:
    B: np.ndarray

    def __post_init__(self):
        B = np.array(self.B, dtype=np.int64)
        if B.ndim != 2 or B.shape[0] != B.shape[1] or B.shape[0] == 0:
            raise ValueError("B must be a nonempty square matrix")
        if np.any(B < 0):
            raise ValueError("multiplicities must be nonnegative")
        sums = B.sum(axis=1)
        if sums[0] <= 0 or np.any(sums != sums[0]):
            raise ValueError("every row must sum to the same positive degree")
        B.setflags(write=False)
        object.__setattr__(self, "B", B)

    @property
    def n(self) -> int:
        return self.B.shape[0]

    @property
    def d(self) -> int:
        return int(self.B[0].sum())

    @property
    def exact(self) -> bool:
        return self.n <= EXACT_MAX_STATES

    def successors(self, x: int) -> np.ndarray:
        return np.flatnonzero(self.B[x])

    def power(self, k: int) -> FiniteCorrespondence:
        """The ``k``-th iterate: matrix ``B^k`` of degree ``d^k``."""
        M = np.eye(self.n, dtype=object)
        Bo = self.B.astype(object)
        for _ in range(k):
            M = M.dot(Bo)
        return FiniteCorrespondence(np.array(M, dtype=np.int64))

    def transition(self) -> np.ndarray:
        """``P = B / d`` as a Fraction object array (exact mode) or floats."""
        if self.exact:
            d = self.d
            return np.array([[Fraction(int(v), d) for v in row] for row in self.B], dtype=object)
        return self.B / self.d

    def to_text(self) -> str:
        rows = "\n".join(" ".join(str(int(v)) for v in row) for row in self.B)
        return f"{self.n} {self.d}\n{rows}\n"

    @classmethod
    def from_text(cls, text: str) -> FiniteCorrespondence:
        lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines or len(lines[0]) != 2:
            raise ValueError("first line must be 'n d'")
        n, d = int(lines[0][0]), int(lines[0][1])
        rows = [[int(v) for v in ln] for ln in lines[1:]]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"expected {n} rows of {n} integers")
        fc = cls(rows)
        if fc.d != d:
            raise ValueError(f"rows sum to {fc.d}, header says {d}")
        return fc

    def __repr__(self) -> str:
        return f"FiniteCorrespondence(n={self.n}, d={self.d}, B={self.B.tolist()})"


def read_fc(path: str | Path) -> FiniteCorrespondence:
    return FiniteCorrespondence.from_text(Path(path).read_text())


def write_fc(fc: FiniteCorrespondence, path: str | Path) -> None:
    Path(path).write_text(fc.to_text())


# -- arithmetic helpers ------------------------------------------------------

def _vec(values, exact: bool) -> np.ndarray:
    if exact:
        return np.array([Fraction(v) for v in values], dtype=object)
    return np.asarray(values, dtype=float)


def _zero(exact):
    return Fraction(0) if exact else 0.0


def _is_zero(v, exact) -> bool:
    return v == 0 if exact else abs(v) <= FLOAT_TOL


def _rref(M: np.ndarray, exact: bool):
    """Reduced row echelon form; returns ``(R, pivot_columns)``."""
    if exact:
        R = np.array([[Fraction(v) for v in row] for row in np.asarray(M)], dtype=object)
        R = R.reshape(np.shape(M))
    else:
        R = np.array(M, dtype=float, copy=True)
    rows, cols = R.shape
    scale = 1.0 if exact else max(1.0, float(np.abs(R).max()) if R.size else 1.0)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = R[r:, c]
        if exact:
            nz = [i for i, v in enumerate(col) if v != 0]
            if not nz:
                continue
            p = r + nz[0]
        else:
            i = int(np.argmax(np.abs(col)))
            if abs(col[i]) <= PIVOT_TOL * scale:
                continue
            p = r + i
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = R[r] / R[r, c]
        for i in range(rows):
            if i != r and R[i, c] != 0:
                R[i] = R[i] - R[i, c] * R[r]
        pivots.append(c)
        r += 1
    return R, pivots


def _solve(A: np.ndarray, b: np.ndarray, exact: bool) -> np.ndarray:
    """A particular solution of ``A X = b`` (free variables set to zero)."""
    b2 = b.reshape(len(b), -1)
    R, piv = _rref(np.concatenate([A, b2], axis=1), exact)
    ncols = A.shape[1]
    if any(c >= ncols for c in piv):
        raise OracleInconsistency("linear system is inconsistent")
    X = np.full((ncols, b2.shape[1]), _zero(exact), dtype=object if exact else float)
    for i, c in enumerate(piv):
        X[c] = R[i, ncols:]
    return X.reshape((ncols,) + b.shape[1:])


def _nullspace(A: np.ndarray, exact: bool) -> list[np.ndarray]:
    R, piv = _rref(A, exact)
    ncols = A.shape[1]
    basis = []
    for f in (c for c in range(ncols) if c not in piv):
        v = np.full(ncols, _zero(exact), dtype=object if exact else float)
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = -R[i, f]
        basis.append(v)
    return basis


def _support(mu, exact) -> np.ndarray:
    return np.array([not _is_zero(v, exact) for v in mu], dtype=bool)


# -- structure ---------------------------------------------------------------

def closed_classes(fc: FiniteCorrespondence) -> list[np.ndarray]:
    """Closed communicating classes of the graph ``x -> y`` when ``B[x][y] > 0``."""
    ncomp, labels = connected_components(csr_matrix(fc.B > 0), directed=True, connection="strong")
    out = []
    for c in range(ncomp):
        members = np.flatnonzero(labels == c)
        reach = np.flatnonzero(fc.B[members].sum(axis=0))
        if np.all(labels[reach] == c):
            out.append(members)
    out.sort(key=lambda m: m[0])
    return out


def pullback_finite(fc: FiniteCorrespondence, nu, normalize: bool = True) -> np.ndarray:
    """``(F^* nu)(y) = sum_x nu(x) B[x][y]``, divided by ``d`` when normalized."""
    nu = _vec(nu, fc.exact)
    Bo = fc.B.astype(object) if fc.exact else fc.B.astype(float)
    out = nu.dot(Bo)
    if normalize:
        out = out / (Fraction(fc.d) if fc.exact else fc.d)
    return out


def is_invariant(fc: FiniteCorrespondence, mu) -> bool:
    mu = _vec(mu, fc.exact)
    diff = pullback_finite(fc, mu) - mu
    return all(_is_zero(v, fc.exact) for v in diff)


def _stationary(P: np.ndarray, members: np.ndarray, exact: bool) -> np.ndarray:
    k = len(members)
    sub = P[np.ix_(members, members)]
    A = np.array(sub.T, dtype=object if exact else float) - np.eye(k, dtype=int)
    A = np.concatenate([A, np.ones((1, k), dtype=int)], axis=0)
    b = np.full(k + 1, _zero(exact), dtype=object if exact else float)
    b[k] = 1
    if not exact:
        A = A.astype(float)
    return _solve(A, b, exact)


def invariant_measures(fc: FiniteCorrespondence) -> list[np.ndarray]:
    """The extreme invariant probability measures, one per closed class."""
    P = fc.transition()
    out = []
    for members in closed_classes(fc):
        mu = np.full(fc.n, _zero(fc.exact), dtype=object if fc.exact else float)
        mu[members] = _stationary(P, members, fc.exact)
        out.append(mu)
    return out


def cesaro_construct(fc: FiniteCorrespondence, nu, N: int) -> np.ndarray:
    """``(1/N) sum_{j<N} nu P^j``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    v = _vec(nu, fc.exact)
    acc = v.copy()
    for _ in range(N - 1):
        v = pullback_finite(fc, v)
        acc = acc + v
    return acc / (Fraction(N) if fc.exact else N)


def pullback_defect(fc: FiniteCorrespondence, mu) -> float:
    """``|| mu P - mu ||_1``."""
    diff = pullback_finite(fc, mu) - _vec(mu, fc.exact)
    return sum(abs(v) for v in diff)


def is_almost_invariant(fc: FiniteCorrespondence, mu, S: Iterable[int]) -> bool:
    """Every ``mu``-charged state of ``S`` has all its preimages in ``S``."""
    inside = np.zeros(fc.n, dtype=bool)
    inside[list(S)] = True
    charged = inside & _support(_vec(mu, fc.exact), fc.exact)
    reach = fc.B[charged].sum(axis=0) > 0
    return not np.any(reach & ~inside)


@dataclass(frozen=True)
class ErgodicVerdict:
    ergodic: bool
    witness: tuple[int, ...] | None
    enumerated: bool

    def __bool__(self) -> bool:
        return self.ergodic

    def to_text(self) -> str:
        if self.ergodic:
            msg = "ergodic"
        else:
            msg = "not ergodic, witness S={" + ",".join(map(str, self.witness or ())) + "}"
        if not self.enumerated:
            msg += " (class criterion only; subset enumeration skipped)"
        return msg


def _mass(mu, S, exact):
    return sum((mu[i] for i in S), _zero(exact))


def is_ergodic(fc: FiniteCorrespondence, mu) -> ErgodicVerdict:
    """Decide ergodicity by subset enumeration and by the class criterion.

    The two routes must agree; disagreement raises ``OracleInconsistency``.
    """
    exact = fc.exact
    mu = _vec(mu, exact)
    if not is_invariant(fc, mu):
        raise NotInvariant("measure is not invariant")
    supp = np.flatnonzero(_support(mu, exact))
    # class route: the support is one closed communicating class
    by_class = any(np.array_equal(supp, c) for c in closed_classes(fc))

    if 2 ** len(supp) > SUBSET_CAP:
        return ErgodicVerdict(by_class, None, False)

    succ = [0] * fc.n
    for x in supp:
        for y in fc.successors(x):
            succ[x] |= 1 << int(y)
    witness = None
    for mask in range(1, 2 ** len(supp) - 1):
        S = [int(supp[i]) for i in range(len(supp)) if mask >> i & 1]
        smask = sum(1 << s for s in S)
        if all(succ[s] & ~smask == 0 for s in S):
            m = _mass(mu, S, exact)
            if not _is_zero(m, exact) and not _is_zero(1 - m, exact):
                witness = tuple(S)
                break
    by_subsets = witness is None
    if by_subsets != by_class:
        raise OracleInconsistency(
            f"subset enumeration says ergodic={by_subsets}, class criterion says {by_class}")
    return ErgodicVerdict(by_subsets, witness, True)


# -- averages and limits -----------------------------------------------------

def birkhoff_finite(fc: FiniteCorrespondence, phi, x: int, N: int) -> list:
    """``A_n(x) = (1/n) sum_{j<n} (P^j phi)(x)`` for ``n = 1..N``."""
    P = fc.transition()
    v = _vec(phi, fc.exact)
    out, total = [], _zero(fc.exact)
    for n in range(1, N + 1):
        total = total + v[x]
        out.append(total / n)
        v = P.dot(v)
    return out


def cesaro_projector(fc: FiniteCorrespondence) -> np.ndarray:
    """``lim (1/n) sum_{j<n} P^j``, built from class stationary laws and absorption probabilities."""
    exact = fc.exact
    dt = object if exact else float
    P = fc.transition()
    classes = closed_classes(fc)
    recurrent = np.zeros(fc.n, dtype=bool)
    for c in classes:
        recurrent[c] = True
    trans = np.flatnonzero(~recurrent)
    H = np.full((fc.n, len(classes)), _zero(exact), dtype=dt)
    for k, c in enumerate(classes):
        H[c, k] = 1
    if len(trans):
        A = np.eye(len(trans), dtype=int) - P[np.ix_(trans, trans)]
        R = np.stack([P[np.ix_(trans, c)].sum(axis=1) for c in classes], axis=1)
        H[trans] = _solve(np.array(A, dtype=dt), np.array(R, dtype=dt), exact)
    Pi = np.full((fc.n, fc.n), _zero(exact), dtype=dt)
    for k, c in enumerate(classes):
        pi = _stationary(P, c, exact)
        for i, y in enumerate(c):
            Pi[:, y] = Pi[:, y] + H[:, k] * pi[i]
    return Pi


def birkhoff_limit(fc: FiniteCorrespondence, phi) -> np.ndarray:
    """The limit function ``Phi = lim A_n``."""
    return cesaro_projector(fc).dot(_vec(phi, fc.exact))


def cesaro_by_doubling(fc: FiniteCorrespondence, doublings: int = DOUBLINGS) -> np.ndarray:
    """Float ``(1/n) sum_{j<n} P^j`` at ``n = 2**doublings``."""
    P = fc.B / fc.d
    C = np.eye(fc.n)
    Pn = P.copy()
    for _ in range(doublings):
        C = 0.5 * (C + Pn @ C)
        Pn = Pn @ Pn
        # squaring doubles any row-sum drift; project back onto stochastic rows
        Pn /= Pn.sum(axis=1, keepdims=True)
        C /= C.sum(axis=1, keepdims=True)
    return C


@dataclass(frozen=True)
class Verdict:
    passed: bool
    detail: str

    def __bool__(self) -> bool:
        return self.passed


def check_birkhoff(fc: FiniteCorrespondence, mu, phi) -> Verdict:
    """Limit exists on the support, integrates to the same value, and is constant if ergodic."""
    exact = fc.exact
    mu = _vec(mu, exact)
    phi = _vec(phi, exact)
    Phi = birkhoff_limit(fc, phi)
    supp = np.flatnonzero(_support(mu, exact))
    lhs = sum((Phi[i] * mu[i] for i in supp), _zero(exact))
    rhs = sum((phi[i] * mu[i] for i in range(fc.n)), _zero(exact))
    if not _is_zero(lhs - rhs, exact) or (exact and lhs != rhs):
        return Verdict(False, f"sum Phi mu = {lhs} but sum phi mu = {rhs}")
    C = cesaro_by_doubling(fc)
    approx = C @ np.array([float(v) for v in phi])
    err = max((abs(approx[i] - float(Phi[i])) for i in supp), default=0.0)
    if err > FLOAT_TOL:
        return Verdict(False, f"Cesaro averages miss the limit by {err:.3e}")
    if is_ergodic(fc, mu):
        vals = {Phi[i] for i in supp} if exact else None
        const = (len(vals) == 1 and rhs in vals) if exact else \
            max(abs(float(Phi[i]) - float(rhs)) for i in supp) <= FLOAT_TOL
        if not const:
            return Verdict(False, "ergodic measure but Phi is not constant on the support")
    return Verdict(True, f"sum Phi mu = sum phi mu = {rhs}; doubling error {err:.1e}")


def check_complement_lemma(fc: FiniteCorrespondence, mu, S: Iterable[int],
                           iterates: int = ITERATE_CHECKS) -> Verdict:
    """If ``S`` is almost invariant, so are ``S`` and its complement for ``F^k``, ``k <= iterates``."""
    S = sorted(set(int(s) for s in S))
    comp = [i for i in range(fc.n) if i not in S]
    if not is_almost_invariant(fc, mu, S):
        return Verdict(True, "premise fails; nothing to check")
    Fk = fc
    for k in range(1, iterates + 1):
        for name, T in (("S", S), ("complement", comp)):
            if not is_almost_invariant(Fk, mu, T):
                return Verdict(False, f"{name}={T} not almost invariant for iterate {k}")
        Fk = FiniteCorrespondence(Fk.B @ fc.B)
    return Verdict(True, f"S={S} and complement almost invariant for iterates 1..{iterates}")


def check_maximal_inequality(fc: FiniteCorrespondence, mu, phi, alpha, N: int,
                             A: Iterable[int]) -> Verdict:
    """``sum_{E ∩ A} phi mu >= alpha mu(E ∩ A)`` with ``E = {max_{n<=N} A_n > alpha}``,
    plus ``||P phi||_1 <= ||phi||_1`` in ``L^1(mu)``."""
    exact = fc.exact
    mu = _vec(mu, exact)
    phi = _vec(phi, exact)
    if exact:
        alpha = Fraction(str(alpha)) if isinstance(alpha, float) else Fraction(alpha)
    else:
        alpha = float(alpha)
    A = sorted(set(int(a) for a in A))
    if not is_almost_invariant(fc, mu, A):
        raise ValueError("A must be almost invariant")
    P = fc.transition()
    best = [None] * fc.n
    v = phi.copy()
    total = np.full(fc.n, _zero(exact), dtype=object if exact else float)
    for n in range(1, N + 1):
        total = total + v
        for x in range(fc.n):
            a = total[x] / n
            if best[x] is None or a > best[x]:
                best[x] = a
        v = P.dot(v)
    E = [x for x in A if best[x] > alpha]
    lhs = sum((phi[x] * mu[x] for x in E), _zero(exact))
    rhs = alpha * sum((mu[x] for x in E), _zero(exact))
    ok = lhs >= rhs if exact else lhs >= rhs - FLOAT_TOL
    norm_phi = sum((abs(phi[x]) * mu[x] for x in range(fc.n)), _zero(exact))
    norm_P = sum((abs(w) * mu[x] for x, w in enumerate(P.dot(phi))), _zero(exact))
    norm_ok = norm_P <= norm_phi if exact else norm_P <= norm_phi + FLOAT_TOL
    return Verdict(ok and norm_ok,
                   f"lhs={lhs} rhs={rhs} |E∩A|={len(E)} ||P phi||={norm_P} ||phi||={norm_phi}")


@dataclass(frozen=True)
class FunctionSpace:
    dimension: int
    basis: list
    superlevel_ok: bool


def invariant_function_space(fc: FiniteCorrespondence, mu) -> FunctionSpace:
    """Solutions of ``P phi = phi`` on the support of ``mu``.

    Basis vectors are full length with zeros off the support. Every
    superlevel set of every basis vector is checked for almost invariance.
    """
    exact = fc.exact
    mu = _vec(mu, exact)
    supp = np.flatnonzero(_support(mu, exact))
    P = fc.transition()
    sub = P[np.ix_(supp, supp)]
    A = np.array(sub - np.eye(len(supp), dtype=int), dtype=object if exact else float)
    basis = []
    for v in _nullspace(A, exact):
        full = np.full(fc.n, _zero(exact), dtype=object if exact else float)
        full[supp] = v
        basis.append(full)
    ok = True
    for v in basis:
        for t in sorted(set(v[supp])):
            S = [int(i) for i in supp if v[i] > t]
            ok &= is_almost_invariant(fc, mu, S)
    return FunctionSpace(len(basis), basis, bool(ok))


# -- random instances and the full suite --------------------------------------

def random_fc(rng: np.random.Generator, n_max: int = 8, d_max: int = 4,
              max_tries: int = 100_000) -> FiniteCorrespondence:
    """Rows are uniform compositions of ``d`` into ``n`` parts; instances with an
    all-zero column are rejected."""
    n = int(rng.integers(1, n_max + 1))
    d = int(rng.integers(1, d_max + 1))
    for _ in range(max_tries):
        B = np.empty((n, n), dtype=np.int64)
        for x in range(n):
            bars = np.sort(rng.choice(n + d - 1, size=n - 1, replace=False))
            edges = np.concatenate([[-1], bars, [n + d - 1]])
            B[x] = np.diff(edges) - 1
        if np.all(B.sum(axis=0) > 0):
            return FiniteCorrespondence(B)
    raise RuntimeError("could not draw a correspondence without empty columns")


def _random_almost_invariant(rng, fc, mu, exact) -> list[int]:
    supp = _support(mu, exact)
    classes = [c for c in closed_classes(fc) if supp[c].any()]
    A = set()
    for c in classes:
        if rng.random() < 0.5:
            A.update(int(i) for i in c)
    for i in np.flatnonzero(~supp):
        if rng.random() < 0.5:
            A.add(int(i))
    return sorted(A)


def _random_phi(rng, n, exact):
    vals = rng.integers(-6, 7, size=n)
    return _vec([Fraction(int(v), 3) for v in vals] if exact else vals / 3.0, exact)


@dataclass
class SuiteReport:
    instances: int
    measures: int
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_text(self) -> str:
        head = f"instances={self.instances} measures={self.measures} failures={len(self.failures)}"
        return "\n".join([head] + [f"FAIL {f}" for f in self.failures]) + "\n"


def check_instance(fc: FiniteCorrespondence, rng: np.random.Generator, trials: int = 5) -> tuple[int, list]:
    """Run every lemma check on one correspondence; returns ``(#measures, failures)``."""
    exact = fc.exact
    failures = []
    extremes = invariant_measures(fc)
    if not extremes:
        return 0, [f"{fc!r}: no invariant measure"]
    candidates = [(mu, True) for mu in extremes]
    if len(extremes) >= 2:
        i, j = rng.choice(len(extremes), size=2, replace=False)
        t = Fraction(int(rng.integers(1, 4)), 4) if exact else rng.uniform(0.1, 0.9)
        candidates.append((t * extremes[i] + (1 - t) * extremes[j], False))
    for mu, extreme in candidates:
        tag = f"{fc!r} mu={[str(v) for v in mu]}"
        try:
            if not is_invariant(fc, mu):
                failures.append(f"{tag}: not invariant")
                continue
            verdict = is_ergodic(fc, mu)
            if verdict.ergodic != extreme:
                failures.append(f"{tag}: ergodic={verdict.ergodic} but extreme={extreme}")
            space = invariant_function_space(fc, mu)
            if (space.dimension == 1) != verdict.ergodic:
                failures.append(f"{tag}: invariant functions of dimension {space.dimension}")
            if not space.superlevel_ok:
                failures.append(f"{tag}: superlevel set not almost invariant")
            subsets = [list(verdict.witness or ()), [],
                       [int(i) for i in np.flatnonzero(rng.random(fc.n) < 0.5)],
                       _random_almost_invariant(rng, fc, mu, exact)]
            for S in subsets:
                v = check_complement_lemma(fc, mu, S)
                if not v:
                    failures.append(f"{tag}: complement lemma: {v.detail}")
            for _ in range(trials):
                phi = _random_phi(rng, fc.n, exact)
                alpha = Fraction(int(rng.integers(-6, 7)), 4) if exact else rng.uniform(-1.5, 1.5)
                N = int(rng.integers(1, 13))
                A = _random_almost_invariant(rng, fc, mu, exact)
                v = check_maximal_inequality(fc, mu, phi, alpha, N, A)
                if not v:
                    failures.append(f"{tag}: maximal inequality: {v.detail}")
                v = check_birkhoff(fc, mu, phi)
                if not v:
                    failures.append(f"{tag}: Birkhoff: {v.detail}")
        except (OracleInconsistency, NotInvariant) as exc:
            failures.append(f"{tag}: {type(exc).__name__}: {exc}")
    return len(candidates), failures


def run_suite(count: int = 1000, seed: int = 0, n_max: int = 8, d_max: int = 4,
              trials: int = 5) -> SuiteReport:
    """Check every lemma on ``count`` random correspondences."""
    rng = np.random.default_rng(seed)
    measures, failures = 0, []
    for _ in range(count):
        fc = random_fc(rng, n_max, d_max)
        m, f = check_instance(fc, rng, trials)
        measures += m
        failures.extend(f)
    return SuiteReport(count, measures, failures)


def parse_vector(text: str, exact: bool = True) -> np.ndarray:
    """Comma-separated numbers; fractions like ``1/3`` are accepted."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    return _vec([Fraction(p) for p in parts] if exact else [float(Fraction(p)) for p in parts], exact)


def format_vector(v: Sequence) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"

