"""Forward and backward fibers of a chain.

``backward_fiber(chain, x)`` is the multiset of ``w`` with ``P_i(w, x) = 0``,
each root counted ``m_i`` times; ``forward_fiber`` swaps the variables. The
``raw_*`` variants skip clustering and work on whole arrays of base points.
"""
from __future__ import annotations

import numpy as np

from .chain import Chain
from .roots import CLUSTER_TOL, batch_roots
from .sphere import Fiber, SpherePoint, as_point, fiber_from_pairs


def _fiber(chain: Chain, x, backward: bool, cluster_tol: float) -> Fiber:
    x = as_point(x)
    nums, dens, mults = [], [], []
    for p, m in chain.components:
        A = p.fiber_coeffs([x.num], [x.den], backward=backward)
        rn, rd = batch_roots(A, closed_form=False)
        nums.append(rn[0])
        dens.append(rd[0])
        mults.append(np.full(rn.shape[1], m))
    return fiber_from_pairs(np.concatenate(nums), np.concatenate(dens),
                            np.concatenate(mults), cluster_tol)


def backward_fiber(chain: Chain, x: SpherePoint | complex, cluster_tol: float = CLUSTER_TOL) -> Fiber:
    """``F^dagger(x)``: ``d`` points counted with multiplicity."""
    return _fiber(chain, x, True, cluster_tol)


def forward_fiber(chain: Chain, x: SpherePoint | complex, cluster_tol: float = CLUSTER_TOL) -> Fiber:
    """``F(x)``: ``d_dagger`` points counted with multiplicity."""
    return _fiber(chain, x, False, cluster_tol)


def component_roots(poly, num, den, backward: bool = True):
    """All fiber roots of one component over arrays of base points, shape (K, deg)."""
    return batch_roots(poly.fiber_coeffs(num, den, backward=backward))


def raw_fibers(chain: Chain, num, den, backward: bool = True):
    """Unclustered fibers over many base points.

    Returns ``(num, den)`` of shape ``(K, d)``: the roots of each component
    repeated ``m_i`` times, components in chain order.
    """
    num = np.atleast_1d(np.asarray(num, dtype=complex))
    den = np.atleast_1d(np.asarray(den, dtype=complex))
    out_n, out_d = [], []
    for p, m in chain.components:
        rn, rd = component_roots(p, num, den, backward)
        out_n.extend([rn] * m)
        out_d.extend([rd] * m)
    return np.concatenate(out_n, axis=1), np.concatenate(out_d, axis=1)
