from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holocorr.errors import NotInvariant
from holocorr.oracle import (FiniteCorrespondence, birkhoff_finite, birkhoff_limit, cesaro_by_doubling,
                             cesaro_construct, cesaro_projector, check_birkhoff, check_complement_lemma,
                             check_instance, check_maximal_inequality, closed_classes,
                             invariant_function_space, invariant_measures, is_almost_invariant,
                             is_ergodic, is_invariant, parse_vector, pullback_defect, pullback_finite,
                             random_fc, read_fc, run_suite, write_fc)

FULL = FiniteCorrespondence([[1, 1], [1, 1]])
SPLIT = FiniteCorrespondence([[2, 0], [0, 2]])
SWAP = FiniteCorrespondence([[0, 2], [2, 0]])
CYCLE = FiniteCorrespondence([[0, 2, 0], [0, 0, 2], [2, 0, 0]])
HALF = (F(1, 2), F(1, 2))


def as_tuple(v):
    return tuple(F(x) for x in v)


# -- construction and files --------------------------------------------------

def test_rows_must_share_degree():
    with pytest.raises(ValueError):
        FiniteCorrespondence([[1, 0], [2, 0]])
    with pytest.raises(ValueError):
        FiniteCorrespondence([[-1, 3], [1, 1]])


def test_file_round_trip(tmp_path):
    write_fc(CYCLE, tmp_path / "c.fc")
    assert (tmp_path / "c.fc").read_text() == "3 2\n0 2 0\n0 0 2\n2 0 0\n"
    back = read_fc(tmp_path / "c.fc")
    np.testing.assert_array_equal(back.B, CYCLE.B)
    with pytest.raises(ValueError):
        FiniteCorrespondence.from_text("2 3\n2 0\n0 2\n")


def test_power():
    np.testing.assert_array_equal(SWAP.power(2).B, [[4, 0], [0, 4]])
    assert CYCLE.power(3).d == 8


# -- pullback ----------------------------------------------------------------

def test_pullback_examples():
    assert as_tuple(pullback_finite(FULL, [1, 0])) == HALF
    assert as_tuple(pullback_finite(SPLIT, [F(1, 3), F(2, 3)])) == (F(1, 3), F(2, 3))
    assert as_tuple(pullback_finite(SWAP, [1, 0])) == (0, 1)
    assert sum(pullback_finite(CYCLE, [1, 0, 0], normalize=False)) == 2


# -- invariant measures ------------------------------------------------------

def test_invariant_measure_examples():
    assert [as_tuple(m) for m in invariant_measures(FULL)] == [HALF]
    assert [as_tuple(m) for m in invariant_measures(SPLIT)] == [(1, 0), (0, 1)]
    assert [as_tuple(m) for m in invariant_measures(CYCLE)] == [(F(1, 3),) * 3]


def test_transient_states_carry_no_mass():
    fc = FiniteCorrespondence([[1, 1, 0], [0, 2, 0], [1, 0, 1]])
    assert [list(c) for c in closed_classes(fc)] == [[1]]
    assert [as_tuple(m) for m in invariant_measures(fc)] == [(0, 1, 0)]


def test_cesaro_examples():
    mu = cesaro_construct(SWAP, [1, 0], 2)
    assert as_tuple(mu) == HALF and pullback_defect(SWAP, mu) == 0
    mu = cesaro_construct(FULL, [1, 0], 4)
    assert as_tuple(mu) == (F(5, 8), F(3, 8))
    assert pullback_defect(FULL, mu) <= F(1, 2)
    assert as_tuple(cesaro_construct(CYCLE, [F(1, 3)] * 3, 7)) == (F(1, 3),) * 3
    with pytest.raises(ValueError):
        cesaro_construct(FULL, [1, 0], 0)


@pytest.mark.parametrize("N", [1, 2, 7, 64, 1000])
def test_cesaro_defect_bound(N):
    rng = np.random.default_rng(N)
    for _ in range(30 if N < 1000 else 5):
        fc = random_fc(rng, n_max=6, d_max=4)
        nu = np.zeros(fc.n, dtype=object)
        nu[int(rng.integers(fc.n))] = F(1)
        mu = cesaro_construct(fc, nu, N)
        assert sum(mu) == 1
        assert pullback_defect(fc, mu) <= F(2, N)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_invariant_measures_exist_and_are_invariant(seed):
    fc = random_fc(np.random.default_rng(seed))
    ms = invariant_measures(fc)
    assert ms
    for mu in ms:
        assert sum(mu) == 1 and all(v >= 0 for v in mu)
        assert is_invariant(fc, mu)


# -- almost invariance and ergodicity -----------------------------------------

def test_almost_invariant_examples():
    assert is_almost_invariant(SPLIT, HALF, [0])
    assert not is_almost_invariant(FULL, HALF, [0])
    for fc in (FULL, SPLIT, SWAP, CYCLE):
        assert is_almost_invariant(fc, [F(1, fc.n)] * fc.n, range(fc.n))


def test_almost_invariance_ignores_null_states():
    fc = FiniteCorrespondence([[2, 0], [1, 1]])
    assert is_almost_invariant(fc, [1, 0], [0])
    # a null set is almost invariant whatever its preimages are
    assert is_almost_invariant(fc, [1, 0], [1])
    assert not is_almost_invariant(fc, [F(1, 2), F(1, 2)], [1])


def test_ergodic_examples():
    assert is_ergodic(FULL, HALF)
    v = is_ergodic(SPLIT, HALF)
    assert not v and v.witness == (0,)
    assert v.to_text() == "not ergodic, witness S={0}"
    assert is_ergodic(CYCLE, [F(1, 3)] * 3).to_text() == "ergodic"
    with pytest.raises(NotInvariant):
        is_ergodic(FULL, [1, 0])


def test_float_mode_above_exact_limit():
    n = 14
    B = np.roll(np.eye(n, dtype=int), 1, axis=1) * 2
    fc = FiniteCorrespondence(B)
    assert not fc.exact
    [mu] = invariant_measures(fc)
    np.testing.assert_allclose(mu, 1 / n)
    assert is_ergodic(fc, mu)


# -- Birkhoff ----------------------------------------------------------------

def test_birkhoff_examples():
    A = birkhoff_finite(FULL, [0, 1], 0, 6)
    assert A == [F(n - 1, 2 * n) for n in range(1, 7)]
    assert A[3] == F(3, 8)
    assert birkhoff_finite(CYCLE, [F(5, 2)] * 3, 1, 5) == [F(5, 2)] * 5
    A = birkhoff_finite(SWAP, [0, 1], 0, 10)
    assert all(A[2 * m - 1] == F(1, 2) for m in range(1, 6))
    assert A[0] == 0 and A[2] == F(1, 3)


def test_birkhoff_limit_split():
    Phi = birkhoff_limit(SPLIT, [3, 5])
    assert as_tuple(Phi) == (3, 5)
    assert as_tuple(birkhoff_limit(FULL, [0, 1])) == HALF


def test_projector_against_doubling():
    rng = np.random.default_rng(50)
    for _ in range(50):
        fc = random_fc(rng)
        Pi = np.array(cesaro_projector(fc), dtype=float)
        C = cesaro_by_doubling(fc)
        # transient columns converge only like 1/n, so 2**40 doublings bound the gap
        assert np.abs(C - Pi).max() < 1e-6
        np.testing.assert_allclose(Pi.sum(axis=1), 1, atol=1e-15)


def test_check_birkhoff_on_examples():
    assert check_birkhoff(SPLIT, [1, 0], [3, 5])
    assert check_birkhoff(CYCLE, [F(1, 3)] * 3, [1, 0, 0])


# -- lemma checks ------------------------------------------------------------

def test_complement_lemma_examples():
    assert check_complement_lemma(SPLIT, HALF, [0])
    assert check_complement_lemma(FULL, HALF, [])
    assert check_complement_lemma(CYCLE, [F(1, 3)] * 3, [])


def test_maximal_inequality_examples():
    v = check_maximal_inequality(FULL, HALF, [0, 1], 0.4, 8, [0, 1])
    assert v and "lhs=1/2" in v.detail and "|E∩A|=2" in v.detail
    v = check_maximal_inequality(FULL, HALF, [0, 1], 2, 8, [0, 1])
    assert v and "|E∩A|=0" in v.detail
    with pytest.raises(ValueError):
        check_maximal_inequality(FULL, HALF, [0, 1], 0.4, 8, [0])


def test_invariant_function_space_examples():
    assert invariant_function_space(FULL, HALF).dimension == 1
    sp = invariant_function_space(SPLIT, HALF)
    assert sp.dimension == 2 and sp.superlevel_ok
    assert sorted(tuple(int(x != 0) for x in v) for v in sp.basis) == [(0, 1), (1, 0)]
    assert invariant_function_space(CYCLE, [F(1, 3)] * 3).dimension == 1


def test_parse_vector():
    assert as_tuple(parse_vector("1/2, 1/2")) == HALF
    assert list(parse_vector("0.25,0.75", exact=False)) == [0.25, 0.75]


# -- random batches ----------------------------------------------------------

def test_random_fc_is_valid():
    rng = np.random.default_rng(51)
    seen_d = set()
    for _ in range(300):
        fc = random_fc(rng, n_max=8, d_max=4)
        assert 1 <= fc.n <= 8 and 1 <= fc.d <= 4
        assert np.all(fc.B.sum(axis=1) == fc.d) and np.all(fc.B.sum(axis=0) > 0)
        seen_d.add(fc.d)
    assert seen_d == {1, 2, 3, 4}


def test_mixture_of_two_extremes_is_not_ergodic():
    mu = F(1, 4) * np.array([F(1), F(0)], dtype=object) + F(3, 4) * np.array([F(0), F(1)], dtype=object)
    v = is_ergodic(SPLIT, mu)
    assert not v
    assert invariant_function_space(SPLIT, mu).dimension == 2


def test_check_instance_reports_measures():
    count, failures = check_instance(SPLIT, np.random.default_rng(0))
    assert count == 3 and failures == []


def test_small_suite_is_clean():
    rep = run_suite(count=60, seed=7)
    assert rep.passed, rep.to_text()
    assert rep.measures >= 60
    assert rep.to_text().startswith("instances=60 ")
