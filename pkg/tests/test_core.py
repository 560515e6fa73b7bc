import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_dominates
from nsma.core import (
    Individual,
    InvalidArgument,
    ProblemSpec,
    as_subset,
    dominates,
    nondominated_subset,
    objective_subsets,
    strictly_dominates,
)


def _pts(fs):
    return [Individual(np.zeros(1), np.asarray(f, dtype=float)) for f in fs]


@pytest.mark.parametrize("u,v,expected", [((1, 2), (1, 3), True), ((1, 2), (2, 1), False), ((1, 2), (1, 2), False)])
def test_dominates_examples(u, v, expected):
    assert dominates(u, v) is expected


@pytest.mark.parametrize("u,v,expected", [((0, 0), (1, 1), True), ((0, 1), (1, 1), False), ((2, 0), (1, 1), False)])
def test_strictly_dominates_examples(u, v, expected):
    assert strictly_dominates(u, v) is expected


def test_length_mismatch_rejected():
    with pytest.raises(InvalidArgument):
        dominates((1, 2), (1, 2, 3))
    with pytest.raises(InvalidArgument):
        strictly_dominates((1,), (1, 2))


def test_nondominated_subset_examples():
    pts = _pts([(0, 0), (1, 1), (0, 2)])
    assert [p.fx.tolist() for p in nondominated_subset(pts, (0, 1))] == [[0, 0]]
    pts = _pts([(0, 1), (1, 0)])
    assert len(nondominated_subset(pts, (0, 1))) == 2
    assert [p.fx.tolist() for p in nondominated_subset(pts, (0,))] == [[0, 1]]


def test_duplicates_both_survive():
    pts = _pts([(1, 1), (1, 1), (2, 2)])
    assert len(nondominated_subset(pts)) == 2


def test_empty_input():
    assert nondominated_subset([]) == []


vec = st.lists(st.integers(-3, 3), min_size=2, max_size=2)


@given(st.lists(vec, min_size=1, max_size=6))
def test_dominance_irreflexive_antisymmetric_transitive(sample):
    for u in sample:
        assert not dominates(u, u)
        for v in sample:
            assert not (dominates(u, v) and dominates(v, u))
            for w in sample:
                if dominates(u, v) and dominates(v, w):
                    assert dominates(u, w)


points = st.lists(st.lists(st.integers(0, 5), min_size=3, max_size=3), min_size=1, max_size=50)


@settings(max_examples=60)
@given(points, st.sampled_from(objective_subsets(3)))
def test_nondominated_subset_matches_brute_force(fs, I):
    pts = _pts(fs)
    got = nondominated_subset(pts, I)
    proj = [tuple(f[i] for i in I) for f in fs]
    expected = [p for k, p in enumerate(pts) if not any(brute_dominates(proj[j], proj[k]) for j in range(len(fs)))]
    assert [id(p) for p in got] == [id(p) for p in expected]
    # idempotent
    assert [id(p) for p in nondominated_subset(got, I)] == [id(p) for p in got]
    if len(I) == 1:
        best = min(f[I[0]] for f in fs)
        assert all(p.fx[I[0]] == best for p in got)
        assert len(got) == sum(1 for f in fs if f[I[0]] == best)


def test_subset_order_and_validation():
    assert objective_subsets(3) == [(0, 1, 2), (0, 1), (0, 2), (1, 2), (0,), (1,), (2,)]
    assert as_subset(None, 2) == (0, 1)
    for bad in ([], [1, 0], [0, 0], [2]):
        with pytest.raises(InvalidArgument):
            as_subset(bad, 2)


def test_individual_rejects_infeasible_point():
    p = ProblemSpec("t", 1, 1, [0.0], [1.0], lambda x: x.copy(), lambda x: np.eye(1))
    with pytest.raises(InvalidArgument):
        Individual.evaluate(p, [2.0])
    ind = Individual.evaluate(p, [0.5])
    assert ind.fx.tolist() == [0.5]
    with pytest.raises(ValueError):
        ind.x[0] = 0.1


def test_problem_spec_validates_bounds():
    with pytest.raises(InvalidArgument):
        ProblemSpec("t", 1, 1, [1.0], [0.0], lambda x: x, lambda x: np.eye(1))
    with pytest.raises(InvalidArgument):
        ProblemSpec("t", 2, 1, [0.0], [1.0], lambda x: x, lambda x: np.eye(1))
