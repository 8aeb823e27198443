import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qviability import eprb
from qviability.errors import (
    BadPartition,
    BadSubset,
    CapExceeded,
    LengthMismatch,
    NegativeSingle,
    NotNormalized,
    SpaceMismatch,
)
from qviability.qdist import (
    OutcomeSpace,
    QuasiDistribution,
    coarse_grain,
    is_probability,
    load_distribution,
    make_distribution,
    marginal_table,
    marginalize,
    modification,
    point_mass,
    positive_marginals,
    product_of_singles,
    uniform,
)


def test_uniform_accepted():
    q = make_distribution(OutcomeSpace.binary(2), [0.25] * 4)
    assert np.allclose(q.table, 0.25)


def test_negative_entry_allowed():
    q = make_distribution(OutcomeSpace.binary(1), [1.5, -0.5])
    assert q[(1,)] == -0.5


def test_not_normalized():
    with pytest.raises(NotNormalized) as exc:
        make_distribution(OutcomeSpace.binary(2), [0.5] * 4)
    assert exc.value.total == pytest.approx(2.0)


def test_length_and_finiteness():
    with pytest.raises(LengthMismatch):
        make_distribution(OutcomeSpace.binary(2), [1.0, 0, 0])
    with pytest.raises(Exception):
        make_distribution(OutcomeSpace.binary(1), [float("nan"), 1.0])


def test_values_read_only():
    q = uniform(OutcomeSpace.binary(2))
    with pytest.raises(ValueError):
        q.values[0] = 1.0


def test_json_round_trip(tmp_path):
    space = OutcomeSpace.of((2, 3), ("x", "y"))
    q = make_distribution(space, [0.1, 0.2, -0.05, 0.3, 0.25, 0.2])
    path = tmp_path / "q.json"
    path.write_text(json.dumps(q.to_json()))
    back = load_distribution(path)
    assert back.space == space
    assert np.array_equal(back.values, q.values)


def test_load_rejects_nan(tmp_path):
    path = tmp_path / "q.json"
    path.write_text('{"variables": [{"label": "a", "arity": 2}], "values": [NaN, 1.0]}')
    with pytest.raises(ValueError):
        load_distribution(path)


def test_marginal_examples():
    u = uniform(OutcomeSpace.binary(2))
    assert np.allclose(marginalize(u, [0]).table, [0.5, 0.5])

    q = eprb.trace_distribution(math.pi / 2)
    assert np.allclose(marginal_table(q, (0, 2)), 0.25, atol=1e-12)

    f = [np.array([0.2, 0.8]), np.array([0.1, 0.6, 0.3]), np.array([0.5, 0.5])]
    p = make_distribution(OutcomeSpace.of((2, 3, 2)), np.einsum("i,j,k->ijk", *f).ravel())
    assert np.allclose(marginal_table(p, (1,)), f[1])


def test_bad_subset():
    q = uniform(OutcomeSpace.binary(3))
    for bad in ([], [0, 0], [3], [-1]):
        with pytest.raises(BadSubset):
            marginalize(q, bad)


def test_is_probability():
    assert is_probability(uniform(OutcomeSpace.binary(3)))
    assert not is_probability(make_distribution(OutcomeSpace.binary(1), [1.5, -0.5]))
    assert not is_probability(eprb.trace_distribution(math.pi / 3))


def test_positive_marginals_probability():
    p = point_mass(OutcomeSpace.binary(3), (0, 1, 0))
    assert positive_marginals(p) == [(0, 1, 2)]


def test_positive_marginals_eprb_pi3():
    # pairs are all positive; the triples {0,1,3} and {1,2,3} touch zero
    # at cos(3 theta) = -1 and stay positive, the other two go negative
    q = eprb.trace_distribution(math.pi / 3)
    assert positive_marginals(q) == [(0, 1, 3), (0, 2), (1, 2, 3)]
    for s in [(0, 1, 2), (0, 2, 3)]:
        assert marginal_table(q, s).min() == pytest.approx(-0.0625, abs=1e-12)


def _brute_force_positive(q, tol=1e-9):
    n = q.space.n
    pos = [
        s
        for k in range(1, n + 1)
        for s in itertools.combinations(range(n), k)
        if marginal_table(q, s).min() >= -tol
    ]
    return sorted(s for s in pos if not any(set(s) < set(t) for t in pos))


def test_positive_marginals_only_singletons():
    # one negative cell, every pair touching it; found by search over small instances
    q = make_distribution(
        OutcomeSpace.binary(2), [-0.1, 0.6, 0.5, 0.0]
    )
    assert positive_marginals(q) == [(0,), (1,)] == _brute_force_positive(q)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 5))
def test_positive_marginals_matches_brute_force(seed, n):
    r = np.random.default_rng(seed)
    v = r.dirichlet(np.ones(2**n)) + r.normal(0, 0.3 / 2**n, 2**n)
    v -= (v.sum() - 1) / v.size
    q = make_distribution(OutcomeSpace.binary(n), v)
    assert positive_marginals(q) == _brute_force_positive(q)


def test_positive_marginals_budget():
    q = uniform(OutcomeSpace.binary(18))
    with pytest.raises(CapExceeded):
        positive_marginals(q, budget=1000)
    assert positive_marginals(q, max_subset_size=1) == [(k,) for k in range(18)]


def test_product_of_singles():
    u = uniform(OutcomeSpace.binary(2))
    assert np.allclose(product_of_singles(u).values, u.values)
    p = product_of_singles(eprb.trace_distribution(math.pi / 3))
    assert np.allclose(p.values, 1 / 16, atol=1e-12)
    q = make_distribution(OutcomeSpace.binary(2), [0.3, 0.7, 0.0, 0.0])
    assert np.allclose(product_of_singles(q).values, [0.3, 0.7, 0, 0])
    with pytest.raises(NegativeSingle):
        product_of_singles(make_distribution(OutcomeSpace.binary(1), [1.5, -0.5]))


def test_coarse_grain():
    q = eprb.trace_distribution(1.1)
    same = coarse_grain(q, {k: [[0], [1]] for k in range(4)})
    assert np.array_equal(same.values, q.values)

    u = uniform(OutcomeSpace.of((3,)))
    assert np.allclose(coarse_grain(u, {0: [[0], [1, 2]]}).values, [1 / 3, 2 / 3])

    assert np.allclose(coarse_grain(q, drop=[1, 3]).values, marginalize(q, [0, 2]).table.ravel())

    with pytest.raises(BadPartition):
        coarse_grain(u, {0: [[0], [1]]})
    with pytest.raises(BadPartition):
        coarse_grain(u, {0: [[0, 1, 2]]})
    with pytest.raises(BadPartition):
        coarse_grain(u, drop=[0])


def test_modification():
    q = eprb.trace_distribution(math.pi / 3)
    m = modification(q, q)
    assert np.all(m.d == 0) and m.marginals_preserved

    from qviability import lpmatch
    from qviability.fine import CYCLE_PAIRS

    q2 = eprb.trace_distribution(math.pi / 2)
    w = lpmatch.solve(lpmatch.problem_from_marginals(q2, CYCLE_PAIRS)).witness
    m = modification(w, q2, subsets=CYCLE_PAIRS)
    assert abs(m.total) < 1e-12 and m.sums_to_zero and m.marginals_preserved

    p = make_distribution(OutcomeSpace.binary(2), [0.4, 0.1, 0.1, 0.4])
    assert not modification(uniform(p.space), p).marginals_preserved

    with pytest.raises(SpaceMismatch):
        modification(uniform(OutcomeSpace.binary(1)), p)


def _random_quasi(seed, shape):
    r = np.random.default_rng(seed)
    v = r.normal(size=int(np.prod(shape)))
    v += (1 - v.sum()) / v.size
    return make_distribution(OutcomeSpace.of(shape), v, norm_tol=1e-9)


shapes = st.lists(st.integers(2, 3), min_size=1, max_size=4)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1), shapes, st.data())
def test_marginal_consistency(seed, shape, data):
    q = _random_quasi(seed, shape)
    n = len(shape)
    s = tuple(sorted(data.draw(st.sets(st.integers(0, n - 1), min_size=1))))
    t = tuple(sorted(data.draw(st.sets(st.sampled_from(s), min_size=1))))
    direct = marginal_table(q, t)
    via = marginal_table(make_distribution(q.space.sub(s), marginal_table(q, s).ravel(), 1e-9), tuple(s.index(k) for k in t))
    assert np.allclose(direct, via, atol=1e-12)
    assert math.fsum(direct.ravel()) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), shapes)
def test_positive_family_downward_closed(seed, shape):
    r = np.random.default_rng(seed)
    size = int(np.prod(shape))
    v = r.dirichlet(np.ones(size)) + r.normal(0, 0.2 / size, size)
    v += (1 - v.sum()) / size
    q = make_distribution(OutcomeSpace.of(shape), v, 1e-9)
    for s in positive_marginals(q):
        for k in range(1, len(s)):
            for t in itertools.combinations(s, k):
                assert marginal_table(q, t).min() >= -1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.lists(st.integers(2, 4), min_size=2, max_size=3))
def test_coarse_grain_preserves_probability(seed, shape):
    r = np.random.default_rng(seed)
    p = make_distribution(OutcomeSpace.of(shape), r.dirichlet(np.ones(int(np.prod(shape)))), 1e-9)
    plan = {0: [[0], list(range(1, shape[0]))]}
    c = coarse_grain(p, plan, drop=[len(shape) - 1])
    assert is_probability(c)
    assert math.fsum(c.values) == pytest.approx(1.0, abs=1e-12)


def test_quasi_distribution_direct_construction():
    space = OutcomeSpace.binary(1)
    q = QuasiDistribution(space, np.array([0.5, 0.5]))
    assert q.space.size == 2
