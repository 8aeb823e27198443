import json
import math
import os
import subprocess
import sys
from fractions import Fraction

import jsonschema
import numpy as np
import pytest
from conftest import random_cycle_instance
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import hull_feasible, pair_table

from qviability import eprb, lpmatch, schemas
from qviability.errors import CapExceeded, InconsistentTargets
from qviability.fine import CYCLE_PAIRS
from qviability.lpmatch import simplex
from qviability.qdist import OutcomeSpace, make_distribution, marginal_table, uniform

B4 = OutcomeSpace.binary(4)


def pr_box():
    tabs = [pair_table(0, 0, c) for c in (1, 1, 1, -1)]
    return lpmatch.MatchingProblem(B4, tuple(zip(CYCLE_PAIRS, tabs)))


def test_singles_only(backend):
    prob = lpmatch.MatchingProblem(B4, tuple(((k,), [0.5, 0.5]) for k in range(4)))
    res = lpmatch.solve(prob, backend=backend)
    assert res.feasible
    assert lpmatch.verify(res.witness, prob).ok
    for k in range(4):
        assert np.allclose(marginal_table(res.witness, (k,)), 0.5)


def test_pr_box_infeasible(backend):
    res = lpmatch.solve(pr_box(), backend=backend)
    assert res.verdict is lpmatch.Verdict.INFEASIBLE
    assert res.certificate.gap > 0
    assert lpmatch.farkas_gap(pr_box(), res.certificate.farkas) == pytest.approx(res.certificate.gap)
    assert not hull_feasible(B4.shape, pr_box().targets)


def test_eprb_pi2_six_pairs(backend):
    q = eprb.trace_distribution(math.pi / 2)
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    prob = lpmatch.problem_from_marginals(q, pairs)
    assert np.allclose(marginal_table(q, (0, 1)), [[0, 0.5], [0.5, 0]], atol=1e-12)
    res = lpmatch.solve(prob, backend=backend)
    assert res.feasible and lpmatch.verify(res.witness, prob).ok
    w = res.witness.table
    # sigma2 = -sigma1 and sigma4 = -sigma3, (sigma1, sigma3) uniform
    for s in np.ndindex(w.shape):
        expected = 0.25 if (s[1] != s[0] and s[3] != s[2]) else 0.0
        assert w[s] == pytest.approx(expected, abs=1e-12)


def test_verify_examples():
    q = eprb.trace_distribution(math.pi / 2)
    prob = lpmatch.problem_from_marginals(q, CYCLE_PAIRS)
    p = lpmatch.solve(prob).witness
    assert max(lpmatch.verify(p, prob).target_residuals) <= 1e-12

    anti = lpmatch.MatchingProblem(OutcomeSpace.binary(2), (((0, 1), [0, 0.5, 0.5, 0]),))
    rep = lpmatch.verify(uniform(anti.space), anti)
    assert rep.target_residuals == (0.25,) and not rep.ok


def test_zero_support():
    u = uniform(B4)
    a = lpmatch.solve_with_zero_support(u, CYCLE_PAIRS)
    b = lpmatch.solve(lpmatch.problem_from_marginals(u, CYCLE_PAIRS))
    assert np.array_equal(a.witness.values, b.witness.values)

    v = np.full(16, 1 / 15)
    v[5] = 0.0
    q = make_distribution(B4, v)
    res = lpmatch.solve_with_zero_support(q, [(k,) for k in range(4)])
    assert res.feasible and res.witness.values[5] == 0.0


def test_inconsistent_targets():
    prob = lpmatch.MatchingProblem(
        OutcomeSpace.binary(2), (((0,), [0.5, 0.5]), ((0, 1), [0.6, 0.2, 0.1, 0.1]))
    )
    with pytest.raises(InconsistentTargets) as exc:
        lpmatch.solve(prob)
    assert exc.value.pair == ((0,), (0, 1))
    with pytest.raises(InconsistentTargets):
        lpmatch.solve(lpmatch.MatchingProblem(OutcomeSpace.binary(1), (((0,), [1.2, -0.2]),)))


def test_cap():
    prob = lpmatch.MatchingProblem(OutcomeSpace.binary(15), (((0,), [0.5, 0.5]),))
    with pytest.raises(CapExceeded):
        lpmatch.solve(prob)
    with pytest.raises(CapExceeded):
        lpmatch.solve(lpmatch.MatchingProblem(OutcomeSpace.binary(13), (((0,), [0.5, 0.5]),)), exact=True)


def test_exact_mode():
    res = lpmatch.solve(pr_box(), exact=True)
    assert not res.feasible and res.phase1_objective > 0
    q = eprb.trace_distribution(math.pi / 2)
    res = lpmatch.solve(lpmatch.problem_from_marginals(q, CYCLE_PAIRS), exact=True)
    assert res.feasible and res.phase1_objective == 0


def test_phase1_exact_fractions():
    A = np.array([[1.0, 1.0], [1.0, -1.0]])
    obj, x, y = simplex.phase1_exact(A, [1.0, 1 / 3])
    assert obj == 0 and x == [Fraction(2, 3), Fraction(1, 3)]
    obj, _, y = simplex.phase1_exact(A, [1.0, 2.0])
    assert obj > 0


def test_backends_bit_identical(rng):
    if len(lpmatch.BACKENDS) < 2:
        pytest.skip("compiled kernel not built")
    for _ in range(200):
        prob, _ = random_cycle_instance(rng)
        A, b, _ = lpmatch.constraint_system(prob)
        r1 = simplex.phase1(A, b, backend="python")
        r2 = simplex.phase1(A, b, backend="cython")
        assert np.array_equal(r1.x, r2.x)
        assert np.array_equal(r1.farkas, r2.farkas)
        assert r1.objective == r2.objective and r1.iterations == r2.iterations


def test_deterministic(rng):
    prob, _ = random_cycle_instance(rng)
    a, b = lpmatch.solve(prob), lpmatch.solve(prob)
    assert a.verdict is b.verdict and a.to_json() == b.to_json()


def test_json_and_schema(tmp_path):
    prob = pr_box()
    obj = prob.to_json()
    jsonschema.validate(obj, schemas.PROBLEM)
    path = tmp_path / "p.json"
    path.write_text(json.dumps(obj))
    back = lpmatch.load_problem(path)
    assert back.subsets == prob.subsets
    res = lpmatch.solve(back)
    jsonschema.validate(res.to_json(), schemas.MATCH_RESULT)
    good = lpmatch.solve(lpmatch.problem_from_marginals(uniform(B4), CYCLE_PAIRS))
    jsonschema.validate(good.to_json(), schemas.MATCH_RESULT)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.lists(st.integers(2, 3), min_size=2, max_size=3))
def test_agrees_with_hull_oracle(seed, shape):
    # pair targets drawn from a perturbed probability; positive ones kept
    r = np.random.default_rng(seed)
    size = int(np.prod(shape))
    if size > 16:
        shape = shape[:2]
        size = int(np.prod(shape))
    v = r.dirichlet(np.ones(size)) + r.normal(0, 0.6 / size, size)
    v += (1 - v.sum()) / size
    q = make_distribution(OutcomeSpace.of(shape), v, 1e-9)
    n = len(shape)
    subsets = [s for s in ((i, j) for i in range(n) for j in range(i + 1, n)) if marginal_table(q, s).min() > 1e-6]
    if not subsets:
        subsets = [(0,)] if marginal_table(q, (0,)).min() >= 0 else []
    if not subsets:
        return
    prob = lpmatch.problem_from_marginals(q, subsets)
    res = lpmatch.solve(prob)
    assert res.feasible == hull_feasible(prob.space.shape, prob.targets)
    if res.feasible:
        assert lpmatch.verify(res.witness, prob, 1e-9).ok


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_dropping_targets_keeps_feasibility(seed):
    # feasibility is monotone: removing a target never breaks it
    r = np.random.default_rng(seed)
    prob, _ = random_cycle_instance(r)
    res = lpmatch.solve(prob)
    for k in range(4):
        sub = lpmatch.MatchingProblem(prob.space, prob.targets[:k] + prob.targets[k + 1 :])
        if res.feasible:
            assert lpmatch.solve(sub).feasible


def test_pure_python_switch():
    code = "from qviability import lpmatch; print(lpmatch.BACKEND)"
    env = {**os.environ, "QVIABILITY_PURE_PYTHON": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
