import random
from math import isqrt

import pytest
from hypothesis import given, settings, strategies as st

from toricstab.dim2 import (COMPLEX_NOT_ROOT_OF_UNITY, IMPOSSIBLE_ANY, IMPOSSIBLE_REGULAR,
                            INT_DISTINCT, IRRATIONAL_MIXED_SIGN, IRRATIONAL_SAME_SIGN,
                            NON_DIAGONALIZABLE, REGULAR_STABILIZED, ROOT_OF_UNITY_RATIO,
                            SCALAR, STABILIZED_IRREGULAR, OrbitState2D, branch_sequence,
                            classify2d, decide_regular_stabilizable, detect_period,
                            divisor_obstruction, orbit_recursion, orbit_step, orbit_step_back,
                            seed_state, stabilize_2d, state_from_basis)
from toricstab.fan import classify_fan, irregular_cones, is_refinement, standard_fan
from toricstab.latlin import det, matmul
from toricstab.monomial import STABLE, MonomialMap, check_1stable, verify_certificate
from toricstab.refine import regularize, stellar_subdivide

import oracles

MIXED_NO = [[-1, 3], [3, 2]]
CUBE_SCALAR = [[-1, -1], [3, -1]]
MIXED_YES = [[2, 1], [1, -1]]


# ------------------------------------------------------------ classification

@pytest.mark.parametrize("phi, tag", [
    (MIXED_NO, IRRATIONAL_MIXED_SIGN),
    (CUBE_SCALAR, ROOT_OF_UNITY_RATIO),
    ([[2, 1], [1, 1]], IRRATIONAL_SAME_SIGN),
    ([[2, 0], [0, -1]], INT_DISTINCT),
    ([[3, 0], [0, 3]], SCALAR),
    ([[2, 1], [0, 2]], NON_DIAGONALIZABLE),
    ([[0, -1], [1, 0]], ROOT_OF_UNITY_RATIO),
    ([[1, -2], [1, 1]], COMPLEX_NOT_ROOT_OF_UNITY),
])
def test_classify(phi, tag):
    assert classify2d(phi).tag == tag


# ------------------------------------------------------------ orbit recursion

def test_mixed_no_first_step():
    s = OrbitState2D(3, -3, 3, 1)
    nxt = orbit_recursion(s)
    assert nxt.key == (3, 3, 3)
    assert nxt.matrix == [[2, 3], [3, -1]]
    assert orbit_recursion(nxt).key == (3, -3, 3)


def test_period_four_orbit():
    s = OrbitState2D(1, 3, 1, 1)
    seen = []
    for _ in range(5):
        seen.append(s.key)
        s = orbit_step(s)
    assert seen == [(1, 3, 1), (1, -3, 1), (1, -1, 3), (1, 1, 3), (1, 3, 1)]


def test_backward_inverts_forward():
    s = seed_state(MIXED_NO)
    for _ in range(6):
        t = orbit_step(s)
        back = orbit_step_back(t)
        assert back.key == s.key
        # the swap branch may flip both basis vectors, which leaves the matrix unchanged
        sign = 1 if back.v1 == s.v1 else -1
        assert back.v1 == tuple(sign * x for x in s.v1)
        assert back.v2 == tuple(sign * x for x in s.v2)
        s = t


def test_state_matches_matrix_in_new_basis():
    s = seed_state(MIXED_NO)       # trace 1 > 0, so the seed describes MIXED_NO itself
    for _ in range(5):
        assert state_from_basis(MIXED_NO, s.v1, s.v2).key == s.key
        s = orbit_step(s)


def test_tie_raises():
    with pytest.raises(ValueError):
        orbit_step(OrbitState2D(1, 0, 1, 2))


def test_detect_period_examples():
    p, states = detect_period(seed_state(MIXED_NO))
    assert p == 2 and {s.key for s in states} == {(3, -3, 3), (3, 3, 3)}
    p, states = detect_period(OrbitState2D(1, 3, 1, 1))
    assert p == 4


def test_balanced_state_is_a_tie():
    # b = c, delta = 0 gives D = 4b^2, a square: rational eigenvalues, so the tie fires
    s = OrbitState2D(2, 0, 2, 1)
    assert isqrt(s.D) ** 2 == s.D
    with pytest.raises(ValueError):
        orbit_step(s)


def test_pre_periodic_seed():
    p, cycle = detect_period(OrbitState2D(18, 3, 5, 15))
    assert (18, 3, 5) not in [c.key for c in cycle]
    s = cycle[0]
    for _ in range(p):
        s = orbit_step(s)
    assert s.key == cycle[0].key


# ------------------------------------------------------------ decision

def test_decide_mixed_no_no():
    d = decide_regular_stabilizable(MIXED_NO)
    assert d.verdict == "NO"
    assert d.gamma == 1 and d.D == 45
    assert all(abs(dl) > d.gamma for _, dl, _ in d.cycle)
    assert sorted(map(tuple, d.proof()["cycle"])) == [(3, -3, 3), (3, 3, 3)]


def test_decide_mixed_yes():
    d = decide_regular_stabilizable(MIXED_YES)
    assert d.verdict == "YES"
    assert d.state.nonnegative and all(x >= 0 for r in d.state.matrix for x in r)
    assert (1, 1, 3) in d.cycle
    assert OrbitState2D(1, 1, 3, 1).matrix == [[1, 1], [3, 0]]


@pytest.mark.parametrize("phi", [[[0, 1], [1, 3]], [[3, 2], [1, 0]], [[4, 1], [1, 0]]])
def test_small_second_eigenvalue_is_yes(phi):
    c = classify2d(phi)
    assert c.tag == IRRATIONAL_MIXED_SIGN
    t, d = c.trace, c.det
    mu2 = min((t + s * (t * t - 4 * d) ** 0.5) / 2 for s in (1, -1))
    assert abs(mu2) < 1
    assert decide_regular_stabilizable(phi).verdict == "YES"


def test_decision_not_applicable():
    assert decide_regular_stabilizable([[2, 1], [1, 1]]).verdict not in ("YES", "NO")


# ------------------------------------------------------------ stabilize_2d

def assert_output_contract(phi, base, res):
    out = res.fan
    assert is_refinement(out, base)
    assert classify_fan(out).complete
    assert res.certificate is not None
    assert verify_certificate(phi, out, res.certificate)


def test_int_distinct_pumping(box):
    phi = [[2, 0], [0, -1]]
    res = stabilize_2d(phi, box)
    assert res.tag == REGULAR_STABILIZED
    assert res.report["r"] == [1, 1]
    rays = set(res.fan.rays)
    assert {(1, 1), (1, -1), (-1, 1), (-1, -1)} <= rays
    assert MonomialMap(phi)((1, 1)) == (2, -1)
    assert oracles.cone_contains([(1, 0), (1, -1)], (2, -1))
    assert res.fan.has_cone_vectors([(1, 0), (1, 1)])
    assert res.fan.has_cone_vectors([(1, 0), (1, -1)])
    c = classify_fan(res.fan)
    assert c.regular and c.complete
    assert check_1stable(phi, res.fan).tag == STABLE
    assert_output_contract(phi, box, res)


@pytest.mark.parametrize("kind", ["P", "box"])
def test_mixed_no_irregular_fallback(kind):
    base = standard_fan(kind, 2)
    res = stabilize_2d(MIXED_NO, base)
    assert res.impossibility["kind"] == IMPOSSIBLE_REGULAR
    assert len(res.impossibility["proof"]["cycle"]) == 2
    assert res.tag == STABILIZED_IRREGULAR
    planted = {frozenset(p) for p in res.planted}
    assert len(planted) == 4
    bad = {frozenset(res.fan.gens(k)) for k in irregular_cones(res.fan)}
    assert bad and bad <= planted
    assert_output_contract(MIXED_NO, base, res)


def test_same_sign_on_p2(p2):
    phi = [[2, 1], [1, 1]]
    res = stabilize_2d(phi, p2)
    assert res.tag == REGULAR_STABILIZED
    assert classify_fan(res.fan).regular
    assert check_1stable(phi, res.fan).tag == STABLE
    assert_output_contract(phi, p2, res)


def test_mixed_yes_stabilizes(box):
    res = stabilize_2d(MIXED_YES, box)
    assert res.tag == REGULAR_STABILIZED and classify_fan(res.fan).regular
    assert check_1stable(MIXED_YES, res.fan).tag == STABLE


@pytest.mark.parametrize("phi", [[[3, 0], [0, 3]], [[2, 1], [0, 2]], [[0, -1], [1, 0]],
                                 [[3, 0], [0, 2]], [[-2, 1], [0, -2]]])
def test_other_cases_regular(phi, p2):
    res = stabilize_2d(phi, p2)
    assert res.tag == REGULAR_STABILIZED
    assert classify_fan(res.fan).regular
    assert_output_contract(phi, p2, res)


def test_dense_orbits_impossible(p2):
    res = stabilize_2d([[1, -2], [1, 1]], p2)
    assert res.tag == IMPOSSIBLE_ANY and res.fan is None


def test_cube_scalar_obstruction(box):
    assert classify2d(CUBE_SCALAR).tag == ROOT_OF_UNITY_RATIO
    cube = matmul(matmul(CUBE_SCALAR, CUBE_SCALAR), CUBE_SCALAR)
    assert cube == [[8, 0], [0, 8]]
    test = divisor_obstruction(CUBE_SCALAR)
    assert test["impossible"] and test["k"] == 3 and test["abs_det"] == 4
    res = stabilize_2d(CUBE_SCALAR, box)
    assert res.impossibility["kind"] == IMPOSSIBLE_REGULAR
    assert not classify_fan(res.fan).regular
    assert_output_contract(CUBE_SCALAR, box, res)


def test_incomplete_input_is_completed(p2):
    from conftest import half_plane
    res = stabilize_2d([[2, 1], [1, 1]], half_plane())
    assert res.report["completed_input"] and classify_fan(res.fan).complete


def test_rank_three_rejected(p3):
    with pytest.raises(ValueError):
        stabilize_2d([[1, 0], [0, 1]], p3)


def test_no_regular_stable_fan_probe():
    # falsification probe: random regular fans never make mixed_no stable
    rng = random.Random(7)
    for _ in range(50):
        f = standard_fan(rng.choice(["P", "box"]), 2)
        for _ in range(rng.randint(0, 4)):
            v = (rng.randint(-4, 4), rng.randint(-4, 4))
            if any(v):
                f = stellar_subdivide(f, v)
        f = regularize(f)
        assert check_1stable(MIXED_NO, f, n_max=60).tag != STABLE


# ------------------------------------------------------------ properties

def random_mixed_state(rng):
    """A reduced triple with irrational mixed-sign eigenvalues."""
    while True:
        b, c = rng.randint(1, 30), rng.randint(1, 30)
        gamma = rng.randint(-20, 20)
        delta = rng.randrange(-41, 42)
        if (delta - gamma) % 2:
            continue
        d = delta * delta + 4 * b * c
        if d > gamma * gamma and isqrt(d) ** 2 != d:
            return OrbitState2D(b, delta, c, gamma)


def conservation_holds(seed, steps):
    s = random_mixed_state(random.Random(seed))
    d, g = s.D, s.gamma
    for _ in range(steps):
        s = orbit_step(s)
        if s.D != d or s.gamma != g or s.b <= 0 or s.c <= 0:
            return False
    return True


@given(st.integers(0, 10 ** 9))
def test_orbit_conserves_d_and_gamma(seed):
    assert conservation_holds(seed, 300)


@given(st.integers(0, 10 ** 9))
def test_period_replays(seed):
    s = random_mixed_state(random.Random(seed))
    p, states = detect_period(s)
    cur = states[0]
    for n in range(3):
        ahead = cur
        for _ in range(p):
            ahead = orbit_step(ahead)
        assert ahead.key == cur.key
        cur = orbit_step(cur)


def branches_match_cf(state, n=20):
    digits = oracles.cf_digits(state.b, state.delta, state.c, n)
    expected = oracles.branches_from_digits(digits)
    return branch_sequence(state, len(expected)) == expected


def test_branches_match_cf_for_yes_examples():
    for phi in (MIXED_YES, [[0, 1], [1, 3]], [[3, 2], [1, 0]]):
        assert branches_match_cf(seed_state(phi))


@given(st.integers(0, 10 ** 9))
def test_branches_match_cf_random(seed):
    assert branches_match_cf(random_mixed_state(random.Random(seed)))


@settings(max_examples=15)
@given(st.integers(0, 10 ** 9))
def test_stabilize_outputs_random(seed):
    rng = random.Random(seed)
    while True:
        phi = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
        if det(phi) != 0 and classify2d(phi).tag != COMPLEX_NOT_ROOT_OF_UNITY:
            break
    base = standard_fan(rng.choice(["P", "box"]), 2)
    res = stabilize_2d(phi, base)
    if res.fan is not None and res.certificate is not None:
        assert_output_contract(phi, base, res)
    if decide_regular_stabilizable(phi).verdict == "YES":
        assert res.tag == REGULAR_STABILIZED
