import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toricstab.fan import classify_fan, cone_geometry, is_refinement, standard_fan
from toricstab.latlin import eigen_structure
from toricstab.monomial import STABLE, MonomialMap, check_1stable, verify_certificate
from toricstab.ndim import (HypothesisError, build_fan_thmB, chamber_of, check_adapted_system,
                            cone_is_adapted, find_adapted_system, gamma_directions, in_chamber,
                            orthant_fan, prepare_fan, rational_adapted_system, reduced_tree, stabilize_iterate,
                            stabilize_nd)

import oracles

DIAG = [[3, 0], [0, 2]]
FIB = [[2, 1], [1, 1]]
BLOCK3 = [[2, 1, 0], [1, 1, 0], [0, 0, 3]]
BLOCK5 = [[2, 1, 0], [1, 1, 0], [0, 0, 5]]
NEG_TRACE = [[3, 1, 0], [1, -2, 1], [0, 1, -2]]


def node_keys(tree):
    m = tree.phi.rank
    return {oracles.span_key(list(n.space.basis), m) for n in tree.nodes}


def node_with_basis(tree, basis):
    return next(i for i, n in enumerate(tree.nodes) if n.space.basis == tuple(basis))


@pytest.fixture(scope="module")
def nd3():
    return stabilize_nd(BLOCK5, standard_fan("P", 3))


# ------------------------------------------------------------ reduced tree

def test_tree_diag():
    t = reduced_tree(DIAG)
    x, y = node_with_basis(t, [(1, 0)]), node_with_basis(t, [(0, 1)])
    top = node_with_basis(t, [(1, 0), (0, 1)])
    assert t.nodes[x].parent == 0 and t.nodes[y].parent == 0
    assert t.nodes[top].parent == x        # the dominant eigenline comes first
    assert len(t.nodes) == 4


def test_tree_irrational_chain():
    t = reduced_tree(FIB)
    assert len(t.nodes) == 2 and t.nodes[1].space.dim == 2 and t.nodes[1].parent == 0


def test_tree_block():
    t = reduced_tree(BLOCK3)
    z = node_with_basis(t, [(0, 0, 1)])
    xy = node_with_basis(t, [(1, 0, 0), (0, 1, 0)])
    full = node_with_basis(t, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert t.nodes[z].parent == 0 and t.nodes[xy].parent == 0
    assert t.nodes[full].parent == z
    assert node_keys(t) == oracles.rational_invariant_subspaces(BLOCK3)


def test_tree_rejects_complex():
    with pytest.raises(HypothesisError):
        reduced_tree([[0, -1], [1, 0]])


def random_simple_real(rng, m=3):
    while True:
        a = [[rng.randint(-3, 3) for _ in range(m)] for _ in range(m)]
        s = eigen_structure(a)
        if s.det != 0 and s.real_simple:
            return a


@given(st.integers(0, 10 ** 9))
def test_tree_matches_brute_force(seed):
    a = random_simple_real(random.Random(seed))
    assert node_keys(reduced_tree(a)) == oracles.rational_invariant_subspaces(a)


# ------------------------------------------------------------ chambers

def test_chamber_examples():
    t = reduced_tree(DIAG)
    x = node_with_basis(t, [(1, 0)])
    full = node_with_basis(t, [(1, 0), (0, 1)])
    c = chamber_of(t, (5, 0))
    assert (c.node, c.eta) == (x, (1,))
    c = chamber_of(t, (1, 1))
    assert (c.node, c.eta) == (full, (1, 1))
    t2 = reduced_tree(FIB)
    c = chamber_of(t2, (0, 1))
    assert (c.node, c.eta) == (1, (1,))


def test_chamber_of_zero_rejected():
    with pytest.raises(ValueError):
        chamber_of(reduced_tree(DIAG), (0, 0))


@settings(max_examples=20)
@given(st.integers(0, 10 ** 9))
def test_chambers_partition(seed):
    rng = random.Random(seed)
    a = random_simple_real(rng)
    t = reduced_tree(a)
    addresses = [(n, eta) for n in range(1, len(t.nodes)) for eta in t.sign_vectors(n)]
    for _ in range(25):
        v = tuple(rng.randint(-6, 6) for _ in range(3))
        if not any(v):
            continue
        c = chamber_of(t, v)
        assert oracles.span_key(list(t.nodes[c.node].space.basis), 3) == oracles.krylov_key(a, v)
        hits = [addr for addr in addresses if in_chamber(t, addr[0], addr[1], v)]
        assert hits == [(c.node, c.eta)]


# ------------------------------------------------------------ adapted systems

def test_find_system_box(box):
    t = reduced_tree(DIAG)
    s = find_adapted_system(box, t)
    assert s is not None
    full = node_with_basis(t, [(1, 0), (0, 1)])
    x = node_with_basis(t, [(1, 0)])
    assert s.get(x, (1,)) == ((1, 0),) and s.get(x, (-1,)) == ((-1, 0),)
    assert s.get(full, (1, -1)) == ((0, -1), (1, 0))
    assert check_adapted_system(t, s) == []


def test_find_system_p2_none(p2):
    assert find_adapted_system(p2, reduced_tree(DIAG)) is None


@pytest.mark.parametrize("phi", [DIAG, FIB, BLOCK3])
def test_rational_system_round_trip(phi):
    t = reduced_tree(phi)
    s = rational_adapted_system(phi, t)
    assert check_adapted_system(t, s) == []
    f = prepare_fan(phi, standard_fan("P", len(phi)), tree=t).fan
    again = find_adapted_system(f, t)
    assert again is not None and check_adapted_system(t, again) == []


def test_rational_system_diag():
    t = reduced_tree(DIAG)
    s = rational_adapted_system(DIAG, t)
    full = node_with_basis(t, [(1, 0), (0, 1)])
    for eta in t.sign_vectors(full):
        gens = s.get(full, eta)
        assert (eta[0], 0) in gens
        assert all(eta[0] * g[0] >= 0 and eta[1] * g[1] >= 0 for g in gens)


def test_rational_system_fib_straddles():
    t = reduced_tree(FIB)
    s = rational_adapted_system(FIB, t)
    golden = (1.6180339887, 1.0)
    for sign in (1, -1):
        gens = s.get(1, (sign,))
        e = tuple(sign * x for x in golden)
        # the dominant eigenray is strictly inside
        a, b = gens
        cross = lambda u, w: u[0] * w[1] - u[1] * w[0]
        assert cross(a, e) * cross(a, b) > 0 and cross(e, b) * cross(a, b) > 0


def test_prepared_fan_system_unique():
    # second route: scan every cone of the fan, not just those around the parent cone
    t = reduced_tree(BLOCK3)
    f = prepare_fan(BLOCK3, standard_fan("P", 3), tree=t).fan
    walk = find_adapted_system(f, t)
    for (n, eta), gens in walk.cones.items():
        space = t.nodes[n].space
        parent = walk.get(t.nodes[n].parent, eta[:-1])
        hits = {tuple(sorted(f.gens(k))) for k in f.cones()
                if len(k) == space.dim and all(space.contains(g) for g in f.gens(k))
                and cone_is_adapted(t, n, eta, f.gens(k), parent) is None}
        assert hits == {tuple(gens)}


# ------------------------------------------------------------ gamma directions

def test_gamma_two_dim():
    t = reduced_tree(FIB)
    g = gamma_directions(FIB, t, 1, (1,), [Fraction(1, 4)])
    assert g.v[(1, 1)] == {(1, 1): 1, (1, 2): Fraction(-1, 4)}
    assert g.v[(1, 2)] == {(1, 1): 1, (1, 2): Fraction(1, 4)}
    assert g.duality[((1, 1), (1, 2))] == 0
    assert g.duality[((1, 1), (1, 1))] > 0
    assert all(s > 0 for s in g.invariance.values())


def test_gamma_three_dim():
    t = reduced_tree(BLOCK5)
    full = node_with_basis(t, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    g = gamma_directions(BLOCK5, t, full, (1, 1), [Fraction(1, 4), Fraction(1, 4)], [Fraction(1, 4)])
    for (a, b), val in g.duality.items():
        assert (val > 0) if a == b else (val == 0)
    assert all(s > 0 for s in g.invariance.values())


def test_gamma_rejects_bad_parameters():
    t = reduced_tree(FIB)
    with pytest.raises(ValueError):
        gamma_directions(FIB, t, 1, (1,), [0])


# ------------------------------------------------------------ prepare_fan

def test_prepare_p2_diag(p2):
    prep = prepare_fan(DIAG, p2)
    rays = set(prep.fan.rays)
    assert {(1, 0), (-1, 0), (0, 1), (0, -1)} <= rays
    c = classify_fan(prep.fan)
    assert c.regular and c.complete and c.simplicial
    assert is_refinement(prep.fan, p2)
    assert prep.support.is_strictly_convex()
    assert oracles.direct_strict_convexity(prep.support)


def test_prepare_idempotent(p2):
    f = prepare_fan(DIAG, p2).fan
    assert prepare_fan(DIAG, f).fan == f


def test_prepare_3d(p3):
    prep = prepare_fan(BLOCK3, p3)
    assert find_adapted_system(prep.fan, prep.tree) is not None
    assert classify_fan(prep.fan).regular


# ------------------------------------------------------------ stabilize_nd

def assert_nd_contract(phi, base, res):
    f = res.fan
    assert res.verdict == STABLE
    c = classify_fan(f)
    assert c.simplicial and c.complete
    assert is_refinement(f, base)
    assert oracles.direct_strict_convexity(res.support)
    assert verify_certificate(phi, f, res.certificate)
    assert check_1stable(phi, f).tag == STABLE
    for gens in res.planted.values():
        assert f.has_cone_vectors(gens)
        geo = cone_geometry(tuple(gens))
        assert all(geo.contains(MonomialMap(phi)(g)) for g in gens)


def test_nd_diag(p2):
    res = stabilize_nd(DIAG, p2)
    assert_nd_contract(DIAG, p2, res)
    quadrants = [g for g in res.planted.values() if len(g) == 2]
    assert len(quadrants) == 4


def test_nd_fib(p2):
    res = stabilize_nd(FIB, p2)
    assert_nd_contract(FIB, p2, res)
    assert len(res.planted) == 2


def test_nd_three_dim(nd3, p3):
    assert_nd_contract(BLOCK5, p3, nd3)


def test_nd_rejects_negative_trace(p3):
    with pytest.raises(HypothesisError, match="OBSTRUCTED"):
        stabilize_nd(NEG_TRACE, p3)


def test_nd_rejects_negative_eigenvalue(p2):
    with pytest.raises(HypothesisError):
        stabilize_nd([[3, 0], [0, -2]], p2)


# ------------------------------------------------------ iterate and orthant fan

def test_iterate_diag(p2):
    res = stabilize_iterate(DIAG, p2)
    assert res.n0 == 1 and res.verdict == STABLE


def test_iterate_scalar(p2):
    assert stabilize_iterate([[2, 0], [0, 2]], p2).n0 == 1


def test_iterate_sign_flip(p2):
    phi = [[-3, 0], [0, 2]]
    res = stabilize_iterate(phi, p2)
    assert res.n0 is not None and res.n0 <= 2
    assert classify_fan(res.fan).symmetric
    for n in range(res.n0, res.n0 + 4):
        assert check_1stable(MonomialMap(phi).power(n), res.fan).tag == STABLE


def test_iterate_rejects_equal_moduli(p2):
    with pytest.raises(HypothesisError):
        stabilize_iterate([[3, 0], [0, -3]], p2)


def test_thmb_diag():
    res = build_fan_thmB(DIAG)
    assert sorted(res.report["generators"]) == [[1, -1], [1, 1]]
    # exact coefficients of phi(v1), phi(v2) in (v1, v2)
    a, b = Fraction(5, 2), Fraction(1, 2)
    assert MonomialMap(DIAG)((1, 1)) == (a + b, a - b)
    assert MonomialMap(DIAG)((1, -1)) == (b + a, b - a)
    assert_thmb(DIAG, res)


def test_thmb_scalar():
    res = build_fan_thmB([[2, 0], [0, 2]])
    assert res.fan == orthant_fan([(1, 0), (0, 1)])
    assert_thmb([[2, 0], [0, 2]], res)


def test_thmb_fib():
    res = build_fan_thmB(FIB)
    gens = [tuple(g) for g in res.report["generators"]]
    assert oracles.cone_contains(gens, (1.6180339887, 1.0))
    assert all(oracles.cone_contains(gens, MonomialMap(FIB)(g)) for g in gens)
    assert oracles.cone_contains([(2, 1), (1, 1)], (5, 3))
    assert_thmb(FIB, res)


def test_thmb_prime_variant():
    phi = [[-3, 1], [1, 2]]
    res = build_fan_thmB(phi)
    assert res.report["variant"] == "B'" and res.n0 is not None
    for n in (res.n0, res.n0 + 1):
        assert check_1stable(MonomialMap(phi).power(n), res.fan).tag == STABLE


def test_thmb_rejects_complex():
    with pytest.raises(HypothesisError):
        build_fan_thmB([[0, -1], [1, 0]])


def assert_thmb(phi, res):
    f = res.fan
    c = classify_fan(f)
    assert c.complete and c.simplicial
    assert len(f.maximal) == 2 ** f.rank
    assert oracles.direct_strict_convexity(res.support)
    assert res.verdict == STABLE and verify_certificate(phi, f, res.certificate)


# ------------------------------------------------------------ attraction

def attraction_ok(phi, res, rng, m, samples=100, cap=400):
    psi = MonomialMap(phi)
    for _ in range(samples):
        v = tuple(rng.randint(-9, 9) for _ in range(m))
        if not any(v):
            continue
        c = chamber_of(res.tree, v)
        target = res.planted[(c.node, c.eta)]
        w = v
        for _ in range(cap):
            if oracles.cone_contains_any(target, w):
                break
            w = psi(w)
        else:
            return False
    return True


def test_attraction_two_dim(p2):
    for phi in (DIAG, FIB):
        assert attraction_ok(phi, stabilize_nd(phi, p2), random.Random(1), 2)


def test_attraction_three_dim(nd3):
    assert attraction_ok(BLOCK5, nd3, random.Random(2), 3)
