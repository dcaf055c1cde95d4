"""End-to-end acceptance checks; each prints one PASS/FAIL line."""
import random
import time

import pytest

from toricstab.dim2 import (IMPOSSIBLE_REGULAR, REGULAR_STABILIZED, ROOT_OF_UNITY_RATIO,
                            STABILIZED_IRREGULAR, OrbitState2D, classify2d,
                            decide_regular_stabilizable, detect_period, divisor_obstruction,
                            orbit_recursion, seed_state, stabilize_2d)
from toricstab.exactnum import isolate_real_roots
from toricstab.fan import classify_fan, irregular_cones, is_refinement, standard_fan
from toricstab.latlin import charpoly, matmul
from toricstab.monomial import STABLE, check_1stable, trace_obstruction, verify_certificate
from toricstab.ndim import build_fan_thmB, reduced_tree, stabilize_nd

import oracles
from test_dim2 import branches_match_cf, conservation_holds, random_mixed_state
from test_monomial import composition_disagreement
from test_ndim import node_keys, random_simple_real
from test_refine import run_plan


def report(capsys, number, title, check):
    """Run check() -> (ok, detail), print a single line and assert."""
    start = time.perf_counter()
    try:
        ok, detail = check()
    except Exception as exc:            # reported as a failure line, then re-raised
        ok, detail = False, f"{type(exc).__name__}: {exc}"
        with capsys.disabled():
            print(f"\n[criterion {number}] FAIL  {title}  ({detail})")
        raise
    took = time.perf_counter() - start
    with capsys.disabled():
        print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}  {title}  "
              f"({detail}; {took:.2f}s)")
    assert ok, detail


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def test_criterion_1_mixed_sign_no(capsys):
    phi = [[-1, 3], [3, 2]]

    def check():
        def work():
            first = orbit_recursion(OrbitState2D(3, -3, 3, 1))
            p, cycle = detect_period(seed_state(phi))
            decision = decide_regular_stabilizable(phi)
            res = stabilize_2d(phi, standard_fan("box", 2))
            return first, p, cycle, decision, res

        (first, p, cycle, decision, res), took = timed(work)
        planted = {frozenset(c) for c in res.planted}
        bad = {frozenset(res.fan.gens(k)) for k in irregular_cones(res.fan)}
        ok = (first.matrix == [[2, 3], [3, -1]] and p == 2
              and {s.key for s in cycle} == {(3, -3, 3), (3, 3, 3)}
              and decision.verdict == "NO"
              and res.impossibility["kind"] == IMPOSSIBLE_REGULAR
              and res.tag == STABILIZED_IRREGULAR
              and len(planted) == 4 and bad and bad <= planted
              and verify_certificate(phi, res.fan, res.certificate)
              and took < 1.0)
        return ok, f"A1={first.matrix}, period {p}, {len(bad)} irregular cones, {took:.2f}s"

    report(capsys, 1, "non-regularizable mixed-sign map", check)


def test_criterion_2_root_of_unity(capsys):
    phi = [[-1, -1], [3, -1]]

    def check():
        def work():
            return (classify2d(phi).tag, matmul(matmul(phi, phi), phi), divisor_obstruction(phi))

        (tag, cube, test), took = timed(work)
        ok = (tag == ROOT_OF_UNITY_RATIO and cube == [[8, 0], [0, 8]] and test["impossible"]
              and test["abs_det"] == 4 and took < 1.0)
        return ok, f"{tag}, phi^3={cube}, impossible={test['impossible']}"

    report(capsys, 2, "root-of-unity ratio obstruction", check)


def test_criterion_3_negative_trace(capsys):
    phi = [[3, 1, 0], [1, -2, 1], [0, 1, -2]]

    def check():
        def work():
            return trace_obstruction(phi), isolate_real_roots(charpoly(phi))

        (screen, roots), took = timed(work)
        approx = sorted(round(float(r), 4) for r in roots)
        ok = screen == "OBSTRUCTED" and approx == [-3.0855, -1.1142, 3.1997] and took < 1.0
        return ok, f"{screen}, roots {approx}"

    report(capsys, 3, "negative-trace screen", check)


def test_criterion_4_integer_mixed_sign(capsys):
    phi = [[2, 0], [0, -1]]

    def check():
        (res, verdict), took = timed(lambda: (lambda r: (r, check_1stable(phi, r.fan)))(
            stabilize_2d(phi, standard_fan("box", 2))))
        c = classify_fan(res.fan)
        ok = (res.tag == REGULAR_STABILIZED and res.report["r"] == [1, 1]
              and verdict.tag == STABLE and c.regular and c.complete and took < 1.0)
        return ok, f"{res.tag}, r={res.report['r']}, {verdict.tag}"

    report(capsys, 4, "integer mixed-sign regular stabilization", check)


def test_criterion_5_composition_oracle(capsys):
    def check():
        bad = [s for s in range(200) if composition_disagreement(s)]
        return not bad, f"{len(bad)} disagreements in 200 triples"

    report(capsys, 5, "composition criterion vs pullbacks", check)


def test_criterion_6_incorporation_contract(capsys):
    def check():
        failures = []
        for seed in range(100):
            try:
                run_plan(seed, 2 + seed % 2)
            except Exception as exc:     # collect, keep counting
                failures.append((seed, type(exc).__name__))
        return not failures, f"{len(failures)} failures in 100 plans {failures[:3]}"

    report(capsys, 6, "cone incorporation contract", check)


def test_criterion_7_orbit_invariants(capsys):
    def check():
        broken = [s for s in range(100) if not conservation_holds(s, 10 ** 4)]
        cf_bad = [s for s in range(20) if not branches_match_cf(random_mixed_state(random.Random(s)))]
        ok = not broken and not cf_bad
        return ok, f"{len(broken)} conservation failures, {len(cf_bad)} digit mismatches"

    report(capsys, 7, "orbit invariants and continued fractions", check)


@pytest.mark.parametrize("phi, m", [([[3, 0], [0, 2]], 2), ([[2, 1, 0], [1, 1, 0], [0, 0, 5]], 3)])
def test_criterion_8_positive_spectrum(capsys, phi, m):
    def check():
        base = standard_fan("P", m)
        res, took = timed(lambda: stabilize_nd(phi, base))
        f = res.fan
        c = classify_fan(f)
        ok = (res.verdict == STABLE and c.simplicial and is_refinement(f, base)
              and oracles.direct_strict_convexity(res.support)
              and verify_certificate(phi, f, res.certificate)
              and check_1stable(phi, f).tag == STABLE and took < 60)
        return ok, f"m={m}, {len(f.rays)} rays, {took:.1f}s"

    report(capsys, 8, f"positive-spectrum stabilization, m={m}", check)


@pytest.mark.parametrize("phi", [[[3, 0], [0, 2]], [[2, 1], [1, 1]]])
def test_criterion_9_orthant_fan(capsys, phi):
    def check():
        res, took = timed(lambda: build_fan_thmB(phi))
        c = classify_fan(res.fan)
        ok = (c.complete and c.simplicial and oracles.direct_strict_convexity(res.support)
              and res.certificate is not None
              and verify_certificate(phi, res.fan, res.certificate) and took < 5)
        return ok, f"generators {res.report['generators']}"

    report(capsys, 9, f"invariant orthant fan for {phi}", check)


def test_criterion_10_tree_oracle(capsys):
    def check():
        rng = random.Random(2024)
        bad = 0
        for _ in range(50):
            a = random_simple_real(rng)
            if node_keys(reduced_tree(a)) != oracles.rational_invariant_subspaces(a):
                bad += 1
        return bad == 0, f"{bad} mismatches in 50 matrices"

    report(capsys, 10, "invariant-subspace tree vs brute force", check)
