"""Dimension two: classification of phi, the orbit recursion and stabilization.

All fans here are complete fans in the plane, which are determined by their
ray sets: the maximal cones join angularly consecutive rays.  Most
constructions therefore manipulate sorted ray lists and only build a Fan at
the end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from math import isqrt

from .exactnum import AlgebraicNumber, FieldElement
from .fan import Fan, is_complete, is_refinement, is_regular, irregular_cones
from .latlin import det, matmul, primitive, scalar_power_order
from .monomial import MonomialMap, STABLE, check_1stable, verify_certificate
from .refine import LEFT, NOT_NESTED, subdivision_path

INT_DISTINCT = "INT_DISTINCT"
IRRATIONAL_SAME_SIGN = "IRRATIONAL_SAME_SIGN"
IRRATIONAL_MIXED_SIGN = "IRRATIONAL_MIXED_SIGN"
COMPLEX_NOT_ROOT_OF_UNITY = "COMPLEX_NOT_ROOT_OF_UNITY"
ROOT_OF_UNITY_RATIO = "ROOT_OF_UNITY_RATIO"
NON_DIAGONALIZABLE = "NON_DIAGONALIZABLE"
SCALAR = "SCALAR"

REGULAR_STABILIZED = "REGULAR_STABILIZED"
STABILIZED_IRREGULAR = "STABILIZED_IRREGULAR"
IMPOSSIBLE_ANY = "IMPOSSIBLE_ANY"
IMPOSSIBLE_REGULAR = "IMPOSSIBLE_REGULAR"
UNKNOWN = "UNKNOWN"

YES, NO, NOT_APPLICABLE = "YES", "NO", "N/A"


def _matrix(phi):
    m = MonomialMap.coerce(phi)
    if m.rank != 2:
        raise ValueError("rank must be 2")
    return m


def _sgn(x):
    if isinstance(x, FieldElement):
        return x.sign()
    return (x > 0) - (x < 0)


# ------------------------------------------------------------ classification

@dataclass
class Case2D:
    tag: str
    trace: int
    det: int
    disc: int
    eigenvalues: list = field(default_factory=list)   # human-readable descriptions

    def to_dict(self):
        return {"tag": self.tag, "trace": self.trace, "det": self.det,
                "discriminant": self.disc, "eigenvalues": self.eigenvalues}


def classify2d(phi) -> Case2D:
    m = _matrix(phi)
    (a, b), (c, d) = m.matrix
    tr, dt = a + d, m.det
    disc = tr * tr - 4 * dt
    if disc == 0:
        tag = SCALAR if b == 0 and c == 0 else NON_DIAGONALIZABLE
        eig = [str(Fraction(tr, 2))] * 2
    elif tr == 0:
        # mu1 = -mu2: the ratio is -1 (real or purely imaginary pair)
        tag = ROOT_OF_UNITY_RATIO
        eig = [f"±sqrt({-dt})"]
    elif disc < 0:
        tag = ROOT_OF_UNITY_RATIO if tr * tr in (dt, 2 * dt, 3 * dt) else COMPLEX_NOT_ROOT_OF_UNITY
        eig = [f"({tr} ± i·sqrt({-disc}))/2"]
    else:
        r = isqrt(disc)
        if r * r == disc:
            tag = INT_DISTINCT
            eig = [(tr + r) // 2, (tr - r) // 2]
        else:
            tag = IRRATIONAL_SAME_SIGN if dt > 0 else IRRATIONAL_MIXED_SIGN
            eig = [f"({tr} ± sqrt({disc}))/2"]
    return Case2D(tag, tr, dt, disc, eig)


class _Eigen:
    """Eigen data of s*phi, s = sign(trace), so that mu1 > 0 and mu1 > |mu2|."""

    def __init__(self, m: MonomialMap):
        (a, b), (c, d) = m.matrix
        tr = a + d
        if tr == 0:
            raise ValueError("equal moduli: no dominant eigenvalue")
        self.sign = 1 if tr > 0 else -1
        s = self.sign
        self.psi = MonomialMap([[s * a, s * b], [s * c, s * d]])
        self.gamma = s * tr
        self.disc = tr * tr - 4 * m.det
        r = isqrt(self.disc)
        if r * r == self.disc:
            self.gen = None
            root = Fraction(r)
        else:
            self.gen = AlgebraicNumber([-self.disc, 0, 1], 0, self.disc + 1)
            root = FieldElement.generator(self.gen)
        self.mu1 = (root + self.gamma) * Fraction(1, 2)
        self.mu2 = (-root + self.gamma) * Fraction(1, 2)
        self.e1 = self._vector(self.mu1)
        self.e2 = self._vector(self.mu2)

    def _vector(self, mu):
        (a, b), (c, d) = self.psi.matrix
        if b != 0:
            return (b + 0 * mu, mu - a)
        if c != 0:
            return (mu - d, c + 0 * mu)
        return (1 + 0 * mu, 0 * mu) if mu == a else (0 * mu, 1 + 0 * mu)

    def integer_vectors(self):
        return tuple(primitive([int(x) for x in _as_ints(e)]) for e in (self.e1, self.e2))

    def floats(self):
        out = []
        for e in (self.e1, self.e2):
            x, y = (float(t) for t in e)
            n = math.hypot(x, y)
            out.append((x / n, y / n))
        return out


def _as_ints(e):
    vals = [Fraction(x) if not isinstance(x, FieldElement) else x.rational_value() for x in e]
    den = math.lcm(*(v.denominator for v in vals))
    return [v * den for v in vals]


# ------------------------------------------------------- planar fan helpers

def _det2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _half(v):
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _angle_cmp(u, v):
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    cr = _det2(u, v)
    return -1 if cr > 0 else (1 if cr < 0 else 0)


def _pseudo_angle(v):
    t = v[0] / (abs(v[0]) + abs(v[1]))
    return (0, -t) if v[1] > 0 or (v[1] == 0 and v[0] > 0) else (1, t)


def sort_rays(rays):
    """Distinct primitive rays in counter-clockwise order starting at the positive x-axis."""
    uniq = {primitive(r) for r in rays}
    out = sorted(uniq, key=_pseudo_angle)
    # float keys are only a hint: confirm the order exactly
    if all(_angle_cmp(out[i], out[i + 1]) < 0 for i in range(len(out) - 1)):
        return out
    return sorted(uniq, key=cmp_to_key(_angle_cmp))


def cone_pairs(rays):
    rs = sort_rays(rays)
    return [(rs[i], rs[(i + 1) % len(rs)]) for i in range(len(rs))]


def fan_from_rays(rays) -> Fan:
    pairs = cone_pairs(rays)
    if len(pairs) < 3 or any(_det2(u, w) <= 0 for u, w in pairs):
        raise ValueError("rays do not positively span the plane")
    return Fan.from_vectors([list(p) for p in pairs], 2)


def _ccw(x, y):
    return (x, y) if _det2(x, y) > 0 else (y, x)


def _in_pair(pair, v):
    u, w = pair
    return _det2(u, v) >= 0 and _det2(v, w) >= 0


def _strictly_in_pair(pair, v):
    u, w = pair
    return _sgn(v[1] * u[0] - v[0] * u[1]) > 0 and _sgn(w[1] * v[0] - w[0] * v[1]) > 0


def _in_union(v, pairs):
    return any(_in_pair(p, v) for p in pairs)


def _neg(v):
    return tuple(-x for x in v)


def _neg_pair(p):
    return (_neg(p[0]), _neg(p[1]))


def _symmetric(rays):
    return sort_rays(list(rays) + [_neg(r) for r in rays])


def _egcd(a, b):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def hj_rays(u, w):
    """Rays of the minimal regular subdivision of cone(u, w), det(u, w) > 0, strictly inside."""
    u, w = primitive(u), primitive(w)
    d = _det2(u, w)
    out = []
    while d > 1:
        _, p, q = _egcd(u[0], u[1])
        up = (-q, p)                      # det(u, up) = 1
        alpha = _det2(w, up)
        c = -((-alpha) // d)
        nxt = (c * u[0] + up[0], c * u[1] + up[1])
        out.append(nxt)
        u = nxt
        d = _det2(u, w)
    return out


def regularize_rays(rays, frozen=()):
    """Resolve every non-frozen cone; canonical, so symmetric inputs stay symmetric."""
    frz = {frozenset(p) for p in frozen}
    out = list(sort_rays(rays))
    for u, w in cone_pairs(out):
        if frozenset((u, w)) not in frz and _det2(u, w) > 1:
            out.extend(hj_rays(u, w))
    return sort_rays(out)


_EIGHT = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]


def _rotated(a, v):
    return (a[0] * v[0] + a[1] * v[1], _det2(a, v))


def _strictly_ccw_between(a, v, b):
    ra, rv, rb = (0, 0), _rotated(a, v), _rotated(a, b)
    del ra
    if rv[1] == 0 and rv[0] > 0:
        return False
    if rb[1] == 0 and rb[0] > 0:       # full turn
        return True
    return _angle_cmp(rv, rb) < 0


def complete_fan2(f: Fan) -> Fan:
    """Fill the gaps of a planar fan; existing cones are kept."""
    if f.rank != 2:
        raise ValueError("rank must be 2")
    if is_complete(f):
        return f
    twos = {frozenset(f.vectors(k)) for k in f.maximal if len(k) == 2}
    rays = sort_rays(f.rays) if f.rays else []
    if not rays:
        return fan_from_rays(_EIGHT)
    extra = []
    for i, a in enumerate(rays):
        b = rays[(i + 1) % len(rays)]
        if frozenset((a, b)) in twos and _det2(a, b) > 0:
            continue
        if len(rays) > 1 and _det2(a, b) > 0:
            continue
        extra.extend(v for v in _EIGHT if _strictly_ccw_between(a, v, b))
    return fan_from_rays(rays + extra)


def _rays_of(f: Fan):
    return sort_rays(f.rays)


# ---------------------------------------------------------- orbit recursion

@dataclass(frozen=True)
class OrbitState2D:
    """(b, delta, c) of A_n = [[(gamma+delta)/2, b], [c, (gamma-delta)/2]] plus the basis."""

    b: int
    delta: int
    c: int
    gamma: int
    v1: tuple = None
    v2: tuple = None

    @property
    def key(self):
        return (self.b, self.delta, self.c)

    @property
    def D(self):
        return self.delta * self.delta + 4 * self.b * self.c

    @property
    def matrix(self):
        return [[(self.gamma + self.delta) // 2, self.b], [self.c, (self.gamma - self.delta) // 2]]

    @property
    def nonnegative(self):
        return abs(self.delta) <= self.gamma


def state_from_basis(psi, v1, v2) -> OrbitState2D:
    """Matrix of psi in the lattice basis (v1, v2); column j holds psi(v_j)."""
    psi = MonomialMap.coerce(psi)
    bmat = [[v1[0], v2[0]], [v1[1], v2[1]]]
    db = det(bmat)
    if abs(db) != 1:
        raise ValueError("(v1, v2) is not a lattice basis")
    binv = [[bmat[1][1] * db, -bmat[0][1] * db], [-bmat[1][0] * db, bmat[0][0] * db]]
    a = matmul(matmul(binv, [list(r) for r in psi.matrix]), bmat)
    return OrbitState2D(a[0][1], a[0][0] - a[1][1], a[1][0], a[0][0] + a[1][1],
                        tuple(v1), tuple(v2))


def _add(u, v):
    return (u[0] + v[0], u[1] + v[1]) if u is not None else None


def _sub(u, v):
    return (u[0] - v[0], u[1] - v[1]) if u is not None else None


def orbit_step(s: OrbitState2D) -> OrbitState2D:
    """n -> n + 1."""
    t = s.c - s.b - s.delta
    if t > 0:           # z1 > 1
        return OrbitState2D(s.b, s.delta + 2 * s.b, t, s.gamma, _add(s.v1, s.v2), s.v2)
    if t < 0:           # 0 < z1 < 1
        return OrbitState2D(s.c, -s.delta, s.b, s.gamma, s.v2, s.v1)
    raise ValueError("tie c = b + delta: eigenvalues are rational")


def orbit_step_back(s: OrbitState2D) -> OrbitState2D:
    """n -> n - 1."""
    t = s.c - s.b + s.delta
    if t > 0:           # z2 < -1
        return OrbitState2D(s.b, s.delta - 2 * s.b, t, s.gamma, _sub(s.v1, s.v2), s.v2)
    if t < 0:           # -1 < z2 < 0
        nv1 = _neg(s.v2) if s.v2 is not None else None
        nv2 = _neg(s.v1) if s.v1 is not None else None
        return OrbitState2D(s.c, -s.delta, s.b, s.gamma, nv1, nv2)
    raise ValueError("tie c = b - delta: eigenvalues are rational")


def orbit_recursion(s: OrbitState2D, backward=False) -> OrbitState2D:
    return orbit_step_back(s) if backward else orbit_step(s)


def branch_sequence(s: OrbitState2D, n: int) -> str:
    """'A' for a shift step, 'B' for a swap step, over n forward steps."""
    out = []
    for _ in range(n):
        out.append("A" if s.c - s.b - s.delta > 0 else "B")
        s = orbit_step(s)
    return "".join(out)


def detect_period(seed: OrbitState2D, cap=10 ** 6):
    """(p, cycle states).  States are hashed, so a pre-periodic seed is fine."""
    seen = {}
    states = []
    s = seed
    for _ in range(cap):
        if s.key in seen:
            cycle = states[seen[s.key]:]
            return len(cycle), cycle
        seen[s.key] = len(states)
        states.append(s)
        s = orbit_step(s)
    raise RuntimeError("period not found within the cap")


def seed_state(phi) -> OrbitState2D:
    """Initial regular cone around the dominant eigenline for the mixed-sign machine.

    Applies to s*phi with s = sign(trace), whose dominant eigenvalue is positive.
    """
    ev = _Eigen(_matrix(phi))
    e1, e2 = ev.e1, ev.e2
    sx, sy = _sgn(e1[0]), _sgn(e1[1])
    v1, v2 = (sx, 0), (0, sy)

    def zs(v1, v2):
        # coordinates of e in the basis (v1, v2): e = x v1 + y v2
        dv = _det2(v1, v2)
        out = []
        for e in (e1, e2):
            x = (e[0] * v2[1] - e[1] * v2[0]) * Fraction(1, dv)
            y = (e[1] * v1[0] - e[0] * v1[1]) * Fraction(1, dv)
            out.append(y / x)
        return out

    for _ in range(10000):
        z1, z2 = zs(v1, v2)
        if _sgn(z2) < 0:
            break
        mid = _add(v1, v2)
        if _sgn(z1 - 1) > 0:
            v1 = mid
        else:
            v2 = mid
    else:
        raise RuntimeError("could not separate the eigenlines")
    z1, z2 = zs(v1, v2)
    if _sgn(z1 - 1) < 0 and _sgn(z2 + 1) > 0:
        v1, v2 = v2, v1
    return state_from_basis(ev.psi, v1, v2)


@dataclass
class Decision:
    verdict: str
    state: OrbitState2D = None
    index: int = None
    cycle: list = None
    gamma: int = None
    D: int = None

    def proof(self):
        return {"gamma": self.gamma, "D": self.D,
                "cycle": [[b, dl, c] for b, dl, c in (self.cycle or [])]}


def decide_regular_stabilizable(phi) -> Decision:
    m = _matrix(phi)
    if classify2d(m).tag != IRRATIONAL_MIXED_SIGN:
        return Decision(NOT_APPLICABLE)
    seed = seed_state(m)
    p, states = detect_period(seed)
    cycle = [s.key for s in states]
    for i, s in enumerate(states):
        if s.nonnegative:
            return Decision(YES, s, i, cycle, seed.gamma, seed.D)
    return Decision(NO, None, None, cycle, seed.gamma, seed.D)


# ------------------------------------------------------------- the sweep

def _inverse_direction(psi: MonomialMap) -> MonomialMap:
    """A positive multiple of psi^{-1}."""
    adj = psi.adjugate()
    return adj if psi.det > 0 else -adj


class BudgetExceeded(RuntimeError):
    pass


def omega_sweep(psi, rays, u1, u2, frozen=(), wave_cap=None, level_cap=100000, ray_budget=50000):
    """Push rays forward region by region until every orbit reaches U1.

    u1, u2: lists of ccw cone pairs.  Wave j adds the images of the rays whose
    preimage distance to U2 is j - 1, then resolves the new region.
    """
    psi = MonomialMap.coerce(psi)
    chi = _inverse_direction(psi)
    rays = sort_rays(rays)
    frz = list(u1) + list(u2) + list(frozen)
    cache = {}

    def level(v):
        if v in cache:
            return cache[v]
        x = v
        for j in range(level_cap):
            if _in_union(x, u2):
                cache[v] = j
                return j
            x = primitive(chi(x))
        raise RuntimeError(f"ray {v} never reaches U2")

    def pending(rs):
        return [r for r in rs if not _in_union(r, u1)]

    cap = wave_cap or 10 * (len(rays) + 10)
    j = 1
    while True:
        outside = pending(rays)
        if not outside or max(level(r) for r in outside) < j - 1:
            return rays, j - 1
        if j > cap:
            raise BudgetExceeded("wave cap exceeded")
        have = set(rays)
        new = []
        for r in outside:
            if level(r) != j - 1:
                continue
            img = psi(r)
            if _in_union(img, u1):
                continue
            p = primitive(img)
            if p not in have:
                have.add(p)
                new.append(p)
        rays = regularize_rays(rays + new, frz)
        if len(rays) > ray_budget:
            raise BudgetExceeded(f"ray budget {ray_budget} exceeded after wave {j}")
        j += 1


# ------------------------------------------------------------ results

@dataclass
class Stabilize2DResult:
    tag: str
    case: Case2D
    fan: Fan = None
    certificate: object = None
    impossibility: dict = None
    planted: list = field(default_factory=list)
    report: dict = field(default_factory=dict)

    def to_dict(self):
        out = {"tag": self.tag, "case": self.case.to_dict(), "report": self.report}
        if self.fan is not None:
            out["fan"] = self.fan.to_dict()
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        if self.impossibility is not None:
            out["impossibility"] = self.impossibility
        if self.planted:
            out["planted_cones"] = [[list(u), list(w)] for u, w in self.planted]
        return out


def _finish(phi, rays, base: Fan, case, n_max, impossibility=None, planted=(), report=None):
    f = fan_from_rays(rays)
    verdict = check_1stable(phi, f, n_max)
    report = dict(report or {})
    report["refines_input"] = is_refinement(f, base)
    report["stability"] = verdict.tag
    if verdict.tag != STABLE or not verify_certificate(phi, f, verdict.certificate):
        report["witness"] = verdict.witness
        return Stabilize2DResult(UNKNOWN, case, f, None, impossibility, list(planted), report)
    tag = REGULAR_STABILIZED if is_regular(f) else STABILIZED_IRREGULAR
    report["irregular_cones"] = [[list(v) for v in f.vectors(k)] for k in irregular_cones(f)]
    return Stabilize2DResult(tag, case, f, verdict.certificate, impossibility, list(planted), report)


def _cone_with(rays, v, strict=False):
    test = _strictly_in_pair if strict else _in_pair
    for p in cone_pairs(rays):
        if test(p, v):
            return p
    return None


def _star(rays, p):
    return [q for q in cone_pairs(rays) if p in q]


def _barycentric_split(rays, pair):
    mid = primitive(_add(*pair))
    return sort_rays(list(rays) + [mid, _neg(mid)])


# -------------------------------------------------------------- the cases

def _case_scalar(m, rays):
    return regularize_rays(_symmetric(rays)), {}


def _case_non_diagonalizable(m, rays):
    (a, b), (c, d) = m.matrix
    mu = (a + d) // 2
    v = primitive((b, mu - a)) if (a - mu, b) != (0, 0) else primitive((d - mu, -c))
    s = 1 if mu > 0 else -1
    psi = MonomialMap([[s * x for x in r] for r in m.matrix])
    rs = regularize_rays(_symmetric(list(rays) + [v, _neg(v)]))
    star = _star(rs, v)
    ccw_nb = next(q[1] for q in star if q[0] == v)
    cw_nb = next(q[0] for q in star if q[1] == v)
    w = ccw_nb                          # det(v, w) = 1
    bw = _det2(psi(w), w)               # psi(w) = bw * v + mu' * w
    if bw > 0:
        tau = (v, ccw_nb)
        u2 = (cw_nb, v)
    else:
        tau = (cw_nb, v)
        u2 = (v, ccw_nb)
    U1 = [tau, _neg_pair(tau)]
    U2 = [u2, _neg_pair(u2)]
    rs, waves = omega_sweep(psi, rs, U1, U2)
    return rs, {"eigenray": list(v), "U1": _pairs_json(U1), "U2": _pairs_json(U2), "waves": waves}


def _pairs_json(pairs):
    return [[list(u), list(w)] for u, w in pairs]


def _pump(rays, chi, p, cap=10000):
    """Shrink the two cones at p until chi swaps them (chi(p) = a p, other eigenvalue -d, a > d > 0)."""
    rs = sort_rays(rays)
    star = _star(rs, p)
    w = next(q[1] for q in star if q[0] == p)
    qm = next(q[0] for q in star if q[1] == p)
    i = 0 if p[0] != 0 else 1
    r1, r2 = 0, (qm[i] + w[i]) // p[i]
    cw = chi(w)
    a = _det2(chi(p), w)
    bb = _det2(cw, w)
    dd = -_det2(p, cw)
    # shifting w by k*p changes b by k*(a + d); pick the shift minimizing |b|
    k = -((2 * bb + (a + dd)) // (2 * (a + dd)))
    w = (w[0] + k * p[0], w[1] + k * p[1])
    bb += k * (a + dd)
    r1, r2 = r1 - k, r2 + k
    r = max(abs(bb) // (a - dd) + 1, r1, r2)
    for _ in range(cap):
        new = []
        while r1 < r:
            r1 += 1
            new.append((r1 * p[0] + w[0], r1 * p[1] + w[1]))
        while r2 < r:
            r2 += 1
            new.append((r2 * p[0] - w[0], r2 * p[1] - w[1]))
        rs = _symmetric(rs + new)
        s1 = (p, (r * p[0] + w[0], r * p[1] + w[1]))
        s2 = ((r * p[0] - w[0], r * p[1] - w[1]), p)
        if all(_in_pair(s2, chi(g)) for g in s1) and all(_in_pair(s1, chi(g)) for g in s2):
            return rs, [s1, s2, _neg_pair(s1), _neg_pair(s2)], r
        r += 1
    raise RuntimeError("pumping did not converge")


def _case_int_distinct(m, rays):
    ev = _Eigen(m)
    psi = ev.psi
    p1, p2 = ev.integer_vectors()
    rs = regularize_rays(_symmetric(list(rays) + [p1, p2]))
    if _sgn(ev.mu2) > 0:
        poles1, poles2 = (p1, _neg(p1)), (p2, _neg(p2))
        for _ in range(1000):
            clash = [q for q in cone_pairs(rs) if set(q) & set(poles1) and set(q) & set(poles2)]
            if not clash:
                break
            rs = _barycentric_split(rs, clash[0])
        U1 = [q for q in cone_pairs(rs) if set(q) & set(poles1)]
        U2 = [q for q in cone_pairs(rs) if set(q) & set(poles2)]
        extra = {}
    else:
        rs, U1, r1 = _pump(rs, psi, p1)
        chi = psi.adjugate()
        rs, U2, r2 = _pump(rs, chi, p2)
        extra = {"r": [r1, r2]}
    rs, waves = omega_sweep(psi, rs, U1, U2)
    info = {"eigenrays": [list(p1), list(p2)], "U1": _pairs_json(U1), "U2": _pairs_json(U2),
            "waves": waves}
    info.update(extra)
    return rs, info


def _case_irrational_same_sign(m, rays):
    ev = _Eigen(m)
    rs = regularize_rays(_symmetric(rays))
    for _ in range(10000):
        s1 = _cone_with(rs, ev.e1, strict=True)
        if _strictly_in_pair(s1, ev.e2) or _strictly_in_pair(s1, tuple(-x for x in ev.e2)):
            rs = _barycentric_split(rs, s1)
            continue
        break
    s2 = _cone_with(rs, ev.e2, strict=True)
    U1 = [s1, _neg_pair(s1)]
    U2 = [s2, _neg_pair(s2)]
    rs, waves = omega_sweep(ev.psi, rs, U1, U2)
    return rs, {"U1": _pairs_json(U1), "U2": _pairs_json(U2), "waves": waves}


def _plant(rays, target):
    """Insert (with mirrors) the barycentric path from a fan cone down to the regular cone target."""
    rs = sort_rays(rays)
    for p in cone_pairs(rs):
        path = subdivision_path(target, p)
        if path is NOT_NESTED or path == NOT_NESTED:
            continue
        a, b = p
        new = []
        for step in path:
            mid = _add(a, b)
            new.append(mid)
            if step == LEFT:
                b = mid
            else:
                a = mid
        return _symmetric(rs + new)
    return None


def _case_mixed_yes(m, rays, decision, cap=100000):
    ev = _Eigen(m)
    psi = ev.psi
    rs = regularize_rays(_symmetric(rays))
    chi = _inverse_direction(psi)
    s = seed_state(m)
    planted = None
    for _ in range(cap):
        if s.nonnegative:
            sigma = _ccw(s.v1, s.v2)
            new = _plant(rs, sigma)
            if new is not None:
                rs, s1 = new, sigma
                planted = s
                break
        s = orbit_step(s)
    else:
        raise RuntimeError("no forward invariant cone found")
    s = seed_state(m)
    for _ in range(cap):
        s = orbit_step_back(s)
        if s.nonnegative:
            sigma = _ccw(s.v1, _neg(s.v2))
            ok = all(_in_pair(sigma, chi(g)) for g in sigma) or \
                all(_in_pair(_neg_pair(sigma), chi(g)) for g in sigma)
            if ok and not any(_in_pair(s1, g) or _in_pair(_neg_pair(s1), g) for g in sigma):
                new = _plant(rs, sigma)
                if new is not None:
                    rs, s2 = new, sigma
                    break
    else:
        raise RuntimeError("no backward invariant cone found")
    U1 = [s1, _neg_pair(s1)]
    U2 = [s2, _neg_pair(s2)]
    rs, waves = omega_sweep(psi, rs, U1, U2)
    return rs, {"U1": _pairs_json(U1), "U2": _pairs_json(U2), "waves": waves,
                "nonnegative_state": list(planted.key)}


def _invariant_irregular_cone(chi, e, f, ex, rays, avoid=()):
    """A cone around e with chi(cone) in +-cone, found from rounded hints and checked exactly."""
    pairs = cone_pairs(rays)
    eps = 0.5
    for _ in range(40):
        for k in range(2, 48):
            big = 2 ** k
            p = primitive((round(big * (e[0] + eps * f[0])), round(big * (e[1] + eps * f[1]))))
            q = primitive((round(big * (e[0] - eps * f[0])), round(big * (e[1] - eps * f[1]))))
            if _det2(p, q) == 0:
                continue
            sigma = _ccw(p, q)
            if not _strictly_in_pair(sigma, ex):
                continue
            imgs = [chi(g) for g in sigma]
            if not (all(_in_pair(sigma, g) for g in imgs) or
                    all(_in_pair(_neg_pair(sigma), g) for g in imgs)):
                continue
            if not any(_in_pair(c, p) and _in_pair(c, q) for c in pairs):
                continue
            if any(_in_pair(a, g) or _in_pair(_neg_pair(a), g) for a in avoid for g in sigma) or \
                    any(_in_pair(sigma, g) or _in_pair(sigma, _neg(g)) for a in avoid for g in a):
                continue
            return sigma
        eps /= 2
    raise RuntimeError("no invariant cone found near the eigenline")


def _case_mixed_no(m, rays):
    ev = _Eigen(m)
    psi = ev.psi
    rs = regularize_rays(_symmetric(rays))
    fe1, fe2 = ev.floats()
    s1 = _invariant_irregular_cone(psi, fe1, fe2, ev.e1, rs)
    chi = _inverse_direction(psi)
    s2 = _invariant_irregular_cone(chi, fe2, fe1, ev.e2, rs, avoid=[s1])
    planted = [s1, _neg_pair(s1), s2, _neg_pair(s2)]
    rs = sort_rays(rs + [g for c in planted for g in c])
    rs = regularize_rays(rs, planted)
    rs, waves = omega_sweep(psi, rs, planted[:2], planted[2:], frozen=planted)
    return rs, planted, {"waves": waves}


def divisor_obstruction(phi):
    """Test whether a complete regular fan can be invariant (every ray onto a ray).

    With l(v) defined by phi(v) = l(v) v', adjacent rays of a regular invariant
    fan satisfy l(v1) l(v2) = |det|.  Either l is constant, equal to
    sqrt|det| and dividing every entry, or it alternates between a and
    |det|/a; the latter is impossible when phi^k is scalar with k odd.
    """
    m = _matrix(phi)
    dt = abs(m.det)
    k = scalar_power_order([list(r) for r in m.matrix], kmax=12)
    l = isqrt(dt)
    constant_ok = l * l == dt and all(x % l == 0 for r in m.matrix for x in r)
    alternating_ok = not (k is not None and k % 2 == 1)
    return {"k": k, "abs_det": dt, "constant_possible": constant_ok,
            "alternating_possible": alternating_ok,
            "impossible": not constant_ok and not alternating_ok}


def _orbit_closure(m, rays, cap=10000):
    out = set(sort_rays(rays))
    todo = list(out)
    while todo:
        v = todo.pop()
        w = primitive(m(v))
        if w not in out:
            out.add(w)
            todo.append(w)
            if len(out) > cap:
                raise RuntimeError("orbit closure too large")
    return sort_rays(out)


def _case_root_of_unity(m, rays, rounds=6):
    test = divisor_obstruction(m)
    rs = regularize_rays(rays)
    closure = _orbit_closure(m, rs)
    regular = None
    if not test["impossible"]:
        cur = closure
        for _ in range(rounds):
            if all(_det2(u, w) == 1 for u, w in cone_pairs(cur)):
                regular = cur
                break
            cur = _orbit_closure(m, regularize_rays(cur))
    return test, closure, regular


def stabilize_2d(phi, fan: Fan, n_max=200, symmetric=False) -> Stabilize2DResult:
    m = _matrix(phi)
    if fan.rank != 2:
        raise ValueError("rank must be 2")
    base = complete_fan2(fan)
    rays = _rays_of(base)
    if symmetric:
        rays = _symmetric(rays)
    case = classify2d(m)
    report = {"completed_input": base is not fan}
    if case.tag == COMPLEX_NOT_ROOT_OF_UNITY:
        proof = {"reason": "eigenvalue ratio is not a root of unity; ray orbits are dense",
                 "trace": case.trace, "det": case.det,
                 "trace_sq_over_det": str(Fraction(case.trace ** 2, case.det))}
        return Stabilize2DResult(IMPOSSIBLE_ANY, case, impossibility={"kind": IMPOSSIBLE_ANY,
                                                                       "proof": proof})
    if case.tag == ROOT_OF_UNITY_RATIO:
        test, closure, regular = _case_root_of_unity(m, rays)
        report["divisor_test"] = test
        if regular is not None:
            return _finish(m, regular, base, case, n_max, report=report)
        kind = IMPOSSIBLE_REGULAR if test["impossible"] else UNKNOWN
        res = _finish(m, closure, base, case, n_max, {"kind": kind, "proof": test}, report=report)
        return res
    imp, planted = None, ()
    try:
        if case.tag == SCALAR:
            rs, info = _case_scalar(m, rays)
        elif case.tag == NON_DIAGONALIZABLE:
            rs, info = _case_non_diagonalizable(m, rays)
        elif case.tag == INT_DISTINCT:
            rs, info = _case_int_distinct(m, rays)
        elif case.tag == IRRATIONAL_SAME_SIGN:
            rs, info = _case_irrational_same_sign(m, rays)
        else:
            decision = decide_regular_stabilizable(m)
            report["decision"] = decision.verdict
            if decision.verdict == YES:
                rs, info = _case_mixed_yes(m, rays, decision)
            else:
                imp = {"kind": IMPOSSIBLE_REGULAR, "proof": decision.proof()}
                rs, planted, info = _case_mixed_no(m, rays)
    except BudgetExceeded as exc:
        report["reason"] = str(exc)
        return Stabilize2DResult(UNKNOWN, case, None, None, imp, list(planted), report)
    report.update(info)
    return _finish(m, rs, base, case, n_max, imp, planted, report)
