"""Refinements of fans: cone incorporation by lifting, stellar subdivision,
regularization, barycentric subdivision and common refinement."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .fan import Cone, Fan, SupportFunction, cone_geometry, is_simplicial, projectivity_certificate
from .latlin import dot, inverse, neg, primitive, vadd

LEFT, RIGHT = "LEFT", "RIGHT"
NOT_NESTED = "NOT_NESTED"


class PlanError(ValueError):
    """The incorporation plan violates its invariants."""


# --------------------------------------------------------------- utilities

def _prim(v):
    return primitive([int(x) for x in v])


def _int_vec(v):
    den = 1
    for x in v:
        x = Fraction(x)
        den = den * x.denominator // _gcd(den, x.denominator)
    return tuple(int(Fraction(x) * den) for x in v)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def add_rays(f: Fan, new_rays, new_cones_keys):
    """Fan with extra rays appended and the given maximal cones (keys into the extended table)."""
    rays = list(f.rays) + [tuple(r) for r in new_rays]
    return Fan(rays, new_cones_keys, f.rank)


# ---------------------------------------------------------- stellar / pulling

def stellar_subdivide(f: Fan, v):
    """Star subdivision of a simplicial fan at the primitive lattice vector v."""
    v = _prim(v)
    if f.ray_index(v) is not None:
        return f
    key = f.locate(v)
    if key is None:
        raise ValueError(f"{list(v)} lies outside the support")
    n = len(f.rays)
    s = set(key)
    cones = []
    for c in f.maximal:
        if s <= set(c):
            if not f.geom(c).simplicial:
                raise ValueError("stellar subdivision needs simplicial cones around the new ray")
            for i in key:
                cones.append([j for j in c if j != i] + [n])
        else:
            cones.append(list(c))
    return Fan(list(f.rays) + [v], cones, f.rank)


def _pull_cone(gens_sorted, cache):
    """Pulling triangulation of cone(gens) w.r.t. the global order of generators."""
    key = tuple(gens_sorted)
    if key in cache:
        return cache[key]
    geo = cone_geometry(key)
    if geo.simplicial:
        out = [key]
    else:
        apex = key[0]
        out = []
        for fc in geo.facets:
            if 0 in fc.on:
                continue
            face = tuple(key[i] for i in sorted(fc.on))
            for piece in _pull_cone(face, cache):
                out.append(tuple(sorted((apex,) + piece)))
    cache[key] = out
    return out


def simplicialize(f: Fan):
    """Pulling refinement without new rays (rays pulled in lexicographic order)."""
    if is_simplicial(f):
        return f
    cache = {}
    cones = []
    for k in f.maximal:
        gens = tuple(sorted(f.gens(k)))
        cones.extend(_pull_cone(gens, cache))
    return Fan.from_vectors(cones, f.rank)


# ---------------------------------------------------------------- lifting

@dataclass
class IncorporationPlan:
    """Cone sigma1 to be planted inside the fan cone sigma0."""
    sigma0: tuple
    sigma1: tuple
    heights: dict = field(default_factory=dict)

    @classmethod
    def make(cls, f: Fan, sigma0, sigma1):
        s0 = tuple(sorted(_prim(v) for v in sigma0))
        s1 = tuple(sorted(Cone.of(sigma1).generators))
        plan = cls(s0, s1)
        plan.check(f)
        return plan

    def new_rays(self):
        return [v for v in self.sigma1 if v not in set(self.sigma0)]

    def check(self, f: Fan):
        if not f.has_cone_vectors(self.sigma0):
            raise PlanError("sigma0 is not a cone of the fan")
        g0 = cone_geometry(self.sigma0)
        if not g0.simplicial:
            raise PlanError("sigma0 must be simplicial")
        g1 = cone_geometry(self.sigma1)
        if not g1.simplicial:
            raise PlanError("sigma1 must be simplicial")
        if not all(g0.contains(v) for v in self.sigma1):
            raise PlanError("sigma1 is not contained in sigma0")
        on_boundary = [v for v in self.sigma1 if not g0.in_relint(v)]
        s0 = set(self.sigma0)
        if any(v not in s0 for v in on_boundary):
            raise PlanError("a ray of sigma1 on the boundary of sigma0 is not a ray of sigma0")
        if on_boundary and g0.dim > 1 and set(on_boundary) != s0:
            pos = {self.sigma0.index(v) for v in on_boundary}
            if not any(pos <= fc.on for fc in g0.facets):
                raise PlanError("boundary parts of sigma1 and sigma0 do not meet in a common face")


def _lift_and_project(plan: IncorporationPlan, max_tries=200):
    """Subdivision of sigma0 from the upper hull of the lifted points.

    Returns (maximal cones as vector tuples, heights of the new rays)."""
    s0 = list(plan.sigma0)
    new = plan.new_rays()
    geo = cone_geometry(tuple(s0))
    d = geo.dim
    # coordinates in the basis of sigma0's generators
    coords_s0 = [list(c) for c in geo.coords]
    inv = inverse(coords_s0) if d == len(s0) else None
    left = _span_coords(geo)

    def bary(v):
        c = left(v)
        return [sum(c[k] * inv[k][i] for k in range(d)) for i in range(d)]

    face = {i for i, u in enumerate(s0) if u in set(plan.sigma1)}
    base = {v: sum(b for i, b in enumerate(bary(v)) if i not in face) for v in new}
    for v, t in base.items():
        if t <= 0:
            raise PlanError("new ray has no positive height")
    for factors in _perturbations(len(new), max_tries):
        heights = {v: base[v] * fac for v, fac in zip(new, factors)}
        pts = [tuple(c) + (0,) for c in geo.coords] + \
              [tuple(left(v)) + (heights[v],) for v in new]
        pts = [_int_vec(p) for p in pts]
        lifted = cone_geometry(tuple(pts))
        labels = s0 + new
        cones = []
        ok = True
        for fc in lifted.facets:
            if fc.normal[-1] >= 0:
                continue
            if len(fc.on) != d:
                ok = False
                break
            cones.append(tuple(sorted(labels[i] for i in fc.on)))
        if not ok:
            continue
        if tuple(sorted(plan.sigma1)) not in cones and len(plan.sigma1) == d:
            continue
        return cones, heights
    raise PlanError("no generic heights found")


def _span_coords(geo):
    basis = [list(b) for b in geo.span_basis]
    m = len(basis[0])
    bbt = [[sum(Fraction(x) * y for x, y in zip(r1, r2)) for r2 in basis] for r1 in basis]
    binv = inverse(bbt)
    left = [[sum(binv[i][k] * basis[k][j] for k in range(len(basis))) for j in range(m)]
            for i in range(len(basis))]

    def coords(v):
        return [sum(left[i][k] * v[k] for k in range(m)) for i in range(len(basis))]
    return coords


def _perturbations(n, limit):
    """Deterministic height factors: all ones, then 1 +- 1/q patterns, q increasing."""
    yield [Fraction(1)] * n
    count = 1
    q = 2
    while count < limit:
        for i in range(n):
            for s in (1, -1):
                fac = [Fraction(1)] * n
                fac[i] = 1 + Fraction(s, q)
                yield fac
                count += 1
        fac = [1 + Fraction((-1) ** i * (i + 1), q * (n + 1)) for i in range(n)]
        yield fac
        count += 1
        q += 1


def incorporate_cone(f: Fan, plan: IncorporationPlan, return_heights=False):
    """Simplicial refinement of f containing plan.sigma1 as a cone; new rays are rays of sigma1."""
    if not plan.new_rays():
        return (f, {}) if return_heights else f
    plan.check(f)
    if not is_simplicial(f):
        raise PlanError("incorporate_cone needs a simplicial fan")
    pieces, heights = _lift_and_project(plan)
    s0 = set(plan.sigma0)
    rays = list(f.rays) + plan.new_rays()
    cones = []
    for k in f.maximal:
        gens = set(f.gens(k))
        if s0 <= gens:
            rest = [g for g in gens if g not in s0]
            for p in pieces:
                cones.append(list(p) + rest)
        else:
            cones.append(list(f.gens(k)))
    out = Fan.from_vectors(cones, f.rank)
    out = Fan(out.rays, out.maximal, f.rank)
    return (out, heights) if return_heights else out


def _bump_projective(fine: Fan, h: SupportFunction, bump: dict, halvings=80):
    """h restricted to `fine` plus eps * bump (bump given on rays), eps shrunk until strict."""
    old = h.fan
    base = [h.values[i] if (i := old.ray_index(r)) is not None else h(r) for r in fine.rays]
    top = max((abs(v) for v in bump.values()), default=0)
    if top == 0:
        return SupportFunction(fine, base)
    mg = h.wall_margin() if h.fan.wall_pairs() is not None else h.margin()
    eps = Fraction(mg if mg and mg > 0 else 1) / (2 * top)
    for _ in range(halvings):
        vals = [b + eps * bump.get(r, 0) for r, b in zip(fine.rays, base)]
        hp = SupportFunction(fine, vals)
        if hp.is_strictly_convex():
            return hp
        eps /= 2
    raise ArithmeticError("could not keep the support function strictly convex")


def incorporate_cone_projective(f: Fan, h: SupportFunction, plan: IncorporationPlan):
    """incorporate_cone together with a strictly convex support function on the result."""
    if not h.is_strictly_convex():
        raise ValueError("h is not strictly convex")
    out, heights = incorporate_cone(f, plan, return_heights=True)
    if not heights:
        return f, h
    return out, _bump_projective(out, h, heights)


def stellar_projective(f: Fan, h: SupportFunction, v):
    """Star subdivision at v with a strictly convex support function carried along."""
    out = stellar_subdivide(f, v)
    if out is f:
        return f, h
    return out, _bump_projective(out, h, {_prim(v): Fraction(1)})


# ------------------------------------------------------------ regularization

def parallelepiped_points(gens):
    """Nonzero lattice points sum t_i g_i, 0 <= t_i < 1, of a simplicial cone, with their t."""
    geo = cone_geometry(tuple(gens))
    coords = [list(c) for c in geo.coords]
    k = len(coords)
    inv = inverse(coords)          # rows: t for each unit vector of the span lattice
    gens_t = [tuple(x - (x.numerator // x.denominator) for x in row) for row in inv]
    seen = {tuple([Fraction(0)] * k)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for t in frontier:
            for g in gens_t:
                s = tuple((a + b) - ((a + b).numerator // (a + b).denominator) for a, b in zip(t, g))
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    out = []
    for t in seen:
        if not any(t):
            continue
        v = [sum(t[i] * gens[i][j] for i in range(k)) for j in range(len(gens[0]))]
        out.append((tuple(int(x) for x in v), t))
    return out


def best_insertion_point(gens):
    pts = parallelepiped_points(gens)
    if not pts:
        return None
    return min(pts, key=lambda p: (sum(1 for x in p[1] if x), sum(p[1]), p[0]))[0]


def _frozen_sets(frozen):
    return [frozenset(_prim(v) for v in c) for c in frozen]


def regularize(f: Fan, keep_regular=True, symmetric=False, frozen=(), h=None, max_steps=100000):
    """Regular refinement by repeated star subdivisions at parallelepiped points.

    Regular cones are never subdivided (the inserted point always lies in the
    relative interior of an irregular face).  With symmetric=True every
    insertion at v is paired with one at -v.  Cones listed in `frozen` are left
    alone even when irregular.  If h is given, a strictly convex support
    function is carried along and (fan, h) is returned.
    """
    if not is_simplicial(f):
        f = simplicialize(f)
        if h is not None:
            h = projectivity_certificate(f)
    frz = _frozen_sets(frozen)
    for _ in range(max_steps):
        target = None
        for k in f.maximal:
            geo = f.geom(k)
            if geo.multiplicity() == 1:
                continue
            vs = f.vectors(k)
            if any(vs == z for z in frz):
                continue
            target = k
            break
        if target is None:
            return (f, h) if h is not None else f
        v = _choose_point(f, target, frz)
        todo = [v] + ([neg(v)] if symmetric else [])
        for w in todo:
            if f.ray_index(w) is not None:
                continue
            if h is not None:
                f, h = stellar_projective(f, h, w)
            else:
                f = stellar_subdivide(f, w)
    raise RuntimeError("regularization did not terminate")


def _choose_point(f, key, frz):
    gens = f.gens(key)
    pts = parallelepiped_points(gens)
    pts.sort(key=lambda p: (sum(1 for x in p[1] if x), sum(p[1]), p[0]))
    for v, t in pts:
        support = frozenset(g for g, x in zip(gens, t) if x)
        if any(support <= z for z in frz):
            continue
        return _prim(v)
    raise RuntimeError("every insertion point would touch a frozen cone")


# -------------------------------------------------------- barycentric (2-cones)

def barycentric_subdivide(f: Fan, tau):
    """Split the regular 2-cone tau = cone(v1, v2) of f at v1 + v2."""
    tau = [tuple(v) for v in tau]
    if len(tau) != 2 or not f.has_cone_vectors(tau):
        raise ValueError("tau is not a 2-cone of the fan")
    if not Cone.of(tau).is_regular():
        raise ValueError("tau is not regular")
    return stellar_subdivide(f, vadd(tau[0], tau[1]))


def subdivision_path(tau, tau0, max_len=100000):
    """Child choices (LEFT keeps v1, RIGHT keeps v2) leading from tau0 = (v1, v2) to tau."""
    target = frozenset(_prim(v) for v in tau)
    a, b = (_prim(v) for v in tau0)
    if not all(cone_geometry(tuple(sorted((a, b)))).contains(v) for v in target):
        return NOT_NESTED
    path = []
    for _ in range(max_len):
        if frozenset((a, b)) == target:
            return path
        mid = vadd(a, b)
        left = cone_geometry(tuple(sorted((a, mid))))
        right = cone_geometry(tuple(sorted((mid, b))))
        if all(left.contains(v) for v in target):
            path.append(LEFT)
            b = mid
        elif all(right.contains(v) for v in target):
            path.append(RIGHT)
            a = mid
        else:
            return NOT_NESTED
    raise RuntimeError("subdivision path too long")


def replay_path(tau0, path):
    a, b = (tuple(v) for v in tau0)
    for step in path:
        mid = vadd(a, b)
        if step == LEFT:
            b = mid
        else:
            a = mid
    return a, b


def plant_by_path(f: Fan, tau0, path, symmetric=False):
    """Apply the barycentric subdivisions of `path` starting from the fan cone tau0."""
    a, b = (tuple(v) for v in tau0)
    for step in path:
        f = barycentric_subdivide(f, (a, b))
        if symmetric:
            f = barycentric_subdivide(f, (neg(a), neg(b)))
        mid = vadd(a, b)
        if step == LEFT:
            b = mid
        else:
            a = mid
    return f


# -------------------------------------------------------- common refinement

def cut_cone(gens, normal):
    """Generators of cone(gens) intersected with {normal >= 0} (one double-description step)."""
    pos = [g for g in gens if dot(normal, g) > 0]
    zero = [g for g in gens if dot(normal, g) == 0]
    negs = [g for g in gens if dot(normal, g) < 0]
    out = pos + zero
    for p in pos:
        for q in negs:
            w = tuple(dot(normal, p) * x - dot(normal, q) * y for x, y in zip(q, p))
            if any(w):
                out.append(_prim(w))
    out = sorted(set(_prim(v) for v in out if any(v)))
    if not out:
        return []
    return list(Cone.of(out).generators)


def intersect_cones(ga, gb):
    """Minimal generators of cone(ga) cap cone(gb) (both pointed)."""
    geo = cone_geometry(tuple(sorted(gb)))
    gens = list(ga)
    for e in geo.equations:
        gens = cut_cone(gens, e)
        if gens:
            gens = cut_cone(gens, neg(e))
        if not gens:
            return []
    for fc in geo.facets:
        gens = cut_cone(gens, fc.normal)
        if not gens:
            return []
    return gens


def common_refinement(f: Fan, g: Fan):
    """Fan of all intersections of maximal cones of f and g."""
    if f == g:
        return f
    pieces = set()
    for a in f.maximal:
        ga = f.gens(a)
        for b in g.maximal:
            c = intersect_cones(ga, g.gens(b))
            if c:
                pieces.add(tuple(sorted(c)))
    out = Fan.from_vectors(sorted(pieces), f.rank)
    from .fan import is_refinement
    if not (is_refinement(out, f) and is_refinement(out, g)):
        raise ValueError("support mismatch")
    return out


def symmetrize(f: Fan):
    """Coarsest common refinement of f and -f."""
    return common_refinement(f, f.negated())


def cut_by_hyperplanes(f: Fan, normals):
    """Refine f so that every hyperplane {n = 0} is a union of cones."""
    cones = [list(f.gens(k)) for k in f.maximal]
    for n in normals:
        nxt = []
        for c in cones:
            for s in (n, neg(n)):
                piece = cut_cone(c, s)
                if piece and cone_geometry(tuple(sorted(piece))).dim == f.rank:
                    nxt.append(piece)
        # keep full-dimensional pieces; drop duplicates
        uniq = {tuple(sorted(p)) for p in nxt}
        cones = [list(p) for p in sorted(uniq)]
    return Fan.from_vectors(cones, f.rank)
