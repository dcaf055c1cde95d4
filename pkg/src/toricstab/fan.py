"""Rational polyhedral cones, fans and support functions."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from bisect import bisect_right
from functools import cmp_to_key, lru_cache
from itertools import combinations

from . import lp
from .latlin import (primitive, integral_direction, dot, rank, nullspace, saturate, transpose,
                     row_reduce, det, inverse, neg)

# ----------------------------------------------------------- cone geometry


@dataclass(frozen=True)
class Facet:
    normal: tuple          # integer covector in M, >= 0 on the cone
    local: tuple           # same functional in span coordinates
    on: frozenset          # positions (into the generator tuple) lying on the facet


@dataclass(frozen=True)
class ConeGeometry:
    gens: tuple
    dim: int
    equations: tuple       # integer covectors cutting out the span
    facets: tuple
    pointed: bool
    extreme: tuple         # positions of extreme generators
    coords: tuple          # generator coordinates in a lattice basis of the span
    span_basis: tuple

    def contains(self, v):
        if any(dot(e, v) for e in self.equations):
            return False
        if self.dim == 0:
            return not any(v)
        return all(dot(f.normal, v) >= 0 for f in self.facets)

    def in_relint(self, v):
        if any(dot(e, v) for e in self.equations):
            return False
        if self.dim == 0:
            return not any(v)
        return all(dot(f.normal, v) > 0 for f in self.facets)

    def tight(self, v):
        """Positions of generators in the smallest face containing v (v in cone)."""
        on = set(range(len(self.gens)))
        for f in self.facets:
            if dot(f.normal, v) == 0:
                on &= f.on
        return frozenset(on)

    @property
    def simplicial(self):
        return len(self.gens) == self.dim

    def multiplicity(self):
        """Lattice index of the generators inside the span lattice (simplicial only)."""
        return abs(det([list(c) for c in self.coords]))


def _left_inverse(basis):
    b = [list(map(Fraction, r)) for r in basis]
    bbt = [[sum(x * y for x, y in zip(r1, r2)) for r2 in b] for r1 in b]
    inv = inverse(bbt)
    return [[sum(inv[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(b))]


def _full_simplicial(gens, m):
    """Shortcut for m independent generators in dimension m."""
    cols = [[gens[j][i] for j in range(m)] for i in range(m)]
    dt = det(cols)
    if dt == 0:
        return None
    sgn = 1 if dt > 0 else -1
    facets = []
    for i in range(m):
        # cofactor row i of the generator matrix: vanishes on gens j != i, equals det on gen i
        row = []
        for k in range(m):
            minor = [[cols[r][c] for c in range(m) if c != i] for r in range(m) if r != k]
            row.append(sgn * (-1) ** (i + k) * (det(minor) if minor else 1))
        normal = primitive(row)
        facets.append(Facet(normal, normal, frozenset(j for j in range(m) if j != i)))
    facets.sort(key=lambda f: (sorted(f.on), f.normal))
    basis = tuple(tuple(int(i == j) for j in range(m)) for i in range(m))
    return ConeGeometry(gens, m, (), tuple(facets), True, tuple(range(m)), gens, basis)


@lru_cache(maxsize=200000)
def cone_geometry(gens):
    """Geometry of cone(gens); gens is a tuple of integer tuples."""
    gens = tuple(tuple(int(x) for x in g) for g in gens)
    m = len(gens[0]) if gens else 0
    nz = [g for g in gens if any(g)]
    if not nz:
        eqs = tuple(tuple(int(i == j) for j in range(m)) for i in range(m))
        return ConeGeometry(gens, 0, eqs, (), True, (), tuple(() for _ in gens), ())
    if len(gens) == m and len(nz) == m:
        fast = _full_simplicial(gens, m)
        if fast is not None:
            return fast
    span = saturate(nz, m)
    d = span.dim
    basis = span.basis
    left = _left_inverse(basis)
    coords = tuple(tuple(int(sum(left[i][k] * g[k] for k in range(m))) for i in range(d)) for g in gens)
    ann = nullspace([list(map(Fraction, b)) for b in basis]) if d < m else []
    eqs = tuple(integral_direction(a) for a in ann)
    facets = {}
    if d == 1:
        signs = {(c[0] > 0) - (c[0] < 0) for c in coords}
        signs.discard(0)
        if len(signs) == 1:
            s = signs.pop()
            local = (s,)
            normal = integral_direction([s * left[0][k] for k in range(m)])
            on = frozenset(i for i, c in enumerate(coords) if c[0] == 0)
            facets[on] = Facet(normal, local, on)
    else:
        idx = range(len(gens))
        for sub in combinations(idx, d - 1):
            rows = [list(coords[i]) for i in sub]
            if rank(rows) != d - 1:
                continue
            n = nullspace([list(map(Fraction, r)) for r in rows])[0]
            n = integral_direction(n)
            vals = [dot(n, c) for c in coords]
            if all(v >= 0 for v in vals):
                pass
            elif all(v <= 0 for v in vals):
                n = neg(n)
                vals = [-v for v in vals]
            else:
                continue
            on = frozenset(i for i, v in enumerate(vals) if v == 0)
            if on in facets:
                continue
            normal = integral_direction([sum(n[i] * left[i][k] for i in range(d)) for k in range(m)])
            facets[on] = Facet(normal, tuple(n), on)
    facet_list = tuple(sorted(facets.values(), key=lambda f: (sorted(f.on), f.normal)))
    pointed = rank([list(f.local) for f in facet_list]) == d if facet_list else False
    if d == 1:
        extreme = (0,) if pointed else ()
        # duplicates of the same ray: keep the first
    else:
        extreme = []
        for i in range(len(gens)):
            inc = [list(f.local) for f in facet_list if i in f.on]
            if inc and rank(inc) == d - 1:
                extreme.append(i)
        extreme = tuple(extreme)
    return ConeGeometry(gens, d, eqs, facet_list, pointed, extreme, coords, tuple(basis))


@dataclass(frozen=True)
class Cone:
    """A standalone rational cone given by primitive generators."""

    generators: tuple

    @classmethod
    def of(cls, vectors):
        prims = []
        for v in vectors:
            p = primitive(v)
            if p not in prims:
                prims.append(p)
        geo = cone_geometry(tuple(sorted(prims)))
        gens = tuple(geo.gens[i] for i in geo.extreme) if geo.pointed else tuple(sorted(prims))
        return cls(tuple(sorted(gens)))

    @property
    def geometry(self):
        return cone_geometry(self.generators)

    @property
    def dim(self):
        return self.geometry.dim

    def contains(self, v):
        return self.geometry.contains(v)

    def in_relint(self, v):
        return self.geometry.in_relint(v)

    def is_regular(self):
        g = self.geometry
        return g.simplicial and g.multiplicity() == 1

    def __neg__(self):
        return Cone(tuple(sorted(neg(g) for g in self.generators)))


def cone_contains_cone(outer_gens, inner_vectors):
    geo = cone_geometry(tuple(outer_gens))
    return all(geo.contains(v) for v in inner_vectors)


# ---------------------------------------------------------------------- fan

class Fan:
    """A fan stored by its ray table and its maximal cones (sorted ray indices).

    Construction canonicalizes: rays sorted lexicographically, cones sorted,
    cones contained in other listed cones dropped.
    """

    def __init__(self, rays, cones, rank=None):
        rays = [tuple(int(x) for x in r) for r in rays]
        order = sorted(range(len(rays)), key=lambda i: rays[i])
        remap = {old: new for new, old in enumerate(order)}
        self.rays = tuple(rays[i] for i in order)
        self.rank = rank if rank is not None else (len(self.rays[0]) if self.rays else 0)
        keys = {tuple(sorted(remap[i] for i in c)) for c in cones}
        keys = [k for k in keys if k]
        by_ray = {}
        for k in keys:
            for i in k:
                by_ray.setdefault(i, []).append(k)
        maximal = [k for k in keys
                   if not any(len(t) > len(k) and set(k) < set(t) for t in by_ray[k[0]])]
        self.maximal = tuple(sorted(maximal))
        self._planar = None
        self._ray_cones = None
        self._index = {}
        for i, r in enumerate(self.rays):
            self._index.setdefault(r, i)
        self._cones = None
        self._faces = {}
        self._walls = None

    # -- construction helpers ------------------------------------------------
    @classmethod
    def from_vectors(cls, cones, rank=None):
        """Build from maximal cones given as lists of generator vectors."""
        rays = []
        index = {}
        keys = []
        for c in cones:
            key = []
            for v in c:
                p = primitive(v)
                if p not in index:
                    index[p] = len(rays)
                    rays.append(p)
                key.append(index[p])
            keys.append(key)
        return cls(rays, keys, rank)

    def to_dict(self):
        return {"rank": self.rank, "rays": [list(r) for r in self.rays],
                "cones": [list(c) for c in self.maximal]}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        return cls(d["rays"], d["cones"], d.get("rank"))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        return isinstance(other, Fan) and self.rays == other.rays and self.maximal == other.maximal

    def __hash__(self):
        return hash((self.rays, self.maximal))

    def __repr__(self):
        return f"Fan(rank={self.rank}, rays={len(self.rays)}, maximal={len(self.maximal)})"

    # -- accessors -------------------------------------------------------------
    def gens(self, key):
        return tuple(self.rays[i] for i in key)

    def vectors(self, key):
        return frozenset(self.rays[i] for i in key)

    def geom(self, key):
        return cone_geometry(self.gens(key))

    def ray_index(self, v):
        return self._index.get(tuple(v))

    def key_of(self, vectors):
        """Ray-index key of the cone with the given generators, if all are rays."""
        idx = []
        for v in vectors:
            i = self._index.get(tuple(v))
            if i is None:
                return None
            idx.append(i)
        return tuple(sorted(set(idx)))

    def faces(self, key):
        key = tuple(key)
        if key in self._faces:
            return self._faces[key]
        out = {key}
        geo = self.geom(key)
        if geo.simplicial:
            out = {sub for r in range(len(key) + 1) for sub in combinations(key, r)}
        elif geo.dim > 0:
            for f in geo.facets:
                sub = tuple(sorted(key[i] for i in f.on))
                out |= self.faces(sub)
        out.add(())
        self._faces[key] = out
        return out

    def cones(self):
        if self._cones is None:
            allc = set()
            for k in self.maximal:
                allc |= self.faces(k)
            self._cones = allc
        return self._cones

    def wall_pairs(self):
        """(sigma, tau, ray of tau opposite the common wall) for adjacent full simplicial
        cones, or None unless every maximal cone is full simplicial and every wall is
        shared by exactly two of them (which forces completeness)."""
        if self._walls is None:
            walls = {}
            ok = bool(self.maximal)
            for k in self.maximal:
                if len(k) != self.rank or not self.geom(k).simplicial or self.geom(k).dim != self.rank:
                    ok = False
                    break
                for i in range(len(k)):
                    walls.setdefault(k[:i] + k[i + 1:], []).append(k)
            pairs = []
            if ok:
                for sub, ks in walls.items():
                    if len(ks) != 2:
                        ok = False
                        break
                    a, b = ks
                    (xa,) = set(a) - set(sub)
                    (xb,) = set(b) - set(sub)
                    pairs.append((a, b, xb))
                    pairs.append((b, a, xa))
            self._walls = pairs if ok else False
        return self._walls or None

    def has_cone(self, key):
        key = tuple(sorted(key))
        if not key:
            return True
        return any(set(key) <= set(k) and key in self.faces(k) for k in self._by_ray().get(key[0], ()))

    def _by_ray(self):
        if self._ray_cones is None:
            self._ray_cones = {}
            for k in self.maximal:
                for i in k:
                    self._ray_cones.setdefault(i, []).append(k)
        return self._ray_cones

    def has_cone_vectors(self, vectors):
        key = self.key_of(vectors)
        return key is not None and self.has_cone(key)

    def dim_of(self, key):
        return self.geom(key).dim

    def maximal_containing(self, key):
        s = set(key)
        return [k for k in self.maximal if s <= set(k)]

    def negated(self):
        return Fan([neg(r) for r in self.rays], self.maximal, self.rank)

    # -- membership --------------------------------------------------------------
    def _candidates(self, v):
        """Maximal cones to try for v; planar fans use a binary search by angle."""
        if self.rank != 2 or len(self.maximal) < 16:
            yield from self.maximal
            return
        if self._planar is None:
            self._planar = _planar_index(self)
        if not self._planar:
            yield from self.maximal
            return
        starts, keys = self._planar
        pos = bisect_right(starts, _angle_key(v)) - 1
        near = (keys[pos % len(keys)], keys[(pos - 1) % len(keys)])
        yield from near
        yield from (k for k in self.maximal if k not in near)

    def locate(self, v):
        """Key of the unique cone with v in its relative interior, or None."""
        v = tuple(v)
        if not any(v):
            return ()
        for k in self._candidates(v):
            geo = self.geom(k)
            if geo.contains(v):
                pos = geo.tight(v)
                return tuple(sorted(k[i] for i in pos))
        return None

    def carrier(self, vectors):
        """Smallest cone containing all vectors, or None if none contains them all."""
        vectors = [tuple(v) for v in vectors]
        total = tuple(sum(c) for c in zip(*vectors)) if vectors else ()
        if not vectors:
            return ()
        key = self.locate(total)
        if key is None:
            return None
        geo = self.geom(key)
        if all(geo.contains(v) for v in vectors):
            return key
        return None

    def maximal_cone_of(self, v):
        for k in self._candidates(tuple(v)):
            if self.geom(k).contains(v):
                return k
        return None


def _angle_key(v):
    """Pseudo-angle increasing counter-clockwise; approximate, used only to order candidates."""
    t = v[0] / (abs(v[0]) + abs(v[1]))
    return (0, -t) if v[1] > 0 or (v[1] == 0 and v[0] > 0) else (1, t)


def _planar_index(f: Fan):
    """(start angles, cone keys) for a planar fan of 2-cones, sorted by the ccw-first ray."""
    rows = []
    for k in f.maximal:
        if len(k) != 2:
            return ()
        a, b = f.gens(k)
        if a[0] * b[1] - a[1] * b[0] < 0:
            a, b = b, a
        rows.append((_angle_key(a), k))
    rows.sort()
    return [r[0] for r in rows], [r[1] for r in rows]


def locate(f: Fan, v):
    return f.locate(v)


# ---------------------------------------------------------------- validation

def _separated(ga, gb, common):
    """Fast separating-facet test: some facet normal of one cone splits the pair properly."""
    a_only = [g for g in ga if g not in common]
    b_only = [g for g in gb if g not in common]
    for geo, sign in ((cone_geometry(tuple(ga)), 1), (cone_geometry(tuple(gb)), -1)):
        for f in geo.facets:
            n = f.normal if sign == 1 else neg(f.normal)
            if any(dot(n, c) != 0 for c in common):
                continue
            if all(dot(n, g) > 0 for g in a_only) and all(dot(n, g) < 0 for g in b_only):
                return True
    return False


def _meet_properly(ga, gb):
    """cone(ga) and cone(gb) intersect in the cone over their common generators."""
    common = [g for g in ga if g in set(gb)]
    if _separated(ga, gb, common):
        return True
    strict = [list(g) for g in ga if g not in common] + [list(neg(g)) for g in gb if g not in common]
    eqs = [list(g) for g in common]
    if not strict:
        return True
    m = len(ga[0])
    # covectors vanishing on the common face, positive on ga-only, negative on gb-only;
    # plus equations of the joint span so the test is relative to it
    return lp.strict_point(strict, (), eqs, m) is not None


def relints_intersect(ga, gb):
    """Exact LP: is there a point in relint cone(ga) and relint cone(gb)?"""
    m = len(ga[0])
    na, nb = len(ga), len(gb)
    # lambda, mu >= 1 with G lambda - H mu = 0 (homogeneous, so >= 1 is >0 up to scale)
    rows = []
    for k in range(m):
        rows.append([ga[i][k] for i in range(na)] + [-gb[j][k] for j in range(nb)])
    ineq = [[int(i == j) for j in range(na + nb)] for i in range(na + nb)]
    return lp.feasible_point(ineq, [1] * (na + nb), rows, [0] * m, na + nb) is not None


def _det2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _ccw_order(u, v):
    hu = 0 if u[1] > 0 or (u[1] == 0 and u[0] > 0) else 1
    hv = 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1
    if hu != hv:
        return hu - hv
    return -_det2(u, v)


def _planar_overlaps(f: Fan):
    """Overlaps among planar cones, as angular intervals sorted by their ccw-first ray.

    Checking cyclically adjacent intervals suffices: an interval overlapping a
    non-adjacent one also overlaps the interval sorted right after itself."""
    spans = []
    for k in f.maximal:
        a = f.rays[k[0]]
        b = f.rays[k[-1]]
        if _det2(a, b) < 0:
            a, b = b, a
        spans.append((a, b, k))
    spans.sort(key=cmp_to_key(lambda x, y: _ccw_order(x[0], y[0])))
    out = []
    if len(spans) < 2:
        return out
    for (a, b, k), (c, _, t) in zip(spans, spans[1:] + spans[:1]):
        same = c == a and k != t
        inside = _det2(a, c) > 0 and _det2(c, b) > 0
        if same or inside:
            out.append(f"interiors overlap: cones {list(k)} and {list(t)}")
    return out


def validate_fan(f: Fan):
    """List of violations (empty list means valid)."""
    out = []
    seen = set()
    for i, r in enumerate(f.rays):
        if len(r) != f.rank:
            out.append(f"ray {i} has wrong length")
            continue
        if not any(r):
            out.append(f"ray {i} is zero")
            continue
        if primitive(r) != r:
            out.append(f"ray {i} {list(r)} not primitive")
        if r in seen:
            out.append(f"duplicate ray {list(r)}")
        seen.add(r)
    if out:
        return out
    for k in f.maximal:
        geo = f.geom(k)
        if not geo.pointed:
            out.append(f"cone {list(k)} not strictly convex")
        elif len(geo.extreme) != len(k):
            out.append(f"cone {list(k)} has redundant generators")
    if out:
        return out
    used = set(i for k in f.maximal for i in k)
    for i in range(len(f.rays)):
        if i not in used:
            out.append(f"ray {i} belongs to no cone")
    if f.rank == 2:
        return out + _planar_overlaps(f)
    mx = list(f.maximal)
    for a in range(len(mx)):
        for b in range(a + 1, len(mx)):
            ga, gb = f.gens(mx[a]), f.gens(mx[b])
            if not _meet_properly(ga, gb):
                if relints_intersect(ga, gb):
                    out.append(f"interiors overlap: cones {list(mx[a])} and {list(mx[b])}")
                else:
                    out.append(f"cones {list(mx[a])} and {list(mx[b])} meet outside a common face")
    return out


# ------------------------------------------------------------ classification

@dataclass
class FanClass:
    complete: bool
    simplicial: bool
    regular: bool
    symmetric: bool

    def as_dict(self):
        return {"complete": self.complete, "simplicial": self.simplicial,
                "regular": self.regular, "symmetric": self.symmetric}


def is_complete(f: Fan):
    if not f.maximal:
        return False
    count = {}
    for k in f.maximal:
        geo = f.geom(k)
        if geo.dim != f.rank:
            return False
        for fc in geo.facets:
            sub = tuple(sorted(k[i] for i in fc.on))
            count[sub] = count.get(sub, 0) + 1
    return all(c == 2 for c in count.values())


def is_simplicial(f: Fan):
    return all(f.geom(k).simplicial for k in f.maximal)


def is_regular(f: Fan):
    return all(f.geom(k).simplicial and f.geom(k).multiplicity() == 1 for k in f.maximal)


def is_symmetric(f: Fan):
    mine = {f.vectors(k) for k in f.maximal}
    return all(frozenset(neg(v) for v in c) in mine for c in mine)


def classify_fan(f: Fan) -> FanClass:
    return FanClass(is_complete(f), is_simplicial(f), is_regular(f), is_symmetric(f))


def irregular_cones(f: Fan):
    return [k for k in f.maximal if not (f.geom(k).simplicial and f.geom(k).multiplicity() == 1)]


# -------------------------------------------------------------- refinement

def is_refinement(fine: Fan, coarse: Fan):
    """Same support, and every cone of fine inside a cone of coarse."""
    if fine.rank != coarse.rank:
        return False
    inside = {ck: [] for ck in coarse.maximal}
    for k in fine.maximal:
        gens = fine.gens(k)
        if coarse.carrier(gens) is None:
            return False
        dim = fine.geom(k).dim
        total = tuple(sum(c) for c in zip(*gens))
        for ck in coarse._candidates(total):
            cgeo = coarse.geom(ck)
            if cgeo.dim == dim and all(cgeo.contains(g) for g in gens):
                inside[ck].append(k)
                break
    # support of coarse covered by fine: facet pairing inside each coarse cone
    for ck in coarse.maximal:
        cgeo = coarse.geom(ck)
        if not inside[ck]:
            return False
        count = {}
        for k in inside[ck]:
            geo = fine.geom(k)
            for fc in geo.facets:
                sub = tuple(sorted(k[i] for i in fc.on))
                count[sub] = count.get(sub, 0) + 1
        for sub, c in count.items():
            if c == 2:
                continue
            if c == 1 and _on_boundary(cgeo, fine.gens(sub)):
                continue
            return False
    return True


def _on_boundary(cgeo, gens):
    if cgeo.dim == 0:
        return True
    return any(all(dot(fc.normal, g) == 0 for g in gens) for fc in cgeo.facets)


# -------------------------------------------------------- support functions

class SupportFunction:
    """Piecewise-linear function on a fan, stored by its values on ray generators.

    Convexity convention: convex means every linear form xi_sigma dominates h
    everywhere (xi_sigma >= h); strict means xi_sigma(v) > h(v) for every ray
    v outside sigma.
    """

    def __init__(self, fan: Fan, values):
        self.fan = fan
        if isinstance(values, dict):
            vals = [Fraction(values[i]) for i in range(len(fan.rays))]
        else:
            vals = [Fraction(v) for v in values]
        self.values = tuple(vals)
        self._forms = {}

    def value_at_ray(self, i):
        return self.values[i]

    def form(self, key):
        """Linear form xi on cone `key` (rational covector) agreeing with the ray values."""
        key = tuple(key)
        if key in self._forms:
            return self._forms[key]
        gens = self.fan.gens(key)
        m = self.fan.rank
        rows = [list(map(Fraction, g)) + [self.values[i]] for g, i in zip(gens, key)]
        red, piv = row_reduce(rows, m + 1)
        if m in piv:
            raise ValueError(f"values inconsistent on cone {list(key)}")
        xi = [Fraction(0)] * m
        for r, c in enumerate(piv):
            xi[c] = red[r][m]
        xi = tuple(xi)
        self._forms[key] = xi
        return xi

    def consistent(self):
        try:
            for k in self.fan.maximal:
                self.form(k)
        except ValueError:
            return False
        return True

    def __call__(self, v):
        key = self.fan.maximal_cone_of(tuple(v))
        if key is None:
            raise ValueError("point outside the support")
        return dot(self.form(key), v)

    def margin(self):
        """min over maximal sigma and rays v not in sigma of xi_sigma(v) - h(v)."""
        best = None
        for k in self.fan.maximal:
            xi = self.form(k)
            ks = set(k)
            for i, r in enumerate(self.fan.rays):
                if i in ks:
                    continue
                d = dot(xi, r) - self.values[i]
                if best is None or d < best:
                    best = d
        return best

    def wall_margin(self):
        """min over walls sigma|tau of xi_sigma(v) - h(v), v the ray of tau across the wall.

        On complete simplicial fans its sign decides strict convexity, at the
        cost of one evaluation per wall.  None when the fan is not of that kind."""
        pairs = self.fan.wall_pairs()
        if pairs is None:
            return None
        rays = self.fan.rays
        return min((dot(self.form(a), rays[x]) - self.values[x] for a, _, x in pairs), default=None)

    def is_strictly_convex(self):
        if not self.consistent():
            return False
        if len(self.fan.maximal) <= 1:
            return True
        mg = self.wall_margin() if self.fan.wall_pairs() is not None else self.margin()
        return mg is None or mg > 0

    def divisor(self, sign=1):
        """Coefficients of the associated torus-invariant divisor, either sign convention."""
        return {self.fan.rays[i]: sign * v for i, v in enumerate(self.values)}

    def __add__(self, other):
        return SupportFunction(self.fan, [a + b for a, b in zip(self.values, other.values)])

    def scaled(self, c):
        return SupportFunction(self.fan, [c * a for a in self.values])

    def to_dict(self):
        return {"values": [str(v) for v in self.values]}


def eval_support(h: SupportFunction, v):
    return h(v)


def restrict_support(h: SupportFunction, fine: Fan):
    """h viewed on a refinement: values h(ray) of the fine rays."""
    return SupportFunction(fine, [h(r) for r in fine.rays])


@dataclass
class Infeasible:
    """Proof that no strictly convex support function exists."""
    multipliers: list
    rows: list = field(repr=False, default_factory=list)
    rhs: list = field(repr=False, default_factory=list)

    def verify(self, nvars):
        return lp.check_farkas(self.rows, self.rhs, [], [], self.multipliers, [], nvars)


def _wall_constraints(f: Fan):
    """Rows (per adjacent pair sigma|tau across a wall): xi_sigma(v_tau) - h(v_tau) >= 1."""
    n = len(f.rays)
    walls = {}
    for k in f.maximal:
        geo = f.geom(k)
        for fc in geo.facets:
            sub = tuple(sorted(k[i] for i in fc.on))
            walls.setdefault(sub, []).append(k)
    rows = []
    for sub, pair in walls.items():
        if len(pair) != 2:
            continue
        for s, t in (pair, pair[::-1]):
            (extra,) = [i for i in t if i not in sub] or [None]
            if extra is None:
                continue
            rows.append(_xi_row(f, s, extra, n))
    return rows


def _xi_row(f, key, ray, n):
    """Row r with r.h = xi_key(ray) - h(ray) for a simplicial full-dimensional cone."""
    gens = f.gens(key)
    cols = transpose([list(g) for g in gens])
    coeffs = _solve_square(cols, f.rays[ray])
    row = [Fraction(0)] * n
    for c, i in zip(coeffs, key):
        row[i] += c
    row[ray] -= 1
    return row


def _solve_square(cols, v):
    from .latlin import solve
    return solve(cols, v)


def projectivity_certificate(f: Fan):
    """Strictly convex support function on a complete simplicial fan, or Infeasible."""
    if not (is_complete(f) and is_simplicial(f)):
        raise ValueError("projectivity_certificate needs a complete simplicial fan")
    if f.rank == 2:
        h = _polygon_support(f)
        if h is not None:
            return h
    n = len(f.rays)
    rows = _wall_constraints(f)
    rhs = [1] * len(rows)
    if not rows:
        return SupportFunction(f, [0] * n)
    # pin the global linear part: h = 0 on the rays of one maximal cone
    eqs = [[int(j == i) for j in range(n)] for i in f.maximal[0]]
    sol = lp.feasible_point(rows, rhs, eqs, [0] * len(eqs), n)
    if sol is None:
        cert = lp.farkas_certificate(rows, rhs, eqs, [0] * len(eqs), n)
        y, z = cert
        # fold the pinning equations into an inequality-only certificate when possible
        return Infeasible(multipliers=y, rows=rows, rhs=rhs) if not any(z) else \
            Infeasible(multipliers=y + z, rows=rows + eqs, rhs=rhs + [0] * len(eqs))
    h = SupportFunction(f, sol)
    if not h.is_strictly_convex():  # pragma: no cover - local-to-global failure
        raise AssertionError("wall-crossing solution failed the global check")
    return h


def _polygon_support(f: Fan):
    """Support function of a polygon whose normal fan is the complete planar fan f.

    Edge lengths l_i > 0 with sum l_i v_i = 0 come from writing each -v_i in
    its cone; the polygon vertices are partial sums of the rotated edges."""
    order = sorted(range(len(f.rays)), key=cmp_to_key(lambda i, j: _ccw_order(f.rays[i], f.rays[j])))
    rays = f.rays
    lengths = [Fraction(1)] * len(rays)
    for i, v in enumerate(rays):
        w = (-v[0], -v[1])
        key = f.maximal_cone_of(w)
        a, b = (rays[j] for j in key)
        d = _det2(a, b)
        ca, cb = Fraction(_det2(w, b), d), Fraction(_det2(a, w), d)
        for j, c in zip(key, (ca, cb)):
            lengths[j] += c
    vertex = [Fraction(0), Fraction(0)]
    values = [None] * len(rays)
    for pos, i in enumerate(order):
        v = rays[i]
        # the edge dual to v runs along v rotated clockwise; vertices are
        # where consecutive edges meet, and h(v) is the height of that edge
        values[i] = vertex[0] * v[0] + vertex[1] * v[1]
        vertex[0] += lengths[i] * v[1]
        vertex[1] -= lengths[i] * v[0]
    h = SupportFunction(f, values)
    return h if h.is_strictly_convex() else None


def standard_fan(kind, m=2):
    """Small named fans used throughout: 'P' (projective space), 'box' (orthants)."""
    e = [tuple(int(i == j) for j in range(m)) for i in range(m)]
    if kind == "P":
        rays = e + [tuple(-1 for _ in range(m))]
        cones = [[j for j in range(m + 1) if j != i] for i in range(m + 1)]
        return Fan(rays, cones, m)
    if kind == "box":
        cones = []
        from itertools import product
        for signs in product((1, -1), repeat=m):
            cones.append([tuple(s * x for x in ei) for s, ei in zip(signs, e)])
        return Fan.from_vectors(cones, m)
    raise ValueError(kind)
