"""Stabilization in any rank: the tree of rational invariant subspaces, its
chambers, adapted systems of cones, and the fan constructions built on them."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .exactnum import AlgebraicNumber, FieldElement, poly_to_str
from .fan import Fan, SupportFunction, cone_geometry, is_complete, is_simplicial, projectivity_certificate
from .latlin import (RationalSubspace, annihilator, integral_direction, primitive, saturate, solve,
                     solve_field, subspace_sum, zero_space, full_space, _field_vector_nullspace)
from .monomial import MonomialMap, STABLE, UNKNOWN, check_1stable, verify_certificate
from .refine import (IncorporationPlan, PlanError, cut_by_hyperplanes, incorporate_cone,
                     incorporate_cone_projective, regularize, simplicialize, stellar_projective,
                     stellar_subdivide)


class HypothesisError(ValueError):
    """The map does not satisfy the eigenvalue hypotheses of the requested construction."""


class RetryBudgetExceeded(RuntimeError):
    """Shrink-and-retry ran out of halvings; the message names the failing inequality."""


# ------------------------------------------------------------- eigenlines

@dataclass
class EigenLine:
    index: int
    value: AlgebraicNumber
    vector: tuple            # FieldElements over Q(value)
    covector: tuple          # left eigenvector with covector . vector = 1
    span: RationalSubspace   # smallest rational subspace containing the line
    cospan: RationalSubspace  # same for the covector line, inside M

    def pair(self, v):
        """covector(v) for a rational vector v, as a field element."""
        out = FieldElement.const(self.value, 0)
        for c, x in zip(self.covector, v):
            if x:
                out = out + c * Fraction(x)
        return out

    def floats(self):
        return [float(c) for c in self.vector]

    def describe(self):
        return {"min_poly": poly_to_str(list(self.value.min_poly)), "approx": float(self.value)}


def _coeff_span(vec, m):
    deg = vec[0].gen.degree
    rows = []
    for i in range(deg):
        cv = [c.coeffs[i] for c in vec]
        if any(cv):
            rows.append(integral_direction(cv))
    return saturate(rows, m) if rows else zero_space(m)


def _dominance_order(eigen):
    """Decreasing modulus, ties (mu, -mu) broken by the larger value."""
    from functools import cmp_to_key

    def cmp(a, b):
        c = abs(b.value).compare(abs(a.value))
        return c if c else b.value.compare(a.value)
    return sorted(eigen, key=cmp_to_key(cmp))


def eigenlines(phi):
    """Eigenlines, most dominant first; needs a real simple spectrum."""
    phi = MonomialMap.coerce(phi)
    spec = phi.spectrum
    if not spec.real_simple:
        raise HypothesisError("complex or repeated eigenvalues")
    m = phi.rank
    return [EigenLine(i, d.value, d.vector, d.covector, d.rational_span, _coeff_span(d.covector, m))
            for i, d in enumerate(_dominance_order(spec.eigen))]


# ----------------------------------------------------------- reduced tree

@dataclass
class TreeNode:
    space: RationalSubspace
    parent: int = None
    line: int = None          # index of the distinguished eigenline E(V)
    depth: int = 0
    children: list = field(default_factory=list)


@dataclass
class ReducedTree:
    phi: MonomialMap
    lines: list
    nodes: list
    index: dict               # basis -> node id
    split: dict               # (V basis, W basis) -> (line, V', W') of the binary tree

    def genealogy(self, node):
        """Node ids V_1, ..., V_s = node (root excluded)."""
        out = []
        while node:
            out.append(node)
            node = self.nodes[node].parent
        return out[::-1]

    def bfs(self):
        order, queue = [], deque([0])
        while queue:
            n = queue.popleft()
            order.append(n)
            queue.extend(self.nodes[n].children)
        return order

    def sign_vectors(self, node):
        return list(product((1, -1), repeat=self.nodes[node].depth))

    def node_of(self, space: RationalSubspace):
        return self.index.get(space.basis)

    def to_dict(self):
        return {"nodes": [{"id": i, "basis": [list(b) for b in n.space.basis], "dim": n.space.dim,
                           "parent": n.parent, "depth": n.depth,
                           "eigenline": None if n.line is None else self.lines[n.line].describe()}
                          for i, n in enumerate(self.nodes)]}


def reduced_tree(phi) -> ReducedTree:
    """Walk the binary tree of pairs (V, W) and keep the distinct V's."""
    phi = MonomialMap.coerce(phi)
    lines = eigenlines(phi)
    m = phi.rank
    root = TreeNode(zero_space(m))
    nodes = [root]
    index = {root.space.basis: 0}
    split = {}
    stack = [(zero_space(m), full_space(m))]
    while stack:
        v, w = stack.pop()
        if v.basis == w.basis:
            continue
        e = next(ln for ln in lines
                 if w.contains_subspace(ln.span) and not v.contains_subspace(ln.span))
        v2 = subspace_sum(v, e.span)
        w2 = annihilator(subspace_sum(annihilator(w), e.cospan))
        split[(v.basis, w.basis)] = (e.index, v2, w2)
        if v2.basis not in index:
            pid = index[v.basis]
            index[v2.basis] = len(nodes)
            nodes.append(TreeNode(v2, pid, e.index, nodes[pid].depth + 1))
            nodes[pid].children.append(len(nodes) - 1)
        stack.append((v, w2))
        stack.append((v2, w))
    return ReducedTree(phi, lines, nodes, index, split)


# ---------------------------------------------------------------- chambers

@dataclass(frozen=True)
class ChamberAddress:
    node: int
    eta: tuple

    def to_dict(self):
        return {"node": self.node, "eta": list(self.eta)}


def chamber_of(tree: ReducedTree, v) -> ChamberAddress:
    v = tuple(int(x) for x in v)
    if not any(v):
        raise ValueError("the zero vector lies in no chamber")
    m = tree.phi.rank
    a, b = zero_space(m), full_space(m)
    while a.basis != b.basis:
        li, a2, b2 = tree.split[(a.basis, b.basis)]
        if tree.lines[li].pair(v).sign():
            a = a2
        else:
            b = b2
    node = tree.index[a.basis]
    eta = tuple(tree.lines[tree.nodes[k].line].pair(v).sign() for k in tree.genealogy(node))
    return ChamberAddress(node, eta)


def in_chamber(tree, node, eta, v):
    if not tree.nodes[node].space.contains(v):
        return False
    return all(s * tree.lines[tree.nodes[k].line].pair(v).sign() > 0
               for k, s in zip(tree.genealogy(node), eta))


def e_vector(tree, node, eta):
    """Generator of E(V) on the side selected by the last sign of eta."""
    vec = tree.lines[tree.nodes[node].line].vector
    return tuple(c * eta[-1] for c in vec)


# ---------------------------------------------------------- adapted systems

@dataclass
class AdaptedSystem:
    cones: dict                 # (node, eta) -> sorted tuple of primitive generators
    rational: bool = True
    invariant: bool = False

    def get(self, node, eta):
        if node == 0:
            return ()
        return self.cones[(node, tuple(eta))]

    def to_dict(self):
        return {"rational": self.rational, "invariant": self.invariant,
                "cones": [{"node": n, "eta": list(e), "generators": [list(g) for g in c]}
                          for (n, e), c in sorted(self.cones.items())]}


def _cone_key(gens):
    return tuple(sorted(primitive(list(g)) for g in gens))


def _coefficients(gens, vec):
    """Coefficients of a field vector in the (independent) rational generators."""
    one = FieldElement.const(vec[0].gen, 1)
    m = len(vec)
    rows = [[g[r] for g in gens] for r in range(m)]
    return solve_field(rows, list(vec), one)


def cone_is_adapted(tree, node, eta, gens, parent_gens):
    """(A1) and (A2) for one cone given the parent's cone; returns a failure string or None."""
    space = tree.nodes[node].space
    gens = _cone_key(gens)
    geo = cone_geometry(gens)
    if not geo.simplicial or len(gens) != space.dim:
        return "not a simplicial cone of the node's dimension"
    if saturate(gens, space.ambient).basis != space.basis:
        return "does not span the node"
    for k, s in zip(tree.genealogy(node), eta):
        ln = tree.lines[tree.nodes[k].line]
        if any(s * ln.pair(g).sign() < 0 for g in gens):
            return f"interior leaves the chamber side of covector {k}"
    parent = tree.nodes[node].parent
    pspace = tree.nodes[parent].space
    inside = {g for g in gens if pspace.contains(g)}
    if inside != set(_cone_key(parent_gens)):
        return "intersection with the parent node is not the parent cone"
    coef = _coefficients(gens, e_vector(tree, node, eta))
    if coef is None:
        return "eigenvector outside the span"
    for g, c in zip(gens, coef):
        if g not in inside and c.sign() <= 0:
            return "projected eigenray not interior to the projected cone"
    return None


def check_adapted_system(tree, system: AdaptedSystem):
    failures = []
    for n in tree.bfs()[1:]:
        for eta in tree.sign_vectors(n):
            if (n, eta) not in system.cones:
                failures.append(((n, eta), "missing"))
                continue
            why = cone_is_adapted(tree, n, eta, system.cones[(n, eta)],
                                  system.get(tree.nodes[n].parent, eta[:-1]))
            if why:
                failures.append(((n, eta), why))
    return failures


def _system_cone_in_fan(f: Fan, tree, node, eta, parent_gens):
    """The unique fan cone inside the node containing parent_gens with the eigenray condition."""
    space = tree.nodes[node].space
    pset = set(_cone_key(parent_gens))
    if pset:
        pkey = tuple(sorted(f.ray_index(g) for g in pset))
        if None in pkey:
            return None
        maxes = f.maximal_containing(pkey)
    else:
        maxes = f.maximal
    found = set()
    for k in maxes:
        gens = [g for g in f.gens(k) if space.contains(g)]
        if len(gens) != space.dim or not pset <= set(gens):
            continue
        key = _cone_key(gens)
        if key in found:
            continue
        if cone_is_adapted(tree, node, eta, key, parent_gens) is None:
            found.add(key)
    return found.pop() if len(found) == 1 else None


def find_adapted_system(f: Fan, tree: ReducedTree):
    """Reconstruct the adapted system contained in f node by node, or None."""
    cones = {}
    for n in tree.bfs()[1:]:
        parent = tree.nodes[n].parent
        for eta in tree.sign_vectors(n):
            pg = cones[(parent, eta[:-1])] if parent else ()
            c = _system_cone_in_fan(f, tree, n, eta, pg)
            if c is None:
                return None
            cones[(n, eta)] = c
    return AdaptedSystem(cones, rational=True, invariant=_system_invariant(tree.phi, cones))


def _system_invariant(phi, cones):
    return all(_cone_invariant(phi, c) for c in cones.values())


def _cone_invariant(phi, gens):
    geo = cone_geometry(_cone_key(gens))
    return all(geo.contains(phi(g)) for g in gens)


# ------------------------------------------------------ rational rounding

def _round_in_space(vec, space: RationalSubspace, bits):
    """Primitive lattice vector in `space` close in direction to the float vector vec."""
    basis = [list(b) for b in space.basis]
    d = len(basis)
    vq = [Fraction(x) for x in vec]
    gram = [[sum(Fraction(a) * b for a, b in zip(bi, bj)) for bj in basis] for bi in basis]
    rhs = [sum(Fraction(a) * x for a, x in zip(bi, vq)) for bi in basis]
    c = solve(gram, rhs)
    scale = 2 ** bits
    cq = [Fraction(round(x * scale), scale) for x in c]
    w = [sum(cq[i] * basis[i][j] for i in range(d)) for j in range(space.ambient)]
    if not any(w):
        return None
    return integral_direction(w)


def _simplex_offsets(count):
    """Offsets (in units of the secondary eigenvectors) around the leading one.

    Entry i lists the coefficients of e_2..e_count; the cone over
    e_1 + delta * offset_i contains e_1 in its interior."""
    out = []
    for i in range(1, count + 1):
        row = [Fraction(0)] * (count - 1)
        if i < count:
            for j in range(1, i):
                row[j - 1] = Fraction(1)
            row[i - 1] = Fraction(-1)
        else:
            for j in range(1, count):
                row[j - 1] = Fraction(1)
        out.append(row)
    return out


def _new_lines(tree, node):
    """Eigenlines in V but not in its parent, the dominant one first."""
    space = tree.nodes[node].space
    pspace = tree.nodes[tree.nodes[node].parent].space
    return [ln for ln in tree.lines
            if space.contains_subspace(ln.span) and not pspace.contains_subspace(ln.span)]


def rational_adapted_system(phi, tree: ReducedTree = None, retry_budget=60):
    """Adapted system built by rounding e(V_1) + ... + e(V_s) + offsets into each node."""
    tree = tree or reduced_tree(phi)
    cones = {}
    for n in tree.bfs()[1:]:
        parent = tree.nodes[n].parent
        space = tree.nodes[n].space
        gen = tree.genealogy(n)
        new = _new_lines(tree, n)
        offs = _simplex_offsets(len(new))
        m = space.ambient
        for eta in tree.sign_vectors(n):
            pg = cones[(parent, eta[:-1])] if parent else ()
            base = [0.0] * m
            for k, s in zip(gen, eta):
                fl = tree.lines[tree.nodes[k].line].floats()
                base = [b + s * x for b, x in zip(base, fl)]
            found = None
            last = "no attempt"
            for step in range(retry_budget):
                delta = 0.5 ** (step // 4)
                bits = 1 + 2 * step
                targets = []
                for row in offs:
                    t = list(base)
                    for c, ln in zip(row, new[1:]):
                        fl = ln.floats()
                        t = [a + eta[-1] * delta * float(c) * x for a, x in zip(t, fl)]
                    targets.append(t)
                pts = [_round_in_space(t, space, bits) for t in targets]
                if any(p is None for p in pts):
                    continue
                cand = tuple(pg) + tuple(pts)
                if len(set(map(tuple, cand))) != len(cand):
                    last = "rounded generators coincide"
                    continue
                last = cone_is_adapted(tree, n, eta, cand, pg)
                if last is None:
                    found = _cone_key(cand)
                    break
            if found is None:
                raise RetryBudgetExceeded(f"rational adapted cone for node {n}, eta {eta}: {last}")
            cones[(n, eta)] = found
    return AdaptedSystem(cones, rational=True, invariant=_system_invariant(tree.phi, cones))


# ------------------------------------------------------- Gamma directions

@dataclass
class GammaDirections:
    node: int
    eta: tuple
    frame: list               # [(k, i, line index, orientation)], k and i from 1
    deltas: list
    epsilons: list            # epsilon_2 .. epsilon_s
    gammas: list
    v: dict                   # (k, i) -> coordinates in the eigen frame
    xi: dict                  # (l, j) -> coordinates in the dual frame
    u: dict
    w: dict
    duality: dict = field(default_factory=dict)
    invariance: dict = field(default_factory=dict)

    def ambient(self, tree, coords):
        """Float vector of a frame-coordinate dict."""
        m = tree.phi.rank
        out = [0.0] * m
        for (k, i, li, o) in self.frame:
            c = coords.get((k, i), 0)
            if c:
                fl = tree.lines[li].floats()
                out = [a + o * float(c) * x for a, x in zip(out, fl)]
        return out

    def to_dict(self):
        return {"node": self.node, "eta": list(self.eta),
                "deltas": [str(d) for d in self.deltas], "epsilons": [str(e) for e in self.epsilons],
                "gammas": [str(g) for g in self.gammas]}


def _signed_sum(terms):
    """Exact sign of sum q * a for rationals q and algebraic numbers a."""
    terms = [(Fraction(q), a) for q, a in terms if q]
    if not terms:
        return 0
    for _ in range(80):
        lo = hi = Fraction(0)
        for q, a in terms:
            l, h = a.interval()
            lo += min(q * l, q * h)
            hi += max(q * l, q * h)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if lo == hi == 0:
            return 0
        for _, a in terms:
            a._tighten()
    total = AlgebraicNumber.rational(0)
    for q, a in terms:
        total = total + a * q
    return total.sign()


def gamma_directions(phi, tree: ReducedTree, node, eta, deltas, epsilons=()):
    """Evaluate the v / xi / u / w formulas and check the duality and invariance sign tables."""
    gen = tree.genealogy(node)
    s = len(gen)
    eta = tuple(eta)
    deltas = [Fraction(d) for d in deltas]
    epsilons = [Fraction(e) for e in epsilons]
    if len(deltas) != s or len(epsilons) != max(s - 1, 0):
        raise ValueError("need one delta per level and one epsilon per level after the first")
    if any(d <= 0 for d in deltas) or any(e <= 0 for e in epsilons):
        raise ValueError("parameters must be positive")
    gam = [Fraction(1)]
    for e in epsilons:
        gam.append(gam[-1] * e)
    frame, sizes, nu = [], [], {}
    for k, n in enumerate(gen, start=1):
        new = _new_lines(tree, n)
        sizes.append(len(new))
        for i, ln in enumerate(new, start=1):
            frame.append((k, i, ln.index, eta[k - 1] if i == 1 else 1))
            nu[(k, i)] = ln.value
    offs = [_simplex_offsets(mk) for mk in sizes]
    lead = [Fraction(1)] + [Fraction(1, 2 ** (j - 1)) * gam[j - 1] for j in range(2, s + 1)]

    def vcoords(k, i):
        c = {}
        scale = Fraction(1) if k == 1 else Fraction(2) ** (2 - k) * gam[k - 1]
        for j in range(1, k):
            c[(j, 1)] = lead[j - 1]
        c[(k, 1)] = scale
        for t, o in enumerate(offs[k - 1][i - 1], start=2):
            if o:
                c[(k, t)] = scale * deltas[k - 1] * o
        return c

    v = {(k, i): vcoords(k, i) for k in range(1, s + 1) for i in range(1, sizes[k - 1] + 1)}

    def xicoords(l, j):
        c = {(l, 1): Fraction(1)}
        ml = sizes[l - 1]
        if ml >= 2:
            if j < ml:
                for t in range(2, j + 1):
                    c[(l, t)] = Fraction(2) ** (t - 2) / deltas[l - 1]
                c[(l, j + 1)] = -Fraction(2) ** (j - 1) / deltas[l - 1]
            else:
                for t in range(2, ml + 1):
                    c[(l, t)] = Fraction(2) ** (t - 2) / deltas[l - 1]
        a = Fraction(1)
        for jj in range(l + 1, s + 1):
            a /= epsilons[jj - 2]
            c[(jj, 1)] = c.get((jj, 1), 0) - a
        return c

    xi = {(l, j): xicoords(l, j) for l in range(1, s + 1) for j in range(1, sizes[l - 1] + 1)}
    u, w = {}, {}
    for k in range(1, s + 1):
        base = {(j, 1): lead[j - 1] for j in range(1, k)}
        top = Fraction(1) if k == 1 else Fraction(2) ** (2 - k) * gam[k - 1]
        w[k] = {**base, (k, 1): top}
        u[k] = {**base, (k, 1): Fraction(1) if k == 1 else Fraction(2) ** (1 - k) * gam[k - 1]}
    out = GammaDirections(node, eta, frame, deltas, epsilons, gam, v, xi, u, w)
    for a, xa in xi.items():
        for b, vb in v.items():
            val = sum(xa.get(c, 0) * x for c, x in vb.items())
            out.duality[(a, b)] = val
            if (a == b and val <= 0) or (a != b and val != 0):
                raise ValueError(f"duality table fails at xi{a}, v{b}")
    for a, xa in xi.items():
        for i in range(1, sizes[-1] + 1):
            vb = v[(s, i)]
            sg = _signed_sum([(xa.get(c, 0) * x, nu[c]) for c, x in vb.items()])
            out.invariance[(a, (s, i))] = sg
            if sg <= 0:
                raise ValueError(f"invariance inequality fails at xi{a}, phi(v{(s, i)})")
    return out


# -------------------------------------------------------------- hypotheses

def _require_positive_distinct(phi):
    if phi.trace < 0:
        raise HypothesisError("OBSTRUCTED: trace < 0, no invariant full-dimensional simplicial cone")
    spec = phi.spectrum
    if not spec.real_simple:
        raise HypothesisError("eigenvalues must be real and distinct")
    if any(e.value.sign() <= 0 for e in spec.eigen):
        raise HypothesisError("eigenvalues must be positive")


def _abs_distinct(phi):
    spec = phi.spectrum
    if not spec.real_simple:
        return False
    vals = [abs(e.value) for e in spec.eigen]
    if any(v.sign() == 0 for v in vals):
        return False
    return all(vals[i].compare(vals[j]) != 0 for i in range(len(vals)) for j in range(i))


def _is_scalar(phi):
    m = phi.matrix
    return all(m[i][j] == (m[0][0] if i == j else 0) for i in range(phi.rank) for j in range(phi.rank))


# --------------------------------------------------------- fan preparation

@dataclass
class PreparedFan:
    fan: Fan
    support: SupportFunction
    system: AdaptedSystem
    tree: ReducedTree


def _walls(tree, system):
    normals = set()
    for n in tree.bfs()[1:]:
        sp = tree.nodes[n].space
        if sp.dim < sp.ambient:
            normals.update(primitive(list(b)) for b in annihilator(sp).basis)
    for gens in system.cones.values():
        geo = cone_geometry(gens)
        normals.update(primitive(list(fc.normal)) for fc in geo.facets)
    out = set()
    for nv in normals:
        if any(nv) and tuple(-x for x in nv) not in out:
            out.add(tuple(nv))
    return sorted(out)


def _certificate(f):
    h = projectivity_certificate(f)
    if not isinstance(h, SupportFunction):
        raise ArithmeticError("projectivity certificate search failed")
    return h


def _cut_support(f, coarse, normals):
    """h0 - sum |n.v| on a fan refining `coarse` and cut by the given hyperplanes."""
    src = coarse if is_simplicial(coarse) else simplicialize(coarse)
    h0 = _certificate(src)
    vals = [h0(r) - sum(abs(sum(a * b for a, b in zip(nv, r))) for nv in normals) for r in f.rays]
    return SupportFunction(f, vals)


def _pulled_support(fine, h, ratios=(Fraction(1, 8), Fraction(1, 64), Fraction(1, 1024))):
    """Strictly convex function on a pulling triangulation: raise each ray by a
    geometrically smaller amount in pulling order."""
    order = sorted(fine.rays)
    base = [h(r) for r in fine.rays]
    mg = h.margin()
    top = Fraction(mg) / 2 if mg and mg > 0 else Fraction(1)
    for q in ratios:
        bump = {r: q ** i for i, r in enumerate(order)}
        eps = top
        for _ in range(12):
            hp = SupportFunction(fine, [b + eps * bump[r] for r, b in zip(fine.rays, base)])
            if hp.is_strictly_convex():
                return hp
            eps /= 4
    return None


def _cut_projective(fan, normals):
    """Simplicial fan refining `fan` by the hyperplanes, with a strictly convex support function."""
    cut = cut_by_hyperplanes(fan, normals)
    h = _cut_support(cut, fan, normals)
    if not h.is_strictly_convex():  # pragma: no cover - sum of strictly convex pieces
        raise AssertionError("arrangement support function is not strictly convex")
    fine = simplicialize(cut)
    hp = h if fine is cut else _pulled_support(fine, h)
    if hp is None:
        hp = _certificate(fine)
    return fine, hp


def prepare_fan(phi, fan: Fan, tree=None, retry_budget=60) -> PreparedFan:
    """Regular projective refinement carrying every node as a subfan and an adapted system."""
    phi = MonomialMap.coerce(phi)
    if not is_complete(fan):
        raise ValueError("prepare_fan needs a complete fan")
    tree = tree or reduced_tree(phi)
    found = find_adapted_system(fan, tree) if is_simplicial(fan) else None
    if found is not None and _nodes_are_subfans(fan, tree):
        f, h = fan, _certificate(fan)
    else:
        rs = rational_adapted_system(phi, tree, retry_budget)
        f, h = _cut_projective(fan, _walls(tree, rs))
    f, h = regularize(f, h=h)
    system = find_adapted_system(f, tree)
    if system is None:
        raise RuntimeError("prepared fan lost its adapted system")
    return PreparedFan(f, h, system, tree)


def _nodes_are_subfans(f: Fan, tree):
    """Every node subspace is a union of cones of f (checked on maximal cones)."""
    for n in tree.bfs()[1:]:
        sp = tree.nodes[n].space
        if sp.dim == sp.ambient:
            continue
        normals = [list(b) for b in annihilator(sp).basis]
        for k in f.maximal:
            geo = f.geom(k)
            for nv in normals:
                vals = [sum(a * b for a, b in zip(nv, g)) for g in f.gens(k)]
                if any(x > 0 for x in vals) and any(x < 0 for x in vals):
                    return False
    return True


# ---------------------------------------------- positive-spectrum pipeline

@dataclass
class NDResult:
    fan: Fan
    certificate: object
    support: SupportFunction = None
    tree: ReducedTree = None
    system: AdaptedSystem = None
    planted: dict = field(default_factory=dict)
    n0: int = None
    verdict: str = STABLE
    report: dict = field(default_factory=dict)

    def to_dict(self):
        out = {"verdict": self.verdict, "fan": self.fan.to_dict() if self.fan else None,
               "certificate": self.certificate.to_dict() if self.certificate else None}
        if self.tree is not None:
            out["tree"] = self.tree.to_dict()
        if self.system is not None:
            out["adapted_system"] = self.system.to_dict()
        if self.planted:
            out["incorporated"] = [{"node": n, "eta": list(e), "generators": [list(g) for g in c]}
                                   for (n, e), c in sorted(self.planted.items())]
        if self.n0 is not None:
            out["n0"] = self.n0
        if self.support is not None:
            out["support_function"] = self.support.to_dict()
        out.update(self.report)
        return out


def _plant_invariant_cone(phi, f, tree, node, eta, parent_gens, sigma, prefix, retry_budget):
    """Rational invariant cone near Gamma(V, eta) inside the fan cone sigma."""
    s = tree.nodes[node].depth
    space = tree.nodes[node].space
    sgeo = cone_geometry(sigma)
    pdeltas, peps = prefix
    last = "no attempt"
    for total in range(1, retry_budget + 1):
        splits = [(total, 0)] if s == 1 else [(c, total - c) for c in range(1, total)]
        for c, a in splits:
            deltas = list(pdeltas) + [Fraction(1, 2 ** c)]
            eps = list(peps) + ([Fraction(1, 2 ** a)] if s > 1 else [])
            try:
                gd = gamma_directions(phi, tree, node, eta, deltas, eps)
            except ValueError as exc:
                last = str(exc)
                continue
            targets = [gd.ambient(tree, gd.v[(s, i)])
                       for i in range(1, len(_new_lines(tree, node)) + 1)]
            for bits in (c + a + 6, c + a + 12, c + a + 20, c + a + 30):
                pts = [_round_in_space(t, space, bits) for t in targets]
                if any(p is None for p in pts):
                    continue
                if not all(sgeo.in_relint(p) for p in pts):
                    last = "rounded direction outside the interior of the fan cone"
                    continue
                cand = tuple(parent_gens) + tuple(pts)
                if len(set(cand)) != len(cand):
                    continue
                why = cone_is_adapted(tree, node, eta, cand, parent_gens)
                if why:
                    last = why
                    continue
                if not _cone_invariant(phi, cand):
                    last = "rounded cone is not invariant"
                    continue
                return _cone_key(cand), (deltas, eps)
    raise RetryBudgetExceeded(f"node {node}, eta {eta}: {last}")


def _absorb_orbits(phi, f, h, targets, n_max):
    """Add the orbit rays phi^n(rho) that are not yet inside a planted invariant cone."""
    geos = [cone_geometry(g) for g in targets]
    added = []
    todo = list(f.rays)
    for r in todo:
        w = r
        for _ in range(n_max):
            w = primitive(phi(w))
            if any(g.contains(w) for g in geos):
                break
            if f.ray_index(w) is None:
                if h is not None:
                    f, h = stellar_projective(f, h, w)
                else:
                    f = stellar_subdivide(f, w)
                added.append(w)
        else:
            raise RuntimeError(f"orbit of {list(r)} not absorbed within {n_max} steps")
    return f, h, added


def stabilize_nd(phi, fan: Fan, n_max=200, retry_budget=60) -> NDResult:
    """Simplicial projective refinement on which phi is torically stable (positive distinct spectrum)."""
    phi = MonomialMap.coerce(phi)
    _require_positive_distinct(phi)
    prep = prepare_fan(phi, fan, retry_budget=retry_budget)
    tree, f, h = prep.tree, prep.fan, prep.support
    planted, params = {}, {}
    for n in tree.bfs()[1:]:
        parent = tree.nodes[n].parent
        for eta in tree.sign_vectors(n):
            pg = planted[(parent, eta[:-1])] if parent else ()
            prefix = params[(parent, eta[:-1])] if parent else ([], [])
            sigma = _system_cone_in_fan(f, tree, n, eta, pg)
            if sigma is None:
                raise RuntimeError(f"no adapted cone for node {n}, eta {eta}")
            if _cone_invariant(phi, sigma):
                # already invariant: nothing to plant; later levels reuse default parameters
                s = tree.nodes[n].depth
                tau, used = sigma, ([Fraction(1, 2)] * s, [Fraction(1, 2)] * (s - 1))
            else:
                tau, used = _plant_invariant_cone(phi, f, tree, n, eta, pg, sigma, prefix,
                                                  retry_budget)
            if tau != sigma:
                plan = IncorporationPlan.make(f, sigma, tau)
                f, h = incorporate_cone_projective(f, h, plan)
            planted[(n, eta)] = tau
            params[(n, eta)] = used
            lost = [k for k, c in planted.items() if not f.has_cone_vectors(c)]
            if lost:
                raise RuntimeError(f"incorporation removed planted cones {lost}")
    f, h, added = _absorb_orbits(phi, f, h, list(planted.values()), n_max)
    verdict = check_1stable(phi, f, n_max)
    system = AdaptedSystem(dict(planted), rational=True, invariant=_system_invariant(phi, planted))
    report = {"orbit_rays_added": len(added), "rays": len(f.rays),
              "maximal_cones": len(f.maximal)}
    if not verdict.stable:
        return NDResult(f, None, h, tree, system, planted, verdict=verdict.tag, report=report)
    if not verify_certificate(phi, f, verdict.certificate):
        raise AssertionError("stability certificate failed re-verification")
    return NDResult(f, verdict.certificate, h, tree, system, planted, report=report)


# ------------------------------------------------------- iterate pipeline

def _maps_into_system(psi, system: AdaptedSystem):
    """Each system cone is sent into a system cone of the same node (signs may change)."""
    by_node = {}
    for (n, _), c in system.cones.items():
        by_node.setdefault(n, []).append(cone_geometry(c))
    for (n, _), c in system.cones.items():
        imgs = [psi(g) for g in c]
        if not any(all(geo.contains(v) for v in imgs) for geo in by_node[n]):
            return False
    return True


def stabilize_iterate(phi, fan: Fan, n_max=200, search_cap=64) -> NDResult:
    """Prepared fan and the first n0 such that phi^n is stable on it for n0 <= n < n0 + window."""
    phi = MonomialMap.coerce(phi)
    if _is_scalar(phi):
        f = fan if is_simplicial(fan) else simplicialize(fan)
        verdict = check_1stable(phi, f, n_max)
        return NDResult(f, verdict.certificate, n0=1 if verdict.stable else None,
                        verdict=verdict.tag, report={"window": 1})
    if not _abs_distinct(phi):
        raise HypothesisError("eigenvalues must be real, nonzero and distinct in absolute value")
    prep = prepare_fan(phi, fan)
    f = prep.fan
    window = 2 if any(e.value.sign() < 0 for e in phi.spectrum.eigen) else 1
    ok = {}

    def good(n):
        if n not in ok:
            psi = phi.power(n)
            v = check_1stable(psi, f, n_max)
            ok[n] = (v.stable and verify_certificate(psi, f, v.certificate)
                     and _maps_into_system(psi, prep.system), v)
        return ok[n][0]

    for n in range(1, search_cap + 1):
        if all(good(j) for j in range(n, n + window)):
            return NDResult(f, ok[n][1].certificate, prep.support, prep.tree, prep.system, n0=n,
                            report={"window": window})
    return NDResult(f, None, prep.support, prep.tree, prep.system, verdict=UNKNOWN,
                    report={"window": window, "search_cap": search_cap})


# ------------------------------------------------- invariant orthant fan

def _dominant(phi):
    spec = phi.spectrum
    if spec.complex_pairs or not spec.eigen:
        raise HypothesisError("the dominant eigenvalue must be real")
    top = max(spec.eigen, key=lambda e: abs(e.value))
    others = [abs(e.value) for e in spec.eigen if e is not top]
    if top.multiplicity != 1 or any(abs(top.value).compare(o) <= 0 for o in others):
        raise HypothesisError("the eigenvalue of largest modulus must be simple and strictly dominant")
    if spec.complex_pairs:
        raise HypothesisError("the dominant eigenvalue must be real")
    return top


def _secondary_frame(phi, top):
    """Eigenvectors for the other eigenvalues in decreasing order, or None if not diagonalizable."""
    spec = phi.spectrum
    if spec.complex_pairs:
        return None
    out = []
    for e in spec.eigen:
        if e is top:
            continue
        if e.value.sign() <= 0:
            return None
        vecs = _field_vector_nullspace([list(r) for r in phi.matrix], e.value)
        if len(vecs) != e.multiplicity:
            return None
        out.extend([float(c) for c in v] for v in vecs)
    return out


def _hyperplane_frame(cov):
    """Float orthonormal basis of {x = 0} for the float covector x."""
    m = len(cov)
    basis = []
    vecs = [[float(i == j) for j in range(m)] for i in range(m)]
    xs = [cov]
    for v in vecs:
        w = list(v)
        for b in xs + basis:
            nb = sum(x * x for x in b)
            c = sum(x * y for x, y in zip(w, b)) / nb
            w = [x - c * y for x, y in zip(w, b)]
        nrm = sum(x * x for x in w) ** 0.5
        if nrm > 1e-9:
            basis.append([x / nrm for x in w])
        if len(basis) == m - 1:
            break
    return basis


def _cone_around(phi, top, frame, sign, inside=None, invariant=True, retry_budget=60):
    """Lattice vectors t_j with x(t_j) > 0 and sign*e interior, optionally invariant."""
    e = tuple(c * sign for c in top.vector)
    ef = [float(c) for c in e]
    m = phi.rank
    offs = _simplex_offsets(m)
    full = full_space(m)
    last = "no attempt"
    for step in range(retry_budget):
        delta = 0.5 ** (step // 3)
        bits = 6 + 2 * step
        pts = []
        for row in offs:
            t = list(ef)
            for c, d in zip(row, frame):
                t = [a + delta * float(c) * x for a, x in zip(t, d)]
            pts.append(_round_in_space(t, full, bits))
        if any(p is None for p in pts) or len(set(pts)) != m:
            continue
        geo = cone_geometry(tuple(sorted(pts)))
        if not geo.simplicial or geo.dim != m:
            last = "degenerate cone"
            continue
        if any(sign * _pair(top, p).sign() <= 0 for p in pts):
            last = "generator outside {x > 0}"
            continue
        coef = _coefficients(pts, e)
        if coef is None or any(c.sign() <= 0 for c in coef):
            last = "eigenvector not interior"
            continue
        if inside is not None and not all(inside.in_relint(p) for p in pts):
            last = "generator outside the prescribed cone"
            continue
        if invariant and not all(geo.contains(phi(p)) for p in pts):
            last = "cone not invariant"
            continue
        return tuple(sorted(pts))
    raise RetryBudgetExceeded(f"cone around the dominant eigenray: {last}")


def _pair(line, v):
    out = FieldElement.const(line.value, 0)
    for c, x in zip(line.covector, v):
        if x:
            out = out + c * Fraction(x)
    return out


def orthant_fan(gens):
    """Complete simplicial fan with maximal cones sum R+ eps_j v_j."""
    m = len(gens)
    cones = [[tuple(s * x for x in g) for s, g in zip(signs, gens)]
             for signs in product((1, -1), repeat=m)]
    return Fan.from_vectors(cones, m)


def build_fan_thmB(phi, n_max=200, search_cap=64, retry_budget=60) -> NDResult:
    """Orthant fan over generators of an invariant cone around the dominant eigenray.

    With a positive diagonalizable spectrum and mu_1 > mu_2 the cone is
    invariant under phi itself (n0 = 1); with only |mu_1| > |mu_2| the first
    n0 from which phi^n keeps the pair of opposite cones is searched.
    """
    phi = MonomialMap.coerce(phi)
    m = phi.rank
    if _is_scalar(phi):
        f = orthant_fan([tuple(int(i == j) for j in range(m)) for i in range(m)])
        v = check_1stable(phi, f, n_max)
        return NDResult(f, v.certificate, SupportFunction(f, [-1] * len(f.rays)), n0=1,
                        verdict=v.tag, report={"variant": "scalar", "generators": [list(r) for r in f.rays if sum(r) > 0]})
    top = _dominant(phi)
    frame = _secondary_frame(phi, top) if top.value.sign() > 0 else None
    variant = "B" if frame is not None else "B'"
    if frame is None:
        frame = _hyperplane_frame([float(c) for c in top.covector])
    gens = _cone_around(phi, top, frame, 1, invariant=(variant == "B"), retry_budget=retry_budget)
    f = orthant_fan(gens)
    h = SupportFunction(f, [-1] * len(f.rays))
    if not h.is_strictly_convex():  # pragma: no cover - orthant fans always pass
        raise AssertionError("orthant support function failed")
    report = {"variant": variant, "generators": [list(g) for g in gens]}
    if variant == "B":
        v = check_1stable(phi, f, n_max)
        if v.stable and not verify_certificate(phi, f, v.certificate):
            raise AssertionError("stability certificate failed re-verification")
        return NDResult(f, v.certificate, h, n0=1, verdict=v.tag, report=report)
    sg, neg_geo = cone_geometry(gens), cone_geometry(tuple(tuple(-x for x in g) for g in gens))
    cache = {}

    def good(n):
        if n not in cache:
            psi = phi.power(n)
            imgs = [psi(g) for g in gens]
            keeps = all(sg.contains(w) for w in imgs) or all(neg_geo.contains(w) for w in imgs)
            v = check_1stable(psi, f, n_max) if keeps else None
            cache[n] = (keeps and v.stable and verify_certificate(psi, f, v.certificate), v)
        return cache[n][0]

    for n in range(1, search_cap + 1):
        if good(n) and good(n + 1):
            return NDResult(f, cache[n][1].certificate, h, n0=n, report=report)
    return NDResult(f, None, h, verdict=UNKNOWN, report=dict(report, search_cap=search_cap))


def stabilize_single_eigenray(phi, fan: Fan, n_max=200, retry_budget=60) -> NDResult:
    """Refine a simplicial fan whose cones around +-e avoid {x = 0} and with no ray in {x = 0}."""
    phi = MonomialMap.coerce(phi)
    if not (is_complete(fan) and is_simplicial(fan)):
        raise ValueError("needs a complete simplicial fan")
    top = _dominant(phi)
    if top.value.sign() <= 0 or any(e.value.sign() <= 0 for e in phi.spectrum.eigen):
        raise HypothesisError("eigenvalues must be positive")
    if phi.spectrum.complex_pairs:
        raise HypothesisError("eigenvalues must be real")
    if any(_pair(top, r).sign() == 0 for r in fan.rays):
        raise HypothesisError("a ray of the fan lies in the hyperplane complementary to the dominant eigenray")
    frame = _secondary_frame(phi, top) or _hyperplane_frame([float(c) for c in top.covector])
    h = projectivity_certificate(fan)
    h = h if isinstance(h, SupportFunction) else None
    f = fan
    planted = {}
    for sign in (1, -1):
        e = tuple(c * sign for c in top.vector)
        sigma = None
        for k in f.maximal:
            coef = _coefficients(f.gens(k), e)
            if coef is not None and all(c.sign() > 0 for c in coef):
                sigma = f.gens(k)
                break
        if sigma is None:
            raise HypothesisError("the dominant eigenray is not interior to a maximal cone")
        if any(sign * _pair(top, g).sign() <= 0 for g in sigma):
            raise HypothesisError("the cone around the eigenray meets {x = 0}")
        tau = _cone_around(phi, top, frame, sign, inside=cone_geometry(tuple(sorted(sigma))),
                           retry_budget=retry_budget)
        plan = IncorporationPlan.make(f, sigma, tau)
        if h is not None:
            f, h = incorporate_cone_projective(f, h, plan)
        else:
            f = incorporate_cone(f, plan)
        planted[(0, (sign,))] = tau
    f, h, added = _absorb_orbits(phi, f, h, list(planted.values()), n_max)
    v = check_1stable(phi, f, n_max)
    if v.stable and not verify_certificate(phi, f, v.certificate):
        raise AssertionError("stability certificate failed re-verification")
    return NDResult(f, v.certificate, h, planted=planted, verdict=v.tag,
                    report={"orbit_rays_added": len(added), "projective": h is not None})


__all__ = [
    "HypothesisError", "RetryBudgetExceeded", "EigenLine", "eigenlines", "ReducedTree", "TreeNode",
    "reduced_tree", "ChamberAddress", "chamber_of", "in_chamber", "AdaptedSystem", "cone_is_adapted",
    "check_adapted_system", "find_adapted_system", "rational_adapted_system", "GammaDirections",
    "gamma_directions", "PreparedFan", "prepare_fan", "NDResult", "stabilize_nd", "stabilize_iterate",
    "build_fan_thmB", "orthant_fan", "stabilize_single_eigenray", "PlanError",
]
