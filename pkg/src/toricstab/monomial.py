"""Monomial maps on fans: regularity, pullbacks, composition and 1-stability."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .fan import Fan, SupportFunction, cone_geometry
from .latlin import det, eigen_structure, matmul, matvec, primitive


class MonomialMap:
    """Z-linear map N -> N of maximal rank, acting on column vectors."""

    def __init__(self, matrix):
        self.matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        self.rank = len(self.matrix)
        if any(len(r) != self.rank for r in self.matrix):
            raise ValueError("matrix must be square")
        self.det = det([list(r) for r in self.matrix])
        if self.det == 0:
            raise ValueError("monomial map must have maximal rank (det != 0)")

    @classmethod
    def coerce(cls, phi):
        return phi if isinstance(phi, MonomialMap) else cls(phi)

    def __call__(self, v):
        return matvec(self.matrix, v)

    def images(self, vectors):
        return [self(v) for v in vectors]

    def compose(self, other):
        """self o other."""
        return MonomialMap(matmul([list(r) for r in self.matrix], [list(r) for r in other.matrix]))

    def power(self, n):
        out = MonomialMap([[int(i == j) for j in range(self.rank)] for i in range(self.rank)])
        for _ in range(n):
            out = self.compose(out)
        return out

    def __neg__(self):
        return MonomialMap([[-x for x in r] for r in self.matrix])

    def adjugate(self):
        """det * inverse, an integer matrix."""
        from .latlin import inverse
        inv = inverse([list(r) for r in self.matrix])
        return MonomialMap([[int(x * self.det) for x in r] for r in inv])

    @property
    def trace(self):
        return sum(self.matrix[i][i] for i in range(self.rank))

    @cached_property
    def spectrum(self):
        return eigen_structure([list(r) for r in self.matrix])

    def to_dict(self):
        return {"rank": self.rank, "entries": [list(r) for r in self.matrix]}

    def __repr__(self):
        return f"MonomialMap({[list(r) for r in self.matrix]})"


def _phi(phi):
    return MonomialMap.coerce(phi)


# ------------------------------------------------------------- regularity

def is_regular_map(phi, src: Fan, dst: Fan):
    phi = _phi(phi)
    return all(dst.carrier(phi.images(src.gens(k))) is not None for k in src.maximal)


def pullback_support(phi, src: Fan, dst: Fan, h: SupportFunction):
    """src-linear interpolation of h o phi from the ray generators of src."""
    phi = _phi(phi)
    vals = []
    for r in src.rays:
        w = phi(r)
        if dst.maximal_cone_of(w) is None:
            raise ValueError(f"image {list(w)} of ray {list(r)} lies outside the target support")
        vals.append(h(w))
    return SupportFunction(src, vals)


def check_composition(phi, phi2, d0: Fan, d1: Fan, d2: Fan):
    """phi2 maps the carrier in d1 of phi(rho) into a cone of d2, for every ray rho of d0."""
    phi, phi2 = _phi(phi), _phi(phi2)
    for r in d0.rays:
        key = d1.locate(phi(r))
        if key is None:
            return False
        if d2.carrier(phi2.images(d1.gens(key))) is None:
            return False
    return True


def pullback_matches_composition(phi, phi2, d0: Fan, d1: Fan, d2: Fan, h: SupportFunction):
    """Compare phi^* phi2^* h with (phi2 o phi)^* h on the rays of d0."""
    phi, phi2 = _phi(phi), _phi(phi2)
    lhs = pullback_support(phi, d0, d1, pullback_support(phi2, d1, d2, h))
    rhs = pullback_support(phi2.compose(phi), d0, d2, h)
    return lhs.values == rhs.values


def ray_basis_functions(f: Fan):
    """The generating set of support functions: 1 on one ray, 0 on the others."""
    n = len(f.rays)
    return [SupportFunction(f, [int(i == j) for j in range(n)]) for i in range(n)]


# ---------------------------------------------------------------- stability

ONTO_RAY, ABSORBED = "ONTO_RAY", "ABSORBED"
STABLE, UNSTABLE, UNKNOWN = "STABLE", "UNSTABLE", "UNKNOWN"


@dataclass
class StabilityCertificate:
    invariant_cones: list              # ray-index keys of the cones in S
    cone_map: list                     # cone_map[i] = index into invariant_cones
    ray_fates: list                    # one dict per ray

    def to_dict(self):
        return {"invariant_cones": [list(k) for k in self.invariant_cones],
                "cone_map": list(self.cone_map),
                "ray_fates": [dict(r) for r in self.ray_fates]}

    @classmethod
    def from_dict(cls, d):
        return cls([tuple(k) for k in d["invariant_cones"]], list(d["cone_map"]),
                   [dict(r) for r in d["ray_fates"]])


@dataclass
class StabilityVerdict:
    tag: str
    certificate: StabilityCertificate = None
    witness: dict = None
    bound: int = None
    detail: dict = field(default_factory=dict)

    @property
    def stable(self):
        return self.tag == STABLE

    def to_dict(self):
        out = {"verdict": self.tag}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        if self.witness is not None:
            out["witness"] = self.witness
        if self.bound is not None:
            out["bound"] = self.bound
        out.update(self.detail)
        return out


def _image_cone(phi, gens):
    return [phi(g) for g in gens]


def check_1stable(phi, f: Fan, n_max=200):
    """Decide torical stability of phi on the complete simplicial fan f.

    Each ray either maps onto a ray, or its image enters a cone sigma0.  In
    the latter case the chain sigma_{k+1} = carrier(phi(sigma_k)) is followed;
    a cycle certifies the ray.  If the chain breaks, direct images
    phi^k(sigma0) are tested up to n_max, giving an explicit witness when one
    is not contained in any cone.
    """
    phi = _phi(phi)
    s_index = {}
    s_cones = []
    cone_map = {}
    fates = []
    unknown = False
    for i, r in enumerate(f.rays):
        w = phi(r)
        p = primitive(w)
        j = f.ray_index(p)
        if j is not None:
            fates.append({"ray": i, "fate": ONTO_RAY, "target": j, "steps": 1})
            continue
        sigma0 = f.locate(w)
        if sigma0 is None:
            return StabilityVerdict(UNSTABLE, witness={
                "ray": list(r), "n": 1, "cone": None, "n_prime": 0,
                "reason": "image outside the support"})
        chain = [sigma0]
        seen = {sigma0: 0}
        ok = None
        for _ in range(n_max):
            nxt = f.carrier(_image_cone(phi, f.gens(chain[-1])))
            if nxt is None:
                ok = False
                break
            if nxt in seen or nxt in s_index:
                ok = True
                chain.append(nxt)
                break
            seen[nxt] = len(chain)
            chain.append(nxt)
        if ok:
            for a, b in zip(chain, chain[1:]):
                for k in (a, b):
                    if k not in s_index:
                        s_index[k] = len(s_cones)
                        s_cones.append(k)
                cone_map[s_index[a]] = s_index[b]
            fates.append({"ray": i, "fate": ABSORBED, "cone": s_index[sigma0], "steps": 1})
            continue
        # chain broke or too long: direct images decide or give up
        gens = [tuple(g) for g in f.gens(sigma0)]
        for k in range(1, n_max + 1):
            gens = _image_cone(phi, gens)
            if f.carrier(gens) is None:
                return StabilityVerdict(UNSTABLE, witness={
                    "ray": list(r), "n": 1, "cone": [list(g) for g in f.gens(sigma0)],
                    "cone_key": list(sigma0), "n_prime": k})
        unknown = True
        fates.append({"ray": i, "fate": None})
    if unknown:
        return StabilityVerdict(UNKNOWN, bound=n_max)
    cert = StabilityCertificate(list(s_cones), [cone_map[i] for i in range(len(s_cones))], fates)
    return StabilityVerdict(STABLE, certificate=cert)


def verify_certificate(phi, f: Fan, cert: StabilityCertificate):
    """Re-check every containment and ray fate of a certificate exactly."""
    phi = _phi(phi)
    cones = [tuple(k) for k in cert.invariant_cones]
    if len(cert.cone_map) != len(cones):
        raise ValueError("cone_map length differs from the invariant family")
    for k in cones:
        if any(i < 0 or i >= len(f.rays) for i in k) or not f.has_cone(k):
            raise ValueError(f"dangling cone reference {list(k)}")
    for src, tgt in enumerate(cert.cone_map):
        if not 0 <= tgt < len(cones):
            raise ValueError("dangling cone_map entry")
        geo = f.geom(cones[tgt])
        if not all(geo.contains(phi(g)) for g in f.gens(cones[src])):
            return False
    covered = set()
    for fate in cert.ray_fates:
        i = fate["ray"]
        if not 0 <= i < len(f.rays):
            raise ValueError("dangling ray reference")
        covered.add(i)
        w = phi(f.rays[i])
        if fate["fate"] == ONTO_RAY:
            t = fate["target"]
            if not 0 <= t < len(f.rays) or primitive(w) != f.rays[t]:
                return False
        elif fate["fate"] == ABSORBED:
            c = fate["cone"]
            if not 0 <= c < len(cones) or not f.geom(cones[c]).contains(w):
                return False
        else:
            return False
    return covered == set(range(len(f.rays)))


def trace_obstruction(phi):
    """OBSTRUCTED iff trace < 0: then no full-dimensional simplicial cone is phi-invariant."""
    return "OBSTRUCTED" if _phi(phi).trace < 0 else "PASS"


def invariant_full_cones(phi, f: Fan):
    """Full-dimensional cones of f (any face-closed member) with phi(sigma) inside sigma."""
    phi = _phi(phi)
    out = []
    for k in f.cones():
        geo = f.geom(k)
        if geo.dim == f.rank and all(geo.contains(phi(g)) for g in f.gens(k)):
            out.append(k)
    return out
