"""Independent reference computations used to cross-check the package.

Each oracle takes a different route from the code under test: sympy for
polynomial and kernel work, mpmath for continued fractions, plain
enumeration for small lattice questions.
"""
from fractions import Fraction
from itertools import combinations, product

import mpmath
import sympy


def sturm_count(coeffs_low_first):
    """Number of distinct real roots, by sympy's own root counting."""
    x = sympy.Symbol("x")
    p = sympy.Poly(list(reversed(coeffs_low_first)), x)
    return len(set(sympy.real_roots(p)))


def _rref_key(vectors, m):
    """Canonical key of the rational span of vectors."""
    if not vectors:
        return ()
    mat = sympy.Matrix([list(v) for v in vectors])
    r, piv = mat.rref()
    rows = [tuple(r.row(i)) for i in range(len(piv))]
    return tuple(rows)


def span_key(vectors, m):
    return _rref_key([v for v in vectors if any(v)], m)


def rational_invariant_subspaces(matrix):
    """All rational phi-invariant subspaces as rref keys, for a simple real spectrum.

    They are the kernels of g(phi) for g ranging over products of the
    irreducible factors of the characteristic polynomial over Q.
    """
    m = len(matrix)
    a = sympy.Matrix(matrix)
    x = sympy.Symbol("x")
    cp = a.charpoly(x).as_expr()
    _, factors = sympy.factor_list(cp, x)
    irreducible = [f for f, _ in factors]
    keys = set()
    for k in range(len(irreducible) + 1):
        for combo in combinations(irreducible, k):
            g = sympy.Poly(sympy.Mul(*combo) if combo else sympy.Integer(1), x)
            mat = sympy.zeros(m, m)
            for (deg,), c in g.terms():
                mat += c * a ** deg
            ker = mat.nullspace()
            keys.add(span_key([tuple(v) for v in ker], m))
    return keys


def krylov_key(matrix, v):
    """Smallest phi-invariant subspace containing v (the Krylov span), as an rref key."""
    a = sympy.Matrix(matrix)
    m = len(matrix)
    vecs = []
    cur = sympy.Matrix(v)
    for _ in range(m):
        vecs.append(tuple(cur))
        cur = a * cur
    return span_key(vecs, m)


def cf_digits(b, delta, c, n, dps=80):
    """First n continued-fraction digits of the positive root of b z^2 + delta z - c."""
    with mpmath.workdps(dps):
        d = mpmath.mpf(delta) ** 2 + 4 * mpmath.mpf(b) * c
        z = (-delta + mpmath.sqrt(d)) / (2 * mpmath.mpf(b))
        out = []
        for _ in range(n):
            a = int(mpmath.floor(z))
            out.append(a)
            z = 1 / (z - a)
        return out


def branches_from_digits(digits):
    """Expand CF digits into the shift/swap pattern: a_0 shifts, swap, a_1 shifts, ..."""
    s = []
    for i, a in enumerate(digits):
        if i:
            s.append("B")
        s.extend("A" * a)
    return "".join(s)


def small_support_search(fan, bound=1):
    """Some strictly convex integer value assignment with entries in [-bound, bound], or None."""
    from toricstab.fan import SupportFunction
    for vals in product(range(-bound, bound + 1), repeat=len(fan.rays)):
        h = SupportFunction(fan, vals)
        if h.consistent() and h.is_strictly_convex():
            return vals
    return None


def direct_strict_convexity(h):
    """All pairs check: xi_sigma(v) > h(v) for every maximal sigma and ray v outside it."""
    f = h.fan
    for k in f.maximal:
        xi = h.form(k)
        for i, r in enumerate(f.rays):
            val = sum(Fraction(a) * b for a, b in zip(xi, r))
            if i in k:
                if val != h.values[i]:
                    return False
            elif not val > h.values[i]:
                return False
    return True


def cone_contains(gens, v):
    """Membership of v in cone(gens) for a simplicial full-dimensional cone, via sympy solve."""
    mat = sympy.Matrix([list(g) for g in gens]).T
    coeffs = mat.LUsolve(sympy.Matrix(list(v)))
    return all(c >= 0 for c in coeffs)


def cone_contains_any(gens, v):
    """Membership of v in cone(gens) for linearly independent gens of any count."""
    mat = sympy.Matrix([list(g) for g in gens]).T
    try:
        sol, params = mat.gauss_jordan_solve(sympy.Matrix(list(v)))
    except ValueError:
        return False
    return not params and all(c >= 0 for c in sol)
