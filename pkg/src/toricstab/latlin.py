"""Exact integer and rational linear algebra on the lattice N = Z^m."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .exactnum import FieldElement, AlgebraicNumber, real_roots_with_multiplicity, poly_to_str

# ------------------------------------------------------------------ vectors

def primitive(v):
    g = 0
    for c in v:
        g = gcd(g, int(c))
    if g == 0:
        raise ValueError("zero vector has no primitive generator")
    return tuple(int(c) // g for c in v)


def integral_direction(v):
    """Primitive integer vector on the ray through a rational vector."""
    den = 1
    for c in v:
        c = Fraction(c)
        den = den * c.denominator // gcd(den, c.denominator)
    return primitive([int(Fraction(c) * den) for c in v])


def dot(a, b):
    s = 0
    for x, y in zip(a, b):
        s = s + x * y
    return s


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a):
    return tuple(c * x for x in a)


def neg(v):
    return tuple(-x for x in v)


# ----------------------------------------------------------------- matrices

def identity(m):
    return [[1 if i == j else 0 for j in range(m)] for i in range(m)]


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def matvec(a, v):
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in a)


def transpose(a):
    return [list(r) for r in zip(*a)]


def matpow(a, k):
    out = identity(len(a))
    for _ in range(k):
        out = matmul(out, a)
    return out


def det(a):
    """Bareiss fraction-free determinant for integer matrices (Fractions allowed)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def row_reduce(rows, ncols=None):
    """Reduced row echelon form over a field. Returns (rref rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = ncols if ncols is not None else len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _fr(rows):
    return [[x if isinstance(x, FieldElement) else Fraction(x) for x in r] for r in rows]


def rank(rows):
    if not rows:
        return 0
    return len(row_reduce(_fr(rows))[0])


def nullspace(rows, ncols=None, one=Fraction(1), zero=Fraction(0)):
    """Basis of {x : rows . x = 0} over the field of the entries."""
    if not rows:
        n = ncols
        return [[one if i == j else zero for i in range(n)] for j in range(n)]
    n = len(rows[0])
    red, piv = row_reduce(_fr(rows) if not isinstance(one, FieldElement) else rows, n)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        x = [zero] * n
        x[f] = one
        for r, c in enumerate(piv):
            x[c] = zero - red[r][f]
        basis.append(x)
    return basis


def solve(a_rows, b):
    """Unique solution of A x = b over Q (A square or tall); None if inconsistent."""
    n = len(a_rows[0])
    aug = [list(map(Fraction, r)) + [Fraction(bi)] for r, bi in zip(a_rows, b)]
    red, piv = row_reduce(aug, n + 1)
    if n in piv:
        return None
    if len(piv) < n:
        raise ValueError("underdetermined system")
    x = [Fraction(0)] * n
    for r, c in enumerate(piv):
        x[c] = red[r][n]
    return x


def solve_field(a_rows, b, one):
    """Solve A x = b over a number field (entries FieldElement or rationals)."""
    n = len(a_rows[0])
    aug = [[_lift(x, one) for x in r] + [_lift(bi, one)] for r, bi in zip(a_rows, b)]
    red, piv = row_reduce(aug, n + 1)
    if n in piv:
        return None
    if len(piv) < n:
        raise ValueError("underdetermined system")
    x = [one * 0] * n
    for r, c in enumerate(piv):
        x[c] = red[r][n]
    return x


def _lift(x, one):
    return x if isinstance(x, FieldElement) else one * Fraction(x)


def inverse(a):
    n = len(a)
    aug = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    red, piv = row_reduce(aug, n)
    if len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in red]


# ------------------------------------------------------- integer lattices

def _integer_rows(rows):
    return [list(integral_direction(r)) if any(r) else [0] * len(r) for r in rows]


def integer_kernel(rows, ncols):
    """Lattice basis of {x in Z^n : rows . x = 0} (automatically saturated)."""
    rows = [list(map(int, r)) for r in _integer_rows(rows)] if rows else []
    n = ncols
    # column operations on A, tracked in U, until A U = [H | 0]
    a = [list(r) for r in rows]
    u = identity(n)
    col = 0
    for r in range(len(a)):
        if col >= n:
            break
        while True:
            nz = [c for c in range(col, n) if a[r][c] != 0]
            if not nz:
                break
            c = min(nz, key=lambda j: abs(a[r][j]))
            _swap_cols(a, u, col, c)
            done = True
            for j in range(col + 1, n):
                if a[r][j]:
                    q = a[r][j] // a[r][col]
                    _addcol(a, u, j, col, -q)
                    if a[r][j]:
                        done = False
            if done:
                col += 1
                break
    return [tuple(u[i][j] for i in range(n)) for j in range(col, n)]


def _swap_cols(a, u, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]
    for row in u:
        row[i], row[j] = row[j], row[i]


def _addcol(a, u, dst, src, q):
    for row in a:
        row[dst] += q * row[src]
    for row in u:
        row[dst] += q * row[src]


def hermite_rows(rows):
    """Row-style Hermite normal form of an integer basis (canonical)."""
    a = [list(map(int, r)) for r in rows if any(r)]
    if not a:
        return []
    n = len(a[0])
    r = 0
    for c in range(n):
        if r == len(a):
            break
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c] != 0]
            if not nz:
                break
            i = min(nz, key=lambda k: abs(a[k][c]))
            a[r], a[i] = a[i], a[r]
            more = False
            for k in range(r + 1, len(a)):
                if a[k][c]:
                    q = a[k][c] // a[r][c]
                    a[k] = [x - q * y for x, y in zip(a[k], a[r])]
                    if a[k][c]:
                        more = True
            if not more:
                break
        if r < len(a) and a[r][c] != 0:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for k in range(r):
                q = a[k][c] // a[r][c]
                a[k] = [x - q * y for x, y in zip(a[k], a[r])]
            r += 1
    return [tuple(x) for x in a[:r]]


@dataclass(frozen=True)
class RationalSubspace:
    """A rational subspace stored by a saturated lattice basis in Hermite form."""

    ambient: int
    basis: tuple

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, v):
        if not any(v):
            return True
        return rank(list(self.basis) + [list(v)]) == self.dim

    def contains_subspace(self, other):
        return all(self.contains(b) for b in other.basis)

    def __le__(self, other):
        return other.contains_subspace(self)

    def __repr__(self):
        return f"RationalSubspace(dim={self.dim}, basis={list(self.basis)})"


def saturate(vectors, ambient=None):
    vectors = [tuple(v) for v in vectors]
    if ambient is None:
        if not vectors:
            raise ValueError("ambient rank needed for an empty family")
        ambient = len(vectors[0])
    nonzero = [v for v in vectors if any(v)]
    if not nonzero:
        return RationalSubspace(ambient, ())
    ann = nullspace([list(map(Fraction, v)) for v in nonzero])
    if not ann:
        return RationalSubspace(ambient, tuple(hermite_rows(identity(ambient))))
    ker = integer_kernel(ann, ambient)
    return RationalSubspace(ambient, tuple(hermite_rows(ker)))


def full_space(m):
    return RationalSubspace(m, tuple(hermite_rows(identity(m))))


def zero_space(m):
    return RationalSubspace(m, ())


def annihilator(a: RationalSubspace):
    if a.dim == 0:
        return full_space(a.ambient)
    ker = integer_kernel([list(b) for b in a.basis], a.ambient)
    return RationalSubspace(a.ambient, tuple(hermite_rows(ker)))


def subspace_sum(a, b):
    return saturate(list(a.basis) + list(b.basis), a.ambient)


def subspace_intersect(a, b):
    return annihilator(subspace_sum(annihilator(a), annihilator(b)))


def subspace_ops(a, b, op):
    if op == "sum":
        return subspace_sum(a, b)
    if op == "intersect":
        return subspace_intersect(a, b)
    if op == "annihilator":
        return annihilator(a)
    raise ValueError(f"unknown subspace operation {op!r}")


def is_invariant(matrix, sub: RationalSubspace):
    return all(sub.contains(matvec(matrix, b)) for b in sub.basis)


def elementary_divisor_product(vectors):
    """Index of the lattice spanned by vectors inside its saturation."""
    vs = [list(map(int, v)) for v in vectors]
    sat = saturate(vs, len(vs[0]))
    # express vs in the saturated basis; index = |det| of coefficient matrix
    basis = [list(b) for b in sat.basis]
    coeffs = []
    t = transpose(basis)
    for v in vs:
        coeffs.append(_solve_tall(t, v))
    return abs(det(coeffs))


def _solve_tall(cols_matrix, v):
    n = len(cols_matrix[0])
    aug = [list(map(Fraction, r)) + [Fraction(x)] for r, x in zip(cols_matrix, v)]
    red, piv = row_reduce(aug, n + 1)
    x = [Fraction(0)] * n
    for r, c in enumerate(piv):
        if c < n:
            x[c] = red[r][n]
    return x


# --------------------------------------------------------------- spectrum

def charpoly(matrix):
    """det(x I - M), coefficients lowest degree first (Faddeev-LeVerrier)."""
    n = len(matrix)
    a = [[Fraction(x) for x in r] for r in matrix]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        am = matmul(a, mk) if k > 1 else [[Fraction(0)] * n for _ in range(n)]
        mk = [[am[i][j] + (coeffs[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        amk = matmul(a, mk)
        coeffs[n - k] = -sum(amk[i][i] for i in range(n)) / k
    return [int(c) for c in coeffs]


@dataclass
class EigenData:
    value: AlgebraicNumber
    multiplicity: int
    vector: tuple = None          # FieldElement entries, None if not simple
    covector: tuple = None        # left eigenvector normalized by covector(vector) = 1
    coeff_vectors: tuple = ()     # rational e_i with vector = sum mu^i e_i
    rational_span: RationalSubspace = None

    @property
    def simple(self):
        return self.multiplicity == 1


@dataclass
class Spectrum:
    matrix: tuple
    charpoly: list
    eigen: list = field(default_factory=list)   # real eigenvalues, decreasing
    complex_pairs: int = 0
    trace: int = 0
    det: int = 0
    root_of_unity_ratio: bool = False

    @property
    def eigenvalues(self):
        out = []
        for e in self.eigen:
            out.extend([e.value] * e.multiplicity)
        return out

    @property
    def real_simple(self):
        return self.complex_pairs == 0 and all(e.simple for e in self.eigen)

    def describe(self):
        return [{"min_poly": poly_to_str(list(e.value.min_poly)),
                 "approx": float(e.value), "multiplicity": e.multiplicity}
                for e in self.eigen]


def _field_vector_nullspace(matrix, mu):
    n = len(matrix)
    one = FieldElement.const(mu, 1)
    x = FieldElement.generator(mu)
    rows = [[one * matrix[i][j] - (x if i == j else 0) for j in range(n)] for i in range(n)]
    return nullspace(rows, n, one=one, zero=one * 0)


def _normalize_eigvec(vec, mu):
    """Scale so the first nonzero entry is 1, then clear rational denominators when possible."""
    for c in vec:
        if not c.is_zero():
            lead = c
            break
    vec = [c / lead for c in vec]
    if mu.degree == 1:
        ints = integral_direction([c.rational_value() for c in vec])
        vec = [FieldElement.const(mu, c) for c in ints]
    return tuple(vec)


def eigen_structure(matrix):
    matrix = [list(map(int, r)) for r in matrix]
    n = len(matrix)
    cp = charpoly(matrix)
    spec = Spectrum(matrix=tuple(map(tuple, matrix)), charpoly=cp,
                    trace=sum(matrix[i][i] for i in range(n)), det=det(matrix))
    roots = real_roots_with_multiplicity(cp)
    roots.sort(key=lambda t: t[0], reverse=True)
    realcount = sum(m for _, m in roots)
    spec.complex_pairs = (n - realcount) // 2
    for mu, mult in roots:
        data = EigenData(value=mu, multiplicity=mult)
        ns = _field_vector_nullspace(matrix, mu)
        if mult == 1 and len(ns) == 1:
            vec = _normalize_eigvec(ns[0], mu)
            data.vector = vec
            data.coeff_vectors = tuple(tuple(c.coeffs[i] for c in vec) for i in range(mu.degree))
            data.rational_span = saturate([integral_direction(cv) if any(cv) else cv
                                           for cv in data.coeff_vectors], n)
            left = _field_vector_nullspace(transpose(matrix), mu)[0]
            s = dot(left, vec)
            data.covector = tuple(c / s for c in left)
        spec.eigen.append(data)
    if n == 2:
        spec.root_of_unity_ratio = ratio_is_root_of_unity_2x2(matrix)
    return spec


def ratio_is_root_of_unity_2x2(matrix):
    """mu1/mu2 is a root of unity iff trace^2/det is one of 0, 1, 2, 3, 4."""
    tr = matrix[0][0] + matrix[1][1]
    d = det(matrix)
    if d == 0:
        return False
    q = Fraction(tr * tr, d)
    return q in (0, 1, 2, 3, 4)


def scalar_power_order(matrix, kmax=12):
    """Smallest k <= kmax with M^k scalar, else None."""
    m = len(matrix)
    p = identity(m)
    for k in range(1, kmax + 1):
        p = matmul(p, matrix)
        if all(p[i][j] == 0 for i in range(m) for j in range(m) if i != j) and \
                len({p[i][i] for i in range(m)}) == 1:
            return k
    return None


def check_eigenpair(matrix, data: EigenData):
    """(M - mu) v == 0 exactly in Q[mu]/(min_poly)."""
    mu = data.value
    x = FieldElement.generator(mu)
    v = data.vector
    mv = [sum((r * c for r, c in zip(row, v)), FieldElement.const(mu, 0)) for row in matrix]
    return all((a - x * b).is_zero() for a, b in zip(mv, v))
