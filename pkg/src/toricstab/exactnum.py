"""Exact arithmetic over Q and over real algebraic numbers.

Polynomials are plain lists of coefficients, lowest degree first.  Real
algebraic numbers are stored as an irreducible primitive integer polynomial
plus an isolating interval with rational endpoints; elements of a simple
extension Q(mu) are stored as coefficient vectors in the power basis.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

__all__ = [
    "trim", "degree", "padd", "psub", "pmul", "pscale", "pdivmod", "pgcd",
    "pderiv", "peval", "primitive_part", "squarefree_decomposition",
    "rational_roots", "factor_rational", "sturm_sequence", "count_roots",
    "isolate_real_roots", "real_roots_with_multiplicity", "resultant",
    "AlgebraicNumber", "FieldElement", "alg_compare", "poly_to_str",
]


# ---------------------------------------------------------------- polynomials

def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p):
    return len(trim(p)) - 1


def padd(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def psub(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def pscale(p, c):
    return trim([c * x for x in p])


def pdivmod(a, b):
    """Quotient and remainder over Q."""
    a = [Fraction(x) for x in trim(a)]
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead = Fraction(b[-1])
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] -= c * y
        a = trim(a)
    return trim(q), a


def pgcd(a, b):
    """Monic gcd over Q."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, pdivmod(a, b)[1]
    if not a:
        return []
    lead = Fraction(a[-1])
    return [Fraction(x) / lead for x in a]


def pderiv(p):
    return trim([i * p[i] for i in range(1, len(p))])


def peval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def primitive_part(p):
    """Integer primitive polynomial with positive leading coefficient."""
    p = trim(p)
    if not p:
        return []
    den = 1
    for c in p:
        c = Fraction(c)
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(Fraction(c) * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def poly_to_str(p, var="x"):
    terms = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and abs(c) == 1:
            coef = "-" if c < 0 else ""
        else:
            coef = str(c) + ("*" if mono else "")
        terms.append(coef + mono)
    if not terms:
        return "0"
    return " + ".join(terms).replace("+ -", "- ")


# ------------------------------------------------------------- factorization

def squarefree_decomposition(p):
    """Yun's algorithm: list of (primitive integer factor, multiplicity)."""
    p = trim(p)
    if degree(p) < 1:
        return []
    out = []
    dp = pderiv(p)
    a = pgcd(p, dp)
    b = pdivmod(p, a)[0]
    c = pdivmod(dp, a)[0]
    d = psub(c, pderiv(b))
    i = 1
    while degree(b) >= 1:
        a = pgcd(b, d)
        if degree(a) >= 1:
            out.append((primitive_part(a), i))
        b = pdivmod(b, a)[0]
        c = pdivmod(d, a)[0]
        d = psub(c, pderiv(b))
        i += 1
    return out


def _divisors(n):
    n = abs(n)
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def rational_roots(p):
    """Distinct rational roots of an integer polynomial."""
    p = primitive_part(p)
    roots = []
    while p and p[0] == 0:
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
        p = p[1:]
    if len(p) <= 1:
        return roots
    for num in _divisors(p[0]):
        for den in _divisors(p[-1]):
            if gcd(num, den) != 1:
                continue
            for s in (1, -1):
                r = Fraction(s * num, den)
                if r not in roots and peval(p, r) == 0:
                    roots.append(r)
    return sorted(roots)


def _quadratic_factor(p):
    """Integer quadratic factor of a quartic without rational roots, or None."""
    p1 = peval(p, 1)
    for a in _divisors(p[-1]):
        for c0 in _divisors(p[0]):
            for c in (c0, -c0):
                for d0 in _divisors(p1):
                    for d in (d0, -d0):
                        b = d - a - c
                        q, r = pdivmod(p, [c, b, a])
                        if not r:
                            return primitive_part([c, b, a])
    return None


def _irreducible_factors(p):
    """Factor a square-free primitive polynomial into irreducibles over Q."""
    p = primitive_part(p)
    out = []
    for r in rational_roots(p):
        lin = primitive_part([-r, 1])
        out.append(lin)
        p = primitive_part(pdivmod(p, lin)[0])
    n = degree(p)
    if n <= 0:
        return out
    if n <= 3:
        return out + [p]
    if n == 4:
        q = _quadratic_factor(p)
        if q is None:
            return out + [p]
        return out + [q, primitive_part(pdivmod(p, q)[0])]
    import sympy  # degree >= 5 without rational roots: delegate
    x = sympy.Symbol("x")
    expr = sum(sympy.Integer(c) * x**i for i, c in enumerate(p))
    for fac, _ in sympy.factor_list(expr)[1]:
        coeffs = sympy.Poly(fac, x).all_coeffs()[::-1]
        out.append(primitive_part([int(c) for c in coeffs]))
    return out


def factor_rational(p):
    """Irreducible factorization over Q as (primitive factor, multiplicity)."""
    out = []
    for f, m in squarefree_decomposition(p):
        for g in _irreducible_factors(f):
            out.append((g, m))
    return out


# ---------------------------------------------------------- root isolation

def sturm_sequence(p):
    seq = [trim(p), pderiv(p)]
    while degree(seq[-1]) > 0:
        r = pdivmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(seq, x):
    last = 0
    n = 0
    for q in seq:
        v = peval(q, x)
        if v:
            s = 1 if v > 0 else -1
            if last and s != last:
                n += 1
            last = s
    return n


def count_roots(p, a, b, seq=None):
    """Number of distinct real roots of p in the half-open interval (a, b]."""
    seq = seq or sturm_sequence(p)
    return _sign_changes(seq, a) - _sign_changes(seq, b)


def _root_bound(p):
    lead = abs(Fraction(p[-1]))
    m = max(abs(Fraction(c)) / lead for c in p[:-1]) if len(p) > 1 else 0
    bound = 1
    while bound <= 1 + m:
        bound *= 2
    return Fraction(bound)


def _isolate_irreducible(f):
    if degree(f) == 1:
        r = Fraction(-f[0], f[1])
        return [(r, r)]
    seq = sturm_sequence(f)
    bound = _root_bound(f)
    todo = [(-bound, bound)]
    found = []
    while todo:
        a, b = todo.pop()
        n = count_roots(f, a, b, seq)
        if n == 0:
            continue
        if n == 1:
            found.append((a, b))
            continue
        mid = (a + b) / 2
        todo.append((a, mid))
        todo.append((mid, b))
    return found


def isolate_real_roots(p):
    """Distinct real roots of p, increasing, as AlgebraicNumbers."""
    if not trim(p):
        raise ValueError("zero polynomial has no isolated roots")
    roots = []
    for f, _ in factor_rational(p):
        for a, b in _isolate_irreducible(f):
            roots.append(AlgebraicNumber(f, a, b))
    return sorted(roots)


def real_roots_with_multiplicity(p):
    out = []
    for f, m in factor_rational(p):
        for a, b in _isolate_irreducible(f):
            out.append((AlgebraicNumber(f, a, b), m))
    out.sort(key=lambda t: t[0])
    return out


# --------------------------------------------------------------- resultants

def resultant(a, b):
    """Resultant of two univariate polynomials over Q (Euclidean recursion)."""
    a, b = trim(a), trim(b)
    if not a or not b:
        return Fraction(0)
    m, n = degree(a), degree(b)
    if n == 0:
        return Fraction(b[0]) ** m
    if m == 0:
        return Fraction(a[0]) ** n
    r = pdivmod(a, b)[1]
    if not r:
        return Fraction(0)
    sign = -1 if (m * n) % 2 else 1
    return sign * Fraction(b[-1]) ** (m - degree(r)) * resultant(b, r)


def _interpolate(xs, ys):
    """Newton interpolation over Q, returns coefficient list."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)]
    for i in range(n - 1, -1, -1):
        poly = padd(pmul(poly, [-xs[i], 1]), [coef[i]])
    return trim(poly)


def _shift(p, z0):
    """Coefficients in t of p(z0 - t)."""
    out = []
    power = [Fraction(1)]
    for c in p:
        out = padd(out, pscale(power, c))
        power = pmul(power, [z0, -1])
    return out


def _bivariate_resultant(nodes, builder):
    ys = [builder(z) for z in nodes]
    return _interpolate(nodes, ys)


# ------------------------------------------------------------ intervals

def _imul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(ps), max(ps))


def _ipoly(coeffs, box):
    acc = (Fraction(0), Fraction(0))
    for c in reversed(coeffs):
        acc = _imul(acc, box)
        acc = (acc[0] + c, acc[1] + c)
    return acc


# ------------------------------------------------------- algebraic numbers

class AlgebraicNumber:
    """A real algebraic number: irreducible primitive min_poly + isolating interval.

    The interval (lo, hi] holds exactly one root; for rational values lo == hi.
    A private cache remembers the tightest interval found so far; the public
    interface never exposes mutation.
    """

    __slots__ = ("min_poly", "_box")

    def __init__(self, min_poly, lo, hi=None):
        self.min_poly = tuple(primitive_part(min_poly))
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if len(self.min_poly) == 2:
            r = Fraction(-self.min_poly[0], self.min_poly[1])
            lo = hi = r
        self._box = [lo, hi]

    # construction helpers
    @classmethod
    def rational(cls, q):
        q = Fraction(q)
        return cls([-q.numerator, q.denominator], q, q)

    @classmethod
    def coerce(cls, x):
        if isinstance(x, AlgebraicNumber):
            return x
        if isinstance(x, FieldElement):
            return x.to_algebraic()
        return cls.rational(x)

    @property
    def degree(self):
        return len(self.min_poly) - 1

    @property
    def isolating_interval(self):
        return tuple(self._box)

    def is_rational(self):
        return self.degree == 1

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError("not rational")
        return self._box[0]

    def _tighten(self):
        lo, hi = self._box
        if lo == hi:
            return
        mid = (lo + hi) / 2
        flo = peval(self.min_poly, lo)
        fmid = peval(self.min_poly, mid)
        if fmid == 0:
            self._box[:] = [mid, mid]
        elif (flo > 0) == (fmid > 0) and flo != 0:
            self._box[:] = [mid, hi]
        else:
            self._box[:] = [lo, mid]

    def width(self):
        return self._box[1] - self._box[0]

    def refined(self):
        """A new value with half the interval width."""
        out = AlgebraicNumber(self.min_poly, *self._box)
        out._tighten()
        return out

    def interval(self, width=None):
        if width is not None:
            while self.width() > width:
                self._tighten()
        return tuple(self._box)

    def approx(self, bits=64):
        lo, hi = self.interval(Fraction(1, 2 ** bits))
        return (lo + hi) / 2

    def __float__(self):
        return float(self.approx(60))

    def sign(self):
        if self.is_rational():
            v = self._box[0]
            return (v > 0) - (v < 0)
        if peval(self.min_poly, 0) == 0:
            return 0  # pragma: no cover - irreducible of degree >= 2
        while True:
            lo, hi = self._box
            if lo >= 0:
                return 1
            if hi <= 0:
                return -1
            # split at zero, which is never a root here
            if count_roots(self.min_poly, lo, Fraction(0)) == 1:
                self._box[:] = [lo, Fraction(0)]
            else:
                self._box[:] = [Fraction(0), hi]

    # ordering ------------------------------------------------------------
    def _cmp(self, other):
        other = AlgebraicNumber.coerce(other)
        if self.is_rational() and other.is_rational():
            a, b = self.as_fraction(), other.as_fraction()
            return (a > b) - (a < b)
        if self.min_poly == other.min_poly:
            while True:
                a, b = self._box, other._box
                if a[1] < b[0]:
                    return -1
                if b[1] < a[0]:
                    return 1
                lo, hi = min(a[0], b[0]), max(a[1], b[1])
                if count_roots(self.min_poly, lo, hi) == 1:
                    return 0
                self._tighten()
                other._tighten()
        # distinct irreducible polynomials share no root
        while True:
            a, b = self._box, other._box
            if a[1] <= b[0]:
                return -1
            if b[1] <= a[0]:
                return 1
            self._tighten()
            other._tighten()

    def compare(self, other):
        other = AlgebraicNumber.coerce(other)
        if self.is_rational() or other.is_rational():
            return _compare_with_rational(self, other)
        return self._cmp(other)

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, (AlgebraicNumber, FieldElement, int, Fraction)):
            return NotImplemented
        return self.compare(other) == 0

    def __hash__(self):
        if self.is_rational():
            return hash(self.as_fraction())
        return hash(self.min_poly)

    def __repr__(self):
        if self.is_rational():
            return f"AlgebraicNumber({self.as_fraction()})"
        lo, hi = self._box
        return f"AlgebraicNumber({poly_to_str(list(self.min_poly))}, ({lo}, {hi}]) ~ {float(self):.6g}"

    # arithmetic ----------------------------------------------------------
    def __neg__(self):
        p = [(-1) ** i * c for i, c in enumerate(self.min_poly)]
        lo, hi = self._box
        return AlgebraicNumber(p, -hi, -lo)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __add__(self, other):
        if isinstance(other, FieldElement):
            return NotImplemented
        other = AlgebraicNumber.coerce(other)
        if other.is_rational():
            q = other.as_fraction()
            p = _shift(list(self.min_poly), -q)  # p(-q - t) in t
            p = [(-1) ** i * c for i, c in enumerate(p)]  # p(t - q)
            lo, hi = self._box
            return AlgebraicNumber(p, lo + q, hi + q)
        if self.is_rational():
            return other + self
        return _combine(self, other, "+")

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, FieldElement):
            return NotImplemented
        return self + (-AlgebraicNumber.coerce(other))

    def __rsub__(self, other):
        return AlgebraicNumber.coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return NotImplemented
        other = AlgebraicNumber.coerce(other)
        if other.is_rational():
            q = other.as_fraction()
            if q == 0:
                return AlgebraicNumber.rational(0)
            n = self.degree
            p = [c * q ** (n - i) for i, c in enumerate(self.min_poly)]  # q^n p(t/q)
            lo, hi = self._box
            lo, hi = sorted((lo * q, hi * q))
            out = AlgebraicNumber(p, lo, hi)
            if q < 0 and not out.is_rational():
                _fix_open_end(out)
            return out
        if self.is_rational():
            return other * self
        return _combine(self, other, "*")

    __rmul__ = __mul__

    def inverse(self):
        if self.sign() == 0:
            raise ZeroDivisionError("division by an algebraic zero")
        if self.is_rational():
            return AlgebraicNumber.rational(1 / self.as_fraction())
        p = list(reversed(self.min_poly))
        lo, hi = self._box
        a, b = sorted((1 / lo, 1 / hi))
        out = AlgebraicNumber(p, a, b)
        _fix_open_end(out)
        return out

    def __truediv__(self, other):
        if isinstance(other, FieldElement):
            return NotImplemented
        return self * AlgebraicNumber.coerce(other).inverse()

    def __rtruediv__(self, other):
        return AlgebraicNumber.coerce(other) * self.inverse()

    def __pow__(self, k):
        out = AlgebraicNumber.rational(1)
        base = self
        if k < 0:
            base, k = self.inverse(), -k
        for _ in range(k):
            out = out * base
        return out


def _fix_open_end(x):
    """Re-normalize after an interval map that flipped endpoint openness."""
    lo, hi = x._box
    if lo == hi:
        return
    # endpoints of irreducible non-linear polys are never roots, so openness is moot
    if peval(x.min_poly, lo) == 0 or peval(x.min_poly, hi) == 0:  # pragma: no cover
        raise AssertionError("endpoint hit a root")


def _compare_with_rational(x, y):
    if x.is_rational() and y.is_rational():
        a, b = x.as_fraction(), y.as_fraction()
        return (a > b) - (a < b)
    if x.is_rational():
        return -_compare_with_rational(y, x)
    q = y.as_fraction()
    while True:
        lo, hi = x._box
        if hi <= q:
            return -1 if hi < q or peval(x.min_poly, q) != 0 else 0
        if lo >= q:
            return 1
        if count_roots(x.min_poly, lo, q) == 1:
            x._box[:] = [lo, q]
        else:
            x._box[:] = [q, hi]


def _interval_of(x, op, y):
    a, b = x._box, y._box
    if op == "+":
        return (a[0] + b[0], a[1] + b[1])
    return _imul(tuple(a), tuple(b))


def _combine(x, y, op):
    """x op y for two irrational algebraic numbers via a resultant."""
    p, q = list(x.min_poly), list(y.min_poly)
    m, n = len(p) - 1, len(q) - 1
    nodes = [Fraction(k) for k in range(m * n + 1)]
    if op == "+":
        def build(z):
            return resultant(p, _shift(q, z))
    else:
        def build(z):
            # t^n q(z/t) as polynomial in t
            return resultant(p, [q[n - i] * z ** (n - i) for i in range(n + 1)])
    r = _bivariate_resultant(nodes, build)
    if op == "*":
        # the resultant above is in the variable z already (degree m*n)
        pass
    factors = [f for f, _ in factor_rational(r)] if degree(r) >= 1 else []
    seqs = [(f, sturm_sequence(f)) for f in factors]
    while True:
        lo, hi = _interval_of(x, op, y)
        hits = []
        for f, seq in seqs:
            c = count_roots(f, lo, hi, seq) + (1 if peval(f, lo) == 0 else 0)
            if c:
                hits.append((f, c))
        if len(hits) == 1 and hits[0][1] == 1:
            f = hits[0][0]
            if degree(f) == 1:
                return AlgebraicNumber(f, Fraction(-f[0], f[1]))
            return AlgebraicNumber(f, lo, hi)
        x._tighten()
        y._tighten()


def alg_compare(x, y):
    """Exact ordering of two real algebraic values: -1, 0 or 1."""
    return AlgebraicNumber.coerce(x).compare(AlgebraicNumber.coerce(y))


# ----------------------------------------------------------- field elements

class FieldElement:
    """Element of Q(mu) for a fixed real algebraic generator mu."""

    __slots__ = ("gen", "coeffs")

    def __init__(self, gen, coeffs):
        self.gen = gen
        d = gen.degree
        c = [Fraction(x) for x in coeffs]
        if len(c) >= d + 1 or (c and len(c) > d):
            c = [Fraction(x) for x in pdivmod(c, list(gen.min_poly))[1]]
        c = c + [Fraction(0)] * (d - len(c))
        self.coeffs = tuple(c[:d])

    @classmethod
    def const(cls, gen, q):
        return cls(gen, [q])

    @classmethod
    def generator(cls, gen):
        if gen.degree == 1:
            return cls(gen, [gen.as_fraction()])
        return cls(gen, [0, 1])

    def _lift(self, other):
        if isinstance(other, FieldElement):
            if other.gen is not self.gen and (other.gen.min_poly != self.gen.min_poly
                                              or other.gen.compare(self.gen) != 0):
                raise ValueError("elements of different fields")
            return other
        return FieldElement(self.gen, [other])

    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("not rational")
        return self.coeffs[0]

    def __add__(self, other):
        o = self._lift(other)
        return FieldElement(self.gen, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.gen, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            q = Fraction(other)
            return FieldElement(self.gen, [a * q for a in self.coeffs])
        o = self._lift(other)
        return FieldElement(self.gen, pmul(list(self.coeffs), list(o.coeffs)))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(mu)")
        # extended Euclid: s*a + t*m = 1
        a = trim(list(self.coeffs))
        m = [Fraction(c) for c in self.gen.min_poly]
        r0, r1 = m, a
        s0, s1 = [], [Fraction(1)]
        while degree(r1) > 0:
            q, r = pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, psub(s0, pmul(q, s1))
        c = Fraction(r1[0])
        return FieldElement(self.gen, pscale(s1, 1 / c))

    def __truediv__(self, other):
        if not isinstance(other, FieldElement):
            return self * (1 / Fraction(other))
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, FieldElement):
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def interval(self):
        return _ipoly(self.coeffs, tuple(self.gen._box))

    def sign(self):
        if self.is_rational():
            v = self.coeffs[0]
            return (v > 0) - (v < 0)
        while True:
            lo, hi = self.interval()
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            self.gen._tighten()

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def approx(self, bits=64):
        eps = Fraction(1, 2 ** bits)
        while True:
            lo, hi = self.interval()
            if hi - lo <= eps:
                return (lo + hi) / 2
            self.gen._tighten()

    def __float__(self):
        return float(self.approx(60))

    def to_algebraic(self):
        """The same value as a standalone AlgebraicNumber."""
        if self.is_rational():
            return AlgebraicNumber.rational(self.coeffs[0])
        p = list(self.gen.min_poly)
        g = list(self.coeffs)
        n = self.gen.degree
        nodes = [Fraction(k) for k in range(n + 1)]
        r = _interpolate(nodes, [resultant(p, psub([z], g)) for z in nodes])
        factors = [f for f, _ in factor_rational(r)]
        while True:
            lo, hi = self.interval()
            hits = [f for f in factors
                    if count_roots(f, lo, hi) + (1 if peval(f, lo) == 0 else 0)]
            if len(hits) == 1:
                f = hits[0]
                tot = count_roots(f, lo, hi) + (1 if peval(f, lo) == 0 else 0)
                if tot == 1:
                    if degree(f) == 1:
                        return AlgebraicNumber(f, Fraction(-f[0], f[1]))
                    if peval(f, lo) == 0 or peval(f, hi) == 0:
                        self.gen._tighten()
                        continue
                    return AlgebraicNumber(f, lo, hi)
            self.gen._tighten()

    def __repr__(self):
        return f"FieldElement({poly_to_str(list(self.coeffs), 'mu')}) ~ {float(self):.6g}"
