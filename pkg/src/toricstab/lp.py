"""Exact rational feasibility via the simplex method (Bland's rule)."""
from __future__ import annotations

from fractions import Fraction


def feasible_standard(a_eq, b_eq, nvars=None):
    """A point x >= 0 with A x = b, or None.  Phase-one simplex over Q."""
    rows = [[Fraction(v) for v in r] for r in a_eq]
    rhs = [Fraction(v) for v in b_eq]
    n = nvars if nvars is not None else (len(rows[0]) if rows else 0)
    if not rows:
        return [Fraction(0)] * n
    m = len(rows)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    # tableau columns: n originals, m artificials, rhs
    tab = [rows[i] + [Fraction(int(i == j)) for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    width = n + m
    # objective: minimize sum of artificials -> reduced costs
    obj = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            obj[j] -= tab[i][j]
    for j in range(n, n + m):
        obj[j] = Fraction(0)
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # unbounded cannot happen in phase one
            break
        _pivot(tab, obj, leave, enter)
        basis[leave] = enter
    if obj[-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = tab[i][-1]
    return x


def _pivot(tab, obj, r, c):
    p = tab[r][c]
    row = [v / p for v in tab[r]]
    tab[r] = row
    for i in range(len(tab)):
        if i != r and tab[i][c] != 0:
            f = tab[i][c]
            tab[i] = [a - f * b for a, b in zip(tab[i], row)]
    if obj[c] != 0:
        f = obj[c]
        obj[:] = [a - f * b for a, b in zip(obj, row)]


def _to_standard(a_ge, b_ge, a_eq, b_eq, n):
    """Free x with A x >= b, E x = d  ->  [p, q, s] >= 0."""
    rows, rhs = [], []
    k = len(a_ge)
    for i, (r, bi) in enumerate(zip(a_ge, b_ge)):
        slack = [0] * k
        slack[i] = -1
        rows.append(list(r) + [-v for v in r] + slack)
        rhs.append(bi)
    for r, di in zip(a_eq, b_eq):
        rows.append(list(r) + [-v for v in r] + [0] * k)
        rhs.append(di)
    return rows, rhs, 2 * n + k


def feasible_point(a_ge, b_ge, a_eq=(), b_eq=(), nvars=None):
    """Some free x with A x >= b and E x = d, or None."""
    a_ge, a_eq = list(a_ge), list(a_eq)
    n = nvars if nvars is not None else len((a_ge or a_eq)[0])
    rows, rhs, width = _to_standard(a_ge, b_ge, a_eq, b_eq, n)
    sol = feasible_standard(rows, rhs, width)
    if sol is None:
        return None
    return [sol[i] - sol[n + i] for i in range(n)]


def farkas_certificate(a_ge, b_ge, a_eq=(), b_eq=(), nvars=None):
    """Multipliers (y >= 0, z free) with y A + z E = 0 and y.b + z.d = 1, or None.

    Existence of such multipliers proves {A x >= b, E x = d} empty.
    """
    a_ge, a_eq = list(a_ge), list(a_eq)
    n = nvars if nvars is not None else len((a_ge or a_eq)[0])
    k, e = len(a_ge), len(a_eq)
    rows = []
    for j in range(n):
        rows.append([a_ge[i][j] for i in range(k)] + [a_eq[i][j] for i in range(e)]
                    + [-a_eq[i][j] for i in range(e)])
    rows.append(list(b_ge) + list(b_eq) + [-v for v in b_eq])
    rhs = [0] * n + [1]
    sol = feasible_standard(rows, rhs, k + 2 * e)
    if sol is None:
        return None
    y = sol[:k]
    z = [sol[k + i] - sol[k + e + i] for i in range(e)]
    return y, z


def check_farkas(a_ge, b_ge, a_eq, b_eq, y, z, nvars):
    if any(v < 0 for v in y):
        return False
    for j in range(nvars):
        s = sum(y[i] * a_ge[i][j] for i in range(len(y))) + \
            sum(z[i] * a_eq[i][j] for i in range(len(z)))
        if s != 0:
            return False
    val = sum(y[i] * b_ge[i] for i in range(len(y))) + sum(z[i] * b_eq[i] for i in range(len(z)))
    return val > 0


def strict_point(strict, weak=(), eqs=(), nvars=None):
    """x with strict.x > 0, weak.x >= 0, eqs.x = 0 (homogeneous), or None."""
    strict, weak, eqs = list(strict), list(weak), list(eqs)
    n = nvars if nvars is not None else len((strict or weak or eqs)[0])
    a = strict + weak
    b = [1] * len(strict) + [0] * len(weak)
    return feasible_point(a, b, eqs, [0] * len(eqs), n)
