"""Factorization of integer polynomials at small degree.

Rational roots are split off first; remaining factors are found by a
Kronecker search over divisors of values at integer nodes.  Candidate value
tuples are pruned while they are built: for an integer polynomial sampled at
integer nodes every Newton divided difference is an integer, and the top one
is the leading coefficient, which must divide that of the input.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, isqrt

from ..errors import InvalidInput
from .poly import Poly, squarefree_decomposition


def int_divisors(n: int):
    """Positive divisors of ``n != 0`` by trial division."""
    n = abs(n)
    if n == 0:
        raise InvalidInput("divisors of zero")
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def _primitive_int(p: Poly):
    return p.primitive()


def _rational_roots(f: Poly):
    """Rational roots of an integral polynomial with nonzero constant term."""
    c = f.int_coeffs()
    roots = []
    for a in int_divisors(c[0]):
        for b in int_divisors(c[-1]):
            for s in (1, -1):
                r = Fraction(s * a, b)
                if r.denominator == b and r not in roots and f(r) == 0:
                    roots.append(r)
    return roots


def mignotte_bound(f: Poly, d: int) -> int:
    """Bound on coefficient size of any degree-``d`` integer factor of ``f``."""
    norm = isqrt(sum(c.numerator ** 2 for c in f.coeffs)) + 1
    lc = abs(f.lc.numerator)
    return max(comb(d, j) for j in range(d + 1)) * norm * lc


def _find_factor(f: Poly, d: int):
    """A nontrivial primitive integer factor of degree ``d`` or ``None``."""
    lc = abs(f.lc.numerator)
    lc_divs = set(int_divisors(lc))
    bound = mignotte_bound(f, d)
    # nodes with few divisors keep the search small
    cands = []
    for x in range(-12, 13):
        v = f(Fraction(x))
        if v != 0:
            cands.append((len(int_divisors(v.numerator)), abs(x), x, v.numerator))
    cands.sort()
    chosen = sorted(cands[: d + 1], key=lambda t: t[2])
    nodes = [t[2] for t in chosen]
    value_opts = []
    for idx, t in enumerate(chosen):
        divs = int_divisors(t[3])
        # fix the sign of the first value: g and -g are the same factor
        value_opts.append(divs if idx == 0 else [s * q for q in divs for s in (1, -1)])

    def extend(vals, table):
        k = len(vals)
        if k == d + 1:
            g = _newton_to_poly(nodes, [diag[-1] for diag in table])
            if any(abs(c.numerator) > bound for c in g.coeffs):
                return None
            if g.degree != d:
                return None
            q, r = f.divmod(g)
            if r.is_zero() and q.is_integral():
                return g.primitive()
            return None
        for val in value_opts[k]:
            # update divided-difference table along the new diagonal
            new_diag = [Fraction(val)]
            ok = True
            for j in range(1, k + 1):
                num = new_diag[j - 1] - table_diag(table, k, j - 1)
                dd = num / (nodes[k] - nodes[k - j])
                if dd.denominator != 1:
                    ok = False
                    break
                new_diag.append(dd)
            if not ok:
                continue
            if k == d and (new_diag[-1] == 0 or abs(new_diag[-1].numerator) not in lc_divs):
                continue
            res = extend(vals + [val], _push(table, new_diag))
            if res is not None:
                return res
        return None

    return extend([], [])


def table_diag(table, k, j):
    """Divided difference f[x_{k-1-j} .. x_{k-1}]; diagonal k holds f[x_{k-j} .. x_k] at j."""
    return table[k - 1][j]


def _push(table, diag):
    return table + [diag]


def _newton_to_poly(nodes, top_coeffs):
    """Polynomial from Newton coefficients f[x_0..x_k]."""
    p = Poly()
    basis = Poly([1])
    for k, c in enumerate(top_coeffs):
        p = p + basis * c
        basis = basis * Poly([-nodes[k], 1])
    return p


def _factor_squarefree_primitive(f: Poly):
    out = []
    if f.degree <= 0:
        return out
    # x divides f
    while f[0] == 0:
        out.append(Poly([0, 1]))
        f = f.exact_div(Poly([0, 1]))
    for r in _rational_roots(f) if f.degree >= 1 else []:
        lin = Poly([-r.numerator, r.denominator])
        out.append(lin)
        f = f.exact_div(lin).primitive()
    rest = [f] if f.degree >= 1 else []
    done = []
    while rest:
        g = rest.pop()
        if g.degree <= 3:
            done.append(g)
            continue
        split = None
        for d in range(2, g.degree // 2 + 1):
            h = _find_factor(g, d)
            if h is not None:
                split = h
                break
        if split is None:
            done.append(g)
        else:
            rest.append(split)
            rest.append(g.exact_div(split).primitive())
    return out + done


def _sort_key(item):
    p, m = item
    return (p.degree, [abs(c) for c in reversed(p.coeffs)], [c for c in reversed(p.coeffs)], m)


def factor_over_Z(p: Poly):
    """Irreducible factorization of a nonzero integer polynomial.

    Returns a list of ``(factor, multiplicity)`` with each factor primitive,
    irreducible over ℤ and with positive leading coefficient; use
    :func:`factor_with_content` for the constant part.
    """
    return factor_with_content(p)[1]


def factor_with_content(p: Poly):
    """``(unit_content, factors)`` with ``p = unit_content * prod f**m``."""
    if not isinstance(p, Poly):
        p = Poly(p)
    if p.is_zero():
        raise InvalidInput("cannot factor the zero polynomial")
    if not p.is_integral():
        raise InvalidInput("factor_over_Z expects integer coefficients")
    factors = []
    if p.degree >= 1:
        for part, mult in squarefree_decomposition(p):
            for f in _factor_squarefree_primitive(part.primitive()):
                factors.append((f, mult))
    factors.sort(key=_sort_key)
    prod_ = Poly([1])
    for f, m in factors:
        prod_ = prod_ * f ** m
    unit = p.lc / prod_.lc
    return unit, factors


def expand_factors(unit, factors) -> Poly:
    out = Poly([unit])
    for f, m in factors:
        out = out * f ** m
    return out


def is_irreducible(p: Poly) -> bool:
    _, fs = factor_with_content(p)
    return len(fs) == 1 and fs[0][1] == 1 and fs[0][0].degree >= 1


def cyclotomic(n: int) -> Poly:
    """The n-th cyclotomic polynomial."""
    if n < 1:
        raise InvalidInput("cyclotomic index must be positive")
    p = Poly([-1] + [0] * (n - 1) + [1])
    for d in int_divisors(n):
        if d < n:
            p = p.exact_div(cyclotomic(d))
    return p


def euler_phi(n: int) -> int:
    result, m, k = n, n, 2
    while k * k <= m:
        if m % k == 0:
            while m % k == 0:
                m //= k
            result -= result // k
        k += 1
    if m > 1:
        result -= result // m
    return result


def cyclotomic_index(f: Poly):
    """n with f = Φ_n, or None.  φ(n) = deg f forces n ≤ 2 deg² + 2."""
    d = f.degree
    if d < 1 or not f.is_monic():
        return None
    for n in range(1, 2 * d * d + 3):
        if euler_phi(n) == d and cyclotomic(n) == f:
            return n
    return None
