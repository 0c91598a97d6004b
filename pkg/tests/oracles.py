"""Independent reference computations (sympy and brute force) used to cross-check the package."""

from __future__ import annotations

from itertools import combinations, permutations
from math import comb

import sympy

from levelmat.matrices import PolyMatrix
from levelmat.ring import Polynomial, PolyRing


def symbols(ring: PolyRing):
    return sympy.symbols(list(ring.variables))


def to_sympy(f: Polynomial):
    syms = symbols(f.ring)
    expr = sympy.Integer(0)
    for exp, c in f.terms.items():
        term = sympy.Rational(c)
        for s, a in zip(syms, exp):
            term *= s**a
        expr += term
    return expr


def from_sympy(ring: PolyRing, expr) -> Polynomial:
    poly = sympy.Poly(sympy.expand(expr), *symbols(ring))
    terms = {}
    for exp, c in poly.terms():
        c = sympy.Rational(c)
        terms[tuple(exp)] = ring.field(c.p) if c.q == 1 else ring.field.div(c.p, c.q)
    return Polynomial(ring, terms)


def sympy_matrix(M: PolyMatrix):
    return sympy.Matrix([[to_sympy(e) for e in row] for row in M.entries])


def leibniz_det(M: PolyMatrix) -> Polynomial:
    """Sum over permutations; exponential but obviously correct."""
    n = M.rows
    ring = M.ring
    total = ring.zero
    for perm in permutations(range(n)):
        inversions = sum(1 for i, j in combinations(range(n), 2) if perm[i] > perm[j])
        term = ring.one
        for i in range(n):
            term = term * M[i, perm[i]]
            if not term:
                break
        total = total - term if inversions % 2 else total + term
    return total


def groebner_leading_exponents(gens, modulus: int | None = None) -> list[tuple[int, ...]]:
    ring = gens[0].ring
    syms = symbols(ring)
    kw = {"modulus": modulus} if modulus else {}
    G = sympy.groebner([to_sympy(g) for g in gens], *syms, order="grevlex", **kw)
    return [sympy.Poly(g, *syms).monoms(order="grevlex")[0] for g in G.exprs]


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def hilbert_function(gens, degree: int, modulus: int | None = None) -> list[int]:
    """dim_k (R/I)_t for t = 0..degree by counting standard monomials of a sympy Groebner basis."""
    ring = gens[0].ring
    leads = groebner_leading_exponents(gens, modulus)
    return [sum(1 for e in ring.monomials(t) if not any(_divides(L, e) for L in leads)) for t in range(degree + 1)]


def series_from_numerator(coeffs, n: int, degree: int) -> list[int]:
    """Coefficients of N(t) / (1 - t)^n up to t^degree."""
    return [sum(c * comb(t - k + n - 1, n - 1) for k, c in enumerate(coeffs) if k <= t) for t in range(degree + 1)]


def krull_dimension(gens, modulus: int | None = None) -> int:
    """Largest set of variables free of every leading monomial of a sympy Groebner basis."""
    ring = gens[0].ring
    leads = groebner_leading_exponents(gens, modulus)
    if any(not any(L) for L in leads):
        return -1
    n = ring.n
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            if all(any(L[i] and i not in subset for i in range(n)) for L in leads):
                return size
    return 0
