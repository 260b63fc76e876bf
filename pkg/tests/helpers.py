"""Random generators and brute-force oracles shared by the test modules."""

import os
import random
from fractions import Fraction
from itertools import permutations

from qwlsmith.poly_core import Polynomial, VariableContext
from qwlsmith.polymatrix import PolyMatrix

SEED = int(os.environ.get("QWLSMITH_SEED", "20240611"))


def random_poly(rng: random.Random, ctx: VariableContext, max_terms=4, max_deg=2, coeff=9, nvars=None):
    nvars = ctx.nvars if nvars is None else nvars
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        mono = [0] * ctx.nvars
        for _ in range(rng.randint(0, max_deg)):
            mono[rng.randrange(nvars)] += 1
        terms[tuple(mono)] = rng.randint(-coeff, coeff)
    return Polynomial(ctx, terms)


def random_nonzero_poly(rng, ctx, **kw):
    while True:
        p = random_poly(rng, ctx, **kw)
        if not p.is_zero():
            return p


def random_point(rng, n, lo=-20, hi=20):
    return [Fraction(rng.randint(lo, hi), rng.randint(1, 7)) for _ in range(n)]


def random_matrix(rng, ctx, rows, cols, **kw):
    return PolyMatrix([[random_poly(rng, ctx, **kw) for _ in range(cols)] for _ in range(rows)], ctx)


def elementary(rng, ctx, n, **kw):
    """One random elementary unimodular n x n matrix."""
    grid = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    kind = rng.choice(["swap", "scale", "add"])
    i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
    if kind == "swap" and n > 1:
        grid[i][i] = grid[j][j] = 0
        grid[i][j] = grid[j][i] = 1
    elif kind == "scale" or n == 1:
        grid[i][i] = Fraction(rng.choice([-3, -2, -1, 2, 3]), rng.choice([1, 2, 5]))
    else:
        grid[i][j] = random_poly(rng, ctx, **kw)
    return PolyMatrix(grid, ctx)


def random_unimodular(rng, ctx, n, length=3, **kw):
    M = PolyMatrix.identity(ctx, n)
    for _ in range(length):
        M = elementary(rng, ctx, n, **kw) @ M
    return M


def leibniz_det(F: PolyMatrix) -> Polynomial:
    """Permutation-sum determinant, independent of both library paths."""
    n = F.rows
    total = Polynomial.zero(F.ctx)
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = Polynomial.one(F.ctx)
        for r, c in enumerate(perm):
            term = term * F[r, c]
            if term.is_zero():
                break
        total = total - term if inversions % 2 else total + term
    return total


def as_sympy(f: Polynomial):
    import sympy

    syms = sympy.symbols(list(f.ctx.names))
    expr = sympy.Integer(0)
    for mono, c in f.terms.items():
        t = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, mono):
            t *= s ** e
        expr += t
    return expr, syms
