"""Equivalence of quasi weakly linear matrices to their Smith form.

A matrix of normal rank ``r`` is quasi weakly linear when
``d_r = (x1 - f1)^p * (x2 - f2)^q`` with ``f1`` free of ``x1`` and ``f2``
free of ``x1, x2``.  For such matrices equivalence to the Smith form holds
exactly when every ``J_k`` (the ideal of reduced k-th order minors) is the
unit ideal, which :func:`decide` checks with reduced Groebner bases.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .poly_core import GREVLEX, LEX, MonomialOrder, Polynomial, try_divide
from .polymatrix import (
    MinorReport,
    PolyMatrix,
    is_unimodular,
    matmul,
    minor_report,
    normal_rank,
)


class OutOfScope(ValueError):
    """Input is outside the quasi weakly linear hypotheses."""


class Verdict(enum.Enum):
    EQUIVALENT = "Equivalent"
    NOT_EQUIVALENT = "NotEquivalent"
    OUT_OF_SCOPE = "OutOfScope"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class QwlShape:
    """``unit * (x1 - f1)^p * (x2 - f2)^q``; a zero exponent means the factor is absent."""

    f1: Polynomial
    p: int
    f2: Polynomial
    q: int
    unit: Fraction

    @property
    def factor1(self) -> Polynomial:
        return Polynomial.var(self.f1.ctx, 0) - self.f1

    @property
    def factor2(self) -> Optional[Polynomial]:
        ctx = self.f1.ctx
        if ctx.nvars < 2:
            return None
        return Polynomial.var(ctx, 1) - self.f2

    def expand(self) -> Polynomial:
        out = self.factor1 ** self.p
        if self.q:
            out = out * self.factor2 ** self.q
        return out.scale(self.unit)


def _linear_root(d: Polynomial, var: int, deg: int, lead: Polynomial) -> Optional[Polynomial]:
    """``f`` with ``d == lead * (x_var - f)^deg``, or None."""
    sub = d.coefficient_in(var, deg - 1)
    f = try_divide(-sub, lead.scale(deg))
    if f is None:
        return None
    x = Polynomial.var(d.ctx, var)
    if lead * (x - f) ** deg != d:
        return None
    return f


def detect_qwl(d: Polynomial) -> Optional[QwlShape]:
    """Recognise ``d`` as ``unit * (x1 - f1)^p * (x2 - f2)^q``; None when it is not."""
    if d.is_zero():
        raise ValueError("the zero polynomial has no shape")
    ctx = d.ctx
    zero = Polynomial.zero(ctx)

    p = d.degree_in(0)
    lead = d.coefficient_in(0, p)
    f1 = zero
    if p >= 1:
        f1 = _linear_root(d, 0, p, lead)
        if f1 is None:
            return None

    if ctx.nvars < 2:
        if not lead.is_constant():
            return None
        return QwlShape(f1, p, zero, 0, lead.constant_value())

    q = lead.degree_in(1)
    unit_poly = lead.coefficient_in(1, q)
    if not unit_poly.is_constant():
        return None
    f2 = zero
    if q >= 1:
        f2 = _linear_root(lead, 1, q, unit_poly)
        if f2 is None:
            return None
    return QwlShape(f1, p, f2, q, unit_poly.constant_value())


def _check_maps(ctx, f1: Polynomial, f2: Polynomial) -> None:
    if f1.ctx != ctx or f2.ctx != ctx:
        raise ValueError("substitution polynomials use a different context")
    if 0 in f1.variables():
        raise ValueError("f1 must not involve x1")
    if {0, 1} & f2.variables():
        raise ValueError("f2 must not involve x1 or x2")
    if ctx.nvars < 2 and not f2.is_zero():
        raise ValueError("f2 needs a second variable")


def phi(g: Polynomial, f1: Polynomial, f2: Polynomial) -> Polynomial:
    """Apply ``x1 -> x1 - f1, x2 -> x2 - f2`` as one simultaneous substitution."""
    _check_maps(g.ctx, f1, f2)
    x = g.ctx.gens()
    images = {0: x[0] - f1}
    if g.ctx.nvars > 1:
        images[1] = x[1] - f2
    return g.substitute(images)


def phi_inverse(g: Polynomial, f1: Polynomial, f2: Polynomial) -> Polynomial:
    """Inverse of :func:`phi`: ``x2 -> x2 + f2, x1 -> x1 + f1(x2 + f2, ...)``."""
    _check_maps(g.ctx, f1, f2)
    x = g.ctx.gens()
    images = {0: x[0] + f1}
    if g.ctx.nvars > 1:
        shifted = x[1] + f2
        images = {0: x[0] + f1.substitute({1: shifted}), 1: shifted}
    return g.substitute(images)


def phi_matrix(F: PolyMatrix, shape: QwlShape) -> PolyMatrix:
    return F.map(lambda e: phi(e, shape.f1, shape.f2))


def phi_inverse_matrix(F: PolyMatrix, shape: QwlShape) -> PolyMatrix:
    return F.map(lambda e: phi_inverse(e, shape.f1, shape.f2))


def factor_exponents(d: Polynomial, shape: QwlShape) -> Tuple[int, int]:
    """``(a, b)`` with ``d`` a constant times ``factor1^a * factor2^b``; raises OutOfScope."""
    if d.is_zero():
        raise OutOfScope("zero has no factorisation")
    rest = d
    counts = []
    for fac in (shape.factor1, shape.factor2):
        n = 0
        if fac is not None:
            while not rest.is_constant():
                quot = try_divide(rest, fac)
                if quot is None:
                    break
                rest, n = quot, n + 1
        counts.append(n)
    if not rest.is_constant():
        raise OutOfScope(f"{d} is not a product of {shape.factor1} and {shape.factor2}")
    return counts[0], counts[1]


def smith_form(reports: Sequence[MinorReport], shape: QwlShape) -> List[Polynomial]:
    """Smith diagonal ``factor1^(p_k - p_{k-1}) * factor2^(q_k - q_{k-1})``."""
    if not reports:
        return []
    ctx = reports[0].d.ctx
    f1, f2 = shape.factor1, shape.factor2
    diagonal = []
    prev = (0, 0)
    steps = []
    for rep in sorted(reports, key=lambda r: r.k):
        a, b = factor_exponents(rep.d, shape)
        r_k, s_k = a - prev[0], b - prev[1]
        if r_k < 0 or s_k < 0:
            raise OutOfScope(f"d_{rep.k} does not divide d_{rep.k + 1}")
        steps.append((r_k, s_k))
        prev = (a, b)
        entry = f1 ** r_k
        if s_k:
            entry = entry * f2 ** s_k
        diagonal.append(entry.monic(GREVLEX) if not entry.is_zero() else entry)
    for (r0, s0), (r1, s1) in zip(steps, steps[1:]):
        if r1 < r0 or s1 < s0:
            raise ValueError(f"exponents {steps} break the divisibility chain of the Smith form")
    return diagonal


@dataclass
class SmithDecision:
    rank: int
    reports: List[MinorReport]
    shape: Optional[QwlShape]
    verdict: Verdict
    smith_diagonal: List[Polynomial] = field(default_factory=list)

    def smith_matrix(self, rows: int, cols: int) -> PolyMatrix:
        if self.verdict is not Verdict.EQUIVALENT:
            raise ValueError("no Smith form: the matrix is not known to be equivalent to one")
        ctx = self.reports[0].d.ctx
        return PolyMatrix.diag(ctx, self.smith_diagonal, (rows, cols))


def decide(F: PolyMatrix, order: MonomialOrder = LEX) -> SmithDecision:
    """Decide whether ``F`` is equivalent to its Smith normal form.

    Returns ``OUT_OF_SCOPE`` when ``d_r`` is not quasi weakly linear.
    Otherwise the verdict is ``EQUIVALENT`` iff ``J_k`` is the unit ideal
    for every ``k = 1..r``; the Smith diagonal is filled in that case.
    """
    r = normal_rank(F)
    if r == 0:
        raise ValueError("the zero matrix has no Smith decision")
    top = minor_report(F, r, order)
    shape = detect_qwl(top.d)
    if shape is None:
        return SmithDecision(r, [top], None, Verdict.OUT_OF_SCOPE)
    reports = [minor_report(F, k, order) for k in range(1, r)] + [top]
    if not all(rep.unit_ideal for rep in reports):
        return SmithDecision(r, reports, shape, Verdict.NOT_EQUIVALENT)
    try:
        diagonal = smith_form(reports, shape)
    except OutOfScope:
        return SmithDecision(r, reports, shape, Verdict.OUT_OF_SCOPE)
    return SmithDecision(r, reports, shape, Verdict.EQUIVALENT, diagonal)


@dataclass(frozen=True)
class FactorizationWitness:
    U: PolyMatrix
    D: PolyMatrix
    V: PolyMatrix


def verify_witness(F: PolyMatrix, w: FactorizationWitness) -> bool:
    """True iff ``U`` and ``V`` are unimodular and ``U @ D @ V == F``."""
    l, m = F.shape
    if w.U.shape != (l, l) or w.D.shape != (l, m) or w.V.shape != (m, m):
        raise ValueError(
            f"witness shapes {w.U.shape}, {w.D.shape}, {w.V.shape} do not fit a {l}x{m} matrix"
        )
    if not (is_unimodular(w.U) and is_unimodular(w.V)):
        return False
    return matmul(matmul(w.U, w.D), w.V) == F
