"""Polynomial matrices, their minors and determinantal divisors."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, List, Sequence, Tuple, Union

from .groebner import gcd_many, is_unit_ideal
from .poly_core import LEX, MonomialOrder, Polynomial, VariableContext, divide_exact

Entry = Union[Polynomial, int, Fraction]


class RankExceeded(ValueError):
    """Every k x k minor vanishes, so k is above the normal rank."""


class PolyMatrix:
    """Dense l x m matrix of polynomials sharing one context."""

    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[Entry]], ctx: VariableContext = None):
        grid = [list(row) for row in entries]
        if not grid or not grid[0]:
            raise ValueError("matrix dimensions must be positive")
        width = len(grid[0])
        for i, row in enumerate(grid):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} entries, expected {width}")
        if ctx is None:
            for row in grid:
                for e in row:
                    if isinstance(e, Polynomial):
                        ctx = e.ctx
                        break
                if ctx is not None:
                    break
            if ctx is None:
                raise ValueError("cannot infer a variable context from constant entries")
        cells = []
        for i, row in enumerate(grid):
            out = []
            for j, e in enumerate(row):
                if isinstance(e, Polynomial):
                    if e.ctx != ctx:
                        raise ValueError(f"entry ({i}, {j}) uses a different variable context")
                    out.append(e)
                else:
                    out.append(Polynomial.constant(ctx, e))
            cells.append(tuple(out))
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "rows", len(cells))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "entries", tuple(cells))

    def __setattr__(self, key, value):
        raise AttributeError("PolyMatrix is immutable")

    @classmethod
    def identity(cls, ctx: VariableContext, n: int) -> "PolyMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], ctx)

    @classmethod
    def zeros(cls, ctx: VariableContext, rows: int, cols: int) -> "PolyMatrix":
        return cls([[0] * cols for _ in range(rows)], ctx)

    @classmethod
    def diag(cls, ctx: VariableContext, items: Sequence[Entry], shape: Tuple[int, int] = None) -> "PolyMatrix":
        rows, cols = shape or (len(items), len(items))
        grid = [[0] * cols for _ in range(rows)]
        for i, e in enumerate(items):
            grid[i][i] = e
        return cls(grid, ctx)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx: Tuple[int, int]) -> Polynomial:
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> Tuple[Polynomial, ...]:
        return self.entries[i]

    def tolist(self) -> List[List[Polynomial]]:
        return [list(r) for r in self.entries]

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for j in cols] for i in rows], self.ctx)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([list(col) for col in zip(*self.entries)], self.ctx)

    def map(self, fn: Callable[[Polynomial], Polynomial]) -> "PolyMatrix":
        return PolyMatrix([[fn(e) for e in row] for row in self.entries], self.ctx)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.ctx == other.ctx and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.ctx, self.entries))

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        return matmul(self, other)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.ctx)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(e) for e in row) for row in self.entries)
        return f"PolyMatrix([{body}])"


@dataclass(frozen=True)
class MinorReport:
    """Order-k minors, their gcd ``d_k`` and the unit-ideal verdict for ``J_k``.

    ``reduced_minors`` is aligned with ``minors`` (zero minors stay zero);
    :attr:`generators` drops the zeros.
    """

    k: int
    minors: Tuple[Polynomial, ...]
    d: Polynomial
    reduced_minors: Tuple[Polynomial, ...]
    unit_ideal: bool

    @property
    def generators(self) -> Tuple[Polynomial, ...]:
        return tuple(b for b in self.reduced_minors if not b.is_zero())


def matmul(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    if A.cols != B.rows:
        raise ValueError(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    if A.ctx != B.ctx:
        raise ValueError("matrices use different variable contexts")
    zero = Polynomial.zero(A.ctx)
    cols = list(zip(*B.entries))
    out = []
    for row in A.entries:
        out_row = []
        for col in cols:
            acc = zero
            for a, b in zip(row, col):
                if a and b:
                    acc = acc + a * b
            out_row.append(acc)
        out.append(out_row)
    return PolyMatrix(out, A.ctx)


def _bareiss(grid: List[List[Polynomial]], ctx: VariableContext) -> Polynomial:
    n = len(grid)
    m = [list(r) for r in grid]
    sign = 1
    prev = Polynomial.one(ctx)
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return Polynomial.zero(ctx)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * pivot - m[i][k] * m[k][j]
                m[i][j] = divide_exact(num, prev)
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def _cofactor(grid: List[List[Polynomial]], ctx: VariableContext) -> Polynomial:
    n = len(grid)
    if n == 1:
        return grid[0][0]
    if n == 2:
        return grid[0][0] * grid[1][1] - grid[0][1] * grid[1][0]
    # expand along the row with the most zeros
    r = max(range(n), key=lambda i: sum(e.is_zero() for e in grid[i]))
    total = Polynomial.zero(ctx)
    for j, e in enumerate(grid[r]):
        if e.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for i, row in enumerate(grid) if i != r]
        term = e * _cofactor(minor, ctx)
        total = total + term if (r + j) % 2 == 0 else total - term
    return total


def cofactor_determinant(F: PolyMatrix) -> Polynomial:
    """Determinant by Laplace expansion."""
    if not F.is_square():
        raise ValueError("determinant needs a square matrix")
    return _cofactor(F.tolist(), F.ctx)


def determinant(F: PolyMatrix, method: str = "auto") -> Polynomial:
    """Exact determinant.

    ``method`` is ``"bareiss"`` (fraction-free elimination), ``"cofactor"``
    or ``"auto"``, which uses cofactor expansion for small matrices that are
    mostly zeros and Bareiss otherwise.
    """
    if not F.is_square():
        raise ValueError("determinant needs a square matrix")
    n = F.rows
    if method == "auto":
        zeros = sum(e.is_zero() for row in F.entries for e in row)
        method = "cofactor" if n <= 2 or (n <= 5 and 2 * zeros > n * n) else "bareiss"
    if method == "bareiss":
        return _bareiss(F.tolist(), F.ctx)
    if method == "cofactor":
        return _cofactor(F.tolist(), F.ctx)
    raise ValueError(f"unknown determinant method {method!r}")


def minors(F: PolyMatrix, k: int) -> List[Polynomial]:
    """All k x k minors, ordered by (row subset, column subset) lexicographically."""
    if not 1 <= k <= min(F.rows, F.cols):
        raise ValueError(f"minor order {k} out of range for a {F.rows}x{F.cols} matrix")
    if k == 1:
        return [e for row in F.entries for e in row]
    out = []
    for rs in combinations(range(F.rows), k):
        for cs in combinations(range(F.cols), k):
            out.append(determinant(F.submatrix(rs, cs)))
    return out


def minor_report(F: PolyMatrix, k: int, order: MonomialOrder = LEX) -> MinorReport:
    ms = minors(F, k)
    if all(m.is_zero() for m in ms):
        raise RankExceeded(f"all {k}x{k} minors vanish; {k} exceeds the normal rank")
    d = gcd_many(ms)
    reduced = tuple(divide_exact(m, d) for m in ms)
    unit = is_unit_ideal([b for b in reduced if not b.is_zero()], order)
    return MinorReport(k, tuple(ms), d, reduced, unit)


def determinantal_divisors(F: PolyMatrix, upto: int = None) -> List[Polynomial]:
    """``[d_1, ..., d_upto]`` (defaults to the normal rank)."""
    upto = normal_rank(F) if upto is None else upto
    return [gcd_many(minors(F, k)) for k in range(1, upto + 1)]


def normal_rank(F: PolyMatrix) -> int:
    """Largest k with a nonzero k x k minor (0 for the zero matrix)."""
    for k in range(min(F.rows, F.cols), 0, -1):
        if k == 1:
            return 0 if F.is_zero() else 1
        for rs in combinations(range(F.rows), k):
            for cs in combinations(range(F.cols), k):
                if not determinant(F.submatrix(rs, cs)).is_zero():
                    return k
    return 0


def is_unimodular(F: PolyMatrix) -> bool:
    if not F.is_square():
        raise ValueError("unimodularity is defined for square matrices")
    det = determinant(F)
    return det.is_constant() and not det.is_zero()


def is_zlp(F: PolyMatrix, order: MonomialOrder = LEX) -> bool:
    """Zero left prime: the maximal minors generate the unit ideal."""
    if F.rows > F.cols:
        raise ValueError("zero left primeness needs rows <= cols")
    return is_unit_ideal([m for m in minors(F, F.rows) if not m.is_zero()], order)


def specialize(F: PolyMatrix, var, value) -> PolyMatrix:
    """Substitute ``value`` for ``var`` in every entry."""
    if isinstance(value, Polynomial) and value.ctx != F.ctx:
        raise ValueError("substituted value uses a different variable context")
    return F.map(lambda e: e.substitute({var: value}))


def adjugate(F: PolyMatrix) -> PolyMatrix:
    if not F.is_square():
        raise ValueError("adjugate needs a square matrix")
    n = F.rows
    if n == 1:
        return PolyMatrix([[1]], F.ctx)
    grid = F.tolist()
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for r, row in enumerate(grid) if r != i]
            c = _cofactor(minor, F.ctx)
            out[j][i] = c if (i + j) % 2 == 0 else -c
    return PolyMatrix(out, F.ctx)


def inverse(F: PolyMatrix) -> PolyMatrix:
    """Inverse of a unimodular matrix."""
    det = determinant(F)
    if det.is_zero() or not det.is_constant():
        raise ValueError("only unimodular matrices are invertible over the polynomial ring")
    inv = 1 / det.constant_value()
    return adjugate(F).map(lambda e: e.scale(inv))
