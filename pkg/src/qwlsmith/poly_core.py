"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Polynomial` is a map from exponent tuples to nonzero
:class:`fractions.Fraction` coefficients, bound to an immutable
:class:`VariableContext`.  Variable index 0 plays the role of ``x1``.

Monomials are plain tuples of non-negative ints; :class:`MonomialOrder`
turns them into sort keys so that ``max(terms, key=order.key)`` is the
leading monomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

Monomial = Tuple[int, ...]
Coefficient = Union[int, Fraction]


class ContextMismatch(ValueError):
    """Raised when polynomials from different variable contexts are mixed."""


class NotDivisible(ArithmeticError):
    """Raised by :func:`divide_exact` when the division leaves a remainder."""


class VariableContext:
    """Ordered, immutable list of variable names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ValueError("a variable context needs at least one variable")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names!r}")
        for name in names:
            if not isinstance(name, str) or not name:
                raise ValueError(f"invalid variable name {name!r}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __setattr__(self, key, value):
        raise AttributeError("VariableContext is immutable")

    def __len__(self) -> int:
        return len(self.names)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, var: Union[str, int]) -> int:
        """Position of ``var`` (name or index) in the context."""
        if isinstance(var, int) and not isinstance(var, bool):
            if 0 <= var < len(self.names):
                return var
            raise KeyError(f"variable index {var} out of range for {self.names!r}")
        try:
            return self._index[var]
        except KeyError:
            raise KeyError(f"unknown variable {var!r}; context is {self.names!r}") from None

    def gens(self) -> Tuple["Polynomial", ...]:
        return tuple(Polynomial.var(self, i) for i in range(len(self.names)))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VariableContext) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"VariableContext({list(self.names)!r})"


def _grevlex_key(m: Monomial):
    return (sum(m), tuple(-e for e in reversed(m)))


@dataclass(frozen=True)
class MonomialOrder:
    """A term order: ``lex``, ``grevlex`` or ``block`` elimination.

    ``block`` compares the first ``split`` exponents by grevlex and only
    breaks ties with the remaining block, so any monomial containing one of
    the first ``split`` variables beats every monomial free of them.
    """

    kind: str = "grevlex"
    split: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.split < 1:
            raise ValueError("block order needs split >= 1")

    @classmethod
    def block(cls, split: int) -> "MonomialOrder":
        return cls("block", split)

    @classmethod
    def from_name(cls, name: str) -> "MonomialOrder":
        return {"lex": LEX, "grevlex": GREVLEX}[name]

    def key(self, m: Monomial):
        if self.kind == "lex":
            return m
        if self.kind == "grevlex":
            return _grevlex_key(m)
        s = self.split
        return (_grevlex_key(m[:s]), _grevlex_key(m[s:]))

    def compare(self, m1: Monomial, m2: Monomial) -> int:
        if len(m1) != len(m2):
            raise ValueError("monomials have different lengths")
        k1, k2 = self.key(m1), self.key(m2)
        return (k1 > k2) - (k1 < k2)

    def __str__(self) -> str:
        return f"block({self.split})" if self.kind == "block" else self.kind


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def compare(m1: Monomial, m2: Monomial, order: MonomialOrder = GREVLEX) -> int:
    """Return -1, 0 or 1 as ``m1`` is smaller than, equal to, or larger than ``m2``."""
    return order.compare(tuple(m1), tuple(m2))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Optional[Monomial]:
    """``a / b`` if ``b`` divides ``a``, else None."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def mono_divides(b: Monomial, a: Monomial) -> bool:
    return all(y <= x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    return tuple(min(x, y) for x, y in zip(a, b))


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)) and not isinstance(c, bool):
        return Fraction(c)
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


class Polynomial:
    """Immutable sparse polynomial over the rationals.

    Equality is structural: two polynomials are equal iff they live in the
    same context and have identical term maps.  A polynomial also compares
    equal to a plain rational when it is that constant.
    """

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: VariableContext, terms: Optional[Mapping[Sequence[int], Coefficient]] = None):
        n = ctx.nvars
        clean: Dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != n or any((not isinstance(e, int)) or e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono!r} for {n} variables")
            c = _as_fraction(coeff)
            if c:
                clean[mono] = clean.get(mono, 0) + c
                if not clean[mono]:
                    del clean[mono]
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, ctx: VariableContext, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        # caller guarantees canonical, zero-free terms
        obj = object.__new__(cls)
        object.__setattr__(obj, "ctx", ctx)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, key, value):
        raise AttributeError("Polynomial is immutable")

    # constructors

    @classmethod
    def zero(cls, ctx: VariableContext) -> "Polynomial":
        return cls._raw(ctx, {})

    @classmethod
    def one(cls, ctx: VariableContext) -> "Polynomial":
        return cls.constant(ctx, 1)

    @classmethod
    def constant(cls, ctx: VariableContext, c: Coefficient) -> "Polynomial":
        c = _as_fraction(c)
        return cls._raw(ctx, {(0,) * ctx.nvars: c} if c else {})

    @classmethod
    def var(cls, ctx: VariableContext, v: Union[str, int]) -> "Polynomial":
        i = ctx.index(v)
        mono = tuple(1 if j == i else 0 for j in range(ctx.nvars))
        return cls._raw(ctx, {mono: Fraction(1)})

    @classmethod
    def monomial(cls, ctx: VariableContext, mono: Sequence[int], coeff: Coefficient = 1) -> "Polynomial":
        return cls(ctx, {tuple(mono): coeff})

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        if not self.terms:
            return True
        return len(self.terms) == 1 and not any(next(iter(self.terms)))

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial; raises ValueError otherwise."""
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.ctx.nvars, Fraction(0))

    def __len__(self) -> int:
        return len(self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def variables(self) -> frozenset:
        """Indices of variables that actually occur."""
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return frozenset(used)

    def degree_in(self, v: Union[str, int]) -> int:
        i = self.ctx.index(v)
        if not self.terms:
            return -1
        return max(m[i] for m in self.terms)

    def coefficient_in(self, v: Union[str, int], k: int) -> "Polynomial":
        """Coefficient of ``v**k``, as a polynomial free of ``v``."""
        if k < 0:
            raise ValueError("k must be non-negative")
        i = self.ctx.index(v)
        out = {}
        for m, c in self.terms.items():
            if m[i] == k:
                out[m[:i] + (0,) + m[i + 1:]] = c
        return Polynomial._raw(self.ctx, out)

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> Iterator[Tuple[Monomial, Fraction]]:
        """Terms in descending order."""
        for m in sorted(self.terms, key=order.key, reverse=True):
            yield m, self.terms[m]

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = GREVLEX) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder = GREVLEX) -> "Polynomial":
        """Scale so the leading coefficient under ``order`` is 1 (zero stays zero)."""
        if not self.terms:
            return self
        lc = self.leading_coefficient(order)
        if lc == 1:
            return self
        return Polynomial._raw(self.ctx, {m: c / lc for m, c in self.terms.items()})

    # arithmetic

    def _check(self, other: "Polynomial") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatch(f"{self.ctx!r} vs {other.ctx!r}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.ctx, _as_fraction(other))

    def __add__(self, other) -> "Polynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.ctx, {m: -c for m, c in self.terms.items()})

    def __pos__(self) -> "Polynomial":
        return self

    def __sub__(self, other) -> "Polynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def scale(self, c: Coefficient) -> "Polynomial":
        c = _as_fraction(c)
        if not c:
            return Polynomial.zero(self.ctx)
        return Polynomial._raw(self.ctx, {m: v * c for m, v in self.terms.items()})

    def mul_term(self, mono: Monomial, c: Fraction) -> "Polynomial":
        return Polynomial._raw(self.ctx, {mono_mul(m, mono): v * c for m, v in self.terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        if len(self.terms) > len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        out: Dict[Monomial, Fraction] = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial._raw(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.one(self.ctx)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.ctx, frozenset(self.terms.items()))))
        return self._hash

    # evaluation and substitution

    def evaluate(self, point: Sequence[Coefficient]) -> Fraction:
        if len(point) != self.ctx.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.ctx.nvars}")
        pt = [_as_fraction(p) for p in point]
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for x, e in zip(pt, m):
                if e:
                    v *= x ** e
            total += v
        return total

    def substitute(self, assignments: Mapping[Union[str, int], Union["Polynomial", Coefficient]]) -> "Polynomial":
        """Simultaneously replace variables by polynomials of the same context."""
        if not assignments:
            return self
        images = {}
        for v, img in assignments.items():
            img = img if isinstance(img, Polynomial) else Polynomial.constant(self.ctx, img)
            self._check(img)
            images[self.ctx.index(v)] = img
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def power(i: int, e: int) -> Polynomial:
            key = (i, e)
            if key not in powers:
                powers[key] = images[i] ** e
            return powers[key]

        result: Dict[Monomial, Fraction] = {}
        acc = Polynomial._raw(self.ctx, result)
        for m, c in self.terms.items():
            kept = tuple(0 if i in images else e for i, e in enumerate(m))
            term = Polynomial._raw(self.ctx, {kept: c})
            for i, e in enumerate(m):
                if e and i in images:
                    term = term * power(i, e)
                    if not term.terms:
                        break
            acc = acc + term
        return acc

    def transfer(self, ctx: VariableContext, index_map: Sequence[int]) -> "Polynomial":
        """Move into ``ctx``; old variable ``i`` becomes new variable ``index_map[i]``."""
        n = ctx.nvars
        out = {}
        for m, c in self.terms.items():
            new = [0] * n
            for i, e in enumerate(m):
                if e:
                    new[index_map[i]] += e
            out[tuple(new)] = c
        return Polynomial._raw(ctx, out)

    def __str__(self) -> str:
        from .expr_io import print_poly

        return print_poly(self)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, vars={list(self.ctx.names)!r})"


# functional surface


def add(f: Polynomial, g: Polynomial) -> Polynomial:
    f._check(g)
    return f + g


def mul(f: Polynomial, g: Polynomial) -> Polynomial:
    f._check(g)
    return f * g


def try_divide(f: Polynomial, g: Polynomial) -> Optional[Polynomial]:
    """Quotient ``f / g`` if it is exact, else None."""
    f._check(g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return f
    if g.is_constant():
        return f.scale(1 / g.constant_value())
    key = GREVLEX.key
    lm_g = max(g.terms, key=key)
    lc_g = g.terms[lm_g]
    g_terms = list(g.terms.items())
    rest = dict(f.terms)
    quotient: Dict[Monomial, Fraction] = {}
    while rest:
        m = max(rest, key=key)
        t = mono_div(m, lm_g)
        if t is None:
            # with a single divisor the leading term can never be cancelled later
            return None
        c = rest[m] / lc_g
        quotient[t] = c
        for mg, cg in g_terms:
            mm = mono_mul(mg, t)
            s = rest.get(mm, 0) - c * cg
            if s:
                rest[mm] = s
            else:
                rest.pop(mm, None)
    return Polynomial._raw(f.ctx, quotient)


def divide_exact(f: Polynomial, g: Polynomial) -> Polynomial:
    q = try_divide(f, g)
    if q is None:
        raise NotDivisible(f"{g} does not divide {f}")
    return q


def divides(g: Polynomial, f: Polynomial) -> bool:
    return try_divide(f, g) is not None


def substitute(f: Polynomial, assignments) -> Polynomial:
    return f.substitute(assignments)


def degree_in(f: Polynomial, v) -> int:
    return f.degree_in(v)


def coefficient_in(f: Polynomial, v, k: int) -> Polynomial:
    return f.coefficient_in(v, k)


def evaluate(f: Polynomial, point) -> Fraction:
    return f.evaluate(point)
