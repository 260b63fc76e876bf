"""Buchberger's algorithm, reduced bases, elimination and gcd.

Everything here runs on the sparse dict representation of
:class:`~qwlsmith.poly_core.Polynomial`.  The pair-reduction budget of a
single :func:`buchberger` run is capped by the ``QWLSMITH_MAX_PAIRS``
environment variable (default 100000).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .poly_core import (
    GREVLEX,
    LEX,
    Monomial,
    MonomialOrder,
    Polynomial,
    VariableContext,
    divide_exact,
    mono_div,
    mono_divides,
    mono_gcd,
    mono_lcm,
    mono_mul,
    try_divide,
)

DEFAULT_MAX_PAIRS = 100_000


class GroebnerLimitExceeded(RuntimeError):
    """Buchberger exceeded its pair-reduction budget."""


def max_pairs_budget() -> int:
    raw = os.environ.get("QWLSMITH_MAX_PAIRS")
    if not raw:
        return DEFAULT_MAX_PAIRS
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"QWLSMITH_MAX_PAIRS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("QWLSMITH_MAX_PAIRS must be positive")
    return value


class Ideal:
    """Generators of an ideal; zero generators are dropped."""

    __slots__ = ("ctx", "generators")

    def __init__(self, generators: Iterable[Polynomial], ctx: Optional[VariableContext] = None):
        gens = list(generators)
        if ctx is None:
            if not gens:
                raise ValueError("cannot infer the context of an empty ideal")
            ctx = gens[0].ctx
        for g in gens:
            if g.ctx != ctx:
                raise ValueError("ideal generators must share one context")
        self.ctx = ctx
        self.generators = tuple(g for g in gens if not g.is_zero())

    def is_zero(self) -> bool:
        return not self.generators

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __repr__(self) -> str:
        return "Ideal({" + ", ".join(str(g) for g in self.generators) + "})"


IdealLike = Union[Ideal, Iterable[Polynomial]]


def _as_ideal(gens: IdealLike) -> Ideal:
    return gens if isinstance(gens, Ideal) else Ideal(gens)


@dataclass(frozen=True)
class GroebnerBasis:
    generators: Tuple[Polynomial, ...]
    order: MonomialOrder
    reduced: bool = False

    @property
    def ctx(self) -> VariableContext:
        return self.generators[0].ctx

    def is_unit(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.generators)

    def contains(self, f: Polynomial) -> bool:
        return reduce(f, self.generators, self.order)[0].is_zero()

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)


# internal dict-level helpers

_Entry = Tuple[Monomial, Fraction, Dict[Monomial, Fraction]]


def _entry(terms: Dict[Monomial, Fraction], key) -> _Entry:
    lm = max(terms, key=key)
    return lm, terms[lm], terms


def _sub_multiple(target: Dict[Monomial, Fraction], g: Dict[Monomial, Fraction], t: Monomial, c: Fraction) -> None:
    """target -= c * x^t * g, in place."""
    for mg, cg in g.items():
        m = mono_mul(mg, t)
        s = target.get(m, 0) - c * cg
        if s:
            target[m] = s
        else:
            target.pop(m, None)


def _normal_form(terms: Dict[Monomial, Fraction], basis: Sequence[_Entry], key) -> Dict[Monomial, Fraction]:
    rest = dict(terms)
    remainder: Dict[Monomial, Fraction] = {}
    while rest:
        m = max(rest, key=key)
        c = rest[m]
        for lm, lc, g in basis:
            t = mono_div(m, lm)
            if t is not None:
                _sub_multiple(rest, g, t, c / lc)
                break
        else:
            remainder[m] = c
            del rest[m]
    return remainder


def _monic_terms(terms: Dict[Monomial, Fraction], key) -> Dict[Monomial, Fraction]:
    lc = terms[max(terms, key=key)]
    if lc == 1:
        return terms
    return {m: c / lc for m, c in terms.items()}


def _spoly(a: _Entry, b: _Entry) -> Dict[Monomial, Fraction]:
    lm_a, lc_a, ta = a
    lm_b, lc_b, tb = b
    lcm = mono_lcm(lm_a, lm_b)
    out: Dict[Monomial, Fraction] = {}
    _sub_multiple(out, ta, mono_div(lcm, lm_a), -1 / lc_a)
    _sub_multiple(out, tb, mono_div(lcm, lm_b), 1 / lc_b)
    return out


# public operations


def reduce(f: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder = LEX) -> Tuple[Polynomial, List[Polynomial]]:
    """Multivariate division of ``f`` by ``basis``.

    Returns ``(remainder, quotients)`` with
    ``f == sum(q * g) + remainder`` and no remainder term divisible by a
    leading term of the basis.
    """
    ctx = f.ctx
    for g in basis:
        if g.ctx != ctx:
            raise ValueError("basis and dividend live in different contexts")
        if g.is_zero():
            raise ValueError("cannot divide by the zero polynomial")
    key = order.key
    entries = [_entry(g.terms, key) for g in basis]
    quotients: List[Dict[Monomial, Fraction]] = [{} for _ in basis]
    rest = dict(f.terms)
    remainder: Dict[Monomial, Fraction] = {}
    while rest:
        m = max(rest, key=key)
        c = rest[m]
        for idx, (lm, lc, g) in enumerate(entries):
            t = mono_div(m, lm)
            if t is not None:
                q = c / lc
                quotients[idx][t] = quotients[idx].get(t, 0) + q
                _sub_multiple(rest, g, t, q)
                break
        else:
            remainder[m] = c
            del rest[m]
    quots = [Polynomial(ctx, q) for q in quotients]
    return Polynomial._raw(ctx, remainder), quots


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = LEX) -> Polynomial:
    key = order.key
    return Polynomial._raw(f.ctx, _spoly(_entry(f.terms, key), _entry(g.terms, key)))


def buchberger(gens: IdealLike, order: MonomialOrder = LEX, *, stop_on_unit: bool = False,
               max_pairs: Optional[int] = None) -> GroebnerBasis:
    """Groebner basis of the ideal generated by ``gens``.

    Uses the coprime-leading-term and chain criteria and the normal
    selection strategy (smallest lcm first, ties broken by generator
    index).  With ``stop_on_unit`` the run ends as soon as a nonzero
    constant appears and ``{1}`` is returned.
    """
    ideal = _as_ideal(gens)
    if ideal.is_zero():
        raise ValueError("buchberger needs at least one nonzero generator")
    ctx = ideal.ctx
    key = order.key
    budget = max_pairs_budget() if max_pairs is None else max_pairs
    one = (0,) * ctx.nvars

    basis: List[_Entry] = []
    pairs: set = set()
    for g in ideal.generators:
        entry = _entry(_monic_terms(dict(g.terms), key), key)
        if entry[0] == one:
            return GroebnerBasis((Polynomial.one(ctx),), order, reduced=True)
        basis.append(entry)
    for j in range(len(basis)):
        for i in range(j):
            pairs.add((i, j))

    processed = 0
    while pairs:
        i, j = min(pairs, key=lambda p: (key(mono_lcm(basis[p[0]][0], basis[p[1]][0])), p))
        pairs.discard((i, j))
        lm_i, lm_j = basis[i][0], basis[j][0]
        if not any(x and y for x, y in zip(lm_i, lm_j)):
            continue  # coprime leading monomials
        lcm = mono_lcm(lm_i, lm_j)
        if _chain_criterion(i, j, lcm, basis, pairs):
            continue
        processed += 1
        if processed > budget:
            raise GroebnerLimitExceeded(f"more than {budget} pair reductions")
        h = _normal_form(_spoly(basis[i], basis[j]), basis, key)
        if not h:
            continue
        entry = _entry(_monic_terms(h, key), key)
        if entry[0] == one and stop_on_unit:
            return GroebnerBasis((Polynomial.one(ctx),), order, reduced=True)
        new = len(basis)
        basis.append(entry)
        for k in range(new):
            pairs.add((k, new))

    return GroebnerBasis(tuple(Polynomial._raw(ctx, t) for _, _, t in basis), order, reduced=False)


def _chain_criterion(i, j, lcm, basis, pairs) -> bool:
    for k, (lm_k, _, _) in enumerate(basis):
        if k == i or k == j:
            continue
        if not mono_divides(lm_k, lcm):
            continue
        if (min(i, k), max(i, k)) in pairs or (min(j, k), max(j, k)) in pairs:
            continue
        return True
    return False


def reduce_basis(gb: GroebnerBasis) -> GroebnerBasis:
    """Canonical reduced Groebner basis: minimal, inter-reduced, monic, sorted descending."""
    order = gb.order
    key = order.key
    polys = [g for g in gb.generators if not g.is_zero()]
    if not polys:
        raise ValueError("empty Groebner basis")
    ctx = polys[0].ctx
    entries = [_entry(_monic_terms(dict(g.terms), key), key) for g in polys]
    minimal: List[_Entry] = []
    for idx, e in enumerate(entries):
        redundant = False
        for jdx, other in enumerate(entries):
            if jdx == idx or not mono_divides(other[0], e[0]):
                continue
            # equal leading monomials: keep the earliest one
            if other[0] != e[0] or jdx < idx:
                redundant = True
                break
        if not redundant:
            minimal.append(e)
    if any(not any(e[0]) for e in minimal):
        return GroebnerBasis((Polynomial.one(ctx),), order, reduced=True)
    reduced = []
    for idx, (lm, lc, terms) in enumerate(minimal):
        others = [e for jdx, e in enumerate(minimal) if jdx != idx]
        tail = dict(terms)
        del tail[lm]
        nf = _normal_form(tail, others, key)
        nf[lm] = lc
        reduced.append(_monic_terms(nf, key))
    reduced.sort(key=lambda t: key(max(t, key=key)), reverse=True)
    return GroebnerBasis(tuple(Polynomial._raw(ctx, t) for t in reduced), order, reduced=True)


def groebner_basis(gens: IdealLike, order: MonomialOrder = LEX) -> GroebnerBasis:
    """Reduced Groebner basis of ``gens``."""
    return reduce_basis(buchberger(gens, order))


def is_unit_ideal(gens: IdealLike, order: MonomialOrder = LEX) -> bool:
    """True iff the ideal is the whole ring, i.e. its reduced basis is ``{1}``."""
    ideal = _as_ideal(gens)
    if ideal.is_zero():
        return False
    if any(g.is_constant() for g in ideal.generators):
        return True
    return buchberger(ideal, order, stop_on_unit=True).is_unit()


def eliminate(gens: IdealLike, drop_vars: Iterable[Union[str, int]]) -> Ideal:
    """Generators of the intersection of the ideal with the subring free of ``drop_vars``."""
    ideal = _as_ideal(gens)
    ctx = ideal.ctx
    drop = sorted({ctx.index(v) for v in drop_vars})
    if len(drop) == ctx.nvars:
        raise ValueError("cannot eliminate every variable")
    if not drop:
        return ideal
    if ideal.is_zero():
        return Ideal([], ctx)
    keep = [i for i in range(ctx.nvars) if i not in drop]
    perm = drop + keep
    work_ctx = VariableContext(ctx.names[i] for i in perm)
    forward = [0] * ctx.nvars
    for new, old in enumerate(perm):
        forward[old] = new
    moved = [g.transfer(work_ctx, forward) for g in ideal.generators]
    gb = groebner_basis(moved, MonomialOrder.block(len(drop)))
    k = len(drop)
    survivors = [g for g in gb.generators if not any(any(m[:k]) for m in g.terms)]
    return Ideal([g.transfer(ctx, perm) for g in survivors], ctx)


def _monomial_content(f: Polynomial) -> Monomial:
    it = iter(f.terms)
    content = next(it)
    for m in it:
        content = mono_gcd(content, m)
    return content


def lcm(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic generator of the intersection of the principal ideals of ``f`` and ``g``."""
    if f.is_zero() or g.is_zero():
        return Polynomial.zero(f.ctx)
    ctx = f.ctx
    names = list(ctx.names)
    t_name = "_t"
    while t_name in names:
        t_name += "_"
    ext = VariableContext([t_name] + names)
    shift = list(range(1, ctx.nvars + 1))
    fe, ge = f.transfer(ext, shift), g.transfer(ext, shift)
    t = Polynomial.var(ext, 0)
    inter = eliminate([t * fe, (1 - t) * ge], [0])
    if len(inter) != 1:
        raise AssertionError(f"intersection of principal ideals returned {len(inter)} generators")
    back = inter.generators[0].transfer(ctx, [None] + list(range(ctx.nvars)))
    return back.monic(GREVLEX)


def gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic greatest common divisor, computed as ``f*g / lcm(f, g)``."""
    f._check(g)
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if g.is_zero():
        return f.monic(GREVLEX)
    if f.is_zero():
        return g.monic(GREVLEX)
    ctx = f.ctx
    if f.is_constant() or g.is_constant():
        return Polynomial.one(ctx)
    # strip the monomial content first; a monomial shares no factor with a content-free polynomial
    cf, cg = _monomial_content(f), _monomial_content(g)
    common = Polynomial.monomial(ctx, mono_gcd(cf, cg))
    f = Polynomial._raw(ctx, {mono_div(m, cf): c for m, c in f.terms.items()})
    g = Polynomial._raw(ctx, {mono_div(m, cg): c for m, c in g.terms.items()})
    if f.is_constant() or g.is_constant():
        return common
    if f.total_degree() > g.total_degree():
        f, g = g, f
    if try_divide(g, f) is not None:
        return (common * f).monic(GREVLEX)
    if not f.variables() & g.variables():
        return common
    h = divide_exact(f * g, lcm(f, g))
    return (common * h).monic(GREVLEX)


def gcd_many(fs: Iterable[Polynomial]) -> Polynomial:
    """Monic gcd of all nonzero entries of ``fs``."""
    nonzero = [f for f in fs if not f.is_zero()]
    if not nonzero:
        raise ValueError("gcd of an all-zero list is undefined")
    # folding order does not change the monic result; small inputs first keeps it cheap
    nonzero.sort(key=lambda f: (f.total_degree(), len(f)))
    acc = nonzero[0].monic(GREVLEX)
    for f in nonzero[1:]:
        if acc.is_constant():
            break
        acc = gcd(acc, f)
    return acc
