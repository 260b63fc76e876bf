"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -s`` or
``python3 tests/test_acceptance.py``; under a plain ``pytest`` run the lines
are repeated in the terminal summary.
"""

import functools
import json
import random
import sys
import time
from itertools import permutations
from pathlib import Path

import sympy

sys.path.insert(0, str(Path(__file__).parent))

from helpers import (
    SEED,
    as_sympy,
    leibniz_det,
    random_matrix,
    random_nonzero_poly,
    random_poly,
    random_unimodular,
)
from qwlsmith import fixtures
from qwlsmith.expr_io import parse_poly
from qwlsmith.groebner import gcd, groebner_basis, is_unit_ideal, reduce, s_polynomial
from qwlsmith.poly_core import GREVLEX, LEX, Polynomial, VariableContext, divide_exact, divides
from qwlsmith.polymatrix import (
    PolyMatrix,
    determinant,
    determinantal_divisors,
    inverse,
    is_unimodular,
    minor_report,
    normal_rank,
    specialize,
)
from qwlsmith.smith import FactorizationWitness, Verdict, decide, phi, phi_inverse, verify_witness

RESULTS = []
CTX2 = VariableContext(["x1", "x2"])
CTX3 = VariableContext(["x1", "x2", "x3"])


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            start = time.perf_counter()
            try:
                detail = fn() or ""
            except BaseException as exc:
                line = f"FAIL criterion {number:2d}: {title} ({type(exc).__name__}: {exc})"
                RESULTS.append(line)
                print(line)
                raise
            elapsed = time.perf_counter() - start
            line = f"PASS criterion {number:2d}: {title} [{elapsed:.2f}s] {detail}".rstrip()
            RESULTS.append(line)
            print(line)
        return run
    return wrap


def rng_for(number):
    return random.Random(SEED * 100 + number)


def reduces_to_zero(f, basis, order):
    return reduce(f, list(basis), order)[0].is_zero()


@criterion(1, "worked example pipeline")
def test_c01_example_pipeline():
    F = fixtures.load("worked")
    P = lambda s: parse_poly(s, F.ctx)
    start = time.perf_counter()
    dec = decide(F)
    elapsed = time.perf_counter() - start
    assert [r.k for r in dec.reports] == [1, 2, 3]
    assert dec.reports[0].d == 1
    assert dec.reports[1].d == P("(x1 - x2)*(x2 - 1)")
    assert dec.reports[1].d.leading_coefficient(GREVLEX) == 1
    assert all(r.unit_ideal for r in dec.reports)
    assert dec.verdict is Verdict.EQUIVALENT
    assert dec.smith_diagonal == [P("1"), P("(x1 - x2)*(x2 - 1)"), P("(x1 - x2)*(x2 - 1)^2")]
    assert elapsed < 5.0, f"took {elapsed:.2f}s"
    return f"decide in {elapsed * 1000:.0f} ms"


@criterion(2, "determinant audit")
def test_c02_determinant_audit():
    F = fixtures.load("worked")
    P = lambda s: parse_poly(s, F.ctx)
    bareiss = determinant(F, "bareiss")
    cofactor = determinant(F, "cofactor")
    assert bareiss == cofactor == leibniz_det(F)
    printed = P("(x1 - x2)*(x2 - 1)^2")
    forced = P("1") * P("(x1 - x2)*(x2 - 1)") * P("(x1 - x2)*(x2 - 1)^2")
    assert forced == P("(x1 - x2)^2*(x2 - 1)^3")
    lead = bareiss.leading_coefficient(LEX)
    assert bareiss == forced.scale(lead) and lead != 0
    assert bareiss.monic(LEX) != printed
    return "det = (x1 - x2)^2*(x2 - 1)^3, not (x1 - x2)*(x2 - 1)^2"


@criterion(3, "witness verification")
def test_c03_witness():
    F = fixtures.load("worked")
    ctx = F.ctx
    U1, U2, U3, F3 = (fixtures.load(f"worked_{n}") for n in ("U1", "U2", "U3", "F3"))
    x1, x2, _ = ctx.gens()
    d1, d2 = x1 - x2, x2 - 1
    # the transcribed chain of row operations
    assert U1 @ F == PolyMatrix.diag(ctx, [1, d2, d2]) @ fixtures.load("worked_F1")
    assert U2 @ fixtures.load("worked_F1") == PolyMatrix.diag(ctx, [1, d1, d1]) @ fixtures.load("worked_F2")
    assert U3 @ fixtures.load("worked_F2") == PolyMatrix.diag(ctx, [1, 1, d2]) @ F3
    # V1^-1 from diag(1,d2,d2) U2^-1 diag(1,d1,d1) U3^-1 diag(1,1,d2) = V1^-1 D
    diagonal = [Polynomial.one(ctx), d1 * d2, d1 * d2 ** 2]
    M = (PolyMatrix.diag(ctx, [1, d2, d2]) @ inverse(U2) @ PolyMatrix.diag(ctx, [1, d1, d1])
         @ inverse(U3) @ PolyMatrix.diag(ctx, [1, 1, d2]))
    V1inv = PolyMatrix([[divide_exact(M[i, j], diagonal[j]) for j in range(3)] for i in range(3)], ctx)
    assert is_unimodular(V1inv)
    assert V1inv == fixtures.load("worked_V1inv")
    D = PolyMatrix.diag(ctx, decide(F).smith_diagonal)
    assert D == PolyMatrix.diag(ctx, diagonal)
    U = inverse(U1) @ V1inv
    assert verify_witness(F, FactorizationWitness(U, D, F3))


@criterion(4, "negative instance diag(x1, x2)")
def test_c04_negative():
    x1, x2 = CTX2.gens()
    dec = decide(PolyMatrix.diag(CTX2, [x1, x2]))
    assert dec.verdict is Verdict.NOT_EQUIVALENT
    gb = groebner_basis(dec.reports[0].generators, LEX)
    assert gb.reduced and gb.generators == (x1, x2)
    # brute force: x1, x2 are monomials so their only S-polynomial vanishes
    assert s_polynomial(x1, x2, LEX).is_zero()


@criterion(5, "Groebner soundness on 100 random ideals")
def test_c05_groebner_soundness():
    rng = rng_for(5)
    start = time.perf_counter()
    for i in range(100):
        ctx = VariableContext(["x1", "x2", "x3"][: rng.randint(1, 3)])
        gens = [random_nonzero_poly(rng, ctx, max_terms=3, max_deg=3) for _ in range(rng.randint(1, 3))]
        order = LEX if i % 2 else GREVLEX
        gb = groebner_basis(gens, order)
        basis = gb.generators
        for a in range(len(basis)):
            for b in range(a + 1, len(basis)):
                assert reduces_to_zero(s_polynomial(basis[a], basis[b], order), basis, order)
        # mutual containment against an independent basis
        syms = sympy.symbols(list(ctx.names))
        theirs = sympy.groebner([as_sympy(g)[0] for g in gens], *syms, order="lex" if order is LEX else "grevlex",
                                 domain="QQ")
        assert all(reduces_to_zero(g, basis, order) for g in gens)
        assert all(theirs.contains(as_sympy(g)[0]) for g in basis)
        for perm in list(permutations(gens))[1:3]:
            assert groebner_basis(list(perm), order).generators == basis
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"took {elapsed:.1f}s"
    return f"100 ideals in {elapsed:.1f}s"


def _coprime(a, b):
    if is_unit_ideal([a, b]):
        return True
    ea, syms = as_sympy(a)
    eb, _ = as_sympy(b)
    return sympy.Poly(sympy.gcd(ea, eb), *syms).is_ground


@criterion(6, "gcd oracle on 100 constructed pairs")
def test_c06_gcd_oracle():
    rng = rng_for(6)
    done = 0
    while done < 100:
        h = random_nonzero_poly(rng, CTX3, max_terms=3, max_deg=2)
        a = random_nonzero_poly(rng, CTX3, max_terms=3, max_deg=2)
        b = random_nonzero_poly(rng, CTX3, max_terms=3, max_deg=2)
        if not _coprime(a, b):
            continue
        assert gcd(h * a, h * b) == h.monic(GREVLEX), (h, a, b)
        done += 1


@criterion(7, "unimodular invariance of d_k and J_k")
def test_c07_invariance():
    rng = rng_for(7)
    for _ in range(25):
        F = random_matrix(rng, CTX2, 3, 3, max_terms=2, max_deg=2)
        r = normal_rank(F)
        base = [minor_report(F, k) for k in range(1, r + 1)]
        for _ in range(5):
            left = random_unimodular(rng, CTX2, 3, length=2, max_terms=2, max_deg=1)
            right = random_unimodular(rng, CTX2, 3, length=2, max_terms=2, max_deg=1)
            G = left @ F @ right
            assert normal_rank(G) == r
            for rep in base:
                other = minor_report(G, rep.k)
                assert other.d == rep.d and other.unit_ideal == rep.unit_ideal


@criterion(8, "reduced minors under x1 = 0")
def test_c08_specialization():
    rng = rng_for(8)
    checked = 0
    for _ in range(25):
        F = random_matrix(rng, CTX2, 3, 3, max_terms=3, max_deg=2)
        S = specialize(F, "x1", 0)
        for k in range(1, normal_rank(S) + 1):
            rep, srep = minor_report(F, k), minor_report(S, k)
            for b, sb in zip(rep.reduced_minors, srep.reduced_minors):
                spec = b.substitute({"x1": 0})
                if sb.is_zero() or spec.is_zero():
                    continue
                assert divides(sb, spec), (F, k)
                checked += 1
    assert checked > 0
    return f"{checked} divisibilities"


@criterion(9, "automorphism round trip and transport")
def test_c09_automorphism():
    rng = rng_for(9)
    for _ in range(50):
        g, h = random_poly(rng, CTX3, max_terms=5, max_deg=3), random_poly(rng, CTX3, max_terms=3)
        f1 = random_poly(rng, CTX3, max_terms=3).substitute({0: 0})
        f2 = random_poly(rng, CTX3, max_terms=3).substitute({0: 0, 1: 0})
        assert phi(phi_inverse(g, f1, f2), f1, f2) == g
        assert phi_inverse(phi(g, f1, f2), f1, f2) == g
        assert phi(g * h, f1, f2) == phi(g, f1, f2) * phi(h, f1, f2)
        assert phi(g + h, f1, f2) == phi(g, f1, f2) + phi(h, f1, f2)
    for _ in range(10):
        F = random_matrix(rng, CTX3, 3, 3, max_terms=2, max_deg=2)
        f1 = random_poly(rng, CTX3, max_terms=2).substitute({0: 0})
        f2 = random_poly(rng, CTX3, max_terms=2).substitute({0: 0, 1: 0})
        G = F.map(lambda e: phi(e, f1, f2))
        for d, e in zip(determinantal_divisors(F), determinantal_divisors(G)):
            assert e == phi(d, f1, f2).monic(GREVLEX)


@criterion(10, "Smith chain on every equivalent fixture")
def test_c10_smith_chain():
    seen = []
    for name in fixtures.names():
        meta = json.loads(fixtures.path(name).read_text()).get("meta", {})
        F = fixtures.load(name)
        if F.is_zero():
            continue
        dec = decide(F)
        assert dec.verdict.value == meta.get("expected_verdict", dec.verdict.value)
        if dec.verdict is not Verdict.EQUIVALENT:
            continue
        seen.append(name)
        phis = dec.smith_diagonal
        for a, b in zip(phis, phis[1:]):
            assert divides(a, b), name
        prod = Polynomial.one(F.ctx)
        for k, (entry, rep) in enumerate(zip(phis, dec.reports), start=1):
            prod = prod * entry
            assert prod == rep.d, (name, k)
    assert "worked" in seen
    return f"{len(seen)} equivalent fixtures"


ALL = [test_c01_example_pipeline, test_c02_determinant_audit, test_c03_witness, test_c04_negative,
       test_c05_groebner_soundness, test_c06_gcd_oracle, test_c07_invariance, test_c08_specialization,
       test_c09_automorphism, test_c10_smith_chain]


if __name__ == "__main__":
    failed = 0
    for test in ALL:
        try:
            test()
        except Exception:
            failed += 1
    sys.exit(1 if failed else 0)
