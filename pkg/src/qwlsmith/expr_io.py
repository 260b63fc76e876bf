"""Polynomial expression parsing/printing and the JSON matrix document.

Grammar::

    expr   := sign? term (('+' | '-') term)*
    term   := factor ('*'? factor)*          # juxtaposition multiplies
    factor := base (('^' | '**') uint)?
    base   := rational | identifier | '(' expr ')'
    rational := uint ('/' uint)?

A leading sign is allowed at the start of any term.  Division is only
legal inside a rational literal such as ``3/4``.

Matrix documents are UTF-8 JSON objects::

    {"variables": ["x1", "x2"], "rows": [["1", "x1*x2"], ["0", "x2 - 1"]],
     "meta": {...}}
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .poly_core import LEX, MonomialOrder, Polynomial, VariableContext
from .polymatrix import PolyMatrix


class ParseError(ValueError):
    def __init__(self, message: str, position: int, source: str = ""):
        self.position = position
        self.source = source
        super().__init__(f"{message} at position {position}" + (f" in {source!r}" if source else ""))


class DocumentError(ValueError):
    """Schema violation in a matrix document."""


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(src: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", pos, src)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("id", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, src: str, ctx: VariableContext):
        self.src = src
        self.ctx = ctx
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok[2], self.src)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        result = self.expr()
        if self.peek()[0] != "end":
            tok = self.peek()
            if tok[1] == "/":
                raise self.error("division is only allowed inside a rational literal")
            raise self.error(f"unexpected token {tok[1]!r}")
        return result

    def expr(self) -> Polynomial:
        acc = self.signed_term()
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.signed_term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def signed_term(self) -> Polynomial:
        negate = False
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            if self.take()[1] == "-":
                negate = not negate
        t = self.term()
        return -t if negate else t

    def _starts_base(self) -> bool:
        kind, text, _ = self.peek()
        return kind in ("num", "id") or (kind == "op" and text == "(")

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text == "*":
                self.take()
                acc = acc * self.factor()
            elif self._starts_base():
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Polynomial:
        base = self.base()
        kind, text, _ = self.peek()
        if kind == "op" and text in ("^", "**"):
            self.take()
            tok = self.take()
            if tok[0] != "num":
                raise self.error("exponent must be a non-negative integer", tok)
            base = base ** int(tok[1])
        return base

    def base(self) -> Polynomial:
        tok = self.take()
        kind, text, _ = tok
        if kind == "num":
            value = Fraction(int(text))
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "num":
                    raise self.error("division is only allowed inside a rational literal", den)
                if int(den[1]) == 0:
                    raise self.error("zero denominator", den)
                value = Fraction(int(text), int(den[1]))
            return Polynomial.constant(self.ctx, value)
        if kind == "id":
            try:
                return Polynomial.var(self.ctx, text)
            except KeyError:
                raise self.error(f"unknown identifier {text!r}", tok) from None
        if kind == "op" and text == "(":
            inner = self.expr()
            close = self.take()
            if close[1] != ")":
                raise self.error("expected ')'", close)
            return inner
        if kind == "end":
            raise self.error("unexpected end of expression", tok)
        raise self.error(f"unexpected token {text!r}", tok)


def parse_poly(src: str, ctx: VariableContext) -> Polynomial:
    """Parse ``src`` as a polynomial over ``ctx``."""
    if not isinstance(src, str):
        raise TypeError("expression must be a string")
    return _Parser(src, ctx).parse()


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_monomial(mono, names) -> str:
    parts = []
    for name, e in zip(names, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def print_poly(f: Polynomial, order: MonomialOrder = LEX) -> str:
    """Canonical text: descending terms, ``*`` products, ``^`` powers."""
    if f.is_zero():
        return "0"
    names = f.ctx.names
    out = []
    for idx, (mono, c) in enumerate(f.sorted_terms(order)):
        negative = c < 0
        mag = -c if negative else c
        body = _format_monomial(mono, names)
        if not body:
            text = _format_coeff(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{_format_coeff(mag)}*{body}"
        if idx == 0:
            out.append(f"-{text}" if negative else text)
        else:
            out.append(f"- {text}" if negative else f"+ {text}")
    return " ".join(out)


def print_set(polys: Sequence[Polynomial], order: MonomialOrder = LEX) -> str:
    return "{" + ", ".join(print_poly(p, order) for p in polys) + "}"


def parse_set(src: str, ctx: VariableContext) -> List[Polynomial]:
    """Parse ``{p1, p2, ...}`` (braces optional; commas or newlines separate)."""
    body = src.strip()
    if body.startswith("{"):
        if not body.endswith("}"):
            raise ParseError("unbalanced braces", len(src), src)
        body = body[1:-1]
    items = [s.strip() for s in re.split(r"[,\n;]", body)]
    return [parse_poly(s, ctx) for s in items if s]


_NATURAL = re.compile(r"(\d+)")


def infer_variables(sources: Sequence[str]) -> List[str]:
    """Identifiers used in ``sources``, naturally sorted (x2 before x10)."""
    names = set()
    for s in sources:
        names.update(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", s))
    return sorted(names, key=lambda n: [int(p) if p.isdigit() else p for p in _NATURAL.split(n)])


@dataclass
class MatrixDocument:
    variables: List[str]
    rows: List[List[str]]
    meta: Dict[str, Any] = field(default_factory=dict)

    def context(self) -> VariableContext:
        return VariableContext(self.variables)

    def to_matrix(self) -> PolyMatrix:
        ctx = self.context()
        grid = []
        for i, row in enumerate(self.rows):
            cells = []
            for j, src in enumerate(row):
                try:
                    cells.append(parse_poly(src, ctx))
                except ParseError as exc:
                    raise DocumentError(f"rows[{i}][{j}]: {exc}") from exc
            grid.append(cells)
        return PolyMatrix(grid, ctx)

    @classmethod
    def from_matrix(cls, F: PolyMatrix, meta: Optional[Dict[str, Any]] = None,
                    order: MonomialOrder = LEX) -> "MatrixDocument":
        rows = [[print_poly(e, order) for e in row] for row in F.entries]
        return cls(list(F.ctx.names), rows, dict(meta or {}))

    def dumps(self) -> str:
        """JSON text with one matrix row per line."""
        enc = lambda obj: json.dumps(obj, ensure_ascii=False)
        lines = ["{", f'  "variables": {enc(self.variables)},', '  "rows": [']
        lines += [f"    {enc(row)}," for row in self.rows]
        lines[-1] = lines[-1].rstrip(",")
        if self.meta:
            meta = json.dumps(self.meta, indent=2, ensure_ascii=False).replace("\n", "\n  ")
            lines += ["  ],", f'  "meta": {meta}']
        else:
            lines.append("  ]")
        lines.append("}")
        return "\n".join(lines) + "\n"


def load_document(doc: Union[bytes, str]) -> MatrixDocument:
    if isinstance(doc, bytes):
        doc = doc.decode("utf-8")
    try:
        data = json.loads(doc)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise DocumentError("document must be a JSON object")
    unknown = set(data) - {"variables", "rows", "meta"}
    if unknown:
        raise DocumentError(f"unknown keys {sorted(unknown)}")
    variables = data.get("variables")
    if not isinstance(variables, list) or not variables or not all(isinstance(v, str) for v in variables):
        raise DocumentError("'variables' must be a nonempty array of strings")
    if len(set(variables)) != len(variables):
        raise DocumentError("'variables' contains duplicates")
    rows = data.get("rows")
    if not isinstance(rows, list) or not rows:
        raise DocumentError("'rows' must be a nonempty array of arrays")
    width = None
    for i, row in enumerate(rows):
        if not isinstance(row, list) or not row:
            raise DocumentError(f"rows[{i}] must be a nonempty array")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DocumentError(f"rows[{i}] has {len(row)} entries, expected {width}")
        for j, cell in enumerate(row):
            if not isinstance(cell, str):
                raise DocumentError(f"rows[{i}][{j}] must be a string")
    meta = data.get("meta", {})
    if not isinstance(meta, dict):
        raise DocumentError("'meta' must be an object")
    return MatrixDocument(list(variables), [list(r) for r in rows], meta)


def read_matrix(doc: Union[bytes, str]) -> PolyMatrix:
    return load_document(doc).to_matrix()


def write_matrix(F: PolyMatrix, meta: Optional[Dict[str, Any]] = None) -> bytes:
    return MatrixDocument.from_matrix(F, meta).dumps().encode("utf-8")
