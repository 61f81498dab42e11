"""Recursive-descent parser for ``.ncs`` sources.

Grammar (``#`` starts a line comment)::

    file        := field_decl algebra_decl module_decl*
    field_decl  := "field" kind params ("bind" NAME "root_of" int_poly)* ";"
    algebra_decl:= "algebra" NAME "{" "gens" names ";" ("central" names ";")?
                   ("rel" expr ";" | "zelt" NAME "=" expr ";")* "}"
    module_decl := "module" NAME "dim" INT "{" (NAME "=" matrix ";")+ "}"
    matrix      := "[" row ("," row)* "]";  row := "[" expr ("," expr)* "]"

Expressions use ``+ - * / ^`` and parentheses over integer literals,
generator names and bound constants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from ..errors import ConstantUnresolvable, ParseError, ShapeError, UnknownGenerator
from ..exactfield import FieldSpec, Scalar
from .algebra import AlgebraPresentation
from .ncpoly import NcPolynomial

KEYWORDS = {"bind", "root_of", "field", "algebra", "gens", "central", "rel", "zelt", "module", "dim"}
FIELD_KINDS = {"Q", "Fp", "Qext", "Fpext"}

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<sym>[-+*/^(){}\[\],;=])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "sym", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("int", "name", "sym"):
            toks.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(Token("eof", "", line, pos - line_start + 1))
    return toks


# ----------------------------------------------------------------------------
# expression AST: ("int", n) | ("name", tok) | (op, a, b) | ("neg", a) | ("pow", a, e)

class _Stream:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.cur
        return t.kind in ("sym", "name") and t.text == text

    def expect(self, text: str) -> Token:
        t = self.cur
        if not self.at(text):
            found = t.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", t.line, t.col)
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        t = self.cur
        if t.kind != kind or (kind == "name" and t.text in KEYWORDS):
            found = t.text or "end of input"
            raise ParseError(f"expected {what}, found {found!r}", t.line, t.col)
        return self.next()

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.cur.line, self.cur.col)


def parse_expr(s: _Stream):
    node = _parse_term(s)
    while s.at("+") or s.at("-"):
        op = "add" if s.next().text == "+" else "sub"
        node = (op, node, _parse_term(s))
    return node


def _parse_term(s: _Stream):
    node = _parse_unary(s)
    while s.at("*") or s.at("/"):
        tok = s.next()
        node = ("mul" if tok.text == "*" else "div", node, _parse_unary(s), tok)
    return node


def _parse_unary(s: _Stream):
    if s.at("-"):
        s.next()
        return ("neg", _parse_unary(s))
    if s.at("+"):
        s.next()
        return _parse_unary(s)
    return _parse_power(s)


def _parse_power(s: _Stream):
    base = _parse_atom(s)
    if s.at("^"):
        tok = s.next()
        neg = False
        if s.at("-"):
            s.next()
            neg = True
        e = int(s.expect_kind("int", "integer exponent").text)
        return ("pow", base, -e if neg else e, tok)
    return base


def _parse_atom(s: _Stream):
    t = s.cur
    if t.kind == "int":
        s.next()
        return ("int", int(t.text))
    if t.kind == "name" and t.text not in KEYWORDS:
        s.next()
        return ("name", t)
    if s.at("("):
        s.next()
        node = parse_expr(s)
        s.expect(")")
        return node
    found = t.text or "end of input"
    raise ParseError(f"expected an expression, found {found!r}", t.line, t.col)


def evaluate_ast(node, leaf: Callable, lift: Callable, divide: Callable):
    """Fold an expression tree into any ring.

    ``leaf(token)`` resolves a name, ``lift(int)`` embeds an integer and
    ``divide(a, b, token)`` performs (or rejects) a division.
    """
    kind = node[0]
    if kind == "int":
        return lift(node[1])
    if kind == "name":
        return leaf(node[1])
    if kind == "neg":
        return -evaluate_ast(node[1], leaf, lift, divide)
    if kind == "pow":
        base = evaluate_ast(node[1], leaf, lift, divide)
        e = node[2]
        if e < 0:
            return divide(lift(1), base ** (-e), node[3])
        return base**e
    a = evaluate_ast(node[1], leaf, lift, divide)
    b = evaluate_ast(node[2], leaf, lift, divide)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return divide(a, b, node[3])
    raise AssertionError(kind)


# ----------------------------------------------------------------------------
# evaluation targets

class _UniPoly:
    """Tiny univariate integer polynomial ring used for field declarations."""

    __slots__ = ("c",)

    def __init__(self, c):
        c = list(c)
        while c and c[-1] == 0:
            c.pop()
        self.c = c

    def __add__(self, o):
        n = max(len(self.c), len(o.c))
        return _UniPoly([(self.c[i] if i < len(self.c) else 0) + (o.c[i] if i < len(o.c) else 0) for i in range(n)])

    def __neg__(self):
        return _UniPoly([-a for a in self.c])

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if not self.c or not o.c:
            return _UniPoly([])
        out = [0] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            for j, b in enumerate(o.c):
                out[i + j] += a * b
        return _UniPoly(out)

    def __pow__(self, e):
        out = _UniPoly([1])
        for _ in range(e):
            out = out * self
        return out


def int_poly_from_ast(node) -> list[int]:
    var: list[str] = []

    def leaf(tok: Token):
        if var and var[0] != tok.text:
            raise ParseError("an integer polynomial may use only one variable", tok.line, tok.col)
        var.append(tok.text)
        return _UniPoly([0, 1])

    def divide(a, b, tok):
        raise ParseError("division is not allowed in an integer polynomial", tok.line, tok.col)

    return evaluate_ast(node, leaf, lambda n: _UniPoly([n]), divide).c


def scalar_from_ast(node, field: FieldSpec) -> Scalar:
    consts = field.constants()

    def leaf(tok: Token):
        if tok.text not in consts:
            raise ParseError(f"unknown constant {tok.text!r}", tok.line, tok.col)
        return consts[tok.text]

    def divide(a, b, tok):
        if not b:
            raise ParseError("division by zero", tok.line, tok.col)
        return a / b

    return evaluate_ast(node, leaf, field, divide)


def nc_from_ast(node, field: FieldSpec, gens: tuple[str, ...]) -> NcPolynomial:
    consts = field.constants()

    def leaf(tok: Token):
        if tok.text in gens:
            return NcPolynomial.generator(field, gens, tok.text)
        if tok.text in consts:
            return NcPolynomial.constant(field, gens, consts[tok.text])
        raise UnknownGenerator(f"unknown generator or constant {tok.text!r}", tok.line, tok.col)

    def divide(a, b, tok):
        if not b.is_constant() or not b:
            raise ParseError("can only divide by a nonzero scalar", tok.line, tok.col)
        return a * NcPolynomial.constant(field, gens, b.constant_value().inverse())

    return evaluate_ast(node, leaf, lambda n: NcPolynomial.constant(field, gens, n), divide)


# ----------------------------------------------------------------------------
# declarations

def _parse_field(s: _Stream) -> FieldSpec:
    s.expect("field")
    kind_tok = s.expect_kind("name", "field kind")
    kind = kind_tok.text
    if kind not in FIELD_KINDS:
        raise ParseError(f"unknown field kind {kind!r} (expected one of Q, Fp, Qext, Fpext)", kind_tok.line, kind_tok.col)
    p = 0
    ext = None
    if kind in ("Fp", "Fpext"):
        p = int(s.expect_kind("int", "a prime").text)
    if kind in ("Qext", "Fpext"):
        ext = int_poly_from_ast(parse_expr(s))
    binds: list[tuple[Token, list[int]]] = []
    while s.at("bind"):
        s.next()
        name_tok = s.expect_kind("name", "constant name")
        s.expect("root_of")
        binds.append((name_tok, int_poly_from_ast(parse_expr(s))))
    s.expect(";")
    try:
        field = FieldSpec(p, ext)
    except ParseError:
        raise
    except Exception as exc:  # invalid characteristic, reducible modulus, etc.
        raise ParseError(str(exc), kind_tok.line, kind_tok.col) from exc
    bindings: dict[str, list[int]] = {}
    for tok, poly in binds:
        if tok.text in bindings or (field.extension and tok.text == field.gen_name):
            raise ParseError(f"constant {tok.text!r} bound twice", tok.line, tok.col)
        bindings[tok.text] = poly
        try:
            FieldSpec(p, ext, {tok.text: poly})
        except ConstantUnresolvable as exc:
            raise ConstantUnresolvable(str(exc), tok.line, tok.col) from exc
    return FieldSpec(p, ext, bindings) if bindings else field


def _parse_names(s: _Stream) -> list[Token]:
    names = [s.expect_kind("name", "a name")]
    while s.at(","):
        s.next()
        names.append(s.expect_kind("name", "a name"))
    return names


def _parse_algebra(s: _Stream, field: FieldSpec) -> AlgebraPresentation:
    s.expect("algebra")
    name = s.expect_kind("name", "algebra name").text
    s.expect("{")
    s.expect("gens")
    gen_toks = _parse_names(s)
    s.expect(";")
    consts = field.constants()
    seen: set[str] = set()
    for tok in gen_toks:
        if tok.text in consts:
            raise ParseError(f"generator {tok.text!r} clashes with a field constant", tok.line, tok.col)
        if tok.text in seen:
            raise ParseError(f"duplicate generator {tok.text!r}", tok.line, tok.col)
        seen.add(tok.text)
    gens = tuple(t.text for t in gen_toks)
    central: list[str] = []
    if s.at("central"):
        s.next()
        for tok in _parse_names(s):
            if tok.text not in gens:
                raise UnknownGenerator(f"central name {tok.text!r} is not a generator", tok.line, tok.col)
            central.append(tok.text)
        s.expect(";")
    rels: list[NcPolynomial] = []
    zelts: dict[str, NcPolynomial] = {}
    while not s.at("}"):
        if s.at("rel"):
            s.next()
            rels.append(nc_from_ast(parse_expr(s), field, gens))
            s.expect(";")
        elif s.at("zelt"):
            s.next()
            ztok = s.expect_kind("name", "central element name")
            if ztok.text in zelts:
                raise ParseError(f"central element {ztok.text!r} defined twice", ztok.line, ztok.col)
            s.expect("=")
            zelts[ztok.text] = nc_from_ast(parse_expr(s), field, gens)
            s.expect(";")
        else:
            raise s.error(f"expected 'rel', 'zelt' or '}}', found {s.cur.text or 'end of input'!r}")
    s.expect("}")
    return AlgebraPresentation(field, gens, rels, central, zelts, name)


def _parse_matrix(s: _Stream, field: FieldSpec) -> tuple[list[list[Scalar]], Token]:
    start = s.expect("[")
    rows = []
    while True:
        s.expect("[")
        row = [scalar_from_ast(parse_expr(s), field)]
        while s.at(","):
            s.next()
            row.append(scalar_from_ast(parse_expr(s), field))
        s.expect("]")
        rows.append(row)
        if not s.at(","):
            break
        s.next()
    s.expect("]")
    return rows, start


def _parse_module(s: _Stream, alg: AlgebraPresentation, strict: bool):
    from ..repmod import Representation

    s.expect("module")
    label_tok = s.expect_kind("name", "module name")
    s.expect("dim")
    dim_tok = s.expect_kind("int", "module dimension")
    n = int(dim_tok.text)
    s.expect("{")
    mats: dict[str, list[list[Scalar]]] = {}
    while not s.at("}"):
        gtok = s.expect_kind("name", "generator name")
        if gtok.text not in alg.gens:
            raise UnknownGenerator(f"module assigns unknown generator {gtok.text!r}", gtok.line, gtok.col)
        if gtok.text in mats:
            raise ParseError(f"generator {gtok.text!r} assigned twice", gtok.line, gtok.col)
        s.expect("=")
        rows, mtok = _parse_matrix(s, alg.field)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ShapeError(
                f"line {mtok.line}, column {mtok.col}: matrix for {gtok.text!r} in module "
                f"{label_tok.text!r} is not {n}x{n}"
            )
        mats[gtok.text] = rows
        s.expect(";")
    s.expect("}")
    return label_tok, Representation(alg, n, mats, label_tok.text, check=strict)


def parse(text: str, strict: bool = True):
    """Parse a source into ``(AlgebraPresentation, {label: Representation})``.

    With ``strict`` every module is validated against the relations and the
    first invalid one raises :class:`RelationViolation`.
    """
    s = _Stream(tokenize(text))
    field = _parse_field(s)
    alg = _parse_algebra(s, field)
    modules = {}
    while s.cur.kind != "eof":
        tok, rep = _parse_module(s, alg, strict)
        if tok.text in modules:
            raise ParseError(f"module {tok.text!r} defined twice", tok.line, tok.col)
        modules[tok.text] = rep
    return alg, modules


def parse_field(text: str) -> FieldSpec:
    """Parse a field declaration such as ``Qext x^2-2`` (the leading
    ``field`` keyword and trailing ``;`` are optional)."""
    body = text.strip().rstrip(";")
    if not body.startswith("field"):
        body = "field " + body
    s = _Stream(tokenize(body + ";"))
    field = _parse_field(s)
    if s.cur.kind != "eof":
        raise s.error("trailing input after field declaration")
    return field


def parse_expression(text: str):
    s = _Stream(tokenize(text))
    node = parse_expr(s)
    if s.cur.kind != "eof":
        raise s.error(f"unexpected {s.cur.text!r}")
    return node


def parse_scalar(text: str, field: FieldSpec) -> Scalar:
    return scalar_from_ast(parse_expression(text), field)


def parse_ncpoly(text: str, alg: AlgebraPresentation) -> NcPolynomial:
    return nc_from_ast(parse_expression(text), alg.field, alg.gens)


__all__ = [
    "evaluate_ast",
    "parse",
    "parse_expression",
    "parse_field",
    "parse_ncpoly",
    "parse_scalar",
    "tokenize",
]
