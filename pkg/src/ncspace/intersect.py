"""Commutative Groebner bases (degrevlex), quotient dimensions and
intersection numbers of central divisors."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DegenerateInput, NotZeroDimensional, ParseError, ResourceExhausted
from .exactfield import FieldSpec, Scalar

Monomial = tuple[int, ...]
MAX_PAIRS = 10**5
MAX_VARIABLES = 8


def degrevlex_key(m: Monomial):
    return (sum(m), tuple(-e for e in reversed(m)))


class CommutativePoly:
    """Polynomial in named commuting variables; terms map exponent tuples to
    nonzero Scalars."""

    __slots__ = ("field", "vars", "terms")

    def __init__(self, field: FieldSpec, variables: Sequence[str], terms: dict | None = None):
        self.field = field
        self.vars = tuple(variables)
        self.terms: dict[Monomial, Scalar] = {}
        for m, c in (terms or {}).items():
            c = field(c)
            if c:
                self.terms[tuple(m)] = c

    def _new(self, terms):
        p = CommutativePoly.__new__(CommutativePoly)
        p.field, p.vars, p.terms = self.field, self.vars, terms
        return p

    @classmethod
    def variable(cls, field, variables, name):
        variables = tuple(variables)
        e = tuple(1 if v == name else 0 for v in variables)
        return cls(field, variables, {e: 1})

    @classmethod
    def constant(cls, field, variables, c):
        return cls(field, variables, {(0,) * len(variables): c})

    def _lift(self, o):
        if isinstance(o, CommutativePoly):
            return o
        return CommutativePoly.constant(self.field, self.vars, o)

    def __add__(self, o):
        o = self._lift(o)
        out = dict(self.terms)
        for m, c in o.terms.items():
            v = out.get(m)
            nv = c if v is None else v + c
            if nv:
                out[m] = nv
            else:
                out.pop(m, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        out: dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return self._new({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out = CommutativePoly.constant(self.field, self.vars, 1)
        for _ in range(e):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, o):
        if not isinstance(o, CommutativePoly):
            return NotImplemented
        return self.vars == o.vars and self.terms == o.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def leading(self) -> tuple[Monomial, Scalar]:
        m = max(self.terms, key=degrevlex_key)
        return m, self.terms[m]

    def monic(self) -> "CommutativePoly":
        _, c = self.leading()
        inv = c.inverse()
        return self._new({m: v * inv for m, v in self.terms.items()})

    def shift(self, mono: Monomial, c: Scalar) -> "CommutativePoly":
        return self._new({tuple(a + b for a, b in zip(m, mono)): v * c for m, v in self.terms.items()})

    def format(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for m, c in sorted(self.terms.items(), key=lambda kv: degrevlex_key(kv[0]), reverse=True):
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, m) if e)
            text = c.format()
            if c.is_rational():
                neg = text.startswith("-")
                mag = text[1:] if neg else text
            else:
                neg, mag = False, f"({text})"
            body = mag if not mono else (mono if mag == "1" else f"{mag}*{mono}")
            out += (("-" if neg else "") if not out else (" - " if neg else " + ")) + body
        return out

    __str__ = format

    def __repr__(self):
        return f"CommutativePoly({self.format()})"


def parse_commutative(text: str, field: FieldSpec, variables: Sequence[str]) -> CommutativePoly:
    from .presentation.parser import evaluate_ast, parse_expression

    variables = tuple(variables)
    consts = field.constants()

    def leaf(tok):
        if tok.text in variables:
            return CommutativePoly.variable(field, variables, tok.text)
        if tok.text in consts:
            return CommutativePoly.constant(field, variables, consts[tok.text])
        raise ParseError(f"unknown variable or constant {tok.text!r}", tok.line, tok.col)

    def divide(a, b, tok):
        if not b.is_constant() or not b:
            raise ParseError("can only divide by a nonzero scalar", tok.line, tok.col)
        return a * b.terms[(0,) * len(variables)].inverse()

    return evaluate_ast(
        parse_expression(text), leaf, lambda n: CommutativePoly.constant(field, variables, n), divide
    )


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def reduce(f: CommutativePoly, basis: Sequence[CommutativePoly]) -> CommutativePoly:
    """Full normal form of f modulo basis (remainder of multivariate division)."""
    leads = [(g.leading(), g) for g in basis if g]
    rem = f._new({})
    p = f
    while p:
        m, c = p.leading()
        for (lm, lc), g in leads:
            if _divides(lm, m):
                q = tuple(a - b for a, b in zip(m, lm))
                p = p - g.shift(q, c / lc)
                break
        else:
            rem = rem + f._new({m: c})
            p = p - f._new({m: c})
    return rem


def _spoly(f: CommutativePoly, g: CommutativePoly) -> CommutativePoly:
    (mf, cf), (mg, cg) = f.leading(), g.leading()
    lcm = tuple(max(a, b) for a, b in zip(mf, mg))
    return f.shift(tuple(a - b for a, b in zip(lcm, mf)), cf.inverse()) - g.shift(
        tuple(a - b for a, b in zip(lcm, mg)), cg.inverse()
    )


def buchberger(generators: Iterable[CommutativePoly]) -> list[CommutativePoly]:
    """Reduced Groebner basis under degrevlex, sorted by leading monomial."""
    G = [g.monic() for g in generators if g]
    if not G:
        return []
    if len(G[0].vars) > MAX_VARIABLES:
        raise ResourceExhausted(f"more than {MAX_VARIABLES} variables")
    pairs = [(i, j) for i in range(len(G)) for j in range(i)]
    processed = 0
    while pairs:
        if len(pairs) > MAX_PAIRS:
            raise ResourceExhausted("Buchberger pair queue exceeded its limit")
        i, j = pairs.pop()
        processed += 1
        mi, mj = G[i].leading()[0], G[j].leading()[0]
        if all(a == 0 or b == 0 for a, b in zip(mi, mj)):
            continue  # coprime leading monomials: S-polynomial reduces to 0
        r = reduce(_spoly(G[i], G[j]), G)
        if r:
            G.append(r.monic())
            k = len(G) - 1
            pairs.extend((k, t) for t in range(k))
    return _interreduce(G)


def _interreduce(G: list[CommutativePoly]) -> list[CommutativePoly]:
    # drop redundant leading terms, then fully reduce each element by the rest
    G = sorted(G, key=lambda g: degrevlex_key(g.leading()[0]))
    minimal: list[CommutativePoly] = []
    for g in G:
        lm = g.leading()[0]
        if not any(_divides(h.leading()[0], lm) for h in minimal):
            minimal = [h for h in minimal if not _divides(lm, h.leading()[0])]
            minimal.append(g)
    out = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        r = reduce(g, others)
        out.append(r.monic())
    return sorted(out, key=lambda g: degrevlex_key(g.leading()[0]))


def quotient_dimension(gb: Sequence[CommutativePoly], nvars: int | None = None) -> float | int:
    """Number of standard monomials, or ``math.inf`` for an unbounded staircase."""
    if not gb:
        if nvars == 0:
            return 1
        return math.inf
    n = len(gb[0].vars)
    leads = [g.leading()[0] for g in gb]
    if any(not any(m) for m in leads):
        return 0
    bounds = []
    for v in range(n):
        pure = [m[v] for m in leads if m[v] > 0 and all(e == 0 for k, e in enumerate(m) if k != v)]
        if not pure:
            return math.inf
        bounds.append(min(pure))
    count = 0
    for mono in itertools.product(*(range(b) for b in bounds)):
        if not any(_divides(m, mono) for m in leads):
            count += 1
    return count


@dataclass(frozen=True)
class CentralDivisor:
    label: str
    ideal: tuple[CommutativePoly, ...]


def make_divisor(label: str, generators: Sequence[CommutativePoly]) -> CentralDivisor:
    gb = buchberger(generators)
    return CentralDivisor(label, tuple(gb))


def intersection_number(
    D: CentralDivisor,
    E: CentralDivisor,
    algebra_rank_over_centre: int,
    centre_relations: Sequence[CommutativePoly] = (),
) -> int:
    """rank * dim_k of the quotient by I_D + I_E + the centre's relations."""
    if algebra_rank_over_centre <= 0:
        raise DegenerateInput("the algebra rank over its centre must be positive")
    gb = buchberger(list(D.ideal) + list(E.ideal) + list(centre_relations))
    q = quotient_dimension(gb)
    if q == math.inf:
        raise NotZeroDimensional(f"{D.label} and {E.label} do not meet in finitely many points")
    return algebra_rank_over_centre * int(q)
