"""Noncommutative polynomials over an exact field."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from ..errors import FieldMismatch, ShapeError, UnboundGenerator
from ..exactfield import ExactMatrix, FieldSpec, Scalar

Word = tuple[int, ...]


def word_key(w: Word):
    """Degree-lex order on words."""
    return (len(w), w)


class NcPolynomial:
    """Finite sum of scalar multiples of words in the generator alphabet.

    Args:
        field: coefficient field.
        gens: ordered generator names; words index into this tuple.
        terms: word -> coefficient. Zero coefficients are dropped.
    """

    __slots__ = ("field", "gens", "terms")

    def __init__(self, field: FieldSpec, gens: Sequence[str], terms: Mapping[Word, object] | None = None):
        self.field = field
        self.gens = tuple(gens)
        clean: dict[Word, Scalar] = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            if any(not 0 <= i < len(self.gens) for i in w):
                raise ValueError(f"word {w} uses an index outside the alphabet")
            c = field(c)
            if c:
                clean[w] = c
        self.terms = clean

    @classmethod
    def constant(cls, field, gens, c) -> "NcPolynomial":
        return cls(field, gens, {(): c})

    @classmethod
    def generator(cls, field, gens, name: str) -> "NcPolynomial":
        gens = tuple(gens)
        return cls(field, gens, {(gens.index(name),): 1})

    @classmethod
    def from_words(cls, field, gens, pairs) -> "NcPolynomial":
        """Build from ``[(coefficient, [names...]), ...]``."""
        gens = tuple(gens)
        out = cls(field, gens)
        for c, names in pairs:
            out = out + cls(field, gens, {tuple(gens.index(n) for n in names): c})
        return out

    def _lift(self, other) -> "NcPolynomial | None":
        if isinstance(other, NcPolynomial):
            if other.field != self.field:
                raise FieldMismatch("polynomials over different fields")
            if other.gens != self.gens:
                raise ValueError("polynomials over different alphabets")
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return NcPolynomial.constant(self.field, self.gens, other)
        return None

    def _combine(self, other, sign: int) -> "NcPolynomial":
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w)
            nv = (c if sign > 0 else -c) if v is None else (v + c if sign > 0 else v - c)
            if nv:
                out[w] = nv
            else:
                out.pop(w, None)
        return self._raw(out)

    def _raw(self, terms: dict) -> "NcPolynomial":
        p = NcPolynomial.__new__(NcPolynomial)
        p.field = self.field
        p.gens = self.gens
        p.terms = terms
        return p

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else self._combine(o, 1)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else self._combine(o, -1)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else o._combine(self, -1)

    def __neg__(self):
        return self._raw({w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out: dict[Word, Scalar] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in o.terms.items():
                w = w1 + w2
                v = out.get(w)
                out[w] = c1 * c2 if v is None else v + c1 * c2
        return self._raw({w: c for w, c in out.items() if c})

    def __rmul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else o * self

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("polynomials only take nonnegative integer powers")
        result = NcPolynomial.constant(self.field, self.gens, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, NcPolynomial):
            return self.field == other.field and self.gens == other.gens and self.terms == other.terms
        o = self._lift(other)
        return NotImplemented if o is None else self == o

    def __hash__(self):
        return hash((self.gens, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(len(w) == 0 for w in self.terms)

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms.get((), self.field.zero)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def generators_used(self) -> set[str]:
        return {self.gens[i] for w in self.terms for i in w}

    def sorted_terms(self) -> list[tuple[Word, Scalar]]:
        """Terms in descending degree-lex order (leading term first)."""
        return sorted(self.terms.items(), key=lambda kv: word_key(kv[0]), reverse=True)

    def with_gens(self, gens: Sequence[str]) -> "NcPolynomial":
        """Re-express over a larger alphabet containing the current one."""
        gens = tuple(gens)
        remap = [gens.index(g) for g in self.gens]
        return NcPolynomial(self.field, gens, {tuple(remap[i] for i in w): c for w, c in self.terms.items()})

    def map_coefficients(self, fn, field: FieldSpec) -> "NcPolynomial":
        return NcPolynomial(field, self.gens, {w: fn(c) for w, c in self.terms.items()})

    def format(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for i, (w, c) in enumerate(self.sorted_terms()):
            mono = "*".join(self.gens[k] for k in w)
            sign, body = _format_coeff(c, mono)
            if i == 0:
                out = ("-" if sign == "-" else "") + body
            else:
                out += f" {sign} {body}"
        return out

    __str__ = format

    def __repr__(self):
        return f"NcPolynomial({self.format()})"

    def evaluate(self, assignment: Mapping[str, ExactMatrix], n: int, cache: dict | None = None) -> ExactMatrix:
        """Substitute matrices for generators; the empty word maps to the identity."""
        missing = sorted(self.generators_used() - set(assignment))
        if missing:
            raise UnboundGenerator(f"no matrix for generator(s) {', '.join(missing)}")
        for g in self.generators_used():
            if assignment[g].shape != (n, n):
                raise ShapeError(f"matrix for {g} is not {n}x{n}")
        cache = {} if cache is None else cache
        mats = [assignment.get(g) for g in self.gens]
        total = ExactMatrix.zeros(self.field, n)
        for w, c in self.terms.items():
            total = total + word_matrix(self.field, mats, w, n, cache).scale(c)
        return total


def _format_coeff(c: Scalar, mono: str) -> tuple[str, str]:
    if c.is_rational():
        v = c.c[0]
        p = c.field.p
        if p and p > 2 and v > p // 2:
            v = v - p
        neg = v < 0
        mag = -v if neg else v
        if not mono:
            return ("-" if neg else "+"), str(mag)
        if mag == 1:
            return ("-" if neg else "+"), mono
        return ("-" if neg else "+"), f"{mag}*{mono}"
    text = c.format()
    return "+", f"({text})" + (f"*{mono}" if mono else "")


def word_matrix(field: FieldSpec, mats: Sequence[ExactMatrix | None], w: Word, n: int, cache: dict) -> ExactMatrix:
    """Product mats[w0] @ mats[w1] @ ..., with every prefix memoised in ``cache``."""
    hit = cache.get(w)
    if hit is not None:
        return hit
    if not w:
        m = ExactMatrix.identity(field, n)
    elif len(w) == 1:
        m = mats[w[0]]
        if m is None:
            raise UnboundGenerator(f"no matrix for generator index {w[0]}")
    else:
        m = word_matrix(field, mats, w[:-1], n, cache) @ word_matrix(field, mats, w[-1:], n, cache)
    cache[w] = m
    return m
