"""Finitely presented algebras and the cyclic crossed-product constructor."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from ..errors import InvalidAction, ParseError
from ..exactfield import FieldSpec, Scalar
from .ncpoly import NcPolynomial


def commutator(field: FieldSpec, gens: Sequence[str], a: str, b: str) -> NcPolynomial:
    return NcPolynomial.from_words(field, gens, [(1, [a, b]), (-1, [b, a])])


class AlgebraPresentation:
    """Generators, relations (each equal to zero) and named central elements.

    For every generator declared central, the commutators with all other
    generators are appended to the relations unless already present (up to
    sign), so downstream computations always see the full relation ideal.
    """

    def __init__(
        self,
        field: FieldSpec,
        gens: Sequence[str],
        relations: Sequence[NcPolynomial] = (),
        central: Sequence[str] = (),
        central_elements: Mapping[str, NcPolynomial] | None = None,
        name: str = "A",
    ):
        self.field = field
        self.gens = tuple(gens)
        if len(set(self.gens)) != len(self.gens):
            raise ParseError("duplicate generator names")
        if not self.gens:
            raise ParseError("an algebra needs at least one generator")
        unknown = [c for c in central if c not in self.gens]
        if unknown:
            raise ParseError(f"central names {unknown} are not generators")
        self.central = tuple(central)
        self.name = name
        rels = [self._adopt(r) for r in relations]
        for c in self.central:
            for g in self.gens:
                if g == c:
                    continue
                comm = commutator(field, self.gens, c, g)
                if not any(r == comm or r == -comm for r in rels):
                    rels.append(comm)
        self.relations: tuple[NcPolynomial, ...] = tuple(rels)
        self.central_elements: dict[str, NcPolynomial] = {
            k: self._adopt(v) for k, v in (central_elements or {}).items()
        }

    def _adopt(self, p: NcPolynomial) -> NcPolynomial:
        if p.field != self.field:
            raise ValueError("relation over a different field")
        if p.gens != self.gens:
            extra = set(p.gens) - set(self.gens)
            if extra:
                raise ParseError(f"relation uses unknown generators {sorted(extra)}")
            p = p.with_gens(self.gens)
        return p

    def poly(self, pairs) -> NcPolynomial:
        return NcPolynomial.from_words(self.field, self.gens, pairs)

    def gen(self, name: str) -> NcPolynomial:
        return NcPolynomial.generator(self.field, self.gens, name)

    def __eq__(self, other):
        if not isinstance(other, AlgebraPresentation):
            return NotImplemented
        return (
            self.field == other.field
            and self.gens == other.gens
            and self.central == other.central
            and self.relations == other.relations
            and self.central_elements == other.central_elements
        )

    def __hash__(self):
        return hash((self.field, self.gens, self.relations))

    def compatible(self, other: "AlgebraPresentation") -> bool:
        return self is other or self == other

    def with_field(self, field: FieldSpec, coeff_map) -> "AlgebraPresentation":
        """Same presentation with every coefficient pushed through ``coeff_map``."""
        return AlgebraPresentation(
            field,
            self.gens,
            [r.map_coefficients(coeff_map, field) for r in self.relations],
            self.central,
            {k: v.map_coefficients(coeff_map, field) for k, v in self.central_elements.items()},
            self.name,
        )

    def __repr__(self):
        return f"AlgebraPresentation({self.name}: gens={list(self.gens)}, {len(self.relations)} relations)"


@dataclass(frozen=True)
class GroupActionSpec:
    """Diagonal action of a cyclic group of order ``order`` on commuting variables.

    ``action`` maps each base generator to the multiplier m with
    sigma(x) = m * x.
    """

    field: FieldSpec
    base: tuple[str, ...]
    group_gen: str
    order: int
    action: Mapping[str, object] = dc_field(default_factory=dict)


def crossed_product(g: GroupActionSpec, name: str = "A") -> AlgebraPresentation:
    """Relations sigma*x - m_x*x*sigma, sigma^N - 1 and [x_i, x_j] for i < j."""
    if g.order < 1:
        raise InvalidAction("group order must be positive")
    if g.group_gen in g.base:
        raise InvalidAction("group generator clashes with a base generator")
    f = g.field
    gens = tuple(g.base) + (g.group_gen,)
    s = g.group_gen
    rels = []
    for x in g.base:
        m = f(g.action.get(x, 1))
        if m**g.order != f.one:
            raise InvalidAction(f"multiplier {m} of {x} is not a {g.order}-th root of unity")
        rels.append(NcPolynomial.from_words(f, gens, [(1, [s, x]), (-m, [x, s])]))
    rels.append(NcPolynomial.from_words(f, gens, [(1, [s] * g.order), (-1, [])]))
    for i, x in enumerate(g.base):
        for y in g.base[i + 1:]:
            rels.append(commutator(f, gens, x, y))
    return AlgebraPresentation(f, gens, rels, name=name)


def _format_field(field: FieldSpec) -> str:
    return field.describe()


def _format_scalar(s: Scalar) -> str:
    return s.format()


def format_source(alg: AlgebraPresentation, modules: Mapping[str, object] | None = None) -> str:
    """Canonical DSL text for a presentation and optional modules.

    Relations keep their order; terms inside each polynomial are sorted by
    descending degree-lex order. Modules are emitted in name order.
    """
    lines = [f"field {_format_field(alg.field)};", f"algebra {alg.name} {{", f"  gens {', '.join(alg.gens)};"]
    if alg.central:
        lines.append(f"  central {', '.join(alg.central)};")
    for r in alg.relations:
        lines.append(f"  rel {r.format()};")
    for k, v in alg.central_elements.items():
        lines.append(f"  zelt {k} = {v.format()};")
    lines.append("}")
    for label in sorted(modules or {}):
        rep = modules[label]
        lines.append(f"module {label} dim {rep.dim} {{")
        for g in alg.gens:
            m = rep.matrices[g]
            rows = ", ".join("[" + ", ".join(_format_scalar(x) for x in row) + "]" for row in m.rows)
            lines.append(f"  {g} = [{rows}];")
        lines.append("}")
    return "\n".join(lines) + "\n"
