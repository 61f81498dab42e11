"""Finite-dimensional representations: validation, intertwiners, isomorphism,
central characters and fibre classification."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Callable, Mapping, Sequence

from .errors import (
    AlgebraMismatch,
    CharacteristicMismatch,
    FieldMismatch,
    NotCentral,
    RelationViolation,
    ShapeError,
    UnboundGenerator,
    Undecided,
)
from .exactfield import ExactMatrix, FieldSpec, Scalar, rref
from .presentation import AlgebraPresentation, NcPolynomial, word_matrix

# Search caps for the invertible-intertwiner test.
MAX_COMBINATIONS = 10**6


@dataclass(frozen=True)
class Violation:
    index: int
    relation_text: str
    value: ExactMatrix


class Representation:
    """A module of dimension ``dim`` given by one matrix per generator.

    Args:
        algebra: the presentation the matrices must satisfy.
        dim: positive module dimension.
        matrices: generator name -> ExactMatrix or nested lists of scalars.
        label: display name.
        check: validate all relations on construction (the default).
    """

    def __init__(
        self,
        algebra: AlgebraPresentation,
        dim: int,
        matrices: Mapping[str, object],
        label: str = "M",
        check: bool = True,
    ):
        if dim < 1:
            raise ShapeError(f"module dimension must be positive, got {dim}")
        self.algebra = algebra
        self.dim = int(dim)
        self.label = label
        missing = [g for g in algebra.gens if g not in matrices]
        if missing:
            raise UnboundGenerator(f"module {label!r} has no matrix for {', '.join(missing)}")
        extra = [g for g in matrices if g not in algebra.gens]
        if extra:
            raise UnboundGenerator(f"module {label!r} assigns unknown generator(s) {', '.join(extra)}")
        mats: dict[str, ExactMatrix] = {}
        for g in algebra.gens:
            m = matrices[g]
            if isinstance(m, ExactMatrix):
                if m.field != algebra.field:
                    raise FieldMismatch(f"matrix for {g} is over {m.field}, algebra over {algebra.field}")
            else:
                m = ExactMatrix(algebra.field, m)
            if m.shape != (self.dim, self.dim):
                raise ShapeError(f"matrix for {g} in {label!r} has shape {m.shape}, expected {self.dim}x{self.dim}")
            mats[g] = m
        self.matrices = mats
        self.mats = tuple(mats[g] for g in algebra.gens)
        self._cache: dict = {}
        if check:
            bad = validate(self)
            if bad:
                raise RelationViolation(label, bad)

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def word(self, w: tuple[int, ...]) -> ExactMatrix:
        return word_matrix(self.field, self.mats, w, self.dim, self._cache)

    def evaluate(self, p: NcPolynomial) -> ExactMatrix:
        out = ExactMatrix.zeros(self.field, self.dim)
        for w, c in p.terms.items():
            out = out + self.word(w).scale(c)
        return out

    def relabel(self, label: str) -> "Representation":
        r = Representation(self.algebra, self.dim, self.matrices, label, check=False)
        return r

    def __repr__(self):
        return f"Representation({self.label}, dim={self.dim})"


def validate(rep: Representation) -> list[Violation]:
    """Relations that do not evaluate to zero on ``rep`` (empty when valid)."""
    out = []
    for i, r in enumerate(rep.algebra.relations):
        val = rep.evaluate(r)
        if not val.is_zero():
            out.append(Violation(i, r.format(), val))
    return out


def _check_pair(M: Representation, N: Representation):
    if not M.algebra.compatible(N.algebra):
        raise AlgebraMismatch(f"{M.label} and {N.label} are modules over different algebras")


def commutator_map(M: Representation, N: Representation) -> list[list[Scalar]]:
    """Matrix of theta -> (rho_N(g) theta - theta rho_M(g))_g.

    Unknowns are the entries of theta : M -> N (dim N x dim M) in row-major
    order; output rows are ordered by generator, then row-major entry.
    """
    field = M.field
    m, n = M.dim, N.dim
    zero = field.zero
    rows = []
    for g in M.algebra.gens:
        A = N.matrices[g].rows
        B = M.matrices[g].rows
        for i in range(n):
            for j in range(m):
                row = [zero] * (n * m)
                for a in range(n):
                    c = A[i][a]
                    if c:
                        row[a * m + j] = row[a * m + j] + c
                for b in range(m):
                    c = B[b][j]
                    if c:
                        row[i * m + b] = row[i * m + b] - c
                rows.append(row)
    return rows


def hom_space(M: Representation, N: Representation) -> list[ExactMatrix]:
    """Basis of intertwiners theta with rho_N(g) theta = theta rho_M(g)."""
    _check_pair(M, N)
    rows = commutator_map(M, N)
    mat = ExactMatrix(M.field, rows, ncols=N.dim * M.dim)
    _, kernel = rref(mat)
    m = M.dim
    return [ExactMatrix(M.field, [v[i * m:(i + 1) * m] for i in range(N.dim)]) for v in kernel]


def _coefficient_vectors(field: FieldSpec, k: int, dim: int):
    """Deterministic candidate coefficient vectors, smallest entries first."""
    if field.is_finite:
        q = field.order
        if q**k > MAX_COMBINATIONS:
            raise Undecided(f"{q}^{k} combinations exceed the search cap")
        elems = list(field.elements())
        yield from itertools.product(elems, repeat=k)
        return
    # integers 0, 1, -1, 2, -2, ...: more than `dim` values makes the grid
    # conclusive since det(sum c_i B_i) has degree at most `dim` in each c_i
    size = max(5, dim + 1)
    vals = [0]
    step = 1
    while len(vals) < size:
        vals += [step, -step]
        step += 1
    vals = vals[:size]
    if size**k > MAX_COMBINATIONS:
        raise Undecided(f"{size}^{k} combinations exceed the search cap")
    for bound in range(1, size):
        allowed = vals[: bound + 1]
        for combo in itertools.product(allowed, repeat=k):
            # only combinations that use the newest value, so none repeat
            if vals[bound] in combo:
                yield tuple(field(c) for c in combo)


def is_isomorphic(M: Representation, N: Representation) -> bool:
    if M.dim != N.dim:
        return False
    basis = hom_space(M, N)
    if not basis:
        return False
    field = M.field
    for b in basis:
        if b.is_invertible():
            return True
    for combo in _coefficient_vectors(field, len(basis), M.dim):
        if not any(combo):
            continue
        acc = ExactMatrix.zeros(field, M.dim)
        for c, b in zip(combo, basis):
            if c:
                acc = acc + b.scale(c)
        if acc.is_invertible():
            return True
    return False


def minimal_polynomial(Z: ExactMatrix) -> tuple[Scalar, ...]:
    """Monic minimal polynomial of a square matrix, constant term first."""
    field = Z.field
    n = Z.nrows
    powers = [ExactMatrix.identity(field, n)]
    for k in range(1, n + 1):
        powers.append(powers[-1] @ Z)
        cols = [p.entries() for p in powers]
        mat = ExactMatrix(field, [list(r) for r in zip(*cols)], ncols=k + 1)
        rank, kernel = rref(mat)
        if kernel:
            v = kernel[0]
            lead = v[-1]
            return tuple(c / lead for c in v)
    raise AssertionError("Cayley-Hamilton bound exceeded")


def format_poly_over_field(coeffs: Sequence[Scalar], var: str = "X") -> str:
    out = ""
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        text = c.format()
        if c.is_rational():
            neg = text.startswith("-")
            mag = text[1:] if neg else text
        else:
            neg, mag = False, f"({text})"
        if mono:
            body = mono if mag == "1" else f"{mag}*{mono}"
        else:
            body = mag
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += ("-" if neg else "+") + body
    return out or "0"


@dataclass(frozen=True)
class CentralCharacter:
    """Minimal polynomial of each central element acting on a module."""

    values: tuple[tuple[str, tuple[Scalar, ...]], ...]

    def as_dict(self) -> dict[str, tuple[Scalar, ...]]:
        return dict(self.values)

    def scalar(self, name: str) -> Scalar | None:
        poly = self.as_dict()[name]
        return -poly[0] if len(poly) == 2 else None

    def describe(self) -> dict[str, str]:
        out = {}
        for name, poly in self.values:
            s = -poly[0] if len(poly) == 2 else None
            out[name] = s.format() if s is not None else format_poly_over_field(poly)
        return out


def central_character(M: Representation, names: Sequence[str] | None = None) -> CentralCharacter:
    alg = M.algebra
    names = list(alg.central_elements) if names is None else list(names)
    vals = []
    for name in names:
        if name not in alg.central_elements:
            raise NotCentral(f"{name!r} is not a declared central element")
        Z = M.evaluate(alg.central_elements[name])
        for g, A in M.matrices.items():
            if not (Z @ A - A @ Z).is_zero():
                raise NotCentral(f"{name} does not commute with {g} on {M.label}")
        vals.append((name, minimal_polynomial(Z)))
    return CentralCharacter(tuple(vals))


@dataclass
class Fibre:
    members: list[str]
    character: dict[str, str]
    non_isomorphic: int
    flag: str  # "azumaya-like" | "ramified"


@dataclass
class FibreReport:
    fibres: list[Fibre]
    muller_consistent: bool
    ext1: list[list[int]] = dc_field(default_factory=list)


def classify_family(
    family: Sequence[Representation],
    names: Sequence[str] | None = None,
    ext1_fn: Callable[[Representation, Representation], int] | None = None,
    threads: int | None = None,
) -> FibreReport:
    """Partition a family of simple modules by central character.

    A fibre is flagged ``ramified`` when it holds two non-isomorphic members
    or a nonzero Ext^1 between two of its members.
    """
    if ext1_fn is None:
        from .extcalc import ext1

        def ext1_fn(a, b):
            return ext1(a, b).dim_ext1

    if not family:
        return FibreReport([], True, [])
    chars = [central_character(M, names) for M in family]
    groups: list[list[int]] = []
    for i, ch in enumerate(chars):
        for grp in groups:
            if chars[grp[0]] == ch:
                grp.append(i)
                break
        else:
            groups.append([i])
    r = len(family)
    pairs = [(i, j) for i in range(r) for j in range(r)]
    if threads and threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            vals = list(ex.map(lambda ij: ext1_fn(family[ij[0]], family[ij[1]]), pairs))
    else:
        vals = [ext1_fn(family[i], family[j]) for i, j in pairs]
    E = [[0] * r for _ in range(r)]
    for (i, j), v in zip(pairs, vals):
        E[i][j] = v
    fibre_of = {i: k for k, grp in enumerate(groups) for i in grp}
    consistent = True
    for i in range(r):
        for j in range(r):
            if i != j and E[i][j] and fibre_of[i] != fibre_of[j]:
                consistent = False
    fibres = []
    for grp in groups:
        classes: list[int] = []
        for i in grp:
            if not any(is_isomorphic(family[c], family[i]) for c in classes):
                classes.append(i)
        off = any(E[i][j] for i in grp for j in grp if i != j)
        if len(grp) > 1 and not off:
            consistent = False
        flag = "ramified" if len(classes) >= 2 or off else "azumaya-like"
        fibres.append(Fibre([family[i].label for i in grp], chars[grp[0]].describe(), len(classes), flag))
    return FibreReport(fibres, consistent, E)


def embed_field(source: FieldSpec, target: FieldSpec, generator_image: Scalar | None = None) -> Callable[[Scalar], Scalar]:
    """A field map source -> target, sending the source generator to
    ``generator_image`` (default: the first root of its minimal polynomial)."""
    if source.characteristic != target.characteristic:
        raise CharacteristicMismatch(
            f"cannot extend from characteristic {source.characteristic} to {target.characteristic}"
        )
    if source == target and generator_image is None:
        return lambda s: target(s)
    if source.degree == 1:
        return lambda s: target(s.c[0])
    if generator_image is None:
        roots = target.find_roots(source.extension)
        if not roots:
            raise CharacteristicMismatch(f"{target} does not contain a root of the extension of {source}")
        generator_image = roots[0]
    img = target(generator_image)
    if target.eval_int_poly(source.extension, img):
        raise ValueError("generator image is not a root of the source extension polynomial")
    powers = [target.one]
    for _ in range(source.degree - 1):
        powers.append(powers[-1] * img)

    def fmap(s: Scalar) -> Scalar:
        acc = target.zero
        for c, pw in zip(s.c, powers):
            if c:
                acc = acc + pw * c
        return acc

    # constants with the same name must stay roots of their defining polynomials
    for name, (poly, root) in source.bindings.items():
        if target.eval_int_poly(poly, fmap(root)):
            raise ValueError(f"image of {name} is not a root of its defining polynomial")
    return fmap


_ALGEBRA_CACHE: dict = {}


def extend_scalars(
    M: Representation, target: FieldSpec, generator_image: Scalar | None = None
) -> Representation:
    """The same module with every matrix entry pushed into ``target``."""
    src = M.field
    if src is target and generator_image is None:
        return M
    fmap = embed_field(src, target, generator_image)
    key = (id(M.algebra), target, None if generator_image is None else generator_image.c)
    alg = _ALGEBRA_CACHE.get(key)
    if alg is None or alg[0] is not M.algebra:
        alg = (M.algebra, M.algebra.with_field(target, fmap))
        _ALGEBRA_CACHE[key] = alg
    mats = {g: m.map_entries(fmap, target) for g, m in M.matrices.items()}
    return Representation(alg[1], M.dim, mats, M.label, check=True)
