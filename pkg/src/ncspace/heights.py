"""Weil, central, representation and total heights over Q and small number fields."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateInput, NoEmbeddings, ShapeError, Unsupported
from .exactfield import ExactMatrix, FieldSpec, Scalar, complex_embeddings, smith_index
from .exactfield.field import _prime_factors, is_irreducible_mod_p


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class ProjectivePoint:
    """(p_0 : ... : p_m) over a characteristic-0 field.

    Rational coordinates are scaled by the common denominator, which leaves
    the height unchanged, so stored coordinates are always integral in the
    power basis of the field.
    """

    def __init__(self, field: FieldSpec, coords: Sequence):
        if field.characteristic != 0:
            raise NoEmbeddings("heights need a characteristic-0 field")
        cs = [field(c) for c in coords]
        if not cs:
            raise DegenerateInput("a projective point needs at least one coordinate")
        if not any(cs):
            raise DegenerateInput("all coordinates are zero")
        den = 1
        for s in cs:
            for c in s.c:
                den = _lcm(den, Fraction(c).denominator)
        self.field = field
        self.coords = tuple(s * den for s in cs) if den != 1 else tuple(cs)

    def scaled(self, c) -> "ProjectivePoint":
        return ProjectivePoint(self.field, [self.field(c) * s for s in self.coords])

    def __repr__(self):
        return "(" + " : ".join(s.format() for s in self.coords) + ")"


def _int_coords(s: Scalar) -> list[int]:
    return [int(Fraction(c)) for c in s.c]


def ideal_norm(field: FieldSpec, coords: Sequence[Scalar]) -> int:
    """Index in Z[theta] of the ideal generated by integral coordinates."""
    n = field.degree
    if n == 1:
        g = 0
        for s in coords:
            g = math.gcd(g, int(Fraction(s.c[0])))
        return g
    cols = []
    basis = [field.one] + [field.gen**k for k in range(1, n)]
    for s in coords:
        if not s:
            continue
        for b in basis:
            cols.append(_int_coords(s * b))
    mat = [[col[i] for col in cols] for i in range(n)]
    return smith_index(mat)


def weil_height(p: ProjectivePoint) -> float:
    """Relative height: product over complex embeddings of max |sigma(p_i)|,
    divided by the norm of the coordinate ideal."""
    emb = complex_embeddings(p.field)
    prod = 1.0
    for sigma in emb:
        prod *= max(abs(sigma(s)) for s in p.coords)
    return prod / ideal_norm(p.field, p.coords)


def absolute_and_log(p: ProjectivePoint) -> tuple[float, float]:
    H = weil_height(p) ** (1.0 / p.field.degree)
    return H, math.log(H)


def central_height(points: Sequence[ProjectivePoint]) -> list[float]:
    if not points:
        raise DegenerateInput("central height needs at least one point")
    return [absolute_and_log(p)[0] for p in points]


# ----------------------------------------------------------------------------
# representation height

def _vp(n: int | Fraction, p: int) -> int:
    n = Fraction(n)
    if n == 0:
        return 0
    v = 0
    num, den = n.numerator, n.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _det(rows: list[list]) -> Fraction:
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[piv], a[col] = a[col], a[piv]
            det = -det
        det *= a[col][col]
        for i in range(col + 1, n):
            f = a[i][col] / a[col][col]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return det


def _det_float(rows: list[list[float]]) -> float:
    import numpy as np

    return float(np.linalg.det(np.array(rows, dtype=float))) if rows else 1.0


def _hensel_roots(g: Sequence[int], p: int, k: int) -> list[int]:
    """Roots of g modulo p^k lifted from simple roots modulo p."""
    roots = [r for r in range(p) if sum(c * r**i for i, c in enumerate(g)) % p == 0]
    dg = [i * g[i] for i in range(1, len(g))]
    out = []
    for r in roots:
        mod = p
        for _ in range(k - 1):
            mod *= p
            fr = sum(c * r**i for i, c in enumerate(g))
            dfr = sum(c * r**i for i, c in enumerate(dg))
            r = (r - fr * pow(dfr, -1, mod)) % mod
        out.append(r)
    return out


def _norm(s: Scalar) -> Fraction:
    a0, a1 = (Fraction(c) for c in s.c)
    ext = s.field.extension  # x^2 + b x + c
    c0, b = ext[0], ext[1]
    # N(a0 + a1 t) = a0^2 - b a0 a1 + c a1^2
    return a0 * a0 - b * a0 * a1 + c0 * a1 * a1


def _places_quadratic(field: FieldSpec, p: int):
    """(kind, n_v, valuation function) for each place above p, valuations
    normalised to extend v_p on Q."""
    g = field.extension
    disc = g[1] ** 2 - 4 * g[0]
    if disc % p == 0:
        return [(2, lambda s: Fraction(_vp(_norm(s), p), 2) if s else Fraction(0))]
    if is_irreducible_mod_p(g, p):
        return [(2, lambda s: Fraction(min(_vp(c, p) for c in s.c if c != 0)) if s else Fraction(0))]

    def split_valuation(root_index: int):
        def val(s: Scalar) -> Fraction:
            if not s:
                return Fraction(0)
            den = 1
            for c in s.c:
                den = _lcm(den, Fraction(c).denominator)
            a0, a1 = (int(Fraction(c) * den) for c in s.c)
            content = math.gcd(a0, a1)
            e = _vp(content, p)
            a0 //= p**e
            a1 //= p**e
            k = _vp(_norm(field([a0, a1])), p) + 1
            r = _hensel_roots(g, p, k)[root_index]
            return Fraction(e + min(k, _vp((a0 + a1 * r) % p**k or p**k, p)) - _vp(den, p))

        return val

    return [(1, split_valuation(0)), (1, split_valuation(1))]


def _relevant_primes(field: FieldSpec, mats: Sequence[ExactMatrix]) -> list[int]:
    primes: set[int] = set()
    for m in mats:
        for s in m.entries():
            if not s:
                continue
            vals = [Fraction(c) for c in s.c]
            if field.degree == 2:
                vals.append(_norm(s))
            for v in vals:
                if v != 0:
                    primes.update(_prime_factors(abs(v.numerator)))
                    primes.update(_prime_factors(v.denominator))
    return sorted(primes)


def representation_height(
    field: FieldSpec, matrices: Sequence, include_archimedean: bool = False
) -> float:
    """-sum_v n_v min_i det(v(M_i)) with v applied entrywise and v(0) := 0.

    The minimum runs over all supplied matrices. Archimedean places use
    v = -log|sigma(.)| and are only included on request.
    """
    if field.characteristic != 0:
        raise NoEmbeddings("representation heights need a characteristic-0 field")
    if field.degree > 2:
        raise Unsupported("representation heights are implemented for Q and quadratic fields only")
    mats = [m if isinstance(m, ExactMatrix) else ExactMatrix(field, m) for m in matrices]
    if not mats:
        raise DegenerateInput("no matrices supplied")
    for m in mats:
        if not m.is_square:
            raise ShapeError("representation height needs square matrices")
    total = Fraction(0)
    for p in _relevant_primes(field, mats):
        if field.degree == 1:
            places = [(1, lambda s, p=p: Fraction(_vp(s.c[0], p)))]
        else:
            places = _places_quadratic(field, p)
        for n_v, val in places:
            dets = [_det([[val(s) for s in row] for row in m.rows]) for m in mats]
            total -= n_v * min(dets)
    result = float(total)
    if include_archimedean:
        emb = complex_embeddings(field)
        seen: list[complex] = []
        for sigma in emb:
            if any(abs(sigma.theta.conjugate() - t) < 1e-12 for t in seen):
                continue
            seen.append(sigma.theta)
            n_v = 1 if sigma.is_real else 2
            dets = []
            for m in mats:
                rows = [[-math.log(abs(sigma(s))) if s else 0.0 for s in row] for row in m.rows]
                dets.append(_det_float(rows))
            result -= n_v * min(dets)
    return result


@dataclass(frozen=True)
class HeightVector:
    central: tuple[float, ...]
    representation: float
    noncommutative: float


def total_height(central: Sequence[float], rep: float, nc: float) -> HeightVector:
    if not central:
        raise DegenerateInput("the central height vector is empty")
    vals = tuple(float(c) for c in central) + (float(rep), float(nc))
    if not all(math.isfinite(v) for v in vals):
        raise ValueError("height components must be finite")
    if any(c < 1 - 1e-12 for c in vals[:-2]):
        raise ValueError("central heights are at least 1")
    return HeightVector(tuple(float(c) for c in central), float(rep), float(nc))
