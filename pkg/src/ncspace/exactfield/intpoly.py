"""Integer polynomials, exact characteristic polynomials and complex root finding."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Sequence

from ..errors import DegenerateInput, ShapeError


class IntPolynomial:
    """Univariate polynomial with integer coefficients, constant term first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int]):
        c = [int(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def __eq__(self, other):
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (list, tuple)):
            return self.coeffs == IntPolynomial(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def norm1(self) -> int:
        return sum(abs(a) for a in self.coeffs)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self):
        return format_univariate(self.coeffs, "x")


def format_univariate(coeffs: Sequence, var: str) -> str:
    """Render a constant-first coefficient list as ``x^2+x+1`` style text."""
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        a = coeffs[k]
        if a == 0:
            continue
        sign = "-" if a < 0 else "+"
        mag = -a if a < 0 else a
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f"{sign}{body}"
    return out


# ----------------------------------------------------------------------------
# characteristic polynomial

def _as_rational_square(m) -> list[list[Fraction]]:
    if hasattr(m, "to_lists"):
        rows = m.to_lists()
        rows = [[_scalar_to_fraction(x) for x in row] for row in rows]
    else:
        rows = [[Fraction(x) for x in row] for row in m]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ShapeError("char_poly needs a square matrix")
    return rows


def _scalar_to_fraction(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    field = x.field
    if field.characteristic != 0 or field.degree != 1:
        raise ShapeError("char_poly needs integral entries")
    return Fraction(x.c[0])


def char_poly(m) -> IntPolynomial:
    """Monic det(lambda*I - m) for a square matrix with integer entries.

    The matrix is first brought to upper Hessenberg form by exact similarity
    transforms over Q, then the standard Hessenberg recurrence is applied.
    """
    a = _as_rational_square(m)
    n = len(a)
    for row in a:
        for x in row:
            if x.denominator != 1:
                raise ShapeError("char_poly needs integral entries")
    for col in range(n - 2):
        piv = next((i for i in range(col + 1, n) if a[i][col] != 0), None)
        if piv is None:
            continue
        if piv != col + 1:
            a[piv], a[col + 1] = a[col + 1], a[piv]
            for row in a:
                row[piv], row[col + 1] = row[col + 1], row[piv]
        t = a[col + 1][col]
        for i in range(col + 2, n):
            u = a[i][col] / t
            if u == 0:
                continue
            ri, rp = a[i], a[col + 1]
            for j in range(n):
                ri[j] -= u * rp[j]
            for row in a:
                row[col + 1] += u * row[i]
    # p[k] is the char poly of the leading k x k block, constant term first
    p: list[list[Fraction]] = [[Fraction(1)]]
    for k in range(1, n + 1):
        h = a[k - 1][k - 1]
        prev = p[k - 1]
        cur = [Fraction(0)] * (k + 1)
        for d, c in enumerate(prev):
            cur[d + 1] += c
            cur[d] -= h * c
        prod = Fraction(1)
        for i in range(k - 1, 0, -1):
            prod *= a[i][i - 1]
            if prod == 0:
                break
            coef = a[i - 1][k - 1] * prod
            for d, c in enumerate(p[i - 1]):
                cur[d] -= coef * c
        p.append(cur)
    out = p[n]
    if any(c.denominator != 1 for c in out):
        raise AssertionError("non-integral characteristic polynomial")
    return IntPolynomial([int(c) for c in out])


# ----------------------------------------------------------------------------
# exact square-free decomposition over Q

def _qtrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _qdivmod(a, b):
    a = _qtrim(a)
    b = _qtrim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] / lead
        q[k] = c
        for i, bi in enumerate(b):
            a[i + k] -= c * bi
        a = _qtrim(a)
    return _qtrim(q), a


def _qgcd(a, b):
    a, b = _qtrim(a), _qtrim(b)
    while b:
        _, r = _qdivmod(a, b)
        a, b = b, r
    if not a:
        return a
    lead = a[-1]
    return [c / lead for c in a]


def _qderiv(a):
    return _qtrim([i * a[i] for i in range(1, len(a))])


def squarefree_decomposition(coeffs: Sequence[int]) -> list[tuple[list[Fraction], int]]:
    """Yun's algorithm: returns [(factor, multiplicity)], factors monic and square-free."""
    f = _qtrim([Fraction(c) for c in coeffs])
    if not f:
        raise DegenerateInput("zero polynomial")
    lead = f[-1]
    f = [c / lead for c in f]
    if len(f) == 1:
        return []
    out = []
    fp = _qderiv(f)
    a0 = _qgcd(f, fp)
    b, _ = _qdivmod(f, a0)
    c, _ = _qdivmod(fp, a0)
    d = [ci - bi for ci, bi in zip(_pad(c, len(_qderiv(b))), _pad(_qderiv(b), len(c)))]
    d = _qtrim(d)
    i = 1
    while len(b) > 1:
        a = _qgcd(b, d)
        if len(a) > 1:
            out.append((a, i))
        b, _ = _qdivmod(b, a)
        c, _ = _qdivmod(d, a)
        db = _qderiv(b)
        n = max(len(c), len(db))
        d = _qtrim([x - y for x, y in zip(_pad(c, n), _pad(db, n))])
        i += 1
    return out


def _pad(a, n):
    return list(a) + [Fraction(0)] * (n - len(a))


# ----------------------------------------------------------------------------
# complex roots

def _horner(coeffs, z):
    p = 0j
    dp = 0j
    for a in reversed(coeffs):
        dp = dp * z + p
        p = p * z + a
    return p, dp


def _aberth(coeffs: Sequence[complex], max_iter: int = 200) -> list[complex]:
    """Simultaneous Aberth-Ehrlich iteration on a monic square-free polynomial."""
    n = len(coeffs) - 1
    if n == 1:
        return [-coeffs[0] / coeffs[1]]
    radius = 1 + max(abs(a) for a in coeffs[:-1])
    z = [radius * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]
    for _ in range(max_iter):
        worst = 0.0
        for k in range(n):
            p, dp = _horner(coeffs, z[k])
            if p == 0:
                continue
            s = sum(1 / (z[k] - z[j]) for j in range(n) if j != k and z[k] != z[j])
            ratio = p / dp if dp != 0 else p
            denom = 1 - ratio * s
            w = ratio / denom if denom != 0 else ratio
            z[k] -= w
            worst = max(worst, abs(w) / (1 + abs(z[k])))
        if worst < 1e-16:
            break
    return z


def _newton_polish(coeffs, z, steps=4):
    for _ in range(steps):
        p, dp = _horner(coeffs, z)
        if dp == 0 or p == 0:
            break
        z = z - p / dp
    return z


def poly_roots_complex(p, tol: float = 1e-9) -> list[complex]:
    """All complex roots of an integer polynomial, repeated by multiplicity.

    Repeated roots are separated exactly first (square-free decomposition over
    Q), so each iteration only ever sees simple roots. Every returned root is
    checked against ``|p(z)| < tol * (1 + ||p||_1)``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    poly = p if isinstance(p, IntPolynomial) else IntPolynomial(p)
    if poly.is_zero():
        raise DegenerateInput("zero polynomial has no finite root set")
    roots: list[complex] = []
    for factor, mult in squarefree_decomposition(poly.coeffs):
        fc = [complex(float(c)) for c in factor]
        for z in _aberth(fc):
            z = _newton_polish(fc, z)
            if abs(z.imag) < 1e-14 * (1 + abs(z.real)):
                z = complex(z.real, 0.0)
            roots.extend([z] * mult)
    bound = tol * (1 + poly.norm1())
    for z in roots:
        if abs(_horner([float(c) for c in poly.coeffs], z)[0]) >= bound:
            raise ArithmeticError(f"root {z} failed the residual certificate")
    roots.sort(key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    return roots
