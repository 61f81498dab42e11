"""Exact scalars over Q, Q(theta), F_p and F_p(theta)."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from ..errors import ConstantUnresolvable, FieldMismatch, NoEmbeddings, ReducibleModulus
from .intpoly import IntPolynomial, format_univariate, poly_roots_complex

MAX_EXTENSION_DEGREE = 6
# largest finite field we are willing to enumerate when searching for roots
MAX_ENUMERATION = 200_000


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ----------------------------------------------------------------------------
# dense polynomials over the prime field (constant term first)

def _norm_base(p: int, a):
    if p:
        if isinstance(a, Fraction):
            if a.denominator % p == 0:
                raise ZeroDivisionError(f"{a} has no image in F_{p}")
            return a.numerator * pow(a.denominator, -1, p) % p
        return int(a) % p
    return Fraction(a)


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(p, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    if p:
        out = [c % p for c in out]
    return _trim(out)


def _psub(p, a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    if p:
        out = [c % p for c in out]
    return _trim(out)


def _binv(p, a):
    return pow(a, -1, p) if p else 1 / a


def _pdivmod(p, a, b):
    a = list(a)
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = _binv(p, b[-1])
    q = [0] * max(len(a) - len(b) + 1, 0)
    _trim(a)
    while len(a) >= len(b):
        k = len(a) - len(b)
        c = a[-1] * inv_lead
        if p:
            c %= p
        q[k] = c
        for i, bi in enumerate(b):
            a[i + k] -= c * bi
            if p:
                a[i + k] %= p
        _trim(a)
    return _trim(q), a


def _pmonic(p, a):
    if not a:
        return a
    inv = _binv(p, a[-1])
    out = [c * inv for c in a]
    return [c % p for c in out] if p else out


def _pgcd(p, a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pdivmod(p, a, b)[1]
    return _pmonic(p, a)


def _ppowmod(p, base, e, mod):
    result = [1]
    base = _pdivmod(p, base, mod)[1]
    while e:
        if e & 1:
            result = _pdivmod(p, _pmul(p, result, base), mod)[1]
        base = _pdivmod(p, _pmul(p, base, base), mod)[1]
        e >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_mod_p(coeffs: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    f = _trim([c % p for c in coeffs])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    for q in _prime_factors(n):
        h = _psub(p, _ppowmod(p, x, p ** (n // q), f), x)
        if len(_pgcd(p, f, h)) != 1:
            return False
    h = _psub(p, _ppowmod(p, x, p**n, f), x)
    return not h


def is_irreducible_over_q(coeffs: Sequence[int]) -> bool:
    # sympy's factorisation over Z is the trusted implementation here
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed([int(c) for c in coeffs])), x, domain="ZZ")
    if poly.degree() < 1:
        return False
    return bool(poly.is_irreducible)


# ----------------------------------------------------------------------------

class FieldSpec:
    """One of Q, Q(theta), F_p, F_p(theta) plus named constants.

    Args:
        characteristic: 0 or a prime p.
        extension: monic integer minimal polynomial of theta, constant term
            first, or None for the prime field.
        bindings: constant name mapped to its defining integer polynomial.
            Each constant is bound to the first root of that polynomial in
            the field (roots are ordered by coordinate size).
        gen_name: name under which theta itself is visible in expressions.
    """

    def __init__(
        self,
        characteristic: int = 0,
        extension: Sequence[int] | None = None,
        bindings: Mapping[str, Sequence[int]] | None = None,
        gen_name: str = "t",
    ):
        p = int(characteristic)
        if p != 0 and not is_prime(p):
            raise ValueError(f"characteristic {p} is neither 0 nor prime")
        self.p = p
        if extension is not None:
            ext = [int(c) for c in extension]
            if p:
                ext = [c % p for c in ext]
            ext = _trim(ext)
            if len(ext) < 2:
                raise ReducibleModulus("extension polynomial must have degree >= 1")
            if ext[-1] != 1:
                raise ValueError("extension polynomial must be monic")
            if len(ext) - 1 > MAX_EXTENSION_DEGREE:
                raise ValueError(f"extension degree capped at {MAX_EXTENSION_DEGREE}")
            if len(ext) == 2:
                ext = None
            elif p:
                if not is_irreducible_mod_p(ext, p):
                    raise ReducibleModulus(f"{format_univariate(ext, 'x')} is reducible mod {p}")
            elif not is_irreducible_over_q(ext):
                raise ReducibleModulus(f"{format_univariate(ext, 'x')} is reducible over Q")
        else:
            ext = None
        self.extension: tuple[int, ...] | None = tuple(ext) if ext else None
        self.degree = len(self.extension) - 1 if self.extension else 1
        self.gen_name = gen_name
        self._key = (p, self.extension)
        self._zero_c = tuple(_norm_base(p, 0) for _ in range(self.degree))
        # theta^(n+k) reduced, for k = 0 .. n-2
        self._red: list[tuple] = []
        if self.extension:
            n = self.degree
            cur = [-_norm_base(p, c) for c in self.extension[:-1]]
            if p:
                cur = [c % p for c in cur]
            for _ in range(n - 1):
                self._red.append(tuple(cur))
                top = cur[-1]
                cur = [_norm_base(p, 0)] + cur[:-1]
                for i in range(n):
                    cur[i] = cur[i] - top * self.extension[i]
                    if p:
                        cur[i] %= p
            self._red.append(tuple(cur))
        self.bindings: dict[str, tuple[tuple[int, ...], Scalar]] = {}
        for name, poly in (bindings or {}).items():
            roots = self.find_roots(poly)
            if not roots:
                raise ConstantUnresolvable(
                    f"constant {name!r} (root of {format_univariate(list(poly), 'x')}) has no root in {self}"
                )
            self.bindings[name] = (tuple(int(c) for c in poly), roots[0])

    # -- identity -----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def kind(self) -> str:
        if self.p == 0:
            return "number-field" if self.extension else "rationals"
        return "finite-field-extension" if self.extension else "prime-field"

    @property
    def is_finite(self) -> bool:
        return self.p != 0

    @property
    def order(self) -> int | None:
        return self.p**self.degree if self.p else None

    def describe(self) -> str:
        """Field declaration text in the DSL grammar (without ``field``)."""
        if self.p == 0:
            head = f"Qext {format_univariate(self.extension, 'x')}" if self.extension else "Q"
        else:
            head = f"Fpext {self.p} {format_univariate(self.extension, 'x')}" if self.extension else f"Fp {self.p}"
        for name, (poly, _) in self.bindings.items():
            head += f" bind {name} root_of {format_univariate(poly, 'x')}"
        return head

    def __repr__(self):
        return f"FieldSpec({self.describe()})"

    __str__ = describe

    # -- elements -----------------------------------------------------------
    def _from_coords(self, coords: Iterable) -> "Scalar":
        c = tuple(_norm_base(self.p, a) for a in coords)
        if len(c) > self.degree:
            raise ValueError("too many coordinates")
        c = c + self._zero_c[len(c):]
        return Scalar(self, c)

    def __call__(self, x) -> "Scalar":
        if isinstance(x, Scalar):
            if x.field == self:
                return x if x.field is self else Scalar(self, x.c)
            raise FieldMismatch(f"element of {x.field} used in {self}")
        if isinstance(x, (int, Fraction)):
            return self._from_coords([x])
        if isinstance(x, (list, tuple)):
            return self._from_coords(x)
        raise TypeError(f"cannot coerce {x!r} into {self}")

    @property
    def zero(self) -> "Scalar":
        return Scalar(self, self._zero_c)

    @property
    def one(self) -> "Scalar":
        return self._from_coords([1])

    @property
    def gen(self) -> "Scalar":
        if self.degree == 1:
            raise ValueError("prime field has no extension generator")
        return self._from_coords([0, 1])

    def constants(self) -> dict[str, "Scalar"]:
        out = {name: root for name, (_, root) in self.bindings.items()}
        if self.extension:
            out[self.gen_name] = self.gen
        return out

    def elements(self) -> Iterator["Scalar"]:
        if not self.p:
            raise ValueError("infinite field cannot be enumerated")
        for tup in itertools.product(range(self.p), repeat=self.degree):
            yield Scalar(self, tuple(reversed(tup)))

    def element_index(self, s: "Scalar") -> int:
        idx = 0
        for c in reversed(s.c):
            idx = idx * self.p + c
        return idx

    def element_from_index(self, idx: int) -> "Scalar":
        c = []
        for _ in range(self.degree):
            idx, r = divmod(idx, self.p)
            c.append(r)
        return Scalar(self, tuple(c))

    def random(self, rng, bound: int = 10) -> "Scalar":
        if self.p:
            return Scalar(self, tuple(rng.randrange(self.p) for _ in range(self.degree)))
        return self._from_coords(
            Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(self.degree)
        )

    # -- roots --------------------------------------------------------------
    def eval_int_poly(self, coeffs: Sequence[int], x: "Scalar") -> "Scalar":
        acc = self.zero
        for a in reversed(list(coeffs)):
            acc = acc * x + a
        return acc

    def find_roots(self, poly: Sequence[int] | IntPolynomial) -> list["Scalar"]:
        """All distinct roots in this field of an integer polynomial, ordered
        by (sum of |coordinates|, coordinates)."""
        coeffs = list(poly.coeffs) if isinstance(poly, IntPolynomial) else [int(c) for c in poly]
        if self.p:
            coeffs = _trim([c % self.p for c in coeffs])
        else:
            coeffs = _trim(coeffs)
        if not coeffs:
            raise ValueError("the zero polynomial has every element as a root")
        if len(coeffs) == 1:
            return []
        if self.p:
            q = self.order
            if q > MAX_ENUMERATION:
                raise ValueError(f"field of order {q} too large to enumerate for roots")
            roots = [x for x in self.elements() if not self.eval_int_poly(coeffs, x)]
        elif self.degree == 1:
            roots = [self(r) for r in _rational_roots(coeffs)]
        else:
            roots = self._number_field_roots(coeffs)
        return sorted(roots, key=_root_key)

    def _number_field_roots(self, coeffs: list[int]) -> list["Scalar"]:
        import numpy as np

        thetas = poly_roots_complex(self.extension)
        groots: list[complex] = []
        for z in poly_roots_complex(coeffs):
            if all(abs(z - w) > 1e-7 for w in groots):
                groots.append(z)
        n = self.degree
        vander = np.array([[th**i for i in range(n)] for th in thetas], dtype=complex)
        vinv = np.linalg.inv(vander)
        gr = np.array(groots, dtype=complex)
        found: dict[tuple, Scalar] = {}
        # any root r of g satisfies sigma_j(r) = some root of g for every embedding j
        for assignment in itertools.product(range(len(groots)), repeat=n):
            vals = gr[list(assignment)]
            c = vinv @ vals
            if np.any(np.abs(c.imag) > 1e-6 * (1 + np.abs(c.real))):
                continue
            cand = self._from_coords(Fraction(float(v)).limit_denominator(10**6) for v in c.real)
            if cand.c in found:
                continue
            if not self.eval_int_poly(coeffs, cand):
                found[cand.c] = cand
        return list(found.values())

    def embeddings(self) -> list["Embedding"]:
        return complex_embeddings(self)


def _root_key(s: "Scalar"):
    return (sum(abs(c) for c in s.c), s.c)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _rational_roots(coeffs: list[int]) -> list[Fraction]:
    roots = []
    while coeffs and coeffs[0] == 0:
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return roots
    for num in _divisors(coeffs[0]):
        for den in _divisors(coeffs[-1]):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand in roots:
                    continue
                acc = Fraction(0)
                for a in reversed(coeffs):
                    acc = acc * cand + a
                if acc == 0:
                    roots.append(cand)
    return roots


class Scalar:
    """An element of a :class:`FieldSpec`, stored as coordinates in the
    power basis 1, theta, ..., theta^(n-1)."""

    __slots__ = ("field", "c")

    def __init__(self, field: FieldSpec, coords: tuple):
        self.field = field
        self.c = coords

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field is self.field or other.field == self.field:
                return other
            raise FieldMismatch(f"cannot combine elements of {self.field} and {other.field}")
        if isinstance(other, (int, Fraction)):
            return self.field._from_coords([other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        if p:
            return Scalar(self.field, tuple((a + b) % p for a, b in zip(self.c, o.c)))
        return Scalar(self.field, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        if p:
            return Scalar(self.field, tuple(-a % p for a in self.c))
        return Scalar(self.field, tuple(-a for a in self.c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        if p:
            return Scalar(self.field, tuple((a - b) % p for a, b in zip(self.c, o.c)))
        return Scalar(self.field, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = self.field
        p = f.p
        n = f.degree
        if n == 1:
            v = self.c[0] * o.c[0]
            return Scalar(f, (v % p,) if p else (v,))
        conv = [0] * (2 * n - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(o.c):
                conv[i + j] += a * b
        out = conv[:n]
        for k in range(n - 1):
            hi = conv[n + k]
            if hi == 0:
                continue
            red = f._red[k]
            for i in range(n):
                out[i] += hi * red[i]
        if p:
            out = [v % p for v in out]
        return Scalar(f, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        f = self.field
        p = f.p
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if f.degree == 1:
            return Scalar(f, (_binv(p, self.c[0]),))
        # extended Euclid of self.c against the modulus
        m = [_norm_base(p, c) for c in f.extension]
        r0, r1 = m, _trim(list(self.c))
        s0, s1 = [], [_norm_base(p, 1)]
        while len(r1) > 1:
            q, r = _pdivmod(p, r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(p, s0, _pmul(p, q, s1))
        # r1 is a nonzero constant since the modulus is irreducible
        inv = _binv(p, r1[0])
        coords = [c * inv for c in s1]
        return f._from_coords(coords)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = self.field.one
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.c == other.c
        if isinstance(other, (int, Fraction)):
            try:
                return self.c == self.field._from_coords([other]).c
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        if self.field.degree == 1 and self.field.p == 0:
            return hash(self.c[0])
        return hash((self.field._key, self.c))

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.c[1:])

    def is_integral_coords(self) -> bool:
        return self.field.p != 0 or all(Fraction(c).denominator == 1 for c in self.c)

    def to_complex(self, theta: complex) -> complex:
        acc = 0j
        for c in reversed(self.c):
            acc = acc * theta + float(c)
        return acc

    def format(self, var: str | None = None) -> str:
        """Render as a polynomial in the field generator, e.g. ``-t-1``."""
        var = var or self.field.gen_name
        parts = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if a == 0:
                continue
            if self.field.p and a > self.field.p // 2 and self.field.p > 2:
                a = a - self.field.p
            neg = a < 0
            mag = -a if neg else a
            mag_s = str(mag)
            if k == 0:
                body = mag_s
            else:
                mono = var if k == 1 else f"{var}^{k}"
                if mag == 1:
                    body = mono
                elif isinstance(mag, Fraction) and mag.denominator != 1:
                    body = f"{mag.numerator}*{mono}/{mag.denominator}"
                else:
                    body = f"{mag_s}*{mono}"
            parts.append(("-" if neg else "+", body))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += sign + body
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Scalar({self.format()})"


class Embedding:
    """A complex embedding theta -> root of the extension polynomial."""

    def __init__(self, field: FieldSpec, theta: complex):
        self.field = field
        self.theta = theta

    def __call__(self, s: Scalar | int | Fraction) -> complex:
        if not isinstance(s, Scalar):
            return complex(float(s))
        if s.field != self.field:
            raise FieldMismatch("embedding applied to a foreign element")
        return s.to_complex(self.theta)

    @property
    def is_real(self) -> bool:
        return self.theta.imag == 0

    def __repr__(self):
        return f"Embedding(theta -> {self.theta:.12g})"


def complex_embeddings(field: FieldSpec) -> list[Embedding]:
    if field.p:
        raise NoEmbeddings(f"{field} has positive characteristic")
    if not field.extension:
        return [Embedding(field, 0j)]
    return [Embedding(field, z) for z in poly_roots_complex(field.extension)]
