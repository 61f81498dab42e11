"""Ext^1 between representations as derivations modulo inner derivations."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .exactfield import ExactMatrix, FieldSpec, Scalar, rref
from .repmod import Representation, _check_pair, commutator_map


@dataclass
class ExtReport:
    dim_hom: int
    dim_der: int
    dim_inner: int
    cocycle_basis: list[dict[str, ExactMatrix]] = dc_field(default_factory=list)
    system_shape: tuple[int, int] = (0, 0)

    @property
    def dim_ext1(self) -> int:
        return self.dim_der - self.dim_inner


def unknown_count(M: Representation, N: Representation) -> int:
    return len(M.algebra.gens) * N.dim * M.dim


def derivation_system(M: Representation, N: Representation) -> ExactMatrix:
    """Linear constraints on the stacked matrices D_g : M -> N.

    Unknown index of D_g[a][b] is g_index * (n*m) + a*m + b, with n = dim N and
    m = dim M. Each relation contributes an n*m block of rows: the entries of
    sum over terms c*w and positions w = u g v of rho_N(u) D_g rho_M(v).
    """
    _check_pair(M, N)
    field = M.field
    n, m = N.dim, M.dim
    nm = n * m
    ncols = len(M.algebra.gens) * nm
    zero = field.zero
    rows: list[list[Scalar]] = []
    for rel in M.algebra.relations:
        block = [[zero] * ncols for _ in range(nm)]
        for w, c in rel.terms.items():
            for k, g in enumerate(w):
                U = N.word(w[:k]).rows
                V = M.word(w[k + 1:]).rows
                base = g * nm
                for a in range(n):
                    for i in range(n):
                        ua = U[i][a]
                        if not ua:
                            continue
                        cu = c * ua
                        for b in range(m):
                            Vb = V[b]
                            col = base + a * m + b
                            for j in range(m):
                                vb = Vb[j]
                                if vb:
                                    row = block[i * m + j]
                                    row[col] = row[col] + cu * vb
        rows.extend(block)
    return ExactMatrix(field, rows, ncols=ncols)


def inner_vectors(M: Representation, N: Representation) -> list[tuple[Scalar, ...]]:
    """delta_theta for theta running over the unit matrices E_ab : M -> N,
    each flattened in the derivation-system unknown order."""
    C = commutator_map(M, N)
    return [tuple(row[k] for row in C) for k in range(N.dim * M.dim)]


def _split(vec, M: Representation, N: Representation) -> dict[str, ExactMatrix]:
    n, m = N.dim, M.dim
    nm = n * m
    out = {}
    for gi, g in enumerate(M.algebra.gens):
        chunk = vec[gi * nm:(gi + 1) * nm]
        out[g] = ExactMatrix(M.field, [chunk[a * m:(a + 1) * m] for a in range(n)])
    return out


class _Echelon:
    """Incrementally maintained echelon basis used to complete a subspace."""

    def __init__(self, field: FieldSpec):
        self.field = field
        self.rows: list[tuple[int, list[Scalar]]] = []

    def reduce(self, v) -> list[Scalar]:
        v = list(v)
        for pc, row in self.rows:
            f = v[pc]
            if f:
                v = [x - f * y for x, y in zip(v, row)]
        return v

    def add(self, v) -> list[Scalar] | None:
        """Insert v; returns the reduced, normalised vector if it was new."""
        v = self.reduce(v)
        pc = next((i for i, x in enumerate(v) if x), None)
        if pc is None:
            return None
        inv = v[pc].inverse()
        v = [x * inv for x in v]
        self.rows.append((pc, v))
        return v


def ext1(M: Representation, N: Representation) -> ExtReport:
    """Ext^1_A(M, N) = Der(A, Hom(M, N)) / Inner with the full relation list."""
    _check_pair(M, N)
    field = M.field
    system = derivation_system(M, N)
    _, kernel = rref(system)
    inner = inner_vectors(M, N)
    ech = _Echelon(field)
    dim_inner = sum(1 for v in inner if ech.add(v) is not None)
    cocycles = []
    for v in kernel:
        r = ech.add(v)
        if r is not None:
            cocycles.append(_split(r, M, N))
    nm = N.dim * M.dim
    return ExtReport(
        dim_hom=nm - dim_inner,
        dim_der=len(kernel),
        dim_inner=dim_inner,
        cocycle_basis=cocycles,
        system_shape=system.shape,
    )


def satisfies_derivation(M: Representation, N: Representation, D: dict[str, ExactMatrix]) -> bool:
    """Check delta(r) = 0 for every relation by the Leibniz rule on words."""
    field = M.field
    n, m = N.dim, M.dim
    for rel in M.algebra.relations:
        total = ExactMatrix.zeros(field, n, m)
        for w, c in rel.terms.items():
            acc = ExactMatrix.zeros(field, n, m)
            for k, g in enumerate(w):
                acc = acc + N.word(w[:k]) @ D[M.algebra.gens[g]] @ M.word(w[k + 1:])
            total = total + acc.scale(c)
        if not total.is_zero():
            return False
    return True


def ext_matrix(family, threads: int | None = None) -> tuple[list[list[int]], list[list[int]]]:
    """(Ext^0, Ext^1) dimension matrices for all ordered pairs of a family."""
    r = len(family)
    pairs = [(i, j) for i in range(r) for j in range(r)]

    def run(ij):
        rep = ext1(family[ij[0]], family[ij[1]])
        return rep.dim_hom, rep.dim_ext1

    if threads and threads > 1 and r > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            vals = list(ex.map(run, pairs))
    else:
        vals = [run(ij) for ij in pairs]
    E0 = [[0] * r for _ in range(r)]
    E1 = [[0] * r for _ in range(r)]
    for (i, j), (h, e) in zip(pairs, vals):
        E0[i][j] = h
        E1[i][j] = e
    return E0, E1


__all__ = [
    "ExtReport",
    "derivation_system",
    "ext1",
    "ext_matrix",
    "inner_vectors",
    "satisfies_derivation",
    "unknown_count",
]

from .bruteforce import ext1_bruteforce  # noqa: E402

__all__.append("ext1_bruteforce")
