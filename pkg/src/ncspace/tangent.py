"""Tangent-space graphs of module families, hull skeletons and the
noncommutative height."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateInput, NoEmbeddings
from .exactfield import FieldSpec, IntPolynomial, char_poly, complex_embeddings, poly_roots_complex
from .extcalc import ext_matrix
from .repmod import Representation


def thread_cap() -> int | None:
    """Worker count from NCSPACE_THREADS (unset or < 2 means serial)."""
    raw = os.environ.get("NCSPACE_THREADS", "").strip()
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        return None
    return n if n > 1 else None


@dataclass(frozen=True)
class TangentGraph:
    labels: tuple[str, ...]
    ext0: tuple[tuple[int, ...], ...]
    ext1: tuple[tuple[int, ...], ...]

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self.ext1

    @property
    def size(self) -> int:
        return len(self.labels)

    def permuted(self, perm: Sequence[int]) -> "TangentGraph":
        """The graph of the family reordered as ``[family[p] for p in perm]``."""
        labels = tuple(self.labels[p] for p in perm)
        e0 = tuple(tuple(self.ext0[p][q] for q in perm) for p in perm)
        e1 = tuple(tuple(self.ext1[p][q] for q in perm) for p in perm)
        return TangentGraph(labels, e0, e1)


def tangent_graph(family: Sequence[Representation], threads: int | None = None) -> TangentGraph:
    if not family:
        raise DegenerateInput("a tangent graph needs a nonempty family")
    labels = [m.label for m in family]
    if len(set(labels)) != len(labels):
        raise DegenerateInput("family labels must be distinct")
    E0, E1 = ext_matrix(list(family), threads if threads is not None else thread_cap())
    return TangentGraph(tuple(labels), tuple(map(tuple, E0)), tuple(map(tuple, E1)))


@dataclass(frozen=True)
class HullSkeleton:
    """Generator counts of the tangent-level hull: power-series generators on
    the diagonal, bimodule generators off it."""

    labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    def render(self) -> list[list[str]]:
        r = len(self.counts)
        out = []
        for i in range(r):
            row = []
            for j in range(r):
                c = self.counts[i][j]
                names = ", ".join(f"t_{i + 1}{j + 1}^{k + 1}" for k in range(c))
                if i == j:
                    row.append(f"k<<{names}>>" if c else "k")
                else:
                    row.append(f"<{names}>" if c else "0")
            out.append(row)
        return out


def hull_skeleton(g: TangentGraph) -> HullSkeleton:
    return HullSkeleton(g.labels, g.ext1)


def adjacency_char_poly(g: TangentGraph) -> IntPolynomial:
    return char_poly([list(r) for r in g.adjacency])


def eigenvalues(adjacency: Sequence[Sequence[int]], tol: float = 1e-9) -> list[complex]:
    return poly_roots_complex(char_poly([list(r) for r in adjacency]), tol)


def spectral_radius(adjacency: Sequence[Sequence[int]]) -> float:
    if all(v == 0 for r in adjacency for v in r):
        return 0.0
    return max(abs(z) for z in eigenvalues(adjacency))


def nc_height(g: TangentGraph | Sequence[Sequence[int]], field: FieldSpec, mode: str = "single") -> float:
    """Largest eigenvalue modulus of the adjacency matrix.

    ``single`` returns it as is; ``product`` raises it to the number of
    complex embeddings of ``field``.
    """
    if mode not in ("single", "product"):
        raise ValueError(f"unknown height mode {mode!r}")
    if field.characteristic != 0:
        raise NoEmbeddings(f"{field} has positive characteristic; pass a characteristic-0 field")
    adj = g.adjacency if isinstance(g, TangentGraph) else g
    rho = spectral_radius(adj)
    if mode == "product":
        return rho ** len(complex_embeddings(field))
    return rho


def export_dot(g: TangentGraph) -> str:
    lines = ["digraph tangent {"]
    for i, lab in enumerate(g.labels):
        lines.append(f'  n{i} [label="{_escape(lab)}"];')
    for i in range(g.size):
        for j in range(g.size):
            m = g.ext1[i][j]
            if m:
                lines.append(f'  n{i} -> n{j} [label="{m}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')
