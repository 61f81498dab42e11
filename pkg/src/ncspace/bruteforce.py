"""Exhaustive Ext^1 count over tiny finite fields.

Nothing here shares code with the linear-algebra engine: candidates are
enumerated as arrays of field-element indices, derivations are applied to each
relation word by word, and dimensions come from counting solutions.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import TooLarge, Unsupported
from .exactfield import FieldSpec
from .repmod import Representation, _check_pair

MAX_UNKNOWNS = 12
MAX_CANDIDATES = 3**12


class _Tables:
    def __init__(self, field: FieldSpec):
        q = field.order
        self.q = q
        elems = [field.element_from_index(i) for i in range(q)]
        self.add = np.array([[field.element_index(a + b) for b in elems] for a in elems], dtype=np.int16)
        self.mul = np.array([[field.element_index(a * b) for b in elems] for a in elems], dtype=np.int16)
        self.neg = np.array([field.element_index(-a) for a in elems], dtype=np.int16)
        self.field = field

    def index_matrix(self, m) -> np.ndarray:
        return np.array([[self.field.element_index(x) for x in row] for row in m.rows], dtype=np.int16)

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Product of stacks of index matrices, broadcasting leading axes."""
        k = A.shape[-1]
        out = None
        for l in range(k):
            term = self.mul[A[..., :, l][..., :, None], B[..., l, :][..., None, :]]
            out = term if out is None else self.add[out, term]
        return out

    def scale(self, c: int, A: np.ndarray) -> np.ndarray:
        return self.mul[c, A]


def _candidates(q: int, u: int) -> np.ndarray:
    idx = np.arange(q**u, dtype=np.int64)
    out = np.empty((q**u, u), dtype=np.int16)
    for k in range(u):
        out[:, k] = idx % q
        idx //= q
    return out


def _log_q(count: int, q: int) -> int:
    d = round(math.log(count, q))
    if q**d != count:
        raise AssertionError(f"{count} solutions is not a power of {q}")
    return d


def ext1_bruteforce(M: Representation, N: Representation) -> int:
    """dim Ext^1(M, N) by counting derivation tuples and inner derivations."""
    _check_pair(M, N)
    field = M.field
    if not field.is_finite:
        raise Unsupported("the exhaustive oracle needs a finite field")
    gens = M.algebra.gens
    n, m = N.dim, M.dim
    u = len(gens) * n * m
    q = field.order
    if u > MAX_UNKNOWNS or q**u > MAX_CANDIDATES:
        raise TooLarge(f"{q}^{u} candidate tuples exceed the exhaustive search limit")
    T = _Tables(field)
    rhoM = [T.index_matrix(M.matrices[g]) for g in gens]
    rhoN = [T.index_matrix(N.matrices[g]) for g in gens]
    one = field.element_index(field.one)
    eyeN = np.zeros((n, n), dtype=np.int16)
    np.fill_diagonal(eyeN, one)

    cand = _candidates(q, u)
    C = cand.shape[0]
    D = cand.reshape(C, len(gens), n, m)
    ok = np.ones(C, dtype=bool)
    for rel in M.algebra.relations:
        total = np.zeros((C, n, m), dtype=np.int16)
        for w, c in rel.terms.items():
            # fold the word left to right: delta(ug) = delta(u) rho_M(g) + rho_N(u) D_g
            delta = np.zeros((C, n, m), dtype=np.int16)
            prefN = eyeN
            for g in w:
                delta = T.add[T.matmul(delta, rhoM[g]), T.matmul(prefN, D[:, g])]
                prefN = T.matmul(prefN, rhoN[g])
            total = T.add[total, T.scale(field.element_index(c), delta)]
        ok &= ~total.reshape(C, -1).any(axis=1)
    dim_der = _log_q(int(ok.sum()), q)

    thetas = _candidates(q, n * m).reshape(-1, n, m)
    images = []
    for g in range(len(gens)):
        left = T.matmul(rhoN[g], thetas)
        right = T.matmul(thetas, rhoM[g])
        images.append(T.add[left, T.neg[right]].reshape(len(thetas), -1))
    flat = np.concatenate(images, axis=1).astype(np.int64)
    weights = q ** np.arange(flat.shape[1], dtype=np.int64)
    codes = flat @ weights
    dim_inner = _log_q(len(np.unique(codes)), q)
    return dim_der - dim_inner
