"""Acceptance criteria. Each test carries a ``criterion`` marker; the terminal
summary prints one PASS/FAIL line per criterion."""

from __future__ import annotations

import itertools
import json
import math
import random

import numpy as np
import pytest

from ncspace.bruteforce import ext1_bruteforce
from ncspace.errors import TooLarge
from ncspace.exactfield import ExactMatrix, char_poly, complex_embeddings
from ncspace.extcalc import ext1, ext_matrix
from ncspace.heights import ProjectivePoint, absolute_and_log, weil_height
from ncspace.intersect import (
    buchberger,
    intersection_number,
    make_divisor,
    parse_commutative,
    quotient_dimension,
    reduce,
)
from ncspace.presentation import parse_field
from ncspace.repmod import classify_family, extend_scalars
from ncspace.tangent import eigenvalues, nc_height, tangent_graph

from conftest import load, valid_fixtures

TOL = 1e-9
crit = pytest.mark.criterion


def _report(**kw):
    for k, v in kw.items():
        print(f"  {k}: {v}")


# ---------------------------------------------------------------- criterion 1

@crit(1, "mu3 example: generic Ext=2, axis Ext=1, adjacency, eigenvalues {4,1,1}, H^nc=4")
def test_criterion_1_mu3():
    alg, mods = load("mu3.ncs")
    generic = ext1(mods["Mgen"], mods["Mgen"]).dim_ext1
    axis = ext1(mods["M1"], mods["M2"]).dim_ext1
    g = tangent_graph([mods["M1"], mods["M2"], mods["M3"]])
    eig = sorted(z.real for z in eigenvalues(g.adjacency))
    H = nc_height(g, alg.field, "single")
    _report(generic=generic, axis=axis, adjacency=g.adjacency, eigenvalues=eig, H=H)
    expected_adj = ((2, 1, 1), (1, 2, 1), (1, 1, 2))
    failures = []
    if generic != 2:
        failures.append(f"Ext1(M,M) = {generic}, expected 2")
    if axis != 1:
        failures.append(f"Ext1(M_(1,0), M_(zeta,0)) = {axis}, expected 1")
    if g.adjacency != expected_adj:
        failures.append(f"adjacency {g.adjacency}, expected {expected_adj}")
    if not all(abs(a - b) < TOL for a, b in zip(eig, [1.0, 1.0, 4.0])):
        failures.append(f"eigenvalues {eig}, expected [1, 1, 4]")
    if abs(H - 4) > TOL:
        failures.append(f"H^nc = {H}, expected 4")
    assert not failures, "; ".join(failures)


# ---------------------------------------------------------------- criterion 2

REFERENCE_QUAD = {
    ("quad_d2_p7split.ncs", "M", "M"): 0,
    ("quad_d2_p5inert.ncs", "M", "M"): 0,
    ("quad_d3_p3tame.ncs", "M1", "M2"): 1,
    ("quad_d3_p3tame.ncs", "M2", "M3"): 1,
    ("quad_d3_p3tame.ncs", "M3", "M2"): 0,
    ("quad_d3_p3tame.ncs", "M3", "M3"): 1,
    ("quad_d2_p2.ncs", "M1", "M2"): 2,
    ("quad_d2_p2.ncs", "M2", "M3"): 2,
    ("quad_d2_p2.ncs", "M3", "M2"): 2,
    ("quad_d2_p2.ncs", "M3", "M3"): 2,
}
REFERENCE_HULL = {
    "quad_d3_p3tame.ncs": [[1, 1, 1], [1, 1, 1], [0, 0, 1]],
    "quad_d2_p2.ncs": [[2, 2, 2], [2, 2, 2], [0, 0, 2]],
}


@crit(2, "quadratic example: Ext dims agree with the brute-force oracle (reference values reported)")
def test_criterion_2_quadratic():
    mismatches = []
    for (fx, a, b), ref in REFERENCE_QUAD.items():
        _, mods = load(fx)
        engine = ext1(mods[a], mods[b]).dim_ext1
        try:
            oracle = ext1_bruteforce(mods[a], mods[b])
        except TooLarge:
            oracle = None
        note = "" if engine == ref else "  <- differs from reference"
        print(f"  {fx} Ext1({a},{b}): engine={engine} oracle={oracle} reference={ref}{note}")
        if oracle is None:
            # outside the exhaustive limit; the reference value is the only check
            if engine != ref:
                mismatches.append((fx, a, b))
        elif engine != oracle:
            mismatches.append((fx, a, b))
    for fx, ref in REFERENCE_HULL.items():
        _, mods = load(fx)
        fam = list(mods.values())
        _, E1 = ext_matrix(fam)
        oracle = [[ext1_bruteforce(m, n) for n in fam] for m in fam]
        print(f"  {fx} family: engine={E1} oracle={oracle} reference hull counts={ref}")
        if E1 != oracle:
            mismatches.append((fx, "family"))
    assert not mismatches, mismatches


# ---------------------------------------------------------------- criterion 3

CURVES = ["curve_q_zeta3.ncs", "curve_f7.ncs", "curve_f4.ncs", "curve_f3.ncs"]


def _oracle_or_none(M, N):
    try:
        return ext1_bruteforce(M, N)
    except Exception:
        return None


@crit(3, "curve example: Ext(M,N')=1, Ext(M,M)=1/2 vs oracle; reference adjacency char poly")
def test_criterion_3_curve():
    failures = []
    for fx in CURVES:
        alg, mods = load(fx)
        p = alg.field.characteristic
        M, N, Np = mods["M"], mods["N"], mods["Np"]
        e_mm, e_mn, e_mnp = (ext1(M, X).dim_ext1 for X in (M, N, Np))
        o_mm, o_mn, o_mnp = (_oracle_or_none(M, X) for X in (M, N, Np))
        print(
            f"  {fx}: Ext(M,M)={e_mm} [oracle {o_mm}], Ext(M,N)={e_mn} [oracle {o_mn}, reference 2], "
            f"Ext(M,N')={e_mnp} [oracle {o_mnp}, reference 1]"
        )
        for e, o, what in ((e_mm, o_mm, "M,M"), (e_mn, o_mn, "M,N"), (e_mnp, o_mnp, "M,N'")):
            if o is not None and e != o:
                failures.append(f"{fx} Ext({what}) engine {e} != oracle {o}")
        expected_mm = 2 if p == 3 else 1
        if e_mm != expected_mm:
            failures.append(f"{fx} Ext(M,M) = {e_mm}, expected {expected_mm}")
        if p != 3 and e_mnp != 1:
            failures.append(f"{fx} Ext(M,N') = {e_mnp}, expected 1")
    reference_adj = [[1, 2, 1], [1, 1, 2], [2, 1, 1]]
    cp = char_poly(reference_adj)
    print(f"  reference adjacency char poly (constant first): {cp.coeffs}")
    if cp.coeffs != (-4, -3, -3, 1):
        failures.append(f"char poly {cp.coeffs}")
    assert not failures, "; ".join(failures)


# ---------------------------------------------------------------- criterion 4

def _small_pairs():
    for fx in valid_fixtures():
        alg, mods = load(fx)
        if alg.field.characteristic not in (2, 3) or alg.field.order > 3:
            continue
        for a, b in itertools.product(mods, repeat=2):
            M, N = mods[a], mods[b]
            if len(alg.gens) * M.dim * N.dim <= 12:
                yield fx, M, N


@crit(4, "oracle equivalence over F2/F3 (at least 10 pairs)")
def test_criterion_4_oracle_equivalence():
    count = 0
    bad = []
    for fx, M, N in _small_pairs():
        e, o = ext1(M, N).dim_ext1, ext1_bruteforce(M, N)
        count += 1
        if e != o:
            bad.append((fx, M.label, N.label, e, o))
    print(f"  pairs checked: {count}")
    assert count >= 10
    assert not bad, bad


# ---------------------------------------------------------------- criterion 5

BASE_CHANGE = {"Fp 2": "Fpext 2 x^2+x+1", "Fp 3": "Fpext 3 x^2+1", "Q": "Qext x^2-2"}


@crit(5, "base-change invariance F2->F4, F3->F9, Q->Q(sqrt2)")
def test_criterion_5_base_change():
    checked = 0
    for fx in valid_fixtures():
        alg, mods = load(fx)
        src = alg.field.describe().split(" bind")[0]
        if src not in BASE_CHANGE:
            continue
        target = parse_field(BASE_CHANGE[src])
        fam = list(mods.values())
        before = ext_matrix(fam)
        after = ext_matrix([extend_scalars(m, target) for m in fam])
        print(f"  {fx}: {src} -> {target}: {before[1]} / {after[1]}")
        assert before == after, fx
        checked += 1
    assert checked >= 3


# ---------------------------------------------------------------- criterion 6

@crit(6, "Mueller property on all fixtures")
def test_criterion_6_muller():
    for fx in valid_fixtures():
        alg, mods = load(fx)
        if not alg.central_elements:
            continue
        rep = classify_family(list(mods.values()))
        labels = list(mods)
        fibre_of = {m: k for k, f in enumerate(rep.fibres) for m in f.members}
        for i, j in itertools.product(range(len(labels)), repeat=2):
            if rep.ext1[i][j]:
                assert fibre_of[labels[i]] == fibre_of[labels[j]], (fx, labels[i], labels[j])
        for f in rep.fibres:
            if len(f.members) > 1:
                idx = [labels.index(m) for m in f.members]
                assert any(rep.ext1[i][j] for i in idx for j in idx if i != j), (fx, f.members)
        assert rep.muller_consistent, fx


# ---------------------------------------------------------------- criterion 7

def _points(n=20, seed=7):
    rng = random.Random(seed)
    pts = []
    while len(pts) < n:
        c = [rng.randint(-40, 40) for _ in range(rng.randint(2, 4))]
        if any(c):
            pts.append(c)
    return pts


@crit(7, "heights: (4:6:2)=3, tower coherence, (sqrt2:1) absolute sqrt2, scaling invariance")
def test_criterion_7_heights():
    Q = parse_field("Q")
    assert weil_height(ProjectivePoint(Q, [4, 6, 2])) == pytest.approx(3, abs=TOL)
    for d in (2, 3, -1):
        K = parse_field(f"Qext x^2-({d})")
        for c in _points():
            hq = weil_height(ProjectivePoint(Q, c))
            hk = weil_height(ProjectivePoint(K, c))
            assert abs(hk - hq**2) < TOL * max(1.0, hk), (d, c)
    K = parse_field("Qext x^2-2")
    H, h = absolute_and_log(ProjectivePoint(K, [K.gen, 1]))
    assert abs(H - math.sqrt(2)) < TOL
    assert abs(h - 0.5 * math.log(2)) < TOL
    for field in (Q, K):
        base = [field(3), field(5), field(7)] if field is Q else [K.gen + 1, K(3), K.gen]
        h0 = weil_height(ProjectivePoint(field, base))
        for c in (2, 3, -5):
            hc = weil_height(ProjectivePoint(field, [s * c for s in base]))
            assert abs(hc - h0) < TOL * max(1.0, h0)


# ---------------------------------------------------------------- criterion 8

def _numeric_rank(field, vectors):
    # independent of the exact engine: embed into C and use an SVD rank
    sigma = complex_embeddings(field)[0]
    return int(np.linalg.matrix_rank(np.array([[sigma(s) for s in v] for v in vectors]), tol=1e-8))


def _word_span_rank(rep, max_len=4):
    gens = list(rep.algebra.gens)
    mats = []
    for L in range(max_len + 1):
        for w in itertools.product(range(len(gens)), repeat=L):
            mats.append([s for row in rep.word(w).rows for s in row])
    return _numeric_rank(rep.field, mats)


@crit(8, "intersection: mu3 E.F = 9 with rank 9 (basis oracle); disjoint divisors give 0")
def test_criterion_8_intersection():
    alg, mods = load("mu3.ncs")
    field = alg.field
    vs = ("r", "s", "t")

    def f(t):
        return parse_commutative(t, field, vs)

    # oracle for the rank: x^i y^j sigma^k, 0 <= i,j,k < 3, acting on a generic fibre
    M = mods["Mgen"]
    x, y, s = (M.matrices[g] for g in ("x", "y", "sigma"))
    basis = []
    for i, j, k in itertools.product(range(3), repeat=3):
        P = ExactMatrix.identity(field, 3)
        for A, e in ((x, i), (y, j), (s, k)):
            for _ in range(e):
                P = P @ A
        basis.append([v for row in P.rows for v in row])
    rank = _numeric_rank(field, basis)
    print(f"  basis-enumeration rank: {rank}; all-words span: {_word_span_rank(M)}")
    assert rank == 9 == _word_span_rank(M)
    centre = [f("t^3 - r*s")]
    E, F = make_divisor("E", [f("s - 1")]), make_divisor("F", [f("t - 1")])
    assert intersection_number(E, F, rank, centre) == 9
    assert intersection_number(F, E, rank, centre) == 9
    far = make_divisor("G", [f("s - 2")])
    assert intersection_number(E, far, rank, centre) == 0


# ---------------------------------------------------------------- criterion 9

@crit(9, "property suites: inner in derivations, rank-nullity")
def test_criterion_9_inner_and_rank_nullity():
    from ncspace.extcalc import inner_vectors, satisfies_derivation, _split

    for fx in valid_fixtures():
        _, mods = load(fx)
        for M, N in itertools.product(mods.values(), repeat=2):
            rep = ext1(M, N)
            assert rep.dim_inner + rep.dim_hom == M.dim * N.dim
            assert rep.dim_inner <= rep.dim_der
            for v in inner_vectors(M, N):
                assert satisfies_derivation(M, N, _split(v, M, N))


@crit(9, "property suites: permutation equivariance of adjacency")
def test_criterion_9_permutation_equivariance():
    rng = random.Random(3)
    for fx in ("quad_d3_p3tame.ncs", "quad_d2_p2.ncs", "curve_f7.ncs", "plane_q.ncs"):
        _, mods = load(fx)
        fam = list(mods.values())
        g = tangent_graph(fam)
        perm = list(range(len(fam)))
        for _ in range(3):
            rng.shuffle(perm)
            assert tangent_graph([fam[p] for p in perm]) == g.permuted(perm)


@crit(9, "property suites: Buchberger idempotence")
def test_criterion_9_buchberger_idempotence():
    Q = parse_field("Q")
    vs = ("r", "s", "t")
    ideals = [
        ["t^3 - r*s", "r - 1", "s - 1", "t - 1"],
        ["t^3 - r*s", "s - 1", "t - 1"],
        ["r^2 + s^2 - 1", "r - s", "t^2 - r"],
        ["r*s - t", "s*t - r", "r*t - s"],
    ]
    for gens in ideals:
        polys = [parse_commutative(g, Q, vs) for g in gens]
        gb = buchberger(polys)
        assert buchberger(gb) == gb
        assert all(not reduce(p, gb) for p in polys)
        assert quotient_dimension(buchberger(list(reversed(polys)))) == quotient_dimension(gb)


@crit(9, "property suites: CLI determinism")
def test_criterion_9_cli_determinism(tmp_path, fixtures_dir):
    from ncspace.cli import main

    runs = [
        ["graph", str(fixtures_dir / "quad_d2_p2.ncs")],
        ["ext", str(fixtures_dir / "mu3.ncs"), "Mgen", "Mgen"],
        ["classify", str(fixtures_dir / "mu3.ncs")],
        ["height", "weil", "--field", "Qext x^2-2", "--coords", "t,1"],
    ]
    for k, argv in enumerate(runs):
        outs = []
        for rep in range(2):
            out = tmp_path / f"r{k}_{rep}.json"
            assert main(argv + ["--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
        assert b"\r" not in outs[0] and outs[0].endswith(b"\n")
        json.loads(outs[0])
