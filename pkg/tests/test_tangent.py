import random

import pytest

from ncspace.errors import DegenerateInput, NoEmbeddings
from ncspace.exactfield import FieldSpec, IntPolynomial
from ncspace.tangent import (
    TangentGraph,
    adjacency_char_poly,
    eigenvalues,
    export_dot,
    hull_skeleton,
    nc_height,
    tangent_graph,
    thread_cap,
)

from conftest import load, valid_fixtures

Q = FieldSpec(0)


def test_singleton_split_family():
    _, mods = load("quad_d2_p7split.ncs")
    g = tangent_graph([mods["M"]])
    assert g.ext1 == ((0,),) and g.ext0 == ((1,),)
    assert hull_skeleton(g).render() == [["k"]]
    assert export_dot(g) == 'digraph tangent {\n  n0 [label="M"];\n}\n'


def test_empty_and_duplicate_family():
    with pytest.raises(DegenerateInput):
        tangent_graph([])
    _, mods = load("quad_d2_p2.ncs")
    with pytest.raises(DegenerateInput):
        tangent_graph([mods["M1"], mods["M1"]])


def test_wild_hull_skeleton():
    _, mods = load("quad_d2_p2.ncs")
    g = tangent_graph(list(mods.values()))
    sk = hull_skeleton(g)
    assert sk.counts == g.ext1
    r = sk.render()
    assert r[0][0] == "k<<t_11^1, t_11^2>>"
    assert r[0][1] == "<t_12^1, t_12^2>"
    assert r[2][0] == "<t_31^1>"


def test_mu3_dot_has_nine_arrows():
    _, mods = load("mu3.ncs")
    g = tangent_graph([mods["M1"], mods["M2"], mods["M3"]])
    dot = export_dot(g)
    assert dot.count("->") == 9 and dot.count("[label=") == 12


def test_tame_dot_arrows():
    _, mods = load("quad_d3_p3tame.ncs")
    g = tangent_graph(list(mods.values()))
    dot = export_dot(g)
    arrows = {line.split(" [")[0].strip() for line in dot.splitlines() if "->" in line}
    expected = {f"n{i} -> n{j}" for i in range(3) for j in range(3) if g.ext1[i][j]}
    assert arrows == expected
    assert "n2 -> n0" not in arrows and "n2 -> n1" not in arrows


def test_nc_height_examples():
    assert nc_height([[2, 1, 1], [1, 2, 1], [1, 1, 2]], Q) == pytest.approx(4.0, abs=1e-9)
    assert nc_height([[0, 0], [0, 0]], Q) == 0.0
    # circulant with row sum 5: spectral radius 5, char poly x^3 - 6x^2 + 6x - 5
    adj = [[2, 2, 1], [1, 2, 2], [2, 1, 2]]
    assert adjacency_char_poly(TangentGraph(("a", "b", "c"), adj, adj)) == [-5, 6, -6, 1]
    assert nc_height(adj, Q) == pytest.approx(5.0, abs=1e-9)


def test_nc_height_modes():
    K = FieldSpec(0, [1, 1, 1])
    adj = [[2, 1, 1], [1, 2, 1], [1, 1, 2]]
    assert nc_height(adj, K, "product") == pytest.approx(16.0, abs=1e-9)
    assert nc_height(adj, K, "single") == pytest.approx(4.0, abs=1e-9)
    with pytest.raises(NoEmbeddings):
        nc_height(adj, FieldSpec(7))
    with pytest.raises(ValueError):
        nc_height(adj, Q, "bogus")


@pytest.mark.parametrize("name", valid_fixtures())
def test_eigen_residuals_and_permutation(name):
    _, mods = load(name)
    fam = list(mods.values())
    g = tangent_graph(fam)
    cp = adjacency_char_poly(g)
    for z in eigenvalues(g.adjacency):
        assert abs(cp(z)) < 1e-9 * (1 + cp.norm1())
    rng = random.Random(len(name))
    perm = list(range(len(fam)))
    rng.shuffle(perm)
    h = tangent_graph([fam[p] for p in perm])
    assert h == g.permuted(perm)
    assert adjacency_char_poly(h) == cp
    assert nc_height(h, Q) == pytest.approx(nc_height(g, Q), abs=1e-9)


def test_thread_cap(monkeypatch):
    monkeypatch.delenv("NCSPACE_THREADS", raising=False)
    assert thread_cap() is None
    monkeypatch.setenv("NCSPACE_THREADS", "4")
    assert thread_cap() == 4
    monkeypatch.setenv("NCSPACE_THREADS", "x")
    assert thread_cap() is None


def test_threaded_graph_matches_serial():
    _, mods = load("curve_f7.ncs")
    fam = list(mods.values())
    assert tangent_graph(fam, threads=3) == tangent_graph(fam)


def test_intpolynomial_equality():
    assert IntPolynomial([1, 2, 0]) == [1, 2]
