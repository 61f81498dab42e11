import random

import pytest
from hypothesis import given, settings, strategies as st

from ncspace.errors import (
    ConstantUnresolvable,
    InvalidAction,
    ParseError,
    RelationViolation,
    ShapeError,
    UnboundGenerator,
    UnknownGenerator,
)
from ncspace.exactfield import ExactMatrix, FieldSpec
from ncspace.presentation import (
    GroupActionSpec,
    NcPolynomial,
    crossed_product,
    format_source,
    parse,
    parse_field,
    parse_ncpoly,
)

from conftest import FIXTURES, load, valid_fixtures


def test_mu3_source():
    alg, mods = load("mu3.ncs")
    assert alg.gens == ("x", "y", "sigma")
    assert len(alg.relations) == 4
    assert set(alg.central_elements) == {"r", "s", "t"}
    assert mods["Mgen"].dim == 3


def test_minimal_source():
    alg, mods = parse("field Fp 7; algebra A { gens x; rel x^2 - 3; }")
    assert alg.gens == ("x",) and len(alg.relations) == 1 and mods == {}


def test_zeta3_over_f7_resolves():
    alg, _ = parse("field Fp 7 bind zeta3 root_of x^2+x+1; algebra A { gens x; rel x - zeta3; }")
    z = alg.field.constants()["zeta3"]
    assert z in (alg.field(2), alg.field(4))


def test_zeta3_over_f5_unresolvable():
    with pytest.raises(ConstantUnresolvable):
        parse("field Fp 5 bind zeta3 root_of x^2+x+1; algebra A { gens x; }")


def test_syntax_error_has_location():
    with pytest.raises(ParseError) as ei:
        parse("field Q;\nalgebra A {\n  gens x;\n  rel x^2 + ;\n}")
    assert ei.value.line == 4


def test_unknown_generator():
    with pytest.raises(UnknownGenerator):
        parse("field Q; algebra A { gens x; rel x*y; }")


def test_wrong_size_matrix():
    src = "field Q; algebra A { gens x; } module M dim 2 { x = [[1, 0]]; }"
    with pytest.raises(ShapeError):
        parse(src)


def test_missing_generator_matrix():
    src = "field Q; algebra A { gens x, y; } module M dim 1 { x = [[1]]; }"
    with pytest.raises(UnboundGenerator):
        parse(src)


def test_identity_sigma_violates():
    with pytest.raises(RelationViolation) as ei:
        load("mu3_bad.ncs")
    assert "sigma*x" in str(ei.value)


def test_central_generators_get_commutators():
    alg, _ = parse("field Q; algebra A { gens x, y, u; central u; rel x*y - y*x; }")
    texts = {r.format() for r in alg.relations}
    assert len(alg.relations) == 3
    assert "u*x - x*u" in texts and "u*y - y*u" in texts


def test_crossed_product_mu3_matches_fixture():
    alg, _ = load("mu3.ncs")
    F = alg.field
    z = F.constants()["zeta3"]
    cp = crossed_product(GroupActionSpec(F, ("x", "y"), "sigma", 3, {"x": z, "y": z * z}))
    assert cp.gens == alg.gens
    assert len(cp.relations) == 4
    for r in alg.relations:
        assert r in cp.relations or -r in cp.relations


def test_crossed_product_sign_action():
    Q = FieldSpec(0)
    cp = crossed_product(GroupActionSpec(Q, ("x",), "tau", 2, {"x": -1}))
    assert [r.format() for r in cp.relations] == ["tau*x + x*tau", "tau*tau - 1"]
    with pytest.raises(InvalidAction):
        crossed_product(GroupActionSpec(Q, ("x",), "tau", 2, {"x": 2}))


def test_crossed_product_trivial_action():
    Q = FieldSpec(0)
    cp = crossed_product(GroupActionSpec(Q, ("x", "y"), "s", 1, {}))
    assert len(cp.relations) == 2 + 1 + 1


@pytest.mark.parametrize("nbase", [1, 2, 3, 4])
def test_crossed_product_relation_count(nbase):
    F = FieldSpec(7)
    base = tuple(f"x{i}" for i in range(nbase))
    cp = crossed_product(GroupActionSpec(F, base, "s", 3, {b: 2 for b in base}))
    assert len(cp.relations) == nbase + 1 + nbase * (nbase - 1) // 2


def test_eval_examples():
    alg, mods = load("mu3.ncs")
    M = mods["Mgen"]
    assert M.evaluate(parse_ncpoly("x*y - y*x", alg)).is_zero()
    assert M.evaluate(parse_ncpoly("sigma^3 - 1", alg)).is_zero()
    alg5, mods5 = load("quad_d2_p5inert.ncs")
    assert mods5["M"].evaluate(parse_ncpoly("x^2 - 2", alg5)).is_zero()


def test_eval_missing_generator():
    F = FieldSpec(0)
    p = NcPolynomial.generator(F, ("x", "y"), "y")
    with pytest.raises(UnboundGenerator):
        p.evaluate({"x": ExactMatrix.identity(F, 2)}, 2)


@pytest.mark.parametrize("name", valid_fixtures())
def test_round_trip(name):
    alg, mods = load(name)
    text = format_source(alg, mods)
    alg2, mods2 = parse(text)
    assert alg2 == alg
    assert set(mods2) == set(mods)
    for k in mods:
        assert mods2[k].matrices == mods[k].matrices
    assert format_source(alg2, mods2) == text


def _rand_poly(rng, F, gens):
    terms = []
    for _ in range(rng.randint(0, 4)):
        w = [rng.choice(gens) for _ in range(rng.randint(0, 3))]
        terms.append((F(rng.randint(-3, 3)), w))
    return NcPolynomial.from_words(F, gens, terms)


@pytest.mark.parametrize("name", ["mu3.ncs", "quad_d2_p2.ncs", "curve_f7.ncs"])
def test_eval_is_algebra_morphism(name):
    alg, mods = load(name)
    M = next(iter(mods.values()))
    rng = random.Random(2)
    for _ in range(100):
        p, q = _rand_poly(rng, alg.field, alg.gens), _rand_poly(rng, alg.field, alg.gens)
        assert M.evaluate(p * q) == M.evaluate(p) @ M.evaluate(q)
        assert M.evaluate(p + q) == M.evaluate(p) + M.evaluate(q)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.integers(-5, 5), st.lists(st.sampled_from(["a", "b", "c"]), max_size=4)), max_size=5))
def test_ncpoly_format_parse_round_trip(terms):
    alg, _ = parse("field Q; algebra A { gens a, b, c; }")
    p = NcPolynomial.from_words(alg.field, alg.gens, terms)
    assert parse_ncpoly(p.format(), alg) == p


def test_field_parsing():
    assert parse_field("Q").degree == 1
    K = parse_field("Qext x^2-2")
    assert K.degree == 2 and K.gen * K.gen == K(2)
    F4 = parse_field("Fpext 2 x^2+x+1")
    assert F4.order == 4


def test_fixtures_directory_has_sources():
    assert len(list(FIXTURES.glob("*.ncs"))) >= 10
