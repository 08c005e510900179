import numpy as np
import pytest

from stringrank import gf
from stringrank.algebra import (
    Arrow, Quiver, elem_mul, emit_algebra_spec, gelfand_ponomarev, identity_rmatrix,
    parse_algebra_spec, rmatrix_emit, rmatrix_parse, string_algebra_validate,
)
from stringrank.errors import (
    ConditionThreeViolation, ConditionTwoViolation, MatrixSyntaxError, NotMonomial, NotNilpotent,
    ParseError, TooManyArrows, UnknownPath,
)
from stringrank.rank import random_element


def test_gp_basis(gp2):
    assert [p.name() for p in gp2.path_basis] == ["e_v", "x", "y"]
    assert gp2.q == 2 and gp2.dim == 3


def test_gp_higher_nilpotency(F2):
    R = gelfand_ponomarev(F2, 3, 2)
    assert [p.name() for p in R.path_basis] == ["e_v", "x", "y", "x*x"]
    assert R.q == 3


def test_kronecker_basis(kr2):
    assert [p.name() for p in kr2.path_basis] == ["e_a", "e_b", "p", "r"]
    assert kr2.q == 2


def test_three_loops_rejected(F2):
    Q = Quiver(("v",), (Arrow("x", "v", "v"), Arrow("y", "v", "v"), Arrow("z", "v", "v")))
    with pytest.raises(TooManyArrows):
        string_algebra_validate(Q, [], F2)


def test_condition_two(F2):
    # a -> b with two arrows leaving b and nothing forbidden
    Q = Quiver(("a", "b", "c", "d"), (Arrow("x", "a", "b"), Arrow("y", "b", "c"), Arrow("z", "b", "d")))
    with pytest.raises(ConditionTwoViolation):
        string_algebra_validate(Q, [], F2)
    string_algebra_validate(Q, [("y", "x")], F2)


def test_condition_three(F2):
    Q = Quiver(("a", "b", "c", "d"), (Arrow("x", "a", "c"), Arrow("y", "b", "c"), Arrow("z", "c", "d")))
    with pytest.raises(ConditionThreeViolation):
        string_algebra_validate(Q, [], F2)


def test_not_nilpotent(F2):
    Q = Quiver(("v",), (Arrow("x", "v", "v"),))
    with pytest.raises(NotNilpotent):
        string_algebra_validate(Q, [], F2)


def test_bad_relation(F2):
    Q = Quiver(("a", "b"), (Arrow("x", "a", "b"),))
    with pytest.raises(NotMonomial):
        string_algebra_validate(Q, [("x", "x")], F2)


def test_products(gp2):
    x = gp2.arrow_element("x")
    y = gp2.arrow_element("y")
    e = gp2.one()
    assert elem_mul(x, x).is_zero()
    assert elem_mul(x, y).is_zero()
    assert elem_mul(e, e) == e
    assert elem_mul(e, x) == x == elem_mul(x, e)


def test_associativity_and_unit(alg):
    rng = np.random.default_rng(5)
    one = alg.one()
    for _ in range(200):
        a, b, c = (random_element(alg, rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert one * a == a == a * one


def test_long_products_vanish(alg):
    for p in alg.all_paths(alg.q):
        el = alg.one()
        for lab in p:
            el = el * alg.arrow_element(lab)
        assert el.is_zero()


def test_rmatrix_parse(gp2):
    A = rmatrix_parse("[[x]]", gp2)
    assert A.shape == (1, 1) and A[0, 0] == gp2.arrow_element("x")
    B = rmatrix_parse("[[e_v - x, y],[0, e_v]]", gp2)
    assert B.shape == (2, 2)
    assert B[0, 0] == gp2.one() - gp2.arrow_element("x")
    assert rmatrix_parse(rmatrix_emit(B), gp2) == B


def test_rmatrix_errors(gp2):
    with pytest.raises(UnknownPath):
        rmatrix_parse("[[z]]", gp2)
    with pytest.raises(MatrixSyntaxError) as info:
        rmatrix_parse("[[x,]]", gp2)
    assert info.value.line == 1 and info.value.column is not None
    with pytest.raises(ParseError):
        rmatrix_parse("[[x], [x, y]]", gp2)


def test_rmatrix_roundtrip_random(alg):
    from stringrank.rank import random_rmatrix
    rng = np.random.default_rng(6)
    for _ in range(50):
        A = random_rmatrix(alg, int(rng.integers(1, 4)), int(rng.integers(1, 4)), rng)
        assert rmatrix_parse(rmatrix_emit(A), alg) == A


def test_identity_rmatrix(gp2):
    assert rmatrix_parse("[[e_v, 0],[0, e_v]]", gp2) == identity_rmatrix(gp2, 2)


def test_spec_roundtrip(alg):
    text = emit_algebra_spec(alg)
    assert parse_algebra_spec(text) == alg


def test_spec_file():
    R = parse_algebra_spec("field 2 1\nvertices v\narrow x: v -> v\narrow y: v -> v\n"
                           "forbid x x\nforbid y y\nforbid x y\nforbid y x\n")
    assert R == gelfand_ponomarev(gf.field_make(2))


def test_spec_errors():
    with pytest.raises(ParseError) as info:
        parse_algebra_spec("field 2 1\nvertices a b\narrow p a -> b\n")
    assert info.value.line == 3
    with pytest.raises(ParseError):
        parse_algebra_spec("vertices a\n")
