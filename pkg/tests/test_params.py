from fractions import Fraction

import pytest

from stringrank import params as P
from stringrank.errors import (
    BudgetExceeded, InvalidString, NoTileWithinKappa, NotIsolating, ParseError,
    UnknownDecomposition,
)
from stringrank.generators import make_rng, random_components
from stringrank.modules import (
    canonical_string, direct_sum, module_from_components, parse_word, power,
    regular_module, simple_module, string_module, submodule,
)
from stringrank.pp import string_counting_pair
from stringrank.rank import random_trim


def test_gen_number_examples(gp2, alg):
    Mx = string_module(parse_word("x"), gp2)
    assert P.gen_count(power(Mx, 2)) == 2 == P.gen_count_bruteforce(power(Mx, 2))
    Rr = regular_module(alg)
    assert P.gen_count(Rr) == 1  # generated by 1
    v = alg.quiver.vertices[0]
    assert P.gen_count(simple_module(alg, v)) == 1
    assert P.gen_number(regular_module(gp2)) == Fraction(1, 3)


def test_gen_count_matches_bruteforce(alg):
    rng = make_rng(0)
    for _ in range(10):
        M = module_from_components(random_components(alg, rng, max_dim=5), alg)
        if alg.field.order ** M.dim <= 1024:
            assert P.gen_count(M) == P.gen_count_bruteforce(M)


def test_indep_examples(gp2):
    Rr = regular_module(gp2)
    assert P.indep_number(Rr).count == 1
    assert P.indep_number(power(Rr, 2)).count == 2
    assert P.indep_number(simple_module(gp2, "v")).count == 0
    r = P.indep_number(power(Rr, 2), mode="randomized", seed=3)
    assert r.count <= r.upper == 2
    with pytest.raises(BudgetExceeded):
        P.indep_number(power(Rr, 4), cap=64)


def test_weight_examples(gp2):
    Q = string_module(parse_word("x y^-1"), gp2)
    assert P.weight(power(Q, 3), Q) == 1
    Pm = string_module(parse_word("x y^-1 x"), gp2)
    Q2 = string_module(parse_word("y x^-1 y"), gp2)
    assert P.weight(direct_sum(Q2, Pm), Q2) == Fraction(1, 2)
    raw = direct_sum(Q, Q)
    raw.components = None
    with pytest.raises(UnknownDecomposition):
        P.weight(raw, Q)


def test_weight_pair_route(gp2):
    S = parse_word("x y^-1 x")
    Q = string_module(S, gp2)
    M = direct_sum(power(Q, 2), string_module(parse_word("y"), gp2))
    pair = string_counting_pair(S, gp2)
    assert P.weight(M, Q, pair=pair) == Fraction(8, 10)
    # a pair that also counts the other summand is rejected
    bad = string_counting_pair(parse_word("x"), gp2)
    with pytest.raises(NotIsolating):
        P.weight(direct_sum(Q, string_module(parse_word("x"), gp2)), Q, pair=bad)


def test_hom_params(gp2, kr2):
    S = simple_module(kr2, "a")
    assert P.hom_param_L(S, S) == 1
    Mx = string_module(parse_word("x"), gp2)
    assert P.hom_param_L(Mx, Mx) == 1
    My = string_module(parse_word("y"), gp2)
    from stringrank.modules import hom_dim
    assert hom_dim(Mx, direct_sum(Mx, My)) == hom_dim(Mx, Mx) + hom_dim(Mx, My)


def test_parameter_ids(gp2):
    for text in ("g", "i", "weight:x y^-1", "homL:x", "homR:@v", "rank:[[x, y]]"):
        p = P.parse_parameter(text, gp2)
        assert str(P.parse_parameter(str(p), gp2)) == str(p)
    with pytest.raises(ParseError):
        P.parse_parameter("nope:x", gp2)
    with pytest.raises(InvalidString):
        P.parse_parameter("weight:x x", gp2)


def test_evaluate(gp2):
    M = module_from_components([canonical_string(parse_word("x"))] * 2, gp2)
    assert P.evaluate(P.parse_parameter("g", gp2), M) == Fraction(1, 2)
    assert P.evaluate(P.parse_parameter("rank:[[x]]", gp2), M) == Fraction(1, 2)
    assert P.evaluate(P.parse_parameter("weight:x", gp2), M) == 1


def test_stability_probes(gp2):
    Mx = string_module(parse_word("x"), gp2)
    M = power(Mx, 6)
    delta = Fraction(1, 6)
    A = P.parse_parameter("rank:[[x, y]]", gp2)
    rep = P.stability_probe(A, M, delta, trials=10, seed=1)
    for g in rep.trim_gaps:
        assert g <= 2 * Fraction(1, 2) * 2  # at most 2 eps l with eps <= 1/2
    g = P.stability_probe(P.parse_parameter("g", gp2), Mx, delta, trials=3, max_power=4)
    assert g.cauchy_modulus == 0
    w = P.stability_probe(P.parse_parameter("weight:x", gp2), Mx, delta, max_power=3)
    assert w.trim_gaps == [] and w.cauchy_modulus == 0
    assert g.to_csv().startswith("probe,index,value")


def test_trim_gap_bound_exact(alg):
    rng = make_rng(4)
    M = module_from_components(random_components(alg, rng, max_dim=30), alg)
    p = P.ParameterId("rank", P.parse_parameter("rank:[[" + alg.quiver.arrows[0].label + "]]", alg).payload)
    for steps in (1, 3):
        N = submodule(M, random_trim(M, steps, rng))
        eps = 1 - Fraction(N.dim, M.dim)
        assert abs(P.evaluate(p, M) - P.evaluate(p, N)) <= 2 * eps


@pytest.fixture(scope="module")
def tester_g(gp2):
    return P.build_tester(P.parse_parameter("g", gp2), Fraction(1, 2), gp2)


def test_tester_roundtrip(tester_g):
    s = tester_g.dumps()
    T2 = P.load_tester(s)
    assert T2.dumps() == s


def test_tester_covers_tiles(tester_g):
    assert len(tester_g.values) == len(tester_g.tiles) == len(tester_g.profiles)
    assert all(len(p) == len(tester_g.suite) for p in tester_g.profiles)


def test_tester_exact_tile(tester_g):
    T = tester_g
    for j in range(0, len(T.tiles), 7):
        M = power(T.tile_module(j), 3)
        res = P.run_tester(T, P.exact_estimates(T, M))
        assert res.radius == 0 and res.value == T.values[j]


def test_tester_noisy(tester_g):
    T = tester_g
    rng = make_rng(5)
    M = power(T.tile_module(4), 5)
    exact = P.evaluate(T.parameter, M)
    res = P.run_tester(T, P.noisy_estimates(T, M, rng))
    assert abs(res.value - exact) <= T.config.epsilon


def test_tester_flags_far(tester_g):
    T = tester_g
    est = P.exact_estimates(T, T.tile_module(0))
    est[0] += 3 * T.kappa * T.suite[0].cols
    with pytest.raises(NoTileWithinKappa):
        P.run_tester(T, est)


def test_larger_epsilon_smaller_tester(gp2):
    small = P.build_tester(P.ParameterId("g"), Fraction(1, 2), gp2, P.TesterConfig(Fraction(1, 2), tile_dim=3))
    big = P.build_tester(P.ParameterId("g"), Fraction(1, 2), gp2, P.TesterConfig(Fraction(1, 2), tile_dim=5))
    assert len(small.tiles) < len(big.tiles) and len(small.suite) <= len(big.suite)


def test_estimates_parse():
    assert P.parse_estimates("1/2\n# c\n3/4\n") == [Fraction(1, 2), Fraction(3, 4)]
    with pytest.raises(ParseError):
        P.parse_estimates("abc\n")
