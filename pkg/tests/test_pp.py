from fractions import Fraction

import pytest

from stringrank.algebra import rmatrix_parse
from stringrank.errors import NotIsolating
from stringrank.generators import enumerate_strings, make_rng, random_components, random_string
from stringrank.modules import (
    canonical_string, component_module, direct_sum, hom_dim, module_from_components, parse_word,
    power, string_module,
)
from stringrank.pp import (
    PPFormula, dimension_function_audit, emit_pair, free_formula, hom_formula, parse_pair, pp_count,
    pp_dim, pp_dim_direct, pp_dim_formula, pp_subspace, string_counting_pair,
    weight_from_isolating_pair, zero_formula,
)
from stringrank.rank import random_rmatrix
from stringrank.strings import graph_of_module, right_endpoint_count


def test_extreme_formulas(alg):
    M = module_from_components(random_components(alg, make_rng(0), max_dim=20), alg)
    assert pp_subspace(M, zero_formula(alg)).shape[1] == 0
    assert pp_count(M, free_formula(alg)) == M.dim
    assert pp_dim(M, free_formula(alg, 2)) == 2
    assert pp_dim(M, zero_formula(alg, 2)) == 0


def test_divisibility(gp2):
    Mx = string_module(parse_word("x"), gp2)
    phi = PPFormula(rmatrix_parse("[[e_v, -x]]", gp2), 1)
    assert pp_count(Mx, phi) == 1
    assert pp_dim_direct(Mx, phi) == pp_dim_formula(Mx, phi) == Fraction(1, 2)


def test_two_methods_random(alg):
    rng = make_rng(1)
    for _ in range(30):
        M = module_from_components(random_components(alg, rng, max_dim=25, band_prob=0.3), alg)
        m, n = (int(x) for x in rng.integers(1, 4, 2))
        t = int(rng.integers(1, n + 1))
        phi = PPFormula(random_rmatrix(alg, m, n, rng), t)
        assert pp_dim_direct(M, phi) == pp_dim_formula(M, phi)


def test_dimension_function(alg):
    rng = make_rng(2)
    M = module_from_components(random_components(alg, rng, max_dim=25), alg)
    forms = [PPFormula(random_rmatrix(alg, 1, 2, rng), 1) for _ in range(6)]
    rep = dimension_function_audit(M, forms, trials=50, seed=0)
    assert rep.ok, rep.violations


def test_counting_pair_examples(gp2):
    S = parse_word("x y^-1")
    pair = string_counting_pair(S, gp2)
    MS = string_module(S, gp2)

    def gap(N):
        return pp_count(N, pair.phi) - pp_count(N, pair.psi)

    assert gap(MS) == 1
    assert gap(power(MS, 3)) == 3
    assert gap(string_module(parse_word("@v"), gp2)) == 0


def test_counting_pair_disjoint_letters(kr2):
    pair = string_counting_pair(parse_word("p"), kr2)
    N = string_module(parse_word("r"), kr2)
    assert pp_count(N, pair.phi) == pp_count(N, pair.psi)


def test_counting_pair_random(alg):
    rng = make_rng(3)
    for _ in range(25):
        S = random_string(alg, int(rng.integers(1, 5)), rng)
        if S.is_trivial:
            continue
        labs = random_components(alg, rng, max_dim=40)
        if rng.random() < 0.5:
            labs.append(canonical_string(S))
        N = module_from_components(labs, alg)
        pair = string_counting_pair(S, alg)
        count, _ = right_endpoint_count(S, graph_of_module(N))
        assert pp_count(N, pair.phi) - pp_count(N, pair.psi) == count


def test_hom_formula(alg):
    rng = make_rng(4)
    for C in enumerate_strings(alg, 2):
        Cm = component_module(C, alg)
        phi = hom_formula(Cm)
        for _ in range(3):
            M = module_from_components(random_components(alg, rng, max_dim=15, band_prob=0.3), alg)
            assert pp_count(M, phi) == hom_dim(Cm, M)


def test_isolating_weight(gp2):
    S = parse_word("x y^-1")
    Q = string_module(S, gp2)
    pair = string_counting_pair(S, gp2)
    assert weight_from_isolating_pair(Q, Q, pair) == 1
    P = string_module(parse_word("@v"), gp2)
    M = direct_sum(power(Q, 2), P)
    assert weight_from_isolating_pair(M, Q, pair, others=[P]) == Fraction(6, 7)
    with pytest.raises(NotIsolating):
        weight_from_isolating_pair(M, P, pair)


def test_pair_text_roundtrip(gp2):
    pair = string_counting_pair(parse_word("x y^-1 x"), gp2)
    back = parse_pair(emit_pair(pair), gp2)
    assert back.phi.matrix == pair.phi.matrix and back.psi.matrix == pair.psi.matrix
