from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from stringrank.errors import DecodeFailure, EmptyGraph, InvalidString, RadiusMismatch
from stringrank.generators import make_rng, random_components, random_string
from stringrank.modules import is_isomorphic, parse_word, string_module
from stringrank.strings import (
    StringGraph, ball_stats, ball_stats_sampled, coarsen, decode_path, graph_of_module,
    graph_of_strings, graph_power, graph_to_module, hoeffding_epsilon, profile_distance_bs,
    right_endpoint_count, stringconvergence_check, word_edges,
)


def test_single_trivial_word(gp2):
    G = graph_of_strings([parse_word("@v")], gp2)
    assert G.num_vertices == 1 and len(G) == 1


def test_inverse_words_agree(gp2):
    S = parse_word("x y^-1 x")
    assert graph_of_strings([S], gp2) == graph_of_strings([S.inverse()], gp2)


def test_two_words_sorted(gp2):
    G = graph_of_strings([parse_word("x y^-1"), parse_word("y")], gp2)
    assert len(G) == 2
    assert list(G.components) == sorted(G.components, key=lambda w: w.sort_key())


def test_invalid_word_rejected(gp2):
    with pytest.raises(InvalidString):
        graph_of_strings([parse_word("x x")], gp2)


def test_edges_decode(alg):
    rng = make_rng(0)
    for _ in range(30):
        w = random_string(alg, int(rng.integers(1, 7)), rng)
        assert decode_path(w.length + 1, word_edges(w), w.vertex if w.is_trivial else None) == w


def test_decode_failure():
    with pytest.raises(DecodeFailure):
        decode_path(3, [(0, 1, "x"), (0, 2, "y")])
    with pytest.raises(DecodeFailure):
        decode_path(1, [])


def test_graph_module_roundtrip(alg):
    rng = make_rng(1)
    for _ in range(50):
        labs = random_components(alg, rng, max_dim=30)
        G = graph_of_strings(labs, alg)
        M = graph_to_module(G, alg)
        assert graph_of_module(M) == G


def test_graph_of_single_string(gp2):
    S = parse_word("x y^-1")
    M = graph_to_module(graph_of_strings([S], gp2), gp2)
    assert is_isomorphic(M, string_module(S, gp2))
    Sv = graph_to_module(graph_of_strings([parse_word("@v")], gp2), gp2)
    assert Sv.dim == 1


def test_isolated_vertices_stats(kr2):
    G = graph_of_strings([parse_word("@a")] * 5, kr2)
    for r in (0, 1, 3):
        p = ball_stats(G, r)
        assert list(p.freqs.values()) == [1]


def test_length_one_stats(gp2):
    p = ball_stats(graph_of_strings([parse_word("x")], gp2), 1)
    assert sorted(p.freqs.values()) == [Fraction(1, 2), Fraction(1, 2)]


def test_frequencies_sum_to_one(alg):
    rng = make_rng(2)
    G = graph_of_strings(random_components(alg, rng, max_dim=50), alg)
    for r in range(4):
        assert sum(ball_stats(G, r).freqs.values()) == 1


def test_empty_graph():
    with pytest.raises(EmptyGraph):
        ball_stats(StringGraph(()), 1)


def test_coarsen_matches_direct(alg):
    rng = make_rng(3)
    G = graph_of_strings(random_components(alg, rng, max_dim=60), alg)
    p3 = ball_stats(G, 3)
    for r in range(3):
        assert coarsen(p3, r).freqs == ball_stats(G, r).freqs
    with pytest.raises(RadiusMismatch):
        coarsen(ball_stats(G, 1), 2)


def test_sampling_exhaustive_and_single_type(gp2):
    G = graph_of_strings([parse_word("x y^-1 x"), parse_word("y")], gp2)
    s = ball_stats_sampled(G, 2, samples=G.num_vertices, exhaustive=True)
    assert s.profile.freqs == ball_stats(G, 2).freqs
    H = graph_of_strings([parse_word("@v")] * 3, gp2)
    for seed in range(5):
        assert ball_stats_sampled(H, 2, 10, seed=seed).profile.freqs == ball_stats(H, 2).freqs


def test_sampling_seeded(gp2):
    G = graph_of_strings([parse_word("x y^-1 x y^-1")] * 4, gp2)
    a = ball_stats_sampled(G, 1, 50, seed=9)
    b = ball_stats_sampled(G, 1, 50, seed=9)
    assert a.profile.freqs == b.profile.freqs
    assert a.epsilon == pytest.approx(hoeffding_epsilon(50, 0.05))


def test_right_endpoints(gp2):
    S = parse_word("x y^-1")
    G = graph_of_strings([S], gp2)
    assert right_endpoint_count(S, G) == (1, Fraction(1, 3))
    assert right_endpoint_count(S, graph_power(G, 2))[0] == 2
    assert right_endpoint_count(parse_word("x y^-1 x"), G)[0] == 0


def test_right_endpoints_inverse_occurrence(gp2):
    # S^-1 read along the path also places a right endpoint
    G = graph_of_strings([parse_word("y x^-1")], gp2)
    assert right_endpoint_count(parse_word("x y^-1"), G)[0] == 1


def test_profile_distance(gp2):
    G = graph_of_strings([parse_word("x")], gp2)
    H = graph_of_strings([parse_word("@v")], gp2)
    p, q = ball_stats(G, 1), ball_stats(H, 1)
    assert profile_distance_bs(p, p) == 0
    assert profile_distance_bs(p, q) == 1
    with pytest.raises(RadiusMismatch):
        profile_distance_bs(p, ball_stats(G, 2))


def test_convergence_reports(gp2):
    S = parse_word("x y^-1")
    G = graph_of_strings([S], gp2)
    H = graph_of_strings([parse_word("y")], gp2)
    steady = stringconvergence_check([graph_power(G, k) for k in range(1, 7)], [S])
    assert steady.looks_cauchy
    alternating = stringconvergence_check([G, H] * 4, [S])
    assert not alternating.looks_cauchy
    assert steady.to_csv().startswith("n,")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(["x", "y", "x y^-1", "y x^-1 y", "@v"]), min_size=1, max_size=6),
       st.integers(1, 3))
def test_power_invariance(words, k):
    from stringrank import gf
    from stringrank.algebra import gelfand_ponomarev
    R = gelfand_ponomarev(gf.field_make(2))
    G = graph_of_strings([parse_word(w) for w in words], R)
    assert ball_stats(graph_power(G, k), 2).freqs == ball_stats(G, 2).freqs
