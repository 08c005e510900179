from fractions import Fraction

import numpy as np
import pytest

from stringrank import gf
from stringrank.algebra import identity_rmatrix, rmatrix_parse
from stringrank.errors import NotSubmodule, SuiteMismatch
from stringrank.generators import make_rng, random_components
from stringrank.modules import direct_sum, module_from_components, parse_word, power, string_module
from stringrank.rank import (
    TestSuite, blow_up, profile, profile_distance, random_rmatrix, random_trim, rk, sylvester_audit,
    trim_bound_check, weight_identity_check, weights,
)


def test_identity_blow_up(alg):
    M = module_from_components(random_components(alg, make_rng(0), max_dim=15), alg)
    assert (blow_up(M, identity_rmatrix(alg, 1)) == gf.identity(M.dim)).all()
    assert rk(M, identity_rmatrix(alg, 1)) == 1


def test_rank_of_x(gp2):
    Mx = string_module(parse_word("x"), gp2)
    X = blow_up(Mx, rmatrix_parse("[[x]]", gp2))
    assert X.shape == (2, 2) and gf.mat_rank(gp2.field, X) == 1
    assert rk(Mx, rmatrix_parse("[[x]]", gp2)) == Fraction(1, 2)


def test_block_diagonal_rank(alg):
    rng = make_rng(1)
    M = module_from_components(random_components(alg, rng, max_dim=20), alg)
    N = module_from_components(random_components(alg, rng, max_dim=20), alg)
    MN = direct_sum(M, N)
    for _ in range(10):
        A = random_rmatrix(alg, 2, 2, rng)
        assert gf.mat_rank(alg.field, blow_up(MN, A)) == \
            gf.mat_rank(alg.field, blow_up(M, A)) + gf.mat_rank(alg.field, blow_up(N, A))


def test_sylvester_audit(alg):
    M = module_from_components(random_components(alg, make_rng(2), max_dim=40, band_prob=0.3), alg)
    rep = sylvester_audit(M, trials=100, seed=3)
    assert rep.ok, rep.violations
    assert rep.checks == 1 + 3 * 100


def test_weight_identity_example(gp2):
    Mx = string_module(parse_word("x"), gp2)
    My = string_module(parse_word("y"), gp2)
    M = direct_sum(Mx, My)
    A = rmatrix_parse("[[x]]", gp2)
    assert rk(M, A) == Fraction(1, 4)
    assert weight_identity_check([(Mx, 1), (My, 1)], [A]).ok
    assert weight_identity_check([(Mx, 3)], [A]).ok


def test_weights_sum_to_one(alg):
    rng = make_rng(4)
    comps = [(string_module(lab, alg), int(rng.integers(1, 4)))
             for lab in set(random_components(alg, rng, max_dim=30))]
    assert sum(weights(comps)) == 1
    suite = TestSuite(alg, s=2, per_size=2, seed=0)
    assert weight_identity_check(comps, suite).ok


def test_profile_distance(gp2):
    suite = TestSuite(gp2, s=2, per_size=2, seed=0)
    Mx = string_module(parse_word("x"), gp2)
    p = profile(Mx, suite)
    assert profile_distance(p, p) == 0
    assert profile_distance(p, profile(power(Mx, 2), suite)) == 0
    rng = make_rng(5)
    ps = [profile(module_from_components(random_components(gp2, rng, max_dim=12), gp2), suite)
          for _ in range(3)]
    a, b, c = ps
    assert profile_distance(a, b) == profile_distance(b, a)
    assert profile_distance(a, c) <= profile_distance(a, b) + profile_distance(b, c)
    with pytest.raises(SuiteMismatch):
        profile_distance(p, profile(Mx, TestSuite(gp2, s=1)))


def test_suite_is_deterministic(alg):
    a = TestSuite(alg, s=2, per_size=2, seed=7)
    b = TestSuite(alg, s=2, per_size=2, seed=7)
    assert [str(A) for A in a] == [str(A) for A in b]


def test_trim_bound(alg):
    rng = make_rng(6)
    suite = TestSuite(alg, s=2, per_size=1, seed=0)
    M = module_from_components(random_components(alg, rng, max_dim=30), alg)
    assert trim_bound_check(M, gf.identity(M.dim), suite).ok
    for steps in (1, 2, 4):
        N = random_trim(M, steps, rng)
        if N.shape[1]:
            assert trim_bound_check(M, N, suite).ok


def test_trim_rejects_non_submodule(gp2):
    Mx = string_module(parse_word("x"), gp2)
    # the top of M(x) does not span a submodule
    top = np.array([[1], [0]]) if Mx.action["x"][1, 0] else np.array([[0], [1]])
    with pytest.raises(NotSubmodule):
        trim_bound_check(Mx, top, [identity_rmatrix(gp2, 1)])


def test_sparse_rank_matches_dense(alg):
    from stringrank.rank import blow_up_sparse
    rng = make_rng(8)
    for _ in range(20):
        M = module_from_components(random_components(alg, rng, max_dim=60, band_prob=0.3), alg)
        A = random_rmatrix(alg, 2, 3, rng)
        dense = blow_up(M, A)
        r, c, v = blow_up_sparse(M, A)
        S = np.zeros_like(dense)
        S[r, c] = v
        assert (S == dense).all()
        # reference rank without block splitting
        assert gf.mat_rank(alg.field, dense) == gf._dense_rank(alg.field, dense)
