from fractions import Fraction

import numpy as np
import pytest

from stringrank import gf
from stringrank import limitlab as L
from stringrank.algebra import gelfand_ponomarev
from stringrank.errors import BadEpsilon, BudgetExceeded, ReducibleF, TooSmall, UnsupportedRawModule
from stringrank.generators import make_rng, random_components, random_string
from stringrank.modules import BandData, band_module, canonical_string, parse_word, string_module


def band_word(R):
    return parse_word("x y^-1") if "x" in R.quiver.arrow else parse_word("p r^-1")


def long_word(R, n):
    a, b = ("x", "y") if "x" in R.quiver.arrow else ("p", "r")
    return parse_word(" ".join([a, f"{b}^-1"] * n))


def test_constants():
    assert L.block_length(Fraction(1, 2)) == 6
    assert L.jordan_block(Fraction(1, 3)) == 3
    with pytest.raises(BadEpsilon):
        L.as_eps(0)
    with pytest.raises(BadEpsilon):
        L.as_eps(1)


def test_short_string_single_piece(alg):
    S = long_word(alg, 2)
    T = L.tile_string_module(S, Fraction(1, 2), alg)
    assert len(T.pieces) == 1 and T.coverage == 1


def test_long_string_tiling(alg):
    e = Fraction(1, 2)
    S = long_word(alg, 30)
    T = L.tile_string_module(S, e, alg)
    m = L.block_length(e)
    chk = L.verify_tiling(alg.field, T, string_module(S, alg).action.values())
    assert chk.ok, chk.failures
    assert chk.expansion <= Fraction(m + 2, m)
    assert 1 - chk.coverage <= Fraction(m, S.length + 1)


def test_band_regimes(alg):
    e = Fraction(1, 2)
    W = band_word(alg)
    small = L.tile_band_module(BandData(W, [1, 1], 1), e, alg)
    assert small.meta["regime"] == "small" and len(small.pieces) == 1
    big = BandData(W, [1, 1], 40)
    T = L.tile_band_module(big, e, alg)
    assert T.meta["regime"] == "large V"
    chk = L.verify_tiling(alg.field, T, band_module(big, alg).action.values())
    assert chk.ok and chk.expansion <= 1 + e


def test_band_long_word(F2):
    # GP(2,2) and Kronecker only have length-2 band words
    R = gelfand_ponomarev(F2, 3, 3)
    e = Fraction(1, 2)
    longb = BandData(parse_word("x y^-1 " * 13 + "x x y^-1"), [1, 1], 2)
    T = L.tile_band_module(longb, e, R)
    assert T.meta["regime"] == "long word"
    chk = L.verify_tiling(F2, T, band_module(longb, R).action.values())
    assert chk.ok, chk.failures


def test_jordan(F2, F3):
    e = Fraction(1, 3)
    T = L.tile_jordan([1, 1], 5, e, F2)
    assert len(T.pieces) == 1
    k = L.jordan_block(e)
    T = L.tile_jordan([1, 1], 40, e, F2)
    chk = L.verify_tiling(F2, T, [L.jordan_operator([1, 1], 40, F2)])
    assert chk.ok
    assert chk.expansion == Fraction(k + 1, k)
    assert 1 - chk.coverage <= Fraction(k, 40)
    T3 = L.tile_jordan([1, 0, 1], 15, Fraction(1, 4), F3)
    assert L.verify_tiling(F3, T3, [L.jordan_operator([1, 0, 1], 15, F3)]).ok
    with pytest.raises(ReducibleF):
        L.tile_jordan([1, 0, 1], 3, e, F2)


def test_verifier_catches_dependence(F2):
    X = L.jordan_operator([1, 1], 4, F2)
    bad = L.Tiling([(gf.identity(4), "a"), (gf.identity(4)[:, :1], "b")], Fraction(1, 2), 4, 10)
    chk = L.verify_tiling(F2, bad, [X])
    assert not chk.ok and "independence" in chk.failures


def test_invariant_subspace(F2):
    n = 6
    shift = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        shift[i + 1, i] = 1
    V = gf.identity(n)[:, :3]
    W = L.find_invariant_subspace(F2, V, [shift])
    assert W.shape[1] == 2
    assert L.find_invariant_subspace(F2, gf.identity(n), [shift]).shape[1] == n
    W = L.find_invariant_subspace(F2, V, [shift], budgets=[Fraction(1, 2)])
    assert W.shape[1] >= (1 - Fraction(1, 2)) * 3
    with pytest.raises(BudgetExceeded):
        L.find_invariant_subspace(F2, V, [shift], budgets=[Fraction(1, 10)])


def test_epsilon_tiles(gp2):
    S = canonical_string(parse_word("x y^-1"))
    T = canonical_string(parse_word("y"))
    assert L.epsilon_tiles([S], [S], Fraction(1, 10)) == (True, 1)
    assert L.epsilon_tiles([S], [S] * 5 + [T], Fraction(1, 5)) == (True, 5)
    ok, _ = L.epsilon_tiles([T], [S] * 5, Fraction(1, 5))
    assert not ok
    raw = string_module(S, gp2)
    raw.components = None
    with pytest.raises(UnsupportedRawModule):
        L.epsilon_tiles(raw, [S], Fraction(1, 5))


def test_catalog(gp2):
    cat = L.build_tile_catalog(gp2, Fraction(1, 2), string_cap=3)
    names = [str(l) for l in cat.labels]
    assert "@v" in names[0] and "x" in names and "y" in names
    assert len(set(names)) == len(names)
    tiny = L.build_tile_catalog(gp2, Fraction(1, 2), string_cap=1)
    assert [l.is_trivial for l in tiny.labels] == [True]


def test_catalog_bands_unique(kr3):
    cat = L.build_tile_catalog(kr3, Fraction(1, 2), string_cap=3, band_cap=5)
    names = [str(l) for l in cat.labels]
    assert len(set(names)) == len(names)
    assert any("f=" in n for n in names)


def test_iso_identity(alg):
    M = random_components(alg, make_rng(0), max_dim=60)
    cert = L.epsilon_isomorphism(M, M, Fraction(1, 10), alg)
    assert isinstance(cert, L.IsoCertificate) and cert.achieved == 0
    assert L.verify_certificate(cert, M, M, alg).ok


def test_iso_drop_component(alg):
    rng = make_rng(1)
    M = random_components(alg, rng, max_dim=80) + [canonical_string(random_string(alg, 1, rng))]
    N = M[:-1]
    dim = sum(w.length + 1 for w in M)
    eps = Fraction(M[-1].length + 1, dim)
    cert = L.epsilon_isomorphism(M, N, eps, alg)
    assert isinstance(cert, L.IsoCertificate)
    assert L.verify_certificate(cert, M, N, alg).ok


def test_iso_disjoint_letters(kr2):
    M = [canonical_string(parse_word("p"))] * 3
    N = [canonical_string(parse_word("r"))] * 3
    res = L.epsilon_isomorphism(M, N, Fraction(9, 10), kr2)
    assert isinstance(res, L.NoCertificate)


def test_verifier_rejects_tampering(gp2):
    M = [canonical_string(parse_word("x y^-1 x"))]
    cert = L.epsilon_isomorphism(M, M, Fraction(1, 10), gp2)
    cert.uncovered_m = Fraction(0)
    cert.pairs = cert.pairs[:0]
    assert not L.verify_certificate(cert, M, M, gp2).ok


def test_schedule():
    assert L.tolerance_schedule(Fraction(1, 20)) == Fraction(1, 10)


def test_band_to_string(alg):
    B = BandData(band_word(alg), [1, 1], 3)
    lb, cert = L.band_to_string_approx(B, Fraction(1, 2), alg)
    assert len(lb) == 3
    assert cert.achieved <= Fraction(1, 2)
    assert L.verify_certificate(cert, L.band_paths(B), lb, alg).ok
    with pytest.raises(TooSmall):
        L.band_to_string_approx(BandData(band_word(alg), [1, 1], 1), Fraction(1, 10), alg)


def test_band_to_string_long_word(F3):
    R = gelfand_ponomarev(F3, 3, 3)
    B = BandData(parse_word("x x y^-1 x y^-1"), [1, 1], 2)
    kappa = Fraction(B.vdim, B.dim())
    lb, cert = L.band_to_string_approx(B, kappa, R)
    assert len(lb) == 2 and lb[0].length == 3
    assert cert.achieved <= kappa
    assert L.verify_certificate(cert, L.band_paths(B), lb, R).ok


def test_split(gp2):
    W = parse_word("x y^-1")
    S = canonical_string(parse_word("x"))
    assert L.split_band_string([S, S], 5)[0] == []
    b3 = BandData(W, [1, 1], 2)  # dim 4
    small, rest = L.split_band_string([S, b3], 5)
    assert small == [b3] and rest == [S]
    small, rest = L.split_band_string([b3], 4)
    assert small == [] and rest == [b3]
