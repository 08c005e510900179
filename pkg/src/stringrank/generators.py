"""Seeded generators for strings, bands and component sums.

All randomness comes from ``numpy.random.Generator`` objects (PCG64), so a
seed fixes every output on every platform.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import gf
from .algebra import StringAlgebra
from .errors import NotCyclic, ReducibleF
from .modules import (
    BandData,
    StringWord,
    canonical_band,
    canonical_string,
    check_band,
    is_string,
    letter_source,
    letter_target,
)


def make_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def letters_of(R: StringAlgebra) -> list:
    return [(a.label, s) for a in R.quiver.arrows for s in (1, -1)]


def extensions(R: StringAlgebra, S: StringWord) -> list:
    """Letters C with S C still a string (appended on the right)."""
    if S.is_trivial:
        return [c for c in letters_of(R) if letter_target(R, c) == S.vertex]
    out = []
    for c in letters_of(R):
        T = StringWord(S.letters + (c,))
        if letter_target(R, c) == letter_source(R, S.letters[-1]) and is_string(T, R):
            out.append(c)
    return out


def enumerate_strings(R: StringAlgebra, max_length: int, limit: int | None = None) -> list:
    """Canonical strings of length <= max_length, sorted by (length, key)."""
    found = {canonical_string(StringWord((), v)) for v in R.quiver.vertices}
    layer = [StringWord((), v) for v in R.quiver.vertices]
    for _ in range(max_length):
        nxt = []
        for S in layer:
            for c in extensions(R, S):
                T = StringWord(S.letters + (c,))
                nxt.append(T)
                found.add(canonical_string(T))
                if limit is not None and len(found) > limit:
                    return sorted(found, key=lambda w: w.sort_key())
        layer = nxt
    return sorted(found, key=lambda w: w.sort_key())


def enumerate_band_words(R: StringAlgebra, max_length: int) -> list:
    """Canonical primitive cyclic words of length <= max_length."""
    return list(_band_words(R, max_length))


@lru_cache(maxsize=32)
def _band_words(R: StringAlgebra, max_length: int) -> tuple:
    F = R.field
    one = gf.FieldPolynomial([1, 1])
    words = set()
    layer = [StringWord((c,)) for c in letters_of(R)]
    for length in range(1, max_length + 1):
        for S in layer:
            if letter_source(R, S.letters[-1]) != letter_target(R, S.letters[0]):
                continue
            try:
                check_band(BandData(S, one, 1), R)
            except (NotCyclic, ReducibleF):
                continue
            words.add(canonical_band(BandData(S, one, 1), F).word)
        if length == max_length:
            break
        layer = [StringWord(S.letters + (c,)) for S in layer for c in extensions(R, S)]
    return tuple(sorted(words, key=lambda w: (w.length, w.key())))


def band_polynomials(F: gf.FiniteField, max_degree: int) -> list:
    """Monic irreducibles with f(0) != 0 of degree 1..max_degree."""
    out = []
    for d in range(1, max_degree + 1):
        out.extend(f for f in gf.monic_irreducibles(F, d) if f.coeffs[0] != 0)
    return out


def random_string(R: StringAlgebra, length: int, rng) -> StringWord:
    """A random walk string of at most ``length`` letters (stops at dead ends)."""
    v = R.quiver.vertices[int(rng.integers(len(R.quiver.vertices)))]
    S = StringWord((), v)
    for _ in range(length):
        ext = extensions(R, S)
        if not ext:
            break
        c = ext[int(rng.integers(len(ext)))]
        S = StringWord(S.letters + (c,))
    return S


def random_band(R: StringAlgebra, rng, max_word: int = 4, max_degree: int = 2, max_power: int = 2):
    """A random band, or None when the algebra has no band words that short."""
    words = enumerate_band_words(R, max_word)
    if not words:
        return None
    W = words[int(rng.integers(len(words)))]
    polys = band_polynomials(R.field, max_degree)
    f = polys[int(rng.integers(len(polys)))]
    n = int(rng.integers(1, max_power + 1))
    return canonical_band(BandData(W, f, n), R.field)


def random_components(R: StringAlgebra, rng, max_dim: int = 60, max_length: int = 8,
                      band_prob: float = 0.0, max_parts: int | None = None) -> list:
    """A random list of canonical component labels with total dim <= max_dim."""
    labels = []
    total = 0
    target = int(rng.integers(1, max_dim + 1))
    while total < target and (max_parts is None or len(labels) < max_parts):
        if band_prob and rng.random() < band_prob:
            lab = random_band(R, rng)
            if lab is None:
                continue
        else:
            lab = canonical_string(random_string(R, int(rng.integers(0, max_length + 1)), rng))
        d = lab.dim()
        if total + d > max_dim:
            if labels:
                break
            continue
        mult = int(rng.integers(1, 4))
        mult = max(1, min(mult, (max_dim - total) // d))
        labels.extend([lab] * mult)
        total += d * mult
    return labels
