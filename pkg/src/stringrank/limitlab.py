"""Tilings of string, band and Jordan modules, tile catalogs and
epsilon-isomorphism certificates between sums of string modules.

Epsilons are exact Fractions throughout; floats and strings are converted
with ``Fraction(str(x))`` so ``0.1`` means exactly 1/10.
"""
from __future__ import annotations

import json
import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import gf
from .algebra import StringAlgebra
from .errors import (
    BadEpsilon,
    BudgetExceeded,
    ExplosionGuard,
    PreconditionError,
    ReducibleF,
    TooSmall,
    UnsupportedRawModule,
)
from .generators import band_polynomials, enumerate_band_words, enumerate_strings
from .modules import (
    BandData,
    RModule,
    StringWord,
    as_word,
    band_module,
    canonical_band,
    canonical_string,
    check_band,
    emit_components,
    string_module,
    string_vertices,
)


def as_eps(eps) -> Fraction:
    e = eps if isinstance(eps, Fraction) else Fraction(str(eps))
    if not 0 < e < 1:
        raise BadEpsilon(f"epsilon must lie in (0, 1), got {eps}")
    return e


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def block_length(eps) -> int:
    """m with (m + 2) / m <= 1 + eps."""
    return _ceil(2 / as_eps(eps)) + 2


def jordan_block(eps) -> int:
    """k >= 1 / eps."""
    return _ceil(1 / as_eps(eps))


# ---------------------------------------------------------------------------
# tilings
# ---------------------------------------------------------------------------

@dataclass
class Tiling:
    """Independent pieces (column bases in the ambient space) with labels."""

    pieces: list
    epsilon: Fraction
    ambient_dim: int
    bound: int
    meta: dict = field(default_factory=dict)
    coverage: Fraction = Fraction(0)
    expansion: Fraction = Fraction(0)

    def as_json(self) -> dict:
        return {
            "epsilon": _r(self.epsilon),
            "ambient_dim": self.ambient_dim,
            "bound": self.bound,
            "coverage": _r(self.coverage),
            "expansion": _r(self.expansion),
            "meta": self.meta,
            "pieces": [{"label": lab, "basis": gf.encode_matrix(B.T)} for B, lab in self.pieces],
        }


def _r(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _unit_columns(n: int, idx) -> np.ndarray:
    idx = list(idx)
    B = gf.zeros(n, len(idx))
    B[idx, range(len(idx))] = 1
    return B


@dataclass
class TilingCheck:
    independent: bool
    coverage: Fraction
    expansion: Fraction
    max_piece: int
    ok: bool
    failures: list


def verify_tiling(F: gf.FiniteField, T: Tiling, operators) -> TilingCheck:
    """Standalone check of independence, coverage, expansion and piece bound."""
    n = T.ambient_dim
    fails = []
    dims = [B.shape[1] for B, _ in T.pieces]
    total = sum(dims)
    if T.pieces:
        stacked = np.hstack([B for B, _ in T.pieces])
        indep = gf.mat_rank(F, stacked) == total
    else:
        indep = True
    if not indep:
        fails.append("independence")
    cov = Fraction(total, n) if n else Fraction(1)
    if cov < 1 - T.epsilon:
        fails.append("coverage")
    worst = Fraction(0)
    for B, lab in T.pieces:
        d = B.shape[1]
        if d == 0 or gf.mat_rank(F, B) != d:
            fails.append(f"degenerate piece {lab}")
            continue
        imgs = [B] + [gf.matmul(F, A, B) for A in operators]
        ratio = Fraction(gf.mat_rank(F, np.hstack(imgs)), d)
        worst = max(worst, ratio)
    if worst > 1 + T.epsilon:
        fails.append("expansion")
    biggest = max(dims, default=0)
    if biggest > T.bound:
        fails.append("piece bound")
    return TilingCheck(indep, cov, worst, biggest, not fails, fails)


def _finish(T: Tiling, F, operators) -> Tiling:
    chk = verify_tiling(F, T, operators)
    T.coverage, T.expansion = chk.coverage, chk.expansion
    return T


def tile_string_module(S, eps, R: StringAlgebra) -> Tiling:
    """Blocks of m consecutive basis vectors z_im .. z_(i+1)m-1 of M(S)."""
    e = as_eps(eps)
    S = as_word(S)
    M = string_module(S, R)
    m = block_length(e)
    m_eps = _ceil(m / e)
    n1 = M.dim
    meta = {"kind": "string", "word": str(S), "m": m, "m_eps": m_eps}
    if n1 <= m_eps:
        pieces = [(gf.identity(n1), "whole")]
    else:
        t = n1 // m
        pieces = [(_unit_columns(n1, range(i * m, (i + 1) * m)), f"W{i}") for i in range(t)]
    T = Tiling(pieces, e, n1, m_eps, meta)
    return _finish(T, R.field, M.action.values())


def tile_band_module(B: BandData, eps, R: StringAlgebra) -> Tiling:
    """Three regimes: long word, short word with large V, or a single piece."""
    e = as_eps(eps)
    B = check_band(B, R)
    M = band_module(B, R)
    m = block_length(e)
    m_eps = _ceil(2 * m / e) + 1 if (2 * m / e).denominator == 1 else _ceil(2 * m / e)
    n, d = B.length, B.vdim
    N = n * d

    def x(j, i):  # basis index of x^j in slice i (1-based)
        return (i - 1) * d + j

    meta = {"kind": "band", "band": str(B), "m": m, "m_eps": m_eps}
    if n > m_eps:
        t = (n - 2) // m
        pieces = []
        for i in range(t):
            for j in range(d):
                idx = [x(j, s) for s in range(i * m + 2, (i + 1) * m + 2)]
                pieces.append((_unit_columns(N, idx), f"W{i},{j}"))
        meta["regime"] = "long word"
    elif d > m_eps:
        t = d // m
        pieces = []
        for q in range(t):
            idx = [x(j, i) for i in range(1, n + 1) for j in range(q * m, (q + 1) * m)]
            pieces.append((_unit_columns(N, sorted(idx)), f"Z{q}"))
        meta["regime"] = "large V"
    else:
        pieces = [(gf.identity(N), "whole")]
        meta["regime"] = "small"
    T = Tiling(pieces, e, N, m_eps * m_eps, meta)
    return _finish(T, R.field, M.action.values())


def jordan_operator(f, n: int, F: gf.FiniteField) -> np.ndarray:
    """Multiplication by t on K[t]/f^n in the basis 1, t, .., t^(D-1)."""
    return gf.companion_matrix(gf.poly_pow(gf.FieldPolynomial(f), n, F), F)


def tile_jordan(f, n: int, eps, F: gf.FiniteField) -> Tiling:
    """Blocks of k consecutive powers of t in K[t]/f^n."""
    e = as_eps(eps)
    f = gf.FieldPolynomial(f)
    if f.degree < 1 or not f.is_monic() or not gf.poly_is_irreducible(f, F):
        raise ReducibleF(f"{list(f.coeffs)} is not monic irreducible")
    X = jordan_operator(f, n, F)
    D = X.shape[0]
    k = jordan_block(e)
    meta = {"kind": "jordan", "f": list(f.coeffs), "n": n, "k": k}
    if D <= 2 * k * k:
        pieces = [(gf.identity(D), "whole")]
    else:
        pieces = [(_unit_columns(D, range(i * k, (i + 1) * k)), f"N{i + 1}") for i in range(D // k)]
    T = Tiling(pieces, e, D, 2 * k * k, meta)
    return _finish(T, F, [X])


def find_invariant_subspace(F: gf.FiniteField, V, operators, budgets=None) -> np.ndarray:
    """W inside V with T(W) inside V for every operator T.

    ``budgets`` gives eps_T per operator; each must satisfy
    dim(T V + V) <= (1 + eps_T) dim V.  The result has
    dim W >= (1 - sum eps_T) dim V.
    """
    V = gf.span_basis(F, V)
    n, k = V.shape
    ops = list(operators)
    if budgets is None:
        budgets = [None] * len(ops)
    W = V
    for T, b in zip(ops, budgets):
        TV = gf.matmul(F, T, V)
        grow = gf.mat_rank(F, np.hstack([V, TV])) if k else 0
        if b is not None and k and Fraction(grow, k) > 1 + Fraction(str(b)):
            raise BudgetExceeded(f"dim(TV + V) = {grow} exceeds (1 + {b}) dim V")
        if k == 0:
            return V
        # coordinates c with T V c in span V: kernel of [V | -T V], second half
        K = gf.mat_kernel_basis(F, np.hstack([V, F.neg(TV)]))
        keep = gf.matmul(F, V, K[k:]) if K.shape[1] else gf.zeros(n, 0)
        keep = gf.span_basis(F, keep, n)
        W = gf.subspace_intersect(F, W, keep) if W.shape[1] and keep.shape[1] else gf.zeros(n, 0)
    return W


# ---------------------------------------------------------------------------
# tiles and catalogs
# ---------------------------------------------------------------------------

def _labels(M) -> list:
    if isinstance(M, RModule):
        if M.components is None:
            raise UnsupportedRawModule("module has no recorded string/band decomposition")
        return list(M.components)
    out = []
    for c in M:
        out.append(c if isinstance(c, BandData) else canonical_string(as_word(c)))
    return out


def _dim(lab) -> int:
    return lab.dim()


def epsilon_tiles(A, M, eps):
    """Largest k with A^k a direct summand of M; tiles iff dim A^k >= (1 - eps) dim M.

    Components match by canonical label, so the largest k is the minimum
    over components Q of A of floor(count_M(Q) / count_A(Q)).
    """
    e = Fraction(str(eps)) if not isinstance(eps, Fraction) else eps
    a = Counter(_labels(A))
    mm = Counter(_labels(M))
    if not a:
        raise PreconditionError("the tile must be nonzero")
    k = min(mm[q] // c for q, c in a.items())
    dim_a = sum(_dim(q) * c for q, c in a.items())
    dim_m = sum(_dim(q) * c for q, c in mm.items())
    ok = k >= 1 and k * dim_a >= (1 - e) * dim_m
    return ok, k


@dataclass
class TileCatalog:
    labels: list
    epsilon: Fraction
    string_cap: int
    band_cap: int
    algebra: StringAlgebra = None

    def __len__(self):
        return len(self.labels)

    def module(self, i) -> RModule:
        cache = self.__dict__.setdefault("_modules", {})
        if i not in cache:
            lab = self.labels[i]
            cache[i] = band_module(lab, self.algebra) if isinstance(lab, BandData) else string_module(lab, self.algebra)
        return cache[i]

    def index(self) -> list:
        return [{"id": i, "kind": "band" if isinstance(l, BandData) else "string", "label": str(l),
                 "dim": l.dim()} for i, l in enumerate(self.labels)]


def build_tile_catalog(R: StringAlgebra, eps, string_cap: int | None = None, band_cap: int = 0,
                       max_tiles: int = 5000, max_degree: int = 2) -> TileCatalog:
    """All strings shorter than ``string_cap`` and bands of dim < ``band_cap``.

    ``string_cap`` defaults to the string tiling constant ceil(m / eps).
    Up to inversion (strings) and rotation/inversion (bands).
    """
    e = as_eps(eps)
    if string_cap is None:
        string_cap = _ceil(block_length(e) / e)
    strings = enumerate_strings(R, max(string_cap - 1, 0), limit=max_tiles)
    if len(strings) > max_tiles:
        raise ExplosionGuard(f"more than {max_tiles} strings below length {string_cap}")
    labels = list(strings)
    if band_cap > 1:
        words = enumerate_band_words(R, band_cap - 1)
        polys = band_polynomials(R.field, max_degree)
        bands = set()
        for W in words:
            for f in polys:
                p = 1
                while W.length * f.degree * p < band_cap:
                    bands.add(canonical_band(BandData(W, f, p), R.field))
                    p += 1
                    if len(labels) + len(bands) > max_tiles:
                        raise ExplosionGuard(f"catalog exceeds {max_tiles} tiles")
        labels.extend(sorted(bands, key=lambda b: b.sort_key()))
    return TileCatalog(labels, e, string_cap, band_cap, R)


def save_catalog(cat: TileCatalog, directory: str) -> None:
    """One module spec file per tile plus ``index.json``."""
    os.makedirs(directory, exist_ok=True)
    index = cat.index()
    for entry, lab in zip(index, cat.labels):
        name = f"tile_{entry['id']:05d}.mod"
        entry["file"] = name
        with open(os.path.join(directory, name), "w", encoding="utf-8") as fh:
            fh.write(emit_components([lab]))
    with open(os.path.join(directory, "index.json"), "w", encoding="utf-8") as fh:
        json.dump({"epsilon": _r(cat.epsilon), "string_cap": cat.string_cap,
                   "band_cap": cat.band_cap, "tiles": index}, fh, indent=1, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# epsilon-isomorphism of string graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """Vertices start..end (inclusive) of one path component, read forward or reversed."""

    component: int
    start: int
    end: int
    reversed: bool = False

    @property
    def size(self) -> int:
        return self.end - self.start + 1


def segment_word(w: StringWord, seg: Segment, R: StringAlgebra) -> StringWord:
    if seg.start == seg.end:
        return StringWord((), string_vertices(w, R)[seg.start])
    sub = StringWord(w.letters[seg.start:seg.end])
    return sub.inverse() if seg.reversed else sub


@dataclass
class IsoCertificate:
    pairs: list  # (Segment in M, Segment in N)
    dim_m: int
    dim_n: int
    uncovered_m: Fraction
    uncovered_n: Fraction
    epsilon: Fraction
    account: dict = field(default_factory=dict)

    @property
    def achieved(self) -> Fraction:
        return max(self.uncovered_m, self.uncovered_n)

    def as_json(self) -> dict:
        seg = lambda s: [s.component, s.start, s.end, int(s.reversed)]  # noqa: E731
        return {"epsilon": _r(self.epsilon), "achieved": _r(self.achieved),
                "uncovered_m": _r(self.uncovered_m), "uncovered_n": _r(self.uncovered_n),
                "dim_m": self.dim_m, "dim_n": self.dim_n, "account": self.account,
                "pairs": [[seg(a), seg(b)] for a, b in self.pairs]}


@dataclass
class NoCertificate:
    epsilon: Fraction
    uncovered_m: Fraction
    uncovered_n: Fraction
    account: dict

    def as_json(self) -> dict:
        return {"certificate": None, "epsilon": _r(self.epsilon), "uncovered_m": _r(self.uncovered_m),
                "uncovered_n": _r(self.uncovered_n), "account": self.account}


def _string_labels(M) -> list:
    labs = _labels(M)
    if any(isinstance(l, BandData) for l in labs):
        raise UnsupportedRawModule("epsilon_isomorphism works on sums of string modules")
    return labs


class _Free:
    """Unused vertex intervals of each component."""

    def __init__(self, words):
        self.words = words
        self.free = {i: [(0, w.length)] for i, w in enumerate(words)}

    def take(self, comp, start, end):
        out = []
        for a, b in self.free[comp]:
            if b < start or a > end:
                out.append((a, b))
                continue
            if a < start:
                out.append((a, start - 1))
            if end < b:
                out.append((end + 1, b))
        self.free[comp] = out

    def uncovered(self) -> int:
        return sum(b - a + 1 for ivs in self.free.values() for a, b in ivs)


def _find(hay: tuple, needle: tuple, lo: int, hi: int):
    """First i in [lo, hi - len(needle)] with hay[i:i+len] == needle."""
    k = len(needle)
    for i in range(lo, hi - k + 1):
        if hay[i:i + k] == needle:
            return i
    return None


def epsilon_isomorphism(M, N, eps, R: StringAlgebra, m: int | None = None):
    """Search for matched segments covering all but eps of both sides.

    Phases: equal whole components; leftover components embedded into
    unused intervals of the other side (either orientation); remaining
    intervals cut into m-vertex blocks matched as multisets; coverage.
    Returns an IsoCertificate or a NoCertificate with the account.
    """
    e = Fraction(str(eps)) if not isinstance(eps, Fraction) else eps
    if not 0 <= e < 1:
        raise PreconditionError("epsilon must lie in [0, 1)")
    A = _string_labels(M)
    B = _string_labels(N)
    dim_a = sum(w.length + 1 for w in A)
    dim_b = sum(w.length + 1 for w in B)
    if dim_a == 0 or dim_b == 0:
        raise PreconditionError("both sides must be nonzero")
    if m is None:
        m = block_length(e) if e > 0 else 2
    fa, fb = _Free(A), _Free(B)
    pairs = []
    account = {}

    # phase 1: equal components
    pool: dict = {}
    for j, w in enumerate(B):
        pool.setdefault(w, []).append(j)
    left_a = []
    for i, w in enumerate(A):
        if pool.get(w):
            j = pool[w].pop(0)
            pairs.append((Segment(i, 0, w.length), Segment(j, 0, w.length)))
            fa.take(i, 0, w.length)
            fb.take(j, 0, w.length)
        else:
            left_a.append(i)
    left_b = [j for j, ivs in fb.free.items() if ivs]
    account["phase1_pairs"] = len(pairs)

    # phase 2: embed whole leftover components into free intervals of the
    # other side, longest first across both sides
    def embed(i, w, src_free, dst_words, dst_free, flip) -> bool:
        # best fit: a match touching an interval end, then the tightest interval
        best = None
        for j, dw in enumerate(dst_words):
            verts = string_vertices(dw, R) if w.is_trivial else None
            for a, b in dst_free.free[j]:
                if b - a < w.length:
                    continue
                for hit in range(a, b - w.length + 1):
                    if w.is_trivial:
                        rev = False
                        if verts[hit] != w.vertex:
                            continue
                    else:
                        seg = dw.letters[hit:hit + w.length]
                        if seg == w.letters:
                            rev = False
                        elif seg == w.inverse().letters:
                            rev = True
                        else:
                            continue
                    inner = hit > a and hit + w.length < b
                    score = (inner, b - a - w.length, j, hit)
                    if best is None or score < best[0]:
                        best = (score, j, hit, rev)
        if best is None:
            return False
        _, j, hit, rev = best
        s_src = Segment(i, 0, w.length)
        s_dst = Segment(j, hit, hit + w.length, rev)
        pairs.append((s_dst, s_src) if flip else (s_src, s_dst))
        src_free.take(i, 0, w.length)
        dst_free.take(j, hit, hit + w.length)
        return True

    todo = [(-A[i].length, 0, i) for i in left_a] + [(-B[j].length, 1, j) for j in left_b]
    placed = [0, 0]
    for _, side, i in sorted(todo):
        if side == 0:
            if fa.free[i] == [(0, A[i].length)] and embed(i, A[i], fa, B, fb, False):
                placed[0] += 1
        elif fb.free[i] == [(0, B[i].length)] and embed(i, B[i], fb, A, fa, True):
            placed[1] += 1
    account["phase2_a_into_b"], account["phase2_b_into_a"] = placed

    # phase 3: m-vertex blocks from the remaining intervals
    def blocks(words, free):
        out: dict = {}
        for i, ivs in sorted(free.free.items()):
            for a, b in ivs:
                p = a
                while p + m - 1 <= b:
                    word = StringWord(words[i].letters[p:p + m - 1]) if m > 1 else None
                    if m == 1:
                        word = StringWord((), string_vertices(words[i], R)[p])
                    key = canonical_string(word)
                    rev = key != word
                    out.setdefault(key, []).append(Segment(i, p, p + m - 1, rev))
                    p += m
        return out

    ba, bb = blocks(A, fa), blocks(B, fb)
    n3 = 0
    for key in sorted(set(ba) & set(bb), key=lambda w: w.sort_key()):
        for sa, sb in zip(ba[key], bb[key]):
            pairs.append((sa, sb))
            fa.take(sa.component, sa.start, sa.end)
            fb.take(sb.component, sb.start, sb.end)
            n3 += 1
    account["phase3_blocks"] = n3
    account["block_length"] = m

    ua = Fraction(fa.uncovered(), dim_a)
    ub = Fraction(fb.uncovered(), dim_b)
    account["uncovered_m"] = _r(ua)
    account["uncovered_n"] = _r(ub)
    if ua <= e and ub <= e:
        return IsoCertificate(pairs, dim_a, dim_b, ua, ub, e, account)
    account["failed"] = "m side" if ua > e else "n side"
    return NoCertificate(e, ua, ub, account)


@dataclass
class CertificateCheck:
    ok: bool
    failures: list


def verify_certificate(cert: IsoCertificate, M, N, R: StringAlgebra) -> CertificateCheck:
    """Independent re-check: equal words, disjoint segments, recomputed coverage."""
    A = _string_labels(M)
    B = _string_labels(N)
    fails = []
    used_a: dict = {}
    used_b: dict = {}
    for sa, sb in cert.pairs:
        for seg, words in ((sa, A), (sb, B)):
            if not (0 <= seg.component < len(words)) or not (0 <= seg.start <= seg.end <= words[seg.component].length):
                fails.append(f"segment {seg} out of range")
        if fails:
            break
        wa = segment_word(A[sa.component], sa, R)
        wb = segment_word(B[sb.component], sb, R)
        if wa != wb:
            fails.append(f"words differ: {wa} vs {wb}")
        if sa.size != sb.size:
            fails.append("segment sizes differ")
        for seg, used in ((sa, used_a), (sb, used_b)):
            verts = used.setdefault(seg.component, set())
            span = set(range(seg.start, seg.end + 1))
            if verts & span:
                fails.append(f"overlapping segments on component {seg.component}")
            verts |= span
    dim_a = sum(w.length + 1 for w in A)
    dim_b = sum(w.length + 1 for w in B)
    ua = 1 - Fraction(sum(len(v) for v in used_a.values()), dim_a)
    ub = 1 - Fraction(sum(len(v) for v in used_b.values()), dim_b)
    if ua != cert.uncovered_m or ub != cert.uncovered_n:
        fails.append("recorded coverage does not match")
    if ua > cert.epsilon or ub > cert.epsilon:
        fails.append("uncovered fraction above epsilon")
    return CertificateCheck(not fails, fails)


def tolerance_schedule(delta) -> Fraction:
    """The documented schedule eps = f(delta) = 2 delta."""
    return 2 * Fraction(str(delta)) if not isinstance(delta, Fraction) else 2 * delta


# ---------------------------------------------------------------------------
# bands versus strings
# ---------------------------------------------------------------------------

def band_threshold(B: BandData, kappa) -> int:
    """Default T_kappa = ceil(dim V / kappa)."""
    return _ceil(Fraction(B.vdim) / Fraction(str(kappa)))


def band_paths(B: BandData) -> list:
    """The band with its twist letter removed: dim V copies of the path C_3 .. C_L C_1."""
    L = B.word.letters
    n = len(L)
    word = StringWord(L[2:] + L[:1]) if n >= 2 else None
    if word is None:
        raise PreconditionError("band words of length 1 are not supported")
    return [canonical_string(word)] * B.vdim


def band_to_string_approx(B: BandData, kappa, R: StringAlgebra, threshold: int | None = None):
    """Delete slice V_1: L_B = M(C_3 .. C_L)^(dim V), kappa-isomorphic to B.

    For a word of length 2 the remaining slice carries no letters and L_B is
    a sum of simples at s(C_2).
    """
    k = Fraction(str(kappa)) if not isinstance(kappa, Fraction) else kappa
    B = check_band(B, R)
    T = band_threshold(B, k) if threshold is None else threshold
    if B.dim() < T:
        raise TooSmall(f"dim B = {B.dim()} is below the threshold {T}")
    L = B.word.letters
    if len(L) == 2:
        from .modules import letter_source
        piece = StringWord((), letter_source(R, L[1]))
    else:
        piece = StringWord(L[2:])
    lb = [canonical_string(piece)] * B.vdim
    src = band_paths(B)
    cert = epsilon_isomorphism(src, lb, k, R)
    if isinstance(cert, NoCertificate):
        raise TooSmall(f"no certificate at kappa = {k}: {cert.account}")
    check = verify_certificate(cert, src, lb, R)
    if not check.ok:
        raise AssertionError(f"certificate failed verification: {check.failures}")
    return lb, cert


def split_band_string(components, T: int):
    """Bands of dim < T go to the first list; everything else to the second."""
    small, rest = [], []
    for c in components:
        if isinstance(c, BandData) and c.dim() < T:
            small.append(c)
        else:
            rest.append(c)
    return small, rest
