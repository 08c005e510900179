"""String graphs, neighbourhood statistics and right-endpoint counts.

A string graph is a disjoint union of colored directed paths, one per
string.  For a word ``C_1 .. C_n`` the path has vertices ``x_0 .. x_n``;
edge i joins ``x_{i-1}`` and ``x_i``, is colored by the arrow of ``C_i`` and
points from ``x_{i-1}`` to ``x_i`` for a direct letter and the other way for
an inverse letter.  Components are stored as canonical words, so two graphs
are isomorphic exactly when their component lists are equal.
"""
from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import StringAlgebra
from .errors import DecodeFailure, EmptyGraph, InvalidString, PreconditionError, RadiusMismatch
from .modules import (
    RModule,
    StringWord,
    as_word,
    canonical_string,
    check_string,
    module_from_components,
    parse_word,
)


@dataclass(frozen=True)
class StringGraph:
    components: tuple  # canonical StringWords, sorted
    # (label, source, target) triples, used to name the quiver vertex of a root
    arrow_ends: tuple = field(default=(), compare=False)

    @property
    def num_vertices(self) -> int:
        return sum(w.length + 1 for w in self.components)

    def __len__(self):
        return len(self.components)

    def counts(self) -> Counter:
        return Counter(self.components)

    def edges(self, index: int) -> list:
        """Edges (tail, head, color) of one component, vertices numbered 0..n."""
        return word_edges(self.components[index])

    def to_text(self) -> str:
        return "".join(f"{w}\n" for w in self.components)


def word_edges(w: StringWord) -> list:
    out = []
    for i, (a, s) in enumerate(w.letters, start=1):
        out.append((i - 1, i, a) if s > 0 else (i, i - 1, a))
    return out


def decode_path(num_vertices: int, edges, vertex=None) -> StringWord:
    """Recover the word of a path component from its edges.

    The path must be numbered 0..n along its length; an isolated vertex
    decodes to the trivial word at ``vertex``.
    """
    n = num_vertices - 1
    if n == 0:
        if edges:
            raise DecodeFailure("an isolated vertex has no edges")
        if vertex is None:
            raise DecodeFailure("an isolated vertex needs its quiver vertex")
        return StringWord((), vertex)
    by_pos = {}
    for tail, head, color in edges:
        lo, hi = min(tail, head), max(tail, head)
        if hi != lo + 1 or lo < 0 or hi > n or hi in by_pos:
            raise DecodeFailure("edges do not form a numbered path")
        by_pos[hi] = (color, 1 if tail == lo else -1)
    if len(by_pos) != n:
        raise DecodeFailure("path is missing edges")
    return StringWord(tuple(by_pos[i] for i in range(1, n + 1)))


def graph_of_strings(words, R: StringAlgebra | None = None) -> StringGraph:
    """One path per word, canonicalized and sorted; words validated when R is given."""
    comps = []
    for w in words:
        w = as_word(w)
        if R is not None:
            check_string(w, R)
        comps.append(canonical_string(w))
    ends = tuple((a.label, a.source, a.target) for a in R.quiver.arrows) if R is not None else ()
    return StringGraph(tuple(sorted(comps, key=lambda w: w.sort_key())), ends)


def canonical(G: StringGraph) -> StringGraph:
    out = graph_of_strings(G.components)
    return StringGraph(out.components, G.arrow_ends)


def graph_of_module(M: RModule) -> StringGraph:
    if M.components is None or not all(isinstance(c, StringWord) for c in M.components):
        raise DecodeFailure("module is not a recorded sum of string modules")
    return graph_of_strings(M.components, M.algebra)


def graph_to_module(G: StringGraph, R: StringAlgebra) -> RModule:
    for w in G.components:
        try:
            check_string(w, R)
        except InvalidString as exc:
            raise DecodeFailure(f"component {w} is not a string: {exc}") from None
    return module_from_components(G.components, R)


def disjoint_union(*graphs: StringGraph) -> StringGraph:
    out = graph_of_strings([w for G in graphs for w in G.components])
    ends = next((G.arrow_ends for G in graphs if G.arrow_ends), ())
    return StringGraph(out.components, ends)


def graph_power(G: StringGraph, k: int) -> StringGraph:
    return disjoint_union(*([G] * k))


def parse_strings_file(text: str) -> list:
    words = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            words.append(parse_word(line))
    return words


# ---------------------------------------------------------------------------
# ball types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class BallType:
    """Rooted path segment: letters, root offset and the root's quiver vertex.

    The vertex is empty when the graph does not know the arrow endpoints;
    trivial components always know theirs.
    """

    letters: tuple
    offset: int
    vertex: str = ""

    def __str__(self):
        toks = [a if s > 0 else f"{a}^-1" for a, s in self.letters]
        toks.insert(self.offset, f"|{self.vertex}|" if self.vertex else "|")
        return " ".join(toks)


def _key(letters) -> tuple:
    return tuple((a, 0 if s > 0 else 1) for a, s in letters)


def root_vertex(w: StringWord, j: int, ends: dict) -> str:
    if w.is_trivial:
        return w.vertex
    if not ends:
        return ""
    a, s = w.letters[0] if j == 0 else w.letters[j - 1]
    src, tgt = ends[a]
    if j == 0:
        return tgt if s > 0 else src
    return src if s > 0 else tgt


def segment_type(seg: tuple, a: int, vertex: str) -> BallType:
    """Canonical type of a segment rooted after its first ``a`` letters."""
    inv = tuple((x, -s) for x, s in reversed(seg))
    b = len(seg) - a
    if (_key(seg), a) <= (_key(inv), b):
        return BallType(seg, a, vertex)
    return BallType(inv, b, vertex)


def ball_type(w: StringWord, j: int, r: int, ends: dict | None = None) -> BallType:
    """Type of the radius-r ball around vertex x_j of the path of w."""
    m = w.length
    a = min(r, j)
    b = min(r, m - j)
    return segment_type(w.letters[j - a:j + b], a, root_vertex(w, j, ends or {}))


def _ends(G: StringGraph) -> dict:
    return {lab: (s, t) for lab, s, t in G.arrow_ends}


@dataclass
class StatProfile:
    radius: int
    freqs: dict  # BallType -> Fraction

    def as_json(self) -> dict:
        return {str(h): f"{q.numerator}/{q.denominator}" for h, q in sorted(self.freqs.items())}

    def get(self, h) -> Fraction:
        return self.freqs.get(h, Fraction(0))


def _vertex_types(G: StringGraph, r: int) -> Counter:
    out: Counter = Counter()
    ends = _ends(G)
    for w, mult in G.counts().items():
        for j in range(w.length + 1):
            out[ball_type(w, j, r, ends)] += mult
    return out


def ball_stats(G: StringGraph, r: int) -> StatProfile:
    """Exact frequencies p(H, G) of every radius-r ball type."""
    if G.num_vertices == 0:
        raise EmptyGraph("the graph has no vertices")
    if r < 0:
        raise PreconditionError("radius must be >= 0")
    n = G.num_vertices
    return StatProfile(r, {h: Fraction(c, n) for h, c in sorted(_vertex_types(G, r).items())})


def hoeffding_epsilon(samples: int, delta: float) -> float:
    return math.sqrt(math.log(2 / delta) / (2 * samples))


@dataclass
class SampledStats:
    profile: StatProfile
    samples: int
    delta: float
    epsilon: float


def _locate(G: StringGraph):
    sizes = np.array([w.length + 1 for w in G.components], dtype=np.int64)
    return np.concatenate([[0], np.cumsum(sizes)])


def ball_stats_sampled(G: StringGraph, r: int, samples: int, seed: int = 0, delta: float = 0.05,
                       exhaustive: bool = False) -> SampledStats:
    """Frequencies from ``samples`` uniform vertex draws with a Hoeffding bound.

    Draws are i.i.d. from a PCG64 generator seeded by ``seed``.  With
    ``exhaustive`` every vertex is visited once and the result is exact.
    """
    n = G.num_vertices
    if n == 0:
        raise EmptyGraph("the graph has no vertices")
    if samples < 1:
        raise PreconditionError("need at least one sample")
    if exhaustive:
        prof = ball_stats(G, r)
        return SampledStats(prof, n, delta, 0.0)
    rng = np.random.Generator(np.random.PCG64(seed))
    idx = rng.integers(0, n, size=samples)
    starts = _locate(G)
    comp = np.searchsorted(starts, idx, side="right") - 1
    pos = idx - starts[comp]
    counts: Counter = Counter()
    cache: dict = {}
    ends = _ends(G)
    for c, j in zip(comp.tolist(), pos.tolist()):
        key = (c, j)
        if key not in cache:
            cache[key] = ball_type(G.components[c], j, r, ends)
        counts[cache[key]] += 1
    prof = StatProfile(r, {h: Fraction(k, samples) for h, k in sorted(counts.items())})
    return SampledStats(prof, samples, delta, hoeffding_epsilon(samples, delta))


def coarsen(p: StatProfile, r: int) -> StatProfile:
    """Radius-r profile implied by a profile of larger radius."""
    if r > p.radius:
        raise RadiusMismatch("can only coarsen to a smaller radius")
    out: dict = {}
    for h, q in p.freqs.items():
        lo = max(h.offset - r, 0)
        hi = min(h.offset + r, len(h.letters))
        t = segment_type(h.letters[lo:hi], h.offset - lo, h.vertex)
        out[t] = out.get(t, Fraction(0)) + q
    return StatProfile(r, dict(sorted(out.items())))


# ---------------------------------------------------------------------------
# right endpoints
# ---------------------------------------------------------------------------

def _right_ends(w: StringWord, S: StringWord) -> set:
    k = S.length
    L = w.letters
    inv = S.inverse().letters
    ends = set()
    for j in range(w.length + 1):
        if j >= k and L[j - k:j] == S.letters:
            ends.add(j)
        if j + k <= w.length and L[j:j + k] == inv:
            ends.add(j)
    return ends


def right_endpoint_count(S, G: StringGraph, R: StringAlgebra | None = None):
    """|R(S, G)| and r(S, G) = |R(S, G)| / |V(G)|."""
    S = as_word(S)
    if R is not None:
        check_string(S, R)
    if S.is_trivial:
        raise InvalidString("S must have length >= 1", condition=0, position=0)
    total = 0
    for w, mult in G.counts().items():
        if w.length >= S.length:
            total += mult * len(_right_ends(w, S))
    n = G.num_vertices
    return total, (Fraction(total, n) if n else Fraction(0))


# ---------------------------------------------------------------------------
# distances and convergence
# ---------------------------------------------------------------------------

def profile_distance_bs(p: StatProfile, q: StatProfile) -> Fraction:
    """Total variation distance between two profiles of equal radius."""
    if p.radius != q.radius:
        raise RadiusMismatch(f"radii differ: {p.radius} vs {q.radius}")
    keys = set(p.freqs) | set(q.freqs)
    return sum((abs(p.get(h) - q.get(h)) for h in keys), Fraction(0)) / 2


@dataclass
class ConvergenceReport:
    radius: int
    series: dict  # name -> list of Fraction
    tail_oscillation: dict = field(default_factory=dict)
    tolerance: Fraction = Fraction(1, 100)

    @property
    def looks_cauchy(self) -> bool:
        return all(v <= self.tolerance for v in self.tail_oscillation.values())

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        names = sorted(self.series)
        wr.writerow(["n"] + names)
        length = len(next(iter(self.series.values()))) if self.series else 0
        for i in range(length):
            wr.writerow([i] + [f"{self.series[k][i].numerator}/{self.series[k][i].denominator}" for k in names])
        return buf.getvalue()


def stringconvergence_check(graphs, words, radius: int = 1, tolerance=Fraction(1, 100)) -> ConvergenceReport:
    """Trajectories of r(S, G_n) and p(H, G_n) with their tail oscillation.

    The oscillation of a series is max - min over its second half; the
    report looks Cauchy when every oscillation is within ``tolerance``.
    """
    graphs = list(graphs)
    if not graphs:
        raise PreconditionError("need a nonempty sequence of graphs")
    series: dict = {}
    for S in words:
        S = as_word(S)
        series[f"r({S})"] = [right_endpoint_count(S, G)[1] for G in graphs]
    profs = [ball_stats(G, radius) for G in graphs]
    types = sorted(set().union(*(p.freqs for p in profs)))
    for h in types:
        series[f"p({h})"] = [p.get(h) for p in profs]
    half = len(graphs) // 2
    osc = {name: max(v[half:]) - min(v[half:]) for name, v in series.items()}
    return ConvergenceReport(radius, series, osc, Fraction(tolerance))
