"""Finite-dimensional R-modules as graded representations.

A module is a K-basis in which every basis vector sits at one vertex, plus
one square matrix per arrow.  Matrices act on column vectors, so the path
``b*a`` acts as ``action[b] @ action[a]``.

String words are read right to left like paths: a string ``C_1 ... C_n``
satisfies ``t(C_{i+1}) = s(C_i)``.  In ``M(S)`` the basis vector ``z_0`` sits
at ``t(C_1)`` and ``z_i`` at ``s(C_i)``; a direct letter ``C_i = a`` means
``a z_i = z_{i-1}`` and an inverse letter ``C_i = a^-1`` means
``a z_{i-1} = z_i``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import gf
from .algebra import AlgebraElement, Path, StringAlgebra
from .errors import (
    AlgebraMismatch,
    FVanishesAtZero,
    InvalidString,
    NotCyclic,
    NotSubmodule,
    ParseError,
    PreconditionError,
    ReducibleF,
)


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StringWord:
    """A word in arrows and inverse arrows, or the trivial word at a vertex.

    ``letters`` is a tuple of ``(label, sign)`` with sign ``+1`` for an arrow
    and ``-1`` for its formal inverse.
    """

    letters: tuple = ()
    vertex: str | None = None

    def __post_init__(self):
        letters = tuple((str(a), int(s)) for a, s in self.letters)
        object.__setattr__(self, "letters", letters)
        if letters and self.vertex is not None:
            raise PreconditionError("a nonempty word carries no vertex")
        if not letters and self.vertex is None:
            raise PreconditionError("the trivial word needs a vertex")
        if any(s not in (1, -1) for _, s in letters):
            raise PreconditionError("letter signs must be +1 or -1")

    @property
    def length(self) -> int:
        return len(self.letters)

    def __len__(self):
        return len(self.letters)

    @property
    def is_trivial(self) -> bool:
        return not self.letters

    def inverse(self) -> "StringWord":
        if self.is_trivial:
            return self
        return StringWord(tuple((a, -s) for a, s in reversed(self.letters)))

    def key(self) -> tuple:
        if self.is_trivial:
            return ((), self.vertex)
        return (tuple((a, 0 if s > 0 else 1) for a, s in self.letters), "")

    def sort_key(self) -> tuple:
        return (0, self.length) + self.key()

    def dim(self, algebra=None) -> int:
        return self.length + 1

    def __str__(self):
        if self.is_trivial:
            return f"@{self.vertex}"
        return " ".join(a if s > 0 else f"{a}^-1" for a, s in self.letters)

    def __repr__(self):
        return f"StringWord({str(self)!r})"


_LETTER = re.compile(r"([A-Za-z][A-Za-z0-9_']*)(\^\{?-1\}?)?$")


def parse_word(text: str) -> StringWord:
    """Parse ``x y^-1`` style text; ``@v`` is the trivial word at ``v``."""
    text = text.strip()
    if text.startswith("@"):
        v = text[1:].strip()
        if not v:
            raise ParseError("trivial word needs a vertex name")
        return StringWord((), v)
    tokens = text.replace("*", " ").split()
    if not tokens:
        raise ParseError("empty word")
    letters = []
    for tok in tokens:
        m = _LETTER.match(tok)
        if not m:
            raise ParseError(f"bad letter {tok!r}")
        letters.append((m.group(1), -1 if m.group(2) else 1))
    return StringWord(tuple(letters))


def as_word(w) -> StringWord:
    return w if isinstance(w, StringWord) else parse_word(str(w))


def letter_source(R: StringAlgebra, letter) -> str:
    a = R.quiver.arrow[letter[0]]
    return a.source if letter[1] > 0 else a.target


def letter_target(R: StringAlgebra, letter) -> str:
    a = R.quiver.arrow[letter[0]]
    return a.target if letter[1] > 0 else a.source


def check_string(S: StringWord, R: StringAlgebra) -> StringWord:
    """Validate the three string conditions; raise InvalidString otherwise.

    ``position`` in the error is the 1-based index of the offending letter.
    """
    if S.is_trivial:
        if S.vertex not in R.quiver.vertices:
            raise InvalidString(f"unknown vertex {S.vertex!r}", condition=0, position=0)
        return S
    L = S.letters
    for i, (a, _) in enumerate(L, start=1):
        if a not in R.quiver.arrow:
            raise InvalidString(f"unknown arrow {a!r}", condition=0, position=i)
    for i in range(len(L) - 1):
        if letter_target(R, L[i + 1]) != letter_source(R, L[i]):
            raise InvalidString(f"letters {i + 1} and {i + 2} do not compose", condition=1, position=i + 1)
        if L[i][0] == L[i + 1][0] and L[i][1] == -L[i + 1][1]:
            raise InvalidString(f"letter {i + 2} cancels letter {i + 1}", condition=2, position=i + 1)
    # maximal runs of one sign; a run in I (or whose inverse is in I) fails
    i = 0
    while i < len(L):
        j = i
        while j + 1 < len(L) and L[j + 1][1] == L[i][1]:
            j += 1
        labels = tuple(a for a, _ in L[i:j + 1])
        if L[i][1] < 0:
            labels = labels[::-1]
        if len(labels) >= 1 and R.in_ideal(labels):
            raise InvalidString(f"substring at letters {i + 1}..{j + 1} lies in I", condition=3, position=i + 1)
        i = j + 1
    return S


def is_string(S: StringWord, R: StringAlgebra) -> bool:
    try:
        check_string(S, R)
    except InvalidString:
        return False
    return True


def canonical_string(S: StringWord) -> StringWord:
    """The smaller of S and its inverse under the letter order (label, direct first)."""
    T = S.inverse()
    return S if S.key() <= T.key() else T


def string_start(S: StringWord, R: StringAlgebra) -> str:
    """Vertex of z_0."""
    return S.vertex if S.is_trivial else letter_target(R, S.letters[0])


def string_vertices(S: StringWord, R: StringAlgebra) -> list:
    """Vertex of each basis vector z_0..z_n."""
    if S.is_trivial:
        return [S.vertex]
    return [letter_target(R, S.letters[0])] + [letter_source(R, c) for c in S.letters]


# ---------------------------------------------------------------------------
# bands
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BandData:
    """A primitive cyclic word with an automorphism given by (f, power).

    ``f`` is monic irreducible with ``f(0) != 0``; the automorphism is the
    companion matrix of ``f^power``.
    """

    word: StringWord
    f: gf.FieldPolynomial
    power: int = 1

    def __post_init__(self):
        object.__setattr__(self, "word", as_word(self.word))
        object.__setattr__(self, "f", gf.FieldPolynomial(self.f))
        if self.power < 1:
            raise PreconditionError("band power must be >= 1")

    @property
    def length(self) -> int:
        return self.word.length

    @property
    def vdim(self) -> int:
        return int(self.f.degree) * self.power

    def dim(self, algebra=None) -> int:
        return self.length * self.vdim

    def sort_key(self) -> tuple:
        return (1, self.dim()) + self.word.key() + (self.f.coeffs, self.power)

    def __str__(self):
        return f"{self.word} ; f={self.f.to_list()} ; n={self.power}".replace(", ", ",")

    def __repr__(self):
        return f"BandData({str(self)!r})"


def _rotate(letters: tuple, i: int) -> tuple:
    return letters[i:] + letters[:i]


def _is_primitive(letters: tuple) -> bool:
    n = len(letters)
    return not any(n % d == 0 and letters == letters[d:] + letters[:d] for d in range(1, n))


def check_band(B: BandData, R: StringAlgebra) -> BandData:
    """Validate a band: cyclic word, primitive, f irreducible, f(0) != 0."""
    F = R.field
    W = B.word
    if W.is_trivial:
        raise NotCyclic("a band word must be nonempty")
    L = W.letters
    # every power must be a string; runs are bounded by q so a few laps suffice
    laps = 2 + -(-R.q // len(L))
    try:
        check_string(StringWord(L * laps), R)
    except InvalidString as exc:
        raise NotCyclic(f"{W} is not a cyclic string ({exc})") from None
    if not _is_primitive(L):
        raise NotCyclic(f"{W} is a proper power of a shorter word")
    f = B.f
    if f.degree < 1 or not f.is_monic():
        raise ReducibleF("f must be monic of degree >= 1")
    if any(c >= F.order for c in f.coeffs):
        raise ReducibleF("f has coefficients outside the field")
    if f.coeffs[0] == 0:
        raise FVanishesAtZero("f(0) = 0 so the automorphism is not invertible")
    if not gf.poly_is_irreducible(f, F):
        raise ReducibleF(f"{f.to_list()} is reducible")
    return B


def canonical_band(B: BandData, F: gf.FiniteField) -> BandData:
    """Least representative over rotations, and over the inverse word with f reciprocal."""
    L = B.word.letters
    inv = B.word.inverse().letters
    fr = gf.poly_reciprocal(B.f, F)
    cands = [BandData(StringWord(_rotate(L, i)), B.f, B.power) for i in range(len(L))]
    cands += [BandData(StringWord(_rotate(inv, i)), fr, B.power) for i in range(len(inv))]
    return min(cands, key=lambda b: (b.word.key(), b.f.coeffs))


def canonical_label(label, F: gf.FiniteField):
    if isinstance(label, BandData):
        return canonical_band(label, F)
    return canonical_string(as_word(label))


# ---------------------------------------------------------------------------
# modules
# ---------------------------------------------------------------------------

class RModule:
    """Graded representation of a string algebra.

    ``components`` optionally records canonical labels (StringWord or
    BandData, with repetition) of a known direct-sum decomposition.
    """

    def __init__(self, algebra: StringAlgebra, vertex_of_basis, action: dict, components=None):
        self.algebra = algebra
        self.vertex_of_basis = tuple(vertex_of_basis)
        n = len(self.vertex_of_basis)
        self.action = {}
        for a in algebra.quiver.arrows:
            A = action.get(a.label)
            A = gf.zeros(n, n) if A is None else gf.as_matrix(A)
            if A.shape != (n, n):
                raise PreconditionError(f"action of {a.label} has shape {A.shape}, expected {(n, n)}")
            A.setflags(write=False)
            self.action[a.label] = A
        extra = set(action) - set(self.action)
        if extra:
            raise PreconditionError(f"actions given for unknown arrows {sorted(extra)}")
        self.components = None if components is None else tuple(components)

    @property
    def dim(self) -> int:
        return len(self.vertex_of_basis)

    @property
    def F(self) -> gf.FiniteField:
        return self.algebra.field

    def __repr__(self):
        return f"<RModule dim {self.dim} over {self.algebra.name or 'R'}>"

    def vertex_indices(self, v) -> np.ndarray:
        return np.array([i for i, w in enumerate(self.vertex_of_basis) if w == v], dtype=np.int64)

    def idempotent(self, v) -> np.ndarray:
        E = gf.zeros(self.dim, self.dim)
        idx = self.vertex_indices(v)
        E[idx, idx] = 1
        return E

    def path_action(self, path) -> np.ndarray:
        labels = path.arrows if isinstance(path, Path) else tuple(path)
        if isinstance(path, Path) and path.is_trivial:
            return self.idempotent(path.source)
        return self._labels_action(tuple(labels))

    def _labels_action(self, labels: tuple) -> np.ndarray:
        cache = self._path_cache
        if labels not in cache:
            if len(labels) == 1:
                cache[labels] = self.action[labels[0]]
            else:
                cache[labels] = gf.matmul(self.F, self.action[labels[0]], self._labels_action(labels[1:]))
        return cache[labels]

    @cached_property
    def _path_cache(self) -> dict:
        return {}

    @cached_property
    def basis_actions(self) -> list:
        """Action matrix of each path-basis element of R, in basis order."""
        return [self.path_action(p) for p in self.algebra.path_basis]

    def element_action(self, r: AlgebraElement) -> np.ndarray:
        F = self.F
        out = gf.zeros(self.dim, self.dim)
        for k, c in r.terms.items():
            out = F.add(out, F.mul(c, self.basis_actions[k]))
        return out

    def is_decomposed(self) -> bool:
        return self.components is not None


def _require_same(M, N):
    if M.algebra != N.algebra:
        raise AlgebraMismatch("modules live over different algebras")


@dataclass
class CheckReport:
    ok: bool
    message: str = "ok"
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def module_check(M: RModule, R: StringAlgebra | None = None) -> CheckReport:
    """Verify the representation axioms; report the first violation."""
    R = M.algebra if R is None else R
    if R != M.algebra:
        return CheckReport(False, "module is over a different algebra")
    verts = np.array(M.vertex_of_basis, dtype=object)
    for v in set(M.vertex_of_basis):
        if v not in R.quiver.vertices:
            return CheckReport(False, f"basis vector at unknown vertex {v!r}")
    for a in R.quiver.arrows:
        A = M.action[a.label]
        rows, cols = np.nonzero(A)
        for i, j in zip(rows, cols):
            if verts[j] != a.source or verts[i] != a.target:
                return CheckReport(False, f"arrow {a.label} does not respect the grading",
                                   (a.label, int(i), int(j)))
    for f in R.forbidden:
        if M._labels_action(f).any():
            return CheckReport(False, f"relation {' '.join(f)} acts nonzero", f)
    for p in R.all_paths(R.q):
        if M._labels_action(p).any():
            return CheckReport(False, f"path {' '.join(p)} of length q acts nonzero", p)
    return CheckReport(True)


def zero_module(R: StringAlgebra) -> RModule:
    return RModule(R, (), {}, components=())


def string_module(S, R: StringAlgebra) -> RModule:
    """M(S) with basis z_0..z_n."""
    S = check_string(as_word(S), R)
    verts = string_vertices(S, R)
    n = len(verts)
    action = {a.label: gf.zeros(n, n) for a in R.quiver.arrows}
    for i, (a, s) in enumerate(S.letters, start=1):
        if s > 0:
            action[a][i - 1, i] = 1
        else:
            action[a][i, i - 1] = 1
    return RModule(R, verts, action, components=(canonical_string(S),))


def simple_module(R: StringAlgebra, v) -> RModule:
    return string_module(StringWord((), v), R)


def band_module(B: BandData, R: StringAlgebra, twist: int = 2) -> RModule:
    """M(W, phi) with slices V_1..V_L, each in the basis 1, x, .., x^(d-1).

    Letter j joins V_j and V_{j-1} (V_0 = V_L).  A direct letter maps
    V_j -> V_{j-1}; an inverse letter a^-1 means a maps V_{j-1} -> V_j.  The
    letter ``twist`` carries phi (direct) or phi^-1 (inverse) instead of the
    identity.
    """
    B = check_band(B, R)
    F = R.field
    L = B.word.letters
    n = len(L)
    d = B.vdim
    fn = gf.poly_pow(B.f, B.power, F)
    phi = gf.companion_matrix(fn, F)
    phi_inv = gf.inverse(F, phi)
    twist = twist if n >= twist else 1
    verts = []
    for c in L:
        verts.extend([letter_source(R, c)] * d)
    N = n * d
    action = {a.label: gf.zeros(N, N) for a in R.quiver.arrows}
    eye = gf.identity(d)

    def sl(j):  # slice j (1-based, cyclic) as a python slice
        j = (j - 1) % n + 1
        return slice((j - 1) * d, j * d)

    for j, (a, s) in enumerate(L, start=1):
        A = action[a]
        if s > 0:
            block = phi if j == twist else eye
            A[sl(j - 1), sl(j)] = F.add(A[sl(j - 1), sl(j)], block)
        else:
            block = phi_inv if j == twist else eye
            A[sl(j), sl(j - 1)] = F.add(A[sl(j), sl(j - 1)], block)
    return RModule(R, verts, action, components=(canonical_band(B, F),))


def component_module(label, R: StringAlgebra) -> RModule:
    if isinstance(label, BandData):
        return band_module(label, R)
    return string_module(label, R)


def direct_sum(*modules: RModule) -> RModule:
    """Block-diagonal direct sum (at least one summand)."""
    if not modules:
        raise PreconditionError("direct_sum needs at least one module")
    R = modules[0].algebra
    for M in modules[1:]:
        _require_same(modules[0], M)
    verts = [v for M in modules for v in M.vertex_of_basis]
    action = {a.label: gf.block_diag(*(M.action[a.label] for M in modules)) for a in R.quiver.arrows}
    if all(M.components is not None for M in modules):
        comps = tuple(c for M in modules for c in M.components)
    else:
        comps = None
    return RModule(R, verts, action, components=comps)


def power(M: RModule, k: int) -> RModule:
    if k < 1:
        return zero_module(M.algebra)
    return direct_sum(*([M] * k))


def module_from_components(labels, R: StringAlgebra) -> RModule:
    """Direct sum of string/band modules in the given order."""
    labels = list(labels)
    if not labels:
        return zero_module(R)
    cache: dict = {}
    parts = []
    for lab in labels:
        if lab not in cache:
            cache[lab] = component_module(lab, R)
        parts.append(cache[lab])
    return direct_sum(*parts)


def regular_module(R: StringAlgebra) -> RModule:
    """R acting on itself from the left; basis = path basis."""
    n = R.dim
    T = R.mult_table
    verts = [p.target for p in R.path_basis]
    action = {}
    for a in R.quiver.arrows:
        A = gf.zeros(n, n)
        ai = R.index[Path(a.source, a.target, (a.label,))] if (a.label,) not in R.forbidden else None
        if ai is not None:
            for j in range(n):
                k = int(T[ai, j])
                if k >= 0:
                    A[k, j] = 1
        action[a.label] = A
    return RModule(R, verts, action)


# ---------------------------------------------------------------------------
# homomorphisms and submodules
# ---------------------------------------------------------------------------

def hom_space(Q: RModule, M: RModule):
    """dim Hom_R(Q, M) and a basis of homomorphisms (dim M x dim Q matrices).

    Unknowns are only the entries joining basis vectors at the same vertex,
    which builds in compatibility with every idempotent.
    """
    _require_same(Q, M)
    F = Q.F
    R = Q.algebra
    unknowns = [(i, j) for j, vq in enumerate(Q.vertex_of_basis)
                for i, vm in enumerate(M.vertex_of_basis) if vm == vq]
    nq, nm = Q.dim, M.dim
    if not unknowns:
        return 0, []
    col = {u: c for c, u in enumerate(unknowns)}
    blocks = []
    for a in R.quiver.arrows:
        AQ, AM = Q.action[a.label], M.action[a.label]
        # (f AQ - AM f)[i, j] = sum_k f[i,k] AQ[k,j] - sum_k AM[i,k] f[k,j]
        rows = np.zeros((nm * nq, len(unknowns)), dtype=np.int64)
        for (i, k), c in col.items():
            js = np.flatnonzero(AQ[k])
            rows[i * nq + js, c] = F.add(rows[i * nq + js, c], AQ[k, js])
            ii = np.flatnonzero(AM[:, i])
            j = k
            rows[ii * nq + j, c] = F.sub(rows[ii * nq + j, c], AM[ii, i])
        rows = rows[rows.any(axis=1)]
        if rows.size:
            blocks.append(rows)
    system = np.vstack(blocks) if blocks else gf.zeros(0, len(unknowns))
    if system.shape[0] == 0:
        K = gf.identity(len(unknowns))
    else:
        K = gf.mat_kernel_basis(F, system)
    homs = []
    for t in range(K.shape[1]):
        H = gf.zeros(nm, nq)
        for (i, j), c in col.items():
            H[i, j] = K[c, t]
        homs.append(H)
    return len(homs), homs


def hom_dim(Q: RModule, M: RModule) -> int:
    return hom_space(Q, M)[0]


def radical_submodule(M: RModule) -> np.ndarray:
    """Canonical basis (columns) of JM, the span of all arrow images."""
    if M.dim == 0:
        return gf.zeros(0, 0)
    imgs = [A for A in M.action.values() if A.any()]
    if not imgs:
        return gf.zeros(M.dim, 0)
    return gf.span_basis(M.F, np.hstack(imgs), M.dim)


def generated_submodule(M: RModule, vectors) -> np.ndarray:
    """Canonical basis of the submodule generated by the given columns."""
    F = M.F
    V = gf.as_matrix(vectors) if np.size(vectors) else gf.zeros(M.dim, 0)
    if V.ndim == 1:
        V = V[:, None]
    idem = [M.idempotent(v) for v in M.algebra.quiver.vertices]
    cur = gf.span_basis(F, np.hstack([gf.matmul(F, E, V) for E in idem]) if V.shape[1] else V, M.dim)
    while True:
        imgs = [cur] + [gf.matmul(F, A, cur) for A in M.action.values()]
        nxt = gf.span_basis(F, np.hstack(imgs), M.dim)
        if nxt.shape[1] == cur.shape[1]:
            return nxt
        cur = nxt


def is_submodule(M: RModule, basis) -> bool:
    F = M.F
    U = gf.as_matrix(basis) if np.size(basis) else gf.zeros(M.dim, 0)
    if U.shape[1] == 0:
        return True
    ops = list(M.action.values()) + [M.idempotent(v) for v in M.algebra.quiver.vertices]
    return all(gf.subspace_contains(F, U, gf.matmul(F, A, U)) for A in ops)


def graded_basis(M: RModule, basis) -> tuple:
    """Split a submodule basis into vertex pieces: (columns, vertex list)."""
    F = M.F
    U = gf.as_matrix(basis)
    cols, verts = [], []
    for v in M.algebra.quiver.vertices:
        if not len(M.vertex_indices(v)):
            continue
        part = gf.span_basis(F, gf.matmul(F, M.idempotent(v), U), M.dim)
        cols.append(part)
        verts.extend([v] * part.shape[1])
    G = np.hstack(cols) if cols else gf.zeros(M.dim, 0)
    return G, verts


def submodule(M: RModule, basis) -> RModule:
    """The submodule spanned by ``basis`` as a module in its own right."""
    if not is_submodule(M, basis):
        raise NotSubmodule("the span is not closed under the action")
    F = M.F
    G, verts = graded_basis(M, basis)
    if G.shape[1] == 0:
        return zero_module(M.algebra)
    action = {}
    for a, A in M.action.items():
        action[a] = gf.solve(F, G, gf.matmul(F, A, G))
    return RModule(M.algebra, verts, action)


def is_isomorphic(M: RModule, N: RModule, tries: int = 64, seed: int = 0) -> bool:
    """Isomorphism test by searching for an invertible homomorphism.

    Exhaustive when the Hom space has at most ``tries`` elements,
    otherwise a seeded random search (a False answer is then only likely).
    """
    _require_same(M, N)
    if M.dim != N.dim:
        return False
    if M.dim == 0:
        return True
    for v in M.algebra.quiver.vertices:
        if len(M.vertex_indices(v)) != len(N.vertex_indices(v)):
            return False
    F = M.F
    d, homs = hom_space(M, N)
    if d == 0:
        return False
    if F.order ** d <= tries:
        combos = gf.all_vectors(F, d)
    else:
        rng = np.random.default_rng(seed)
        combos = (rng.integers(0, F.order, size=d) for _ in range(tries))
    for c in combos:
        H = gf.zeros(N.dim, M.dim)
        for coef, h in zip(c, homs):
            if coef:
                H = F.add(H, F.mul(int(coef), h))
        if gf.mat_rank(F, H) == M.dim:
            return True
    return False


# ---------------------------------------------------------------------------
# module spec files
# ---------------------------------------------------------------------------

def _parse_mult(text: str, lineno: int):
    body, star, mult = text.rpartition("*") if re.search(r"\*\s*\d+\s*$", text) else (text, "", "")
    if star:
        try:
            return body.strip(), int(mult)
        except ValueError:
            raise ParseError("bad multiplicity", lineno, 1) from None
    return text.strip(), 1


def parse_band(text: str, lineno: int = 1) -> BandData:
    parts = [p.strip() for p in text.split(";")]
    if len(parts) < 2:
        raise ParseError("band needs '<word> ; f=[..] ; n=<power>'", lineno, 1)
    word = parse_word(parts[0])
    f = None
    n = 1
    for p in parts[1:]:
        key, _, val = p.partition("=")
        key = key.strip()
        try:
            if key == "f":
                f = [int(c) for c in json.loads(val)]
            elif key == "n":
                n = int(val)
            else:
                raise ParseError(f"unknown band field {key!r}", lineno, 1)
        except (ValueError, TypeError):
            raise ParseError(f"bad value for {key!r}", lineno, 1) from None
    if f is None:
        raise ParseError("band needs f=[...]", lineno, 1)
    return BandData(word, gf.FieldPolynomial(f), n)


def parse_module_spec(text: str, R: StringAlgebra) -> RModule:
    """Parse a module spec and return the direct sum of its entries.

    Lines: ``string: <word> [* k]``, ``band: <word> ; f=[c0,..] ; n=<power> [* k]``
    and ``raw:`` blocks holding ``vertices ...`` and ``<arrow> = <json matrix>``
    lines, closed by ``end``.
    """
    parts = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        lineno = i + 1
        line = lines[i].split("#", 1)[0].strip()
        i += 1
        if not line:
            continue
        head, _, rest = line.partition(":")
        head = head.strip()
        try:
            if head == "string":
                body, k = _parse_mult(rest, lineno)
                M = string_module(parse_word(body), R)
                parts.extend([M] * k)
            elif head == "band":
                body, k = _parse_mult(rest, lineno)
                M = band_module(parse_band(body, lineno), R)
                parts.extend([M] * k)
            elif head == "raw":
                verts, action = None, {}
                while i < len(lines) and lines[i].split("#", 1)[0].strip() != "end":
                    ln = lines[i].split("#", 1)[0].strip()
                    i += 1
                    if not ln:
                        continue
                    if ln.startswith("vertices"):
                        verts = ln.split()[1:]
                    else:
                        lab, _, mat = ln.partition("=")
                        try:
                            action[lab.strip()] = np.array(json.loads(mat), dtype=np.int64)
                        except (ValueError, TypeError):
                            raise ParseError(f"bad matrix for {lab.strip()!r}", i, 1) from None
                if i >= len(lines):
                    raise ParseError("raw block without 'end'", lineno, 1)
                i += 1
                if verts is None:
                    raise ParseError("raw block needs a 'vertices' line", lineno, 1)
                n = len(verts)
                for lab, A in action.items():
                    if A.shape != (n, n) and not (n == 0 and A.size == 0):
                        raise ParseError(f"matrix for {lab!r} is not {n}x{n}", lineno, 1)
                M = RModule(R, verts, {k: v.reshape(n, n) for k, v in action.items()})
                rep = module_check(M)
                if not rep:
                    raise PreconditionError(f"raw module invalid: {rep.message}")
                parts.append(M)
            else:
                raise ParseError(f"unknown entry {head!r}", lineno, 1)
        except ParseError as exc:
            if exc.line is None:
                raise ParseError(str(exc), lineno, 1) from None
            raise
    if not parts:
        return zero_module(R)
    return direct_sum(*parts)


def emit_components(labels) -> str:
    """Module spec text for a list of component labels, grouping repeats."""
    out = []
    labels = list(labels)
    i = 0
    while i < len(labels):
        j = i
        while j + 1 < len(labels) and labels[j + 1] == labels[i]:
            j += 1
        lab = labels[i]
        kind = "band" if isinstance(lab, BandData) else "string"
        mult = f" * {j - i + 1}" if j > i else ""
        out.append(f"{kind}: {lab}{mult}")
        i = j + 1
    return "\n".join(out) + ("\n" if out else "")


def emit_raw(M: RModule) -> str:
    lines = ["raw:", "vertices " + " ".join(M.vertex_of_basis)]
    for a in M.algebra.quiver.arrows:
        lines.append(f"{a.label} = {json.dumps(gf.encode_matrix(M.action[a.label]))}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def component_counts(M: RModule) -> dict:
    """Multiset of canonical component labels; requires a known decomposition."""
    if M.components is None:
        raise PreconditionError("module has no recorded decomposition")
    out: dict = {}
    for c in M.components:
        out[c] = out.get(c, 0) + 1
    return out
