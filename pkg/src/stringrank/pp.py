"""pp-formulas, their solution subspaces and dimension functions.

A formula of type t is an m x n R-matrix A; ``M(phi)`` is the set of
``v in M^t`` for which some ``y in M^(n-t)`` gives ``A (v, y) = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import gf
from .algebra import RMatrix, StringAlgebra, rmatrix_emit, rmatrix_parse
from .errors import MethodDisagreement, NotIsolating, ParseError, PreconditionError
from .modules import RModule, as_word, check_string
from .rank import blow_up, rk


@dataclass(frozen=True, eq=False)
class PPFormula:
    matrix: RMatrix
    t: int

    def __post_init__(self):
        if not 1 <= self.t <= self.matrix.cols:
            raise PreconditionError(f"type t={self.t} must lie in [1, {self.matrix.cols}]")

    @property
    def algebra(self) -> StringAlgebra:
        return self.matrix.algebra

    def cut(self) -> RMatrix:
        """A with its first t columns set to zero."""
        return self.matrix.zero_columns(range(self.t))


@dataclass(frozen=True, eq=False)
class PPPair:
    phi: PPFormula
    psi: PPFormula

    def __post_init__(self):
        if self.phi.t != self.psi.t:
            raise PreconditionError("pair members must have the same type")


def pp_subspace(M: RModule, phi: PPFormula) -> np.ndarray:
    """Canonical basis (columns) of M(phi) inside M^t."""
    F = M.F
    d = M.dim
    K = gf.mat_kernel_basis(F, blow_up(M, phi.matrix))
    return gf.span_basis(F, K[: phi.t * d], phi.t * d)


def pp_dim_direct(M: RModule, phi: PPFormula) -> Fraction:
    return Fraction(pp_subspace(M, phi).shape[1], M.dim)


def pp_dim_formula(M: RModule, phi: PPFormula) -> Fraction:
    """t + rk(B) - rk(A), B = A with the free columns cut to zero."""
    return phi.t + rk(M, phi.cut()) - rk(M, phi.matrix)


def pp_dim(M: RModule, phi: PPFormula) -> Fraction:
    """D_M(phi), computed two ways that must agree exactly."""
    a = pp_dim_direct(M, phi)
    b = pp_dim_formula(M, phi)
    if a != b:
        raise MethodDisagreement(f"kernel projection gives {a}, rank formula gives {b}")
    return a


def pp_count(M: RModule, phi: PPFormula) -> int:
    """Unnormalized dim_K M(phi)."""
    return pp_subspace(M, phi).shape[1]


def free_formula(R: StringAlgebra, t: int = 1) -> PPFormula:
    return PPFormula(RMatrix(R, [[R.zero()] * t]), t)


def zero_formula(R: StringAlgebra, t: int = 1) -> PPFormula:
    from .algebra import identity_rmatrix
    return PPFormula(identity_rmatrix(R, t), t)


# ---------------------------------------------------------------------------
# lattice audit
# ---------------------------------------------------------------------------

@dataclass
class LatticeReport:
    checks: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def dimension_function_audit(M: RModule, formulas, trials: int = 50, seed: int = 0) -> LatticeReport:
    """Modular law, monotonicity and the two extreme values on computed subspaces."""
    formulas = list(formulas)
    if not formulas:
        raise PreconditionError("need at least one formula")
    t = formulas[0].t
    if any(f.t != t for f in formulas):
        raise PreconditionError("formulas must share one type")
    F = M.F
    R = M.algebra
    n = t * M.dim
    rep = LatticeReport()
    if pp_dim(M, zero_formula(R, t)) != 0:
        rep.violations.append({"check": "bottom"})
    if pp_dim(M, free_formula(R, t)) != t:
        rep.violations.append({"check": "top"})
    rep.checks += 2
    spaces = [pp_subspace(M, f) for f in formulas]
    for f, U in zip(formulas, spaces):
        rep.checks += 1
        if Fraction(U.shape[1], M.dim) != pp_dim(M, f):
            rep.violations.append({"check": "two methods"})
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        i, j = (int(x) for x in rng.integers(len(spaces), size=2))
        U, V = spaces[i], spaces[j]
        meet = gf.subspace_intersect(F, U, V) if U.shape[1] and V.shape[1] else gf.zeros(n, 0)
        join = gf.subspace_sum(F, U, V)
        rep.checks += 1
        if meet.shape[1] + join.shape[1] != U.shape[1] + V.shape[1]:
            rep.violations.append({"check": "modular", "pair": (i, j)})
        if gf.subspace_contains(F, V, U) and U.shape[1] > V.shape[1]:
            rep.violations.append({"check": "monotone", "pair": (i, j)})
    return rep


# ---------------------------------------------------------------------------
# pairs and weights
# ---------------------------------------------------------------------------

def pair_gap(M: RModule, pair: PPPair) -> Fraction:
    """D_M(phi) - D_M(psi), after checking M(psi) is inside M(phi)."""
    U = pp_subspace(M, pair.phi)
    V = pp_subspace(M, pair.psi)
    if not gf.subspace_contains(M.F, U, V):
        raise PreconditionError("M(psi) is not contained in M(phi) on this module")
    return Fraction(U.shape[1] - V.shape[1], M.dim)


def weight_from_isolating_pair(M: RModule, Q: RModule, pair: PPPair, others=None) -> Fraction:
    """w_Q(M) = (D_M(phi) - D_M(psi)) / (D_Q(phi) - D_Q(psi)).

    ``others`` lists the remaining indecomposables that may occur in M; the
    pair must vanish on each of them.
    """
    denom = pair_gap(Q, pair)
    if denom == 0:
        raise NotIsolating("the pair does not separate Q")
    for P in others or ():
        if pair_gap(P, pair) != 0:
            raise NotIsolating("the pair does not vanish on another component")
    return pair_gap(M, pair) / denom


def string_counting_pair(S, R: StringAlgebra) -> PPPair:
    """The pair whose gap counts right endpoints of copies of S.

    Variables are ordered (n_k, n_0, .., n_{k-1}) so the type is 1.  Row i
    is E_i: ``C_i n_i - n_{i-1}`` for a direct letter and
    ``C_i n_{i-1} - n_i`` for an inverse one; psi adds ``n_0 = 0``.
    """
    S = check_string(as_word(S), R)
    if S.is_trivial:
        raise PreconditionError("the counting pair needs a string of length >= 1")
    k = S.length
    Z = R.zero()
    one = R.one()
    minus = -one

    def col(i):  # column of variable n_i
        return 0 if i == k else i + 1

    rows = []
    for i, (a, s) in enumerate(S.letters, start=1):
        row = [Z] * (k + 1)
        alpha = R.arrow_element(a)
        if s > 0:
            row[col(i)] = alpha
            row[col(i - 1)] = row[col(i - 1)] + minus
        else:
            row[col(i - 1)] = alpha
            row[col(i)] = row[col(i)] + minus
        rows.append(row)
    phi = PPFormula(RMatrix(R, rows), 1)
    e0 = [Z] * (k + 1)
    e0[col(0)] = one
    psi = PPFormula(RMatrix(R, rows + [e0]), 1)
    return PPPair(phi, psi)


def hom_formula(C: RModule) -> PPFormula:
    """A formula with M(phi) = Hom_R(C, M) for every M.

    Variables are the images of a minimal generating set of C (unit
    vectors completing JC at each vertex); rows force each variable into
    its vertex and impose a K-basis of the relations among the generators.
    """
    from .algebra import AlgebraElement
    from .modules import radical_submodule
    R = C.algebra
    F = C.F
    if C.dim == 0:
        raise PreconditionError("C must be nonzero")
    J = radical_submodule(C)
    gens = []
    for v in R.quiver.vertices:
        cur = J
        for j in C.vertex_indices(v):
            e = gf.zeros(C.dim, 1)
            e[j, 0] = 1
            trial = np.hstack([cur, e]) if cur.shape[1] else e
            if gf.mat_rank(F, trial) > (gf.mat_rank(F, cur) if cur.shape[1] else 0):
                gens.append((int(j), v))
                cur = trial
    cols = [(i, p) for i, (j, v) in enumerate(gens) for p in R.path_basis if p.source == v]
    img = np.stack([C.path_action(p)[:, j] for i, p in cols for j in [gens[i][0]]], axis=1)
    K = gf.mat_kernel_basis(F, img)
    k = len(gens)
    rows = []
    for i, (_, v) in enumerate(gens):
        row = [R.zero()] * k
        row[i] = AlgebraElement(R, {R.index[R.trivial(u)]: 1 for u in R.quiver.vertices if u != v})
        rows.append(row)
    for c in range(K.shape[1]):
        terms = [dict() for _ in range(k)]
        for (i, p), x in zip(cols, K[:, c]):
            if x:
                terms[i][R.index[p]] = int(x)
        rows.append([AlgebraElement(R, t) for t in terms])
    return PPFormula(RMatrix(R, rows), k)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def parse_formula(text: str, R: StringAlgebra) -> PPFormula:
    """``t=<k>`` on the first nonblank line, then an R-matrix."""
    lines = text.strip().splitlines()
    if not lines or not lines[0].strip().startswith("t="):
        raise ParseError("formula must start with 't=<k>'", 1, 1)
    try:
        t = int(lines[0].strip()[2:])
    except ValueError:
        raise ParseError("bad type header", 1, 1) from None
    return PPFormula(rmatrix_parse("\n".join(lines[1:]), R), t)


def emit_formula(phi: PPFormula) -> str:
    return f"t={phi.t}\n{rmatrix_emit(phi.matrix)}\n"


def parse_pair(text: str, R: StringAlgebra) -> PPPair:
    """Two formulas introduced by ``phi:`` and ``psi:`` lines."""
    parts: dict = {}
    cur = None
    for line in text.splitlines():
        s = line.strip()
        if s in ("phi:", "psi:"):
            cur = s[:-1]
            parts[cur] = []
        elif cur is not None:
            parts[cur].append(line)
        elif s:
            raise ParseError("expected 'phi:' before the first formula", 1, 1)
    if set(parts) != {"phi", "psi"}:
        raise ParseError("a pair needs both 'phi:' and 'psi:' sections", 1, 1)
    return PPPair(parse_formula("\n".join(parts["phi"]), R), parse_formula("\n".join(parts["psi"]), R))


def emit_pair(pair: PPPair) -> str:
    return "phi:\n" + emit_formula(pair.phi) + "psi:\n" + emit_formula(pair.psi)
