"""Normalized rank functions rk_M, rank profiles and the trim bound.

For an R-matrix A of shape k x l, ``blow_up(M, A)`` replaces every entry by
its action matrix on M, giving a (k dim M) x (l dim M) matrix over K, and
``rk(M, A) = rank(blow_up(M, A)) / dim M`` as an exact Fraction.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import gf
from .algebra import AlgebraElement, RMatrix, StringAlgebra, block_rmatrix, identity_rmatrix
from .errors import AlgebraMismatch, NotSubmodule, PreconditionError, SuiteMismatch
from .modules import RModule, direct_sum, is_submodule, power, submodule


def _stack(M: RModule) -> np.ndarray:
    st = getattr(M, "_action_stack", None)
    if st is None:
        if M.basis_actions:
            st = np.stack(M.basis_actions)
        else:
            st = np.zeros((0, M.dim, M.dim), dtype=np.int64)
        M._action_stack = st
    return st


def element_matrix(M: RModule, r: AlgebraElement) -> np.ndarray:
    F = M.F
    if not r.terms:
        return gf.zeros(M.dim, M.dim)
    if F.k == 1:
        st = _stack(M)
        keys = list(r.terms)
        coeffs = np.array([r.terms[k] for k in keys], dtype=np.int64)
        return np.tensordot(coeffs, st[keys], axes=1) % F.p
    return M.element_action(r)


def blow_up(M: RModule, A: RMatrix) -> np.ndarray:
    """The K-matrix of A acting on M^l -> M^k."""
    if A.algebra != M.algebra:
        raise AlgebraMismatch("matrix and module live over different algebras")
    d = M.dim
    out = np.zeros((A.rows * d, A.cols * d), dtype=np.int64)
    for i, row in enumerate(A.entries):
        for j, e in enumerate(row):
            if e.terms:
                out[i * d:(i + 1) * d, j * d:(j + 1) * d] = element_matrix(M, e)
    return out


def _sparse_actions(M: RModule) -> list:
    """(rows, cols, vals) of the action of every path-basis element."""
    sp = getattr(M, "_sparse_actions", None)
    if sp is None:
        sp = []
        for X in M.basis_actions:
            r, c = np.nonzero(X)
            sp.append((r, c, X[r, c]))
        M._sparse_actions = sp
    return sp


def blow_up_sparse(M: RModule, A: RMatrix):
    """Nonzero entries (rows, cols, vals) of blow_up(M, A), prime fields only."""
    F = M.F
    d = M.dim
    sp = _sparse_actions(M)
    rs, cs, vs = [], [], []
    for i, row in enumerate(A.entries):
        for j, e in enumerate(row):
            for k, coef in e.terms.items():
                r, c, v = sp[k]
                rs.append(r + i * d)
                cs.append(c + j * d)
                vs.append(v * coef)
    if not rs:
        z = np.zeros(0, dtype=np.int64)
        return z, z, z
    r = np.concatenate(rs)
    c = np.concatenate(cs)
    key = r * (A.cols * d) + c
    uniq, inv = np.unique(key, return_inverse=True)
    vals = np.zeros(uniq.size, dtype=np.int64)
    np.add.at(vals, inv, np.concatenate(vs))
    vals %= F.p
    keep = vals != 0
    uniq = uniq[keep]
    return uniq // (A.cols * d), uniq % (A.cols * d), vals[keep]


def raw_rank(M: RModule, A: RMatrix) -> int:
    if A.algebra != M.algebra:
        raise AlgebraMismatch("matrix and module live over different algebras")
    F = M.F
    if F.k == 1 and M.dim:
        r, c, v = blow_up_sparse(M, A)
        return gf.sparse_rank(F, (A.rows * M.dim, A.cols * M.dim), r, c, v)
    return gf.mat_rank(F, blow_up(M, A))


def rk(M: RModule, A: RMatrix) -> Fraction:
    if M.dim == 0:
        raise PreconditionError("rk is undefined on the zero module")
    return Fraction(raw_rank(M, A), M.dim)


# ---------------------------------------------------------------------------
# random R-matrices and test suites
# ---------------------------------------------------------------------------

def random_element(R: StringAlgebra, rng, density: float = 0.5) -> AlgebraElement:
    F = R.field
    coeffs = rng.integers(0, F.order, size=R.dim)
    keep = rng.random(R.dim) < density
    return AlgebraElement(R, {i: int(c) for i, c in enumerate(coeffs) if keep[i]})


def random_rmatrix(R: StringAlgebra, rows: int, cols: int, rng, density: float = 0.5) -> RMatrix:
    return RMatrix(R, [[random_element(R, rng, density) for _ in range(cols)] for _ in range(rows)])


def height_elements(R: StringAlgebra, h: int) -> list:
    """Nonzero elements whose coefficients (as field codes) are all <= h."""
    top = min(h, R.field.order - 1)
    out = []
    for coeffs in itertools.product(range(top + 1), repeat=R.dim):
        if any(coeffs):
            out.append(AlgebraElement(R, dict(enumerate(coeffs))))
    return out


class TestSuite:
    """Deterministic list of test matrices.

    All 1 x 1 matrices with coefficient height <= h come first, then
    ``per_size`` seeded random k x l matrices for every 1 <= k, l <= s (in
    row-major size order), then any extras.
    """

    __test__ = False  # not a pytest class

    def __init__(self, R: StringAlgebra, s: int = 3, h: int = 1, per_size: int = 2,
                 seed: int = 0, extras=()):
        if s < 1 or h < 0:
            raise PreconditionError("suite needs s >= 1 and h >= 0")
        self.algebra = R
        self.s, self.h, self.per_size, self.seed = s, h, per_size, seed
        mats = [RMatrix(R, [[e]]) for e in height_elements(R, h)]
        rng = np.random.default_rng(seed)
        for k in range(1, s + 1):
            for l in range(1, s + 1):
                for _ in range(per_size):
                    mats.append(random_rmatrix(R, k, l, rng))
        mats.extend(extras)
        self.matrices = mats

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def __getitem__(self, i):
        return self.matrices[i]

    def key(self) -> tuple:
        return (self.s, self.h, self.per_size, self.seed, len(self.matrices))


@dataclass
class RankProfile:
    suite_key: tuple
    values: list

    def as_json(self, suite) -> list:
        return [[str(A), _ratio(v)] for A, v in zip(suite, self.values)]


def _ratio(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def profile(M: RModule, suite) -> RankProfile:
    key = suite.key() if hasattr(suite, "key") else (len(suite),)
    return RankProfile(key, [rk(M, A) for A in suite])


def profile_distance(p: RankProfile, q: RankProfile) -> Fraction:
    """Sum over tests i = 1, 2, .. of 2^-i |p_i - q_i|."""
    if p.suite_key != q.suite_key or len(p.values) != len(q.values):
        raise SuiteMismatch("profiles were computed on different suites")
    return sum((Fraction(1, 2 ** (i + 1)) * abs(a - b) for i, (a, b) in enumerate(zip(p.values, q.values))),
               Fraction(0))


# ---------------------------------------------------------------------------
# audits
# ---------------------------------------------------------------------------

@dataclass
class AuditReport:
    checks: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, what, **data):
        self.violations.append({"check": what, **data})


def sylvester_audit(M: RModule, trials: int = 100, seed: int = 0, max_size: int = 2,
                    suite=None) -> AuditReport:
    """Exact check of the four Sylvester axioms on random matrices.

    Per trial: rk(A B) <= min(rk A, rk B), rk(diag(A, B)) = rk A + rk B and
    rk([[A, C], [0, B]]) >= rk A + rk B; rk(1) = 1 once.  Suite matrices,
    when given, are mixed in as the A factors.
    """
    R = M.algebra
    rng = np.random.default_rng(seed)
    rep = AuditReport()
    rep.checks += 1
    if rk(M, identity_rmatrix(R, 1)) != 1:
        rep.fail("unit", value=str(rk(M, identity_rmatrix(R, 1))))
    pool = list(suite) if suite is not None else []
    for t in range(trials):
        if pool and t % 2 == 1:
            A = pool[int(rng.integers(len(pool)))]
        else:
            A = random_rmatrix(R, int(rng.integers(1, max_size + 1)), int(rng.integers(1, max_size + 1)), rng)
        k, l = A.shape
        m = int(rng.integers(1, max_size + 1))
        B = random_rmatrix(R, l, m, rng)
        C = random_rmatrix(R, k, m, rng)
        ra, rb = rk(M, A), rk(M, B)
        rab = rk(M, A @ B)
        rep.checks += 3
        if rab > min(ra, rb):
            rep.fail("product", trial=t, rkA=str(ra), rkB=str(rb), rkAB=str(rab))
        rdiag = rk(M, block_rmatrix(R, [[A, None], [None, B]]))
        if rdiag != ra + rb:
            rep.fail("diagonal", trial=t, rkA=str(ra), rkB=str(rb), value=str(rdiag))
        rtri = rk(M, block_rmatrix(R, [[A, C], [None, B]]))
        if rtri < ra + rb:
            rep.fail("triangular", trial=t, rkA=str(ra), rkB=str(rb), value=str(rtri))
    return rep


def weights(components) -> list:
    """w_Q = n_Q dim Q / dim M for a list of (Q, n_Q)."""
    total = sum(n * Q.dim for Q, n in components)
    return [Fraction(n * Q.dim, total) for Q, n in components]


def weight_identity_check(components, suite) -> AuditReport:
    """rk of the direct sum equals the weight-averaged component ranks."""
    comps = [(Q, n) for Q, n in components if n > 0]
    if not comps:
        raise PreconditionError("need at least one component with positive multiplicity")
    M = direct_sum(*[power(Q, n) for Q, n in comps])
    w = weights(comps)
    rep = AuditReport()
    if sum(w) != 1:
        rep.fail("weights", total=str(sum(w)))
    for i, A in enumerate(suite):
        lhs = rk(M, A)
        rhs = sum((wi * rk(Q, A) for wi, (Q, _) in zip(w, comps)), Fraction(0))
        rep.checks += 1
        if lhs != rhs:
            rep.fail("weight identity", test=i, lhs=str(lhs), rhs=str(rhs))
    return rep


def trim_bound_check(M: RModule, N_basis, suite) -> AuditReport:
    """|rk_M(A) - rk_N(A)| <= 2 eps l with eps = 1 - dim N / dim M."""
    if not is_submodule(M, N_basis):
        raise NotSubmodule("the given span is not a submodule")
    N = submodule(M, N_basis)
    if N.dim == 0:
        raise PreconditionError("the submodule must be nonzero")
    eps = 1 - Fraction(N.dim, M.dim)
    rep = AuditReport()
    for i, A in enumerate(suite):
        gap = abs(rk(M, A) - rk(N, A))
        bound = 2 * eps * A.cols
        rep.checks += 1
        if gap > bound:
            rep.fail("trim bound", test=i, gap=str(gap), bound=str(bound))
    return rep


def random_trim(M: RModule, steps: int, rng) -> np.ndarray:
    """A submodule of codimension ``steps`` (or less if M runs out).

    Each step keeps JN and cuts the top of N by one dimension at a random
    vertex, which always yields a submodule.
    """
    F = M.F
    n = M.dim
    N = gf.identity(n)
    verts = list(M.algebra.quiver.vertices)
    idem = {v: M.idempotent(v) for v in verts}
    for _ in range(steps):
        if N.shape[1] == 0:
            break
        JN = gf.span_basis(F, np.hstack([gf.matmul(F, A, N) for A in M.action.values()]), n)
        parts = {v: gf.span_basis(F, gf.matmul(F, idem[v], N), n) for v in verts}
        jparts = {v: gf.span_basis(F, gf.matmul(F, idem[v], JN), n) if JN.shape[1] else gf.zeros(n, 0)
                  for v in verts}
        choices = [v for v in verts if parts[v].shape[1] > jparts[v].shape[1]]
        if not choices:
            break
        v = choices[int(rng.integers(len(choices)))]
        W = jparts[v]
        comp = []
        cur = W
        for j in range(parts[v].shape[1]):
            c = parts[v][:, j:j + 1]
            trial = np.hstack([cur, c]) if cur.shape[1] else c
            if gf.mat_rank(F, trial) > cur.shape[1]:
                comp.append(c)
                cur = trial
        C = np.hstack(comp)
        lam = gf.zeros(1, C.shape[1])
        while not lam.any():
            lam = gf.random_matrix(F, 1, C.shape[1], rng)
        H = gf.matmul(F, C, gf.mat_kernel_basis(F, lam))
        pieces = [W, H] + [parts[u] for u in verts if u != v]
        pieces = [p for p in pieces if p.shape[1]]
        N = gf.span_basis(F, np.hstack(pieces), n) if pieces else gf.zeros(n, 0)
    return N
