"""Exact linear algebra over finite fields GF(p^k).

Field elements are encoded as integers in ``[0, p^k)``; for an extension
field the base-p digits of the code are the coefficients (low degree first)
of the residue polynomial modulo the stored modulus.  Matrices are plain
``int64`` numpy arrays of such codes, always paired with the field they live
over.  Subspaces of ``K^n`` are given by matrices whose *columns* span them;
canonical bases are the rows of the reduced row echelon form, returned as
columns.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    AmbientMismatch,
    DegreeMismatch,
    NotMonic,
    NotPrime,
    ReducibleModulus,
)

# largest extension field for which full add/mul tables are built
MAX_TABLE_ORDER = 1024
# matrices with more entries than this are split into connected blocks
_SPLIT_THRESHOLD = 400


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


@dataclass(frozen=True)
class FieldPolynomial:
    """Polynomial over a finite field, coefficients low degree first.

    Trailing zeros are stripped on construction, so equal polynomials
    compare equal.  The zero polynomial has degree ``-inf``.
    """

    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        while c and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self):
        return f"FieldPolynomial({list(self.coeffs)})"

    def to_list(self) -> list:
        return list(self.coeffs)


class FiniteField:
    """The field GF(p^k).

    Use :func:`field_make` for the validating constructor; building the class
    directly performs the same checks.
    """

    def __init__(self, p: int, k: int = 1, modulus=None):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if k < 1:
            raise DegreeMismatch(f"extension degree must be >= 1, got {k}")
        self.p = int(p)
        self.k = int(k)
        self.order = self.p ** self.k
        if k == 1:
            if modulus is not None:
                mod = FieldPolynomial(modulus)
                if mod.degree != 1 or not mod.is_monic():
                    raise DegreeMismatch("a prime field takes no modulus (or a monic linear one)")
            self.modulus = None
        else:
            if self.order > MAX_TABLE_ORDER:
                raise DegreeMismatch(f"GF({p}^{k}) exceeds the supported order {MAX_TABLE_ORDER}")
            base = FiniteField(p)
            if modulus is None:
                mod = _least_irreducible(base, k)
            else:
                mod = FieldPolynomial(modulus)
                if mod.degree != k:
                    raise DegreeMismatch(f"modulus has degree {mod.degree}, expected {k}")
                if not mod.is_monic():
                    raise NotMonic("modulus must be monic")
                if any(c >= p or c < 0 for c in mod.coeffs):
                    raise ReducibleModulus("modulus coefficients must lie in [0, p)")
                if not poly_is_irreducible(mod, base):
                    raise ReducibleModulus(f"{mod.to_list()} is reducible over GF({p})")
            self.modulus = mod
            self._build_tables()

    # -- identity -------------------------------------------------------
    def _key(self):
        return (self.p, self.k, self.modulus.coeffs if self.modulus else None)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k}, modulus={self.modulus.to_list()})"

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    # -- tables for extension fields -----------------------------------
    def _build_tables(self):
        p, k, q = self.p, self.k, self.order
        codes = np.arange(q)
        digits = np.stack([(codes // p**i) % p for i in range(k)], axis=1)
        weights = p ** np.arange(k)
        self._add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self._neg = ((-digits) % p) @ weights
        # discrete logarithms relative to a primitive element
        mod = list(self.modulus.coeffs)

        def times(a, b):
            prod = [0] * (2 * k - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        prod[i + j] = (prod[i + j] + x * y) % p
            for d in range(2 * k - 2, k - 1, -1):
                c = prod[d]
                if c:
                    for i in range(k + 1):
                        prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % p
            return prod[:k]

        for g in range(2, q):
            gd = [int(x) for x in digits[g]]
            exp = [1]
            cur = [1] + [0] * (k - 1)
            for _ in range(q - 2):
                cur = times(cur, gd)
                code = sum(c * p**i for i, c in enumerate(cur))
                if code == 1:
                    break
                exp.append(code)
            if len(exp) == q - 1:
                break
        exp = np.array(exp, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        nz = codes[1:]
        mul = np.zeros((q, q), dtype=np.int64)
        mul[1:, 1:] = exp[(log[nz][:, None] + log[nz][None, :]) % (q - 1)]
        self._mul = mul
        inv = np.zeros(q, dtype=np.int64)
        inv[nz] = exp[(-log[nz]) % (q - 1)]
        self._inv = inv
        self._add = self._add.astype(np.int64)
        self._neg = self._neg.astype(np.int64)

    # -- element arithmetic (scalars or arrays) -------------------------
    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        return self._add[a, b]

    def neg(self, a):
        if self.k == 1:
            return (-a) % self.p
        return self._neg[a]

    def sub(self, a, b):
        if self.k == 1:
            return (a - b) % self.p
        return self._add[a, self._neg[b]]

    def mul(self, a, b):
        if self.k == 1:
            return (a * b) % self.p
        return self._mul[a, b]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("zero has no inverse")
        if self.k == 1:
            if np.ndim(a) == 0:
                return pow(int(a), self.p - 2, self.p)
            return np.array([pow(int(x), self.p - 2, self.p) for x in np.ravel(a)],
                            dtype=np.int64).reshape(np.shape(a))
        return self._inv[a]

    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def minus_one(self) -> int:
        return int(self.neg(1))


def field_make(p: int, k: int = 1, modulus=None) -> FiniteField:
    """Validated GF(p^k); for k > 1 without a modulus the least irreducible one is used."""
    return FiniteField(p, k, modulus)


def _monic_candidates(F: FiniteField, degree: int):
    """Monic polynomials of the given degree, ordered by the integer encoding
    of their lower coefficients (high coefficient most significant)."""
    q = F.order
    for code in range(q**degree):
        low = [(code // q**i) % q for i in range(degree)]
        yield FieldPolynomial(low + [1])


def _least_irreducible(F: FiniteField, degree: int) -> FieldPolynomial:
    for f in _monic_candidates(F, degree):
        if poly_is_irreducible(f, F):
            return f
    raise ReducibleModulus(f"no irreducible polynomial of degree {degree}")  # pragma: no cover


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

def poly_add(f, g, F: FiniteField) -> FieldPolynomial:
    a, b = list(f), list(g)
    n = max(len(a), len(b))
    a += [0] * (n - len(a))
    b += [0] * (n - len(b))
    return FieldPolynomial([int(F.add(x, y)) for x, y in zip(a, b)])


def poly_sub(f, g, F: FiniteField) -> FieldPolynomial:
    return poly_add(f, [int(F.neg(c)) for c in g], F)


def poly_mul(f, g, F: FiniteField) -> FieldPolynomial:
    a, b = list(f), list(g)
    if not a or not b:
        return FieldPolynomial(())
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = int(F.add(out[i + j], F.mul(x, y)))
    return FieldPolynomial(out)


def poly_divmod(f, g, F: FiniteField):
    """Quotient and remainder of f by a nonzero g."""
    g = FieldPolynomial(g)
    if g.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(FieldPolynomial(f).coeffs)
    dg = len(g.coeffs) - 1
    lead_inv = int(F.inv(g.coeffs[-1]))
    quot = [0] * max(len(r) - dg, 1)
    while len(r) - 1 >= dg and r:
        shift = len(r) - 1 - dg
        c = int(F.mul(r[-1], lead_inv))
        quot[shift] = c
        for i, gc in enumerate(g.coeffs):
            r[shift + i] = int(F.sub(r[shift + i], F.mul(c, gc)))
        while r and r[-1] == 0:
            r.pop()
    return FieldPolynomial(quot), FieldPolynomial(r)


def poly_pow(f, n: int, F: FiniteField) -> FieldPolynomial:
    out = FieldPolynomial([1])
    base = FieldPolynomial(f)
    while n:
        if n & 1:
            out = poly_mul(out, base, F)
        base = poly_mul(base, base, F)
        n >>= 1
    return out


def poly_eval(f, x: int, F: FiniteField) -> int:
    acc = 0
    for c in reversed(tuple(f)):
        acc = int(F.add(F.mul(acc, x), c))
    return acc


def poly_is_irreducible(f, F: FiniteField) -> bool:
    """Trial division by every monic polynomial of degree 1 .. deg(f)//2."""
    f = FieldPolynomial(f)
    if not f.is_monic():
        raise NotMonic(f"{f.to_list()} is not monic")
    d = f.degree
    if d < 1:
        raise DegreeMismatch("irreducibility needs degree >= 1")
    for e in range(1, d // 2 + 1):
        for g in _monic_candidates(F, e):
            if poly_divmod(f, g, F)[1].is_zero:
                return False
    return True


def poly_reciprocal(f, F: FiniteField) -> FieldPolynomial:
    """Monic reciprocal x^deg f(1/x) / f(0); the minimal polynomial of the inverse map."""
    f = FieldPolynomial(f)
    rev = list(reversed(f.coeffs))
    if rev[-1] == 0:
        raise ZeroDivisionError("f(0) = 0 has no reciprocal")
    lead_inv = int(F.inv(rev[-1]))
    return FieldPolynomial([int(F.mul(c, lead_inv)) for c in rev])


def monic_irreducibles(F: FiniteField, degree: int):
    """All monic irreducible polynomials of the given degree, in candidate order."""
    return [f for f in _monic_candidates(F, degree) if poly_is_irreducible(f, F)]


def companion_matrix(f, F: FiniteField) -> np.ndarray:
    """Matrix of multiplication by x on K[x]/(f) in the basis 1, x, ..., x^(d-1)."""
    f = FieldPolynomial(f)
    if not f.is_monic():
        raise NotMonic("companion matrix needs a monic polynomial")
    d = f.degree
    C = np.zeros((d, d), dtype=np.int64)
    for i in range(d - 1):
        C[i + 1, i] = 1
    for i in range(d):
        C[i, d - 1] = F.neg(f.coeffs[i])
    return C


def charpoly(A: np.ndarray, F: FiniteField) -> FieldPolynomial:
    """Characteristic polynomial det(xI - A).

    The space is swept by Krylov chains; each chain is taken modulo the
    invariant subspace already covered, and the product of the chain
    relations is the characteristic polynomial.  Desk scale only.
    """
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    result = FieldPolynomial([1])
    covered = np.zeros((n, 0), dtype=np.int64)
    for start in range(n):
        e = np.zeros((n, 1), dtype=np.int64)
        e[start, 0] = 1
        if mat_rank(F, np.hstack([covered, e])) == covered.shape[1]:
            continue
        # Krylov chain of e modulo the already covered invariant subspace
        vecs = [e]
        while True:
            nxt = matmul(F, A, vecs[-1])
            stack = np.hstack([covered] + vecs + [nxt])
            if mat_rank(F, stack) == stack.shape[1] - 1:
                break
            vecs.append(nxt)
        # express nxt in terms of covered + chain to read off the relation
        basis = np.hstack([covered] + vecs)
        sol = solve(F, basis, nxt)
        coeffs = [int(F.neg(c)) for c in sol[covered.shape[1]:, 0]] + [1]
        result = poly_mul(result, FieldPolynomial(coeffs), F)
        covered = np.hstack([covered] + vecs)
    return result


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

def as_matrix(A, rows=None, cols=None) -> np.ndarray:
    M = np.asarray(A, dtype=np.int64)
    if M.ndim != 2:
        if rows is not None and cols is not None:
            M = M.reshape(rows, cols)
        else:
            raise ValueError("matrix must be two-dimensional")
    return M


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def random_matrix(F: FiniteField, rows: int, cols: int, rng) -> np.ndarray:
    return rng.integers(0, F.order, size=(rows, cols), dtype=np.int64)


def mat_add(F: FiniteField, A, B) -> np.ndarray:
    return F.add(np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64))


def mat_sub(F: FiniteField, A, B) -> np.ndarray:
    return F.sub(np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64))


def mat_scale(F: FiniteField, c: int, A) -> np.ndarray:
    return F.mul(int(c), np.asarray(A, dtype=np.int64))


def matmul(F: FiniteField, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if F.k == 1:
        p = F.p
        if A.shape[1] * (p - 1) ** 2 < 2**62:
            return (A @ B) % p
        return ((A.astype(object) @ B.astype(object)) % p).astype(np.int64)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for j in range(A.shape[1]):
        col = A[:, j]
        row = B[j]
        if col.any() and row.any():
            out = F._add[out, F._mul[col[:, None], row[None, :]]]
    return out


def block_diag(*blocks) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def _eliminate(F: FiniteField, A: np.ndarray, reduced: bool):
    """Row echelon form by first-nonzero pivoting, leftmost column first.

    Returns the transformed copy and the list of pivot columns.  Pivot rows
    are normalized to a leading 1; with ``reduced`` the pivot columns are
    cleared above the pivot as well.
    """
    A = np.array(A, dtype=np.int64, copy=True)
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        lead = int(A[r, c])
        if lead != 1:
            A[r, c:] = F.mul(int(F.inv(lead)), A[r, c:])
        if reduced:
            targets = np.flatnonzero(A[:, c])
            targets = targets[targets != r]
        else:
            targets = r + 1 + np.flatnonzero(A[r + 1:, c])
        if targets.size:
            factors = A[targets, c][:, None]
            A[targets, c:] = F.sub(A[targets, c:], F.mul(factors, A[r, c:][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def rref(F: FiniteField, A) -> tuple[np.ndarray, list]:
    """Reduced row echelon form, trimmed to its nonzero rows, and pivot columns."""
    E, pivots = _eliminate(F, as_matrix(A), reduced=True)
    return E[: len(pivots)], pivots


def _dense_rank(F: FiniteField, A: np.ndarray) -> int:
    if A.shape[0] > A.shape[1]:
        A = A.T
    return len(_eliminate(F, A, reduced=False)[1])


def _inv_table(F: FiniteField) -> np.ndarray:
    if F.k > 1:
        return F._inv
    tab = getattr(F, "_inv_cache", None)
    if tab is None:
        tab = np.array([0] + [pow(x, F.p - 2, F.p) for x in range(1, F.p)], dtype=np.int64)
        F._inv_cache = tab
    return tab


def batched_rank(F: FiniteField, A: np.ndarray) -> np.ndarray:
    """Ranks of a stack of equally shaped matrices, eliminated in lockstep."""
    A = np.array(A, dtype=np.int64, copy=True)
    b, r, c = A.shape
    ranks = np.zeros(b, dtype=np.int64)
    if b == 0 or r == 0 or c == 0:
        return ranks
    inv = _inv_table(F)
    rows = np.arange(r)
    for col in range(c):
        live = np.flatnonzero(ranks < r)
        if live.size == 0:
            break
        pr = ranks[live]
        mask = (A[live, :, col] != 0) & (rows[None, :] >= pr[:, None])
        has = mask.any(axis=1)
        if not has.any():
            continue
        idx = live[has]
        pr = pr[has]
        pv = mask[has].argmax(axis=1)
        top = A[idx, pv].copy()
        A[idx, pv] = A[idx, pr]
        top = F.mul(inv[top[:, col]][:, None], top)
        A[idx, pr] = top
        below = (rows[None, :] > pr[:, None])
        fac = np.where(below, A[idx, :, col], 0)
        A[idx] = F.sub(A[idx], F.mul(fac[:, :, None], top[:, None, :]))
        ranks[idx] += 1
    return ranks


def mat_rank(F: FiniteField, A) -> int:
    """Rank of A over F.

    Large matrices are first split into the connected blocks of their
    row/column incidence graph; blocks are then zero-padded into a few size
    classes and eliminated together.
    """
    A = as_matrix(A)
    rows, cols = A.shape
    if rows == 0 or cols == 0:
        return 0
    if rows * cols <= _SPLIT_THRESHOLD:
        return _dense_rank(F, A)
    r_idx, c_idx = np.nonzero(A)
    return sparse_rank(F, (rows, cols), r_idx, c_idx, A[r_idx, c_idx])


def sparse_rank(F: FiniteField, shape, r_idx, c_idx, vals) -> int:
    """Rank of the matrix with nonzero entries ``vals`` at (r_idx, c_idx).

    Positions must be distinct and values nonzero.
    """
    rows, cols = shape
    if rows == 0 or cols == 0 or len(r_idx) == 0:
        return 0
    r_idx = np.asarray(r_idx, dtype=np.int64)
    c_idx = np.asarray(c_idx, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.int64)
    graph = coo_matrix((np.ones(r_idx.size), (r_idx, rows + c_idx)), shape=(rows + cols, rows + cols))
    ncomp, labels = connected_components(graph, directed=False)
    if ncomp == 1 or rows * cols <= _SPLIT_THRESHOLD:
        A = np.zeros((rows, cols), dtype=np.int64)
        A[r_idx, c_idx] = vals
        return _dense_rank(F, A)
    row_lab = labels[:rows]
    col_lab = labels[rows:]
    nr = np.bincount(row_lab, minlength=ncomp)
    nc = np.bincount(col_lab, minlength=ncomp)
    # local index of every row (column) inside its component
    order_r = np.argsort(row_lab, kind="stable")
    order_c = np.argsort(col_lab, kind="stable")
    loc_r = np.empty(rows, dtype=np.int64)
    loc_r[order_r] = np.arange(rows) - np.repeat(np.cumsum(nr) - nr, nr)
    loc_c = np.empty(cols, dtype=np.int64)
    loc_c[order_c] = np.arange(cols) - np.repeat(np.cumsum(nc) - nc, nc)
    small = np.minimum(nr, nc)
    big = np.maximum(nr, nc)
    # components with a single row or column have rank 1
    total = int(np.count_nonzero((small == 1)))
    heavy = np.flatnonzero(small > 1)
    if heavy.size == 0:
        return total
    pa = 1 << np.ceil(np.log2(small[heavy])).astype(np.int64)
    pb = 1 << np.ceil(np.log2(big[heavy])).astype(np.int64)
    comp_r = row_lab[r_idx]
    lr, lc = loc_r[r_idx], loc_c[c_idx]
    flip = nr > nc  # store these blocks transposed
    fl = flip[comp_r]
    lr, lc = np.where(fl, lc, lr), np.where(fl, lr, lc)
    slot = np.full(ncomp, -1, dtype=np.int64)
    cls = np.full(ncomp, -1, dtype=np.int64)
    keys = {}
    for comp, a, b in zip(heavy.tolist(), pa.tolist(), pb.tolist()):
        members = keys.setdefault((a, b), [])
        cls[comp] = len(keys) - 1 if len(members) == 0 else cls[members[0]]
        slot[comp] = len(members)
        members.append(comp)
    for k, ((a, b), members) in enumerate(keys.items()):
        stack = np.zeros((len(members), a, b), dtype=np.int64)
        sel = cls[comp_r] == cls[members[0]]
        stack[slot[comp_r[sel]], lr[sel], lc[sel]] = vals[sel]
        if len(members) == 1:
            total += _dense_rank(F, stack[0])
        else:
            total += int(batched_rank(F, stack).sum())
    return total


def mat_kernel_basis(F: FiniteField, A) -> np.ndarray:
    """Columns form a basis of {v : A v = 0}; one column per free variable."""
    A = as_matrix(A)
    cols = A.shape[1]
    E, pivots = rref(F, A)
    free = [c for c in range(cols) if c not in set(pivots)]
    B = np.zeros((cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        B[fc, j] = 1
        for i, pc in enumerate(pivots):
            B[pc, j] = F.neg(E[i, fc])
    return B


def solve(F: FiniteField, A, b) -> np.ndarray:
    """One solution x of A x = b (b may have several columns); ValueError if none."""
    A = as_matrix(A)
    b = as_matrix(b)
    aug = np.hstack([A, b])
    E, pivots = rref(F, aug)
    n = A.shape[1]
    if any(pc >= n for pc in pivots):
        raise ValueError("inconsistent linear system")
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = E[i, n:]
    return x


def inverse(F: FiniteField, A) -> np.ndarray:
    A = as_matrix(A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("only square matrices can be inverted")
    E, pivots = rref(F, np.hstack([A, identity(n)]))
    if len(pivots) < n or pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return E[:, n:]


# ---------------------------------------------------------------------------
# subspaces (column spans)
# ---------------------------------------------------------------------------

def span_basis(F: FiniteField, U, ambient: int | None = None) -> np.ndarray:
    """Canonical basis of the column span of U (reduced echelon rows as columns)."""
    U = np.asarray(U, dtype=np.int64)
    if U.ndim == 1:
        U = U[:, None]
    if U.size == 0:
        n = U.shape[0] if ambient is None else ambient
        return np.zeros((n, 0), dtype=np.int64)
    E, _ = rref(F, U.T)
    return np.ascontiguousarray(E.T)


def span_pivots(F: FiniteField, U) -> list:
    """Pivot rows of a canonical basis (where the basis restricts to the identity)."""
    B = np.asarray(U)
    return [int(np.flatnonzero(B[:, j])[0]) for j in range(B.shape[1])]


def subspace_dim(F: FiniteField, U) -> int:
    U = np.asarray(U)
    if U.size == 0:
        return 0
    return mat_rank(F, U)


def _check_ambient(U, V):
    if np.asarray(U).shape[0] != np.asarray(V).shape[0]:
        raise AmbientMismatch(f"ambient dimensions differ: {np.shape(U)[0]} vs {np.shape(V)[0]}")


def subspace_sum(F: FiniteField, U, V) -> np.ndarray:
    _check_ambient(U, V)
    return span_basis(F, np.hstack([np.asarray(U, dtype=np.int64), np.asarray(V, dtype=np.int64)]),
                      np.shape(U)[0])


def subspace_intersect(F: FiniteField, U, V) -> np.ndarray:
    _check_ambient(U, V)
    n = np.shape(U)[0]
    Ub = span_basis(F, U, n)
    Vb = span_basis(F, V, n)
    if Ub.shape[1] == 0 or Vb.shape[1] == 0:
        return np.zeros((n, 0), dtype=np.int64)
    K = mat_kernel_basis(F, np.hstack([Ub, F.neg(Vb)]))
    return span_basis(F, matmul(F, Ub, K[: Ub.shape[1]]), n)


def subspace_contains(F: FiniteField, U, V) -> bool:
    """True iff span(V) is inside span(U)."""
    _check_ambient(U, V)
    V = np.asarray(V)
    if V.size == 0:
        return True
    U = np.asarray(U)
    if U.size == 0:
        return not V.any()
    return mat_rank(F, np.hstack([U, V])) == mat_rank(F, U)


def subspace_equal(F: FiniteField, U, V) -> bool:
    n = np.shape(U)[0]
    a, b = span_basis(F, U, n), span_basis(F, V, n)
    return a.shape == b.shape and bool(np.array_equal(a, b))


def coordinates(F: FiniteField, basis, vectors) -> np.ndarray:
    """Coordinates of ``vectors`` in a canonical ``basis`` (read at its pivot rows)."""
    piv = span_pivots(F, basis)
    return np.asarray(vectors, dtype=np.int64)[piv]


def all_vectors(F: FiniteField, n: int):
    """Iterate over every vector of K^n as an int64 array (q^n of them)."""
    for tup in itertools.product(range(F.order), repeat=n):
        yield np.array(tup, dtype=np.int64)


def encode_matrix(A) -> list:
    return np.asarray(A, dtype=np.int64).tolist()
