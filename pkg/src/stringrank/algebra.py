"""Quivers with monomial relations, string-algebra validation and R-matrices.

Paths compose right to left: the label sequence ``("b", "a")`` is the path
"a then b" (written ``b*a``), so ``s(b) = t(a)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import gf
from .errors import (
    ConditionThreeViolation,
    ConditionTwoViolation,
    MatrixSyntaxError,
    NotMonomial,
    NotNilpotent,
    ParseError,
    PreconditionError,
    TooManyArrows,
    UnknownPath,
)


@dataclass(frozen=True)
class Arrow:
    label: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        arrows = tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        if len(set(self.vertices)) != len(self.vertices):
            raise PreconditionError("duplicate vertex names")
        labels = [a.label for a in arrows]
        if len(set(labels)) != len(labels):
            raise PreconditionError("arrow labels must be distinct")
        for a in arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise PreconditionError(f"arrow {a.label} references an undeclared vertex")
            if a.label.startswith("e_"):
                raise PreconditionError(f"arrow label {a.label!r} clashes with trivial path names")

    @cached_property
    def arrow(self) -> dict:
        return {a.label: a for a in self.arrows}

    def outgoing(self, v):
        return [a for a in self.arrows if a.source == v]

    def incoming(self, v):
        return [a for a in self.arrows if a.target == v]


@dataclass(frozen=True)
class Path:
    """A path of the quiver.  ``arrows`` lists labels leftmost-applied-last."""

    source: str
    target: str
    arrows: tuple = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def name(self) -> str:
        return f"e_{self.source}" if self.is_trivial else "*".join(self.arrows)

    def __str__(self):
        return self.name()


def _contains_factor(word: tuple, factor: tuple) -> bool:
    n, m = len(word), len(factor)
    return any(word[i:i + m] == factor for i in range(n - m + 1))


class StringAlgebra:
    """R = KQ/I for a monomial ideal I satisfying the four string-algebra conditions.

    Construct through :func:`string_algebra_validate` (or the class itself,
    which validates).  ``path_basis`` is ordered by length, then by the label
    sequence, with trivial paths in vertex order.
    """

    def __init__(self, quiver: Quiver, forbidden, field: gf.FiniteField, name: str = ""):
        self.quiver = quiver
        self.field = field
        self.name = name
        forb = []
        for f in forbidden:
            labels = tuple(f.arrows) if isinstance(f, Path) else tuple(f)
            forb.append(labels)
        self.forbidden = tuple(forb)
        self._validate_forbidden()
        self._check_conditions()
        self.path_basis = self._enumerate_basis()
        self.q = 1 + max(p.length for p in self.path_basis)
        self.index = {p: i for i, p in enumerate(self.path_basis)}
        self._by_name = {p.name(): p for p in self.path_basis}

    # -- validation -------------------------------------------------------
    def _validate_forbidden(self):
        arrows = self.quiver.arrow
        for f in self.forbidden:
            if len(f) < 2:
                raise NotMonomial(f"relation {' '.join(f)} must be a path of length >= 2")
            for lab in f:
                if lab not in arrows:
                    raise NotMonomial(f"relation uses unknown arrow {lab!r}")
            for left, right in zip(f, f[1:]):
                if arrows[left].source != arrows[right].target:
                    raise NotMonomial(f"relation {' '.join(f)} is not a composable path")

    def in_ideal(self, labels: tuple) -> bool:
        """Whether the (composable) path with these labels lies in I."""
        return any(_contains_factor(tuple(labels), f) for f in self.forbidden)

    def _check_conditions(self):
        Q = self.quiver
        for v in Q.vertices:
            if len(Q.outgoing(v)) > 2 or len(Q.incoming(v)) > 2:
                raise TooManyArrows(f"vertex {v} has more than two outgoing or incoming arrows")
        for a in Q.arrows:
            after = [b for b in Q.arrows if b.source == a.target and not self.in_ideal((b.label, a.label))]
            if len(after) > 1:
                raise ConditionTwoViolation(
                    f"arrow {a.label} continues by both {after[0].label} and {after[1].label} outside I")
            before = [b for b in Q.arrows if b.target == a.source and not self.in_ideal((a.label, b.label))]
            if len(before) > 1:
                raise ConditionThreeViolation(
                    f"arrow {a.label} is preceded by both {before[0].label} and {before[1].label} outside I")

    def _enumerate_basis(self):
        Q = self.quiver
        basis = [Path(v, v) for v in Q.vertices]
        layer = [Path(a.source, a.target, (a.label,)) for a in Q.arrows if not self.in_ideal((a.label,))]
        # a path avoiding I longer than this bound revisits a state of the
        # relation automaton, so arbitrarily long such paths exist
        longest = max((len(f) for f in self.forbidden), default=1)
        bound = len(Q.arrows) ** max(longest - 1, 1) + longest + 1
        length = 1
        while layer:
            if length > bound:
                raise NotNilpotent(f"path {' '.join(layer[0].arrows)} and its extensions avoid I forever")
            basis.extend(layer)
            nxt = []
            for p in layer:
                for b in Q.outgoing(p.target):
                    labels = (b.label,) + p.arrows
                    if not self.in_ideal(labels):
                        nxt.append(Path(p.source, b.target, labels))
            layer = nxt
            length += 1
        vidx = {v: i for i, v in enumerate(Q.vertices)}
        basis.sort(key=lambda p: (p.length, p.arrows, vidx[p.source]))
        return basis

    # -- structure ------------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.path_basis)

    def __repr__(self):
        label = self.name or "StringAlgebra"
        return f"<{label} over {self.field}: {len(self.quiver.vertices)} vertices, dim {self.dim}>"

    def __eq__(self, other):
        return (isinstance(other, StringAlgebra) and self.field == other.field
                and self.quiver == other.quiver and set(self.forbidden) == set(other.forbidden))

    def __hash__(self):
        return hash((self.field, self.quiver, frozenset(self.forbidden)))

    def path_by_name(self, name: str) -> Path:
        return self._by_name[name]

    def trivial(self, v) -> Path:
        return Path(v, v)

    @cached_property
    def mult_table(self) -> np.ndarray:
        """``mult_table[i, j]`` = index of basis[i] * basis[j], or -1 when zero."""
        n = self.dim
        T = -np.ones((n, n), dtype=np.int64)
        for i, p in enumerate(self.path_basis):
            for j, r in enumerate(self.path_basis):
                prod = self._path_product(p, r)
                if prod is not None:
                    T[i, j] = self.index[prod]
        return T

    def _path_product(self, p: Path, r: Path):
        if p.source != r.target:
            return None
        if p.is_trivial:
            return r
        if r.is_trivial:
            return p
        labels = p.arrows + r.arrows
        if self.in_ideal(labels):
            return None
        return Path(r.source, p.target, labels)

    def all_paths(self, length: int):
        """Every composable arrow sequence of the given length (inside I or not)."""
        paths = [(a.label,) for a in self.quiver.arrows]
        arrows = self.quiver.arrow
        for _ in range(length - 1):
            paths = [(b.label,) + p for p in paths for b in self.quiver.outgoing(arrows[p[0]].target)]
        return paths

    # -- elements -------------------------------------------------------------
    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {self.index[self.trivial(v)]: 1 for v in self.quiver.vertices})

    def basis_element(self, path, coeff: int = 1) -> "AlgebraElement":
        if isinstance(path, str):
            path = self.path_by_name(path)
        return AlgebraElement(self, {self.index[path]: coeff})

    def arrow_element(self, label: str) -> "AlgebraElement":
        a = self.quiver.arrow[label]
        return AlgebraElement(self, {self.index[Path(a.source, a.target, (label,))]: 1})

    def scalar(self, c: int) -> "AlgebraElement":
        return AlgebraElement(self, {k: int(self.field.mul(c, v)) for k, v in self.one().terms.items()})


class AlgebraElement:
    """Element of R as a sparse map from basis index to nonzero field element."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: StringAlgebra, terms):
        self.algebra = algebra
        self.terms = {int(k): int(v) for k, v in dict(terms).items() if int(v) != 0}

    @property
    def F(self):
        return self.algebra.field

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = int(self.F.add(out.get(k, 0), v))
        return AlgebraElement(self.algebra, out)

    def __neg__(self):
        return AlgebraElement(self.algebra, {k: int(self.F.neg(v)) for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int):
        return AlgebraElement(self.algebra, {k: int(self.F.mul(c, v)) for k, v in self.terms.items()})

    def __mul__(self, other):
        return elem_mul(self, other)

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        """(path, coefficient) pairs in basis order."""
        basis = self.algebra.path_basis
        return [(basis[k], self.terms[k]) for k in sorted(self.terms)]

    def __repr__(self):
        return f"AlgebraElement({emit_element(self)})"


def elem_mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Bilinear product; concatenations in I or non-composable pairs vanish."""
    R = a.algebra
    F = R.field
    T = R.mult_table
    out: dict = {}
    for i, x in a.terms.items():
        for j, y in b.terms.items():
            k = int(T[i, j])
            if k >= 0:
                out[k] = int(F.add(out.get(k, 0), F.mul(x, y)))
    return AlgebraElement(R, out)


def string_algebra_validate(quiver: Quiver, forbidden, field: gf.FiniteField, name: str = "") -> StringAlgebra:
    return StringAlgebra(quiver, forbidden, field, name)


# ---------------------------------------------------------------------------
# shipped example algebras
# ---------------------------------------------------------------------------

def gelfand_ponomarev(field: gf.FiniteField, m: int = 2, n: int = 2) -> StringAlgebra:
    """K<x, y> / (x^m, y^n, xy, yx) on one vertex."""
    Q = Quiver(("v",), (Arrow("x", "v", "v"), Arrow("y", "v", "v")))
    forb = [("x",) * m, ("y",) * n, ("x", "y"), ("y", "x")]
    return StringAlgebra(Q, forb, field, name=f"GP({m},{n})")


def kronecker(field: gf.FiniteField) -> StringAlgebra:
    """Path algebra of the 2-Kronecker quiver: two parallel arrows p, r from a to b."""
    Q = Quiver(("a", "b"), (Arrow("p", "a", "b"), Arrow("r", "a", "b")))
    return StringAlgebra(Q, [], field, name="Kronecker")


# ---------------------------------------------------------------------------
# algebra spec files
# ---------------------------------------------------------------------------

_IDENT = r"[A-Za-z][A-Za-z0-9_']*"


def parse_algebra_spec(text: str) -> StringAlgebra:
    """Parse the line-oriented algebra description.

    ::

        field 2 1
        vertices a b
        arrow x: a -> b
        forbid y x        # the path "x then y"
    """
    p = k = None
    modulus = None
    vertices: list = []
    arrows: list = []
    forbidden: list = []
    name = ""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "field":
            parts = rest.split(None, 2)
            try:
                p = int(parts[0])
                k = int(parts[1]) if len(parts) > 1 else 1
                if len(parts) > 2:
                    modulus = [int(c) for c in re.findall(r"-?\d+", parts[2])]
            except (ValueError, IndexError):
                raise ParseError("expected 'field <p> <k> [modulus]'", lineno, 1) from None
        elif head == "name":
            name = rest
        elif head == "vertices":
            vertices.extend(rest.split())
        elif head == "arrow":
            m = re.fullmatch(rf"({_IDENT})\s*:\s*({_IDENT})\s*->\s*({_IDENT})", rest)
            if not m:
                raise ParseError("expected 'arrow <label>: <source> -> <target>'", lineno, len(head) + 2)
            arrows.append(Arrow(*m.groups()))
        elif head == "forbid":
            labels = tuple(rest.replace("*", " ").split())
            if not labels:
                raise ParseError("empty relation", lineno, len(head) + 2)
            forbidden.append(labels)
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, 1)
    if p is None:
        raise ParseError("missing 'field' line", 1, 1)
    F = gf.field_make(p, k, modulus)
    return StringAlgebra(Quiver(tuple(vertices), tuple(arrows)), forbidden, F, name=name)


def emit_algebra_spec(R: StringAlgebra) -> str:
    F = R.field
    lines = []
    if R.name:
        lines.append(f"name {R.name}")
    fline = f"field {F.p} {F.k}"
    if F.modulus is not None:
        fline += " " + str(F.modulus.to_list()).replace(" ", "")
    lines.append(fline)
    lines.append("vertices " + " ".join(R.quiver.vertices))
    for a in R.quiver.arrows:
        lines.append(f"arrow {a.label}: {a.source} -> {a.target}")
    for f in R.forbidden:
        lines.append("forbid " + " ".join(f))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# R-matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RMatrix:
    algebra: StringAlgebra
    entries: tuple  # tuple of rows, each a tuple of AlgebraElement

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        if not rows or any(len(r) != len(rows[0]) for r in rows) or not rows[0]:
            raise PreconditionError("R-matrix rows must be nonempty and of equal length")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (isinstance(other, RMatrix) and self.shape == other.shape
                and all(a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb)))

    def __hash__(self):
        return hash(self.entries)

    def __matmul__(self, other: "RMatrix") -> "RMatrix":
        if self.cols != other.rows:
            raise PreconditionError(f"cannot multiply {self.shape} by {other.shape}")
        R = self.algebra
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = R.zero()
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return RMatrix(R, out)

    def __str__(self):
        return emit_rmatrix(self)

    def __repr__(self):
        return f"RMatrix({emit_rmatrix(self)})"

    def zero_columns(self, cols) -> "RMatrix":
        cols = set(cols)
        Z = self.algebra.zero()
        return RMatrix(self.algebra, [[Z if j in cols else e for j, e in enumerate(r)] for r in self.entries])


def rmatrix_from_rows(R: StringAlgebra, rows) -> RMatrix:
    """Build an R-matrix from rows of AlgebraElement, path names or ints."""
    def conv(x):
        if isinstance(x, AlgebraElement):
            return x
        if isinstance(x, int):
            return R.scalar(x)
        return parse_element(str(x), R)
    return RMatrix(R, [[conv(x) for x in r] for r in rows])


def block_rmatrix(R: StringAlgebra, blocks) -> RMatrix:
    """Assemble a block R-matrix from a grid of RMatrix or None (zero)."""
    heights = []
    for brow in blocks:
        h = {b.rows for b in brow if b is not None}
        if len(h) != 1:
            raise PreconditionError("inconsistent block heights")
        heights.append(h.pop())
    widths = []
    for j in range(len(blocks[0])):
        w = {brow[j].cols for brow in blocks if brow[j] is not None}
        if len(w) != 1:
            raise PreconditionError("inconsistent block widths")
        widths.append(w.pop())
    Z = R.zero()
    rows = []
    for bi, brow in enumerate(blocks):
        for i in range(heights[bi]):
            row = []
            for bj, b in enumerate(brow):
                row.extend(b.entries[i] if b is not None else [Z] * widths[bj])
            rows.append(row)
    return RMatrix(R, rows)


def identity_rmatrix(R: StringAlgebra, n: int) -> RMatrix:
    Z, one = R.zero(), R.one()
    return RMatrix(R, [[one if i == j else Z for j in range(n)] for i in range(n)])


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_']*)|(?P<op>[\[\],+\-*^]))")


def _tokenize(text: str):
    """Tokens as (kind, value, line, column); 'end' closes the stream."""
    line_starts = [0] + [m.end() for m in re.finditer(r"\n", text)]

    def where(pos):
        line = max(i for i, s in enumerate(line_starts) if s <= pos)
        return line + 1, pos - line_starts[line] + 1

    pos = 0
    tokens = []
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:]
            if rest.strip() == "":
                break
            bad = pos + (len(rest) - len(rest.lstrip()))
            raise MatrixSyntaxError(f"unexpected character {text[bad]!r}", *where(bad))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), *where(start)))
        pos = m.end()
    tokens.append(("end", "", *where(len(text))))
    return tokens


class _Parser:
    def __init__(self, text: str, R: StringAlgebra):
        self.toks = _tokenize(text)
        self.i = 0
        self.R = R

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None, kind=None):
        tok = self.toks[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise MatrixSyntaxError(f"expected {want!r}, found {got!r}", tok[2], tok[3])
        self.i += 1
        return tok

    def matrix(self) -> RMatrix:
        self.take("[")
        rows = [self.row()]
        while self.peek()[1] == ",":
            self.take(",")
            rows.append(self.row())
        self.take("]")
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            tok = self.peek()
            raise MatrixSyntaxError("rows have different lengths", tok[2], tok[3])
        return RMatrix(self.R, rows)

    def row(self):
        self.take("[")
        entries = [self.element()]
        while self.peek()[1] == ",":
            self.take(",")
            entries.append(self.element())
        self.take("]")
        return entries

    def element(self) -> AlgebraElement:
        sign = 1
        if self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term(sign)
        while self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
            acc = acc + self.term(sign)
        return acc

    def term(self, sign: int) -> AlgebraElement:
        R = self.R
        F = R.field
        coeff = 1
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            coeff = int(tok[1])
            if coeff >= F.order:
                raise MatrixSyntaxError(f"coefficient {coeff} is not a field element code", tok[2], tok[3])
            if self.peek()[1] == "*":
                self.take("*")
            elif self.peek()[0] != "name":
                c = coeff if sign > 0 else int(F.neg(coeff))
                return R.scalar(c)
        factor = self.atom()
        while self.peek()[1] == "*" or self.peek()[0] == "name":
            if self.peek()[1] == "*":
                self.take("*")
            factor = factor * self.atom()
        c = coeff if sign > 0 else int(F.neg(coeff))
        return factor.scale(c)

    def atom(self) -> AlgebraElement:
        R = self.R
        tok = self.take(kind="name")
        name = tok[1]
        if name in R.quiver.arrow:
            return R.arrow_element(name)
        if name.startswith("e_") and name[2:] in R.quiver.vertices:
            return R.basis_element(R.trivial(name[2:]))
        raise UnknownPath(f"no arrow or vertex idempotent named {name!r}", tok[2], tok[3])


def rmatrix_parse(text: str, R: StringAlgebra) -> RMatrix:
    """Parse ``[[e_v - x, y], [0, e_v]]``-style text.

    Entries are signed sums of terms ``[c[*]] atom[*atom...]`` where an atom
    is an arrow label or ``e_<vertex>``; a product of atoms is evaluated in R
    (so ``x*y`` is the path "y then x").  A bare integer ``c`` means ``c·1``.
    """
    P = _Parser(text, R)
    M = P.matrix()
    P.take(kind="end")
    return M


def parse_element(text: str, R: StringAlgebra) -> AlgebraElement:
    P = _Parser(text, R)
    e = P.element()
    P.take(kind="end")
    return e


def emit_element(a: AlgebraElement) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for path, c in a.items():
        parts.append(path.name() if c == 1 else f"{c}*{path.name()}")
    return " + ".join(parts)


def rmatrix_emit(A: RMatrix) -> str:
    return "[" + ", ".join("[" + ", ".join(emit_element(e) for e in row) + "]" for row in A.entries) + "]"


emit_rmatrix = rmatrix_emit
