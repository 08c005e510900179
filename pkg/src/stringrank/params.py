"""Module parameters (g, i, weights, Hom numbers, ranks), stability probes
and the constant-size parameter tester.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import gf
from .algebra import StringAlgebra, emit_algebra_spec, parse_algebra_spec, rmatrix_emit, rmatrix_parse
from .errors import (
    AlgebraMismatch,
    BudgetExceeded,
    ExplosionGuard,
    NoTileWithinKappa,
    ParseError,
    PreconditionError,
    UnknownDecomposition,
)
from .limitlab import TileCatalog, as_eps, build_tile_catalog
from .modules import (
    BandData,
    RModule,
    canonical_label,
    component_module,
    hom_dim,
    parse_band,
    parse_word,
    power,
    radical_submodule,
)
from .rank import TestSuite, random_trim, rk


def _r(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# generator number
# ---------------------------------------------------------------------------

def gen_count(M: RModule) -> int:
    """G(M) = max over vertices a of dim e_a(M / JM)."""
    if M.dim == 0:
        return 0
    J = radical_submodule(M)
    best = 0
    for v in M.algebra.quiver.vertices:
        idx = M.vertex_indices(v)
        # J is graded, so dim e_a JM is the rank of its rows at vertex a
        jdim = gf.mat_rank(M.F, J[idx]) if J.shape[1] and len(idx) else 0
        best = max(best, len(idx) - jdim)
    return best


def gen_number(M: RModule) -> Fraction:
    if M.dim == 0:
        raise PreconditionError("g is undefined on the zero module")
    return Fraction(gen_count(M), M.dim)


class _Echelon:
    """Reduced basis of a subspace of F^n, kept as a dict pivot -> row (tuple)."""

    def __init__(self, F: gf.FiniteField, n: int, rows=None):
        self.F, self.n = F, n
        self.rows: dict = {} if rows is None else dict(rows)

    def reduce(self, v: list) -> list:
        F = self.F
        v = list(v)
        for piv, row in self.rows.items():
            c = v[piv]
            if c:
                nc = int(F.neg(c))
                v = [int(F.add(a, F.mul(nc, b))) for a, b in zip(v, row)]
        return v

    def insert(self, v) -> bool:
        F = self.F
        v = self.reduce(v)
        piv = next((i for i, c in enumerate(v) if c), None)
        if piv is None:
            return False
        ic = int(F.inv(v[piv]))
        v = [int(F.mul(ic, c)) for c in v]
        new = {}
        for p, row in self.rows.items():
            c = row[piv]
            if c:
                nc = int(F.neg(c))
                row = tuple(int(F.add(a, F.mul(nc, b))) for a, b in zip(row, v))
            new[p] = row
        new[piv] = tuple(v)
        self.rows = new
        return True

    def copy(self):
        return type(self)(self.F, self.n, self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def key(self) -> tuple:
        return tuple(sorted(self.rows.items()))


class _Echelon2(_Echelon):
    """GF(2) version with rows stored as bitmasks."""

    def insert(self, v) -> bool:
        x = v if isinstance(v, int) else sum(1 << i for i, c in enumerate(v) if c)
        for piv, row in self.rows.items():
            if x >> piv & 1:
                x ^= row
        if not x:
            return False
        piv = x.bit_length() - 1
        self.rows = {p: (r ^ x if r >> piv & 1 else r) for p, r in self.rows.items()}
        self.rows[piv] = x
        return True


def _echelon(F: gf.FiniteField, n: int) -> _Echelon:
    return _Echelon2(F, n) if F.order == 2 else _Echelon(F, n)


def _cyclic_spans(M: RModule) -> list:
    """Basis rows of R v for every vector v of M (by enumeration order)."""
    F = M.F
    acts = M.basis_actions
    out = []
    for v in gf.all_vectors(F, M.dim):
        v = np.asarray(v, dtype=np.int64)
        imgs = np.stack([gf.matmul(F, A, v[:, None])[:, 0] for A in acts]) if acts else v[None]
        e = _echelon(F, M.dim)
        for w in imgs:
            if w.any():
                e.insert(w.tolist())
        out.append(e)
    return out


def gen_count_bruteforce(M: RModule, cap: int = 4096) -> int:
    """Smallest k such that some k vectors generate M, by breadth-first search
    over generated submodules.  Needs |F|^dim M <= cap."""
    F = M.F
    if M.dim == 0:
        return 0
    if F.order ** M.dim > cap:
        raise BudgetExceeded(f"|F|^dim = {F.order ** M.dim} exceeds the cap {cap}")
    cyc = list({c.key(): c for c in _cyclic_spans(M) if c.dim}.values())
    layer = {(): _echelon(F, M.dim)}
    for k in range(1, M.dim + 1):
        nxt = {}
        for sub in layer.values():
            for c in cyc:
                e = sub.copy()
                for row in c.rows.values():
                    e.insert(row)
                if e.dim == M.dim:
                    return k
                nxt.setdefault(e.key(), e)
        layer = nxt
    raise AssertionError("M is generated by its basis")


# ---------------------------------------------------------------------------
# independence number
# ---------------------------------------------------------------------------

@dataclass
class IndepResult:
    count: int
    dim: int
    mode: str
    upper: int
    witness: list = field(default_factory=list)

    @property
    def value(self) -> Fraction:
        return Fraction(self.count, self.dim)

    def as_json(self) -> dict:
        return {"I": self.count, "i": _r(self.value), "mode": self.mode, "upper": self.upper,
                "witness": [list(map(int, w)) for w in self.witness]}


def _free_cyclic(M: RModule):
    """(vector, span) for every v whose cyclic submodule has dim R = dim R v."""
    n = M.algebra.dim
    seen: dict = {}
    for v, c in zip(gf.all_vectors(M.F, M.dim), _cyclic_spans(M)):
        if c.dim == n:
            seen.setdefault(c.key(), (v, c))
    return list(seen.values())


def indep_number(M: RModule, mode: str = "exact", budget: int = 1024, seed: int = 0,
                 cap: int = 1024) -> IndepResult:
    """I(M): the largest k with an injective R^k -> M.

    ``exact`` searches all free sums (|F|^dim M <= cap); ``randomized``
    grows a free sum greedily from ``budget`` random vectors and reports
    the witness together with the bound floor(dim M / dim R).
    """
    R = M.algebra
    F = M.F
    upper = M.dim // R.dim
    if M.dim == 0:
        return IndepResult(0, 0, mode, 0)
    if mode == "exact":
        if F.order ** M.dim > cap:
            raise BudgetExceeded(f"|F|^dim = {F.order ** M.dim} exceeds the cap {cap}")
        free = _free_cyclic(M)
        layer = {(): (_echelon(F, M.dim), [])}
        best = (0, [])
        while layer:
            nxt = {}
            for sub, wit in layer.values():
                for v, c in free:
                    e = sub.copy()
                    for row in c.rows.values():
                        e.insert(row)
                    if e.dim == sub.dim + R.dim:
                        nxt.setdefault(e.key(), (e, wit + [v]))
            if nxt:
                best = (len(next(iter(nxt.values()))[1]), next(iter(nxt.values()))[1])
            layer = nxt
        return IndepResult(best[0], M.dim, "exact", upper, best[1])
    if mode != "randomized":
        raise PreconditionError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    acts = M.basis_actions
    cur = gf.zeros(M.dim, 0)
    wit = []
    for _ in range(budget):
        if len(wit) >= upper:
            break
        v = gf.random_matrix(F, M.dim, 1, rng)
        Rv = np.hstack([gf.matmul(F, A, v) for A in acts])
        trial = np.hstack([cur, Rv]) if cur.shape[1] else Rv
        if gf.mat_rank(F, trial) == cur.shape[1] + R.dim:
            cur = gf.span_basis(F, trial, M.dim)
            wit.append(tuple(int(x) for x in v[:, 0]))
    return IndepResult(len(wit), M.dim, "randomized", upper, wit)


# ---------------------------------------------------------------------------
# weights and Hom numbers
# ---------------------------------------------------------------------------

def parse_label(text: str, R: StringAlgebra | None = None):
    text = text.strip()
    lab = parse_band(text) if ";" in text else parse_word(text)
    if R is not None:
        from .modules import check_band, check_string
        lab = check_band(lab, R) if isinstance(lab, BandData) else check_string(lab, R)
        lab = canonical_label(lab, R.field)
    return lab


def weight(M, Q, R: StringAlgebra | None = None, pair=None) -> Fraction:
    """w_Q(M) = n_Q dim Q / dim M from the recorded decomposition.

    With an isolating pp-pair the value is recomputed through the pair and
    both routes must agree exactly.
    """
    if isinstance(M, RModule):
        if M.components is None:
            raise UnknownDecomposition("module has no recorded decomposition")
        comps, R = list(M.components), M.algebra
    else:
        comps = list(M)
    if R is None:
        raise PreconditionError("an algebra is needed to canonicalize labels")
    if isinstance(Q, RModule):
        if Q.components is None or len(Q.components) != 1:
            raise UnknownDecomposition("Q must be a recorded indecomposable")
        q = Q.components[0]
    else:
        q = Q
    q = canonical_label(q, R.field)
    comps = [canonical_label(c, R.field) for c in comps]
    total = sum(c.dim() for c in comps)
    if total == 0:
        raise PreconditionError("weight is undefined on the zero module")
    w = Fraction(sum(c.dim() for c in comps if c == q), total)
    if pair is not None:
        from .pp import weight_from_isolating_pair
        Mm = M if isinstance(M, RModule) else _module_of(comps, R)
        other = [component_module(c, R) for c in sorted(set(comps) - {q}, key=lambda x: x.sort_key())]
        alt = weight_from_isolating_pair(Mm, component_module(q, R), pair, other)
        if alt != w:
            from .errors import MethodDisagreement
            raise MethodDisagreement(f"component route {w}, pair route {alt}")
    return w


def _module_of(labels, R):
    from .modules import module_from_components
    return module_from_components(labels, R)


def hom_param_L(Q: RModule, M: RModule) -> Fraction:
    """dim Hom(Q, M) / dim M."""
    if Q.algebra != M.algebra:
        raise AlgebraMismatch("modules live over different algebras")
    if M.dim == 0:
        raise PreconditionError("undefined on the zero module")
    return Fraction(hom_dim(Q, M), M.dim)


def hom_param_R(Q: RModule, M: RModule) -> Fraction:
    """dim Hom(M, Q) / dim M; stable when Q is injective (caller's claim)."""
    if Q.algebra != M.algebra:
        raise AlgebraMismatch("modules live over different algebras")
    if M.dim == 0:
        raise PreconditionError("undefined on the zero module")
    return Fraction(hom_dim(M, Q), M.dim)


# ---------------------------------------------------------------------------
# parameter ids
# ---------------------------------------------------------------------------

KINDS = ("g", "i", "weight", "homL", "homR", "rank")


@dataclass(frozen=True)
class ParameterId:
    """``g``, ``i``, ``weight:<label>``, ``homL:<label>``, ``homR:<label>``
    or ``rank:<R-matrix>`` (rows separated by ``|`` in the one-line form)."""

    kind: str
    payload: object = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown parameter kind {self.kind!r}")
        needs = self.kind not in ("g", "i")
        if needs != (self.payload is not None):
            raise PreconditionError(f"parameter {self.kind!r} {'needs' if needs else 'takes no'} payload")

    def __str__(self):
        if self.payload is None:
            return self.kind
        if self.kind == "rank":
            return "rank:" + rmatrix_emit(self.payload).strip().replace("\n", "|")
        return f"{self.kind}:{self.payload}"


def parse_parameter(text: str, R: StringAlgebra) -> ParameterId:
    kind, sep, rest = text.strip().partition(":")
    kind = kind.strip()
    if kind in ("g", "i"):
        if sep:
            raise ParseError(f"parameter {kind!r} takes no payload", 1, 1)
        return ParameterId(kind)
    if kind not in KINDS or not sep:
        raise ParseError(f"bad parameter {text!r}", 1, 1)
    if kind == "rank":
        return ParameterId(kind, rmatrix_parse(rest.replace("|", "\n"), R))
    return ParameterId(kind, parse_label(rest, R))


def evaluate(p: ParameterId, M: RModule, mode: str = "exact") -> Fraction:
    """p(M) as an exact rational."""
    R = M.algebra
    if p.kind == "g":
        return gen_number(M)
    if p.kind == "i":
        return indep_number(M, mode=mode).value
    if p.kind == "rank":
        return rk(M, p.payload)
    if p.kind == "weight":
        return weight(M, p.payload, R)
    Q = component_module(p.payload, R)
    return hom_param_L(Q, M) if p.kind == "homL" else hom_param_R(Q, M)


# ---------------------------------------------------------------------------
# stability probes
# ---------------------------------------------------------------------------

@dataclass
class StabilityReport:
    parameter: str
    base: Fraction
    trim_gaps: list
    powers: list

    @property
    def max_trim_gap(self):
        return max(self.trim_gaps, default=None)

    @property
    def cauchy_modulus(self) -> Fraction:
        vals = [v for _, v in self.powers]
        return max(vals) - min(vals) if vals else Fraction(0)

    def to_csv(self) -> str:
        lines = ["probe,index,value"]
        for i, g in enumerate(self.trim_gaps):
            lines.append(f"trim,{i},{_r(g)}")
        for k, v in self.powers:
            lines.append(f"power,{k},{_r(v)}")
        return "\n".join(lines) + "\n"

    def as_json(self) -> dict:
        return {"parameter": self.parameter, "base": _r(self.base),
                "trim_gaps": [_r(g) for g in self.trim_gaps],
                "max_trim_gap": None if self.max_trim_gap is None else _r(self.max_trim_gap),
                "powers": [[k, _r(v)] for k, v in self.powers],
                "cauchy_modulus": _r(self.cauchy_modulus)}


def stability_probe(p: ParameterId, M: RModule, delta, trials: int = 10, seed: int = 0,
                    max_power: int = 4) -> StabilityReport:
    """Tabulate |p(M) - p(N)| over random trims and p(M^k) for k <= max_power.

    Trims need a parameter computable on raw submodules, so weight skips
    the first probe.  Nothing is judged: stability is asymptotic.
    """
    d = Fraction(str(delta)) if not isinstance(delta, Fraction) else delta
    base = evaluate(p, M)
    rng = np.random.default_rng(seed)
    gaps = []
    if p.kind != "weight":
        from .modules import submodule
        for _ in range(trials):
            steps = int(rng.integers(1, max(1, int(d * M.dim)) + 1)) if d * M.dim >= 1 else 0
            if steps == 0:
                break
            N = submodule(M, random_trim(M, steps, rng))
            if N.dim:
                gaps.append(abs(base - evaluate(p, N)))
    powers = [(k, evaluate(p, power(M, k))) for k in range(1, max_power + 1)]
    return StabilityReport(str(p), base, gaps, powers)


# ---------------------------------------------------------------------------
# the tester
# ---------------------------------------------------------------------------

@dataclass
class TesterConfig:
    """Explicit constants for the tester.

    Tiles are primitive multisets of catalog indecomposables with total dim
    <= ``tile_dim``.  Height ``None`` means every 1 x 1 matrix.  The suite is
    the seeded TestSuite, then the Hom formula matrix of every catalog tile
    (rk on it fixes dim Hom(C, M)), then the counting-pair matrices (phi,
    psi and their cuts) of every catalog string of length 1..``sep_length``.
    """

    epsilon: Fraction
    kappa: Fraction | None = None
    tile_dim: int = 6
    max_tiles: int = 5000
    suite_s: int = 2
    suite_h: int | None = 1
    suite_per_size: int = 2
    suite_seed: int = 0
    sep_length: int = 3
    powers: tuple = (1, 2, 4)

    def resolved_kappa(self) -> Fraction:
        return self.kappa if self.kappa is not None else self.epsilon / 4

    def as_json(self) -> dict:
        return {"epsilon": _r(self.epsilon), "kappa": _r(self.resolved_kappa()), "tile_dim": self.tile_dim,
                "max_tiles": self.max_tiles,
                "suite": [self.suite_s, self.suite_h, self.suite_per_size, self.suite_seed],
                "sep_length": self.sep_length, "powers": list(self.powers)}

    @classmethod
    def from_json(cls, c: dict) -> "TesterConfig":
        return cls(Fraction(c["epsilon"]), Fraction(c["kappa"]), c["tile_dim"], c["max_tiles"],
                   *c["suite"], c["sep_length"], tuple(c["powers"]))


def _tile_text(tile) -> str:
    return " + ".join(f"{lab}" + (f" * {k}" if k > 1 else "") for lab, k in tile)


def _tile_labels(tile) -> list:
    return [lab for lab, k in tile for _ in range(k)]


def compound_tiles(cat: TileCatalog, dim_cap: int, max_tiles: int = 5000) -> list:
    """Primitive multisets (gcd of multiplicities 1) of catalog tiles with
    total dim <= dim_cap, as tuples of (label, multiplicity)."""
    labs = [l for l in cat.labels if l.dim() <= dim_cap]
    out = []

    def rec(i, left, acc):
        if i == len(labs):
            if acc and math.gcd(*[k for _, k in acc]) == 1:
                out.append(tuple(acc))
                if len(out) > max_tiles:
                    raise ExplosionGuard(f"more than {max_tiles} compound tiles")
            return
        d = labs[i].dim()
        rec(i + 1, left, acc)
        k = 1
        while k * d <= left:
            rec(i + 1, left - k * d, acc + [(labs[i], k)])
            k += 1

    rec(0, dim_cap, [])
    out.sort(key=lambda t: (sum(l.dim() * k for l, k in t), [(l.sort_key(), k) for l, k in t]))
    return out


def tester_suite(R: StringAlgebra, cfg: TesterConfig, cat: TileCatalog) -> TestSuite:
    from .pp import hom_formula, string_counting_pair
    extras = []
    for i, lab in enumerate(cat.labels):
        if lab.dim() <= cfg.tile_dim:
            extras.append(hom_formula(cat.module(i)).matrix)
    for lab in cat.labels:
        if isinstance(lab, BandData) or not 1 <= lab.length <= cfg.sep_length:
            continue
        pair = string_counting_pair(lab, R)
        extras.extend([pair.phi.matrix, pair.phi.cut(), pair.psi.matrix, pair.psi.cut()])
    h = R.field.order - 1 if cfg.suite_h is None else cfg.suite_h
    return TestSuite(R, s=cfg.suite_s, h=h, per_size=cfg.suite_per_size, seed=cfg.suite_seed,
                     extras=extras)


@dataclass
class Tester:
    parameter: ParameterId
    config: TesterConfig
    suite: TestSuite
    catalog: TileCatalog
    tiles: list  # compound tiles: tuples of (label, multiplicity)
    profiles: list  # per tile: rk_{Q_j}(A_i) for every suite matrix
    values: list  # p(Q_j^n)
    n: int

    @property
    def kappa(self) -> Fraction:
        return self.config.resolved_kappa()

    @property
    def delta(self) -> Fraction:
        return self.kappa / 2

    def tile_module(self, j: int) -> RModule:
        from .modules import module_from_components
        return module_from_components(_tile_labels(self.tiles[j]), self.catalog.algebra)

    def as_json(self) -> dict:
        R = self.catalog.algebra
        return {
            "algebra": emit_algebra_spec(R),
            "parameter": str(self.parameter),
            "config": self.config.as_json(),
            "delta": _r(self.delta),
            "n": self.n,
            "suite": [rmatrix_emit(A).strip() for A in self.suite],
            "catalog": [str(l) for l in self.catalog.labels],
            "tiles": [_tile_text(t) for t in self.tiles],
            "profiles": [[_r(v) for v in row] for row in self.profiles],
            "values": [_r(v) for v in self.values],
        }

    def dumps(self) -> str:
        return json.dumps(self.as_json(), indent=1, sort_keys=True) + "\n"


def _power_for(p: ParameterId, tiles, powers, eps: Fraction) -> int:
    """Smallest probed n with |p(Q^(2n)) - p(Q^n)| < eps / 10 for every tile.

    Only i needs the probe; the other parameters are constant on powers.
    """
    if p.kind != "i":
        return 1
    powers = sorted(powers)
    for n in powers:
        if 2 * n not in powers:
            return n
        ok = True
        for Q in tiles:
            a = evaluate(p, power(Q, 2 * n), mode="randomized")
            b = evaluate(p, power(Q, n), mode="randomized")
            if abs(a - b) >= eps / 10:
                ok = False
                break
        if ok:
            return n
    return powers[-1]


def build_tester(p: ParameterId, eps, R: StringAlgebra, config: TesterConfig | None = None,
                 jobs: int = 1) -> Tester:
    """Suite, catalog, compound tiles and the table p_j = p(Q_j^n)."""
    e = as_eps(eps)
    cfg = config or TesterConfig(e)
    cfg.epsilon = e
    cat = build_tile_catalog(R, e, string_cap=cfg.tile_dim, band_cap=cfg.tile_dim + 1, max_tiles=cfg.max_tiles)
    suite = tester_suite(R, cfg, cat)
    tiles = compound_tiles(cat, cfg.tile_dim, cfg.max_tiles)
    base = {lab: [rk(cat.module(i), A) for A in suite] for i, lab in enumerate(cat.labels)}
    from .modules import module_from_components
    mods = [module_from_components(_tile_labels(t), R) for t in tiles]
    n = _power_for(p, mods, cfg.powers, e)

    def work(jt):
        t, Q = jt
        total = sum(l.dim() * k for l, k in t)
        prof = [sum((Fraction(l.dim() * k, total) * base[l][i] for l, k in t), Fraction(0))
                for i in range(len(suite))]
        mode = "exact" if Q.F.order ** (n * Q.dim) <= 1024 else "randomized"
        return prof, evaluate(p, power(Q, n), mode=mode)

    items = list(zip(tiles, mods))
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(jobs) as ex:
            results = list(ex.map(work, items))
    else:
        results = [work(x) for x in items]
    return Tester(p, cfg, suite, cat, tiles, [r[0] for r in results], [r[1] for r in results], n)


def load_tester(text: str) -> Tester:
    """Rebuild a tester from its JSON bundle, checking the stored suite."""
    data = json.loads(text)
    R = parse_algebra_spec(data["algebra"])
    cfg = TesterConfig.from_json(data["config"])
    labels = [parse_label(t, R) for t in data["catalog"]]
    cat = TileCatalog(labels, cfg.epsilon, cfg.tile_dim, cfg.tile_dim + 1, R)
    suite = tester_suite(R, cfg, cat)
    if [rmatrix_emit(A).strip() for A in suite] != data["suite"]:
        raise PreconditionError("stored suite does not match the regenerated suite")
    tiles = []
    for text_t in data["tiles"]:
        parts = []
        for part in text_t.split(" + "):
            body, _, k = part.rpartition(" * ") if " * " in part else (part, "", "1")
            parts.append((parse_label(body, R), int(k)))
        tiles.append(tuple(parts))
    return Tester(parse_parameter(data["parameter"], R), cfg, suite, cat, tiles,
                  [[Fraction(v) for v in row] for row in data["profiles"]],
                  [Fraction(v) for v in data["values"]], data["n"])


@dataclass
class TesterResult:
    value: Fraction
    tile: int
    label: str
    radius: Fraction

    def as_json(self) -> dict:
        return {"value": _r(self.value), "tile": self.tile, "label": self.label, "radius": _r(self.radius)}


def run_tester(T: Tester, estimates) -> TesterResult:
    """Pick the tile whose rank profile is closest to the estimates.

    Distance is the sup over tests of |rk_Q(A) - estimate| / cols(A), the
    scale on which a trim moves ranks.  Ties go to the earlier tile; a best
    radius above kappa is an error.
    """
    est = [Fraction(x) for x in estimates]
    if len(est) != len(T.suite):
        raise PreconditionError(f"expected {len(T.suite)} rank estimates, got {len(est)}")
    widths = [A.cols for A in T.suite]
    best, best_r = None, None
    for j, prof in enumerate(T.profiles):
        r = max((abs(a - b) / w for a, b, w in zip(prof, est, widths)), default=Fraction(0))
        if best_r is None or r < best_r:
            best, best_r = j, r
    if best is None:
        raise PreconditionError("empty catalog")
    if best_r > T.kappa:
        raise NoTileWithinKappa(f"closest tile {best} is at radius {best_r} > kappa {T.kappa}", best_r, best)
    return TesterResult(T.values[best], best, _tile_text(T.tiles[best]), best_r)


def exact_estimates(T: Tester, M: RModule) -> list:
    return [rk(M, A) for A in T.suite]


def noisy_estimates(T: Tester, M: RModule, rng, scale=None) -> list:
    """Exact ranks shifted by seeded noise of size at most delta."""
    d = T.delta if scale is None else scale
    return [v + d * Fraction(int(rng.integers(-4, 5)), 4) for v in exact_estimates(T, M)]


def parse_estimates(text: str) -> list:
    """One rational per line (``#`` comments allowed)."""
    out = []
    for line in text.splitlines():
        s = line.split("#", 1)[0].strip()
        if s:
            try:
                out.append(Fraction(s))
            except ValueError:
                raise ParseError(f"bad rational {s!r}", len(out) + 1, 1) from None
    return out
