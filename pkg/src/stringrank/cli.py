"""Command line interface.

Every command prints one JSON payload (or CSV / a plain table) on stdout.
Errors print a JSON report on stderr and exit with 2 (parse error),
3 (precondition violated) or 4 (budget or explosion guard).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction

from . import __version__
from .errors import BudgetError, NoTileWithinKappa, ParseError, PreconditionError, StringRankError

DEFAULT_SEED = 20240601
_RAT = re.compile(r"^-?\d+/\d+$")


# ---------------------------------------------------------------------------
# loading inputs
# ---------------------------------------------------------------------------

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_algebra(arg: str):
    """A spec file, or ``builtin:gp:<p>`` / ``builtin:kronecker:<p>``."""
    from . import gf
    from .algebra import gelfand_ponomarev, kronecker, parse_algebra_spec
    if arg.startswith("builtin:"):
        parts = arg.split(":")
        if len(parts) != 3 or parts[1] not in ("gp", "kronecker"):
            raise ParseError(f"unknown builtin algebra {arg!r}", 1, 1)
        try:
            F = gf.FiniteField(int(parts[2]))
        except ValueError:
            raise ParseError(f"bad field size in {arg!r}", 1, 1) from None
        return gelfand_ponomarev(F) if parts[1] == "gp" else kronecker(F)
    return parse_algebra_spec(_read(arg))


def load_module(path: str, R):
    from .modules import parse_module_spec
    return parse_module_spec(_read(path), R)


def _r(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _eps(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError:
        raise ParseError(f"bad rational {text!r}", 1, 1) from None


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_validate(a):
    R = load_algebra(a.algebra)
    F = R.field
    return {"ok": True, "name": R.name or "", "field": [F.p, F.k], "q": R.q, "dim": R.dim,
            "basis": [p.name() for p in R.path_basis]}


def cmd_rank(a):
    from .algebra import rmatrix_emit, rmatrix_parse
    from .rank import TestSuite, rk
    R = load_algebra(a.algebra)
    M = load_module(a.module, R)
    mats = [rmatrix_parse(_read(p), R) for p in a.matrices]
    if a.suite:
        mats.extend(TestSuite(R, s=a.suite, seed=a.seed))
    if not mats:
        raise PreconditionError("give matrix files or --suite")
    return {"dim": M.dim,
            "ranks": [{"matrix": rmatrix_emit(A).strip(), "rk": _r(rk(M, A))} for A in mats]}


def cmd_ppdim(a):
    from .pp import pair_gap, parse_formula, parse_pair, pp_count, pp_dim
    R = load_algebra(a.algebra)
    M = load_module(a.module, R)
    text = _read(a.formula)
    if a.pair:
        pair = parse_pair(text, R)
        gap = pair_gap(M, pair)
        return {"dim": M.dim, "t": pair.phi.t, "D": _r(gap), "count": int(gap * M.dim)}
    phi = parse_formula(text, R)
    return {"dim": M.dim, "t": phi.t, "D": _r(pp_dim(M, phi)), "count": pp_count(M, phi)}


def _graph(a):
    from .strings import graph_of_strings, parse_strings_file
    R = load_algebra(a.algebra) if a.algebra else None
    return graph_of_strings(parse_strings_file(_read(a.strings)), R)


def cmd_stats(a):
    from .strings import ball_stats
    G = _graph(a)
    prof = ball_stats(G, a.radius)
    return {"radius": a.radius, "vertices": G.num_vertices, "freqs": prof.as_json()}


def cmd_sample(a):
    from .strings import ball_stats_sampled
    G = _graph(a)
    s = ball_stats_sampled(G, a.radius, a.samples, seed=a.seed, delta=a.delta)
    return {"radius": a.radius, "samples": s.samples, "seed": a.seed, "delta": s.delta,
            "epsilon": round(s.epsilon, 12), "freqs": s.profile.as_json()}


def cmd_tile(a):
    from . import limitlab as L
    from .modules import BandData
    R = load_algebra(a.algebra)
    eps = _eps(a.eps)
    out = []
    jobs = []
    if a.jordan:
        try:
            f = [int(c) for c in json.loads(a.jordan[0])]
            n = int(a.jordan[1])
        except (ValueError, TypeError):
            raise ParseError("--jordan expects '[c0,c1,..]' and a power", 1, 1) from None
        T = L.tile_jordan(f, n, eps, R.field)
        jobs.append((f"jordan f={json.dumps(f, separators=(',', ':'))} n={n}", T,
                     [L.jordan_operator(f, n, R.field)]))
    if a.module:
        M = load_module(a.module, R)
        if M.components is None:
            raise PreconditionError("tiling needs a module given by string/band entries")
        for lab in sorted(set(M.components), key=lambda x: x.sort_key()):
            if isinstance(lab, BandData):
                T = L.tile_band_module(lab, eps, R)
                ops = L.band_module(lab, R).action.values()
            else:
                T = L.tile_string_module(lab, eps, R)
                ops = L.string_module(lab, R).action.values()
            jobs.append((str(lab), T, list(ops)))
    if not jobs:
        raise PreconditionError("give a module file or --jordan")
    for name, T, ops in jobs:
        chk = L.verify_tiling(R.field, T, ops)
        entry = {"component": name, "ok": chk.ok, "pieces": len(T.pieces), "coverage": _r(chk.coverage),
                 "expansion": _r(chk.expansion), "bound": T.bound, "max_piece": chk.max_piece,
                 "meta": T.meta}
        if a.bases:
            entry["bases"] = T.as_json()["pieces"]
        out.append(entry)
    return {"epsilon": _r(eps), "tilings": out}


def cmd_epsiso(a):
    from . import limitlab as L
    R = load_algebra(a.algebra)
    M = load_module(a.left, R)
    N = load_module(a.right, R)
    res = L.epsilon_isomorphism(M, N, _eps(a.eps), R, m=a.block)
    if isinstance(res, L.IsoCertificate):
        chk = L.verify_certificate(res, M, N, R)
        out = res.as_json()
        out["certificate"] = True
        out["verified"] = chk.ok
        if not a.full:
            out["pairs"] = len(res.pairs)
        return out
    out = res.as_json()
    out["certificate"] = False
    return out


def cmd_catalog(a):
    from . import limitlab as L
    R = load_algebra(a.algebra)
    cat = L.build_tile_catalog(R, _eps(a.eps), string_cap=a.string_cap, band_cap=a.band_cap,
                               max_tiles=a.max_tiles)
    if a.out:
        L.save_catalog(cat, a.out)
    return {"epsilon": _r(cat.epsilon), "string_cap": cat.string_cap, "band_cap": cat.band_cap,
            "tiles": cat.index()}


def cmd_param(a):
    from . import params as P
    R = load_algebra(a.algebra)
    M = load_module(a.module, R)
    p = P.parse_parameter(a.parameter, R)
    out = {"parameter": str(p), "dim": M.dim}
    if p.kind == "i":
        res = P.indep_number(M, mode=a.mode, seed=a.seed)
        out.update(value=_r(res.value), indep=res.as_json())
    else:
        out["value"] = _r(P.evaluate(p, M))
    if p.kind == "g" and a.check:
        out["bruteforce"] = P.gen_count_bruteforce(M)
        out["count"] = P.gen_count(M)
    if a.probe is not None:
        rep = P.stability_probe(p, M, _eps(a.probe), trials=a.trials, seed=a.seed, max_power=a.max_power)
        out["stability"] = rep.as_json()
    return out


def cmd_build_tester(a):
    from . import params as P
    R = load_algebra(a.algebra)
    eps = _eps(a.eps)
    cfg = P.TesterConfig(eps, tile_dim=a.tile_dim, suite_seed=a.seed)
    T = P.build_tester(P.parse_parameter(a.parameter, R), eps, R, cfg, jobs=a.jobs)
    return T.as_json()


def cmd_test(a):
    from . import params as P
    T = P.load_tester(_read(a.bundle))
    R = T.catalog.algebra
    if bool(a.module) == bool(a.estimates):
        raise PreconditionError("give exactly one of --module and --estimates")
    if a.module:
        est = P.exact_estimates(T, load_module(a.module, R))
    else:
        est = P.parse_estimates(_read(a.estimates))
    return P.run_tester(T, est).as_json()


COMMANDS = {
    "validate": cmd_validate, "rank": cmd_rank, "ppdim": cmd_ppdim, "stats": cmd_stats,
    "sample": cmd_sample, "tile": cmd_tile, "epsiso": cmd_epsiso, "catalog": cmd_catalog,
    "param": cmd_param, "build-tester": cmd_build_tester, "test": cmd_test,
}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _floatify(x):
    if isinstance(x, dict):
        return {k: _floatify(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_floatify(v) for v in x]
    if isinstance(x, str) and _RAT.match(x):
        return float(Fraction(x))
    return x


def _flatten(x, prefix=""):
    if isinstance(x, dict):
        for k in sorted(x):
            yield from _flatten(x[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(x, list):
        for i, v in enumerate(x):
            yield from _flatten(v, f"{prefix}.{i}" if prefix else str(i))
    else:
        yield prefix, x


def render(payload, fmt: str = "json", as_float: bool = False) -> str:
    if as_float:
        payload = _floatify(payload)
    if fmt == "json":
        return json.dumps(payload, indent=1, sort_keys=True) + "\n"
    rows = list(_flatten(payload))
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["key", "value"])
        wr.writerows(rows)
        return buf.getvalue()
    width = max((len(k) for k, _ in rows), default=0)
    return "".join(f"{k:<{width}}  {v}\n" for k, v in rows)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def common(parser, default):
        # accepted before or after the subcommand; subparsers must not reset them
        d = (lambda v: v) if default else (lambda v: argparse.SUPPRESS)
        parser.add_argument("--format", choices=("json", "csv", "table"), default=d("json"))
        parser.add_argument("--float", action="store_true", default=d(False), help="render rationals as floats")
        parser.add_argument("--seed", type=int, default=d(DEFAULT_SEED))
        parser.add_argument("--jobs", type=int, default=d(1))

    p = argparse.ArgumentParser(prog="stringrank", description="Rank functions and limits of modules over string algebras.")
    p.add_argument("--version", action="version", version=f"stringrank {__version__}")
    p.add_argument("--schema", metavar="COMMAND", nargs="?", const="all",
                   help="print the JSON schema of a command's payload (or all) and exit")
    common(p, True)
    shared = argparse.ArgumentParser(add_help=False)
    common(shared, False)
    sub = p.add_subparsers(dest="command")
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[shared], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("validate", help="check an algebra spec and print its path basis")
    s.add_argument("algebra")

    s = sub.add_parser("rank", help="normalized ranks of R-matrices on a module")
    s.add_argument("algebra")
    s.add_argument("module")
    s.add_argument("matrices", nargs="*")
    s.add_argument("--suite", type=int, metavar="S", help="also use the seeded test suite of size S")

    s = sub.add_parser("ppdim", help="dimension of a pp-formula (or pair gap) on a module")
    s.add_argument("algebra")
    s.add_argument("module")
    s.add_argument("formula")
    s.add_argument("--pair", action="store_true", help="the file holds a phi/psi pair")

    for name, hlp in (("stats", "exact ball-type frequencies"), ("sample", "sampled ball-type frequencies")):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("strings")
        s.add_argument("-r", "--radius", type=int, default=1)
        s.add_argument("--algebra", help="names the quiver vertex of trivial strings")
        if name == "sample":
            s.add_argument("-n", "--samples", type=int, default=1000)
            s.add_argument("--delta", type=float, default=0.05)

    s = sub.add_parser("tile", help="tile each component of a module (or a Jordan block)")
    s.add_argument("algebra")
    s.add_argument("module", nargs="?")
    s.add_argument("--eps", required=True)
    s.add_argument("--jordan", nargs=2, metavar=("F", "N"), help="tile K[t]/f^n, f as '[c0,c1,..]'")
    s.add_argument("--bases", action="store_true", help="include piece bases")

    s = sub.add_parser("epsiso", help="epsilon-isomorphism certificate between string sums")
    s.add_argument("algebra")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--eps", required=True)
    s.add_argument("--block", type=int, help="block length for the last matching phase")
    s.add_argument("--full", action="store_true", help="list all matched segments")

    s = sub.add_parser("catalog", help="enumerate tiles")
    s.add_argument("algebra")
    s.add_argument("--eps", required=True)
    s.add_argument("--string-cap", type=int)
    s.add_argument("--band-cap", type=int, default=0)
    s.add_argument("--max-tiles", type=int, default=5000)
    s.add_argument("--out", help="directory for one spec file per tile plus index.json")

    s = sub.add_parser("param", help="evaluate a module parameter")
    s.add_argument("algebra")
    s.add_argument("module")
    s.add_argument("parameter", help="g, i, weight:<label>, homL:<label>, homR:<label> or rank:<matrix>")
    s.add_argument("--mode", choices=("exact", "randomized"), default="exact")
    s.add_argument("--check", action="store_true", help="cross-check g by brute force")
    s.add_argument("--probe", metavar="DELTA", help="run the stability probe with this trim fraction")
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--max-power", type=int, default=4)

    s = sub.add_parser("build-tester", help="build a parameter tester bundle")
    s.add_argument("algebra")
    s.add_argument("parameter")
    s.add_argument("--eps", required=True)
    s.add_argument("--tile-dim", type=int, default=6)

    s = sub.add_parser("test", help="run a tester bundle on a module or on rank estimates")
    s.add_argument("bundle")
    s.add_argument("--module")
    s.add_argument("--estimates")
    return p


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, ParseError):
        return 2
    if isinstance(exc, BudgetError):
        return 4
    return 3


def main(argv=None) -> int:
    from .schemas import SCHEMAS
    parser = build_parser()
    a = parser.parse_args(argv)
    if a.schema:
        if a.schema != "all" and a.schema not in SCHEMAS:
            parser.error(f"no schema named {a.schema!r}")
        doc = SCHEMAS if a.schema == "all" else SCHEMAS[a.schema]
        sys.stdout.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        return 0
    if not a.command:
        parser.print_help()
        return 2
    try:
        payload = COMMANDS[a.command](a)
    except (StringRankError, OSError) as exc:
        code = 2 if isinstance(exc, OSError) else _exit_code(exc)
        report = {"error": type(exc).__name__, "message": str(exc), "exit_code": code,
                  "line": getattr(exc, "line", None), "column": getattr(exc, "column", None)}
        if isinstance(exc, NoTileWithinKappa):
            report["radius"] = _r(exc.radius)
            report["best"] = exc.best
        sys.stderr.write(json.dumps(report, sort_keys=True) + "\n")
        return code
    sys.stdout.write(render(payload, a.format, a.float))
    return 0


if __name__ == "__main__":
    sys.exit(main())
