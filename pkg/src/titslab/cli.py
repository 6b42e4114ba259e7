"""Command-line interface.

Exit codes: 0 success, 1 a verification suite failed, 2 usage or input
error, 3 a size cap was exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import __version__
from . import modstruct as ms
from . import solomon as sol
from .algebra import Element
from .cache import Cache, default_cache_dir
from .errors import CapExceeded, TitsError
from .exactlinalg import Field
from .idempotents import e_atom, e_expansion
from .setcomp import (
    DEFAULT_CAP,
    _check_cap,
    bits,
    compositions,
    enumerate_sc,
    format_sc,
    interval,
    parse_sc,
    parse_set,
    tits_product,
)
from .verify import CRITERIA, SUITES, format_line, resolve_suite, run_criterion

log = logging.getLogger(__name__)

EXIT_SUITE_FAILED = 1
EXIT_USAGE = 2
EXIT_CAP = 3


class UsageError(Exception):
    pass


# -- helpers -----------------------------------------------------------------------

def _field(args) -> Field:
    try:
        return Field(args.char)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _support(args) -> int:
    if args.support:
        mask = parse_set(args.support)
    else:
        mask = interval(args.n)
    _check_cap(mask.bit_count(), args.cap)
    return mask


def _label(text: str, mask: int):
    P = parse_sc(text)
    if P.support != mask:
        outside = [x for x in bits(P.support & ~mask)]
        if outside:
            raise UsageError(f"elements outside declared support {_set_text(mask)}: {outside}; "
                             "use --support")
        raise UsageError(f"{text} does not cover the declared support {_set_text(mask)}")
    return P


def _set_text(mask: int) -> str:
    return "{" + ",".join(map(str, bits(mask))) + "}"


def _num(c) -> str:
    return str(Fraction(c))


def _element_text(f: Element) -> str:
    items = sorted(f.items(), key=lambda kv: kv[0].sort_key())
    if not items:
        return "0"
    return " ".join(f"{'+' if Fraction(c) > 0 else '-'}{_num(abs(Fraction(c)))} ({format_sc(P)})"
                    for P, c in items)


def _comp_text(q) -> str:
    return "(" + ",".join(map(str, q)) + ")"


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


# -- subcommands ---------------------------------------------------------------------

def cmd_enumerate(args) -> str:
    mask = _support(args)
    labels = enumerate_sc(mask, args.filter, cap=args.cap)
    if args.format == "json":
        return _dump([format_sc(P) for P in labels])
    return "\n".join(format_sc(P) for P in labels)


def cmd_product(args) -> str:
    mask = _support(args)
    P, Q = _label(args.left, mask), _label(args.right, mask)
    R = tits_product(P, Q)
    if args.format == "json":
        return _dump({"left": format_sc(P), "right": format_sc(Q), "product": format_sc(R)})
    return format_sc(R)


def cmd_idempotent(args) -> str:
    mask = _support(args)
    f = e_atom(mask, _field(args))
    return _dump(f.to_json_obj()) if args.format == "json" else _element_text(f)


def cmd_basis(args) -> str:
    mask = _support(args)
    field = _field(args)
    labels = [_label(t, mask) for t in args.labels] or enumerate_sc(mask, cap=args.cap)
    exps = [(Q, e_expansion(Q, field)) for Q in labels]
    if args.format == "json":
        return _dump([{"label": format_sc(Q), "expansion": f.to_json_obj()} for Q, f in exps])
    return "\n".join(f"e({format_sc(Q)}) = {_element_text(f)}" for Q, f in exps)


def cmd_cartan(args, cache: Cache) -> str:
    mask = _support(args)
    mode = "rank" if args.strict_oracle else args.mode
    key = {"support": list(bits(mask)), "mode": mode, "char": args.char, "format": args.format}

    def compute() -> str:
        C = ms.cartan_matrix(mask, mode, _field(args), cap=args.cap, workers=args.workers)
        return _dump(C.to_json_obj()) if args.format == "json" else C.to_text()

    payload, hit = cache.get_or_compute("cartan", key, compute)
    log.info("cartan table %s", "served from cache" if hit else "computed")
    return payload


def cmd_quiver(args) -> str:
    mask = _support(args)
    method = "loewy" if args.strict_oracle else args.method
    Q = ms.ext_quiver(mask, method, _field(args), cap=args.cap)
    return _dump(Q.to_json_obj()) if args.format == "json" else Q.to_dot().rstrip("\n")


def cmd_loewy(args) -> str:
    mask = _support(args)
    field = _field(args)
    if args.label:
        Q = _label(args.label, mask)
        dims = [S.dim for S in ms.module_filtration(Q, field)]
        layers = ms.layer_constituents(Q, field)
        obj = {"module": format_sc(Q), "dims": dims,
               "layers": [{format_sc(T): m for T, m in L.items()} for L in layers]}
        if args.format == "json":
            return _dump({**obj, "dims": [str(d) for d in dims],
                          "layers": [{k: str(v) for k, v in L.items()} for L in obj["layers"]]})
        lines = [f"Λ({format_sc(Q)}): dims {' '.join(map(str, dims))}"]
        for k, L in enumerate(obj["layers"]):
            parts = ", ".join(f"{m}×M({T})" for T, m in L.items())
            lines.append(f"  layer {k}: {parts}")
        return "\n".join(lines)
    dims = [L.dim for L in ms.loewy_filtration(mask, field=field, cap=args.cap)]
    if args.format == "json":
        return _dump({"support": list(bits(mask)), "dims": [str(d) for d in dims]})
    return " ".join(map(str, dims))


def cmd_solomon(args) -> str:
    n = args.n
    _check_cap(n, args.cap)
    field = _field(args)
    what = args.what
    js = args.format == "json"
    if what == "basis":
        rows = [(q, sol.f_idem(q)) for q in compositions(n)]
        if js:
            return _dump([{"q": list(q), "f": {_comp_text(r): _num(c) for r, c in sorted(f.items())}}
                          for q, f in rows])
        return "\n".join(f"f{_comp_text(q)} = " + " ".join(
            f"{_num(c)}·X{_comp_text(r)}" for r, c in sorted(f.items())) for q, f in rows)
    if what == "radical":
        R = sol.solomon_radical(n, field)
        total = len(compositions(n))
        obj = {"n": n, "char": field.char, "dim": R.dim, "codim": total - R.dim}
        return _dump({k: str(v) for k, v in obj.items()}) if js else \
            f"dim B_{n} = {total}, dim rad = {R.dim}, codim = {total - R.dim}"
    if what == "omega":
        om = sol.omega(n)
        items = sorted(om.items(), key=lambda kv: (len(kv[0]), kv[0]))
        if js:
            return _dump({_comp_text(q): _num(c) for q, c in items})
        return " ".join(f"{_num(c)}·X{_comp_text(q)}" for q, c in items)
    if what == "xi":
        table = sol.xi_table(n, cap=args.group_cap)
        if js:
            return _dump({_comp_text(q): [list(w) for w in ws] for q, ws in table.items()})
        return "\n".join(f"Ξ{_comp_text(q)}: " + " ".join("".join(map(str, w)) for w in ws)
                         for q, ws in table.items())
    if what == "cartan":
        mode = "dimension" if args.strict_oracle else args.mode
        ps, rows = sol.solomon_cartan_matrix(n, mode)
        if js:
            return _dump({"labels": [_comp_text(p) for p in ps],
                          "rows": [[str(x) for x in r] for r in rows]})
        names = [_comp_text(p) for p in ps]
        w = max(len(s) for s in names)
        lines = [" " * w + "  " + " ".join(s.rjust(w) for s in names)]
        lines += [a.rjust(w) + "  " + " ".join(str(x).rjust(w) for x in r) for a, r in zip(names, rows)]
        return "\n".join(lines)
    if what == "bidigare":
        rep = sol.bidigare_check(n, cap=args.group_cap)
        obj = {"n": rep.n, "convention": rep.convention, "multiplicative": rep.multiplicative,
               "pairs": str(rep.pairs_checked), "dimension": str(rep.dimension)}
        return _dump(obj) if js else \
            f"n={n}: multiplicative ({rep.convention}), {rep.pairs_checked} pairs, dim {rep.dimension}"
    if what == "loewyfix":
        results = [sol.loewy_fix_check(n, k) for k in range(n + 1)]
        if js:
            return _dump({"n": n, "equal": results})
        return "\n".join(f"k={k}: {'equal' if ok else 'DIFFERENT'}" for k, ok in enumerate(results))
    raise UsageError(f"unknown solomon command {what!r}")


def cmd_verify(args) -> tuple[str, int]:
    try:
        names = [c for s in args.suite for c in resolve_suite(s)]
    except KeyError as exc:
        raise UsageError(f"unknown suite {exc.args[0]!r}") from None
    field = _field(args)
    lines, ok = [], True
    for name in dict.fromkeys(names):
        res = run_criterion(name, args.n_bound, field)
        ok &= res.ok
        lines.append(format_line(name, res))
        if not args.quiet:
            print(lines[-1], flush=True)
    summary = f"{sum(l.startswith('PASS') for l in lines)}/{len(lines)} passed"
    if args.quiet:
        return "\n".join(lines + [summary]), 0 if ok else EXIT_SUITE_FAILED
    return summary, 0 if ok else EXIT_SUITE_FAILED


# -- argument parsing ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n", type=int, help="work over [n] (default 3); for verify, a bound on every size")
    common.add_argument("--support", help="comma separated support set, overriding --n")
    common.add_argument("--char", type=int, default=0, help="0 for the rationals or a prime p")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="refuse supports larger than this")
    common.add_argument("--group-cap", type=int, default=sol.DEFAULT_GROUP_CAP,
                        help="refuse symmetric groups S_n with n larger than this")
    common.add_argument("--cache-dir", help="cache directory (default $TITSLAB_CACHE_DIR)")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--strict-oracle", action="store_true",
                        help="use the slow linear-algebra oracle instead of closed formulas")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="titslab", description="Exact computations in the Solomon-Tits algebra.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("enumerate", parents=[common], help="list set compositions")
    s.add_argument("--filter", choices=["all", "canonical", "star", "dagger"], default="all")
    s.add_argument("--format", choices=["text", "json"], default="text")

    s = sub.add_parser("product", parents=[common], help="Tits product of two set compositions")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--format", choices=["text", "json"], default="text")

    s = sub.add_parser("idempotent", parents=[common], help="the idempotent e_A of the support")
    s.add_argument("--format", choices=["text", "json"], default="text")

    s = sub.add_parser("basis", parents=[common], help="expansions of the basis elements e_Q")
    s.add_argument("labels", nargs="*")
    s.add_argument("--format", choices=["text", "json"], default="text")

    s = sub.add_parser("cartan", parents=[common], help="Cartan matrix")
    s.add_argument("--mode", choices=["formula", "rank"], default="formula")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.add_argument("--workers", type=int, default=1)

    s = sub.add_parser("quiver", parents=[common], help="Ext-quiver")
    s.add_argument("--method", choices=["definition", "loewy", "covers"], default="definition")
    s.add_argument("--format", choices=["dot", "json"], default="dot")

    s = sub.add_parser("loewy", parents=[common], help="Loewy series of the algebra or of one module")
    s.add_argument("--label", help="a set composition Q; show the layers of Λ_Q")
    s.add_argument("--format", choices=["text", "json"], default="text")

    s = sub.add_parser("solomon", parents=[common], help="the descent algebra")
    s.add_argument("what", choices=["basis", "radical", "omega", "xi", "cartan", "bidigare", "loewyfix"])
    s.add_argument("--mode", choices=["dimension", "count"], default="dimension")
    s.add_argument("--format", choices=["text", "json"], default="text")

    s = sub.add_parser("verify", parents=[common], help="run acceptance suites")
    s.add_argument("--suite", action="append",
                   help=f"one of {', '.join(SUITES)} or a criterion c1..c{len(CRITERIA)}; repeatable")
    s.add_argument("--quiet", action="store_true", help="print only at the end")
    return p


def run_command(argv: list[str]) -> tuple[int, str]:
    """Run one invocation; returns (exit code, output)."""
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
        logging.getLogger("titslab").setLevel(logging.INFO if args.verbose else logging.WARNING)
        if args.cap < 1 or args.group_cap < 1:
            raise UsageError("caps must be positive")
        if args.command == "verify":
            args.n_bound = args.n
            args.suite = args.suite or ["all"]
            out, code = cmd_verify(args)
            return code, out
        if args.n is None:
            args.n = 3
        if args.n < 0:
            raise UsageError("--n must be nonnegative")
        if args.command == "cartan":
            directory = None if args.no_cache else (args.cache_dir or default_cache_dir())
            return 0, cmd_cartan(args, Cache(directory))
        handler = {"enumerate": cmd_enumerate, "product": cmd_product, "idempotent": cmd_idempotent,
                   "basis": cmd_basis, "quiver": cmd_quiver, "loewy": cmd_loewy,
                   "solomon": cmd_solomon}[args.command]
        return 0, handler(args)
    except CapExceeded as exc:
        return EXIT_CAP, f"error: {exc}"
    except (UsageError, TitsError) as exc:
        return EXIT_USAGE, f"error: {exc}"


def main(argv: list[str] | None = None) -> int:
    code, out = run_command(sys.argv[1:] if argv is None else argv)
    if out:
        print(out, file=sys.stderr if code in (EXIT_USAGE, EXIT_CAP) else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
